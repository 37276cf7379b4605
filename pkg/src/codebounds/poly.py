"""Exact univariate polynomials over the rationals.

Coefficients are stored low degree first.  Everything here is exact; the
only float entry point is :meth:`Poly.eval_float`.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

Q = Fraction


def as_q(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, float):
        return Fraction(v)
    if isinstance(v, str):
        return Fraction(v.strip())
    return Fraction(v)


class Poly:
    """Immutable polynomial with Fraction coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [as_q(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    @classmethod
    def const(cls, c) -> "Poly":
        return cls([c])

    @classmethod
    def x(cls) -> "Poly":
        return cls([0, 1])

    @classmethod
    def from_roots(cls, roots: Sequence, lead=1) -> "Poly":
        p = cls([lead])
        for r in roots:
            p = p * cls([-as_q(r), 1])
        return p

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lead(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Q(0)

    def __getitem__(self, k: int) -> Fraction:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Q(0)

    def __call__(self, t) -> Fraction:
        t = as_q(t)
        acc = Q(0)
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    def eval_float(self, t: float) -> float:
        acc = 0.0
        for c in reversed(self.coeffs):
            acc = acc * t + float(c)
        return acc

    def __eq__(self, other) -> bool:
        if not isinstance(other, Poly):
            other = Poly([other])
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"Poly([{', '.join(str(c) for c in self.coeffs)}])"

    def __add__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            other = Poly([other])
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(self[i] + other[i] for i in range(n))

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(-c for c in self.coeffs)

    def __sub__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            other = Poly([other])
        return self + (-other)

    def __rsub__(self, other) -> "Poly":
        return Poly([other]) - self

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            s = as_q(other)
            return Poly(c * s for c in self.coeffs)
        if self.is_zero() or other.is_zero():
            return Poly()
        out = [Q(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __truediv__(self, s) -> "Poly":
        s = as_q(s)
        return Poly(c / s for c in self.coeffs)

    def __pow__(self, e: int) -> "Poly":
        out = Poly([1])
        for _ in range(e):
            out = out * self
        return out

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        quot = [Q(0)] * max(len(rem) - dq, 0)
        for k in range(len(rem) - 1, dq - 1, -1):
            f = rem[k] / other.lead
            if f == 0:
                continue
            quot[k - dq] = f
            for j, b in enumerate(other.coeffs):
                rem[k - dq + j] -= f * b
        return Poly(quot), Poly(rem)

    def __floordiv__(self, other: "Poly") -> "Poly":
        return self.divmod(other)[0]

    def __mod__(self, other: "Poly") -> "Poly":
        return self.divmod(other)[1]

    def deriv(self) -> "Poly":
        return Poly(i * c for i, c in enumerate(self.coeffs) if i > 0)

    def monic(self) -> "Poly":
        return self / self.lead if self.coeffs else self

    def compose_affine(self, a, b) -> "Poly":
        """Return p(a*t + b)."""
        lin = Poly([b, a])
        acc = Poly()
        for c in reversed(self.coeffs):
            acc = acc * lin + c
        return acc


def pgcd(a: Poly, b: Poly) -> Poly:
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def squarefree_factors(p: Poly) -> list[Poly]:
    """Yun's algorithm: monic g_1, g_2, ... with p = lead * prod g_m**m."""
    if p.degree <= 0:
        return []
    out = []
    a = p.monic()
    b = a.deriv()
    c = pgcd(a, b)
    w = a // c
    y = b // c
    z = y - w.deriv()
    while w.degree > 0:
        g = pgcd(w, z)
        out.append(g)
        w = w // g
        y = z // g
        z = y - w.deriv()
    return out


def sturm_sequence(p: Poly) -> list[Poly]:
    seq = [p, p.deriv()]
    while not seq[-1].is_zero():
        r = seq[-2] % seq[-1]
        if r.is_zero():
            break
        seq.append(-r)
    return seq


def _sign_changes(seq: Sequence[Poly], t: Fraction) -> int:
    signs = [s for s in (q(t) for q in seq) if s != 0]
    return sum(1 for u, v in zip(signs, signs[1:]) if (u > 0) != (v > 0))


def count_roots(p: Poly, a, b) -> int:
    """Distinct real roots of p in the half-open interval (a, b]."""
    if p.is_zero():
        raise ValueError("zero polynomial has infinitely many roots")
    seq = sturm_sequence(p)
    return _sign_changes(seq, as_q(a)) - _sign_changes(seq, as_q(b))


def isolate_roots(p: Poly, a, b) -> list[tuple[Fraction, Fraction]]:
    """Isolating intervals for the distinct roots of p in the open interval (a, b).

    Each returned (l, r) satisfies a <= l < r <= b and contains exactly one
    root strictly inside; interval endpoints are never roots unless they
    coincide with a or b.
    """
    a, b = as_q(a), as_q(b)
    seq = sturm_sequence(p)

    def count(l, r):
        n = _sign_changes(seq, l) - _sign_changes(seq, r)
        if p(r) == 0:
            n -= 1
        return n

    out = []
    stack = [(a, b)]
    while stack:
        l, r = stack.pop()
        n = count(l, r)
        if n == 0:
            continue
        if n == 1:
            out.append((l, r))
            continue
        m = (l + r) / 2
        if p(m) == 0:
            # a root sits at the midpoint; give it a private interval
            w = (r - l) / 8
            while count(m - w, m + w) != 1 or p(m - w) == 0 or p(m + w) == 0:
                w /= 2
            out.append((m - w, m + w))
            stack.append((l, m - w))
            stack.append((m + w, r))
        else:
            stack.append((l, m))
            stack.append((m, r))
    out.sort()
    return out


def nonpositive_on_interval(p: Poly, a, b) -> tuple[bool, Fraction | None]:
    """Decide exactly whether p <= 0 on [a, b].

    Returns (True, None) or (False, witness) with p(witness) > 0.
    """
    a, b = as_q(a), as_q(b)
    if a > b:
        raise ValueError("empty interval")
    for t in (a, b):
        if p(t) > 0:
            return False, t
    if p.is_zero() or p.degree == 0:
        return True, None
    # even multiplicity factors are squares; only the odd part decides sign
    h = Poly([p.lead])
    for m, g in enumerate(squarefree_factors(p), start=1):
        if m % 2 == 1:
            h = h * g
    # divide out endpoint roots by factors that are positive inside (a, b)
    while h.degree > 0 and h(a) == 0:
        h = h // Poly([-a, 1])
    while h.degree > 0 and h(b) == 0:
        h = h // Poly([b, -1])
    if h.degree <= 0:
        if h.lead > 0:
            return False, _positive_sample(p, a, b)
        return True, None
    if a == b:
        return True, None
    intervals = isolate_roots(h, a, b)
    if not intervals:
        m = (a + b) / 2
        if h(m) < 0:
            return True, None
        return False, _positive_sample(p, a, b)
    return False, _positive_sample(p, a, b)


def _positive_sample(p: Poly, a: Fraction, b: Fraction) -> Fraction:
    # every gap between consecutive distinct roots (and the endpoints) holds an
    # isolating-interval endpoint once the intervals are pulled off a and b
    core = Poly([1])
    for g in squarefree_factors(p):
        core = core * g
    pts = {a, b, (a + b) / 2}
    for l, r in isolate_roots(core, a, b):
        while l == a or r == b:
            m = (l + r) / 2
            if core(m) == 0:
                w = (r - l) / 4
                while count_roots(core, m - w, m + w) != 1 or core(m + w) == 0:
                    w /= 2
                l, r = m - w, m + w
            elif count_roots(core, l, m) == 1:
                r = m
            else:
                l = m
        pts.update((l, r))
    best = max(pts, key=p)
    if p(best) > 0:
        return best
    raise ArithmeticError("no positive sample found")
