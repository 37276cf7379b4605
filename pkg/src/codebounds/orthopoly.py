"""Orthogonal polynomial families used by the bounds.

Krawtchouk (Hamming), Hahn (Johnson), q-Hahn (Hamming/projective geometry
with a point stabilizer) and Gegenbauer (sphere).  All constructions are
exact; the families defined by orthogonality are built with Gram-Schmidt
on the monomial basis.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Callable, Sequence

from .poly import Poly, Q, as_q


class DomainError(ValueError):
    """Parameters outside the domain of a construction."""


FAMILIES = ("krawtchouk", "hahn", "qhahn", "gegenbauer")


def is_prime_power(q: int) -> bool:
    if q < 2:
        return False
    p = 2
    while p * p <= q:
        if q % p == 0:
            while q % p == 0:
                q //= p
            return q == 1
        p += 1
    return True


def qbinomial(n: int, w: int, q: int) -> Fraction:
    """Number of w-subsets (q=1) or w-dim subspaces of F_q^n (q>1)."""
    if q < 1:
        raise DomainError(f"q must be >= 1, got {q}")
    if not 0 <= w <= n:
        raise DomainError(f"need 0 <= w <= n, got n={n}, w={w}")
    if q == 1:
        return Q(comb(n, w))
    num = den = 1
    for i in range(w):
        num *= q ** (n - i) - 1
        den *= q ** (w - i) - 1
    return Q(num, den)


def _qb(n: int, w: int, q: int) -> Fraction:
    # zero outside the range instead of raising; used for counting sums
    if w < 0 or n < 0 or w > n:
        return Q(0)
    return qbinomial(n, w, q)


def bracket(x: int, q: int) -> Fraction:
    """The q-number [x] = q^(1-x) [x choose 1]; equals x when q = 1."""
    if x < 0:
        raise DomainError("bracket needs x >= 0")
    if q == 1:
        return Q(x)
    return (Q(1, q**x) - 1) / (Q(1, q) - 1)


def weight_w(n: int, q: int, i: int, j: int, u: int) -> Fraction:
    """Given x of size i, count y of size j with |x meet y| = i - u."""
    if u < 0 or u > i or j - i + u < 0 or j - i + u > n - i:
        return Q(0)
    return _qb(i, u, q) * _qb(n - i, j - i + u, q) * q ** (u * (j - i + u))


def _binom_poly(i: int) -> Poly:
    """binom(t, i) as a polynomial in t."""
    p = Poly([1])
    for r in range(i):
        p = p * Poly([-r, 1])
    f = 1
    for r in range(2, i + 1):
        f *= r
    return p / f


def krawtchouk(n: int, q: int, k: int) -> Poly:
    if q < 2:
        raise DomainError("Krawtchouk polynomials need q >= 2")
    if not 0 <= k <= n:
        raise DomainError(f"need 0 <= k <= n, got n={n}, k={k}")
    out = Poly()
    for i in range(k + 1):
        # binom(n - t, k - i) = binom(s, k-i) with s = n - t
        b2 = _binom_poly(k - i).compose_affine(-1, n)
        out = out + _binom_poly(i) * b2 * ((-1) ** i * (q - 1) ** (k - i))
    return out


def _gram_schmidt(inner: Callable[[Poly, Poly], Fraction], nlevels: int,
                  norm_at: Fraction) -> list[Poly]:
    """Orthogonalize 1, t, t^2, ... and scale so that p_k(norm_at) = 1."""
    basis: list[Poly] = []
    norms: list[Fraction] = []
    for k in range(nlevels):
        p = Poly([0] * k + [1])
        for b, nb in zip(basis, norms):
            p = p - b * (inner(p, b) / nb)
        nrm = inner(p, p)
        if nrm == 0:
            raise DomainError(f"weight system too small for degree {k}")
        basis.append(p)
        norms.append(nrm)
    out = []
    for p in basis:
        v = p(norm_at)
        if v == 0:
            raise DomainError("normalization point is a root")
        out.append(p / v)
    return out


def _discrete_inner(points: Sequence[Fraction], weights: Sequence[Fraction]):
    def inner(a: Poly, b: Poly) -> Fraction:
        return sum((w * a(x) * b(x) for x, w in zip(points, weights)), Q(0))
    return inner


def hahn_family(n: int, w: int) -> list[Poly]:
    """Q_0..Q_L for the Johnson space J(n, w), L = min(w, n - w)."""
    if not 0 <= w <= n:
        raise DomainError(f"need 0 <= w <= n, got n={n}, w={w}")
    top = min(w, n - w)
    pts = [Q(i) for i in range(top + 1)]
    wts = [Q(comb(w, i) * comb(n - w, i)) for i in range(top + 1)]
    return _gram_schmidt(_discrete_inner(pts, wts), top + 1, Q(0))


def hahn_johnson(n: int, w: int, k: int) -> Poly:
    fam = hahn_family(n, w)
    if not 0 <= k < len(fam):
        raise DomainError(f"level {k} exceeds min(w, n-w) = {len(fam) - 1}")
    return fam[k]


def _check_qhahn(n: int, q: int, i: int, j: int) -> None:
    if not 0 <= i <= j <= n:
        raise DomainError(f"need 0 <= i <= j <= n, got n={n}, i={i}, j={j}")
    if q != 1 and not is_prime_power(q):
        raise DomainError(f"q must be 1 or a prime power, got {q}")


def qhahn_family(n: int, q: int, i: int, j: int) -> list[Poly]:
    """q-Hahn polynomials for (n, i, j) as polynomials in the variable [x].

    Levels run 0..min(i, n - j).  Evaluate at an integer x with
    :func:`qhahn_eval`.
    """
    _check_qhahn(n, q, i, j)
    top = min(i, n - j)
    pts = [bracket(u, q) for u in range(top + 1)]
    wts = [weight_w(n, q, i, j, u) for u in range(top + 1)]
    return _gram_schmidt(_discrete_inner(pts, wts), top + 1, Q(0))


def qhahn(n: int, q: int, i: int, j: int, k: int) -> Poly:
    fam = qhahn_family(n, q, i, j)
    if not 0 <= k < len(fam):
        raise DomainError(f"level {k} exceeds min(i, n-j) = {len(fam) - 1}")
    return fam[k]


def qhahn_eval(p: Poly, x: int, q: int) -> Fraction:
    return p(bracket(x, q))


def gegenbauer_moments(n: int, top: int) -> list[Fraction]:
    """Moments of (1-t^2)^((n-3)/2) on [-1, 1], divided by the zeroth one."""
    m = [Q(0)] * (top + 1)
    m[0] = Q(1)
    for s in range(1, top // 2 + 1):
        m[2 * s] = m[2 * s - 2] * Q(2 * s - 1, n + 2 * s - 2)
    return m


def gegenbauer_family(n: int, top: int) -> list[Poly]:
    """P_0^n .. P_top^n with P_k^n(1) = 1.

    n = 2 (Chebyshev weight) is accepted because the sphere zonal matrices
    need P_k^{n-1} for n = 3.
    """
    if n < 2:
        raise DomainError(f"Gegenbauer family needs n >= 2, got {n}")
    if top < 0:
        raise DomainError("negative degree")
    mom = gegenbauer_moments(n, 2 * top)

    def inner(a: Poly, b: Poly) -> Fraction:
        acc = Q(0)
        for i, ca in enumerate(a.coeffs):
            if ca == 0:
                continue
            for j, cb in enumerate(b.coeffs):
                if (i + j) % 2 == 0:
                    acc += ca * cb * mom[i + j]
        return acc

    return _gram_schmidt(inner, top + 1, Q(1))


def gegenbauer(n: int, k: int) -> Poly:
    return gegenbauer_family(n, k)[k]


def jacobi_scale(n: int, k: int) -> Fraction:
    """binom(k + a, k) with a = (n-3)/2: the value at 1 of the Jacobi-normalized P_k^n."""
    a = Q(n - 3, 2)
    out = Q(1)
    for r in range(1, k + 1):
        out = out * (a + r) / r
    return out


@dataclass(frozen=True)
class FamilyParams:
    family: str
    n: int
    q: int = 2
    i: int | None = None
    j: int | None = None
    w: int | None = None
    # gegenbauer only: "unit" gives P_k(1) = 1, "jacobi" gives P_k(1) = binom(k + (n-3)/2, k)
    normalization: str = "unit"

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise DomainError(f"unknown family {self.family!r}")
        if self.n < 1:
            raise DomainError("n must be positive")
        if self.family == "krawtchouk" and self.q < 2:
            raise DomainError("Krawtchouk requires q >= 2")
        if self.family == "gegenbauer" and self.n < 2:
            raise DomainError("Gegenbauer requires n >= 2")
        if self.family == "qhahn":
            if self.i is None or self.j is None:
                raise DomainError("qhahn needs i and j")
            _check_qhahn(self.n, self.q, self.i, self.j)
        if self.family == "hahn" and self.w is None:
            raise DomainError("hahn needs w")
        if self.normalization not in ("unit", "jacobi"):
            raise DomainError(f"unknown normalization {self.normalization!r}")

    def max_level(self, cap: int | None = None) -> int:
        if self.family == "krawtchouk":
            return self.n
        if self.family == "hahn":
            return min(self.w, self.n - self.w)
        if self.family == "qhahn":
            return min(self.i, self.n - self.j)
        if cap is None:
            raise DomainError("Gegenbauer family is infinite; give a degree cap")
        return cap

    def basis(self, top: int | None = None) -> list[Poly]:
        if top is None:
            top = self.max_level()
        if self.family == "krawtchouk":
            return [krawtchouk(self.n, self.q, k) for k in range(top + 1)]
        if self.family == "hahn":
            return hahn_family(self.n, self.w)[: top + 1]
        if self.family == "qhahn":
            return qhahn_family(self.n, self.q, self.i, self.j)[: top + 1]
        fam = gegenbauer_family(self.n, top)
        if self.normalization == "jacobi":
            fam = [p * jacobi_scale(self.n, k) for k, p in enumerate(fam)]
        return fam


def expand_in_family(p: Poly, fam: FamilyParams) -> list[Fraction]:
    """Coefficients f_k with p = sum f_k fam_k (exact)."""
    d = max(p.degree, 0)
    if fam.family != "gegenbauer" and d > fam.max_level():
        raise DomainError(f"degree {d} exceeds the family's top level {fam.max_level()}")
    basis = fam.basis(d)
    return expand_in_basis(p, basis[: d + 1])


def expand_in_basis(p: Poly, basis: Sequence[Poly]) -> list[Fraction]:
    coeffs = [Q(0)] * len(basis)
    rest = p
    for k in range(len(basis) - 1, -1, -1):
        b = basis[k]
        if b.degree != k:
            raise DomainError(f"basis element {k} has degree {b.degree}")
        f = rest[k] / b.lead
        coeffs[k] = f
        if f:
            rest = rest - b * f
    if not rest.is_zero():
        raise DomainError("polynomial degree exceeds the basis")
    return coeffs


def recombine(coeffs: Sequence, basis: Sequence[Poly]) -> Poly:
    out = Poly()
    for f, b in zip(coeffs, basis):
        out = out + b * as_q(f)
    return out
