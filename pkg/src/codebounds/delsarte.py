"""Delsarte linear programming bound for codes.

Finite spaces (q-ary Hamming, Johnson) are solved exactly with the rational
simplex; the dual optimum is the polynomial certificate.  For the unit
sphere the program is sampled on a grid, and the resulting polynomial is
repaired and verified exactly before any bound is reported.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .orthopoly import DomainError, gegenbauer_family, hahn_family, jacobi_scale, krawtchouk
from .poly import Poly, Q, as_q, isolate_roots, nonpositive_on_interval, squarefree_factors
from .solvers.simplex import GE, LE, LpProblem, LpResult, simplex_solve

KINDS = ("hamming", "johnson", "sphere")
DEFAULT_SPHERE_DEGREE = 10
DEFAULT_GRID = 200


@dataclass(frozen=True)
class SpaceSpec:
    """A metric space plus the minimum distance (or maximal inner product).

    hamming: words of length n over a q-letter alphabet, delta in [1, n].
    johnson: w-subsets of an n-set, distance |x symmetric-difference y| (even).
    sphere:  unit sphere in R^n, codes with pairwise inner products <= max_cos.
    """

    kind: str
    n: int
    q: int = 2
    w: int | None = None
    delta: int | None = None
    max_cos: Fraction | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"unknown space kind {self.kind!r}")
        if self.n < 1:
            raise DomainError("n must be positive")
        if self.kind == "hamming":
            if self.q < 2:
                raise DomainError("Hamming space needs q >= 2")
            if self.delta is None or self.delta < 1:
                raise DomainError("Hamming space needs delta >= 1")
        elif self.kind == "johnson":
            if self.w is None or not 0 <= self.w <= self.n:
                raise DomainError("Johnson space needs 0 <= w <= n")
            if self.delta is None or self.delta < 2 or self.delta % 2:
                raise DomainError("Johnson distances are even; need even delta >= 2")
        else:
            if self.n < 2:
                raise DomainError("sphere needs n >= 2")
            if self.max_cos is None:
                raise DomainError("sphere needs max_cos")
            s = as_q(self.max_cos)
            object.__setattr__(self, "max_cos", s)
            if not -1 <= s < 1:
                raise DomainError("max_cos must lie in [-1, 1)")

    @classmethod
    def hamming(cls, n: int, delta: int, q: int = 2) -> "SpaceSpec":
        return cls("hamming", n, q=q, delta=delta)

    @classmethod
    def johnson(cls, n: int, w: int, delta: int) -> "SpaceSpec":
        return cls("johnson", n, w=w, delta=delta)

    @classmethod
    def sphere(cls, n: int, max_cos) -> "SpaceSpec":
        return cls("sphere", n, max_cos=as_q(max_cos))

    @property
    def finite(self) -> bool:
        return self.kind != "sphere"

    def diameter(self) -> int:
        if self.kind == "hamming":
            return self.n
        if self.kind == "johnson":
            return 2 * min(self.w, self.n - self.w)
        raise DomainError("sphere has no integer diameter")

    def max_level(self) -> int:
        if self.kind == "hamming":
            return self.n
        if self.kind == "johnson":
            return min(self.w, self.n - self.w)
        raise DomainError("sphere family is unbounded")

    def distances(self) -> list[int]:
        """D_{>= delta}: the admissible nonzero distances."""
        if self.kind == "hamming":
            return list(range(self.delta, self.n + 1))
        return [d for d in range(2, self.diameter() + 1, 2) if d >= self.delta]

    def point(self, d: int) -> int:
        """Polynomial variable for distance d: d itself (Hamming) or |x meet y| (Johnson)."""
        return d if self.kind == "hamming" else self.w - d // 2

    def zero_point(self):
        if self.kind == "sphere":
            return Q(1)
        return self.point(0)

    def basis(self, degree: int) -> list[Poly]:
        if self.kind == "hamming":
            return [krawtchouk(self.n, self.q, k) for k in range(degree + 1)]
        if self.kind == "johnson":
            # Q_k is a polynomial in |x meet y|/... distance/2 = w - i
            return [p.compose_affine(-1, self.w) for p in hahn_family(self.n, self.w)[: degree + 1]]
        return gegenbauer_family(self.n, degree)

    def basis_name(self) -> str:
        return {"hamming": "krawtchouk", "johnson": "hahn", "sphere": "gegenbauer"}[self.kind]

    def to_json(self) -> dict:
        if self.kind == "hamming":
            return {"type": "hamming", "n": self.n, "q": self.q, "delta": self.delta}
        if self.kind == "johnson":
            return {"type": "johnson", "n": self.n, "w": self.w, "delta": self.delta}
        return {"type": "sphere", "n": self.n, "max_cos": _qstr(self.max_cos)}

    @classmethod
    def from_json(cls, d: dict) -> "SpaceSpec":
        t = d.get("type")
        if t == "hamming":
            return cls.hamming(int(d["n"]), int(d["delta"]), int(d.get("q", 2)))
        if t == "johnson":
            return cls.johnson(int(d["n"]), int(d["w"]), int(d["delta"]))
        if t == "sphere":
            return cls.sphere(int(d["n"]), Fraction(str(d["max_cos"])))
        raise DomainError(f"unknown space type {t!r}")


def _qstr(v: Fraction) -> str:
    v = as_q(v)
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


@dataclass
class LpCertificate:
    """F = sum f_k P_k in the space's basis; proves |C| <= F(zero point) / f_0."""

    space: SpaceSpec
    coeffs: list[Fraction]
    claimed_bound: Fraction | None = None
    normalization: str = "unit"  # sphere only: "unit" or "jacobi"

    def basis(self) -> list[Poly]:
        b = self.space.basis(len(self.coeffs) - 1)
        if self.space.kind == "sphere" and self.normalization == "jacobi":
            b = [p * jacobi_scale(self.space.n, k) for k, p in enumerate(b)]
        return b

    def polynomial(self) -> Poly:
        out = Poly()
        for f, p in zip(self.coeffs, self.basis()):
            out = out + p * f
        return out

    def bound(self) -> Fraction:
        return self.polynomial()(self.space.zero_point()) / self.coeffs[0]


@dataclass
class Verdict:
    valid: bool
    bound: Fraction | None = None
    reason: str = ""
    witness: object = None

    def __bool__(self) -> bool:
        return self.valid


# --- building and solving ---------------------------------------------------

def build_lp(space: SpaceSpec, degree_cap: int | None = None, grid: int = DEFAULT_GRID) -> LpProblem:
    """The LP whose optimum is the Delsarte bound (finite) or its sampled version (sphere).

    Finite: maximize 1 + sum x_d over d in D_{>=delta}, x >= 0, with
    P_k(0) + sum_d x_d P_k(point(d)) >= 0 for k = 1..degree_cap.
    Sphere: minimize 1 + sum_k f_k P_k(1) over f >= 0 with
    1 + sum_k f_k P_k(t) <= 0 at every grid point t of [-1, max_cos].
    """
    if space.kind == "sphere":
        return _build_sphere_lp(space, degree_cap or DEFAULT_SPHERE_DEGREE, grid)
    top = space.max_level()
    d = top if degree_cap is None else degree_cap
    if not 0 <= d <= top:
        raise DomainError(f"degree cap {d} outside [0, {top}]")
    D = space.distances()
    basis = space.basis(d)
    z = space.zero_point()
    names = [f"x_{dist}" for dist in D]
    lp = LpProblem(names, [Q(1)] * len(D), maximize=True, offset=Q(1))
    for k in range(1, d + 1):
        pk = basis[k]
        lp.add([pk(space.point(dist)) for dist in D], GE, -pk(z))
    return lp


def chebyshev_grid(a: Fraction, b: Fraction, count: int) -> list[Fraction]:
    """Chebyshev-Lobatto points of [a, b] rounded to rationals (endpoints kept exact)."""
    if a == b or count <= 1:
        return [a]
    pts = {a, b}
    for s in range(1, count - 1):
        c = (1 - math.cos(math.pi * s / (count - 1))) / 2
        pts.add(a + (b - a) * Fraction(c).limit_denominator(10**6))
    return sorted(pts)


def _build_sphere_lp(space: SpaceSpec, degree: int, grid: int) -> LpProblem:
    basis = space.basis(degree)
    pts = chebyshev_grid(Q(-1), space.max_cos, grid)
    names = [f"f_{k}" for k in range(1, degree + 1)]
    lp = LpProblem(names, [basis[k](Q(1)) for k in range(1, degree + 1)], maximize=False, offset=Q(1))
    for t in pts:
        lp.add([basis[k](t) for k in range(1, degree + 1)], LE, -1)
    return lp


def solve_lp_exact(p: LpProblem) -> LpResult:
    """Exact optimum with primal and dual vectors; status tells infeasible/unbounded apart."""
    return simplex_solve(p)


def certificate_from_dual(space: SpaceSpec, p: LpProblem, res: LpResult) -> LpCertificate:
    """Turn the finite-space dual optimum into the polynomial certificate.

    Row k reads sum_d x_d P_k(d) >= -P_k(0); its dual multiplier y_k <= 0 and
    f_k = -y_k.  With f_0 = 1 the bound F(0)/f_0 equals the LP optimum.
    """
    if res.status != "optimal":
        raise ValueError(f"no certificate for status {res.status}")
    coeffs = [Q(1)] + [-y for y in res.duals]
    return LpCertificate(space, coeffs, res.value)


@dataclass
class LpBound:
    space: SpaceSpec
    value: Fraction
    certificate: LpCertificate | None
    trivial: str = ""
    lp: LpProblem | None = None
    result: LpResult | None = None
    diagnostics: dict = field(default_factory=dict)

    def floor(self) -> int:
        return math.floor(self.value)


def lp_bound(space: SpaceSpec, degree_cap: int | None = None, grid: int = DEFAULT_GRID) -> LpBound:
    if space.kind == "sphere":
        return sphere_lp_bound(space, degree_cap or DEFAULT_SPHERE_DEGREE, grid)
    if not space.distances():
        # delta beyond the diameter: a single point
        return LpBound(space, Q(1), LpCertificate(space, [Q(1)], Q(1)), trivial="delta exceeds diameter")
    p = build_lp(space, degree_cap)
    res = solve_lp_exact(p)
    if res.status != "optimal":
        raise ArithmeticError(f"Delsarte LP ended with status {res.status}")
    cert = certificate_from_dual(space, p, res)
    verdict = verify_certificate(cert)
    if not verdict.valid or verdict.bound != res.value:
        raise ArithmeticError(f"dual certificate failed verification: {verdict.reason}")
    return LpBound(space, res.value, cert, lp=p, result=res,
                   diagnostics={"pivots": res.pivots, "variables": len(p.variables),
                                "constraints": len(p.constraints)})


# --- certificates -------------------------------------------------------------

def verify_certificate(cert: LpCertificate, check_points=None) -> Verdict:
    """Exact check of a polynomial certificate.

    Requires f_0 > 0, f_k >= 0 and F <= 0 on D_{>=delta} (every point for
    finite spaces, the whole interval [-1, max_cos] by Sturm sequences for the
    sphere).  Extra check_points must also satisfy F <= 0.  If a claimed bound
    is present it has to equal F(zero point)/f_0.
    """
    space = cert.space
    f = [as_q(v) for v in cert.coeffs]
    if not f:
        return Verdict(False, reason="empty coefficient list")
    if f[0] <= 0:
        return Verdict(False, reason="f_0 must be positive", witness=0)
    for k, v in enumerate(f):
        if v < 0:
            return Verdict(False, reason=f"negative coefficient f_{k}", witness=k)
    if space.finite and len(f) - 1 > space.max_level():
        return Verdict(False, reason="degree exceeds the family's top level")
    F = LpCertificate(space, f, None, cert.normalization).polynomial()
    if space.finite:
        for dist in space.distances():
            if F(space.point(dist)) > 0:
                return Verdict(False, reason=f"F > 0 at distance {dist}", witness=dist)
    else:
        ok, wit = nonpositive_on_interval(F, Q(-1), space.max_cos)
        if not ok:
            return Verdict(False, reason=f"F > 0 at t = {wit}", witness=wit)
    for t in check_points or ():
        t = as_q(t)
        if F(t) > 0:
            return Verdict(False, reason=f"F > 0 at check point {t}", witness=t)
    bound = F(space.zero_point()) / f[0]
    if cert.claimed_bound is not None and as_q(cert.claimed_bound) != bound:
        return Verdict(False, bound, reason=f"claimed bound {cert.claimed_bound} differs from certified {bound}")
    return Verdict(True, bound)


# --- sphere -------------------------------------------------------------------

def _local_maxima(F: Poly, a: Fraction, b: Fraction) -> list[Fraction]:
    """Endpoints and approximate critical points of F in [a, b], as rationals."""
    out = [a, b]
    dF = F.deriv()
    if dF.degree > 0:
        for r in np.roots([float(c) for c in reversed(dF.coeffs)]):
            if abs(r.imag) < 1e-9 and float(a) < r.real < float(b):
                out.append(Fraction(r.real).limit_denominator(10**12))
    return out


def _upper_max(F: Poly, a: Fraction, b: Fraction) -> Fraction:
    """A rational M with F <= M on [a, b], checked exactly."""
    cands = _local_maxima(F, a, b) + list(chebyshev_grid(a, b, 64))
    top = max(F(t) for t in cands)
    eps = Fraction(1, 10**12) * max(1, abs(top))
    for _ in range(60):
        M = top + eps
        if nonpositive_on_interval(F - Poly([M]), a, b)[0]:
            return M
        eps *= 4
    raise ArithmeticError("could not bound the polynomial on the interval")


def _solve_sampled_float(p: LpProblem) -> list[Fraction]:
    """Float solve of the sampled sphere LP; the answer is only a starting guess."""
    from scipy.optimize import linprog

    A = np.array([[float(v) for v in row] for row, _, _ in p.constraints])
    b = np.array([float(rhs) for _, _, rhs in p.constraints])
    c = np.array([float(v) for v in p.objective])
    res = linprog(c, A_ub=A, b_ub=b, bounds=[(0, None)] * len(c), method="highs")
    if res.status != 0:
        raise ArithmeticError(f"sampled sphere LP failed: {res.message}")
    return [Fraction(max(v, 0.0)).limit_denominator(10**12) for v in res.x]


def sphere_lp_bound(space: SpaceSpec, degree: int = DEFAULT_SPHERE_DEGREE, grid: int = DEFAULT_GRID,
                    refine: int = 8) -> LpBound:
    """Sampled LP, then an exact repair: F' = F - M with M >= max F on [-1, s].

    F' has f_0' = 1 - M; the bound F'(1)/f_0' is only reported after the
    Sturm-sequence verification of the certificate passes.  Before the
    repair, a few rounds add the current maximizers of F to the grid.
    """
    p = build_lp(space, degree, grid)
    basis = space.basis(degree)
    for _ in range(refine):
        x = _solve_sampled_float(p)
        F = LpCertificate(space, [Q(1)] + x).polynomial()
        added = 0
        for t in _local_maxima(F, Q(-1), space.max_cos):
            if F(t) > 0:
                p.add([basis[k](t) for k in range(1, degree + 1)], LE, -1)
                added += 1
        if not added:
            break
    x = _solve_sampled_float(p)
    f = [Q(1)] + x
    F = LpCertificate(space, f).polynomial()
    M = _upper_max(F, Q(-1), space.max_cos)
    if M > 0:
        if M >= 1:
            raise ArithmeticError("sampled solution too far from feasible to repair")
        f = [f[0] - M] + f[1:]
    cert = LpCertificate(space, f)
    verdict = verify_certificate(cert)
    if not verdict.valid:
        raise ArithmeticError(f"repaired sphere certificate failed: {verdict.reason}")
    cert.claimed_bound = verdict.bound
    return LpBound(space, verdict.bound, cert, lp=p,
                   diagnostics={"sampled_value": float(p.value(x)), "repair_shift": float(max(M, Q(0))),
                                "grid": len(p.constraints), "degree": degree})


# --- SOS check on an interval --------------------------------------------------

@dataclass
class SosCertificate:
    """-F = sum d_i p_i^2 + (t - a)(b - t) sum e_j r_j^2."""

    a: Fraction
    b: Fraction
    squares: list[tuple[Fraction, Poly]]
    weighted: list[tuple[Fraction, Poly]]

    def total(self) -> Poly:
        w = Poly([-self.a, 1]) * Poly([self.b, -1])
        out = Poly()
        for d, p in self.squares:
            out = out + p * p * d
        acc = Poly()
        for e, r in self.weighted:
            acc = acc + r * r * e
        return out + w * acc


@dataclass
class SosVerdict:
    status: str  # "valid", "invalid", "inconclusive"
    certificate: SosCertificate | None = None
    reason: str = ""
    witness: Fraction | None = None


def _scale_terms(terms, poly: Poly, factor: Fraction = Q(1)):
    return [(d * factor, p * poly) for d, p in terms]


def sos_interval_check(F: Poly, a, b, tol: float = 1e-9) -> SosVerdict:
    """Write -F = Q + Q' (t - a)(b - t) with Q, Q' sums of squares, exactly.

    Square factors and endpoint roots are split off exactly; the strictly
    positive remainder goes to a small Gram-matrix SDP whose solution is
    rounded and re-verified in rational arithmetic.
    """
    a, b = as_q(a), as_q(b)
    if not a < b:
        raise DomainError("need a < b")
    ok, wit = nonpositive_on_interval(F, a, b)
    if not ok:
        return SosVerdict("invalid", reason=f"F > 0 at {wit}", witness=wit)
    G = -F
    if G.is_zero():
        return SosVerdict("valid", SosCertificate(a, b, [], []))

    # G = lead * prod g_m^m: S^2 * R with R square-free
    S, R = Poly([1]), Poly([G.lead])
    for m, g in enumerate(squarefree_factors(G), start=1):
        S = S * g ** (m // 2)
        if m % 2:
            R = R * g
    # endpoint roots of R, peeled off one at a time
    peel = []
    for end in (a, b):
        while R.degree > 0 and R(end) == 0:
            R = R // Poly([-end, 1])
            peel.append(end)
    if R.degree > 0 and isolate_roots(R, a, b):
        return SosVerdict("inconclusive", reason="remainder has interior roots")
    sign = Q(1)
    for end in peel:
        if end == b:
            sign = -sign  # (t - b) = -(b - t)
    R = R * sign
    if R((a + b) / 2) <= 0:
        return SosVerdict("inconclusive", reason="positive remainder has the wrong sign")

    base = _gram_sos(R, a, b, tol)
    if base is None:
        return SosVerdict("inconclusive", reason="Gram matrix rounding did not certify")
    squares, weighted = base
    width = b - a
    for end in reversed(peel):
        lin = Poly([-a, 1]) if end == a else Poly([b, -1])
        # lin * X = ((lin)^2 + w) X / (b - a)
        w = Poly([-a, 1]) * Poly([b, -1])
        squares, weighted = (
            _scale_terms(squares, lin, 1 / width) + _scale_terms(weighted, w, 1 / width),
            [(d / width, p) for d, p in squares] + _scale_terms(weighted, lin, 1 / width),
        )
    squares = _scale_terms(squares, S)
    weighted = _scale_terms(weighted, S)
    cert = SosCertificate(a, b, squares, weighted)
    if cert.total() != G:
        return SosVerdict("inconclusive", reason="reassembled certificate does not match")
    return SosVerdict("valid", cert)


def _gram_sos(R: Poly, a: Fraction, b: Fraction, tol: float):
    """Numerical Gram matrices for R = v'G1 v + w v'G2 v, rounded and repaired exactly."""
    from .exact import ldl_sos
    from .solvers.ipm import ipm_solve
    from .solvers.sdp import SdpProblem

    deg = max(R.degree, 0)
    d1 = (deg + 1) // 2
    d2 = d1 - 1
    w = Poly([-a, 1]) * Poly([b, -1])
    if d2 < 0:
        # constant remainder
        return [(R[0], Poly([1]))], []
    top = 2 * d1
    # coefficient p: sum over ordered (i, j) with i+j = p of G1_ij, plus w_r G2_ij with i+j+r = p
    # Y-form: F_p . Y = c_p with Y = (G1, G2); objective zero keeps Y central
    n1, n2 = d1 + 1, d2 + 1
    entries = []
    for pdeg in range(top + 1):
        for i in range(n1):
            j = pdeg - i
            if i <= j < n1:
                entries.append((pdeg + 1, 0, i, j, 1.0))
        for i in range(n2):
            for j in range(i, n2):
                for r, wr in enumerate(w.coeffs):
                    if i + j + r == pdeg and wr != 0:
                        entries.append((pdeg + 1, 1, i, j, float(wr)))
    c = [float(R[pdeg]) for pdeg in range(top + 1)]
    prob = SdpProblem([n1, n2], c, entries)
    sol = ipm_solve(prob, tol=tol, max_iter=200)
    if sol.status != "optimal":
        return None
    for denom in (10**6, 10**9, 10**12):
        G1 = [[Fraction(float(sol.Y[0][i][j])).limit_denominator(denom) for j in range(n1)] for i in range(n1)]
        G2 = [[Fraction(float(sol.Y[1][i][j])).limit_denominator(denom) for j in range(n2)] for i in range(n2)]
        for i in range(n1):
            for j in range(i):
                G1[i][j] = G1[j][i]
        for i in range(n2):
            for j in range(i):
                G2[i][j] = G2[j][i]
        # exact projection: fix each coefficient on G1's anti-diagonal
        for pdeg in range(top + 1):
            cur = Q(0)
            for i in range(n1):
                j = pdeg - i
                if 0 <= j < n1:
                    cur += G1[i][j]
            for i in range(n2):
                for j in range(n2):
                    r = pdeg - i - j
                    if 0 <= r < len(w.coeffs):
                        cur += w.coeffs[r] * G2[i][j]
            res = R[pdeg] - cur
            if res:
                i, j = pdeg // 2, pdeg - pdeg // 2
                if i == j:
                    G1[i][i] += res
                else:
                    G1[i][j] += res / 2
                    G1[j][i] += res / 2
        try:
            t1, t2 = ldl_sos(G1), ldl_sos(G2)
        except ValueError:
            continue
        squares = [(d, Poly(vec)) for d, vec in t1]
        weighted = [(d, Poly(vec)) for d, vec in t2]
        return squares, weighted
    return None
