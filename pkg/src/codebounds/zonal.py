"""Zonal matrices for the point stabilizer in Hamming space, projective
geometry and the unit sphere.

Hamming/projective matrices are exact; sphere matrices are float.  Sphere
normalization constants lambda_{k,i} are fixed to 1, which only changes the
matrices by a diagonal congruence.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import comb

import numpy as np

from .orthopoly import (DomainError, _qb, bracket, gegenbauer_family,
                        qbinomial, qhahn_family)
from .poly import Poly, Q

GRAM_TOL = 1e-12


@lru_cache(maxsize=None)
def _qhahn_cached(n: int, q: int, i: int, j: int) -> tuple[Poly, ...]:
    return tuple(qhahn_family(n, q, i, j))


def space_size(n: int, q: int) -> Fraction:
    """|X|: 2^n for q = 1, number of subspaces of F_q^n otherwise."""
    return sum((qbinomial(n, w, q) for w in range(n + 1)), Q(0))


@dataclass(frozen=True)
class HammingZonalFamily:
    n: int
    q: int
    k: int

    def __post_init__(self):
        if self.n < 1:
            raise DomainError("n must be positive")
        if not 0 <= self.k <= self.n // 2:
            raise DomainError(f"level k={self.k} outside [0, {self.n // 2}]")

    @property
    def size(self) -> int:
        return self.n - 2 * self.k + 1

    @property
    def h(self) -> Fraction:
        return _qb(self.n, self.k, self.q) - _qb(self.n, self.k - 1, self.q)

    @property
    def card(self) -> Fraction:
        return space_size(self.n, self.q)

    def indices(self) -> range:
        return range(self.k, self.n - self.k + 1)

    def prefactor(self, i: int, j: int) -> Fraction:
        """P_{k,i,j}(0) for i <= j."""
        n, q, k = self.n, self.q, self.k
        return (self.card * self.h * qbinomial(j - k, i - k, q) * qbinomial(n - 2 * k, j - k, q)
                / (qbinomial(n, j, q) * qbinomial(j, i, q)) * Q(q) ** (k * (j - k)))

    def P(self, i: int, j: int, u: int) -> Fraction:
        """P_{k,i,j}(u) = E_{k,i,j}(x, y) for |x| = i, |y| = j, |x meet y| = i - u."""
        return self.entry(i, j, i, j, i - u)

    def entry(self, i: int, j: int, x_wt: int, y_wt: int, meet: int) -> Fraction:
        return hamming_E_entry(self, i, j, x_wt, y_wt, meet)


def hamming_E_entry(fam: HammingZonalFamily, i: int, j: int, x_wt: int, y_wt: int,
                    meet: int) -> Fraction:
    k, n, q = fam.k, fam.n, fam.q
    if not (k <= i <= n - k and k <= j <= n - k):
        raise DomainError(f"indices ({i}, {j}) outside [{k}, {n - k}]")
    if x_wt != i or y_wt != j:
        return Q(0)
    if not 0 <= meet <= min(i, j):
        raise DomainError(f"meet={meet} outside [0, {min(i, j)}]")
    if i > j:
        # E_{k,i,j}(x, y) = E_{k,j,i}(y, x)
        i, j = j, i
    Qk = _qhahn_cached(n, q, i, j)[k]
    return fam.prefactor(i, j) * Qk(bracket(i - meet, q))


@dataclass(frozen=True)
class TripleOrbit:
    a: int
    b: int
    c: int

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.a, self.b, self.c)


def in_omega(n: int, a: int, b: int, c: int) -> bool:
    return (0 <= a <= n and 0 <= b <= n and 0 <= c <= n and (a + b + c) % 2 == 0
            and a + b + c <= 2 * n and c <= a + b and b <= a + c and a <= b + c)


def omega_enumerate(n: int) -> list[tuple[int, int, int]]:
    return [t for t in product(range(n + 1), repeat=3) if in_omega(n, *t)]


def _check_orbit(n: int, a: int, b: int, c: int) -> None:
    if not in_omega(n, a, b, c):
        raise DomainError(f"({a}, {b}, {c}) is not a distance triple in H_{n}")


def t_count(n: int, a: int, b: int, c: int) -> int:
    """Number of z with d(x,z) = b, d(y,z) = a for a fixed pair at distance c."""
    _check_orbit(n, a, b, c)
    i = (a - b + c) // 2
    return comb(c, i) * comb(n - c, a - i)


def triple_T(fam: HammingZonalFamily, a: int, b: int, c: int) -> list[list[Fraction]]:
    """T_k(a, b, c) with row = wt(x-z) = b, column = wt(y-z) = a."""
    if fam.q != 1:
        raise DomainError("the triple matrices are built for binary Hamming space only")
    _check_orbit(fam.n, a, b, c)
    m, k = fam.size, fam.k
    out = [[Q(0)] * m for _ in range(m)]
    if k <= b <= fam.n - k and k <= a <= fam.n - k:
        out[b - k][a - k] = hamming_E_entry(fam, b, a, b, a, (a + b - c) // 2)
    return out


def triple_T_entry(fam: HammingZonalFamily, a: int, b: int, c: int):
    """Sparse form of T_k(a, b, c): ((row, col), value) or None."""
    k = fam.k
    if k <= b <= fam.n - k and k <= a <= fam.n - k:
        return (b - k, a - k), hamming_E_entry(fam, b, a, b, a, (a + b - c) // 2)
    return None


# --- sphere ---------------------------------------------------------------

def _poly_float(p: Poly) -> np.ndarray:
    return np.array([float(c) for c in p.coeffs] or [0.0])


def _horner(coeffs: np.ndarray, x: float) -> float:
    acc = 0.0
    for c in coeffs[::-1]:
        acc = acc * x + c
    return acc


def _stabilized_zonal(pk: Poly, k: int, uu: float, vv: float, uv: float, t: float) -> float:
    """(AB)^(k/2) P_k((t - uv)/sqrt(AB)) with A = 1-uu, B = 1-vv, expanded
    by parity so it stays polynomial (and continuous) at the boundary."""
    ab = (1.0 - uu) * (1.0 - vv)
    s = t - uv
    acc = 0.0
    for j, cj in enumerate(pk.coeffs):
        if cj == 0:
            continue
        acc += float(cj) * s**j * ab ** ((k - j) // 2)
    return acc


def _check_gram(vecs_gram: np.ndarray) -> None:
    lo = np.linalg.eigvalsh(vecs_gram).min()
    if lo < -GRAM_TOL:
        raise DomainError(f"inner products are not realizable (Gram eigenvalue {lo:.3e})")


@dataclass(frozen=True)
class SphereZonalFamily:
    n: int
    k: int
    d: int
    _outer: tuple = field(init=False, repr=False, compare=False)
    _inner: Poly = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.n < 3:
            raise DomainError("sphere dimension n must be >= 3")
        if not 0 <= self.k <= self.d:
            raise DomainError(f"need 0 <= k <= d, got k={self.k}, d={self.d}")
        outer = gegenbauer_family(self.n + 2 * self.k, self.d - self.k)
        object.__setattr__(self, "_outer", tuple(_poly_float(p) for p in outer))
        object.__setattr__(self, "_inner", gegenbauer_family(self.n - 1, self.k)[self.k])

    @property
    def size(self) -> int:
        return self.d - self.k + 1

    def Q(self, u: float, v: float, t: float) -> float:
        return _stabilized_zonal(self._inner, self.k, u * u, v * v, u * v, t)


def sphere_Y(fam: SphereZonalFamily, u: float, v: float, t: float) -> np.ndarray:
    if abs(u) > 1 + GRAM_TOL or abs(v) > 1 + GRAM_TOL:
        raise DomainError("|u| and |v| must be at most 1")
    _check_gram(np.array([[1.0, u, v], [u, 1.0, t], [v, t, 1.0]]))
    pu = np.array([_horner(c, u) for c in fam._outer])
    pv = np.array([_horner(c, v) for c in fam._outer])
    return np.outer(pu, pv) * fam.Q(u, v, t)


def multi_indices(s: int, top: int) -> list[tuple[int, ...]]:
    """All l in Z_{>=0}^s with |l| <= top, graded then lexicographic."""
    out = []
    for total in range(top + 1):
        for l in product(range(total + 1), repeat=s):
            if sum(l) == total:
                out.append(l)
    return out


def sphere_multipoint_Y(n: int, s: int, k: int, deg: int, u, v, t: float) -> np.ndarray:
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if u.shape != (s,) or v.shape != (s,):
        raise DomainError(f"u and v must have length s={s}")
    if n - s < 2:
        raise DomainError("need n - s >= 2")
    if not 0 <= k <= deg:
        raise DomainError("need 0 <= k <= deg")
    g = np.eye(s + 2)
    g[:s, s] = g[s, :s] = u
    g[:s, s + 1] = g[s + 1, :s] = v
    g[s, s + 1] = g[s + 1, s] = t
    _check_gram(g)
    pk = gegenbauer_family(n - s, k)[k]
    qv = _stabilized_zonal(pk, k, float(u @ u), float(v @ v), float(u @ v), t)
    idx = multi_indices(s, deg - k)
    mu = np.array([np.prod(u ** np.array(l)) for l in idx])
    mv = np.array([np.prod(v ** np.array(l)) for l in idx])
    return np.outer(mu, mv) * qv


# --- LP containment -------------------------------------------------------

def stabilizer_sum(n: int, k: int, d: int) -> list[list[Fraction]]:
    """B_k(x, y) = sum_z E_k(x - z, y - z) for a pair at distance d (binary)."""
    fam = HammingZonalFamily(n, 1, k)
    m = fam.size
    out = [[Q(0)] * m for _ in range(m)]
    x, y = 0, (1 << d) - 1
    for z in range(2**n):
        u, v = x ^ z, y ^ z
        i, j = u.bit_count(), v.bit_count()
        if k <= i <= n - k and k <= j <= n - k:
            out[i - k][j - k] += fam.entry(i, j, i, j, (u & v).bit_count())
    return out


def lp_containment(n: int, k: int):
    """Exhibit B_k(d) = V diag(lambda_i K_i(d)) V^T with V rational and fixed.

    Expands B_k(d) in the Krawtchouk basis, M_i = sum_d binom(n,d) K_i(d)
    B_k(d) / (2^n binom(n,i)).  Returns (V, lambdas, components) where
    V's column i - k spans the rank-one component M_i.  Raises AssertionError
    if the structure fails.
    """
    from .exact import matmul
    from .orthopoly import krawtchouk

    fam = HammingZonalFamily(n, 1, k)
    m = fam.size
    Bs = [stabilizer_sum(n, k, d) for d in range(n + 1)]
    K = [krawtchouk(n, 2, i) for i in range(n + 1)]
    comps = []
    for i in range(n + 1):
        norm = Q(2**n * comb(n, i))
        Mi = [[sum((comb(n, d) * K[i](d) * Bs[d][r][c] for d in range(n + 1)), Q(0)) / norm
               for c in range(m)] for r in range(m)]
        comps.append(Mi)
    cols, lams = [], []
    for i in range(n + 1):
        Mi = comps[i]
        nonzero = any(v != 0 for row in Mi for v in row)
        if not k <= i <= n - k:
            assert not nonzero, f"component {i} outside [{k}, {n - k}] is nonzero"
            continue
        r = max(range(m), key=lambda t: abs(Mi[t][t]))
        piv = Mi[r][r]
        assert piv > 0, f"component {i} has no positive diagonal"
        vec = Mi[r]
        for a in range(m):
            for b in range(m):
                assert Mi[a][b] * piv == vec[a] * vec[b], f"component {i} is not rank one"
        cols.append(vec)
        lams.append(1 / piv)
    V = [[cols[c][r] for c in range(m)] for r in range(m)]
    # reconstruction: B_k(d) == V diag(lambda_i K_i(d)) V^T for every d
    for d in range(n + 1):
        D = [[lams[a] * K[a + k](d) if a == b else Q(0) for b in range(m)] for a in range(m)]
        VT = [list(r) for r in zip(*V)]
        assert matmul(matmul(V, D), VT) == Bs[d], f"reconstruction fails at d={d}"
    return V, lams, comps


def lp_containment_diagonal(n: int, k: int):
    """A fixed rational basis change A with A B_k(d) A^T = diag(lambda_i K_i(d)).

    A = V^-1 for the V of :func:`lp_containment`.  Returns (A, lambdas,
    diagonals) where diagonals[d] lists the entries for distance d; the
    off-diagonal entries are checked to vanish exactly.
    """
    from .exact import inverse, matmul, transpose
    from .orthopoly import krawtchouk

    V, lams, _ = lp_containment(n, k)
    A = inverse(V)
    At = transpose(A)
    diagonals = []
    for d in range(n + 1):
        D = matmul(matmul(A, stabilizer_sum(n, k, d)), At)
        m = len(D)
        assert all(D[a][b] == 0 for a in range(m) for b in range(m) if a != b), f"off-diagonal at d={d}"
        assert all(D[a][a] == lams[a] * krawtchouk(n, 2, a + k)(d) for a in range(m)), f"diagonal at d={d}"
        diagonals.append([D[a][a] for a in range(m)])
    return A, lams, diagonals
