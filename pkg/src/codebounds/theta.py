"""Lovász theta and theta-prime, code graphs, and the independence number."""
from __future__ import annotations

import math
import time
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from pathlib import Path

import numpy as np

from .exact import psd_witness
from .orthopoly import DomainError
from .solvers.ipm import SdpSolution, ipm_solve
from .solvers.sdp import SdpProblem
from .solvers.simplex import EQ, LpProblem

VARIANTS = ("theta", "theta-prime")
MAX_SDP_VERTICES = 16


@dataclass(frozen=True)
class Graph:
    n: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.n < 0:
            raise DomainError("negative vertex count")
        norm = set()
        for i, j in self.edges:
            if i == j:
                raise DomainError(f"self-loop at {i}")
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise DomainError(f"edge ({i}, {j}) out of range")
            norm.add((min(i, j), max(i, j)))
        object.__setattr__(self, "edges", tuple(sorted(norm)))

    @classmethod
    def cycle(cls, q: int) -> "Graph":
        if q < 3:
            raise DomainError("cycles need q >= 3")
        return cls(q, tuple((i, (i + 1) % q) for i in range(q)))

    @classmethod
    def complete(cls, n: int) -> "Graph":
        return cls(n, tuple(combinations(range(n), 2)))

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(n, ())

    def non_edges(self) -> list[tuple[int, int]]:
        e = set(self.edges)
        return [p for p in combinations(range(self.n), 2) if p not in e]

    def complement(self) -> "Graph":
        return Graph(self.n, tuple(self.non_edges()))

    def adjacency_bits(self) -> list[int]:
        adj = [0] * self.n
        for i, j in self.edges:
            adj[i] |= 1 << j
            adj[j] |= 1 << i
        return adj

    # edge-list text: "n m" then m lines "i j", 0-based
    def to_text(self) -> str:
        return "\n".join([f"{self.n} {len(self.edges)}"] + [f"{i} {j}" for i, j in self.edges]) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Graph":
        rows = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
        if not rows or len(rows[0]) != 2:
            raise DomainError("edge list must start with 'n m'")
        try:
            n, m = int(rows[0][0]), int(rows[0][1])
            edges = [(int(a), int(b)) for a, b in rows[1:]]
        except ValueError as exc:
            raise DomainError(f"bad edge list: {exc}") from None
        if len(edges) != m:
            raise DomainError(f"header says {m} edges, found {len(edges)}")
        return cls(n, tuple(edges))

    @classmethod
    def read(cls, path) -> "Graph":
        return cls.from_text(Path(path).read_text())


def code_graph(space, delta: int | None = None) -> Graph:
    """Vertices: the space's points in numeric order; edges: pairs at distance in (0, delta)."""
    delta = space.delta if delta is None else delta
    if space.kind == "hamming":
        n, q = space.n, space.q
        if q ** n > 2**16:
            raise DomainError("space too large for an explicit code graph")
        words = [tuple((v // q**p) % q for p in range(n)) for v in range(q**n)]
        dist = lambda a, b: sum(x != y for x, y in zip(words[a], words[b]))
        N = q**n
    elif space.kind == "johnson":
        words = [v for v in range(2**space.n) if v.bit_count() == space.w]
        if len(words) > 2**16:
            raise DomainError("space too large for an explicit code graph")
        dist = lambda a, b: (words[a] ^ words[b]).bit_count()
        N = len(words)
    else:
        raise DomainError("code graphs need a finite space")
    edges = [(a, b) for a in range(N) for b in range(a + 1, N) if 0 < dist(a, b) < delta]
    return Graph(N, tuple(edges))


# --- theta ---------------------------------------------------------------------

def theta_sdp(g: Graph, variant: str = "theta", max_vertices: int = MAX_SDP_VERTICES) -> SdpProblem:
    """min t s.t. t I - J + sum_edges z_e E_e (- sum_nonedges w_p E_p, w >= 0) is PSD.

    Its dual is the usual program: maximize J.B over PSD B with trace 1 and
    B_ij = 0 on edges (and B >= 0 for theta-prime).
    """
    if variant not in VARIANTS:
        raise DomainError(f"unknown variant {variant!r}")
    if g.n < 1:
        raise DomainError("graph needs a vertex")
    if g.n > max_vertices:
        raise DomainError(f"raw theta SDP capped at {max_vertices} vertices; "
                          "for code graphs use the Delsarte LP, which equals theta-prime")
    n = g.n
    entries = [(0, 0, i, j, Fraction(1)) for i in range(n) for j in range(i, n)]
    entries += [(1, 0, i, i, Fraction(1)) for i in range(n)]
    for k, (i, j) in enumerate(g.edges, start=2):
        entries.append((k, 0, i, j, Fraction(1)))
    sizes = [n]
    m = 1 + len(g.edges)
    if variant == "theta-prime":
        ne = g.non_edges()
        if ne:
            sizes.append(-len(ne))
            for r, (i, j) in enumerate(ne):
                entries.append((m + 1 + r, 0, i, j, Fraction(1)))
                entries.append((m + 1 + r, 1, r, r, Fraction(-1)))
            m += len(ne)
    c = [Fraction(1)] + [Fraction(0)] * (m - 1)
    return SdpProblem(sizes, c, entries)


@dataclass
class ThetaResult:
    value: float
    upper: Fraction | None  # rigorous rational upper bound, when certification succeeded
    solution: SdpSolution
    certificate: "ThetaCertificate | None"


@dataclass
class ThetaCertificate:
    """Matrix M = t I - J + sum z_e E_e (+ nonpositive non-edge shifts), PSD; proves theta <= t."""

    n: int
    edges: tuple[tuple[int, int], ...]
    t: Fraction
    matrix: list[list[Fraction]]
    variant: str = "theta"

    def check(self) -> tuple[bool, str]:
        M, t = self.matrix, self.t
        if len(M) != self.n or any(len(r) != self.n for r in M):
            return False, "matrix has the wrong shape"
        for i in range(self.n):
            for j in range(self.n):
                if M[i][j] != M[j][i]:
                    return False, f"matrix not symmetric at ({i}, {j})"
        for i in range(self.n):
            if M[i][i] != t - 1:
                return False, f"diagonal entry {i} is not t - 1"
        edges = set(self.edges)
        for i, j in combinations(range(self.n), 2):
            if (i, j) in edges:
                continue
            v = M[i][j]
            if self.variant == "theta" and v != -1:
                return False, f"non-edge ({i}, {j}) entry is not -1"
            if self.variant == "theta-prime" and v > -1:
                return False, f"non-edge ({i}, {j}) entry exceeds -1"
        ok, why = psd_witness(M)
        if not ok:
            return False, f"matrix not PSD: {why}"
        return True, ""


def _round_theta(g: Graph, variant: str, sol: SdpSolution, p: SdpProblem) -> ThetaCertificate | None:
    x = sol.x
    t = Fraction(float(x[0])).limit_denominator(10**12)
    n = g.n
    M = [[Fraction(-1)] * n for _ in range(n)]
    for k, (i, j) in enumerate(g.edges, start=1):
        z = Fraction(float(x[k])).limit_denominator(10**12)
        M[i][j] = M[j][i] = z - 1
    if variant == "theta-prime":
        for r, (i, j) in enumerate(g.non_edges()):
            w = min(Fraction(float(x[1 + len(g.edges) + r])).limit_denominator(10**12), Fraction(0))
            M[i][j] = M[j][i] = w - 1
    eps = Fraction(1, 10**10)
    for _ in range(30):
        tt = t + eps
        for i in range(n):
            M[i][i] = tt - 1
        cert = ThetaCertificate(n, g.edges, tt, [row[:] for row in M], variant)
        if cert.check()[0]:
            return cert
        eps *= 4
    return None


def theta(g: Graph, variant: str = "theta", tol: float = 1e-9, certify: bool = True,
          max_vertices: int = MAX_SDP_VERTICES) -> ThetaResult:
    p = theta_sdp(g, variant, max_vertices)
    sol = ipm_solve(p, tol=tol)
    cert = _round_theta(g, variant, sol, p) if certify else None
    return ThetaResult(sol.primal_value, cert.t if cert else None, sol, cert)


def theta_cycle_closed_form(q: int) -> float:
    if q < 3:
        raise DomainError("cycles need q >= 3")
    if q % 2 == 0:
        return q / 2
    c = math.cos(math.pi / q)
    return q * c / (1 + c)


def theta_cycle_symmetrized_lp(q: int) -> tuple[LpProblem, float]:
    """Circulant LP: max q f_0 over f >= 0, sum f_k = 1, sum f_k cos(2 k pi / q) = 0.

    Solved through its optimal support {0, floor(q/2)}, and cross-checked
    against a float LP solve of the full program.
    """
    from scipy.optimize import linprog

    if q < 3:
        raise DomainError("cycles need q >= 3")
    top = q // 2
    cosines = [math.cos(2 * k * math.pi / q) for k in range(top + 1)]
    lp = LpProblem([f"f_{k}" for k in range(top + 1)],
                   [Fraction(q)] + [Fraction(0)] * top, maximize=True)
    lp.add([1] * (top + 1), EQ, 1)
    lp.add([Fraction(c) for c in cosines], EQ, 0)
    c_top = cosines[top]
    value = q * (-c_top / (1 - c_top))
    res = linprog([-q] + [0] * top, A_eq=[[1.0] * (top + 1), cosines], b_eq=[1.0, 0.0],
                  bounds=[(0, None)] * (top + 1), method="highs")
    if res.status != 0 or abs(-res.fun - value) > 1e-9:
        raise ArithmeticError(f"symmetrized LP cross-check failed for q={q}")
    return lp, value


# --- independence number ---------------------------------------------------------

@dataclass
class AlphaResult:
    value: int
    exact: bool
    witness: list[int]

    @property
    def status(self) -> str:
        return "exact" if self.exact else "inconclusive"


def alpha_exhaustive(g: Graph, time_cap: float = 10.0, fix_vertex: int | None = None,
                     lower: int = 0) -> AlphaResult:
    """Maximum independent set by branch and bound with a greedy-coloring bound.

    fix_vertex forces that vertex into the set, which is exact for
    vertex-transitive graphs.  ``lower`` prunes branches that cannot beat it;
    if nothing larger exists the result may be smaller than ``lower``.
    """
    n = g.n
    if n == 0:
        return AlphaResult(0, True, [])
    adj = g.adjacency_bits()
    full = (1 << n) - 1
    compat = [full & ~adj[v] & ~(1 << v) for v in range(n)]
    # relabel by descending compatibility degree: greedy coloring then works best
    order = sorted(range(n), key=lambda v: -compat[v].bit_count())
    pos = {v: k for k, v in enumerate(order)}

    def relabel(bits):
        out = 0
        while bits:
            low = bits & -bits
            out |= 1 << pos[low.bit_length() - 1]
            bits ^= low
        return out

    nbr = [relabel(compat[v]) for v in order]
    best: list[int] = []
    floor = max(lower, 0)
    deadline = time.monotonic() + time_cap
    timed_out = False

    def color_classes(cand: int):
        verts, colors = [], []
        color = 0
        rest = cand
        while rest:
            color += 1
            avail = rest
            while avail:
                v = (avail & -avail).bit_length() - 1
                avail &= ~(1 << v) & ~nbr[v]
                rest &= ~(1 << v)
                verts.append(v)
                colors.append(color)
        return verts, colors

    def expand(clique: list[int], cand: int):
        nonlocal best, timed_out
        if time.monotonic() > deadline:
            timed_out = True
            return
        verts, colors = color_classes(cand)
        for idx in range(len(verts) - 1, -1, -1):
            if timed_out or len(clique) + colors[idx] <= max(len(best), floor):
                return
            v = verts[idx]
            clique.append(v)
            new = cand & nbr[v]
            if new:
                expand(clique, new)
            elif len(clique) > len(best):
                best = clique[:]
            clique.pop()
            cand &= ~(1 << v)

    if fix_vertex is not None:
        f = pos[fix_vertex]
        best = [f] if floor < 1 else []
        expand([f], nbr[f])
    else:
        expand([], (1 << n) - 1)
    return AlphaResult(len(best), not timed_out, sorted(order[v] for v in best))


def _branch_vertices(n: int, delta: int, w: int) -> list[int]:
    lead = (1 << w) - 1
    return [v for v in range(2**n)
            if v.bit_count() >= w and v != lead and (v ^ lead).bit_count() >= delta]


def _branch_milp(n: int, delta: int, verts: list[int]) -> list[int]:
    """Largest subset of verts with pairwise distance >= delta, by integer programming.

    Conflicts are written as ball-packing cliques (radius floor((delta-1)/2)),
    plus pair rows at distance delta-1 when delta is even.
    """
    from scipy.optimize import Bounds, LinearConstraint, milp
    from scipy.sparse import coo_matrix

    if not verts:
        return []
    idx = {v: k for k, v in enumerate(verts)}
    r = (delta - 1) // 2
    rows = []
    for u in range(2**n):
        row = [idx[v] for v in verts if (u ^ v).bit_count() <= r]
        if len(row) > 1:
            rows.append(row)
    if delta % 2 == 0:
        rows += [[idx[a], idx[b]] for a, b in combinations(verts, 2) if (a ^ b).bit_count() == delta - 1]
    if not rows:
        return list(verts)
    I = [k for k, row in enumerate(rows) for _ in row]
    J = [v for row in rows for v in row]
    A = coo_matrix((np.ones(len(J)), (I, J)), shape=(len(rows), len(verts)))
    res = milp(-np.ones(len(verts)), constraints=LinearConstraint(A, -np.inf, 1),
               integrality=np.ones(len(verts)), bounds=Bounds(0, 1))
    if res.status != 0:
        raise ArithmeticError(f"integer program failed: {res.message}")
    return [verts[k] for k in range(len(verts)) if res.x[k] > 0.5]


def max_code_size(n: int, delta: int, clique_cap: float = 5.0) -> AlphaResult:
    """A(n, delta) for binary codes by exhaustive search.

    Symmetry breaking: translate so 0 is a codeword, then permute coordinates
    so a minimum-weight nonzero codeword is 1^w 0^(n-w); every other
    codeword then has weight >= w.  Each w is searched separately, first by
    clique search, and by integer programming if that runs past clique_cap
    seconds.  Every returned code is checked for its minimum distance.
    """
    if delta <= 1:
        return AlphaResult(2**n, True, list(range(2**n)))
    if delta > n:
        return AlphaResult(1, True, [0])
    best = [0]
    for w in range(delta, n + 1):
        lead = (1 << w) - 1
        verts = _branch_vertices(n, delta, w)
        edges = [(a, b) for a, b in combinations(range(len(verts)), 2)
                 if (verts[a] ^ verts[b]).bit_count() < delta]
        sub = alpha_exhaustive(Graph(len(verts), tuple(edges)), time_cap=clique_cap,
                               lower=len(best) - 2)
        if sub.exact:
            chosen = [verts[i] for i in sub.witness]
        else:
            chosen = _branch_milp(n, delta, verts)
        if len(chosen) + 2 > len(best):
            best = sorted([0, lead] + chosen)
    if any((a ^ b).bit_count() < delta for a, b in combinations(best, 2)):
        raise ArithmeticError("search returned a code below the distance")
    return AlphaResult(len(best), True, best)
