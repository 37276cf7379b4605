"""Triple-distance SDP bound for binary codes.

Variables x_{a,b,c} are indexed by distance triples (a, b, c) = (d(y,z),
d(x,z), d(x,y)) and identified up to permutation; x_{0,0,0} = 1 is
substituted.  The problem is assembled in SDPA standard form with exact
rational data, so the same object serves the float solver and the exact
feasibility checks.
"""
from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations, product
from math import comb

import numpy as np

from .exact import psd_witness
from .orthopoly import DomainError
from .solvers.ipm import SdpSolution, ipm_solve
from .solvers.sdp import SdpProblem
from .zonal import HammingZonalFamily, in_omega, omega_enumerate, t_count, triple_T_entry

Triple = tuple[int, int, int]


@dataclass(frozen=True)
class TripleVariableIndex:
    a: int
    b: int
    c: int
    orbit_size: int

    @property
    def triple(self) -> Triple:
        return (self.a, self.b, self.c)


def canonical(t: Triple) -> Triple:
    return tuple(sorted(t))


def killed(t: Triple, delta: int) -> bool:
    return any(0 < v < delta for v in t)


def _orbit(t: Triple) -> list[Triple]:
    return sorted(set(permutations(t)))


@dataclass
class SchrijverProblem:
    n: int
    delta: int
    variables: list[TripleVariableIndex]
    sdp: SdpProblem
    upper: list[Fraction]  # U_i >= x_i at every feasible point
    # PSD block -> (kind "x"/"tx", level k, kept indices into k..n-k)
    block_info: list[tuple[str, int, list[int]]] = field(default_factory=list)
    diag_rows: list[str] = field(default_factory=list)

    def index(self) -> dict[Triple, int]:
        return {v.triple: i for i, v in enumerate(self.variables)}

    def vector(self, x: dict[Triple, Fraction]) -> list[Fraction]:
        """Canonical variable vector from a full assignment over Omega."""
        return [Fraction(x.get(v.triple, 0)) for v in self.variables]


def build_schrijver(n: int, delta: int, prune: bool = True) -> SchrijverProblem:
    """Assemble the triple SDP: normalization, symmetry, nonnegativity,
    the orbit caps, the two PSD families, forbidden distances, and the size objective.

    PSD blocks: for each k in 0..n//2, the matrix sum T_k(a,b,c) x_{a,b,c}
    and the matrix sum T_k(a,b,c) (t(a,b,c) x_{0,c,c} - x_{a,b,c}), both over
    all of Omega.  Rows and columns that vanish identically are removed
    (prune=True) so the solver sees an interior; block_info keeps the map.
    """
    if not 2 <= delta <= n:
        raise DomainError(f"need 2 <= delta <= n, got n={n}, delta={delta}")
    omega = omega_enumerate(n)
    canon = sorted({canonical(t) for t in omega if not killed(t, delta)})
    canon.remove((0, 0, 0))
    variables = [TripleVariableIndex(*t, orbit_size=len(_orbit(t))) for t in canon]
    idx = {v.triple: i for i, v in enumerate(variables)}
    one = (0, 0, 0)

    def var(t: Triple):
        """Variable number (1-based matno) or 0 for the pinned x_000, None if killed."""
        t = canonical(t)
        if t == one:
            return 0
        if killed(t, delta):
            return None
        return idx[t] + 1

    # linear forms are dicts matno -> coefficient, matno 0 the constant term
    psd_forms = []  # (kind, k, {(r, c): {matno: coef}})
    for k in range(n // 2 + 1):
        fam = HammingZonalFamily(n, 1, k)
        f5 = defaultdict(lambda: defaultdict(Fraction))
        f6 = defaultdict(lambda: defaultdict(Fraction))
        for (a, b, c) in omega:
            e = triple_T_entry(fam, a, b, c)
            if e is None:
                continue
            (r, col), val = e
            if val == 0:
                continue
            j = var((a, b, c))
            if j is not None:
                f5[(r, col)][j] += val
                f6[(r, col)][j] -= val
            jc = var((0, c, c))
            if jc is not None:
                f6[(r, col)][jc] += val * t_count(n, a, b, c)
        psd_forms.append(("x", k, f5))
        psd_forms.append(("tx", k, f6))

    # orbit cap: x_v <= t(a',b',c') x_{0,c',c'} for every ordering of v
    rows4 = {}
    for v in canon:
        for (a, b, c) in _orbit(v):
            form = defaultdict(Fraction)
            form[idx[v] + 1] -= 1
            jc = var((0, c, c))
            if jc is not None:
                form[jc] += t_count(n, a, b, c)
            key = tuple(sorted((m, q) for m, q in form.items() if q != 0))
            if key and key not in rows4:
                rows4[key] = f"x{v} <= t{(a, b, c)} x{(0, c, c)}"

    m = len(variables)
    entries = []
    block_sizes = []
    block_info = []
    for kind, k, forms in psd_forms:
        size = n - 2 * k + 1
        live = sorted({r for (r, c), f in forms.items() if any(f.values())}
                      | {c for (r, c), f in forms.items() if any(f.values())})
        keep = live if prune else list(range(size))
        for (r, c), f in forms.items():
            g = forms.get((c, r), {})
            if {j: q for j, q in f.items() if q} != {j: q for j, q in g.items() if q}:
                raise AssertionError(f"block ({kind}) k={k} is not symmetric at ({r}, {c})")
        if not keep:
            continue
        pos = {r: i for i, r in enumerate(keep)}
        b = len(block_sizes)
        block_sizes.append(len(keep))
        block_info.append((kind, k, keep))
        for (r, c) in sorted(forms):
            if r > c:
                continue  # forms are symmetric; store the upper triangle
            for j, q in sorted(forms[(r, c)].items()):
                if q != 0:
                    # S = sum x F - F0, so a constant term q enters F0 as -q
                    entries.append((j, b, pos[r], pos[c], -q if j == 0 else q))
    # one diagonal block: x >= 0, then the orbit caps
    diag_rows = [f"x{v.triple} >= 0" for v in variables] + list(rows4.values())
    b = len(block_sizes)
    block_sizes.append(-len(diag_rows))
    for i in range(m):
        entries.append((i + 1, b, i, i, Fraction(1)))
    for r, key in enumerate(rows4, start=m):
        for j, q in key:
            entries.append((j, b, r, r, -q if j == 0 else q))
    entries.sort(key=lambda e: (e[0], e[1], e[2], e[3]))

    c = [Fraction(-1) if v.a == 0 and v.b == v.c else Fraction(0) for v in variables]
    sdp = SdpProblem(block_sizes, c, entries, maximize=True, offset=Fraction(1),
                     names=[f"x_{v.a}_{v.b}_{v.c}" for v in variables])
    upper = _variable_bounds(n, variables, rows4)
    return SchrijverProblem(n, delta, variables, sdp, upper, block_info, diag_rows)


def _variable_bounds(n, variables, rows4) -> list[Fraction]:
    # x_{0cc} <= binom(n, c); any other x_v <= t * U_{0cc} through its orbit-cap rows
    U = [None] * len(variables)
    for i, v in enumerate(variables):
        if v.a == 0 and v.b == v.c:
            U[i] = Fraction(comb(n, v.c))
    for key in rows4:
        d = dict(key)
        targets = [j for j, q in d.items() if q == -1]
        if len(targets) != 1:
            continue
        i = targets[0] - 1
        bound = Fraction(d.get(0, 0))
        others = [(j, q) for j, q in d.items() if j not in (0, i + 1)]
        if all(U[j - 1] is not None for j, _ in others):
            bound += sum((q * U[j - 1] for j, q in others), Fraction(0))
            U[i] = bound if U[i] is None else min(U[i], bound)
    if any(u is None for u in U):
        raise AssertionError("variable without an upper bound")
    return U


# --- codes -----------------------------------------------------------------

def code_to_feasible_point(C, n: int) -> dict[Triple, Fraction]:
    """x_{a,b,c} = #{(x,y,z) in C^3 with the given distances} / |C| over all of Omega."""
    C = list(C)
    if not C:
        raise ValueError("empty code")
    if any(not 0 <= w < 2**n for w in C):
        raise ValueError("word outside H_n")
    counts = defaultdict(int)
    for x, y, z in product(C, repeat=3):
        counts[((y ^ z).bit_count(), (x ^ z).bit_count(), (x ^ y).bit_count())] += 1
    out = {t: Fraction(0) for t in omega_enumerate(n)}
    for t, v in counts.items():
        out[t] = Fraction(v, len(C))
    return out


def check_conditions(x: dict[Triple, Fraction], n: int, delta: int) -> list[str]:
    """Evaluate every constraint literally on a full assignment; returns violations."""
    bad = []
    omega = omega_enumerate(n)
    if x.get((0, 0, 0)) != 1:
        bad.append("normalization: x_000 != 1")
    for t in omega:
        v = x.get(t, Fraction(0))
        if v < 0:
            bad.append(f"nonnegativity: x{t} < 0")
        for p in permutations(t):
            if x.get(p, Fraction(0)) != v:
                bad.append(f"symmetry: x{t} != x{p}")
                break
        a, b, c = t
        for (aa, bb, cc) in ((a, b, c), (b, c, a), (c, a, b)):
            if v > t_count(n, aa, bb, cc) * x.get((0, cc, cc), Fraction(0)):
                bad.append(f"orbit cap: x{t} > t{(aa, bb, cc)} x_0{cc}{cc}")
        if killed(t, delta) and v != 0:
            bad.append(f"forbidden distance: x{t} != 0")
    for k in range(n // 2 + 1):
        fam = HammingZonalFamily(n, 1, k)
        size = fam.size
        M5 = [[Fraction(0)] * size for _ in range(size)]
        M6 = [[Fraction(0)] * size for _ in range(size)]
        for (a, b, c) in omega:
            e = triple_T_entry(fam, a, b, c)
            if e is None:
                continue
            (r, col), val = e
            M5[r][col] += val * x.get((a, b, c), 0)
            M6[r][col] += val * (t_count(n, a, b, c) * x.get((0, c, c), 0) - x.get((a, b, c), 0))
        for name, M in (("psd x", M5), ("psd tx", M6)):
            ok, why = psd_witness(M)
            if not ok:
                bad.append(f"{name} k={k}: {why}")
    return bad


def objective_of(x: dict[Triple, Fraction], n: int) -> Fraction:
    """Code size: sum_c x_{0,c,c}."""
    return sum((x.get((0, c, c), Fraction(0)) for c in range(n + 1)), Fraction(0))


def check_assembled(problem: SchrijverProblem, x: dict[Triple, Fraction]) -> list[str]:
    """Feasibility of a point for the assembled SDPA problem, exactly."""
    vec = problem.vector(x)
    bad = []
    for b, blk in enumerate(problem.sdp.slack_exact(vec)):
        if problem.sdp.block_sizes[b] < 0:
            for r, v in enumerate(blk):
                if v < 0:
                    bad.append(f"diagonal row {problem.diag_rows[r]} is {v}")
        else:
            ok, why = psd_witness(blk)
            if not ok:
                kind, k, _ = problem.block_info[b]
                bad.append(f"block ({kind}) k={k}: {why}")
    return bad


# --- solving and rounding -----------------------------------------------------

def solve_sdp(p: SdpProblem, tol: float = 1e-8, max_iter: int = 100) -> SdpSolution:
    return ipm_solve(p, tol=tol, max_iter=max_iter)


def _rational_psd(Y: np.ndarray) -> list[list[Fraction]] | None:
    """A rational PSD matrix near Y: exact binary rounding plus a small shift."""
    Y = (Y + Y.T) / 2
    s = len(Y)
    lam = float(np.linalg.eigvalsh(Y)[0]) if s else 0.0
    scale = max(1.0, float(np.max(np.abs(Y), initial=0)))
    eps = max(0.0, -lam) + 1e-13 * scale
    for _ in range(12):
        M = [[Fraction(float(Y[i, j])) for j in range(s)] for i in range(s)]
        shift = Fraction(eps)
        for i in range(s):
            M[i][i] += shift
        if psd_witness(M)[0]:
            return M
        eps *= 10
    return None


@dataclass
class RoundedBound:
    value: Fraction  # rigorous upper bound for the user objective
    floor: int
    residual_margin: Fraction
    dual_value: Fraction


def bound_from_rational_dual(p: SdpProblem, Yq: list, upper: list[Fraction]) -> RoundedBound:
    """Exact bound from rational dual blocks (PSD blocks as full matrices,
    diagonal blocks as lists); the caller is responsible for Yq >= 0.

    With residuals r_i = c_i - F_i.Y, every feasible x with 0 <= x_i <= U_i
    obeys value(x) <= offset - F_0.Y + sum |r_i| U_i.
    """
    acc = [Fraction(0)] * (p.m + 1)
    for mat, b, i, j, v in p.entries:
        v = Fraction(v)
        if p.block_sizes[b] < 0:
            acc[mat] += v * Yq[b][i]
        else:
            acc[mat] += v * (Yq[b][i][j] if i == j else 2 * Yq[b][i][j])
    F0Y = acc[0]
    margin = sum((abs(Fraction(ci) - acc[i + 1]) * u for i, (ci, u) in enumerate(zip(p.c, upper))),
                 Fraction(0))
    value = Fraction(p.offset) - F0Y + margin
    return RoundedBound(value, math.floor(value), margin, Fraction(p.offset) - F0Y)


def rationalize_dual(p: SdpProblem, Y: list) -> list | None:
    """Round float dual blocks to rational ones that are exactly PSD / nonnegative."""
    Yq = []
    for blk, s in zip(Y, p.block_sizes):
        if s < 0:
            Yq.append([max(Fraction(float(v)), Fraction(0)) for v in blk])
        else:
            R = _rational_psd(np.asarray(blk, dtype=float))
            if R is None:
                return None
            Yq.append(R)
    return Yq


def rigorous_bound(p: SdpProblem, Y: list, upper: list[Fraction]) -> RoundedBound | None:
    """A certified bound from an approximate dual Y, for a maximization problem."""
    if not p.maximize:
        raise ValueError("rigorous_bound expects a maximization problem")
    Yq = rationalize_dual(p, Y)
    return None if Yq is None else bound_from_rational_dual(p, Yq, upper)


def upper_bound_rounding(problem: SchrijverProblem, sol: SdpSolution) -> RoundedBound | None:
    """Rigorous rational upper bound on |C| from the solver's dual matrices."""
    # the rounding is rigorous whatever the solver status; a poor Y just gives a weak bound
    if sol.status == "numerical-error" and not sol.Y:
        return None
    return rigorous_bound(problem.sdp, sol.Y, problem.upper)


@dataclass
class SchrijverBound:
    n: int
    delta: int
    solution: SdpSolution
    rounded: RoundedBound | None
    problem: SchrijverProblem


def schrijver_bound(n: int, delta: int, tol: float = 1e-8, max_iter: int = 100) -> SchrijverBound:
    prob = build_schrijver(n, delta)
    sol = solve_sdp(prob.sdp, tol=tol, max_iter=max_iter)
    return SchrijverBound(n, delta, sol, upper_bound_rounding(prob, sol), prob)


def omega_size(n: int) -> int:
    return sum(1 for t in product(range(n + 1), repeat=3) if in_omega(n, *t))
