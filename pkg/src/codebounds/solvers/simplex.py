"""Exact two-phase tableau simplex with Bland's rule."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from ..exact import solve

LE, EQ, GE = "<=", "=", ">="


@dataclass
class LpProblem:
    """max/min objective.x subject to rows, with every variable >= 0."""

    variables: list[str]
    objective: list[Fraction]
    constraints: list[tuple[list[Fraction], str, Fraction]] = field(default_factory=list)
    maximize: bool = True
    offset: Fraction = Fraction(0)

    def __post_init__(self):
        n = len(self.variables)
        if len(self.objective) != n:
            raise ValueError("objective length differs from the variable count")
        for row, rel, _ in self.constraints:
            if len(row) != n:
                raise ValueError("constraint row length differs from the variable count")
            if rel not in (LE, EQ, GE):
                raise ValueError(f"unknown relation {rel!r}")

    def add(self, row: Sequence, rel: str, rhs) -> None:
        self.constraints.append(([Fraction(v) for v in row], rel, Fraction(rhs)))

    def value(self, x: Sequence[Fraction]) -> Fraction:
        return self.offset + sum((c * v for c, v in zip(self.objective, x)), Fraction(0))

    def violations(self, x: Sequence[Fraction]) -> list[int]:
        bad = []
        for k, (row, rel, rhs) in enumerate(self.constraints):
            lhs = sum((a * v for a, v in zip(row, x)), Fraction(0))
            if (rel == LE and lhs > rhs) or (rel == GE and lhs < rhs) or (rel == EQ and lhs != rhs):
                bad.append(k)
        return bad


@dataclass
class LpResult:
    status: str  # "optimal", "infeasible", "unbounded"
    value: Fraction | None = None
    x: list[Fraction] | None = None
    duals: list[Fraction] | None = None
    pivots: int = 0


class _Tableau:
    def __init__(self, rows: list[list[Fraction]], rhs: list[Fraction], basis: list[int]):
        self.A = rows
        self.b = rhs
        self.basis = basis
        self.pivots = 0

    def pivot(self, r: int, c: int) -> None:
        A, b = self.A, self.b
        p = A[r][c]
        A[r] = [v / p for v in A[r]]
        b[r] = b[r] / p
        pr = A[r]
        for i in range(len(A)):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [x - f * y if y else x for x, y in zip(A[i], pr)]
                b[i] -= f * b[r]
        self.basis[r] = c
        self.pivots += 1

    def run(self, cost: list[Fraction], allowed: int) -> str:
        """Maximize cost.x over the current basic feasible tableau (Bland's rule)."""
        while True:
            cb = [cost[j] for j in self.basis]
            enter = None
            for j in range(allowed):
                if j in self.basis:
                    continue
                red = cost[j] - sum((cb[i] * self.A[i][j] for i in range(len(self.A)) if self.A[i][j]),
                                    Fraction(0))
                if red > 0:
                    enter = j
                    break
            if enter is None:
                return "optimal"
            best = None
            for i in range(len(self.A)):
                a = self.A[i][enter]
                if a > 0:
                    ratio = self.b[i] / a
                    key = (ratio, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return "unbounded"
            self.pivot(best[1], enter)


def simplex_solve(p: LpProblem) -> LpResult:
    """Solve p exactly; on optimality return primal x and the row duals.

    Dual signs follow the maximization convention: y >= 0 on <= rows,
    y <= 0 on >= rows; for a min problem the duals of the equivalent max
    problem are negated back.  Strong duality is asserted before returning.
    """
    n = len(p.variables)
    sign = Fraction(1) if p.maximize else Fraction(-1)
    cost0 = [sign * c for c in p.objective]

    rows, rhs, kinds, flips = [], [], [], []
    for row, rel, b in p.constraints:
        row = list(row)
        flip = b < 0
        if flip:
            row = [-v for v in row]
            b = -b
            rel = {LE: GE, GE: LE, EQ: EQ}[rel]
        rows.append(row)
        rhs.append(b)
        kinds.append(rel)
        flips.append(flip)
    m = len(rows)

    # columns: originals | slacks/surplus | artificials
    nslack = sum(1 for k in kinds if k != EQ)
    nart = sum(1 for k in kinds if k != LE)
    total = n + nslack + nart
    A = []
    basis = []
    s_col, a_col = n, n + nslack
    for i in range(m):
        r = rows[i] + [Fraction(0)] * (nslack + nart)
        if kinds[i] == LE:
            r[s_col] = Fraction(1)
            basis.append(s_col)
            s_col += 1
        elif kinds[i] == GE:
            r[s_col] = Fraction(-1)
            s_col += 1
            r[a_col] = Fraction(1)
            basis.append(a_col)
            a_col += 1
        else:
            r[a_col] = Fraction(1)
            basis.append(a_col)
            a_col += 1
        A.append(r)
    orig_rows = [list(r) for r in A]
    row_ids = list(range(m))
    tab = _Tableau(A, list(rhs), basis)

    art_start = n + nslack
    if nart:
        phase1 = [Fraction(0)] * art_start + [Fraction(-1)] * nart
        tab.run(phase1, total)
        if any(tab.b[i] != 0 for i in range(m) if tab.basis[i] >= art_start):
            return LpResult("infeasible", pivots=tab.pivots)
        # drive zero-level artificials out of the basis; drop redundant rows
        i = 0
        while i < len(tab.A):
            if tab.basis[i] >= art_start:
                col = next((j for j in range(art_start) if tab.A[i][j] != 0), None)
                if col is None:
                    del tab.A[i], tab.b[i], tab.basis[i], orig_rows[i], row_ids[i]
                    continue
                tab.pivot(i, col)
            i += 1

    cost = cost0 + [Fraction(0)] * (nslack + nart)
    status = tab.run(cost, art_start)
    if status != "optimal":
        return LpResult(status, pivots=tab.pivots)

    x_full = [Fraction(0)] * total
    for i, j in enumerate(tab.basis):
        x_full[j] = tab.b[i]
    x = x_full[:n]

    # duals from B^T y = c_B on the (sign-normalized) original rows
    B = [[orig_rows[i][j] for i in range(len(orig_rows))] for j in tab.basis]
    cb = [cost[j] for j in tab.basis]
    y_kept = solve(B, cb) if B else []
    y = [Fraction(0)] * m
    for rid, v in zip(row_ids, y_kept):
        y[rid] = v
    duals = [(-v if f else v) * sign for v, f in zip(y, flips)]

    value = p.value(x)
    dual_value = p.offset + sum((d * b for d, (_, _, b) in zip(duals, p.constraints)), Fraction(0))
    if dual_value != value:
        raise ArithmeticError(f"strong duality failed: {value} != {dual_value}")
    return LpResult("optimal", value, x, duals, tab.pivots)

