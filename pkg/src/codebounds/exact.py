"""Small exact linear algebra over Fraction (dense, list-of-lists)."""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Matrix = list[list[Fraction]]


def to_q(rows: Sequence[Sequence]) -> Matrix:
    return [[Fraction(v) for v in r] for r in rows]


def matmul(a: Matrix, b: Matrix) -> Matrix:
    bt = list(zip(*b))
    return [[sum((x * y for x, y in zip(r, c) if x and y), Fraction(0)) for c in bt] for r in a]


def transpose(a: Matrix) -> Matrix:
    return [list(r) for r in zip(*a)]


def psd_witness(m: Sequence[Sequence[Fraction]]) -> tuple[bool, str]:
    """Exact PSD test by symmetric elimination with positive diagonal pivots.

    A symmetric matrix is PSD iff every pivot is >= 0 and a zero diagonal
    entry has a zero row.  Returns (ok, reason).
    """
    a = [list(map(Fraction, r)) for r in m]
    n = len(a)
    for r in range(n):
        if len(a[r]) != n:
            raise ValueError("matrix is not square")
        for c in range(r):
            if a[r][c] != a[c][r]:
                raise ValueError("matrix is not symmetric")
    alive = list(range(n))
    while alive:
        neg = next((i for i in alive if a[i][i] < 0), None)
        if neg is not None:
            return False, f"negative pivot at index {neg}"
        piv = next((i for i in alive if a[i][i] > 0), None)
        if piv is None:
            for i in alive:
                for j in alive:
                    if a[i][j] != 0:
                        return False, f"zero diagonal with nonzero entry at ({i}, {j})"
            return True, ""
        alive.remove(piv)
        d = a[piv][piv]
        col = {i: a[i][piv] for i in alive if a[i][piv] != 0}
        for i, ci in col.items():
            f = ci / d
            row_i = a[i]
            for j, cj in col.items():
                row_i[j] -= f * cj
    return True, ""


def is_psd(m) -> bool:
    return psd_witness(m)[0]


def rref(a: Matrix) -> tuple[Matrix, list[int]]:
    a = [list(r) for r in a]
    rows = len(a)
    cols = len(a[0]) if a else 0
    pivots = []
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        a[r] = [v * inv for v in a[r]]
        for i in range(rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return a, pivots


def nullspace(a: Matrix, ncols: int | None = None) -> Matrix:
    """Basis of {x : a x = 0}, as a list of vectors."""
    if not a:
        n = ncols or 0
        return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    n = len(a[0])
    r, piv = rref(a)
    free = [c for c in range(n) if c not in piv]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for row, pc in zip(r, piv):
            v[pc] = -row[f]
        basis.append(v)
    return basis


def solve(a: Matrix, b: Sequence[Fraction]) -> list[Fraction]:
    """Solve a square nonsingular system exactly."""
    aug = [list(r) + [Fraction(v)] for r, v in zip(a, b)]
    r, piv = rref(aug)
    n = len(a)
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("singular system")
    return [r[i][n] for i in range(n)]


def inverse(a: Matrix) -> Matrix:
    n = len(a)
    aug = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(a)]
    r, piv = rref(aug)
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in r]


def ldl_sos(m: Sequence[Sequence[Fraction]]) -> list[tuple[Fraction, list[Fraction]]]:
    """For a PSD Gram matrix G return [(d_i, l_i)] with G = sum d_i l_i l_i^T, d_i > 0."""
    a = [list(map(Fraction, r)) for r in m]
    n = len(a)
    out = []
    alive = list(range(n))
    while alive:
        piv = next((i for i in alive if a[i][i] > 0), None)
        if piv is None:
            if any(a[i][j] != 0 for i in alive for j in alive):
                raise ValueError("matrix is not PSD")
            break
        if any(a[i][i] < 0 for i in alive):
            raise ValueError("matrix is not PSD")
        d = a[piv][piv]
        vec = [Fraction(0)] * n
        for i in alive:
            vec[i] = a[i][piv] / d
        out.append((d, vec))
        alive.remove(piv)
        for i in alive:
            for j in alive:
                a[i][j] -= d * vec[i] * vec[j]
    return out
