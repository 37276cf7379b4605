"""Block SDP problems in SDPA standard form, plus the SDPA sparse file format.

Standard form (SDPA's "primal"):

    minimize   c . x
    subject to S = sum_i x_i F_i - F_0  is PSD (block diagonal).

Its dual is: maximize F_0 . Y subject to F_i . Y = c_i, Y PSD.  Diagonal
blocks (negative sizes) hold entrywise nonnegativity constraints.

A problem may carry a user-facing objective: ``value = offset + c.x`` for
minimization, or ``value = offset - c.x`` when ``maximize`` is set (the
caller's objective was negated to fit the form).
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Sequence

import numpy as np

Entry = tuple[int, int, int, int, object]  # (matno, block, i, j) 0-based block/i/j, i <= j


@dataclass
class SdpProblem:
    block_sizes: list[int]
    c: list
    entries: list[Entry] = field(default_factory=list)
    maximize: bool = False
    offset: object = 0
    names: list[str] | None = None

    def __post_init__(self):
        nb = len(self.block_sizes)
        m = len(self.c)
        for mat, b, i, j, v in self.entries:
            if not 0 <= mat <= m:
                raise ValueError(f"matrix index {mat} out of range")
            if not 0 <= b < nb:
                raise ValueError(f"block index {b} out of range")
            s = abs(self.block_sizes[b])
            if not (0 <= i <= j < s):
                raise ValueError(f"entry ({i}, {j}) invalid for block {b} of size {s}")
            if self.block_sizes[b] < 0 and i != j:
                raise ValueError("off-diagonal entry in a diagonal block")
            if isinstance(v, float) and not np.isfinite(v):
                raise ValueError("non-finite entry")

    @property
    def m(self) -> int:
        return len(self.c)

    @property
    def sense(self) -> int:
        return -1 if self.maximize else 1

    def user_value(self, sdpa_objective):
        return self.offset + self.sense * sdpa_objective

    def to_float(self) -> "SdpProblem":
        return SdpProblem(list(self.block_sizes), [float(v) for v in self.c],
                          [(a, b, i, j, float(v)) for a, b, i, j, v in self.entries],
                          self.maximize, float(self.offset), self.names)

    def same_data(self, other: "SdpProblem") -> bool:
        """Equal as SDPA data (floats, entries order-insensitive)."""
        a, b = self.to_float(), other.to_float()
        return (a.block_sizes == b.block_sizes and a.c == b.c
                and sorted(a.entries) == sorted(b.entries))

    # --- dense views --------------------------------------------------------
    def dense(self):
        """Float arrays: c (m,), F0 blocks, F blocks of shape (m, s, s) or (m, s)."""
        m = self.m
        F0, F = [], []
        for s in self.block_sizes:
            if s < 0:
                F0.append(np.zeros(-s))
                F.append(np.zeros((m, -s)))
            else:
                F0.append(np.zeros((s, s)))
                F.append(np.zeros((m, s, s)))
        for mat, b, i, j, v in self.entries:
            v = float(v)
            target = F0[b] if mat == 0 else F[b][mat - 1]
            if self.block_sizes[b] < 0:
                target[i] += v
            else:
                target[i, j] += v
                if i != j:
                    target[j, i] += v
        return np.array([float(v) for v in self.c]), F0, F

    def slack_exact(self, x: Sequence[Fraction]) -> list:
        """S = sum x_i F_i - F_0 blockwise, exact: matrices or diagonal lists."""
        blocks = []
        for s in self.block_sizes:
            if s < 0:
                blocks.append([Fraction(0)] * (-s))
            else:
                blocks.append([[Fraction(0)] * s for _ in range(s)])
        for mat, b, i, j, v in self.entries:
            coef = -Fraction(v) if mat == 0 else Fraction(v) * Fraction(x[mat - 1])
            if coef == 0:
                continue
            if self.block_sizes[b] < 0:
                blocks[b][i] += coef
            else:
                blocks[b][i][j] += coef
                if i != j:
                    blocks[b][j][i] += coef
        return blocks

    def objective_exact(self, x: Sequence[Fraction]) -> Fraction:
        return Fraction(self.offset) + self.sense * sum(
            (Fraction(ci) * Fraction(xi) for ci, xi in zip(self.c, x)), Fraction(0))


# --- SDPA sparse format ------------------------------------------------------

def _fmt(v) -> str:
    return repr(float(v))


def format_sdpa(p: SdpProblem) -> str:
    lines = [str(p.m), str(len(p.block_sizes)),
             " ".join(str(s) for s in p.block_sizes),
             " ".join(_fmt(v) for v in p.c)]
    for mat, b, i, j, v in p.entries:
        if float(v) == 0.0:
            continue
        lines.append(f"{mat} {b + 1} {i + 1} {j + 1} {_fmt(v)}")
    return "\n".join(lines) + "\n"


def export_sdpa(p: SdpProblem, path) -> Path:
    path = Path(path)
    path.write_text(format_sdpa(p))
    return path


class SdpaParseError(ValueError):
    pass


def parse_sdpa(text: str) -> SdpProblem:
    """Parse SDPA sparse input; leading comment lines ('"' or '*') are skipped."""
    raw = [ln for ln in text.splitlines()]
    lines = []
    for ln in raw:
        s = ln.strip()
        if not lines and (not s or s[0] in '"*'):
            continue
        if s:
            lines.append((s, ln))
    if len(lines) < 3:
        raise SdpaParseError("truncated SDPA file")

    def nums(s: str) -> list[str]:
        return [t for t in re.split(r"[\s,{}()]+", s) if t]

    try:
        m = int(nums(lines[0][0])[0])
        nb = int(nums(lines[1][0])[0])
        sizes = [int(t) for t in nums(lines[2][0])][:nb]
    except (ValueError, IndexError) as exc:
        raise SdpaParseError(f"bad header: {exc}") from None
    if len(sizes) != nb:
        raise SdpaParseError("block size line does not match nblocks")
    # the objective may wrap over several lines
    c: list[float] = []
    k = 3
    while len(c) < m:
        if k >= len(lines):
            raise SdpaParseError("objective vector truncated")
        c.extend(float(t) for t in nums(lines[k][0]))
        k += 1
    if len(c) != m:
        raise SdpaParseError("objective vector length differs from m")
    entries = []
    for lineno, (s, _) in enumerate(lines[k:], start=k + 1):
        t = nums(s)
        if len(t) != 5:
            raise SdpaParseError(f"line {lineno}: expected 5 fields")
        mat, b, i, j = (int(v) for v in t[:4])
        v = float(t[4])
        if i > j:
            i, j = j, i
        entries.append((mat, b - 1, i - 1, j - 1, v))
    try:
        return SdpProblem(sizes, c, entries)
    except ValueError as exc:
        raise SdpaParseError(str(exc)) from None


def read_sdpa(path) -> SdpProblem:
    return parse_sdpa(Path(path).read_text())


# --- solution files (CSDP layout) ----------------------------------------------
#
# Line 1 holds the vector x; then "1 blk i j v" lines give the slack S
# (CSDP's Z) and "2 blk i j v" lines the dual matrix Y (CSDP's X), upper
# triangle, 1-based.  CSDP's primal "max tr(C X), A_i . X = a_i" is the dual
# side of the standard form above, hence the renaming.

def format_solution(p: SdpProblem, x, S, Y) -> str:
    lines = [" ".join(_fmt(v) for v in x)]
    for tag, blocks in (("1", S), ("2", Y)):
        for b, (blk, s) in enumerate(zip(blocks, p.block_sizes)):
            blk = np.asarray(blk, dtype=float)
            if s < 0:
                lines += [f"{tag} {b + 1} {i + 1} {i + 1} {_fmt(v)}" for i, v in enumerate(blk) if v != 0]
            else:
                lines += [f"{tag} {b + 1} {i + 1} {j + 1} {_fmt(blk[i, j])}"
                          for i in range(s) for j in range(i, s) if blk[i, j] != 0]
    return "\n".join(lines) + "\n"


def parse_solution(text: str, p: SdpProblem):
    """Read a solution file for problem p: returns (x, S blocks, Y blocks) as floats."""
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise SdpaParseError("empty solution file")
    try:
        x = np.array([float(t) for t in re.split(r"[\s,]+", lines[0])])
    except ValueError as exc:
        raise SdpaParseError(f"line 1: {exc}") from None
    if len(x) != p.m:
        raise SdpaParseError(f"line 1: expected {p.m} values, got {len(x)}")

    def empty():
        return [np.zeros(-s) if s < 0 else np.zeros((s, s)) for s in p.block_sizes]

    mats = {1: empty(), 2: empty()}
    for lineno, ln in enumerate(lines[1:], start=2):
        t = ln.split()
        if len(t) != 5:
            raise SdpaParseError(f"line {lineno}: expected 5 fields")
        try:
            tag, b, i, j = (int(v) for v in t[:4])
            v = float(t[4])
        except ValueError as exc:
            raise SdpaParseError(f"line {lineno}: {exc}") from None
        if tag not in mats or not 1 <= b <= len(p.block_sizes):
            raise SdpaParseError(f"line {lineno}: bad matrix or block number")
        s = p.block_sizes[b - 1]
        blk = mats[tag][b - 1]
        if not (1 <= i <= abs(s) and 1 <= j <= abs(s)) or (s < 0 and i != j):
            raise SdpaParseError(f"line {lineno}: entry out of range")
        if s < 0:
            blk[i - 1] = v
        else:
            blk[i - 1, j - 1] = blk[j - 1, i - 1] = v
    return x, mats[1], mats[2]


def read_solution(path, p: SdpProblem):
    return parse_solution(Path(path).read_text(), p)
