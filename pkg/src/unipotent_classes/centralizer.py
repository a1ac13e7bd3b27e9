"""Rows of the centralizer system and fraction-free row reduction.

For a symbolic element x = sum_m t_m e_{beta(m)} the coefficient of e_{beta_i}
in [x, sum_k y_k e_{beta_k}] is the linear form sum P_ik(t) y_k; y lies in the
centralizer modulo the tail subspace iff the first rows annihilate it.  The
matrix of these rows is kept in row-reduced form with a gcd-scaled update that
never leaves Z[t], and the pivot bookkeeping records which rows raised the
rank on the family being processed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

from .poly import MPoly, PrimeLog, ZERO, exact_divide, gcd, poly_str, primitive
from .roots import RootSystem


@dataclass
class CentralizerMatrix:
    """Reduced rows plus the pivot column (0 = the row vanished) per row."""

    ncols: int
    rows: list[list[MPoly]] = field(default_factory=list)
    pivots: list[int] = field(default_factory=list)

    def copy(self) -> "CentralizerMatrix":
        return CentralizerMatrix(self.ncols, [list(r) for r in self.rows], list(self.pivots))

    def dump(self, names: Optional[Callable[[int], str]] = None) -> str:
        lines = []
        for row, piv in zip(self.rows, self.pivots):
            cells = ", ".join(poly_str(p, names) for p in row)
            lines.append(f"[{cells}]  pivot={piv}")
        return "\n".join(lines)


def p_row(rs: RootSystem, rn_positions: Sequence[tuple[int, int]], i: int) -> list[MPoly]:
    """Raw row i of the centralizer system: entry k is
    sum over Rn positions (var, m) with beta_m + beta_k = beta_i of N(m, k) t_var."""
    row = [ZERO] * rs.N
    for var, m in rn_positions:
        for k in range(1, i):
            if rs.sum_index(m, k) == i:
                n = rs.structure_constant(m, k)
                row[k - 1] = row[k - 1] + MPoly.var(var, n)
    return row


def row_content_normalize(row: list[MPoly], log: Optional[PrimeLog] = None) -> list[MPoly]:
    """Divide a whole row by its integer content, logging the primes."""
    from math import gcd as igcd

    c = 0
    for p in row:
        c = igcd(c, p.content())
        if c == 1:
            return row
    if c in (0, 1):
        return row
    if log is not None:
        log.log_int(c)
    divisor = MPoly.const(c)
    return [exact_divide(p, divisor) for p in row]


def append_and_reduce(q: CentralizerMatrix, row: Sequence[MPoly],
                      log: Optional[PrimeLog] = None) -> list[MPoly]:
    """Eliminate the pivot columns of earlier rows from `row` using the
    gcd-scaled fraction-free update, then normalize the content.  The caller
    appends the result together with its pivot decision."""
    out = list(row)
    for j, pj in enumerate(q.pivots):
        if pj == 0:
            continue
        a = out[pj - 1]
        if a.is_zero:
            continue
        b = q.rows[j][pj - 1]
        g = gcd(a, b)
        mult_new = exact_divide(b, g, log)
        mult_old = exact_divide(a, g, log)
        prow = q.rows[j]
        out = [out[k] * mult_new - prow[k] * mult_old for k in range(len(out))]
        out = row_content_normalize(out, log)
    return row_content_normalize(out, log)


def specialize_rank(rows: Sequence[Sequence[MPoly]], values: dict[int, int], p: int) -> int:
    """Rank over F_p of the rows evaluated at an integer point (test support)."""
    mat = [[cell.evaluate(values, p) for cell in r] for r in rows]
    rank = 0
    ncols = len(mat[0]) if mat else 0
    col = 0
    r = 0
    while r < len(mat) and col < ncols:
        piv = next((i for i in range(r, len(mat)) if mat[i][col] % p), None)
        if piv is None:
            col += 1
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        inv = pow(mat[r][col], -1, p)
        mat[r] = [(x * inv) % p for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][col] % p:
                f = mat[i][col]
                mat[i] = [(x - f * y) % p for x, y in zip(mat[i], mat[r])]
        r += 1
        col += 1
        rank += 1
    return rank
