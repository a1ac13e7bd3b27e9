"""Irreducible root systems A-G with a fixed enumeration and Chevalley
structure constants.

Positive roots are stored as integer coefficient vectors over the simple
roots, enumerated by height and then by descending lexicographic order of
the coefficient vector, so that the first simple root comes first and the
enumeration refines the componentwise partial order.

Structure constant signs follow the extraspecial-pair convention: for each
non-simple positive root the pair (alpha, beta) with alpha + beta equal to it
and alpha earliest in the enumeration gets a positive constant, and all other
pairs are resolved from those through the Jacobi identity.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .poly import _prime_factors

SERIES = ("A", "B", "C", "D", "E", "F", "G")

_EXPECTED_COUNTS = {
    "A": lambda r: r * (r + 1) // 2,
    "B": lambda r: r * r,
    "C": lambda r: r * r,
    "D": lambda r: r * (r - 1),
    "E": lambda r: {6: 36, 7: 63, 8: 120}[r],
    "F": lambda r: 24,
    "G": lambda r: 6,
}


@dataclass(frozen=True)
class Root:
    """A positive root: coefficients over the simple basis plus its position."""

    coeffs: tuple[int, ...]
    index: int  # 1-based position in the enumeration

    @property
    def height(self) -> int:
        return sum(self.coeffs)

    def __repr__(self) -> str:
        return f"Root({self.coeffs}, #{self.index})"


def cartan_matrix(series: str, rank: int) -> list[list[int]]:
    """Cartan matrix with C[i][j] = <alpha_j, alpha_i^vee> (0-based indices)."""
    _check_type(series, rank)
    c = [[2 if i == j else 0 for j in range(rank)] for i in range(rank)]

    def edge(i, j):
        c[i][j] = -1
        c[j][i] = -1

    if series == "A":
        for i in range(rank - 1):
            edge(i, i + 1)
    elif series in ("B", "C"):
        for i in range(rank - 2):
            edge(i, i + 1)
        if series == "B":  # last simple root short
            c[rank - 2][rank - 1] = -1
            c[rank - 1][rank - 2] = -2
        else:  # last simple root long
            c[rank - 2][rank - 1] = -2
            c[rank - 1][rank - 2] = -1
    elif series == "D":
        for i in range(rank - 3):
            edge(i, i + 1)
        edge(rank - 3, rank - 2)
        edge(rank - 3, rank - 1)
    elif series == "G":  # alpha_1 short
        c[0][1] = -3
        c[1][0] = -1
    elif series == "F":  # alpha_1, alpha_2 long
        edge(0, 1)
        c[1][2] = -1
        c[2][1] = -2
        edge(2, 3)
    elif series == "E":
        chain = [0, 2, 3, 4, 5, 6, 7][: rank - 1]
        for a, b in zip(chain, chain[1:]):
            edge(a, b)
        edge(1, 3)
    return c


def _check_type(series: str, rank: int) -> None:
    if series not in SERIES:
        raise ValueError(f"unknown series {series!r}")
    lo = {"A": 1, "B": 2, "C": 2, "D": 3, "E": 6, "F": 4, "G": 2}[series]
    hi = {"E": 8, "F": 4, "G": 2}.get(series, 8)
    if not (lo <= rank <= hi):
        raise ValueError(f"{series}{rank} is not a supported irreducible type "
                         f"(rank must be in [{lo}, {hi}])")


class RootSystem:
    """Positive roots, structure constants and derived combinatorics."""

    def __init__(self, series: str, rank: int,
                 _signs: Optional[dict[tuple[int, int], int]] = None) -> None:
        _check_type(series, rank)
        self.series = series
        self.rank = rank
        self.cartan = cartan_matrix(series, rank)
        vecs = _positive_root_vectors(self.cartan, rank)
        vecs.sort(key=lambda v: (sum(v), tuple(-x for x in v)))
        self.positive_roots = tuple(
            Root(v, i + 1) for i, v in enumerate(vecs)
        )
        self.N = len(vecs)
        expected = _EXPECTED_COUNTS[series](rank)
        if self.N != expected:
            raise AssertionError(f"{series}{rank}: built {self.N} roots, expected {expected}")
        self._index = {r.coeffs: r.index for r in self.positive_roots}
        self._all_vecs = frozenset(self._index) | frozenset(
            tuple(-x for x in v) for v in self._index
        )
        self._sum_index: dict[tuple[int, int], int] = {}
        for a in self.positive_roots:
            for b in self.positive_roots:
                s = tuple(x + y for x, y in zip(a.coeffs, b.coeffs))
                k = self._index.get(s)
                if k is not None:
                    self._sum_index[(a.index, b.index)] = k
        self._nmat = _structure_constants(self) if _signs is None else dict(_signs)
        high = self.positive_roots[-1]
        self.bad_primes = frozenset(
            p for c in high.coeffs for p in _prime_factors(c)
        )

    # -- basic queries ------------------------------------------------------

    @property
    def label(self) -> str:
        return f"{self.series}{self.rank}"

    @property
    def highest_root(self) -> Root:
        return self.positive_roots[-1]

    def root(self, i: int) -> Root:
        return self.positive_roots[i - 1]

    def is_root(self, vec: Sequence[int]) -> bool:
        return tuple(vec) in self._all_vecs

    def root_index(self, vec: Sequence[int]) -> Optional[int]:
        return self._index.get(tuple(vec))

    def sum_index(self, i: int, j: int) -> Optional[int]:
        """Index of beta_i + beta_j when that is a positive root."""
        return self._sum_index.get((i, j))

    def p_down(self, alpha: Sequence[int], beta: Sequence[int]) -> int:
        """Largest p with beta - p*alpha a root."""
        p = 0
        v = list(beta)
        while True:
            v = [x - y for x, y in zip(v, alpha)]
            if tuple(v) in self._all_vecs:
                p += 1
            else:
                return p

    def structure_constant(self, a, b) -> int:
        """N with [e_a, e_b] = N e_{a+b}; 0 when a+b is not a root."""
        i = a.index if isinstance(a, Root) else int(a)
        j = b.index if isinstance(b, Root) else int(b)
        if i == j:
            return 0
        if (i, j) in self._nmat:
            return self._nmat[(i, j)]
        if (j, i) in self._nmat:
            return -self._nmat[(j, i)]
        return 0

    def heights(self) -> tuple[int, ...]:
        return tuple(r.height for r in self.positive_roots)

    def resigned(self, signs: Sequence[int]) -> "RootSystem":
        """Same root system with the basis rescaled by signs (a valid Chevalley
        basis again); used to check that computed class counts do not depend
        on the sign convention."""
        if len(signs) != self.N or any(s not in (1, -1) for s in signs):
            raise ValueError("signs must be a +-1 vector of length N")
        new = {}
        for (i, j), n in self._nmat.items():
            k = self._sum_index[(i, j)]
            new[(i, j)] = signs[i - 1] * signs[j - 1] * signs[k - 1] * n
        return RootSystem(self.series, self.rank, _signs=new)

    def to_json_dict(self) -> dict:
        return {
            "type": self.label,
            "rank": self.rank,
            "positive_roots": [list(r.coeffs) for r in self.positive_roots],
            "heights": list(self.heights()),
            "structure_constants": sorted(
                [i, j, n] for (i, j), n in self._nmat.items()
            ),
            "bad_primes": sorted(self.bad_primes),
        }


def parse_label(label: str) -> tuple[str, int]:
    label = label.strip().upper().replace("_", "")
    if len(label) < 2 or label[0] not in SERIES or not label[1:].isdigit():
        raise ValueError(f"cannot parse root system label {label!r}")
    return label[0], int(label[1:])


def build(series_or_label: str, rank: Optional[int] = None) -> RootSystem:
    """Construct a root system from ("B", 3) or from a label like "B3"."""
    if rank is None:
        series, rank = parse_label(series_or_label)
    else:
        series = series_or_label.strip().upper()
    return RootSystem(series, rank)


def _positive_root_vectors(cartan: list[list[int]], rank: int) -> list[tuple[int, ...]]:
    simple = [tuple(1 if j == i else 0 for j in range(rank)) for i in range(rank)]
    known: set[tuple[int, ...]] = set(simple)
    frontier = list(simple)
    while frontier:
        nxt: list[tuple[int, ...]] = []
        for beta in frontier:
            for i in range(rank):
                pairing = sum(beta[j] * cartan[i][j] for j in range(rank))
                p = 0
                v = list(beta)
                while True:
                    v[i] -= 1
                    tv = tuple(v)
                    if tv in known or tuple(-x for x in tv) in known or all(x == 0 for x in tv):
                        if all(x == 0 for x in tv):
                            break
                        p += 1
                    else:
                        break
                # beta - alpha_i for positive beta of height >= 2 stays positive
                # or vanishes, so membership in `known` detects the full string.
                r = p - pairing
                if r >= 1:
                    up = list(beta)
                    up[i] += 1
                    t = tuple(up)
                    if t not in known:
                        known.add(t)
                        nxt.append(t)
        frontier = nxt
    return sorted(known)


def _structure_constants(rs: RootSystem) -> dict[tuple[int, int], int]:
    """Solve for all N(beta_i, beta_j) from extraspecial normalization plus
    Jacobi identities on triples of positive roots."""
    nmat: dict[tuple[int, int], int] = {}

    def get(i: int, j: int) -> Optional[int]:
        if rs.sum_index(i, j) is None:
            return 0
        if (i, j) in nmat:
            return nmat[(i, j)]
        if (j, i) in nmat:
            return -nmat[(j, i)]
        return None

    for gamma in rs.positive_roots:
        if gamma.height == 1:
            continue
        pairs = []
        for a in rs.positive_roots:
            if a.height >= gamma.height:
                break
            rest = tuple(x - y for x, y in zip(gamma.coeffs, a.coeffs))
            j = rs.root_index(rest)
            if j is not None and a.index < j:
                pairs.append((a.index, j))
        assert pairs, f"no additive decomposition for {gamma}"
        i0, j0 = pairs[0]  # extraspecial: minimal first component
        nmat[(i0, j0)] = rs.p_down(rs.root(i0).coeffs, rs.root(j0).coeffs) + 1
        unknown = {p for p in pairs[1:]}
        if not unknown:
            continue

        # Jacobi on positive triples x < y < z with x + y + z = gamma gives
        # linear relations between pairs summing to gamma.
        equations = []
        for x in rs.positive_roots:
            for y in rs.positive_roots:
                if y.index <= x.index:
                    continue
                rest = tuple(g - a - b for g, a, b in zip(gamma.coeffs, x.coeffs, y.coeffs))
                z = rs.root_index(rest)
                if z is None or z <= y.index:
                    continue
                eq = []  # (known multiplier, pair key, orientation sign)
                ok = True
                for (a, b, c) in ((x.index, y.index, z), (y.index, z, x.index), (z, x.index, y.index)):
                    ab = rs.sum_index(a, b)
                    if ab is None:
                        continue
                    low = get(a, b)
                    if low is None:
                        ok = False
                        break
                    key, sign = ((ab, c), 1) if ab < c else ((c, ab), -1)
                    eq.append((low, key, sign))
                if ok and eq:
                    equations.append(eq)

        progress = True
        while unknown and progress:
            progress = False
            for eq in equations:
                missing = [(m, k, s) for m, k, s in eq if k in unknown]
                if len(missing) != 1:
                    continue
                acc = 0
                for m, k, s in eq:
                    if k not in unknown:
                        acc += m * s * nmat[k]
                m, k, s = missing[0]
                coeff = m * s
                if coeff == 0:
                    continue
                val, r = divmod(-acc, coeff)
                assert r == 0, f"non-integral structure constant at {k}"
                nmat[k] = val
                unknown.discard(k)
                progress = True
        if unknown:
            _solve_linear(equations, unknown, nmat)
    return nmat


def _solve_linear(equations, unknown, nmat) -> None:
    """Exact fallback solve when single-unknown propagation stalls."""
    keys = sorted(unknown)
    pos = {k: i for i, k in enumerate(keys)}
    n = len(keys)
    rows: list[list[Fraction]] = []  # augmented rows [coeffs..., rhs]
    for eq in equations:
        row = [Fraction(0)] * (n + 1)
        touched = False
        for m, k, s in eq:
            if k in pos:
                row[pos[k]] += m * s
                touched = True
            else:
                row[n] -= m * s * nmat[k]
        if touched:
            rows.append(row)
    lead = 0
    for col in range(n):
        pividx = next((i for i in range(lead, len(rows)) if rows[i][col] != 0), None)
        if pividx is None:
            continue
        rows[lead], rows[pividx] = rows[pividx], rows[lead]
        prow = rows[lead]
        for i, row in enumerate(rows):
            if i != lead and row[col] != 0:
                factor = row[col] / prow[col]
                rows[i] = [a - factor * b for a, b in zip(row, prow)]
        lead += 1
    for row in rows:
        support = [c for c in range(n) if row[c] != 0]
        if len(support) == 1:
            val = row[n] / row[support[0]]
            assert val.denominator == 1, "non-integral structure constant"
            k = keys[support[0]]
            if k in unknown:
                nmat[k] = int(val)
                unknown.discard(k)
        else:
            assert not support or row[n] == 0 or len(support) > 1, "inconsistent"
    assert not unknown, "structure constants underdetermined"


# -- integer linear algebra -------------------------------------------------


def smith_diagonal(rows: Iterable[Sequence[int]]) -> list[int]:
    """Nonnegative diagonal of the Smith normal form of an integer matrix."""
    m = [list(r) for r in rows]
    if not m or not m[0]:
        return []
    nr, nc = len(m), len(m[0])
    diag: list[int] = []
    top = 0
    while top < min(nr, nc):
        # Find the nonzero entry of least magnitude in the remaining block.
        best = None
        for i in range(top, nr):
            for j in range(top, nc):
                if m[i][j] and (best is None or abs(m[i][j]) < abs(m[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        bi, bj = best
        m[top], m[bi] = m[bi], m[top]
        for row in m:
            row[top], row[bj] = row[bj], row[top]
        pivot = m[top][top]
        dirty = False
        for i in range(top + 1, nr):
            q = m[i][top] // pivot
            if q:
                for j in range(top, nc):
                    m[i][j] -= q * m[top][j]
            if m[i][top]:
                dirty = True
        for j in range(top + 1, nc):
            q = m[top][j] // pivot
            if q:
                for i in range(top, nr):
                    m[i][j] -= q * m[i][top]
            if m[top][j]:
                dirty = True
        if dirty:
            continue
        # Ensure divisibility of the rest of the block by the pivot.
        viol = None
        for i in range(top + 1, nr):
            for j in range(top + 1, nc):
                if m[i][j] % pivot:
                    viol = i
                    break
            if viol is not None:
                break
        if viol is not None:
            for j in range(top, nc):
                m[top][j] += m[viol][j]
            continue
        diag.append(abs(pivot))
        top += 1
    while len(diag) < min(nr, nc):
        diag.append(0)
    return diag


def independent(rs: RootSystem, roots: Iterable) -> bool:
    """Rational independence of the coefficient vectors of the given roots."""
    vecs = [_as_coeffs(rs, r) for r in roots]
    if not vecs:
        raise ValueError("empty root subset")
    diag = smith_diagonal([list(col) for col in zip(*vecs)])
    return all(d != 0 for d in diag) and len(diag) >= len(vecs)


def snf_diagonal(rs: RootSystem, roots: Iterable) -> list[int]:
    """Smith diagonal of the rank x k matrix of coordinate vectors; the roots
    must be independent."""
    vecs = [_as_coeffs(rs, r) for r in roots]
    if not vecs:
        raise ValueError("empty root subset")
    matrix = [list(col) for col in zip(*vecs)]
    diag = smith_diagonal(matrix)
    if len(diag) < len(vecs) or any(d == 0 for d in diag):
        raise ValueError("roots are linearly dependent")
    return diag


def _as_coeffs(rs: RootSystem, r) -> tuple[int, ...]:
    if isinstance(r, Root):
        return r.coeffs
    if isinstance(r, int):
        return rs.root(r).coeffs
    return tuple(r)
