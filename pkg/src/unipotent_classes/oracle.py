"""Ground-truth brute force: the adjoint action of the full unipotent group
on its Lie algebra over a small field, orbit counts by union-find and by
Burnside's lemma, and verification that engine families partition the space.

The one-parameter subgroup for a positive root acts through the exponential
of the adjoint nilpotent, computed exactly over Q; Chevalley integrality of
the resulting matrices doubles as an audit of the structure constants.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Optional, Sequence

import numpy as np

from .engine import RunResult, Stratum
from .gf import gf_table, prime_power
from .roots import Root, RootSystem, build


class OracleBudgetError(RuntimeError):
    """The requested state space or group enumeration exceeds the guardrail."""


@dataclass(frozen=True)
class AdjointGenerator:
    """exp(s ad e_root) on the positive part, as integer matrices by power of s."""

    root: Root
    matrices: tuple  # tuple of N x N integer numpy arrays, index = power of s

    def action_table(self) -> dict[int, list[tuple[int, int, int]]]:
        """For each source basis index i (1-based): list of (target, constant,
        power) with x(s) e_i = sum constant * s^power * e_target."""
        out: dict[int, list[tuple[int, int, int]]] = {}
        n = self.matrices[0].shape[0]
        for i in range(n):
            entries = []
            for power, m in enumerate(self.matrices):
                for j in range(n):
                    if m[j, i]:
                        entries.append((j + 1, int(m[j, i]), power))
            out[i + 1] = entries
        return out

    def specialize(self, s: int, q: int) -> np.ndarray:
        acc = np.zeros_like(self.matrices[0])
        for power, m in enumerate(self.matrices):
            acc = (acc + m * pow(s, power, q)) % q
        return acc


@dataclass(frozen=True)
class OrbitCensus:
    q: int
    count: int
    orbit_sizes: tuple[int, ...]  # multiset, ascending
    labels: Optional[np.ndarray] = None  # orbit id per encoded state

    def __post_init__(self) -> None:
        pass


def build_adjoint_generators(rs: RootSystem) -> list[AdjointGenerator]:
    n = rs.N
    gens = []
    for alpha in rs.positive_roots:
        ad = np.zeros((n, n), dtype=object)
        for beta in rs.positive_roots:
            k = rs.sum_index(alpha.index, beta.index)
            if k is not None:
                ad[k - 1, beta.index - 1] = rs.structure_constant(alpha, beta)
        mats = [np.identity(n, dtype=object)]
        acc = np.identity(n, dtype=object)
        kfac = 0
        while True:
            kfac += 1
            acc = ad @ acc
            if not acc.any():
                break
            rem = acc % kfac
            if rem.any():
                raise ArithmeticError(
                    f"non-integral adjoint entry for {rs.label} root {alpha.index}")
            acc = acc // kfac
            mats.append(acc.copy())
        gens.append(AdjointGenerator(alpha, tuple(int64_if_possible(m) for m in mats)))
    return gens


def int64_if_possible(m: np.ndarray) -> np.ndarray:
    try:
        return m.astype(np.int64)
    except OverflowError:  # pragma: no cover - entries stay tiny in practice
        return m


def _subspace_indices(rs: RootSystem, min_height: int) -> list[int]:
    return [r.index - 1 for r in rs.positive_roots if r.height >= min_height]


def _check_good(rs: RootSystem, q: int) -> int:
    p, _ = prime_power(q)
    if p in rs.bad_primes:
        raise ValueError(f"{q} is a power of the bad prime {p} for {rs.label}")
    return p


class _UnionFind:
    __slots__ = ("parent",)

    def __init__(self, n: int) -> None:
        self.parent = np.arange(n, dtype=np.int64)

    def find(self, x: int) -> int:
        parent = self.parent
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, x: int, y: int) -> None:
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            self.parent[max(rx, ry)] = min(rx, ry)


def count_orbits_unionfind(rs, q: int, min_height: int = 1, *,
                           max_states: int = 2 ** 24,
                           keep_labels: bool = False) -> OrbitCensus:
    """Exact orbit census of the adjoint action on the height >= min_height
    part, by joining every state to its images under all root generators."""
    if isinstance(rs, str):
        rs = build(rs)
    p = _check_good(rs, q)
    idx = _subspace_indices(rs, min_height)
    nsub = len(idx)
    if q ** nsub > max_states:
        raise OracleBudgetError(
            f"state space q^{nsub} = {q ** nsub} exceeds the guardrail {max_states}")
    gens = build_adjoint_generators(rs)
    if q == p:
        return _unionfind_prime(rs, q, idx, gens, keep_labels)
    return _unionfind_table(rs, q, idx, gens, keep_labels)


def _encode_states(q: int, nsub: int) -> np.ndarray:
    """All q^nsub coordinate vectors, row per state, base-q digit order."""
    states = np.zeros((q ** nsub, nsub), dtype=np.int64)
    for pos in range(nsub):
        block = q ** pos
        states[:, pos] = (np.arange(q ** nsub) // block) % q
    return states

def _unionfind_prime(rs, q, idx, gens, keep_labels) -> OrbitCensus:
    nsub = len(idx)
    total = q ** nsub
    states = _encode_states(q, nsub)
    weights = np.array([q ** k for k in range(nsub)], dtype=np.int64)
    uf = _UnionFind(total)
    for gen in gens:
        for s in range(1, q):
            m = gen.specialize(s, q)[np.ix_(idx, idx)]
            images = (states @ m.T % q) @ weights
            union, find = uf.union, uf.find
            for x in range(total):
                union(x, int(images[x]))
    labels = np.array([uf.find(x) for x in range(total)], dtype=np.int64)
    reps, sizes = np.unique(labels, return_counts=True)
    return OrbitCensus(q, len(reps), tuple(sorted(int(s) for s in sizes)),
                       labels if keep_labels else None)


def _unionfind_table(rs, q, idx, gens, keep_labels) -> OrbitCensus:
    gf = gf_table(q)
    nsub = len(idx)
    total = q ** nsub
    uf = _UnionFind(total)

    def decode(x: int) -> list[int]:
        return [(x // q ** k) % q for k in range(nsub)]

    def encode(v: Sequence[int]) -> int:
        out = 0
        for k, a in enumerate(v):
            out += a * q ** k
        return out

    for gen in gens:
        mats = [[[int(m[i, j]) for j in idx] for i in idx] for m in gen.matrices]
        for s in range(1, q):
            spec = [[0] * nsub for _ in range(nsub)]
            for power, mm in enumerate(mats):
                spow = 1
                for _ in range(power):
                    spow = gf.mul[spow][s]
                for i in range(nsub):
                    for j in range(nsub):
                        if mm[i][j]:
                            c = gf.from_int(mm[i][j])
                            spec[i][j] = gf.add[spec[i][j]][gf.mul[c][spow]]
            for x in range(total):
                v = decode(x)
                uf.union(x, encode(gf.matvec(spec, v)))
    labels = np.array([uf.find(x) for x in range(total)], dtype=np.int64)
    reps, sizes = np.unique(labels, return_counts=True)
    return OrbitCensus(q, len(reps), tuple(sorted(int(s) for s in sizes)),
                       labels if keep_labels else None)


def count_orbits_burnside(rs, q: int, min_height: int = 1, *,
                          max_group: int = 2 ** 22) -> int:
    """(1/|U|) sum over group elements of q^dim(fixed space), with every
    element enumerated once as an ordered product of root subgroup factors."""
    if isinstance(rs, str):
        rs = build(rs)
    p = _check_good(rs, q)
    n = rs.N
    if q ** n > max_group:
        raise OracleBudgetError(
            f"group enumeration q^{n} = {q ** n} exceeds the guardrail {max_group}")
    idx = _subspace_indices(rs, min_height)
    gens = build_adjoint_generators(rs)
    if q == p:
        total = _burnside_prime(rs, q, idx, gens)
    else:
        total = _burnside_table(rs, q, idx, gens)
    count, rem = divmod(total, q ** n)
    if rem:
        raise ArithmeticError("Burnside sum not divisible by the group order")
    return count


def _rank_mod_p(mat: np.ndarray, p: int) -> int:
    m = mat % p
    nrows, ncols = m.shape
    rank = 0
    r = 0
    for col in range(ncols):
        piv = None
        for i in range(r, nrows):
            if m[i, col] % p:
                piv = i
                break
        if piv is None:
            continue
        m[[r, piv]] = m[[piv, r]]
        inv = pow(int(m[r, col]), -1, p)
        m[r] = (m[r] * inv) % p
        for i in range(nrows):
            if i != r and m[i, col]:
                m[i] = (m[i] - m[i, col] * m[r]) % p
        r += 1
        rank += 1
        if r == nrows:
            break
    return rank


def _burnside_prime(rs, q, idx, gens) -> int:
    n = rs.N
    nsub = len(idx)
    mats = [[g.specialize(s, q) for s in range(q)] for g in gens]
    ident = np.identity(n, dtype=np.int64)
    sub = np.ix_(idx, idx)
    total = 0
    # Odometer over exponent vectors with a stack of prefix products.
    prefix = [ident]
    vec = [0] * n
    depth = 0
    while True:
        while depth < n:
            prefix.append(prefix[-1] @ mats[depth][vec[depth]] % q)
            depth += 1
        fixdim = nsub - _rank_mod_p((prefix[-1][sub] - ident[sub]) % q, q)
        total += q ** fixdim
        while depth > 0 and vec[depth - 1] == q - 1:
            vec[depth - 1] = 0
            prefix.pop()
            depth -= 1
        if depth == 0:
            return total
        vec[depth - 1] += 1
        prefix.pop()
        depth -= 1


def _burnside_table(rs, q, idx, gens) -> int:
    gf = gf_table(q)
    n = rs.N
    nsub = len(idx)

    def specialize(gen, s):
        out = [[0] * n for _ in range(n)]
        for power, m in enumerate(gen.matrices):
            spow = 1
            for _ in range(power):
                spow = gf.mul[spow][s]
            for i in range(n):
                row = m[i]
                for j in range(n):
                    if row[j]:
                        c = gf.from_int(int(row[j]))
                        out[i][j] = gf.add[out[i][j]][gf.mul[c][spow]]
        return out

    mats = [[specialize(g, s) for s in range(q)] for g in gens]
    ident = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    total = 0
    for vec in product(range(q), repeat=n):
        acc = ident
        for pos, s in enumerate(vec):
            if s:
                acc = gf.matmul(acc, mats[pos][s])
        diff = [[gf.add[acc[i][j]][gf.neg[1 if i == j else 0]]
                 for j in idx] for i in idx]
        fixdim = nsub - gf.rank(diff)
        total += q ** fixdim
    return total


# ---------------------------------------------------------------------------
# family partition verification


@dataclass
class PartitionReport:
    ok: bool
    q: int
    family_points: int
    orbit_count: int
    violations: list[str] = field(default_factory=list)

    def __str__(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        lines = [f"{status}: {self.family_points} family points vs "
                 f"{self.orbit_count} orbits at q={self.q}"]
        lines += [f"  {v}" for v in self.violations]
        return "\n".join(lines)


def enumerate_stratum_points(stratum: Stratum, rs: RootSystem, q: int):
    """Yield coefficient vectors (length N over F_q) of the stratum's points.
    Only prime q is supported; the engine run must have normalization off."""
    p, k = prime_power(q)
    if k != 1:
        raise ValueError("point enumeration requires a prime field")
    st = stratum.state
    if st.normalized:
        raise ValueError("enumerate points from a run with normalize=False")
    live = sorted(st.live)
    domains = []
    for var in live:
        domains.append(range(1, q) if st.live[var].unit else range(q))
    for combo in product(*domains):
        vals = dict(zip(live, combo))
        if any(a.evaluate(vals, q) != 0 for a in st.A):
            continue
        if any(b.evaluate(vals, q) == 0 for b in st.B):
            continue
        vec = [0] * rs.N
        ok = True
        for var, rootidx in st.rn:
            if var in vals:
                value = vals[var]
            else:
                num, den = st.exprs[var]
                dv = den.evaluate(vals, q)
                if dv == 0:
                    raise ArithmeticError("denominator vanished while enumerating")
                value = num.evaluate(vals, q) * pow(dv, -1, q) % q
            if value == 0:
                ok = False
                break
            vec[rootidx - 1] = value
        if ok:
            yield tuple(vec)


def verify_partition(rs, q: int, result: RunResult) -> PartitionReport:
    """Check that the family points are pairwise non-conjugate and that their
    orbits exhaust the Lie algebra over F_q."""
    if isinstance(rs, str):
        rs = build(rs)
    census = count_orbits_unionfind(rs, q, keep_labels=True)
    weights = [q ** k for k in range(rs.N)]
    seen: dict[int, tuple] = {}
    violations: list[str] = []
    npoints = 0
    for fam in result.families:
        fam_points = 0
        for stratum in fam.strata:
            for vec in enumerate_stratum_points(stratum, rs, q):
                npoints += 1
                fam_points += 1
                code = sum(w * v for w, v in zip(weights, vec))
                label = int(census.labels[code])
                if label in seen:
                    violations.append(
                        f"points {seen[label]} and {vec} are conjugate "
                        f"(families overlap)")
                else:
                    seen[label] = vec
        expected = fam.count.evaluate_q(q)
        if fam_points != expected:
            violations.append(
                f"family {fam.c} has {fam_points} points at q={q}, "
                f"formula gives {expected}")
    if npoints != census.count:
        violations.append(
            f"{npoints} family points but {census.count} orbits")
    return PartitionReport(not violations, q, npoints, census.count, violations)


def torus_orbit_sizes(rs, q: int, support: Iterable[int]) -> list[int]:
    """Orbit sizes of the diagonal torus acting on vectors supported exactly
    on the given enumeration indices (all coordinates nonzero there)."""
    if isinstance(rs, str):
        rs = build(rs)
    p, k = prime_power(q)
    if k != 1:
        raise ValueError("prime fields only")
    support = sorted(support)
    panels = [rs.root(i).coeffs for i in support]
    points = list(product(range(1, q), repeat=len(support)))
    remaining = set(points)
    sizes = []
    units = [u for u in range(1, q)]
    while remaining:
        x = remaining.pop()
        orbit = {x}
        for torus in product(units, repeat=rs.rank):
            y = tuple(
                (a * _torus_weight(torus, coeffs, q)) % q
                for a, coeffs in zip(x, panels)
            )
            orbit.add(y)
        remaining -= orbit
        sizes.append(len(orbit))
    return sorted(sizes)


def _torus_weight(torus: Sequence[int], coeffs: Sequence[int], q: int) -> int:
    w = 1
    for u, c in zip(torus, coeffs):
        w = w * pow(u, c, q) % q
    return w


def timed_orbit_count(rs, q: int, method: str = "unionfind",
                      min_height: int = 1) -> dict:
    """JSON-friendly oracle result: {q, count, method, seconds}."""
    t0 = time.perf_counter()
    if method == "unionfind":
        count = count_orbits_unionfind(rs, q, min_height).count
    elif method == "burnside":
        count = count_orbits_burnside(rs, q, min_height)
    else:
        raise ValueError("method must be 'unionfind' or 'burnside'")
    return {"q": q, "count": count, "method": method,
            "seconds": round(time.perf_counter() - t0, 3)}
