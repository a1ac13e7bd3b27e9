"""Depth-first decomposition of minimal orbit representatives into families.

Each family is a stratum of symbolic elements x = sum t_j e_(root), cut out
by vanishing constraints A and non-vanishing constraints B on the nonzero
coordinates.  Indices are processed one at a time: the reduced centralizer
row at an index decides whether it is an inert point (the row cannot vanish
on the family), a ramification point (the row vanishes identically), or
needs a case split on the factors of a chosen row entry.  Ramification
points fork a zero branch and a nonzero branch with a fresh indeterminate;
splits push the sibling strata onto a stack and the search continues depth
first until every signature has full length, after which the point count of
each family is extracted from its linear constraint structure.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .centralizer import CentralizerMatrix, append_and_reduce, p_row, row_content_normalize
from .counting import CountPolynomial, GoodFamilyRecord, aggregate, family_count
from .coeffs import predict_low_coeffs
from .poly import (MPoly, ONE, PrimeLog, ZERO, compare, divides, exact_divide,
                   factor_linearish, gcd, linear_in, poly_str, primitive, substitute)
from .roots import RootSystem, build, independent, snf_diagonal

logger = logging.getLogger(__name__)

INERT = "I"
RAM_ZERO = "0"
RAM_NONZERO = "n"


@dataclass(frozen=True)
class EngineOptions:
    series_term: int = 1
    normalize: bool = True
    normalize_skip: frozenset = frozenset()  # enumeration indices left unnormalized
    split_depth: int = 24
    finalize_splits: int = 256
    state_budget: int = 2_000_000
    trace: int = 0
    workers: int = 1


@dataclass(frozen=True)
class VarInfo:
    name: str
    unit: bool  # ranges over nonzero values only


class FamilyState:
    """One candidate family with all data needed to keep processing it."""

    __slots__ = ("c", "rn", "A", "B", "Q", "live", "normalized", "exprs",
                 "jroots", "next_var", "tcount", "zcount", "names", "subs_log")

    def __init__(self, ncols: int) -> None:
        self.c: list[str] = []
        self.rn: list[tuple[int, int]] = []  # (variable, enumeration index)
        self.A: list[MPoly] = []
        self.B: list[MPoly] = []
        self.Q = CentralizerMatrix(ncols)
        self.live: dict[int, VarInfo] = {}
        self.normalized: list[int] = []
        self.exprs: dict[int, tuple[MPoly, MPoly]] = {}
        self.jroots: list[int] = []
        self.next_var = 0
        self.tcount = 0
        self.zcount = 0
        self.names: dict[int, str] = {}
        self.subs_log: list[str] = []

    def copy(self) -> "FamilyState":
        st = FamilyState.__new__(FamilyState)
        st.c = list(self.c)
        st.rn = list(self.rn)
        st.A = list(self.A)
        st.B = list(self.B)
        st.Q = self.Q.copy()
        st.live = dict(self.live)
        st.normalized = list(self.normalized)
        st.exprs = dict(self.exprs)
        st.jroots = list(self.jroots)
        st.next_var = self.next_var
        st.tcount = self.tcount
        st.zcount = self.zcount
        st.names = dict(self.names)
        st.subs_log = list(self.subs_log)
        return st

    def alloc(self, kind: str, unit: bool) -> int:
        var = self.next_var
        self.next_var += 1
        if kind == "t":
            self.tcount += 1
            name = f"t{self.tcount}"
        else:
            self.zcount += 1
            name = f"z{self.zcount}"
        self.names[var] = name
        self.live[var] = VarInfo(name, unit)
        return var

    def name_of(self, var: int) -> str:
        return self.names.get(var, f"t?{var}")

    def render(self, f: MPoly) -> str:
        return poly_str(f, self.name_of)

    @property
    def m(self) -> int:
        return len(self.rn)

    def signature(self) -> str:
        return "".join(self.c)


@dataclass(frozen=True)
class BadFamily:
    c: str
    A: tuple[str, ...]
    B: tuple[str, ...]
    reason: str


@dataclass
class Stratum:
    """A finalized, countable piece of a family, with enough structure to
    enumerate its points over a concrete field."""

    record: GoodFamilyRecord
    state: FamilyState

    @property
    def count(self) -> CountPolynomial:
        return family_count(self.record)


@dataclass
class Family:
    c: str
    m: int
    A: tuple[str, ...]
    B: tuple[str, ...]
    count: CountPolynomial
    strata: tuple[Stratum, ...]

    def to_json_dict(self) -> dict:
        return {
            "c": self.c,
            "m": self.m,
            "A": list(self.A),
            "B": list(self.B),
            "count_v": list(self.count.coeffs_v),
            "strata": [
                {"d": s.record.d, "n": {str(j): nj for j, nj in s.record.n}}
                for s in self.strata
            ],
        }


@dataclass
class RunResult:
    label: str
    rank: int
    series_term: int
    polynomial: CountPolynomial
    families: list[Family]
    bad: list[BadFamily]
    primes: tuple[int, ...]
    census: dict[int, int]
    partial: bool
    states_processed: int

    @property
    def gamma(self) -> list[GoodFamilyRecord]:
        return [s.record for f in self.families for s in f.strata]

    def to_json_dict(self) -> dict:
        return {
            "schema": "unipotent-classes/run.v1",
            "type": self.label,
            "rank": self.rank,
            "series_term": self.series_term,
            "partial": self.partial,
            "polynomial": {
                "v": list(self.polynomial.coeffs_v),
                "q": list(self.polynomial.to_q_basis()),
                "v_str": self.polynomial.render("v"),
                "q_str": self.polynomial.render("q"),
            },
            "census": {str(m): c for m, c in sorted(self.census.items())},
            "families": [f.to_json_dict() for f in self.families],
            "bad_families": [
                {"c": b.c, "A": list(b.A), "B": list(b.B), "reason": b.reason}
                for b in self.bad
            ],
            "primes": list(self.primes),
        }


# ---------------------------------------------------------------------------
# certificates


def _certified_entry(st: FamilyState, p: MPoly, log: PrimeLog) -> bool:
    """The literal inert-pivot test: a monomial in nonzero coordinates, or a
    divisor of some polynomial with no roots on the family."""
    if p.is_constant:
        log.log_int(p.const_value())
        return True
    if p.is_monomial:
        (expts, coeff), = p.terms.items()
        if all(e == 0 or (k in st.live and st.live[k].unit)
               for k, e in enumerate(expts)):
            log.log_int(coeff)
            return True
    return any(divides(p, b) for b in st.B)


def _is_nonvanishing(st: FamilyState, p: MPoly, log: PrimeLog) -> bool:
    """True when p has no zeros on the family: every factor is a nonzero
    constant, a nonzero-coordinate variable, or divides a member of B."""
    if p.is_zero:
        return False
    if p.is_constant:
        log.log_int(p.const_value())
        return True
    fr = factor_linearish(p)
    for fac in fr.distinct():
        if fac.is_constant:
            continue
        if fac.is_monomial and fac.nterms == 1:
            (expts, _), = fac.terms.items()
            if all(e == 0 or (k in st.live and st.live[k].unit)
                   for k, e in enumerate(expts)):
                continue
        if any(divides(fac, b) for b in st.B):
            continue
        return False
    log.log_int(fr.unit)
    return True


def _add_nonvanishing(st: FamilyState, p: MPoly, log: PrimeLog) -> bool:
    """Require p != 0 on the family; returns False when that empties it."""
    if p.is_zero:
        return False
    if p.is_constant:
        log.log_int(p.const_value())
        return True
    fr = factor_linearish(p)
    log.log_int(fr.unit)
    for fac in fr.distinct():
        if _is_nonvanishing(st, fac, log):
            continue
        if any(divides(a, fac) for a in st.A):
            return False  # fac vanishes identically: empty stratum
        if fac not in st.B:
            st.B.append(fac)
            log.log_poly(fac)
    return True


# ---------------------------------------------------------------------------
# substitutions


def _frac_substitute(numden: tuple[MPoly, MPoly], var: int, num: MPoly, den: MPoly,
                     log: PrimeLog) -> tuple[MPoly, MPoly]:
    n, d = numden
    dn, dd = n.degree_in(var), d.degree_in(var)
    if dn == 0 and dd == 0:
        return numden
    n2 = substitute(n, var, num, den, log)
    d2 = substitute(d, var, num, den, log)
    if dn > dd:
        d2 = d2 * den ** (dn - dd)
    elif dd > dn:
        n2 = n2 * den ** (dd - dn)
    return _frac_reduce(n2, d2, log)


def _frac_reduce(n: MPoly, d: MPoly, log: PrimeLog) -> tuple[MPoly, MPoly]:
    g = gcd(n, d)
    if not (g.is_constant and abs(g.const_value()) == 1):
        n = exact_divide(n, g, log)
        d = exact_divide(d, g, log)
    from math import gcd as igcd

    c = igcd(n.content(), d.content())
    if c > 1:
        log.log_int(c)
        n = exact_divide(n, MPoly.const(c))
        d = exact_divide(d, MPoly.const(c))
    if d.sign() < 0:
        n, d = -n, -d
    return n, d


def _row_substitute(row: list[MPoly], var: int, num: MPoly, den: MPoly,
                    log: PrimeLog) -> list[MPoly]:
    degs = [p.degree_in(var) for p in row]
    dmax = max(degs, default=0)
    if dmax == 0:
        return row
    out = []
    for p, dp in zip(row, degs):
        q = substitute(p, var, num, den, log)
        if dp < dmax:
            q = q * den ** (dmax - dp)
        out.append(q)
    return row_content_normalize(out, log)


def _apply_substitution(st: FamilyState, var: int, num: MPoly, den: MPoly,
                        log: PrimeLog) -> bool:
    """Eliminate a live variable as num/den everywhere; False when the family
    turns out to be empty."""
    num, den = _frac_reduce(num, den, log)
    for v, nd in list(st.exprs.items()):
        st.exprs[v] = _frac_substitute(nd, var, num, den, log)
    st.exprs[var] = (num, den)
    del st.live[var]
    st.Q.rows = [_row_substitute(r, var, num, den, log) for r in st.Q.rows]
    new_a: list[MPoly] = []
    for a in st.A:
        a2 = primitive(substitute(a, var, num, den, log), log)
        if a2.is_zero:
            continue
        if a2.is_constant:
            log.log_int(a2.const_value())
            return False  # a nonzero constant must vanish: empty
        if a2 not in new_a:
            new_a.append(a2)
            log.log_poly(a2)
    st.A = new_a
    new_b: list[MPoly] = []
    for b in st.B:
        b2 = primitive(substitute(b, var, num, den, log), log)
        if b2.is_zero:
            return False  # a vanishing polynomial was required nonzero
        if b2.is_constant:
            log.log_int(b2.const_value())
            continue
        if b2 not in new_b:
            new_b.append(b2)
            log.log_poly(b2)
    st.B = new_b
    st.subs_log.append(f"{st.name_of(var)} := ({st.render(num)})/({st.render(den)})")
    return True


def _try_z_change(st: FamilyState, g: MPoly, log: PrimeLog) -> Optional[MPoly]:
    """Look for a coordinate change z := t_b + lam * t_a making g linear in a
    variable; commits the change and returns the rewritten g on success."""
    gvars = [k for k in g.variables() if k in st.live]
    zid = st.next_var  # tentative id, only committed on success
    for b in gvars:
        for a in gvars:
            if a == b:
                continue
            for lam in (1, -1, 2, -2, 3, -3):
                zpoly = MPoly.var(zid) - MPoly.var(a, lam)
                g2 = substitute(g, b, zpoly, ONE)
                lv = [k for k in linear_in(g2) if k in st.live or k == zid]
                if not lv:
                    continue
                was_unit = st.live[b].unit
                st.alloc("z", unit=False)
                if not _apply_substitution(st, b, zpoly, ONE, log):
                    return None  # cannot happen: the change is invertible
                if was_unit and not _add_nonvanishing(st, zpoly, log):
                    return None
                st.subs_log.append(
                    f"{st.names[zid]} := {st.name_of(b)} + "
                    f"{lam}*{st.name_of(a)} (coordinate change)")
                return primitive(g2, log)
    return None


# ---------------------------------------------------------------------------
# vanishing constraints

_BAD = None  # sentinel via None returns


def _add_vanishing(st: FamilyState, g: MPoly, opts: EngineOptions, log: PrimeLog,
                   depth: int) -> Optional[list[FamilyState]]:
    """Impose g = 0 on the family, splitting and substituting as needed.
    Returns the list of resulting disjoint strata ([] when empty), or None
    when the analysis gave up."""
    if depth > opts.split_depth:
        return None
    g = primitive(g, log)
    if g.is_zero:
        return [st]
    if g.is_constant:
        log.log_int(g.const_value())
        return []
    if _is_nonvanishing(st, g, log):
        return []
    fr = factor_linearish(g)
    log.log_int(fr.unit)
    vanishable = [f for f in fr.distinct() if not _is_nonvanishing(st, f, log)]
    if not vanishable:
        return []
    if len(vanishable) > 1 or vanishable[0] != g:
        out: list[FamilyState] = []
        for k, h in enumerate(vanishable):
            child = st.copy()
            ok = True
            for other in vanishable[:k]:
                if not _add_nonvanishing(child, other, log):
                    ok = False
                    break
            if not ok:
                continue
            sub = _add_vanishing(child, h, opts, log, depth + 1)
            if sub is None:
                return None
            out.extend(sub)
        return out

    # The constraint is a single irreducible-ish polynomial.
    if g in st.A:
        return [st]
    lvars = [k for k in linear_in(g) if k in st.live]
    if lvars:
        ranked = []
        for k in lvars:
            h1, h2 = g.coefficient_split(k)
            cert = _is_nonvanishing(st, h1, log)
            ranked.append((0 if cert else 1, h1.nterms, k, h1, h2, cert))
        ranked.sort(key=lambda r: (r[0], r[1], r[2]))
        _, _, k, h1, h2, cert = ranked[0]
        if cert:
            return _substitute_linear(st, k, h1, h2, opts, log, depth)
        # Split on the leading cofactor: h1 != 0 (solve) versus h1 = 0 (then
        # the remainder must vanish too).
        out = []
        child1 = st.copy()
        if _add_nonvanishing(child1, h1, log):
            sub = _add_vanishing(child1, g, opts, log, depth + 1)
            if sub is None:
                return None
            out.extend(sub)
        sub0 = _add_vanishing(st, h1, opts, log, depth + 1)
        if sub0 is None:
            return None
        for s in sub0:
            sub2 = _add_vanishing(s, h2, opts, log, depth + 1)
            if sub2 is None:
                return None
            out.extend(sub2)
        return out

    g2 = _try_z_change(st, g, log)
    if g2 is not None:
        return _add_vanishing(st, g2, opts, log, depth + 1)

    if g not in st.A:
        st.A.append(g)
        log.log_poly(g)
    return [st]


def _substitute_linear(st: FamilyState, var: int, h1: MPoly, h2: MPoly,
                       opts: EngineOptions, log: PrimeLog,
                       depth: int) -> Optional[list[FamilyState]]:
    """Solve h1 * t_var + h2 = 0 for t_var (h1 certified nonvanishing)."""
    num, den = -h2, h1
    info = st.live[var]
    if num.is_zero and info.unit:
        return []  # the nonzero coordinate would be forced to zero
    if info.unit and not _add_nonvanishing(st, num, log):
        return []
    if not _apply_substitution(st, var, num, den, log):
        return []
    return _resolve_pending(st, opts, log, depth)


def _resolve_pending(st: FamilyState, opts: EngineOptions, log: PrimeLog,
                     depth: int) -> Optional[list[FamilyState]]:
    """Re-examine stored vanishing constraints after a substitution; some may
    have become reducible or linear in a live variable."""
    queue = [st]
    done: list[FamilyState] = []
    while queue:
        s = queue.pop()
        target = None
        for a in s.A:
            fr = factor_linearish(a)
            vanishable = [f for f in fr.distinct() if not _is_nonvanishing(s, f, log)]
            reducible = len(vanishable) != 1 or vanishable[0] != a
            if reducible or any(k in s.live for k in linear_in(a)):
                target = a
                break
        if target is None:
            done.append(s)
            continue
        s.A.remove(target)
        sub = _add_vanishing(s, target, opts, log, depth + 1)
        if sub is None:
            return None
        queue.extend(sub)
    return done


# ---------------------------------------------------------------------------
# the main loop


def _import_row(st: FamilyState, raw: Sequence[MPoly], log: PrimeLog) -> list[MPoly]:
    """Rewrite a freshly generated row into the current live coordinates."""
    row = list(raw)
    if st.exprs:
        seen: set[int] = set()
        for p in row:
            seen.update(p.variables())
        for var in sorted(seen):
            nd = st.exprs.get(var)
            if nd is None:
                continue
            num, den = nd
            row = _row_substitute(row, var, num, den, log)
    return row_content_normalize(row, log)


def _process_index(rs: RootSystem, st: FamilyState, stack: list[FamilyState],
                   opts: EngineOptions, log: PrimeLog) -> str:
    """Advance the family by one enumeration index.  Returns "ok", "dead"
    (empty stratum), or "bad"."""
    i = len(st.c) + 1
    raw = p_row(rs, st.rn, i)
    row = _import_row(st, raw, log)
    row = append_and_reduce(st.Q, row, log)

    candidates: list[tuple[int, MPoly]] = []
    for col0, p in enumerate(row):
        if p.is_zero:
            continue
        if any(divides(a, p) for a in st.A):
            continue
        candidates.append((col0 + 1, p))

    if not candidates:
        # Ramification for every point of the family.
        st.Q.rows.append(row)
        st.Q.pivots.append(0)
        if rs.root(i).height < opts.series_term:
            st.c.append(RAM_ZERO)
            return "ok"
        sib = st.copy()
        sib.c.append(RAM_ZERO)
        stack.append(sib)
        st.c.append(RAM_NONZERO)
        var = st.alloc("t", unit=True)
        st.rn.append((var, i))
        if opts.normalize and i not in opts.normalize_skip:
            trial = st.jroots + [i]
            if independent(rs, trial) and all(d == 1 for d in snf_diagonal(rs, trial)):
                del st.live[var]
                st.normalized.append(var)
                st.exprs[var] = (ONE, ONE)
                st.jroots.append(i)
        return "ok"

    for col, p in candidates:
        if _certified_entry(st, p, log):
            st.c.append(INERT)
            st.Q.rows.append(row)
            st.Q.pivots.append(col)
            return "ok"

    # Case split on the minimal candidate entry.
    best_col, best = candidates[0]
    for col, p in candidates[1:]:
        if compare(p, best) < 0:
            best_col, best = col, p
    return _resolve_and_split(rs, st, stack, best_col, best, row, opts, log)


def _resolve_and_split(rs: RootSystem, st: FamilyState, stack: list[FamilyState],
                       col: int, f: MPoly, row: list[MPoly],
                       opts: EngineOptions, log: PrimeLog) -> str:
    fr = factor_linearish(f)
    log.log_int(fr.unit)
    split_factors = [g for g in fr.distinct() if not _is_nonvanishing(st, g, log)]

    if not split_factors:
        # Every factor is certified nonzero after all: inert.
        st.c.append(INERT)
        st.Q.rows.append(row)
        st.Q.pivots.append(col)
        return "ok"

    children: list[FamilyState] = []
    for k, g in enumerate(split_factors):
        base = st.copy()
        ok = True
        for other in split_factors[:k]:
            if not _add_nonvanishing(base, other, log):
                ok = False
                break
        if not ok:
            continue
        sub = _add_vanishing(base, g, opts, log, 0)
        if sub is None:
            return "bad"
        children.extend(sub)

    alive = True
    for g in split_factors:
        if not _add_nonvanishing(st, g, log):
            alive = False
            break
    stack.extend(children)
    if not alive:
        return "dead"
    st.c.append(INERT)
    st.Q.rows.append(row)
    st.Q.pivots.append(col)
    return "ok"


# ---------------------------------------------------------------------------
# finalization: point counts from the linear structure of A and B


def _analyze(st: FamilyState, opts: EngineOptions, log: PrimeLog):
    """Extract (d, n) from a fully processed family with empty A.  Returns a
    GoodFamilyRecord, a ("split", poly) request, or None when stuck."""
    exclusions: dict[int, list[tuple[MPoly, MPoly]]] = {k: [] for k in st.live}
    for b in st.B:
        if b.is_constant:
            continue
        lv = [k for k in linear_in(b) if k in st.live]
        if not lv:
            return None
        recorded = False
        pending: Optional[MPoly] = None
        for k in lv:
            h1, h2 = b.coefficient_split(k)
            if not _is_nonvanishing(st, h1, log):
                if pending is None:
                    pending = h1
                continue
            if h2.is_zero:
                if st.live[k].unit:
                    recorded = True  # excludes only zero, already excluded
                    break
                exclusions[k].append((h1, ZERO))
                recorded = True
                break
            if _is_nonvanishing(st, h2, log):
                exclusions[k].append((h1, h2))
                recorded = True
                break
            if pending is None:
                pending = h2
        if recorded:
            continue
        if pending is not None:
            return ("split", pending)
        return None

    n: dict[int, int] = {}
    for var, info in sorted(st.live.items()):
        pairs = exclusions[var]
        kept: list[tuple[MPoly, MPoly]] = []
        for h1, h2 in pairs:
            dup = False
            for g1, g2 in kept:
                delta = primitive(h2 * g1 - g2 * h1)
                if delta.is_zero:
                    dup = True
                    break
                if not _is_nonvanishing(st, delta, log):
                    return ("split", delta)
            if not dup:
                kept.append((h1, h2))
        if info.unit:
            e = 1 + len(kept)
        else:
            e = len(kept)
            if e == 0:
                return None  # a full-line coordinate: count q is not expressible
        j = e - 1
        if j > 0:
            n[j] = n.get(j, 0) + 1
    d = len(st.normalized) + len(st.live)
    return GoodFamilyRecord.make(d, n)


def _finalize(st: FamilyState, opts: EngineOptions, log: PrimeLog) -> Optional[list[Stratum]]:
    queue = [st]
    out: list[Stratum] = []
    budget = opts.finalize_splits
    while queue:
        s = queue.pop()
        resolved = _resolve_pending(s, opts, log, 0)
        if resolved is None:
            return None
        for s2 in resolved:
            if s2.A:
                return None  # residual non-linear constraints: not countable
            res = _analyze(s2, opts, log)
            if res is None:
                return None
            if isinstance(res, tuple):
                budget -= 1
                if budget < 0:
                    return None
                h = res[1]
                sa = s2.copy()
                if _add_nonvanishing(sa, h, log):
                    queue.append(sa)
                sv = _add_vanishing(s2.copy(), h, opts, log, 0)
                if sv is None:
                    return None
                queue.extend(sv)
                continue
            out.append(Stratum(res, s2))
    return out


def _drain(rs: RootSystem, opts: EngineOptions, stack: list[FamilyState],
           log: PrimeLog, suspend_at: Optional[int] = None):
    """Process stack entries to completion; optionally suspend once the stack
    has grown enough to hand the rest to worker processes."""
    families: list[Family] = []
    bad: list[BadFamily] = []
    nstates = 0
    while stack:
        if suspend_at is not None and nstates > 0 and len(stack) >= suspend_at:
            return families, bad, nstates, stack
        st = stack.pop()
        nstates += 1
        if nstates > opts.state_budget:
            bad.append(BadFamily(st.signature(), (), (), "state budget exhausted"))
            break
        status = "ok"
        while len(st.c) < rs.N:
            status = _process_index(rs, st, stack, opts, log)
            if status != "ok":
                break
        if status == "dead":
            continue
        if status == "bad":
            bad.append(BadFamily(
                st.signature(),
                tuple(st.render(a) for a in st.A),
                tuple(st.render(b) for b in st.B),
                "split analysis gave up",
            ))
            continue
        if opts.trace >= 2:
            logger.debug("family %s\n%s", st.signature(), st.Q.dump(st.name_of))
        strata = _finalize(st, opts, log)
        if strata is None:
            bad.append(BadFamily(
                st.signature(),
                tuple(st.render(a) for a in st.A),
                tuple(st.render(b) for b in st.B),
                "point count not determined",
            ))
            continue
        if not strata:
            continue  # family turned out empty
        count = CountPolynomial.zero()
        for s in strata:
            count = count + s.count
        fam = Family(
            c=st.signature(),
            m=st.m,
            A=tuple(sorted(st.render(a) for a in st.A)),
            B=tuple(sorted(st.render(b) for b in st.B)),
            count=count,
            strata=tuple(strata),
        )
        families.append(fam)
        if opts.trace >= 1:
            logger.info("family %s m=%d count=%s", fam.c, fam.m, fam.count)
    return families, bad, nstates, []


def _complete_state(args):
    rs, opts, state = args
    log = PrimeLog()
    families, bad, nstates, _ = _drain(rs, opts, [state], log)
    return families, bad, nstates, log.primes


def run(rs, options: Optional[EngineOptions] = None) -> RunResult:
    """Decompose the minimal representatives for the given root system and
    aggregate the family counts."""
    if isinstance(rs, str):
        rs = build(rs)
    opts = options or EngineOptions()
    if opts.workers < 1:
        raise ValueError("workers must be positive")
    log = PrimeLog()
    stack = [FamilyState(rs.N)]
    if opts.workers == 1:
        families, bad, nstates, _ = _drain(rs, opts, stack, log)
    else:
        from dataclasses import replace
        from multiprocessing import Pool

        seq = replace(opts, workers=1)
        families, bad, nstates, remaining = _drain(
            rs, seq, stack, log, suspend_at=4 * opts.workers)
        if remaining:
            with Pool(opts.workers) as pool:
                parts = pool.map(_complete_state,
                                 [(rs, seq, s) for s in remaining])
            for fams, bds, n, primes in parts:
                families.extend(fams)
                bad.extend(bds)
                nstates += n
                for p in primes:
                    log.log_int(p)

    families.sort(key=lambda f: (f.c, f.A, f.B))
    census: dict[int, int] = {}
    for f in families:
        census[f.m] = census.get(f.m, 0) + 1
    total = aggregate([s.record for f in families for s in f.strata])
    return RunResult(
        label=rs.label,
        rank=rs.rank,
        series_term=opts.series_term,
        polynomial=total,
        families=families,
        bad=bad,
        primes=tuple(sorted(log.primes)),
        census=census,
        partial=bool(bad),
        states_processed=nstates,
    )
