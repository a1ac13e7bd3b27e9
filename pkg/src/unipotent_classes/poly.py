"""Exact sparse multivariate polynomials over Z, with prime bookkeeping.

A polynomial is an immutable map from exponent tuples to nonzero integer
coefficients.  Variables are nonnegative indices; an exponent tuple lists the
exponents of variables 0..len-1 with trailing zeros stripped, so the
representation is canonical and new variables can be introduced mid-run
without rewriting existing polynomials.

Every division by a nontrivial integer (content extraction, exact quotients,
denominator clearing) is reported to a :class:`PrimeLog`, because results of
a symbolic run are only valid in characteristics where none of these
divisions degenerate.
"""

from __future__ import annotations

import functools
from math import gcd as _igcd
from typing import Callable, Iterable, Iterator, Mapping, Optional, Sequence


def _prime_factors(n: int) -> set[int]:
    n = abs(n)
    out: set[int] = set()
    d = 2
    while d * d <= n:
        while n % d == 0:
            out.add(d)
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out.add(n)
    return out


class PrimeLog:
    """Accumulates primes met in divisions; union-merge friendly."""

    __slots__ = ("_primes",)

    def __init__(self, primes: Iterable[int] = ()) -> None:
        self._primes: set[int] = set(primes)

    @property
    def primes(self) -> frozenset[int]:
        return frozenset(self._primes)

    def log_int(self, n: int) -> None:
        if n not in (0, 1, -1):
            self._primes |= _prime_factors(n)

    def log_poly(self, f: "MPoly") -> None:
        for c in f.terms.values():
            self.log_int(c)

    def merge(self, other: "PrimeLog") -> None:
        self._primes |= other._primes

    def __contains__(self, p: int) -> bool:
        return p in self._primes

    def __repr__(self) -> str:
        return f"PrimeLog({sorted(self._primes)})"


Term = tuple  # exponent tuple, trailing zeros stripped


def _strip(t: Sequence[int]) -> Term:
    n = len(t)
    while n and t[n - 1] == 0:
        n -= 1
    return tuple(t[:n])


def _tadd(a: Term, b: Term) -> Term:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, e in enumerate(b):
        out[i] += e
    return tuple(out)


def _grlex(t: Term):
    return (sum(t), t)


class ExactDivisionError(ArithmeticError):
    """Raised when an allegedly exact division leaves a remainder."""


class MPoly:
    """Immutable polynomial in Z[t_0, t_1, ...]."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping[Term, int]) -> None:
        # Trusted constructor: terms must already be canonical.
        self.terms = dict(terms)
        self._hash: Optional[int] = None

    # -- construction -----------------------------------------------------

    @staticmethod
    def make(items: Mapping[Sequence[int], int]) -> "MPoly":
        terms: dict[Term, int] = {}
        for t, c in items.items():
            if c:
                key = _strip(t)
                c2 = terms.get(key, 0) + c
                if c2:
                    terms[key] = c2
                else:
                    terms.pop(key, None)
        return MPoly(terms)

    @staticmethod
    def const(n: int) -> "MPoly":
        return MPoly({(): n} if n else {})

    @staticmethod
    def var(k: int, coeff: int = 1, power: int = 1) -> "MPoly":
        if coeff == 0:
            return MPoly({})
        t = [0] * (k + 1)
        t[k] = power
        return MPoly({tuple(t): coeff})

    # -- predicates and views ---------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and () in self.terms)

    def const_value(self) -> int:
        if not self.terms:
            return 0
        if len(self.terms) == 1 and () in self.terms:
            return self.terms[()]
        raise ValueError("not a constant polynomial")

    @property
    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    @property
    def nterms(self) -> int:
        return len(self.terms)

    def total_degree(self) -> int:
        return max((sum(t) for t in self.terms), default=0)

    def degree_in(self, k: int) -> int:
        d = 0
        for t in self.terms:
            if len(t) > k and t[k] > d:
                d = t[k]
        return d

    def variables(self) -> tuple[int, ...]:
        seen: set[int] = set()
        for t in self.terms:
            for i, e in enumerate(t):
                if e:
                    seen.add(i)
        return tuple(sorted(seen))

    def leading(self) -> tuple[Term, int]:
        t = max(self.terms, key=_grlex)
        return t, self.terms[t]

    def content(self) -> int:
        g = 0
        for c in self.terms.values():
            g = _igcd(g, c)
            if g == 1:
                return 1
        return g

    def sign(self) -> int:
        if not self.terms:
            return 0
        return 1 if self.leading()[1] > 0 else -1

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other) -> "MPoly":
        if isinstance(other, int):
            other = MPoly.const(other)
        if not self.terms:
            return other
        if not other.terms:
            return self
        terms = dict(self.terms)
        for t, c in other.terms.items():
            c2 = terms.get(t, 0) + c
            if c2:
                terms[t] = c2
            else:
                del terms[t]
        return MPoly(terms)

    __radd__ = __add__

    def __neg__(self) -> "MPoly":
        return MPoly({t: -c for t, c in self.terms.items()})

    def __sub__(self, other) -> "MPoly":
        if isinstance(other, int):
            other = MPoly.const(other)
        return self + (-other)

    def __rsub__(self, other) -> "MPoly":
        return (-self) + other

    def __mul__(self, other) -> "MPoly":
        if isinstance(other, int):
            if other == 0:
                return MPoly({})
            if other == 1:
                return self
            return MPoly({t: c * other for t, c in self.terms.items()})
        if not self.terms or not other.terms:
            return MPoly({})
        a, b = self.terms, other.terms
        if len(a) > len(b):
            a, b = b, a
        terms: dict[Term, int] = {}
        for ta, ca in a.items():
            for tb, cb in b.items():
                t = _tadd(ta, tb)
                c2 = terms.get(t, 0) + ca * cb
                if c2:
                    terms[t] = c2
                else:
                    del terms[t]
        return MPoly(terms)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "MPoly":
        if n < 0:
            raise ValueError("negative power")
        out = MPoly.const(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, MPoly) and self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __repr__(self) -> str:
        return f"MPoly({poly_str(self)})"

    # -- evaluation ---------------------------------------------------------

    def evaluate(self, vals: Mapping[int, int], mod: Optional[int] = None) -> int:
        total = 0
        for t, c in self.terms.items():
            v = c
            for i, e in enumerate(t):
                if e:
                    v *= vals[i] ** e
            total += v
        return total % mod if mod is not None else total

    def coefficient_split(self, k: int) -> tuple["MPoly", "MPoly"]:
        """Write self = h1 * t_k + h2 with h1, h2 free of t_k (requires deg_k <= 1)."""
        h1: dict[Term, int] = {}
        h2: dict[Term, int] = {}
        for t, c in self.terms.items():
            e = t[k] if len(t) > k else 0
            if e == 0:
                h2[t] = c
            elif e == 1:
                t2 = list(t)
                t2[k] = 0
                h1[_strip(t2)] = c
            else:
                raise ValueError(f"degree in t_{k} exceeds 1")
        return MPoly(h1), MPoly(h2)


ZERO = MPoly({})
ONE = MPoly.const(1)


def primitive(f: MPoly, log: Optional[PrimeLog] = None) -> MPoly:
    """Divide out the integer content and make the leading coefficient positive."""
    if f.is_zero:
        return f
    c = f.content() * f.sign()
    if c == 1:
        return f
    if log is not None:
        log.log_int(c)
    return MPoly({t: v // c for t, v in f.terms.items()})


def exact_divide(f: MPoly, g: MPoly, log: Optional[PrimeLog] = None) -> MPoly:
    """Quotient f/g, which must be exact in Z[t]; logs the divisor's content."""
    if g.is_zero:
        raise ExactDivisionError("division by zero polynomial")
    if log is not None:
        log.log_int(g.content())
    if f.is_zero:
        return f
    if g.is_constant:
        c = g.const_value()
        terms = {}
        for t, v in f.terms.items():
            q, r = divmod(v, c)
            if r:
                raise ExactDivisionError("content does not divide")
            terms[t] = q
        return MPoly(terms)
    quot: dict[Term, int] = {}
    rem = f
    gt, gc = g.leading()
    glen = len(gt)
    while not rem.is_zero:
        rt, rc = rem.leading()
        if len(rt) < glen:
            raise ExactDivisionError("not divisible")
        diff = [rt[i] - (gt[i] if i < glen else 0) for i in range(len(rt))]
        if any(e < 0 for e in diff):
            raise ExactDivisionError("not divisible")
        q, r = divmod(rc, gc)
        if r:
            raise ExactDivisionError("not divisible")
        key = _strip(diff)
        quot[key] = quot.get(key, 0) + q
        rem = rem - MPoly({key: q}) * g
    return MPoly(quot)


def divides(g: MPoly, f: MPoly) -> bool:
    """True iff g divides f in Q[t] with an integer-representable test quotient."""
    if g.is_zero:
        return f.is_zero
    if f.is_zero:
        return True
    if f.total_degree() < g.total_degree():
        return False
    try:
        exact_divide(f, g)
        return True
    except ExactDivisionError:
        pass
    # Retry on primitive parts: 2t+2 divides t^2-1 in Q[t].
    fp, gp = primitive(f), primitive(g)
    if fp is f and gp is g:
        return False
    try:
        exact_divide(fp, gp)
        return True
    except ExactDivisionError:
        return False


# -- gcd -----------------------------------------------------------------


def _coeffs_in(f: MPoly, k: int) -> dict[int, MPoly]:
    """View f as a univariate polynomial in t_k with MPoly coefficients."""
    out: dict[int, dict[Term, int]] = {}
    for t, c in f.terms.items():
        e = t[k] if len(t) > k else 0
        t2 = list(t)
        if len(t2) > k:
            t2[k] = 0
        out.setdefault(e, {})[_strip(t2)] = c
    return {e: MPoly(d) for e, d in out.items()}


def _from_coeffs(coeffs: Mapping[int, MPoly], k: int) -> MPoly:
    terms: dict[Term, int] = {}
    for e, p in coeffs.items():
        for t, c in p.terms.items():
            t2 = list(t) + [0] * (k + 1 - len(t))
            t2[k] += e
            terms[_strip(t2)] = c
    return MPoly(terms)


def _gcd_list(polys: Iterable[MPoly]) -> MPoly:
    g = ZERO
    for p in polys:
        g = gcd(g, p)
        if g.is_constant and not g.is_zero and g.const_value() == 1:
            return g
    return g


def gcd(f: MPoly, g: MPoly) -> MPoly:
    """Gcd over Q, returned in integer primitive form with a positive leading
    coefficient; when both arguments are constants the integer gcd is kept."""
    if f.is_zero:
        return primitive(g) if not g.is_constant else MPoly.const(abs(g.const_value()))
    if g.is_zero:
        return primitive(f) if not f.is_constant else MPoly.const(abs(f.const_value()))
    cf, cg = f.content(), g.content()
    c = _igcd(cf, cg)
    if f.is_constant or g.is_constant:
        return MPoly.const(c)
    fp = MPoly({t: v // cf for t, v in f.terms.items()})
    gp = MPoly({t: v // cg for t, v in g.terms.items()})
    h = primitive(_gcd_primitive(fp, gp))
    if h.is_constant:
        return MPoly.const(c)
    return h


def _gcd_primitive(f: MPoly, g: MPoly) -> MPoly:
    """gcd of primitive integer polynomials, via a primitive remainder sequence."""
    common = set(f.variables()) & set(g.variables())
    if not common:
        return ONE
    k = min(common, key=lambda v: min(f.degree_in(v), g.degree_in(v)))
    fc = _coeffs_in(f, k)
    gc = _coeffs_in(g, k)
    cont_f = _gcd_list(fc.values())
    cont_g = _gcd_list(gc.values())
    cont = _gcd_primitive(cont_f, cont_g) if not (cont_f.is_constant or cont_g.is_constant) else ONE
    cont = cont * _igcd(cont_f.content(), cont_g.content())
    a = exact_divide(f, cont_f) if not (cont_f.is_constant and cont_f.const_value() == 1) else f
    b = exact_divide(g, cont_g) if not (cont_g.is_constant and cont_g.const_value() == 1) else g
    if a.degree_in(k) < b.degree_in(k):
        a, b = b, a
    while True:
        r = _pseudo_rem(a, b, k)
        if r.is_zero:
            return primitive(b) * primitive(cont)
        if r.degree_in(k) == 0:
            return primitive(cont)
        a, b = b, primitive(r)


def _pseudo_rem(f: MPoly, g: MPoly, k: int) -> MPoly:
    """Pseudo-remainder of f by g with respect to t_k."""
    dg = g.degree_in(k)
    gc = _coeffs_in(g, k)
    lg = gc[dg]
    r = f
    while not r.is_zero:
        dr = r.degree_in(k)
        if dr < dg:
            return r
        rc = _coeffs_in(r, k)
        lr = rc[dr]
        shift = MPoly.var(k, 1, dr - dg) if dr > dg else ONE
        r = r * lg - g * lr * shift
    return r


# -- the total order used by the splitting engine --------------------------


def compare(f: MPoly, g: MPoly) -> int:
    """Total order: term count, then total degree, then |leading coefficient|,
    then a deterministic tie-break on exponents and coefficients."""
    if f.terms == g.terms:
        return 0
    a = (f.nterms, f.total_degree(), abs(f.leading()[1]))
    b = (g.nterms, g.total_degree(), abs(g.leading()[1]))
    if a != b:
        return -1 if a < b else 1
    fe = sorted(f.terms, key=_grlex, reverse=True)
    ge = sorted(g.terms, key=_grlex, reverse=True)
    if fe != ge:
        return -1 if fe < ge else 1
    fc = [f.terms[t] for t in fe]
    gc = [g.terms[t] for t in ge]
    return -1 if fc < gc else 1


def linear_in(f: MPoly) -> tuple[int, ...]:
    """Variables in which f has degree exactly one."""
    if f.is_zero:
        raise ValueError("zero polynomial")
    maxdeg: dict[int, int] = {}
    for t in f.terms:
        for i, e in enumerate(t):
            if e and e > maxdeg.get(i, 0):
                maxdeg[i] = e
    return tuple(sorted(k for k, d in maxdeg.items() if d == 1))


def substitute(f: MPoly, k: int, num: MPoly, den: MPoly = ONE,
               log: Optional[PrimeLog] = None) -> MPoly:
    """den^deg * f with t_k replaced by num/den; exact because denominators clear."""
    if den.is_zero:
        raise ValueError("zero denominator")
    if log is not None:
        log.log_int(den.content())
    d = f.degree_in(k)
    if d == 0:
        return f
    parts = _coeffs_in(f, k)
    out = ZERO
    for e in range(d + 1):
        p = parts.get(e)
        if p is None:
            continue
        out = out + p * num ** e * den ** (d - e)
    return out


# -- factoring -------------------------------------------------------------

_SYMPY_TERM_LIMIT = 300
_SYMPY_DEGREE_LIMIT = 40


class FactorResult:
    """unit * prod(factor^mult) == input; complete=False when the budget stopped short."""

    __slots__ = ("unit", "factors", "complete")

    def __init__(self, unit: int, factors: list[tuple[MPoly, int]], complete: bool) -> None:
        self.unit = unit
        self.factors = factors
        self.complete = complete

    def distinct(self) -> list[MPoly]:
        return [f for f, _ in self.factors]


@functools.lru_cache(maxsize=None)
def factor_linearish(f: MPoly) -> FactorResult:
    """Split f into irreducible-over-Q factors where cheap heuristics or the
    sympy backstop succeed; an unfactored residue is returned whole, flagged."""
    if f.is_zero:
        raise ValueError("zero polynomial")
    unit = f.content() * f.sign()
    work = MPoly({t: c // unit for t, c in f.terms.items()})
    factors: list[tuple[MPoly, int]] = []

    # Monomial part: minimal exponent per variable.
    minexp: Optional[list[int]] = None
    for t in work.terms:
        if minexp is None:
            minexp = list(t)
        else:
            for i in range(len(minexp)):
                minexp[i] = min(minexp[i], t[i] if i < len(t) else 0)
    assert minexp is not None
    if any(minexp):
        shift = _strip(minexp)
        work = MPoly({_strip([e - (shift[i] if i < len(shift) else 0)
                              for i, e in enumerate(_pad(t, len(minexp)))]): c
                      for t, c in work.terms.items()})
        for i, e in enumerate(minexp):
            if e:
                factors.append((MPoly.var(i), e))

    complete = True
    if not work.is_constant:
        sub, ok = _factor_core(work)
        factors.extend(sub)
        complete = ok

    prod = ONE
    for fac, mult in factors:
        prod = prod * fac ** mult
    unit = exact_divide(f, prod).const_value()
    return FactorResult(unit, factors, complete)


def _pad(t: Term, n: int) -> tuple:
    return tuple(t) + (0,) * (n - len(t))


def _factor_core(f: MPoly) -> tuple[list[tuple[MPoly, int]], bool]:
    if f.nterms > _SYMPY_TERM_LIMIT or f.total_degree() > _SYMPY_DEGREE_LIMIT:
        return [(f, 1)], False
    try:
        import sympy

        keys = sorted(f.variables())
        symbols = {k: sympy.Symbol(f"x{k}") for k in keys}
        expr = sympy.Integer(0)
        for t, c in f.terms.items():
            term = sympy.Integer(c)
            for i, e in enumerate(t):
                if e:
                    term *= symbols[i] ** e
            expr += term
        _, pairs = sympy.factor_list(expr)
        out: list[tuple[MPoly, int]] = []
        for fac, mult in pairs:
            poly = sympy.Poly(fac, *[symbols[k] for k in keys])
            terms: dict[Term, int] = {}
            for mono, coeff in zip(poly.monoms(), poly.coeffs()):
                t = [0] * (max(keys) + 1)
                for pos, e in zip(keys, mono):
                    t[pos] = e
                terms[_strip(t)] = int(coeff)
            out.append((primitive(MPoly(terms)), int(mult)))
        return out, True
    except Exception:
        return [(f, 1)], False


def poly_str(f: MPoly, names: Optional[Callable[[int], str]] = None) -> str:
    """Canonical text, descending term order: ``2t1^2t2 - t3 + 1``."""
    if names is None:
        names = lambda k: f"t{k + 1}"
    if f.is_zero:
        return "0"
    parts: list[str] = []
    for t in sorted(f.terms, key=_grlex, reverse=True):
        c = f.terms[t]
        mono = "".join(
            f"{names(i)}" + (f"^{e}" if e > 1 else "")
            for i, e in enumerate(t) if e
        )
        mag = abs(c)
        body = mono if mono and mag == 1 else f"{mag}{mono}"
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(parts)


def parse_terms(items: Mapping[Sequence[int], int]) -> MPoly:
    return MPoly.make(items)
