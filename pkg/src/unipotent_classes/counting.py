"""Exact counting polynomials in v = q - 1 and aggregation to k(U(q)).

A good family with d free coordinates, n_j of which avoid j extra values
beyond zero, has exactly v^(d - sum n_j) * prod (v - j)^(n_j) points over F_q.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence


@dataclass(frozen=True)
class GoodFamilyRecord:
    """The pair (d, n) from which a family's point count is recovered."""

    d: int
    n: tuple[tuple[int, int], ...] = ()  # sorted (j, n_j) pairs, j >= 1

    def __post_init__(self) -> None:
        if self.d < 0:
            raise ValueError("d must be nonnegative")
        total = 0
        for j, nj in self.n:
            if j < 1 or nj < 1:
                raise ValueError("histogram entries must be positive")
            total += nj
        if total > self.d:
            raise ValueError("sum of n_j exceeds d")

    @staticmethod
    def make(d: int, n: Mapping[int, int] | None = None) -> "GoodFamilyRecord":
        items = tuple(sorted((j, nj) for j, nj in (n or {}).items() if nj))
        return GoodFamilyRecord(d, items)


def _mul(a: Sequence[int], b: Sequence[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _trim(c: list[int]) -> tuple[int, ...]:
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


@dataclass(frozen=True)
class CountPolynomial:
    """Integer polynomial stored in the v = q - 1 basis, ascending."""

    coeffs_v: tuple[int, ...]

    @staticmethod
    def zero() -> "CountPolynomial":
        return CountPolynomial(())

    @staticmethod
    def from_v(coeffs: Sequence[int]) -> "CountPolynomial":
        return CountPolynomial(_trim(list(coeffs)))

    @staticmethod
    def from_q(coeffs: Sequence[int]) -> "CountPolynomial":
        # v = q - 1, so substitute q = v + 1.
        acc = [0]
        power = [1]  # (v + 1)^k in the v basis
        for c in coeffs:
            if c:
                if len(power) > len(acc):
                    acc += [0] * (len(power) - len(acc))
                for i, x in enumerate(power):
                    acc[i] += c * x
            power = _mul(power, [1, 1])
        return CountPolynomial(_trim(acc))

    @property
    def degree(self) -> int:
        return len(self.coeffs_v) - 1 if self.coeffs_v else -1

    def coefficient(self, k: int) -> int:
        return self.coeffs_v[k] if k < len(self.coeffs_v) else 0

    def to_q_basis(self) -> tuple[int, ...]:
        acc = [0]
        power = [1]  # (q - 1)^k, q-basis coefficients
        for c in self.coeffs_v:
            if len(power) > len(acc):
                acc += [0] * (len(power) - len(acc))
            for i, x in enumerate(power):
                acc[i] += c * x
            power = _mul(power, [-1, 1])
        return _trim(acc)

    def __add__(self, other: "CountPolynomial") -> "CountPolynomial":
        a, b = list(self.coeffs_v), list(other.coeffs_v)
        if len(a) < len(b):
            a, b = b, a
        for i, x in enumerate(b):
            a[i] += x
        return CountPolynomial(_trim(a))

    def evaluate_v(self, v: int) -> int:
        return sum(c * v ** k for k, c in enumerate(self.coeffs_v))

    def evaluate_q(self, q: int) -> int:
        return self.evaluate_v(q - 1)

    def render(self, basis: str = "v") -> str:
        if basis == "v":
            coeffs, sym = self.coeffs_v, "v"
        elif basis == "q":
            coeffs, sym = self.to_q_basis(), "q"
        else:
            raise ValueError("basis must be 'v' or 'q'")
        if not coeffs:
            return "0"
        parts = []
        for k in range(len(coeffs) - 1, -1, -1):
            c = coeffs[k]
            if not c:
                continue
            mag = abs(c)
            if k == 0:
                body = str(mag)
            else:
                var = sym if k == 1 else f"{sym}^{k}"
                body = var if mag == 1 else f"{mag}{var}"
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(f"+{body}" if c > 0 else f"-{body}")
        return "".join(parts)

    def __str__(self) -> str:
        return self.render()


def family_count(rec: GoodFamilyRecord) -> CountPolynomial:
    """Expand v^(d - sum n_j) * prod (v - j)^(n_j)."""
    total_excl = sum(nj for _, nj in rec.n)
    coeffs: list[int] = [0] * (rec.d - total_excl) + [1]
    for j, nj in rec.n:
        for _ in range(nj):
            coeffs = _mul(coeffs, [-j, 1])
    return CountPolynomial(_trim(coeffs))


def aggregate(records: Iterable[GoodFamilyRecord]) -> CountPolynomial:
    total = CountPolynomial.zero()
    for rec in records:
        total = total + family_count(rec)
    return total
