"""Closed-form predictions for the low-degree coefficients of k(U(q)) and
the torus-orbit size divisor, used as independent validators of engine runs.

In the v = q - 1 basis the constant coefficient is always 1, the linear
coefficient is the number of positive roots, and the quadratic coefficient
counts pairs j < k whose difference beta_k - beta_j is not a root.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd as igcd
from typing import Iterable

from .roots import RootSystem, snf_diagonal


@dataclass(frozen=True)
class LowCoeffPrediction:
    c0: int
    c1: int
    c2: int

    def __post_init__(self) -> None:
        if self.c0 != 1:
            raise ValueError("constant coefficient must be 1")


def predict_low_coeffs(rs: RootSystem) -> LowCoeffPrediction:
    pairs = 0
    for j in range(1, rs.N + 1):
        bj = rs.root(j).coeffs
        for k in range(j + 1, rs.N + 1):
            bk = rs.root(k).coeffs
            diff = tuple(x - y for x, y in zip(bk, bj))
            if not rs.is_root(diff):
                pairs += 1
    return LowCoeffPrediction(1, rs.N, pairs)


def orbit_divisor(rs: RootSystem, roots: Iterable, v: int) -> int:
    """v^k / prod gcd(d_l, v) for the Smith diagonal d of the independent
    root subset; every torus orbit size on the corresponding stratum is a
    multiple of this."""
    diag = snf_diagonal(rs, list(roots))
    out = v ** len(diag)
    for d in diag:
        out //= igcd(d, v)
    return out
