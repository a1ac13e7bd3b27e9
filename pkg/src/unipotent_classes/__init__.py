"""Counting conjugacy classes of Sylow p-subgroups of finite Chevalley groups.

The class count k(U(q)) is obtained by decomposing the minimal representatives
of adjoint orbits into families of rational points of quasi-affine varieties
and counting each family exactly as a polynomial in v = q - 1; a brute-force
oracle and closed-form coefficient formulas validate the results.
"""

__version__ = "0.1.0"

from .coeffs import LowCoeffPrediction, orbit_divisor, predict_low_coeffs
from .counting import CountPolynomial, GoodFamilyRecord, aggregate, family_count
from .engine import EngineOptions, RunResult, run
from .oracle import (OrbitCensus, build_adjoint_generators, count_orbits_burnside,
                     count_orbits_unionfind, verify_partition)
from .roots import Root, RootSystem, build, independent, smith_diagonal, snf_diagonal

__all__ = [
    "CountPolynomial",
    "EngineOptions",
    "GoodFamilyRecord",
    "LowCoeffPrediction",
    "OrbitCensus",
    "Root",
    "RootSystem",
    "RunResult",
    "aggregate",
    "build",
    "build_adjoint_generators",
    "count_orbits_burnside",
    "count_orbits_unionfind",
    "family_count",
    "independent",
    "orbit_divisor",
    "predict_low_coeffs",
    "run",
    "smith_diagonal",
    "snf_diagonal",
    "verify_partition",
    "__version__",
]
