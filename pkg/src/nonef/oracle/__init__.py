"""Exact emptiness and dimension certificates via modular interpolation matrices."""

from .certify import (
    EMPTY,
    EXACT,
    INCONCLUSIVE,
    Certification,
    RankCertificate,
    base_locus_contains,
    certify,
    curve_power,
    dimension,
    doubled_conic,
    resolve_witness,
    run_once,
    verify_certificate,
)
from .curves import CurveSpec, ModelCurve, build_model_curve, build_model_curve_T
from .linalg import derive_primes
from .problem import (
    AssembledProblem,
    Chain,
    InterpolationProblem,
    OnCurve,
    Ordinary,
    PointCondition,
    ProblemError,
    assemble,
)

__all__ = [
    "EMPTY",
    "EXACT",
    "INCONCLUSIVE",
    "AssembledProblem",
    "Certification",
    "Chain",
    "CurveSpec",
    "InterpolationProblem",
    "ModelCurve",
    "OnCurve",
    "Ordinary",
    "PointCondition",
    "ProblemError",
    "RankCertificate",
    "assemble",
    "base_locus_contains",
    "build_model_curve",
    "build_model_curve_T",
    "certify",
    "curve_power",
    "derive_primes",
    "dimension",
    "doubled_conic",
    "resolve_witness",
    "run_once",
    "verify_certificate",
]
