"""Continuous-variable and IQP quantum data encodings with a classical
ML benchmark pipeline for tabular churn classification."""

from .encoders import (
    DisplacementParams,
    EncoderConfig,
    IqpPhaseVector,
    QubitStateVector,
    SqueezeParams,
    displace_vacuum,
    displace_vacuum_expm,
    encode_matrix,
    encode_row,
    iqp_encode,
    iqp_phases,
    squeeze_vacuum,
)
from .fock import (
    FockVector,
    LadderPair,
    ladder_pair,
    matrix_exponential,
    quadrature_variances,
    vacuum,
)

__version__ = "0.1.0"

__all__ = [
    "DisplacementParams",
    "EncoderConfig",
    "FockVector",
    "IqpPhaseVector",
    "LadderPair",
    "QubitStateVector",
    "SqueezeParams",
    "displace_vacuum",
    "displace_vacuum_expm",
    "encode_matrix",
    "encode_row",
    "iqp_encode",
    "iqp_phases",
    "ladder_pair",
    "matrix_exponential",
    "quadrature_variances",
    "squeeze_vacuum",
    "vacuum",
]
