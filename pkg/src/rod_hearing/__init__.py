"""Identify how both ends of a rod are fastened from its flexural eigenvalues."""

__version__ = "0.1.0"

from .charfn import (
    XVector,
    char_det_direct,
    char_det_expansion,
    krylov_eval,
    transcendental_basis,
    xvector_of,
)
from .core import (
    BoundaryForm,
    FasteningConfig,
    FasteningLabel,
    canonicalize,
    classify,
    classify_end,
    dual_of,
    minors,
)
from .errors import (
    BadSpectrum,
    ConfigError,
    DomainError,
    NoFit,
    RankDeficient,
    RodHearingError,
    ScanExhausted,
    ZeroRow,
)
from .forward import MaterialParams, Spectrum, forward_spectrum, omega_to_s, s_to_omega
from .inverse import IdentificationResult, InverseOptions, build_system, identify, solve_xvector
