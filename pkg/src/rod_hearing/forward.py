"""Forward problem: eigenvalues of the rod for a known fastening."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .charfn import char_det_direct
from .core import FasteningConfig, canonicalize
from .errors import DomainError, ScanExhausted


class SuspectedDoubleRoot(UserWarning):
    """``|Delta|`` nearly touches zero between scan points without changing sign."""


@dataclass(frozen=True)
class SolverOptions:
    step: float = math.pi / 40      # scan step in beta = sqrt(s)
    beta_min: float = 1e-3
    beta_max: float = 400.0
    rtol: float = 1e-13             # relative root tolerance in s
    double_root_tol: float = 1e-8


@dataclass(frozen=True)
class Spectrum:
    values: tuple
    residuals: tuple = ()
    diagnostics: tuple = field(default=(), compare=False)

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, i):
        return self.values[i]

    def __iter__(self):
        return iter(self.values)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=float)


def forward_spectrum(config: FasteningConfig, n: int, opts: SolverOptions | None = None) -> Spectrum:
    """First ``n`` positive roots of the characteristic determinant."""
    if n < 1:
        raise ValueError("n must be at least 1")
    opts = opts or SolverOptions()
    cfg = canonicalize(config)

    def f(beta: float) -> float:
        return char_det_direct(cfg, beta * beta)

    roots: list[float] = []
    residuals: list[float] = []
    diagnostics: list[str] = []
    grid_n = int(math.ceil((opts.beta_max - opts.beta_min) / opts.step))
    b_prev, f_prev = opts.beta_min, f(opts.beta_min)
    f_prev2 = None
    b_prev2 = None
    for k in range(1, grid_n + 1):
        b = min(opts.beta_min + k * opts.step, opts.beta_max)
        fb = f(b)
        if f_prev == 0.0:
            roots.append(b_prev * b_prev)
            residuals.append(0.0)
        elif fb * f_prev < 0:
            beta = brentq(f, b_prev, b, xtol=1e-300, rtol=max(opts.rtol / 2, 4.5e-16), maxiter=200)
            roots.append(beta * beta)
            scale = max(abs(fb), abs(f_prev))
            residuals.append(abs(f(beta)) / scale)
        elif f_prev2 is not None and abs(f_prev) < abs(fb) and abs(f_prev) < abs(f_prev2) \
                and f_prev2 * f_prev > 0:
            note = _check_tangency(f, b_prev2, b, max(abs(fb), abs(f_prev2)), opts.double_root_tol)
            if note:
                diagnostics.append(note)
                warnings.warn(note, SuspectedDoubleRoot, stacklevel=2)
        if len(roots) >= n:
            break
        b_prev2, f_prev2 = b_prev, f_prev
        b_prev, f_prev = b, fb
    if len(roots) < n:
        raise ScanExhausted(
            f"found {len(roots)} of {n} roots below sqrt(s) = {opts.beta_max}", found=roots)
    return Spectrum(tuple(roots[:n]), tuple(residuals[:n]), tuple(diagnostics))


def _check_tangency(f, lo, hi, scale, tol):
    res = minimize_scalar(lambda b: abs(f(b)), bounds=(lo, hi), method="bounded",
                          options={"xatol": 1e-12 * hi})
    if res.fun <= tol * scale:
        return f"suspected double root near s = {res.x ** 2:.15g} (|Delta|/scale = {res.fun / scale:.3g})"
    return None


# --- units ------------------------------------------------------------------

@dataclass(frozen=True)
class MaterialParams:
    alpha: float    # flexural rigidity
    rho: float      # density
    F: float        # cross-section area
    l: float        # length

    def __post_init__(self):
        for name in ("alpha", "rho", "F", "l"):
            v = getattr(self, name)
            if not (v > 0 and math.isfinite(v)):
                raise DomainError(f"{name} must be positive, got {v}")


def omega_to_s(omega: float, p: MaterialParams) -> float:
    """Dimensionless spectral parameter of angular frequency ``omega``."""
    if not omega > 0:
        raise DomainError(f"omega must be positive, got {omega}")
    return p.l ** 2 * omega * math.sqrt(p.rho * p.F / p.alpha)


def s_to_omega(s: float, p: MaterialParams) -> float:
    if not s > 0:
        raise DomainError(f"s must be positive, got {s}")
    return s / (p.l ** 2 * math.sqrt(p.rho * p.F / p.alpha))
