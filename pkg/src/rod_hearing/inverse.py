"""Inverse problem: the fastening (up to end swap) from nine eigenvalues.

Pipeline: :func:`build_system` evaluates the ten basis functions at the nine
eigenvalues, :func:`solve_xvector` extracts the one-dimensional null space,
and :func:`reconstruct_configs` finds boundary forms whose x-vector spans it.

The reconstruction fits the four row angles against the linear system
itself rather than against the estimated null vector: that vector is only
determined to roughly ``noise / sigma_min`` in its weak directions, while the
equations measure the relative eigenvalue misfit of a candidate directly.
Starting points come from a coarse grid over the four angles scored by that
same misfit; each start is polished with bounded least squares.
"""

from __future__ import annotations

import itertools
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import least_squares

from .charfn import BASIS_POWERS, XVector, basis_scaled, projective_distance, xvector_of
from .core import (
    FasteningConfig,
    FasteningLabel,
    canonicalize,
    classify,
    config_distance,
    dual_of,
    duality_distance,
)
from .errors import BadSpectrum, NoFit, RankDeficient

N_EIGEN = 9
RANK_EPS = 1e-8
FIT_TOL = 1e-6
NOISY_FIT_TOL = 1e-3
EXACT_FIT = 1e-10       # stop refining grid candidates once one fits this well
REFINE_BATCH = 4
HALF_PI = math.pi / 2


@dataclass(frozen=True)
class InverseOptions:
    rank_eps: float = RANK_EPS
    fit_tol: float = FIT_TOL
    grid: int = 32
    keep: int = 32
    zero_tol: float = 1e-6          # "component is zero" for the fast path
    legacy_case_analysis: bool = False
    threads: int | None = None

    @classmethod
    def noisy(cls, **kw) -> "InverseOptions":
        kw.setdefault("fit_tol", NOISY_FIT_TOL)
        return cls(**kw)


@dataclass(frozen=True)
class InverseSystem:
    spectrum: np.ndarray
    matrix: np.ndarray          # rows of the column-weighted, row-normalized system
    col_weights: np.ndarray     # x_raw = col_weights * x_matrix
    row_scales: np.ndarray
    singular_values: np.ndarray = field(repr=False)
    rank_eps: float = RANK_EPS

    @property
    def rank(self) -> int:
        sv = self.singular_values
        return int(np.sum(sv > self.rank_eps * sv[0]))


@dataclass(frozen=True)
class IdentificationResult:
    primary_config: FasteningConfig
    dual_config: FasteningConfig
    xvector: XVector
    rank: int
    gap: float
    fit_residual: float             # max linearized relative eigenvalue misfit
    x_distance: float               # projective distance, observed x vs xvector_of(primary)
    labels: tuple                   # (left, right) labels of the primary config
    dual_labels: tuple
    singular_values: tuple = ()
    alternatives: tuple = ()        # further configs fitting within tolerance


def check_spectrum(spectrum) -> np.ndarray:
    s = np.asarray(spectrum, dtype=float).ravel()
    if s.size != N_EIGEN:
        raise BadSpectrum(f"expected {N_EIGEN} eigenvalues, got {s.size}")
    if not np.all(np.isfinite(s)) or np.any(s <= 0):
        raise BadSpectrum("eigenvalues must be finite and positive")
    if np.any(np.diff(s) <= 0):
        raise BadSpectrum("eigenvalues must be distinct and strictly increasing")
    return s


def column_weights(spectrum: np.ndarray) -> np.ndarray:
    # Every basis function carries a power of s; rescale each column by the
    # geometric-mean eigenvalue to that power so the columns are comparable.
    s_ref = math.sqrt(spectrum[0] * spectrum[-1])
    return s_ref ** (-BASIS_POWERS)


def build_system(spectrum, rank_eps: float = RANK_EPS) -> InverseSystem:
    s = check_spectrum(spectrum)
    w = column_weights(s)
    raw = basis_scaled(s) * w
    norms = np.linalg.norm(raw, axis=1)
    B = raw / norms[:, None]
    sv = np.linalg.svd(B, compute_uv=False)
    return InverseSystem(s, B, w, norms, sv, rank_eps)


def solve_xvector(system: InverseSystem) -> tuple[XVector, int, float]:
    """Null direction of the system in raw x coordinates, with rank and gap."""
    _, sv, vt = np.linalg.svd(system.matrix)
    rank = int(np.sum(sv > system.rank_eps * sv[0]))
    gap = float(sv[-1] / sv[-2])
    if rank < N_EIGEN:
        raise RankDeficient(
            f"system rank {rank} < {N_EIGEN}: the spectrum does not fix a unique x-direction "
            f"(sigma_min/sigma_max = {sv[-1] / sv[0]:.3g}, rank_eps = {system.rank_eps:g})",
            rank=rank, singular_values=sv)
    x = vt[-1] * system.col_weights
    return XVector(x).canonical(), rank, gap


# --- x-vector as a multilinear function of the row angles -------------------

def _xvector_tensor() -> np.ndarray:
    """``T[k, i1, i2, i3, i4]``: x_k for rows set to unit vectors e_{i_r}."""
    T = np.zeros((10, 2, 2, 2, 2))
    unit = ((1.0, 0.0), (0.0, 1.0))
    for idx in itertools.product((0, 1), repeat=4):
        cfg = FasteningConfig.from_coefficients(_coeffs_from_rows([unit[i] for i in idx]))
        T[(slice(None),) + idx] = xvector_of(cfg).values
    return T


def _coeffs_from_rows(rows):
    (a1, a4), (a2, a3), (a5, a8), (a6, a7) = rows
    return [a1, a2, a3, a4, a5, a6, a7, a8]


X_TENSOR = _xvector_tensor()
_X_FLAT = X_TENSOR.reshape(10, 16)


def xvector_from_angles(thetas) -> np.ndarray:
    w = np.ones(1)
    for t in thetas:
        w = np.outer(w, (math.cos(t), math.sin(t))).ravel()
    return _X_FLAT @ w


class _Fitter:
    """Residuals of candidate row angles against a fixed spectrum."""

    def __init__(self, spectrum: np.ndarray, system: InverseSystem):
        self.s = spectrum
        self.system = system
        h = 1e-5 * spectrum
        self.b = basis_scaled(spectrum)
        self.db = (basis_scaled(spectrum + h) - basis_scaled(spectrum - h)) / (2 * h[:, None])
        self.brow = np.linalg.norm(self.b, axis=1)

    def residuals(self, thetas) -> np.ndarray:
        """Linearized relative shift of each eigenvalue: Delta / (s * dDelta/ds)."""
        x = xvector_from_angles(thetas)
        num = self.b @ x
        den = self.s * (self.db @ x)
        floor = 1e-300 + 1e-12 * self.brow * np.linalg.norm(x)
        den = np.where(np.abs(den) < floor, np.copysign(floor, den + 0.0), den)
        return num / den

    def misfit(self, thetas) -> float:
        return float(np.max(np.abs(self.residuals(thetas))))

    def refine(self, thetas0, free=None) -> tuple[np.ndarray, float]:
        thetas0 = np.asarray(thetas0, dtype=float)
        free = list(range(4)) if free is None else list(free)
        if not free:
            return thetas0, self.misfit(thetas0)

        def fun(p):
            t = thetas0.copy()
            t[free] = p
            return self.residuals(t)

        p0 = np.clip(thetas0[free], 0.0, HALF_PI)
        sol = least_squares(fun, p0, bounds=(0.0, HALF_PI), method="trf",
                            x_scale=1.0, xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=400)
        t = thetas0.copy()
        t[free] = sol.x
        return t, self.misfit(t)


# Derivative-order gap between the two coefficients of each row.
_ROW_ORDER_GAP = np.array([3.0, 1.0, 3.0, 1.0])


def grid_angles(spectrum: np.ndarray, n: int) -> list[np.ndarray]:
    """Per-row angle grids, uniform in the effective angle of each row.

    A row mixing derivatives ``k`` orders apart weighs its second coefficient
    by about ``sqrt(s)^k``, so small raw angles matter as much as large ones;
    the grid is uniform in ``phi`` with ``tan(theta) = tan(phi) / sqrt(s1)^k``.
    """
    phi = np.linspace(0.0, HALF_PI, n)
    kappa = math.sqrt(spectrum[0]) ** _ROW_ORDER_GAP
    return [np.arctan2(np.sin(phi), np.cos(phi) * k) for k in kappa]


def _grid_candidates(fitter: _Fitter, n: int, keep: int) -> list[np.ndarray]:
    """Row-angle grid cells with the smallest summed squared misfit, one per basin."""
    ths = grid_angles(fitter.s, n)
    Vs = [np.stack([np.cos(t), np.sin(t)], axis=1) for t in ths]
    num_t = np.einsum("ik,kabcd->iabcd", fitter.b, X_TENSOR)
    den_t = np.einsum("ik,kabcd->iabcd", fitter.s[:, None] * fitter.db, X_TENSOR)

    def on_grid(T):
        return np.einsum("iabcd,pa,qb,rc,sd->ipqrs", T, *Vs, optimize=True)

    with np.errstate(divide="ignore", invalid="ignore"):
        r = on_grid(num_t) / on_grid(den_t)
    score = np.sum(r * r, axis=0)
    flat = np.where(np.isfinite(score), score, np.inf).ravel()
    m = min(flat.size, max(keep * 64, 2048))
    top = np.argpartition(flat, m - 1)[:m]
    order = top[np.lexsort((top, flat[top]))]
    chosen: list[tuple[int, ...]] = []
    for idx in order:
        cell = np.unravel_index(idx, score.shape)
        if all(max(abs(a - b) for a, b in zip(cell, c)) > 2 for c in chosen):
            chosen.append(cell)
            if len(chosen) >= keep:
                break
    return [np.array([ths[r][c[r]] for r in range(4)]) for c in chosen]


# --- zero-pattern fast path -------------------------------------------------

# row kinds: 0 -> (1, 0), 1 -> (0, 1), 2 -> both nonzero
def _pattern_starts(kinds):
    fixed = {0: 0.0, 1: HALF_PI}
    free = [r for r, k in enumerate(kinds) if k == 2]
    base = np.array([fixed.get(k, math.pi / 4) for k in kinds])
    starts = []
    for combo in itertools.product((math.pi / 8, math.pi / 4, 3 * math.pi / 8), repeat=len(free)):
        t = base.copy()
        t[free] = combo
        starts.append(t)
    return starts, free


def case_analysis(xv: XVector, fitter: _Fitter, zero_tol: float) -> list[tuple[np.ndarray, float]]:
    """Fit only patterns whose vanishing x components agree with ``xv``."""
    zeros = np.abs(xv.values) <= zero_tol * np.max(np.abs(xv.values))
    out = []
    for kinds in itertools.product((0, 1, 2), repeat=4):
        probe = np.array([{0: 0.0, 1: HALF_PI, 2: 0.7}[k] for k in kinds])
        pattern = np.abs(xvector_from_angles(probe)) <= 1e-12
        if not np.array_equal(pattern, zeros):
            continue
        starts, free = _pattern_starts(kinds)
        best = min((fitter.refine(t, free) for t in starts), key=lambda r: r[1])
        out.append(best)
    return out


# --- reconstruction ---------------------------------------------------------

def _lexkey(cfg: FasteningConfig) -> tuple:
    return tuple(round(v, 12) for v in canonicalize(cfg).coefficients)


def _order_pair(cfg: FasteningConfig) -> tuple[FasteningConfig, FasteningConfig]:
    c = canonicalize(cfg)
    d = dual_of(c)
    return (c, d) if _lexkey(c) <= _lexkey(d) else (d, c)


def _thread_count(opts: InverseOptions) -> int:
    if opts.threads:
        return max(1, int(opts.threads))
    env = os.environ.get("ROD_HEARING_THREADS")
    return max(1, int(env)) if env else 1


def _refine_batches(fitter: _Fitter, starts, threads: int):
    # Fixed-size batches, so the set of refined starts (and the result) does
    # not depend on the thread count.
    out = []
    pool = ThreadPoolExecutor(threads) if threads > 1 else None
    try:
        for i in range(0, len(starts), REFINE_BATCH):
            batch = starts[i:i + REFINE_BATCH]
            out += list(pool.map(fitter.refine, batch)) if pool else [fitter.refine(t) for t in batch]
            if min(r for _, r in out) <= EXACT_FIT:
                break
    finally:
        if pool:
            pool.shutdown()
    return out


def reconstruct_configs(xv: XVector, system: InverseSystem, opts: InverseOptions | None = None,
                        rank: int = N_EIGEN, gap: float = float("nan")) -> IdentificationResult:
    opts = opts or InverseOptions()
    fitter = _Fitter(system.spectrum, system)
    fits: list[tuple[np.ndarray, float]] = []

    n_zero = int(np.sum(np.abs(xv.values) <= opts.zero_tol * np.max(np.abs(xv.values))))
    if opts.legacy_case_analysis or n_zero >= 6:
        fits = case_analysis(xv, fitter, opts.zero_tol)
    if not opts.legacy_case_analysis and not any(f[1] <= opts.fit_tol for f in fits):
        starts = _grid_candidates(fitter, opts.grid, opts.keep)
        fits += _refine_batches(fitter, starts, _thread_count(opts))

    if not fits:
        raise NoFit("no boundary pattern matches the zero structure of the x-vector", math.inf)
    fits.sort(key=lambda f: (f[1], tuple(np.round(f[0], 12))))
    best_t, best_r = fits[0]
    if best_r > opts.fit_tol:
        raise NoFit(f"best configuration misfit {best_r:.3g} exceeds fit_tol {opts.fit_tol:g}", best_r)

    primary, dual = _order_pair(FasteningConfig.from_angles(best_t))
    alternatives = []
    for t, r in fits[1:]:
        if r > opts.fit_tol:
            break
        cand = canonicalize(FasteningConfig.from_angles(t))
        if duality_distance(cand, primary) <= 1e-6:
            continue
        if any(duality_distance(cand, a) <= 1e-6 for a in alternatives):
            continue
        alternatives.append(_order_pair(cand)[0])

    return IdentificationResult(
        primary_config=primary,
        dual_config=dual,
        xvector=xv,
        rank=rank,
        gap=gap,
        fit_residual=best_r,
        x_distance=projective_distance(xv.values, xvector_of(primary).values),
        labels=classify(primary),
        dual_labels=classify(dual),
        singular_values=tuple(float(v) for v in system.singular_values),
        alternatives=tuple(alternatives),
    )


def identify(spectrum, opts: InverseOptions | None = None) -> IdentificationResult:
    """Boundary configuration pair reproducing nine eigenvalues."""
    opts = opts or InverseOptions()
    system = build_system(spectrum, opts.rank_eps)
    xv, rank, gap = solve_xvector(system)
    return reconstruct_configs(xv, system, opts, rank=rank, gap=gap)


def recovery_error(found: FasteningConfig, truth: FasteningConfig) -> float:
    """Row-wise projective distance to the truth or its dual, whichever is nearer."""
    return duality_distance(found, truth)


__all__ = [
    "InverseOptions", "InverseSystem", "IdentificationResult", "FasteningLabel",
    "build_system", "solve_xvector", "reconstruct_configs", "identify", "recovery_error",
    "check_spectrum", "xvector_from_angles", "config_distance",
]
