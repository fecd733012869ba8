"""Characteristic function of the rod problem ``y'''' = s^2 y`` on ``[0, 1]``.

Two independent routes to the same determinant ``Delta(s)``:

* :func:`char_det_direct` applies the boundary forms to the Krylov
  functions and takes the 4x4 determinant;
* :func:`char_det_expansion` weights ten transcendental basis functions by
  the x-vector of minor combinations (:func:`xvector_of`).

Both return the *scaled* value ``Delta(s) * exp(-sqrt(s))``; the factor
``exp(sqrt(s))`` is the common growth of every term, so scaled values stay
bounded by a polynomial in ``sqrt(s)`` and never overflow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import FasteningConfig, minors
from .errors import DomainError

# Below this sqrt(s) the power series replace the closed forms.
SERIES_BETA = 1.0
_SERIES_TERMS = 12

BASIS_LABELS = (
    "f-/s^2", "f-", "s^2 f-", "f+", "z/s", "s z",
    "g-/sqrt(s)", "sqrt(s)^3 g-", "g+/sqrt(s)^3", "sqrt(s) g+",
)
# Power of s multiplying each of f-, f-, f-, f+, z, z, g-, g-, g+, g+.
BASIS_POWERS = np.array([-2.0, 0.0, 2.0, 0.0, -1.0, 1.0, -0.5, 1.5, -1.5, 0.5])

CONVENTION = "a1*y(0)+a4*y'''(0); -a2*y'(0)+a3*y''(0); -a5*y(1)+a8*y'''(1); a6*y'(1)+a7*y''(1)"


def _check_s(s):
    arr = np.asarray(s, dtype=float)
    if np.any(~np.isfinite(arr)) or np.any(arr <= 0):
        raise DomainError(f"spectral parameter must be positive and finite, got {s!r}")
    return arr


def _series(u, p: int) -> np.ndarray:
    """``sum_m (-4)^m u^(4m) / (4m+p)!`` for small ``u``."""
    u4 = np.asarray(u, dtype=float) ** 4
    term = np.full_like(u4, 1.0 / math.factorial(p))
    total = term.copy()
    for m in range(1, _SERIES_TERMS):
        n = 4 * m + p
        term = term * (-4.0 * u4) / ((n - 3) * (n - 2) * (n - 1) * n)
        total = total + term
    return total


def _plain_series(u, p: int) -> np.ndarray:
    """``sum_k u^(4k) / (4k+p)!`` (the non-alternating Krylov series)."""
    u4 = np.asarray(u, dtype=float) ** 4
    term = np.full_like(u4, 1.0 / math.factorial(p))
    total = term.copy()
    for k in range(1, _SERIES_TERMS):
        n = 4 * k + p
        term = term * u4 / ((n - 3) * (n - 2) * (n - 1) * n)
        total = total + term
    return total


# --- Krylov functions -------------------------------------------------------

@dataclass(frozen=True)
class KrylovState:
    """``table[r, j] = y_{j+1}^{(r)}(x, s)`` for ``r, j = 0..3``."""

    x: float
    s: float
    table: np.ndarray = field(repr=False)


def _krylov_base(x: float, beta: float) -> np.ndarray:
    u = beta * x
    if u <= SERIES_BETA:
        return np.array([x ** p * float(_plain_series(u, p)) for p in range(4)])
    c, sn = math.cos(u), math.sin(u)
    ch, sh = math.cosh(u), math.sinh(u)
    return np.array([
        (c + ch) / 2,
        (sn + sh) / (2 * beta),
        (ch - c) / (2 * beta ** 2),
        (sh - sn) / (2 * beta ** 3),
    ])


def _derivative_table(base, beta: float) -> np.ndarray:
    # y1' = s^2 y4, y2' = y1, y3' = y2, y4' = y3
    rows = [np.asarray(base, dtype=float)]
    b4 = beta ** 4
    for _ in range(3):
        p = rows[-1]
        rows.append(np.array([b4 * p[3], p[0], p[1], p[2]]))
    return np.vstack(rows)


def krylov_eval(x: float, s: float) -> KrylovState:
    """Values and first three derivatives of the four Krylov functions at ``x``."""
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"x must lie in [0, 1], got {x}")
    s = float(_check_s(s))
    beta = math.sqrt(s)
    return KrylovState(x, s, _derivative_table(_krylov_base(x, beta), beta))


# --- direct determinant -----------------------------------------------------

def char_det_direct(config: FasteningConfig, s: float) -> float:
    """``det[U_i(y_j)] * exp(-sqrt(s))`` at length 1."""
    s = float(_check_s(s))
    beta = math.sqrt(s)
    A = config.form_matrix()
    left = A[:2, :4]
    right = A[2:, 4:]
    if beta <= SERIES_BETA:
        Y = _derivative_table(_krylov_base(1.0, beta), beta)
        M = np.vstack([left, right @ Y])
        return float(np.linalg.det(M)) * math.exp(-beta)

    # Y(1) = e^beta * G + W with G the rank-one table of the e^{beta x}
    # component; the e^{2 beta} term of the determinant is then identically
    # zero and is dropped instead of being cancelled in floating point.
    r = np.arange(4)
    G = 0.25 * beta ** (r[:, None] - r[None, :]).astype(float)
    c, sn = math.cos(beta), math.sin(beta)
    T = _derivative_table([c / 2, sn / (2 * beta), -c / (2 * beta ** 2), -sn / (2 * beta ** 3)], beta)
    D = 0.25 * (-1.0) ** (r[:, None] + r[None, :]) * beta ** (r[:, None] - r[None, :]).astype(float)
    W = T + math.exp(-beta) * D
    g = right @ G
    w = right @ W

    def det(r3, r4):
        return float(np.linalg.det(np.vstack([left, r3, r4])))

    return det(g[0], w[1]) + det(w[0], g[1]) + math.exp(-beta) * det(w[0], w[1])


# --- transcendental basis ---------------------------------------------------

@dataclass(frozen=True)
class TranscendentalBasis:
    """``f-, f+, z, g-, g+`` at ``s``, each multiplied by ``exp(-log_scale)``."""

    s: float
    f_minus: float
    f_plus: float
    z: float
    g_minus: float
    g_plus: float
    log_scale: float

    def unscaled(self) -> dict:
        k = math.exp(self.log_scale)
        return {name: getattr(self, name) * k for name in ("f_minus", "f_plus", "z", "g_minus", "g_plus")}


def transcendental_basis(s: float) -> TranscendentalBasis:
    s = float(_check_s(s))
    beta = math.sqrt(s)
    fm, fp, z, gm, gp = (float(v[0]) for v in _blocks_scaled(np.array([beta])))
    return TranscendentalBasis(s, fm, fp, z, gm, gp, beta)


def _blocks_scaled(beta: np.ndarray):
    e = np.exp(-beta)
    e2 = np.exp(-2 * beta)
    ch = (1 + e2) / 2
    sh = (1 - e2) / 2
    c, sn = np.cos(beta), np.sin(beta)
    return ((e - c * ch) / 2, (e + c * ch) / 2, sn * sh / 2,
            (-sn * ch - c * sh) / 2, (-sn * ch + c * sh) / 2)


def basis_scaled(s) -> np.ndarray:
    """The ten basis functions times ``exp(-sqrt(s))``; shape ``(..., 10)``."""
    s = _check_s(s)
    beta = np.sqrt(s)
    fm, fp, z, gm, gp = _blocks_scaled(beta)
    b3 = beta ** 3
    out = np.stack([fm / s ** 2, fm, s ** 2 * fm, fp, z / s, s * z,
                    gm / beta, b3 * gm, gp / b3, beta * gp], axis=-1)
    small = beta <= SERIES_BETA
    if np.any(small):
        t = beta[small]
        e = np.exp(-t)
        fm_s4 = 2 * _series(t, 4)      # f-/s^2
        z_s = _series(t, 2)            # z/s
        gm_b = -_series(t, 1)          # g-/sqrt(s)
        gp_b3 = -2 * _series(t, 3)     # g+/sqrt(s)^3
        t4 = t ** 4
        ser = np.stack([fm_s4, t4 * fm_s4, t4 ** 2 * fm_s4, 1 - t4 * fm_s4,
                        z_s, t4 * z_s, gm_b, t4 * gm_b, gp_b3, t4 * gp_b3], axis=-1)
        out[small] = ser * e[:, None]
    return out


# --- x-vector ---------------------------------------------------------------

@dataclass(frozen=True)
class XVector:
    """Ten minor combinations weighting the basis functions, defined up to scale."""

    values: np.ndarray
    convention: str = CONVENTION

    def __post_init__(self):
        v = np.array(self.values, dtype=float).reshape(10)
        object.__setattr__(self, "values", v)

    def canonical(self) -> "XVector":
        v = self.values
        n = np.linalg.norm(v)
        if n == 0:
            raise DomainError("zero x-vector has no direction")
        v = v / n
        if v[np.argmax(np.abs(v))] < 0:
            v = -v
        return XVector(v, self.convention)

    def normalized_to(self, index: int) -> np.ndarray:
        """Values divided by component ``index`` (0-based)."""
        return self.values / self.values[index]

    def distance(self, other: "XVector") -> float:
        return projective_distance(self.values, other.values)

    def __iter__(self):
        return iter(self.values)


def projective_distance(u, v) -> float:
    """Sine of the angle between two lines through the origin."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    c = abs(float(u @ v)) / (np.linalg.norm(u) * np.linalg.norm(v))
    return math.sqrt(max(0.0, 1.0 - min(c, 1.0) ** 2))


# Expansion weights: x_k = sum of sign * minor, minors taken as determinants of
# the unsigned coefficient matrix A in increasing column order.  The signs
# (and the factor 2 on the z terms) were fixed by matching the expansion to the
# direct determinant; see tests/test_charfn.py::test_expansion_matches_direct.
XVECTOR_TERMS = (
    ((+1, "M1256"),),
    ((+1, "M1368"), (+1, "M2457")),
    ((+1, "M3478"),),
    ((-1, "M1278"), (-1, "M3456"), (-1, "M1368"), (-1, "M2457")),
    ((+2, "M1357"),),
    ((-2, "M2468"),),
    ((+1, "M1268"), (+1, "M2456")),
    ((+1, "M2478"), (+1, "M3468")),
    ((-1, "M1257"), (-1, "M1356")),
    ((-1, "M1378"), (-1, "M3457")),
)


def xvector_of(config: FasteningConfig) -> XVector:
    m = minors(config)
    return XVector(np.array([sum(w * m[name] for w, name in terms) for terms in XVECTOR_TERMS]))


def char_det_expansion(xv, s: float) -> float:
    """``sum_k x_k * basis_k(s) * exp(-sqrt(s))``."""
    values = xv.values if isinstance(xv, XVector) else np.asarray(xv, dtype=float)
    return float(basis_scaled(np.array([float(_check_s(s))]))[0] @ values)


def char_det(config: FasteningConfig, s: float) -> float:
    """Unscaled ``Delta(s)``; overflows to ``inf`` once ``sqrt(s)`` passes ~709."""
    return char_det_direct(config, s) * math.exp(math.sqrt(s))
