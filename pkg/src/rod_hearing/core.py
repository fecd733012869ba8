"""Boundary configurations of a rod: forms, canonical classes, minors, duality, labels.

A configuration holds the eight nonnegative coefficients ``a1..a8`` of the four
boundary forms

    U1 = a1*y(0) + a4*y'''(0)      U2 = -a2*y'(0) + a3*y''(0)
    U3 = -a5*y(1) + a8*y'''(1)     U4 =  a6*y'(1) + a7*y''(1)

grouped as pairs ``(lower-derivative, higher-derivative)`` coefficients:
``u1 = (a1, a4)``, ``u2 = (a2, a3)``, ``u3 = (a5, a8)``, ``u4 = (a6, a7)``.
The signs make every positive coefficient a restoring (physical) spring and
make the end swap ``x -> 1 - x`` map ``(u1, u2)`` onto ``(u3, u4)``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .errors import ConfigError, ZeroRow

ZERO_TOL = 1e-9

# Column pairs of the 4x8 coefficient matrix A, one pair per row (0-based).
ROW_COLUMNS = ((0, 3), (1, 2), (4, 7), (5, 6))
# Form names in row order.
ROW_NAMES = ("u1", "u2", "u3", "u4")


@dataclass(frozen=True)
class BoundaryForm:
    """One boundary condition row, defined up to a positive factor."""

    c_low: float
    c_high: float

    def __post_init__(self):
        lo, hi = float(self.c_low), float(self.c_high)
        if not (math.isfinite(lo) and math.isfinite(hi)):
            raise ConfigError(f"non-finite boundary coefficient ({lo}, {hi})")
        if lo < 0 or hi < 0:
            raise ConfigError(f"boundary coefficients must be nonnegative, got ({lo}, {hi})")
        if lo == 0 and hi == 0:
            raise ZeroRow("boundary form (0, 0) makes rank A < 4")
        object.__setattr__(self, "c_low", lo)
        object.__setattr__(self, "c_high", hi)

    @property
    def pair(self) -> tuple[float, float]:
        return (self.c_low, self.c_high)

    @property
    def angle(self) -> float:
        """Angle of the form on the unit circle, in [0, pi/2]."""
        return math.atan2(self.c_high, self.c_low)

    def canonical(self) -> "BoundaryForm":
        """Unit-norm representative with first nonzero component positive."""
        n = math.hypot(self.c_low, self.c_high)
        return BoundaryForm(self.c_low / n, self.c_high / n)

    @classmethod
    def from_angle(cls, theta: float) -> "BoundaryForm":
        lo, hi = math.cos(theta), math.sin(theta)
        # drop the rounding residue at the ends of [0, pi/2]
        return cls(lo if lo > 1e-15 else 0.0, hi if hi > 1e-15 else 0.0)


@dataclass(frozen=True)
class FasteningConfig:
    """The 4x8 matrix A stored as four boundary forms (left pair, right pair)."""

    u1: BoundaryForm
    u2: BoundaryForm
    u3: BoundaryForm
    u4: BoundaryForm

    @classmethod
    def from_coefficients(cls, a: Sequence[float]) -> "FasteningConfig":
        """Build from ``[a1, ..., a8]`` in the order of the boundary forms."""
        if len(a) != 8:
            raise ConfigError(f"expected 8 coefficients a1..a8, got {len(a)}")
        a = [float(v) for v in a]
        return cls(
            BoundaryForm(a[0], a[3]),
            BoundaryForm(a[1], a[2]),
            BoundaryForm(a[4], a[7]),
            BoundaryForm(a[5], a[6]),
        )

    @classmethod
    def from_angles(cls, thetas: Sequence[float]) -> "FasteningConfig":
        return cls(*(BoundaryForm.from_angle(t) for t in thetas))

    @property
    def forms(self) -> tuple[BoundaryForm, BoundaryForm, BoundaryForm, BoundaryForm]:
        return (self.u1, self.u2, self.u3, self.u4)

    def __iter__(self) -> Iterator[BoundaryForm]:
        return iter(self.forms)

    @property
    def coefficients(self) -> tuple[float, ...]:
        """``(a1, ..., a8)``."""
        u1, u2, u3, u4 = self.forms
        return (u1.c_low, u2.c_low, u2.c_high, u1.c_high,
                u3.c_low, u4.c_low, u4.c_high, u3.c_high)

    @property
    def angles(self) -> np.ndarray:
        return np.array([f.angle for f in self.forms])

    def matrix(self) -> np.ndarray:
        """The unsigned 4x8 coefficient matrix A."""
        A = np.zeros((4, 8))
        for r, (form, (i, j)) in enumerate(zip(self.forms, ROW_COLUMNS)):
            A[r, i] = form.c_low
            A[r, j] = form.c_high
        return A

    def form_matrix(self) -> np.ndarray:
        """The 4x8 matrix of the boundary forms with their signs, acting on
        ``(y, y', y'', y''')`` at 0 followed by the same at 1."""
        A = self.matrix()
        A[1, 1] = -A[1, 1]
        A[2, 4] = -A[2, 4]
        return A

    def canonical_tuple(self) -> tuple[float, ...]:
        out: list[float] = []
        for f in canonicalize(self).forms:
            out.extend(f.pair)
        return tuple(out)


def canonicalize(config: FasteningConfig) -> FasteningConfig:
    """Scale every form to unit norm with its first nonzero component positive."""
    return FasteningConfig(*(f.canonical() for f in config.forms))


def dual_of(config: FasteningConfig) -> FasteningConfig:
    """Exchange the two ends of the rod: ``u1 <-> u3``, ``u2 <-> u4``."""
    return FasteningConfig(config.u3, config.u4, config.u1, config.u2)


def form_distance(f: BoundaryForm, g: BoundaryForm) -> float:
    """Sine of the angle between two forms (projective distance)."""
    cross = f.c_low * g.c_high - f.c_high * g.c_low
    return abs(cross) / (math.hypot(*f.pair) * math.hypot(*g.pair))


def config_distance(c: FasteningConfig, d: FasteningConfig) -> float:
    """Largest row-wise projective distance between two configurations."""
    return max(form_distance(f, g) for f, g in zip(c.forms, d.forms))


def duality_distance(c: FasteningConfig, d: FasteningConfig) -> float:
    """Distance from ``c`` to the nearer of ``d`` and ``dual_of(d)``."""
    return min(config_distance(c, d), config_distance(c, dual_of(d)))


def equivalent(c: FasteningConfig, d: FasteningConfig, tol: float = ZERO_TOL) -> bool:
    return config_distance(c, d) <= tol


# --- minors -----------------------------------------------------------------

MINOR_KEYS: tuple[tuple[int, int, int, int], ...] = tuple(
    tuple(sorted(cols)) for cols in itertools.product(*ROW_COLUMNS)
)


def minor_name(key: tuple[int, ...]) -> str:
    """``(0, 1, 4, 5) -> 'M1256'``."""
    return "M" + "".join(str(i + 1) for i in key)


@dataclass(frozen=True)
class MinorSet:
    """The 16 nonvanishing 4x4 minors of A, keyed by 0-based sorted column tuples."""

    values: dict

    def __getitem__(self, name) -> float:
        if isinstance(name, str):
            key = tuple(int(ch) - 1 for ch in name.lstrip("M"))
            return self.values[key]
        return self.values[tuple(name)]

    def items(self):
        return self.values.items()


def minors(config: FasteningConfig) -> MinorSet:
    """Signed determinants of every column choice of A (one column per row).

    Each minor is a determinant of a matrix with one nonzero per row, so it is
    the coefficient product times the sign of the column permutation.
    """
    A = config.matrix()
    vals = {}
    for key in MINOR_KEYS:
        vals[key] = _perm_det(A, key)
    return MinorSet(vals)


def _perm_det(A: np.ndarray, key: tuple[int, ...]) -> float:
    # Each row r has its entry in exactly one selected column; read off the
    # permutation and its parity instead of running an LU factorization.
    perm = []
    prod = 1.0
    for r, (i, j) in enumerate(ROW_COLUMNS):
        col = i if i in key else j
        perm.append(key.index(col))
        prod *= A[r, col]
    return _parity(perm) * prod


def _parity(perm: Sequence[int]) -> int:
    sign = 1
    p = list(perm)
    for i in range(len(p)):
        while p[i] != i:
            j = p[i]
            p[i], p[j] = p[j], p[i]
            sign = -sign
    return sign


# --- classification ---------------------------------------------------------

TRANSLATIONAL_KINDS = ("displacement-fixed", "shear-free", "spring")
ROTATIONAL_KINDS = ("slope-fixed", "moment-free", "spring")

_END_NAMES = {
    ("displacement-fixed", "slope-fixed"): "rigid clamping",
    ("displacement-fixed", "moment-free"): "free support",
    ("shear-free", "moment-free"): "free edge",
    ("shear-free", "slope-fixed"): "floating fixing",
}


@dataclass(frozen=True)
class FasteningLabel:
    translational: str
    rotational: str
    end_name: str
    k_t: float | None = None
    k_r: float | None = None

    def __str__(self) -> str:
        if self.end_name != "elastic fixing":
            return self.end_name
        parts = []
        if self.k_t is not None:
            parts.append(f"k_t={_fmt_k(self.k_t)}")
        if self.k_r is not None:
            parts.append(f"k_r={_fmt_k(self.k_r)}")
        fixed = []
        if self.translational != "spring":
            fixed.append(self.translational)
        if self.rotational != "spring":
            fixed.append(self.rotational)
        body = ", ".join(parts + fixed)
        return f"elastic fixing ({body})"


def _fmt_k(k: float) -> str:
    r = round(k)
    if abs(k - r) <= 1e-6 * max(1.0, abs(k)):
        return str(int(r))
    return f"{k:.6g}"


def _kind(form: BoundaryForm, zero_tol: float, kinds: tuple[str, str, str]):
    c = form.canonical()
    if c.c_high <= zero_tol:
        return kinds[0], None
    if c.c_low <= zero_tol:
        return kinds[1], None
    return kinds[2], form.c_low / form.c_high


def classify_end(translational: BoundaryForm, rotational: BoundaryForm,
                 zero_tol: float = ZERO_TOL) -> FasteningLabel:
    """Name the fastening of one end from its shear form and its moment form."""
    t_kind, k_t = _kind(translational, zero_tol, TRANSLATIONAL_KINDS)
    r_kind, k_r = _kind(rotational, zero_tol, ROTATIONAL_KINDS)
    name = _END_NAMES.get((t_kind, r_kind), "elastic fixing")
    return FasteningLabel(t_kind, r_kind, name, k_t, k_r)


def classify(config: FasteningConfig, zero_tol: float = ZERO_TOL) -> tuple[FasteningLabel, FasteningLabel]:
    """Labels for the left and right ends."""
    return (classify_end(config.u1, config.u2, zero_tol),
            classify_end(config.u3, config.u4, zero_tol))
