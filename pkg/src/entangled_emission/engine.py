"""Radiated intensity: exact evaluation and closed-form results.

Intensities are in units of the emission of a single excited atom.
:func:`intensity` evaluates two routes, the squared norm of the detected
one-photon state and the correlation-matrix quadratic form, and refuses to
return a value when they disagree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.optimize import minimize_scalar

from .geometry import ChainGeometry, apply_lowering
from .states import PureState, make_symmetric_w

CONSISTENCY_TOL = 1e-10
# below this |sin(phi/2)| the grating factor is replaced by its limit N**2
GRATING_SINGULAR_TOL = 1e-9


class ConsistencyError(RuntimeError):
    """The two intensity routes disagree beyond ``CONSISTENCY_TOL``."""


def _check_atoms(state: PureState, geom: ChainGeometry) -> None:
    if state.n_atoms != geom.n_atoms:
        raise ValueError(f"state has {state.n_atoms} atoms but geometry has {geom.n_atoms}")


def correlation(state: PureState, i: int, j: int) -> complex:
    """``<s+_i s-_j>`` as the overlap of the two lowered states."""
    left = apply_lowering(state, i)
    right = apply_lowering(state, j)
    return complex(sum(left[c].conjugate() * a for c, a in right.items() if c in left))


def correlation_matrix(state: PureState) -> np.ndarray:
    """N x N matrix of ``<s+_i s-_j>`` (zero-based indices)."""
    _, table = state.lowering_table
    return table.conj().T @ table


def dipole_moment(state: PureState, j: int) -> complex:
    """Single-atom expectation ``<s+_j>``."""
    lowered = apply_lowering(state, j)
    s_minus = sum(state.amplitude(c).conjugate() * a for c, a in lowered.items())
    return complex(s_minus).conjugate()


def correlation_sum(state: PureState) -> float:
    return float(correlation_matrix(state).sum().real)


def amplitude_route(state: PureState, geom: ChainGeometry, theta) -> np.ndarray:
    _check_atoms(state, geom)
    _, table = state.lowering_table
    detected = geom.detection_weights(theta) @ table.T
    return np.sum(np.abs(detected) ** 2, axis=-1)


def correlation_route(state: PureState, geom: ChainGeometry, theta) -> np.ndarray:
    _check_atoms(state, geom)
    corr = correlation_matrix(state)
    w = geom.detection_weights(theta)
    return np.einsum("...i,ij,...j->...", w.conj(), corr, w).real


def intensity(state: PureState, geom: ChainGeometry, theta):
    """Intensity at angle(s) ``theta``; scalar in, float out, array in, array out."""
    by_amplitude = amplitude_route(state, geom, theta)
    by_correlation = correlation_route(state, geom, theta)
    gap = np.max(np.abs(by_amplitude - by_correlation), initial=0.0)
    if gap > CONSISTENCY_TOL:
        raise ConsistencyError(f"intensity routes differ by {gap:.3e}")
    return float(by_amplitude) if np.ndim(by_amplitude) == 0 else by_amplitude


def intensity_coherent_drive(populations, dipoles, geom: ChainGeometry, theta):
    """Intensity of uncorrelated atoms with populations and dipoles ``<s+_j>``.

    All two-atom correlations are assumed to factorize, so only the
    dipole moments interfere.
    """
    populations = np.asarray(populations, dtype=float)
    dipoles = np.asarray(dipoles, dtype=complex)
    if populations.shape != (geom.n_atoms,) or dipoles.shape != (geom.n_atoms,):
        raise ValueError(f"need {geom.n_atoms} populations and dipoles")
    field_sum = np.exp(1j * geom.phases(theta)) @ dipoles
    result = populations.sum() + np.abs(field_sum) ** 2 - np.sum(np.abs(dipoles) ** 2)
    return float(result) if np.ndim(result) == 0 else result


def grating_factor(phi, n_atoms: int):
    """``sin^2(N phi / 2) / sin^2(phi / 2)``, continuous through ``phi = 2 pi k``."""
    phi = np.asarray(phi, dtype=float)
    # reduce phi/2 into [-pi/2, pi/2) so numerator and denominator share one argument
    half = np.remainder(phi / 2 + np.pi / 2, np.pi) - np.pi / 2
    den = np.sin(half)
    singular = np.abs(den) < GRATING_SINGULAR_TOL
    with np.errstate(divide="ignore", invalid="ignore"):
        value = np.sin(n_atoms * half) ** 2 / den**2
    value = np.where(singular, float(n_atoms) ** 2, value)
    return float(value) if value.ndim == 0 else value


def intensity_closed_w(n_e: int, n_atoms: int, geom: ChainGeometry, theta):
    """Closed-form angular distribution of the symmetric W-state."""
    if n_atoms < 2:
        raise ValueError("closed form needs N >= 2; use intensity() for a single atom")
    if not 1 <= n_e <= n_atoms:
        raise ValueError(f"need 1 <= n_e <= N, got n_e={n_e}, N={n_atoms}")
    if geom.n_atoms != n_atoms:
        raise ValueError(f"geometry has {geom.n_atoms} atoms, expected {n_atoms}")
    n_g = n_atoms - n_e
    phi_1 = geom.kd * np.sin(np.asarray(theta, dtype=float))
    offset = n_e * (n_e - 1) / (n_atoms - 1)
    beta = n_e * n_g / (n_atoms * (n_atoms - 1))
    value = offset + beta * np.asarray(grating_factor(phi_1, n_atoms))
    return float(value) if value.ndim == 0 else value


def max_intensity_w(n_e: int, n_g: int) -> int:
    if n_e < 1 or n_g < 0:
        raise ValueError(f"need n_e >= 1 and n_g >= 0, got ({n_e}, {n_g})")
    return n_e * (n_g + 1)


def enhancement(n_e: int, n_g: int) -> int:
    """W-state peak over the separable-state intensity with the same n_e."""
    ratio = Fraction(max_intensity_w(n_e, n_g), n_e)
    assert ratio.denominator == 1
    return int(ratio)


def visibility_closed(n_e: int, n_atoms: int) -> float:
    n_g = n_atoms - n_e
    if not 1 <= n_e < n_atoms:
        raise ValueError(f"visibility needs 1 <= n_e < N, got n_e={n_e}, N={n_atoms}")
    if n_e == 1:
        return 1.0
    return 1.0 / (1.0 + 2.0 * (n_e - 1) / (n_atoms * n_g))


def min_intensity_w(n_e: int, n_atoms: int) -> float:
    """Floor of the W-state distribution, reached at zeros of the grating factor."""
    if n_atoms < 2 or not 1 <= n_e <= n_atoms:
        raise ValueError(f"need N >= 2 and 1 <= n_e <= N, got n_e={n_e}, N={n_atoms}")
    return n_e * (n_e - 1) / (n_atoms - 1)


def grating_has_zero(n_atoms: int, kd: float) -> bool:
    """Whether some detector angle reaches a zero of the grating factor."""
    return n_atoms >= 2 and 2 * math.pi / n_atoms <= kd


def fringe_width(n_atoms: int, kd: float) -> float:
    if n_atoms < 1 or kd <= 0:
        raise ValueError("need N >= 1 and kd > 0")
    return 2 * math.pi / (n_atoms * kd)


def dicke_rate(n_atoms: int, m) -> int:
    """Dicke emission rate ``(N/2 + m)(N/2 - m + 1)`` of the symmetric state with z-projection m."""
    m = Fraction(m)
    upper = Fraction(n_atoms, 2) + m
    if upper.denominator != 1 or abs(m) > Fraction(n_atoms, 2):
        raise ValueError(f"m={m} is not a valid projection for N={n_atoms}")
    rate = upper * (Fraction(n_atoms, 2) - m + 1)
    return int(rate)


def appendix_constants(n_e: int, n_atoms: int) -> tuple[Fraction, Fraction]:
    """Diagonal and off-diagonal correlations of the symmetric W-state."""
    if n_atoms < 2:
        raise ValueError("need N >= 2")
    if not 1 <= n_e <= n_atoms:
        raise ValueError(f"need 1 <= n_e <= N, got n_e={n_e}, N={n_atoms}")
    alpha = Fraction(n_e, n_atoms)
    beta = Fraction(n_e * (n_atoms - n_e), n_atoms * (n_atoms - 1))
    return alpha, beta


@dataclass(frozen=True)
class AngularIntensityProfile:
    theta: np.ndarray
    values: np.ndarray
    state_label: str
    kd: float
    n_atoms: int
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.theta.ndim != 1 or self.theta.shape != self.values.shape:
            raise ValueError("theta and values must be matching 1-d arrays")
        if np.any(np.diff(self.theta) <= 0):
            raise ValueError("theta grid must be strictly increasing")
        if np.any(self.values < -1e-12):
            raise ValueError("negative intensity beyond round-off")

    def value_at(self, theta: float) -> float:
        idx = np.flatnonzero(self.theta == theta)
        if idx.size == 0:
            raise KeyError(f"theta={theta} is not a grid point")
        return float(self.values[idx[0]])


def angular_profile(state: PureState, geom: ChainGeometry, theta) -> AngularIntensityProfile:
    theta = np.asarray(theta, dtype=float)
    return AngularIntensityProfile(
        theta=theta,
        values=np.asarray(intensity(state, geom, theta)),
        state_label=state.label,
        kd=geom.kd,
        n_atoms=geom.n_atoms,
        metadata={"dipole_coupling_negligible": geom.dipole_coupling_negligible},
    )


@dataclass(frozen=True)
class VisibilityScan:
    i_min: float
    i_max: float
    theta_at_min: float
    theta_at_max: float

    @property
    def visibility(self) -> float:
        return (self.i_max - self.i_min) / (self.i_max + self.i_min)


def _refine(f, grid: np.ndarray, values: np.ndarray, k: int, sign: float) -> tuple[float, float]:
    lo, hi = grid[max(k - 1, 0)], grid[min(k + 1, grid.size - 1)]
    best = (float(values[k]), float(grid[k]))
    if hi > lo:
        res = minimize_scalar(
            lambda t: sign * f(t), bounds=(lo, hi), method="bounded", options={"xatol": 1e-13}
        )
        if sign * res.fun < sign * best[0]:
            best = (float(sign * res.fun), float(res.x))
    return best


def scan_visibility(
    state: PureState,
    geom: ChainGeometry,
    steps: int = 10_001,
    theta_range: tuple[float, float] = (-math.pi / 2, math.pi / 2),
) -> VisibilityScan:
    """Numeric extrema of the angular distribution.

    A uniform grid locates the extrema, then a bounded scalar search in the
    neighbouring cells pins them down. The default range covers every value
    of ``sin(theta)``, hence every distinct detector phase.
    """
    grid = np.linspace(*theta_range, steps)
    values = intensity(state, geom, grid)
    f = lambda t: intensity(state, geom, t)
    i_min, t_min = _refine(f, grid, values, int(np.argmin(values)), 1.0)
    i_max, t_max = _refine(f, grid, values, int(np.argmax(values)), -1.0)
    return VisibilityScan(i_min, i_max, t_min, t_max)


@dataclass(frozen=True)
class VisibilityReport:
    closed: float
    scanned: float
    scan: VisibilityScan
    grating_zero_reachable: bool

    @property
    def agrees(self) -> bool:
        return abs(self.closed - self.scanned) <= 1e-6


def visibility_report(n_e: int, n_atoms: int, kd: float, steps: int = 10_001) -> VisibilityReport:
    """Closed-form and scanned visibility of the symmetric W-state side by side.

    They only coincide when the grating factor has a reachable zero,
    i.e. ``kd >= 2 pi / N``.
    """
    scan = scan_visibility(make_symmetric_w(n_e, n_atoms), ChainGeometry(n_atoms, kd), steps)
    return VisibilityReport(
        closed=visibility_closed(n_e, n_atoms),
        scanned=scan.visibility,
        scan=scan,
        grating_zero_reachable=grating_has_zero(n_atoms, kd),
    )


def zero_dipole(state: PureState, tol: float = 1e-12) -> bool:
    """True if every single-atom dipole ``<s+_j>`` vanishes."""
    return all(abs(dipole_moment(state, j)) <= tol for j in range(1, state.n_atoms + 1))
