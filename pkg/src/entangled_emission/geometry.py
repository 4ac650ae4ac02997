"""Equidistant chain geometry and the far-field detection operator."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .states import BasisConfiguration, PureState


@dataclass(frozen=True)
class ChainGeometry:
    """``n_atoms`` atoms spaced by ``kd`` radians of optical phase.

    Dipole-dipole coupling is neglected, which is only justified for
    ``kd > 1``; smaller spacings are accepted and reported through
    :attr:`dipole_coupling_negligible`.
    """

    n_atoms: int
    kd: float

    def __post_init__(self):
        if int(self.n_atoms) != self.n_atoms or self.n_atoms < 1:
            raise ValueError(f"n_atoms must be a positive integer, got {self.n_atoms!r}")
        if not np.isfinite(self.kd) or self.kd <= 0:
            raise ValueError(f"kd must be finite and positive, got {self.kd!r}")
        object.__setattr__(self, "n_atoms", int(self.n_atoms))
        object.__setattr__(self, "kd", float(self.kd))

    @property
    def dipole_coupling_negligible(self) -> bool:
        return self.kd > 1

    def phases(self, theta) -> np.ndarray:
        """Phases ``j * kd * sin(theta)`` for j = 1..N, shape ``theta.shape + (N,)``."""
        theta = _check_theta(theta)
        return np.multiply.outer(np.sin(theta), self.kd * np.arange(1, self.n_atoms + 1))

    def detection_weights(self, theta) -> np.ndarray:
        """``exp(-i phi_j)``, the per-atom factors of the detected field."""
        return np.exp(-1j * self.phases(theta))


def _check_theta(theta) -> np.ndarray:
    theta = np.asarray(theta, dtype=float)
    if not np.all(np.isfinite(theta)):
        raise ValueError("detection angle must be finite")
    return theta


def detection_phase(j: int, geom: ChainGeometry, theta):
    if not 1 <= j <= geom.n_atoms:
        raise ValueError(f"atom index {j} outside 1..{geom.n_atoms}")
    return j * geom.kd * np.sin(_check_theta(theta))


def apply_lowering(
    state: PureState | Mapping[BasisConfiguration, complex], j: int
) -> dict[BasisConfiguration, complex]:
    """``s^-_j`` applied termwise; returns an unnormalized (possibly empty) state."""
    terms = state.terms if isinstance(state, PureState) else state
    if isinstance(state, PureState) and not 1 <= j <= state.n_atoms:
        raise ValueError(f"atom index {j} outside 1..{state.n_atoms}")
    return {c.lowered(j): a for c, a in terms.items() if c.is_excited(j)}


def apply_detection(
    state: PureState, geom: ChainGeometry, theta: float
) -> dict[BasisConfiguration, complex]:
    """``sum_j exp(-i phi_j) s^-_j |psi>`` at a single angle.

    Its squared norm is the radiated intensity.
    """
    if state.n_atoms != geom.n_atoms:
        raise ValueError(f"state has {state.n_atoms} atoms but geometry has {geom.n_atoms}")
    if np.ndim(theta) != 0:
        raise ValueError("apply_detection takes a single angle")
    finals, table = state.lowering_table
    amps = table @ geom.detection_weights(theta)
    return {
        BasisConfiguration.from_mask(int(m), state.n_atoms): complex(a)
        for m, a in zip(finals, amps)
        if a != 0
    }
