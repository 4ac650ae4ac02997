"""Angular scans, kd-theta grids and figure presets as serializable tables."""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from .geometry import ChainGeometry
from .engine import intensity
from .states import (
    PureState,
    RawStateSpec,
    load_state_spec,
    make_from_spec,
    make_separable,
    make_symmetric_w,
    separable_spec,
    symmetric_w_spec,
    w_minus_21,
    w_tilde_minus_21,
)

SIG_DIGITS = 12
UNITS = "single-atom"
KD_3PI_2 = 1.5 * math.pi


def fmt(x) -> str:
    # + 0.0 folds -0.0 into 0.0
    return format(float(x) + 0.0, f".{SIG_DIGITS}g")


def _meta_str(v) -> str:
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, float):
        return fmt(v)
    return str(v)


@dataclass
class Dataset:
    name: str
    metadata: dict
    columns: dict[str, np.ndarray] = field(default_factory=dict)

    def to_csv(self) -> str:
        header = "# " + " ".join(f"{k}={_meta_str(v)}" for k, v in self.metadata.items())
        lines = [header, ",".join(self.columns)]
        for row in zip(*self.columns.values()):
            lines.append(",".join(fmt(v) for v in row))
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        payload = {
            "metadata": {k: (float(fmt(v)) if isinstance(v, float) else v) for k, v in self.metadata.items()},
            "columns": list(self.columns),
            "data": {k: [float(fmt(v)) for v in col] for k, col in self.columns.items()},
        }
        return json.dumps(payload, indent=1) + "\n"

    def serialize(self, fmt_name: str) -> str:
        if fmt_name == "csv":
            return self.to_csv()
        if fmt_name == "json":
            return self.to_json()
        raise ValueError(f"unknown format {fmt_name!r}")


_PI_RE = re.compile(r"^\s*([+-]?[0-9./]*)\s*\*?\s*pi\s*$", re.IGNORECASE)


def parse_kd(text: str | float) -> float:
    """``"4.7"`` -> 4.7, ``"1.5pi"`` / ``"3/2pi"`` / ``"pi"`` -> multiples of pi."""
    if not isinstance(text, str):
        return float(text)
    m = _PI_RE.match(text)
    try:
        if m:
            coeff = m.group(1)
            coeff = Fraction(coeff + "1") if coeff in ("", "+", "-") else Fraction(coeff)
            return float(coeff) * math.pi
        return float(Fraction(text.strip()))
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"cannot parse kd value {text!r}") from None


def theta_grid(theta_min, theta_max, steps: int) -> np.ndarray:
    """Closed uniform grid, bounds in units of pi.

    Nodes are placed in exact rational arithmetic so that a node that is
    mathematically zero is exactly 0.0.
    """
    lo, hi = Fraction(theta_min), Fraction(theta_max)
    if steps < 2:
        raise ValueError("need at least 2 theta samples")
    if not lo < hi:
        raise ValueError("theta-min must be below theta-max")
    return np.array([float(lo + (hi - lo) * Fraction(i, steps - 1)) * math.pi for i in range(steps)])


def kd_grid(kd_min: float, kd_max: float, steps: int) -> np.ndarray:
    if steps < 2:
        raise ValueError("need at least 2 kd samples")
    if not 0 < kd_min < kd_max:
        raise ValueError("need 0 < kd-min < kd-max")
    return np.linspace(kd_min, kd_max, steps)


def parse_state(descriptor: str) -> tuple[PureState, RawStateSpec | None]:
    """Builtin ``W:n_e,N`` / ``S:n_e,n_g`` descriptor or a spec-file path.

    Returns the state and, where one exists, its integer-coefficient spec.
    """
    m = re.fullmatch(r"\s*([WS])\s*:\s*(\d+)\s*,\s*(\d+)\s*", descriptor)
    if m:
        kind, a, b = m.group(1), int(m.group(2)), int(m.group(3))
        if kind == "W":
            return make_symmetric_w(a, b), symmetric_w_spec(a, b)
        return make_separable(a, b), separable_spec(a, b)
    path = Path(descriptor)
    if path.is_file():
        spec = load_state_spec(path)
        return make_from_spec(spec), spec
    raise ValueError(f"state {descriptor!r} is neither W:n_e,N, S:n_e,n_g nor a readable file")


def _state_meta(state: PureState, geom_kd: float | None = None) -> dict:
    meta = {"state": state.label or "custom"}
    if geom_kd is not None:
        meta["kd"] = float(geom_kd)
    meta["N"] = state.n_atoms
    meta["units"] = UNITS
    return meta


def scan_dataset(state: PureState, kd: float, theta: np.ndarray, name: str = "scan") -> Dataset:
    geom = ChainGeometry(state.n_atoms, kd)
    meta = _state_meta(state, kd)
    if not geom.dipole_coupling_negligible:
        meta["warning"] = "kd<=1:dipole-dipole-coupling-not-negligible"
    values = np.atleast_1d(intensity(state, geom, theta))
    return Dataset(name, meta, {"theta": np.asarray(theta), "intensity": values})


def contour_dataset(
    state: PureState, kds: np.ndarray, theta: np.ndarray, name: str = "contour", note: str = ""
) -> Dataset:
    columns = {"kd": [], "theta": [], "intensity": []}
    for kd in kds:
        values = np.atleast_1d(intensity(state, ChainGeometry(state.n_atoms, kd), theta))
        columns["kd"].append(np.full(theta.size, kd))
        columns["theta"].append(theta)
        columns["intensity"].append(values)
    meta = _state_meta(state)
    meta["kd_min"] = float(kds[0])
    meta["kd_max"] = float(kds[-1])
    if kds[0] <= 1:
        meta["warning"] = "kd<=1:dipole-dipole-coupling-not-negligible"
    if note:
        meta["note"] = note
    return Dataset(name, meta, {k: np.concatenate(v) for k, v in columns.items()})


FIGURES = ("fig5", "fig6", "fig7a", "fig7b", "fig8")

_FIG_THETA = (Fraction(-1, 2), Fraction(1, 2), 1001)


def figure_datasets(fig_id: str) -> list[Dataset]:
    """Preset angular-distribution and kd-theta datasets."""
    theta = theta_grid(*_FIG_THETA)
    if fig_id == "fig5":
        return [
            scan_dataset(make_symmetric_w(1, n), KD_3PI_2, theta, name=f"fig5_N{n}")
            for n in (2, 4, 8)
        ]
    if fig_id == "fig6":
        return [
            scan_dataset(make_symmetric_w(n_e, 10), KD_3PI_2, theta, name=f"fig6_ne{n_e}")
            for n_e in (3, 5, 7)
        ]
    if fig_id == "fig7a":
        kds = np.array([8 * math.pi * k / 200 for k in range(1, 201)])
        return [
            contour_dataset(
                make_symmetric_w(1, 5), kds, theta_grid(Fraction(-1, 2), Fraction(1, 2), 401),
                name="fig7a", note="kd-range-(0,8pi]-chosen-for-preset",
            )
        ]
    if fig_id == "fig7b":
        kds = kd_grid(20 * math.pi, 25 * math.pi, 101)
        return [
            contour_dataset(
                make_symmetric_w(1, 5), kds, theta_grid(Fraction(-1, 2), Fraction(1, 2), 1001),
                name="fig7b",
            )
        ]
    if fig_id == "fig8":
        states = [
            ("fig8_W21", make_symmetric_w(2, 3)),
            ("fig8_Wminus21", make_from_spec(w_minus_21())),
            ("fig8_Wtildeminus21", make_from_spec(w_tilde_minus_21())),
        ]
        return [scan_dataset(s, KD_3PI_2, theta, name=n) for n, s in states]
    raise ValueError(f"unknown figure {fig_id!r}; choose from {', '.join(FIGURES)}")
