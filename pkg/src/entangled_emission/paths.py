"""Quantum-path bookkeeping for one-photon emission.

A detection event can originate from any term of the initial superposition
and any excited atom in that term. Each such alternative is a quantum path;
paths ending in the same atomic configuration are indistinguishable and
interfere. A term with integer coefficient ``c`` is expanded into ``|c|``
unit-sign copies, so every path carries amplitude ``+-1`` before the common
normalization.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations

import numpy as np

from .geometry import ChainGeometry
from .states import BasisConfiguration, RawStateSpec, excitation_count


class UnsupportedStateError(ValueError):
    """State lies outside the path ledger's scope."""


@dataclass(frozen=True)
class QuantumPath:
    source_term: BasisConfiguration
    unit_sign: int
    copy_index: int
    emitter: int
    final_config: BasisConfiguration

    @property
    def phase_index(self) -> int:
        return self.emitter

    @property
    def origin(self) -> tuple[BasisConfiguration, int]:
        return self.source_term, self.emitter


def spec_excitation(spec: RawStateSpec) -> int:
    counts = {excitation_count(c) for coeff, c in spec.entries if coeff != 0}
    if len(counts) != 1:
        raise UnsupportedStateError(
            f"path ledger needs a fixed excitation number, terms have {sorted(counts)}"
        )
    return counts.pop()


def enumerate_paths(spec: RawStateSpec) -> list[QuantumPath]:
    """All single quantum paths, ordered by term, copy, then emitter."""
    spec_excitation(spec)
    paths = []
    for coeff, config in spec.entries:
        sign = 1 if coeff > 0 else -1
        for copy in range(abs(coeff)):
            for j in range(1, config.n_atoms + 1):
                if config.is_excited(j):
                    paths.append(QuantumPath(config, sign, copy, j, config.lowered(j)))
    return paths


def group_by_final(paths: list[QuantumPath]) -> dict[BasisConfiguration, list[QuantumPath]]:
    groups: dict[BasisConfiguration, list[QuantumPath]] = {}
    for p in paths:
        groups.setdefault(p.final_config, []).append(p)
    return groups


@dataclass(frozen=True)
class FinalStateTally:
    """Ordered interfering pairs reaching one final configuration."""

    final_config: BasisConfiguration
    n_paths: int
    constructive: int
    destructive: int

    @property
    def net(self) -> int:
        return self.constructive - self.destructive


@dataclass(frozen=True)
class PathLedger:
    """Counts entering ``offset + (qp_c * f_c - qp_d * f_d) * norm_sq``.

    ``qp_constructive`` and ``qp_destructive`` are net pair counts per
    final state of each class. When finals in one class carry different
    counts (impossible for the symmetric and small anti-symmetric states)
    they are class averages and ``uniform`` is False; the extremum stays
    exact either way. Finals whose pairs cancel exactly are only counted
    in ``residual``.
    """

    n_excited: int
    qp_constructive: Fraction
    f_constructive: int
    qp_destructive: Fraction
    f_destructive: int
    norm_sq: Fraction
    offset: Fraction
    residual: int
    path_count: int
    tallies: tuple[FinalStateTally, ...]

    @property
    def final_state_count(self) -> int:
        return len(self.tallies)

    @property
    def uniform(self) -> bool:
        nets_c = {t.net for t in self.tallies if t.net > 0}
        nets_d = {t.net for t in self.tallies if t.net < 0}
        return len(nets_c) <= 1 and len(nets_d) <= 1

    def quadruple(self) -> tuple:
        return (self.qp_constructive, self.f_constructive, self.qp_destructive, self.f_destructive)


def build_ledger(spec: RawStateSpec) -> PathLedger:
    n_e = spec_excitation(spec)
    norm_sq = spec.norm_sq
    paths = enumerate_paths(spec)
    tallies = []
    same_origin = 0
    for final, group in group_by_final(paths).items():
        constructive = destructive = 0
        for p, q in permutations(group, 2):
            if p.origin == q.origin:
                # duplicate copies of one (term, emitter) add to the incoherent offset
                same_origin += 1
            elif p.unit_sign * q.unit_sign > 0:
                constructive += 1
            else:
                destructive += 1
        tallies.append(FinalStateTally(final, len(group), constructive, destructive))

    constructive_finals = [t for t in tallies if t.net > 0]
    destructive_finals = [t for t in tallies if t.net < 0]
    residual = sum(1 for t in tallies if t.net == 0 and t.constructive + t.destructive > 0)
    f_c, f_d = len(constructive_finals), len(destructive_finals)
    qp_c = Fraction(sum(t.net for t in constructive_finals), f_c) if f_c else Fraction(0)
    qp_d = Fraction(-sum(t.net for t in destructive_finals), f_d) if f_d else Fraction(0)
    return PathLedger(
        n_excited=n_e,
        qp_constructive=qp_c,
        f_constructive=f_c,
        qp_destructive=qp_d,
        f_destructive=f_d,
        norm_sq=norm_sq,
        offset=(len(paths) + same_origin) * norm_sq,
        residual=residual,
        path_count=len(paths),
        tallies=tuple(tallies),
    )


def ledger_extremum(ledger: PathLedger) -> Fraction:
    """Intensity at ``theta = 0`` predicted by the ledger."""
    interference = (
        ledger.qp_constructive * ledger.f_constructive
        - ledger.qp_destructive * ledger.f_destructive
    )
    return ledger.offset + interference * ledger.norm_sq


def single_paths_per_final(n_e: int, n_atoms: int) -> int:
    """Paths per final state of the symmetric W-state, total paths over final states."""
    if not 1 <= n_e <= n_atoms:
        raise ValueError(f"need 1 <= n_e <= N, got n_e={n_e}, N={n_atoms}")
    ratio = Fraction(n_e * math.comb(n_atoms, n_e), math.comb(n_atoms, n_e - 1))
    assert ratio == n_atoms - n_e + 1
    return int(ratio)


def intensity_via_paths(spec: RawStateSpec, geom: ChainGeometry, theta):
    """Coherent sum over each final state's paths, then incoherent sum over finals."""
    if spec.n_atoms != geom.n_atoms:
        raise ValueError(f"state has {spec.n_atoms} atoms but geometry has {geom.n_atoms}")
    groups = group_by_final(enumerate_paths(spec))
    # signed path multiplicity per (final, emitter)
    weights = np.zeros((len(groups), geom.n_atoms))
    for row, group in enumerate(groups.values()):
        for p in group:
            weights[row, p.emitter - 1] += p.unit_sign
    amps = geom.detection_weights(theta) @ weights.T
    value = float(spec.norm_sq) * np.sum(np.abs(amps) ** 2, axis=-1)
    return float(value) if np.ndim(value) == 0 else value


def ledger_to_dict(ledger: PathLedger) -> dict:
    def num(x: Fraction):
        return int(x) if x.denominator == 1 else float(x)

    extremum = ledger_extremum(ledger)
    return {
        "offset": num(ledger.offset),
        "qp_c": num(ledger.qp_constructive),
        "f_c": ledger.f_constructive,
        "qp_d": num(ledger.qp_destructive),
        "f_d": ledger.f_destructive,
        "norm_sq_num": ledger.norm_sq.numerator,
        "norm_sq_den": ledger.norm_sq.denominator,
        "extremum": num(extremum),
        "extremum_exact": str(extremum),
        "path_count": ledger.path_count,
        "final_state_count": ledger.final_state_count,
        "residual": ledger.residual,
        "uniform": ledger.uniform,
        "n_excited": ledger.n_excited,
    }
