"""Pure states of a chain of two-level atoms.

Configurations are written as strings over ``{e, g}`` with atom 1 as the
leftmost symbol, so ``"ege"`` means atoms 1 and 3 are excited. Internally
atom ``j`` maps to bit ``j - 1`` of an integer mask.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from fractions import Fraction
from itertools import combinations
from pathlib import Path
from typing import Iterable, Mapping

import numpy as np

EXCITED = "e"
GROUND = "g"

NORM_TOL = 1e-12


@dataclass(frozen=True, order=True)
class BasisConfiguration:
    """Excitation pattern of the chain, e.g. ``BasisConfiguration("egg")``."""

    levels: str

    def __post_init__(self):
        if not isinstance(self.levels, str) or not self.levels:
            raise ValueError("configuration must be a non-empty string over {e, g}")
        bad = set(self.levels) - {EXCITED, GROUND}
        if bad:
            raise ValueError(f"invalid level symbols {sorted(bad)} in {self.levels!r}")

    @classmethod
    def from_mask(cls, mask: int, n_atoms: int) -> "BasisConfiguration":
        return cls("".join(EXCITED if (mask >> k) & 1 else GROUND for k in range(n_atoms)))

    @property
    def n_atoms(self) -> int:
        return len(self.levels)

    @property
    def mask(self) -> int:
        return sum(1 << k for k, s in enumerate(self.levels) if s == EXCITED)

    def _check_index(self, j: int) -> None:
        if not 1 <= j <= self.n_atoms:
            raise ValueError(f"atom index {j} outside 1..{self.n_atoms}")

    def is_excited(self, j: int) -> bool:
        self._check_index(j)
        return self.levels[j - 1] == EXCITED

    def lowered(self, j: int) -> "BasisConfiguration":
        """Same configuration with atom ``j`` put into the ground state."""
        self._check_index(j)
        return BasisConfiguration(self.levels[: j - 1] + GROUND + self.levels[j:])

    def __str__(self) -> str:
        return self.levels


def _as_config(config) -> BasisConfiguration:
    return config if isinstance(config, BasisConfiguration) else BasisConfiguration(config)


def excitation_count(config: BasisConfiguration | str) -> int:
    return _as_config(config).levels.count(EXCITED)


@dataclass(frozen=True, eq=False)
class PureState:
    """Normalized superposition of basis configurations.

    Construct directly from already-normalized amplitudes, or use
    :meth:`normalized` to rescale arbitrary nonzero amplitudes.
    """

    terms: Mapping[BasisConfiguration, complex]
    n_atoms: int
    label: str = ""

    def __post_init__(self):
        if self.n_atoms < 1:
            raise ValueError("a state needs at least one atom")
        cleaned: dict[BasisConfiguration, complex] = {}
        for config, amp in self.terms.items():
            config = _as_config(config)
            if config.n_atoms != self.n_atoms:
                raise ValueError(
                    f"configuration {config} has {config.n_atoms} atoms, expected {self.n_atoms}"
                )
            amp = complex(amp)
            if amp != 0:
                cleaned[config] = amp
        if not cleaned:
            raise ValueError("state has no nonzero amplitude")
        norm_sq = sum(abs(a) ** 2 for a in cleaned.values())
        if abs(norm_sq - 1.0) > NORM_TOL:
            raise ValueError(f"state is not normalized (squared norm {norm_sq!r})")
        object.__setattr__(self, "terms", cleaned)

    @classmethod
    def normalized(cls, terms: Mapping, n_atoms: int | None = None, label: str = "") -> "PureState":
        terms = {_as_config(c): complex(a) for c, a in terms.items() if a != 0}
        if not terms:
            raise ValueError("state has no nonzero amplitude")
        if n_atoms is None:
            n_atoms = next(iter(terms)).n_atoms
        norm = math.sqrt(sum(abs(a) ** 2 for a in terms.values()))
        return cls({c: a / norm for c, a in terms.items()}, n_atoms, label)

    def __eq__(self, other):
        if not isinstance(other, PureState):
            return NotImplemented
        return self.n_atoms == other.n_atoms and self.terms == other.terms

    def __len__(self) -> int:
        return len(self.terms)

    def amplitude(self, config: BasisConfiguration | str) -> complex:
        return self.terms.get(_as_config(config), 0j)

    @cached_property
    def masks(self) -> np.ndarray:
        return np.fromiter((c.mask for c in self.terms), dtype=np.int64, count=len(self.terms))

    @cached_property
    def amplitudes(self) -> np.ndarray:
        return np.fromiter(self.terms.values(), dtype=np.complex128, count=len(self.terms))

    @cached_property
    def lowering_table(self) -> tuple[np.ndarray, np.ndarray]:
        """Masks of all one-photon final configurations and the matrix ``L``.

        ``L[f, j]`` is the amplitude of final configuration ``f`` in
        ``s^-_{j+1} |psi>``; each column is one lowered state.
        """
        finals, rows, cols, vals = [], [], [], []
        for k in range(self.n_atoms):
            bit = 1 << k
            sel = (self.masks & bit) != 0
            finals.append(self.masks[sel] ^ bit)
            cols.append(np.full(int(sel.sum()), k))
            vals.append(self.amplitudes[sel])
        finals = np.concatenate(finals)
        unique, inverse = np.unique(finals, return_inverse=True)
        table = np.zeros((unique.size, self.n_atoms), dtype=np.complex128)
        table[inverse, np.concatenate(cols)] = np.concatenate(vals)
        return unique, table

    def __repr__(self) -> str:
        body = " + ".join(f"({a:.6g})|{c}>" for c, a in list(self.terms.items())[:6])
        more = " + ..." if len(self.terms) > 6 else ""
        name = f"{self.label}: " if self.label else ""
        return f"PureState({name}{body}{more})"


def uniform_excitation(state: PureState) -> int | None:
    """Common excitation number of all terms, or ``None`` if they differ."""
    counts = {excitation_count(c) for c in state.terms}
    return counts.pop() if len(counts) == 1 else None


@dataclass(frozen=True)
class RawStateSpec:
    """Unnormalized superposition with signed integer coefficients.

    ``entries`` is a sequence of ``(coefficient, configuration)`` pairs;
    configuration strings are accepted and converted.
    """

    entries: tuple[tuple[int, BasisConfiguration], ...]
    label: str = field(default="", compare=False)

    def __post_init__(self):
        entries = []
        for coeff, config in self.entries:
            if isinstance(coeff, bool) or int(coeff) != coeff:
                raise ValueError(f"coefficient {coeff!r} is not an integer")
            entries.append((int(coeff), _as_config(config)))
        if not entries:
            raise ValueError("state spec needs at least one entry")
        lengths = {c.n_atoms for _, c in entries}
        if len(lengths) > 1:
            raise ValueError(f"configurations have differing lengths {sorted(lengths)}")
        configs = [c for _, c in entries]
        if len(set(configs)) != len(configs):
            raise ValueError("duplicate configurations in state spec; sum them first")
        if all(coeff == 0 for coeff, _ in entries):
            raise ValueError("all coefficients are zero")
        object.__setattr__(self, "entries", tuple(entries))

    @property
    def n_atoms(self) -> int:
        return self.entries[0][1].n_atoms

    @property
    def norm_sq(self) -> Fraction:
        """Squared normalization constant ``1 / sum(c**2)``."""
        return Fraction(1, sum(c * c for c, _ in self.entries))


def make_separable(n_e: int, n_g: int) -> PureState:
    if n_e < 0 or n_g < 0 or n_e + n_g < 1:
        raise ValueError(f"need n_e, n_g >= 0 and at least one atom, got ({n_e}, {n_g})")
    config = BasisConfiguration(EXCITED * n_e + GROUND * n_g)
    return PureState({config: 1.0}, n_e + n_g, label=f"S:{n_e},{n_g}")


def _symmetric_configs(n_e: int, n_atoms: int) -> Iterable[BasisConfiguration]:
    # lexicographic with e < g: eegg, egeg, egge, geeg, gege, ggee
    for positions in combinations(range(n_atoms), n_e):
        levels = [GROUND] * n_atoms
        for p in positions:
            levels[p] = EXCITED
        yield BasisConfiguration("".join(levels))


def make_symmetric_w(n_e: int, n_atoms: int) -> PureState:
    """Equal-weight superposition of every configuration with ``n_e`` excitations."""
    if not 1 <= n_e <= n_atoms:
        raise ValueError(f"need 1 <= n_e <= N, got n_e={n_e}, N={n_atoms}")
    amp = 1.0 / math.sqrt(math.comb(n_atoms, n_e))
    terms = {c: amp for c in _symmetric_configs(n_e, n_atoms)}
    return PureState(terms, n_atoms, label=f"W:{n_e},{n_atoms}")


def make_from_spec(spec: RawStateSpec) -> PureState:
    norm = math.sqrt(sum(c * c for c, _ in spec.entries))
    terms = {config: c / norm for c, config in spec.entries if c != 0}
    return PureState(terms, spec.n_atoms, label=spec.label)


def symmetric_w_spec(n_e: int, n_atoms: int) -> RawStateSpec:
    if not 1 <= n_e <= n_atoms:
        raise ValueError(f"need 1 <= n_e <= N, got n_e={n_e}, N={n_atoms}")
    return RawStateSpec(
        tuple((1, c) for c in _symmetric_configs(n_e, n_atoms)), label=f"W:{n_e},{n_atoms}"
    )


def separable_spec(n_e: int, n_g: int) -> RawStateSpec:
    if n_e < 0 or n_g < 0 or n_e + n_g < 1:
        raise ValueError(f"need n_e, n_g >= 0 and at least one atom, got ({n_e}, {n_g})")
    return RawStateSpec(((1, EXCITED * n_e + GROUND * n_g),), label=f"S:{n_e},{n_g}")


def w_minus_21() -> RawStateSpec:
    """Anti-symmetric two-excitation state (|ege> + |eeg> - 2|gee>)/sqrt(6)."""
    return RawStateSpec(((1, "ege"), (1, "eeg"), (-2, "gee")), label="W-:2,1")


def w_tilde_minus_21() -> RawStateSpec:
    """|e> (x) (|ge> - |eg>)/sqrt(2)."""
    return RawStateSpec(((1, "ege"), (-1, "eeg")), label="W~-:2,1")


def integer_spec(state: PureState, max_denominator: int = 1000, tol: float = 1e-9) -> RawStateSpec:
    """Recover integer coefficients from a state with rationally related real amplitudes.

    Raises ``ValueError`` for complex phases between terms or ratios that
    are not rational with denominator up to ``max_denominator``.
    """
    items = list(state.terms.items())
    ref = min((a for _, a in items), key=abs)
    ratios = []
    for config, amp in items:
        r = amp / ref
        if abs(r.imag) > tol:
            raise ValueError(f"amplitude of |{config}> has a complex phase relative to the others")
        frac = Fraction(r.real).limit_denominator(max_denominator)
        if abs(float(frac) - r.real) > tol:
            raise ValueError(f"amplitude ratio {r.real!r} of |{config}> is not rational")
        ratios.append((frac, config))
    lcm = math.lcm(*(f.denominator for f, _ in ratios))
    ints = [int(f * lcm) for f, _ in ratios]
    g = math.gcd(*ints)
    return RawStateSpec(
        tuple((n // g, c) for n, (_, c) in zip(ints, ratios)), label=state.label
    )


def parse_state_spec(text: str, label: str = "") -> RawStateSpec:
    """Parse ``<signed-int> <config>`` lines; blank lines and ``#`` comments are skipped."""
    entries = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"line {lineno}: expected '<signed-int> <config>', got {raw!r}")
        try:
            coeff = int(parts[0])
        except ValueError:
            raise ValueError(f"line {lineno}: coefficient {parts[0]!r} is not an integer") from None
        entries.append((coeff, BasisConfiguration(parts[1])))
    if not entries:
        raise ValueError("state spec contains no terms")
    return RawStateSpec(tuple(entries), label=label)


def load_state_spec(path: str | Path) -> RawStateSpec:
    path = Path(path)
    return parse_state_spec(path.read_text(), label=path.name)
