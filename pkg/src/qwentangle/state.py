"""
Lattice wavefunctions for one and two bosonic walkers.

Single-particle amplitudes live in an array of shape ``(2L+1, 2)`` indexed by
``(x + L, s)`` with spin ``s = 0`` for up and ``s = 1`` for down. Two-particle
amplitudes use the row-major layout ``(x1, s1, x2, s2)``.

A two-particle field can also carry a low-rank product decomposition
``psi = sum_j w_j (a_j (x) b_j + b_j (x) a_j) / 2``. The dense tensor is always
present and is the reference; the factors are evolved independently by the
walk engine and used as a cross-check.
"""

from __future__ import annotations

import csv
import enum
import io
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import NegligibleOverlap

__all__ = [
    "UP",
    "DOWN",
    "SPIN_LABELS",
    "SpinState",
    "SpinorField",
    "TwoParticleField",
    "ModeState",
    "localized_spinor",
    "symmetrized_product",
    "general_pair",
    "make_localized_pair",
    "to_mode_state",
    "from_mode_state",
    "spinor_to_csv",
    "spinor_from_csv",
    "pair_to_csv",
    "pair_from_csv",
]

UP, DOWN = 0, 1
SPIN_LABELS = ("u", "d")

NORM_TOL = 1e-12
OVERLAP_TOL = 1e-12


class SpinState(str, enum.Enum):
    """Canonical exchange-symmetric two-spin states."""

    UP_UP = "upup"
    DOWN_DOWN = "downdown"
    SYM_UP_DOWN = "A"  # (|ud> + |du>)/sqrt(2)
    BELL_PHI_PLUS = "B"  # (|uu> + |dd>)/sqrt(2)

    @classmethod
    def parse(cls, label: str | "SpinState") -> "SpinState":
        if isinstance(label, SpinState):
            return label
        aliases = {
            "a": cls.SYM_UP_DOWN,
            "symupdown": cls.SYM_UP_DOWN,
            "b": cls.BELL_PHI_PLUS,
            "bellphiplus": cls.BELL_PHI_PLUS,
            "upup": cls.UP_UP,
            "downdown": cls.DOWN_DOWN,
        }
        key = str(label).replace("_", "").replace("-", "").lower()
        try:
            return aliases[key]
        except KeyError:
            raise ValueError(f"unknown spin state label {label!r}") from None


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=np.complex128, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class SpinorField:
    """Single walker on sites ``-L..L`` with two spin components."""

    half_width: int
    amplitudes: np.ndarray

    def __post_init__(self):
        if self.half_width < 1:
            raise ValueError(f"half_width must be >= 1, got {self.half_width}")
        amps = _frozen(self.amplitudes)
        if amps.shape != (2 * self.half_width + 1, 2):
            raise ValueError(
                f"amplitudes must have shape {(2 * self.half_width + 1, 2)}, got {amps.shape}"
            )
        object.__setattr__(self, "amplitudes", amps)

    @property
    def sites(self) -> np.ndarray:
        return np.arange(-self.half_width, self.half_width + 1)

    @property
    def n_sites(self) -> int:
        return 2 * self.half_width + 1

    def index(self, x: int) -> int:
        if abs(x) > self.half_width:
            raise IndexError(f"site {x} outside [-{self.half_width}, {self.half_width}]")
        return x + self.half_width

    def amplitude(self, x: int, s: int) -> complex:
        return complex(self.amplitudes[self.index(x), s])

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.amplitudes) ** 2)))

    def probabilities(self) -> np.ndarray:
        """Site occupation probabilities (spin summed)."""
        return np.sum(np.abs(self.amplitudes) ** 2, axis=1)

    def inner(self, other: "SpinorField") -> complex:
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def normalized(self) -> "SpinorField":
        return SpinorField(self.half_width, self.amplitudes / self.norm())


@dataclass(frozen=True, eq=False)
class TwoParticleField:
    """Exchange-symmetric two-walker amplitude tensor ``psi[x1, s1, x2, s2]``.

    ``factors`` is either ``None`` or a tuple of ``(weight, a, b)`` triples whose
    symmetrized sum reproduces ``amplitudes``.
    """

    half_width: int
    amplitudes: np.ndarray
    factors: tuple[tuple[complex, SpinorField, SpinorField], ...] | None = field(default=None)

    def __post_init__(self):
        if self.half_width < 1:
            raise ValueError(f"half_width must be >= 1, got {self.half_width}")
        n = 2 * self.half_width + 1
        amps = _frozen(self.amplitudes)
        if amps.shape != (n, 2, n, 2):
            raise ValueError(f"amplitudes must have shape {(n, 2, n, 2)}, got {amps.shape}")
        object.__setattr__(self, "amplitudes", amps)
        if self.factors is not None:
            facs = tuple((complex(w), a, b) for w, a, b in self.factors)
            for _, a, b in facs:
                if a.half_width != self.half_width or b.half_width != self.half_width:
                    raise ValueError("factor lattices must match the field lattice")
            object.__setattr__(self, "factors", facs)

    @property
    def n_sites(self) -> int:
        return 2 * self.half_width + 1

    @property
    def sites(self) -> np.ndarray:
        return np.arange(-self.half_width, self.half_width + 1)

    def index(self, x: int) -> int:
        if abs(x) > self.half_width:
            raise IndexError(f"site {x} outside [-{self.half_width}, {self.half_width}]")
        return x + self.half_width

    def matrix(self) -> np.ndarray:
        """Amplitudes as a ``2N x 2N`` matrix with combined (site, spin) indices."""
        m = 2 * self.n_sites
        return self.amplitudes.reshape(m, m)

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.amplitudes) ** 2)))

    def asymmetry(self) -> float:
        """Largest elementwise deviation from exchange symmetry."""
        m = self.matrix()
        return float(np.max(np.abs(m - m.T)))

    def joint_probabilities(self) -> np.ndarray:
        """``P[x1, x2]`` summed over both spins; sums to one."""
        return np.sum(np.abs(self.amplitudes) ** 2, axis=(1, 3))

    def spin_block(self, x1: int, x2: int) -> np.ndarray:
        """The 2x2 spin amplitudes ``psi[x1, :, x2, :]``."""
        return np.array(self.amplitudes[self.index(x1), :, self.index(x2), :])

    def expand_factors(self) -> np.ndarray:
        """Dense tensor rebuilt from the low-rank decomposition."""
        if self.factors is None:
            raise ValueError("field carries no rank decomposition")
        return _expand(self.half_width, self.factors)

    def without_factors(self) -> "TwoParticleField":
        return TwoParticleField(self.half_width, self.amplitudes)


def _expand(half_width: int, factors) -> np.ndarray:
    n = 2 * half_width + 1
    out = np.zeros((2 * n, 2 * n), dtype=np.complex128)
    for w, a, b in factors:
        va = a.amplitudes.reshape(-1)
        vb = b.amplitudes.reshape(-1)
        out += 0.5 * w * (np.outer(va, vb) + np.outer(vb, va))
    return out.reshape(n, 2, n, 2)


@dataclass(frozen=True, eq=False)
class ModeState:
    """Two bosons in the up/down modes: amplitudes on |2,0>, |1,1>, |0,2>."""

    amplitudes: np.ndarray

    BASIS = ((2, 0), (1, 1), (0, 2))

    def __post_init__(self):
        amps = _frozen(self.amplitudes)
        if amps.shape != (3,):
            raise ValueError(f"mode state needs 3 amplitudes, got shape {amps.shape}")
        object.__setattr__(self, "amplitudes", amps)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def fock_vector(self) -> np.ndarray:
        """Embedding into (n_up in 0..2) x (n_down in 0..2), length 9."""
        v = np.zeros(9, dtype=np.complex128)
        for amp, (nu, nd) in zip(self.amplitudes, self.BASIS):
            v[3 * nu + nd] = amp
        return v


def localized_spinor(half_width: int, x: int, spin: Sequence[complex] | int) -> SpinorField:
    """Walker at site ``x`` with spin ``spin`` (index or 2-vector, normalized)."""
    amps = np.zeros((2 * half_width + 1, 2), dtype=np.complex128)
    if abs(x) > half_width:
        raise IndexError(f"site {x} outside [-{half_width}, {half_width}]")
    if isinstance(spin, (int, np.integer)):
        amps[x + half_width, spin] = 1.0
    else:
        v = np.asarray(spin, dtype=np.complex128)
        amps[x + half_width] = v / np.linalg.norm(v)
    return SpinorField(half_width, amps)


def symmetrized_product(a: SpinorField, b: SpinorField, normalize: bool = True) -> TwoParticleField:
    """Bosonic state built from ``a (x) b + b (x) a``."""
    return general_pair([(1.0, a, b)], normalize=normalize)


def general_pair(
    terms: Iterable[tuple[complex, SpinorField, SpinorField]], normalize: bool = True
) -> TwoParticleField:
    """Symmetrized sum of weighted products, keeping the decomposition.

    With ``normalize`` the weights are rescaled so the dense tensor has unit norm.
    """
    terms = [(complex(w), a, b) for w, a, b in terms]
    if not terms:
        raise ValueError("need at least one term")
    L = terms[0][1].half_width
    dense = _expand(L, terms)
    if normalize:
        nrm = np.linalg.norm(dense)
        if nrm <= OVERLAP_TOL:
            raise ValueError("symmetrized terms cancel")
        terms = [(w / nrm, a, b) for w, a, b in terms]
        dense = dense / nrm
    return TwoParticleField(L, dense, tuple(terms))


def make_localized_pair(half_width: int, spin_state: SpinState | str) -> TwoParticleField:
    """Both bosons at the origin with one of the canonical symmetric spin states.

    >>> f = make_localized_pair(5, "B")
    >>> round(abs(f.amplitudes[5, 0, 5, 0]) ** 2, 12)
    0.5
    """
    if half_width < 1:
        raise ValueError(f"half_width must be >= 1, got {half_width}")
    state = SpinState.parse(spin_state)
    up = localized_spinor(half_width, 0, UP)
    dn = localized_spinor(half_width, 0, DOWN)
    r = 1 / np.sqrt(2)
    if state is SpinState.UP_UP:
        terms = [(1.0, up, up)]
    elif state is SpinState.DOWN_DOWN:
        terms = [(1.0, dn, dn)]
    elif state is SpinState.SYM_UP_DOWN:
        # w (ud + du)/2 with w = sqrt(2) gives (ud + du)/sqrt(2)
        terms = [(np.sqrt(2), up, dn)]
    else:
        terms = [(r, up, up), (r, dn, dn)]
    return general_pair(terms, normalize=False)


def to_mode_state(field: TwoParticleField, x: int = 0) -> tuple[ModeState, float]:
    """Project both bosons onto site ``x`` and rewrite the spins as mode occupations.

    Returns the normalized mode state and the detection probability
    ``sum_{s1,s2} |psi(x,s1;x,s2)|^2`` before normalization.
    """
    c = field.spin_block(x, x)
    prob = float(np.sum(np.abs(c) ** 2))
    if np.sqrt(prob) <= OVERLAP_TOL:
        raise NegligibleOverlap(f"projected norm at ({x}, {x}) is {np.sqrt(prob):.3e}")
    c_ud = 0.5 * (c[UP, DOWN] + c[DOWN, UP])
    modes = np.array([c[UP, UP], np.sqrt(2) * c_ud, c[DOWN, DOWN]])
    return ModeState(modes / np.linalg.norm(modes)), prob


def from_mode_state(mode: ModeState) -> np.ndarray:
    """Inverse of the mode map: the symmetric 2x2 spin block of a mode state."""
    a20, a11, a02 = mode.amplitudes
    c_ud = a11 / np.sqrt(2)
    return np.array([[a20, c_ud], [c_ud, a02]], dtype=np.complex128)


# -- CSV serialization -------------------------------------------------------


def _fmt(v: float) -> str:
    return format(float(v), ".17g")


def spinor_to_csv(f: SpinorField, include_zeros: bool = False) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["x", "s", "re", "im"])
    for i, x in enumerate(f.sites):
        for s in (UP, DOWN):
            a = f.amplitudes[i, s]
            if include_zeros or a != 0:
                w.writerow([int(x), SPIN_LABELS[s], _fmt(a.real), _fmt(a.imag)])
    return buf.getvalue()


def spinor_from_csv(text: str, half_width: int) -> SpinorField:
    amps = np.zeros((2 * half_width + 1, 2), dtype=np.complex128)
    for row in csv.DictReader(io.StringIO(text)):
        s = SPIN_LABELS.index(row["s"])
        amps[int(row["x"]) + half_width, s] = complex(float(row["re"]), float(row["im"]))
    return SpinorField(half_width, amps)


def pair_to_csv(f: TwoParticleField, include_zeros: bool = False) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["x1", "s1", "x2", "s2", "re", "im"])
    L = f.half_width
    idx = np.argwhere(f.amplitudes != 0) if not include_zeros else np.ndindex(f.amplitudes.shape)
    for i1, s1, i2, s2 in idx:
        a = f.amplitudes[i1, s1, i2, s2]
        w.writerow(
            [int(i1) - L, SPIN_LABELS[s1], int(i2) - L, SPIN_LABELS[s2], _fmt(a.real), _fmt(a.imag)]
        )
    return buf.getvalue()


def pair_from_csv(text: str, half_width: int) -> TwoParticleField:
    n = 2 * half_width + 1
    amps = np.zeros((n, 2, n, 2), dtype=np.complex128)
    for row in csv.DictReader(io.StringIO(text)):
        amps[
            int(row["x1"]) + half_width,
            SPIN_LABELS.index(row["s1"]),
            int(row["x2"]) + half_width,
            SPIN_LABELS.index(row["s2"]),
        ] = complex(float(row["re"]), float(row["im"]))
    return TwoParticleField(half_width, amps)
