"""
Projection onto detector positions and negativity of the resulting states.

Two regimes are covered. When the bosons sit on different sites ``x1 != x2``
they are treated as distinguishable and the 2x2 spin block ``psi(x1,.;x2,.)``
gives a two-qubit polarization state. When both sit on the same site the spin
content is rewritten in mode occupations and embedded in a 3x3 Fock space
``(n_up) x (n_down)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NegligibleOverlap, NoSeparation, SamePosition
from .state import TwoParticleField, to_mode_state

__all__ = [
    "DensityMatrix",
    "partial_transpose",
    "negativity",
    "log_negativity",
    "antidiagonal_max",
    "antidiagonal_profile",
    "polarization_density_matrix",
    "mode_density_matrix",
    "mode_negativity",
]

HERMITIAN_TOL = 1e-12
PSD_TOL = -1e-10


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Bipartite density matrix on ``dims[0] x dims[1]``."""

    entries: np.ndarray
    dims: tuple[int, int]
    labels: tuple[str, str] = ("A", "B")

    def __post_init__(self):
        rho = np.array(self.entries, dtype=np.complex128)
        d = self.dims[0] * self.dims[1]
        if rho.shape != (d, d):
            raise ValueError(f"expected a {d}x{d} matrix for dims {self.dims}, got {rho.shape}")
        rho.setflags(write=False)
        object.__setattr__(self, "entries", rho)
        object.__setattr__(self, "dims", tuple(int(v) for v in self.dims))

    @classmethod
    def from_pure(cls, vec, dims: tuple[int, int], labels: tuple[str, str] = ("A", "B")) -> "DensityMatrix":
        v = np.asarray(vec, dtype=np.complex128).reshape(-1)
        v = v / np.linalg.norm(v)
        return cls(np.outer(v, v.conj()), dims, labels)

    @property
    def dimension(self) -> int:
        return self.entries.shape[0]

    def check(self) -> None:
        """Raise ``ValueError`` unless Hermitian, unit trace and PSD."""
        rho = self.entries
        if np.max(np.abs(rho - rho.conj().T)) > HERMITIAN_TOL:
            raise ValueError("density matrix is not Hermitian")
        if abs(np.trace(rho) - 1) > HERMITIAN_TOL:
            raise ValueError(f"trace is {np.trace(rho)}")
        if np.min(np.linalg.eigvalsh(rho)) < PSD_TOL:
            raise ValueError("density matrix is not positive semidefinite")


def partial_transpose(rho: DensityMatrix) -> DensityMatrix:
    """Transpose on the second factor."""
    da, db = rho.dims
    r = rho.entries.reshape(da, db, da, db).transpose(0, 3, 2, 1).reshape(da * db, da * db)
    return DensityMatrix(r, rho.dims, rho.labels)


def negativity(rho: DensityMatrix) -> float:
    """N = ||rho^{T_B}||_1 - 1, via the eigenvalues of the Hermitian partial transpose."""
    pt = partial_transpose(rho).entries
    pt = 0.5 * (pt + pt.conj().T)
    n = float(np.sum(np.abs(np.linalg.eigvalsh(pt))) - 1.0)
    if PSD_TOL <= n < 0:
        n = 0.0
    return n


def log_negativity(rho: DensityMatrix) -> float:
    return math.log2(negativity(rho) + 1.0)


def antidiagonal_profile(field: TwoParticleField) -> np.ndarray:
    """P(x, -x) summed over spins, for x = 0..L."""
    p = field.joint_probabilities()
    L = field.half_width
    xs = np.arange(0, L + 1)
    return p[xs + L, L - xs]


def antidiagonal_max(field: TwoParticleField) -> int:
    """Site ``x >= 1`` of largest probability at ``(x, -x)``; ties go to smaller ``x``."""
    prof = antidiagonal_profile(field)[1:]
    if prof.size == 0 or np.max(prof) < 1e-12:
        raise NoSeparation("no anti-diagonal probability with separated particles")
    return int(np.argmax(prof)) + 1


def polarization_density_matrix(
    field: TwoParticleField, x1: int, x2: int, allow_same_site: bool = False
) -> tuple[DensityMatrix, float]:
    """Project on ``|x1, x2>``, keep the spins, normalize.

    Returns the 4x4 pure-state density matrix (particle at ``x1`` | particle at
    ``x2``) and the detection probability. ``allow_same_site`` lifts the guard
    for ``x1 == x2`` and uses the raw first-quantized spin amplitudes.
    """
    if x1 == x2 and not allow_same_site:
        raise SamePosition(f"both particles at {x1}; use the mode representation")
    block = field.spin_block(x1, x2)
    prob = float(np.sum(np.abs(block) ** 2))
    if math.sqrt(prob) <= 1e-12:
        raise NegligibleOverlap(f"projected norm at ({x1}, {x2}) is {math.sqrt(prob):.3e}")
    rho = DensityMatrix.from_pure(block.reshape(4), (2, 2), (f"x={x1}", f"x={x2}"))
    return rho, prob


def mode_density_matrix(field: TwoParticleField, x: int = 0) -> tuple[DensityMatrix, float]:
    """9x9 density matrix of the two modes after detecting both bosons at ``x``."""
    mode, prob = to_mode_state(field, x)
    return DensityMatrix.from_pure(mode.fock_vector(), (3, 3), ("n_up", "n_down")), prob


def mode_negativity(field: TwoParticleField, x: int = 0) -> float:
    rho, _ = mode_density_matrix(field, x)
    return negativity(rho)
