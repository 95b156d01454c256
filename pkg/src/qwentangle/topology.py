"""
Band structure, winding number and bound states of the split-step walk.

In quasi-momentum space the step operator is the SU(2) matrix

    U(k) = T_down(k) R_y(theta2) T_up(k) R_y(theta1),
    T_up(k) = diag(e^{ik}, 1),  T_down(k) = diag(1, e^{-ik}),

written as ``U = cos E - i sin E n.sigma`` with ``E`` in [0, pi]. The winding
number counts how many times ``n(k)`` goes around the great circle it lies on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import AsymptoticGapless, GaplessSpectrum
from .state import SpinorField
from .tables import Table
from .walk import CoinProfile, coin_rotation, step_matrix

__all__ = [
    "PAULI",
    "Phase",
    "BlochAnalysis",
    "BoundState",
    "BoundStateReport",
    "bloch_unitary",
    "band_structure",
    "tan_ratio",
    "gap_classification",
    "winding_number",
    "crossed_lines",
    "find_bound_states",
    "real_space_spectrum",
    "bands_table",
    "phase_diagram_table",
    "bound_states_table",
]

PAULI = np.array(
    [
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=np.complex128,
)

AXIS_TOL = 1e-8
GAPLESS_TOL = 1e-8
WINDING_GAP_TOL = 1e-6
RATIO_TOL = 1e-6
CLASSIFY_NK = 4096
DEFAULT_NK = 1024


class Phase(str, Enum):
    GAPPED_W0 = "gapped-W0"
    GAPPED_W1 = "gapped-W1"
    GAPLESS_0 = "gapless-at-0"
    GAPLESS_PI = "gapless-at-pi"

    @property
    def gapped(self) -> bool:
        return self in (Phase.GAPPED_W0, Phase.GAPPED_W1)


def k_grid(n_k: int) -> np.ndarray:
    """Uniform grid over [-pi, pi); contains 0 and -pi for even ``n_k``."""
    return -math.pi + 2 * math.pi * np.arange(n_k) / n_k


def bloch_unitary(k, theta1: float, theta2: float) -> np.ndarray:
    """U(k) for scalar ``k`` (2x2) or an array of momenta (..., 2, 2)."""
    k = np.asarray(k, dtype=float)
    t_up = np.zeros(k.shape + (2, 2), dtype=np.complex128)
    t_up[..., 0, 0] = np.exp(1j * k)
    t_up[..., 1, 1] = 1.0
    t_dn = np.zeros_like(t_up)
    t_dn[..., 0, 0] = 1.0
    t_dn[..., 1, 1] = np.exp(-1j * k)
    return t_dn @ coin_rotation(theta2) @ t_up @ coin_rotation(theta1)


@dataclass(frozen=True, eq=False)
class BlochAnalysis:
    """Two-band data on a k-grid.

    ``bands[:, 0] = +E(k)``, ``bands[:, 1] = -E(k)``; ``axes`` is NaN where
    ``|sin E| <= 1e-8``.
    """

    theta1: float
    theta2: float
    k_samples: np.ndarray
    bands: np.ndarray
    axes: np.ndarray
    gap0: float
    gap_pi: float

    @property
    def gapped(self) -> bool:
        return self.gap0 > GAPLESS_TOL and self.gap_pi > GAPLESS_TOL

    @property
    def axis_defined(self) -> np.ndarray:
        return ~np.isnan(self.axes[:, 0])


def band_structure(theta1: float, theta2: float = 0.0, n_k: int = DEFAULT_NK) -> BlochAnalysis:
    if n_k < 3:
        raise ValueError(f"n_k must be >= 3, got {n_k}")
    ks = k_grid(n_k)
    u = bloch_unitary(ks, theta1, theta2)
    cos_e = 0.5 * np.real(np.trace(u, axis1=-2, axis2=-1))
    # sin(E) n_j = i Tr(sigma_j U) / 2, real for SU(2)
    b = np.real(0.5j * np.einsum("jab,kba->kj", PAULI, u))
    sin_e = np.linalg.norm(b, axis=1)
    energy = np.arctan2(sin_e, cos_e)
    axes = np.full((n_k, 3), np.nan)
    ok = sin_e > AXIS_TOL
    axes[ok] = b[ok] / sin_e[ok, None]
    bands = np.stack([energy, -energy], axis=1)
    return BlochAnalysis(
        theta1=theta1,
        theta2=theta2,
        k_samples=ks,
        bands=bands,
        axes=axes,
        gap0=float(np.min(energy)),
        gap_pi=float(np.min(math.pi - energy)),
    )


def tan_ratio(theta1: float, theta2: float) -> float:
    """|tan(theta2/2) / tan(theta1/2)|; inf when theta1 = 0 mod 2pi."""
    t1 = math.tan(theta1 / 2)
    t2 = math.tan(theta2 / 2)
    if abs(t1) < 1e-300:
        return math.inf
    return abs(t2 / t1)


def _singular(theta: float) -> bool:
    r = math.remainder(theta, 2 * math.pi)
    return abs(r) < 1e-12


def gap_classification(theta1: float, theta2: float, n_k: int = CLASSIFY_NK) -> Phase:
    """Phase of a homogeneous split-step walk.

    Uses the tan-ratio criterion where it is defined and the numerical gaps to
    decide where a gapless spectrum closes; for theta1 = 0 mod 2pi the answer
    comes from the band structure alone.
    """
    ana = band_structure(theta1, theta2, n_k)
    gapless_type = Phase.GAPLESS_0 if ana.gap0 <= ana.gap_pi else Phase.GAPLESS_PI
    if not _singular(theta1) and abs(math.cos(theta1 / 2)) > 1e-12:
        ratio = tan_ratio(theta1, theta2)
        if abs(ratio - 1.0) <= RATIO_TOL:
            return gapless_type
        return Phase.GAPPED_W1 if ratio < 1 else Phase.GAPPED_W0
    if not ana.gapped:
        return gapless_type
    return Phase.GAPPED_W1 if winding_number(ana) == 1 else Phase.GAPPED_W0


def winding_number(analysis: BlochAnalysis) -> int:
    """Number of turns of n(k) around its great circle over the Brillouin zone."""
    if analysis.gap0 <= WINDING_GAP_TOL or analysis.gap_pi <= WINDING_GAP_TOL:
        raise GaplessSpectrum(
            f"gap0={analysis.gap0:.3e}, gap_pi={analysis.gap_pi:.3e}; winding number undefined"
        )
    n = analysis.axes
    # plane through the origin: normal is the weakest singular direction
    _, _, vt = np.linalg.svd(n, full_matrices=False)
    e1, e2 = vt[0], vt[1]
    phi = np.arctan2(n @ e2, n @ e1)
    steps = np.diff(np.concatenate([phi, phi[:1]]))  # close the loop k=pi -> k=-pi
    steps = (steps + math.pi) % (2 * math.pi) - math.pi
    turns = int(round(abs(np.sum(steps)) / (2 * math.pi)))
    return turns


def crossed_lines(coins: CoinProfile) -> list[tuple[float, str]]:
    """Gap-closing lines met by the trajectory theta1 -> theta2(x).

    Closings sit at theta2 = +-theta1 + 2 pi m. Because R_y(t + 2pi) = -R_y(t)
    the quasi-energy of the closing alternates with m: theta2 = theta1 + 2 pi m
    closes at pi for even m and at 0 for odd m, theta2 = -theta1 + 2 pi m the
    other way round. Returns sorted ``(theta2, "0" | "pi")`` pairs strictly
    between the asymptotes.
    """
    lo, hi = sorted(coins.asymptotes())
    hits = {}
    for sign, even_kind in ((1, "pi"), (-1, "0")):
        base = sign * coins.theta1
        m = math.ceil((lo - base) / (2 * math.pi))
        while base + 2 * math.pi * m < hi:
            v = base + 2 * math.pi * m
            if lo < v < hi:
                odd_kind = "0" if even_kind == "pi" else "pi"
                hits[round(v, 12)] = even_kind if m % 2 == 0 else odd_kind
            m += 1
    return sorted(hits.items())


@dataclass(frozen=True, eq=False)
class BoundState:
    quasi_energy: float
    center: int
    decay_length: float
    ipr: float
    state: SpinorField


@dataclass(frozen=True, eq=False)
class BoundStateReport:
    coins: CoinProfile
    half_width: int
    states: tuple[BoundState, ...] = field(default_factory=tuple)

    def __len__(self) -> int:
        return len(self.states)

    def energies(self) -> list[float]:
        return [b.quasi_energy for b in self.states]


def real_space_spectrum(coins: CoinProfile, half_width: int) -> tuple[np.ndarray, np.ndarray]:
    """Quasi-energies in (-pi, pi] and eigenvectors of the ring-closed step operator."""
    u = step_matrix(coins, half_width, periodic=True).toarray()
    lam, vecs = np.linalg.eig(u)
    energy = -np.angle(lam)
    energy[energy <= -math.pi] += 2 * math.pi
    return energy, vecs


def _decay_length(prob: np.ndarray, sites: np.ndarray, center: int) -> float:
    """Amplitude decay length from a log-linear fit of the probability tails."""
    d = np.abs(sites - center).astype(float)
    mask = (d >= 1) & (prob > 1e-28) & (d <= sites.max() / 2)
    if np.count_nonzero(mask) < 3:
        return 0.0
    slope, _ = np.polyfit(d[mask], np.log(prob[mask]), 1)
    if slope >= 0:
        return math.inf
    return float(-2.0 / slope)


def find_bound_states(
    coins: CoinProfile,
    half_width: int,
    tol_energy: float = 1e-3,
    ipr_factor: float = 10.0,
) -> BoundStateReport:
    """Localized 0 / pi quasi-energy eigenstates of an inhomogeneous walk.

    The lattice is closed into a ring so the operator is unitary; the jump of
    theta2 at the seam hosts partner states which are filtered out by requiring
    the state to sit within ``|x| <= L/2``. Near-degenerate partners are split
    by diagonalizing the central-window projector inside each 0 / pi cluster.
    """
    left, right = coins.asymptotes()
    for t2 in (left, right):
        ph = gap_classification(coins.theta1, t2)
        if not ph.gapped:
            raise AsymptoticGapless(f"asymptotic phase (theta1={coins.theta1}, theta2={t2}) is {ph.value}")
    far = coins.theta2_at(np.array([-half_width, half_width], dtype=float))
    if abs(far[0] - left) > 1e-6 or abs(far[1] - right) > 1e-6:
        raise ValueError(f"half_width {half_width} too small: theta2 has not reached its asymptotes")

    L = half_width
    n = 2 * L + 1
    sites = np.arange(-L, L + 1)
    energy, vecs = real_space_spectrum(coins, L)
    u_ring = step_matrix(coins, L, periodic=True)
    window = np.repeat(np.abs(sites) <= L / 2, 2).astype(float)
    threshold = ipr_factor / n
    found = []
    for target in (0.0, math.pi):
        dist = np.abs(np.angle(np.exp(1j * (energy - target))))
        idx = np.nonzero(dist < tol_energy)[0]
        if idx.size == 0:
            continue
        q, _ = np.linalg.qr(vecs[:, idx])
        # central-window projector restricted to the cluster
        w, rot = np.linalg.eigh(q.conj().T @ (window[:, None] * q))
        for weight, col in zip(w, (q @ rot).T):
            if weight < 0.5:
                continue
            amps = col.reshape(n, 2)
            prob = np.sum(np.abs(amps) ** 2, axis=1)
            ipr = float(np.sum(prob**2))
            center = int(sites[np.argmax(prob)])
            if ipr <= threshold or abs(center) > L / 2:
                continue
            v = col / np.linalg.norm(col)
            e = float(-np.angle(np.vdot(v, u_ring @ v)))
            if e <= -math.pi:
                e += 2 * math.pi
            # fix the global phase: largest component real and positive
            j = np.argmax(np.abs(v))
            v = v * np.exp(-1j * np.angle(v[j]))
            found.append(
                BoundState(
                    quasi_energy=e,
                    center=center,
                    decay_length=_decay_length(prob, sites, center),
                    ipr=ipr,
                    state=SpinorField(L, v.reshape(n, 2)),
                )
            )
    found.sort(key=lambda b: (abs(b.quasi_energy), b.center))
    return BoundStateReport(coins, L, tuple(found))


# -- tables ---------------------------------------------------------------


def bands_table(analyses: list[BlochAnalysis]) -> Table:
    t = Table(["theta", "k", "E_plus", "E_minus"])
    for a in analyses:
        for k, (ep, em) in zip(a.k_samples, a.bands):
            t.append([a.theta1, float(k), float(ep), float(em)])
    return t


def phase_diagram_table(n_theta: int = 64, n_k: int = 512) -> Table:
    """Sweep (theta1, theta2) over a cell-centred grid on (0, 2pi)^2.

    ``W`` is left empty where the spectrum is gapless.
    """
    t = Table(["theta1", "theta2", "gap0", "gap_pi", "W"])
    grid = 2 * math.pi * (np.arange(n_theta) + 0.5) / n_theta
    for t1 in grid:
        for t2 in grid:
            a = band_structure(float(t1), float(t2), n_k)
            try:
                w = winding_number(a)
            except GaplessSpectrum:
                w = None
            t.append([float(t1), float(t2), a.gap0, a.gap_pi, w])
    return t


def bound_states_table(report: BoundStateReport) -> Table:
    t = Table(["index", "quasi_energy", "center", "decay_length"])
    for i, b in enumerate(report.states):
        t.append([i, b.quasi_energy, b.center, b.decay_length])
    return t
