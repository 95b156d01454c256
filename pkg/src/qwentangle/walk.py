"""
Coin rotations, spin-dependent shifts and the split-step walk.

One step of the split-step protocol applies, right to left,

    U(theta1, theta2) = T_down R_y(theta2) T_up R_y(theta1)

where ``T_up`` moves only the up component one site right and ``T_down`` moves
only the down component one site left. ``theta2`` may vary with the site; the
second coin acts at the walker's site after ``T_up``.

Two routes are provided. ``step_split`` works on amplitude arrays by slicing,
``step_matrix`` assembles the same operator as a sparse ``2N x 2N`` matrix. The
two-particle dense tensor is evolved with the matrix as ``U psi U^T`` while its
low-rank factors go through ``step_split``, so the two stay independent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np
import scipy.sparse as sp

from .errors import BoundaryOverrun
from .state import SpinorField, TwoParticleField
from .tables import Table

__all__ = [
    "CoinProfile",
    "reduce_angle",
    "coin_rotation",
    "step_simple",
    "step_split",
    "step_two",
    "step_matrix",
    "evolve",
    "single_marginals",
    "pair_marginals",
]

EDGE_TOL = 1e-12
TWO_PI = 2 * math.pi


def reduce_angle(theta: float) -> float:
    """Map an angle onto (-2pi, 2pi]; R_y has period 4pi so this is lossless."""
    theta = float(theta)
    if not math.isfinite(theta):
        raise ValueError(f"angle must be finite, got {theta}")
    r = math.fmod(theta, 2 * TWO_PI)
    if r <= -TWO_PI:
        r += 2 * TWO_PI
    elif r > TWO_PI:
        r -= 2 * TWO_PI
    return r


@dataclass(frozen=True)
class CoinProfile:
    """Coin angles of the split-step walk.

    ``theta1`` is uniform. ``theta2`` is either constant (``theta2_plus is None``)
    or interpolates from ``theta2`` (x -> -inf) to ``theta2_plus`` (x -> +inf):

        theta2(x) = t- + (t+ - t-) * (1 + tanh((x - center) / width)) / 2

    ``width == 0`` selects a sharp step (midpoint value exactly at ``center``).
    """

    theta1: float
    theta2: float = 0.0
    theta2_plus: float | None = None
    center: float = 0.0
    width: float = 3.0

    def __post_init__(self):
        object.__setattr__(self, "theta1", reduce_angle(self.theta1))
        object.__setattr__(self, "theta2", reduce_angle(self.theta2))
        if self.theta2_plus is not None:
            object.__setattr__(self, "theta2_plus", reduce_angle(self.theta2_plus))
        if self.width < 0 or not math.isfinite(self.width):
            raise ValueError(f"profile width must be finite and >= 0, got {self.width}")

    @classmethod
    def uniform(cls, theta1: float, theta2: float = 0.0) -> "CoinProfile":
        return cls(theta1, theta2)

    @classmethod
    def boundary(
        cls,
        theta1: float,
        theta2_minus: float,
        theta2_plus: float,
        center: float = 0.0,
        width: float = 3.0,
    ) -> "CoinProfile":
        return cls(theta1, theta2_minus, theta2_plus, center, width)

    @property
    def homogeneous(self) -> bool:
        return self.theta2_plus is None

    @property
    def theta2_minus(self) -> float:
        return self.theta2

    def asymptotes(self) -> tuple[float, float]:
        """theta2 far to the left and far to the right."""
        if self.homogeneous:
            return self.theta2, self.theta2
        return self.theta2, self.theta2_plus

    def theta2_at(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if self.homogeneous:
            return np.full_like(x, self.theta2)
        lo, hi = self.theta2, self.theta2_plus
        if self.width == 0:
            frac = np.where(x > self.center, 1.0, np.where(x < self.center, 0.0, 0.5))
        else:
            frac = 0.5 * (1.0 + np.tanh((x - self.center) / self.width))
        return lo + (hi - lo) * frac


def coin_rotation(theta: float) -> np.ndarray:
    """R_y(theta) = exp(-i theta sigma_y / 2) as a real 2x2 matrix."""
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array([[c, -s], [s, c]], dtype=np.complex128)


def _site_coins(thetas: np.ndarray) -> np.ndarray:
    c, s = np.cos(thetas / 2), np.sin(thetas / 2)
    out = np.empty(thetas.shape + (2, 2), dtype=np.complex128)
    out[..., 0, 0] = c
    out[..., 0, 1] = -s
    out[..., 1, 0] = s
    out[..., 1, 1] = c
    return out


def _check_edges(amps: np.ndarray, when: str) -> None:
    edge = max(np.max(np.abs(amps[0])), np.max(np.abs(amps[-1])))
    if edge > EDGE_TOL:
        raise BoundaryOverrun(
            f"amplitude {edge:.3e} on the outermost lattice site {when} the step; "
            "increase half_width (need L >= steps + 2)"
        )


def _shift_up_right(psi: np.ndarray) -> np.ndarray:
    out = psi.copy()
    out[1:, 0] = psi[:-1, 0]
    out[0, 0] = 0
    return out


def _shift_down_left(psi: np.ndarray) -> np.ndarray:
    out = psi.copy()
    out[:-1, 1] = psi[1:, 1]
    out[-1, 1] = 0
    return out


def step_simple(field: SpinorField, theta: float) -> SpinorField:
    """One step of the single-coin walk: R_y(theta), then up right / down left."""
    psi = field.amplitudes
    _check_edges(psi, "before")
    psi = psi @ coin_rotation(theta).T
    out = np.zeros_like(psi)
    out[1:, 0] = psi[:-1, 0]
    out[:-1, 1] = psi[1:, 1]
    _check_edges(out, "after")
    return SpinorField(field.half_width, out)


def step_split(field: SpinorField, coins: CoinProfile) -> SpinorField:
    psi = field.amplitudes
    _check_edges(psi, "before")
    psi = psi @ coin_rotation(coins.theta1).T
    psi = _shift_up_right(psi)
    c2 = _site_coins(coins.theta2_at(field.sites))
    psi = np.einsum("xij,xj->xi", c2, psi)
    psi = _shift_down_left(psi)
    _check_edges(psi, "after")
    return SpinorField(field.half_width, psi)


def step_matrix(coins: CoinProfile, half_width: int, periodic: bool = False) -> sp.csr_matrix:
    """Sparse one-step operator on the basis index ``2 * (x + L) + s``.

    With ``periodic`` the lattice is closed into a ring, which keeps the matrix
    exactly unitary; otherwise amplitude leaving the lattice is dropped.
    """
    n = 2 * half_width + 1
    sites = np.arange(-half_width, half_width + 1)
    p_up = sp.csr_matrix(np.diag([1.0, 0.0]))
    p_dn = sp.csr_matrix(np.diag([0.0, 1.0]))
    right = sp.eye(n, k=-1, format="csr")  # |x+1><x|
    left = sp.eye(n, k=1, format="csr")  # |x-1><x|
    if periodic:
        right = right + sp.csr_matrix(([1.0], ([0], [n - 1])), shape=(n, n))
        left = left + sp.csr_matrix(([1.0], ([n - 1], [0])), shape=(n, n))
    eye = sp.eye(n, format="csr")
    t_up = sp.kron(right, p_up) + sp.kron(eye, p_dn)
    t_dn = sp.kron(left, p_dn) + sp.kron(eye, p_up)
    r1 = sp.kron(eye, sp.csr_matrix(coin_rotation(coins.theta1)))
    r2 = sp.block_diag([coin_rotation(t) for t in coins.theta2_at(sites)])
    return (t_dn @ r2 @ t_up @ r1).tocsr().astype(np.complex128)


def step_two(field: TwoParticleField, coins: CoinProfile, _u: sp.csr_matrix | None = None) -> TwoParticleField:
    """Apply U (x) U to a two-boson field.

    The dense tensor goes through the sparse operator; factors, if present, are
    stepped one by one with ``step_split``.
    """
    L = field.half_width
    n = field.n_sites
    _check_edges(field.amplitudes, "before")
    u = _u if _u is not None else step_matrix(coins, L)
    m = field.matrix()
    m = (u @ (u @ m).T).T  # U M U^T
    dense = np.asarray(m).reshape(n, 2, n, 2)
    _check_edges(dense, "after")
    factors = None
    if field.factors is not None:
        factors = tuple((w, step_split(a, coins), step_split(b, coins)) for w, a, b in field.factors)
    return TwoParticleField(L, dense, factors)


Field = Union[SpinorField, TwoParticleField]


def evolve(
    field: Field,
    coins: CoinProfile | float,
    n_steps: int,
    callback: Callable[[int, Field], None] | None = None,
    keep: bool = True,
) -> list[Field] | Field:
    """Iterate the walk ``n_steps`` times.

    ``coins`` may be a plain angle, meaning the single-coin walk (only for
    :class:`SpinorField`). Returns the trajectory ``[psi_0, ..., psi_n]`` or, with
    ``keep=False``, only the final field. ``callback(i, psi_i)`` is called for
    every element including the input.
    """
    if n_steps < 0:
        raise ValueError(f"n_steps must be >= 0, got {n_steps}")
    if field.half_width < n_steps + 2:
        raise BoundaryOverrun(
            f"half_width {field.half_width} too small for {n_steps} steps (need >= {n_steps + 2})"
        )
    if isinstance(field, TwoParticleField):
        if not isinstance(coins, CoinProfile):
            coins = CoinProfile(coins, 0.0)
        u = step_matrix(coins, field.half_width)
        step = lambda f: step_two(f, coins, u)  # noqa: E731
    elif isinstance(coins, CoinProfile):
        step = lambda f: step_split(f, coins)  # noqa: E731
    else:
        theta = float(coins)
        step = lambda f: step_simple(f, theta)  # noqa: E731

    traj = [field] if keep else None
    if callback is not None:
        callback(0, field)
    for i in range(1, n_steps + 1):
        field = step(field)
        if keep:
            traj.append(field)
        if callback is not None:
            callback(i, field)
    return traj if keep else field


def single_marginals(trajectory: list[SpinorField], steps: list[int] | None = None) -> Table:
    """Rows (step, x, prob) for every site at the requested steps (default all)."""
    t = Table(["step", "x", "prob"])
    wanted = range(len(trajectory)) if steps is None else steps
    for i in wanted:
        f = trajectory[i]
        for x, p in zip(f.sites, f.probabilities()):
            t.append([i, int(x), float(p)])
    return t


def pair_marginals(trajectory: list[TwoParticleField], steps: list[int] | None = None, cutoff: float = 0.0) -> Table:
    """Rows (step, x1, x2, prob); entries with prob <= cutoff are skipped."""
    t = Table(["step", "x1", "x2", "prob"])
    wanted = range(len(trajectory)) if steps is None else steps
    for i in wanted:
        f = trajectory[i]
        p = f.joint_probabilities()
        for i1, i2 in zip(*np.nonzero(p > cutoff)):
            t.append([i, int(i1) - f.half_width, int(i2) - f.half_width, float(p[i1, i2])])
    return t
