"""Exact two-state interferometer.

A spin-1/2 in a transverse magnetic field is the smallest system that shows
the full interference/which-way trade-off: the up/down basis states stand in
for the two paths, a quarter-turn rotation plays the role of transport into
the overlap region, and removing the destructively interfering component
("dark port") plays the role of losing amplitude at a dark fringe.

Everything here is closed-form 2x2 algebra with hbar = 1; all functions are
pure and operate on immutable values.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]])


@dataclass(frozen=True)
class SpinState:
    """Two complex amplitudes over the fixed (up, down) basis."""

    amp_up: complex
    amp_down: complex

    def as_array(self) -> np.ndarray:
        return np.array([self.amp_up, self.amp_down], dtype=complex)

    def probability(self) -> float:
        """Total weight |amp_up|^2 + |amp_down|^2 (1 for physical states,
        less for unnormalized branch states)."""
        return float(abs(self.amp_up) ** 2 + abs(self.amp_down) ** 2)

    def norm(self) -> float:
        return float(np.sqrt(self.probability()))

    def normalized(self) -> "SpinState":
        n = self.norm()
        if n == 0.0:
            raise ValueError("cannot normalize a zero spin state")
        return SpinState(self.amp_up / n, self.amp_down / n)

    def density_matrix(self) -> np.ndarray:
        v = self.as_array()
        return np.outer(v, v.conj())


def spin_up() -> SpinState:
    return SpinState(1.0 + 0.0j, 0.0j)


def spin_down() -> SpinState:
    return SpinState(0.0j, 1.0 + 0.0j)


def equal_superposition() -> SpinState:
    """(up + down)/sqrt(2), the two-branch source state."""
    s = 1.0 / np.sqrt(2.0)
    return SpinState(complex(s), complex(s))


@dataclass(frozen=True)
class SpinEvolver:
    """Rotation generated by a field of strength B along y.

    The propagator is U(t) = cos(Bt/2) I + i sin(Bt/2) sigma_y, and
    tau = pi/(2B) is the quarter-turn time that maps each basis state onto
    an equal-weight superposition.
    """

    field_strength: float = 1.0

    def __post_init__(self):
        if not self.field_strength > 0.0:
            raise ValueError("field_strength must be positive")

    @property
    def tau(self) -> float:
        return np.pi / (2.0 * self.field_strength)

    def matrix(self, duration: float) -> np.ndarray:
        theta = 0.5 * self.field_strength * duration
        return np.cos(theta) * np.eye(2) + 1j * np.sin(theta) * SIGMA_Y


def evolve(state: SpinState, evolver: SpinEvolver, duration: float) -> SpinState:
    """Apply U(duration) to a state. Norm-preserving."""
    if duration < 0.0:
        raise ValueError("duration must be non-negative")
    v = evolver.matrix(duration) @ state.as_array()
    return SpinState(complex(v[0]), complex(v[1]))


@dataclass(frozen=True)
class BranchedSpinState:
    """Ordered pair of unnormalized states, one per initial basis state.

    The physical state is the branch sum; tracking branches separately makes
    conditional which-initial-state statistics available by linearity.
    """

    branch_up_origin: SpinState
    branch_down_origin: SpinState

    def total(self) -> SpinState:
        return SpinState(
            self.branch_up_origin.amp_up + self.branch_down_origin.amp_up,
            self.branch_up_origin.amp_down + self.branch_down_origin.amp_down,
        )

    def branch_probabilities(self) -> tuple[float, float]:
        return (
            self.branch_up_origin.probability(),
            self.branch_down_origin.probability(),
        )


def evolve_branches(
    state: BranchedSpinState, evolver: SpinEvolver, duration: float
) -> BranchedSpinState:
    return BranchedSpinState(
        evolve(state.branch_up_origin, evolver, duration),
        evolve(state.branch_down_origin, evolver, duration),
    )


def make_interference_state(evolver: SpinEvolver) -> BranchedSpinState:
    """Evolve the equal superposition for one quarter turn, branch by branch.

    The up-origin branch becomes (up - down)/2, the down-origin branch
    (up + down)/2; their sum is pure up, i.e. the down component interferes
    destructively (the dark port) while up interferes constructively.
    """
    s = 1.0 / np.sqrt(2.0)
    up_start = SpinState(complex(s), 0.0j)
    down_start = SpinState(0.0j, complex(s))
    return BranchedSpinState(
        evolve(up_start, evolver, evolver.tau),
        evolve(down_start, evolver, evolver.tau),
    )


def project_dark_port(state: BranchedSpinState) -> BranchedSpinState:
    """Remove the destructively interfering (down) component of each branch.

    This is a fixed-basis, non-unitary projection; total weight can only
    decrease. For the symmetric interference state the branch sum loses
    nothing because the down components cancel exactly.
    """
    return BranchedSpinState(
        SpinState(state.branch_up_origin.amp_up, 0.0j),
        SpinState(state.branch_down_origin.amp_up, 0.0j),
    )


def trace_distance(rho: np.ndarray, sigma: np.ndarray) -> float:
    """Trace distance (1/2)||rho - sigma||_1 between density matrices."""
    eigenvalues = np.linalg.eigvalsh(rho - sigma)
    return float(0.5 * np.sum(np.abs(eigenvalues)))


def which_initial_state_info(state: BranchedSpinState) -> float:
    """Distinguishability of the two branches, as a trace distance in [0, 1].

    0 means a detector at this stage learns nothing about which basis state
    the system started in; 1 means perfect retrodiction. Comparison is
    density-matrix based, so global branch phases are irrelevant.
    """
    p_up, p_down = state.branch_probabilities()
    if p_up == 0.0 and p_down == 0.0:
        raise ValueError("both branches have zero weight: state fully absorbed")
    if p_up == 0.0 or p_down == 0.0:
        # Only one origin survived, so retrodiction is perfect.
        return 1.0
    rho = state.branch_up_origin.normalized().density_matrix()
    sigma = state.branch_down_origin.normalized().density_matrix()
    return trace_distance(rho, sigma)
