"""Quantitative interference and which-way measures.

Visibility quantifies how pronounced the fringes are; distinguishability and
mutual information quantify how much a detector click reveals about the
source branch. All of them are computed from branch-resolved data, and the
conditionals are renormalized to surviving flux (detected particles), with
the unrenormalized numbers still available to callers.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .optics import DetectorReport, find_intensity_extrema


class VisibilityUndefinedError(ValueError):
    """Fringe extrema could not be detected in the window."""


def visibility(
    y: np.ndarray,
    intensity: np.ndarray,
    window: tuple[float, float] | None = None,
    periods: int = 5,
) -> float:
    """Fringe contrast (I_max - I_min)/(I_max + I_min).

    Each dark fringe is paired with the mean of its two adjacent bright
    fringes, and the pair contrasts are averaged over the ``periods`` most
    central fringes. Raises VisibilityUndefinedError when the window holds
    fewer than two maxima and one minimum (e.g. a single slit).
    """
    y = np.asarray(y, dtype=float)
    intensity = np.asarray(intensity, dtype=float)
    if window is None:
        window = (float(y[0]), float(y[-1]) + (y[1] - y[0]))
    try:
        peaks, minima = find_intensity_extrema(y, intensity, window)
    except ValueError as exc:
        raise VisibilityUndefinedError(str(exc)) from exc
    if len(peaks) < 2 or len(minima) < 1:
        raise VisibilityUndefinedError(
            f"window holds {len(peaks)} maxima and {len(minima)} minima"
        )
    order = np.argsort(np.abs(minima[:, 0]), kind="stable")
    contrasts = []
    for row in order[:periods]:
        position, i_min = minima[row]
        left = peaks[peaks[:, 0] < position][-1]
        right = peaks[peaks[:, 0] > position][0]
        i_max = 0.5 * (left[1] + right[1])
        contrasts.append((i_max - i_min) / (i_max + i_min))
    return float(np.mean(contrasts))


@dataclass(frozen=True)
class ConditionalStats:
    """Click probabilities at the two detectors, conditioned on the branch.

    Each pair may sum to less than one; the deficit is flux that was
    blocked or leaked before detection. ``prior_a`` is the source
    probability of branch a.
    """

    p_click_given_a: tuple[float, float]
    p_click_given_b: tuple[float, float]
    prior_a: float = 0.5

    def __post_init__(self):
        for name, pair in (
            ("p_click_given_a", self.p_click_given_a),
            ("p_click_given_b", self.p_click_given_b),
        ):
            if len(pair) != 2:
                raise ValueError(f"{name} must hold two entries")
            if min(pair) < -1e-12:
                raise ValueError(f"{name} has a negative entry: {pair}")
            if sum(pair) > 1.0 + 1e-9:
                raise ValueError(f"{name} sums to {sum(pair)!r} > 1")
        if not 0.0 <= self.prior_a <= 1.0:
            raise ValueError("prior_a must lie in [0, 1]")

    @classmethod
    def from_detector_report(cls, report: DetectorReport) -> "ConditionalStats":
        if report.input_norm_a <= 0.0 or report.input_norm_b <= 0.0:
            raise ValueError("conditionals need both branch input norms > 0")
        total = report.input_norm_a + report.input_norm_b
        return cls(
            p_click_given_a=(
                report.p_da_from_a / report.input_norm_a,
                report.p_db_from_a / report.input_norm_a,
            ),
            p_click_given_b=(
                report.p_da_from_b / report.input_norm_b,
                report.p_db_from_b / report.input_norm_b,
            ),
            prior_a=report.input_norm_a / total,
        )

    def renormalized(self) -> tuple[tuple[float, float], tuple[float, float]]:
        """Conditionals rescaled to each branch's surviving flux."""
        out = []
        for pair in (self.p_click_given_a, self.p_click_given_b):
            surviving = pair[0] + pair[1]
            if surviving <= 0.0:
                raise ValueError("a branch has zero surviving flux")
            out.append((pair[0] / surviving, pair[1] / surviving))
        return out[0], out[1]


def distinguishability(stats: ConditionalStats) -> float:
    """Total-variation distance between the renormalized conditionals.

    0 means the detectors carry no which-way information at all, 1 means a
    click identifies the branch with certainty. Renormalizing to surviving
    flux makes the measure a statement about detected particles, so scaling
    either branch's survival leaves it unchanged.
    """
    cond_a, cond_b = stats.renormalized()
    return 0.5 * (abs(cond_a[0] - cond_b[0]) + abs(cond_a[1] - cond_b[1]))


def _entropy_bits(probabilities: np.ndarray) -> float:
    p = probabilities[probabilities > 0.0]
    return float(-np.sum(p * np.log2(p)))


def mutual_information(stats: ConditionalStats) -> float:
    """I(branch; detector) in bits for the renormalized joint distribution."""
    if not 0.0 < stats.prior_a < 1.0:
        raise ValueError("mutual information needs a prior strictly inside (0, 1)")
    cond_a, cond_b = stats.renormalized()
    joint = np.array(
        [
            [stats.prior_a * cond_a[0], stats.prior_a * cond_a[1]],
            [(1.0 - stats.prior_a) * cond_b[0], (1.0 - stats.prior_a) * cond_b[1]],
        ]
    )
    p_branch = joint.sum(axis=1)
    p_click = joint.sum(axis=0)
    return (
        _entropy_bits(p_branch)
        + _entropy_bits(p_click)
        - _entropy_bits(joint.ravel())
    )


def duality_budget(v: float, d: float) -> float:
    """v^2 + d^2 for a visibility/distinguishability pair.

    A consistency check, not a law being asserted: callers measuring both
    numbers on the same branch-resolved run with one accounting convention
    should find the budget at most 1 (plus rounding).
    """
    for name, value in (("v", v), ("d", d)):
        if not -1e-12 <= value <= 1.0 + 1e-12:
            raise ValueError(f"{name} = {value!r} outside [0, 1]")
    return v * v + d * d
