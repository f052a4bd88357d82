"""Experimental apparatus: dark fringes, wire masks, thin lens, detectors.

The protocol implemented here probes an interference pattern without
observing it: locate the dark fringes of the two-slit pattern, park thin
absorbing wires exactly there, then image the slit plane through a lens onto
two detectors. If the fringes are real, the wires sit in nodes and remove
almost nothing; blocking flux only appears once a slit is closed and the
nodes fill in.

The lens is modeled for massive particles as an instantaneous quadratic
phase kick exp(-i m y^2 / (2 hbar T_f)) followed by free transport, with
"focal length" and the imaging condition 1/T_o + 1/T_i = 1/T_f expressed in
equivalent drift times. Wires are ideal absorbers (amplitude to zero),
applied identically to both branches.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .wavepacket import (
    BOUNDARY_TOL,
    BranchedField,
    WaveField,
    gaussian_mode,
    propagate_spectral,
)

IMAGING_CONDITION_TOL = 1e-12
GRAM_CONDITION_LIMIT = 1e12
PEAK_FLOOR_FRACTION = 1e-4
FLUX_BOOKKEEPING_TOL = 1e-6


class NoInterferenceError(ValueError):
    """Fewer than two dark fringes in the analysis window."""


class ImagingError(ValueError):
    """Lens applied at an inconsistent time or with invalid geometry."""


class DegenerateModesError(ValueError):
    """The two detector-bound modes are numerically indistinguishable."""


def _refine_extremum(y: np.ndarray, v: np.ndarray, i: int) -> tuple[float, float]:
    """Sub-grid extremum via a parabola through (i-1, i, i+1)."""
    v0, v1, v2 = v[i - 1], v[i], v[i + 1]
    denom = v0 - 2.0 * v1 + v2
    if denom == 0.0:
        return float(y[i]), float(v1)
    dy = y[1] - y[0]
    position = y[i] + 0.5 * dy * (v0 - v2) / denom
    value = v1 - (v0 - v2) ** 2 / (8.0 * denom)
    return float(position), float(value)


def find_intensity_extrema(
    y: np.ndarray,
    intensity: np.ndarray,
    window: tuple[float, float],
    floor_fraction: float = PEAK_FLOOR_FRACTION,
) -> tuple[np.ndarray, np.ndarray]:
    """Refined fringe maxima and the minima between them, inside a window.

    Returns (peaks, minima), each an array of (position, value) rows sorted
    by position. Peaks below ``floor_fraction`` of the window maximum are
    ignored, which suppresses spurious extrema riding on numerical noise in
    far tails; minima are only reported between two accepted peaks, so a
    structureless single hump yields none.
    """
    lo, hi = window
    if not hi > lo:
        raise ValueError("window must satisfy lo < hi")
    inside = (y > lo) & (y < hi)
    if np.count_nonzero(inside) < 5:
        raise ValueError("window contains too few samples")
    window_peak = float(intensity[inside].max())
    if window_peak <= 0.0:
        raise NoInterferenceError("window intensity is identically zero")
    floor = floor_fraction * window_peak
    interior = (
        (intensity[1:-1] > intensity[:-2])
        & (intensity[1:-1] > intensity[2:])
        & inside[1:-1]
        & (intensity[1:-1] >= floor)
    )
    peak_idx = np.where(interior)[0] + 1
    peaks = [_refine_extremum(y, intensity, i) for i in peak_idx]
    minima = []
    for i0, i1 in zip(peak_idx[:-1], peak_idx[1:]):
        j = int(np.argmin(intensity[i0 : i1 + 1])) + i0
        position, value = _refine_extremum(y, intensity, j)
        minima.append((position, max(value, 0.0)))
    return np.array(peaks).reshape(-1, 2), np.array(minima).reshape(-1, 2)


@dataclass(frozen=True)
class FringeMap:
    """Dark-fringe positions and depths, plus the median fringe spacing."""

    minima_positions: np.ndarray
    minima_intensities: np.ndarray
    fringe_spacing: float

    def __post_init__(self):
        if len(self.minima_positions) != len(self.minima_intensities):
            raise ValueError("positions and intensities differ in length")
        if np.any(np.diff(self.minima_positions) <= 0.0):
            raise ValueError("minima positions must be strictly increasing")

    def central(self, count: int) -> np.ndarray:
        """Positions of the ``count`` minima nearest the axis, ascending."""
        order = np.argsort(np.abs(self.minima_positions), kind="stable")
        return np.sort(self.minima_positions[order[:count]])

    def to_dict(self) -> dict:
        return {
            "minima_positions": [float(p) for p in self.minima_positions],
            "minima_intensities": [float(v) for v in self.minima_intensities],
            "fringe_spacing": float(self.fringe_spacing),
        }


def find_dark_fringes(field: BranchedField, window: tuple[float, float]) -> FringeMap:
    """Locate the dark fringes of the total intensity inside a window.

    Minima are refined to sub-grid accuracy by local quadratic
    interpolation (wire placement error must stay far below the wire
    width). Raises NoInterferenceError when fewer than two minima exist.
    """
    y = field.grid.points()
    intensity = field.total().intensity()
    _, minima = find_intensity_extrema(y, intensity, window)
    if len(minima) < 2:
        raise NoInterferenceError(
            f"found {len(minima)} dark fringe(s) in {window}; no interference"
        )
    spacing = float(np.median(np.diff(minima[:, 0])))
    return FringeMap(minima[:, 0], minima[:, 1], spacing)


@dataclass(frozen=True)
class WireGrid:
    """Thin ideal absorbers: amplitude is zeroed on each wire interval."""

    positions: np.ndarray
    width: float

    def __post_init__(self):
        if not self.width > 0.0:
            raise ValueError("wire width must be positive")
        pos = np.sort(np.asarray(self.positions, dtype=float))
        object.__setattr__(self, "positions", pos)
        if np.any(np.diff(pos) <= self.width):
            raise ValueError("wires overlap or touch")

    @classmethod
    def from_fringe_map(
        cls, fringes: FringeMap, count: int = 10, width_fraction: float = 0.05
    ) -> "WireGrid":
        """Wires on the ``count`` most central dark fringes.

        Width is a fraction of the fringe spacing and must stay below half a
        spacing so wires never bridge adjacent bright fringes.
        """
        if count < 1:
            raise ValueError("count must be at least 1")
        if count > len(fringes.minima_positions):
            raise ValueError(
                f"requested {count} wires but only "
                f"{len(fringes.minima_positions)} fringes were found"
            )
        if not 0.0 < width_fraction < 0.5:
            raise ValueError("width_fraction must lie in (0, 0.5)")
        return cls(fringes.central(count), width_fraction * fringes.fringe_spacing)

    def blocked_samples(self, grid) -> np.ndarray:
        """Boolean mask of samples covered by a wire."""
        y = grid.points()
        mask = np.zeros(len(y), dtype=bool)
        half = 0.5 * self.width
        for p in np.asarray(self.positions, dtype=float):
            if p - half < grid.y_min or p + half > grid.y_max:
                raise ValueError(f"wire at {p} extends beyond the grid")
            mask |= (y >= p - half) & (y <= p + half)
        return mask


@dataclass(frozen=True)
class WireLoss:
    """Flux removed by the mask, per branch and for the physical total.

    The per-branch entries do not sum to the total: the total is the
    integral of |branch_a + branch_b|^2 over the wires, and interference
    there is exactly the point of the protocol.
    """

    from_a: float
    from_b: float
    total: float

    @classmethod
    def zero(cls) -> "WireLoss":
        return cls(0.0, 0.0, 0.0)


def apply_wires(field: BranchedField, wires: WireGrid | None) -> tuple[BranchedField, WireLoss]:
    """Zero both branches on every wire interval and account for the flux.

    The mask is branch-blind, and the blocked totals equal the pre-mask
    intensity integrated over the masked samples by construction.
    """
    if wires is None or len(wires.positions) == 0:
        return field, WireLoss.zero()
    blocked = wires.blocked_samples(field.grid)
    dy = field.grid.dy
    loss = WireLoss(
        from_a=float(np.sum(field.branch_a.intensity()[blocked]) * dy),
        from_b=float(np.sum(field.branch_b.intensity()[blocked]) * dy),
        total=float(np.sum(field.total().intensity()[blocked]) * dy),
    )
    keep = ~blocked
    masked = BranchedField(
        WaveField(field.grid, field.branch_a.values * keep, field.time),
        WaveField(field.grid, field.branch_b.values * keep, field.time),
        field.config,
        analytic=False,
    )
    return masked, loss


@dataclass(frozen=True)
class LensSpec:
    """Thin lens in drift-time units, plus a hard aperture.

    Satisfies the imaging condition 1/object + 1/image = 1/focal within
    1e-12. The aperture may be zero (fully stopped-down lens).
    """

    focal_length: float
    aperture_halfwidth: float
    object_distance: float
    image_distance: float

    def __post_init__(self):
        if not self.focal_length > 0.0:
            raise ValueError("focal_length must be positive")
        if self.aperture_halfwidth < 0.0:
            raise ValueError("aperture_halfwidth must be non-negative")
        if not (self.object_distance > 0.0 and self.image_distance > 0.0):
            raise ValueError("object and image distances must be positive")
        gap = abs(
            1.0 / self.object_distance
            + 1.0 / self.image_distance
            - 1.0 / self.focal_length
        )
        if gap > IMAGING_CONDITION_TOL:
            raise ValueError(f"imaging condition violated by {gap:.3e}")

    @classmethod
    def unit_magnification(
        cls, object_distance: float, aperture_halfwidth: float
    ) -> "LensSpec":
        """Symmetric imaging: focal = T_o/2, image = T_o, magnification -1."""
        return cls(
            focal_length=object_distance / 2.0,
            aperture_halfwidth=aperture_halfwidth,
            object_distance=object_distance,
            image_distance=object_distance,
        )

    @property
    def magnification(self) -> float:
        return -self.image_distance / self.object_distance


@dataclass(frozen=True)
class LensLoss:
    """Flux clipped by the aperture, per branch and total."""

    from_a: float
    from_b: float
    total: float


def image_through_lens(
    field: BranchedField, lens: LensSpec, edge_tol: float = BOUNDARY_TOL
) -> tuple[BranchedField, LensLoss]:
    """Phase-kick, clip at the aperture, and drift to the image plane.

    The field's time stamp must equal the lens object distance (the lens
    images the slit plane). Each t = 0 packet refocuses near its conjugate
    point, inverted through the axis for a real image. ``edge_tol`` is
    forwarded to the spectral drift; wire-masked fields need a relaxed
    value because hard mask edges shed algebraic diffraction tails.
    """
    if field.config is None:
        raise ImagingError("lens needs mass/hbar from the field's SlitConfig")
    if abs(field.time - lens.object_distance) > 1e-9 * max(1.0, lens.object_distance):
        raise ImagingError(
            f"field at t={field.time} but lens expects the object plane at "
            f"t={lens.object_distance}"
        )
    cfg = field.config
    y = field.grid.points()
    kick = np.exp(-1j * cfg.mass * y**2 / (2.0 * cfg.hbar * lens.focal_length))
    # Strict inequality: a zero aperture passes nothing, not one sample.
    inside = np.abs(y) < lens.aperture_halfwidth
    dy = field.grid.dy

    def _clip(wf: WaveField) -> tuple[np.ndarray, float]:
        clipped_flux = float(np.sum(wf.intensity()[~inside]) * dy)
        return wf.values * kick * inside, clipped_flux

    va, lost_a = _clip(field.branch_a)
    vb, lost_b = _clip(field.branch_b)
    lost_total = float(np.sum(field.total().intensity()[~inside]) * dy)
    kicked = BranchedField(
        WaveField(field.grid, va, field.time),
        WaveField(field.grid, vb, field.time),
        cfg,
        analytic=False,
    )
    imaged = propagate_spectral(kicked, lens.image_distance, edge_tol=edge_tol)
    return imaged, LensLoss(lost_a, lost_b, lost_total)


@dataclass(frozen=True)
class DetectorReport:
    """Per-branch and total probabilities at the two detector windows.

    Totals are integrals of |branch_a + branch_b|^2 and therefore need not
    equal the sum of the per-branch entries where the branches overlap;
    interference at the detector is physical and is reported as such.
    """

    p_da_total: float
    p_db_total: float
    p_da_from_a: float
    p_db_from_a: float
    p_da_from_b: float
    p_db_from_b: float
    blocked_flux: float
    leaked_flux: float
    blocked_from_a: float
    blocked_from_b: float
    leaked_from_a: float
    leaked_from_b: float
    input_norm_a: float
    input_norm_b: float
    split_point: float
    detector_a_side: str

    def to_dict(self) -> dict:
        return {
            "p_da_total": self.p_da_total,
            "p_db_total": self.p_db_total,
            "p_da_from_a": self.p_da_from_a,
            "p_db_from_a": self.p_db_from_a,
            "p_da_from_b": self.p_da_from_b,
            "p_db_from_b": self.p_db_from_b,
            "blocked_flux": self.blocked_flux,
            "leaked_flux": self.leaked_flux,
            "blocked_from_a": self.blocked_from_a,
            "blocked_from_b": self.blocked_from_b,
            "leaked_from_a": self.leaked_from_a,
            "leaked_from_b": self.leaked_from_b,
            "input_norm_a": self.input_norm_a,
            "input_norm_b": self.input_norm_b,
            "split_point": self.split_point,
            "detector_a_side": self.detector_a_side,
        }


def _split_weights(grid, split_point: float) -> np.ndarray:
    """Weight of each sample on the low side of the split.

    A sample landing exactly on the split point is shared half/half, which
    keeps mirror-symmetric fields exactly balanced on FFT grids (whose
    sample set is not sign-symmetric).
    """
    y = grid.points()
    quarter = 0.25 * grid.dy
    return np.where(y < split_point - quarter, 1.0,
                    np.where(y > split_point + quarter, 0.0, 0.5))


def _window_flux(values: np.ndarray, weights: np.ndarray, dy: float) -> float:
    return float(np.sum(np.abs(values) ** 2 * weights) * dy)


def detect(
    field: BranchedField,
    split_point: float = 0.0,
    input_norms: tuple[float, float] | None = None,
    blocked: tuple[float, float, float] | None = None,
    a_side: str | None = None,
) -> DetectorReport:
    """Integrate branch and total intensities over the two half-line windows.

    Detector A is assigned the side of the split holding the majority of
    branch a's flux (so a single open slit always feeds "its" detector);
    pass ``a_side`` ("low"/"high") to pin it explicitly. ``input_norms``
    are the branch weights entering the pipeline and ``blocked`` the wire
    losses (from_a, from_b, total); leaked flux is whatever the windows and
    wires fail to account for, per branch.
    """
    dy = field.grid.dy
    w_low = _split_weights(field.grid, split_point)
    w_high = 1.0 - w_low

    a_low = _window_flux(field.branch_a.values, w_low, dy)
    a_high = _window_flux(field.branch_a.values, w_high, dy)
    b_low = _window_flux(field.branch_b.values, w_low, dy)
    b_high = _window_flux(field.branch_b.values, w_high, dy)
    total_low = _window_flux(field.total().values, w_low, dy)
    total_high = _window_flux(field.total().values, w_high, dy)

    if a_side is None:
        if a_low + a_high > 0.0:
            a_side = "low" if a_low >= a_high else "high"
        elif b_low + b_high > 0.0:
            a_side = "high" if b_low >= b_high else "low"
        else:
            a_side = "low"
    if a_side not in ("low", "high"):
        raise ValueError("a_side must be 'low' or 'high'")

    if a_side == "low":
        p_da_from_a, p_db_from_a = a_low, a_high
        p_da_from_b, p_db_from_b = b_low, b_high
        p_da_total, p_db_total = total_low, total_high
    else:
        p_da_from_a, p_db_from_a = a_high, a_low
        p_da_from_b, p_db_from_b = b_high, b_low
        p_da_total, p_db_total = total_high, total_low

    blocked_a, blocked_b, blocked_total = blocked if blocked is not None else (0.0, 0.0, 0.0)
    if input_norms is None:
        input_a = p_da_from_a + p_db_from_a + blocked_a
        input_b = p_da_from_b + p_db_from_b + blocked_b
    else:
        input_a, input_b = input_norms

    def _leak(inp: float, det_a: float, det_b: float, blk: float) -> float:
        leak = inp - det_a - det_b - blk
        if leak < -1e-9:
            raise ValueError(f"negative leaked flux {leak:.3e}: bookkeeping broken")
        return max(leak, 0.0)

    leaked_a = _leak(input_a, p_da_from_a, p_db_from_a, blocked_a)
    leaked_b = _leak(input_b, p_da_from_b, p_db_from_b, blocked_b)

    return DetectorReport(
        p_da_total=p_da_total,
        p_db_total=p_db_total,
        p_da_from_a=p_da_from_a,
        p_db_from_a=p_db_from_a,
        p_da_from_b=p_da_from_b,
        p_db_from_b=p_db_from_b,
        blocked_flux=blocked_total,
        leaked_flux=leaked_a + leaked_b,
        blocked_from_a=blocked_a,
        blocked_from_b=blocked_b,
        leaked_from_a=leaked_a,
        leaked_from_b=leaked_b,
        input_norm_a=input_a,
        input_norm_b=input_b,
        split_point=split_point,
        detector_a_side=a_side,
    )


@dataclass(frozen=True)
class ModeDecomposition:
    """Branch coefficients over the two detector-bound Gaussian modes.

    ``coefficients[i][j]`` is the amplitude of branch i (a, b) on mode j
    (centered +y0, centered -y0), obtained with the dual basis of the 2x2
    Gram matrix. ``accounting`` records whether the canceled antisymmetric
    content was removed in closed form ("cancellation") or the branches
    were projected as-is ("direct", used for masked fields).
    """

    coefficients: np.ndarray
    residual_a: float
    residual_b: float
    gram: np.ndarray
    condition_number: float
    accounting: str

    def rows_probability(self) -> np.ndarray:
        """|coefficient|^2 rows, each normalized to unit sum."""
        mags = np.abs(self.coefficients) ** 2
        sums = mags.sum(axis=1, keepdims=True)
        if np.any(sums == 0.0):
            raise ValueError("a branch has zero weight on both modes")
        return mags / sums

    def to_dict(self) -> dict:
        return {
            "coefficients": [[complex(c) for c in row] for row in self.coefficients],
            "residual_a": self.residual_a,
            "residual_b": self.residual_b,
            "gram": [[complex(g) for g in row] for row in self.gram],
            "condition_number": self.condition_number,
            "accounting": self.accounting,
        }


def mode_contributions(field: BranchedField) -> ModeDecomposition:
    """Decompose each branch's surviving content onto the two slit images.

    For closed-form fields the antisymmetric (sinh) content that cancels
    between the branches is removed exactly first: the cancelable amplitude
    is the smaller of the two branch amplitudes, so a lone open slit keeps
    its full packet while equal amplitudes lose all antisymmetric content.
    The two rows then coincide exactly for equal amplitudes: each slit's
    surviving amplitude splits equally over the modes bound for the two
    detectors. Wire-masked fields are projected directly; the wires have
    already removed the canceling parts physically.
    """
    if field.config is None:
        raise ValueError("mode decomposition needs the field's SlitConfig")
    cfg = field.config
    t = field.time
    mode_plus = gaussian_mode(cfg, field.grid, t, +cfg.y0)
    mode_minus = gaussian_mode(cfg, field.grid, t, -cfg.y0)
    dy = field.grid.dy

    gram = np.array(
        [
            [np.vdot(mode_plus, mode_plus), np.vdot(mode_plus, mode_minus)],
            [np.vdot(mode_minus, mode_plus), np.vdot(mode_minus, mode_minus)],
        ]
    ) * dy
    condition = float(np.linalg.cond(gram))
    if not np.isfinite(condition) or condition > GRAM_CONDITION_LIMIT:
        raise DegenerateModesError(
            f"Gram condition number {condition:.3e}: modes indistinguishable"
        )

    if field.analytic:
        accounting = "cancellation"
        sinh_unit = 0.5 * (mode_plus - mode_minus)
        cancelable = cfg.amp_b if abs(cfg.amp_b) <= abs(cfg.amp_a) else cfg.amp_a
        surviving_a = field.branch_a.values - cancelable * sinh_unit
        surviving_b = field.branch_b.values + cancelable * sinh_unit
    else:
        accounting = "direct"
        surviving_a = field.branch_a.values
        surviving_b = field.branch_b.values

    coefficients = np.zeros((2, 2), dtype=complex)
    residuals = []
    for row, surviving in enumerate((surviving_a, surviving_b)):
        rhs = np.array(
            [np.vdot(mode_plus, surviving), np.vdot(mode_minus, surviving)]
        ) * dy
        coeff = np.linalg.solve(gram, rhs)
        coefficients[row] = coeff
        reconstruction = coeff[0] * mode_plus + coeff[1] * mode_minus
        residuals.append(
            float(np.sqrt(np.sum(np.abs(surviving - reconstruction) ** 2) * dy))
        )

    return ModeDecomposition(
        coefficients=coefficients,
        residual_a=residuals[0],
        residual_b=residuals[1],
        gram=gram,
        condition_number=condition,
        accounting=accounting,
    )
