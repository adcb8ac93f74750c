"""Gridded intensity maps, line cuts, stripe detection and transmission scans."""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.ndimage import gaussian_filter1d

from . import core
from .beam import Component, beam_model
from .core import SlabConfig
from .errors import DomainError, QuadratureError
from .quadrature import QuadratureSpec, check_resolution, max_resolvable_rate, phase_rate

#: Peaks lower than this fraction of the cut maximum are ignored by default.
DEFAULT_PEAK_THRESHOLD = 1e-2

#: Stripe windows extend this many widths on either side of a peak.
STRIPE_WINDOW_WIDTHS = 3.0


@dataclass(frozen=True)
class GridSpec:
    y_min: float
    y_max: float
    z_min: float
    z_max: float
    ny: int
    nz: int

    def __post_init__(self):
        if not (self.y_min < self.y_max and self.z_min < self.z_max):
            raise DomainError("grid bounds must satisfy y_min < y_max and z_min < z_max")
        if self.ny < 2 or self.nz < 2:
            raise DomainError(f"grid needs ny, nz >= 2, got {self.ny}x{self.nz}")

    @property
    def y(self) -> np.ndarray:
        return np.linspace(self.y_min, self.y_max, self.ny)

    @property
    def z(self) -> np.ndarray:
        return np.linspace(self.z_min, self.z_max, self.nz)


@dataclass(frozen=True)
class IntensityMap:
    """|E_1|^2 of the total field; values[i, j] sits at (grid.y[i], grid.z[j])."""

    grid: GridSpec
    values: np.ndarray

    def column(self, z_d: float) -> LineCut:
        """Fixed-z cut through the nearest grid column."""
        j = int(np.argmin(np.abs(self.grid.z - z_d)))
        return LineCut("fixed_z", float(self.grid.z[j]), self.grid.y, self.values[:, j].copy())

    def row(self, y_d: float) -> LineCut:
        i = int(np.argmin(np.abs(self.grid.y - y_d)))
        return LineCut("fixed_y", float(self.grid.y[i]), self.grid.z, self.values[i, :].copy())


@dataclass(frozen=True)
class LineCut:
    axis: str  # "fixed_y" (coordinate is z) or "fixed_z" (coordinate is y)
    fixed_value: float
    coords: np.ndarray
    intensity: np.ndarray

    @property
    def samples(self) -> list[tuple[float, float]]:
        return list(zip(self.coords.tolist(), self.intensity.tolist()))


@dataclass(frozen=True)
class Peak:
    position: float
    height: float
    width: float


@dataclass(frozen=True)
class Stripe:
    """One detected beam on a cut: its peak, intensity centroid and integrated intensity."""

    peak: Peak
    centroid: float
    power: float
    lo: float
    hi: float


def _check_map_guard(grid: GridSpec, cfg: SlabConfig, quad: QuadratureSpec) -> None:
    ys = np.array([grid.y_min, grid.y_min, grid.y_max, grid.y_max])
    zs = np.array([grid.z_min, grid.z_max, grid.z_min, grid.z_max])
    rate = phase_rate(ys, zs, cfg, slab=True, inside=True)
    k = int(np.argmax(rate))
    limit = max_resolvable_rate(quad, cfg)
    if rate[k] > limit:
        raise QuadratureError(
            f"grid corner (y_d={ys[k]:g}, z_d={zs[k]:g}) is under-resolved by "
            f"{quad.node_count} quadrature nodes (phase rate {rate[k]:.4g} > {limit:.4g}); "
            "shrink the field of view or raise --quad-panels"
        )


def render_map(
    grid: GridSpec,
    cfg: SlabConfig,
    quad: QuadratureSpec = QuadratureSpec(),
    workers: int | None = None,
) -> IntensityMap:
    """|E_total|^2 on the grid; rows (fixed y) are independent and rendered in parallel."""
    _check_map_guard(grid, cfg, quad)
    m = beam_model(cfg, quad)
    kern = m.kernel(grid.z, Component.TOTAL)
    ys = grid.y
    values = np.empty((grid.ny, grid.nz))

    def render_row(i: int) -> None:
        row = np.sum(kern * m.transverse(ys[i]), axis=1)
        values[i] = row.real**2 + row.imag**2

    workers = workers or os.cpu_count() or 1
    if workers == 1:
        for i in range(grid.ny):
            render_row(i)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(render_row, range(grid.ny)))
    return IntensityMap(grid, values)


def line_cut(
    axis: str,
    fixed_value: float,
    span: tuple[float, float],
    n_samples: int,
    cfg: SlabConfig,
    quad: QuadratureSpec = QuadratureSpec(),
) -> LineCut:
    """Uniformly sampled |E_total|^2 along a line of constant y (axis="fixed_y") or z."""
    if axis not in ("fixed_y", "fixed_z"):
        raise DomainError(f"axis must be 'fixed_y' or 'fixed_z', got {axis!r}")
    lo, hi = span
    if not lo < hi:
        raise DomainError(f"cut range must satisfy lo < hi, got ({lo}, {hi})")
    if n_samples < 2:
        raise DomainError(f"need at least 2 samples, got {n_samples}")
    coords = np.linspace(lo, hi, n_samples)
    if axis == "fixed_y":
        y, z = np.full_like(coords, fixed_value), coords
    else:
        y, z = coords, np.full_like(coords, fixed_value)
    check_resolution(y[[0, -1]], z[[0, -1]], cfg, quad, slab=True, inside=True)
    field = beam_model(cfg, quad).points(y, z, Component.TOTAL)
    return LineCut(axis, float(fixed_value), coords, field.real**2 + field.imag**2)


def _half_max_width(x: np.ndarray, v: np.ndarray, i: int) -> float:
    half = 0.5 * v[i]
    left = i
    while left > 0 and v[left] > half:
        left -= 1
    right = i
    while right < len(v) - 1 and v[right] > half:
        right += 1

    def cross(j0, j1):
        if v[j0] == v[j1]:
            return x[j0]
        return x[j0] + (half - v[j0]) * (x[j1] - x[j0]) / (v[j1] - v[j0])

    xl = cross(left, left + 1) if v[left] <= half else x[left]
    xr = cross(right - 1, right) if v[right] <= half else x[right]
    return float(max(xr - xl, x[1] - x[0]))


def detect_peaks(
    cut: LineCut,
    rel_threshold: float = DEFAULT_PEAK_THRESHOLD,
    *,
    smooth: float | None = None,
    min_separation: float | None = None,
) -> list[Peak]:
    """Local maxima above rel_threshold * max, with full width at half their own height.

    Maxima closer than two grid steps (or ``min_separation``) are merged into the
    higher one.  ``smooth`` is an optional Gaussian sigma, in coordinate units,
    applied to the intensity first so that interference fringes between
    overlapping beam tails do not register as separate stripes.
    """
    if len(cut.coords) == 0:
        raise DomainError("cannot detect peaks on an empty cut")
    if not 0 < rel_threshold < 1:
        raise DomainError(f"rel_threshold must lie in (0, 1), got {rel_threshold}")
    x = np.asarray(cut.coords, dtype=float)
    v = np.asarray(cut.intensity, dtype=float)
    if len(x) < 3:
        return []
    step = x[1] - x[0]
    if smooth:
        v = gaussian_filter1d(v, smooth / step, mode="nearest")
    top = v.max()
    if top <= 0:
        return []
    # plateau-aware local maxima: rise on the left, no rise on the right
    rising = np.r_[False, v[1:] > v[:-1]]
    falling = np.r_[v[:-1] > v[1:], False]
    cand = []
    i = 1
    while i < len(v) - 1:
        if rising[i]:
            j = i
            while j < len(v) - 1 and v[j + 1] == v[j]:
                j += 1
            if falling[j]:
                cand.append((i + j) // 2)
            i = j + 1
        else:
            i += 1
    cand = [i for i in cand if v[i] > rel_threshold * top]
    sep = max(2 * step, min_separation or 0.0)
    kept: list[int] = []
    for i in sorted(cand, key=lambda k: -v[k]):
        if all(abs(x[i] - x[k]) >= sep for k in kept):
            kept.append(i)
    kept.sort()
    return [Peak(float(x[i]), float(v[i]), _half_max_width(x, v, i)) for i in kept]


def stripes(cut: LineCut, peaks: list[Peak]) -> list[Stripe]:
    """Integrate the raw intensity over each peak's window.

    A window spans STRIPE_WINDOW_WIDTHS widths either side of the peak and is
    clipped at the midpoint to each neighbouring peak.
    """
    x = np.asarray(cut.coords, dtype=float)
    v = np.asarray(cut.intensity, dtype=float)
    out = []
    for k, p in enumerate(peaks):
        lo = p.position - STRIPE_WINDOW_WIDTHS * p.width
        hi = p.position + STRIPE_WINDOW_WIDTHS * p.width
        if k > 0:
            lo = max(lo, 0.5 * (p.position + peaks[k - 1].position))
        if k < len(peaks) - 1:
            hi = min(hi, 0.5 * (p.position + peaks[k + 1].position))
        sel = (x >= lo) & (x <= hi)
        power = float(np.trapezoid(v[sel], x[sel])) if sel.sum() > 1 else 0.0
        centroid = float(np.trapezoid(v[sel] * x[sel], x[sel]) / power) if power > 0 else p.position
        out.append(Stripe(p, centroid, power, float(lo), float(hi)))
    return out


def beam_spacing(peaks) -> tuple[float, float]:
    """(mean, standard deviation) of consecutive gaps.

    Accepts Peak or Stripe sequences (stripes are located by their centroids) or
    plain positions.
    """
    pos = [p.centroid if isinstance(p, Stripe) else getattr(p, "position", p) for p in peaks]
    if len(pos) < 2:
        raise DomainError(f"beam_spacing needs at least 2 peaks, got {len(pos)}")
    gaps = np.diff(np.sort(np.asarray(pos, dtype=float)))
    return float(gaps.mean()), float(gaps.std())


def predicted_spacing(cfg: SlabConfig) -> float:
    """Ray-optics offset 2 L_d tan(theta_2) between successive beams, sin theta_2 = sin theta_0 / n_ratio."""
    s2 = math.sqrt(1.0 - cfg.alpha0**2) / cfg.n_ratio
    if s2 >= 1:
        raise DomainError("no refracted ray: the central incidence is in tunneling")
    return 2.0 * cfg.L_d * s2 / math.sqrt(1.0 - s2 * s2)


def transmission_scan(
    cfg: SlabConfig, L_values, quad: QuadratureSpec = QuadratureSpec()
) -> list[tuple[float, float, float]]:
    """(L_d, |T(alpha0)|^2, int |T|^2 g^2 / int g^2) for each slab width."""
    Ls = np.asarray(list(L_values), dtype=float)
    if Ls.size == 0:
        raise DomainError("L_values must not be empty")
    if np.any(Ls < 0) or not np.all(np.isfinite(Ls)):
        raise DomainError("L_values must be finite and non-negative")
    rad = cfg.n_ratio**2 - 1 + cfg.alpha0**2
    if rad > 0:
        rate = 2 * cfg.delta * Ls.max() * cfg.alpha0 / math.sqrt(rad)
        limit = max_resolvable_rate(quad, cfg)
        if rate > limit:
            raise QuadratureError(
                f"L_d={Ls.max():g} is under-resolved by {quad.node_count} nodes "
                f"(slab phase rate {rate:.4g} > {limit:.4g}); raise --quad-panels"
            )
    m = beam_model(cfg, quad)
    g2 = m.weights * m.g**2
    norm = g2.sum()
    out = []
    for L in Ls:
        lam = cfg.delta * L
        _, t0 = core._slab_rt(cfg.alpha0, cfg.n_ratio, lam)
        _, t = core._slab_rt(m.alpha, cfg.n_ratio, lam)
        out.append((float(L), float(abs(t0) ** 2), float(np.sum(g2 * np.abs(t) ** 2) / norm)))
    return out
