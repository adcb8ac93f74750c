"""Composite Gauss-Legendre rules over the angular spectrum alpha in (0, 1)."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .core import SlabConfig
from .errors import DomainError, QuadratureError

#: The envelope is dropped where it falls below this fraction of its peak.
#: exp(-36.84) ~ 1e-16: what is discarded is below double-precision resolution.
ENVELOPE_FLOOR_EXPONENT = 36.84

#: Minimum number of quadrature nodes per oscillation of the fastest phase factor.
NODES_PER_OSCILLATION = 8


@dataclass(frozen=True)
class QuadratureSpec:
    panels: int = 64
    order: int = 16
    split_at_critical: bool = True
    scheme: str = "gauss-legendre"

    def __post_init__(self):
        if self.scheme != "gauss-legendre":
            raise DomainError(f"unknown quadrature scheme {self.scheme!r}")
        if self.panels < 1 or self.order < 1:
            raise DomainError("panels and order must be positive")
        if self.node_count < 16:
            raise DomainError(f"need at least 16 quadrature nodes, got {self.node_count}")

    @property
    def node_count(self) -> int:
        return self.panels * self.order


@lru_cache(maxsize=32)
def _leggauss(order: int):
    return np.polynomial.legendre.leggauss(order)


def spectral_support(cfg: SlabConfig) -> tuple[float, float]:
    """Sub-interval of (0, 1) on which the Gaussian envelope is numerically non-zero."""
    half = 2.0 * math.sqrt(ENVELOPE_FLOOR_EXPONENT) / cfg.delta
    return max(0.0, cfg.alpha0 - half), min(1.0, cfg.alpha0 + half)


def panel_edges(quad: QuadratureSpec, cfg: SlabConfig) -> np.ndarray:
    a, b = spectral_support(cfg)
    ac = cfg.critical_alpha
    if quad.split_at_critical and ac is not None and a < ac < b and quad.panels >= 2:
        # keep the total panel count; share it out by length, at least one each side
        left = min(max(1, round(quad.panels * (ac - a) / (b - a))), quad.panels - 1)
        return np.concatenate(
            [np.linspace(a, ac, left + 1), np.linspace(ac, b, quad.panels - left + 1)[1:]]
        )
    return np.linspace(a, b, quad.panels + 1)


@lru_cache(maxsize=64)
def quadrature_rule(quad: QuadratureSpec, cfg: SlabConfig) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights, ordered by increasing alpha."""
    x, w = _leggauss(quad.order)
    edges = panel_edges(quad, cfg)
    lo, hi = edges[:-1, None], edges[1:, None]
    half = 0.5 * (hi - lo)
    nodes = (lo + half * (1.0 + x)).ravel()
    weights = (half * w).ravel()
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def phase_rate(y_d, z_d, cfg: SlabConfig, *, slab: bool, inside: bool = False):
    """Fastest alpha-rate (radians per unit alpha) among the integrand's phase factors.

    Factors: the axial phase (rate delta*|z_d|, or delta*|z_d|*alpha/q inside the
    slab), the transverse phase (delta*|y_d|*cot theta), and one slab round trip
    (2*delta*L_d*alpha/q).  Rates are taken at the envelope centre.
    """
    a0 = cfg.alpha0
    s0 = math.sqrt(1.0 - a0 * a0)
    rad = cfg.n_ratio**2 - 1.0 + a0 * a0
    q0 = math.sqrt(abs(rad))
    axial = cfg.delta * np.abs(z_d)
    if inside and rad > 0 and q0 > 0:
        axial = axial * max(1.0, a0 / q0)
    rate = np.maximum(axial, cfg.delta * np.abs(y_d) * a0 / s0)
    if slab and cfg.n_ratio != 1.0 and rad > 0 and q0 > 0:
        rate = np.maximum(rate, 2.0 * cfg.phase_length * a0 / q0)
    return rate


def max_resolvable_rate(quad: QuadratureSpec, cfg: SlabConfig) -> float:
    a, b = spectral_support(cfg)
    spacing = (b - a) / quad.node_count
    return 2.0 * math.pi / (NODES_PER_OSCILLATION * spacing)


def check_resolution(y_d, z_d, cfg: SlabConfig, quad: QuadratureSpec, *, slab: bool, inside: bool = False):
    """Raise QuadratureError if any requested point is under-resolved."""
    rate = np.atleast_1d(phase_rate(y_d, z_d, cfg, slab=slab, inside=inside))
    limit = max_resolvable_rate(quad, cfg)
    if np.any(rate > limit):
        k = int(np.argmax(rate))
        y = np.broadcast_to(np.asarray(y_d, dtype=float), rate.shape)[k]
        z = np.broadcast_to(np.asarray(z_d, dtype=float), rate.shape)[k]
        raise QuadratureError(
            f"{quad.node_count} nodes cannot resolve the integrand at (y_d={y:g}, z_d={z:g}): "
            f"phase rate {rate[k]:.4g} rad per unit alpha exceeds {limit:.4g} "
            f"({NODES_PER_OSCILLATION} nodes per oscillation); raise --quad-panels"
        )
