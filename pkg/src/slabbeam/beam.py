"""Localized stationary beams built from a Gaussian spectrum in alpha = cos(theta).

A beam is the superposition over alpha in (0, 1) of the plane-wave solutions
of :mod:`slabbeam.core`, weighted by the envelope ``g``.  In region I, for
example,

    E_inc(y, z) = int g(a) exp(i a delta z_d) exp(i sqrt(1 - a^2) delta y_d) da

and the reflected and transmitted beams carry the extra weights R(a), T(a).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import core
from .core import SlabConfig
from .errors import CriticalRegimeError, DomainError, QuadratureError, SeriesDivergenceError
from .quadrature import QuadratureSpec, check_resolution, max_resolvable_rate, quadrature_rule

#: Largest tunneling share of the spectral weight for which per-order beams are reported.
TUNNELING_WEIGHT_LIMIT = 1e-6

_CHUNK = 256


class Component(enum.Enum):
    INCIDENT = "incident"
    REFLECTED = "reflected"
    TRANSMITTED = "transmitted"
    INSIDE = "inside"
    INSIDE_BACKWARD = "inside_backward"
    TOTAL = "total"


@dataclass(frozen=True)
class GaussianSpectrum:
    alpha0: float
    delta: float

    @classmethod
    def of(cls, cfg: SlabConfig) -> GaussianSpectrum:
        return cls(cfg.alpha0, cfg.delta)

    @property
    def peak(self) -> float:
        return math.sqrt(self.delta) / (2 * math.pi) ** 0.75

    def __call__(self, alpha):
        return envelope(alpha, self)


@dataclass(frozen=True)
class FieldPoint:
    y_d: float
    z_d: float


def envelope(alpha, spec: GaussianSpectrum):
    """g(alpha) = sqrt(delta) (2 pi)^(-3/4) exp(-(alpha - alpha0)^2 delta^2 / 4)."""
    a = np.asarray(alpha, dtype=float)
    g = spec.peak * np.exp(-((a - spec.alpha0) ** 2) * spec.delta**2 / 4.0)
    return g.item() if g.ndim == 0 else g


def _as_component(which) -> Component:
    if isinstance(which, Component):
        return which
    try:
        return Component(str(which).lower())
    except ValueError:
        raise DomainError(f"unknown field component {which!r}") from None


class BeamModel:
    """Spectral data for one (scenario, quadrature) pair, evaluated once.

    Quadrature nodes are fixed and always summed in the same order, so any
    field value is bit-reproducible irrespective of how calls are scheduled.
    """

    def __init__(self, cfg: SlabConfig, quad: QuadratureSpec):
        self.cfg = cfg
        self.quad = quad
        a, w = quadrature_rule(quad, cfg)
        codes = core.regime_mask(a, cfg.n_ratio)
        if np.any(codes == 0):
            raise CriticalRegimeError(
                "a quadrature node sits on the critical angle; enable split_at_critical"
            )
        self.alpha = a
        self.weights = w
        self.beta = np.sqrt(1.0 - a * a)
        self.regime_codes = codes
        self.g = envelope(a, GaussianSpectrum.of(cfg))
        self.q = np.asarray(core.axial_wavenumber(a, cfg.n_ratio))
        self.R, self.T = core._slab_rt(a, cfg.n_ratio, cfg.phase_length)
        _, self.F, _, _, self.G_L = core._solve_arrays(a, cfg.n_ratio, cfg.phase_length)
        self.wg = w * self.g

    # -- spectral integrals -------------------------------------------------
    def energy(self):
        """(int |R|^2 g^2, int |T|^2 g^2, int g^2) over (0, 1)."""
        g2 = self.weights * self.g**2
        return (
            float(np.sum(g2 * np.abs(self.R) ** 2)),
            float(np.sum(g2 * np.abs(self.T) ** 2)),
            float(np.sum(g2)),
        )

    def tunneling_fraction(self) -> float:
        g2 = self.weights * self.g**2
        return float(np.sum(g2[self.regime_codes < 0]) / np.sum(g2))

    # -- z kernels ----------------------------------------------------------
    def _parts(self, comp: Component, dz: bool):
        """(coefficient, axial rate, z origin) per plane-wave part of a component."""
        d = self.cfg.delta
        a, q = self.alpha, self.q
        table = {
            Component.INCIDENT: (self.wg, a, 0.0),
            Component.REFLECTED: (self.wg * self.R, -a, 0.0),
            Component.TRANSMITTED: (self.wg * self.T, a, 0.0),
            Component.INSIDE: (self.wg * self.F, q, 0.0),
            Component.INSIDE_BACKWARD: (self.wg * self.G_L, -q, self.cfg.L_d),
        }
        c, k, z0 = table[comp]
        if dz:
            c = c * (1j * d * k)
        return c, k, z0

    def _component_kernel(self, z, comp: Component, dz: bool):
        c, k, z0 = self._parts(comp, dz)
        return c * np.exp(1j * self.cfg.delta * np.multiply.outer(z - z0, k))

    def kernel(self, z, which=Component.TOTAL, dz: bool = False) -> np.ndarray:
        """(len(z), nodes) array K with E(y, z_j) = sum_k K[j, k] exp(i beta_k delta y)."""
        comp = _as_component(which)
        z = np.atleast_1d(np.asarray(z, dtype=float))
        if comp is not Component.TOTAL:
            return self._component_kernel(z, comp, dz)
        out = np.empty((z.size, self.alpha.size), dtype=complex)
        regions = (
            (z < 0, (Component.INCIDENT, Component.REFLECTED)),
            ((z >= 0) & (z <= self.cfg.L_d), (Component.INSIDE, Component.INSIDE_BACKWARD)),
            (z > self.cfg.L_d, (Component.TRANSMITTED,)),
        )
        for mask, parts in regions:
            if np.any(mask):
                zz = z[mask]
                acc = self._component_kernel(zz, parts[0], dz)
                for p in parts[1:]:
                    acc = acc + self._component_kernel(zz, p, dz)
                out[mask] = acc
        return out

    def transverse(self, y, dy: bool = False) -> np.ndarray:
        y = np.atleast_1d(np.asarray(y, dtype=float))
        t = np.exp(1j * self.cfg.delta * np.multiply.outer(y, self.beta))
        if dy:
            t = t * (1j * self.cfg.delta * self.beta)
        return t

    def points(self, y, z, which=Component.TOTAL, dz: bool = False, dy: bool = False) -> np.ndarray:
        """Field (or a first derivative) at paired points, evaluated in fixed-size chunks."""
        y, z = np.broadcast_arrays(np.asarray(y, dtype=float), np.asarray(z, dtype=float))
        shape = y.shape
        y, z = y.ravel(), z.ravel()
        out = np.empty(y.size, dtype=complex)
        for s in range(0, y.size, _CHUNK):
            sl = slice(s, s + _CHUNK)
            out[sl] = np.sum(self.kernel(z[sl], which, dz) * self.transverse(y[sl], dy), axis=1)
        return out.reshape(shape)

    def with_weights(self, y, z, spectral, sign: int = 1) -> np.ndarray:
        """Region-I style integral with caller-supplied spectral weights W(alpha)."""
        y, z = np.broadcast_arrays(np.asarray(y, dtype=float), np.asarray(z, dtype=float))
        shape = y.shape
        c = self.wg * spectral
        zk = np.exp(1j * sign * self.cfg.delta * np.multiply.outer(z.ravel(), self.alpha))
        return np.sum(c * zk * self.transverse(y.ravel()), axis=1).reshape(shape)


@lru_cache(maxsize=16)
def beam_model(cfg: SlabConfig, quad: QuadratureSpec) -> BeamModel:
    return BeamModel(cfg, quad)


def _guard(y, z, comp: Component, cfg: SlabConfig, quad: QuadratureSpec) -> None:
    slab = comp is not Component.INCIDENT
    inside = comp in (Component.INSIDE, Component.INSIDE_BACKWARD, Component.TOTAL)
    check_resolution(y, z, cfg, quad, slab=slab, inside=inside)


def synthesize_field(p, which, cfg: SlabConfig, quad: QuadratureSpec = QuadratureSpec()):
    """Stationary field E_1 of one beam component at a point (or arrays of y_d, z_d).

    ``p`` is a FieldPoint or a (y_d, z_d) pair; array coordinates broadcast.
    """
    y, z = (p.y_d, p.z_d) if isinstance(p, FieldPoint) else p
    comp = _as_component(which)
    _guard(y, z, comp, cfg, quad)
    out = beam_model(cfg, quad).points(y, z, comp)
    return complex(out) if out.ndim == 0 else out


def magnetic_field(p, cfg: SlabConfig, quad: QuadratureSpec = QuadratureSpec()):
    """(H2, H3) of the total field, in units of n_I (mu = 1).

    H2 = -(i/delta) dE/dz_d and H3 = (i/delta) dE/dy_d, differentiated under the
    integral sign.
    """
    y, z = (p.y_d, p.z_d) if isinstance(p, FieldPoint) else p
    _guard(y, z, Component.TOTAL, cfg, quad)
    m = beam_model(cfg, quad)
    d = cfg.delta
    h2 = -1j / d * m.points(y, z, Component.TOTAL, dz=True)
    h3 = 1j / d * m.points(y, z, Component.TOTAL, dy=True)
    if h2.ndim == 0:
        return complex(h2), complex(h3)
    return h2, h3


def per_order_field(
    p,
    n: int,
    kind: str,
    cfg: SlabConfig,
    quad: QuadratureSpec = QuadratureSpec(),
    n_max: int = 100,
):
    """Field of the n-th reflected or transmitted multiple-reflection beam."""
    if kind not in ("reflected", "transmitted"):
        raise DomainError(f"kind must be 'reflected' or 'transmitted', got {kind!r}")
    if not 0 <= n <= n_max:
        raise DomainError(f"order must lie in [0, {n_max}], got {n}")
    y, z = (p.y_d, p.z_d) if isinstance(p, FieldPoint) else p
    m = beam_model(cfg, quad)
    frac = m.tunneling_fraction()
    if frac > TUNNELING_WEIGHT_LIMIT:
        raise SeriesDivergenceError(
            f"{frac:.3g} of the spectral weight is in tunneling, where the "
            "multiple-reflection series diverges and single orders are not physical"
        )
    # order n picks up n round trips (plus one traversal when transmitted)
    trips = n if kind == "reflected" else n + 0.5
    check_resolution(y, z, cfg, quad, slab=False)
    _check_order_rate(trips, cfg, quad)
    Rn, Tn = core._order_amplitudes(m.alpha, cfg, n)
    spectral, sign = (Rn, -1) if kind == "reflected" else (Tn, 1)
    out = m.with_weights(y, z, spectral, sign)
    return complex(out) if out.ndim == 0 else out


def _check_order_rate(trips: float, cfg: SlabConfig, quad: QuadratureSpec) -> None:
    rad = cfg.n_ratio**2 - 1 + cfg.alpha0**2
    if rad <= 0 or trips == 0 or cfg.n_ratio == 1.0:
        return
    rate = 2 * trips * cfg.phase_length * cfg.alpha0 / math.sqrt(rad)
    limit = max_resolvable_rate(quad, cfg)
    if rate > limit:
        raise QuadratureError(
            f"{quad.node_count} nodes cannot resolve the slab phase of this order "
            f"(rate {rate:.4g} > {limit:.4g} rad per unit alpha); raise --quad-panels"
        )


def spectral_energy(cfg: SlabConfig, quad: QuadratureSpec = QuadratureSpec()):
    """(int |R|^2 g^2, int |T|^2 g^2, int g^2) with alpha over (0, 1)."""
    return beam_model(cfg, quad).energy()
