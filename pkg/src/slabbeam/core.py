"""Plane-wave scattering of a TE wave by a dielectric slab.

Geometry: medium I for z < 0, the slab (index ratio ``n_ratio``) for
0 < z < L, medium I again for z > L.  Every quantity is dimensionless:
``alpha`` is the cosine of the incidence angle, lengths are measured in
units of the beam waist ``d`` and phases enter only through products with
``delta = n_I k d``.  Inside the slab the axial wavenumber (in units of
``n_I k``) is ``q = sqrt(n_ratio**2 - 1 + alpha**2)``.

All functions accept scalars or numpy arrays for ``alpha`` and broadcast.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import CriticalRegimeError, DomainError, SeriesDivergenceError, RegimeError

#: Half-width of the band around ``n_ratio**2 - 1 + alpha**2 == 0`` classified as critical.
CRITICAL_TOL = 1e-12


class Regime(enum.Enum):
    DIFFUSION = "diffusion"
    TUNNELING = "tunneling"
    CRITICAL = "critical"


@dataclass(frozen=True)
class SlabConfig:
    """One physical scenario.

    n_ratio: n_II / n_I.  alpha0: cosine of the central incidence angle.
    delta: n_I k d.  L_d: slab width in units of d.
    """

    n_ratio: float
    alpha0: float
    delta: float
    L_d: float = 0.0

    def __post_init__(self):
        if not (self.n_ratio > 0 and math.isfinite(self.n_ratio)):
            raise DomainError(f"n_ratio must be positive, got {self.n_ratio}")
        if not 0 < self.alpha0 < 1:
            raise DomainError(f"alpha0 must lie in (0, 1), got {self.alpha0}")
        if not (self.delta > 0 and math.isfinite(self.delta)):
            raise DomainError(f"delta must be positive, got {self.delta}")
        if not (self.L_d >= 0 and math.isfinite(self.L_d)):
            raise DomainError(f"L_d must be non-negative, got {self.L_d}")

    @classmethod
    def from_angle(cls, n_ratio: float, theta0: float, delta: float, L_d: float = 0.0) -> SlabConfig:
        return cls(n_ratio=n_ratio, alpha0=math.cos(theta0), delta=delta, L_d=L_d)

    @property
    def theta0(self) -> float:
        return math.acos(self.alpha0)

    @property
    def phase_length(self) -> float:
        """delta * L_d, the slab width in units of 1/(n_I k)."""
        return self.delta * self.L_d

    @property
    def critical_alpha(self) -> float | None:
        """cos of the critical angle, or None when no critical angle exists."""
        if self.n_ratio >= 1:
            return None
        return math.sqrt(1.0 - self.n_ratio**2)


@dataclass(frozen=True)
class InterfaceCoefficients:
    r0: complex | np.ndarray
    t0: complex | np.ndarray
    r_back: complex | np.ndarray
    t_back: complex | np.ndarray


@dataclass(frozen=True)
class SlabSolution:
    """Amplitudes of the field for one spectral component.

    U(z) = exp(i alpha k z) + R exp(-i alpha k z)      z < 0
         = F exp(i q k z) + G exp(-i q k z)            0 < z < L
         = T exp(i alpha k z)                          z > L
    with k standing for n_I k.  In the critical regime q = 0 and the
    slab solution is F + G * (n_I k z).
    """

    R: complex
    F: complex
    G: complex
    T: complex
    regime: Regime


@dataclass(frozen=True)
class OrderTerm:
    n: int
    Rn: complex
    Tn: complex


def _check_alpha(alpha) -> np.ndarray:
    a = np.asarray(alpha, dtype=float)
    if not np.all((a > 0) & (a <= 1)):
        raise DomainError(f"alpha must lie in (0, 1], got {alpha}")
    return a


def _radicand(alpha, n_ratio: float):
    return n_ratio**2 - 1.0 + alpha**2


def _scalar(x):
    return x.item() if isinstance(x, np.ndarray) and x.ndim == 0 else x


def regime_mask(alpha, n_ratio: float, tol: float = CRITICAL_TOL):
    """Integer codes per element: 1 diffusion, -1 tunneling, 0 critical."""
    rad = _radicand(np.asarray(alpha, dtype=float), n_ratio)
    return np.where(np.abs(rad) <= tol, 0, np.sign(rad)).astype(int)


def classify_regime(alpha: float, n_ratio: float, tol: float = CRITICAL_TOL) -> Regime:
    _check_alpha(alpha)
    if not n_ratio > 0:
        raise DomainError(f"n_ratio must be positive, got {n_ratio}")
    rad = _radicand(float(alpha), n_ratio)
    if abs(rad) <= tol:
        return Regime.CRITICAL
    return Regime.DIFFUSION if rad > 0 else Regime.TUNNELING


def axial_wavenumber(alpha, n_ratio: float):
    """q(alpha); purely imaginary with positive imaginary part in tunneling.

    The +i branch makes exp(i q delta z) decay into the slab.
    """
    a = _check_alpha(alpha)
    rad = _radicand(a, n_ratio)
    root = np.sqrt(np.abs(rad))
    return _scalar(np.where(rad >= 0, root + 0j, 1j * root))


def _require_not_critical(alpha, n_ratio: float) -> None:
    if np.any(regime_mask(alpha, n_ratio) == 0):
        raise CriticalRegimeError(
            "incidence at the critical angle: r0 -> 1 and t_back -> 0, "
            "use solve_boundary_value instead"
        )


def interface_coefficients(alpha, n_ratio: float) -> InterfaceCoefficients:
    a = _check_alpha(alpha)
    _require_not_critical(a, n_ratio)
    q = axial_wavenumber(a, n_ratio)
    r0 = (a - q) / (a + q)
    t0 = 2 * a / (a + q)
    return InterfaceCoefficients(
        r0=_scalar(r0), t0=_scalar(t0), r_back=_scalar(-r0), t_back=_scalar(q * t0 / a)
    )


def far_face_coefficients(alpha, cfg: SlabConfig):
    """(r_L, t_L): the z = L reflection and transmission with slab phases folded in.

    The source writes n_1 in these phases; it is the same index as n_I.
    """
    a = _check_alpha(alpha)
    c = interface_coefficients(a, cfg.n_ratio)
    q = axial_wavenumber(a, cfg.n_ratio)
    lam = cfg.phase_length
    r_L = c.r_back * np.exp(2j * lam * q)
    t_L = c.t_back * np.exp(1j * lam * (q - a))
    return _scalar(r_L), _scalar(t_L)


def _slab_rt(alpha, n_ratio: float, lam):
    """Closed-form R, T broadcast over alpha and phase length lam = delta * L_d.

    Equal to R = r0 + t0 r_L t_back / (1 - r_back r_L), T = t0 t_L / (1 - r_back r_L)
    after clearing the common (alpha + q)**2 factor.  1 - exp(2 i q lam) goes through
    expm1 so neither the L_d -> 0 limit nor near-critical tunneling loses digits.
    """
    a = np.asarray(alpha, dtype=float)
    rad = _radicand(a, n_ratio)
    root = np.sqrt(np.abs(rad))
    q = np.where(rad >= 0, root + 0j, 1j * root)
    lam = np.asarray(lam, dtype=float)
    one_minus_e = -np.expm1(2j * lam * q)
    e = 1.0 - one_minus_e
    denom = (a * a + q * q) * one_minus_e + 2 * a * q * (1.0 + e)
    R = (1.0 - n_ratio**2) * one_minus_e / denom
    T = 4 * a * q * np.exp(1j * lam * (q - a)) / denom
    return R, T


def slab_coefficients(alpha, cfg: SlabConfig):
    """Wave-limit (fully coherent) reflection and transmission amplitudes (R, T).

    In tunneling these are the analytic continuation of the summed series.
    """
    a = _check_alpha(alpha)
    _require_not_critical(a, cfg.n_ratio)
    R, T = _slab_rt(a, cfg.n_ratio, cfg.phase_length)
    return _scalar(R), _scalar(T)


def _require_diffusion(alpha, n_ratio: float, what: str) -> None:
    codes = regime_mask(alpha, n_ratio)
    if np.any(codes == 0):
        raise CriticalRegimeError(f"{what}: incidence at the critical angle")
    if np.any(codes < 0):
        raise SeriesDivergenceError(
            f"{what}: the multiple-reflection series diverges in tunneling "
            "(|r0| = 1); only the closed-form R, T survive, as an analytic "
            "continuation of the diffusion result (use slab_coefficients)"
        )


def _order_amplitudes(alpha, cfg: SlabConfig, n: int):
    """(R_n, T_n) arrays with no regime check; callers decide whether they are physical."""
    a = np.asarray(alpha, dtype=float)
    q = np.asarray(axial_wavenumber(a, cfg.n_ratio))
    r0 = (a - q) / (a + q)
    t0 = 2 * a / (a + q)
    t_back = q * t0 / a
    lam = cfg.phase_length
    r_L = -r0 * np.exp(2j * lam * q)
    t_L = t_back * np.exp(1j * lam * (q - a))
    ratio = -r0 * r_L
    Tn = t0 * ratio**n * t_L
    Rn = r0 if n == 0 else t0 * r_L * ratio ** (n - 1) * t_back
    return Rn, Tn


def order_terms(alpha: float, cfg: SlabConfig, n_max: int) -> list[OrderTerm]:
    """Terms 0..n_max of the multiple-reflection series for R and T."""
    if n_max < 0:
        raise DomainError(f"n_max must be >= 0, got {n_max}")
    a = float(_check_alpha(alpha))
    _require_diffusion(a, cfg.n_ratio, "order_terms")
    c = interface_coefficients(a, cfg.n_ratio)
    r_L, t_L = far_face_coefficients(a, cfg)
    ratio = c.r_back * r_L
    terms = [OrderTerm(0, complex(c.r0), complex(c.t0 * t_L))]
    amp_r = c.t0 * r_L * c.t_back
    amp_t = c.t0 * t_L
    for n in range(1, n_max + 1):
        amp_t = amp_t * ratio
        terms.append(OrderTerm(n, complex(amp_r), complex(amp_t)))
        amp_r = amp_r * ratio
    return terms


def particle_limit_sums(alpha: float, cfg: SlabConfig | float) -> tuple[float, float]:
    """Incoherent sums (sum |R_n|^2, sum |T_n|^2); independent of the slab width.

    ``cfg`` may be a SlabConfig or a bare n_ratio.
    """
    n_ratio = cfg.n_ratio if isinstance(cfg, SlabConfig) else float(cfg)
    a = float(_check_alpha(alpha))
    _require_diffusion(a, n_ratio, "particle_limit_sums")
    c = interface_coefficients(a, n_ratio)
    r0, tt = c.r0.real, (c.t0 * c.t_back).real
    denom = 1.0 - r0**4
    return r0**2 + (tt * r0) ** 2 / denom, tt**2 / denom


def resonance_lengths(alpha: float, cfg: SlabConfig, n_max: int) -> list[float]:
    """First n_max phase lengths delta*L_d with q * delta * L_d = n pi (|T| = 1)."""
    if n_max < 1:
        raise DomainError(f"n_max must be >= 1, got {n_max}")
    a = float(_check_alpha(alpha))
    codes = regime_mask(a, cfg.n_ratio)
    if codes < 0:
        raise RegimeError("resonance_lengths: no transmission resonance exists in tunneling")
    if codes == 0:
        raise CriticalRegimeError("resonance_lengths: incidence at the critical angle")
    q = float(np.real(axial_wavenumber(a, cfg.n_ratio)))
    return [n * math.pi / q for n in range(1, n_max + 1)]


def _system(alpha, n_ratio: float, lam: float):
    """Continuity of U and U' at z = 0 and z = L as a batched 4x4 system.

    Unknowns (R, F, G_L, T_L) with G_L = G exp(-i q lam) and T_L = T exp(i alpha lam):
    referencing the backward wave and the transmitted wave at z = L keeps every
    matrix entry bounded by 1 in modulus, even deep in tunneling.
    """
    a = np.atleast_1d(np.asarray(alpha, dtype=float))
    rad = _radicand(a, n_ratio)
    crit = np.abs(rad) <= CRITICAL_TOL
    root = np.sqrt(np.abs(rad))
    q = np.where(rad >= 0, root + 0j, 1j * root)
    p = np.exp(1j * q * lam)

    m = np.zeros(a.shape + (4, 4), dtype=complex)
    rhs = np.zeros(a.shape + (4,), dtype=complex)
    one = np.ones_like(a)
    # U continuous at 0
    m[..., 0, 0], m[..., 0, 1], m[..., 0, 2] = -one, one, p
    rhs[..., 0] = 1
    # U' continuous at 0
    m[..., 1, 0], m[..., 1, 1], m[..., 1, 2] = a, q, -q * p
    rhs[..., 1] = a
    # U continuous at L
    m[..., 2, 1], m[..., 2, 2], m[..., 2, 3] = p, one, -one
    # U' continuous at L
    m[..., 3, 1], m[..., 3, 2], m[..., 3, 3] = q * p, -q, -a

    if np.any(crit):
        # q = 0: slab solution F + G * (delta z); G is per unit delta*z
        c = crit
        m[c] = 0
        rhs[c] = 0
        m[c, 0, 0], m[c, 0, 1] = -1, 1
        rhs[c, 0] = 1
        m[c, 1, 0], m[c, 1, 2] = 1j * a[c], 1
        rhs[c, 1] = 1j * a[c]
        m[c, 2, 1], m[c, 2, 2], m[c, 2, 3] = 1, lam, -1
        m[c, 3, 2], m[c, 3, 3] = 1, -1j * a[c]

    try:
        x = np.linalg.solve(m, rhs[..., None])[..., 0]
    except np.linalg.LinAlgError as exc:
        raise RegimeError(f"boundary-value system is singular: {exc}") from exc
    return a, q, crit, x


def _solve_arrays(alpha, n_ratio: float, lam: float):
    """R, F, G, T (plane-wave ansatz phase conventions) and G_L for arrays of alpha."""
    a, q, crit, x = _system(alpha, n_ratio, lam)
    R, F, G_L, T_L = x[..., 0], x[..., 1], x[..., 2], x[..., 3]
    G = np.where(crit, G_L, G_L * np.exp(1j * q * lam))
    T = T_L * np.exp(-1j * a * lam)
    return R, F, G, T, G_L


def solve_boundary_value(alpha: float, cfg: SlabConfig) -> SlabSolution:
    """Direct linear solve of the matching conditions; independent of the series."""
    a = float(_check_alpha(alpha))
    R, F, G, T, _ = _solve_arrays(a, cfg.n_ratio, cfg.phase_length)
    return SlabSolution(
        R=complex(R[0]),
        F=complex(F[0]),
        G=complex(G[0]),
        T=complex(T[0]),
        regime=classify_regime(a, cfg.n_ratio),
    )
