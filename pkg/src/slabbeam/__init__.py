"""Localized TE beams scattered by a dielectric slab: plane-wave coefficients,
multiple-reflection series, Gaussian angular-spectrum beams and field maps."""

from .beam import (
    BeamModel,
    Component,
    FieldPoint,
    GaussianSpectrum,
    envelope,
    magnetic_field,
    per_order_field,
    spectral_energy,
    synthesize_field,
)
from .core import (
    InterfaceCoefficients,
    OrderTerm,
    Regime,
    SlabConfig,
    SlabSolution,
    axial_wavenumber,
    classify_regime,
    far_face_coefficients,
    interface_coefficients,
    order_terms,
    particle_limit_sums,
    resonance_lengths,
    slab_coefficients,
    solve_boundary_value,
)
from .errors import (
    CriticalRegimeError,
    DomainError,
    QuadratureError,
    RegimeError,
    SeriesDivergenceError,
    SlabError,
)
from .fieldmap import (
    GridSpec,
    IntensityMap,
    LineCut,
    Peak,
    Stripe,
    beam_spacing,
    detect_peaks,
    line_cut,
    predicted_spacing,
    render_map,
    stripes,
    transmission_scan,
)
from .quadrature import QuadratureSpec

__version__ = "0.1.0"
