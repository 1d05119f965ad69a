"""Band-stop filtering of token-embedding sequences in the DCT domain."""

from .bands import (
    COMBINATIONS,
    Band,
    BandCombination,
    BandScheme,
    band_filter_from_spec,
    default_scheme,
    parse_band_spec,
    period_of,
    resolve_filter,
)
from .estimators import SpectralBandStop
from .similarity import (
    DirectionalLossInputs,
    PatchLossConfig,
    PatchLossResult,
    cosine_similarity,
    directional_loss,
    directional_loss_gradient,
    filtered_class_token,
    frequency_sweep,
    patch_directional_loss,
    projected_similarity,
)
from .spectral_core import (
    BandFilter,
    apply_filter,
    dct_forward,
    dct_inverse,
    filter_operator,
    filter_sequence,
)

__version__ = "0.1.0"

__all__ = [
    "COMBINATIONS",
    "Band",
    "BandCombination",
    "BandFilter",
    "BandScheme",
    "DirectionalLossInputs",
    "PatchLossConfig",
    "PatchLossResult",
    "SpectralBandStop",
    "apply_filter",
    "band_filter_from_spec",
    "cosine_similarity",
    "dct_forward",
    "dct_inverse",
    "default_scheme",
    "directional_loss",
    "directional_loss_gradient",
    "filter_operator",
    "filter_sequence",
    "filtered_class_token",
    "frequency_sweep",
    "parse_band_spec",
    "patch_directional_loss",
    "period_of",
    "projected_similarity",
    "resolve_filter",
]
