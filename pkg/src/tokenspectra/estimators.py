"""scikit-learn compatible wrapper around the band-stop filter."""

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .bands import band_filter_from_spec
from .exceptions import ShapeError
from .spectral_core import BandFilter, filter_operator
from .validation import check_sequence_batch


class SpectralBandStop(TransformerMixin, BaseEstimator):
    """Remove a set of DCT frequencies from token-embedding sequences.

    Parameters
    ----------
    bands : str or BandFilter, default="c2"
        Band spec (``"c1"``, ``"b1,b4"``, ``"0-1,8-15"``, ``""``) resolved
        against the sequence length seen in ``fit``, or a ready filter.
    class_token_only : bool, default=False
        If True, ``transform`` returns only the filtered class token of each
        sequence, shape ``(k, d)``, instead of the full ``(k, n, d)`` stack.

    Attributes
    ----------
    band_filter_ : BandFilter
    n_tokens_ : int
    n_channels_ : int

    Notes
    -----
    ``X`` is either one sequence ``(n, d)`` or a stack ``(k, n, d)``.
    Fitting only records shapes and resolves the filter; nothing is learned.
    """

    def __init__(self, bands="c2", class_token_only=False):
        self.bands = bands
        self.class_token_only = class_token_only

    def fit(self, X, y=None):
        X = check_sequence_batch(X, "X")
        _, n, d = X.shape
        if isinstance(self.bands, BandFilter):
            if self.bands.n != n:
                raise ShapeError(f"filter is for n={self.bands.n}, X has n={n}")
            self.band_filter_ = self.bands
        else:
            self.band_filter_ = band_filter_from_spec(self.bands, n)
        self.n_tokens_ = n
        self.n_channels_ = d
        return self

    def transform(self, X):
        check_is_fitted(self, "band_filter_")
        single = np.ndim(X) == 2
        X = check_sequence_batch(X, "X")
        if X.shape[1:] != (self.n_tokens_, self.n_channels_):
            raise ShapeError(
                f"X has sequences of shape {X.shape[1:]}, fitted on {(self.n_tokens_, self.n_channels_)}"
            )
        A = filter_operator(self.band_filter_)
        if self.class_token_only:
            out = np.einsum("i,kid->kd", A[0], X)
        else:
            out = np.einsum("ij,kjd->kid", A, X)
        return out[0] if single else out
