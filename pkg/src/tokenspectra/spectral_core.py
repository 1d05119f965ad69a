"""DCT-II over token sequences, band-stop masking and the exact inverse.

Sequences are ``(n, d)`` arrays: row ``i`` is token ``i`` (token 0 is the
class token), column ``j`` is channel ``j``.  Spectra are ``(d, n)`` arrays:
row ``j`` holds the ``n`` DCT coefficients of channel ``j``.

The transform is the un-normalized DCT-II::

    f[m] = sum_i x[i] * cos(pi * m * (i + 1/2) / n)

and its inverse::

    x[i] = (f[0] + 2 * sum_{m>=1} f[m] * cos(pi * m * (i + 1/2) / n)) / n

All arithmetic is carried out in float64 regardless of the input dtype.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.fft

from .exceptions import DataValidityError, ShapeError
from .validation import check_sequence

METHODS = ("fft", "direct")


@lru_cache(maxsize=64)
def _cosine_basis(n):
    m = np.arange(n)[:, None]
    i = np.arange(n)[None, :]
    C = np.cos(np.pi * m * (i + 0.5) / n)
    C.setflags(write=False)
    return C


def cosine_basis(n):
    """Return the ``(n, n)`` matrix ``C[m, i] = cos(pi m (i + 1/2) / n)``.

    ``C @ x`` is the DCT-II of a single channel ``x``.  The result is
    cached and read-only.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    return _cosine_basis(int(n))


def _check_spectrum(F):
    F = np.asarray(F, dtype=np.float64)
    if F.ndim != 2:
        raise ShapeError(f"spectrum must be 2-D (n_channels, n_freqs), got shape {F.shape}")
    if min(F.shape) < 1:
        raise DataValidityError(f"spectrum must be non-empty, got shape {F.shape}")
    if not np.all(np.isfinite(F)):
        raise DataValidityError("spectrum contains non-finite values")
    return F


def dct_forward(X, method="fft"):
    """DCT-II of every channel of an ``(n, d)`` sequence.

    Parameters
    ----------
    X : array_like of shape (n, d)
    method : {"fft", "direct"}
        ``"direct"`` evaluates the O(n^2) cosine sum; ``"fft"`` uses
        ``scipy.fft.dct``.  Both give the same un-normalized coefficients.

    Returns
    -------
    F : ndarray of shape (d, n)
    """
    X = check_sequence(X)
    if method == "direct":
        return (cosine_basis(X.shape[0]) @ X).T
    if method == "fft":
        # scipy's unnormalized type-2 DCT carries an extra factor of 2
        return 0.5 * scipy.fft.dct(X.T, type=2, axis=1)
    raise ValueError(f"method must be one of {METHODS}, got {method!r}")


def dct_inverse(F, method="fft"):
    """Invert :func:`dct_forward`; ``F`` is ``(d, n)``, the result ``(n, d)``."""
    F = _check_spectrum(F)
    n = F.shape[1]
    if method == "direct":
        weights = np.full(n, 2.0)
        weights[0] = 1.0
        return (cosine_basis(n).T @ (F.T * weights[:, None])) / n
    if method == "fft":
        return (scipy.fft.dct(F, type=3, axis=1) / n).T
    raise ValueError(f"method must be one of {METHODS}, got {method!r}")


@dataclass(frozen=True)
class BandFilter:
    """Set of frequency indices to zero out in a length-``n`` spectrum.

    The same filter applies to every channel.  ``masked`` is stored sorted
    and deduplicated so equal filters compare and hash equal.
    """

    n: int
    masked: tuple = ()

    def __post_init__(self):
        n = int(self.n)
        if n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        masked = tuple(sorted({int(m) for m in self.masked}))
        if masked and (masked[0] < 0 or masked[-1] > n - 1):
            raise ValueError(f"masked indices must lie in [0, {n - 1}], got {list(masked)}")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "masked", masked)

    @classmethod
    def empty(cls, n):
        return cls(n, ())

    @classmethod
    def full(cls, n):
        return cls(n, range(n))

    @property
    def keep(self):
        """Boolean vector, True where a frequency passes through."""
        keep = np.ones(self.n, dtype=bool)
        keep[list(self.masked)] = False
        return keep

    def mask_matrix(self, d):
        """The ``(d, n)`` 0/1 matrix multiplied elementwise with a spectrum."""
        return np.broadcast_to(self.keep.astype(np.float64), (d, self.n)).copy()


def apply_filter(F, band_filter):
    """Zero the masked columns of spectrum ``F``; returns a new array."""
    F = _check_spectrum(F)
    if F.shape[1] != band_filter.n:
        raise ShapeError(f"filter is for n={band_filter.n}, spectrum has n={F.shape[1]}")
    S = F.copy()
    S[:, list(band_filter.masked)] = 0.0
    return S


def filter_sequence(X, band_filter, method="fft"):
    """Remove the masked frequencies from every channel of ``X``."""
    X = check_sequence(X)
    if X.shape[0] != band_filter.n:
        raise ShapeError(f"filter is for n={band_filter.n}, sequence has n={X.shape[0]}")
    if not band_filter.masked:
        return X.copy()
    return dct_inverse(apply_filter(dct_forward(X, method), band_filter), method)


@lru_cache(maxsize=256)
def _filter_operator(band_filter):
    n = band_filter.n
    C = cosine_basis(n)
    weights = np.where(band_filter.keep, 2.0, 0.0)
    weights[0] = 1.0 if band_filter.keep[0] else 0.0
    A = (C.T * weights) @ C / n
    A.setflags(write=False)
    return A


def filter_operator(band_filter):
    """Return the ``(n, n)`` matrix ``A`` with ``filter_sequence(X) == A @ X``.

    Filtering acts along the token axis only, identically on each channel,
    so the whole pipeline is this one linear map.  Cached and read-only.
    """
    return _filter_operator(band_filter)
