"""Input validation helpers shared by the functional API and the estimators."""

import numpy as np

from .exceptions import DataValidityError, ShapeError

# below this norm a vector is treated as zero for cosine purposes
NORM_EPS = 1e-12


def check_sequence(X, name="sequence"):
    """Return ``X`` as a float64 ``(n_tokens, n_channels)`` array.

    Raises :class:`ShapeError` for anything that is not a non-empty 2-D
    array and :class:`DataValidityError` for NaN/Inf entries.
    """
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2:
        raise ShapeError(f"{name} must be 2-D (n_tokens, n_channels), got shape {X.shape}")
    if X.shape[0] < 1 or X.shape[1] < 1:
        raise DataValidityError(f"{name} must have n >= 1 and d >= 1, got shape {X.shape}")
    if not np.all(np.isfinite(X)):
        raise DataValidityError(f"{name} contains non-finite values")
    return X


def check_sequence_batch(X, name="sequences"):
    """Accept one sequence ``(n, d)`` or a stack ``(k, n, d)``; return a 3-D float64 array."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 2:
        X = X[np.newaxis]
    if X.ndim != 3:
        raise ShapeError(f"{name} must be 2-D or 3-D, got shape {X.shape}")
    if min(X.shape) < 1:
        raise DataValidityError(f"{name} must be non-empty, got shape {X.shape}")
    if not np.all(np.isfinite(X)):
        raise DataValidityError(f"{name} contains non-finite values")
    return X


def check_embedding(v, name="embedding", dim=None):
    v = np.asarray(v, dtype=np.float64)
    if v.ndim != 1 or v.shape[0] < 1:
        raise ShapeError(f"{name} must be a non-empty 1-D vector, got shape {v.shape}")
    if dim is not None and v.shape[0] != dim:
        raise ShapeError(f"{name} has dim {v.shape[0]}, expected {dim}")
    if not np.all(np.isfinite(v)):
        raise DataValidityError(f"{name} contains non-finite values")
    return v


def check_projection(P, in_dim=None):
    P = np.asarray(P, dtype=np.float64)
    if P.ndim != 2 or min(P.shape) < 1:
        raise ShapeError(f"projection must be a non-empty 2-D matrix, got shape {P.shape}")
    if in_dim is not None and P.shape[1] != in_dim:
        raise ShapeError(f"projection in_dim {P.shape[1]} does not match embedding dim {in_dim}")
    if not np.all(np.isfinite(P)):
        raise DataValidityError("projection contains non-finite values")
    return P
