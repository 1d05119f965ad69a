"""Filtered class tokens and the similarity / loss functions built on them."""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .bands import COMBINATIONS, default_scheme, resolve_filter
from .exceptions import (
    DegenerateDirectionError,
    DegenerateVectorError,
    EmptyInputError,
    ShapeError,
    UnsupportedLengthError,
)
from .spectral_core import BandFilter, filter_operator, filter_sequence
from .validation import NORM_EPS, check_embedding, check_projection, check_sequence

DEFAULT_TAU = 0.7


def filtered_class_token(X, band_filter, method="fft"):
    """Token 0 of the band-stopped sequence, i.e. the filtered image embedding."""
    X = check_sequence(X)
    if X.shape[0] != band_filter.n:
        raise ShapeError(f"filter is for n={band_filter.n}, sequence has n={X.shape[0]}")
    return filter_sequence(X, band_filter, method)[0]


def class_token_weights(band_filter):
    """Weights ``w`` such that the filtered class token equals ``w @ X``."""
    return np.array(filter_operator(band_filter)[0])


def cosine_similarity(a, b):
    a = check_embedding(a, "a")
    b = check_embedding(b, "b", dim=a.shape[0])
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    if na <= NORM_EPS or nb <= NORM_EPS:
        raise DegenerateVectorError("cosine similarity of a zero-norm vector is undefined")
    return float(np.clip(a @ b / (na * nb), -1.0, 1.0))


@dataclass(frozen=True)
class DirectionalLossInputs:
    stylized_image_emb: np.ndarray
    content_image_emb: np.ndarray
    style_text_emb: np.ndarray
    source_text_emb: np.ndarray

    def directions(self):
        """Return ``(delta_image, delta_text)`` after validating shapes."""
        stylized = check_embedding(self.stylized_image_emb, "stylized_image_emb")
        dim = stylized.shape[0]
        content = check_embedding(self.content_image_emb, "content_image_emb", dim)
        style = check_embedding(self.style_text_emb, "style_text_emb", dim)
        source = check_embedding(self.source_text_emb, "source_text_emb", dim)
        delta_image = stylized - content
        delta_text = style - source
        if np.linalg.norm(delta_image) <= NORM_EPS:
            raise DegenerateDirectionError("stylized and content image embeddings coincide")
        if np.linalg.norm(delta_text) <= NORM_EPS:
            raise DegenerateDirectionError("style and source text embeddings coincide")
        return delta_image, delta_text


def directional_loss(inputs):
    """``1 - cos(stylized - content, style_text - source_text)``, in [0, 2]."""
    delta_image, delta_text = inputs.directions()
    return 1.0 - cosine_similarity(delta_image, delta_text)


def directional_loss_gradient(inputs, stylized_seq, band_filter):
    """Gradient of the directional loss w.r.t. the stylized token matrix.

    ``inputs.stylized_image_emb`` is ignored and recomputed as the filtered
    class token of ``stylized_seq`` so the two cannot drift apart.  The
    filtered class token is ``w @ X`` for a fixed weight vector ``w``, hence
    the gradient is the outer product of ``w`` with the cosine gradient.

    Returns an ``(n, d)`` array.
    """
    X = check_sequence(stylized_seq, "stylized_seq")
    if X.shape[0] != band_filter.n:
        raise ShapeError(f"filter is for n={band_filter.n}, sequence has n={X.shape[0]}")
    w = class_token_weights(band_filter)
    full = DirectionalLossInputs(
        w @ X, inputs.content_image_emb, inputs.style_text_emb, inputs.source_text_emb
    )
    delta_image, delta_text = full.directions()
    norm_i = np.linalg.norm(delta_image)
    unit_i = delta_image / norm_i
    unit_t = delta_text / np.linalg.norm(delta_text)
    cos = unit_i @ unit_t
    # d(1 - cos)/d(delta_image)
    grad_emb = -(unit_t - cos * unit_i) / norm_i
    return np.outer(w, grad_emb)


@dataclass(frozen=True)
class PatchLossConfig:
    band_filter: BandFilter
    tau: float = DEFAULT_TAU

    def __post_init__(self):
        if not np.isfinite(self.tau):
            raise ValueError(f"tau must be finite, got {self.tau}")


@dataclass(frozen=True)
class PatchLossResult:
    total: float
    per_patch: tuple   # NaN for degenerate patches
    rejected: tuple
    degenerate: tuple


def threshold_patch_losses(losses, tau):
    """Apply the rejection rule to precomputed per-patch losses.

    A patch is rejected when its loss is ``<= tau`` and then contributes 0.
    NaN entries (degenerate patches) contribute 0 and are not flagged as
    rejected.  The mean is taken over all patches.
    """
    losses = np.asarray(losses, dtype=np.float64)
    if losses.ndim != 1 or losses.size == 0:
        raise EmptyInputError("need at least one patch loss")
    valid = ~np.isnan(losses)
    rejected = valid & (losses <= tau)
    kept = np.where(valid & ~rejected, losses, 0.0)
    return float(kept.sum() / losses.size), rejected


def patch_directional_loss(patches, content_patches, style_text_emb, source_text_emb, config):
    """Thresholded mean of per-patch directional losses.

    ``patches`` and ``content_patches`` are equally long lists of
    ``(n, d)`` sequences; each patch is represented by its filtered class
    token.  Degenerate patches are flagged rather than raising.
    """
    if len(patches) != len(content_patches):
        raise ShapeError(
            f"{len(patches)} stylized patches but {len(content_patches)} content patches"
        )
    if not patches:
        raise EmptyInputError("need at least one patch")

    losses = []
    degenerate = []
    for stylized, content in zip(patches, content_patches):
        inputs = DirectionalLossInputs(
            filtered_class_token(stylized, config.band_filter),
            filtered_class_token(content, config.band_filter),
            style_text_emb,
            source_text_emb,
        )
        try:
            losses.append(directional_loss(inputs))
            degenerate.append(False)
        except DegenerateDirectionError:
            losses.append(float("nan"))
            degenerate.append(True)

    total, rejected = threshold_patch_losses(losses, config.tau)
    return PatchLossResult(total, tuple(losses), tuple(bool(r) for r in rejected), tuple(degenerate))


def projected_similarity(image_emb, text_emb, P):
    """Cosine similarity after mapping both embeddings through ``P``."""
    image_emb = check_embedding(image_emb, "image_emb")
    text_emb = check_embedding(text_emb, "text_emb", dim=image_emb.shape[0])
    P = check_projection(P, in_dim=image_emb.shape[0])
    return cosine_similarity(P @ image_emb, P @ text_emb)


@dataclass(frozen=True)
class SweepRow:
    frequency: object  # int, or None for the unmasked baseline
    mean: float
    std: float
    n_scored: int
    n_skipped: int

    @property
    def is_baseline(self):
        return self.frequency is None


def _score_rows(weights, sequences, text_emb, P):
    scores = []
    skipped = 0
    for X in sequences:
        token = weights @ X
        try:
            if P is None:
                scores.append(cosine_similarity(token, text_emb))
            else:
                scores.append(projected_similarity(token, text_emb, P))
        except DegenerateVectorError:
            skipped += 1
    return scores, skipped


def frequency_sweep(sequences, text_emb, P=None, jobs=1):
    """Score every single-frequency mask against a text embedding.

    For each ``m`` in ``0..n-1`` only frequency ``m`` is removed, the
    filtered class token of each sequence is scored against ``text_emb``
    (plain cosine, or projected cosine when ``P`` is given) and the mean
    and population standard deviation are reported.  The last row is the
    unfiltered baseline.  Sequences that produce a zero vector are skipped
    and counted; a row with nothing scored has NaN statistics.
    """
    sequences = [check_sequence(X) for X in sequences]
    if not sequences:
        raise EmptyInputError("frequency sweep needs at least one sequence")
    n, d = sequences[0].shape
    for k, X in enumerate(sequences):
        if X.shape != (n, d):
            raise ShapeError(f"sequence {k} has shape {X.shape}, expected {(n, d)}")
    if P is None:
        text_emb = check_embedding(text_emb, "text_emb", dim=d)
    else:
        P = check_projection(P, in_dim=d)
        text_emb = check_embedding(text_emb, "text_emb", dim=d)

    filters = [BandFilter(n, (m,)) for m in range(n)] + [BandFilter.empty(n)]

    def row(band_filter):
        scores, skipped = _score_rows(class_token_weights(band_filter), sequences, text_emb, P)
        if scores:
            mean, std = float(np.mean(scores)), float(np.std(scores))
        else:
            mean = std = float("nan")
        freq = band_filter.masked[0] if band_filter.masked else None
        return SweepRow(freq, mean, std, len(scores), skipped)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(row, filters))
    return [row(f) for f in filters]


def combination_scores(sequences, text_emb, P=None, scheme=None):
    """Mean score of each named combination c1/c2/c3, lowest first.

    Purely informational: which combination suppresses the probe most.
    Returns an empty list when the default scheme does not apply.
    """
    sequences = [check_sequence(X) for X in sequences]
    if not sequences:
        raise EmptyInputError("need at least one sequence")
    if scheme is None:
        try:
            scheme = default_scheme(sequences[0].shape[0])
        except UnsupportedLengthError:
            return []
    ranking = []
    for name, combo in COMBINATIONS.items():
        weights = class_token_weights(resolve_filter(combo, scheme))
        scores, skipped = _score_rows(weights, sequences, text_emb, P)
        mean = float(np.mean(scores)) if scores else float("nan")
        ranking.append((name, mean, skipped))
    ranking.sort(key=lambda item: (np.isnan(item[1]), item[1], item[0]))
    return ranking
