"""Frequency bands, period bookkeeping and named band combinations."""

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

from .exceptions import (
    BandSpecError,
    FrequencyIndexError,
    UnknownBandError,
    UnsupportedLengthError,
)
from .spectral_core import BandFilter

# dyadic lower edges of b1..b5; b5 runs to the end of the spectrum
_DYADIC_EDGES = (0, 2, 4, 8, 16)
MIN_DEFAULT_LENGTH = _DYADIC_EDGES[-1] + 1


def period_of(m, n):
    """Tokens per full cosine cycle of DCT index ``m`` in a length-``n`` sequence.

    Returns ``math.inf`` for ``m == 0`` and the exact ``Fraction(n, 2 m)``
    otherwise.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if not 0 <= m <= n - 1:
        raise FrequencyIndexError(f"frequency index {m} out of range [0, {n - 1}]")
    if m == 0:
        return math.inf
    return Fraction(n, 2 * m)


def format_period(p):
    if p == math.inf:
        return "∞"
    if isinstance(p, Fraction) and p.denominator == 1:
        return str(p.numerator)
    return f"{float(p):.3g}"


class Band(NamedTuple):
    name: str
    lo: int
    hi: int  # inclusive

    @property
    def indices(self):
        return range(self.lo, self.hi + 1)

    def periods(self, n):
        """(shortest, longest) period covered by the band."""
        return period_of(self.hi, n), period_of(self.lo, n)

    def period_label(self, n):
        short, long_ = self.periods(n)
        if short == long_:
            return format_period(short)
        return f"{format_period(short)}-{format_period(long_)}"


@dataclass(frozen=True)
class BandScheme:
    """Ordered partition of ``[0, n-1]`` into named contiguous bands."""

    n: int
    bands: tuple

    def __post_init__(self):
        bands = tuple(Band(*b) for b in self.bands)
        object.__setattr__(self, "bands", bands)
        if not bands:
            raise ValueError("a band scheme needs at least one band")
        expected = 0
        for band in bands:
            if band.lo != expected or band.hi < band.lo:
                raise ValueError(f"bands must be contiguous and ordered; {band} breaks at {expected}")
            expected = band.hi + 1
        if expected != self.n:
            raise ValueError(f"bands cover [0, {expected - 1}] but n={self.n}")
        names = [b.name for b in bands]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate band names in {names}")

    @property
    def names(self):
        return tuple(b.name for b in self.bands)

    def band(self, name):
        for b in self.bands:
            if b.name == name:
                return b
        raise UnknownBandError(f"unknown band {name!r}; scheme has {', '.join(self.names)}")

    def band_of(self, m):
        for b in self.bands:
            if b.lo <= m <= b.hi:
                return b
        raise FrequencyIndexError(f"frequency index {m} out of range [0, {self.n - 1}]")

    def table(self):
        """Rows of ``(name, "lo-hi", period label)``."""
        return [(b.name, f"{b.lo}-{b.hi}", b.period_label(self.n)) for b in self.bands]


def default_scheme(n):
    """Five dyadic bands b1=[0,1], b2=[2,3], b3=[4,7], b4=[8,15], b5=[16,n-1]."""
    if n < MIN_DEFAULT_LENGTH:
        raise UnsupportedLengthError(
            f"the default 5-band scheme needs n >= {MIN_DEFAULT_LENGTH}, got n={n}; "
            "pass explicit index ranges such as '0-1,4-7' instead"
        )
    his = [e - 1 for e in _DYADIC_EDGES[1:]] + [n - 1]
    return BandScheme(
        n, tuple(Band(f"b{k + 1}", lo, hi) for k, (lo, hi) in enumerate(zip(_DYADIC_EDGES, his)))
    )


@dataclass(frozen=True)
class BandCombination:
    """A set of bands (by name) and/or raw index ranges to mask together."""

    name: str = "custom"
    bands: tuple = ()
    ranges: tuple = field(default=())

    @property
    def is_empty(self):
        return not self.bands and not self.ranges


COMBINATIONS = {
    "c1": BandCombination("c1", ("b1", "b2", "b4")),
    "c2": BandCombination("c2", ("b1", "b2")),
    "c3": BandCombination("c3", ("b1",)),
}


def resolve_filter(combo, scheme):
    """Turn a combination into a :class:`BandFilter`.

    ``scheme`` may be a :class:`BandScheme` or, for combinations made only
    of raw ranges, the plain sequence length.
    """
    if isinstance(scheme, BandScheme):
        n = scheme.n
    else:
        n = int(scheme)
        if combo.bands:
            scheme = default_scheme(n)
    masked = set()
    for name in combo.bands:
        masked.update(scheme.band(name).indices)
    for lo, hi in combo.ranges:
        if hi > n - 1:
            raise BandSpecError(f"index range {lo}-{hi} exceeds [0, {n - 1}]", f"{lo}-{hi}")
        masked.update(range(lo, hi + 1))
    return BandFilter(n, masked)


_BAND_RE = re.compile(r"^b\d+$")
_RANGE_RE = re.compile(r"^(\d+)(?:-(\d+))?$")


def parse_band_spec(text, n=None):
    """Parse ``"c1"``, ``"b1,b4"`` or ``"0-1,8-15"`` into a :class:`BandCombination`.

    An empty string yields the empty combination (nothing masked).  When
    ``n`` is given, index ranges are checked against ``[0, n-1]``.
    """
    text = text.strip()
    if not text:
        return BandCombination()
    if text in COMBINATIONS:
        return COMBINATIONS[text]

    bands, ranges = [], []
    for token in (t.strip() for t in text.split(",")):
        if not token:
            raise BandSpecError(f"empty item in band spec {text!r}", token)
        if token in COMBINATIONS:
            raise BandSpecError(f"combination {token!r} cannot be mixed with other items", token)
        if _BAND_RE.match(token):
            if token not in bands:
                bands.append(token)
            continue
        match = _RANGE_RE.match(token)
        if not match:
            raise BandSpecError(f"malformed band spec item {token!r}", token)
        lo = int(match.group(1))
        hi = int(match.group(2)) if match.group(2) is not None else lo
        if hi < lo:
            raise BandSpecError(f"range {token!r} is reversed", token)
        if n is not None and hi > n - 1:
            raise BandSpecError(f"range {token!r} exceeds [0, {n - 1}]", token)
        for plo, phi in ranges:
            if lo <= phi and plo <= hi:
                raise BandSpecError(f"range {token!r} overlaps {plo}-{phi}", token)
        ranges.append((lo, hi))

    return BandCombination("custom", tuple(bands), tuple(sorted(ranges)))


def band_filter_from_spec(text, n, scheme=None):
    """Parse ``text`` and resolve it for a length-``n`` sequence."""
    combo = parse_band_spec(text, n)
    if scheme is None:
        return resolve_filter(combo, n)
    return resolve_filter(combo, scheme)
