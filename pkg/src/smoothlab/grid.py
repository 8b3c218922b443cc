"""Uniform-grid sampled functions, translations and finite differences.

A :class:`GridFunction` stores samples of a real function on a uniform grid
together with an explicit *valid domain*: the sub-interval on which the
stored values are meaningful.  Difference operators shrink the valid domain
instead of inventing boundary values, and every region-based computation in
the package refuses to read outside it.

Offsets are always integer multiples of the grid spacing, so translations
and differences are exact sample rearrangements; the algebraic difference
identities (product rules and the dyadic telescoping of a first difference
into second differences) therefore hold at grid points up to rounding, and
the ``check_*`` helpers return their maximal residuals.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import DomainMarginError, EmptyDomainError, GridMismatchError

# Relative slack used when snapping physical coordinates to grid indices.
_SNAP = 1e-9


@dataclass(frozen=True)
class GridOffset:
    """A shift by an integer number of grid steps (h = steps * dx)."""

    steps: int

    def __post_init__(self):
        if self.steps != int(self.steps):
            raise ValueError("offset steps must be an integer")
        object.__setattr__(self, "steps", int(self.steps))


@dataclass(frozen=True)
class Region:
    """A closed interval given by center and radius, in physical units."""

    center: float
    radius: float

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError(f"region radius must be positive, got {self.radius}")

    @property
    def lo(self) -> float:
        return self.center - self.radius

    @property
    def hi(self) -> float:
        return self.center + self.radius

    def shifted(self, a: float) -> "Region":
        return Region(self.center + a, self.radius)

    def scaled(self, factor: float) -> "Region":
        """Same center, radius multiplied by ``factor``."""
        return Region(self.center, self.radius * factor)

    def enlarged(self, margin: float) -> "Region":
        """Same center, radius grown by ``margin`` (may be negative)."""
        return Region(self.center, self.radius + margin)


@dataclass(frozen=True)
class GridFunction:
    """Real samples on a uniform grid with valid-domain bookkeeping.

    Parameters
    ----------
    spacing : float
        Grid step dx > 0.
    origin : float
        Coordinate of sample index 0.
    values : ndarray
        Sample values; entries outside the valid domain may be garbage
        (NaN by convention) and must never be read.
    valid_lo, valid_hi : float
        Endpoints of the valid domain.  ``valid_lo > valid_hi`` encodes an
        empty domain (allowed, flagged by :attr:`domain_empty`).
    smooth : bool
        Generator-declared smoothness tag; gates numerical differentiation.
    """

    spacing: float
    origin: float
    values: np.ndarray
    valid_lo: float
    valid_hi: float
    smooth: bool = False

    def __post_init__(self):
        if not self.spacing > 0:
            raise ValueError("spacing must be positive")
        vals = np.asarray(self.values, dtype=np.float64)
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)
        if vals.ndim != 1 or vals.size == 0:
            raise ValueError("values must be a nonempty 1-d array")
        if not self.domain_empty:
            eps = _SNAP * self.spacing
            if self.valid_lo < self.x_min - eps or self.valid_hi > self.x_max + eps:
                raise ValueError("valid domain exceeds the sampled range")

    # -- basic geometry ----------------------------------------------------

    @property
    def count(self) -> int:
        return self.values.size

    @property
    def x_min(self) -> float:
        return self.origin

    @property
    def x_max(self) -> float:
        return self.origin + (self.count - 1) * self.spacing

    @property
    def domain_empty(self) -> bool:
        return self.valid_lo > self.valid_hi

    def x_at(self, i: int) -> float:
        return self.origin + i * self.spacing

    def index_of(self, x: float) -> int:
        """Exact grid index of coordinate ``x`` (raises if off-grid)."""
        r = (x - self.origin) / self.spacing
        i = round(r)
        if abs(r - i) > _SNAP * max(1.0, abs(r)):
            raise ValueError(f"coordinate {x} is not a grid point")
        return int(i)

    def _index_pair(self, lo: float, hi: float) -> tuple[int, int]:
        """Indices of [lo, hi] snapped outward to grid points."""
        rlo = (lo - self.origin) / self.spacing
        rhi = (hi - self.origin) / self.spacing
        return int(np.floor(rlo + _SNAP)), int(np.ceil(rhi - _SNAP))

    def valid_index_range(self) -> tuple[int, int]:
        """Inclusive index range covered by the valid domain (snapped inward)."""
        if self.domain_empty:
            raise EmptyDomainError("grid function has an empty valid domain")
        rlo = (self.valid_lo - self.origin) / self.spacing
        rhi = (self.valid_hi - self.origin) / self.spacing
        return int(np.ceil(rlo - _SNAP)), int(np.floor(rhi + _SNAP))

    def region_index_range(self, region: Region, margin: float = 0.0,
                           what: str = "region") -> tuple[int, int]:
        """Inclusive index range of ``region``, endpoints snapped outward.

        Raises :class:`DomainMarginError` unless the snapped region, grown by
        ``margin``, lies inside the valid domain.  ``what`` names the check
        in the error message.
        """
        if self.domain_empty:
            raise DomainMarginError(f"{what}: valid domain is empty")
        lo_i, hi_i = self._index_pair(region.lo, region.hi)
        eps = _SNAP * max(1.0, abs(self.valid_hi) + abs(self.valid_lo))
        lo_x = self.x_at(lo_i) - margin
        hi_x = self.x_at(hi_i) + margin
        if lo_x < self.valid_lo - eps or hi_x > self.valid_hi + eps:
            raise DomainMarginError(
                f"{what}: needs [{lo_x:.6g}, {hi_x:.6g}] but valid domain is "
                f"[{self.valid_lo:.6g}, {self.valid_hi:.6g}] "
                f"(margin {margin:.6g})")
        return lo_i, hi_i

    def value_at(self, x: float) -> float:
        """Exact lookup at a grid point inside the valid domain."""
        i = self.index_of(x)
        if self.domain_empty or x < self.valid_lo - _SNAP * self.spacing \
                or x > self.valid_hi + _SNAP * self.spacing:
            raise DomainMarginError(f"point {x}: outside valid domain")
        return float(self.values[i])

    def sample_points(self) -> np.ndarray:
        return self.origin + self.spacing * np.arange(self.count)

    def with_smooth(self, smooth: bool) -> "GridFunction":
        return replace(self, smooth=smooth)


def sample(fn, spacing: float, lo: float, hi: float, smooth: bool = False) -> GridFunction:
    """Sample ``fn`` on the uniform grid covering [lo, hi]."""
    n = int(round((hi - lo) / spacing)) + 1
    xs = lo + spacing * np.arange(n)
    return GridFunction(spacing, lo, np.asarray(fn(xs), dtype=np.float64),
                        lo, lo + (n - 1) * spacing, smooth=smooth)


def _same_grid(f: GridFunction, g: GridFunction) -> None:
    if f.spacing != g.spacing:
        raise GridMismatchError(
            f"spacings differ: {f.spacing} vs {g.spacing}")
    r = (g.origin - f.origin) / f.spacing
    if abs(r - round(r)) > _SNAP or round(r) != 0 or f.count != g.count:
        raise GridMismatchError("grids are misaligned or have different extent")


def translate(f: GridFunction, a: GridOffset) -> GridFunction:
    """Translated samples: result(x) = f(x - a) with a = a.steps * dx.

    The sample window is unchanged; the valid domain shifts by +a and is
    intersected with the window.  Uncovered samples are NaN-filled and lie
    outside the new valid domain (which may be empty).
    """
    k = a.steps
    n = f.count
    out = np.full(n, np.nan)
    if k >= 0:
        out[k:] = f.values[:n - k]
    else:
        out[:n + k] = f.values[-k:]
    shift = k * f.spacing
    lo = max(f.valid_lo + shift, f.x_min)
    hi = min(f.valid_hi + shift, f.x_max)
    return GridFunction(f.spacing, f.origin, out, lo, hi, smooth=f.smooth)


def multiply(f: GridFunction, g: GridFunction) -> GridFunction:
    """Pointwise product on a shared grid; valid domains intersect."""
    _same_grid(f, g)
    lo = max(f.valid_lo, g.valid_lo)
    hi = min(f.valid_hi, g.valid_hi)
    with np.errstate(invalid="ignore"):
        vals = f.values * g.values
    return GridFunction(f.spacing, f.origin, vals, lo, hi,
                        smooth=f.smooth and g.smooth)


def diff1(f: GridFunction, h: GridOffset) -> GridFunction:
    """First difference: result(x) = f(x + h) - f(x)."""
    k = h.steps
    n = f.count
    out = np.full(n, np.nan)
    if k >= 0:
        out[:n - k] = f.values[k:] - f.values[:n - k]
        lo, hi = f.valid_lo, f.valid_hi - k * f.spacing
    else:
        out[-k:] = f.values[:n + k] - f.values[-k:]
        lo, hi = f.valid_lo - k * f.spacing, f.valid_hi
    return GridFunction(f.spacing, f.origin, out, lo, hi, smooth=f.smooth)


def diff2(f: GridFunction, h: GridOffset) -> GridFunction:
    """Second difference: result(x) = f(x + 2h) - 2 f(x + h) + f(x)."""
    k = h.steps
    n = f.count
    out = np.full(n, np.nan)
    if k >= 0:
        m = n - 2 * k
        if m > 0:
            out[:m] = f.values[2 * k:] - 2.0 * f.values[k:k + m] + f.values[:m]
        lo, hi = f.valid_lo, f.valid_hi - 2 * k * f.spacing
    else:
        m = n + 2 * k
        if m > 0:
            out[-2 * k:] = f.values[:m] - 2.0 * f.values[-k:m - k] + f.values[-2 * k:]
        lo, hi = f.valid_lo - 2 * k * f.spacing, f.valid_hi
    return GridFunction(f.spacing, f.origin, out, lo, hi, smooth=f.smooth)


def _common_valid_max(parts, combine) -> float:
    """Max |combine(values...)| over the intersection of valid domains."""
    lo = max(p.valid_lo for p in parts)
    hi = min(p.valid_hi for p in parts)
    if lo > hi:
        raise EmptyDomainError("no common valid domain")
    f0 = parts[0]
    lo_i = int(np.ceil((lo - f0.origin) / f0.spacing - _SNAP))
    hi_i = int(np.floor((hi - f0.origin) / f0.spacing + _SNAP))
    sliced = [p.values[lo_i:hi_i + 1] for p in parts]
    return float(np.max(np.abs(combine(*sliced))))


def check_leibniz1(f: GridFunction, g: GridFunction, h: GridOffset) -> float:
    """Residual of the first-order product rule for differences.

    The difference of a product splits exactly into
    ``(diff f) * (shifted g) + f * (diff g)``; returns the max absolute
    residual over the common valid domain (rounding noise only).
    """
    _same_grid(f, g)
    dfg = diff1(multiply(f, g), h)
    df = diff1(f, h)
    dg = diff1(g, h)
    tg = translate(g, GridOffset(-h.steps))  # g(x + h)
    return _common_valid_max(
        [dfg, df, tg, f, dg],
        lambda a, b, c, d, e: a - b * c - d * e)


def check_leibniz2(f: GridFunction, g: GridFunction, h: GridOffset) -> float:
    """Residual of the second-order product rule for differences."""
    _same_grid(f, g)
    d2fg = diff2(multiply(f, g), h)
    d2f = diff2(f, h)
    d2g = diff2(g, h)
    df = diff1(f, h)
    dg2h = diff1(g, GridOffset(2 * h.steps))
    tg2 = translate(g, GridOffset(-2 * h.steps))  # g(x + 2h)
    tf1 = translate(f, GridOffset(-h.steps))      # f(x + h)
    return _common_valid_max(
        [d2fg, d2f, tg2, d2g, tf1, df, dg2h],
        lambda a, b, c, d, e, u, v: a - b * c - d * e - u * v)


def check_telescoping(f: GridFunction, h: GridOffset, k: int) -> float:
    """Residual of the dyadic split of a first difference.

    A first difference at step h equals ``2^-k`` times the first difference
    at step ``2^k h`` minus a weighted sum of second differences at steps
    ``2^l h`` (l < k); returns the max residual over the common domain.
    """
    if k < 1:
        raise ValueError("k must be a positive integer")
    lhs = diff1(f, h)
    big = diff1(f, GridOffset((2 ** k) * h.steps))
    seconds = [diff2(f, GridOffset((2 ** l) * h.steps)) for l in range(k)]
    weights = [2.0 ** (-l - 1) for l in range(k)]

    def combine(a, b, *ds):
        rhs = (2.0 ** -k) * b
        for w, d in zip(weights, ds):
            rhs = rhs - w * d
        return a - rhs

    return _common_valid_max([lhs, big, *seconds], combine)
