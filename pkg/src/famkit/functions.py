"""Bounded functions with certified range oracles for the box backend.

Darboux sums need sup/inf over every cell, so sampling is never used: each
function carries an oracle returning an enclosure of its range on a box.
Regions (for indicators and restricted integrals) classify boxes as
inside/outside/straddling.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from . import _refine
from .boxes import IN, OUT, STRADDLE, Box, BoxElem, box_intersect, box_volume
from .errors import InputError

FloatBox = tuple[tuple[float, float], ...]


def _to_float_box(box) -> FloatBox:
    return tuple((float(lo), float(hi)) for lo, hi in box)


class PolynomialFn:
    """A multivariate polynomial with an interval-arithmetic range oracle.

    ``coeffs`` is either a 1-d coefficient list (ascending powers) or a
    mapping from exponent tuples to coefficients.
    """

    oscillation_floor = 0.0

    def __init__(self, coeffs, dimension: int | None = None):
        if isinstance(coeffs, dict):
            terms = {tuple(int(e) for e in k): float(v) for k, v in coeffs.items()}
            if not terms:
                terms = {(): 0.0}
            dims = {len(k) for k in terms}
            if len(dims) != 1:
                raise InputError("inconsistent exponent arity")
            self.dimension = dims.pop()
        else:
            seq = [float(v) for v in coeffs]
            if not seq:
                seq = [0.0]
            terms = {(e,): c for e, c in enumerate(seq)}
            self.dimension = 1
        if dimension is not None:
            if self.dimension not in (dimension, 0):
                raise InputError("polynomial dimension mismatch")
            if self.dimension == 0:
                terms = {(0,) * dimension: v for v in terms.values()}
                self.dimension = dimension
        self.exps = tuple(sorted(terms))
        self.coeffs = tuple(terms[e] for e in self.exps)

    def __call__(self, point: Sequence[float]) -> float:
        out = 0.0
        for exp, c in zip(self.exps, self.coeffs):
            term = c
            for x, e in zip(point, exp):
                for _ in range(e):
                    term *= x
            out += term
        return out

    def range_on(self, box) -> tuple[float, float]:
        fb = _to_float_box(box)
        return _refine.poly_range(
            self.exps, self.coeffs, [b[0] for b in fb], [b[1] for b in fb]
        )


class PiecewiseConstantFn:
    """Constant on each of finitely many boxes, with a default elsewhere."""

    oscillation_floor = 0.0

    def __init__(self, pieces: Sequence[tuple[Box, float]], default: float = 0.0):
        self.pieces = [(tuple((Fraction(lo), Fraction(hi)) for lo, hi in box), float(v)) for box, v in pieces]
        self.default = float(default)

    def __call__(self, point) -> float:
        for box, v in self.pieces:
            if all(lo <= x < hi for (lo, hi), x in zip(box, point)):
                return v
        return self.default

    def range_on(self, box) -> tuple[float, float]:
        values = []
        covered = Fraction(0)
        vol = box_volume(box)
        for piece, v in self.pieces:
            inter = box_intersect(box, piece)
            if inter is not None:
                values.append(v)
                covered += box_volume(inter)
        if covered < vol:
            values.append(self.default)
        return min(values), max(values)


class LipschitzFn:
    """An explicit evaluator with a sup-norm Lipschitz constant."""

    oscillation_floor = 0.0

    def __init__(self, fn: Callable[[Sequence[float]], float], constant: float):
        self.fn = fn
        self.constant = float(constant)

    def __call__(self, point) -> float:
        return self.fn(point)

    def range_on(self, box) -> tuple[float, float]:
        fb = _to_float_box(box)
        center = [(lo + hi) * 0.5 for lo, hi in fb]
        radius = max(hi - lo for lo, hi in fb) * 0.5
        mid = self.fn(center)
        return mid - self.constant * radius, mid + self.constant * radius


# -- regions -----------------------------------------------------------


@dataclass(frozen=True)
class HalfPlaneRegion:
    """``{x : normal . x <= offset}`` with exact rational data."""

    normal: tuple[Fraction, ...]
    offset: Fraction

    def __init__(self, normal: Sequence, offset):
        object.__setattr__(self, "normal", tuple(Fraction(c) for c in normal))
        object.__setattr__(self, "offset", Fraction(offset))
        object.__setattr__(self, "_fnormal", tuple(float(c) for c in self.normal))
        object.__setattr__(self, "_foffset", float(self.offset))

    def _classify_exact(self, box: Box) -> int:
        # raw integer cross-multiplication; this is the hot tie-breaking
        # path for cells whose corners sit exactly on the boundary
        low_n, low_d = 0, 1
        high_n, high_d = 0, 1
        for c, (lo, hi) in zip(self.normal, box):
            if c >= 0:
                lo_t, hi_t = lo, hi
            else:
                lo_t, hi_t = hi, lo
            tn = c.numerator * lo_t.numerator
            td = c.denominator * lo_t.denominator
            low_n = low_n * td + tn * low_d
            low_d *= td
            tn = c.numerator * hi_t.numerator
            td = c.denominator * hi_t.denominator
            high_n = high_n * td + tn * high_d
            high_d *= td
        off_n, off_d = self.offset.numerator, self.offset.denominator
        if high_n * off_d <= off_n * high_d:
            return IN
        if low_n * off_d > off_n * low_d:
            return OUT
        return STRADDLE

    def classify(self, box: Box) -> int:
        # float prefilter with a certified margin; ties fall back to exact
        # rational arithmetic, so the verdict is always sound
        low = high = 0.0
        scale = 1.0
        for fc, (lo, hi) in zip(self._fnormal, box):
            flo, fhi = float(lo), float(hi)
            if fc >= 0.0:
                low += fc * flo
                high += fc * fhi
            else:
                low += fc * fhi
                high += fc * flo
            scale += abs(fc) * max(abs(flo), abs(fhi))
        off = self._foffset
        margin = 1e-12 * scale
        verdict_in = high <= off - margin
        verdict_out = low > off + margin
        if verdict_in:
            return IN
        if verdict_out:
            return OUT
        if low < off - margin and high > off + margin:
            return STRADDLE
        return self._classify_exact(box)

    def contains_point(self, point) -> bool:
        return sum(c * Fraction(x) for c, x in zip(self.normal, point)) <= self.offset


@dataclass(frozen=True)
class DenseCodenseRegion:
    """A dense set with dense complement (the rationals fixture).

    Every cell of positive volume straddles, so the inner measure is 0 and
    the outer measure is full: certified non-Jordan, and its indicator has
    oscillation 1 everywhere.
    """

    dense: bool = True
    codense: bool = True

    def classify(self, box: Box) -> int:
        return STRADDLE if box_volume(box) > 0 else OUT

    def contains_point(self, point) -> bool:
        raise InputError("membership of the dense fixture is analytic, not pointwise")


@dataclass(frozen=True)
class PointRegion:
    point: tuple[Fraction, ...]

    def __init__(self, point: Sequence):
        object.__setattr__(self, "point", tuple(Fraction(x) for x in point))

    def classify(self, box: Box) -> int:
        inside = all(lo <= x < hi for (lo, hi), x in zip(box, self.point))
        return STRADDLE if inside else OUT

    def contains_point(self, point) -> bool:
        return tuple(Fraction(x) for x in point) == self.point


@dataclass(frozen=True)
class RegionComplement:
    inner: object

    def classify(self, box: Box) -> int:
        c = self.inner.classify(box)
        if c == IN:
            return OUT
        if c == OUT:
            return IN
        return STRADDLE

    def contains_point(self, point) -> bool:
        return not self.inner.contains_point(point)


@dataclass(frozen=True)
class RegionUnion:
    parts: tuple

    def __init__(self, *parts):
        object.__setattr__(self, "parts", tuple(parts))

    def classify(self, box: Box) -> int:
        results = [p.classify(box) for p in self.parts]
        if any(r == IN for r in results):
            return IN
        if all(r == OUT for r in results):
            return OUT
        return STRADDLE

    def contains_point(self, point) -> bool:
        return any(p.contains_point(point) for p in self.parts)


@dataclass(frozen=True)
class RegionIntersection:
    parts: tuple

    def __init__(self, *parts):
        object.__setattr__(self, "parts", tuple(parts))

    def classify(self, box: Box) -> int:
        results = [p.classify(box) for p in self.parts]
        if all(r == IN for r in results):
            return IN
        if any(r == OUT for r in results):
            return OUT
        return STRADDLE

    def contains_point(self, point) -> bool:
        return all(p.contains_point(point) for p in self.parts)


def region_of(obj) -> object:
    """Coerce a BoxElem or region-like object to the region protocol."""
    if isinstance(obj, BoxElem):
        return obj
    if hasattr(obj, "classify"):
        return obj
    raise InputError(f"{obj!r} is not a region")


class IndicatorFn:
    """The characteristic function of a region, as a bounded oracle."""

    def __init__(self, region, value: float = 1.0):
        self.region = region_of(region)
        self.value = float(value)
        dense = getattr(self.region, "dense", False) and getattr(self.region, "codense", False)
        self.oscillation_floor = abs(self.value) if dense else 0.0

    def __call__(self, point) -> float:
        return self.value if self.region.contains_point(point) else 0.0

    def range_on(self, box) -> tuple[float, float]:
        c = self.region.classify(box)
        if c == IN:
            return (self.value, self.value)
        if c == OUT:
            return (0.0, 0.0)
        return (min(0.0, self.value), max(0.0, self.value))


class RestrictedFn:
    """``f * chi_E`` for integration over a subset."""

    def __init__(self, fn, region):
        self.fn = fn
        self.region = region_of(region)
        self.oscillation_floor = 0.0

    def __call__(self, point) -> float:
        return self.fn(point) if self.region.contains_point(point) else 0.0

    def range_on(self, box) -> tuple[float, float]:
        c = self.region.classify(box)
        if c == OUT:
            return (0.0, 0.0)
        lo, hi = self.fn.range_on(box)
        if c == IN:
            return (lo, hi)
        return (min(lo, 0.0), max(hi, 0.0))


def triangle_under_diagonal(dimension: int = 2) -> HalfPlaneRegion:
    """The region ``{y <= x}`` in the plane (Jordan, measure 1/2 in the unit square)."""
    if dimension != 2:
        raise InputError("the diagonal triangle fixture is two-dimensional")
    return HalfPlaneRegion((-1, 1), 0)
