"""Generalized Riemann (Darboux) integration, outer/inner measure, and the
Jordan measure, over two backends.

Finite backend: functions are exact rational tables over the ground set;
the atom partition realizes the sharpest Darboux sums, so values and
integrability are decided exactly.

Box backend: functions carry certified range oracles over half-open boxes;
the adaptive refinement loop (compiled kernel when available) certifies the
Darboux gap below a requested tolerance, and the Jordan machinery runs on
exact rational cell coordinates.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from . import _refine, _refine_py
from .boolalg import Algebra, Partition, SetElem
from .boxes import IN, OUT, Box, BoxElem, VolumeFam, box_intersect, box_volume
from .errors import InputError
from .fam import Fam, as_fraction, pushforward
from .functions import PolynomialFn, RestrictedFn, region_of

DEFAULT_BUDGET = 2_000_000

INTEGRABLE = "integrable"
NOT_INTEGRABLE = "not_integrable"
UNDECIDED = "undecided"


@dataclass(frozen=True)
class IntegralReport:
    """Lower/upper Darboux data plus the verdict at the requested tolerance."""

    status: str
    lower: object
    upper: object
    value: object = None
    epsilon: object = None
    trace: tuple = ()
    backend: str = "finite"

    @property
    def gap(self):
        return self.upper - self.lower


# -- finite backend ----------------------------------------------------


def as_table(f, ground) -> tuple[Fraction, ...]:
    """Normalize a function on the ground set to a tuple of exact rationals."""
    if isinstance(f, Mapping):
        values = [f.get(i, f.get(ground.labels[i], 0)) for i in range(ground.size)]
    else:
        values = list(f)
        if len(values) != ground.size:
            raise InputError("table must have one value per ground element")
    return tuple(as_fraction(v) for v in values)


def supsum(f, partition: Partition, fam: Fam) -> Fraction:
    """Sum over cells of (sup of f on the cell) times the cell measure."""
    table = as_table(f, fam.algebra.ground)
    return sum(
        (max(table[x] for x in b.indices()) * fam(b) for b in partition.cells),
        Fraction(0),
    )


def infsum(f, partition: Partition, fam: Fam) -> Fraction:
    table = as_table(f, fam.algebra.ground)
    return sum(
        (min(table[x] for x in b.indices()) * fam(b) for b in partition.cells),
        Fraction(0),
    )


def _integrate_table(f, fam: Fam, epsilon=None) -> IntegralReport:
    # the atom partition is the common refinement of every partition, so it
    # attains the upper and lower integrals exactly
    table = as_table(f, fam.algebra.ground)
    lower = Fraction(0)
    upper = Fraction(0)
    for a, w in zip(fam.algebra.atoms, fam.weights):
        if w == 0:
            continue
        points = a.indices()
        lower += min(table[x] for x in points) * w
        upper += max(table[x] for x in points) * w
    status = INTEGRABLE if lower == upper else NOT_INTEGRABLE
    return IntegralReport(
        status=status,
        lower=lower,
        upper=upper,
        value=lower if status == INTEGRABLE else None,
        epsilon=epsilon,
        trace=((fam.algebra.atom_count, upper - lower),),
        backend="finite",
    )


def oscillation(f, atom: SetElem) -> Fraction:
    """Width of the range of ``f`` on an atom (its principal ultrafilter)."""
    table = as_table(f, atom.ground)
    if atom.is_empty:
        raise InputError("oscillation needs a non-empty atom")
    points = atom.indices()
    return max(table[x] for x in points) - min(table[x] for x in points)


def ultrafilter_integrate(f, atom: SetElem) -> Fraction | None:
    """The ultrafilter limit of ``f`` at a principal ultrafilter, if it exists."""
    if oscillation(f, atom) != 0:
        return None
    table = as_table(f, atom.ground)
    return table[atom.indices()[0]]


def jordan_completion(fam: Fam) -> Fam:
    """The Jordan measure of a finite-backend fam, as a fam.

    Null atoms shatter into singletons (every subset of a null region is
    Jordan measurable with measure zero); positive atoms are unchanged.
    """
    atoms: list[SetElem] = []
    weights: dict[int, Fraction] = {}
    for a, w in zip(fam.algebra.atoms, fam.weights):
        if w > 0:
            atoms.append(a)
            weights[a.bits] = w
        else:
            for x in a.indices():
                s = SetElem.singleton(fam.algebra.ground, x)
                atoms.append(s)
                weights[s.bits] = Fraction(0)
    algebra = Algebra(fam.algebra.ground, atoms)
    return Fam(algebra, tuple(weights[a.bits] for a in algebra.atoms))


@dataclass(frozen=True)
class JordanReport:
    jordan: bool | None
    inner: object
    outer: object
    measure: object = None
    witness: tuple = ()

    @property
    def bracket(self):
        return (self.inner, self.outer)


def _finite_measure_pair(E: SetElem, fam: Fam) -> tuple[Fraction, Fraction]:
    return fam(fam.algebra.floor(E)), fam(fam.algebra.ceil(E))


def _finite_is_jordan(E: SetElem, fam: Fam) -> JordanReport:
    inner, outer = _finite_measure_pair(E, fam)
    if inner == outer:
        return JordanReport(
            jordan=True,
            inner=inner,
            outer=outer,
            measure=inner,
            witness=(fam.algebra.floor(E), fam.algebra.ceil(E)),
        )
    return JordanReport(jordan=False, inner=inner, outer=outer)


@dataclass(frozen=True)
class PushforwardCheck:
    image: IntegralReport
    source: IntegralReport
    equal: bool
    consistent: bool


def pushforward_integral_check(f_on_y, h, fam: Fam, ground_y) -> PushforwardCheck:
    """Compare the integral of ``f`` against the image fam with the integral
    of ``f o h`` against the source fam; for injective ``h`` integrability
    must agree in both directions."""
    fam_h = pushforward(fam, h, ground_y)
    table_y = as_table(f_on_y, ground_y)
    hmap = [h[i] for i in range(fam.algebra.ground.size)] if isinstance(h, Mapping) else list(h)
    table_x = tuple(table_y[y] for y in hmap)
    image = _integrate_table(table_y, fam_h)
    source = _integrate_table(table_x, fam)
    both = image.status == INTEGRABLE and source.status == INTEGRABLE
    equal = both and image.value == source.value
    consistent = image.status != INTEGRABLE or equal
    if len(set(hmap)) == len(hmap):  # injective: equivalence, not implication
        consistent = consistent and (source.status != INTEGRABLE or equal)
    return PushforwardCheck(image=image, source=source, equal=equal, consistent=consistent)


@dataclass(frozen=True)
class DeviationTrack:
    epsilon: Fraction
    outer_measures: tuple[Fraction, ...]
    vanishes_at_horizon: bool


@dataclass(frozen=True)
class XiStarReport:
    tracks: tuple[DeviationTrack, ...]
    converged: bool


def xi_star_converges(seq, f, fam: Fam, eps_grid) -> XiStarReport:
    """Outer measures of the deviation sets, for each epsilon on the grid."""
    ground = fam.algebra.ground
    target = as_table(f, ground)
    tables = [as_table(fn, ground) for fn in seq]
    tracks = []
    for eps in eps_grid:
        eps = as_fraction(eps)
        if eps <= 0:
            raise InputError("epsilon grid must be positive")
        measures = []
        for table in tables:
            dev = SetElem.from_indices(
                ground, (x for x in range(ground.size) if abs(table[x] - target[x]) >= eps)
            )
            measures.append(fam(fam.algebra.ceil(dev)))
        tracks.append(
            DeviationTrack(
                epsilon=eps,
                outer_measures=tuple(measures),
                vanishes_at_horizon=bool(measures) and measures[-1] == 0,
            )
        )
    return XiStarReport(tracks=tuple(tracks), converged=all(t.vanishes_at_horizon for t in tracks))


# -- box backend -------------------------------------------------------


def _float_eps(epsilon) -> float:
    eps = float(Fraction(str(epsilon)) if isinstance(epsilon, float) else Fraction(epsilon))
    if eps <= 0:
        raise InputError("epsilon must be positive")
    return eps


def _require_oracle(fn):
    if not hasattr(fn, "range_on"):
        raise InputError("box-backend functions need a range oracle (range_on)")
    return fn


def box_supsum(fn, cells, fam: VolumeFam) -> float:
    """Oracle-driven upper Darboux sum over a partition into boxes."""
    _require_oracle(fn)
    return math.fsum(fn.range_on(c)[1] * float(box_volume(c)) for c in cells)


def box_infsum(fn, cells, fam: VolumeFam) -> float:
    """Oracle-driven lower Darboux sum over a partition into boxes."""
    _require_oracle(fn)
    return math.fsum(fn.range_on(c)[0] * float(box_volume(c)) for c in cells)


def _refine_grid(range_fn, lo0, hi0, eps, max_cells):
    """Uniform dyadic refinement: split every cell each round."""
    cells = [(list(lo0), list(hi0))]
    trace = []
    while True:
        lower = math.fsum(
            range_fn(lo, hi)[0] * math.prod(h - l for l, h in zip(lo, hi)) for lo, hi in cells
        )
        upper = math.fsum(
            range_fn(lo, hi)[1] * math.prod(h - l for l, h in zip(lo, hi)) for lo, hi in cells
        )
        gap = upper - lower
        trace.append((len(cells), gap))
        if gap < eps:
            return lower, upper, len(cells), True, trace
        if len(cells) * 2 > max_cells:
            return lower, upper, len(cells), False, trace
        split = []
        for lo, hi in cells:
            axis = max(range(len(lo)), key=lambda d: hi[d] - lo[d])
            mid = 0.5 * (lo[axis] + hi[axis])
            left_hi = hi[:]
            left_hi[axis] = mid
            right_lo = lo[:]
            right_lo[axis] = mid
            split.append((lo, left_hi))
            split.append((right_lo, hi))
        cells = split


def _integrate_box(fn, fam: VolumeFam, epsilon, budget: int, strategy: str) -> IntegralReport:
    _require_oracle(fn)
    eps = _float_eps(epsilon)
    lo0 = [float(lo) for lo, _ in fam.bounding]
    hi0 = [float(hi) for _, hi in fam.bounding]
    floor = float(getattr(fn, "oscillation_floor", 0.0))
    total = float(fam.total)
    if floor > 0.0 and floor * total >= eps:
        # no partition can beat the certified oscillation floor
        rlo, rhi = fn.range_on(fam.bounding)
        return IntegralReport(
            status=NOT_INTEGRABLE,
            lower=rlo * total,
            upper=rhi * total,
            epsilon=eps,
            trace=((1, (rhi - rlo) * total),),
            backend="box",
        )
    if strategy == "adaptive":
        if isinstance(fn, PolynomialFn):
            lower, upper, ncells, converged, trace = _refine.refine_poly(
                fn.exps, fn.coeffs, lo0, hi0, eps, budget
            )
        else:
            def range_fn(lo, hi):
                return fn.range_on(tuple(zip(lo, hi)))

            lower, upper, ncells, converged, trace = _refine_py.refine_generic(
                range_fn, lo0, hi0, eps, budget
            )
    elif strategy == "grid":
        def range_fn(lo, hi):
            return fn.range_on(tuple(zip(lo, hi)))

        lower, upper, ncells, converged, trace = _refine_grid(range_fn, lo0, hi0, eps, budget)
    else:
        raise InputError(f"unknown strategy {strategy!r}")
    if converged:
        status, value = INTEGRABLE, 0.5 * (lower + upper)
    elif floor > 0.0:
        status, value = NOT_INTEGRABLE, None
    else:
        status, value = UNDECIDED, None
    return IntegralReport(
        status=status,
        lower=lower,
        upper=upper,
        value=value,
        epsilon=eps,
        trace=tuple(trace),
        backend="box",
    )


def integrate(f, fam, epsilon=None, budget: int = DEFAULT_BUDGET, strategy: str = "adaptive") -> IntegralReport:
    """Darboux integral report of ``f`` against ``fam``.

    Finite backend (``fam`` a :class:`Fam`): ``f`` is a rational table and
    the verdict is exact.  Box backend (``fam`` a :class:`VolumeFam`):
    ``f`` is a range-oracle function and the verdict is at tolerance
    ``epsilon``.
    """
    if isinstance(fam, Fam):
        return _integrate_table(f, fam, epsilon=epsilon)
    if isinstance(fam, VolumeFam):
        if epsilon is None:
            raise InputError("box backend needs an epsilon")
        return _integrate_box(f, fam, epsilon, budget, strategy)
    raise InputError("fam must be a Fam or a VolumeFam")


def integrate_over(f, E, fam, epsilon=None, budget: int = DEFAULT_BUDGET) -> IntegralReport:
    """Integral of ``f`` over a subset: the integral of ``f * chi_E``."""
    if isinstance(fam, Fam):
        table = as_table(f, fam.algebra.ground)
        if isinstance(E, SetElem):
            masked = tuple(v if x in E else Fraction(0) for x, v in enumerate(table))
            return _integrate_table(masked, fam, epsilon=epsilon)
        raise InputError("finite backend restricts over a SetElem")
    return _integrate_box(RestrictedFn(f, E), fam, epsilon, budget, "adaptive")


@dataclass(frozen=True)
class MeasureBracket:
    inner: Fraction
    outer: Fraction
    inner_cells: tuple[Box, ...]
    straddle_cells: tuple[Box, ...]
    converged: bool
    certified_diverged: bool = False

    @property
    def gap(self) -> Fraction:
        return self.outer - self.inner


def measure_bracket(E, fam: VolumeFam, epsilon, budget: int = DEFAULT_BUDGET) -> MeasureBracket:
    """Exact rational inner/outer bracket by adaptive straddle splitting."""
    region = region_of(E)
    eps = as_fraction(str(epsilon)) if isinstance(epsilon, float) else as_fraction(epsilon)
    total = fam.total
    if getattr(region, "dense", False) and getattr(region, "codense", False):
        return MeasureBracket(
            inner=Fraction(0),
            outer=total,
            inner_cells=(),
            straddle_cells=(fam.bounding,),
            converged=total < eps,
            certified_diverged=total > 0,
        )
    inner_acc = Fraction(0)
    out_acc = Fraction(0)
    inner_cells: list[Box] = []
    # float keys and widths order the heap (largest straddle cell first,
    # widest axis first); all measure arithmetic stays exact
    heap: list[tuple[float, int, Box, Fraction, tuple[float, ...]]] = []
    seq = 0

    gap = total  # straddle volume, maintained incrementally

    def push(box: Box, vol: Fraction, widths: tuple[float, ...]):
        nonlocal inner_acc, out_acc, seq, gap
        c = region.classify(box)
        if c == IN:
            inner_acc += vol
            gap -= vol
            inner_cells.append(box)
        elif c == OUT:
            out_acc += vol
            gap -= vol
        else:
            heapq.heappush(heap, (-float(vol), seq, box, vol, widths))
            seq += 1

    push(fam.bounding, total, tuple(float(hi - lo) for lo, hi in fam.bounding))
    processed = 0
    while heap and gap >= eps and processed < budget:
        _, _, box, vol, widths = heapq.heappop(heap)
        axis = 0
        width = widths[0]
        for d in range(1, len(widths)):
            if widths[d] > width:
                width = widths[d]
                axis = d
        lo, hi = box[axis]
        mid = (lo + hi) / 2
        half = vol / 2
        hw = widths[:axis] + (widths[axis] * 0.5,) + widths[axis + 1:]
        push(box[:axis] + ((lo, mid),) + box[axis + 1:], half, hw)
        push(box[:axis] + ((mid, hi),) + box[axis + 1:], half, hw)
        processed += 1
    straddle = tuple(entry[2] for entry in sorted(heap, key=lambda t: t[1]))
    gap = total - out_acc - inner_acc
    return MeasureBracket(
        inner=inner_acc,
        outer=total - out_acc,
        inner_cells=tuple(inner_cells),
        straddle_cells=straddle,
        converged=gap < eps,
    )


def outer_measure(E, fam, epsilon=Fraction(1, 1024), budget: int = DEFAULT_BUDGET):
    """Infimum of measures of measurable supersets (bracketed on boxes)."""
    if isinstance(fam, Fam):
        return fam(fam.algebra.ceil(E))
    return measure_bracket(E, fam, epsilon, budget).outer


def inner_measure(E, fam, epsilon=Fraction(1, 1024), budget: int = DEFAULT_BUDGET):
    """Supremum of measures of measurable subsets (bracketed on boxes)."""
    if isinstance(fam, Fam):
        return fam(fam.algebra.floor(E))
    return measure_bracket(E, fam, epsilon, budget).inner


def is_jordan(E, fam, epsilon=Fraction(1, 1024), budget: int = DEFAULT_BUDGET) -> JordanReport:
    """Jordan measurability verdict with a sandwich witness ``A <= E <= B``."""
    if isinstance(fam, Fam):
        return _finite_is_jordan(E, fam)
    bracket = measure_bracket(E, fam, epsilon, budget)
    if bracket.converged:
        A = BoxElem.from_disjoint(bracket.inner_cells)
        B = BoxElem.from_disjoint(bracket.inner_cells + bracket.straddle_cells)
        return JordanReport(
            jordan=True,
            inner=bracket.inner,
            outer=bracket.outer,
            measure=(bracket.inner + bracket.outer) / 2,
            witness=(A, B),
        )
    if bracket.certified_diverged:
        return JordanReport(jordan=False, inner=bracket.inner, outer=bracket.outer)
    return JordanReport(jordan=None, inner=bracket.inner, outer=bracket.outer)


def integrate_simple(cells, fam: VolumeFam, epsilon, budget: int = DEFAULT_BUDGET) -> IntegralReport:
    """Integral of a simple function given as (region, constant) cells.

    Integrable iff every cell is Jordan at the working tolerance; a
    certified non-Jordan cell with pairwise distinct nonzero constants
    certifies non-integrability.
    """
    eps = as_fraction(str(epsilon)) if isinstance(epsilon, float) else as_fraction(epsilon)
    consts = [as_fraction(str(c)) if isinstance(c, float) else as_fraction(c) for _, c in cells]
    regions = [region_of(E) for E, _ in cells]
    boxy = [r for r in regions if isinstance(r, BoxElem)]
    for i in range(len(boxy)):
        for j in range(i + 1, len(boxy)):
            for a in boxy[i].boxes:
                for b in boxy[j].boxes:
                    if box_intersect(a, b) is not None:
                        raise InputError("simple-function cells overlap")
    scale = max(sum(abs(c) for c in consts), Fraction(1))
    per_cell_eps = eps / (scale * max(len(cells), 1))
    reports = [is_jordan(r, fam, per_cell_eps, budget) for r in regions]
    lower = Fraction(0)
    upper = Fraction(0)
    for c, rep in zip(consts, reports):
        lo, hi = rep.inner, rep.outer
        if c >= 0:
            lower += c * lo
            upper += c * hi
        else:
            lower += c * hi
            upper += c * lo
    if all(rep.jordan for rep in reports):
        value = sum((c * rep.measure for c, rep in zip(consts, reports)), Fraction(0))
        return IntegralReport(
            status=INTEGRABLE, lower=lower, upper=upper, value=value,
            epsilon=eps, backend="box",
        )
    distinct = len(set(consts)) == len(consts) and all(c != 0 for c in consts)
    if distinct and any(rep.jordan is False for rep in reports):
        return IntegralReport(
            status=NOT_INTEGRABLE, lower=lower, upper=upper, epsilon=eps, backend="box",
        )
    return IntegralReport(status=UNDECIDED, lower=lower, upper=upper, epsilon=eps, backend="box")
