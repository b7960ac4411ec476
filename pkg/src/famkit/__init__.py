"""famkit: finitely additive measures on finite fields of sets, made executable.

Exact-rational construction, classification and extension of finitely
additive measures; generalized Darboux integration over finite algebras and
half-open boxes; Jordan measurability; Cantor-space integrability
diagnostics.  See the README for the CLI and problem-file formats.
"""

from ._refine import backend_name
from .approx import FiniteApprox, approx_uniform, approx_uniform_small, approx_with_integrals, uap_witness
from .boolalg import (
    Algebra,
    GroundSet,
    Partition,
    SetElem,
    ceil_in,
    contains,
    floor_in,
    generate_algebra,
    is_refinement,
    meet_partitions,
)
from .boxes import BoxElem, VolumeFam, make_box
from .cantor import (
    CantorClopen,
    Cylinder,
    cantor_integrate,
    clopen_measure,
    iota2_image,
    lebesgue_vitali_check,
    oscillation_cover,
)
from .errors import FamkitError, InputError
from .extend import (
    Certificate,
    ExtensionResult,
    PartialAssignment,
    amalgamate,
    compatible,
    extend_assignment,
    extend_one,
    extend_preserving_range,
    extend_with_filter,
    extension_bounds,
    fam_with_constraints,
    fam_with_integral_constraints,
    three_way_extend,
    ultrafilter_with_limits,
    value_range,
)
from .fam import (
    Fam,
    SupportWitness,
    classify,
    filter_fam,
    has_uap,
    point_mass,
    pushforward,
    restrict,
    uniform_fam,
    uniformly_supported,
)
from .functions import (
    DenseCodenseRegion,
    HalfPlaneRegion,
    IndicatorFn,
    LipschitzFn,
    PiecewiseConstantFn,
    PointRegion,
    PolynomialFn,
    RegionComplement,
    RegionIntersection,
    RegionUnion,
    triangle_under_diagonal,
)
from .integrate import (
    IntegralReport,
    JordanReport,
    infsum,
    integrate,
    integrate_over,
    integrate_simple,
    inner_measure,
    is_jordan,
    jordan_completion,
    measure_bracket,
    oscillation,
    outer_measure,
    pushforward_integral_check,
    supsum,
    ultrafilter_integrate,
    xi_star_converges,
)

__version__ = "0.1.0"
