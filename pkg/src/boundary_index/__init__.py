"""Local indices of vector fields at boundary zeros and exact checks of the
Poincaré–Hopf-type theorems with normal and tangential indices."""

from .charts import (
    BoundaryChart,
    ModelManifold,
    ZeroKind,
    ZeroRecord,
    ZeroType,
    boundary_chart,
    boundary_decompose,
    catalog,
    classify_boundary_zero,
    find_zeros,
    get_manifold,
    pushforward_field,
)
from .degree import (
    HemisphereMap,
    averaged_index,
    full_sphere_degree,
    intersection_number,
    is_admissible_pair,
    normalize_map,
    oracle_degree,
)
from .doubling import (
    CollarPush,
    DoubledMap,
    build_doubled_map,
    collar_push,
    doubled_zero_index,
    pushed_zero_index,
)
from .errors import *  # noqa: F401,F403
from .fieldlang import FieldDef, eval_field, negate_field, parse_field, print_field
from .halfint import HalfInt
from .indices import (
    IndexBundle,
    boundary_field_index,
    compute_bundle,
    local_index_interior,
    normal_local_index,
    tangential_local_index,
)
from .verify import (
    TheoremReport,
    verify_all_doubles,
    verify_double_consistency,
    verify_section3_identities,
    verify_theorem1,
    verify_theorem2,
    verify_theorem3,
    verify_theorem4,
)

__version__ = "0.1.0"
