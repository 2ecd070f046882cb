"""Shift dynamics and transfer-operator spectra on compact quotients of
affine buildings: exact root-system combinatorics, sector-germ enumeration,
ultrametrics, rational transfer matrices, and Koszul joint spectra."""

from .rootdata import (
    Coweight,
    ParameterSystem,
    RootSystem,
    build_root_system,
    coweight_norm,
    embed_shift,
    translation_parameter,
    truncated_sector,
    type_rotations,
)
from .chamber import (
    ChamberSystem,
    ValidationReport,
    from_bipartite_graph,
    from_triangle_presentation,
    load,
    save,
    validate,
)
from .sectors import Germ, GermTable, SectorSpace, enumerate_germs
from .transfer import (
    TransferMatrix,
    apply,
    check_fn_invariance,
    check_lasota_yorke,
    lipschitz_seminorm,
    pi_projection,
    transfer_matrix,
)
from .spectra import (
    Character,
    eigen,
    homotopy_zero_check,
    joint_spectrum,
    koszul_complexes,
    parametrix,
    taylor_report,
)

__version__ = "0.1.0"

__all__ = [
    "Coweight",
    "ParameterSystem",
    "RootSystem",
    "build_root_system",
    "coweight_norm",
    "embed_shift",
    "translation_parameter",
    "truncated_sector",
    "type_rotations",
    "ChamberSystem",
    "ValidationReport",
    "from_bipartite_graph",
    "from_triangle_presentation",
    "load",
    "save",
    "validate",
    "Germ",
    "GermTable",
    "SectorSpace",
    "enumerate_germs",
    "TransferMatrix",
    "apply",
    "check_fn_invariance",
    "check_lasota_yorke",
    "lipschitz_seminorm",
    "pi_projection",
    "transfer_matrix",
    "Character",
    "eigen",
    "homotopy_zero_check",
    "joint_spectrum",
    "koszul_complexes",
    "parametrix",
    "taylor_report",
    "__version__",
]
