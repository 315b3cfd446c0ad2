from .config import RunConfig
from .corners import CornerCertificate, certify_corner, cone_test, corner_scan
from .errors import (
    ContractViolationError,
    DegenerateInputError,
    DimensionError,
    InsufficientSamplingError,
    InvalidInputError,
    MatrixFileError,
    NumrangeError,
)
from .frames import Frame, PathProbe, haar_frame
from .numerics import ComplexMatrix
from .probes import ProbeReport, probe_derivatives
from .ranges import PointCloud, RangePoint, SupportResult, sample_cloud, support_exact_1d, support_stiefel, tau
from .serialization import load_matrix, write_matrix
from .verify import PropertyReport, TheoremReport, check_theorem_1_1, check_theorem_1_2, property_suite
from .workbench import Workbench

try:
    from .version import __version__, version
except ImportError:  # source tree without a build
    __version__ = version = "0.0.0"

__all__ = [
    "ComplexMatrix",
    "ContractViolationError",
    "CornerCertificate",
    "DegenerateInputError",
    "DimensionError",
    "Frame",
    "InsufficientSamplingError",
    "InvalidInputError",
    "MatrixFileError",
    "NumrangeError",
    "PathProbe",
    "PointCloud",
    "ProbeReport",
    "PropertyReport",
    "RangePoint",
    "RunConfig",
    "SupportResult",
    "TheoremReport",
    "Workbench",
    "certify_corner",
    "check_theorem_1_1",
    "check_theorem_1_2",
    "cone_test",
    "corner_scan",
    "haar_frame",
    "load_matrix",
    "probe_derivatives",
    "property_suite",
    "sample_cloud",
    "support_exact_1d",
    "support_stiefel",
    "tau",
    "write_matrix",
    "__version__",
    "version",
]
