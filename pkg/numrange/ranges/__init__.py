from .point import (
    CloudMeta,
    PointCloud,
    RangePoint,
    cloud_support,
    compress,
    leading_compressions,
    permute_cloud,
    permute_point,
    project_cloud,
    tau,
)
from .sampler import CloudSampler, augment_cloud, boundary_directions, diagonal_mixture_cloud, sample_cloud
from .support import SupportResult, riemannian_gradient, support_exact_1d, support_objective, support_stiefel

__all__ = [
    "CloudMeta",
    "PointCloud",
    "RangePoint",
    "cloud_support",
    "compress",
    "leading_compressions",
    "permute_cloud",
    "permute_point",
    "project_cloud",
    "tau",
    "CloudSampler",
    "augment_cloud",
    "boundary_directions",
    "diagonal_mixture_cloud",
    "sample_cloud",
    "SupportResult",
    "riemannian_gradient",
    "support_exact_1d",
    "support_objective",
    "support_stiefel",
]
