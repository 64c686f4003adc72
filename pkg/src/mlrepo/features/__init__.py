"""Dataset-level and instance-level meta-feature computation."""

from .dataset import (DatasetMetaFeatures, MEASURE_NAMES, as_measure_dict,
                      boundary_fraction, compute_all, compute_geometry,
                      compute_landmarkers, compute_overlap,
                      compute_separability, compute_simple,
                      covering_sphere_fraction, minimum_spanning_tree,
                      neighbor_distance_ratio)
from .instance import (HARDNESS_NAMES, InstanceHardnessVector,
                       aggregate_hardness, as_hardness_dict, compute_hardness,
                       compute_disjunct_measures, compute_kdn,
                       compute_likelihood, compute_skew)

__all__ = [
    "DatasetMetaFeatures", "HARDNESS_NAMES", "InstanceHardnessVector",
    "MEASURE_NAMES", "aggregate_hardness", "as_hardness_dict",
    "as_measure_dict", "boundary_fraction", "compute_all",
    "compute_disjunct_measures", "compute_geometry", "compute_hardness",
    "compute_kdn", "compute_landmarkers", "compute_likelihood",
    "compute_overlap", "compute_separability", "compute_simple",
    "compute_skew", "covering_sphere_fraction", "minimum_spanning_tree",
    "neighbor_distance_ratio",
]
