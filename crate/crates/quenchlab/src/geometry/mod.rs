//! Free boundary extraction and the geometric-measure estimators: growth
//! exponents, gradient bounds, density ratios, Harnack ratios, neighborhood
//! volumes, box-counting surface measure, Hausdorff distances and spherical
//! means.

mod boundary;
mod distance;
mod estimate;
mod report;

pub use boundary::{extract_free_boundary, select_fb_points, FreeBoundarySet};
pub use distance::{distance_field, DistanceField};
pub use estimate::{
    density_ratio, gradient_bound_check, growth_exponent_fit, hausdorff_distance,
    l1_harnack_check, neighborhood_volume, neighborhood_volume_table, spherical_mean_check,
    surface_measure_boxcount, tangential_harnack_ratio, BoxCountFit, GradientBound, GrowthFit,
    HarnackTable, NeighborhoodRow, SphericalMeans,
};
pub use report::{EstimateReport, NamedCheck, Provenance, ScaleRow, ScaleTable};
