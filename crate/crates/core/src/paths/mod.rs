//! Partitions, sampled paths, path generators and variation analytics.

mod fbm;
mod generate;
mod io;
mod partition;
mod path;
mod variation;

pub use fbm::{fbm_path, fbm_path_with, fgn_covariance, FbmMethod};
pub use generate::{brownian_path, constant_path, exp_price_path, function_path, gbm_path, integral_path, linear_path};
pub use io::{read_path_csv, write_path_csv};
pub use partition::{Partition, PartitionKind, PartitionSequence, MAX_LEVEL};
pub use path::Path;
pub use variation::{
    one_variation, oscillation, oscillation_inclusive, pth_variation, pth_variation_at_level, sup_p_variation,
    VariationReport, SUP_VARIATION_MAX_POINTS,
};
