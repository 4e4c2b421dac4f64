//! Configuration of parabolic curves and emanation directions of ridge and
//! subparabolic curves at the singular point.

pub mod adapted;
pub mod budan;
pub mod cubic;
pub mod directions;
pub mod sturm;

pub use adapted::{adapted_pair_check, HypTrigPoly};
pub use budan::{budan_sign_changes, sign_changes, HalfLine};
pub use cubic::{
    classify_configuration, discriminant, matching_row, oracle_regions, parabolic_cubic, printed_table, sign_quantities,
    ClassificationInput, ConfigurationLabel, CubicPoly, Regions, TableRow,
};
pub use directions::{
    curve_directions, parabolic_directions, ridge_subparabolic_directions, Direction, DirectionKind, DirectionSet,
    ScanOptions,
};
pub use sturm::{sturm_root_count, Endpoint};
