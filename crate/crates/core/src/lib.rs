//! Bifurcation sets of versal unfoldings of D4 germs.
//!
//! The crate realizes each sheet of the bifurcation set as a blow-up
//! parametrization `b(θ, z)`, evaluates its fundamental forms and principal
//! curvatures, and classifies the parabolic-curve configurations near the
//! singular point.

pub mod analysis;
pub mod error;
pub mod geometry;
pub mod poly;
pub mod series;
pub mod solver;
pub mod unfolding;

pub use error::{D4Error, Result};
pub use solver::{
    alpha_beta, frame, implicit_jet, parametrize, singular_directions, solve_point, Branch, ChartPoint,
    Derivs2, FrameData, ImplicitJet, Sheet, SingularDirections, Solution, SolverOptions,
};
pub use unfolding::{
    evaluate_jet, hessian_det, morse_rank, reduce_spec, reduce_to_normal_form, validate_normal_form, CoeffKey,
    NormalFormReport, PqrJet, ScalarJet, Sign, UnfoldingSpec,
};
pub use geometry::{
    curvatures, edge_curvatures, edge_k_polynomials, expansion_coefficients, fundamental_forms, normal_vector,
    sample, Curvatures, EdgeCurvatures, ExpansionCoefficients, FundamentalForms, SurfaceSample,
};
pub use analysis::{
    adapted_pair_check, budan_sign_changes, classify_configuration, discriminant, parabolic_cubic,
    parabolic_directions, ridge_subparabolic_directions, sturm_root_count, ClassificationInput, ConfigurationLabel,
    CubicPoly, Direction, DirectionKind, DirectionSet, Endpoint, HalfLine, HypTrigPoly,
};
