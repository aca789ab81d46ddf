//! The nine non-abelian 4-dimensional Kähler Lie algebra families in a unitary
//! frame, their curvature decomposition, the analytic solvers for the
//! curvature condition, a brute-force numerical oracle, and the resulting
//! classification of projective special Kähler Lie groups.

mod families;
mod oracle;
mod report;
mod solver;

pub use families::{builtin_family, curvature_fit, curvature_table, CaseId, CurvatureFit, CurvatureRow, FamilyParams};
pub use oracle::{brute_force_solutions, BruteForceResult, D1Target};
pub use report::{
    analyse_curvature, classify, coframe_differentials, format_cubic, format_curvature, format_differentials, format_params,
    type_decomposition, ClassificationReport, ClassificationRow, CoframeTerm, CurvatureAnalysis, CurvatureType, PairKind, RowVerdict,
};
pub use solver::{phase_distance, solve_type_i, solve_type_ii, SolutionFamily, SolutionKind};
