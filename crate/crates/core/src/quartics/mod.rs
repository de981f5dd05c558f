//! Plane quartics: exact forms, smoothness, bitangents and tangent pairs.

mod bitangent;
mod form;
mod genericity;
mod line;
mod pair;
mod smooth;

pub use bitangent::{
    bitangents, bitangents_numeric, classify_tangency, classify_tangency_numeric, distance_to_set,
    square_fit, BitangentSet, BitangentStatus, SquareFit, Tangency, TangencyReport, BITANGENT_COUNT,
};
pub use form::{
    cnorm, cross, monomial_count, monomial_index, monomials, normalize_max, projective_distance,
    CPoint, ComplexForm, TernaryForm,
};
pub use genericity::{genericity_check, genericity_from_sets, Condition, GenericityReport, Verdict};
pub use line::{restrict_to_line, BinaryForm, CLine, Line};
pub use pair::{
    intersect_quartic_conic, is_smooth_conic, make_tangent_pair, points_on_conic, ConicFit,
    PairStatus, TangencyData, TangentPair,
};
pub use smooth::{is_smooth, singular_point};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum QuarticError {
    #[error("expected {expected} coefficients, found {found}")]
    CoefficientCount { expected: usize, found: usize },
    #[error("the zero form")]
    ZeroForm,
    #[error("terms of different degrees")]
    NotHomogeneous,
    #[error("all line coordinates vanish")]
    ZeroLine,
    #[error("the line is a component of the curve")]
    LineInCurve,
    #[error("expected degree {expected}, found {found}")]
    WrongDegree { expected: usize, found: usize },
    #[error("the curve is singular")]
    NotSmooth,
    #[error("the conic is singular")]
    ConicNotSmooth,
    #[error("need at least 6 points, got {0}")]
    TooFewPoints(usize),
    #[error("cannot parse form at byte {at}: {reason}")]
    Parse { at: usize, reason: &'static str },
}

/// Numerical thresholds for the floating-point stages.
#[derive(Clone, Debug, PartialEq)]
pub struct Tolerances {
    /// Newton step size at which a start is considered converged.
    pub newton: f64,
    pub newton_iterations: usize,
    /// Number of affine charts used for bitangent starts.
    pub charts: usize,
    pub starts_per_chart: usize,
    /// Projective distance below which two lines are identified.
    pub dedup: f64,
    /// Maximum square-fit residual of a certified bitangent.
    pub certify: f64,
    /// Required minimum distance between distinct bitangents.
    pub separation: f64,
    /// Normalized discriminant below which a bitangent is a hyperflex line.
    pub hyperflex: f64,
    /// Upper bound for the smallest singular value of a Veronese matrix.
    pub conic: f64,
    /// Lower bound for the second smallest singular value.
    pub conic_gap: f64,
    /// Residual threshold for incidence and tangency tests.
    pub tangency: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            newton: 1e-14,
            newton_iterations: 60,
            charts: 3,
            starts_per_chart: 3000,
            dedup: 1e-6,
            certify: 1e-9,
            separation: 1e-4,
            hyperflex: 1e-6,
            conic: 1e-8,
            conic_gap: 1e-4,
            tangency: 1e-7,
        }
    }
}
