//! Beta-expansions, admissible-word counting, digit-frequency entropy
//! spectra, Erdős–Rényi window averages and Moran word-set constructions.
//!
//! Orbit arithmetic is generic over [`OrbitScalar`] and counting over
//! [`Count`]; the aliases below fix the usual instantiations.

pub mod automaton;
pub mod counting;
pub mod digits;
pub mod entropy;
pub mod erdos_renyi;
pub mod error;
pub mod expansion;
pub mod moran;
pub mod scalar;

pub use automaton::{is_admissible, zero_run_profile, Admissibility, ParryAutomaton, RunOutcome, ZeroRunProfile};
pub use counting::{count_full_words, count_with_sum, count_words, Backend, SumConstraint, SumCountTable};
pub use digits::{DigitSource, DigitStream, DigitWord};
pub use entropy::{
    alpha_star, entropy_curve, er_spectrum, lambda_max, solve_beta_m, AlphaStarMethod, EntropyCurve,
    EntropySchedule, EntropyVariant, ErSpectrum, LambdaMethod,
};
pub use erdos_renyi::{er_average_trace, slowly_varying_check, window_max_sum, ErTrace, WindowFunction, WindowKind};
pub use error::{Error, Result};
pub use expansion::{
    evaluate, expand, expansion_of_one, transform, BetaParameter, ParryClass, Precision,
};
pub use moran::{
    alpha_moran_stream, build_levels, full_moran_words, homogeneous_moran_dim, MoranLevels, MoranSpec,
    MoranStreamVariant, SetKind, WordSetLevel,
};
pub use scalar::{Count, LogCount, OrbitScalar};

/// Floating scalar of the fast orbit paths.
pub type Real = f64;
/// Exact scalar used to certify digits.
pub type Exact = num_rational::BigRational;
/// Exact word counts.
pub type ExactCountTable = SumCountTable<num_bigint::BigUint>;
/// Log-domain word counts for long words.
pub type LogCountTable = SumCountTable<LogCount>;
