//! Compression schemes, their figures of merit, block coders and rates.

pub mod coders;
pub mod fom;
pub mod rates;
pub mod scheme;
pub mod types;

pub use coders::{
    measure_prepare_scheme, source_spectrum, typical_fidelity, typical_mass, typical_set_error,
    typical_set_scheme, typical_subspace_scheme,
};
pub use fom::{
    classical_error_prob, dilation_fom, ensemble_fom, fidelity_fom, pure_fom, ErrorProbability,
    FomCriterion, FomReport, FomSampling,
};
pub use rates::{estimate_info_content, rate_search, RateResult, RateTable, SchemeFamily};
pub use scheme::{conjugate_scheme, product_scheme, CompressionScheme};

#[cfg(test)]
mod tests;
