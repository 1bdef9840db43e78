//! Smallest accepted code length per block length and error budget.

use serde::{Deserialize, Serialize};

use super::coders::{full_code_length, source_spectrum, typical_fidelity, QUANTUM_BLOCK_CAP};
use crate::error::{Error, Result};
use crate::opt::StateVec;
use crate::system::TheoryId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SchemeFamily {
    Typical,
    AllProjective,
    MeasurePrepare,
}

impl SchemeFamily {
    pub fn as_str(self) -> &'static str {
        match self {
            SchemeFamily::Typical => "typical",
            SchemeFamily::AllProjective => "all_projective",
            SchemeFamily::MeasurePrepare => "measure_prepare",
        }
    }
}

impl std::str::FromStr for SchemeFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "typical" => Ok(SchemeFamily::Typical),
            "all_projective" | "projective" => Ok(SchemeFamily::AllProjective),
            "measure_prepare" => Ok(SchemeFamily::MeasurePrepare),
            other => Err(Error::Parse(format!("unknown scheme family `{other}`"))),
        }
    }
}

/// Largest `d^N` enumerated by the projective family.
pub const PROJECTIVE_ENUMERATION_CAP: usize = 1 << 16;

/// Correlation fidelity of the best family member with code length `m`.
pub fn family_fidelity(spectrum: &[f64], n: usize, m: usize, family: SchemeFamily) -> Result<f64> {
    match family {
        SchemeFamily::Typical => typical_fidelity(spectrum, n, m),
        SchemeFamily::AllProjective => {
            let d = spectrum.len();
            let total = (d as f64).powi(n as i32);
            if total > PROJECTIVE_ENUMERATION_CAP as f64 {
                return Err(Error::CapExceeded {
                    what: "projective enumeration",
                    value: total.min(usize::MAX as f64) as usize,
                    cap: PROJECTIVE_ENUMERATION_CAP,
                });
            }
            let mut products = vec![1.0f64];
            for _ in 0..n {
                products = products
                    .iter()
                    .flat_map(|p| spectrum.iter().map(move |q| p * q))
                    .collect();
            }
            products.sort_by(|a, b| b.total_cmp(a));
            let kept: f64 = products.iter().take(1usize.checked_shl(m as u32).unwrap_or(usize::MAX)).sum();
            Ok(kept.min(1.0).powi(2))
        }
        SchemeFamily::MeasurePrepare => {
            if m > 0 {
                return Err(Error::InvalidArgument("measure-and-prepare schemes have M = 0".into()));
            }
            let top = spectrum.iter().copied().fold(0.0, f64::max);
            Ok(top.powi(2 * n as i32))
        }
    }
}

/// Result of a search for the smallest accepted code length.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateResult {
    pub n: usize,
    pub epsilon: f64,
    pub m: Option<usize>,
    /// Correlation fidelity at the returned `m`.
    pub fidelity: Option<f64>,
    pub family: SchemeFamily,
}

impl RateResult {
    pub fn rate(&self) -> Option<f64> {
        self.m.map(|m| m as f64 / self.n as f64)
    }
}

/// Smallest `M` whose family member has correlation fidelity `> 1 − ε`.
///
/// The value bounds the optimum over all schemes from above.
pub fn rate_search(rho: &StateVec, n: usize, epsilon: f64, family: SchemeFamily) -> Result<RateResult> {
    if !(epsilon > 0.0) {
        return Err(Error::InvalidArgument(format!("ε = {epsilon} must be positive")));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("block length must be positive".into()));
    }
    if rho.system().theory() == TheoryId::Quantum && n > QUANTUM_BLOCK_CAP {
        return Err(Error::CapExceeded {
            what: "quantum block length",
            value: n,
            cap: QUANTUM_BLOCK_CAP,
        });
    }
    let spectrum = source_spectrum(rho)?;
    let accept = |m: usize| -> Result<Option<f64>> {
        let f = family_fidelity(&spectrum, n, m, family)?;
        Ok((f > 1.0 - epsilon).then_some(f))
    };
    let done = |m: Option<usize>, fidelity: Option<f64>| RateResult {
        n,
        epsilon,
        m,
        fidelity,
        family,
    };
    if family == SchemeFamily::MeasurePrepare {
        let f = accept(0)?;
        return Ok(done(f.map(|_| 0), f));
    }
    let hi_m = full_code_length(spectrum.len(), n);
    let Some(f_hi) = accept(hi_m)? else {
        return Ok(done(None, None));
    };
    if let Some(f0) = accept(0)? {
        return Ok(done(Some(0), Some(f0)));
    }
    // Invariant: lo rejected, hi accepted.
    let (mut lo, mut hi, mut f_best) = (0usize, hi_m, f_hi);
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        match accept(mid)? {
            Some(f) => {
                hi = mid;
                f_best = f;
            }
            None => lo = mid,
        }
    }
    Ok(done(Some(hi), Some(f_best)))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateTable {
    pub family: SchemeFamily,
    pub rows: Vec<RateResult>,
    /// Rate at the largest `N` for the smallest `ε`, an upper-bound estimate
    /// of the information content within the family.
    pub estimate: Option<f64>,
}

pub fn estimate_info_content(
    rho: &StateVec,
    ns: &[usize],
    epsilons: &[f64],
    family: SchemeFamily,
) -> Result<RateTable> {
    if ns.is_empty() || epsilons.is_empty() {
        return Err(Error::InvalidArgument("need at least one N and one ε".into()));
    }
    let mut rows = Vec::with_capacity(ns.len() * epsilons.len());
    for &n in ns {
        for &eps in epsilons {
            rows.push(rate_search(rho, n, eps, family)?);
        }
    }
    let n_max = *ns.iter().max().expect("nonempty");
    let eps_min = epsilons.iter().copied().fold(f64::INFINITY, f64::min);
    let estimate = rows
        .iter()
        .find(|r| r.n == n_max && r.epsilon == eps_min)
        .and_then(RateResult::rate);
    Ok(RateTable {
        family,
        rows,
        estimate,
    })
}
