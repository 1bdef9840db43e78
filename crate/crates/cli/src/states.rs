//! Theory and state specifications from the command line.

use anyhow::{anyhow, bail, Context, Result};
use opinfo_core::nalgebra::{DMatrix, DVector};
use opinfo_core::num_complex::Complex64 as C64;
use opinfo_core::theories::{quantum, squit};
use opinfo_core::{StateVec, SystemLabel, TheoryId};

/// A theory name with an optional dimension (`classical`, `quantum:3`, `squit`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TheorySpec {
    pub theory: TheoryId,
    pub dim: Option<usize>,
}

impl TheorySpec {
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        let (name, dim) = match s.split_once(':') {
            Some((n, d)) => (n.to_string(), Some(d.trim().parse::<usize>().with_context(|| format!("bad dimension in `{s}`"))?)),
            None => (s.clone(), None),
        };
        let theory = match name.as_str() {
            "classical" | "c" => TheoryId::Classical,
            "quantum" | "q" => TheoryId::Quantum,
            "squit" | "boxworld" => TheoryId::Boxworld,
            _ => bail!("unknown theory `{name}`; expected classical, quantum or squit"),
        };
        if let Some(d) = dim {
            if d < 2 {
                bail!("dimension must be at least 2");
            }
            if theory == TheoryId::Boxworld {
                bail!("squit takes no dimension");
            }
        }
        Ok(Self { theory, dim })
    }

    pub fn name(&self) -> &'static str {
        match self.theory {
            TheoryId::Classical => "classical",
            TheoryId::Quantum => "quantum",
            TheoryId::Boxworld => "squit",
        }
    }

    fn system(&self, dim: usize) -> Result<SystemLabel> {
        if let Some(d) = self.dim {
            if d != dim {
                bail!("state has dimension {dim} but the theory was given as {}:{d}", self.name());
            }
        }
        Ok(match self.theory {
            TheoryId::Classical => SystemLabel::classical(dim),
            TheoryId::Quantum => SystemLabel::quantum(dim),
            TheoryId::Boxworld => SystemLabel::squit(),
        })
    }

    /// Default system when no state fixes the dimension.
    pub fn default_system(&self) -> SystemLabel {
        match self.theory {
            TheoryId::Boxworld => SystemLabel::squit(),
            _ => self.system(self.dim.unwrap_or(2)).expect("consistent dimension"),
        }
    }
}

/// A parsed state with the identifier reported in output rows.
#[derive(Debug, Clone)]
pub struct NamedState {
    pub id: String,
    pub state: StateVec,
}

fn numbers(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|x| x.trim().parse::<f64>().with_context(|| format!("`{x}` is not a number")))
        .collect()
}

fn classical(theory: &TheorySpec, p: &[f64]) -> Result<StateVec> {
    let sys = theory.system(p.len())?;
    StateVec::from_slice(sys, p).map_err(|e| anyhow!("{e}"))
}

fn quantum_diag(theory: &TheorySpec, p: &[f64]) -> Result<StateVec> {
    let sys = theory.system(p.len())?;
    let op = DMatrix::from_diagonal(&DVector::from_iterator(p.len(), p.iter().map(|&x| C64::new(x, 0.0))));
    let coords = quantum::from_operator(&sys, &op).map_err(|e| anyhow!("{e}"))?;
    StateVec::new(sys, coords).map_err(|e| anyhow!("{e}"))
}

fn qubit_bloch(theory: &TheorySpec, r: &[f64]) -> Result<StateVec> {
    let [x, y, z] = r else {
        bail!("a Bloch vector has three components");
    };
    let sys = theory.system(2)?;
    let c = |re: f64, im: f64| C64::new(re, im);
    let op = DMatrix::from_row_slice(2, 2, &[c(1.0 + z, 0.0), c(*x, -*y), c(*x, *y), c(1.0 - z, 0.0)]).map(|v| v * 0.5);
    let coords = quantum::from_operator(&sys, &op).map_err(|e| anyhow!("{e}"))?;
    StateVec::new(sys, coords).map_err(|e| anyhow!("{e}"))
}

fn squit_state(x: f64, y: f64) -> Result<StateVec> {
    StateVec::new(SystemLabel::squit(), squit::state(x, y)).map_err(|e| anyhow!("{e}"))
}

/// Parse a state for `theory`: a preset name or explicit coordinates.
///
/// Classical states are probability lists. Quantum states are
/// `diag:p0,p1,...` or `bloch:x,y,z`. Squit states are `x,y`.
pub fn parse_state(theory: &TheorySpec, spec: &str) -> Result<NamedState> {
    let spec = spec.trim();
    let id = spec.to_string();
    let lower = spec.to_ascii_lowercase();
    let state = match (theory.theory, lower.as_str()) {
        (TheoryId::Classical, "shannon") => classical(theory, &[0.89, 0.11])?,
        (TheoryId::Classical, "tight") => classical(theory, &[0.75, 0.25])?,
        (TheoryId::Classical, "uniform") => {
            let d = theory.dim.unwrap_or(2);
            classical(theory, &vec![1.0 / d as f64; d])?
        }
        (TheoryId::Classical, "trit") => classical(theory, &[1.0 / 3.0; 3])?,
        (TheoryId::Classical, "pure" | "e0") => {
            let d = theory.dim.unwrap_or(2);
            let mut p = vec![0.0; d];
            p[0] = 1.0;
            classical(theory, &p)?
        }
        (TheoryId::Classical, _) => classical(theory, &numbers(spec)?)?,
        (TheoryId::Quantum, "schumacher") => quantum_diag(theory, &[0.9, 0.1])?,
        (TheoryId::Quantum, "mixed") => {
            let d = theory.dim.unwrap_or(2);
            quantum_diag(theory, &vec![1.0 / d as f64; d])?
        }
        (TheoryId::Quantum, "pure" | "ket0") => {
            let d = theory.dim.unwrap_or(2);
            let mut p = vec![0.0; d];
            p[0] = 1.0;
            quantum_diag(theory, &p)?
        }
        (TheoryId::Quantum, "plus") => qubit_bloch(theory, &[1.0, 0.0, 0.0])?,
        (TheoryId::Quantum, _) => {
            if let Some(rest) = lower.strip_prefix("diag:") {
                quantum_diag(theory, &numbers(rest)?)?
            } else if let Some(rest) = lower.strip_prefix("bloch:") {
                qubit_bloch(theory, &numbers(rest)?)?
            } else {
                bail!("quantum states are presets, `diag:p0,p1,...` or `bloch:x,y,z`; got `{spec}`")
            }
        }
        (TheoryId::Boxworld, "center") => squit_state(0.0, 0.0)?,
        (TheoryId::Boxworld, "corner" | "pure") => squit_state(1.0, 1.0)?,
        (TheoryId::Boxworld, "edge") => squit_state(1.0, 0.0)?,
        (TheoryId::Boxworld, _) => match numbers(spec)?.as_slice() {
            [x, y] => squit_state(*x, *y)?,
            _ => bail!("squit states are `x,y`; got `{spec}`"),
        },
    };
    if !state.is_normalized() {
        bail!("state `{spec}` is not normalized");
    }
    Ok(NamedState { id, state })
}
