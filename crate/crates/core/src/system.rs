//! System labels and the composition rule shared by every theory.
//!
//! A system is an ordered list of atomic factors. Real coordinates of a
//! composite are ordered lexicographically over the factor coordinates, the
//! first factor being the most significant digit. Trivial (dimension-one)
//! factors are dropped on composition, so `A ⊗ I == A`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The operational theory a system belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TheoryId {
    Classical,
    Quantum,
    Boxworld,
}

impl fmt::Display for TheoryId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TheoryId::Classical => "classical",
            TheoryId::Quantum => "quantum",
            TheoryId::Boxworld => "boxworld",
        })
    }
}

/// An atomic system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Atom {
    /// Classical system with `d` perfectly distinguishable states.
    Classical(usize),
    /// Quantum system on a `d`-dimensional Hilbert space.
    Quantum(usize),
    /// Box-world system with a square state space.
    Squit,
}

impl Atom {
    /// Linear dimension of the real state space.
    pub fn dim(self) -> usize {
        match self {
            Atom::Classical(d) => d,
            Atom::Quantum(d) => d * d,
            Atom::Squit => 3,
        }
    }

    pub fn is_trivial(self) -> bool {
        self.dim() == 1
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Classical(d) => write!(f, "c{d}"),
            Atom::Quantum(d) => write!(f, "q{d}"),
            Atom::Squit => f.write_str("squit"),
        }
    }
}

/// Label of a (possibly composite) system.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SystemLabel {
    theory: TheoryId,
    factors: Vec<Atom>,
}

impl SystemLabel {
    pub fn classical(d: usize) -> Self {
        Self::atomic(TheoryId::Classical, Atom::Classical(d))
    }

    pub fn quantum(d: usize) -> Self {
        Self::atomic(TheoryId::Quantum, Atom::Quantum(d))
    }

    pub fn squit() -> Self {
        Self::atomic(TheoryId::Boxworld, Atom::Squit)
    }

    /// The trivial system of a theory (real dimension 1).
    pub fn trivial(theory: TheoryId) -> Self {
        let atom = match theory {
            TheoryId::Quantum => Atom::Quantum(1),
            _ => Atom::Classical(1),
        };
        Self::atomic(theory, atom)
    }

    fn atomic(theory: TheoryId, atom: Atom) -> Self {
        Self {
            theory,
            factors: vec![atom],
        }
    }

    /// Build a system from factors, applying the composition rule.
    pub fn from_factors(factors: &[Atom]) -> Result<Self> {
        let Some(first) = factors.first() else {
            return Err(Error::InvalidArgument("empty factor list".into()));
        };
        let mut sys = Self::atomic(theory_of(*first), *first);
        for atom in &factors[1..] {
            sys = sys.compose(&Self::atomic(theory_of(*atom), *atom))?;
        }
        Ok(sys)
    }

    pub fn theory(&self) -> TheoryId {
        self.theory
    }

    pub fn factors(&self) -> &[Atom] {
        &self.factors
    }

    /// Linear dimension `D_A` of the real state space.
    pub fn dim(&self) -> usize {
        self.factors.iter().map(|a| a.dim()).product()
    }

    pub fn is_trivial(&self) -> bool {
        self.dim() == 1
    }

    /// Hilbert-space dimension of a quantum system.
    pub fn hilbert_dim(&self) -> Option<usize> {
        if self.theory != TheoryId::Quantum {
            return None;
        }
        Some(
            self.factors
                .iter()
                .map(|a| match a {
                    Atom::Quantum(d) => *d,
                    _ => 1,
                })
                .product(),
        )
    }

    /// Number of squit factors.
    pub fn squit_count(&self) -> usize {
        self.factors.iter().filter(|a| **a == Atom::Squit).count()
    }

    /// Parallel composition `self ⊗ other`.
    pub fn compose(&self, other: &SystemLabel) -> Result<SystemLabel> {
        if other.is_trivial() {
            return Ok(self.clone());
        }
        if self.is_trivial() {
            return Ok(other.clone());
        }
        use TheoryId::*;
        let theory = match (self.theory, other.theory) {
            (a, b) if a == b && a != Boxworld => a,
            (Boxworld, Classical) | (Classical, Boxworld) => Boxworld,
            (Boxworld, Boxworld) => {
                return Err(Error::UnsupportedComposition(format!(
                    "{self} ⊗ {other}: box-world composites are restricted to one squit with classical factors"
                )))
            }
            (a, b) => {
                return Err(Error::UnsupportedComposition(format!(
                    "{self} ⊗ {other}: cannot compose {a} with {b}"
                )))
            }
        };
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().copied());
        let sys = SystemLabel { theory, factors };
        if sys.squit_count() > 1 {
            return Err(Error::UnsupportedComposition(format!(
                "{self} ⊗ {other}: squit ⊗ squit is not supported"
            )));
        }
        Ok(sys)
    }

    /// `self^{⊗n}`; `n == 0` gives the trivial system.
    pub fn power(&self, n: usize) -> Result<SystemLabel> {
        let mut out = SystemLabel::trivial(self.theory);
        for _ in 0..n {
            out = out.compose(self)?;
        }
        Ok(out)
    }

    /// If `self` starts with the factors of `prefix`, the remaining system.
    pub fn strip_prefix(&self, prefix: &SystemLabel) -> Option<SystemLabel> {
        if prefix.is_trivial() {
            return Some(self.clone());
        }
        let rest = self.factors.strip_prefix(prefix.factors.as_slice())?;
        if rest.is_empty() {
            return Some(SystemLabel::trivial(self.theory));
        }
        SystemLabel::from_factors(rest).ok()
    }

    /// Parse a theory selection string: `classical:d`, `quantum:d` or `squit`.
    pub fn parse(spec: &str) -> Result<SystemLabel> {
        let spec = spec.trim();
        if spec.eq_ignore_ascii_case("squit") || spec.eq_ignore_ascii_case("boxworld") {
            return Ok(SystemLabel::squit());
        }
        let (name, d) = spec
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("expected `classical:d`, `quantum:d` or `squit`, got `{spec}`")))?;
        let d: usize = d
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad dimension in `{spec}`")))?;
        if d < 2 {
            return Err(Error::Parse(format!("dimension must be at least 2 in `{spec}`")));
        }
        match name.trim().to_ascii_lowercase().as_str() {
            "classical" | "c" => Ok(SystemLabel::classical(d)),
            "quantum" | "q" => Ok(SystemLabel::quantum(d)),
            _ => Err(Error::Parse(format!("unknown theory `{name}`"))),
        }
    }
}

fn theory_of(atom: Atom) -> TheoryId {
    match atom {
        Atom::Classical(_) => TheoryId::Classical,
        Atom::Quantum(_) => TheoryId::Quantum,
        Atom::Squit => TheoryId::Boxworld,
    }
}

impl fmt::Display for SystemLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let [atom] = self.factors.as_slice() {
            return match atom {
                Atom::Classical(d) => write!(f, "classical:{d}"),
                Atom::Quantum(d) => write!(f, "quantum:{d}"),
                Atom::Squit => f.write_str("squit"),
            };
        }
        let parts: Vec<String> = self.factors.iter().map(|a| a.to_string()).collect();
        write!(f, "{}[{}]", self.theory, parts.join("⊗"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dims_multiply() {
        let q = SystemLabel::quantum(2);
        assert_eq!(q.dim(), 4);
        assert_eq!(q.power(3).unwrap().dim(), 64);
        let c = SystemLabel::classical(3);
        assert_eq!(c.compose(&SystemLabel::classical(2)).unwrap().dim(), 6);
    }

    #[test]
    fn trivial_factor_is_dropped() {
        let q = SystemLabel::quantum(2);
        let t = SystemLabel::trivial(TheoryId::Quantum);
        assert_eq!(q.compose(&t).unwrap(), q);
        assert_eq!(t.compose(&q).unwrap(), q);
        assert_eq!(q.power(0).unwrap().dim(), 1);
    }

    #[test]
    fn composition_rules() {
        let s = SystemLabel::squit();
        let c = SystemLabel::classical(2);
        let sc = s.compose(&c).unwrap();
        assert_eq!(sc.theory(), TheoryId::Boxworld);
        assert_eq!(sc.dim(), 6);
        assert!(matches!(s.compose(&s), Err(Error::UnsupportedComposition(_))));
        assert!(matches!(
            SystemLabel::quantum(2).compose(&c),
            Err(Error::UnsupportedComposition(_))
        ));
    }

    #[test]
    fn parse_theory_strings() {
        assert_eq!(SystemLabel::parse("classical:3").unwrap(), SystemLabel::classical(3));
        assert_eq!(SystemLabel::parse("quantum:2").unwrap(), SystemLabel::quantum(2));
        assert_eq!(SystemLabel::parse("squit").unwrap(), SystemLabel::squit());
        assert!(SystemLabel::parse("quantum:1").is_err());
        assert!(SystemLabel::parse("fermion:2").is_err());
        assert_eq!(SystemLabel::classical(2).to_string(), "classical:2");
    }

    #[test]
    fn strip_prefix_yields_ancilla() {
        let a = SystemLabel::quantum(2).power(2).unwrap();
        let joint = a.compose(&SystemLabel::quantum(3)).unwrap();
        assert_eq!(joint.strip_prefix(&a).unwrap(), SystemLabel::quantum(3));
        assert!(joint.strip_prefix(&SystemLabel::quantum(3)).is_none());
        assert!(a.strip_prefix(&a).unwrap().is_trivial());
    }
}
