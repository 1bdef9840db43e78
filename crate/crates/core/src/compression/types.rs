//! Exact masses of the `K` most probable i.i.d. sequences via type classes.
//!
//! All sequences with the same letter counts share one probability, so the
//! top-`K` set is a union of whole classes plus part of one boundary class.
//! Class sizes are multinomials held as big integers; only the final
//! products with probabilities are taken in floating point.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Cap on the number of type classes enumerated.
pub const DEFAULT_CLASS_CAP: usize = 2_000_000;

/// One type class: letter counts, per-sequence log-probability and size.
#[derive(Debug, Clone)]
pub struct TypeClass {
    pub counts: Vec<usize>,
    pub ln_prob: f64,
    pub size: BigUint,
}

/// `ln` of a big integer, finite for any size.
pub fn ln_big(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().expect("fits in f64").ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().expect("64-bit value");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

fn class_count(n: usize, d: usize) -> u128 {
    // C(n + d − 1, d − 1)
    let mut c: u128 = 1;
    for i in 0..(d as u128 - 1) {
        c = c * (n as u128 + 1 + i) / (i + 1);
        if c > u64::MAX as u128 {
            return c;
        }
    }
    c
}

/// All type classes of length-`n` sequences over `probs`, most probable
/// first. Equal-probability classes are ordered by their count vectors
/// (reverse lexicographic, so classes using earlier letters more come first).
pub fn type_classes(probs: &[f64], n: usize, cap: usize) -> Result<Vec<TypeClass>> {
    let d = probs.len();
    if d == 0 {
        return Err(Error::InvalidArgument("empty distribution".into()));
    }
    let total = class_count(n, d);
    if total > cap as u128 {
        return Err(Error::CapExceeded {
            what: "type classes",
            value: total.min(usize::MAX as u128) as usize,
            cap,
        });
    }
    let mut fact = Vec::with_capacity(n + 1);
    fact.push(BigUint::one());
    for k in 1..=n {
        let next = &fact[k - 1] * BigUint::from(k);
        fact.push(next);
    }
    let ln_p: Vec<f64> = probs.iter().map(|p| p.ln()).collect();
    let mut out = Vec::with_capacity(total as usize);
    let mut counts = vec![0usize; d];
    enumerate(n, 0, &mut counts, &mut |c| {
        let mut denom = BigUint::one();
        for &k in c {
            denom *= &fact[k];
        }
        let size = &fact[n] / denom;
        let ln_prob = c
            .iter()
            .zip(&ln_p)
            .map(|(&k, &l)| if k == 0 { 0.0 } else { k as f64 * l })
            .sum();
        out.push(TypeClass {
            counts: c.to_vec(),
            ln_prob,
            size,
        });
    });
    out.sort_by(|a, b| b.ln_prob.total_cmp(&a.ln_prob).then_with(|| b.counts.cmp(&a.counts)));
    Ok(out)
}

fn enumerate(left: usize, pos: usize, counts: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
    let d = counts.len();
    if pos == d - 1 {
        counts[pos] = left;
        f(counts);
        return;
    }
    for k in (0..=left).rev() {
        counts[pos] = k;
        enumerate(left - k, pos + 1, counts, f);
    }
}

/// Kept and discarded probability mass when the `2^m` most probable
/// sequences are kept.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TopMass {
    pub kept: f64,
    pub discarded: f64,
}

pub fn top_mass(classes: &[TypeClass], m: usize) -> TopMass {
    let mut remaining = BigUint::one() << m;
    let (mut kept, mut discarded) = (0.0, 0.0);
    for c in classes {
        let mass = |count: &BigUint| {
            if count.is_zero() || c.ln_prob == f64::NEG_INFINITY {
                0.0
            } else {
                (ln_big(count) + c.ln_prob).exp()
            }
        };
        if remaining >= c.size {
            kept += mass(&c.size);
            remaining -= &c.size;
        } else {
            kept += mass(&remaining);
            discarded += mass(&(&c.size - &remaining));
            remaining = BigUint::zero();
        }
    }
    TopMass { kept, discarded }
}

/// Total mass of the classes selected by `keep`.
pub fn class_mass(classes: &[TypeClass], keep: impl Fn(&[usize]) -> bool) -> f64 {
    classes
        .iter()
        .filter(|c| keep(&c.counts) && c.ln_prob > f64::NEG_INFINITY)
        .map(|c| (ln_big(&c.size) + c.ln_prob).exp())
        .sum()
}
