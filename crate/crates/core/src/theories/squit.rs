//! Box-world systems built from one squit and classical factors.
//!
//! A squit state has coordinates `(x, y, n)` with `|x| ≤ n`, `|y| ≤ n`; an
//! effect has coordinates `(α, β, γ)` in the same order and pairs as
//! `αx + βy + γn`. With classical factors the cone splits into independent
//! squit blocks, one per classical index.

use nalgebra::DVector;

use crate::system::{Atom, SystemLabel};

/// Coordinate index of `x` in the squit triple.
pub const X: usize = 0;
pub const Y: usize = 1;
pub const N: usize = 2;

/// Squit coordinate triples of a box-world system, as index triples `[x, y, n]`.
pub fn blocks(sys: &SystemLabel) -> Vec<[usize; 3]> {
    let factors = sys.factors();
    let Some(pos) = factors.iter().position(|a| *a == Atom::Squit) else {
        return Vec::new();
    };
    let pre: usize = factors[..pos].iter().map(|a| a.dim()).product();
    let post: usize = factors[pos + 1..].iter().map(|a| a.dim()).product();
    let mut out = Vec::with_capacity(pre * post);
    for i in 0..pre {
        for j in 0..post {
            let at = |s: usize| (i * 3 + s) * post + j;
            out.push([at(X), at(Y), at(N)]);
        }
    }
    out
}

pub fn unit(sys: &SystemLabel) -> DVector<f64> {
    let mut u = DVector::zeros(sys.dim());
    for b in blocks(sys) {
        u[b[N]] = 1.0;
    }
    u
}

pub fn state_in_cone(sys: &SystemLabel, coords: &DVector<f64>, tol: f64) -> bool {
    let mut total = 0.0;
    for [x, y, n] in blocks(sys) {
        let (x, y, n) = (coords[x], coords[y], coords[n]);
        if n < -tol || x.abs() > n + tol || y.abs() > n + tol {
            return false;
        }
        total += n;
    }
    total <= 1.0 + tol
}

/// Facet test `γ − |α| − |β| ≥ 0`, `γ + |α| + |β| ≤ 1` on every block.
pub fn effect_valid(sys: &SystemLabel, coords: &DVector<f64>, tol: f64) -> bool {
    blocks(sys).into_iter().all(|[x, y, n]| {
        let (a, b, g) = (coords[x], coords[y], coords[n]);
        g - a.abs() - b.abs() >= -tol && g + a.abs() + b.abs() <= 1.0 + tol
    })
}

/// Pure states are corners `(±1, ±1, 1)` in a single block.
pub fn is_pure(sys: &SystemLabel, coords: &DVector<f64>, tol: f64) -> bool {
    let mut hit = 0;
    for [x, y, n] in blocks(sys) {
        let (x, y, n) = (coords[x], coords[y], coords[n]);
        if n.abs() <= tol && x.abs() <= tol && y.abs() <= tol {
            continue;
        }
        if (n - 1.0).abs() <= tol && (x.abs() - 1.0).abs() <= tol && (y.abs() - 1.0).abs() <= tol {
            hit += 1;
        } else {
            return false;
        }
    }
    hit == 1
}

/// The eight linear facets of the single-squit effect polytope, as
/// `(normal, offset)` with `normal · (α, β, γ) ≤ offset`.
pub fn effect_facets() -> Vec<(DVector<f64>, f64)> {
    let mut out = Vec::with_capacity(8);
    for sa in [1.0, -1.0] {
        for sb in [1.0, -1.0] {
            // |α| + |β| ≤ γ
            out.push((DVector::from_vec(vec![sa, sb, -1.0]), 0.0));
            // γ + |α| + |β| ≤ 1
            out.push((DVector::from_vec(vec![sa, sb, 1.0]), 1.0));
        }
    }
    out
}

/// The four corners `(x, y)` in counter-clockwise order starting at `(1, 1)`.
pub const CORNERS: [(f64, f64); 4] = [(1.0, 1.0), (-1.0, 1.0), (-1.0, -1.0), (1.0, -1.0)];

pub fn state(x: f64, y: f64) -> DVector<f64> {
    DVector::from_vec(vec![x, y, 1.0])
}

/// Effect with coordinates `(γ, α, β)` in the usual notation.
pub fn effect(gamma: f64, alpha: f64, beta: f64) -> DVector<f64> {
    DVector::from_vec(vec![alpha, beta, gamma])
}

/// The four extremal nontrivial effects `(1 ± x)/2`, `(1 ± y)/2`.
pub fn extremal_effects() -> [DVector<f64>; 4] {
    [
        effect(0.5, 0.5, 0.0),
        effect(0.5, -0.5, 0.0),
        effect(0.5, 0.0, 0.5),
        effect(0.5, 0.0, -0.5),
    ]
}
