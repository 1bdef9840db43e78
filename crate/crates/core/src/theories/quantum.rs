//! Quantum systems in a real Hermitian operator basis.
//!
//! Every atomic `d`-level system uses the normalized generalized Gell-Mann
//! basis `{I/√d, symmetric, antisymmetric, diagonal}` which is orthonormal
//! under the Hilbert-Schmidt inner product. Composite systems use Kronecker
//! products of the factor bases, so real coordinates of `ρ ⊗ σ` are the
//! Kronecker product of the coordinates and pairings are plain dot products:
//! `Tr(Eρ) = Σ_k e_k r_k`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::system::{Atom, SystemLabel, TheoryId};

/// Sparse Hermitian matrix: `(row, col, value)` entries.
type Sparse = Vec<(usize, usize, C64)>;

fn atom_basis(d: usize) -> Vec<Sparse> {
    let mut basis = Vec::with_capacity(d * d);
    let inv = 1.0 / (d as f64).sqrt();
    basis.push((0..d).map(|i| (i, i, C64::new(inv, 0.0))).collect());
    let h = std::f64::consts::FRAC_1_SQRT_2;
    for j in 0..d {
        for k in (j + 1)..d {
            basis.push(vec![(j, k, C64::new(h, 0.0)), (k, j, C64::new(h, 0.0))]);
        }
    }
    for j in 0..d {
        for k in (j + 1)..d {
            basis.push(vec![(j, k, C64::new(0.0, -h)), (k, j, C64::new(0.0, h))]);
        }
    }
    for l in 1..d {
        let norm = 1.0 / ((l * (l + 1)) as f64).sqrt();
        let mut e: Sparse = (0..l).map(|j| (j, j, C64::new(norm, 0.0))).collect();
        e.push((l, l, C64::new(-(l as f64) * norm, 0.0)));
        basis.push(e);
    }
    basis
}

/// Composite basis of a quantum system: one sparse matrix per real coordinate.
pub struct OperatorBasis {
    n: usize,
    elements: Vec<Sparse>,
}

impl OperatorBasis {
    pub fn new(sys: &SystemLabel) -> Result<Self> {
        let dims = quantum_factor_dims(sys)?;
        let mut elements: Vec<Sparse> = vec![vec![(0, 0, C64::new(1.0, 0.0))]];
        for &d in &dims {
            let atom = atom_basis(d);
            let mut next = Vec::with_capacity(elements.len() * atom.len());
            for prev in &elements {
                for a in &atom {
                    let mut e = Vec::with_capacity(prev.len() * a.len());
                    for &(r, c, v) in prev {
                        for &(ra, ca, va) in a {
                            e.push((r * d + ra, c * d + ca, v * va));
                        }
                    }
                    next.push(e);
                }
            }
            elements = next;
        }
        Ok(Self {
            n: dims.iter().product(),
            elements,
        })
    }

    /// Hilbert-space dimension.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// `Σ_k c_k B_k`.
    pub fn to_operator(&self, coords: &DVector<f64>) -> DMatrix<C64> {
        let mut op = DMatrix::<C64>::zeros(self.n, self.n);
        for (e, &c) in self.elements.iter().zip(coords.iter()) {
            if c == 0.0 {
                continue;
            }
            for &(r, col, v) in e {
                op[(r, col)] += v * c;
            }
        }
        op
    }

    /// `c_k = Re Tr(B_k X)`; exact for Hermitian `X`.
    pub fn to_coords(&self, op: &DMatrix<C64>) -> DVector<f64> {
        DVector::from_iterator(
            self.elements.len(),
            self.elements
                .iter()
                .map(|e| e.iter().map(|&(r, c, v)| (v * op[(c, r)]).re).sum()),
        )
    }

    /// Complex coefficients of an arbitrary (non-Hermitian) matrix.
    fn complex_coords(&self, op: &DMatrix<C64>) -> Vec<C64> {
        self.elements
            .iter()
            .map(|e| e.iter().map(|&(r, c, v)| v * op[(c, r)]).sum())
            .collect()
    }
}

fn quantum_factor_dims(sys: &SystemLabel) -> Result<Vec<usize>> {
    if sys.theory() != TheoryId::Quantum {
        return Err(Error::SystemMismatch(format!("{sys} is not a quantum system")));
    }
    Ok(sys
        .factors()
        .iter()
        .map(|a| match a {
            Atom::Quantum(d) => *d,
            _ => 1,
        })
        .collect())
}

pub fn to_operator(sys: &SystemLabel, coords: &DVector<f64>) -> Result<DMatrix<C64>> {
    let basis = OperatorBasis::new(sys)?;
    check_len(basis.len(), coords.len())?;
    Ok(basis.to_operator(coords))
}

pub fn from_operator(sys: &SystemLabel, op: &DMatrix<C64>) -> Result<DVector<f64>> {
    let basis = OperatorBasis::new(sys)?;
    if op.nrows() != basis.n() || op.ncols() != basis.n() {
        return Err(Error::DimensionMismatch {
            expected: basis.n(),
            got: op.nrows(),
        });
    }
    Ok(basis.to_coords(op))
}

fn check_len(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::DimensionMismatch { expected, got });
    }
    Ok(())
}

/// Eigenvalues (ascending) of a Hermitian matrix.
pub fn hermitian_eigenvalues(op: &DMatrix<C64>) -> Vec<f64> {
    let mut ev: Vec<f64> = hermitize(op).symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| a.total_cmp(b));
    ev
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues descending.
/// Returns `(values, vectors-as-columns)`.
pub fn hermitian_eigen(op: &DMatrix<C64>) -> (Vec<f64>, DMatrix<C64>) {
    let eig = hermitize(op).symmetric_eigen();
    let mut idx: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    idx.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = idx.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_columns(
        &idx.iter()
            .map(|&i| eig.eigenvectors.column(i).into_owned())
            .collect::<Vec<_>>(),
    );
    (values, vectors)
}

fn hermitize(op: &DMatrix<C64>) -> DMatrix<C64> {
    (op + op.adjoint()).map(|z| z * 0.5)
}

/// `f(X)` for Hermitian `X` via its spectral decomposition.
pub fn hermitian_fn(op: &DMatrix<C64>, f: impl Fn(f64) -> f64) -> DMatrix<C64> {
    let (values, vectors) = hermitian_eigen(op);
    let n = values.len();
    let mut scaled = vectors.clone();
    for (j, &v) in values.iter().enumerate() {
        let fv = f(v);
        for i in 0..n {
            scaled[(i, j)] *= fv;
        }
    }
    scaled * vectors.adjoint()
}

/// Choi matrix `J = Σ_{ab} |a⟩⟨b| ⊗ C(|a⟩⟨b|)` of a map given on the real bases.
pub fn choi_matrix(
    input: &SystemLabel,
    output: &SystemLabel,
    matrix: &DMatrix<f64>,
) -> Result<DMatrix<C64>> {
    let bin = OperatorBasis::new(input)?;
    let bout = OperatorBasis::new(output)?;
    check_len(bin.len(), matrix.ncols())?;
    check_len(bout.len(), matrix.nrows())?;
    let (nin, nout) = (bin.n(), bout.n());
    // Images of the input basis elements.
    let images: Vec<DMatrix<C64>> = (0..bin.len())
        .map(|k| bout.to_operator(&matrix.column(k).into_owned()))
        .collect();
    let mut choi = DMatrix::<C64>::zeros(nin * nout, nin * nout);
    for a in 0..nin {
        for b in 0..nin {
            let mut unit = DMatrix::<C64>::zeros(nin, nin);
            unit[(a, b)] = C64::new(1.0, 0.0);
            let coeffs = bin.complex_coords(&unit);
            let mut img = DMatrix::<C64>::zeros(nout, nout);
            for (k, c) in coeffs.iter().enumerate() {
                if c.norm_sqr() > 0.0 {
                    img += &images[k] * *c;
                }
            }
            for i in 0..nout {
                for j in 0..nout {
                    choi[(a * nout + i, b * nout + j)] = img[(i, j)];
                }
            }
        }
    }
    Ok(choi)
}

/// Real matrix of the map `X ↦ Σ_i K_i X K_i†`.
pub fn channel_from_kraus(
    input: &SystemLabel,
    output: &SystemLabel,
    kraus: &[DMatrix<C64>],
) -> Result<DMatrix<f64>> {
    let bin = OperatorBasis::new(input)?;
    let bout = OperatorBasis::new(output)?;
    for k in kraus {
        if k.nrows() != bout.n() || k.ncols() != bin.n() {
            return Err(Error::DimensionMismatch {
                expected: bout.n() * bin.n(),
                got: k.nrows() * k.ncols(),
            });
        }
    }
    let mut m = DMatrix::<f64>::zeros(bout.len(), bin.len());
    let mut unit = DVector::<f64>::zeros(bin.len());
    for col in 0..bin.len() {
        unit.fill(0.0);
        unit[col] = 1.0;
        let x = bin.to_operator(&unit);
        let mut y = DMatrix::<C64>::zeros(bout.n(), bout.n());
        for k in kraus {
            y += k * &x * k.adjoint();
        }
        m.set_column(col, &bout.to_coords(&y));
    }
    Ok(m)
}

/// Projector `|ψ⟩⟨ψ|` for a (not necessarily normalized) vector.
pub fn projector(psi: &DVector<C64>) -> DMatrix<C64> {
    psi * psi.adjoint()
}

/// Kronecker product of complex vectors.
pub fn kron_vec(a: &DVector<C64>, b: &DVector<C64>) -> DVector<C64> {
    DVector::from_iterator(
        a.len() * b.len(),
        a.iter().flat_map(|x| b.iter().map(move |y| x * y)),
    )
}
