//! Dense complex matrices and operators on `M_n ⊗ M_n`.
//!
//! A [`TensorOperator`] stores `W = Σ w[a][b][c][d] e_ab ⊗ e_cd` by its basis
//! coefficients. Every other view (multiplication map, Choi form, the map
//! `Z ↦ Σ A Z B`) is computed from that table, all indices 0-based in code.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64 as C64;
use std::cmp::Ordering;

use crate::error::{Error, Result};

pub type ComplexMatrix = DMatrix<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Largest entrywise modulus of `a - b`.
pub fn max_abs_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn max_abs(a: &ComplexMatrix) -> f64 {
    a.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

/// `e_ij` in `M_n`, 0-based.
pub fn matrix_unit(n: usize, i: usize, j: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(n, n);
    m[(i, j)] = ONE;
    m
}

/// `J_n = [[0, I_n], [-I_n, 0]]`, of size `2n`.
pub fn symplectic_form(n: usize) -> ComplexMatrix {
    let mut j = ComplexMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        j[(i, n + i)] = ONE;
        j[(n + i, i)] = -ONE;
    }
    j
}

#[derive(Clone, Debug, PartialEq)]
pub struct TensorOperator {
    n: usize,
    w: Vec<C64>,
}

impl TensorOperator {
    pub fn zeros(n: usize) -> Self {
        TensorOperator {
            n,
            w: vec![ZERO; n * n * n * n],
        }
    }

    /// Builds from a flat coefficient table in `[a][b][c][d]` row-major order.
    pub fn from_coefficients(n: usize, w: Vec<C64>) -> Result<Self> {
        if w.len() != n * n * n * n {
            return Err(Error::shape("tensor operator", n * n * n * n, w.len()));
        }
        Ok(TensorOperator { n, w })
    }

    /// `A ⊗ B`.
    pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> Self {
        let n = a.nrows();
        assert!(a.is_square() && b.shape() == (n, n));
        let mut t = TensorOperator::zeros(n);
        t.add_kron(ONE, a, b);
        t
    }

    /// `Σ_r L_r ⊗ L_r*`.
    pub fn kraus_sum(n: usize, ls: &[ComplexMatrix]) -> Self {
        let mut t = TensorOperator::zeros(n);
        for l in ls {
            t.add_kron(ONE, l, &l.adjoint());
        }
        t
    }

    fn add_kron(&mut self, scale: C64, a: &ComplexMatrix, b: &ComplexMatrix) {
        let n = self.n;
        for ai in 0..n {
            for bi in 0..n {
                let x = scale * a[(ai, bi)];
                if x == ZERO {
                    continue;
                }
                for ci in 0..n {
                    for di in 0..n {
                        let k = self.idx(ai, bi, ci, di);
                        self.w[k] += x * b[(ci, di)];
                    }
                }
            }
        }
    }

    #[inline]
    fn idx(&self, a: usize, b: usize, c: usize, d: usize) -> usize {
        ((a * self.n + b) * self.n + c) * self.n + d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, a: usize, b: usize, c: usize, d: usize) -> C64 {
        self.w[self.idx(a, b, c, d)]
    }

    pub fn set(&mut self, a: usize, b: usize, c: usize, d: usize, value: C64) {
        let k = self.idx(a, b, c, d);
        self.w[k] = value;
    }

    pub fn coefficients(&self) -> &[C64] {
        &self.w
    }

    pub fn max_abs_diff(&self, other: &TensorOperator) -> f64 {
        assert_eq!(self.n, other.n);
        self.w
            .iter()
            .zip(&other.w)
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.w.iter().map(|x| x.norm()).fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.w.iter().all(|x| *x == ZERO)
    }
}

/// Multiplication map: `A ⊗ B ↦ AB`, i.e. `M[a][d] = Σ_b w[a][b][b][d]`.
pub fn mult_map(w: &TensorOperator) -> ComplexMatrix {
    let n = w.n;
    ComplexMatrix::from_fn(n, n, |a, d| (0..n).map(|b| w.get(a, b, b, d)).sum())
}

/// Tensor flip: `A ⊗ B ↦ B ⊗ A`.
pub fn flip(w: &TensorOperator) -> TensorOperator {
    let n = w.n;
    let mut out = TensorOperator::zeros(n);
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    out.set(a, b, c, d, w.get(c, d, a, b));
                }
            }
        }
    }
    out
}

/// The `n² × n²` matrix `Q[(i,k)][(j,l)] = w[k][i][j][l]`, row index `i·n + k`.
///
/// `Σ_{ijkl} conj(X_ik) Q[(i,k)][(j,l)] X_jl` is the positivity form whose
/// nonnegativity characterizes `W = Σ L_r ⊗ L_r*`.
pub fn choi_form(w: &TensorOperator) -> ComplexMatrix {
    let n = w.n;
    let mut q = ComplexMatrix::zeros(n * n, n * n);
    for i in 0..n {
        for k in 0..n {
            for j in 0..n {
                for l in 0..n {
                    q[(i * n + k, j * n + l)] = w.get(k, i, j, l);
                }
            }
        }
    }
    q
}

/// `Ψ_W(Z)`, the linear extension of `Ψ_{A⊗B}(Z) = AZB`.
pub fn apply_cp_map(w: &TensorOperator, z: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = w.n;
    if z.shape() != (n, n) {
        return Err(Error::shape("Ψ_W argument", format!("{n}x{n}"), format!("{}x{}", z.nrows(), z.ncols())));
    }
    Ok(ComplexMatrix::from_fn(n, n, |a, d| {
        let mut s = ZERO;
        for b in 0..n {
            for c in 0..n {
                s += w.get(a, b, c, d) * z[(b, c)];
            }
        }
        s
    }))
}

pub fn hermitian_residual(q: &ComplexMatrix) -> f64 {
    max_abs_diff(q, &q.adjoint())
}

pub fn anti_hermitian_residual(h: &ComplexMatrix) -> f64 {
    max_abs_diff(h, &(-h.adjoint()))
}

/// Eigenpairs of a hermitian matrix in a reproducible order.
///
/// Values descend; each vector has its first non-negligible component real
/// and positive; exact ties are broken lexicographically on the vectors.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: Vec<DVector<C64>>,
}

pub fn eigh(q: &ComplexMatrix) -> HermitianEigen {
    assert!(q.is_square());
    if q.nrows() == 0 {
        return HermitianEigen {
            values: vec![],
            vectors: vec![],
        };
    }
    let sym = (q + q.adjoint()).scale(0.5);
    let eig = SymmetricEigen::new(sym);
    let mut pairs: Vec<(f64, DVector<C64>)> = (0..eig.eigenvalues.len())
        .map(|s| {
            let mut v: DVector<C64> = eig.eigenvectors.column(s).into_owned();
            normalize_phase(&mut v);
            (eig.eigenvalues[s], v)
        })
        .collect();
    pairs.sort_by(|(la, va), (lb, vb)| {
        lb.partial_cmp(la)
            .unwrap_or(Ordering::Equal)
            .then_with(|| lex_cmp(va, vb))
    });
    let (values, vectors) = pairs.into_iter().unzip();
    HermitianEigen { values, vectors }
}

fn normalize_phase(v: &mut DVector<C64>) {
    let scale = v.iter().map(|x| x.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return;
    }
    if let Some(pivot) = v.iter().copied().find(|x| x.norm() > 1e-12 * scale) {
        let phase = pivot.conj() / pivot.norm();
        for x in v.iter_mut() {
            *x *= phase;
        }
    }
}

fn lex_cmp(a: &DVector<C64>, b: &DVector<C64>) -> Ordering {
    for (x, y) in a.iter().zip(b.iter()) {
        let o = x
            .re
            .partial_cmp(&y.re)
            .unwrap_or(Ordering::Equal)
            .then(x.im.partial_cmp(&y.im).unwrap_or(Ordering::Equal));
        if o != Ordering::Equal {
            return o;
        }
    }
    Ordering::Equal
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PsdCheck {
    pub is_psd: bool,
    pub min_eig: f64,
}

/// Minimum-eigenvalue test `λ_min ≥ -tol` for a hermitian matrix.
pub fn psd_check(q: &ComplexMatrix, tol: f64) -> Result<PsdCheck> {
    if !q.is_square() {
        return Err(Error::shape("PSD check input", "square", format!("{}x{}", q.nrows(), q.ncols())));
    }
    let residual = hermitian_residual(q);
    if residual > tol {
        return Err(Error::NotHermitian { residual });
    }
    let min_eig = eigh(q).values.last().copied().unwrap_or(0.0);
    Ok(PsdCheck {
        is_psd: min_eig >= -tol,
        min_eig,
    })
}

/// Recovers `L_1..L_d` with `W = Σ L_s ⊗ L_s*` from the eigendecomposition of
/// the Choi form; `d` is the numerical rank.
///
/// Eigenvalues at or below `tol · max(λ_max, 1)` are dropped, and
/// `(L_s)[k][i] = sqrt(λ_s) · y_s[i·n + k]`.
pub fn kraus_extract(w: &TensorOperator, tol: f64) -> Result<Vec<ComplexMatrix>> {
    let n = w.n;
    let q = choi_form(w);
    let residual = hermitian_residual(&q);
    if residual > tol {
        return Err(Error::NotHermitian { residual });
    }
    let eig = eigh(&q);
    let min_eig = eig.values.last().copied().unwrap_or(0.0);
    if min_eig < -tol {
        return Err(Error::NotPsd { min_eig });
    }
    let cutoff = tol * eig.values.first().copied().unwrap_or(0.0).max(1.0);
    Ok(eig
        .values
        .iter()
        .zip(&eig.vectors)
        .filter(|(lambda, _)| **lambda > cutoff)
        .map(|(lambda, y)| {
            let s = lambda.sqrt();
            ComplexMatrix::from_fn(n, n, |k, i| y[i * n + k] * s)
        })
        .collect())
}
