//! Element-level bookkeeping for partial transposes, partial traces, and
//! negative eigenspaces on an arbitrary tensor-product space.
//!
//! Every transpose here is an involutive permutation of matrix elements, so
//! Hermiticity and trace survive exactly. Subsystem `k` of a flattened index
//! is its `k`-th mixed-radix digit, most significant first.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Hermiticity tolerance for matrices fed to eigensolvers.
pub const HERMITICITY_TOL: f64 = 1e-10;

const MAX_FACTORS: usize = 8;

fn decode(dims: &[usize], mut index: usize, out: &mut [usize; MAX_FACTORS]) {
    for k in (0..dims.len()).rev() {
        out[k] = index % dims[k];
        index /= dims[k];
    }
}

fn encode(dims: &[usize], digits: &[usize; MAX_FACTORS]) -> usize {
    dims.iter().enumerate().fold(0, |acc, (k, d)| acc * d + digits[k])
}

fn total_dim(dims: &[usize]) -> usize {
    dims.iter().product()
}

/// Transpose the bra/ket indices of every subsystem in `subsystems`,
/// unconditionally. A single entry gives the usual global partial transpose;
/// two entries treat the pair as one subsystem.
pub fn global_transpose(
    rho: &DMatrix<Complex64>,
    dims: &[usize],
    subsystems: &[usize],
) -> DMatrix<Complex64> {
    assert!(dims.len() <= MAX_FACTORS);
    let dim = total_dim(dims);
    debug_assert_eq!(rho.nrows(), dim);
    let mut out = DMatrix::from_element(dim, dim, Complex64::new(0.0, 0.0));
    let mut row = [0usize; MAX_FACTORS];
    let mut col = [0usize; MAX_FACTORS];
    for r in 0..dim {
        for c in 0..dim {
            decode(dims, r, &mut row);
            decode(dims, c, &mut col);
            for &p in subsystems {
                let (ri, ci) = (row[p], col[p]);
                row[p] = ci;
                col[p] = ri;
            }
            out[(r, c)] = rho[(encode(dims, &row), encode(dims, &col))];
        }
    }
    out
}

/// `K`-way partial transpose with respect to subsystem `p`.
///
/// An element is transposed when the transposed subsystem differs between
/// bra and ket and the total number of differing subsystems is `K`. The
/// `K = 2` transpose additionally covers elements where *only* subsystem `p`
/// differs; this makes the transposes for `K = 2..=N` sum to the global one
/// (elementwise, `global = sum_K kway - (N-2) rho`), which for `N = 2`
/// correctly reduces the 2-way transpose to the global transpose.
pub fn kway_transpose(
    rho: &DMatrix<Complex64>,
    dims: &[usize],
    p: usize,
    k: usize,
) -> DMatrix<Complex64> {
    assert!(dims.len() <= MAX_FACTORS);
    assert!((2..=dims.len()).contains(&k), "K must lie in 2..=N");
    let dim = total_dim(dims);
    let mut out = rho.clone();
    let mut row = [0usize; MAX_FACTORS];
    let mut col = [0usize; MAX_FACTORS];
    for r in 0..dim {
        for c in 0..dim {
            decode(dims, r, &mut row);
            decode(dims, c, &mut col);
            if row[p] == col[p] {
                continue;
            }
            let differing = dims
                .iter()
                .enumerate()
                .filter(|&(m, _)| row[m] != col[m])
                .count();
            if differing.max(2) != k {
                continue;
            }
            let (ri, ci) = (row[p], col[p]);
            row[p] = ci;
            col[p] = ri;
            out[(r, c)] = rho[(encode(dims, &row), encode(dims, &col))];
        }
    }
    out
}

/// Constrained 3-way partial transpose: transposes subsystem `p` only on
/// elements whose set of differing subsystems is exactly `triple`.
pub fn constrained3_transpose(
    rho: &DMatrix<Complex64>,
    dims: &[usize],
    p: usize,
    triple: &[usize; 3],
) -> DMatrix<Complex64> {
    assert!(dims.len() <= MAX_FACTORS);
    debug_assert!(triple.contains(&p));
    let dim = total_dim(dims);
    let mut out = rho.clone();
    let mut row = [0usize; MAX_FACTORS];
    let mut col = [0usize; MAX_FACTORS];
    for r in 0..dim {
        for c in 0..dim {
            decode(dims, r, &mut row);
            decode(dims, c, &mut col);
            let mut differing = 0usize;
            let mut outside_triple = false;
            for m in 0..dims.len() {
                if row[m] != col[m] {
                    differing += 1;
                    if !triple.contains(&m) {
                        outside_triple = true;
                    }
                }
            }
            if differing != 3 || outside_triple {
                continue;
            }
            let (ri, ci) = (row[p], col[p]);
            row[p] = ci;
            col[p] = ri;
            out[(r, c)] = rho[(encode(dims, &row), encode(dims, &col))];
        }
    }
    out
}

/// Trace out every subsystem not listed in `keep`; the result is indexed by
/// the kept subsystems in their original order.
pub fn partial_trace(
    rho: &DMatrix<Complex64>,
    dims: &[usize],
    keep: &[usize],
) -> DMatrix<Complex64> {
    assert!(dims.len() <= MAX_FACTORS);
    let dim = total_dim(dims);
    let kept_dim: usize = keep.iter().map(|&k| dims[k]).product();
    let mut out = DMatrix::from_element(kept_dim, kept_dim, Complex64::new(0.0, 0.0));
    let mut row = [0usize; MAX_FACTORS];
    let mut col = [0usize; MAX_FACTORS];
    for r in 0..dim {
        for c in 0..dim {
            decode(dims, r, &mut row);
            decode(dims, c, &mut col);
            if (0..dims.len()).any(|m| !keep.contains(&m) && row[m] != col[m]) {
                continue;
            }
            let rk = keep.iter().fold(0, |acc, &k| acc * dims[k] + row[k]);
            let ck = keep.iter().fold(0, |acc, &k| acc * dims[k] + col[k]);
            out[(rk, ck)] += rho[(r, c)];
        }
    }
    out
}

/// Max-abs deviation from Hermiticity.
pub fn hermiticity_defect(m: &DMatrix<Complex64>) -> f64 {
    let mut worst: f64 = 0.0;
    for r in 0..m.nrows() {
        for c in r..m.ncols() {
            worst = worst.max((m[(r, c)] - m[(c, r)].conj()).norm());
        }
    }
    worst
}

/// Real spectrum of a Hermitian matrix; rejects inputs whose Hermiticity
/// defect exceeds [`HERMITICITY_TOL`].
pub fn hermitian_eigenvalues(m: &DMatrix<Complex64>) -> Result<Vec<f64>> {
    let deviation = hermiticity_defect(m);
    if deviation > HERMITICITY_TOL {
        return Err(Error::NotHermitian { deviation });
    }
    Ok(SymmetricEigen::new(m.clone()).eigenvalues.iter().copied().collect())
}

/// Negativity of a partial transpose via the trace norm:
/// `(sum |lambda| - 1) / (d_p - 1)`.
pub fn trace_norm_negativity(pt: &DMatrix<Complex64>, d_p: usize) -> Result<f64> {
    if d_p < 2 {
        return Err(Error::InvalidConfig(format!(
            "subsystem dimension {d_p} has no negativity normalization"
        )));
    }
    let eigenvalues = hermitian_eigenvalues(pt)?;
    let trace_norm: f64 = eigenvalues.iter().map(|l| l.abs()).sum();
    Ok((trace_norm - 1.0) / (d_p - 1) as f64)
}

/// Eigenpairs of the strictly negative part of a Hermitian matrix.
pub struct NegativeEigenspace {
    pub eigenvalues: Vec<f64>,
    pub vectors: Vec<DVector<Complex64>>,
}

impl NegativeEigenspace {
    pub fn eigenvalue_sum(&self) -> f64 {
        self.eigenvalues.iter().sum()
    }
}

/// Collect eigenvectors with eigenvalue below `threshold` (a small negative
/// number, screening out numerical noise around zero).
pub fn negative_eigenspace(
    pt: &DMatrix<Complex64>,
    threshold: f64,
) -> Result<NegativeEigenspace> {
    let deviation = hermiticity_defect(pt);
    if deviation > HERMITICITY_TOL {
        return Err(Error::NotHermitian { deviation });
    }
    let eig = SymmetricEigen::new(pt.clone());
    let mut eigenvalues = Vec::new();
    let mut vectors = Vec::new();
    for (k, &value) in eig.eigenvalues.iter().enumerate() {
        if value < threshold {
            eigenvalues.push(value);
            vectors.push(DVector::from_column_slice(eig.eigenvectors.column(k).as_slice()));
        }
    }
    Ok(NegativeEigenspace { eigenvalues, vectors })
}

/// `sum_i Re <v_i| M |v_i>` over an orthonormal family; with the family
/// spanning a degenerate eigenspace this is the trace against its projector,
/// independent of the basis choice inside the eigenspace.
pub fn sandwich_sum(vectors: &[DVector<Complex64>], m: &DMatrix<Complex64>) -> f64 {
    vectors
        .iter()
        .map(|v| {
            let mv = m * v;
            v.dotc(&mv).re
        })
        .sum()
}
