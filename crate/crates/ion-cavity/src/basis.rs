//! Product and coupled bases for the three ionic qubits, the 8x8 transform
//! between them, and the indexing of the 2x2x2x4 logical composite space.
//!
//! Two distinct index layouts appear in this crate and are both fixed here:
//!
//! * the eight internal ionic states are enumerated `|000>, |100>, |010>,
//!   |110>, |001>, |101>, |011>, |111>` (first ion is the fastest-varying
//!   digit), matching the column convention of [`coupled_transform`];
//! * the 32-dimensional logical space of three qubits plus the four-level
//!   photon-phonon system flattens as `16*i1 + 8*i2 + 4*i3 + d` (first qubit
//!   most significant), see [`composite_index`].

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tolerance for "unit norm" checks on input state vectors.
pub const NORM_TOL: f64 = 1e-12;

/// Subsystem dimensions of the logical composite space: qubits A, B, C and
/// the four-level photon-phonon system D.
pub const LOGICAL_DIMS: [usize; 4] = [2, 2, 2, 4];

/// Total dimension of the logical composite space.
pub const LOGICAL_DIM: usize = 32;

/// Internal state of the three ions in the product (computational) basis.
///
/// `0` marks an ion in its ground state, `1` an excited ion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ProductLabel {
    pub i1: u8,
    pub i2: u8,
    pub i3: u8,
}

impl ProductLabel {
    pub fn new(i1: u8, i2: u8, i3: u8) -> Result<Self> {
        if i1 > 1 || i2 > 1 || i3 > 1 {
            return Err(Error::InvalidIndex(format!(
                "product label ({i1}, {i2}, {i3}) has a component outside {{0, 1}}"
            )));
        }
        Ok(Self { i1, i2, i3 })
    }

    /// Position in the fixed enumeration `|000>, |100>, |010>, |110>, ...`.
    pub fn index(&self) -> usize {
        self.i1 as usize + 2 * self.i2 as usize + 4 * self.i3 as usize
    }

    pub fn from_index(index: usize) -> Result<Self> {
        if index >= 8 {
            return Err(Error::InvalidIndex(format!(
                "product basis index {index} outside 0..8"
            )));
        }
        Ok(Self {
            i1: (index & 1) as u8,
            i2: ((index >> 1) & 1) as u8,
            i3: ((index >> 2) & 1) as u8,
        })
    }

    /// Number of excited ions.
    pub fn excitations(&self) -> u32 {
        (self.i1 + self.i2 + self.i3) as u32
    }
}

/// Fixed enumeration order of the product basis.
pub const PRODUCT_ORDER: [ProductLabel; 8] = [
    ProductLabel { i1: 0, i2: 0, i3: 0 },
    ProductLabel { i1: 1, i2: 0, i3: 0 },
    ProductLabel { i1: 0, i2: 1, i3: 0 },
    ProductLabel { i1: 1, i2: 1, i3: 0 },
    ProductLabel { i1: 0, i2: 0, i3: 1 },
    ProductLabel { i1: 1, i2: 0, i3: 1 },
    ProductLabel { i1: 0, i2: 1, i3: 1 },
    ProductLabel { i1: 1, i2: 1, i3: 1 },
];

/// Total-spin eigenstate label `|sigma, sigma_z>` of the three ions.
///
/// `sigma = 3` carries a single quadruplet; `sigma = 1` occurs twice, with
/// `branch` distinguishing the two internal configurations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CoupledLabel {
    pub sigma: u8,
    pub sigma_z: i8,
    pub branch: u8,
}

impl CoupledLabel {
    pub fn new(sigma: u8, sigma_z: i8, branch: u8) -> Result<Self> {
        let valid = match (sigma, branch) {
            (3, 1) => matches!(sigma_z, -3 | -1 | 1 | 3),
            (1, 1) | (1, 2) => matches!(sigma_z, -1 | 1),
            _ => false,
        };
        if !valid {
            return Err(Error::InvalidIndex(format!(
                "coupled label (sigma={sigma}, sigma_z={sigma_z}, branch={branch}) is not one \
                 of the eight three-ion spin states"
            )));
        }
        Ok(Self { sigma, sigma_z, branch })
    }

    /// Position in the fixed enumeration of [`COUPLED_ORDER`].
    pub fn index(&self) -> usize {
        COUPLED_ORDER
            .iter()
            .position(|l| l == self)
            .expect("validated label is in the enumeration")
    }
}

/// Fixed enumeration order of the coupled basis:
/// `|3,-3>, |3,-1>, |3,1>, |3,3>, |1,-1>_1, |1,1>_1, |1,-1>_2, |1,1>_2`.
pub const COUPLED_ORDER: [CoupledLabel; 8] = [
    CoupledLabel { sigma: 3, sigma_z: -3, branch: 1 },
    CoupledLabel { sigma: 3, sigma_z: -1, branch: 1 },
    CoupledLabel { sigma: 3, sigma_z: 1, branch: 1 },
    CoupledLabel { sigma: 3, sigma_z: 3, branch: 1 },
    CoupledLabel { sigma: 1, sigma_z: -1, branch: 1 },
    CoupledLabel { sigma: 1, sigma_z: 1, branch: 1 },
    CoupledLabel { sigma: 1, sigma_z: -1, branch: 2 },
    CoupledLabel { sigma: 1, sigma_z: 1, branch: 2 },
];

/// The orthogonal 8x8 matrix taking product-basis amplitudes to coupled-basis
/// amplitudes. Rows follow [`COUPLED_ORDER`], columns [`PRODUCT_ORDER`].
///
/// All entries are drawn from `{0, +-1/sqrt(3), +-1/sqrt(6), +-1/sqrt(2),
/// +-sqrt(2/3), 1}`; the matrix is real and satisfies `T T^t = I`.
pub fn coupled_transform() -> DMatrix<f64> {
    let s3 = 1.0 / 3.0_f64.sqrt();
    let s6 = 1.0 / 6.0_f64.sqrt();
    let s2 = 1.0 / 2.0_f64.sqrt();
    let s23 = (2.0 / 3.0_f64).sqrt();
    let mut t = DMatrix::zeros(8, 8);

    // |3,-3> = |000>, |3,3> = |111>
    t[(0, 0)] = 1.0;
    t[(3, 7)] = 1.0;
    // |3,-1> = (|100> + |010> + |001>)/sqrt(3)
    t[(1, 1)] = s3;
    t[(1, 2)] = s3;
    t[(1, 4)] = s3;
    // |3,1> = (|110> + |101> + |011>)/sqrt(3)
    t[(2, 3)] = s3;
    t[(2, 5)] = s3;
    t[(2, 6)] = s3;
    // |1,-1>_1 = (|100> + |010>)/sqrt(6) - sqrt(2/3)|001>
    t[(4, 1)] = s6;
    t[(4, 2)] = s6;
    t[(4, 4)] = -s23;
    // |1,1>_1 = sqrt(2/3)|110> - (|101> + |011>)/sqrt(6)
    t[(5, 3)] = s23;
    t[(5, 5)] = -s6;
    t[(5, 6)] = -s6;
    // |1,-1>_2 = (|100> - |010>)/sqrt(2)
    t[(6, 1)] = s2;
    t[(6, 2)] = -s2;
    // |1,1>_2 = (|101> - |011>)/sqrt(2)
    t[(7, 5)] = s2;
    t[(7, 6)] = -s2;

    t
}

/// Rewrite a normalized product-basis amplitude vector in the coupled basis.
pub fn product_to_coupled(v: &DVector<Complex64>) -> Result<DVector<Complex64>> {
    if v.len() != 8 {
        return Err(Error::InvalidIndex(format!(
            "expected an 8-component ionic state, got {} components",
            v.len()
        )));
    }
    let deviation = (v.norm_squared() - 1.0).abs();
    if deviation > NORM_TOL {
        return Err(Error::NotNormalized { deviation });
    }
    let t = coupled_transform();
    let mut out = DVector::from_element(8, Complex64::new(0.0, 0.0));
    for r in 0..8 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in 0..8 {
            acc += t[(r, c)] * v[c];
        }
        out[r] = acc;
    }
    Ok(out)
}

/// Logical index of three qubits and the photon-phonon level `d`.
///
/// `d` labels the joint photon-phonon state `|m+1-d, n+1-d>` left behind by
/// `d` collective excitations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CompositeIndex {
    pub i1: u8,
    pub i2: u8,
    pub i3: u8,
    pub d: u8,
}

impl CompositeIndex {
    pub fn new(i1: u8, i2: u8, i3: u8, d: u8) -> Result<Self> {
        if i1 > 1 || i2 > 1 || i3 > 1 {
            return Err(Error::InvalidIndex(format!(
                "qubit component of ({i1}, {i2}, {i3}, {d}) outside {{0, 1}}"
            )));
        }
        if d > 3 {
            return Err(Error::InvalidIndex(format!(
                "photon-phonon level {d} outside 0..4"
            )));
        }
        Ok(Self { i1, i2, i3, d })
    }

    /// Flattened position `16*i1 + 8*i2 + 4*i3 + d` in `0..32`.
    pub fn flatten(&self) -> usize {
        16 * self.i1 as usize + 8 * self.i2 as usize + 4 * self.i3 as usize + self.d as usize
    }

    pub fn from_flat(index: usize) -> Result<Self> {
        if index >= LOGICAL_DIM {
            return Err(Error::InvalidIndex(format!(
                "composite index {index} outside 0..{LOGICAL_DIM}"
            )));
        }
        Ok(Self {
            i1: (index >> 4) as u8 & 1,
            i2: (index >> 3) as u8 & 1,
            i3: (index >> 2) as u8 & 1,
            d: (index & 3) as u8,
        })
    }
}

/// Flatten `(i1, i2, i3, d)` into the composite-space index.
pub fn composite_index(i1: u8, i2: u8, i3: u8, d: u8) -> Result<usize> {
    CompositeIndex::new(i1, i2, i3, d).map(|ix| ix.flatten())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn transform_is_orthogonal() {
        let t = coupled_transform();
        let id = &t * t.transpose();
        let id2 = t.transpose() * &t;
        for r in 0..8 {
            for c in 0..8 {
                let expect = if r == c { 1.0 } else { 0.0 };
                assert_abs_diff_eq!(id[(r, c)], expect, epsilon = 1e-14);
                assert_abs_diff_eq!(id2[(r, c)], expect, epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn columns_have_unit_norm_and_w_weight() {
        let t = coupled_transform();
        for c in 0..8 {
            let norm: f64 = (0..8).map(|r| t[(r, c)] * t[(r, c)]).sum();
            assert_abs_diff_eq!(norm, 1.0, epsilon = 1e-14);
        }
        // |100>, |010>, |001> all carry weight 1/sqrt(3) on |3,-1>; the W
        // construction is symmetric under ion exchange.
        let s3 = 1.0 / 3.0_f64.sqrt();
        for c in [1, 2, 4] {
            assert_abs_diff_eq!(t[(1, c)], s3, epsilon = 1e-15);
        }
    }

    #[test]
    fn w_rows_match_their_product_expansions() {
        let t = coupled_transform();
        let s3 = 1.0 / 3.0_f64.sqrt();
        // row for |3,-1> is (|100> + |010> + |001>)/sqrt(3)
        let mut expected = [0.0; 8];
        expected[1] = s3;
        expected[2] = s3;
        expected[4] = s3;
        for c in 0..8 {
            assert_abs_diff_eq!(t[(1, c)], expected[c], epsilon = 1e-15);
        }
        // |000> maps to |3,-3> with coefficient 1
        assert_abs_diff_eq!(t[(0, 0)], 1.0, epsilon = 0.0);
        for r in 1..8 {
            assert_abs_diff_eq!(t[(r, 0)], 0.0, epsilon = 0.0);
        }
    }

    #[test]
    fn product_to_coupled_examples() {
        let zero = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);

        // |000> -> |3,-3>
        let mut v = DVector::from_element(8, zero);
        v[0] = one;
        let c = product_to_coupled(&v).unwrap();
        assert_abs_diff_eq!((c[0] - one).norm(), 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(c.rows(1, 7).norm(), 0.0, epsilon = 1e-14);

        // (|100> + |010> + |001>)/sqrt(3) -> |3,-1>
        let s3 = Complex64::new(1.0 / 3.0_f64.sqrt(), 0.0);
        let mut w = DVector::from_element(8, zero);
        w[1] = s3;
        w[2] = s3;
        w[4] = s3;
        let c = product_to_coupled(&w).unwrap();
        assert_abs_diff_eq!((c[1] - one).norm(), 0.0, epsilon = 1e-14);

        // |100> -> |3,-1>/sqrt(3) + |1,-1>_1/sqrt(6) + |1,-1>_2/sqrt(2)
        let mut e = DVector::from_element(8, zero);
        e[1] = one;
        let c = product_to_coupled(&e).unwrap();
        assert_abs_diff_eq!(c[1].re, 1.0 / 3.0_f64.sqrt(), epsilon = 1e-14);
        assert_abs_diff_eq!(c[4].re, 1.0 / 6.0_f64.sqrt(), epsilon = 1e-14);
        assert_abs_diff_eq!(c[6].re, 1.0 / 2.0_f64.sqrt(), epsilon = 1e-14);
        for idx in [0, 2, 3, 5, 7] {
            assert_abs_diff_eq!(c[idx].norm(), 0.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn product_to_coupled_rejects_unnormalized_input() {
        let v = DVector::from_element(8, Complex64::new(0.5, 0.0));
        assert!(matches!(
            product_to_coupled(&v),
            Err(Error::NotNormalized { .. })
        ));
    }

    #[test]
    fn composite_index_is_a_bijection() {
        let mut seen = [false; LOGICAL_DIM];
        for i1 in 0..2 {
            for i2 in 0..2 {
                for i3 in 0..2 {
                    for d in 0..4 {
                        let flat = composite_index(i1, i2, i3, d).unwrap();
                        assert!(!seen[flat], "index {flat} hit twice");
                        seen[flat] = true;
                        let back = CompositeIndex::from_flat(flat).unwrap();
                        assert_eq!(back, CompositeIndex { i1, i2, i3, d });
                    }
                }
            }
        }
        assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn composite_index_examples_and_errors() {
        assert_eq!(composite_index(0, 0, 0, 0).unwrap(), 0);
        assert_eq!(composite_index(1, 1, 1, 3).unwrap(), 31);
        assert_eq!(composite_index(1, 0, 0, 1).unwrap(), 17);
        assert!(composite_index(2, 0, 0, 0).is_err());
        assert!(composite_index(0, 0, 0, 4).is_err());
    }

    #[test]
    fn label_enumerations_round_trip() {
        for (k, label) in PRODUCT_ORDER.iter().enumerate() {
            assert_eq!(label.index(), k);
            assert_eq!(ProductLabel::from_index(k).unwrap(), *label);
        }
        for (k, label) in COUPLED_ORDER.iter().enumerate() {
            assert_eq!(label.index(), k);
            assert!(CoupledLabel::new(label.sigma, label.sigma_z, label.branch).is_ok());
        }
        assert!(CoupledLabel::new(3, -1, 2).is_err());
        assert!(CoupledLabel::new(2, 0, 1).is_err());
        assert!(ProductLabel::from_index(8).is_err());
    }
}
