//! Brute-force validator: the full red-sideband interaction Hamiltonian on a
//! truncated Fock space, propagated by dense eigendecomposition.
//!
//! Nothing here reuses the invariant-subspace solution of [`crate::dynamics`];
//! agreement between the two routes is the main correctness check of the
//! crate.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::basis::{ProductLabel, PRODUCT_ORDER};
use crate::dynamics::AmplitudeSet;
use crate::error::{Error, Result};

/// Hard cap on the truncated dimension, guarding against accidental blowup.
pub const DIMENSION_LIMIT: usize = 4096;

/// Acceptable population on the outermost Fock levels after propagation.
pub const LEAKAGE_LIMIT: f64 = 1e-12;

/// Acceptable norm outside the four-state chain when extracting amplitudes.
pub const CHAIN_RESIDUAL_LIMIT: f64 = 1e-10;

const NORM_TOL: f64 = 1e-12;

/// Fock-space truncation: phonon levels `0..=max_phonons` and photon levels
/// `0..=max_photons`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FockTruncation {
    pub max_phonons: usize,
    pub max_photons: usize,
}

impl FockTruncation {
    pub fn new(max_phonons: usize, max_photons: usize) -> Result<Self> {
        let tr = Self { max_phonons, max_photons };
        let dim = tr.dimension();
        if dim > DIMENSION_LIMIT {
            return Err(Error::TruncationTooLarge { dim, limit: DIMENSION_LIMIT });
        }
        Ok(tr)
    }

    /// Truncation with a two-level safety margin above everything a chain
    /// with labels `(m, n)` can reach. The interaction conserves the chain,
    /// so the margin carries no population and only catches indexing bugs.
    pub fn for_chain(m: i64, n: i64) -> Result<Self> {
        Self::new((m + 3).max(1) as usize, (n + 3).max(1) as usize)
    }

    pub fn phonon_levels(&self) -> usize {
        self.max_phonons + 1
    }

    pub fn photon_levels(&self) -> usize {
        self.max_photons + 1
    }

    /// `8 * phonon_levels * photon_levels`.
    pub fn dimension(&self) -> usize {
        8 * self.phonon_levels() * self.photon_levels()
    }

    /// Flattened index of `|ion> (x) |m, n>`; the ionic index follows
    /// [`PRODUCT_ORDER`] and is the slowest-varying digit.
    pub fn index(&self, ion: usize, phonons: usize, photons: usize) -> usize {
        debug_assert!(ion < 8 && phonons <= self.max_phonons && photons <= self.max_photons);
        (ion * self.phonon_levels() + phonons) * self.photon_levels() + photons
    }

    fn unpack(&self, index: usize) -> (usize, usize, usize) {
        let photons = index % self.photon_levels();
        let rest = index / self.photon_levels();
        (rest / self.phonon_levels(), rest % self.phonon_levels(), photons)
    }
}

/// Normalized state on the truncated space `ions (x) phonons (x) photons`.
#[derive(Clone, Debug)]
pub struct FullState {
    pub truncation: FockTruncation,
    pub amplitudes: DVector<Complex64>,
}

impl FullState {
    pub fn new(truncation: FockTruncation, amplitudes: DVector<Complex64>) -> Result<Self> {
        if amplitudes.len() != truncation.dimension() {
            return Err(Error::InvalidIndex(format!(
                "state has {} components, truncation needs {}",
                amplitudes.len(),
                truncation.dimension()
            )));
        }
        let deviation = (amplitudes.norm_squared() - 1.0).abs();
        if deviation > NORM_TOL {
            return Err(Error::NotNormalized { deviation });
        }
        Ok(Self { truncation, amplitudes })
    }

    /// The product state `|label> (x) |phonons, photons>`.
    pub fn product(
        truncation: FockTruncation,
        label: ProductLabel,
        phonons: usize,
        photons: usize,
    ) -> Result<Self> {
        if phonons > truncation.max_phonons || photons > truncation.max_photons {
            return Err(Error::InvalidIndex(format!(
                "Fock occupation ({phonons}, {photons}) outside truncation ({}, {})",
                truncation.max_phonons, truncation.max_photons
            )));
        }
        let mut amplitudes = DVector::from_element(truncation.dimension(), Complex64::new(0.0, 0.0));
        amplitudes[truncation.index(label.index(), phonons, photons)] = Complex64::new(1.0, 0.0);
        Ok(Self { truncation, amplitudes })
    }

    /// Expectation values of the two conserved charges
    /// `(excitations + phonons, excitations + photons)`.
    pub fn conserved_charges(&self) -> (f64, f64) {
        let mut phonon_charge = 0.0;
        let mut photon_charge = 0.0;
        for (index, amp) in self.amplitudes.iter().enumerate() {
            let p = amp.norm_sqr();
            if p == 0.0 {
                continue;
            }
            let (ion, m, n) = self.truncation.unpack(index);
            let exc = PRODUCT_ORDER[ion].excitations() as f64;
            phonon_charge += p * (exc + m as f64);
            photon_charge += p * (exc + n as f64);
        }
        (phonon_charge, photon_charge)
    }

    /// Total population on the outermost phonon or photon level.
    pub fn boundary_population(&self) -> f64 {
        let mut pop = 0.0;
        for (index, amp) in self.amplitudes.iter().enumerate() {
            let (_, m, n) = self.truncation.unpack(index);
            if m == self.truncation.max_phonons || n == self.truncation.max_photons {
                pop += amp.norm_sqr();
            }
        }
        pop
    }
}

/// Interaction Hamiltonian in units of `hbar*g*eta`: the excitation term
/// takes one phonon and one photon with amplitude `sqrt(m*n)` while raising
/// any one ion, plus the Hermitian conjugate. Real symmetric by construction.
pub fn build_hamiltonian(truncation: &FockTruncation) -> DMatrix<f64> {
    let dim = truncation.dimension();
    let mut h = DMatrix::zeros(dim, dim);
    for (ion, label) in PRODUCT_ORDER.iter().enumerate() {
        let bits = [label.i1, label.i2, label.i3];
        for m in 1..=truncation.max_phonons {
            for n in 1..=truncation.max_photons {
                let from = truncation.index(ion, m, n);
                let element = ((m * n) as f64).sqrt();
                for j in 0..3 {
                    if bits[j] == 0 {
                        let mut raised = bits;
                        raised[j] = 1;
                        let to_ion = ProductLabel::new(raised[0], raised[1], raised[2])
                            .expect("bits are binary")
                            .index();
                        h[(truncation.index(to_ion, m - 1, n - 1), from)] += element;
                    }
                }
            }
        }
    }
    let ht = h.transpose();
    h + ht
}

/// Eigendecomposition of the truncated Hamiltonian, reusable across many
/// propagation times.
pub struct Propagator {
    truncation: FockTruncation,
    eigenvalues: DVector<f64>,
    eigenvectors: DMatrix<f64>,
}

impl Propagator {
    pub fn new(truncation: FockTruncation) -> Self {
        Self::from_hamiltonian(truncation, build_hamiltonian(&truncation))
    }

    pub fn from_hamiltonian(truncation: FockTruncation, hamiltonian: DMatrix<f64>) -> Self {
        let eig = SymmetricEigen::new(hamiltonian);
        Self {
            truncation,
            eigenvalues: eig.eigenvalues,
            eigenvectors: eig.eigenvectors,
        }
    }

    pub fn truncation(&self) -> FockTruncation {
        self.truncation
    }

    /// `exp(-i H tau) |initial>`, with norm preservation and boundary-leakage
    /// checks on the result.
    pub fn propagate(&self, initial: &FullState, tau: f64) -> Result<FullState> {
        if initial.truncation != self.truncation {
            return Err(Error::InvalidIndex(
                "state truncation differs from the propagator truncation".into(),
            ));
        }
        let dim = self.truncation.dimension();
        // project on the (real) eigenbasis, rotate phases, project back
        let mut coeffs = vec![Complex64::new(0.0, 0.0); dim];
        for (k, slot) in coeffs.iter_mut().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..dim {
                acc += initial.amplitudes[j] * self.eigenvectors[(j, k)];
            }
            *slot = acc * Complex64::from_polar(1.0, -self.eigenvalues[k] * tau);
        }
        let mut out = DVector::from_element(dim, Complex64::new(0.0, 0.0));
        for j in 0..dim {
            let mut acc = Complex64::new(0.0, 0.0);
            for (k, coeff) in coeffs.iter().enumerate() {
                acc += coeff * self.eigenvectors[(j, k)];
            }
            out[j] = acc;
        }
        let state = FullState::new(self.truncation, out)?;
        let leakage = state.boundary_population();
        if leakage > LEAKAGE_LIMIT {
            return Err(Error::TruncationLeakage { leakage, limit: LEAKAGE_LIMIT });
        }
        Ok(state)
    }
}

/// One-shot propagation `exp(-i H tau) |initial>`; eigendecomposes `H` on
/// every call, so prefer [`Propagator`] for sweeps.
pub fn propagate(hamiltonian: &DMatrix<f64>, initial: &FullState, tau: f64) -> Result<FullState> {
    if hamiltonian.nrows() != initial.amplitudes.len() {
        return Err(Error::InvalidIndex(format!(
            "Hamiltonian dimension {} does not match the state dimension {}",
            hamiltonian.nrows(),
            initial.amplitudes.len()
        )));
    }
    Propagator::from_hamiltonian(initial.truncation, hamiltonian.clone()).propagate(initial, tau)
}

/// Project a propagated state onto the four-state chain with labels `(m, n)`
/// and return the chain amplitudes (ground-start role order: `a0` on
/// `|000>|m+1,n+1>`) together with the residual norm outside the chain.
///
/// Errors when the residual exceeds [`CHAIN_RESIDUAL_LIMIT`], which signals
/// that the state did not evolve from this chain.
pub fn extract_chain_amplitudes(
    state: &FullState,
    m: i64,
    n: i64,
    tau: f64,
) -> Result<(AmplitudeSet, f64)> {
    let tr = state.truncation;
    if m + 1 > tr.max_phonons as i64 || n + 1 > tr.max_photons as i64 {
        return Err(Error::InvalidIndex(format!(
            "chain labels ({m}, {n}) reach outside truncation ({}, {})",
            tr.max_phonons, tr.max_photons
        )));
    }
    let s3 = 1.0 / 3.0_f64.sqrt();
    // (ionic components, weight, phonon offset below m+1) per chain site
    let sites: [(&[usize], f64, i64); 4] = [
        (&[0], 1.0, 0),
        (&[1, 2, 4], s3, 1),
        (&[3, 5, 6], s3, 2),
        (&[7], 1.0, 3),
    ];
    let mut amps = [Complex64::new(0.0, 0.0); 4];
    for (site, (ions, weight, offset)) in sites.iter().enumerate() {
        let (phonons, photons) = (m + 1 - offset, n + 1 - offset);
        if phonons < 0 || photons < 0 {
            continue;
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for &ion in ions.iter() {
            acc += state.amplitudes[tr.index(ion, phonons as usize, photons as usize)];
        }
        amps[site] = acc * *weight;
    }
    let chain_norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
    let residual = (1.0 - chain_norm).max(0.0);
    if residual > CHAIN_RESIDUAL_LIMIT {
        return Err(Error::ChainResidual { residual, limit: CHAIN_RESIDUAL_LIMIT });
    }
    Ok((
        AmplitudeSet {
            a0: amps[0],
            a1: amps[1],
            a2: amps[2],
            a3: amps[3],
            tau,
        },
        residual,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::coupled_transform;
    use crate::dynamics::{amplitudes_excited, amplitudes_ground, block_hamiltonian};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn ground_start(tr: FockTruncation, m: i64, n: i64) -> FullState {
        FullState::product(
            tr,
            ProductLabel::new(0, 0, 0).unwrap(),
            (m + 1) as usize,
            (n + 1) as usize,
        )
        .unwrap()
    }

    #[test]
    fn single_excitation_matrix_element() {
        let tr = FockTruncation::new(4, 4).unwrap();
        let h = build_hamiltonian(&tr);
        // <100; m-1, n-1| H |000; m, n> = sqrt(m n)
        let from = tr.index(0, 2, 3);
        let to = tr.index(ProductLabel::new(1, 0, 0).unwrap().index(), 1, 2);
        assert_abs_diff_eq!(h[(to, from)], 6.0_f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(h[(from, to)], 6.0_f64.sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn vacuum_columns_are_annihilated() {
        let tr = FockTruncation::new(3, 3).unwrap();
        let h = build_hamiltonian(&tr);
        for k in 0..=tr.max_photons {
            let col = tr.index(0, 0, k);
            assert_abs_diff_eq!(h.column(col).norm(), 0.0, epsilon = 0.0);
        }
        // photon vacuum likewise freezes the all-ground state
        let col = tr.index(0, 2, 0);
        assert_abs_diff_eq!(h.column(col).norm(), 0.0, epsilon = 0.0);
    }

    #[test]
    fn hamiltonian_is_block_diagonal_over_total_spin() {
        let tr = FockTruncation::new(2, 2).unwrap();
        let h = build_hamiltonian(&tr);
        let fock_dim = tr.phonon_levels() * tr.photon_levels();
        let cmplx_id = DMatrix::<f64>::identity(fock_dim, fock_dim);
        let p = coupled_transform().kronecker(&cmplx_id);
        let hc = &p * h * p.transpose();
        // rows/cols 0..4*fock_dim belong to the spin quadruplet, the rest to
        // the two doublets; the interaction must not mix them
        let split = 4 * fock_dim;
        let mut max_cross: f64 = 0.0;
        for r in 0..split {
            for c in split..hc.ncols() {
                max_cross = max_cross.max(hc[(r, c)].abs());
            }
        }
        assert!(max_cross < 1e-14, "cross-sector element {max_cross}");
    }

    #[test]
    fn quadruplet_chain_block_matches_the_analytic_tridiagonal() {
        let (m, n) = (3, 3);
        let tr = FockTruncation::for_chain(m, n).unwrap();
        let h = build_hamiltonian(&tr);
        let s3 = 1.0 / 3.0_f64.sqrt();
        let sites: [(Vec<(usize, f64)>, i64); 4] = [
            (vec![(0, 1.0)], 0),
            (vec![(1, s3), (2, s3), (4, s3)], 1),
            (vec![(3, s3), (5, s3), (6, s3)], 2),
            (vec![(7, 1.0)], 3),
        ];
        let (_, expected) = block_hamiltonian(m, n);
        for (i, (ions_i, off_i)) in sites.iter().enumerate() {
            for (j, (ions_j, off_j)) in sites.iter().enumerate() {
                let mut acc = 0.0;
                for &(ion_i, wi) in ions_i {
                    for &(ion_j, wj) in ions_j {
                        let row = tr.index(ion_i, (m + 1 - off_i) as usize, (n + 1 - off_i) as usize);
                        let col = tr.index(ion_j, (m + 1 - off_j) as usize, (n + 1 - off_j) as usize);
                        acc += wi * wj * h[(row, col)];
                    }
                }
                assert_abs_diff_eq!(acc, expected[(i, j)], epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn propagation_is_unitary_and_conserves_charges() {
        let tr = FockTruncation::for_chain(2, 2).unwrap();
        let prop = Propagator::new(tr);
        let initial = ground_start(tr, 2, 2);
        let (q_phonon, q_photon) = initial.conserved_charges();
        for k in 0..=20 {
            let tau = 10.0 * PI * k as f64 / 20.0;
            let evolved = prop.propagate(&initial, tau).unwrap();
            assert_abs_diff_eq!(evolved.amplitudes.norm(), 1.0, epsilon = 1e-12);
            let (p1, p2) = evolved.conserved_charges();
            assert_abs_diff_eq!(p1, q_phonon, epsilon = 1e-12);
            assert_abs_diff_eq!(p2, q_photon, epsilon = 1e-12);
        }
    }

    #[test]
    fn tau_zero_returns_the_initial_state() {
        let tr = FockTruncation::for_chain(1, 1).unwrap();
        let prop = Propagator::new(tr);
        let initial = ground_start(tr, 1, 1);
        let out = prop.propagate(&initial, 0.0).unwrap();
        assert_abs_diff_eq!((&out.amplitudes - &initial.amplitudes).norm(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn single_phonon_amplitude_is_a_cosine() {
        // |000; 1, 1> exchanges with the W state at frequency sqrt(3)
        let tr = FockTruncation::for_chain(0, 0).unwrap();
        let prop = Propagator::new(tr);
        let initial = ground_start(tr, 0, 0);
        for k in 0..12 {
            let tau = 0.21 * k as f64;
            let evolved = prop.propagate(&initial, tau).unwrap();
            let survival = evolved.amplitudes[tr.index(0, 1, 1)];
            assert_abs_diff_eq!(survival.norm(), (3.0_f64.sqrt() * tau).cos().abs(), epsilon = 1e-12);
        }
    }

    #[test]
    fn chain_amplitudes_match_the_closed_form() {
        for (m, n) in [(0i64, 0i64), (1, 2), (3, 3)] {
            let tr = FockTruncation::for_chain(m, n).unwrap();
            let prop = Propagator::new(tr);
            let initial = ground_start(tr, m, n);
            for k in 0..15 {
                let tau = 0.17 * k as f64;
                let evolved = prop.propagate(&initial, tau).unwrap();
                let (amps, residual) = extract_chain_amplitudes(&evolved, m, n, tau).unwrap();
                assert!(residual < 1e-12);
                let analytic = amplitudes_ground(m, n, tau);
                for (x, y) in amps.as_array().iter().zip(analytic.as_array()) {
                    assert!((x - y).norm() < 1e-10, "({m},{n}) tau={tau}: {x} vs {y}");
                }
            }
        }
    }

    #[test]
    fn excited_start_matches_the_closed_form_with_reversed_roles() {
        for (p, q) in [(0u32, 0u32), (1, 1), (2, 0)] {
            let (m, n) = (p as i64 + 2, q as i64 + 2);
            let tr = FockTruncation::for_chain(m, n).unwrap();
            let prop = Propagator::new(tr);
            let initial = FullState::product(
                tr,
                ProductLabel::new(1, 1, 1).unwrap(),
                p as usize,
                q as usize,
            )
            .unwrap();
            for k in 0..12 {
                let tau = 0.19 * k as f64;
                let evolved = prop.propagate(&initial, tau).unwrap();
                let (chain, _) = extract_chain_amplitudes(&evolved, m, n, tau).unwrap();
                let analytic = amplitudes_excited(p, q, tau);
                // chain site 3 holds |111>, which the excited set labels a0
                assert!((chain.a3 - analytic.a0).norm() < 1e-10);
                assert!((chain.a2 - analytic.a1).norm() < 1e-10);
                assert!((chain.a1 - analytic.a2).norm() < 1e-10);
                assert!((chain.a0 - analytic.a3).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn arbitrary_internal_states_propagate_unitarily() {
        // starts outside the spin quadruplet are fine for the propagator,
        // they just never join the four-state chain
        let tr = FockTruncation::new(4, 4).unwrap();
        let prop = Propagator::new(tr);
        let initial = FullState::product(tr, ProductLabel::new(1, 0, 0).unwrap(), 1, 1).unwrap();
        let (q1, q2) = initial.conserved_charges();
        for k in 1..=6 {
            let tau = 0.37 * k as f64;
            let evolved = prop.propagate(&initial, tau).unwrap();
            assert_abs_diff_eq!(evolved.amplitudes.norm(), 1.0, epsilon = 1e-12);
            let (p1, p2) = evolved.conserved_charges();
            assert_abs_diff_eq!(p1, q1, epsilon = 1e-12);
            assert_abs_diff_eq!(p2, q2, epsilon = 1e-12);
        }
    }

    #[test]
    fn completeness_of_chain_plus_residual() {
        let (m, n) = (2, 2);
        let tr = FockTruncation::for_chain(m, n).unwrap();
        let prop = Propagator::new(tr);
        let initial = ground_start(tr, m, n);
        let evolved = prop.propagate(&initial, 1.3).unwrap();
        let (amps, residual) = extract_chain_amplitudes(&evolved, m, n, 1.3).unwrap();
        assert_abs_diff_eq!(amps.norm_sqr_sum() + residual, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn residual_check_rejects_states_off_the_chain() {
        let tr = FockTruncation::for_chain(2, 2).unwrap();
        // a sigma = 1 component never joins the quadruplet chain
        let state = FullState::product(tr, ProductLabel::new(1, 0, 0).unwrap(), 3, 3).unwrap();
        assert!(matches!(
            extract_chain_amplitudes(&state, 2, 2, 0.0),
            Err(Error::ChainResidual { .. })
        ));
    }

    #[test]
    fn leakage_at_the_boundary_is_reported() {
        let tr = FockTruncation::new(2, 2).unwrap();
        let prop = Propagator::new(tr);
        // starts on the boundary, so the output cannot pass the check
        let initial = FullState::product(tr, ProductLabel::new(0, 0, 0).unwrap(), 2, 2).unwrap();
        assert!(matches!(
            prop.propagate(&initial, 0.4),
            Err(Error::TruncationLeakage { .. })
        ));
    }

    #[test]
    fn truncation_guard_and_index_round_trip() {
        assert!(matches!(
            FockTruncation::new(40, 40),
            Err(Error::TruncationTooLarge { .. })
        ));
        let tr = FockTruncation::new(3, 5).unwrap();
        assert_eq!(tr.dimension(), 8 * 4 * 6);
        for ion in 0..8 {
            for m in 0..=3 {
                for n in 0..=5 {
                    assert_eq!(tr.unpack(tr.index(ion, m, n)), (ion, m, n));
                }
            }
        }
        assert!(FullState::product(tr, ProductLabel::new(0, 0, 0).unwrap(), 4, 0).is_err());
    }

    #[test]
    fn one_shot_propagate_agrees_with_the_reusable_propagator() {
        let tr = FockTruncation::for_chain(1, 1).unwrap();
        let h = build_hamiltonian(&tr);
        let initial = ground_start(tr, 1, 1);
        let a = propagate(&h, &initial, 0.7).unwrap();
        let b = Propagator::new(tr).propagate(&initial, 0.7).unwrap();
        assert_abs_diff_eq!((&a.amplitudes - &b.amplitudes).norm(), 0.0, epsilon = 1e-12);
    }
}
