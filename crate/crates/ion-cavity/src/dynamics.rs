//! Invariant-subspace Hamiltonian of the red-sideband interaction, its exact
//! spectrum, and the closed-form time evolution for the two separable
//! preparations (all ions ground, all ions excited).
//!
//! A preparation `|000> (x) |m+1, n+1>` evolves inside a four-state chain
//!
//! ```text
//! |000>|m+1,n+1>  --sqrt(2)C--  |W1>|m,n>  --sqrt(2)B--  |W2>|m-1,n-1>  --sqrt(2)A--  |111>|m-2,n-2>
//! ```
//!
//! whose amplitudes `a0..a3` are evaluated here in closed form as functions
//! of the dimensionless interaction parameter `tau = g*eta*t`. All chain
//! matrices in this module are written in the order above (the all-ground end
//! first); the amplitude index then coincides with the chain site index.

use nalgebra::{DVector, Matrix4, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::basis::{composite_index, LOGICAL_DIM};
use crate::error::{Error, Result};

/// Below this value of `beta` the closed-form spectrum is considered
/// degenerate and a dense eigensolver takes over.
pub const BETA_DEGENERACY: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Initial internal state of the three ions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Preparation {
    AllGround,
    AllExcited,
}

/// Scenario description: preparation, initial Fock occupations, and physical
/// coupling parameters.
///
/// `phonons0` and `photons0` are the physical occupation numbers at `t = 0`.
/// `g` is the ion-cavity coupling used as an angular frequency in 1/s, `eta`
/// the dimensionless Lamb-Dicke parameter. All dynamics is expressed in
/// `tau = g*eta*t`; `g` and `eta` only enter conversions to seconds and the
/// optional global phase.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulationConfig {
    pub preparation: Preparation,
    pub phonons0: u32,
    pub photons0: u32,
    pub g: f64,
    pub eta: f64,
    /// Reinstate the free-evolution phase `exp(-i omega1 t)` on all
    /// amplitudes. Every probability and negativity is invariant under it,
    /// so it is off by default.
    #[serde(default)]
    pub include_global_phase: bool,
    /// Trap frequency (1/s), used only when `include_global_phase` is set.
    #[serde(default)]
    pub trap_frequency: f64,
    /// Cavity frequency (1/s), used only when `include_global_phase` is set.
    #[serde(default)]
    pub cavity_frequency: f64,
    /// Ionic transition frequency (1/s), used only when
    /// `include_global_phase` is set.
    #[serde(default)]
    pub transition_frequency: f64,
}

impl SimulationConfig {
    /// Experimentally motivated defaults: `g = 8.95e6 /s`, `eta = 0.01`.
    pub fn new(preparation: Preparation, phonons0: u32, photons0: u32) -> Self {
        Self {
            preparation,
            phonons0,
            photons0,
            g: 8.95e6,
            eta: 0.01,
            include_global_phase: false,
            trap_frequency: 0.0,
            cavity_frequency: 0.0,
            transition_frequency: 0.0,
        }
    }

    pub fn ground(phonons0: u32, photons0: u32) -> Self {
        Self::new(Preparation::AllGround, phonons0, photons0)
    }

    pub fn excited(phonons0: u32, photons0: u32) -> Self {
        Self::new(Preparation::AllExcited, phonons0, photons0)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.g.is_finite() && self.g > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "coupling g must be positive and finite, got {}",
                self.g
            )));
        }
        if !(self.eta.is_finite() && self.eta > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "Lamb-Dicke parameter eta must be positive and finite, got {}",
                self.eta
            )));
        }
        Ok(())
    }

    /// `false` when `eta` is outside the Lamb-Dicke regime the interaction
    /// Hamiltonian was linearized in (callers should warn, not fail).
    pub fn eta_in_lamb_dicke_regime(&self) -> bool {
        self.eta <= 0.1
    }

    /// Chain labels `(m, n)` of the invariant subspace this scenario lives
    /// in: the all-ground end of the chain holds `m+1` phonons and `n+1`
    /// photons.
    pub fn chain_mn(&self) -> (i64, i64) {
        match self.preparation {
            Preparation::AllGround => (self.phonons0 as i64 - 1, self.photons0 as i64 - 1),
            Preparation::AllExcited => (self.phonons0 as i64 + 2, self.photons0 as i64 + 2),
        }
    }
}

/// Couplings and exact spectrum of the four-state chain for given labels
/// `(m, n)`, all in units of `hbar*g*eta`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectralData {
    /// Coupling on the rung `|W2> <-> |111>`; zero unless `m, n >= 1`.
    pub a: f64,
    /// Coupling on the rung `|W1> <-> |W2>`; zero unless `m, n >= 0`.
    pub b: f64,
    /// Coupling on the rung `|000> <-> |W1>`.
    pub c: f64,
    /// `a^2 + b^2 + c^2`.
    pub mu: f64,
    /// `sqrt(mu^2 - 4 a^2 c^2)`; nonnegative.
    pub beta: f64,
    /// `mu - 2 a^2`.
    pub mu1: f64,
    /// `mu - 2 c^2`.
    pub mu2: f64,
    /// `[-sqrt(mu-beta), sqrt(mu-beta), -sqrt(mu+beta), sqrt(mu+beta)]`.
    pub eigenvalues: [f64; 4],
    /// Number of chain sites reachable from the all-ground end.
    pub dim: usize,
}

/// Chain couplings and spectrum for labels `(m, n)`; rungs whose Fock
/// occupations would be negative carry zero coupling.
pub fn spectral_data(m: i64, n: i64) -> SpectralData {
    let a = if m >= 1 && n >= 1 {
        (1.5 * ((m - 1) * (n - 1)) as f64).sqrt()
    } else {
        0.0
    };
    let b = if m >= 0 && n >= 0 {
        (2.0 * (m * n) as f64).sqrt()
    } else {
        0.0
    };
    let c = if m >= -1 && n >= -1 {
        (1.5 * ((m + 1) * (n + 1)) as f64).sqrt()
    } else {
        0.0
    };
    let mu = a * a + b * b + c * c;
    let beta = (mu * mu - 4.0 * (a * c).powi(2)).max(0.0).sqrt();
    let slow = (mu - beta).max(0.0).sqrt();
    let fast = (mu + beta).sqrt();
    let dim = if c == 0.0 {
        1
    } else if b == 0.0 {
        2
    } else if a == 0.0 {
        3
    } else {
        4
    };
    SpectralData {
        a,
        b,
        c,
        mu,
        beta,
        mu1: mu - 2.0 * a * a,
        mu2: mu - 2.0 * c * c,
        eigenvalues: [-slow, slow, -fast, fast],
        dim,
    }
}

/// The 4x4 chain Hamiltonian in units of `hbar*g*eta`, together with its
/// spectral data. Basis order is the chain order (all-ground end first), so
/// the tridiagonal couplings read `sqrt(2)c, sqrt(2)b, sqrt(2)a`.
pub fn block_hamiltonian(m: i64, n: i64) -> (SpectralData, Matrix4<f64>) {
    let s = spectral_data(m, n);
    (s, chain_matrix(s.c, s.b, s.a))
}

fn chain_matrix(r0: f64, r1: f64, r2: f64) -> Matrix4<f64> {
    let s2 = 2.0_f64.sqrt();
    Matrix4::new(
        0.0,
        s2 * r0,
        0.0,
        0.0,
        s2 * r0,
        0.0,
        s2 * r1,
        0.0,
        0.0,
        s2 * r1,
        0.0,
        s2 * r2,
        0.0,
        0.0,
        s2 * r2,
        0.0,
    )
}

/// Orthogonal matrix diagonalizing the chain Hamiltonian.
#[derive(Clone, Debug)]
pub struct SpectralUnitary {
    /// Rows are eigenvectors; `matrix * H * matrix^t` is diagonal with the
    /// entries of [`SpectralData::eigenvalues`] in order.
    pub matrix: Matrix4<f64>,
    /// `false` when the closed form was unusable (degenerate `beta`) and a
    /// dense symmetric eigensolver produced the rows instead.
    pub analytic: bool,
}

/// Diagonalizing transform of the chain block described by `s`.
///
/// Radicands like `beta - mu1` vanish exactly at reduced-dimension points and
/// may come out slightly negative in floating point; they are clamped to
/// zero.
pub fn spectral_unitary(s: &SpectralData) -> SpectralUnitary {
    if s.beta <= BETA_DEGENERACY {
        return SpectralUnitary {
            matrix: numeric_unitary(s),
            analytic: false,
        };
    }
    let q = 4.0 * s.beta;
    let pp2 = clamp_radicand((s.beta + s.mu2) / q);
    let pm2 = clamp_radicand((s.beta - s.mu2) / q);
    let pp1 = clamp_radicand((s.beta + s.mu1) / q);
    let pm1 = clamp_radicand((s.beta - s.mu1) / q);
    let matrix = Matrix4::new(
        pp2, -pm1, -pm2, pp1, //
        -pp2, -pm1, pm2, pp1, //
        -pm2, pp1, -pp2, pm1, //
        pm2, pp1, pp2, pm1,
    );
    SpectralUnitary { matrix, analytic: true }
}

fn numeric_unitary(s: &SpectralData) -> Matrix4<f64> {
    let h = chain_matrix(s.c, s.b, s.a);
    let eig = SymmetricEigen::new(h);
    // ascending order is [-fast, -slow, slow, fast]; reorder the rows to
    // match the published eigenvalue convention
    let mut order: Vec<usize> = (0..4).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let target = [order[1], order[2], order[0], order[3]];
    let mut u = Matrix4::zeros();
    for (row, &k) in target.iter().enumerate() {
        for col in 0..4 {
            u[(row, col)] = eig.eigenvectors[(col, k)];
        }
    }
    u
}

fn clamp_radicand(x: f64) -> f64 {
    if x < 0.0 {
        debug_assert!(x > -1e-12, "radicand {x} below the clamping window");
        0.0
    } else {
        x.sqrt()
    }
}

/// The four chain amplitudes at a given interaction parameter.
///
/// The role of each amplitude depends on the preparation: for the all-ground
/// start `a0` multiplies `|000>|m+1,n+1>` and `a3` multiplies
/// `|111>|m-2,n-2>`; for the all-excited start the assignment is reversed
/// (`a0` multiplies `|111>` and `a3` multiplies `|000>`).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AmplitudeSet {
    pub a0: Complex64,
    pub a1: Complex64,
    pub a2: Complex64,
    pub a3: Complex64,
    pub tau: f64,
}

impl AmplitudeSet {
    pub fn as_array(&self) -> [Complex64; 4] {
        [self.a0, self.a1, self.a2, self.a3]
    }

    pub fn norm_sqr_sum(&self) -> f64 {
        self.as_array().iter().map(|a| a.norm_sqr()).sum()
    }

    /// `| sum |a_i|^2 - 1 |`; zero for any state this crate constructs.
    pub fn normalization_defect(&self) -> f64 {
        (self.norm_sqr_sum() - 1.0).abs()
    }

    fn from_array(a: [Complex64; 4], tau: f64) -> Self {
        Self {
            a0: a[0],
            a1: a[1],
            a2: a[2],
            a3: a[3],
            tau,
        }
    }
}

/// Closed-form amplitudes for evolution that starts on site 0 of a four-site
/// chain with couplings `sqrt(2) * (r0, r1, r2)`.
///
/// `mu_bottom`/`mu_top` play the roles of `mu2`/`mu1`: the published
/// expressions assume the start-adjacent coupling is `c`, and swapping the
/// chain ends swaps the two.
fn chain_amplitudes(r0: f64, r1: f64, r2: f64, tau: f64) -> [Complex64; 4] {
    let mu = r0 * r0 + r1 * r1 + r2 * r2;
    if mu <= 0.0 {
        // no coupling at all: the start state is stationary
        return [ONE, ZERO, ZERO, ZERO];
    }
    let beta = (mu * mu - 4.0 * (r0 * r2).powi(2)).max(0.0).sqrt();
    if beta <= BETA_DEGENERACY {
        return chain_amplitudes_numeric(r0, r1, r2, tau);
    }
    let mu_bottom = mu - 2.0 * r0 * r0;
    let mu_top = mu - 2.0 * r2 * r2;
    let bpb = clamp_radicand2(beta + mu_bottom);
    let bmb = clamp_radicand2(beta - mu_bottom);
    let bpt = clamp_radicand2(beta + mu_top);
    let bmt = clamp_radicand2(beta - mu_top);
    let omega_fast = (mu + beta).sqrt();
    let omega_slow = (mu - beta).max(0.0).sqrt();
    let (cf, sf) = ((omega_fast * tau).cos(), (omega_fast * tau).sin());
    let (cs, ss) = ((omega_slow * tau).cos(), (omega_slow * tau).sin());
    let inv = 1.0 / (2.0 * beta);
    [
        Complex64::new((bmb * cf + bpb * cs) * inv, 0.0),
        Complex64::new(0.0, -((bmb * bpt).sqrt() * sf + (bpb * bmt).sqrt() * ss) * inv),
        Complex64::new((bpb * bmb).sqrt() * (cf - cs) * inv, 0.0),
        Complex64::new(0.0, -((bmb * bmt).sqrt() * sf - (bpb * bpt).sqrt() * ss) * inv),
    ]
}

fn clamp_radicand2(x: f64) -> f64 {
    if x < 0.0 {
        debug_assert!(x > -1e-12, "radicand {x} below the clamping window");
        0.0
    } else {
        x
    }
}

/// Dense fallback used when `beta` is degenerate: diagonalize the 4x4 chain
/// and propagate site 0 through the eigenbasis.
fn chain_amplitudes_numeric(r0: f64, r1: f64, r2: f64, tau: f64) -> [Complex64; 4] {
    let eig = SymmetricEigen::new(chain_matrix(r0, r1, r2));
    let mut out = [ZERO; 4];
    for k in 0..4 {
        let phase = Complex64::from_polar(1.0, -eig.eigenvalues[k] * tau);
        let weight = eig.eigenvectors[(0, k)];
        for (i, slot) in out.iter_mut().enumerate() {
            *slot += eig.eigenvectors[(i, k)] * weight * phase;
        }
    }
    out
}

/// Amplitudes of the state evolved from `|000> (x) |m+1, n+1>`.
///
/// `m, n >= -1`; `m = -1` (phonon vacuum) or `n = -1` (photon vacuum) leaves
/// the state stationary.
pub fn amplitudes_ground(m: i64, n: i64, tau: f64) -> AmplitudeSet {
    let s = spectral_data(m, n);
    AmplitudeSet::from_array(chain_amplitudes(s.c, s.b, s.a, tau), tau)
}

/// Amplitudes of the state evolved from `|111> (x) |phonons0, photons0>`.
///
/// Takes the physical occupation numbers; internally the chain labels are
/// `(m, n) = (phonons0 + 2, photons0 + 2)` and evolution starts from the
/// all-excited end, which swaps the roles of the end couplings relative to
/// the ground start. `a0` is the `|111>` amplitude, `a3` the `|000>` one.
pub fn amplitudes_excited(phonons0: u32, photons0: u32, tau: f64) -> AmplitudeSet {
    let (m, n) = (phonons0 as i64 + 2, photons0 as i64 + 2);
    let s = spectral_data(m, n);
    AmplitudeSet::from_array(chain_amplitudes(s.a, s.b, s.c, tau), tau)
}

/// Amplitudes for a configured scenario, with the optional free-evolution
/// phase applied.
pub fn amplitudes(cfg: &SimulationConfig, tau: f64) -> Result<AmplitudeSet> {
    cfg.validate()?;
    let mut amps = match cfg.preparation {
        Preparation::AllGround => {
            amplitudes_ground(cfg.phonons0 as i64 - 1, cfg.photons0 as i64 - 1, tau)
        }
        Preparation::AllExcited => amplitudes_excited(cfg.phonons0, cfg.photons0, tau),
    };
    if cfg.include_global_phase {
        let (m, n) = cfg.chain_mn();
        let omega1 = cfg.trap_frequency * (m as f64 + 1.5)
            + cfg.cavity_frequency * (n as f64 + 1.0)
            - 1.5 * cfg.transition_frequency;
        let t = tau / (cfg.g * cfg.eta);
        let phase = Complex64::from_polar(1.0, -omega1 * t);
        amps.a0 *= phase;
        amps.a1 *= phase;
        amps.a2 *= phase;
        amps.a3 *= phase;
    }
    Ok(amps)
}

/// Probabilities of finding 0, 1, 2, 3 ions excited.
pub fn probabilities(amps: &AmplitudeSet, preparation: Preparation) -> [f64; 4] {
    let p = amps.as_array().map(|a| a.norm_sqr());
    match preparation {
        Preparation::AllGround => p,
        Preparation::AllExcited => [p[3], p[2], p[1], p[0]],
    }
}

/// Coefficients on the logical basis `{|0000>, |W1>|1>, |W2>|2>, |1113>}`,
/// with the preparation-dependent role assignment resolved.
pub fn logical_coefficients(amps: &AmplitudeSet, preparation: Preparation) -> [Complex64; 4] {
    let a = amps.as_array();
    match preparation {
        Preparation::AllGround => a,
        Preparation::AllExcited => [a[3], a[2], a[1], a[0]],
    }
}

/// Place logical coefficients into the 32-component composite space: `c[0]`
/// on `|0000>`, `c[1]/sqrt(3)` on the one-excitation W pattern at `d = 1`,
/// `c[2]/sqrt(3)` on the two-excitation pattern at `d = 2`, `c[3]` on
/// `|1113>`.
pub fn logical_state(coefficients: &[Complex64; 4]) -> DVector<Complex64> {
    let s3 = 1.0 / 3.0_f64.sqrt();
    let mut v = DVector::from_element(LOGICAL_DIM, ZERO);
    v[composite_index(0, 0, 0, 0).expect("in range")] = coefficients[0];
    for (i1, i2, i3) in [(1, 0, 0), (0, 1, 0), (0, 0, 1)] {
        v[composite_index(i1, i2, i3, 1).expect("in range")] = coefficients[1] * s3;
    }
    for (i1, i2, i3) in [(1, 1, 0), (1, 0, 1), (0, 1, 1)] {
        v[composite_index(i1, i2, i3, 2).expect("in range")] = coefficients[2] * s3;
    }
    v[composite_index(1, 1, 1, 3).expect("in range")] = coefficients[3];
    v
}

/// Evolved state of the full scenario on the 2x2x2x4 logical space.
pub fn composite_state(cfg: &SimulationConfig, tau: f64) -> Result<DVector<Complex64>> {
    let amps = amplitudes(cfg, tau)?;
    Ok(logical_state(&logical_coefficients(&amps, cfg.preparation)))
}

/// Minimum interaction time, in seconds, to reach the one-excitation W-state
/// probability peak from a single-phonon, `n_photons`-photon start.
pub fn w1_generation_time(n_photons: u32, g: f64, eta: f64) -> Result<f64> {
    if !(g.is_finite() && g > 0.0) || !(eta.is_finite() && eta > 0.0) {
        return Err(Error::InvalidConfig(format!(
            "g and eta must be positive and finite, got g = {g}, eta = {eta}"
        )));
    }
    if n_photons == 0 {
        // the single-phonon chain needs a photon to exchange; in vacuum the
        // state never moves
        return Err(Error::PhotonVacuum);
    }
    Ok(std::f64::consts::PI / (2.0 * g * eta * (3.0 * n_photons as f64).sqrt()))
}

/// Peak probability `24 n (n+1) / (5n+3)^2` of the two-excitation W state for
/// a two-phonon, `n+1`-photon start, reached at
/// `t = pi / (g eta sqrt(2(5n+3)))`.
pub fn w2_peak_probability(n: u64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let nf = n as f64;
    24.0 * nf * (nf + 1.0) / (5.0 * nf + 3.0).powi(2)
}

/// Idealized W-window amplitudes `(a1, a3)` reached when both chain
/// frequencies sit at a sine extremum; the `a0` and `a2` amplitudes vanish
/// there and `|a1|^2 + |a3|^2 = 1` exactly.
///
/// The same two values describe the one-excitation window of the all-ground
/// start and the two-excitation window of the all-excited start.
pub fn w_window_amplitudes(m: i64, n: i64) -> (Complex64, Complex64) {
    let s = spectral_data(m, n);
    let inv = 1.0 / (2.0 * s.beta);
    let bpb = clamp_radicand2(s.beta + s.mu2);
    let bmb = clamp_radicand2(s.beta - s.mu2);
    let bpt = clamp_radicand2(s.beta + s.mu1);
    let bmt = clamp_radicand2(s.beta - s.mu1);
    let a1 = Complex64::new(0.0, -((bmb * bpt).sqrt() + (bpb * bmt).sqrt()) * inv);
    let a3 = Complex64::new(0.0, -((bmb * bmt).sqrt() - (bpb * bpt).sqrt()) * inv);
    (a1, a3)
}
