//! Density matrices on the 2x2x2x4 logical space, their global, K-way, and
//! constrained partial transposes, and the negativity measures built from
//! them, together with the closed-form expressions available for the
//! chain-evolved states.

pub mod multipartite;

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::basis::{LOGICAL_DIM, LOGICAL_DIMS};
use crate::dynamics::{
    amplitudes, logical_coefficients, logical_state, AmplitudeSet, SimulationConfig,
};
use crate::error::{Error, Result};
use multipartite::{
    constrained3_transpose, global_transpose, hermiticity_defect, kway_transpose,
    negative_eigenspace, partial_trace, sandwich_sum, trace_norm_negativity,
};

/// Eigenvalues below this count as genuinely negative when collecting the
/// negative eigenspace of a global partial transpose.
pub const NEGATIVE_EIGENVALUE_THRESHOLD: f64 = -1e-12;

const HERMITIAN_TOL: f64 = 1e-12;
const TRACE_TOL: f64 = 1e-12;
const NORM_TOL: f64 = 1e-12;

/// The four parties: ionic qubits `A`, `B`, `C` and the photon-phonon
/// system `D`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Subsystem {
    A,
    B,
    C,
    D,
}

impl Subsystem {
    pub const ALL: [Subsystem; 4] = [Subsystem::A, Subsystem::B, Subsystem::C, Subsystem::D];

    pub fn index(self) -> usize {
        match self {
            Subsystem::A => 0,
            Subsystem::B => 1,
            Subsystem::C => 2,
            Subsystem::D => 3,
        }
    }

    pub fn dim(self) -> usize {
        LOGICAL_DIMS[self.index()]
    }

    pub fn label(self) -> char {
        match self {
            Subsystem::A => 'A',
            Subsystem::B => 'B',
            Subsystem::C => 'C',
            Subsystem::D => 'D',
        }
    }
}

/// Which partial transpose to apply.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TransposeKind {
    /// Transpose the subsystem on every matrix element.
    Global,
    /// Transpose only elements whose number of differing subsystem indices
    /// matches `K` (2, 3, or 4); see [`multipartite::kway_transpose`] for the
    /// `K = 2` convention.
    KWay(usize),
    /// Transpose only elements whose differing subsystems are exactly this
    /// triple (which must contain the transposed subsystem).
    Constrained3([Subsystem; 3]),
}

/// A validated (subsystem, kind) pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TransposeSpec {
    pub subsystem: Subsystem,
    pub kind: TransposeKind,
}

impl TransposeSpec {
    pub fn global(subsystem: Subsystem) -> Self {
        Self { subsystem, kind: TransposeKind::Global }
    }

    pub fn kway(subsystem: Subsystem, k: usize) -> Result<Self> {
        if !(2..=4).contains(&k) {
            return Err(Error::InvalidConfig(format!(
                "K-way transpose needs K in 2..=4, got {k}"
            )));
        }
        Ok(Self { subsystem, kind: TransposeKind::KWay(k) })
    }

    pub fn constrained3(subsystem: Subsystem, triple: [Subsystem; 3]) -> Result<Self> {
        if !triple.contains(&subsystem) {
            return Err(Error::InvalidConfig(format!(
                "constrained triple {triple:?} does not contain subsystem {}",
                subsystem.label()
            )));
        }
        if triple[0] == triple[1] || triple[0] == triple[2] || triple[1] == triple[2] {
            return Err(Error::InvalidConfig(format!(
                "constrained triple {triple:?} has a repeated subsystem"
            )));
        }
        Ok(Self { subsystem, kind: TransposeKind::Constrained3(triple) })
    }
}

/// Hermitian, unit-trace operator on the 32-dimensional logical space.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    matrix: DMatrix<Complex64>,
}

impl DensityMatrix {
    /// Validates dimensions, Hermiticity, and unit trace. Positive
    /// semidefiniteness is guaranteed for anything built by
    /// [`density_from_pure`] and is not re-checked here.
    pub fn new(matrix: DMatrix<Complex64>) -> Result<Self> {
        if matrix.nrows() != LOGICAL_DIM || matrix.ncols() != LOGICAL_DIM {
            return Err(Error::InvalidIndex(format!(
                "density matrix must be {LOGICAL_DIM}x{LOGICAL_DIM}, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let deviation = hermiticity_defect(&matrix);
        if deviation > HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        let trace: Complex64 = (0..LOGICAL_DIM).map(|i| matrix[(i, i)]).sum();
        let trace_dev = (trace - Complex64::new(1.0, 0.0)).norm();
        if trace_dev > TRACE_TOL {
            return Err(Error::InvalidConfig(format!(
                "density matrix trace deviates from 1 by {trace_dev:.3e}"
            )));
        }
        Ok(Self { matrix })
    }

    pub fn as_matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }
}

/// Reduced state of the three ionic qubits, indexed `4*i1 + 2*i2 + i3`
/// (qubit A most significant).
#[derive(Clone, Debug)]
pub struct ReducedIonState {
    matrix: DMatrix<Complex64>,
}

impl ReducedIonState {
    pub fn as_matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }
}

/// Rank-one projector onto a normalized 32-component pure state.
pub fn density_from_pure(state: &DVector<Complex64>) -> Result<DensityMatrix> {
    if state.len() != LOGICAL_DIM {
        return Err(Error::InvalidIndex(format!(
            "pure state must have {LOGICAL_DIM} components, got {}",
            state.len()
        )));
    }
    let deviation = (state.norm_squared() - 1.0).abs();
    if deviation > NORM_TOL {
        return Err(Error::NotNormalized { deviation });
    }
    let matrix = DMatrix::from_fn(LOGICAL_DIM, LOGICAL_DIM, |r, c| state[r] * state[c].conj());
    Ok(DensityMatrix { matrix })
}

/// Trace out the photon-phonon system.
pub fn reduce_to_ions(rho: &DensityMatrix) -> ReducedIonState {
    ReducedIonState {
        matrix: partial_trace(&rho.matrix, &LOGICAL_DIMS, &[0, 1, 2]),
    }
}

/// Apply the requested partial transpose; the output stays Hermitian with
/// unit trace but is generally not positive.
pub fn partial_transpose(rho: &DensityMatrix, spec: &TransposeSpec) -> DMatrix<Complex64> {
    let p = spec.subsystem.index();
    match spec.kind {
        TransposeKind::Global => global_transpose(&rho.matrix, &LOGICAL_DIMS, &[p]),
        TransposeKind::KWay(k) => kway_transpose(&rho.matrix, &LOGICAL_DIMS, p, k),
        TransposeKind::Constrained3(triple) => {
            let t = [triple[0].index(), triple[1].index(), triple[2].index()];
            constrained3_transpose(&rho.matrix, &LOGICAL_DIMS, p, &t)
        }
    }
}

/// Global transpose of several subsystems at once (used for the `AB` pair,
/// a dimension-four party).
pub fn joint_global_transpose(rho: &DensityMatrix, subsystems: &[Subsystem]) -> DMatrix<Complex64> {
    let idx: Vec<usize> = subsystems.iter().map(|s| s.index()).collect();
    global_transpose(&rho.matrix, &LOGICAL_DIMS, &idx)
}

/// Negativity `(||pt||_1 - 1) / (d_p - 1)` of a Hermitian, unit-trace
/// partial transpose.
pub fn negativity(pt: &DMatrix<Complex64>, d_p: usize) -> Result<f64> {
    trace_norm_negativity(pt, d_p)
}

/// Global negativity and its partial K-way decomposition for one subsystem.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct KwayNegativities {
    pub n_g: f64,
    pub e2: f64,
    pub e3: f64,
    pub e4: f64,
    pub e0: f64,
}

impl KwayNegativities {
    /// `|N_G - (E2 + E3 + E4 - E0)|`; zero up to eigensolver noise.
    pub fn decomposition_defect(&self) -> f64 {
        (self.n_g - (self.e2 + self.e3 + self.e4 - self.e0)).abs()
    }
}

/// Decompose the global negativity of subsystem `p` into partial K-way
/// contributions by sandwiching each K-way transpose (and the state itself,
/// for the residual term) with the negative eigenvectors of the global
/// transpose.
pub fn partial_kway_negativities(rho: &DensityMatrix, p: Subsystem) -> KwayNegativities {
    let d = p.dim();
    let norm = 2.0 / (d - 1) as f64;
    let pt = partial_transpose(rho, &TransposeSpec::global(p));
    let neg = negative_eigenspace(&pt, NEGATIVE_EIGENVALUE_THRESHOLD)
        .expect("transposes of a valid density matrix are Hermitian");
    let n_g = -norm * neg.eigenvalue_sum();
    let mut e = [0.0; 3];
    for (slot, k) in e.iter_mut().zip(2..=4) {
        let kt = kway_transpose(&rho.matrix, &LOGICAL_DIMS, p.index(), k);
        *slot = -norm * sandwich_sum(&neg.vectors, &kt);
    }
    // residual term: N - 2 = 2 state sandwiches
    let e0 = -2.0 * norm * sandwich_sum(&neg.vectors, &rho.matrix);
    KwayNegativities { n_g, e2: e[0], e3: e[1], e4: e[2], e0 }
}

/// Constrained 3-way negativities for the three subsystem triples containing
/// `p`, keyed by the triple.
pub fn constrained_3way_negativities(
    rho: &DensityMatrix,
    p: Subsystem,
) -> BTreeMap<[Subsystem; 3], f64> {
    let d = p.dim();
    let norm = 2.0 / (d - 1) as f64;
    let pt = partial_transpose(rho, &TransposeSpec::global(p));
    let neg = negative_eigenspace(&pt, NEGATIVE_EIGENVALUE_THRESHOLD)
        .expect("transposes of a valid density matrix are Hermitian");
    let mut out = BTreeMap::new();
    for (x, y, z) in [
        (Subsystem::A, Subsystem::B, Subsystem::C),
        (Subsystem::A, Subsystem::B, Subsystem::D),
        (Subsystem::A, Subsystem::C, Subsystem::D),
        (Subsystem::B, Subsystem::C, Subsystem::D),
    ] {
        let triple = [x, y, z];
        if !triple.contains(&p) {
            continue;
        }
        let t = [x.index(), y.index(), z.index()];
        let ct = constrained3_transpose(&rho.matrix, &LOGICAL_DIMS, p.index(), &t);
        out.insert(triple, -norm * sandwich_sum(&neg.vectors, &ct));
    }
    out
}

/// The closed-form negativity subset available for the chain-evolved states.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct AnalyticNegativities {
    pub ng_a: f64,
    pub e2_a: f64,
    pub e3_a: f64,
    pub e4_a: f64,
    pub ng_d: f64,
    pub e2_d: f64,
    pub e3_d: f64,
    pub e4_d: f64,
    pub ng_ab: f64,
}

/// Evaluate the closed forms on a set of logical-basis coefficients (the
/// `a0..a3` weights of `|0000>`, the one- and two-excitation W patterns, and
/// `|1113>`). Only the moduli enter.
///
/// For a separable state across `A` (`ng_a` below threshold) the K-way
/// shares are reported as zero rather than dividing by it.
pub fn analytic_negativities(amps: &AmplitudeSet) -> AnalyticNegativities {
    let p: Vec<f64> = amps.as_array().iter().map(|a| a.norm_sqr()).collect();
    let m: Vec<f64> = amps.as_array().iter().map(|a| a.norm()).collect();

    let x = p[0] + 2.0 * p[1] / 3.0 + p[2] / 3.0;
    let y = p[3] + p[1] / 3.0 + 2.0 * p[2] / 3.0;
    let ng_a = 2.0 * (x * y).sqrt();
    let (e2_a, e3_a, e4_a) = if ng_a < 1e-12 {
        (0.0, 0.0, 0.0)
    } else {
        let scale = 4.0 / ng_a;
        (
            scale
                * (p[0] * p[1] / 3.0
                    + p[2] * p[3] / 3.0
                    + 2.0 * (p[1] * p[1] + p[1] * p[2] + p[2] * p[2]) / 9.0),
            scale * (2.0 * p[0] * p[2] / 3.0 + 2.0 * p[1] * p[3] / 3.0),
            scale * (p[0] * p[3] + p[1] * p[2] / 3.0),
        )
    };

    // subsystem D sees the state in Schmidt form with coefficients |a_i|
    let ng_d = 2.0 / 3.0
        * (m[0] * m[1] + m[0] * m[2] + m[0] * m[3] + m[1] * m[2] + m[1] * m[3] + m[2] * m[3]);
    let e4_d = 2.0 / 3.0 * m[0] * m[3] + 2.0 / 9.0 * m[1] * m[2];
    let e3_d = 2.0 / 3.0 * m[0] * m[2] + 2.0 / 3.0 * m[1] * m[3];
    let e2_d = 2.0 / 3.0 * m[0] * m[1] + 2.0 / 3.0 * m[2] * m[3] + 4.0 / 9.0 * m[1] * m[2];

    let mu0 = (p[0] + p[1] / 3.0).sqrt();
    let mu1 = (2.0 * p[1] / 3.0 + 2.0 * p[2] / 3.0).sqrt();
    let mu2 = (p[3] + p[2] / 3.0).sqrt();
    let ng_ab = 2.0 / 3.0 * (mu0 * mu1 + mu0 * mu2 + mu1 * mu2);

    AnalyticNegativities { ng_a, e2_a, e3_a, e4_a, ng_d, e2_d, e3_d, e4_d, ng_ab }
}

/// Full numeric and analytic entanglement characterization of a configured
/// scenario at one interaction parameter.
#[derive(Clone, Debug)]
pub struct NegativityReport {
    pub tau: f64,
    /// Numeric measures for qubit `A` (equal to `B` and `C` by the exchange
    /// symmetry of the evolved states).
    pub qubit_a: KwayNegativities,
    /// Numeric measures for the photon-phonon system `D`.
    pub system_d: KwayNegativities,
    pub ng_b: f64,
    pub ng_c: f64,
    pub ng_ab: f64,
    pub constrained_a: BTreeMap<[Subsystem; 3], f64>,
    pub constrained_d: BTreeMap<[Subsystem; 3], f64>,
    pub analytic: AnalyticNegativities,
}

impl NegativityReport {
    /// Absolute numeric-vs-closed-form deviations, labeled.
    pub fn analytic_deviations(&self) -> Vec<(&'static str, f64)> {
        vec![
            ("NG_A", (self.qubit_a.n_g - self.analytic.ng_a).abs()),
            ("E2_A", (self.qubit_a.e2 - self.analytic.e2_a).abs()),
            ("E3_A", (self.qubit_a.e3 - self.analytic.e3_a).abs()),
            ("E4_A", (self.qubit_a.e4 - self.analytic.e4_a).abs()),
            ("NG_D", (self.system_d.n_g - self.analytic.ng_d).abs()),
            ("E2_D", (self.system_d.e2 - self.analytic.e2_d).abs()),
            ("E3_D", (self.system_d.e3 - self.analytic.e3_d).abs()),
            ("E4_D", (self.system_d.e4 - self.analytic.e4_d).abs()),
            ("NG_AB", (self.ng_ab - self.analytic.ng_ab).abs()),
        ]
    }

    pub fn max_analytic_deviation(&self) -> f64 {
        self.analytic_deviations()
            .into_iter()
            .map(|(_, d)| d)
            .fold(0.0, f64::max)
    }

    pub fn decomposition_defect(&self) -> f64 {
        self.qubit_a
            .decomposition_defect()
            .max(self.system_d.decomposition_defect())
    }
}

/// Build the evolved state for `cfg` at `tau` and compute every negativity
/// measure, numeric and closed-form.
pub fn entanglement_report(cfg: &SimulationConfig, tau: f64) -> Result<NegativityReport> {
    let amps = amplitudes(cfg, tau)?;
    let coefficients = logical_coefficients(&amps, cfg.preparation);
    let rho = density_from_pure(&logical_state(&coefficients))?;

    let qubit_a = partial_kway_negativities(&rho, Subsystem::A);
    let system_d = partial_kway_negativities(&rho, Subsystem::D);
    let ng_b = negativity(&partial_transpose(&rho, &TransposeSpec::global(Subsystem::B)), 2)?;
    let ng_c = negativity(&partial_transpose(&rho, &TransposeSpec::global(Subsystem::C)), 2)?;
    let ng_ab = negativity(&joint_global_transpose(&rho, &[Subsystem::A, Subsystem::B]), 4)?;
    let constrained_a = constrained_3way_negativities(&rho, Subsystem::A);
    let constrained_d = constrained_3way_negativities(&rho, Subsystem::D);

    let analytic = analytic_negativities(&AmplitudeSet {
        a0: coefficients[0],
        a1: coefficients[1],
        a2: coefficients[2],
        a3: coefficients[3],
        tau,
    });

    Ok(NegativityReport {
        tau,
        qubit_a,
        system_d,
        ng_b,
        ng_c,
        ng_ab,
        constrained_a,
        constrained_d,
        analytic,
    })
}
