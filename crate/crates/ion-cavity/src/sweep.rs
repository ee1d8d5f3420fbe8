//! Scenario runner: tau sweeps with CSV/JSON emission, recipes for the seven
//! reference datasets, headline numbers, and a cross-validation suite.

use std::collections::BTreeSet;
use std::fmt;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::basis::{ProductLabel, LOGICAL_DIM};
use crate::dynamics::{
    amplitudes, amplitudes_excited, amplitudes_ground, probabilities, w1_generation_time,
    w2_peak_probability, AmplitudeSet, Preparation, SimulationConfig,
};
use crate::entanglement::{
    density_from_pure, entanglement_report, multipartite, partial_kway_negativities,
    partial_transpose, KwayNegativities, Subsystem, TransposeSpec,
};
use crate::error::{Error, Result};
use crate::oracle::{extract_chain_amplitudes, FockTruncation, FullState, Propagator};

/// Largest acceptable closed-form vs brute-force amplitude deviation.
pub const ORACLE_TOL: f64 = 1e-8;

/// Columns of every CSV emitted by [`SweepData::to_csv`]; measures that were
/// not requested stay empty, never zero-filled.
pub const CSV_HEADER: &str = "tau,P0,P1,P2,P3,NG_A,E2_A,E3_A,E4_A,E0_A,NG_D,E2_D,E3_D,E4_D,E0_D,NG_AB,E3_A_ABC,E3_A_ABD,E3_A_ACD";

/// Quantities a sweep can compute per grid point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputKind {
    Probabilities,
    NegativitiesA,
    NegativitiesD,
    NegativityAb,
    /// Raw chain amplitudes; carried in the JSON rows only (the CSV schema
    /// is fixed).
    Amplitudes,
    /// Cross-check every grid point against the brute-force propagator and
    /// record the worst deviation.
    OracleCheck,
}

impl OutputKind {
    fn as_str(self) -> &'static str {
        match self {
            OutputKind::Probabilities => "probabilities",
            OutputKind::NegativitiesA => "negativities_a",
            OutputKind::NegativitiesD => "negativities_d",
            OutputKind::NegativityAb => "negativity_ab",
            OutputKind::Amplitudes => "amplitudes",
            OutputKind::OracleCheck => "oracle_check",
        }
    }
}

/// A sweep over an inclusive, uniform tau grid.
#[derive(Clone, Debug, Serialize)]
pub struct SweepRequest {
    pub config: SimulationConfig,
    pub tau_min: f64,
    pub tau_max: f64,
    /// Number of grid points (both endpoints included).
    pub steps: usize,
    pub outputs: BTreeSet<OutputKind>,
}

impl SweepRequest {
    /// Probabilities plus every negativity column over the default grid of
    /// 600 points on `[0, 3 pi]`.
    pub fn standard(config: SimulationConfig) -> Self {
        Self {
            config,
            tau_min: 0.0,
            tau_max: 3.0 * std::f64::consts::PI,
            steps: 600,
            outputs: BTreeSet::from([
                OutputKind::Probabilities,
                OutputKind::NegativitiesA,
                OutputKind::NegativitiesD,
                OutputKind::NegativityAb,
            ]),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.config.validate()?;
        if !(self.tau_min.is_finite() && self.tau_max.is_finite() && self.tau_min < self.tau_max) {
            return Err(Error::InvalidConfig(format!(
                "need tau_min < tau_max, got [{}, {}]",
                self.tau_min, self.tau_max
            )));
        }
        if self.steps < 2 {
            return Err(Error::InvalidConfig(format!(
                "need at least 2 grid points, got {}",
                self.steps
            )));
        }
        Ok(())
    }

    pub fn tau_grid(&self) -> Vec<f64> {
        let span = self.tau_max - self.tau_min;
        (0..self.steps)
            .map(|k| self.tau_min + span * k as f64 / (self.steps - 1) as f64)
            .collect()
    }
}

/// One grid point of a sweep; only requested fields are populated.
#[derive(Clone, Debug)]
pub struct SweepRow {
    pub tau: f64,
    pub probabilities: Option<[f64; 4]>,
    pub qubit_a: Option<KwayNegativities>,
    /// Constrained 3-way negativities for `A`, ordered `(ABC, ABD, ACD)`.
    pub constrained_a: Option<[f64; 3]>,
    pub system_d: Option<KwayNegativities>,
    pub ng_ab: Option<f64>,
    pub amplitudes: Option<[Complex64; 4]>,
}

/// Result of a sweep, with emitters for both wire formats.
#[derive(Clone, Debug)]
pub struct SweepData {
    pub request: SweepRequest,
    pub rows: Vec<SweepRow>,
    /// Largest closed-form vs brute-force amplitude deviation across the
    /// grid, when the oracle check was requested.
    pub oracle_max_deviation: Option<f64>,
}

/// Run a sweep; rows are computed in parallel and assembled in tau order.
pub fn run_sweep(request: &SweepRequest) -> Result<SweepData> {
    request.validate()?;
    let want = |k: OutputKind| request.outputs.contains(&k);
    let need_report = want(OutputKind::NegativitiesA)
        || want(OutputKind::NegativitiesD)
        || want(OutputKind::NegativityAb);

    let cfg = request.config;
    let (m, n) = cfg.chain_mn();
    let oracle = if want(OutputKind::OracleCheck) {
        let truncation = FockTruncation::for_chain(m, n)?;
        let label = match cfg.preparation {
            Preparation::AllGround => ProductLabel::new(0, 0, 0),
            Preparation::AllExcited => ProductLabel::new(1, 1, 1),
        }
        .expect("binary labels");
        let initial =
            FullState::product(truncation, label, cfg.phonons0 as usize, cfg.photons0 as usize)?;
        Some((Propagator::new(truncation), initial))
    } else {
        None
    };

    let computed: Result<Vec<(SweepRow, f64)>> = request
        .tau_grid()
        .par_iter()
        .map(|&tau| {
            let amps = amplitudes(&cfg, tau)?;
            let mut row = SweepRow {
                tau,
                probabilities: want(OutputKind::Probabilities)
                    .then(|| probabilities(&amps, cfg.preparation)),
                qubit_a: None,
                constrained_a: None,
                system_d: None,
                ng_ab: None,
                amplitudes: want(OutputKind::Amplitudes).then(|| amps.as_array()),
            };
            if need_report {
                let report = entanglement_report(&cfg, tau)?;
                if want(OutputKind::NegativitiesA) {
                    row.qubit_a = Some(report.qubit_a);
                    row.constrained_a = Some([
                        report.constrained_a[&[Subsystem::A, Subsystem::B, Subsystem::C]],
                        report.constrained_a[&[Subsystem::A, Subsystem::B, Subsystem::D]],
                        report.constrained_a[&[Subsystem::A, Subsystem::C, Subsystem::D]],
                    ]);
                }
                if want(OutputKind::NegativitiesD) {
                    row.system_d = Some(report.system_d);
                }
                if want(OutputKind::NegativityAb) {
                    row.ng_ab = Some(report.ng_ab);
                }
            }
            let mut deviation = 0.0;
            if let Some((propagator, initial)) = &oracle {
                let evolved = propagator.propagate(initial, tau)?;
                let (chain, _residual) = extract_chain_amplitudes(&evolved, m, n, tau)?;
                deviation = oracle_deviation(&cfg, &chain, tau);
            }
            Ok((row, deviation))
        })
        .collect();
    let computed = computed?;

    let oracle_max_deviation = oracle
        .is_some()
        .then(|| computed.iter().map(|(_, d)| *d).fold(0.0, f64::max));
    Ok(SweepData {
        request: request.clone(),
        rows: computed.into_iter().map(|(row, _)| row).collect(),
        oracle_max_deviation,
    })
}

/// Worst per-component deviation between brute-force chain amplitudes
/// (always in the ground role order) and the closed forms, phase omitted.
fn oracle_deviation(cfg: &SimulationConfig, chain: &AmplitudeSet, tau: f64) -> f64 {
    let extracted = chain.as_array();
    let analytic = match cfg.preparation {
        Preparation::AllGround => {
            amplitudes_ground(cfg.phonons0 as i64 - 1, cfg.photons0 as i64 - 1, tau).as_array()
        }
        Preparation::AllExcited => {
            let a = amplitudes_excited(cfg.phonons0, cfg.photons0, tau);
            [a.a3, a.a2, a.a1, a.a0]
        }
    };
    extracted
        .iter()
        .zip(analytic)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

fn format_field(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.12e}")
}

impl SweepData {
    /// Deterministic CSV with the fixed [`CSV_HEADER`]; unsolicited columns
    /// are empty. Requested raw amplitudes only appear in the JSON form.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(64 * (self.rows.len() + 1));
        out.push_str(CSV_HEADER);
        out.push('\n');
        for row in &self.rows {
            let mut fields: Vec<String> = vec![format_field(row.tau)];
            match row.probabilities {
                Some(p) => fields.extend(p.iter().map(|&x| format_field(x))),
                None => fields.extend(std::iter::repeat_n(String::new(), 4)),
            }
            match &row.qubit_a {
                Some(k) => fields.extend(
                    [k.n_g, k.e2, k.e3, k.e4, k.e0].iter().map(|&x| format_field(x)),
                ),
                None => fields.extend(std::iter::repeat_n(String::new(), 5)),
            }
            match &row.system_d {
                Some(k) => fields.extend(
                    [k.n_g, k.e2, k.e3, k.e4, k.e0].iter().map(|&x| format_field(x)),
                ),
                None => fields.extend(std::iter::repeat_n(String::new(), 5)),
            }
            match row.ng_ab {
                Some(x) => fields.push(format_field(x)),
                None => fields.push(String::new()),
            }
            match row.constrained_a {
                Some(c) => fields.extend(c.iter().map(|&x| format_field(x))),
                None => fields.extend(std::iter::repeat_n(String::new(), 3)),
            }
            out.push_str(&fields.join(","));
            out.push('\n');
        }
        out
    }

    /// JSON document mirroring the CSV rows plus a metadata block with the
    /// configuration, code version, and pinned tolerances.
    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Tolerances {
            oracle_amplitudes: f64,
            decomposition_identity: f64,
            analytic_negativities: f64,
            normalization: f64,
        }
        #[derive(Serialize)]
        struct Metadata<'a> {
            config: &'a SimulationConfig,
            tau_min: f64,
            tau_max: f64,
            steps: usize,
            outputs: Vec<&'static str>,
            code_version: &'static str,
            tolerances: Tolerances,
        }
        #[derive(Serialize)]
        struct ConstrainedA {
            e3_a_abc: f64,
            e3_a_abd: f64,
            e3_a_acd: f64,
        }
        #[derive(Serialize)]
        struct Row {
            tau: f64,
            #[serde(skip_serializing_if = "Option::is_none")]
            probabilities: Option<[f64; 4]>,
            #[serde(skip_serializing_if = "Option::is_none")]
            negativities_a: Option<KwayNegativities>,
            #[serde(skip_serializing_if = "Option::is_none")]
            constrained_a: Option<ConstrainedA>,
            #[serde(skip_serializing_if = "Option::is_none")]
            negativities_d: Option<KwayNegativities>,
            #[serde(skip_serializing_if = "Option::is_none")]
            ng_ab: Option<f64>,
            #[serde(skip_serializing_if = "Option::is_none")]
            amplitudes: Option<[[f64; 2]; 4]>,
        }
        #[derive(Serialize)]
        struct Document<'a> {
            metadata: Metadata<'a>,
            rows: Vec<Row>,
            #[serde(skip_serializing_if = "Option::is_none")]
            oracle_max_deviation: Option<f64>,
        }

        let doc = Document {
            metadata: Metadata {
                config: &self.request.config,
                tau_min: self.request.tau_min,
                tau_max: self.request.tau_max,
                steps: self.request.steps,
                outputs: self.request.outputs.iter().map(|k| k.as_str()).collect(),
                code_version: env!("CARGO_PKG_VERSION"),
                tolerances: Tolerances {
                    oracle_amplitudes: ORACLE_TOL,
                    decomposition_identity: 1e-9,
                    analytic_negativities: 1e-9,
                    normalization: 1e-12,
                },
            },
            rows: self
                .rows
                .iter()
                .map(|r| Row {
                    tau: r.tau,
                    probabilities: r.probabilities,
                    negativities_a: r.qubit_a,
                    constrained_a: r.constrained_a.map(|c| ConstrainedA {
                        e3_a_abc: c[0],
                        e3_a_abd: c[1],
                        e3_a_acd: c[2],
                    }),
                    negativities_d: r.system_d,
                    ng_ab: r.ng_ab,
                    amplitudes: r
                        .amplitudes
                        .map(|a| a.map(|z| [z.re, z.im])),
                })
                .collect(),
            oracle_max_deviation: self.oracle_max_deviation,
        };
        serde_json::to_string_pretty(&doc).expect("plain data serializes")
    }
}

/// One of the seven reference datasets; figure 7 expands to two labeled
/// requests (ground and excited preparations of the pair negativity).
#[derive(Clone, Debug)]
pub struct FigureRecipe {
    pub figure: u8,
    pub label: Option<&'static str>,
    pub request: SweepRequest,
}

/// Fixed recipes for the seven reference figures: probability sweeps for the
/// ground `|000, 3, 3>` and excited `|111, 0, 0>` preparations, their
/// qubit-A and system-D negativity decompositions, and the pair negativity
/// for both.
pub fn figure_recipes(figure: u8) -> Result<Vec<FigureRecipe>> {
    let ground = SimulationConfig::ground(3, 3);
    let excited = SimulationConfig::excited(0, 0);
    let with = |config: SimulationConfig, outputs: &[OutputKind]| SweepRequest {
        outputs: outputs.iter().copied().collect(),
        ..SweepRequest::standard(config)
    };
    let one = |request: SweepRequest| {
        vec![FigureRecipe { figure, label: None, request }]
    };
    Ok(match figure {
        1 => one(with(ground, &[OutputKind::Probabilities])),
        2 => one(with(excited, &[OutputKind::Probabilities])),
        3 => one(with(ground, &[OutputKind::NegativitiesA])),
        4 => one(with(ground, &[OutputKind::NegativitiesD])),
        5 => one(with(excited, &[OutputKind::NegativitiesA])),
        6 => one(with(excited, &[OutputKind::NegativitiesD])),
        7 => vec![
            FigureRecipe {
                figure,
                label: Some("ground"),
                request: with(ground, &[OutputKind::NegativityAb]),
            },
            FigureRecipe {
                figure,
                label: Some("excited"),
                request: with(excited, &[OutputKind::NegativityAb]),
            },
        ],
        other => return Err(Error::UnknownFigure(other)),
    })
}

/// The headline quantities of the scheme, all recomputed live.
#[derive(Clone, Debug, Serialize)]
pub struct HeadlineReport {
    /// W-state generation time for `g = 8.95e6 /s`, `eta = 0.01`, one photon.
    pub t_min_seconds: f64,
    /// Excitation probabilities of the two-phonon, two-photon start at
    /// `tau = pi/8`.
    pub w1_window_probabilities: [f64; 4],
    /// Same start at `tau = pi/4`, where the two-excitation weight peaks.
    pub w2_window_probabilities: [f64; 4],
    /// Single-qubit global negativity of the three-qubit W state.
    pub w_state_negativity: f64,
    /// `(n, peak W2 probability)` for the two-phonon start with `n+1`
    /// photons.
    pub w2_peak_sequence: Vec<(u64, f64)>,
}

pub fn headline_numbers() -> HeadlineReport {
    let t_min = w1_generation_time(1, 8.95e6, 0.01).expect("valid reference parameters");
    let w1 = probabilities(
        &amplitudes_ground(1, 1, std::f64::consts::PI / 8.0),
        Preparation::AllGround,
    );
    let w2 = probabilities(
        &amplitudes_ground(1, 1, std::f64::consts::PI / 4.0),
        Preparation::AllGround,
    );

    // numeric, not hard-coded: eigendecompose the transposed W projector
    let s3 = 1.0 / 3.0_f64.sqrt();
    let mut w = DVector::from_element(8, Complex64::new(0.0, 0.0));
    for idx in [1, 2, 4] {
        w[idx] = Complex64::new(s3, 0.0);
    }
    let rho = DMatrix::from_fn(8, 8, |r, c| w[r] * w[c].conj());
    let pt = multipartite::global_transpose(&rho, &[2, 2, 2], &[0]);
    let w_state_negativity =
        multipartite::trace_norm_negativity(&pt, 2).expect("projector transpose is Hermitian");

    HeadlineReport {
        t_min_seconds: t_min,
        w1_window_probabilities: w1,
        w2_window_probabilities: w2,
        w_state_negativity,
        w2_peak_sequence: (1..=10).map(|n| (n, w2_peak_probability(n))).collect(),
    }
}

impl fmt::Display for HeadlineReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "W1 generation time (g = 8.95e6 /s, eta = 0.01, 1 photon): {:.3} us",
            self.t_min_seconds * 1e6
        )?;
        let p = self.w1_window_probabilities;
        writeln!(
            f,
            "two-phonon two-photon start at tau =  pi/8: P = ({:.6}, {:.6}, {:.6}, {:.6})",
            p[0], p[1], p[2], p[3]
        )?;
        let p = self.w2_window_probabilities;
        writeln!(
            f,
            "two-phonon two-photon start at tau =  pi/4: P = ({:.6}, {:.6}, {:.6}, {:.6})",
            p[0], p[1], p[2], p[3]
        )?;
        writeln!(
            f,
            "single-qubit negativity of the W state: {:.4}",
            self.w_state_negativity
        )?;
        writeln!(f, "peak W2 probability, two-phonon start with n+1 photons:")?;
        for (n, p) in &self.w2_peak_sequence {
            writeln!(f, "  n = {n:>2}: {p:.6}")?;
        }
        Ok(())
    }
}

/// Grid sizes and seeds for [`verify`].
#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    /// Chain labels run over `(m, n) in [0, max_mn]^2`.
    pub max_mn: i64,
    /// Number of tau samples per scenario.
    pub tau_samples: usize,
    pub tau_max: f64,
    /// Number of seeded random pure states for the identity checks.
    pub random_states: usize,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            max_mn: 2,
            tau_samples: 40,
            tau_max: 3.0 * std::f64::consts::PI,
            random_states: 20,
            seed: 7,
        }
    }
}

/// Outcome of one named invariant check.
#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub max_deviation: f64,
    pub tolerance: f64,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.max_deviation <= self.tolerance
    }
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {:<46} max deviation {:.3e} (tolerance {:.1e})",
            if self.passed() { "PASS" } else { "FAIL" },
            self.name,
            self.max_deviation,
            self.tolerance
        )
    }
}

/// Pass/fail summary of the full invariant suite.
#[derive(Clone, Debug, Serialize)]
pub struct VerificationSummary {
    pub checks: Vec<CheckResult>,
}

impl VerificationSummary {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed())
    }
}

impl fmt::Display for VerificationSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for check in &self.checks {
            writeln!(f, "{check}")?;
        }
        writeln!(
            f,
            "{}: {} of {} checks passed",
            if self.passed() { "OK" } else { "FAILED" },
            self.checks.iter().filter(|c| c.passed()).count(),
            self.checks.len()
        )
    }
}

/// Run the cross-validation suite: closed forms against the brute-force
/// propagator, the negativity decomposition and transpose-sum identities,
/// the closed-form negativities against eigendecomposition numerics, and the
/// structural symmetries of the evolved states.
pub fn verify(options: &VerifyOptions) -> Result<VerificationSummary> {
    let taus: Vec<f64> = (1..=options.tau_samples)
        .map(|k| options.tau_max * k as f64 / options.tau_samples as f64)
        .collect();
    let mut checks = Vec::new();

    // normalization over an extended label grid
    let mut norm_dev: f64 = 0.0;
    for m in -1..=options.max_mn + 2 {
        for n in -1..=options.max_mn + 2 {
            for &tau in &taus {
                norm_dev = norm_dev.max(amplitudes_ground(m, n, tau).normalization_defect());
            }
        }
    }
    checks.push(CheckResult {
        name: "amplitude normalization",
        max_deviation: norm_dev,
        tolerance: 1e-12,
    });

    // closed forms against the brute-force propagator, ground start
    let mut oracle_dev: f64 = 0.0;
    for m in 0..=options.max_mn {
        for n in 0..=options.max_mn {
            let cfg = SimulationConfig::ground((m + 1) as u32, (n + 1) as u32);
            oracle_dev = oracle_dev.max(oracle_scenario_deviation(&cfg, &taus)?);
        }
    }
    checks.push(CheckResult {
        name: "ground start vs brute-force propagator",
        max_deviation: oracle_dev,
        tolerance: ORACLE_TOL,
    });

    // same for the excited start
    let mut excited_dev: f64 = 0.0;
    for p in 0..=1u32 {
        for q in 0..=1u32 {
            let cfg = SimulationConfig::excited(p, q);
            excited_dev = excited_dev.max(oracle_scenario_deviation(&cfg, &taus)?);
        }
    }
    checks.push(CheckResult {
        name: "excited start vs brute-force propagator",
        max_deviation: excited_dev,
        tolerance: ORACLE_TOL,
    });

    // a2 vanishes where the two chain cosines agree (two-phonon/two-photon
    // start: tau = k pi / 2)
    let mut root_dev: f64 = 0.0;
    for k in 0..=8 {
        let tau = k as f64 * std::f64::consts::FRAC_PI_2;
        root_dev = root_dev.max(amplitudes_ground(1, 1, tau).a2.norm());
    }
    checks.push(CheckResult {
        name: "separability roots of the a2 amplitude",
        max_deviation: root_dev,
        tolerance: 1e-12,
    });

    // one pass of entanglement reports feeds four checks
    let mut analytic_dev: f64 = 0.0;
    let mut decomposition_dev: f64 = 0.0;
    let mut symmetry_dev: f64 = 0.0;
    let mut constrained_dev: f64 = 0.0;
    for m in 0..=options.max_mn {
        for n in 0..=options.max_mn {
            let cfg = SimulationConfig::ground((m + 1) as u32, (n + 1) as u32);
            for &tau in &taus {
                let report = entanglement_report(&cfg, tau)?;
                analytic_dev = analytic_dev.max(report.max_analytic_deviation());
                decomposition_dev = decomposition_dev.max(report.decomposition_defect());
                symmetry_dev = symmetry_dev
                    .max((report.qubit_a.n_g - report.ng_b).abs())
                    .max((report.qubit_a.n_g - report.ng_c).abs());
                let abc = report.constrained_a[&[Subsystem::A, Subsystem::B, Subsystem::C]];
                let abd = report.constrained_a[&[Subsystem::A, Subsystem::B, Subsystem::D]];
                let acd = report.constrained_a[&[Subsystem::A, Subsystem::C, Subsystem::D]];
                constrained_dev = constrained_dev
                    .max(abc.abs())
                    .max((abd - report.qubit_a.e3 / 2.0).abs())
                    .max((acd - report.qubit_a.e3 / 2.0).abs());
            }
        }
    }

    // the identity checks also cover unstructured states
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let mut ptsum_dev: f64 = 0.0;
    for _ in 0..options.random_states {
        let mut v = DVector::from_fn(LOGICAL_DIM, |_, _| {
            Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
        });
        v /= Complex64::new(v.norm(), 0.0);
        let rho = density_from_pure(&v)?;
        for p in [Subsystem::A, Subsystem::D] {
            decomposition_dev =
                decomposition_dev.max(partial_kway_negativities(&rho, p).decomposition_defect());
        }
        for p in Subsystem::ALL {
            let global = partial_transpose(&rho, &TransposeSpec::global(p));
            let mut sum = DMatrix::from_element(LOGICAL_DIM, LOGICAL_DIM, Complex64::new(0.0, 0.0));
            for k in 2..=4 {
                sum += partial_transpose(&rho, &TransposeSpec::kway(p, k)?);
            }
            sum -= rho.as_matrix() * Complex64::new(2.0, 0.0);
            ptsum_dev = ptsum_dev.max((&sum - &global).norm());
        }
    }

    checks.push(CheckResult {
        name: "closed-form negativities vs eigensolver",
        max_deviation: analytic_dev,
        tolerance: 1e-9,
    });
    checks.push(CheckResult {
        name: "negativity decomposition identity",
        max_deviation: decomposition_dev,
        tolerance: 1e-9,
    });
    checks.push(CheckResult {
        name: "transpose-sum identity",
        max_deviation: ptsum_dev,
        tolerance: 1e-12,
    });
    checks.push(CheckResult {
        name: "qubit exchange symmetry of the global negativity",
        max_deviation: symmetry_dev,
        tolerance: 1e-10,
    });
    checks.push(CheckResult {
        name: "constrained 3-way structure",
        max_deviation: constrained_dev,
        tolerance: 1e-9,
    });

    // single-phonon starts allow only bipartite entanglement
    let mut bipartite_dev: f64 = 0.0;
    for n in 0..=options.max_mn {
        let cfg = SimulationConfig::ground(1, (n + 1) as u32);
        for &tau in &taus {
            let amps = amplitudes(&cfg, tau)?;
            let coeffs = crate::dynamics::logical_coefficients(&amps, cfg.preparation);
            let rho = density_from_pure(&crate::dynamics::logical_state(&coeffs))?;
            for p in Subsystem::ALL {
                let k = partial_kway_negativities(&rho, p);
                bipartite_dev = bipartite_dev.max(k.e3.abs()).max(k.e4.abs());
            }
        }
    }
    checks.push(CheckResult {
        name: "single-phonon starts are bipartite only",
        max_deviation: bipartite_dev,
        tolerance: 1e-10,
    });

    Ok(VerificationSummary { checks })
}

fn oracle_scenario_deviation(cfg: &SimulationConfig, taus: &[f64]) -> Result<f64> {
    let (m, n) = cfg.chain_mn();
    let truncation = FockTruncation::for_chain(m, n)?;
    let label = match cfg.preparation {
        Preparation::AllGround => ProductLabel::new(0, 0, 0),
        Preparation::AllExcited => ProductLabel::new(1, 1, 1),
    }
    .expect("binary labels");
    let initial =
        FullState::product(truncation, label, cfg.phonons0 as usize, cfg.photons0 as usize)?;
    let propagator = Propagator::new(truncation);
    let mut worst: f64 = 0.0;
    for &tau in taus {
        let evolved = propagator.propagate(&initial, tau)?;
        let (chain, _) = extract_chain_amplitudes(&evolved, m, n, tau)?;
        worst = worst.max(oracle_deviation(cfg, &chain, tau));
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn csv_has_the_pinned_header_and_is_deterministic() {
        let mut request = SweepRequest::standard(SimulationConfig::ground(3, 3));
        request.steps = 24;
        let first = run_sweep(&request).unwrap().to_csv();
        let second = run_sweep(&request).unwrap().to_csv();
        assert_eq!(first, second);
        assert!(first.starts_with(CSV_HEADER));
        assert_eq!(first.lines().count(), 25);
        assert_eq!(first.lines().next().unwrap().split(',').count(), 19);
    }

    #[test]
    fn probability_columns_sum_to_one() {
        let mut request = SweepRequest::standard(SimulationConfig::ground(3, 3));
        request.steps = 40;
        request.outputs = BTreeSet::from([OutputKind::Probabilities]);
        let data = run_sweep(&request).unwrap();
        for row in &data.rows {
            let p = row.probabilities.unwrap();
            assert_abs_diff_eq!(p.iter().sum::<f64>(), 1.0, epsilon = 1e-10);
            assert!(row.qubit_a.is_none() && row.system_d.is_none() && row.ng_ab.is_none());
        }
        // unsolicited columns stay empty in the CSV
        let csv = data.to_csv();
        let first_row = csv.lines().nth(1).unwrap();
        let fields: Vec<&str> = first_row.split(',').collect();
        assert!(!fields[1].is_empty() && fields[5].is_empty() && fields[18].is_empty());
    }

    #[test]
    fn two_point_sweep_pins_the_endpoints() {
        let mut request = SweepRequest::standard(SimulationConfig::ground(3, 3));
        request.steps = 2;
        request.tau_max = 1e-3;
        request.outputs = BTreeSet::from([OutputKind::Probabilities]);
        let data = run_sweep(&request).unwrap();
        assert_eq!(data.rows.len(), 2);
        let p = data.rows[0].probabilities.unwrap();
        assert_abs_diff_eq!(p[0], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(data.rows[1].tau, 1e-3, epsilon = 0.0);
    }

    #[test]
    fn sweeps_reject_bad_requests() {
        let mut request = SweepRequest::standard(SimulationConfig::ground(3, 3));
        request.steps = 1;
        assert!(run_sweep(&request).is_err());
        let mut request = SweepRequest::standard(SimulationConfig::ground(3, 3));
        request.tau_max = -1.0;
        assert!(request.validate().is_err());
        let mut request = SweepRequest::standard(SimulationConfig::ground(3, 3));
        request.config.g = -2.0;
        assert!(run_sweep(&request).is_err());
    }

    #[test]
    fn oracle_check_on_a_small_sweep() {
        for config in [SimulationConfig::ground(2, 2), SimulationConfig::excited(0, 0)] {
            let request = SweepRequest {
                steps: 16,
                outputs: BTreeSet::from([OutputKind::OracleCheck, OutputKind::Amplitudes]),
                ..SweepRequest::standard(config)
            };
            let data = run_sweep(&request).unwrap();
            let deviation = data.oracle_max_deviation.unwrap();
            assert!(deviation < ORACLE_TOL, "deviation {deviation}");
        }
    }

    #[test]
    fn vacuum_starts_stay_frozen_through_the_oracle_path() {
        // zero phonons (or photons) in the ground preparation: nothing to
        // exchange, the state never moves
        for config in [SimulationConfig::ground(0, 3), SimulationConfig::ground(3, 0)] {
            let request = SweepRequest {
                steps: 10,
                outputs: BTreeSet::from([OutputKind::Probabilities, OutputKind::OracleCheck]),
                ..SweepRequest::standard(config)
            };
            let data = run_sweep(&request).unwrap();
            assert!(data.oracle_max_deviation.unwrap() < ORACLE_TOL);
            for row in &data.rows {
                let p = row.probabilities.unwrap();
                assert_abs_diff_eq!(p[0], 1.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn json_carries_metadata_and_amplitudes() {
        let request = SweepRequest {
            steps: 4,
            outputs: BTreeSet::from([OutputKind::Probabilities, OutputKind::Amplitudes]),
            ..SweepRequest::standard(SimulationConfig::ground(2, 2))
        };
        let data = run_sweep(&request).unwrap();
        let json = data.to_json();
        let parsed: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(parsed["metadata"]["steps"], 4);
        assert_eq!(parsed["metadata"]["config"]["phonons0"], 2);
        assert!(parsed["metadata"]["tolerances"]["oracle_amplitudes"].is_number());
        assert_eq!(parsed["rows"].as_array().unwrap().len(), 4);
        assert_eq!(parsed["rows"][0]["amplitudes"][0][0], 1.0);
        assert!(parsed["rows"][0].get("ng_ab").is_none());
    }

    #[test]
    fn figure_recipes_cover_all_seven() {
        for figure in 1..=7u8 {
            let recipes = figure_recipes(figure).unwrap();
            match figure {
                7 => {
                    assert_eq!(recipes.len(), 2);
                    assert_eq!(recipes[0].label, Some("ground"));
                    assert_eq!(recipes[1].label, Some("excited"));
                }
                _ => assert_eq!(recipes.len(), 1),
            }
            for recipe in &recipes {
                assert_eq!(recipe.request.steps, 600);
                recipe.request.validate().unwrap();
            }
        }
        assert!(matches!(figure_recipes(8), Err(Error::UnknownFigure(8))));
        let fig1 = &figure_recipes(1).unwrap()[0];
        assert_eq!(fig1.request.config.preparation, Preparation::AllGround);
        assert_eq!(fig1.request.config.phonons0, 3);
        assert!(fig1.request.outputs.contains(&OutputKind::Probabilities));
        let fig5 = &figure_recipes(5).unwrap()[0];
        assert_eq!(fig5.request.config.preparation, Preparation::AllExcited);
        assert_eq!(fig5.request.config.phonons0, 0);
    }

    #[test]
    fn headline_reference_numbers() {
        let report = headline_numbers();
        assert!((report.t_min_seconds - 10.133e-6).abs() / 10.133e-6 < 1e-3);
        assert_abs_diff_eq!(report.w1_window_probabilities[1], 0.75, epsilon = 1e-12);
        assert_abs_diff_eq!(report.w1_window_probabilities[0], 1.0 / 16.0, epsilon = 1e-12);
        assert_abs_diff_eq!(report.w2_window_probabilities[2], 0.75, epsilon = 1e-12);
        assert_abs_diff_eq!(
            report.w_state_negativity,
            2.0 * 2.0_f64.sqrt() / 3.0,
            epsilon = 1e-10
        );
        assert_eq!(report.w2_peak_sequence.len(), 10);
        assert_abs_diff_eq!(report.w2_peak_sequence[0].1, 0.75, epsilon = 1e-15);
        let text = report.to_string();
        assert!(text.contains("10.133"));
    }

    #[test]
    fn verify_passes_on_a_small_grid() {
        let options = VerifyOptions {
            max_mn: 1,
            tau_samples: 12,
            random_states: 4,
            ..VerifyOptions::default()
        };
        let summary = verify(&options).unwrap();
        assert!(summary.passed(), "{summary}");
        assert_eq!(summary.checks.len(), 10);
    }
}
