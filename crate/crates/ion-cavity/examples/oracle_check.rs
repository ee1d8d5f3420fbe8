//! Validate the closed-form chain amplitudes against brute-force propagation
//! of the full interaction Hamiltonian on the truncated Fock space.
//!
//! ```bash
//! cargo run -p ion-cavity --example oracle_check
//! ```

use std::collections::BTreeSet;

use ion_cavity::sweep::{run_sweep, OutputKind, SweepRequest, ORACLE_TOL};
use ion_cavity::SimulationConfig;

fn main() {
    let scenarios = [
        ("ground, 1 phonon, 1 photon", SimulationConfig::ground(1, 1)),
        ("ground, 3 phonons, 3 photons", SimulationConfig::ground(3, 3)),
        ("ground, 5 phonons, 2 photons", SimulationConfig::ground(5, 2)),
        ("excited, empty cavity", SimulationConfig::excited(0, 0)),
        ("excited, 2 phonons, 1 photon", SimulationConfig::excited(2, 1)),
    ];
    println!("closed form vs dense eigendecomposition of the full Hamiltonian:");
    for (name, config) in scenarios {
        let request = SweepRequest {
            steps: 120,
            outputs: BTreeSet::from([OutputKind::OracleCheck]),
            ..SweepRequest::standard(config)
        };
        let data = run_sweep(&request).unwrap();
        let deviation = data.oracle_max_deviation.unwrap();
        println!(
            "  {name:<32} max amplitude deviation {deviation:.3e} ({})",
            if deviation <= ORACLE_TOL { "ok" } else { "BREACH" }
        );
    }
}
