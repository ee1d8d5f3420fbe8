//! Excitation probabilities along the interaction parameter for the two
//! separable preparations: all ions ground with three phonons and three
//! photons, and all ions excited in the empty cavity.
//!
//! ```bash
//! cargo run -p ion-cavity --example probability_sweep
//! ```

use std::f64::consts::PI;

use ion_cavity::dynamics::{amplitudes, probabilities};
use ion_cavity::SimulationConfig;

fn main() {
    for (name, cfg) in [
        ("|000> with 3 phonons, 3 photons", SimulationConfig::ground(3, 3)),
        ("|111> with 0 phonons, 0 photons", SimulationConfig::excited(0, 0)),
    ] {
        println!("{name}");
        println!("{:>8} {:>9} {:>9} {:>9} {:>9}", "tau", "P0", "P1", "P2", "P3");
        for k in 0..=24 {
            let tau = 3.0 * PI * k as f64 / 24.0;
            let p = probabilities(&amplitudes(&cfg, tau).unwrap(), cfg.preparation);
            println!(
                "{tau:>8.4} {:>9.5} {:>9.5} {:>9.5} {:>9.5}",
                p[0], p[1], p[2], p[3]
            );
        }
        println!();
    }
    println!("note: the composite state returns to the separable start near tau = 3 pi / 4");
}
