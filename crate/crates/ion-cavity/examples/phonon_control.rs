//! How the initial phonon and photon numbers steer the reachable states:
//! generation times for the one-excitation W state and the growth of the
//! peak two-excitation probability with photon number.
//!
//! ```bash
//! cargo run -p ion-cavity --example phonon_control
//! ```

use ion_cavity::dynamics::{spectral_data, w1_generation_time, w2_peak_probability};

fn main() {
    let (g, eta) = (8.95e6, 0.01);
    println!("W-state generation time from a single-phonon start (g = {g:.3e} /s, eta = {eta}):");
    for photons in [1u32, 2, 4, 8] {
        let t = w1_generation_time(photons, g, eta).unwrap();
        println!("  {photons} photon(s): {:>7.3} us", t * 1e6);
    }
    println!(
        "  empty cavity: {}",
        w1_generation_time(0, g, eta).unwrap_err()
    );

    println!("\npeak W2 probability from a two-phonon start with n+1 photons:");
    for n in [1u64, 2, 5, 10, 100, 10_000] {
        println!("  n = {n:>6}: {:.6}", w2_peak_probability(n));
    }
    println!("  limit: 24/25 = {:.6}", 24.0 / 25.0);

    // the reachable chain depends on the start: a zero-, one-, or two-phonon
    // preparation opens two, three, or four levels
    println!("\nreachable chain dimension by start (phonons, photons):");
    for (phonons, photons) in [(0u32, 3u32), (1, 3), (2, 3), (3, 3)] {
        let s = spectral_data(phonons as i64 - 1, photons as i64 - 1);
        println!("  ({phonons}, {photons}): {} level(s)", s.dim);
    }
}
