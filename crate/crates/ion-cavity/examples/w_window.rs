//! The idealized W windows: states reached when both chain frequencies hit a
//! sine extremum, leaving the ions in a W state entangled to the
//! photon-phonon system through purely three-way correlations.
//!
//! ```bash
//! cargo run -p ion-cavity --example w_window
//! ```

use num_complex::Complex64;

use ion_cavity::dynamics::{logical_state, w_window_amplitudes};
use ion_cavity::entanglement::{
    constrained_3way_negativities, density_from_pure, partial_kway_negativities, Subsystem,
};

fn main() {
    let zero = Complex64::new(0.0, 0.0);
    for (m, n) in [(2i64, 2i64), (3, 3), (5, 4)] {
        let (a1, a3) = w_window_amplitudes(m, n);
        println!(
            "window of the (m, n) = ({m}, {n}) chain: |a1|^2 = {:.4}, |a3|^2 = {:.4}",
            a1.norm_sqr(),
            a3.norm_sqr()
        );
        // one-excitation window of the ground start
        let rho = density_from_pure(&logical_state(&[zero, a1, zero, a3])).unwrap();
        let a = partial_kway_negativities(&rho, Subsystem::A);
        let d = partial_kway_negativities(&rho, Subsystem::D);
        println!(
            "  qubit A:  NG = {:.4}, E2 = {:.4}, E3 = {:.4}, E4 = {:.1e}",
            a.n_g, a.e2, a.e3, a.e4
        );
        println!(
            "  system D: NG = {:.4}, E2 = {:.1e}, E3 = {:.4}, E4 = {:.1e}  (NG = E3: no 4-way part)",
            d.n_g, d.e2, d.e3, d.e4
        );
        let c = constrained_3way_negativities(&rho, Subsystem::A);
        println!(
            "  constrained: E3(A-ABC) = {:.1e}, E3(A-ABD) = {:.4}, E3(A-ACD) = {:.4}",
            c[&[Subsystem::A, Subsystem::B, Subsystem::C]],
            c[&[Subsystem::A, Subsystem::B, Subsystem::D]],
            c[&[Subsystem::A, Subsystem::C, Subsystem::D]],
        );
        println!("  -> the three qubits share no genuine tripartite entanglement\n");
    }
}
