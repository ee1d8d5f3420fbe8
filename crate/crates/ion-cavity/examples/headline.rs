//! Print the headline quantities of the scheme: the W-state generation time
//! for the reference coupling, the exact probability tables of the
//! two-phonon two-photon start, the W-state negativity, and the growth of
//! the peak two-excitation probability with photon number.
//!
//! ```bash
//! cargo run -p ion-cavity --example headline
//! ```

use ion_cavity::sweep::headline_numbers;

fn main() {
    print!("{}", headline_numbers());
}
