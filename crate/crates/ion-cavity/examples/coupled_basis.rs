//! The transform between the computational and total-spin bases of the three
//! ions, and where the familiar product states land in it.
//!
//! ```bash
//! cargo run -p ion-cavity --example coupled_basis
//! ```

use nalgebra::DVector;
use num_complex::Complex64;

use ion_cavity::basis::{coupled_transform, product_to_coupled, COUPLED_ORDER, PRODUCT_ORDER};

fn main() {
    let t = coupled_transform();
    println!("rows: coupled basis |sigma, sigma_z>_branch; columns: product basis");
    for r in 0..8 {
        let label = COUPLED_ORDER[r];
        print!("|{},{:>2}>_{} ", label.sigma, label.sigma_z, label.branch);
        for c in 0..8 {
            print!("{:>7.4} ", t[(r, c)]);
        }
        println!();
    }

    let orthogonality = (&t * t.transpose() - nalgebra::DMatrix::identity(8, 8)).norm();
    println!("\n|T T^t - I| = {orthogonality:.2e}");

    // a single excited ion spreads over one quadruplet and two doublet states
    for (name, index) in [("|100>", 1usize), ("|010>", 2), ("|001>", 4)] {
        let mut v = DVector::from_element(8, Complex64::new(0.0, 0.0));
        v[index] = Complex64::new(1.0, 0.0);
        let coupled = product_to_coupled(&v).unwrap();
        print!("{name} ->");
        for (k, amp) in coupled.iter().enumerate() {
            if amp.norm() > 1e-12 {
                let label = COUPLED_ORDER[k];
                print!(
                    " {:+.4} |{},{}>_{}",
                    amp.re, label.sigma, label.sigma_z, label.branch
                );
            }
        }
        println!();
    }
    println!(
        "\nproduct order: {}",
        PRODUCT_ORDER
            .map(|l| format!("|{}{}{}>", l.i1, l.i2, l.i3))
            .join(" ")
    );
}
