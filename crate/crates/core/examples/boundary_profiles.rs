//! Normal derivative of u − H along ∂B₁ against the closed-form profile Q,
//! for a shrinking gap and for growing contrast.
//!
//! ```bash
//! cargo run --release --example boundary_profiles
//! ```

use gapfield::geometry::DiskPairGeometry;
use gapfield::series::{ConductivityPair, HarmonicDrive};
use gapfield::singular::{boundary_profiles, theta_grid_with_zero};

fn main() -> gapfield::Result<()> {
    let x = HarmonicDrive::new(1.0, 0.0);
    let thetas = theta_grid_with_zero(257);
    println!("{:>8} {:>14} {:>10} {:>10} {:>14}", "eps", "(k1, k2)", "peak", "Q(0)", "max|exact-Q|");
    let runs = [
        (0.5, 1500.0, 1200.0),
        (1e-2, 1500.0, 1200.0),
        (1e-4, 1500.0, 1200.0),
        (1e-2, 7.0, 5.0),
        (1e-2, 70.0, 50.0),
        (1e-2, 7000.0, 5000.0),
    ];
    for (eps, k1, k2) in runs {
        let g = DiskPairGeometry::new(3.0, 2.0, eps)?;
        let p = boundary_profiles(&g, ConductivityPair::finite(k1, k2)?, x, 1, &thetas, 1e-10)?;
        let i = p.argmax_normal();
        println!(
            "{eps:>8.0e} {:>14} {:>10.3} {:>10.3} {:>14.4}",
            format!("({k1}, {k2})"),
            p.exact_normal[i],
            p.q_profile[i],
            p.max_gap_to_q()
        );
    }
    Ok(())
}
