//! Gradient blow-up at the closest point: ε^{-1/2} for perfect conductors,
//! saturated by the contrast through β for finite k.
//!
//! ```bash
//! cargo run --example blowup_rate
//! ```

use gapfield::geometry::DiskPairGeometry;
use gapfield::series::{ConductivityPair, FieldSolver, HarmonicDrive};
use gapfield::singular::make_params;
use gapfield::stats::log_log_slope;

fn main() -> gapfield::Result<()> {
    let x = HarmonicDrive::new(1.0, 0.0);
    let eps = [1e-2, 1e-3, 1e-4, 1e-5];
    let k = ConductivityPair::finite(1500.0, 1200.0)?;
    let (mut perfect, mut finite) = (Vec::new(), Vec::new());
    println!("{:>8} {:>14} {:>10} {:>16} {:>22}", "eps", "|grad u_inf|", "beta", "|grad u_k|", "|grad u_k| sqrt(eps)(1+beta)");
    for &e in &eps {
        let g = DiskPairGeometry::new(3.0, 2.0, e)?;
        let a = FieldSolver::perfect(&g, x, 1e-10)?.gradient_at_closest_point(1)?;
        let b = FieldSolver::new(&g, k, x, 1e-10)?.gradient_at_closest_point(1)?;
        let beta = make_params(&g, &k, x)?.beta;
        println!("{e:>8.0e} {a:>14.3} {beta:>10.4} {b:>16.3} {:>22.4}", b * e.sqrt() * (1.0 + beta));
        perfect.push(a);
        finite.push(b);
    }
    println!("log-log slope, perfect conductors: {:.4}", log_log_slope(&eps, &perfect)?);
    println!("log-log slope, (k1, k2) = (1500, 1200): {:.4}", log_log_slope(&eps, &finite)?);
    Ok(())
}
