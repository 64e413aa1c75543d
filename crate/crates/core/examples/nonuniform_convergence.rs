//! How u_k approaches the perfect-conductor solution u_∞: at a fixed gap the
//! boundary gradient gap decays like 1/k, but with k tied to the gap it does
//! not vanish uniformly.
//!
//! ```bash
//! cargo run --release --example nonuniform_convergence
//! ```

use gapfield::geometry::DiskPairGeometry;
use gapfield::series::{FieldSolver, HarmonicDrive};
use gapfield::singular::{infinity_gap, theta_grid_with_zero};
use gapfield::stats::log_log_slope;

fn main() -> gapfield::Result<()> {
    let g = DiskPairGeometry::new(2.0, 3.0, 1e-5)?;
    let fig = FieldSolver::perfect(&g, HarmonicDrive::new(1.0, 0.0), 1e-10)?.gradient_at_closest_point(1)?;
    println!("perfect conductors, eps = 1e-5: du_inf/dnu at x1 = {fig:.2}");

    let eps = [1e-3, 1e-4, 1e-5, 1e-6];
    let mut gaps = Vec::new();
    println!("{:>8} {:>12} {:>14} {:>14}", "eps", "k", "exact gap", "leading term");
    for &e in &eps {
        let g = DiskPairGeometry::new(2.0, 3.0, e)?;
        let k = e.powf(-0.75);
        let gap = infinity_gap(&g, k, 1, &[0.0], 1e-10)?;
        println!("{e:>8.0e} {k:>12.2} {:>14.4} {:>14.4}", gap.exact[0], gap.prediction[0]);
        gaps.push(gap.exact[0].abs());
    }
    println!("k = eps^(-3/4): slope of the gap at x1 vs eps = {:.3}", log_log_slope(&eps, &gaps)?);

    let g = DiskPairGeometry::new(2.0, 3.0, 0.1)?;
    let ks = [1e2, 1e3, 1e4, 1e5];
    let thetas = theta_grid_with_zero(65);
    let w = ks
        .iter()
        .map(|&k| Ok(infinity_gap(&g, k, 1, &thetas, 1e-12)?.max_grad_norm()))
        .collect::<gapfield::Result<Vec<f64>>>()?;
    for (k, v) in ks.iter().zip(&w) {
        println!("eps = 0.1, k = {k:.0e}: max |grad(u_k - u_inf)| on dB1 = {v:.4e}");
    }
    println!("slope vs k = {:.3}", log_log_slope(&ks, &w)?);
    Ok(())
}
