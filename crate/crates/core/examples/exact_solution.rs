//! The exact bipolar-series potential for two conductivity inclusions,
//! with its truncation certificate and the transmission conditions.
//!
//! ```bash
//! cargo run --example exact_solution
//! ```

use gapfield::geometry::{BipolarPoint, Branch, CartesianPoint, DiskPairGeometry};
use gapfield::series::{ConductivityPair, FieldSolver, HarmonicDrive};

fn main() -> gapfield::Result<()> {
    let g = DiskPairGeometry::new(3.0, 2.0, 0.01)?;
    let k = ConductivityPair::finite(7.0, 5.0)?;
    let solver = FieldSolver::new(&g, k, HarmonicDrive::new(1.0, 0.0), 1e-12)?;

    for pt in [g.midpoint(), CartesianPoint::new(0.0, 0.5), CartesianPoint::new(-3.0, 0.5), CartesianPoint::new(2.0, -0.3)] {
        let s = solver.evaluate(pt)?;
        println!(
            "({:+.3}, {:+.3}) {:<9} u = {:+.10}  grad = ({:+.6}, {:+.6})  N = {}",
            pt.x,
            pt.y,
            solver.region(pt).as_str(),
            s.u,
            s.grad.x,
            s.grad.y,
            s.truncation.n_used
        );
    }

    // u and k ∂u/∂ν are continuous across each circle
    let bp = BipolarPoint::new(g.boundary_level(1), 0.7);
    let (nu, _) = g.level_circle_frame(bp);
    let out = solver.evaluate_bipolar(bp, Branch::Exterior)?;
    let inn = solver.evaluate_bipolar(bp, Branch::Inside1)?;
    println!("on dB1 at theta = 0.7: [u] = {:.1e}, [k du/dnu] = {:.1e}", out.u - inn.u, 7.0 * inn.grad.dot(nu) - out.grad.dot(nu));

    // perfect conductors: u is constant on each circle and the gradient blows up
    for eps in [1e-2, 1e-4] {
        let g = DiskPairGeometry::new(3.0, 2.0, eps)?;
        let perfect = FieldSolver::perfect(&g, HarmonicDrive::new(1.0, 0.0), 1e-10)?;
        println!("eps = {eps:e}: |grad u_inf|(x1) = {:.3}", perfect.gradient_at_closest_point(1)?);
    }
    Ok(())
}
