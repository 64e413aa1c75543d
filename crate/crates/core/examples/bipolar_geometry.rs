//! Two-disk geometry: poles, bipolar levels, reflections and the frame
//! attached to the gap.
//!
//! ```bash
//! cargo run --example bipolar_geometry
//! ```

use gapfield::geometry::{reflect, CartesianPoint, DiskPairGeometry};

fn main() -> gapfield::Result<()> {
    let g = DiskPairGeometry::new(2.5, 3.0, 0.1)?;
    println!("r = ({}, {}), eps = {}", g.r1(), g.r2(), g.eps);
    println!("alpha = {:.6}, r_* sqrt(eps) = {:.6}", g.alpha, g.r_star * g.eps.sqrt());
    println!("xi1 = {:.5}, xi2 = {:.5}", g.xi1, g.xi2);
    println!("poles p1 = {:?}, p2 = {:?}", g.p1, g.p2);
    println!("closest points x1 = {:?}, x2 = {:?}", g.closest_point(1), g.closest_point(2));

    // each pole is the image of the other under reflection in a circle
    let image = reflect(g.p2, &g.disk1)?;
    println!("|R1(p2) - p1| = {:.2e}", image.distance(g.p1));

    for pt in [CartesianPoint::new(0.0, 0.0), CartesianPoint::new(0.4, 1.5), CartesianPoint::new(-6.0, 2.0)] {
        let bp = g.to_bipolar(pt)?;
        let back = g.to_cartesian(bp)?;
        println!(
            "{:>14} -> (xi, theta) = ({:+.6}, {:+.6}) [{}], round trip {:.1e}",
            format!("({}, {})", pt.x, pt.y),
            bp.xi,
            bp.theta,
            g.classify_region(pt, g.default_boundary_tol()).as_str(),
            back.distance(pt)
        );
    }
    Ok(())
}
