//! The Lerch transcendent Φ(z, 1, β) and the derived functions L and P,
//! evaluated by the series, by quadrature and by the extreme-β expansions.
//!
//! ```bash
//! cargo run --example lerch_functions
//! ```

use gapfield::lerch::{
    cap_l, cap_p, lerch_phi_quadrature, lerch_phi_series, phi_asymptotic, summation_identity_gap, AsymptoticRegime,
    EvalBudget,
};
use gapfield::Complex64;

fn main() -> gapfield::Result<()> {
    let budget = EvalBudget::with_tol(1e-14)?;
    println!("{:>18} {:>8} {:>44} {:>6} {:>9}", "z", "beta", "Phi (series)", "terms", "|s - q|");
    for (z, beta) in [
        (Complex64::new(0.5, 0.0), 1.0),
        (Complex64::new(-0.7, 0.2), 3.5),
        (Complex64::new(0.0, 0.9), 1e-3),
        (Complex64::new(-0.85, 0.0), 1e3),
    ] {
        let s = lerch_phi_series(z, beta, &budget)?;
        let q = lerch_phi_quadrature(z, beta, 1e-13)?;
        println!("{:>18} {beta:>8} {:>44} {:>6} {:>9.1e}", format!("{z}"), format!("{:.15}", s.value), s.terms, (s.value - q).norm());
    }
    println!("Phi(0.5, 1, 1) - 2 ln 2 = {:.1e}", (lerch_phi_series(Complex64::new(0.5, 0.0), 1.0, &budget)?.value - 2.0 * 2f64.ln()).norm());
    println!("L(0.5; 0) + ln 1.5     = {:.1e}", (cap_l(Complex64::new(0.5, 0.0), 0.0, &budget)? + 1.5f64.ln()).norm());

    // P(e^{-s+iθ}; β) flattens from ~1 to ~1/β as β grows
    let z = Complex64::from_polar((-0.1f64).exp(), 0.3);
    for beta in [1e-3, 1.0, 1e3] {
        println!("P(e^(-0.1+0.3i); {beta:>6}) = {:.10}", cap_p(z, beta, &budget)?);
    }

    let z = Complex64::new(0.6, 0.3);
    for (beta, regime) in [(0.01, AsymptoticRegime::Small), (100.0, AsymptoticRegime::Large)] {
        let a = phi_asymptotic(z, beta, regime)?;
        let exact = lerch_phi_series(z, beta, &budget)?.value;
        println!("{regime:?} beta = {beta}: error {:.2e} <= bound {:.2e}", (a.value - exact).norm(), a.error_bound);
    }

    let gap = summation_identity_gap(0.1, 0.02, 0.9, 0.5, None)?;
    println!("discrete sum vs P: gap {:.3e}, bound {:.3e}, {} terms", gap.gap, gap.bound, gap.terms);
    Ok(())
}
