// Vanishing orders read off log h(r) vs log r, compared with C√M.

use freqlab::field::{bessel_zero, make_bessel_mode, make_harmonic_polynomial, NormKind, PotentialSpec, ORIGIN};
use freqlab::order::{estimate_vanishing_order, order_bound, BoundScaling};
use freqlab::quad::QuadOrders;
use freqlab::threeball::Subject;

fn main() {
    let window = [1e-2, 1e-1];
    let zero = PotentialSpec::zero(2);
    for k in [0, 3, 5] {
        let u = make_harmonic_polynomial(k, 2).unwrap();
        let est = estimate_vanishing_order(Subject::Schrodinger { u: &u, v: &zero }, &ORIGIN, window, 12, f64::INFINITY, QuadOrders::default()).unwrap();
        println!("harmonic k={k}: order {:.10}, fit residual {:.1e}", est.order, est.fit_residual);
    }

    // Lowest admissible eigenvalue for each angular order: λ = j_{k,1}².
    for k in 1..=8 {
        let lambda = bessel_zero(k, 1).unwrap().powi(2);
        let (u, v) = make_bessel_mode(k, lambda).unwrap();
        let bound = order_bound(BoundScaling::Sqrt, 1.0, v.effective_m(NormKind::W1Inf));
        let est = estimate_vanishing_order(Subject::Schrodinger { u: &u, v: &v }, &ORIGIN, window, 12, bound, QuadOrders::default()).unwrap();
        println!(
            "J_{k} lambda={lambda:>8.3}: order {:.4}, order/sqrt(lambda) = {:.3}, verdict {}",
            est.order,
            est.order / lambda.sqrt(),
            est.verdict.label()
        );
    }
}
