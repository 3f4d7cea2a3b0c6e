// Three-ball inequalities with calibrated constants, plus the elliptic
// sup-norm estimate.

use freqlab::field::{make_bessel_mode, make_harmonic_polynomial, Constant, PotentialSpec};
use freqlab::threeball::{
    check_three_ball, elliptic_sup_bound, exponents, sweep_csv, Subject, SweepRow, ThreeBallConfig, ThreeBallOptions, Variant,
};

fn main() {
    let opts = ThreeBallOptions::default();
    let l2 = ThreeBallConfig::new([0.1, 0.2, 0.9], Variant::L2Schrodinger).unwrap();
    println!("L2 exponents (0.1, 0.2, 0.9): {:?}", exponents(&l2).unwrap());

    // h(r) ∝ r^4 for u = x₁: slack 4 log 2 at C = 0.
    let x1 = make_harmonic_polynomial(1, 2).unwrap();
    let zero = PotentialSpec::zero(2);
    let rep = check_three_ball(Subject::Schrodinger { u: &x1, v: &zero }, &l2, &opts).unwrap();
    println!("x1: residual0 = {:.15} (4 log 2 = {:.15})", rep.residual0, 4.0 * 2f64.ln());

    let linf = ThreeBallConfig::new([0.05, 0.1, 0.9], Variant::LinfSchrodinger).unwrap();
    let mut rows = Vec::new();
    for (k, lambda) in [(0, 25.0), (2, 49.0), (4, 100.0)] {
        let (u, v) = make_bessel_mode(k, lambda).unwrap();
        for cfg in [&l2, &linf] {
            let report = check_three_ball(Subject::Schrodinger { u: &u, v: &v }, cfg, &opts).unwrap();
            rows.push(SweepRow { id: format!("J{k}"), parameter: lambda, report });
        }
    }
    print!("{}", sweep_csv(&rows));

    let e = elliptic_sup_bound(&Constant::new(2, 1.0), &zero, 0.5, &opts).unwrap();
    println!("elliptic estimate for u=1, delta=0.5: implied constant {:.6} (1/(2√π) = {:.6})", e.implied_constant, 0.5 / std::f64::consts::PI.sqrt());
}
