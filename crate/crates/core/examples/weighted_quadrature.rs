// Gauss–Jacobi ball quadrature against the weight (r² - |x|²)^α.

use freqlab::field::ORIGIN;
use freqlab::quad::{gauss_jacobi, weighted_moment, BallQuadrature, QuadOrders};

fn main() {
    let rule = gauss_jacobi(5, 0.0, 0.0).unwrap();
    println!("Gauss–Legendre 5 nodes: {:?}", rule.nodes);

    for alpha in [0.0, 1.5, 10.0] {
        let q = BallQuadrature::new(2, alpha, QuadOrders::default()).unwrap();
        for j in [0, 2] {
            let got = q.integrate(|x| (x[0] * x[0] + x[1] * x[1]).powi(j as i32), &ORIGIN, 0.7);
            let exact = weighted_moment(2, alpha, j, 0.7);
            println!("n=2 alpha={alpha:<4} |x|^{}: {got:.15e} (closed form {exact:.15e})", 2 * j);
        }
    }

    let q3 = BallQuadrature::new(3, 0.0, QuadOrders::new(32, 64)).unwrap();
    let vol = q3.integrate(|_| 1.0, &ORIGIN, 1.0);
    println!("volume of the unit 3-ball: {vol:.15} (4π/3 = {:.15})", 4.0 * std::f64::consts::PI / 3.0);
}
