// Doubling ratios h(2R)/h(R) and the constant they imply in
// h(2R) <= C R^{-4m} h(R).

use freqlab::field::{make_harmonic_polynomial, make_polyharmonic_example, Field, ORIGIN};
use freqlab::polysystem::doubling_check;
use freqlab::quad::QuadOrders;

fn main() {
    let u = make_harmonic_polynomial(2, 2).unwrap();
    let d = doubling_check(&u, &ORIGIN, 0.1, 2, QuadOrders::default()).unwrap();
    println!("harmonic k=2: ratio {} (2^(2k+n) = 64), beta {}, order bound {}", d.ratio, d.beta, d.order_bound);

    for id in ["radial_square", "exp_mode"] {
        let ex = make_polyharmonic_example(id, 2).unwrap();
        for r in [0.05, 0.1, 0.2] {
            let d = doubling_check(ex.field.as_ref() as &dyn Field, &ORIGIN, r, ex.order, QuadOrders::default()).unwrap();
            println!("{id:<14} R={r:<5} ratio={:.6} implied C={:.6e}", d.ratio, d.implied_constant);
        }
    }
}
