// N(r) + C‖V‖_{W^{1,∞}} r² is nondecreasing for C = 3n + 5; calibrate the
// smallest C that works on a concrete Bessel mode.

use freqlab::field::{make_bessel_mode, ORIGIN};
use freqlab::frequency::{check_monotonicity_schrodinger, frequency_profile, stepped};

fn main() {
    let radii = stepped(0.05, 0.9, 0.01);
    for (k, lambda) in [(0, 4.0), (1, 25.0), (2, 100.0)] {
        let (u, v) = make_bessel_mode(k, lambda).unwrap();
        let p = frequency_profile(&u, &v, &ORIGIN, &radii, 0.0).unwrap();
        let rep = check_monotonicity_schrodinger(&p, &v, None).unwrap();
        println!(
            "J_{k} lambda={lambda:<5} C={} passed={} min increment={:.3e} empirical C={:?}",
            rep.constant, rep.passed, rep.min_increment, rep.empirical_min_constant
        );
    }
}
