// Frequency profile N(r) = I(r)/H(r) of a harmonic polynomial and a Bessel mode.
//
//   cargo run --example frequency_profile

use freqlab::field::{make_bessel_mode, make_harmonic_polynomial, PotentialSpec, ORIGIN};
use freqlab::frequency::{check_bridges, frequency_profile, linspace};

fn main() {
    let radii = linspace(0.05, 0.9, 18);

    // Homogeneous harmonic of degree k: N(r) = 2(α+1)k exactly.
    let u = make_harmonic_polynomial(3, 2).unwrap();
    let p = frequency_profile(&u, &PotentialSpec::zero(2), &ORIGIN, &radii, 1.0).unwrap();
    for (r, n) in p.guarded().iter().step_by(6) {
        println!("harmonic k=3, alpha=1: N({r:.3}) = {n:.12}");
    }

    // J_2(√λ ρ) cos 2θ solves Δu = -λu; N grows with r like λ r².
    let (b, v) = make_bessel_mode(2, 25.0).unwrap();
    let p = frequency_profile(&b, &v, &ORIGIN, &radii, 0.0).unwrap();
    for (r, n) in p.guarded().iter().step_by(6) {
        println!("J_2, lambda=25: N({r:.3}) = {n:.6}");
    }
    println!("bridges hold: {}", check_bridges(&p).passed);
    print!("{}", p.to_csv().lines().take(3).collect::<Vec<_>>().join("\n"));
    println!();
}
