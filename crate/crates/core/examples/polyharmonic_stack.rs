// (-Δ)^m u = V̄u as a first-order-in-Laplacian system, the stacked
// frequency, and the exp(Cr)(N + αv + v²) monotonicity calibration.

use freqlab::field::{make_polyharmonic_example, ORIGIN};
use freqlab::frequency::{linspace, ProfileSettings};
use freqlab::polysystem::{check_monotonicity_polyharmonic, check_monotonicity_ucp, decompose, stacked_profile};

fn main() {
    let radii = linspace(0.05, 0.9, 30);
    let settings = ProfileSettings::default();
    for id in ["radial_square", "exp_mode", "harmonic_2"] {
        let ex = make_polyharmonic_example(id, 2).unwrap();
        let stack = decompose(ex.field, ex.order, ex.potential).unwrap();
        let p = stacked_profile(&stack, &ORIGIN, &radii, 1.0, &settings).unwrap();
        let (r, n) = p.guarded()[10];
        let mono2 = check_monotonicity_polyharmonic(&stack, &ORIGIN, &radii, 1.0, 0.0, &settings).unwrap();
        let mono3 = check_monotonicity_ucp(&stack, &ORIGIN, &radii, 0.0, &settings).unwrap();
        println!(
            "{id:<14} m={} closure={:.1e} N({r:.3})={n:.6} min C (alpha=1)={:?} min C (alpha=0)={:?} [{}]",
            stack.order(),
            stack.closure_residual(),
            mono2.empirical_min_constant,
            mono3.empirical_min_constant,
            stack.hypothesis_label()
        );
    }
}
