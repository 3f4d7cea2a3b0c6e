// Propagation of smallness: a chain of balls from the unit sphere back to
// B_{r1}(0) yields a (very small) certified lower bound on sup_{B_{r1}} |u|.

use freqlab::field::make_harmonic_polynomial;
use freqlab::field::PotentialSpec;
use freqlab::order::{run_chain_certificate, ChainConfig};

fn main() {
    let u = make_harmonic_polynomial(1, 2).unwrap();
    for r1 in [1e-2, 1e-3] {
        let cfg = ChainConfig { r1, ..ChainConfig::default() };
        let cert = run_chain_certificate(&u, &PotentialSpec::zero(2), &cfg).unwrap();
        println!(
            "r1={r1}: d={} theta={:.5} log bound={:.4e} measured sup={:.3e} valid={} q={:?} closed-form q={:?}",
            cert.d,
            cert.theta,
            cert.log_final_bound,
            cert.measured_sup,
            cert.is_valid(),
            cert.q,
            cert.closed_form_q
        );
    }
}
