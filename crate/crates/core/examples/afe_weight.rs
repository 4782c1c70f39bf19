//! The weight V_s(y) of the approximate functional equation for L(s, f x g),
//! computed on a vertical contour, for f = g = Delta at s = 1/2.
//!
//! ```text
//! cargo run --release --example afe_weight
//! ```

use num_complex::Complex64;
use rankinlab::forms::delta_oracle;
use rankinlab::lfunc::{afe_weight_v, rs_dirichlet_coeffs, AFEConfig, RankinSelbergPair};

fn main() {
    let delta = delta_oracle(200);
    let pair = RankinSelbergPair::new(delta.clone(), delta).expect("coprime levels");
    let s = Complex64::new(0.5, 0.0);
    let q_inf = pair.q_inf(s);
    println!("conductor {}, q_inf(1/2) = {q_inf:.4}", pair.conductor);
    let cfg = AFEConfig::default();
    let v1 = afe_weight_v(&pair, s, 1.0, &cfg).expect("contour").value.re;
    for y in [0.01, 0.1, 1.0, 10.0, 100.0, 100.0 * q_inf.sqrt(), 2000.0] {
        let v = afe_weight_v(&pair, s, y, &cfg).expect("contour");
        println!(
            "  V(1/2, {y:>9.3}) = {:>14.6e}  (+- {:.1e})  V(y)/V(1) = {:.3e}",
            v.value.re,
            v.abs_err,
            v.value.re / v1
        );
    }
    let a = rs_dirichlet_coeffs(&pair, 10).unwrap();
    println!("L(s, Delta x Delta) coefficients a(1..10): {:.4?}", a);
}
