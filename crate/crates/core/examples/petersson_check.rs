//! The Petersson geometric side R(m, n) = delta(m, n) + 2 pi i^-k sum_c S(m,n;c)/c
//! J_{k-1}(4 pi sqrt(mn)/c) for level 1 and weight 12. The space is spanned by
//! Delta, so R(m, n) = R(1, 1) lambda(m) lambda(n).
//!
//! ```text
//! cargo run --release --example petersson_check
//! ```

use rankinlab::forms::delta_oracle;
use rankinlab::traceverify::{petersson_rank1_check, sss_partial_sums};

fn main() {
    let delta = delta_oracle(100);
    let rep = petersson_rank1_check(&delta, 10, 5000, 1e-12).expect("Petersson sums");
    println!(
        "R(1,1) = {:.14} (+- {:.1e})",
        rep.r11.value, rep.r11.abs_err
    );
    println!(
        "factorisation defect  max |R(m,n)R(1,1) - R(m,1)R(1,n)| = {:.2e}",
        rep.factorization_defect
    );
    println!(
        "ratio defect          max |R(m,n)/R(1,1) - lambda(m)lambda(n)| = {:.2e}",
        rep.ratio_defect
    );
    for &(m, n, v) in rep.entries.iter().filter(|e| e.0 == 2) {
        println!(
            "  R(2,{n:>2}) / R(1,1) = {:>12.9}   lambda(2) lambda({n}) = {:>12.9}",
            v.value / rep.r11.value,
            delta.lambda(m).unwrap() * delta.lambda(n).unwrap()
        );
    }

    // Kloosterman sums at the cusp 1/s of Gamma_0(rs) regroup the classical ones.
    let (cusp, classical) = sss_partial_sums(1, 2, 3, 5, 40).expect("coprime data");
    println!("\ncusp 1/5 of Gamma_0(15): partial sums {cusp:.6} vs {classical:.6}");
}
