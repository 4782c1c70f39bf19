//! Ramanujan's tau from the eta product, the normalised Hecke eigenvalues of
//! Delta, their Hecke relations and a Rankin-Selberg partial sum.
//!
//! ```text
//! cargo run --release --example delta_coefficients
//! ```

use rankinlab::forms::{delta_oracle, hecke_check, ramanujan_tau, rankin_sum, wilton_sum};

fn main() {
    let tau = ramanujan_tau(12);
    println!("tau(1..12) = {tau:?}");

    let delta = delta_oracle(10_000);
    for n in [1u64, 2, 3, 5, 7, 11, 13] {
        println!("  lambda({n:>2}) = {:>10.6}", delta.lambda(n).unwrap());
    }

    let h = hecke_check(&delta, 30, 30).expect("enough coefficients");
    println!(
        "Hecke relation on {} pairs: max relative violation {:.2e}",
        h.pairs_checked, h.max_rel_violation
    );

    // sum_{n <= x} lambda(n)^2 / n grows like log x
    for x in [100.0, 1000.0, 10_000.0] {
        let s = rankin_sum(&delta, x).unwrap();
        println!(
            "  sum_(n <= {x:>6}) lambda(n)^2 / n = {s:.5}  (/ log x = {:.5})",
            s / x.ln()
        );
    }
    // cancellation in additive twists
    let w = wilton_sum(&delta, 10_000.0, 0.5_f64.sqrt()).unwrap();
    println!(
        "  |sum_(n <= 10^4) lambda(n) e(n / sqrt 2) / sqrt n| = {:.3}",
        w.norm()
    );
}
