//! Random instances of the large sieve inequality for the weighted sums of
//! Kloosterman-type phases, compared with the bound at theta = 7/64.
//!
//! ```text
//! cargo run --release --example large_sieve
//! ```

use rankinlab::specialfn::Sign;
use rankinlab::traceverify::{
    large_sieve_bound, large_sieve_lhs, large_sieve_lhs_direct, random_instance, CoefficientLaw,
};

fn main() {
    let theta = 7.0 / 64.0;
    println!(
        "{:>5} {:>3} {:>3} {:>3} {:>3} {:>4} {:>4} {:>12} {:>12} {:>10}",
        "seed", "r", "s", "w", "Q", "V", "H", "|lhs+|", "bound", "ratio"
    );
    for seed in 0..8u64 {
        let q = if seed % 2 == 0 { 10 } else { 30 };
        let inst = random_instance(seed, q, 1.0, CoefficientLaw::Gaussian);
        let lhs = large_sieve_lhs(&inst, Sign::Plus).expect("valid instance");
        let bound = large_sieve_bound(&inst, theta);
        println!(
            "{seed:>5} {:>3} {:>3} {:>3} {:>3} {:>4} {:>4} {:>12.4e} {:>12.4e} {:>10.2e}",
            inst.r,
            inst.s,
            inst.w,
            inst.q,
            inst.v,
            inst.h,
            lhs.norm(),
            bound,
            lhs.norm() / bound
        );
    }
    // the folded evaluation agrees with the quadruple loop
    let inst = random_instance(42, 10, 4.0, CoefficientLaw::Rademacher);
    let fast = large_sieve_lhs(&inst, Sign::Minus).unwrap();
    let slow = large_sieve_lhs_direct(&inst, Sign::Minus).unwrap();
    println!(
        "\nfolded {fast:.6e}  direct {slow:.6e}  difference {:.1e}",
        (fast - slow).norm()
    );
}
