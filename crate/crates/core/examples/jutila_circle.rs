//! Jutila's circle method: the normalised union of intervals of half width
//! delta around the Farey points a/q, q in (Q, 2Q], in exact rational
//! arithmetic, with its L2 distance to the indicator of [0, 1].
//!
//! ```text
//! cargo run --release --example jutila_circle
//! ```

use num_traits::ToPrimitive;
use rankinlab::traceverify::{jutila_build, jutila_l2_error, rational_approx};

fn main() {
    println!(
        "{:>4} {:>6} {:>10} {:>8} {:>12} {:>12}",
        "Q", "e", "delta", "Lambda", "L2 error", "Q^2/dL^2"
    );
    for q in [10u64, 20, 50] {
        for e in [1.0, 1.5, 2.0] {
            let delta = rational_approx((q as f64).powf(-e), 1_000_000_000);
            let moduli: Vec<u64> = (q + 1..=2 * q).collect();
            let step = jutila_build(&moduli, &delta).expect("valid moduli");
            assert_eq!(
                step.integral(),
                num_rational::BigRational::from_integer(1.into())
            );
            let l2 = jutila_l2_error(&step).to_f64().unwrap();
            let d = delta.to_f64().unwrap();
            let lam = step.lambda as f64;
            println!(
                "{q:>4} {e:>6} {d:>10.3e} {:>8} {l2:>12.5e} {:>12.5e}",
                step.lambda,
                (q * q) as f64 / (d * lam * lam)
            );
        }
    }
}
