//! Voronoi summation for Delta: sum_n lambda(n) n^-1/2 e(an/q) h(n) against its
//! dual sum over Bessel transforms, for a Gaussian bump window around X.
//!
//! ```text
//! cargo run --release --example voronoi_check
//! ```

use rankinlab::forms::delta_oracle;
use rankinlab::quad::SmoothWindow;
use rankinlab::traceverify::{voronoi_lhs, voronoi_rhs};

fn main() {
    let delta = delta_oracle(50_000);
    println!(
        "{:>3} {:>3} {:>5} {:>24} {:>24} {:>9} {:>6}",
        "q", "a", "X", "lhs", "rhs", "rel err", "terms"
    );
    for (q, a, x) in [
        (1u64, 1i64, 10.0),
        (3, 1, 10.0),
        (3, 2, 10.0),
        (5, 2, 20.0),
        (7, 3, 20.0),
    ] {
        let h = SmoothWindow::gaussian_bump(x, x / 5.0);
        let lhs = voronoi_lhs(&delta, a, q, &h).expect("coefficients");
        let rhs = voronoi_rhs(&delta, a, q, &h, 50_000, 1e-10).expect("dual sum converges");
        let rel = (lhs - rhs.value).norm() / lhs.norm();
        println!(
            "{q:>3} {a:>3} {x:>5} {:>11.6e}{:+.6e}i {:>11.6e}{:+.6e}i {rel:>9.1e} {:>6}",
            lhs.re, lhs.im, rhs.value.re, rhs.value.im, rhs.terms
        );
    }
}
