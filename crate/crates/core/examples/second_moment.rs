//! Geometric side of the second moment sum_g w_g^-1 |sum_n lambda_f(n) lambda_g(n)
//! h(n/X) n^-1/2|^2 over the weight-12 family of level M, with f = Delta.
//! For M = 1 the family is {Delta} and the value is R(1,1) times a square.
//!
//! ```text
//! cargo run --release --example second_moment
//! ```

use rankinlab::forms::delta_oracle;
use rankinlab::lfunc::{
    moment_bound, second_moment_geometric, smoothed_pair_sum, write_moment_csv, MomentRow,
};
use rankinlab::quad::SmoothWindow;
use rankinlab::traceverify::petersson_geometric_r;

fn main() {
    let delta = delta_oracle(100);
    let h = SmoothWindow::bump(0.5, 2.5);
    let mut rows = Vec::new();
    for m in [1u64, 2, 3, 5] {
        for x in [5.0, 10.0, 20.0] {
            let r = second_moment_geometric(&delta, 12, m, &h, x, 2000).expect("moment");
            rows.push(MomentRow {
                m,
                n: 1,
                x,
                lhs: r.value,
                lhs_err: r.truncation_error,
                bound: moment_bound(m as f64, 1.0, x, 1.0, 0.0),
            });
        }
    }
    write_moment_csv(&rows, std::io::stdout()).expect("stdout");

    let r11 = petersson_geometric_r(1, 1, 12, 1, 5000, 1e-12).unwrap();
    let s = smoothed_pair_sum(&delta, &delta, &h, 10.0).unwrap();
    let geo = second_moment_geometric(&delta, 12, 1, &h, 10.0, 2000).unwrap();
    println!(
        "\nM = 1, X = 10: geometric {:.12}  spectral {:.12}",
        geo.value,
        r11.value * s * s
    );
}
