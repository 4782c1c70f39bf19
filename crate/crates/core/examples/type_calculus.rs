//! Derivative-bound types: the product and composition rules, and fitted
//! constants for concrete functions against their claimed types.
//!
//! ```text
//! cargo run --release --example type_calculus
//! ```

use rankinlab::typecalc::*;

fn main() {
    let x = FuncType::new(&["x"], Expr::one(), vec![Expr::var(0).abs()]).unwrap();
    let h = FuncType::new(&["x"], Expr::one(), vec![Expr::param("Z_h", 1.0)]).unwrap();
    println!("e(x)          {x}");
    println!("e(x) h(x/X)   {}", type_product(&x, &h).unwrap());
    println!("d/dx e(x)     {}", type_derivative(&x, 0).unwrap());
    let p = WDeltaParams::default();
    println!("w_delta(D)    {}", w_delta_outer_type(&p));
    println!("D(x, y, h)    {}", w_delta_inner_type(&p).0);
    println!("composed      {}\n", w_delta_composed(&p));

    let opts = VerifyOptions::default();
    for tf in [
        fixture_exponential(),
        fixture_wrong_exponential(),
        fixture_bump(),
        fixture_product(100.0),
        fixture_w_delta(p),
    ] {
        let r = verify_type(&tf, &multi_indices(tf.claimed.arity(), 3), &opts).unwrap();
        println!(
            "{:<28} C = {:>12.4e}  C(2 box) = {:>12.4e}  {}",
            r.name,
            r.constant,
            r.constant_dilated,
            r.verdict()
        );
    }
    let kernel = fixture_kernel_i(KernelFixtureParams::default());
    let r = verify_type(
        &kernel,
        &multi_indices(3, 2),
        &VerifyOptions {
            samples: 16,
            ..opts
        },
    )
    .unwrap();
    println!(
        "{:<28} C = {:>12.4e}  C(2 box) = {:>12.4e}  {}",
        r.name,
        r.constant,
        r.constant_dilated,
        r.verdict()
    );
}
