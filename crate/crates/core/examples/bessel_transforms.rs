//! Bessel transforms of a smooth bump phi on [X, 2X]: phi~(l) is flat up to
//! l ~ X and collapses beyond, while phi^(t) and phi-check(t) stay small.
//!
//! ```text
//! cargo run --release --example bessel_transforms
//! ```

use rankinlab::quad::{
    transform_check, transform_hat, transform_tilde, QuadConfig, SmoothWindow, SpectralParam,
};

fn main() {
    let cfg = QuadConfig::with_tolerances(1e-10, 1e-13);
    for big_x in [50.0, 100.0] {
        let phi = SmoothWindow::bump(big_x, 2.0 * big_x);
        let envelope = 2.0 * f64::ln(big_x) / big_x;
        println!(
            "phi = bump on [{big_x}, {}], envelope (Z+1) log X / X = {envelope:.4e}",
            2.0 * big_x
        );
        for l in [1, 10, 50, 100, 150, 200, 300, 400, 600, 1000] {
            let v = transform_tilde(&phi, l, &cfg).expect("transform");
            println!(
                "  phi~({l:>4}) = {:>12.4e}   ratio {:>9.3e}",
                v.value,
                v.value.abs() / envelope
            );
        }
        for t in [0.5, 1.0, 5.0] {
            let h = transform_hat(&phi, SpectralParam::Real(t), &cfg).expect("transform");
            let c = transform_check(&phi, SpectralParam::Real(t), &cfg).expect("transform");
            println!(
                "  t = {t:>4}: phi^ = {:>12.4e}   phi-check = {:>12.4e}",
                h.value, c.value
            );
        }
        let h = transform_hat(&phi, SpectralParam::Imag(0.25), &cfg).expect("transform");
        println!("  t = i/4: phi^ = {:>12.4e}\n", h.value);
    }
}
