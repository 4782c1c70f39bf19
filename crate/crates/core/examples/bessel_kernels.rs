//! Bessel functions and the Voronoi kernels J^+ and J^- for a holomorphic
//! form and for a Maass form.
//!
//! ```text
//! cargo run --release --example bessel_kernels
//! ```

use rankinlab::specialfn::{
    bessel_j, bessel_k_imag, voronoi_kernel, BesselOrder, KernelKind, Sign,
};

fn main() {
    println!("J_11(x) across the transition region x ~ 11:");
    for x in [1.0, 5.0, 10.0, 11.0, 12.0, 20.0, 100.0, 1000.0] {
        let j = bessel_j(BesselOrder::Integer(11), x).expect("finite x");
        println!("  x = {x:>7}: {:>22.15e}  (+- {:.1e})", j.value, j.abs_err);
    }

    println!("\nK_(2it)(x) for t = 1:");
    for x in [0.1, 1.0, 5.0, 20.0] {
        let k = bessel_k_imag(1.0, x).expect("x > 0");
        println!("  x = {x:>5}: {:>22.15e}", k.value);
    }

    let holo = KernelKind::Holomorphic { weight: 12 };
    let maass = KernelKind::Maass { t: 9.53369526135 };
    println!(
        "\n{:>8} {:>16} {:>16} {:>16}",
        "y", "J+ (k = 12)", "J+ (Maass)", "J- (Maass)"
    );
    for y in [0.01, 0.1, 0.5, 1.0, 2.0, 5.0] {
        let a = voronoi_kernel(holo, Sign::Plus, y).expect("kernel");
        let b = voronoi_kernel(maass, Sign::Plus, y).expect("kernel");
        let c = voronoi_kernel(maass, Sign::Minus, y).expect("kernel");
        println!(
            "{y:>8} {:>16.8e} {:>16.8e} {:>16.8e}",
            a.value, b.value, c.value
        );
    }
}
