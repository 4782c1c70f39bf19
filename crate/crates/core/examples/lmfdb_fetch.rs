//! Fetch a rational newform from the LMFDB (or its cache), validate it and
//! print its normalised coefficients and Atkin-Lehner signs.
//!
//! The service URL and the cache directory come from RANKINLAB_LMFDB_URL and
//! RANKINLAB_CACHE.
//!
//! ```text
//! cargo run --release --example lmfdb_fetch -- 11.2.a.a
//! ```

use rankinlab::forms::{load_form, CoefficientSource};

fn main() {
    let label = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "11.2.a.a".to_string());
    let src = CoefficientSource::lmfdb_default();
    match load_form(&src, &label) {
        Ok(f) => {
            println!(
                "{} level {} {:?}, {} coefficients",
                f.label,
                f.level,
                f.kind,
                f.n_max()
            );
            println!("Atkin-Lehner signs: {:?}", f.atkin_lehner);
            for n in 1..=f.n_max().min(12) {
                println!("  lambda({n:>2}) = {:>10.6}", f.lambda(n).unwrap());
            }
        }
        Err(e) => {
            eprintln!("cannot load {label}: {e}");
            std::process::exit(1);
        }
    }
}
