//! Kloosterman sums three ways: term by term, through twisted
//! multiplicativity, and from a per-modulus table. Also prints the Weil
//! bound and a few Ramanujan sums.
//!
//! ```text
//! cargo run --release --example kloosterman_sums
//! ```

use rankinlab::arith::{
    factorize, kloosterman, kloosterman_direct, ramanujan, weil_bound, KloostermanTable,
};

fn main() {
    println!(
        "{:>4} {:>4} {:>6} {:>14} {:>14} {:>10}",
        "m", "n", "c", "S direct", "S factored", "Weil"
    );
    for &(m, n, c) in &[
        (1, 1, 7),
        (1, 1, 12),
        (2, 3, 35),
        (5, 7, 360),
        (4, 4, 1024),
        (3, 10, 999),
    ] {
        let d = kloosterman_direct(m, n, c).expect("c > 0");
        let f = kloosterman(m, n, c).expect("c > 0");
        println!(
            "{m:>4} {n:>4} {c:>6} {:>14.8} {:>14.8} {:>10.3}",
            d.value,
            f.value,
            weil_bound(m, n, c)
        );
    }

    // A table for one modulus answers every (m, n) in O(1) after O(c) setup.
    let c = 60;
    let table = KloostermanTable::new(c);
    println!(
        "\nS(m, 1; {c}) from a table over {} units ({:?}):",
        table.phi(),
        factorize(c)
    );
    let row: Vec<String> = (1..=10)
        .map(|m| format!("{:.0}", table.sum(m, 1).re))
        .collect();
    println!("  {}", row.join(" "));

    println!("\nRamanujan sums c_d(k) = S(0, k; d):");
    for d in [1u64, 6, 12, 30] {
        let row: Vec<String> = (0..=12)
            .map(|k| format!("{:>3}", ramanujan(k, d)))
            .collect();
        println!("  d = {d:>2}: {}", row.join(" "));
    }
}
