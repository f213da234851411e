//! Block entropies of the classical cat map on the strip partition.
//!
//! `cargo run --release --example classical_entropy -- [p] [n_max] [grid]`

use catlab::classical::{classical_entropy, word_measures};

fn main() -> catlab::Result<()> {
    let args: Vec<usize> = std::env::args().skip(1).map(|a| a.parse().expect("integer")).collect();
    let p = *args.first().unwrap_or(&2) as u32;
    let n_max = *args.get(1).unwrap_or(&8);
    let grid = *args.get(2).unwrap_or(&2048);
    let ks = ((3.0 + 5f64.sqrt()) / 2.0).ln();

    println!("n  S_cl(n)     increment   (KS entropy {ks:.6})");
    let mut prev = None;
    for n in 1..=n_max {
        let s = classical_entropy(&word_measures(p, n, grid)?).total;
        let inc = prev.map_or(String::new(), |v: f64| format!("{:.6}", s - v));
        println!("{n:<2} {s:<11.6} {inc}");
        prev = Some(s);
    }
    Ok(())
}
