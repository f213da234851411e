//! Decoherence matrix of one (first, last) sector, printed as |D| with the
//! classical word measures alongside the diagonal.
//!
//! `cargo run --release --example sector_matrix -- [q] [n]`

use catlab::classical::word_measures;
use catlab::histories::{decoherence_matrix, entropies, Budget};
use catlab::quantum::{build_cat_unitary, build_projectors, CatParams};
use catlab::word::Sector;

fn main() -> catlab::Result<()> {
    let args: Vec<usize> = std::env::args().skip(1).map(|a| a.parse().expect("integer")).collect();
    let q = *args.first().unwrap_or(&2) as u32;
    let n = *args.get(1).unwrap_or(&3);
    let params = CatParams::new(q, 2)?;
    let sector = Sector::new(0, 0);
    let d = decoherence_matrix(
        &build_cat_unitary(&params),
        &build_projectors(&params),
        n,
        Some(sector),
        &Budget::default(),
    )?;
    let mt = word_measures(2, n, 2048)?;
    let mu = mt.sector_measures(sector);

    for (a, m) in mu.iter().enumerate() {
        let row: Vec<String> = (0..d.len()).map(|b| format!("{:.4}", d.get(a, b).norm())).collect();
        println!("{}  {}   mu {:.4}", d.word(a), row.join(" "), m);
    }
    let rec = entropies(&d, Some(&mt))?;
    println!(
        "S_AF {:.6}  S_diag {:.6}  S_cl {:.6}  d_symb {:.6}  off-diagonal {:.6}",
        rec.s_af,
        rec.s_diag.unwrap(),
        rec.s_cl.unwrap(),
        rec.d_symb.unwrap(),
        rec.offdiag_mass.unwrap()
    );
    Ok(())
}
