//! Off-diagonal mass and symbolic distance of the 00 sector as N grows,
//! with a log-log fit of the off-diagonal mass against N.

use catlab::classical::word_measures;
use catlab::histories::{decoherence_matrix, entropies, Budget};
use catlab::quantum::{build_cat_unitary, build_projectors, CatParams};
use catlab::word::Sector;

fn main() -> catlab::Result<()> {
    let n = 3;
    let mt = word_measures(2, n, 2048)?;
    let mut pts = Vec::new();
    println!("q  N    offdiag    d_symb");
    for q in 2..=7 {
        let params = CatParams::new(q, 2)?;
        let d = decoherence_matrix(
            &build_cat_unitary(&params),
            &build_projectors(&params),
            n,
            Some(Sector::new(0, 0)),
            &Budget::default(),
        )?;
        let rec = entropies(&d, Some(&mt))?;
        let off = rec.offdiag_mass.unwrap();
        println!("{q}  {:<4} {off:.6}   {:.6}", params.dim(), rec.d_symb.unwrap());
        pts.push(((params.dim() as f64).ln(), off.ln()));
    }
    let m = pts.len() as f64;
    let (mx, my) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x / m, b + y / m));
    let slope = pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum::<f64>()
        / pts.iter().map(|(x, _)| (x - mx).powi(2)).sum::<f64>();
    println!("offdiag ~ N^{slope:.3}");
    Ok(())
}
