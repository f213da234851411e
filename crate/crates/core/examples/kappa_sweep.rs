//! Collision strength sweep: a heavy cat particle (N = 16) with two light
//! particles, words of length 5 in the 00 sector.

use catlab::classical::word_measures;
use catlab::histories::{entropies, Budget};
use catlab::multiparticle::{multiparticle_histories, MultiParams};
use catlab::word::Sector;

fn main() -> catlab::Result<()> {
    let mt = word_measures(2, 5, 2048)?;
    println!("kappa  S_AF      S_diag    S_cl      d_symb    offdiag");
    for step in 0..=16 {
        let kappa = 2.5 * step as f64;
        let params = MultiParams::new(4, 1, 2, kappa, 2)?;
        let d = multiparticle_histories(&params, 5, Some(Sector::new(0, 0)), &Budget::default())?;
        let r = entropies(&d, Some(&mt))?;
        println!(
            "{kappa:<6} {:.6}  {:.6}  {:.6}  {:.6}  {:.6}",
            r.s_af,
            r.s_diag.unwrap(),
            r.s_cl.unwrap(),
            r.d_symb.unwrap(),
            r.offdiag_mass.unwrap()
        );
    }
    Ok(())
}
