//! Larger N together with a collision bath of strength κ = N/8: the quantum
//! entropies of length-5 histories against the classical block entropy.

use catlab::classical::word_measures;
use catlab::histories::{decoherence_matrix, entropies, Budget};
use catlab::multiparticle::{multiparticle_histories, MultiParams};
use catlab::quantum::{build_cat_unitary, build_projectors, CatParams};

fn main() -> catlab::Result<()> {
    let n = 5;
    let mt = word_measures(2, n, 2048)?;
    println!("q  kappa  S_cl      S_AF single  S_AF multi  S_diag multi");
    for q in 2..=5u32 {
        let params = CatParams::new(q, 2)?;
        let d = decoherence_matrix(&build_cat_unitary(&params), &build_projectors(&params), n, None, &Budget::default())?;
        let single = entropies(&d, Some(&mt))?;
        let kappa = 0.125 * (1u64 << q) as f64;
        let mp = MultiParams::new(q, 1, 2, kappa, 2)?;
        let multi = entropies(&multiparticle_histories(&mp, n, None, &Budget::default())?, Some(&mt))?;
        println!(
            "{q}  {kappa:<6} {:.6}  {:.6}     {:.6}    {:.6}",
            single.s_cl.unwrap(),
            single.s_af,
            multi.s_af,
            multi.s_diag.unwrap()
        );
    }
    Ok(())
}
