//! Cumulative partial entropies S_i of the sorted terms −ζ log ζ, for the
//! classical measures, the single cat and the cat with a collision bath.

use catlab::classical::word_measures;
use catlab::histories::{decoherence_matrix, partial_entropy_profile, Budget};
use catlab::multiparticle::{multiparticle_histories, MultiParams};
use catlab::quantum::{build_cat_unitary, build_projectors, CatParams};

fn show(label: &str, s: &[f64]) {
    let head: Vec<String> = s.iter().take(8).map(|v| format!("{v:.3}")).collect();
    println!("{label:<14} {} … {:.4} ({} terms)", head.join(" "), s.last().unwrap(), s.len());
}

fn main() -> catlab::Result<()> {
    let n = 5;
    let mt = word_measures(2, n, 2048)?;
    for q in [3u32, 5] {
        println!("q = {q}");
        let params = CatParams::new(q, 2)?;
        let d = decoherence_matrix(&build_cat_unitary(&params), &build_projectors(&params), n, None, &Budget::default())?;
        let single = partial_entropy_profile(&d, Some(&mt))?;
        show("classical", single.classical.as_ref().unwrap());
        show("single AF", &single.af);
        show("single diag", single.diag.as_ref().unwrap());
        let mp = MultiParams::new(q, 1, 2, 0.125 * (1u64 << q) as f64, 2)?;
        let multi = partial_entropy_profile(&multiparticle_histories(&mp, n, None, &Budget::default())?, None)?;
        show("multi AF", &multi.af);
        show("multi diag", multi.diag.as_ref().unwrap());
    }
    Ok(())
}
