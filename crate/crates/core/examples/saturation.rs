//! Long-time AF entropy through the Ω recursion; the entropy stalls at
//! 2 log N once the histories span the whole operator space.

use catlab::histories::{af_bound, Budget, OmegaSequence};
use catlab::numerics::spectral_entropy;
use catlab::quantum::{build_cat_unitary, build_projectors, CatParams};

fn main() -> catlab::Result<()> {
    for q in 2..=5 {
        let params = CatParams::new(q, 2)?;
        let mut seq = OmegaSequence::new(
            &build_cat_unitary(&params),
            &build_projectors(&params),
            None,
            &Budget::default(),
        )?;
        let mut curve = Vec::new();
        for _ in 0..12 {
            curve.push(spectral_entropy(&seq.at().spectrum()?)?);
            seq.step();
        }
        let s: Vec<String> = curve.iter().map(|v| format!("{v:.3}")).collect();
        println!("q={q} bound {:.3}: {}", af_bound(params.dim()), s.join(" "));
    }
    Ok(())
}
