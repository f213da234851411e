//! Dense against matrix-free application of the cat propagators: agreement
//! and time per application.

use std::time::Instant;

use catlab::multiparticle::{build_period_propagator, build_period_propagator_matrix_free, MultiParams};
use catlab::numerics::{ComplexVector, C64};
use catlab::operator::UnitaryOperator;
use catlab::quantum::{build_cat_unitary, build_cat_unitary_matrix_free, CatParams};

fn bench(label: &str, dense: &UnitaryOperator, free: &UnitaryOperator) {
    let d = dense.dim();
    let v = ComplexVector::new((0..d).map(|j| C64::new((j as f64).sin(), (0.3 * j as f64).cos())).collect());
    let reps = (1 << 20) / d.max(1);
    let time = |u: &UnitaryOperator| {
        let mut w = v.clone();
        let t = Instant::now();
        for _ in 0..reps.min(200) {
            u.apply_in_place(&mut w);
        }
        t.elapsed().as_secs_f64() * 1e6 / reps.min(200) as f64
    };
    println!(
        "{label:<22} dim {d:<5} |Δ| {:.1e}  dense {:>9.1} µs  matrix-free {:>7.1} µs",
        dense.apply(&v).max_abs_diff(&free.apply(&v)),
        time(dense),
        time(free)
    );
}

fn main() -> catlab::Result<()> {
    for q in [5, 7, 9] {
        let p = CatParams::new(q, 1)?;
        bench(&format!("cat q={q}"), &build_cat_unitary(&p), &build_cat_unitary_matrix_free(&p));
    }
    for (q, i) in [(4, 2), (6, 2)] {
        let p = MultiParams::new(q, 1, i, 10.0, 2)?;
        bench(
            &format!("collision q={q} I={i}"),
            &build_period_propagator(&p)?,
            &build_period_propagator_matrix_free(&p)?,
        );
    }
    Ok(())
}
