//! Builds the quantum cat operators and the collision propagator and reports
//! their unitarity defects and construction times.

use std::time::Instant;

use catlab::multiparticle::{build_period_propagator, MultiParams};
use catlab::quantum::{build_cat_unitary, build_kick, build_projectors, build_u0, CatParams};

fn main() -> catlab::Result<()> {
    println!("q   N     ‖U0†U0−I‖   ‖K†K−I‖     ‖U†U−I‖     Tr P_0");
    for q in 1..=7 {
        let params = CatParams::new(q, 1)?;
        let proj = build_projectors(&params);
        println!(
            "{q:<3} {:<5} {:<11.1e} {:<11.1e} {:<11.1e} {}",
            params.dim(),
            build_u0(&params).unitarity_defect(),
            build_kick(&params).unitarity_defect(),
            build_cat_unitary(&params).unitarity_defect(),
            proj.rank(0)
        );
    }

    println!("\nmultiparticle (q, r, I, κ)");
    for (q, r, i, kappa) in [(4, 1, 2, 10.0), (6, 1, 2, 8.0), (4, 2, 3, 50.0)] {
        let params = MultiParams::new(q, r, i, kappa, 2)?;
        let t = Instant::now();
        let u = build_period_propagator(&params)?;
        println!(
            "({q}, {r}, {i}, {kappa:>4}) dim {:<5} defect {:.1e}  {:.0} ms",
            params.dim(),
            u.unitarity_defect(),
            t.elapsed().as_secs_f64() * 1e3
        );
    }
    Ok(())
}
