//! Entanglement entropy of the heavy particle with its light environment,
//! for a single packet and for a two-packet cat state.

use catlab::multiparticle::{von_neumann_run, InitialState, MultiParams};

fn main() -> catlab::Result<()> {
    let params = MultiParams::new(7, 1, 2, 50.0, 1)?.without_kick();
    for init in [InitialState::SinglePacket, InitialState::SchrodingerCat] {
        let pts = von_neumann_run(&params, &init, 25, &[25])?;
        let s: Vec<String> = pts.iter().step_by(5).map(|p| format!("{:.3}", p.s_vn)).collect();
        println!("{init:?}: S_VN at n = 0, 5, …, 25: {}", s.join(" "));
        if let Some(rho) = pts.last().and_then(|p| p.snapshot.as_ref()) {
            // coherence between the sites X = 1/4 and X = 3/4
            let n = rho.dim();
            let m = rho.matrix();
            let (a, b) = (n / 4, 3 * n / 4);
            println!(
                "  n = 25: ρ(¼,¼) {:.4}  ρ(¾,¾) {:.4}  |ρ(¼,¾)| {:.4}",
                m[(a, a)].re,
                m[(b, b)].re,
                m[(a, b)].norm()
            );
        }
    }
    Ok(())
}
