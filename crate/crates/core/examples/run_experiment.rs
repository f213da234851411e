//! Runs a built-in experiment through the harness and writes its CSVs.
//!
//! `cargo run --release --example run_experiment -- fig08-10-kappa out/`

use catlab::harness::{builtin_experiment, emit_plot_data, run, write_result, RunOptions};

fn main() -> catlab::Result<()> {
    let mut args = std::env::args().skip(1);
    let name = args.next().unwrap_or_else(|| "fig04-sector-n3".into());
    let out = args.next().unwrap_or_else(|| "out".into());
    let cfg = builtin_experiment(&name)?;
    let rs = run(&cfg, &RunOptions::default())?;
    for p in write_result(&rs, out.as_ref())? {
        println!("{}", p.display());
    }
    println!("{}", emit_plot_data(&rs, out.as_ref())?.display());
    for (k, v) in &rs.metrics {
        println!("{k} = {v}");
    }
    Ok(())
}
