//! gnuplot scripts over the emitted CSVs. The scripts only reference the
//! data files; no plotting code runs in the library.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::error::Result;
use crate::io::write_atomic;

use super::config::Experiment;
use super::ResultSet;

const PREAMBLE: &str = "set datafile separator comma\nset datafile commentschars '#'\nset key outside right\n";

fn filtered(file: &str, x: &str, y: &str, key: &str, value: &str, title: &str) -> String {
    format!(
        "'{file}' using (column('{key}')=={value} ? column('{x}') : 1/0):(column('{y}')) with linespoints title '{title}'"
    )
}

/// Writes `<name>.gp` next to the CSVs and returns its path.
pub fn emit_plot_data(rs: &ResultSet, dir: &Path) -> Result<PathBuf> {
    let name = &rs.config.name;
    let f = |s: &str| rs.file_name(s);
    let mut gp = String::new();
    let _ = writeln!(gp, "# {}", rs.config.description);
    gp.push_str(PREAMBLE);
    let _ = writeln!(gp, "set terminal pngcairo size 1200,800\nset output '{name}.png'");
    let plot = |gp: &mut String, curves: Vec<String>| {
        let _ = writeln!(gp, "plot \\\n  {}", curves.join(", \\\n  "));
    };
    match &rs.config.experiment {
        Experiment::Classical { .. } => {
            gp.push_str("set xlabel 'n'\nset ylabel 'S_cl'\n");
            plot(
                &mut gp,
                vec![format!(
                    "'{}' using 'n':'S_cl' with linespoints title 'S_cl'",
                    f("entropy")
                )],
            );
        }
        Experiment::SingleCatEntropy { q, .. } => {
            gp.push_str("set xlabel 'n'\nset ylabel 'S(n)'\n");
            let mut curves = Vec::new();
            for qv in q.values() {
                curves.push(filtered(&f("entropy"), "n", "S_af", "q", &qv.to_string(), &format!("AF q={qv}")));
                curves.push(filtered(&f("entropy"), "n", "bound", "q", &qv.to_string(), &format!("2 log N, q={qv}")));
            }
            plot(&mut gp, curves);
        }
        Experiment::SectorMatrix { .. } => {
            // words are enumerated row-major, so row k of the matrix file is
            // (k / m, k % m)
            let m = rs.series("diagonal").map_or(1, |t| t.len().max(1));
            gp.push_str("set xlabel 'theta'\nset ylabel 'sigma'\nset zlabel '|D|'\n");
            let _ = writeln!(
                gp,
                "splot '{}' using (int($0)/{m}):(int($0)%{m}):'abs' with impulses lw 4 title '|D|', \\\n  '{}' using 0:0:'mu' with points pt 7 title 'mu'",
                f("matrix"),
                f("diagonal")
            );
        }
        Experiment::MassSweep { n, .. } => {
            gp.push_str("set multiplot layout 1,2\nset logscale y\nset xlabel 'q'\n");
            let mut off = Vec::new();
            let mut ds = Vec::new();
            for nv in n.values() {
                let v = nv.to_string();
                off.push(filtered(&f("scaling"), "q", "offdiag_mass", "n", &v, &format!("off-diagonal |s|={nv}")));
                ds.push(filtered(&f("scaling"), "q", "d_symb", "n", &v, &format!("d_symb |s|={nv}")));
            }
            plot(&mut gp, off);
            plot(&mut gp, ds);
            gp.push_str("unset multiplot\n");
        }
        Experiment::KappaSweep { .. } => {
            gp.push_str("set multiplot layout 1,2\nset xlabel 'kappa'\n");
            let k = f("kappa");
            plot(
                &mut gp,
                ["S_af", "S_diag", "S_cl"]
                    .iter()
                    .map(|c| format!("'{k}' using 'kappa':'{c}' with linespoints title '{c}'"))
                    .collect(),
            );
            plot(
                &mut gp,
                ["d_symb", "offdiag_mass"]
                    .iter()
                    .map(|c| format!("'{k}' using 'kappa':'{c}' with linespoints title '{c}'"))
                    .collect(),
            );
            gp.push_str("unset multiplot\n");
        }
        Experiment::VonNeumann { snapshots, .. } => {
            let cols = snapshots.len().clamp(1, 3);
            let rows = snapshots.len().div_ceil(cols).max(1);
            let _ = writeln!(gp, "set multiplot layout {rows},{cols}\nset view map");
            for s in snapshots {
                let _ = writeln!(
                    gp,
                    "set title 'n = {s}'\nsplot '{}' using (column('n')=={s} ? column('j0p') : 1/0):'j0':'abs' with image notitle",
                    f("snapshots")
                );
            }
            gp.push_str("unset multiplot\n");
            let _ = writeln!(
                gp,
                "set output '{name}_entropy.png'\nset xlabel 'n'\nset ylabel 'S_VN'\nplot '{}' using 'n':'S_vn' with linespoints title 'S_VN'",
                f("entropy")
            );
        }
        Experiment::PartialEntropy { q, .. } => {
            let qs = q.values();
            let cols = qs.len().clamp(1, 2);
            let _ = writeln!(
                gp,
                "set multiplot layout {},{cols}\nset xlabel 'i'\nset ylabel 'S_i'",
                qs.len().div_ceil(cols)
            );
            for qv in qs {
                let mut curves = Vec::new();
                for (system, source) in [
                    ("single", "classical"),
                    ("single", "af"),
                    ("single", "diag"),
                    ("multi", "af"),
                    ("multi", "diag"),
                ] {
                    curves.push(format!(
                        "'{}' using (column('q')=={qv} && strcol('system') eq '{system}' && strcol('source') eq '{source}' ? column('i') : 1/0):'S_i' with lines title '{system} {source}'",
                        f("profile")
                    ));
                }
                let _ = writeln!(gp, "set title 'q = {qv}'");
                plot(&mut gp, curves);
            }
            gp.push_str("unset multiplot\n");
        }
        Experiment::CombinedLimit { .. } => {
            gp.push_str("set xlabel 'q'\nset ylabel 'entropy'\n");
            let c = f("combined");
            plot(
                &mut gp,
                ["S_cl", "S_af_single", "S_af_multi"]
                    .iter()
                    .map(|col| format!("'{c}' using 'q':'{col}' with linespoints title '{col}'"))
                    .collect(),
            );
        }
    }
    let path = dir.join(format!("{name}.gp"));
    write_atomic(&path, gp.as_bytes())?;
    Ok(path)
}
