use std::collections::BTreeMap;
use std::sync::Arc;

use crate::classical::{word_measures, MeasureTable};
use crate::error::Result;
use crate::histories::{
    decoherence_diagonal, decoherence_matrix, entropies, partial_entropy_profile, Budget,
    DecoherenceMatrix, EntropyRecord, OmegaSequence,
};
use crate::io::{fmt_opt, fmt_sig};
use crate::multiparticle::{
    big_projectors, build_period_propagator, von_neumann_run, MultiParams,
};
use crate::numerics::{shannon_entropy, spectral_entropy};
use crate::operator::{ProjectorFamily, UnitaryOperator};
use crate::quantum::{build_cat_unitary, build_projectors, CatParams, FreeRotation};
use crate::word::{word_count, Sector};

use super::config::{Experiment, ExperimentConfig};
use super::{Plan, PointOutput};

type Tables = Arc<BTreeMap<usize, MeasureTable>>;

/// Tolerance of the per-point invariant checks.
const CHECK_TOL: f64 = 1e-10;

fn cat_system(q: u32, p: u32, fr: FreeRotation) -> Result<(UnitaryOperator, ProjectorFamily)> {
    let params = CatParams::new(q, p)?.with_free_rotation(fr);
    Ok((build_cat_unitary(&params), build_projectors(&params)))
}

/// Classical tables for every requested length whose word count fits the
/// diagonal budget; longer lengths are left out.
fn classical_tables(p: u32, ns: &[usize], grid: usize, budget: &Budget) -> Result<Tables> {
    let mut map = BTreeMap::new();
    for &n in ns {
        let fits = word_count(1 << p, n).is_some_and(|w| w <= budget.max_diagonal_words);
        if fits && !map.contains_key(&n) {
            map.insert(n, word_measures(p, n, grid)?);
        }
    }
    Ok(Arc::new(map))
}

fn check_record(rec: &EntropyRecord, point: &str, out: &mut PointOutput) {
    if rec.s_af > rec.bound + 1e-9 || rec.s_af < -1e-12 {
        out.violations.push(format!(
            "{point}: S_AF = {} outside [0, {}]",
            rec.s_af, rec.bound
        ));
    }
}

fn checked_matrix(
    d: Result<DecoherenceMatrix>,
    point: &str,
    out: &mut PointOutput,
) -> Result<Option<DecoherenceMatrix>> {
    match d {
        Ok(d) => {
            if let Err(e) = d.check_invariants(CHECK_TOL) {
                out.absorb(point, e)?;
            }
            Ok(Some(d))
        }
        Err(e) => {
            out.absorb(point, e)?;
            Ok(None)
        }
    }
}

fn sector_label(s: Option<Sector>) -> (String, String) {
    match s {
        Some(s) => (s.first.to_string(), s.last.to_string()),
        None => (String::new(), String::new()),
    }
}

/// Least-squares slope of `ln y` against `ln x`.
pub(crate) fn loglog_slope(points: &[(f64, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|(x, y)| *x > 0.0 && *y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

pub(crate) fn plan(config: &ExperimentConfig) -> Result<Plan<'_>> {
    let budget = config.budget.budget();
    match &config.experiment {
        Experiment::Classical { p, n, grid } => {
            let (p, grid) = (*p, *grid);
            let ns: Vec<usize> = n.values().into_iter().map(|v| v as usize).collect();
            let job = move || -> Result<PointOutput> {
                let mut out = PointOutput::default();
                let mut prev: Option<(usize, f64)> = None;
                for &n in &ns {
                    let s = shannon_entropy(&word_measures(p, n, grid)?.measures())?;
                    let inc = prev.filter(|&(m, _)| m + 1 == n).map(|(_, sp)| s - sp);
                    out.row(
                        0,
                        vec![p.to_string(), n.to_string(), fmt_sig(s), fmt_opt(inc)],
                    );
                    prev = Some((n, s));
                }
                Ok(out)
            };
            Ok(Plan {
                series: vec![("entropy", vec!["p", "n", "S_cl", "increment"])],
                jobs: vec![(format!("p={p}"), Box::new(job))],
                finish: None,
            })
        }

        Experiment::SingleCatEntropy {
            q,
            p,
            n,
            grid,
            free_rotation,
        } => {
            let p = *p;
            let fr = *free_rotation;
            let ns: Vec<usize> = n.values().into_iter().map(|v| v as usize).collect();
            let tables = classical_tables(p, &ns, *grid, &budget)?;
            let jobs = q
                .values()
                .into_iter()
                .map(|q| {
                    let ns = ns.clone();
                    let tables = tables.clone();
                    let job = move || single_cat_entropy(q, p, fr, &ns, &tables, &budget);
                    (format!("q={q}"), Box::new(job) as _)
                })
                .collect();
            Ok(Plan {
                series: vec![(
                    "entropy",
                    vec!["q", "p", "n", "S_af", "S_diag", "S_cl", "bound", "method"],
                )],
                jobs,
                finish: None,
            })
        }

        Experiment::SectorMatrix {
            q,
            p,
            n,
            sector,
            grid,
        } => {
            let (q, p, n, sector) = (*q, *p, *n as usize, *sector);
            let tables = classical_tables(p, &[n], *grid, &Budget {
                max_diagonal_words: usize::MAX,
                ..budget
            })?;
            let job = move || -> Result<PointOutput> {
                let mut out = PointOutput::default();
                let point = format!("q={q} n={n}");
                let (u, proj) = cat_system(q, p, FreeRotation::default())?;
                let d = decoherence_matrix(&u, &proj, n, Some(sector), &budget);
                let Some(d) = checked_matrix(d, &point, &mut out)? else {
                    return Ok(out);
                };
                let mt = &tables[&n];
                let rec = entropies(&d, Some(mt))?;
                check_record(&rec, &point, &mut out);
                for row in d.to_csv().rows() {
                    out.row(0, row.clone());
                }
                let mu = mt.sector_measures(sector);
                for (i, (dd, m)) in d.diagonal().iter().zip(&mu).enumerate() {
                    out.row(1, vec![d.word(i).to_string(), fmt_sig(*dd), fmt_sig(*m)]);
                }
                out.row(
                    2,
                    vec![
                        q.to_string(),
                        p.to_string(),
                        n.to_string(),
                        sector.first.to_string(),
                        sector.last.to_string(),
                        fmt_sig(rec.s_af),
                        fmt_opt(rec.s_diag),
                        fmt_opt(rec.s_cl),
                        fmt_opt(rec.d_symb),
                        fmt_opt(rec.offdiag_mass),
                        fmt_sig(d.trace()),
                        fmt_sig(mt.sector_probability(sector)),
                    ],
                );
                Ok(out)
            };
            Ok(Plan {
                series: vec![
                    ("matrix", vec!["theta", "sigma", "re", "im", "abs"]),
                    ("diagonal", vec!["word", "D", "mu"]),
                    ("summary", SECTOR_SUMMARY.to_vec()),
                ],
                jobs: vec![(format!("q={q}"), Box::new(job))],
                finish: None,
            })
        }

        Experiment::MassSweep {
            q,
            p,
            n,
            sector,
            grid,
        } => {
            let (p, sector) = (*p, *sector);
            let ns: Vec<usize> = n.values().into_iter().map(|v| v as usize).collect();
            let tables = classical_tables(p, &ns, *grid, &Budget {
                max_diagonal_words: usize::MAX,
                ..budget
            })?;
            let mut jobs: Vec<super::Job> = Vec::new();
            for qv in q.values() {
                for &nv in &ns {
                    let tables = tables.clone();
                    let job = move || mass_point(qv, p, nv, sector, &tables, &budget);
                    jobs.push((format!("q={qv} n={nv}"), Box::new(job)));
                }
            }
            let ns_fit = ns.clone();
            let finish = move |out: &mut PointOutput| {
                for &nv in &ns_fit {
                    let pick = |key: &str| -> Vec<(f64, f64)> {
                        out.metrics
                            .iter()
                            .filter_map(|(k, v)| {
                                let rest = k.strip_prefix(key)?;
                                let (qs, ns) = rest.split_once(".n")?;
                                let qv: u32 = qs.parse().ok()?;
                                (ns.parse::<usize>().ok()? == nv)
                                    .then(|| ((1u64 << qv) as f64, *v))
                            })
                            .collect()
                    };
                    let off = loglog_slope(&pick("offdiag.q"));
                    let ds = loglog_slope(&pick("d_symb.q"));
                    let points = pick("offdiag.q").len();
                    out.row(
                        2,
                        vec![nv.to_string(), points.to_string(), fmt_opt(off), fmt_opt(ds)],
                    );
                    if let Some(e) = off {
                        out.metrics.push((format!("fit.offdiag_exponent.n{nv}"), e));
                    }
                    if let Some(e) = ds {
                        out.metrics.push((format!("fit.d_symb_exponent.n{nv}"), e));
                    }
                }
            };
            Ok(Plan {
                series: vec![
                    ("scaling", SECTOR_SUMMARY.to_vec()),
                    ("diagonal", vec!["q", "n", "word", "D", "mu"]),
                    ("fit", vec!["n", "points", "offdiag_exponent", "d_symb_exponent"]),
                ],
                jobs,
                finish: Some(Box::new(finish)),
            })
        }

        Experiment::KappaSweep {
            q,
            r,
            i,
            p,
            n,
            sector,
            kappa,
            grid,
            order,
        } => {
            let (q, r, i, p, n, sector, order) = (*q, *r, *i, *p, *n as usize, *sector, *order);
            let tables = classical_tables(p, &[n], *grid, &Budget {
                max_diagonal_words: usize::MAX,
                ..budget
            })?;
            let jobs = kappa
                .iter()
                .map(|&k| {
                    let tables = tables.clone();
                    let job = move || -> Result<PointOutput> {
                        let mut out = PointOutput::default();
                        let point = format!("kappa={k}");
                        let params = MultiParams::new(q, r, i, k, p)?.with_order(order);
                        let d = build_period_propagator(&params).and_then(|u| {
                            decoherence_matrix(&u, &big_projectors(&params), n, Some(sector), &budget)
                        });
                        let Some(d) = checked_matrix(d, &point, &mut out)? else {
                            return Ok(out);
                        };
                        let mt = &tables[&n];
                        let rec = entropies(&d, Some(mt))?;
                        check_record(&rec, &point, &mut out);
                        out.row(
                            0,
                            vec![
                                fmt_sig(k),
                                fmt_sig(rec.s_af),
                                fmt_opt(rec.s_diag),
                                fmt_opt(rec.s_cl),
                                fmt_opt(rec.d_symb),
                                fmt_opt(rec.offdiag_mass),
                                fmt_sig(d.trace()),
                                fmt_sig(mt.sector_probability(sector)),
                            ],
                        );
                        for a in 0..d.len() {
                            for b in 0..d.len() {
                                out.row(
                                    1,
                                    vec![
                                        fmt_sig(k),
                                        d.word(a).to_string(),
                                        d.word(b).to_string(),
                                        fmt_sig(d.get(a, b).norm()),
                                    ],
                                );
                            }
                        }
                        Ok(out)
                    };
                    (format!("kappa={k}"), Box::new(job) as _)
                })
                .collect();
            Ok(Plan {
                series: vec![
                    (
                        "kappa",
                        vec![
                            "kappa", "S_af", "S_diag", "S_cl", "d_symb", "offdiag_mass",
                            "trace", "mu_sum",
                        ],
                    ),
                    ("matrix", vec!["kappa", "theta", "sigma", "abs"]),
                ],
                jobs,
                finish: None,
            })
        }

        Experiment::VonNeumann {
            q,
            r,
            i,
            kappa,
            n_max,
            kick,
            initial,
            snapshots,
            order,
        } => {
            let jobs = kappa
                .iter()
                .map(|&k| {
                    let job = move || -> Result<PointOutput> {
                        let mut out = PointOutput::default();
                        let mut params = MultiParams::new(*q, *r, *i, k, 1)?.with_order(*order);
                        params.kick = *kick;
                        let run = von_neumann_run(&params, initial, *n_max, snapshots)?;
                        for pt in &run {
                            out.row(0, vec![fmt_sig(k), pt.n.to_string(), fmt_sig(pt.s_vn)]);
                            if let Some(rho) = &pt.snapshot {
                                for row in rho.to_csv().rows() {
                                    let mut cells = vec![fmt_sig(k), pt.n.to_string()];
                                    cells.extend(row.iter().cloned());
                                    out.row(1, cells);
                                }
                            }
                        }
                        let max = run.iter().map(|p| p.s_vn).fold(0.0, f64::max);
                        out.metrics.push((format!("max_s_vn.kappa{k}"), max));
                        Ok(out)
                    };
                    (format!("kappa={k}"), Box::new(job) as _)
                })
                .collect();
            Ok(Plan {
                series: vec![
                    ("entropy", vec!["kappa", "n", "S_vn"]),
                    ("snapshots", vec!["kappa", "n", "j0p", "j0", "abs"]),
                ],
                jobs,
                finish: None,
            })
        }

        Experiment::PartialEntropy {
            q,
            p,
            n,
            sector,
            bath,
            grid,
        } => {
            let (p, n, sector) = (*p, *n as usize, *sector);
            let tables = classical_tables(p, &[n], *grid, &Budget {
                max_diagonal_words: usize::MAX,
                ..budget
            })?;
            let jobs = q
                .values()
                .into_iter()
                .map(|qv| {
                    let tables = tables.clone();
                    let bath = bath.clone();
                    let job = move || -> Result<PointOutput> {
                        let mut out = PointOutput::default();
                        let mt = &tables[&n];
                        let (u, proj) = cat_system(qv, p, FreeRotation::default())?;
                        let mut systems = vec![("single", u, proj)];
                        if let Some(b) = &bath {
                            let params = MultiParams::new(qv, b.r, b.i, b.kappa.kappa(qv)[0], p)?;
                            systems.push((
                                "multi",
                                build_period_propagator(&params)?,
                                big_projectors(&params),
                            ));
                        }
                        for (system, u, proj) in systems {
                            let point = format!("q={qv} {system}");
                            let d = decoherence_matrix(&u, &proj, n, sector, &budget);
                            let Some(d) = checked_matrix(d, &point, &mut out)? else {
                                continue;
                            };
                            let prof = partial_entropy_profile(&d, Some(mt))?;
                            let mut emit = |source: &str, vals: &[f64]| {
                                for (k, s) in vals.iter().enumerate() {
                                    out.row(
                                        0,
                                        vec![
                                            qv.to_string(),
                                            system.to_string(),
                                            source.to_string(),
                                            k.to_string(),
                                            fmt_sig(*s),
                                        ],
                                    );
                                }
                            };
                            emit("af", &prof.af);
                            if let Some(v) = &prof.diag {
                                emit("diag", v);
                            }
                            if system == "single" {
                                if let Some(v) = &prof.classical {
                                    emit("classical", v);
                                }
                            }
                        }
                        Ok(out)
                    };
                    (format!("q={qv}"), Box::new(job) as _)
                })
                .collect();
            Ok(Plan {
                series: vec![("profile", vec!["q", "system", "source", "i", "S_i"])],
                jobs,
                finish: None,
            })
        }

        Experiment::CombinedLimit {
            q,
            r,
            i,
            p,
            n,
            kappa,
            sector,
            grid,
        } => {
            let (r, i, p, n, sector) = (*r, *i, *p, *n as usize, *sector);
            let tables = classical_tables(p, &[n], *grid, &Budget {
                max_diagonal_words: usize::MAX,
                ..budget
            })?;
            let mut jobs: Vec<super::Job> = Vec::new();
            for qv in q.values() {
                for k in kappa.kappa(qv) {
                    let tables = tables.clone();
                    let job = move || -> Result<PointOutput> {
                        let mut out = PointOutput::default();
                        let point = format!("q={qv} kappa={k}");
                        let mt = &tables[&n];
                        let (u, proj) = cat_system(qv, p, FreeRotation::default())?;
                        let single = decoherence_matrix(&u, &proj, n, sector, &budget);
                        let params = MultiParams::new(qv, r, i, k, p)?;
                        let multi = build_period_propagator(&params).and_then(|u| {
                            decoherence_matrix(&u, &big_projectors(&params), n, sector, &budget)
                        });
                        let (Some(ds), Some(dm)) = (
                            checked_matrix(single, &point, &mut out)?,
                            checked_matrix(multi, &point, &mut out)?,
                        ) else {
                            return Ok(out);
                        };
                        let rs = entropies(&ds, Some(mt))?;
                        let rm = entropies(&dm, Some(mt))?;
                        check_record(&rs, &point, &mut out);
                        check_record(&rm, &point, &mut out);
                        let s_cl = rs.s_cl.expect("classical table supplied");
                        let (fs, ls) = sector_label(sector);
                        out.row(
                            0,
                            vec![
                                qv.to_string(),
                                fmt_sig(k),
                                fs,
                                ls,
                                fmt_sig(rs.s_af),
                                fmt_opt(rs.s_diag),
                                fmt_sig(rm.s_af),
                                fmt_opt(rm.s_diag),
                                fmt_sig(s_cl),
                                fmt_sig((rs.s_af - s_cl).abs()),
                                fmt_sig((rm.s_af - s_cl).abs()),
                                fmt_sig(rs.bound),
                                fmt_sig(rm.bound),
                            ],
                        );
                        Ok(out)
                    };
                    jobs.push((format!("q={qv} kappa={k}"), Box::new(job)));
                }
            }
            Ok(Plan {
                series: vec![(
                    "combined",
                    vec![
                        "q",
                        "kappa",
                        "first",
                        "last",
                        "S_af_single",
                        "S_diag_single",
                        "S_af_multi",
                        "S_diag_multi",
                        "S_cl",
                        "gap_single",
                        "gap_multi",
                        "bound_single",
                        "bound_multi",
                    ],
                )],
                jobs,
                finish: None,
            })
        }
    }
}

const SECTOR_SUMMARY: [&str; 12] = [
    "q",
    "p",
    "n",
    "first",
    "last",
    "S_af",
    "S_diag",
    "S_cl",
    "d_symb",
    "offdiag_mass",
    "trace",
    "mu_sum",
];

fn single_cat_entropy(
    q: u32,
    p: u32,
    fr: FreeRotation,
    ns: &[usize],
    tables: &BTreeMap<usize, MeasureTable>,
    budget: &Budget,
) -> Result<PointOutput> {
    let mut out = PointOutput::default();
    let (u, proj) = cat_system(q, p, fr)?;
    let bound = 2.0 * (proj.dim() as f64).ln();
    let use_omega = proj.dim() <= budget.max_omega_dim;
    let mut omega = if use_omega {
        match OmegaSequence::new(&u, &proj, None, budget) {
            Ok(s) => Some(s),
            Err(e) => {
                out.absorb(&format!("q={q}"), e)?;
                return Ok(out);
            }
        }
    } else {
        None
    };
    let mut sorted = ns.to_vec();
    sorted.sort_unstable();
    let mut af = BTreeMap::new();
    for &n in &sorted {
        let point = format!("q={q} n={n}");
        let s_af = if let Some(seq) = omega.as_mut() {
            while seq.word_len() < n {
                seq.step();
            }
            let om = seq.at();
            let tr = om.trace();
            if (tr - 1.0).abs() > CHECK_TOL {
                out.violations.push(format!("{point}: Ω trace {tr}"));
            }
            spectral_entropy(&om.spectrum()?)
        } else {
            match decoherence_matrix(&u, &proj, n, None, budget) {
                Ok(d) => {
                    if let Err(e) = d.check_invariants(CHECK_TOL) {
                        out.absorb(&point, e)?;
                    }
                    spectral_entropy(&d.spectrum()?)
                }
                Err(e) => {
                    out.absorb(&point, e)?;
                    continue;
                }
            }
        };
        af.insert(n, s_af?);
    }
    for &n in ns {
        let Some(&s_af) = af.get(&n) else { continue };
        let point = format!("q={q} n={n}");
        if s_af > bound + 1e-9 {
            out.violations
                .push(format!("{point}: S_AF = {s_af} exceeds bound {bound}"));
        }
        let s_diag = match decoherence_diagonal(&u, &proj, n, None, budget.max_diagonal_words) {
            Ok(d) => Some(shannon_entropy(&d)?),
            Err(crate::error::CatError::BudgetExceeded { .. }) => None,
            Err(e) => return Err(e),
        };
        let s_cl = tables
            .get(&n)
            .map(|mt| shannon_entropy(&mt.measures()))
            .transpose()?;
        out.row(
            0,
            vec![
                q.to_string(),
                p.to_string(),
                n.to_string(),
                fmt_sig(s_af),
                fmt_opt(s_diag),
                fmt_opt(s_cl),
                fmt_sig(bound),
                if use_omega { "omega" } else { "word-tree" }.to_string(),
            ],
        );
        out.metrics.push((format!("s_af.q{q}.n{n}"), s_af));
    }
    Ok(out)
}

fn mass_point(
    q: u32,
    p: u32,
    n: usize,
    sector: Sector,
    tables: &BTreeMap<usize, MeasureTable>,
    budget: &Budget,
) -> Result<PointOutput> {
    let mut out = PointOutput::default();
    let point = format!("q={q} n={n}");
    let (u, proj) = cat_system(q, p, FreeRotation::default())?;
    let d = decoherence_matrix(&u, &proj, n, Some(sector), budget);
    let Some(d) = checked_matrix(d, &point, &mut out)? else {
        return Ok(out);
    };
    let mt = &tables[&n];
    let rec = entropies(&d, Some(mt))?;
    check_record(&rec, &point, &mut out);
    out.row(
        0,
        vec![
            q.to_string(),
            p.to_string(),
            n.to_string(),
            sector.first.to_string(),
            sector.last.to_string(),
            fmt_sig(rec.s_af),
            fmt_opt(rec.s_diag),
            fmt_opt(rec.s_cl),
            fmt_opt(rec.d_symb),
            fmt_opt(rec.offdiag_mass),
            fmt_sig(d.trace()),
            fmt_sig(mt.sector_probability(sector)),
        ],
    );
    let mu = mt.sector_measures(sector);
    for (i, (dd, m)) in d.diagonal().iter().zip(&mu).enumerate() {
        out.row(
            1,
            vec![q.to_string(), n.to_string(), d.word(i).to_string(), fmt_sig(*dd), fmt_sig(*m)],
        );
    }
    if let (Some(off), Some(ds)) = (rec.offdiag_mass, rec.d_symb) {
        out.metrics.push((format!("offdiag.q{q}.n{n}"), off));
        out.metrics.push((format!("d_symb.q{q}.n{n}"), ds));
    }
    Ok(out)
}
