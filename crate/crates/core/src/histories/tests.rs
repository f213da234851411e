use super::*;
use crate::classical::word_measures;
use crate::numerics::{eigvalsh, ComplexMatrix, C64};
use crate::quantum::{build_cat_unitary, build_projectors, CatParams};
use crate::word::{word_count, Word};

fn cat(q: u32, p: u32) -> (UnitaryOperator, ProjectorFamily) {
    let params = CatParams::new(q, p).unwrap();
    (build_cat_unitary(&params), build_projectors(&params))
}

/// D by explicit operator products and traces, no word tree.
fn brute_force_d(u: &UnitaryOperator, proj: &ProjectorFamily, n: usize) -> ComplexMatrix {
    let words = word_count(proj.len(), n).unwrap();
    let ops: Vec<ComplexMatrix> = (0..words)
        .map(|r| {
            word_operator(u, proj, &Word::from_index(r, proj.len(), n))
                .unwrap()
                .operator
        })
        .collect();
    let inv = 1.0 / proj.dim() as f64;
    ComplexMatrix::from_fn(words, words, |a, b| {
        ops[a].adjoint().matmul(&ops[b]).trace() * inv
    })
}

fn nonzero(values: &[f64]) -> Vec<f64> {
    values.iter().copied().filter(|&x| x > 1e-12).collect()
}

#[test]
fn single_symbol_words_are_projectors() {
    let (u, proj) = cat(3, 2);
    for l in 0..4 {
        let w = Word::new(vec![l], 4).unwrap();
        assert_eq!(word_operator(&u, &proj, &w).unwrap().operator, proj.to_dense(l));
    }
}

#[test]
fn two_letter_word_is_p0_u_p0() {
    let (u, proj) = cat(2, 1);
    let w = Word::new(vec![0, 0], 2).unwrap();
    let op = word_operator(&u, &proj, &w).unwrap().operator;
    let p0 = proj.to_dense(0);
    let expect = p0.matmul(&u.to_dense()).matmul(&p0);
    assert!(op.max_abs_diff(&expect) < 1e-15);
    // rank ≤ 2: only the top-left 2×2 block survives
    for k in 0..4 {
        for l in 0..4 {
            if k >= 2 || l >= 2 {
                assert_eq!(op[(k, l)], C64::default());
            }
        }
    }
}

#[test]
fn out_of_range_symbol() {
    let (u, proj) = cat(2, 1);
    let w = Word::new(vec![0, 3], 4).unwrap();
    assert!(matches!(
        word_operator(&u, &proj, &w),
        Err(crate::error::CatError::SymbolOutOfRange { symbol: 3, alphabet: 2 })
    ));
}

#[test]
fn histories_resolve_identity() {
    let (u, proj) = cat(3, 1);
    let sum = resolution_of_identity(&u, &proj, 3).unwrap();
    assert!(sum.max_abs_diff(&ComplexMatrix::identity(8)) < 1e-12);
}

#[test]
fn length_one_matrix_is_uniform_diagonal() {
    for (q, p) in [(2, 1), (3, 2), (5, 2)] {
        let (u, proj) = cat(q, p);
        let d = decoherence_matrix(&u, &proj, 1, None, &Budget::default()).unwrap();
        let l = 1usize << p;
        let expect = ComplexMatrix::from_diagonal(&vec![C64::new(1.0 / l as f64, 0.0); l]);
        assert!(d.entries().max_abs_diff(&expect) < 1e-15);
    }
}

#[test]
fn word_tree_matches_brute_force() {
    for (q, p, n) in [(2, 1, 3), (2, 2, 3), (3, 2, 2), (3, 1, 4)] {
        let (u, proj) = cat(q, p);
        let d = decoherence_matrix(&u, &proj, n, None, &Budget::default()).unwrap();
        let bf = brute_force_d(&u, &proj, n);
        assert!(d.entries().max_abs_diff(&bf) < 1e-13, "q={q} p={p} n={n}");
        d.check_invariants(1e-10).unwrap();
    }
}

#[test]
fn sector_is_filtered_submatrix() {
    let (u, proj) = cat(3, 2);
    let full = decoherence_matrix(&u, &proj, 3, None, &Budget::default()).unwrap();
    let s = Sector::new(1, 2);
    let sec = decoherence_matrix(&u, &proj, 3, Some(s), &Budget::default()).unwrap();
    let restricted = full.restrict(s);
    assert_eq!(sec.word_ranks(), restricted.word_ranks());
    assert!(sec.entries().max_abs_diff(restricted.entries()) < 1e-15);
    // sector traces add up to one
    let mut total = 0.0;
    for a in 0..4 {
        for b in 0..4 {
            total += decoherence_matrix(&u, &proj, 3, Some(Sector::new(a, b)), &Budget::default())
                .unwrap()
                .trace();
        }
    }
    assert!((total - 1.0).abs() < 1e-10);
}

#[test]
fn interference_in_sector_00() {
    let (u, proj) = cat(2, 2);
    let d = decoherence_matrix(&u, &proj, 3, Some(Sector::new(0, 0)), &Budget::default()).unwrap();
    assert_eq!(d.len(), 4);
    assert!(d.offdiag_mass() > 1e-3);
    let mu = word_measures(2, 3, 1024).unwrap();
    let cl = mu.sector_measures(Sector::new(0, 0));
    let diff: f64 = d.diagonal().iter().zip(&cl).map(|(a, b)| (a - b).abs()).sum();
    assert!(diff > 1e-3);
}

#[test]
fn omega_spectrum_matches_brute_force() {
    for (q, p) in [(2, 1), (2, 2), (3, 2)] {
        let (u, proj) = cat(q, p);
        for n in 1..=4 {
            let bf = nonzero(eigvalsh(&brute_force_d(&u, &proj, n)).unwrap().values());
            let om = omega_recursion(&u, &proj, n, None, &Budget::default()).unwrap();
            assert!((om.trace() - 1.0).abs() < 1e-10);
            let os = nonzero(om.spectrum().unwrap().values());
            assert_eq!(bf.len(), os.len(), "q={q} p={p} n={n}");
            for (a, b) in bf.iter().zip(&os) {
                assert!((a - b).abs() < 1e-9);
            }
        }
    }
}

#[test]
fn omega_first_step_is_diag_d1() {
    let (u, proj) = cat(2, 1);
    let om = omega_recursion(&u, &proj, 1, None, &Budget::default()).unwrap();
    let s = om.spectrum().unwrap();
    assert!((s.values()[0] - 0.5).abs() < 1e-14);
    assert!((s.values()[1] - 0.5).abs() < 1e-14);
    assert!(s.values()[2].abs() < 1e-14);
}

#[test]
fn omega_trace_preserved() {
    let (u, proj) = cat(3, 1);
    let mut seq = OmegaSequence::new(&u, &proj, None, &Budget::default()).unwrap();
    for _ in 1..=6 {
        assert!((seq.at().trace() - 1.0).abs() < 1e-10);
        seq.step();
    }
}

#[test]
fn omega_sector_matches_sector_block() {
    let (u, proj) = cat(3, 2);
    let s = Sector::new(0, 0);
    for n in 2..=4 {
        let d = decoherence_matrix(&u, &proj, n, Some(s), &Budget::default()).unwrap();
        let om = omega_recursion(&u, &proj, n, Some(s), &Budget::default()).unwrap();
        let a = nonzero(d.spectrum().unwrap().values());
        let b = nonzero(om.spectrum().unwrap().values());
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-9);
        }
    }
}

#[test]
fn permutation_dynamics_give_diagonal_d() {
    // classical reversible map on basis states: j → 3j + 1 mod 8
    let dim = 8;
    let perm = ComplexMatrix::from_fn(dim, dim, |k, l| {
        if k == (3 * l + 1) % dim {
            C64::new(1.0, 0.0)
        } else {
            C64::default()
        }
    });
    let u = UnitaryOperator::dense(perm).unwrap();
    let proj = ProjectorFamily::uniform(dim, 4).unwrap();
    let d = decoherence_matrix(&u, &proj, 4, None, &Budget::default()).unwrap();
    assert!(d.offdiag_mass() < 1e-12);
    assert!((d.trace() - 1.0).abs() < 1e-12);
}

#[test]
fn length_one_entropies_agree() {
    for (q, p) in [(2, 1), (3, 2), (5, 2)] {
        let (u, proj) = cat(q, p);
        let d = decoherence_matrix(&u, &proj, 1, None, &Budget::default()).unwrap();
        let mt = word_measures(p, 1, 64).unwrap();
        let r = entropies(&d, Some(&mt)).unwrap();
        let expect = p as f64 * 2f64.ln();
        assert!((r.s_af - expect).abs() < 1e-12);
        assert!((r.s_diag.unwrap() - expect).abs() < 1e-12);
        assert!((r.s_cl.unwrap() - expect).abs() < 1e-12);
        assert_eq!(r.d_symb, Some(0.0));
        assert_eq!(r.offdiag_mass, Some(0.0));
    }
}

#[test]
fn af_entropy_never_exceeds_bound() {
    for q in 2..=4 {
        let (u, proj) = cat(q, 2);
        let mut seq = OmegaSequence::new(&u, &proj, None, &Budget::default()).unwrap();
        for _ in 0..8 {
            let r = entropies(&seq.at(), None).unwrap();
            assert!(r.s_af <= r.bound + 1e-9);
            seq.step();
        }
    }
}

#[test]
fn shape_mismatch_on_wrong_table() {
    let (u, proj) = cat(3, 2);
    let d = decoherence_matrix(&u, &proj, 2, None, &Budget::default()).unwrap();
    let mt = word_measures(2, 3, 64).unwrap();
    assert!(matches!(
        entropies(&d, Some(&mt)),
        Err(crate::error::CatError::ShapeMismatch(_))
    ));
}

#[test]
fn budget_guard() {
    let (u, proj) = cat(3, 2);
    let tight = Budget {
        max_words: 16,
        ..Budget::default()
    };
    assert!(decoherence_matrix(&u, &proj, 3, None, &tight).is_err());
    assert!(decoherence_matrix(&u, &proj, 4, Some(Sector::new(0, 0)), &tight).is_ok());
    let tiny = Budget {
        max_omega_dim: 4,
        ..Budget::default()
    };
    assert!(omega_recursion(&u, &proj, 2, None, &tiny).is_err());
}

#[test]
fn diagonal_only_route_matches_full_matrix() {
    let (u, proj) = cat(4, 2);
    let d = decoherence_matrix(&u, &proj, 4, None, &Budget::default()).unwrap();
    let diag = decoherence_diagonal(&u, &proj, 4, None, 1 << 16).unwrap();
    for (a, b) in d.diagonal().iter().zip(&diag) {
        assert!((a - b).abs() < 1e-14);
    }
    let s = Sector::new(2, 1);
    let ds = decoherence_diagonal(&u, &proj, 4, Some(s), 1 << 16).unwrap();
    for (a, b) in d.restrict(s).diagonal().iter().zip(&ds) {
        assert!((a - b).abs() < 1e-14);
    }
}

#[test]
fn partial_profiles() {
    let uniform = vec![0.125; 8];
    let prof = cumulative_profile(&uniform).unwrap();
    for (i, s) in prof.iter().enumerate() {
        assert!((s - (i as f64 + 1.0) * 8f64.ln() / 8.0).abs() < 1e-14);
    }
    let (u, proj) = cat(2, 2);
    let d = decoherence_matrix(&u, &proj, 5, None, &Budget::default()).unwrap();
    let mt = word_measures(2, 5, 256).unwrap();
    let rec = entropies(&d, Some(&mt)).unwrap();
    let prof = partial_entropy_profile(&d, Some(&mt)).unwrap();
    assert!((prof.af.last().unwrap() - rec.s_af).abs() < 1e-12);
    assert!((prof.diag.as_ref().unwrap().last().unwrap() - rec.s_diag.unwrap()).abs() < 1e-12);
    assert!((prof.classical.as_ref().unwrap().last().unwrap() - rec.s_cl.unwrap()).abs() < 1e-12);
    assert!(prof.af.windows(2).all(|w| w[1] >= w[0]));
    // at most N² = 16 nonzero eigenvalues: flat after index 15
    let plateau = prof.af[15];
    assert!(prof.af[15..].iter().all(|&s| (s - plateau).abs() < 1e-9));
}
