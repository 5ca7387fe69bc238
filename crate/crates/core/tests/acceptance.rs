//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero when a criterion fails that is not listed in `KNOWN_RED`.

mod common;

use common::*;
use gplab::analysis::identities::{diagonality_agrees, enumerate_terms};
use gplab::analysis::verdict::cite;
use gplab::analysis::{
    identity_suite, nuclearity_exactness_report, simplicity_report, trace_report, traciality_probe, AnalysisOptions,
    Problem, SuiteOptions, VerdictResult, VertexData,
};
use gplab::config::ProblemConfig;
use gplab::coxeter::{shuffle_permutation, CoxeterGroup, NormalForm};
use gplab::fock::rewrite::{certify, expr_matrix, random_expression, term_matrix};
use gplab::fock::{
    build_fock, expectation_diag, gauge_average, lambda_op, tensor_split_check, ElementaryTerm, OperatorMatrix,
    Rewriter, TruncatedFock,
};
use gplab::graph::{SimplicialGraph, VertexId};
use gplab::growth::{classify, growth_coefficients, Region};
use gplab::lattice::{act_on_q, action_case, lattice_matrix, lattice_product, ActionCase};
use gplab::linalg::{C64, ONE};
use gplab::vertex::hecke_vertex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};
use std::sync::Arc;
use std::time::Instant;

/// Criteria expected to fail, with the reason printed next to the FAIL line.
const KNOWN_RED: &[(u32, &str)] = &[(
    4,
    "averaging over roots of unity keeps every entry whose row and column words have the same letter counts \
     (for instance creation word ab against annihilation word ba on edgeless-3), while the diagonal expectation \
     keeps only entries between equal words; the average is the expectation onto the letter-count grading, \
     which is strictly larger",
)];

struct Outcome {
    pass: bool,
    /// The failure is exactly the one documented in `KNOWN_RED`.
    known_red: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, known_red: false, detail: detail.into() }
}

fn graphs4() -> Vec<(&'static str, SimplicialGraph)> {
    vec![
        ("edgeless-3", SimplicialGraph::edgeless(3)),
        ("path-3", SimplicialGraph::path(3)),
        ("4-cycle", SimplicialGraph::cycle(4)),
        ("path-4", SimplicialGraph::path(4)),
    ]
}

fn c1_growth() -> Outcome {
    let start = Instant::now();
    let graphs = vec![
        ("K3", SimplicialGraph::complete(3)),
        ("edgeless-3", SimplicialGraph::edgeless(3)),
        ("path-3", SimplicialGraph::path(3)),
        ("4-cycle", SimplicialGraph::cycle(4)),
        ("5-cycle", SimplicialGraph::cycle(5)),
        ("edgeless-4", SimplicialGraph::edgeless(4)),
    ];
    let mut bad = Vec::new();
    for (name, g) in &graphs {
        let bfs = Tits::new(g).spheres(8);
        let coeffs = growth_coefficients(g, 8).unwrap();
        let engine = CoxeterGroup::new(g.clone()).sphere_sizes(8).unwrap();
        let same = bfs.iter().zip(&coeffs).all(|(b, c)| *b as i128 == *c) && bfs == engine;
        if !same {
            bad.push(format!("{name}: bfs {bfs:?} series {coeffs:?} engine {engine:?}"));
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let pass = bad.is_empty() && secs < 30.0;
    outcome(pass, format!("6 graphs to depth 8, {} mismatches, {secs:.2}s {}", bad.len(), bad.join("; ")))
}

/// Every reduced word in the shuffle class of `w`, by commuting swaps.
fn shuffle_class(g: &SimplicialGraph, w: &[VertexId]) -> Vec<Vec<VertexId>> {
    let mut seen: HashSet<Vec<VertexId>> = HashSet::new();
    let mut queue = VecDeque::from([w.to_vec()]);
    seen.insert(w.to_vec());
    while let Some(x) = queue.pop_front() {
        for i in 0..x.len().saturating_sub(1) {
            if g.adjacent(x[i], x[i + 1]) {
                let mut y = x.clone();
                y.swap(i, i + 1);
                if seen.insert(y.clone()) {
                    queue.push_back(y);
                }
            }
        }
    }
    seen.into_iter().collect()
}

fn c2_coxeter() -> Outcome {
    let mut failures: Vec<String> = Vec::new();
    let mut counted = 0usize;
    for (name, g) in graphs4() {
        let grp = CoxeterGroup::new(g.clone());
        let tits = Tits::new(&g);
        let ball = grp.ball(4).unwrap();
        let mats: Vec<Vec<i64>> = ball.iter().map(|w| tits.word(w.letters())).collect();
        let e = NormalForm::identity();
        let le = |a: &NormalForm, b: &NormalForm| grp.starts_with(a, b);
        for (i, u) in ball.iter().enumerate() {
            // group axioms through the faithful representation
            if tits.word(grp.inverse(u).letters()) != tits.word(&u.letters().iter().rev().copied().collect::<Vec<_>>())
                || !grp.multiply(u, &grp.inverse(u)).is_identity()
                || grp.multiply(u, &e) != *u
                || grp.multiply(&e, u) != *u
            {
                failures.push(format!("{name}: inverse/identity at {u:?}"));
            }
            if !le(u, u) {
                failures.push(format!("{name}: reflexivity at {u:?}"));
            }
            for (j, v) in ball.iter().enumerate() {
                counted += 1;
                let uv = grp.multiply(u, v);
                if tits.word(uv.letters()) != tits.mul(&mats[i], &mats[j]) {
                    failures.push(format!("{name}: product {u:?}{v:?}"));
                }
                if le(u, v) && le(v, u) && u != v {
                    failures.push(format!("{name}: antisymmetry {u:?} {v:?}"));
                }
                let m = grp.meet(u, v);
                if !le(&m, u) || !le(&m, v) || ball.iter().any(|x| le(x, u) && le(x, v) && !le(x, &m)) {
                    failures.push(format!("{name}: meet {u:?} {v:?}"));
                }
                let peeled = grp.join(u, v);
                let searched = grp.join_by_search(u, v, u.len() + v.len()).unwrap();
                if peeled != searched {
                    failures.push(format!("{name}: join {u:?} {v:?}"));
                }
                for x in &ball {
                    if le(u, v) && le(v, x) && !le(u, x) {
                        failures.push(format!("{name}: transitivity {u:?} {v:?} {x:?}"));
                    }
                }
            }
            for v in ball.iter().filter(|v| v.len() <= 2) {
                for x in ball.iter().filter(|x| x.len() <= 2) {
                    if grp.multiply(&grp.multiply(u, v), x) != grp.multiply(u, &grp.multiply(v, x)) {
                        failures.push(format!("{name}: associativity"));
                    }
                }
            }
        }
    }
    // unique permutation on all four three-vertex graphs up to isomorphism
    let three = vec![
        SimplicialGraph::edgeless(3),
        SimplicialGraph::new(vec!["a".into(), "b".into(), "c".into()], &[(0, 1)]).unwrap(),
        SimplicialGraph::path(3),
        SimplicialGraph::complete(3),
    ];
    let mut classes = 0usize;
    for g in three {
        let grp = CoxeterGroup::new(g.clone());
        for w in grp.ball(8).unwrap() {
            classes += 1;
            for b in shuffle_class(&g, w.letters()) {
                let a = w.letters();
                let ok = grp.reduce(&b).unwrap() == w
                    && match shuffle_permutation(a, &b) {
                        None => false,
                        Some(p) => {
                            (0..b.len()).all(|k| b[k] == a[p[k]])
                                && (0..b.len()).all(|i| {
                                    (i + 1..b.len()).all(|j| p[i] < p[j] || g.adjacent(b[i], b[j]))
                                })
                        }
                    };
                if !ok {
                    failures.push(format!("shuffle permutation {a:?} -> {b:?}"));
                }
            }
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "ball(4) on 4 graphs ({counted} pairs), {classes} shuffle classes of length <= 8; {} failures {}",
            failures.len(),
            failures.iter().take(3).cloned().collect::<Vec<_>>().join("; ")
        ),
    )
}

const MAIN_CHECKS: &[&str] = &[
    "creation_product_same_vertex",
    "creation_commute_adjacent",
    "creation_after_diagonal_same_vertex",
    "diagonal_then_creation_same_vertex",
    "diagonal_then_creation_non_adjacent",
    "diagonal_then_creation_adjacent",
    "creation_annihilation_same_vertex",
    "annihilation_creation_same_vertex",
    "annihilation_creation_non_adjacent",
    "annihilation_creation_adjacent",
    "diagonal_product_non_adjacent",
    "diagonal_commute_adjacent",
];

fn c3_main_identities() -> Outcome {
    let mut notes = Vec::new();
    let mut pass = true;
    let mut covered: BTreeMap<&str, usize> = BTreeMap::new();
    for (name, p) in mixed_problems() {
        let opts = SuiteOptions { depth: 4, draws: 50, tolerance: 1e-9, expressions: 0, term_samples: 0, ..Default::default() };
        let r = identity_suite(&p, &opts).unwrap();
        let mut worst: f64 = 0.0;
        for check in MAIN_CHECKS {
            let c = r.get(check).unwrap();
            if c.skipped.is_none() {
                *covered.entry(check).or_default() += 1;
                pass &= c.passed && c.samples >= 50;
                worst = worst.max(c.max_deviation);
            }
        }
        notes.push(format!("{name} worst {worst:.1e}"));
    }
    // every identity and every case split is exercised on some graph
    pass &= MAIN_CHECKS.iter().all(|c| covered.contains_key(c));
    outcome(pass, format!("{} identity/case checks, N=4, 50 draws each: {}", MAIN_CHECKS.len(), notes.join(", ")))
}

/// Entries of `x` between words with equal letter counts.
fn balanced_part(x: &OperatorMatrix) -> OperatorMatrix {
    let f = x.space().clone();
    let n = f.graph().len();
    let m = x.matrix().filter_map(|r, c, v| {
        (f.word_of(r).letter_counts(n) == f.word_of(c).letter_counts(n)).then_some(v)
    });
    OperatorMatrix::compression(f, m, x.shift().0, x.shift().1)
}

fn c4_expectation() -> Outcome {
    let p = &mixed_problems()[0].1;
    let f = p.fock(4, 100_000).unwrap();
    let n = f.depth();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut idem, mut contr, mut pos, mut gauge, mut balanced) = (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let mut faithful = 0usize;
    let mut drawn = 0usize;
    while drawn < 100 {
        let len = rng.random_range(1..=4);
        let x = expr_matrix(&f, &random_expression(&f, len, &mut rng)).unwrap();
        if x.guarded_matrix().max_abs() <= 1e-12 {
            continue;
        }
        drawn += 1;
        let e = expectation_diag(&x);
        idem = idem.max(expectation_diag(&e).guarded_deviation(&e).unwrap());
        contr = contr.max(e.guarded_matrix().op_norm() - x.guarded_matrix().op_norm());
        let exx = expectation_diag(&x.adjoint().mul(&x).unwrap());
        let idx: Vec<usize> = (0..f.dim()).filter(|&i| exx.guarded_columns()[i]).collect();
        pos = pos.max(-exx.matrix().min_hermitian_eigenvalue(&idx));
        let tr: f64 = x
            .guarded_columns()
            .iter()
            .enumerate()
            .filter(|(_, b)| **b)
            .map(|(i, _)| exx.matrix().get(i, i).re)
            .sum();
        faithful += (tr > 0.0) as usize;
        let avg = gauge_average(&x, 2 * n + 1).unwrap();
        gauge = gauge.max(avg.guarded_deviation(&e).unwrap());
        balanced = balanced.max(avg.guarded_deviation(&balanced_part(&x)).unwrap());
    }
    // a gauge-invariant term that is not diagonal
    let h = hecke_problem(SimplicialGraph::edgeless(3), 2.0);
    let fh = h.fock(4, 100_000).unwrap();
    let t = hecke_vertex(2.0).unwrap().generator;
    let (a, b) = (VertexId(0), VertexId(1));
    let term = ElementaryTerm {
        coeff: ONE,
        creations: vec![(a, t.clone()), (b, t.clone())],
        diagonal: BTreeMap::new(),
        annihilations: vec![(b, t.clone()), (a, t)],
    };
    let x = term_matrix(&fh, &term).unwrap();
    let witness = gauge_average(&x, 9).unwrap().guarded_deviation(&expectation_diag(&x)).unwrap();
    let tol = 1e-10;
    let sound = idem <= tol && contr <= tol && pos <= tol && faithful == 100 && balanced <= 1e-12;
    let pass = sound && gauge.max(witness) <= 1e-12;
    let mut o = outcome(
        pass,
        format!(
            "100 draws on path-3 N=4: idempotent {:.1e}, contraction excess {contr:.1e}, negativity {pos:.1e}, \
             faithful {faithful}/100, average vs letter-count part {balanced:.1e} [{}]; average vs expectation {gauge:.2e} \
             (term ab/ba on edgeless-3 gives {witness:.3})",
            idem.abs(),
            if sound { "ok" } else { "BROKEN" }
        ),
    );
    o.known_red = sound && !pass;
    o
}

fn c5_diagonality() -> Outcome {
    let p = hecke_problem(SimplicialGraph::edgeless(3), 2.0);
    let f = p.fock(6, 100_000).unwrap();
    let terms = enumerate_terms(&f, 4).unwrap();
    let (mut agree, mut vanish, mut bad) = (0, 0, 0);
    for t in &terms {
        match diagonality_agrees(&f, t).unwrap() {
            Some(true) => agree += 1,
            Some(false) => bad += 1,
            None => vanish += 1,
        }
    }
    outcome(
        bad == 0 && agree > 0,
        format!("{} terms of length <= 4 at N=6: {agree} agree, {bad} disagree, {vanish} vanish", terms.len()),
    )
}

fn c6_rewriting() -> Outcome {
    let p = hecke_problem(SimplicialGraph::edgeless(3), 2.0);
    let f = p.fock(10, 100_000).unwrap();
    let rw = Rewriter::new(&f);
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut worst, mut min_guard) = (0.0f64, i64::MAX);
    let mut exprs = Vec::new();
    for _ in 0..200 {
        let len = rng.random_range(1..=8);
        let e = random_expression(&f, len, &mut rng);
        let c = certify(&f, &rw, &e).unwrap();
        worst = worst.max(c.deviation);
        min_guard = min_guard.min(c.guard);
        exprs.push(e);
    }
    let faulty = Rewriter::new(&f).with_fault(true);
    let caught = exprs.iter().map(|e| certify(&f, &faulty, e).unwrap().deviation).fold(0.0, f64::max);
    outcome(
        worst <= 1e-9 && min_guard > 0 && caught > 1e-6,
        format!("200 expressions, N=10: worst {worst:.1e}, smallest guard {min_guard}, seeded fault deviation {caught:.2}"),
    )
}

/// `T_s` on `ℓ²` of the free product of three copies of `ℤ₂`, from its
/// defining formula; words are sequences without repeated neighbours.
fn hecke_oracle(q: f64, depth: usize) -> Vec<Vec<Vec<(Vec<u8>, f64)>>> {
    let p = (q - 1.0) * q.powf(-0.5);
    let mut words: Vec<Vec<u8>> = vec![vec![]];
    let mut layer = vec![vec![]];
    for _ in 0..depth {
        let mut next = Vec::new();
        for w in &layer {
            for s in 0..3u8 {
                if w.last() != Some(&s) {
                    let mut x: Vec<u8> = w.clone();
                    x.push(s);
                    next.push(x);
                }
            }
        }
        words.extend(next.iter().cloned());
        layer = next;
    }
    (0..3u8)
        .map(|s| {
            words
                .iter()
                .map(|w| {
                    if w.first() == Some(&s) {
                        vec![(w[1..].to_vec(), 1.0), (w.clone(), p)]
                    } else {
                        let mut sw = vec![s];
                        sw.extend_from_slice(w);
                        vec![(sw, 1.0)]
                    }
                })
                .collect()
        })
        .collect()
}

fn c7_hecke() -> Outcome {
    let n = 5;
    let g = SimplicialGraph::edgeless(3);
    let mut mismatches = 0usize;
    let mut entries = 0usize;
    for q in [0.25, 1.0, 4.0] {
        let h = hecke_vertex(q).unwrap();
        let f: Arc<TruncatedFock> = build_fock(&g, (0..3).map(|_| h.rep()).collect(), n).unwrap();
        let grp = f.group().clone();
        let index = |w: &[u8]| -> usize {
            let letters: Vec<VertexId> = w.iter().map(|&s| VertexId(s)).collect();
            let nf = grp.reduce(&letters).unwrap();
            assert_eq!(nf.letters(), &letters[..]);
            f.position(&nf, &vec![1; w.len()]).unwrap()
        };
        let oracle = hecke_oracle(q, n - 1);
        let mut words: Vec<Vec<u8>> = vec![vec![]];
        let mut layer = vec![vec![]];
        for _ in 0..n - 1 {
            let mut next = Vec::new();
            for w in &layer {
                for s in 0..3u8 {
                    if w.last() != Some(&s) {
                        let mut x: Vec<u8> = w.clone();
                        x.push(s);
                        next.push(x);
                    }
                }
            }
            words.extend(next.iter().cloned());
            layer = next;
        }
        for s in 0..3u8 {
            let m = lambda_op(&f, VertexId(s), &h.generator).unwrap();
            let dense_cols: Vec<usize> = words.iter().map(|w| index(w)).collect();
            for (k, w) in words.iter().enumerate() {
                let col = dense_cols[k];
                let mut want: BTreeMap<usize, f64> = BTreeMap::new();
                for (x, c) in &oracle[s as usize][k] {
                    *want.entry(index(x)).or_default() += c;
                }
                for row in 0..f.dim() {
                    entries += 1;
                    let got = m.matrix().get(row, col);
                    let expect = C64::new(*want.get(&row).unwrap_or(&0.0), 0.0);
                    if got != expect {
                        mismatches += 1;
                        if mismatches < 3 {
                            eprintln!("q={q} s={s} w={w:?} row {row}: {got} vs {expect}");
                        }
                    }
                }
            }
        }
    }
    outcome(mismatches == 0, format!("q in {{1/4, 1, 4}}, N=5, {entries} entries on columns of length < 5, {mismatches} differ"))
}

fn c8_lattice() -> Outcome {
    let mut bad = Vec::new();
    let mut pairs = 0usize;
    let mut cases: BTreeMap<String, usize> = BTreeMap::new();
    for (name, g) in graphs4() {
        let grp = CoxeterGroup::new(g.clone());
        let small = grp.ball(2).unwrap();
        let mats: BTreeMap<NormalForm, _> =
            grp.ball(6).unwrap().into_iter().filter(|w| w.len() <= 4).map(|w| (w.clone(), lattice_matrix(&grp, &w, 6).unwrap())).collect();
        for u in &small {
            for w in &small {
                pairs += 1;
                let r = lattice_product(&grp, u, w, 6).unwrap();
                let prod = mats[u].matmul(&mats[w]);
                let target = match grp.join(u, w) {
                    Some(j) => mats[&j].clone(),
                    None => gplab::linalg::SparseMatrix::zeros(prod.nrows(), prod.ncols()),
                };
                if r.max_deviation != 0.0 || r.inconclusive || prod.sub(&target).max_abs() != 0.0 {
                    bad.push(format!("{name}: {} {}", r.u, r.w));
                }
            }
        }
        // trichotomy: λ_v P_w λ_v* on ℓ²(W) sends δ_x to [w ≤ vx] δ_x
        let outer = grp.ball(7).unwrap();
        let below = |a: &NormalForm, x: &NormalForm| grp.length_of_product(&grp.inverse(a), x) + a.len() == x.len();
        for w in grp.ball(5).unwrap() {
            for v in g.vertices() {
                let case = action_case(&grp, v, &w);
                *cases.entry(format!("{case:?}")).or_default() += 1;
                let sym = act_on_q(&grp, v, &w);
                for x in outer.iter().filter(|x| x.len() <= 6) {
                    let lhs = below(&w, &grp.left_mul_gen(v, x)) as i32;
                    let rhs: i32 = sym.0.iter().map(|(u, c)| c * below(u, x) as i32).sum();
                    if lhs != rhs {
                        bad.push(format!("{name}: action v={v:?} w={w:?} x={x:?}"));
                    }
                }
                let expected = match case {
                    ActionCase::NotCentralizing => sym.0.len() == 1 && sym.0.contains_key(&grp.left_mul_gen(v, &w)),
                    ActionCase::CentralizingAbove => sym.0.len() == 2,
                    ActionCase::CentralizingBelow => sym.0.len() == 1 && sym.0.contains_key(&w),
                };
                if !expected {
                    bad.push(format!("{name}: shape of case {case:?}"));
                }
            }
        }
    }
    let all_cases = cases.len() == 3;
    outcome(
        bad.is_empty() && all_cases,
        format!(
            "{pairs} pairs exact at depth 6; action cases {cases:?}; {} failures {}",
            bad.len(),
            bad.iter().take(3).cloned().collect::<Vec<_>>().join("; ")
        ),
    )
}

fn c9_tensor() -> Outcome {
    let k2 = problem(SimplicialGraph::complete(2), vec![VertexData::matrix_trace(2).unwrap(), VertexData::hecke(2.0).unwrap()]);
    let star = problem(
        SimplicialGraph::from_names(&["a", "b", "c"], &[("a", "b"), ("a", "c")]).unwrap(),
        vec![m2_weighted(0.6), VertexData::hecke(2.0).unwrap(), VertexData::commutative(&[0.3, 0.7]).unwrap()],
    );
    let mut notes = Vec::new();
    let mut pass = true;
    for (name, p) in [("K2", k2), ("K1+edgeless-2", star)] {
        let f = p.fock(4, 100_000).unwrap();
        let factors = p.graph.join_decomposition();
        let r = tensor_split_check(&f, &factors[0].embedding).unwrap();
        pass &= factors.len() == 2 && r.bijective && r.generators_checked > 0 && r.max_deviation <= 1e-12;
        notes.push(format!("{name}: dim {} = split {:?}, deviation {:.1e}", r.dim, r.dims, r.max_deviation));
    }
    outcome(pass, notes.join("; "))
}

fn c10_classification() -> Outcome {
    let cases = [
        ("edgeless-3 q=1", SimplicialGraph::edgeless(3), 1.0, Region::OutsideClosure, 0.5, 1e-9),
        ("D-infinity q=1", SimplicialGraph::edgeless(2), 1.0, Region::Boundary, 1.0, 1e-9),
        ("edgeless-3 q=0.1", SimplicialGraph::edgeless(3), 0.1, Region::InsideRegion, 5.0, 1e-8),
    ];
    let mut pass = true;
    let mut notes = Vec::new();
    for (name, g, q, region, t, tol) in cases {
        let v = classify(&g, &vec![q; g.len()], 1e-8).unwrap();
        let got = v.critical_t.unwrap_or(f64::INFINITY);
        pass &= v.region == region && (got - t).abs() <= tol;
        notes.push(format!("{name}: {:?} t*={got}", v.region));
    }
    outcome(pass, notes.join("; "))
}

fn load(name: &str) -> (ProblemConfig, Problem) {
    let cfg = ProblemConfig::load(&fixture(name)).unwrap();
    let p = cfg.build().unwrap();
    (cfg, p)
}

fn c11_verdicts() -> Outcome {
    let mut pass = true;
    let mut notes = Vec::new();
    let (cfg, p) = load("m2_trace_edgeless3");
    let o = cfg.analysis_options();
    let s = simplicity_report(&p, &o).unwrap();
    let t = trace_report(&p, &o).unwrap();
    let ok = s.result == VerdictResult::Established
        && s.citations.iter().any(|c| c == cite::SIMPLICITY_UNITARY)
        && t.result == VerdictResult::Established;
    pass &= ok;
    notes.push(format!("M2 trace: simplicity {:?}, trace {:?}", s.result, t.result));

    let (cfg, p) = load("hecke_q1_edgeless3");
    let s = simplicity_report(&p, &cfg.analysis_options()).unwrap();
    pass &= s.result == VerdictResult::Established && s.citations.iter().any(|c| c == cite::SIMPLICITY_FINITE_DIM);
    notes.push(format!("Hecke q=1: {:?}", s.result));

    let (cfg, p) = load("hecke_inside_edgeless3");
    let region = classify(&p.graph, &vec![0.1; 3], 1e-8).unwrap().region;
    let s = simplicity_report(&p, &cfg.analysis_options()).unwrap();
    pass &= region == Region::InsideRegion && s.result == VerdictResult::HypothesesFail;
    notes.push(format!("Hecke q=0.1 ({region:?}): {:?}", s.result));

    // a cone over edgeless-3 splits into two join factors
    let g = SimplicialGraph::from_names(&["a", "b", "c", "d"], &[("a", "d"), ("b", "d"), ("c", "d")]).unwrap();
    let mut vs: Vec<VertexData> = (0..3).map(|_| m2_trace_with_witness()).collect();
    vs.push(VertexData::matrix_trace(2).unwrap());
    let p = problem(g, vs);
    let o = AnalysisOptions::default();
    let s = simplicity_report(&p, &o).unwrap();
    let t = trace_report(&p, &o).unwrap();
    let factors: BTreeSet<&str> =
        s.evidence.iter().filter_map(|e| e.name.split('.').next()).filter(|n| n.starts_with("factor")).collect();
    pass &= s.result == VerdictResult::Established && t.result == VerdictResult::Established && factors.len() == 2;
    notes.push(format!("cone: simplicity {:?} from {} factors, trace {:?}", s.result, factors.len(), t.result));
    pass &= nuclearity_exactness_report(&p).unwrap().result == VerdictResult::Established;

    let start = Instant::now();
    for name in ["m2_trace_edgeless3", "hecke_q1_edgeless3", "hecke_inside_edgeless3"] {
        let out = std::env::temp_dir().join(format!("acceptance_{name}_{}.json", std::process::id()));
        let status = std::process::Command::new(env!("CARGO_BIN_EXE_gplab"))
            .arg("report-all")
            .arg("--config")
            .arg(fixture(name))
            .arg("--out")
            .arg(&out)
            .output()
            .unwrap();
        pass &= status.status.code() == Some(0) && out.exists();
        let _ = std::fs::remove_file(out);
    }
    let secs = start.elapsed().as_secs_f64();
    pass &= secs < 300.0;
    notes.push(format!("report-all on three fixtures {secs:.1}s"));
    outcome(pass, notes.join("; "))
}

fn c12_traciality() -> Outcome {
    let (_, p) = load("m2_trace_edgeless3");
    let f = p.fock(4, 100_000).unwrap();
    let tracial = traciality_probe(&f, 100, 12).unwrap();
    let vs = vec![VertexData::matrix_trace(2).unwrap(), VertexData::matrix_trace(2).unwrap(), m2_weighted(0.8)];
    let q = problem(SimplicialGraph::edgeless(3), vs);
    let g = q.fock(4, 100_000).unwrap();
    let skew = traciality_probe(&g, 100, 12).unwrap();
    outcome(
        tracial.max_defect <= 1e-10 && skew.max_defect > 1e-3,
        format!("tracial states {:.1e}, one non-tracial vertex {:.3}", tracial.max_defect, skew.max_defect),
    )
}

fn main() {
    let criteria: Vec<(u32, &str, fn() -> Outcome)> = vec![
        (1, "growth series against breadth-first sphere counts", c1_growth),
        (2, "Coxeter engine axioms, joins and shuffle permutations", c2_coxeter),
        (3, "creation, diagonal and annihilation identities", c3_main_identities),
        (4, "diagonal conditional expectation and gauge average", c4_expectation),
        (5, "diagonality against signature", c5_diagonality),
        (6, "rewriting into elementary terms", c6_rewriting),
        (7, "Hecke operators on the Fock basis", c7_hecke),
        (8, "projection lattice and translation action", c8_lattice),
        (9, "tensor decomposition over joins", c9_tensor),
        (10, "convergence classification", c10_classification),
        (11, "verdict pipeline and report-all", c11_verdicts),
        (12, "traciality probe", c12_traciality),
    ];
    let mut unexpected = Vec::new();
    for (id, title, run) in criteria {
        let start = Instant::now();
        let o = run();
        let secs = start.elapsed().as_secs_f64();
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!("{tag} [{id:>2}] {title} ({secs:.1}s): {}", o.detail);
        if !o.pass {
            match KNOWN_RED.iter().find(|(k, _)| *k == id) {
                Some((_, why)) if o.known_red => println!("       known red: {why}"),
                _ => unexpected.push(id),
            }
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}
