//! The identity suite: every operator identity of the Fock model checked on
//! random data at a fixed truncation, with recorded seeds.

use super::problem::Problem;
use super::trace::traciality_probe;
use crate::coxeter::NormalForm;
use crate::error::{Error, Result};
use crate::fock::rewrite::{certify, random_expression, term_matrix, Rewriter};
use crate::fock::{
    creation, creation_adjoint, diagonal, expectation_diag, expectation_subgraph, gauge_average, gauge_conjugate,
    lambda_op, p_lengths, q_projection, q_projection_lattice, signature, tail_profile, tensor_split_check,
    ElementaryTerm, OperatorMatrix, TruncatedFock,
};
use crate::graph::VertexId;
use crate::lattice::{act_on_q, identification_check};
use crate::linalg::{C64, ONE};
use crate::vertex::{centered, AlgebraElement};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::sync::Arc;

#[derive(Debug, Clone, Serialize)]
pub struct SuiteOptions {
    pub depth: usize,
    pub seed: u64,
    /// Random draws per case of each identity.
    pub draws: usize,
    pub tolerance: f64,
    /// Tolerance for the properties of the diagonal expectation.
    pub expectation_tolerance: f64,
    pub expressions: usize,
    pub max_expression_len: usize,
    pub term_samples: usize,
    pub fock_cap: usize,
    pub term_cap: usize,
    /// Corrupts one rewrite rule; the rewrite check must then fail.
    pub fault: bool,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            depth: 4,
            seed: 0,
            draws: 50,
            tolerance: 1e-9,
            expectation_tolerance: 1e-10,
            expressions: 200,
            max_expression_len: 8,
            term_samples: 60,
            fock_cap: crate::fock::space::DEFAULT_DIM_CAP,
            term_cap: crate::fock::rewrite::DEFAULT_TERM_CAP,
            fault: false,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub samples: usize,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub skipped: Option<String>,
    pub seed: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub depth: usize,
    pub dim: usize,
    pub seed: u64,
    pub checks: Vec<CheckRecord>,
    /// Every check that ran passed.
    pub passed: bool,
}

impl SuiteReport {
    pub fn get(&self, name: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> Vec<&CheckRecord> {
        self.checks.iter().filter(|c| !c.passed && c.skipped.is_none()).collect()
    }
}

/// Accumulates the worst deviation over samples.
struct Acc {
    samples: usize,
    worst: f64,
    skipped: usize,
}

impl Acc {
    fn new() -> Self {
        Acc { samples: 0, worst: 0.0, skipped: 0 }
    }

    fn add(&mut self, d: f64) {
        self.samples += 1;
        if d.is_nan() {
            self.worst = f64::INFINITY;
        } else {
            self.worst = self.worst.max(d);
        }
    }
}

struct Ctx<'a> {
    f: Arc<TruncatedFock>,
    opts: &'a SuiteOptions,
    checks: Vec<CheckRecord>,
    index: u64,
}

impl Ctx<'_> {
    fn rng(&mut self) -> (ChaCha8Rng, u64) {
        self.index += 1;
        let s = self.opts.seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(self.index);
        (ChaCha8Rng::seed_from_u64(s), s)
    }

    fn record(&mut self, name: &str, acc: Acc, tol: f64, seed: u64) {
        let skipped = if acc.samples == 0 {
            Some(if acc.skipped > 0 {
                format!("all {} samples exceeded a resource cap", acc.skipped)
            } else {
                "no applicable case in this graph".to_string()
            })
        } else {
            None
        };
        self.checks.push(CheckRecord {
            name: name.into(),
            samples: acc.samples,
            max_deviation: acc.worst,
            tolerance: tol,
            passed: skipped.is_none() && acc.worst <= tol,
            skipped,
            seed,
        });
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PairCase {
    Same,
    Adjacent,
    NonAdjacent,
}

pub fn pairs(f: &TruncatedFock, case: PairCase) -> Vec<(VertexId, VertexId)> {
    let g = f.graph();
    let mut out = Vec::new();
    for u in g.vertices() {
        for v in g.vertices() {
            let c = if u == v {
                PairCase::Same
            } else if g.adjacent(u, v) {
                PairCase::Adjacent
            } else {
                PairCase::NonAdjacent
            };
            if c == case {
                out.push((u, v));
            }
        }
    }
    out
}

fn rand_elem(f: &TruncatedFock, v: VertexId, rng: &mut ChaCha8Rng) -> AlgebraElement {
    f.rep(v).algebra().random_element(rng)
}

fn rand_centered(f: &TruncatedFock, v: VertexId, rng: &mut ChaCha8Rng) -> AlgebraElement {
    let r = f.rep(v);
    centered(r.algebra(), r.state(), &r.algebra().random_element(rng))
}

fn dev(a: &OperatorMatrix, b: &OperatorMatrix) -> Result<f64> {
    a.guarded_deviation(b)
}

fn zero(f: &Arc<TruncatedFock>) -> OperatorMatrix {
    OperatorMatrix::zero(f.clone())
}

/// Runs a per-pair identity `draws` times on vertex pairs drawn from one case.
fn pair_check(
    ctx: &mut Ctx,
    name: &str,
    case: PairCase,
    body: &dyn Fn(&Arc<TruncatedFock>, VertexId, VertexId, &mut ChaCha8Rng) -> Result<f64>,
) -> Result<()> {
    let (mut rng, seed) = ctx.rng();
    let f = ctx.f.clone();
    let ps = pairs(&f, case);
    let mut acc = Acc::new();
    if !ps.is_empty() {
        for _ in 0..ctx.opts.draws {
            let (u, v) = ps[rng.random_range(0..ps.len())];
            acc.add(body(&f, u, v, &mut rng)?);
        }
    }
    let tol = ctx.opts.tolerance;
    ctx.record(name, acc, tol, seed);
    Ok(())
}

fn main_identities(ctx: &mut Ctx) -> Result<()> {
    use PairCase::*;
    // creation operators
    pair_check(ctx, "creation_product_same_vertex", Same, &|f, u, v, r| {
        let (a, b) = (rand_elem(f, u, r), rand_elem(f, v, r));
        dev(&creation(f, u, &a)?.mul(&creation(f, v, &b)?)?, &zero(f))
    })?;
    pair_check(ctx, "creation_commute_adjacent", Adjacent, &|f, u, v, r| {
        let (a, b) = (rand_elem(f, u, r), rand_elem(f, v, r));
        let (x, y) = (creation(f, u, &a)?, creation(f, v, &b)?);
        dev(&x.mul(&y)?, &y.mul(&x)?)
    })?;
    // diagonal against creation
    pair_check(ctx, "creation_after_diagonal_same_vertex", Same, &|f, u, v, r| {
        let (a, b) = (rand_elem(f, u, r), rand_elem(f, v, r));
        dev(&creation(f, v, &b)?.mul(&diagonal(f, u, &a)?)?, &zero(f))
    })?;
    pair_check(ctx, "diagonal_then_creation_same_vertex", Same, &|f, u, v, r| {
        let (a, b) = (rand_elem(f, u, r), rand_elem(f, v, r));
        let st = f.rep(v).state();
        let c = a.mul(&b).add(&a.scale(-st.eval(&b)));
        dev(&diagonal(f, u, &a)?.mul(&creation(f, v, &b)?)?, &creation(f, u, &c)?)
    })?;
    pair_check(ctx, "diagonal_then_creation_non_adjacent", NonAdjacent, &|f, u, v, r| {
        let (a, b) = (rand_elem(f, u, r), rand_elem(f, v, r));
        dev(&diagonal(f, u, &a)?.mul(&creation(f, v, &b)?)?, &zero(f))
    })?;
    pair_check(ctx, "diagonal_then_creation_adjacent", Adjacent, &|f, u, v, r| {
        let (a, b) = (rand_elem(f, u, r), rand_elem(f, v, r));
        let (d, c) = (diagonal(f, u, &a)?, creation(f, v, &b)?);
        dev(&d.mul(&c)?, &c.mul(&d)?)
    })?;
    // creation against annihilation
    pair_check(ctx, "creation_annihilation_same_vertex", Same, &|f, u, v, r| {
        let (a, b) = (rand_elem(f, u, r), rand_elem(f, v, r));
        let lhs = creation(f, u, &a)?.mul(&creation_adjoint(f, v, &b)?)?;
        let rhs = diagonal(f, u, &a.mul(&b.adjoint()))?
            .sub(&diagonal(f, u, &a)?.mul(&diagonal(f, u, &b.adjoint())?)?)?;
        dev(&lhs, &rhs)
    })?;
    pair_check(ctx, "annihilation_creation_same_vertex", Same, &|f, u, v, r| {
        let (a, b) = (rand_elem(f, u, r), rand_elem(f, v, r));
        let st = f.rep(u).state();
        let c = st.eval(&a.adjoint().mul(&b)) - st.eval(&a).conj() * st.eval(&b);
        let q = q_projection(f, &f.group().generator(u))?;
        let qperp = OperatorMatrix::identity(f.clone()).sub(&q)?;
        dev(&creation_adjoint(f, u, &a)?.mul(&creation(f, v, &b)?)?, &qperp.scale(c))
    })?;
    pair_check(ctx, "annihilation_creation_non_adjacent", NonAdjacent, &|f, u, v, r| {
        let (a, b) = (rand_elem(f, u, r), rand_elem(f, v, r));
        dev(&creation_adjoint(f, u, &a)?.mul(&creation(f, v, &b)?)?, &zero(f))
    })?;
    pair_check(ctx, "annihilation_creation_adjacent", Adjacent, &|f, u, v, r| {
        let (a, b) = (rand_elem(f, u, r), rand_elem(f, v, r));
        let (x, y) = (creation_adjoint(f, u, &a)?, creation(f, v, &b)?);
        dev(&x.mul(&y)?, &y.mul(&x)?)
    })?;
    // diagonal operators
    pair_check(ctx, "diagonal_product_non_adjacent", NonAdjacent, &|f, u, v, r| {
        let (a, b) = (rand_elem(f, u, r), rand_elem(f, v, r));
        dev(&diagonal(f, u, &a)?.mul(&diagonal(f, v, &b)?)?, &zero(f))
    })?;
    pair_check(ctx, "diagonal_commute_adjacent", Adjacent, &|f, u, v, r| {
        let (a, b) = (rand_elem(f, u, r), rand_elem(f, v, r));
        let (x, y) = (diagonal(f, u, &a)?, diagonal(f, v, &b)?);
        dev(&x.mul(&y)?, &y.mul(&x)?)
    })?;
    // Q_w against creation and annihilation, for |w| <= 2
    let (mut rng, seed) = ctx.rng();
    let f = ctx.f.clone();
    let group = f.group().clone();
    let ws = group.ball(2.min(f.depth()))?;
    let (mut acc_c, mut acc_a) = (Acc::new(), Acc::new());
    for _ in 0..ctx.opts.draws {
        let w = &ws[rng.random_range(0..ws.len())];
        let v = VertexId(rng.random_range(0..f.graph().len()) as u8);
        let a = rand_centered(&f, v, &mut rng);
        let qw = q_projection_lattice(&f, w)?;
        let vq = act_on_q(&group, v, w).to_matrix(&f)?;
        let c = creation(&f, v, &a)?;
        acc_c.add(dev(&qw.mul(&c)?, &c.mul(&vq)?)?);
        let ca = creation_adjoint(&f, v, &a)?;
        acc_a.add(dev(&qw.mul(&ca)?, &ca.mul(&vq)?)?);
    }
    let tol = ctx.opts.tolerance;
    ctx.record("q_projection_creation_intertwining", acc_c, tol, seed);
    ctx.record("q_projection_annihilation_intertwining", acc_a, tol, seed);
    Ok(())
}

/// Elementary terms with nonzero coefficient from rewriting random products.
pub fn sample_terms(f: &Arc<TruncatedFock>, rw: &Rewriter, count: usize, rng: &mut ChaCha8Rng) -> Vec<ElementaryTerm> {
    let mut out = Vec::new();
    let mut attempts = 0;
    while out.len() < count && attempts < 20 * count.max(1) {
        attempts += 1;
        let len = rng.random_range(1..=4);
        let expr = random_expression(f, len, rng);
        if let Ok(ts) = rw.rewrite(&expr) {
            for mut t in ts {
                if t.coeff.norm() > 1e-12 && out.len() < count {
                    t.coeff = ONE;
                    out.push(t);
                }
            }
        }
    }
    out
}

fn letter_counts(n: usize, word: &[VertexId]) -> Vec<i64> {
    let mut c = vec![0; n];
    for s in word {
        c[s.index()] += 1;
    }
    c
}

fn is_block_diagonal(x: &OperatorMatrix, tol: f64) -> bool {
    let f = x.space();
    x.guarded_matrix().triplets().all(|(r, c, v)| v.norm() <= tol || f.word_pos_of(r) == f.word_pos_of(c))
}

fn gauge_and_diagonality(ctx: &mut Ctx, rw: &Rewriter) -> Result<()> {
    let (mut rng, seed) = ctx.rng();
    let f = ctx.f.clone();
    let n = f.graph().len();
    let terms = sample_terms(&f, rw, ctx.opts.term_samples, &mut rng);
    let m = 2 * f.depth() + 1;
    let (mut lemma, mut avg, mut diag) = (Acc::new(), Acc::new(), Acc::new());
    for t in &terms {
        let x = term_matrix(&f, t)?;
        if x.guarded_matrix().max_abs() <= 1e-12 {
            continue;
        }
        let z: Vec<C64> = (0..n).map(|_| C64::from_polar(1.0, 2.0 * PI * rng.random::<f64>())).collect();
        let ch: C64 = t.creation_word().iter().map(|s| z[s.index()]).product::<C64>()
            / t.annihilation_word().iter().map(|s| z[s.index()]).product::<C64>();
        lemma.add(dev(&gauge_conjugate(&x, &z)?, &x.scale(ch))?);
        let balanced = letter_counts(n, &t.creation_word()) == letter_counts(n, &t.annihilation_word());
        let want = if balanced { x.clone() } else { zero(&f) };
        avg.add(dev(&gauge_average(&x, m)?, &want)?);
        let sig_e = signature(f.graph(), t)?.is_identity();
        diag.add(if is_block_diagonal(&x, 1e-12) == sig_e { 0.0 } else { 1.0 });
    }
    let tol = ctx.opts.tolerance;
    ctx.record("gauge_conjugation_scales_elementary_terms", lemma, tol, seed);
    ctx.record("gauge_average_keeps_balanced_terms", avg, tol, seed);
    ctx.record("diagonal_iff_trivial_signature", diag, 0.0, seed);
    Ok(())
}

/// Smallest eigenvalue of the Hermitian part of the guarded principal block,
/// reported as a nonnegative defect.
fn psd_defect(x: &OperatorMatrix) -> f64 {
    let idx: Vec<usize> = x.guarded_columns().iter().enumerate().filter(|(_, b)| **b).map(|(i, _)| i).collect();
    (-x.matrix().min_hermitian_eigenvalue(&idx)).max(0.0)
}

fn expectation_checks(ctx: &mut Ctx, rw: &Rewriter) -> Result<()> {
    let (mut rng, seed) = ctx.rng();
    let f = ctx.f.clone();
    let (mut idem, mut state, mut pos, mut contr, mut faith) = (Acc::new(), Acc::new(), Acc::new(), Acc::new(), Acc::new());
    let _ = rw;
    for _ in 0..ctx.opts.draws {
        let len = rng.random_range(1..=4);
        let x = crate::fock::rewrite::expr_matrix(&f, &random_expression(&f, len, &mut rng))?;
        let e = expectation_diag(&x);
        idem.add(dev(&expectation_diag(&e), &e)?);
        state.add((e.vacuum_eval() - x.vacuum_eval()).norm());
        let xx = x.adjoint().mul(&x)?;
        let exx = expectation_diag(&xx);
        pos.add(psd_defect(&exx));
        let xg = x.guarded_matrix();
        let eg = expectation_diag(&x).guarded_matrix();
        contr.add((eg.op_norm() - xg.op_norm()).max(0.0));
        // 𝔼(x*x) = 0 would force x = 0; the diagonal of x*x is exact on the
        // columns where x is
        if xg.max_abs() > 1e-12 {
            let tr: f64 = x.guarded_columns().iter().enumerate().filter(|(_, b)| **b).map(|(i, _)| exx.matrix().get(i, i).re).sum();
            faith.add(if tr > 0.0 { 0.0 } else { 1.0 });
        }
    }
    let tol = ctx.opts.expectation_tolerance;
    ctx.record("expectation_idempotent", idem, tol, seed);
    ctx.record("expectation_preserves_vacuum_state", state, tol, seed);
    ctx.record("expectation_positive", pos, tol, seed);
    ctx.record("expectation_contractive", contr, tol, seed);
    ctx.record("expectation_faithful", faith, 0.0, seed);
    Ok(())
}

fn conjugation_lemma(ctx: &mut Ctx) -> Result<()> {
    let (mut rng, seed) = ctx.rng();
    let f = ctx.f.clone();
    let group = f.group().clone();
    let ws: Vec<NormalForm> = group.ball(2.min(f.depth()))?.into_iter().filter(|w| !w.is_identity()).collect();
    let (mut first, mut second) = (Acc::new(), Acc::new());
    for _ in 0..ctx.opts.draws {
        let v = VertexId(rng.random_range(0..f.graph().len()) as u8);
        let a = rand_centered(&f, v, &mut rng);
        let st = f.rep(v).state();
        let c = st.eval(&a.mul(&a.adjoint()));
        let x = lambda_op(&f, v, &a)?;
        let xs = x.adjoint();
        let qv = q_projection(&f, &group.generator(v))?;
        let qperp = OperatorMatrix::identity(f.clone()).sub(&qv)?;
        let lhs = xs.mul(&qperp)?.mul(&x)?;
        first.add(psd_defect(&qv.scale(c).sub(&lhs)?));
        let cands: Vec<&NormalForm> = ws
            .iter()
            .filter(|w| !group.commutes_with(w, v) && group.first_letters_mask(w) & v.bit() == 0)
            .collect();
        if let Some(w) = cands.get(rng.random_range(0..cands.len().max(1))) {
            let vw = group.left_mul_gen(v, w);
            let lhs = xs.mul(&q_projection(&f, w)?)?.mul(&x)?;
            second.add(psd_defect(&q_projection(&f, &vw)?.scale(c).sub(&lhs)?));
        }
    }
    let tol = ctx.opts.tolerance;
    ctx.record("conjugation_bound_complement", first, tol, seed);
    ctx.record("conjugation_bound_non_centralizing", second, tol, seed);
    Ok(())
}

fn tail_checks(ctx: &mut Ctx) -> Result<()> {
    let (mut rng, seed) = ctx.rng();
    let f = ctx.f.clone();
    let (mut finite, mut nondecay) = (Acc::new(), Acc::new());
    let cut = p_lengths(&f, 0, 1);
    for _ in 0..ctx.opts.draws.min(20) {
        let v = VertexId(rng.random_range(0..f.graph().len()) as u8);
        let a = rand_centered(&f, v, &mut rng);
        if a.norm() < 1e-9 {
            continue;
        }
        let x = lambda_op(&f, v, &a)?;
        let fr = x.mul(&cut)?;
        let prof = tail_profile(&fr)?;
        let g = fr.guard().max(0) as usize;
        finite.add((1..g.min(prof.len())).map(|k| prof[k]).fold(0.0, f64::max));
        let prof = tail_profile(&x)?;
        let g = (x.guard().max(0) as usize).min(prof.len());
        // a centered vertex element keeps norm on arbitrarily long words
        nondecay.add(if g == 0 || prof[g - 1] > 1e-12 { 0.0 } else { 1.0 });
    }
    let tol = ctx.opts.tolerance;
    ctx.record("finite_rank_tail_vanishes", finite, tol, seed);
    ctx.record("vertex_element_tail_does_not_decay", nondecay, 0.0, seed);
    Ok(())
}

fn subgraph_expectation(ctx: &mut Ctx, rw: &Rewriter) -> Result<()> {
    let (mut rng, seed) = ctx.rng();
    let f = ctx.f.clone();
    let g = f.graph();
    let mut acc = Acc::new();
    if g.len() >= 2 {
        let terms = sample_terms(&f, rw, ctx.opts.term_samples, &mut rng);
        for drop in g.vertices() {
            let sub: Vec<VertexId> = g.vertices().filter(|v| *v != drop).collect();
            for t in &terms {
                let x = term_matrix(&f, t)?;
                if x.guarded_matrix().max_abs() <= 1e-12 {
                    continue;
                }
                let inside = t.creation_word().iter().chain(t.annihilation_word().iter()).chain(t.diagonal.keys()).all(|v| *v != drop);
                let e = expectation_subgraph(&x, &sub)?;
                acc.add(if inside { dev(&e, &x)? } else { e.guarded_matrix().max_abs() });
            }
        }
    }
    let tol = ctx.opts.tolerance;
    ctx.record("subgraph_expectation_support", acc, tol, seed);
    Ok(())
}

fn rewrite_certificates(ctx: &mut Ctx) -> Result<()> {
    let (mut rng, seed) = ctx.rng();
    let f = ctx.f.clone();
    let rw = Rewriter::new(&f).with_term_cap(ctx.opts.term_cap).with_fault(ctx.opts.fault);
    let mut acc = Acc::new();
    for _ in 0..ctx.opts.expressions {
        let len = rng.random_range(1..=ctx.opts.max_expression_len.max(1));
        let expr = random_expression(&f, len, &mut rng);
        match certify(&f, &rw, &expr) {
            Ok(c) => acc.add(c.deviation),
            Err(Error::Resource(_)) => acc.skipped += 1,
            Err(e) => return Err(e),
        }
    }
    let tol = ctx.opts.tolerance;
    ctx.record("rewrite_matches_matrix", acc, tol, seed);
    Ok(())
}

fn structural_checks(ctx: &mut Ctx, p: &Problem) -> Result<()> {
    let f = ctx.f.clone();
    let factors = f.graph().join_decomposition();
    let mut acc = Acc::new();
    if factors.len() >= 2 {
        let r = tensor_split_check(&f, &factors[0].embedding)?;
        acc.add(if r.bijective { r.max_deviation } else { f64::INFINITY });
    }
    ctx.record("tensor_split", acc, 1e-12, 0);

    let mut acc = Acc::new();
    match identification_check(&f) {
        Ok(r) => acc.add(r.mismatches as f64),
        Err(Error::InvalidInput(_)) => {}
        Err(e) => return Err(e),
    }
    ctx.record("lattice_identification", acc, 0.0, 0);

    let mut acc = Acc::new();
    let (_, seed) = ctx.rng();
    if p.all_tracial() {
        let r = traciality_probe(&f, 100, seed)?;
        acc.add(r.max_defect);
    }
    ctx.record("vacuum_state_tracial", acc, 1e-10, seed);
    Ok(())
}

/// Runs every registered check. A Fock space over the cap is an error; other
/// caps skip the affected samples and are reported.
pub fn identity_suite(p: &Problem, opts: &SuiteOptions) -> Result<SuiteReport> {
    let f = p.fock(opts.depth, opts.fock_cap)?;
    let rw = Rewriter::new(&f).with_term_cap(opts.term_cap);
    let mut ctx = Ctx { f: f.clone(), opts, checks: Vec::new(), index: 0 };
    main_identities(&mut ctx)?;
    gauge_and_diagonality(&mut ctx, &rw)?;
    expectation_checks(&mut ctx, &rw)?;
    conjugation_lemma(&mut ctx)?;
    tail_checks(&mut ctx)?;
    subgraph_expectation(&mut ctx, &rw)?;
    rewrite_certificates(&mut ctx)?;
    structural_checks(&mut ctx, p)?;
    let passed = ctx.checks.iter().all(|c| c.passed || c.skipped.is_some());
    Ok(SuiteReport { depth: opts.depth, dim: f.dim(), seed: opts.seed, checks: ctx.checks, passed })
}

/// Bases of `A_v°` (orthonormalized centered matrix units) and of `A_v`.
fn centered_basis(f: &TruncatedFock, v: VertexId) -> Vec<AlgebraElement> {
    let r = f.rep(v);
    let mut out: Vec<AlgebraElement> = Vec::new();
    let mut flat: Vec<Vec<C64>> = Vec::new();
    for b in r.algebra().basis() {
        let c = centered(r.algebra(), r.state(), &b);
        let mut x: Vec<C64> = c.blocks.iter().flat_map(|m| m.iter().copied().collect::<Vec<_>>()).collect();
        for y in &flat {
            let ip: C64 = y.iter().zip(&x).map(|(a, b)| a.conj() * b).sum();
            for (xi, yi) in x.iter_mut().zip(y) {
                *xi -= ip * yi;
            }
        }
        let n = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if n > 1e-9 {
            flat.push(x.iter().map(|z| z / n).collect());
            out.push(c);
        }
    }
    out
}

/// All elementary terms of total length at most `max_len` whose creation and
/// annihilation words are normal forms, with elements from the bases above
/// (centered for the legs, matrix units for the diagonal part).
pub fn enumerate_terms(f: &TruncatedFock, max_len: usize) -> Result<Vec<ElementaryTerm>> {
    let group = f.group();
    let g = f.graph();
    let ball = group.ball(max_len)?;
    let cb: Vec<Vec<AlgebraElement>> = g.vertices().map(|v| centered_basis(f, v)).collect();
    let db: Vec<Vec<AlgebraElement>> = g.vertices().map(|v| f.rep(v).algebra().basis()).collect();
    let legs = |w: &NormalForm| -> Vec<Vec<(VertexId, AlgebraElement)>> {
        let mut acc: Vec<Vec<(VertexId, AlgebraElement)>> = vec![vec![]];
        for s in w.letters() {
            let mut next = Vec::new();
            for prefix in &acc {
                for a in &cb[s.index()] {
                    let mut p = prefix.clone();
                    p.push((*s, a.clone()));
                    next.push(p);
                }
            }
            acc = next;
        }
        acc
    };
    // diagonal parts by total length
    let mut diags: Vec<Vec<BTreeMap<VertexId, Vec<AlgebraElement>>>> = vec![vec![BTreeMap::new()]];
    for d in 1..=max_len {
        let mut level = Vec::new();
        for clique in g.cliques().into_iter().filter(|c| !c.is_empty() && c.len() <= d) {
            // distribute d letters over the clique, at least one each
            for counts in compositions(d, clique.len()) {
                let mut maps: Vec<BTreeMap<VertexId, Vec<AlgebraElement>>> = vec![BTreeMap::new()];
                for (v, &k) in clique.iter().zip(&counts) {
                    let lists = sequences(&db[v.index()], k);
                    let mut next = Vec::new();
                    for m in &maps {
                        for l in &lists {
                            let mut m2 = m.clone();
                            m2.insert(*v, l.clone());
                            next.push(m2);
                        }
                    }
                    maps = next;
                }
                level.extend(maps);
            }
        }
        diags.push(level);
    }
    let mut out = Vec::new();
    for u in &ball {
        for w in &ball {
            if u.len() + w.len() > max_len {
                continue;
            }
            let lu = legs(u);
            let lw = legs(w);
            for d in 0..=(max_len - u.len() - w.len()) {
                for cu in &lu {
                    for cw in &lw {
                        for dm in &diags[d] {
                            out.push(ElementaryTerm {
                                coeff: ONE,
                                creations: cu.clone(),
                                diagonal: dm.clone(),
                                annihilations: cw.clone(),
                            });
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for first in 1..=(total + 1 - parts) {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn sequences(basis: &[AlgebraElement], k: usize) -> Vec<Vec<AlgebraElement>> {
    let mut acc: Vec<Vec<AlgebraElement>> = vec![vec![]];
    for _ in 0..k {
        let mut next = Vec::new();
        for p in &acc {
            for b in basis {
                let mut q = p.clone();
                q.push(b.clone());
                next.push(q);
            }
        }
        acc = next;
    }
    acc
}

/// Block-diagonality of a term's matrix against the triviality of its
/// signature; `None` when the term vanishes on the guarded subspace.
pub fn diagonality_agrees(f: &Arc<TruncatedFock>, t: &ElementaryTerm) -> Result<Option<bool>> {
    let x = term_matrix(f, t)?;
    if x.guarded_matrix().max_abs() <= 1e-12 {
        return Ok(None);
    }
    Ok(Some(is_block_diagonal(&x, 1e-12) == signature(f.graph(), t)?.is_identity()))
}
