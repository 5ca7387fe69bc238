//! Growth series of right-angled Coxeter groups.
//!
//! With `x_s = q_s / (1 + q_s)` the reciprocal of the multivariate growth
//! series is the clique polynomial `f(q) = Σ_T Π_{s∈T} (-x_s)`. Along a ray
//! `t ↦ t q` the series converges up to the first positive zero of `f`, which
//! is how a parameter is placed relative to the region of convergence.

use crate::coxeter::CoxeterGroup;
use crate::error::{Error, Result};
use crate::graph::{SimplicialGraph, VertexId};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

pub const DEFAULT_CLASSIFY_TOL: f64 = 1e-8;
/// Rays are followed up to this parameter before declaring the group finite.
pub const T_CAP: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Region {
    InsideRegion,
    Boundary,
    OutsideClosure,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceVerdict {
    pub region: Region,
    /// `None` encodes `+∞` (finite group).
    pub critical_t: Option<f64>,
    pub tolerance: f64,
    /// Ratio estimate of the critical parameter from sphere sums, when computed.
    pub sphere_ratio_estimate: Option<f64>,
    pub clique_polynomial: String,
}

fn check_q(g: &SimplicialGraph, q: &[f64]) -> Result<()> {
    if q.len() != g.len() {
        return Err(Error::InvalidInput(format!("{} parameters for {} vertices", q.len(), g.len())));
    }
    if let Some(x) = q.iter().find(|x| !(**x > 0.0) || !x.is_finite()) {
        return Err(Error::InvalidInput(format!("parameters must be positive and finite, got {x}")));
    }
    Ok(())
}

/// `f(q) = Σ_T Π_{s∈T} (-q_s / (1 + q_s))`.
pub fn inverse_growth_eval(g: &SimplicialGraph, q: &[f64]) -> Result<f64> {
    check_q(g, q)?;
    Ok(eval_cliques(&g.cliques(), q, 1.0))
}

fn eval_cliques(cliques: &[Vec<VertexId>], q: &[f64], t: f64) -> f64 {
    cliques
        .iter()
        .map(|c| c.iter().map(|s| -(t * q[s.index()]) / (1.0 + t * q[s.index()])).product::<f64>())
        .sum()
}

/// Sphere sizes from the Coxeter group.
pub fn sphere_counts(g: &SimplicialGraph, depth: usize) -> Result<Vec<u64>> {
    CoxeterGroup::new(g.clone()).sphere_sizes(depth)
}

/// Coefficients of `1/f` in one variable (`q_s = z` for all `s`), computed
/// exactly: `1/f(z) = (1+z)^ω / P(z)` with `P(z) = Σ_k c_k (-z)^k (1+z)^{ω-k}`.
pub fn growth_coefficients(g: &SimplicialGraph, depth: usize) -> Result<Vec<i128>> {
    let cliques = g.cliques();
    let omega = cliques.last().map_or(0, |c| c.len());
    let mut counts = vec![0i128; omega + 1];
    for c in &cliques {
        counts[c.len()] += 1;
    }
    let mut p = vec![0i128; omega + 1];
    for (k, &ck) in counts.iter().enumerate() {
        let sign = if k % 2 == 0 { 1 } else { -1 };
        let bin = binomials(omega - k);
        for (j, b) in bin.iter().enumerate() {
            p[k + j] += sign * ck * b;
        }
    }
    let num = binomials(omega);
    // power-series division; P(0) = 1
    let mut out = vec![0i128; depth + 1];
    for n in 0..=depth {
        let mut acc = if n < num.len() { num[n] } else { 0 };
        for j in 1..=n.min(omega) {
            acc = acc
                .checked_sub(p[j].checked_mul(out[n - j]).ok_or_else(overflow)?)
                .ok_or_else(overflow)?;
        }
        out[n] = acc;
    }
    Ok(out)
}

fn overflow() -> Error {
    Error::Resource("growth coefficient overflow".into())
}

fn binomials(n: usize) -> Vec<i128> {
    let mut row = vec![1i128];
    for _ in 0..n {
        let mut next = vec![1i128; row.len() + 1];
        for k in 1..row.len() {
            next[k] = row[k - 1] + row[k];
        }
        row = next;
    }
    row
}

/// Coefficients (constant first) of `F(t) = f(t q) Π_s (1 + t q_s)`, which
/// is a polynomial in `t` with the same positive zeros as `f(t q)`. Computed in
/// exact rational arithmetic from the binary values of `q`.
pub fn ray_polynomial(g: &SimplicialGraph, q: &[f64]) -> Result<Vec<f64>> {
    check_q(g, q)?;
    let qs: Vec<BigRational> = q
        .iter()
        .map(|&x| BigRational::from_float(x).ok_or_else(|| Error::InvalidInput(format!("parameter {x} is not finite"))))
        .collect::<Result<_>>()?;
    let mut total: Vec<BigRational> = vec![BigRational::zero()];
    for c in g.cliques() {
        let mut poly = vec![BigRational::one()];
        let mask = c.iter().fold(0u32, |m, v| m | v.bit());
        for s in g.vertices() {
            let qs_s = &qs[s.index()];
            let factor = if mask & s.bit() != 0 {
                vec![BigRational::zero(), -qs_s.clone()]
            } else {
                vec![BigRational::one(), qs_s.clone()]
            };
            poly = poly_mul(&poly, &factor);
        }
        if total.len() < poly.len() {
            total.resize(poly.len(), BigRational::zero());
        }
        for (t, p) in total.iter_mut().zip(poly) {
            *t += p;
        }
    }
    while total.len() > 1 && total.last().is_some_and(|c| c.is_zero()) {
        total.pop();
    }
    Ok(total.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect())
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn horner(c: &[f64], t: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &x| acc * t + x)
}

fn derivative(c: &[f64]) -> Vec<f64> {
    if c.len() <= 1 {
        return vec![0.0];
    }
    c.iter().enumerate().skip(1).map(|(k, &x)| k as f64 * x).collect()
}

/// Bisection for a sign change of `p` on `[a, b]`.
fn bisect(p: &[f64], mut a: f64, mut b: f64) -> f64 {
    let fa = horner(p, a);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        if (horner(p, m) > 0.0) == (fa > 0.0) {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// All complex roots by Aberth iteration with a bounded number of sweeps.
fn poly_roots(c: &[f64]) -> Vec<Complex64> {
    let n = c.len() - 1;
    let lead = c[n];
    let a: Vec<f64> = c.iter().map(|x| x / lead).collect();
    let eval = |z: Complex64| {
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for &x in a.iter().rev() {
            dp = dp * z + p;
            p = p * z + x;
        }
        (p, dp)
    };
    // Cauchy bound for the initial circle
    let radius = 1.0 + a[..n].iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius, 0.4 + 2.0 * std::f64::consts::PI * k as f64 / n as f64))
        .collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let (p, dp) = eval(z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let repulse: Complex64 = (0..n).filter(|&j| j != i).map(|j| 1.0 / (z[i] - z[j])).sum();
            let step = ratio / (1.0 - ratio * repulse);
            if step.is_finite() {
                z[i] -= step;
                moved = moved.max(step.norm() / z[i].norm().max(1.0));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

/// Smallest `t > 0` with `f(t q) = 0`, or `None` when there is none below
/// [`T_CAP`] (finite group). Roots of even multiplicity are located through
/// the derivative.
pub fn critical_t(g: &SimplicialGraph, q: &[f64]) -> Result<Option<f64>> {
    let c = ray_polynomial(g, q)?;
    if c.len() <= 1 {
        return Ok(None);
    }
    let mut candidates: Vec<f64> = poly_roots(&c)
        .iter()
        .filter(|z| z.re > 0.0 && z.im.abs() <= 1e-6 * z.re.max(1.0))
        .map(|z| z.re)
        .collect();
    candidates.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let dc = derivative(&c);
    let scale = |t: f64| c.iter().enumerate().map(|(k, x)| x.abs() * t.powi(k as i32)).sum::<f64>();
    for r in candidates {
        if r > T_CAP {
            break;
        }
        let (a, b) = (r * (1.0 - 1e-5), r * (1.0 + 1e-5));
        if (horner(&c, a) > 0.0) != (horner(&c, b) > 0.0) {
            return Ok(Some(bisect(&c, a, b)));
        }
        if (horner(&dc, a) > 0.0) != (horner(&dc, b) > 0.0) {
            let t = bisect(&dc, a, b);
            if horner(&c, t).abs() <= 1e-9 * scale(t) {
                return Ok(Some(t));
            }
        }
    }
    Ok(None)
}

/// Places `q` relative to the closure of the region of convergence.
pub fn classify(g: &SimplicialGraph, q: &[f64], tol: f64) -> Result<ConvergenceVerdict> {
    let t = critical_t(g, q)?;
    let region = match t {
        None => Region::InsideRegion,
        Some(t) if t < 1.0 - tol => Region::OutsideClosure,
        Some(t) if t > 1.0 + tol => Region::InsideRegion,
        Some(_) => Region::Boundary,
    };
    Ok(ConvergenceVerdict {
        region,
        critical_t: t,
        tolerance: tol,
        sphere_ratio_estimate: sphere_ratio_estimate(g, q, 8).ok().flatten(),
        clique_polynomial: clique_polynomial_string(g),
    })
}

/// Weighted sphere sums `S_k = Σ_{|w|=k} q_w` for `k <= depth`.
pub fn weighted_sphere_sums(g: &SimplicialGraph, q: &[f64], depth: usize) -> Result<Vec<f64>> {
    check_q(g, q)?;
    let c = CoxeterGroup::new(g.clone());
    let mut sums = vec![0.0; depth + 1];
    for w in c.ball(depth)? {
        sums[w.len()] += w.letters().iter().map(|s| q[s.index()]).product::<f64>();
    }
    Ok(sums)
}

/// `S_{N-1} / S_N`, which tends to the critical parameter for infinite groups.
pub fn sphere_ratio_estimate(g: &SimplicialGraph, q: &[f64], depth: usize) -> Result<Option<f64>> {
    let c = CoxeterGroup::new(g.clone());
    let sizes = c.sphere_sizes(depth)?;
    if sizes.iter().sum::<u64>() > 200_000 {
        return Ok(None);
    }
    let s = weighted_sphere_sums(g, q, depth)?;
    if depth == 0 || s[depth] == 0.0 {
        return Ok(None);
    }
    Ok(Some(s[depth - 1] / s[depth]))
}

/// The clique polynomial in the variables `x_s = q_s / (1 + q_s)`.
pub fn clique_polynomial_string(g: &SimplicialGraph) -> String {
    let mut out = String::new();
    for (i, c) in g.cliques().iter().enumerate() {
        let sign = if c.len() % 2 == 0 { '+' } else { '-' };
        if i == 0 {
            out.push('1');
            continue;
        }
        out.push(' ');
        out.push(sign);
        out.push(' ');
        let names: Vec<String> = c.iter().map(|v| format!("x_{}", g.label(*v))).collect();
        out.push_str(&names.join("*"));
    }
    out
}
