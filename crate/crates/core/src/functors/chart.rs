use std::sync::Arc;

use super::{Atom, FunctorExpr, LineEvaluator};
use crate::error::{Error, Result};
use crate::exactfield::{kernel_basis, rank, Mat, RingElem};
use crate::modpid::{ChartModule, PidModule};
use crate::polypid::{Poly, PolyMat};
use crate::sheafp1::split_classify;

/// How many stages past the initial guess we try before giving up.
const STAGE_SLACK: i64 = 8;

/// The chart module `F(u_*O_U)` read off from a single twist stage.
///
/// On chart 0, `u_*O_U = colim O(n)` along `x₀`, and `t` acts by `x₁`; on
/// chart 1 the roles of `x₀`, `x₁` swap. Once `F(O(N)) ⊗ ⟨x₀, x₁⟩ →
/// F(O(N+1))` is onto, the colimit is generated by `V_N = F(O(N))`, and a
/// pair `(v₀, v₁)` with `F(x_c)v₀ + F(x_o)v₁ = 0` becomes the relation
/// `v₀ + y·v₁` (`y` the chart coordinate).
#[derive(Clone, Debug)]
pub struct ChartSystem {
    pub chart: usize,
    pub stage: i64,
    pub dim: usize,
    /// `F(x_c): V_N → V_{N+1}` for the transition monomial `x_c`.
    pub transition: Mat,
    /// `F(x_o): V_N → V_{N+1}`, the chart coordinate before dividing by `x_c`.
    pub multiplication: Mat,
    pub relations: PolyMat,
    pub module: Arc<ChartModule>,
}

fn monomials(chart: usize, a: u32, b: u32) -> (u32, u32) {
    // (power of the transition variable, power of the other) -> (x0, x1)
    if chart == 0 {
        (a, b)
    } else {
        (b, a)
    }
}

fn step(ev: &LineEvaluator, chart: usize, n: i64) -> Result<(Mat, Mat)> {
    let (a, b) = monomials(chart, 1, 0);
    let x = ev.monomial(n, a, b)?;
    let (a, b) = monomials(chart, 0, 1);
    let y = ev.monomial(n, a, b)?;
    Ok((x, y))
}

/// Lowest stage at which every atom is globally generated and free of
/// higher cohomology.
pub(crate) fn initial_stage(f: &FunctorExpr) -> Result<i64> {
    let mut n: Option<i64> = None;
    for atom in &f.atoms {
        let need = match atom {
            Atom::TensorWith(g) => {
                let st = split_classify(g)?;
                match st.degrees.iter().min() {
                    Some(&d) => -d,
                    None => continue,
                }
            }
            Atom::H1Twist(i) => -i - 1,
        };
        n = Some(n.map_or(need, |m: i64| m.max(need)));
    }
    Ok(n.unwrap_or(0))
}

/// Stage `n` checks: the twist system is generated in degree one at `n` and
/// `n + 1`, and its degree-two relations come from degree one.
pub(crate) fn confirms(ev: &LineEvaluator, chart: usize, n: i64) -> Result<bool> {
    let field = ev.field();
    for m in [n, n + 1] {
        let (x, y) = step(ev, chart, m)?;
        if rank(&x.hstack(&y)) != ev.dim(m + 1)? {
            return Ok(false);
        }
    }
    let (x, y) = step(ev, chart, n)?;
    let d = x.cols();
    let rel = kernel_basis(&x.hstack(&y));
    let k = rel.cols();
    let (r0, r1) = (rel.submatrix(0, d, 0, k), rel.submatrix(d, 2 * d, 0, k));
    let z = Mat::zeros(field, d, k);
    let lifted = Mat::vconcat(field, k, &[r0.clone(), r1.clone(), z.clone()])
        .hstack(&Mat::vconcat(field, k, &[z, r0, r1]));
    let (a, b) = monomials(chart, 2, 0);
    let xx = ev.monomial(n, a, b)?;
    let (a, b) = monomials(chart, 1, 1);
    let xy = ev.monomial(n, a, b)?;
    let (a, b) = monomials(chart, 0, 2);
    let yy = ev.monomial(n, a, b)?;
    let deg2 = Mat::hconcat(field, xx.rows(), &[xx, xy, yy]);
    Ok(3 * d - rank(&deg2) == rank(&lifted))
}

/// A stage confirmed on both charts for every functor in `fs`.
pub(crate) fn common_stage(evs: &[&LineEvaluator]) -> Result<i64> {
    let mut start = 0;
    for (k, ev) in evs.iter().enumerate() {
        let s = initial_stage(ev.functor())?;
        start = if k == 0 { s } else { start.max(s) };
    }
    for n in start..=start + STAGE_SLACK {
        let mut ok = true;
        'check: for ev in evs {
            for c in 0..2 {
                if !confirms(ev, c, n)? {
                    ok = false;
                    break 'check;
                }
            }
        }
        if ok {
            return Ok(n);
        }
    }
    Err(Error::NoStabilization)
}

pub(crate) fn chart_system_at(ev: &LineEvaluator, chart: usize, n: i64) -> Result<ChartSystem> {
    let field = ev.field();
    let (x, y) = step(ev, chart, n)?;
    let d = x.cols();
    let rel = kernel_basis(&x.hstack(&y));
    let var = Poly::var(field);
    let mut relations = PolyMat::zeros(field, d, rel.cols());
    for j in 0..rel.cols() {
        for i in 0..d {
            let p = Poly::constant(rel.get(i, j).clone()).add(&var.scale(rel.get(d + i, j)));
            relations.set(i, j, p);
        }
    }
    let module = Arc::new(PidModule::from_presentation(field, d, &relations));
    Ok(ChartSystem { chart, stage: n, dim: d, transition: x, multiplication: y, relations, module })
}

pub fn chart_system(f: &FunctorExpr, chart: usize) -> Result<ChartSystem> {
    if chart > 1 {
        return Err(Error::Shape(format!("chart index {chart} (P¹ has charts 0 and 1)")));
    }
    let ev = LineEvaluator::new(f);
    let n = common_stage(&[&ev])?;
    chart_system_at(&ev, chart, n)
}

/// `F(u_*O_U)` as a module over the chart ring (`k[t]` or `k[s]`).
pub fn chart_bimodule(f: &FunctorExpr, chart: usize) -> Result<Arc<ChartModule>> {
    Ok(chart_system(f, chart)?.module)
}
