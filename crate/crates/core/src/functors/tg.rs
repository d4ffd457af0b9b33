use std::collections::BTreeMap;

use super::chart::chart_bimodule;
use super::{FunctorExpr, LineEvaluator};
use crate::error::{Error, Result};

/// How far below the top degree the classifier looks.
pub const TG_DEPTH: i64 = 64;

/// `F ≅ ⊕ H¹(−(i))^{n_i}` recovered from `d(n) = dim F(O(n))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TgClassification {
    /// Largest `n` with `d(n) ≠ 0`; `None` for the zero functor.
    pub top: Option<i64>,
    /// `i ↦ n_i`, nonzero entries only.
    pub multiplicities: BTreeMap<i64, usize>,
    /// `d` strictly decreasing wherever it is nonzero.
    pub strictly_decreasing: bool,
}

impl TgClassification {
    pub fn render(&self) -> String {
        if self.multiplicities.is_empty() {
            return "zero".to_string();
        }
        self.multiplicities.iter().rev().map(|(i, n)| format!("n({i})={n}")).collect::<Vec<_>>().join(" ")
    }
}

#[derive(Clone, Debug)]
pub struct TgReport {
    pub is_totally_global: bool,
    /// Chart index and a description of its nonzero chart module.
    pub witness: Option<(usize, String)>,
    pub multiplicities: Option<TgClassification>,
}

/// Totally global iff both chart bimodules vanish; on success the atom
/// multiplicities are attached when the dimension table allows it.
pub fn is_totally_global(f: &FunctorExpr) -> Result<TgReport> {
    for c in 0..2 {
        let m = chart_bimodule(f, c)?;
        if !m.is_zero() {
            let tors: Vec<String> = m.torsion().iter().map(|d| d.render(if c == 0 { "t" } else { "s" })).collect();
            let desc = format!("free rank {}, torsion [{}]", m.free_rank(), tors.join(", "));
            return Ok(TgReport { is_totally_global: false, witness: Some((c, desc)), multiplicities: None });
        }
    }
    let ev = LineEvaluator::new(f);
    let multiplicities = classify_tg_table(|n| ev.dim(n), TG_DEPTH).ok();
    Ok(TgReport { is_totally_global: true, witness: None, multiplicities })
}

pub fn classify_tg(f: &FunctorExpr) -> Result<TgClassification> {
    if !is_totally_global_quick(f)? {
        return Err(Error::NotTotallyGlobal);
    }
    let ev = LineEvaluator::new(f);
    classify_tg_table(|n| ev.dim(n), TG_DEPTH)
}

fn is_totally_global_quick(f: &FunctorExpr) -> Result<bool> {
    for c in 0..2 {
        if !chart_bimodule(f, c)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn h1_dim(n: i64) -> i64 {
    (-n - 1).max(0)
}

/// Solves `d(n) = Σ_i n_i · h¹(O(n + i))` from the top degree down.
///
/// The second difference `d(n) − 2d(n+1) + d(n+2)` is the multiplicity of
/// `i = −n − 2`. The whole window of `depth` degrees below the top is
/// scanned and reconstructed; a negative multiplicity or a nonzero residual
/// means the table is not a finite sum of twisted `H¹`.
pub fn classify_tg_table(d: impl Fn(i64) -> Result<usize>, depth: i64) -> Result<TgClassification> {
    let d = |n: i64| d(n).map(|x| x as i64);
    let top = if d(0)? == 0 {
        let mut found = None;
        for n in (-depth..0).rev() {
            if d(n)? != 0 {
                found = Some(n);
                break;
            }
        }
        found
    } else {
        let mut n = 0;
        while d(n + 1)? != 0 {
            n += 1;
            if n > depth {
                return Err(Error::NotInAtomSpan);
            }
        }
        Some(n)
    };
    let Some(r) = top else {
        return Ok(TgClassification { top: None, multiplicities: BTreeMap::new(), strictly_decreasing: true });
    };
    let lo = r - depth;
    let table: Vec<i64> = (lo..=r + 2).map(&d).collect::<Result<_>>()?;
    let at = |n: i64| table[(n - lo) as usize];
    let mut mult = BTreeMap::new();
    for n in (lo..=r).rev() {
        let c = at(n) - 2 * at(n + 1) + at(n + 2);
        if c < 0 {
            return Err(Error::NotInAtomSpan);
        }
        if c > 0 {
            mult.insert(-n - 2, c as usize);
        }
    }
    for n in lo..=r + 2 {
        let rebuilt: i64 = mult.iter().map(|(i, &k)| k as i64 * h1_dim(n + i)).sum();
        if rebuilt != at(n) {
            return Err(Error::NotInAtomSpan);
        }
    }
    let strictly_decreasing = (lo..=r).all(|n| at(n) > at(n + 1));
    Ok(TgClassification { top: Some(r), multiplicities: mult, strictly_decreasing })
}
