//! Čech cohomology for the cover `{U₀, U₁}`.
//!
//! `H⁰` is the kernel of `δ(a, b) = res₀(a) − glue · res₁(b)` restricted to
//! an exact window: a global section has free chart-0 part of degree at most
//! `max(0, maxexp(G))` and free chart-1 part of `s`-degree at most
//! `max(0, −minexp(G⁻¹))`, where `G` is the bundle block of the glue.
//! `H¹` only sees the bundle block (chart-0 torsion already surjects onto the
//! overlap torsion) and is the quotient of the polar part
//! `⊕ t⁻¹k[t⁻¹]` by the image of chart 1, truncated at depth `L`. The
//! truncation is exact once `dim = h⁰ − χ`, with `χ = deg det G + rank`.

use std::sync::Arc;

use super::normal::NormalizedSheaf;
use super::{GluedSheaf, SheafMap};
use crate::error::{Error, Result};
use crate::exactfield::{image_basis, inverse, kernel_from_echelon, rref, Field, Mat, RingElem, Scalar};
use crate::polypid::{smith_normal_form, Laurent, LaurentMat, Poly, PolyMat};

const MAX_DEPTH: usize = 1 << 14;

/// Index layout of the section window and the overlap target.
#[derive(Clone, Debug)]
struct Layout {
    rank: usize,
    l0: usize,
    l1: usize,
    lo: i64,
    hi: i64,
    tdeg1: Vec<usize>,
    tdeg0: Vec<usize>,
    odeg: Vec<usize>,
    free_only: bool,
}

impl Layout {
    fn new(n: &NormalizedSheaf, free_only: bool) -> Layout {
        let g = n.glue_ff();
        let (gmin, gmax) = exp_range(&g).unwrap_or((0, 0));
        let (imin, _) = exp_range(&n.glue_ff_inv).unwrap_or((0, 0));
        let l0 = gmax.max(0) as usize;
        let l1 = (-imin).max(0) as usize;
        let lo = 0.min(gmin - l1 as i64);
        let hi = (l0 as i64).max(gmax);
        let degs = |v: &[Poly]| -> Vec<usize> {
            if free_only {
                vec![0; v.len()]
            } else {
                v.iter().map(|d| d.deg() as usize).collect()
            }
        };
        Layout {
            rank: n.rank,
            l0,
            l1,
            lo,
            hi,
            tdeg1: degs(&n.tors1),
            tdeg0: degs(&n.tors0),
            odeg: degs(&n.over0),
            free_only,
        }
    }

    fn n_t1(&self) -> usize {
        self.tdeg1.iter().sum()
    }

    fn n_f1(&self) -> usize {
        self.rank * (self.l1 + 1)
    }

    fn n_t0(&self) -> usize {
        self.tdeg0.iter().sum()
    }

    fn n_f0(&self) -> usize {
        self.rank * (self.l0 + 1)
    }

    fn chart1_len(&self) -> usize {
        self.n_t1() + self.n_f1()
    }

    fn cols(&self) -> usize {
        self.chart1_len() + self.n_t0() + self.n_f0()
    }

    fn width(&self) -> usize {
        (self.hi - self.lo + 1) as usize
    }

    fn n_overlap_t(&self) -> usize {
        self.odeg.iter().sum()
    }

    fn rows(&self) -> usize {
        self.n_overlap_t() + self.rank * self.width()
    }

    fn offsets(v: &[usize]) -> Vec<usize> {
        let mut acc = 0;
        v.iter()
            .map(|d| {
                let o = acc;
                acc += d;
                o
            })
            .collect()
    }
}

fn exp_range(m: &LaurentMat) -> Option<(i64, i64)> {
    m.entries().iter().filter(|x| !x.is_zero()).fold(None, |acc, x| {
        let (a, b) = (x.min_exp(), x.max_exp());
        Some(match acc {
            None => (a, b),
            Some((lo, hi)) => (lo.min(a), hi.max(b)),
        })
    })
}

/// The section-level Čech difference map on the exact window.
#[derive(Clone, Debug)]
pub struct DeltaMap {
    pub source_dim: usize,
    pub target_dim: usize,
    pub matrix: Mat,
}

fn build_delta(n: &NormalizedSheaf, lay: &Layout) -> Mat {
    let field = n.glue.field();
    let mut d = Mat::zeros(field, lay.rows(), lay.cols());
    let o_off = Layout::offsets(&lay.odeg);
    let free_row = |i: usize, e: i64| lay.n_overlap_t() + i * lay.width() + (e - lay.lo) as usize;
    let a0 = n.n_tors0();
    let b0 = n.n_tors1();
    // writes -(column c of the normal glue) * t^shift into matrix column `col`
    let put_glue_col = |d: &mut Mat, c: usize, shift: i64, col: usize| {
        if !lay.free_only {
            for (i, p) in n.over0.iter().enumerate() {
                if lay.odeg[i] == 0 {
                    continue;
                }
                let v = n.glue.get(i, c).shift(shift).reduce_mod(p);
                for (k, x) in v.coeffs().iter().enumerate() {
                    d.set(o_off[i] + k, col, -x);
                }
            }
        }
        for i in 0..lay.rank {
            for (e, x) in n.glue.get(a0 + i, c).shift(shift).terms() {
                d.set(free_row(i, e), col, -x);
            }
        }
    };
    let mut col = 0;
    for (j, &deg) in lay.tdeg1.iter().enumerate() {
        for k in 0..deg {
            put_glue_col(&mut d, j, -(k as i64), col);
            col += 1;
        }
    }
    for i in 0..lay.rank {
        for k in 0..=lay.l1 {
            put_glue_col(&mut d, b0 + i, -(k as i64), col);
            col += 1;
        }
    }
    for (i, &deg) in lay.tdeg0.iter().enumerate() {
        for k in 0..deg {
            if lay.odeg[i] > 0 {
                let v = Laurent::t_pow(field, k as i64).reduce_mod(&n.over0[i]);
                for (kk, x) in v.coeffs().iter().enumerate() {
                    d.set(o_off[i] + kk, col, x.clone());
                }
            }
            col += 1;
        }
    }
    for i in 0..lay.rank {
        for k in 0..=lay.l0 {
            d.set(free_row(i, k as i64), col, field.one());
            col += 1;
        }
    }
    d
}

/// The difference map `M(U₀) ⊕ M(U₁) → M(U₀₁)` on the exact section window.
/// Columns list chart-1 coordinates before chart-0 coordinates.
pub fn delta_map(m: &GluedSheaf) -> DeltaMap {
    let n = m.normalized();
    let lay = Layout::new(&n, false);
    let matrix = build_delta(&n, &lay);
    DeltaMap { source_dim: lay.cols(), target_dim: lay.rows(), matrix }
}

/// Global sections with a basis of window vectors.
#[derive(Clone, Debug)]
pub struct H0Space {
    pub dim: usize,
    /// Columns are global sections in window coordinates.
    pub basis: Mat,
    free_vars: Vec<usize>,
    layout: Layout,
    normal: Arc<NormalizedSheaf>,
}

impl H0Space {
    /// Coordinates of a global section (window vector) in the basis.
    pub fn coords(&self, w: &Mat) -> Mat {
        w.select_rows(&self.free_vars)
    }

    /// Chart sections of basis vector `k` in normal coordinates:
    /// chart-0 entries are polynomials in `t`, chart-1 entries in `s`.
    pub fn section(&self, k: usize) -> (Vec<Poly>, Vec<Poly>) {
        self.decode(&self.basis.select_cols(&[k]))
    }

    fn decode(&self, w: &Mat) -> (Vec<Poly>, Vec<Poly>) {
        let lay = &self.layout;
        let field = w.field();
        let mut pos = 0;
        let mut take = |n: usize| -> Poly {
            let c: Vec<Scalar> = (0..n).map(|i| w.get(pos + i, 0).clone()).collect();
            pos += n;
            Poly::new(field, c)
        };
        let mut b: Vec<Poly> = lay.tdeg1.iter().map(|&d| take(d)).collect();
        b.extend((0..lay.rank).map(|_| take(lay.l1 + 1)));
        let mut a: Vec<Poly> = lay.tdeg0.iter().map(|&d| take(d)).collect();
        a.extend((0..lay.rank).map(|_| take(lay.l0 + 1)));
        (a, b)
    }

    /// Basis coordinates of the global section with the given chart
    /// sections, in generator coordinates of the two chart modules.
    pub(crate) fn coords_of_sections(&self, a: &[Poly], b: &[Poly]) -> Result<Mat> {
        let a = apply(&self.normal.to0, a);
        let b = apply(&self.normal.to1, b);
        Ok(self.coords(&self.encode(&a, &b)?))
    }

    /// Window vector of a pair of chart sections in normal coordinates,
    /// reducing torsion coordinates. Errors if a free part leaves the window.
    fn encode(&self, a: &[Poly], b: &[Poly]) -> Result<Mat> {
        let lay = &self.layout;
        let field = self.basis.field();
        let mut v = Vec::with_capacity(lay.cols());
        let mut push = |p: &Poly, len: usize| -> Result<()> {
            if p.deg() >= len as i64 {
                return Err(Error::Internal("section outside the exact window".into()));
            }
            v.extend((0..len).map(|i| p.coeff(i)));
            Ok(())
        };
        for (j, &d) in lay.tdeg1.iter().enumerate() {
            push(&b[j].rem(&self.normal.tors1[j]), d)?;
        }
        for i in 0..lay.rank {
            push(&b[lay.tdeg1.len() + i], lay.l1 + 1)?;
        }
        for (i, &d) in lay.tdeg0.iter().enumerate() {
            push(&a[i].rem(&self.normal.tors0[i]), d)?;
        }
        for i in 0..lay.rank {
            push(&a[lay.tdeg0.len() + i], lay.l0 + 1)?;
        }
        Ok(Mat::from_vec(field, v.len(), 1, v))
    }
}

/// `H⁰(P¹, M)` as the kernel of the windowed difference map.
pub fn cech_h0(m: &GluedSheaf) -> Arc<H0Space> {
    m.h0.get_or_init(|| Arc::new(h0_of(m.normalized(), false))).clone()
}

fn h0_of(n: Arc<NormalizedSheaf>, free_only: bool) -> H0Space {
    let lay = Layout::new(&n, free_only);
    let d = build_delta(&n, &lay);
    let e = rref(&d);
    let free_vars: Vec<usize> = (0..lay.cols()).filter(|c| !e.pivots.contains(c)).collect();
    let basis = kernel_from_echelon(&e, d.cols());
    H0Space { dim: free_vars.len(), basis, free_vars, layout: lay, normal: n }
}

/// `H¹(P¹, M)` with basis classes `t^(-j) eᵢ` in chart-0 normal coordinates
/// of the bundle part.
#[derive(Clone, Debug)]
pub struct H1Space {
    pub dim: usize,
    /// `(i, j)`: the class of `t^(-j)` in free coordinate `i`.
    pub basis: Vec<(usize, usize)>,
    pub depth: usize,
    coords: Mat,
    normal: Arc<NormalizedSheaf>,
}

impl H1Space {
    /// Class of an overlap vector given in free normal coordinates.
    pub fn class_of(&self, v: &[Laurent]) -> Mat {
        let field = self.coords.field();
        let l = self.depth;
        let mut q = Mat::zeros(field, self.normal.rank * l, 1);
        for (i, x) in v.iter().enumerate() {
            for (e, c) in x.terms() {
                if e < 0 && (-e) as usize <= l {
                    q.set(i * l + (-e - 1) as usize, 0, c.clone());
                }
            }
        }
        self.coords.mul(&q)
    }
}

/// Degree of the bundle part: exponent of `det G` (a unit `c·t^k`).
pub(crate) fn bundle_degree(n: &NormalizedSheaf) -> i64 {
    let g = n.glue_ff();
    if g.rows() == 0 {
        return 0;
    }
    let lo = exp_range(&g).map(|r| r.0).unwrap_or(0);
    let p: PolyMat = g.convert(|x| x.shift(-lo).to_poly().expect("shifted to nonnegative exponents"));
    let s = smith_normal_form(&p);
    let total: i64 = s.diagonal().iter().map(|d| d.deg()).sum();
    total + lo * g.rows() as i64
}

/// `H¹(P¹, M)`, certified against `h⁰ − χ` of the bundle part.
pub fn cech_h1(m: &GluedSheaf) -> Result<Arc<H1Space>> {
    m.h1.get_or_init(|| compute_h1(m).map(Arc::new)).clone()
}

fn compute_h1(m: &GluedSheaf) -> Result<H1Space> {
    let n = m.normalized();
    let r = n.rank;
    let field = m.field();
    if r == 0 {
        return Ok(H1Space { dim: 0, basis: vec![], depth: 0, coords: Mat::zeros(field, 0, 0), normal: n });
    }
    let h0_free = h0_of(n.clone(), true).dim as i64;
    let chi = bundle_degree(&n) + r as i64;
    let target = h0_free - chi;
    if target < 0 {
        return Err(Error::Internal("negative h1 from Riemann-Roch".into()));
    }
    let g = n.glue_ff();
    let (gmin, gmax) = exp_range(&g).unwrap_or((0, 0));
    let mut l = (-gmin).max(1) as usize;
    while l <= MAX_DEPTH {
        let img = polar_image(&g, l, gmax, field);
        let ib = image_basis(&img);
        let dim = r * l - ib.cols();
        if dim as i64 == target {
            let comp = crate::exactfield::complement_indices(&ib);
            let mut full = ib.clone();
            let mut basis = Vec::new();
            for &c in &comp {
                let mut e = Mat::zeros(field, r * l, 1);
                e.set(c, 0, field.one());
                full = full.hstack(&e);
                basis.push((c / l, c % l + 1));
            }
            let inv = inverse(&full).ok_or_else(|| Error::Internal("polar basis not invertible".into()))?;
            let coords = inv.submatrix(ib.cols(), r * l, 0, r * l);
            return Ok(H1Space { dim, basis, depth: l, coords, normal: n });
        }
        l *= 2;
    }
    Err(Error::IncreaseWindow)
}

/// Projection to exponents `[-l, -1]` of `G · s^m eⱼ` for all `m` that can
/// reach that range.
fn polar_image(g: &LaurentMat, l: usize, gmax: i64, field: Field) -> Mat {
    let r = g.rows();
    let mmax = (l as i64 + gmax).max(-1);
    let mut cols = Vec::new();
    for j in 0..r {
        for m in 0..=mmax {
            let mut v = vec![field.zero(); r * l];
            let mut any = false;
            for i in 0..r {
                for (e, c) in g.get(i, j).shift(-m).terms() {
                    if e < 0 && (-e) as usize <= l {
                        v[i * l + (-e - 1) as usize] = c.clone();
                        any = true;
                    }
                }
            }
            if any {
                cols.push(v);
            }
        }
    }
    let mut out = Mat::zeros(field, r * l, cols.len());
    for (j, c) in cols.into_iter().enumerate() {
        for (i, x) in c.into_iter().enumerate() {
            out.set(i, j, x);
        }
    }
    out
}

/// Chart map in normal coordinates: `to_target · f · from_source`.
fn normal_chart(f: &PolyMat, to: &PolyMat, from: &PolyMat) -> PolyMat {
    to.mul(f).mul(from)
}

/// Matrix of `H⁰(f)` in the bases of `cech_h0`.
pub fn h0_map(f: &SheafMap) -> Result<Mat> {
    let hs = cech_h0(&f.source);
    let ht = cech_h0(&f.target);
    h0_map_with(f, &hs, &ht)
}

pub(crate) fn h0_map_with(f: &SheafMap, hs: &H0Space, ht: &H0Space) -> Result<Mat> {
    let ns = &hs.normal;
    let nt = &ht.normal;
    let field = f.source.field();
    let f0 = normal_chart(&f.f0, &nt.to0, &ns.from0);
    let f1 = normal_chart(&f.f1, &nt.to1, &ns.from1);
    let mut out = Mat::zeros(field, ht.dim, hs.dim);
    for k in 0..hs.dim {
        let (a, b) = hs.section(k);
        let a2 = apply(&f0, &a);
        let b2 = apply(&f1, &b);
        let w = ht.encode(&a2, &b2)?;
        out.paste(0, k, &ht.coords(&w));
    }
    Ok(out)
}

fn apply(m: &PolyMat, v: &[Poly]) -> Vec<Poly> {
    (0..m.rows())
        .map(|i| (0..m.cols()).fold(Poly::zero(m.field()), |acc, j| acc.add(&m.get(i, j).mul(&v[j]))))
        .collect()
}

/// Matrix of `H¹(f)` in the bases of `cech_h1`.
pub fn h1_map(f: &SheafMap) -> Result<Mat> {
    let hs = cech_h1(&f.source)?;
    let ht = cech_h1(&f.target)?;
    Ok(h1_map_with(f, &hs, &ht))
}

pub(crate) fn h1_map_with(f: &SheafMap, hs: &H1Space, ht: &H1Space) -> Mat {
    let ns = &hs.normal;
    let nt = &ht.normal;
    let field = f.source.field();
    let f0 = normal_chart(&f.f0, &nt.to0, &ns.from0);
    let (a_s, a_t) = (ns.n_tors0(), nt.n_tors0());
    let mut out = Mat::zeros(field, ht.dim, hs.dim);
    for (k, &(i, j)) in hs.basis.iter().enumerate() {
        let v: Vec<Laurent> = (0..nt.rank)
            .map(|row| Laurent::from_poly(f0.get(a_t + row, a_s + i)).shift(-(j as i64)))
            .collect();
        out.paste(0, k, &ht.class_of(&v));
    }
    out
}
