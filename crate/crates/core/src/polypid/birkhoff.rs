use super::{smith_normal_form, Euclidean, Laurent, LaurentMat, Poly, PolyMat};
use crate::error::{Error, Result};
use crate::exactfield::{kernel_basis, Mat, RingElem};

/// `p · T · q = diag(t^degrees)` with `p` invertible over `k[t]` and `q`
/// invertible over `k[s]`, `s = t⁻¹`. The matrices `q`, `q_inv` hold
/// polynomials in `s`.
#[derive(Clone, Debug)]
pub struct Birkhoff {
    pub p: PolyMat,
    pub p_inv: PolyMat,
    pub degrees: Vec<i64>,
    pub q: PolyMat,
    pub q_inv: PolyMat,
}

impl Birkhoff {
    pub fn diagonal(&self, field: crate::Field) -> LaurentMat {
        let d: Vec<Laurent> = self.degrees.iter().map(|&e| Laurent::t_pow(field, e)).collect();
        LaurentMat::diagonal(field, &d)
    }

    /// `p · T · q` as Laurent matrices.
    pub fn recompose(&self, t: &LaurentMat) -> LaurentMat {
        let p = self.p.convert(Laurent::from_poly);
        let q = self.q.convert(Laurent::from_inverse_poly);
        p.mul(t).mul(&q)
    }
}

/// Birkhoff factorization of an invertible Laurent matrix.
///
/// Column reduction in the `s`-direction: with `v_j` the lowest `t`-power in
/// column `j` and `L` the matrix of those lowest coefficients, a kernel
/// vector of `L` gives a `k[s]`-column operation that raises some `v_j`.
/// Since `Σ v_j` is bounded by the valuation of the determinant, this stops
/// with `L` invertible; then `T q diag(t^-v)` is a polynomial matrix with
/// invertible constant term and constant determinant, and `p` is its inverse.
pub fn birkhoff_factorize(t: &LaurentMat) -> Result<Birkhoff> {
    if !t.is_square() {
        return Err(Error::NotInvertible);
    }
    let field = t.field();
    let n = t.rows();
    let s = smith_normal_form(t);
    if s.rank() != n || !s.invariant_factors().is_empty() {
        return Err(Error::NotInvertible);
    }

    let mut cur = t.clone();
    let mut q = LaurentMat::identity(field, n);
    let mut q_inv = LaurentMat::identity(field, n);
    let mut vals = column_valuations(&cur)?;
    loop {
        let lead = Mat::from_vec(
            field,
            n,
            n,
            (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| cur.get(i, j).coeff(vals[j])).collect(),
        );
        let ker = kernel_basis(&lead);
        if ker.cols() == 0 {
            break;
        }
        let alpha = ker.column(0);
        let support: Vec<usize> = (0..n).filter(|&j| !alpha[j].is_zero()).collect();
        let j0 = *support.iter().min_by_key(|&&j| (vals[j], j)).expect("kernel vector is nonzero");
        let a0 = alpha[j0].inv().expect("nonzero");
        for &j in &support {
            if j == j0 {
                continue;
            }
            let c = Laurent::monomial(&alpha[j] * &a0, vals[j0] - vals[j]);
            cur.add_col_multiple(j0, j, &c);
            q.add_col_multiple(j0, j, &c);
            q_inv.add_row_multiple(j, j0, &c.neg());
        }
        vals = column_valuations(&cur)?;
    }

    let shift: Vec<Laurent> = vals.iter().map(|&v| Laurent::t_pow(field, -v)).collect();
    let p_inv_l = cur.mul(&LaurentMat::diagonal(field, &shift));
    let mut p_inv = PolyMat::zeros(field, n, n);
    for i in 0..n {
        for j in 0..n {
            let e = p_inv_l.get(i, j).to_poly().ok_or_else(|| Error::Internal("birkhoff: negative power".into()))?;
            p_inv.set(i, j, e);
        }
    }
    let sp = smith_normal_form(&p_inv);
    if sp.diagonal().len() != n || sp.diagonal().iter().any(|d| !d.is_unit()) {
        return Err(Error::NotInvertible);
    }
    let p = sp.v.mul(&sp.u);

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&j| std::cmp::Reverse(vals[j]));
    let degrees: Vec<i64> = order.iter().map(|&j| vals[j]).collect();
    let to_s = |m: &LaurentMat| -> Result<PolyMat> {
        let mut out = PolyMat::zeros(field, n, n);
        for i in 0..n {
            for j in 0..n {
                let e = m.get(i, j).to_inverse_poly().ok_or_else(|| Error::Internal("birkhoff: positive power".into()))?;
                out.set(i, j, e);
            }
        }
        Ok(out)
    };
    let out = Birkhoff {
        p: p.select_rows(&order),
        p_inv: p_inv.select_cols(&order),
        degrees,
        q: to_s(&q)?.select_cols(&order),
        q_inv: to_s(&q_inv)?.select_rows(&order),
    };
    if out.recompose(t) != out.diagonal(field) {
        return Err(Error::Internal("birkhoff recomposition failed".into()));
    }
    Ok(out)
}

fn column_valuations(m: &LaurentMat) -> Result<Vec<i64>> {
    (0..m.cols())
        .map(|j| {
            (0..m.rows())
                .filter(|&i| !m.get(i, j).is_zero())
                .map(|i| m.get(i, j).min_exp())
                .min()
                .ok_or(Error::NotInvertible)
        })
        .collect()
}

/// Whether a square polynomial matrix is invertible over the polynomial ring.
pub fn is_unimodular(m: &PolyMat) -> bool {
    if !m.is_square() {
        return false;
    }
    let s = smith_normal_form(m);
    s.diagonal().len() == m.rows() && s.diagonal().iter().all(Poly::is_one)
}
