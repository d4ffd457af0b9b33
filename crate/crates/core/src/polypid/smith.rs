use super::Euclidean;
use crate::exactfield::Matrix;

/// `u · m · v = d` with `u`, `v` invertible over the ring; the inverses are
/// tracked alongside so callers never need to invert a ring matrix.
#[derive(Clone, Debug)]
pub struct Smith<R> {
    pub u: Matrix<R>,
    pub u_inv: Matrix<R>,
    pub d: Matrix<R>,
    pub v: Matrix<R>,
    pub v_inv: Matrix<R>,
}

impl<R: Euclidean> Smith<R> {
    /// Nonzero diagonal entries in order; units included.
    pub fn diagonal(&self) -> Vec<R> {
        let n = self.d.rows().min(self.d.cols());
        (0..n).map(|i| self.d.get(i, i).clone()).filter(|x| !x.is_zero()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().len()
    }

    /// The non-unit diagonal entries: the invariant factors.
    pub fn invariant_factors(&self) -> Vec<R> {
        self.diagonal().into_iter().filter(|x| !x.is_unit()).collect()
    }
}

struct Work<R> {
    a: Matrix<R>,
    u: Matrix<R>,
    u_inv: Matrix<R>,
    v: Matrix<R>,
    v_inv: Matrix<R>,
}

impl<R: Euclidean> Work<R> {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        self.u.swap_rows(i, j);
        self.u_inv.swap_cols(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        self.v.swap_cols(i, j);
        self.v_inv.swap_rows(i, j);
    }

    /// `row[dst] += c · row[src]`.
    fn add_row(&mut self, dst: usize, src: usize, c: &R) {
        self.a.add_row_multiple(dst, src, c);
        self.u.add_row_multiple(dst, src, c);
        self.u_inv.add_col_multiple(src, dst, &c.neg());
    }

    /// `col[dst] += c · col[src]`.
    fn add_col(&mut self, dst: usize, src: usize, c: &R) {
        self.a.add_col_multiple(dst, src, c);
        self.v.add_col_multiple(dst, src, c);
        self.v_inv.add_row_multiple(src, dst, &c.neg());
    }

    fn scale_row(&mut self, i: usize, unit: &R) {
        let inv = unit.unit_inverse().expect("scaling by a unit");
        self.a.scale_row(i, unit);
        self.u.scale_row(i, unit);
        self.u_inv.scale_col(i, &inv);
    }
}

/// Smith normal form over a Euclidean domain. Pivots are chosen as the first
/// entry of minimal norm in row-major order; diagonal entries come out
/// normalized and each divides the next.
pub fn smith_normal_form<R: Euclidean>(m: &Matrix<R>) -> Smith<R> {
    let f = m.field();
    let (rows, cols) = (m.rows(), m.cols());
    let mut w = Work {
        a: m.clone(),
        u: Matrix::identity(f, rows),
        u_inv: Matrix::identity(f, rows),
        v: Matrix::identity(f, cols),
        v_inv: Matrix::identity(f, cols),
    };
    let n = rows.min(cols);
    for t in 0..n {
        let Some((pi, pj)) = min_entry(&w.a, t..rows, t..cols) else {
            break;
        };
        w.swap_rows(t, pi);
        w.swap_cols(t, pj);
        loop {
            let mut clean = true;
            for i in t + 1..rows {
                if w.a.get(i, t).is_zero() {
                    continue;
                }
                let (q, r) = w.a.get(i, t).div_rem(w.a.get(t, t));
                w.add_row(i, t, &q.neg());
                if !r.is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                if w.a.get(t, j).is_zero() {
                    continue;
                }
                let (q, r) = w.a.get(t, j).div_rem(w.a.get(t, t));
                w.add_col(j, t, &q.neg());
                if !r.is_zero() {
                    clean = false;
                }
            }
            if !clean {
                let col = min_entry(&w.a, t..rows, t..t + 1);
                let row = min_entry(&w.a, t..t + 1, t..cols);
                let pick = match (col, row) {
                    (Some(c), Some(r)) => {
                        if w.a.get(r.0, r.1).norm() < w.a.get(c.0, c.1).norm() {
                            r
                        } else {
                            c
                        }
                    }
                    (Some(c), None) => c,
                    (None, Some(r)) => r,
                    (None, None) => unreachable!("pivot row and column cannot both vanish"),
                };
                w.swap_rows(t, pick.0);
                w.swap_cols(t, pick.1);
                continue;
            }
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !w.a.get(t, t).divides(w.a.get(i, j))));
            match bad {
                Some(i) => {
                    let one = R::one(f);
                    w.add_row(t, i, &one);
                }
                None => break,
            }
        }
        let (_, unit) = w.a.get(t, t).normalize();
        if !unit.sub(&R::one(f)).is_zero() {
            w.scale_row(t, &unit);
        }
    }
    Smith { u: w.u, u_inv: w.u_inv, d: w.a, v: w.v, v_inv: w.v_inv }
}

fn min_entry<R: Euclidean>(
    a: &Matrix<R>,
    rows: std::ops::Range<usize>,
    cols: std::ops::Range<usize>,
) -> Option<(usize, usize)> {
    let mut best: Option<((usize, usize), usize)> = None;
    for i in rows {
        for j in cols.clone() {
            if let Some(n) = a.get(i, j).norm() {
                if best.is_none_or(|(_, b)| n < b) {
                    best = Some(((i, j), n));
                }
            }
        }
    }
    best.map(|(p, _)| p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::{Field, RingElem};
    use crate::polypid::{Laurent, Poly, PolyMat};

    const Q: Field = Field::Rational;

    fn p(c: &[i64]) -> Poly {
        Poly::from_ints(Q, c)
    }

    fn check<R: Euclidean>(m: &Matrix<R>, s: &Smith<R>) {
        assert_eq!(s.u.mul(m).mul(&s.v), s.d);
        assert!(s.u.mul(&s.u_inv).is_identity());
        assert!(s.v.mul(&s.v_inv).is_identity());
        let diag = s.diagonal();
        for w in diag.windows(2) {
            assert!(w[0].divides(&w[1]));
        }
        for x in &diag {
            assert_eq!(&x.normalize().0, x);
        }
        for i in 0..s.d.rows() {
            for j in 0..s.d.cols() {
                if i != j {
                    assert!(s.d.get(i, j).is_zero());
                }
            }
        }
    }

    #[test]
    fn diagonal_input() {
        let m = PolyMat::diagonal(Q, &[p(&[0, 1]), p(&[0, 0, 1])]);
        let s = smith_normal_form(&m);
        check(&m, &s);
        assert_eq!(s.invariant_factors(), vec![p(&[0, 1]), p(&[0, 0, 1])]);
    }

    #[test]
    fn upper_triangular_t() {
        let t = p(&[0, 1]);
        let m = PolyMat::from_rows(Q, vec![vec![t.clone(), t.clone()], vec![Poly::zero(Q), t.clone()]]);
        let s = smith_normal_form(&m);
        check(&m, &s);
        assert_eq!(s.invariant_factors(), vec![t.clone(), t]);
    }

    #[test]
    fn zero_matrix() {
        let m = PolyMat::zeros(Q, 2, 3);
        let s = smith_normal_form(&m);
        assert!(s.d.is_zero());
        assert!(s.u.is_identity());
        assert!(s.v.is_identity());
    }

    #[test]
    fn divisibility_fixup() {
        // diag(t, t+1) has invariant factors (1, t(t+1))
        let m = PolyMat::diagonal(Q, &[p(&[0, 1]), p(&[1, 1])]);
        let s = smith_normal_form(&m);
        check(&m, &s);
        assert_eq!(s.invariant_factors(), vec![p(&[0, 1, 1])]);
    }

    #[test]
    fn laurent_ring() {
        let t = Laurent::t_pow(Q, 1);
        let x = Laurent::from_poly(&p(&[-1, 1]));
        let m = Matrix::from_rows(Q, vec![vec![t.clone(), x.clone()], vec![Laurent::zero(Q), x.mul(&t)]]);
        let s = smith_normal_form(&m);
        check(&m, &s);
        assert_eq!(s.invariant_factors(), vec![x]);
    }
}
