use super::{Mat, Scalar};

/// Reduced row-echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub reduced: Mat,
    pub pivots: Vec<usize>,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// Gauss-Jordan elimination in place, pivoting only in the first `limit`
/// columns (the remaining columns are carried along). Pivots are the
/// leftmost nonzero entry at or below the current row. Returns the pivot
/// columns.
fn eliminate(m: &mut Mat, limit: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..limit {
        if row == m.rows() {
            break;
        }
        let Some(p) = (row..m.rows()).find(|&i| !m.get(i, col).is_zero()) else {
            continue;
        };
        m.swap_rows(row, p);
        let inv = m.get(row, col).inv().expect("pivot is nonzero");
        if !inv.is_one() {
            m.scale_row(row, &inv);
        }
        for i in 0..m.rows() {
            if i == row {
                continue;
            }
            let c = m.get(i, col);
            if c.is_zero() {
                continue;
            }
            let c = -c;
            m.add_row_multiple(i, row, &c);
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

pub fn rref(m: &Mat) -> Echelon {
    let mut r = m.clone();
    let pivots = eliminate(&mut r, m.cols());
    Echelon { reduced: r, pivots }
}

/// RREF of `m` and the invertible `T` with `T m = reduced`.
pub fn rref_with_transform(m: &Mat) -> (Echelon, Mat) {
    let n = m.cols();
    let mut aug = m.hstack(&Mat::identity(m.field(), m.rows()));
    let pivots = eliminate(&mut aug, n);
    let reduced = aug.submatrix(0, m.rows(), 0, n);
    let t = aug.submatrix(0, m.rows(), n, n + m.rows());
    (Echelon { reduced, pivots }, t)
}

pub fn rank(m: &Mat) -> usize {
    rref(m).rank()
}

pub fn nullity(m: &Mat) -> usize {
    m.cols() - rank(m)
}

/// Basis of the right kernel, one column per free variable, read off the
/// reduced form (free variable set to 1, the others to 0).
pub fn kernel_basis(m: &Mat) -> Mat {
    let e = rref(m);
    kernel_from_echelon(&e, m.cols())
}

pub(crate) fn kernel_from_echelon(e: &Echelon, cols: usize) -> Mat {
    let field = e.reduced.field();
    let free: Vec<usize> = (0..cols).filter(|c| !e.pivots.contains(c)).collect();
    let mut k = Mat::zeros(field, cols, free.len());
    for (idx, &f) in free.iter().enumerate() {
        k.set(f, idx, field.one());
        for (r, &p) in e.pivots.iter().enumerate() {
            let v = e.reduced.get(r, f);
            if !v.is_zero() {
                k.set(p, idx, -v);
            }
        }
    }
    k
}

/// Some `X` with `m X = b`, free variables set to zero; `None` if `b` has a
/// column outside the column space of `m`.
pub fn solve(m: &Mat, b: &Mat) -> Option<Mat> {
    assert_eq!(m.rows(), b.rows(), "solve: row mismatch");
    let n = m.cols();
    let mut aug = m.hstack(b);
    let pivots = eliminate(&mut aug, n);
    let r = pivots.len();
    for i in r..m.rows() {
        for j in 0..b.cols() {
            if !aug.get(i, n + j).is_zero() {
                return None;
            }
        }
    }
    let mut x = Mat::zeros(m.field(), n, b.cols());
    for (i, &p) in pivots.iter().enumerate() {
        for j in 0..b.cols() {
            x.set(p, j, aug.get(i, n + j).clone());
        }
    }
    Some(x)
}

pub fn inverse(m: &Mat) -> Option<Mat> {
    if !m.is_square() {
        return None;
    }
    solve(m, &Mat::identity(m.field(), m.rows())).filter(|_| rank(m) == m.rows())
}

/// `L` with `L m = I` for `m` of full column rank.
pub fn left_inverse(m: &Mat) -> Option<Mat> {
    let (e, t) = rref_with_transform(m);
    if e.rank() != m.cols() {
        return None;
    }
    Some(t.submatrix(0, m.cols(), 0, m.rows()))
}

/// Columns of `m` at its pivot positions: a basis of the column space.
pub fn image_basis(m: &Mat) -> Mat {
    let e = rref(m);
    m.select_cols(&e.pivots)
}

/// Indices of standard basis vectors completing the columns of `m` to a
/// basis of the ambient space.
pub fn complement_indices(m: &Mat) -> Vec<usize> {
    let aug = m.hstack(&Mat::identity(m.field(), m.rows()));
    let e = rref(&aug);
    e.pivots.iter().filter(|&&p| p >= m.cols()).map(|p| p - m.cols()).collect()
}

/// Dot product of two equal-length vectors.
pub fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    let field = a.first().map(Scalar::field).unwrap_or(super::Field::Rational);
    a.iter().zip(b).fold(field.zero(), |acc, (x, y)| &acc + &(x * y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::Field;

    const Q: Field = Field::Rational;

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&Mat::identity(Q, 3)), 3);
        assert_eq!(rank(&Mat::zeros(Q, 2, 5)), 0);
        assert_eq!(rank(&Mat::from_ints(Q, &[&[1, 2], &[2, 4]])), 1);
    }

    #[test]
    fn kernel_examples() {
        let k = kernel_basis(&Mat::from_ints(Q, &[&[1, 1]]));
        assert_eq!(k.cols(), 1);
        assert_eq!(k.get(0, 0), &(-k.get(1, 0)));
        assert_eq!(kernel_basis(&Mat::identity(Q, 4)).cols(), 0);
        let m = Mat::from_ints(Q, &[&[1, 2], &[2, 4]]);
        let k = kernel_basis(&m);
        assert_eq!(k.cols(), 1);
        // proportional to (2, -1)
        let two = Q.int(2);
        assert_eq!(k.get(0, 0), &(&two * &(-k.get(1, 0))));
        assert!(m.mul(&k).is_zero());
    }

    #[test]
    fn solve_examples() {
        let b = Mat::from_ints(Q, &[&[3, 1], &[-2, 5]]);
        assert_eq!(solve(&Mat::identity(Q, 2), &b), Some(b));
        let m = Mat::from_ints(Q, &[&[1, 0], &[0, 0]]);
        assert_eq!(solve(&m, &Mat::from_ints(Q, &[&[0], &[1]])), None);
        let x = solve(&Mat::from_ints(Q, &[&[2]]), &Mat::from_ints(Q, &[&[1]])).unwrap();
        assert_eq!(x.get(0, 0), &(&Q.one() / &Q.int(2)));
    }

    #[test]
    fn inverses() {
        let f = Field::Prime(7);
        let m = Mat::from_ints(f, &[&[1, 2], &[3, 4]]);
        let inv = inverse(&m).unwrap();
        assert!(m.mul(&inv).is_identity());
        assert!(inverse(&Mat::from_ints(f, &[&[1, 2], &[2, 4]])).is_none());
        let tall = Mat::from_ints(Q, &[&[1, 0], &[1, 1], &[0, 3]]);
        let l = left_inverse(&tall).unwrap();
        assert!(l.mul(&tall).is_identity());
        assert_eq!(complement_indices(&tall), vec![0]);
    }

}
