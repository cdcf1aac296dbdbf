//! Dense Gaussian elimination over a coefficient field.

use crate::coeff::{CoeffField, Repr};

/// Reduces `rows` to reduced row echelon form in place and returns the pivot
/// columns. Zero rows are dropped.
pub(crate) fn rref(field: &CoeffField, rows: &mut Vec<Vec<Repr>>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !field.is_zero_r(&rows[i][c])) else {
            continue;
        };
        rows.swap(r, p);
        let inv = field.inv_r(&rows[r][c]).unwrap();
        for x in rows[r].iter_mut().skip(c) {
            *x = field.mul_r(x, &inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || field.is_zero_r(&row[c]) {
                continue;
            }
            let factor = row[c].clone();
            for (j, pv) in pivot_row.iter().enumerate().skip(c) {
                if !field.is_zero_r(pv) {
                    row[j] = field.sub_r(&row[j], &field.mul_r(&factor, pv));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

pub(crate) fn rank(field: &CoeffField, rows: &[Vec<Repr>], ncols: usize) -> usize {
    let mut m = rows.to_vec();
    rref(field, &mut m, ncols).len()
}

/// A basis of the right kernel `{v : M v = 0}`.
pub(crate) fn kernel(field: &CoeffField, rows: &[Vec<Repr>], ncols: usize) -> Vec<Vec<Repr>> {
    let mut m = rows.to_vec();
    let pivots = rref(field, &mut m, ncols);
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![field.zero_r(); ncols];
        v[free] = field.one_r();
        for (row, &pc) in m.iter().zip(&pivots) {
            v[pc] = field.neg_r(&row[free]);
        }
        basis.push(v);
    }
    basis
}

/// One solution of `M x = b` (free variables set to zero), if any.
pub(crate) fn solve(field: &CoeffField, rows: &[Vec<Repr>], rhs: &[Repr], ncols: usize) -> Option<Vec<Repr>> {
    let mut m: Vec<Vec<Repr>> = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut r = r.clone();
            r.push(b.clone());
            r
        })
        .collect();
    let pivots = rref(field, &mut m, ncols + 1);
    if pivots.last() == Some(&ncols) {
        return None;
    }
    let mut x = vec![field.zero_r(); ncols];
    for (row, &pc) in m.iter().zip(&pivots) {
        x[pc] = row[ncols].clone();
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(rows: &[&[i64]]) -> (CoeffField, Vec<Vec<Repr>>) {
        let f = CoeffField::rationals();
        let m = rows.iter().map(|r| r.iter().map(|&x| f.int_r(&BigInt::from(x))).collect()).collect();
        (f, m)
    }

    #[test]
    fn kernel_of_rank_one() {
        let (f, m) = q(&[&[1, 2, 3], &[2, 4, 6]]);
        assert_eq!(rank(&f, &m, 3), 1);
        let k = kernel(&f, &m, 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            for row in &m {
                let dot = row.iter().zip(v).fold(f.zero_r(), |acc, (a, b)| f.add_r(&acc, &f.mul_r(a, b)));
                assert!(f.is_zero_r(&dot));
            }
        }
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let (f, m) = q(&[&[1, 1], &[1, -1]]);
        let rhs = vec![f.int_r(&3.into()), f.int_r(&1.into())];
        let x = solve(&f, &m, &rhs, 2).unwrap();
        assert_eq!(x, vec![f.int_r(&2.into()), f.int_r(&1.into())]);
        let (f, m) = q(&[&[1, 1], &[2, 2]]);
        let rhs = vec![f.int_r(&1.into()), f.int_r(&3.into())];
        assert!(solve(&f, &m, &rhs, 2).is_none());
    }
}
