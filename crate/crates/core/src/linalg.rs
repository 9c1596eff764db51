//! Small dense linear algebra over GF(q): reduced row echelon form and
//! nullspace bases. Matrices are row-major `Vec<Vec<Elem>>`.

use alloc::vec;
use alloc::vec::Vec;

use crate::gf::{Elem, Gf};

/// Reduces `rows` in place to reduced row echelon form (leading ones, zeros
/// above and below every pivot, pivot columns strictly increasing). Zero rows
/// sink to the bottom. Returns the rank.
#[allow(clippy::needless_range_loop)]
pub(crate) fn rref(field: &Gf, rows: &mut [Vec<Elem>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let ncols = rows[0].len();
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = field.inv(rows[rank][col]).expect("pivot is nonzero");
        for c in col..ncols {
            rows[rank][c] = field.mul(rows[rank][c], inv);
        }
        for r in 0..rows.len() {
            if r != rank && !rows[r][col].is_zero() {
                let factor = rows[r][col];
                for c in col..ncols {
                    let delta = field.mul(factor, rows[rank][c]);
                    rows[r][c] = field.sub(rows[r][c], delta);
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// A deterministic basis of the right nullspace of the constraint matrix:
/// all vectors v with row·v = 0 for every row. One basis vector per free
/// column of the RREF, in increasing free-column order.
pub(crate) fn nullspace(field: &Gf, constraints: &[Vec<Elem>], ncols: usize) -> Vec<Vec<Elem>> {
    let mut rows: Vec<Vec<Elem>> = constraints.to_vec();
    let rank = rref(field, &mut rows);
    rows.truncate(rank);

    let mut pivot_cols = Vec::with_capacity(rank);
    for row in &rows {
        let col = row.iter().position(|c| !c.is_zero()).expect("nonzero row");
        pivot_cols.push(col);
    }

    let mut basis = Vec::with_capacity(ncols - rank);
    for free in 0..ncols {
        if pivot_cols.contains(&free) {
            continue;
        }
        let mut v = vec![Elem::ZERO; ncols];
        v[free] = Elem::ONE;
        for (r, &pc) in pivot_cols.iter().enumerate() {
            v[pc] = field.neg(rows[r][free]);
        }
        basis.push(v);
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(field: &Gf, data: &[&[u64]]) -> Vec<Vec<Elem>> {
        data.iter()
            .map(|row| row.iter().map(|&v| field.elem(v).unwrap()).collect())
            .collect()
    }

    #[test]
    fn rref_canonicalizes_spans() {
        let f = Gf::new(3).unwrap();
        let mut a = m(&f, &[&[1, 2, 0, 1], &[0, 0, 1, 2]]);
        let mut b = m(&f, &[&[1, 2, 1, 0], &[0, 0, 2, 1]]);
        assert_eq!(rref(&f, &mut a), 2);
        assert_eq!(rref(&f, &mut b), 2);
        assert_eq!(a, b);
    }

    #[test]
    fn rank_deficient_rows_sink() {
        let f = Gf::new(2).unwrap();
        let mut a = m(&f, &[&[1, 1, 0], &[1, 1, 0], &[0, 1, 1]]);
        assert_eq!(rref(&f, &mut a), 2);
        assert!(a[2].iter().all(|c| c.is_zero()));
    }

    #[test]
    fn nullspace_vectors_satisfy_constraints() {
        let f = Gf::new(5).unwrap();
        let constraints = m(&f, &[&[1, 2, 3, 4], &[0, 1, 1, 0]]);
        let basis = nullspace(&f, &constraints, 4);
        assert_eq!(basis.len(), 2);
        for v in &basis {
            for row in &constraints {
                let mut acc = Elem::ZERO;
                for (a, b) in row.iter().zip(v) {
                    acc = f.add(acc, f.mul(*a, *b));
                }
                assert!(acc.is_zero());
            }
        }
    }

    #[test]
    fn nullspace_of_full_rank_square_matrix_is_trivial() {
        let f = Gf::new(2).unwrap();
        let constraints = m(&f, &[&[1, 0], &[1, 1]]);
        assert!(nullspace(&f, &constraints, 2).is_empty());
    }
}
