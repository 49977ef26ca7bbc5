//! Smith normal form over `Z`.
//!
//! Pivots are the smallest-magnitude nonzero entry of the active block. Row
//! operations are recorded in `U`, column operations in `V`, and the inverse
//! of every column operation in `V⁻¹` so that cokernel coordinates can be
//! lifted back without a separate inversion.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::IntMatrix;

/// Full output of [`smith_decomposition`].
#[derive(Clone, Debug)]
pub struct SmithForm {
    /// Left transform, `U·M·V = D`.
    pub u: IntMatrix,
    pub d: IntMatrix,
    /// Right transform.
    pub v: IntMatrix,
    /// Inverse of `v`.
    pub v_inv: IntMatrix,
    /// Number of nonzero diagonal entries.
    pub rank: usize,
}

impl SmithForm {
    /// The nonzero diagonal entries `d_1 | d_2 | …`.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.rank).map(|i| self.d[(i, i)].clone()).collect()
    }
}

/// Returns `(U, D, V)` with `U·M·V = D`, `U` and `V` unimodular and `D`
/// diagonal with a nonnegative divisibility chain.
pub fn snf(m: &IntMatrix) -> (IntMatrix, IntMatrix, IntMatrix) {
    let s = smith_decomposition(m);
    (s.u, s.d, s.v)
}

pub fn smith_decomposition(m: &IntMatrix) -> SmithForm {
    let rows = m.num_rows();
    let cols = m.num_cols();
    let mut a = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    let mut v_inv = IntMatrix::identity(cols);

    let mut ops = Ops {
        a: &mut a,
        u: &mut u,
        v: &mut v,
        v_inv: &mut v_inv,
    };

    let mut t = 0;
    while t < rows.min(cols) {
        let Some((pi, pj)) = smallest_in_block(ops.a, t) else {
            break;
        };
        ops.swap_rows(t, pi);
        ops.swap_cols(t, pj);

        loop {
            let pivot = ops.a[(t, t)].clone();
            for i in t + 1..rows {
                if !ops.a[(i, t)].is_zero() {
                    let q = ops.a[(i, t)].div_floor(&pivot);
                    ops.add_row_multiple(i, t, &-q);
                }
            }
            for j in t + 1..cols {
                if !ops.a[(t, j)].is_zero() {
                    let q = ops.a[(t, j)].div_floor(&pivot);
                    ops.add_col_multiple(j, t, &-q);
                }
            }

            // Leftover remainders are strictly smaller than the pivot; promote
            // the smallest one and sweep again.
            let leftover = (t + 1..rows)
                .map(|i| (i, t))
                .chain((t + 1..cols).map(|j| (t, j)))
                .filter(|&(i, j)| !ops.a[(i, j)].is_zero())
                .min_by(|&x, &y| ops.a[x].abs().cmp(&ops.a[y].abs()));
            if let Some((i, j)) = leftover {
                ops.swap_rows(t, i);
                ops.swap_cols(t, j);
                continue;
            }

            let offender = (t + 1..rows).find(|&i| {
                (t + 1..cols).any(|j| !ops.a[(i, j)].is_multiple_of(&pivot))
            });
            match offender {
                Some(i) => ops.add_row_multiple(t, i, &BigInt::from(1)),
                None => break,
            }
        }

        if ops.a[(t, t)].is_negative() {
            ops.negate_row(t);
        }
        t += 1;
    }

    SmithForm {
        u,
        d: a,
        v,
        v_inv,
        rank: t,
    }
}

fn smallest_in_block(a: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<((usize, usize), BigInt)> = None;
    for i in t..a.num_rows() {
        for j in t..a.num_cols() {
            let x = &a[(i, j)];
            if x.is_zero() {
                continue;
            }
            let mag = x.abs();
            if best.as_ref().is_none_or(|(_, b)| mag < *b) {
                best = Some(((i, j), mag));
            }
        }
    }
    best.map(|(pos, _)| pos)
}

struct Ops<'a> {
    a: &'a mut IntMatrix,
    u: &'a mut IntMatrix,
    v: &'a mut IntMatrix,
    v_inv: &'a mut IntMatrix,
}

impl Ops<'_> {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        self.u.swap_rows(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        self.v.swap_cols(i, j);
        self.v_inv.swap_rows(i, j);
    }

    fn add_row_multiple(&mut self, dst: usize, src: usize, q: &BigInt) {
        self.a.add_row_multiple(dst, src, q);
        self.u.add_row_multiple(dst, src, q);
    }

    /// `col[dst] += q·col[src]`, i.e. right multiplication by `I + q·E(src,dst)`,
    /// whose inverse acts on `V⁻¹` from the left as `row[src] -= q·row[dst]`.
    fn add_col_multiple(&mut self, dst: usize, src: usize, q: &BigInt) {
        self.a.add_col_multiple(dst, src, q);
        self.v.add_col_multiple(dst, src, q);
        self.v_inv.add_row_multiple(src, dst, &-q);
    }

    fn negate_row(&mut self, i: usize) {
        self.a.negate_row(i);
        self.u.negate_row(i);
    }
}
