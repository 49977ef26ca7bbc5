//! Linear systems over `Z` and over mixed moduli, all routed through the
//! Smith normal form.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::snf::smith_decomposition;
use super::IntMatrix;

/// A basis of `{x ∈ Zⁿ : B·x = 0}`.
pub fn integer_kernel(b: &IntMatrix) -> Vec<Vec<BigInt>> {
    let s = smith_decomposition(b);
    (s.rank..b.num_cols()).map(|j| s.v.col(j)).collect()
}

/// Some `x ∈ Zⁿ` with `B·x = rhs`, or `None` if no integer solution exists.
pub fn solve_integer(b: &IntMatrix, rhs: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(rhs.len(), b.num_rows(), "right-hand side has wrong length");
    let s = smith_decomposition(b);
    let c = s.u.mul_vec(rhs);
    let mut w = vec![BigInt::zero(); b.num_cols()];
    for (i, ci) in c.iter().enumerate() {
        if i < s.rank {
            let (q, r) = ci.div_rem(&s.d[(i, i)]);
            if !r.is_zero() {
                return None;
            }
            w[i] = q;
        } else if !ci.is_zero() {
            return None;
        }
    }
    Some(s.v.mul_vec(&w))
}

/// Outcome of [`solve_mixed_congruences`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CongruenceSolution {
    Solution(Vec<BigInt>),
    /// Certified: no integer vector satisfies every row.
    Unsolvable,
}

impl CongruenceSolution {
    pub fn into_option(self) -> Option<Vec<BigInt>> {
        match self {
            CongruenceSolution::Solution(s) => Some(s),
            CongruenceSolution::Unsolvable => None,
        }
    }

    pub fn is_solvable(&self) -> bool {
        matches!(self, CongruenceSolution::Solution(_))
    }
}

/// Solves `(A·s)_i ≡ b_i (mod moduli_i)` for every row, where a zero modulus
/// means exact equality.
///
/// When every modulus is nonzero the returned vector is reduced into
/// `[0, lcm(moduli))`.
pub fn solve_mixed_congruences(
    a: &IntMatrix,
    b: &[BigInt],
    moduli: &[BigInt],
) -> CongruenceSolution {
    assert_eq!(b.len(), a.num_rows(), "right-hand side has wrong length");
    assert_eq!(moduli.len(), a.num_rows(), "one modulus per row required");
    let n = a.num_cols();

    // [A | -diag(moduli)] over the rows with a nonzero modulus.
    let slack: Vec<usize> = (0..moduli.len())
        .filter(|&i| !moduli[i].is_zero())
        .collect();
    let mut ext = IntMatrix::zeros(a.num_rows(), n + slack.len());
    for i in 0..a.num_rows() {
        for j in 0..n {
            ext[(i, j)] = a[(i, j)].clone();
        }
    }
    for (t, &i) in slack.iter().enumerate() {
        ext[(i, n + t)] = -moduli[i].abs();
    }

    match solve_integer(&ext, b) {
        None => CongruenceSolution::Unsolvable,
        Some(mut z) => {
            z.truncate(n);
            if !moduli.is_empty() && moduli.iter().all(|m| !m.is_zero()) {
                let l = moduli
                    .iter()
                    .fold(BigInt::one(), |acc, m| acc.lcm(&m.abs()));
                for x in &mut z {
                    *x = x.mod_floor(&l);
                }
            }
            CongruenceSolution::Solution(z)
        }
    }
}
