//! Prime-power congruence systems attached to independent characters.
//!
//! Let `H = ⊕ ⟨ζ_j⟩` with `ord ζ_j = h_j`, and let `χ_1, …, χ_t` be
//! `p`-torsion elements of `H` of orders `d_i` spanning a direct sum, with
//! `χ_i = Σ a_ij ζ_j`. For any target `x` and `γ ≥ 1` the system
//!
//! ```text
//! Σ_j c_ij s_j ≡ x_i  (mod p^γ),    c_ij = d_i a_ij / h_j
//! ```
//!
//! is solvable. [`solve_lifting`] solves it the constructive way: the
//! coefficient matrix has full row rank modulo `p`, which gives a solution
//! modulo `p`; each further power is reached by correcting with `δ·p^level`
//! where `δ` solves a mod-`p` system with the same matrix.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::abgrp::IntMatrix;
use crate::arith::{is_prime, mod_inverse, pow, prime_power};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CongruenceError {
    /// The hypotheses that guarantee solvability do not hold, so no solution
    /// is attempted. Distinct from an unsolvable system.
    #[error("invalid hypotheses: {0}")]
    InvalidHypotheses(String),
    #[error("moduli {0} and {1} are not coprime")]
    NonCoprimeModuli(BigInt, BigInt),
    #[error("inconsistent input: {0}")]
    Malformed(String),
}

/// One instance of the character congruence system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LemmaSystem {
    /// Orders `h_j` of the generators `ζ_j`.
    pub h: Vec<BigInt>,
    /// `t × m` components `a_ij`, with `0 ≤ a_ij < h_j`.
    pub a: IntMatrix,
    /// Orders `d_i` of the characters.
    pub d: Vec<BigInt>,
    pub p: BigInt,
    pub gamma: u32,
    pub x: Vec<BigInt>,
}

impl LemmaSystem {
    pub fn modulus(&self) -> BigInt {
        pow(&self.p, self.gamma)
    }

    /// Checks every hypothesis and returns the coefficient matrix `c_ij`.
    pub fn validate(&self) -> Result<IntMatrix, CongruenceError> {
        let invalid = |m: String| Err(CongruenceError::InvalidHypotheses(m));
        let (t, m) = (self.a.num_rows(), self.a.num_cols());
        if self.h.len() != m || self.d.len() != t || self.x.len() != t {
            return Err(CongruenceError::Malformed(format!(
                "a is {t}x{m} but |h| = {}, |d| = {}, |x| = {}",
                self.h.len(),
                self.d.len(),
                self.x.len()
            )));
        }
        if !is_prime(&self.p) {
            return invalid(format!("{} is not prime", self.p));
        }
        if self.gamma == 0 {
            return invalid("gamma must be at least 1".into());
        }
        if let Some(j) = self.h.iter().position(|h| *h < BigInt::one()) {
            return invalid(format!("h_{j} must be positive"));
        }

        let mut c = IntMatrix::zeros(t, m);
        for i in 0..t {
            match prime_power(&self.d[i]) {
                Some((q, _)) if q == self.p => {}
                _ => return invalid(format!("d_{i} = {} is not a power of {}", self.d[i], self.p)),
            }
            let mut order = BigInt::one();
            for j in 0..m {
                let a = &self.a[(i, j)];
                if a.sign() == num_bigint::Sign::Minus || *a >= self.h[j] {
                    return invalid(format!("a_{i}{j} = {a} is outside [0, {})", self.h[j]));
                }
                let num = &self.d[i] * a;
                if !num.is_multiple_of(&self.h[j]) {
                    return invalid(format!("d_{i}·χ_{i} is nonzero in component {j}"));
                }
                c[(i, j)] = num / &self.h[j];
                order = order.lcm(&(&self.h[j] / a.gcd(&self.h[j])));
            }
            if order != self.d[i] {
                return invalid(format!("χ_{i} has order {order}, declared {}", self.d[i]));
            }
        }
        let r = rank_mod_p(&c, &self.p);
        if r != t {
            return invalid(format!(
                "characters do not span a direct sum: rank mod {} is {r}, expected {t}",
                self.p
            ));
        }
        Ok(c)
    }

    pub fn is_satisfied_by(&self, s: &[BigInt]) -> bool {
        let Ok(c) = self.validate() else {
            return false;
        };
        let q = self.modulus();
        c.mul_vec(s)
            .iter()
            .zip(&self.x)
            .all(|(l, r)| (l - r).is_multiple_of(&q))
    }
}

/// Row-reduces `m` modulo `p` and returns `(reduced, pivots)` where `pivots`
/// lists `(row, col)`. The augmented column, if any, is carried along but never
/// used as a pivot column.
fn eliminate_mod_p(mut m: IntMatrix, p: &BigInt, pivot_cols: usize) -> (IntMatrix, Vec<(usize, usize)>) {
    let rows = m.num_rows();
    for i in 0..rows {
        for j in 0..m.num_cols() {
            m[(i, j)] = m[(i, j)].mod_floor(p);
        }
    }
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..pivot_cols {
        if r == rows {
            break;
        }
        // lowest row index wins
        let Some(i) = (r..rows).find(|&i| !m[(i, col)].is_zero()) else {
            continue;
        };
        m.swap_rows(r, i);
        let inv = mod_inverse(&m[(r, col)], p).expect("nonzero residue mod a prime");
        for j in 0..m.num_cols() {
            m[(r, j)] = (&m[(r, j)] * &inv).mod_floor(p);
        }
        for i2 in 0..rows {
            if i2 != r && !m[(i2, col)].is_zero() {
                let f = -m[(i2, col)].clone();
                m.add_row_multiple(i2, r, &f);
                for j in 0..m.num_cols() {
                    m[(i2, j)] = m[(i2, j)].mod_floor(p);
                }
            }
        }
        pivots.push((r, col));
        r += 1;
    }
    (m, pivots)
}

pub fn rank_mod_p(c: &IntMatrix, p: &BigInt) -> usize {
    eliminate_mod_p(c.clone(), p, c.num_cols()).1.len()
}

/// Solves `c·s ≡ rhs (mod p)` by Gaussian elimination over `F_p`. Free
/// variables are set to zero.
pub fn solve_mod_p(c: &IntMatrix, rhs: &[BigInt], p: &BigInt) -> Option<Vec<BigInt>> {
    let m = c.num_cols();
    let aug = c.hstack(&IntMatrix::from_cols(&[rhs.to_vec()], c.num_rows()));
    let (red, pivots) = eliminate_mod_p(aug, p, m);
    let r = pivots.len();
    if (r..red.num_rows()).any(|i| !red[(i, m)].is_zero()) {
        return None;
    }
    let mut s = vec![BigInt::zero(); m];
    for (row, col) in pivots {
        s[col] = red[(row, m)].clone();
    }
    Some(s)
}

/// Solves the system one exponent level at a time. The result is reduced
/// into `[0, p^γ)`.
pub fn solve_lifting(sys: &LemmaSystem) -> Result<Vec<BigInt>, CongruenceError> {
    let c = sys.validate()?;
    let p = &sys.p;
    let base_rhs: Vec<BigInt> = sys.x.iter().map(|x| x.mod_floor(p)).collect();
    let mut s = solve_mod_p(&c, &base_rhs, p)
        .ok_or_else(|| CongruenceError::InvalidHypotheses("base system has no solution mod p".into()))?;

    let mut level_mod = p.clone();
    for _ in 1..sys.gamma {
        // Σ c s = x + p^level·y
        let y: Vec<BigInt> = c
            .mul_vec(&s)
            .iter()
            .zip(&sys.x)
            .map(|(l, x)| {
                let diff = l - x;
                debug_assert!(diff.is_multiple_of(&level_mod));
                diff / &level_mod
            })
            .collect();
        let rhs: Vec<BigInt> = y.iter().map(|v| (-v).mod_floor(p)).collect();
        let delta = solve_mod_p(&c, &rhs, p).ok_or_else(|| {
            CongruenceError::InvalidHypotheses("lifting step has no solution mod p".into())
        })?;
        for (sj, dj) in s.iter_mut().zip(&delta) {
            *sj += dj * &level_mod;
        }
        level_mod *= p;
    }
    let q = sys.modulus();
    Ok(s.into_iter().map(|v| v.mod_floor(&q)).collect())
}

/// Recombines per-modulus solutions component-wise. Moduli must be positive
/// and pairwise coprime; the output lies in `[0, Π moduli)`.
pub fn crt_combine(per_prime: &[(Vec<BigInt>, BigInt)]) -> Result<Vec<BigInt>, CongruenceError> {
    let Some((first, _)) = per_prime.first() else {
        return Err(CongruenceError::Malformed("no congruences to combine".into()));
    };
    let len = first.len();
    for (i, (v, m)) in per_prime.iter().enumerate() {
        if v.len() != len {
            return Err(CongruenceError::Malformed("solution vectors differ in length".into()));
        }
        if *m < BigInt::one() {
            return Err(CongruenceError::Malformed(format!("modulus {m} is not positive")));
        }
        for (_, m2) in &per_prime[..i] {
            if !m.gcd(m2).is_one() {
                return Err(CongruenceError::NonCoprimeModuli(m2.clone(), m.clone()));
            }
        }
    }

    let mut acc: Vec<BigInt> = vec![BigInt::zero(); len];
    let mut modulus = BigInt::one();
    for (v, m) in per_prime {
        let inv = mod_inverse(&modulus, m).expect("moduli are coprime");
        for (a, b) in acc.iter_mut().zip(v) {
            let t = ((b - &*a) * &inv).mod_floor(m);
            *a += &modulus * t;
        }
        modulus *= m;
    }
    Ok(acc.into_iter().map(|a| a.mod_floor(&modulus)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn b(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn z4_with_twice_generator() {
        let sys = LemmaSystem {
            h: v(&[4]),
            a: IntMatrix::from_i64(&[&[2]]),
            d: v(&[2]),
            p: b(2),
            gamma: 1,
            x: v(&[1]),
        };
        assert_eq!(sys.validate().unwrap(), IntMatrix::from_i64(&[&[1]]));
        assert_eq!(solve_lifting(&sys).unwrap(), v(&[1]));
    }

    #[test]
    fn homogeneous_system_gives_zero() {
        let sys = LemmaSystem {
            h: v(&[8, 4]),
            a: IntMatrix::from_i64(&[&[1, 0], &[0, 2]]),
            d: v(&[8, 2]),
            p: b(2),
            gamma: 5,
            x: v(&[0, 0]),
        };
        assert_eq!(solve_lifting(&sys).unwrap(), v(&[0, 0]));
    }

    #[test]
    fn nested_characters_are_rejected() {
        // χ_2 = 2ζ_1 = 2χ_1 lies inside ⟨χ_1⟩
        let sys = LemmaSystem {
            h: v(&[4, 2]),
            a: IntMatrix::from_i64(&[&[1, 0], &[2, 0]]),
            d: v(&[4, 2]),
            p: b(2),
            gamma: 2,
            x: v(&[1, 1]),
        };
        assert!(matches!(
            solve_lifting(&sys),
            Err(CongruenceError::InvalidHypotheses(_))
        ));
    }

    #[test]
    fn shifted_second_character_is_still_independent() {
        // χ_1 = ζ_1, χ_2 = 2ζ_1 + ζ_2 in Z/4 ⊕ Z/2: ⟨χ_2⟩ meets ⟨χ_1⟩ trivially
        let sys = LemmaSystem {
            h: v(&[4, 2]),
            a: IntMatrix::from_i64(&[&[1, 0], &[2, 1]]),
            d: v(&[4, 2]),
            p: b(2),
            gamma: 3,
            x: v(&[3, 5]),
        };
        let s = solve_lifting(&sys).unwrap();
        assert!(sys.is_satisfied_by(&s));
    }

    #[test]
    fn declared_order_must_match() {
        let sys = LemmaSystem {
            h: v(&[4]),
            a: IntMatrix::from_i64(&[&[2]]),
            d: v(&[4]),
            p: b(2),
            gamma: 1,
            x: v(&[1]),
        };
        assert!(sys.validate().is_err());
    }

    #[test]
    fn crt_examples() {
        assert_eq!(crt_combine(&[(v(&[1]), b(2)), (v(&[2]), b(3))]).unwrap(), v(&[5]));
        assert_eq!(crt_combine(&[(v(&[3, 1]), b(7))]).unwrap(), v(&[3, 1]));
        assert_eq!(crt_combine(&[(v(&[0]), b(4)), (v(&[0]), b(9))]).unwrap(), v(&[0]));
        assert!(matches!(
            crt_combine(&[(v(&[0]), b(4)), (v(&[1]), b(6))]),
            Err(CongruenceError::NonCoprimeModuli(_, _))
        ));
    }

    #[test]
    fn mod_p_pivots_prefer_low_rows() {
        let c = IntMatrix::from_i64(&[&[0, 1], &[1, 1]]);
        let s = solve_mod_p(&c, &v(&[1, 0]), &b(3)).unwrap();
        assert_eq!(c.mul_vec(&s).iter().map(|x| x.mod_floor(&b(3))).collect::<Vec<_>>(), v(&[1, 0]));
    }
}
