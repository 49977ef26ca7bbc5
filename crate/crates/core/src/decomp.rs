//! Decompositions `D = C·M` of the branch classes over a direct-sum basis
//! `M_1, …, M_q` of `A = ⟨D_j, L_χ⟩`, with every column of `C` in `N`.
//!
//! Torsion generators have prime-power order. Their coefficients are only
//! defined modulo `o(M_l)`, and the construction moves them within that class
//! until each column satisfies `d_i λ_il ≡ Σ_j (d_i a_ij / m_j) c_jl (mod d_i)`
//! for every character, which is the membership test for `N`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::Rng;
use thiserror::Error;

use crate::abgrp::{canonicalize, solve_mixed_congruences, FgAbGroup, GroupElement, IntMatrix, Subgroup};
use crate::arith::{factorize, mod_inverse, pow, prime_power, valuation};
use crate::congruence::{solve_lifting, LemmaSystem};
use crate::cover::{check_characteristic_relations, validate_building_data, BuildingData, PicardModel};
use crate::report::ValidationReport;
use crate::topology::{compute_n, passes_relation_test};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecompError {
    #[error("invalid input:\n{0}")]
    InvalidInput(ValidationReport),
    #[error("character generator {index} has order {order}, which is not a prime power")]
    NotPrimePower { index: usize, order: BigInt },
    #[error("decomposition failed: {0}")]
    DecompositionFailure(String),
}

/// `A = ⊕ ⟨M_l⟩` and `D_j = Σ_l c_jl M_l`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub m: Vec<GroupElement>,
    /// `o(M_l)`, with `0` for free generators.
    pub orders: Vec<BigInt>,
    /// `k × q`.
    pub c: IntMatrix,
}

impl Decomposition {
    pub fn num_generators(&self) -> usize {
        self.m.len()
    }

    /// `Σ_l c_jl M_l`.
    pub fn reconstruct(&self, a: &FgAbGroup, j: usize) -> GroupElement {
        a.combine(self.c.row(j), &self.m)
    }
}

/// The prime-power basis of `A`: `(d_u/p^e)·e_u` for each torsion factor `d_u`
/// and each `p^e ∥ d_u`, sorted by `(p, p^e)`, followed by the free generators.
pub fn prime_power_basis(a: &FgAbGroup) -> (Vec<GroupElement>, Vec<BigInt>) {
    let mut torsion: Vec<(BigInt, BigInt, GroupElement)> = Vec::new();
    for (u, d) in a.invariants().iter().enumerate() {
        for (p, e) in factorize(d) {
            let pe = pow(&p, e);
            let eta = a.scale(&(d / &pe), &a.generator(u));
            torsion.push((p, pe, eta));
        }
    }
    torsion.sort_by(|x, y| (&x.0, &x.1).cmp(&(&y.0, &y.1)));
    let (mut basis, mut orders): (Vec<_>, Vec<_>) = torsion.into_iter().map(|(_, o, g)| (g, o)).unzip();
    for u in a.torsion_rank()..a.num_generators() {
        basis.push(a.generator(u));
        orders.push(BigInt::zero());
    }
    (basis, orders)
}

/// Applies a random automorphism of `A` to a direct-sum basis: transvections
/// `M_l ↦ M_l + c·M_l'` with `o(M_l') | c·o(M_l)`, then unit rescalings.
/// Orders are preserved.
pub fn randomize_basis<R: Rng + ?Sized>(
    a: &FgAbGroup,
    basis: &[GroupElement],
    orders: &[BigInt],
    rng: &mut R,
    steps: usize,
) -> Vec<GroupElement> {
    let mut b = basis.to_vec();
    let q = b.len();
    if q == 0 {
        return b;
    }
    for _ in 0..steps {
        let (l, l2) = (rng.gen_range(0..q), rng.gen_range(0..q));
        if l == l2 {
            continue;
        }
        let (o, o2) = (&orders[l], &orders[l2]);
        // smallest admissible multiplier
        let unit = if o.is_zero() {
            BigInt::one()
        } else if o2.is_zero() {
            continue;
        } else {
            o2 / o2.gcd(o)
        };
        let c = unit * BigInt::from(rng.gen_range(-3i64..=3));
        let add = a.scale(&c, &b[l2]);
        b[l] = a.add(&b[l], &add);
    }
    for l in 0..q {
        let o = &orders[l];
        let u = if o.is_zero() {
            if rng.gen_bool(0.5) { BigInt::one() } else { -BigInt::one() }
        } else {
            loop {
                let u = BigInt::from(rng.gen_range(1i64..=64)).mod_floor(o);
                if u.gcd(o).is_one() {
                    break u;
                }
            }
        };
        b[l] = a.scale(&u, &b[l]);
    }
    b
}

/// Per-column result of `Σ_j a_ij c_jl / m_j ∈ Z` for every `i`, cross-checked
/// against membership in the computed `N`.
pub fn verify_columns_in_n(bd: &BuildingData, c: &IntMatrix) -> ValidationReport {
    let mut r = ValidationReport::new();
    let k = bd.num_branches();
    if c.num_rows() != k {
        r.push("column_dimension", format!("C has {} rows, expected {k}", c.num_rows()));
        return r;
    }
    let n = compute_n(bd).ok();
    for l in 0..c.num_cols() {
        let col = c.col(l);
        let dual = passes_relation_test(bd, &col);
        if !dual {
            r.push(
                "column_not_in_n",
                format!("column {} = ({}) fails the character test", l + 1, join(&col)),
            );
        }
        if let Some(n) = &n {
            let reduced: Vec<BigInt> = col
                .iter()
                .zip(&bd.branches)
                .map(|(x, b)| x.mod_floor(&b.order))
                .collect();
            if n.contains(&reduced) != dual {
                r.push(
                    "membership_test_disagreement",
                    format!("column {} is classified differently by the kernel test", l + 1),
                );
            }
        }
    }
    r
}

fn join(v: &[BigInt]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

fn check_preconditions(bd: &BuildingData, pic: &PicardModel) -> Result<(), DecompError> {
    let mut r = validate_building_data(bd);
    if r.is_valid() {
        r.extend(check_characteristic_relations(bd, pic));
        r.extend(pic.validate());
    }
    if !r.is_valid() {
        return Err(DecompError::InvalidInput(r));
    }
    for (index, c) in bd.chi_gens.iter().enumerate() {
        if !c.order.is_one() && prime_power(&c.order).is_none() {
            return Err(DecompError::NotPrimePower {
                index,
                order: c.order.clone(),
            });
        }
    }
    Ok(())
}

/// Coordinates of `x` in a direct-sum basis, torsion ones reduced mod order.
fn coordinates(a: &FgAbGroup, basis: &[GroupElement], orders: &[BigInt], x: &GroupElement) -> Result<Vec<BigInt>, DecompError> {
    let cols: Vec<Vec<BigInt>> = basis.iter().map(|b| b.coords().to_vec()).collect();
    let m = IntMatrix::from_cols(&cols, a.num_generators());
    let s = solve_mixed_congruences(&m, x.coords(), &a.moduli())
        .into_option()
        .ok_or_else(|| DecompError::DecompositionFailure(format!("{x} is not in the span of the basis")))?;
    Ok(s
        .into_iter()
        .zip(orders)
        .map(|(c, o)| if o.is_zero() { c } else { c.mod_floor(o) })
        .collect())
}

/// Checks that `basis` with `orders` is a direct-sum basis of `A`.
fn is_direct_sum_basis(a: &FgAbGroup, basis: &[GroupElement], orders: &[BigInt]) -> bool {
    if basis.len() != orders.len()
        || basis.iter().any(|b| b.coords().len() != a.num_generators())
    {
        return false;
    }
    if basis
        .iter()
        .zip(orders)
        .any(|(b, o)| !o.is_zero() && !a.scale(o, b).is_zero())
    {
        return false;
    }
    let q = orders.len();
    let mut rel = IntMatrix::zeros(q, q);
    for (l, o) in orders.iter().enumerate() {
        rel[(l, l)] = o.clone();
    }
    let abstract_group = canonicalize(&rel, q).group;
    let span = Subgroup::generated(a, basis);
    &abstract_group == a && span.group() == a
}

/// Deterministic decomposition over [`prime_power_basis`].
pub fn decompose_divisors(bd: &BuildingData, pic: &PicardModel) -> Result<Decomposition, DecompError> {
    let (basis, orders) = prime_power_basis(&pic.group);
    decompose_in_basis(bd, pic, &basis, &orders, None::<&mut rand::rngs::mock::StepRng>)
}

/// A decomposition over a random automorphic image of the prime-power basis,
/// starting from random coefficient representatives.
pub fn decompose_divisors_randomized<R: Rng + ?Sized>(
    bd: &BuildingData,
    pic: &PicardModel,
    rng: &mut R,
) -> Result<Decomposition, DecompError> {
    let (basis, orders) = prime_power_basis(&pic.group);
    let basis = randomize_basis(&pic.group, &basis, &orders, rng, 4 * basis.len() + 4);
    decompose_in_basis(bd, pic, &basis, &orders, Some(rng))
}

/// Runs the construction over a caller-supplied direct-sum basis of `A`
/// whose torsion elements have prime-power order. With `rng`, the initial
/// torsion coefficients are shifted by random multiples of their orders.
pub fn decompose_in_basis<R: Rng + ?Sized>(
    bd: &BuildingData,
    pic: &PicardModel,
    basis: &[GroupElement],
    orders: &[BigInt],
    mut rng: Option<&mut R>,
) -> Result<Decomposition, DecompError> {
    check_preconditions(bd, pic)?;
    let a = &pic.group;
    if !is_direct_sum_basis(a, basis, orders) {
        return Err(DecompError::DecompositionFailure("basis is not a direct-sum basis of A".into()));
    }
    let (k, n, q) = (bd.num_branches(), bd.chi_gens.len(), basis.len());
    let m = bd.inertia_orders();
    let d: Vec<BigInt> = bd.character_orders();
    let comps = bd.component_matrix();

    let mut shift = |o: &BigInt| -> BigInt {
        match rng.as_deref_mut() {
            Some(r) if !o.is_zero() => o * BigInt::from(r.gen_range(-2i64..=2)),
            _ => BigInt::zero(),
        }
    };

    let mut c = IntMatrix::zeros(k, q);
    for j in 0..k {
        for (l, x) in coordinates(a, basis, orders, &pic.d[j])?.into_iter().enumerate() {
            c[(j, l)] = x + shift(&orders[l]);
        }
    }
    let mut lambda = IntMatrix::zeros(n, q);
    for i in 0..n {
        for (l, x) in coordinates(a, basis, orders, &pic.l[i])?.into_iter().enumerate() {
            lambda[(i, l)] = x + shift(&orders[l]);
        }
    }

    // c_ij = d_i a_ij / m_j, integral by the characteristic relations
    let mut cc = IntMatrix::zeros(n, k);
    for i in 0..n {
        for j in 0..k {
            cc[(i, j)] = &d[i] * &comps[(i, j)] / &m[j];
        }
    }

    for l in 0..q {
        let o = &orders[l];
        if o.is_zero() {
            if !passes_relation_test(bd, &c.col(l)) {
                return Err(DecompError::DecompositionFailure(format!(
                    "free coefficient column {} is not in N",
                    l + 1
                )));
            }
            continue;
        }
        if o.is_one() {
            continue;
        }
        let (p, alpha) = prime_power(o).ok_or_else(|| {
            DecompError::DecompositionFailure(format!("generator {} has order {o}, not a prime power", l + 1))
        })?;
        let p_alpha = pow(&p, alpha);
        let col = c.col(l);

        // rows with p | d_i
        let rows: Vec<usize> = (0..n).filter(|&i| d[i].is_multiple_of(&p)).collect();
        let mut x = Vec::with_capacity(rows.len());
        let mut beta = 0u32;
        for &i in &rows {
            let s: BigInt = (0..k).map(|j| &cc[(i, j)] * &col[j]).sum();
            let diff = &d[i] * &lambda[(i, l)] - s;
            if !diff.is_multiple_of(&p_alpha) {
                return Err(DecompError::DecompositionFailure(format!(
                    "relation {} fails modulo the order of generator {}",
                    i + 1,
                    l + 1
                )));
            }
            x.push(diff / &p_alpha);
            let alpha_i = valuation(&d[i], &p).unwrap_or(0);
            beta = beta.max(alpha_i.saturating_sub(alpha));
        }
        if beta > 0 {
            let a_rows: Vec<Vec<BigInt>> = rows.iter().map(|&i| comps.row(i).to_vec()).collect();
            let sys = LemmaSystem {
                h: m.clone(),
                a: IntMatrix::from_rows(a_rows, k),
                d: rows.iter().map(|&i| d[i].clone()).collect(),
                p: p.clone(),
                gamma: beta,
                x,
            };
            let s = solve_lifting(&sys).map_err(|e| DecompError::DecompositionFailure(e.to_string()))?;
            for j in 0..k {
                c[(j, l)] += &p_alpha * &s[j];
            }
        }

        // clear the part coprime to p
        let coprime = (0..n)
            .filter(|&i| !d[i].is_multiple_of(&p))
            .fold(BigInt::one(), |acc, i| acc.lcm(&d[i]));
        if !coprime.is_one() {
            let max_alpha_i = rows
                .iter()
                .map(|&i| valuation(&d[i], &p).unwrap_or(0))
                .max()
                .unwrap_or(0);
            let p_gamma = pow(&p, max_alpha_i + alpha + 1);
            let inv = mod_inverse(&p_gamma, &coprime).expect("p is coprime to the other orders");
            for j in 0..k {
                let t = (-&c[(j, l)] * &inv).mod_floor(&coprime);
                c[(j, l)] += &p_gamma * t;
            }
        }

        for j in 0..k {
            c[(j, l)] = c[(j, l)].mod_floor(&o.lcm(&m[j]));
        }
    }

    let dec = Decomposition {
        m: basis.to_vec(),
        orders: orders.to_vec(),
        c,
    };
    for j in 0..k {
        if dec.reconstruct(a, j) != pic.d[j] {
            return Err(DecompError::DecompositionFailure(format!("D_{} is not reproduced", j + 1)));
        }
    }
    let report = verify_columns_in_n(bd, &dec.c);
    if !report.is_valid() {
        return Err(DecompError::DecompositionFailure(report.to_string()));
    }
    Ok(dec)
}
