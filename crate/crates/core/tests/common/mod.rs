//! Random instance generators and brute-force oracles shared by the
//! integration tests. Nothing here calls into the algorithms it checks.
#![allow(dead_code)]

use cover_core::abgrp::{canonicalize, subgroup_quotient, Homomorphism, Subgroup};
use cover_core::congruence::LemmaSystem;
use cover_core::cover::{
    check_characteristic_relations, refine_to_prime_powers, validate_building_data, Branch, BuildingData, PicardModel,
};
use cover_core::topology::compute_n;
use cover_core::extclass::CohomologyModel;
use cover_core::{BigInt, FgAbGroup, GroupElement, IntMatrix};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::Rng;

pub fn big(xs: &[i64]) -> Vec<BigInt> {
    xs.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn random_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize, bound: i64) -> IntMatrix {
    let data = (0..rows)
        .map(|_| (0..cols).map(|_| BigInt::from(rng.gen_range(-bound..=bound))).collect())
        .collect();
    IntMatrix::from_rows(data, cols)
}

/// Fraction-free Gaussian elimination.
pub fn det(m: &IntMatrix) -> BigInt {
    let n = m.num_rows();
    assert_eq!(n, m.num_cols());
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = (0..n).map(|i| m.row(i).to_vec()).collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, r);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// gcd of all `k × k` minors (zero when all vanish).
pub fn minor_gcd(m: &IntMatrix, k: usize) -> BigInt {
    let mut g = BigInt::zero();
    for rs in combinations(m.num_rows(), k) {
        for cs in combinations(m.num_cols(), k) {
            let sub = IntMatrix::from_rows(
                rs.iter().map(|&r| cs.iter().map(|&c| m[(r, c)].clone()).collect()).collect(),
                k,
            );
            g = g.gcd(&det(&sub));
        }
    }
    g
}

/// A random finite group of order at most `max_order`.
pub fn random_finite_group<R: Rng>(rng: &mut R, max_order: u64) -> FgAbGroup {
    loop {
        let n = rng.gen_range(1..=3usize);
        let orders: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=12)).collect();
        let total: i64 = orders.iter().product();
        if total as u64 > max_order {
            continue;
        }
        let mut rel = IntMatrix::zeros(n, n);
        for (i, &o) in orders.iter().enumerate() {
            rel[(i, i)] = BigInt::from(o);
        }
        return canonicalize(&rel, n).group;
    }
}

/// A random `p`-group for `p ∈ {2, 3}` of order at most `max_order`.
pub fn random_primary_group<R: Rng>(rng: &mut R, max_order: u64) -> FgAbGroup {
    let p: u64 = if rng.gen_bool(0.6) { 2 } else { 3 };
    let mut invariants = Vec::new();
    let mut order = 1u64;
    for _ in 0..rng.gen_range(1..=3) {
        let q = p.pow(rng.gen_range(1..=3));
        if order * q <= max_order {
            order *= q;
            invariants.push(BigInt::from(q));
        }
    }
    invariants.sort();
    FgAbGroup::new(invariants, 0).unwrap()
}

pub fn random_element<R: Rng>(rng: &mut R, g: &FgAbGroup) -> GroupElement {
    let coords: Vec<BigInt> = g
        .moduli()
        .iter()
        .map(|m| {
            if m.is_zero() {
                BigInt::from(rng.gen_range(-3..=3))
            } else {
                let mi = i64::try_from(m).unwrap();
                BigInt::from(rng.gen_range(0..mi))
            }
        })
        .collect();
    g.reduce(&coords)
}

/// Order of `x` by repeated addition.
pub fn order_by_addition(g: &FgAbGroup, x: &GroupElement) -> BigInt {
    let mut acc = x.clone();
    let mut n = BigInt::one();
    while !acc.is_zero() {
        acc = g.add(&acc, x);
        n += 1;
    }
    n
}

/// Totally ramified building data with `|G| ≤ max_order`, `k ≤ max_k` and
/// the characters dual to the canonical generators.
pub fn random_building_data<R: Rng>(rng: &mut R, max_order: u64, max_k: usize) -> BuildingData {
    loop {
        let g = random_finite_group(rng, max_order);
        if g.is_trivial() {
            continue;
        }
        let k = rng.gen_range(1..=max_k);
        let branches: Vec<Branch> = (0..k)
            .map(|_| {
                let x = random_element(rng, &g);
                Branch {
                    order: order_by_addition(&g, &x),
                    generator: x,
                }
            })
            .collect();
        let bd = BuildingData::with_dual_basis(g, branches);
        if validate_building_data(&bd).is_valid() {
            return bd;
        }
    }
}

/// Every `t ∈ ∏ [0, m_j)`.
pub fn all_branch_vectors(m: &[BigInt]) -> Vec<Vec<BigInt>> {
    let mut out = vec![vec![]];
    for mj in m {
        let mi = i64::try_from(mj).unwrap();
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..mi).map(move |x| {
                    let mut w = v.clone();
                    w.push(BigInt::from(x));
                    w
                })
            })
            .collect();
    }
    out
}

/// `Σ t_j g_j` by direct summation.
pub fn sigma_apply(bd: &BuildingData, t: &[BigInt]) -> GroupElement {
    let g = &bd.group;
    let mut acc = g.zero();
    for (tj, b) in t.iter().zip(&bd.branches) {
        acc = g.add(&acc, &g.scale(tj, &b.generator));
    }
    acc
}

/// Elements `x` with `n·x = 0`, by enumeration.
pub fn torsion_elements(g: &FgAbGroup, n: &BigInt) -> Vec<GroupElement> {
    g.elements()
        .unwrap()
        .into_iter()
        .filter(|x| g.scale(n, x).is_zero())
        .collect()
}

/// A Picard model satisfying the characteristic relations:
/// `D_j = m_j x_j + Σ_s t^s_j y_s` and
/// `L_i = Σ_j a_ij x_j + Σ_s (Σ_j a_ij t^s_j / m_j) y_s + τ_i` with each `t^s`
/// in `N` and `τ_i` killed by `d_i`, re-expressed in the subgroup they span.
pub fn random_picard<R: Rng>(rng: &mut R, bd: &BuildingData, ambient: &FgAbGroup, n_vectors: &[Vec<BigInt>]) -> PicardModel {
    let k = bd.num_branches();
    let comps = bd.component_matrix();
    let m = bd.inertia_orders();
    let x: Vec<GroupElement> = (0..k).map(|_| random_element(rng, ambient)).collect();
    let pairs: Vec<(Vec<BigInt>, GroupElement)> = (0..rng.gen_range(0..=2))
        .filter(|_| !n_vectors.is_empty())
        .map(|_| {
            let t = n_vectors[rng.gen_range(0..n_vectors.len())].clone();
            (t, random_element(rng, ambient))
        })
        .collect();
    let lcm = m.iter().fold(BigInt::one(), |a, b| a.lcm(b));
    let d: Vec<GroupElement> = (0..k)
        .map(|j| {
            let mut acc = ambient.scale(&m[j], &x[j]);
            for (t, y) in &pairs {
                acc = ambient.add(&acc, &ambient.scale(&t[j], y));
            }
            acc
        })
        .collect();
    let l: Vec<GroupElement> = bd
        .chi_gens
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let mut acc = ambient.combine(comps.row(i), &x);
            for (t, y) in &pairs {
                let num: BigInt = (0..k).map(|j| &comps[(i, j)] * &t[j] * (&lcm / &m[j])).sum();
                assert!(num.is_multiple_of(&lcm), "t is not in N");
                acc = ambient.add(&acc, &ambient.scale(&(num / &lcm), y));
            }
            let tors = torsion_elements_small(rng, ambient, &c.order);
            ambient.add(&acc, &tors)
        })
        .collect();
    let gens: Vec<GroupElement> = d.iter().chain(&l).cloned().collect();
    let span = Subgroup::generated(ambient, &gens);
    let to_a = |v: &GroupElement| span.coordinates(v.coords()).expect("in span");
    PicardModel {
        group: span.group().clone(),
        d: d.iter().map(to_a).collect(),
        l: l.iter().map(to_a).collect(),
    }
}

/// A random element killed by `n`, built from the canonical generators.
fn torsion_elements_small<R: Rng>(rng: &mut R, g: &FgAbGroup, n: &BigInt) -> GroupElement {
    let coords: Vec<BigInt> = g
        .moduli()
        .iter()
        .map(|d| {
            if d.is_zero() {
                BigInt::zero()
            } else {
                let step = d / d.gcd(n);
                step * BigInt::from(rng.gen_range(0..4))
            }
        })
        .collect();
    g.reduce(&coords)
}

/// `H² = A` with `c1 = id`, which loses nothing when comparing classes.
pub fn identity_cohomology(pic: &PicardModel) -> CohomologyModel {
    CohomologyModel::new(Homomorphism::identity(&pic.group), None).unwrap()
}

/// A short exact sequence `0 → S → E → E/S → 0` with `S` spanned by random
/// elements.
pub fn random_exact_sequence<R: Rng>(rng: &mut R, max_order: u64) -> (Homomorphism, Homomorphism) {
    let e = if rng.gen_bool(0.5) {
        random_finite_group(rng, max_order)
    } else {
        random_primary_group(rng, max_order)
    };
    // multiples p·x make non-split sequences common
    let gens: Vec<GroupElement> = (0..rng.gen_range(0..=2))
        .map(|_| {
            let x = random_element(rng, &e);
            let p = [1i64, 2, 2, 3][rng.gen_range(0..4)];
            e.scale(&BigInt::from(p), &x)
        })
        .collect();
    let s = Subgroup::generated(&e, &gens);
    let inc = s.inclusion(&e).unwrap();
    let q = subgroup_quotient(&e, &gens);
    (inc, q.projection)
}

/// Whether a homomorphic section exists, by exhaustive search: `G` is a
/// direct sum of cyclic groups, so a section exists iff every generator
/// `e_u` of order `d_u` has a preimage killed by `d_u`.
pub fn exhaustive_section_exists(proj: &Homomorphism) -> bool {
    let (e, g) = (proj.source(), proj.target());
    let elems = e.elements().unwrap();
    (0..g.num_generators()).all(|u| {
        let d = &g.invariants()[u];
        let target = g.generator(u);
        elems
            .iter()
            .any(|x| proj.apply(x) == target && e.scale(d, x).is_zero())
    })
}

/// A random system meeting the solvability hypotheses with `p^γ ≤ max_modulus`,
/// or `None` when the sampled characters are not independent.
pub fn random_lemma_system<R: Rng>(rng: &mut R, max_modulus: u64, max_m: usize) -> Option<LemmaSystem> {
    let p: u64 = if rng.gen_bool(0.5) { 2 } else { 3 };
    let mut gammas = vec![];
    let mut q = p;
    let mut gm = 1;
    while q <= max_modulus {
        gammas.push(gm);
        q *= p;
        gm += 1;
    }
    let gamma = gammas[rng.gen_range(0..gammas.len())];
    let m = rng.gen_range(1..=max_m);
    let cofactors = [1i64, 1, 1, 5, 7];
    let parts: Vec<(i64, i64)> = (0..m)
        .map(|_| {
            let e = rng.gen_range(1..=3u32);
            ((p as i64).pow(e), cofactors[rng.gen_range(0..cofactors.len())])
        })
        .collect();
    let h: Vec<BigInt> = parts.iter().map(|(pe, c)| BigInt::from(pe * c)).collect();
    let t = rng.gen_range(1..=m);
    let mut a = IntMatrix::zeros(t, m);
    let mut d = Vec::with_capacity(t);
    for i in 0..t {
        let mut order = 1i64;
        for (j, (pe, c)) in parts.iter().enumerate() {
            let x = rng.gen_range(0..*pe);
            a[(i, j)] = BigInt::from(x * c);
            if x != 0 {
                order = order.lcm(&(pe / x.gcd(pe)));
            }
        }
        if order == 1 {
            return None;
        }
        d.push(BigInt::from(order));
    }
    let modulus = (p as i64).pow(gamma);
    let x = (0..t).map(|_| BigInt::from(rng.gen_range(0..modulus))).collect();
    let sys = LemmaSystem {
        h,
        a,
        d,
        p: BigInt::from(p),
        gamma,
        x,
    };
    sys.validate().ok().map(|_| sys)
}

/// Exhaustive search over `s ∈ [0, p^γ)^m` in machine integers.
pub fn lemma_brute_force(sys: &LemmaSystem) -> Option<Vec<i64>> {
    let c = sys.validate().ok()?;
    let q = i64::try_from(&sys.modulus()).unwrap();
    let (t, m) = (c.num_rows(), c.num_cols());
    let cm: Vec<Vec<i64>> = (0..t)
        .map(|i| (0..m).map(|j| i64::try_from(&c[(i, j)].mod_floor(&BigInt::from(q))).unwrap()).collect())
        .collect();
    let x: Vec<i64> = sys.x.iter().map(|v| i64::try_from(&v.mod_floor(&BigInt::from(q))).unwrap()).collect();
    let mut s = vec![0i64; m];
    loop {
        if (0..t).all(|i| {
            let v: i64 = (0..m).map(|j| cm[i][j] * s[j]).sum();
            (v - x[i]).rem_euclid(q) == 0
        }) {
            return Some(s);
        }
        let mut i = 0;
        loop {
            if i == m {
                return None;
            }
            s[i] += 1;
            if s[i] < q {
                break;
            }
            s[i] = 0;
            i += 1;
        }
    }
}

pub fn abs_is_one(x: &BigInt) -> bool {
    x.abs().is_one()
}

/// `(Z/4)³/⟨2e₁+2e₂+2e₃⟩` branched over the images of `e_j`, with the
/// characters of components `(1,0,3)`, `(0,1,3)`, `(0,0,2)`.
pub fn order_32_cover() -> BuildingData {
    let rel = IntMatrix::from_i64(&[&[4, 0, 0], &[0, 4, 0], &[0, 0, 4], &[2, 2, 2]]);
    let c = canonicalize(&rel, 3);
    let branches = (0..3)
        .map(|j| {
            let mut e = vec![BigInt::zero(); 3];
            e[j] = BigInt::one();
            Branch {
                order: BigInt::from(4),
                generator: c.map(&e),
            }
        })
        .collect();
    BuildingData::from_components(c.group, branches, &[big(&[1, 0, 3]), big(&[0, 1, 3]), big(&[0, 0, 2])])
        .unwrap()
}

/// The order 32 cover over `A = Z⟨h⟩` with `D_j = 2h`, `L = (2h, 2h, h)`,
/// `H² = Z/2⟨η⟩ ⊕ Z⟨H⟩`, `c1(h) = 2H + twist·η` and `r(η) = 1`, `r(H) = 0`
/// into `Z/2`.
pub fn order_32_example(twist: i64) -> (BuildingData, PicardModel, CohomologyModel) {
    use cover_core::extclass::Restriction;
    let a = FgAbGroup::free(1);
    let el = |x: i64| a.element_i64(&[x]).unwrap();
    let pic = PicardModel {
        d: vec![el(2), el(2), el(2)],
        l: vec![el(2), el(2), el(1)],
        group: a.clone(),
    };
    let h2 = FgAbGroup::from_i64(&[2], 1).unwrap();
    let c1 = Homomorphism::from_images(a, h2.clone(), &[h2.element_i64(&[twist, 2]).unwrap()]).unwrap();
    let r = Restriction::new(&h2, &BigInt::from(2), &big(&[1, 0])).unwrap();
    (order_32_cover(), pic, CohomologyModel::new(c1, Some(r)).unwrap())
}

/// Random building data with a Picard model satisfying the relations, already
/// refined to prime-power character orders.
pub fn random_cover<R: Rng>(rng: &mut R) -> (BuildingData, PicardModel) {
    let bd = random_building_data(rng, 32, 3);
    let n = compute_n(&bd).unwrap();
    let n_vectors: Vec<Vec<BigInt>> = n.basis().to_vec();
    let ambient = {
        let g = random_finite_group(rng, 16);
        FgAbGroup::new(g.invariants().to_vec(), rng.gen_range(0..=1)).unwrap()
    };
    let pic = random_picard(rng, &bd, &ambient, &n_vectors);
    assert!(check_characteristic_relations(&bd, &pic).is_valid(), "generator broke the relations");
    refine_to_prime_powers(&bd, &pic).unwrap()
}
