//! The groups `N = ker(⊕G_j → G)`, `K = N/Im(σ∘ρ)` and
//! `G̃ = (⊕G_j)/Im(σ∘ρ)`.
//!
//! `⊕G_j` is modeled as `⊕ Z/m_j` with `e_j ↦ g_j`. The image of `σ∘ρ`
//! cannot be computed from algebraic data (it depends on the universal cover
//! of `X`), so it is an input: a list of integer vectors `t ∈ Z^k`, each
//! standing for the class `Σ t_j·D̃_j`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::abgrp::{
    canonicalize, check_exact, integer_kernel, subgroup_quotient, AbGroupError, FgAbGroup,
    GroupElement, Homomorphism, IntMatrix, Subgroup,
};
use crate::cover::{validate_building_data, BuildingData};
use crate::report::ValidationReport;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TopologyError {
    #[error("invalid building data:\n{0}")]
    InvalidBuildingData(ValidationReport),
    #[error("rho generator {index} has {found} entries, expected {expected}")]
    RhoDimension {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("rho generator {index} ({vector}) does not lie in N")]
    RhoNotInN { index: usize, vector: String },
    #[error("deck group sequence failed verification: {0}")]
    Exactness(#[from] AbGroupError),
}

/// Generators of `Im(σ∘ρ)`, as vectors in the `D̃_j` basis.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RhoImage {
    pub gens: Vec<Vec<BigInt>>,
}

impl RhoImage {
    pub fn empty() -> Self {
        RhoImage::default()
    }

    pub fn new(gens: Vec<Vec<BigInt>>) -> Self {
        RhoImage { gens }
    }

    /// The image when every pulled back branch divisor is `δ_j` times one
    /// common primitive class: compact cycles then meet the `D̃_j` in
    /// multiples of `(δ_1, …, δ_k)`.
    pub fn from_divisibility(delta: &[BigInt]) -> Self {
        RhoImage {
            gens: vec![delta.to_vec()],
        }
    }
}

fn reduce_mod(moduli: &[BigInt], v: &[BigInt]) -> Vec<BigInt> {
    v.iter().zip(moduli).map(|(x, m)| x.mod_floor(m)).collect()
}

fn require_valid(bd: &BuildingData) -> Result<(), TopologyError> {
    let r = validate_building_data(bd);
    if r.is_valid() {
        Ok(())
    } else {
        Err(TopologyError::InvalidBuildingData(r))
    }
}

/// The dual membership test for `N`: `Σ_j a_ij t_j / m_j ∈ Z` for every
/// chosen character `χ_i`.
pub fn passes_relation_test(bd: &BuildingData, t: &[BigInt]) -> bool {
    let a = bd.component_matrix();
    (0..bd.chi_gens.len()).all(|i| {
        let s: BigRational = bd
            .branches
            .iter()
            .enumerate()
            .map(|(j, b)| BigRational::new(&a[(i, j)] * &t[j], b.order.clone()))
            .sum();
        s.is_integer()
    })
}

/// `N ⊆ ⊕ Z/m_j`, computed as the kernel of `t ↦ Σ t_j g_j`.
pub fn compute_n(bd: &BuildingData) -> Result<Subgroup, TopologyError> {
    require_valid(bd)?;
    let g = &bd.group;
    let k = bd.num_branches();
    let rows = g.num_generators();
    // [σ | −diag(d_u)]
    let sigma = bd.sigma();
    let mut ext = IntMatrix::zeros(rows, k + rows);
    for u in 0..rows {
        for j in 0..k {
            ext[(u, j)] = sigma[(u, j)].clone();
        }
        ext[(u, k + u)] = -g.invariants()[u].clone();
    }
    let m = bd.inertia_orders();
    let gens: Vec<Vec<BigInt>> = integer_kernel(&ext)
        .into_iter()
        .map(|mut v| {
            v.truncate(k);
            reduce_mod(&m, &v)
        })
        .collect();
    let n = Subgroup::generated_in(&m, &gens);
    for b in n.basis() {
        assert!(
            passes_relation_test(bd, b),
            "kernel generator {b:?} fails the character test"
        );
    }
    Ok(n)
}

/// `K = N/⟨σ(ρ)⟩` with the projection from `N`.
#[derive(Clone, Debug)]
pub struct KernelResult {
    /// `N` inside `⊕ Z/m_j`.
    pub n: Subgroup,
    pub k: FgAbGroup,
    pub proj_n_to_k: Homomorphism,
    /// Elements of `N` (canonical coordinates) over the generators of `K`.
    pub k_lifts: Vec<GroupElement>,
}

impl KernelResult {
    pub fn n_group(&self) -> &FgAbGroup {
        self.n.group()
    }

    /// Generators of `N` in `⊕ Z/m_j` coordinates.
    pub fn n_generators(&self) -> &[Vec<BigInt>] {
        self.n.basis()
    }

    /// The class in `K` of a vector of `⊕ Z/m_j`, if it lies in `N`.
    pub fn class_of(&self, t: &[BigInt]) -> Option<GroupElement> {
        let m = self.n.ambient_moduli();
        let x = self.n.coordinates(&reduce_mod(m, t))?;
        Some(self.proj_n_to_k.apply(&x))
    }

    /// A vector of `⊕ Z/m_j` representing an element of `K`.
    pub fn lift_to_branches(&self, x: &GroupElement) -> Vec<BigInt> {
        let n = self.n_group();
        let y = n.combine(x.coords(), &self.k_lifts);
        self.n.embed(&y)
    }
}

fn rho_in_n(bd: &BuildingData, n: &Subgroup, rho: &RhoImage) -> Result<Vec<GroupElement>, TopologyError> {
    let k = bd.num_branches();
    let m = bd.inertia_orders();
    rho.gens
        .iter()
        .enumerate()
        .map(|(index, t)| {
            if t.len() != k {
                return Err(TopologyError::RhoDimension {
                    index,
                    expected: k,
                    found: t.len(),
                });
            }
            n.coordinates(&reduce_mod(&m, t)).ok_or_else(|| TopologyError::RhoNotInN {
                index,
                vector: t.iter().map(ToString::to_string).collect::<Vec<_>>().join(","),
            })
        })
        .collect()
}

pub fn compute_k(bd: &BuildingData, rho: &RhoImage) -> Result<KernelResult, TopologyError> {
    let n = compute_n(bd)?;
    let rels = rho_in_n(bd, &n, rho)?;
    let q = subgroup_quotient(n.group(), &rels);
    Ok(KernelResult {
        n,
        k: q.group,
        proj_n_to_k: q.projection,
        k_lifts: q.lifts,
    })
}

/// `0 → K → G̃ → G → 0` together with the branch generators `g̃_j`.
#[derive(Clone, Debug)]
pub struct DeckGroupResult {
    pub gtilde: FgAbGroup,
    pub inc_k: Homomorphism,
    pub proj_g: Homomorphism,
    pub gtilde_gens: Vec<GroupElement>,
    pub kernel: KernelResult,
}

impl DeckGroupResult {
    /// The class in `G̃` of a vector `t ∈ Z^k`, i.e. `Σ t_j g̃_j`.
    pub fn branch_class(&self, t: &[BigInt]) -> GroupElement {
        self.gtilde.combine(t, &self.gtilde_gens)
    }
}

/// Builds `G̃` and verifies exactness of `K ↪ G̃ ↠ G` and the orders and
/// images of the `g̃_j`.
pub fn compute_g_tilde(bd: &BuildingData, rho: &RhoImage) -> Result<DeckGroupResult, TopologyError> {
    let kernel = compute_k(bd, rho)?;
    let k = bd.num_branches();
    let m = bd.inertia_orders();

    let mut rows = Vec::with_capacity(k + rho.gens.len());
    for (j, mj) in m.iter().enumerate() {
        let mut r = vec![BigInt::zero(); k];
        r[j] = mj.clone();
        rows.push(r);
    }
    rows.extend(rho.gens.iter().map(|t| reduce_mod(&m, t)));
    let c = canonicalize(&IntMatrix::from_rows(rows, k), k);
    let gtilde = c.group.clone();

    let gtilde_gens: Vec<GroupElement> = (0..k)
        .map(|j| {
            let mut e = vec![BigInt::zero(); k];
            e[j] = BigInt::one();
            c.map(&e)
        })
        .collect();

    let g = &bd.group;
    let sigma = bd.sigma();
    let proj_images: Vec<GroupElement> = (0..gtilde.num_generators())
        .map(|u| g.reduce(&sigma.mul_vec(&c.lift(u))))
        .collect();
    let proj_g = Homomorphism::from_images(gtilde.clone(), g.clone(), &proj_images)?;

    let inc_images: Vec<GroupElement> = kernel
        .k
        .generators()
        .iter()
        .map(|x| c.map(&kernel.lift_to_branches(x)))
        .collect();
    let inc_k = Homomorphism::from_images(kernel.k.clone(), gtilde.clone(), &inc_images)?;

    check_exact(&inc_k, &proj_g)?;
    for (j, (gt, b)) in gtilde_gens.iter().zip(&bd.branches).enumerate() {
        if proj_g.apply(gt) != b.generator || gtilde.element_order(gt).as_ref() != Some(&b.order) {
            return Err(AbGroupError::ExactnessViolated(format!(
                "lifted branch generator {} does not map isomorphically onto G_{}",
                j + 1,
                j + 1
            ))
            .into());
        }
    }

    Ok(DeckGroupResult {
        gtilde,
        inc_k,
        proj_g,
        gtilde_gens,
        kernel,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::{Branch, BuildingData};

    fn big(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn bidouble() -> BuildingData {
        let g = FgAbGroup::from_i64(&[2, 2], 0).unwrap();
        let branches = [[1, 0], [0, 1], [1, 1]]
            .iter()
            .map(|v| Branch {
                order: BigInt::from(2),
                generator: g.element_i64(v).unwrap(),
            })
            .collect();
        BuildingData::with_dual_basis(g, branches)
    }

    fn order_32() -> BuildingData {
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
        BuildingData::from_components(
            c.group,
            branches,
            &[big(&[1, 0, 3]), big(&[0, 1, 3]), big(&[0, 0, 2])],
        )
        .unwrap()
    }

    #[test]
    fn kernel_of_isomorphism_is_trivial() {
        let z2 = FgAbGroup::from_i64(&[2], 0).unwrap();
        let bd = BuildingData::with_dual_basis(
            z2.clone(),
            vec![Branch {
                order: BigInt::from(2),
                generator: z2.generator(0),
            }],
        );
        assert!(compute_n(&bd).unwrap().group().is_trivial());
        assert!(compute_k(&bd, &RhoImage::empty()).unwrap().k.is_trivial());
    }

    #[test]
    fn bidouble_n_is_diagonal() {
        let bd = bidouble();
        let n = compute_n(&bd).unwrap();
        assert_eq!(n.group(), &FgAbGroup::from_i64(&[2], 0).unwrap());
        assert_eq!(n.basis(), &[big(&[1, 1, 1])]);
        let dg = compute_g_tilde(&bd, &RhoImage::empty()).unwrap();
        assert_eq!(dg.gtilde, FgAbGroup::from_i64(&[2, 2, 2], 0).unwrap());
    }

    #[test]
    fn order_32_groups() {
        let bd = order_32();
        let n = compute_n(&bd).unwrap();
        assert_eq!(n.basis(), &[big(&[2, 2, 2])]);

        let dg = compute_g_tilde(&bd, &RhoImage::empty()).unwrap();
        assert_eq!(dg.kernel.k, FgAbGroup::from_i64(&[2], 0).unwrap());
        assert_eq!(dg.gtilde, FgAbGroup::from_i64(&[4, 4, 4], 0).unwrap());

        let full = RhoImage::new(vec![big(&[2, 2, 2])]);
        let dg = compute_g_tilde(&bd, &full).unwrap();
        assert!(dg.kernel.k.is_trivial());
        assert_eq!(dg.gtilde, bd.group);

        // 4-divisibility reduces to nothing
        let four = RhoImage::from_divisibility(&big(&[4, 4, 4]));
        assert_eq!(compute_k(&bd, &four).unwrap().k, FgAbGroup::from_i64(&[2], 0).unwrap());
    }

    #[test]
    fn rho_outside_n_is_rejected() {
        let bd = order_32();
        let err = compute_k(&bd, &RhoImage::new(vec![big(&[1, 0, 0])])).unwrap_err();
        assert!(matches!(err, TopologyError::RhoNotInN { index: 0, .. }));
        let err = compute_k(&bd, &RhoImage::new(vec![big(&[1, 0])])).unwrap_err();
        assert!(matches!(err, TopologyError::RhoDimension { .. }));
    }

    #[test]
    fn relation_test_on_examples() {
        let bd = order_32();
        assert!(passes_relation_test(&bd, &big(&[2, 2, 2])));
        assert!(!passes_relation_test(&bd, &big(&[1, 0, 0])));
        assert!(passes_relation_test(&bd, &big(&[0, 0, 0])));
    }
}
