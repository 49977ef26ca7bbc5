//! The class of `0 → K → π₁(Y) → π₁(X) → 1` and the related invariants.
//!
//! Classes with coefficients in `K` (or `G̃`) are represented in `H² ⊗ K`,
//! where `H²` is a model of `H²(X, Z)` containing every Chern class needed.
//! The class `ξ = Σ_l [M_l] ⊗ Θ(e_l)` is a push-forward of integral classes,
//! so it lies in the image of `H²(X, Z) ⊗ K → H²(X, K)` and nothing is lost
//! by working in the tensor product. The `Tor` part of `H²(X, K)` is never
//! reached this way and is not modeled.
//!
//! Passing from `H²(X, K)` to group cohomology of `π₁(X)` depends on topology
//! the algebraic data cannot see. For cyclic `π₁(X) = Z/n` it is supplied as
//! a [`Restriction`], a homomorphism `r : H² → Z/n` inducing
//! `H² ⊗ K → K/nK ≅ H²(Z/n, K)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::abgrp::{
    canonicalize, check_exact, sequence_splits, tensor_hom, tensor_with, AbGroupError, FgAbGroup,
    GroupElement, Homomorphism, IntMatrix, Subgroup, TensorProduct,
};
use crate::cover::{BuildingData, PicardModel};
use crate::decomp::Decomposition;
use crate::topology::{DeckGroupResult, KernelResult};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExtClassError {
    #[error("column {0} of the decomposition does not lie in N")]
    ColumnNotInN(usize),
    #[error("inconsistent input: {0}")]
    Mismatch(String),
    #[error(transparent)]
    Group(#[from] AbGroupError),
}

/// `r : H² → Z/n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Restriction {
    pub map: Homomorphism,
}

impl Restriction {
    /// `images[u]` is `r` of the `u`-th canonical generator of `H²`.
    pub fn new(h2: &FgAbGroup, n: &BigInt, images: &[BigInt]) -> Result<Self, ExtClassError> {
        let zn = FgAbGroup::cyclic(n);
        let imgs: Vec<GroupElement> = images
            .iter()
            .map(|x| zn.reduce(std::slice::from_ref(x)))
            .collect();
        let imgs = if zn.num_generators() == 0 {
            vec![zn.zero(); images.len()]
        } else {
            imgs
        };
        Ok(Restriction {
            map: Homomorphism::from_images(h2.clone(), zn, &imgs)?,
        })
    }

    pub fn order(&self) -> BigInt {
        self.map.target().order().expect("Z/n is finite")
    }
}

/// `H²`, the Chern class map `A → H²` and the optional restriction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyModel {
    pub h2: FgAbGroup,
    pub c1: Homomorphism,
    pub restriction: Option<Restriction>,
}

impl CohomologyModel {
    pub fn new(c1: Homomorphism, restriction: Option<Restriction>) -> Result<Self, ExtClassError> {
        if let Some(r) = &restriction {
            if r.map.source() != c1.target() {
                return Err(ExtClassError::Mismatch("restriction is not defined on H²".into()));
            }
        }
        Ok(CohomologyModel {
            h2: c1.target().clone(),
            c1,
            restriction,
        })
    }
}

/// An element of `H² ⊗ C` for a coefficient group `C`.
#[derive(Clone, Debug)]
pub struct ExtensionClass {
    pub tensor: TensorProduct,
    pub coords: GroupElement,
}

impl ExtensionClass {
    pub fn ambient(&self) -> &FgAbGroup {
        self.tensor.group()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_zero()
    }
}

impl PartialEq for ExtensionClass {
    fn eq(&self, other: &Self) -> bool {
        self.tensor.left() == other.tensor.left()
            && self.tensor.right() == other.tensor.right()
            && self.coords == other.coords
    }
}

impl Eq for ExtensionClass {}

/// `Θ : Z^q → K`, sending `e_l` to the class of column `l` of `C`.
pub fn theta_map(kr: &KernelResult, dec: &Decomposition) -> Result<Homomorphism, ExtClassError> {
    let q = dec.c.num_cols();
    let images = (0..q)
        .map(|l| kr.class_of(&dec.c.col(l)).ok_or(ExtClassError::ColumnNotInN(l)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Homomorphism::from_images(FgAbGroup::free(q), kr.k.clone(), &images)?)
}

fn check_in_a(coh: &CohomologyModel, elems: &[GroupElement], what: &str) -> Result<(), ExtClassError> {
    let n = coh.c1.source().num_generators();
    if let Some(bad) = elems.iter().position(|x| x.coords().len() != n) {
        return Err(ExtClassError::Mismatch(format!(
            "{what} {} is not an element of the Chern class map's source",
            bad + 1
        )));
    }
    Ok(())
}

/// `ξ = Σ_l c1(M_l) ⊗ Θ(e_l) ∈ H² ⊗ K`.
pub fn compute_xi(
    kr: &KernelResult,
    dec: &Decomposition,
    coh: &CohomologyModel,
) -> Result<ExtensionClass, ExtClassError> {
    check_in_a(coh, &dec.m, "generator")?;
    let theta = theta_map(kr, dec)?;
    let tensor = tensor_with(&coh.h2, &kr.k);
    let t = tensor.group();
    let mut acc = t.zero();
    for (l, m) in dec.m.iter().enumerate() {
        let term = tensor.eval(&coh.c1.apply(m), &theta.image_of_generator(l));
        acc = t.add(&acc, &term);
    }
    Ok(ExtensionClass { tensor, coords: acc })
}

/// `Σ_j c1(D_j) ⊗ g̃_j ∈ H² ⊗ G̃`.
pub fn compute_icf(
    bd: &BuildingData,
    pic: &PicardModel,
    dg: &DeckGroupResult,
    coh: &CohomologyModel,
) -> Result<ExtensionClass, ExtClassError> {
    if pic.d.len() != bd.num_branches() || dg.gtilde_gens.len() != bd.num_branches() {
        return Err(ExtClassError::Mismatch("number of branch classes differs from k".into()));
    }
    check_in_a(coh, &pic.d, "branch class")?;
    let tensor = tensor_with(&coh.h2, &dg.gtilde);
    let t = tensor.group();
    let mut acc = t.zero();
    for (d, g) in pic.d.iter().zip(&dg.gtilde_gens) {
        acc = t.add(&acc, &tensor.eval(&coh.c1.apply(d), g));
    }
    Ok(ExtensionClass { tensor, coords: acc })
}

/// Whether `(id ⊗ inc_K)(ξ) = icf`.
pub fn check_xi_icf_consistency(
    xi: &ExtensionClass,
    icf: &ExtensionClass,
    inc_k: &Homomorphism,
) -> Result<bool, ExtClassError> {
    if xi.tensor.left() != icf.tensor.left() {
        return Err(ExtClassError::Mismatch("classes live over different H²".into()));
    }
    if xi.tensor.right() != inc_k.source() || icf.tensor.right() != inc_k.target() {
        return Err(ExtClassError::Mismatch("inclusion does not match the coefficient groups".into()));
    }
    let push = tensor_hom(&Homomorphism::identity(xi.tensor.left()), inc_k)?;
    Ok(push.apply(&xi.coords) == icf.coords)
}

/// Outcome of the divisibility shortcut for the vanishing of `i(c(f))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisibilityCheck {
    /// Whether `c1(D_j)` is `m_j`-divisible in `H²`, per branch.
    pub divisible: Vec<bool>,
    pub hypothesis_holds: bool,
    pub icf_is_zero: bool,
}

impl DivisibilityCheck {
    /// False only when the hypothesis holds and the class is nonzero anyway.
    pub fn is_consistent(&self) -> bool {
        !self.hypothesis_holds || self.icf_is_zero
    }
}

pub fn check_divisibility_vanishing(
    bd: &BuildingData,
    pic: &PicardModel,
    coh: &CohomologyModel,
    dg: &DeckGroupResult,
) -> Result<DivisibilityCheck, ExtClassError> {
    let icf = compute_icf(bd, pic, dg, coh)?;
    let divisible: Vec<bool> = pic
        .d
        .iter()
        .zip(&bd.branches)
        .map(|(d, b)| coh.h2.is_divisible_by(&coh.c1.apply(d), &b.order))
        .collect();
    Ok(DivisibilityCheck {
        hypothesis_holds: divisible.iter().all(|&x| x),
        divisible,
        icf_is_zero: icf.is_zero(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorollaryReport {
    pub hom_surjective: bool,
    pub splits: bool,
    pub hom_to_g_trivial: bool,
    pub i_injective_guaranteed: bool,
}

/// Generators of `A[n] = {x : n·x = 0}` (for `n > 0`) or of `A` (for `n = 0`).
fn torsion_generators(a: &FgAbGroup, n: &BigInt) -> Vec<GroupElement> {
    if n.is_zero() {
        return a.generators();
    }
    a.invariants()
        .iter()
        .enumerate()
        .map(|(u, d)| a.scale(&(d / d.gcd(n)), &a.generator(u)))
        .collect()
}

fn subgroup_order(a: &FgAbGroup, gens: &[GroupElement]) -> Option<BigInt> {
    Subgroup::generated(a, gens).order()
}

/// Sufficient conditions for `i : H²(Γ, K) → H²(Γ, G̃)` to be injective:
/// `Hom(Γ, G̃) → Hom(Γ, G)` onto, the deck group sequence split, or
/// `Hom(Γ, G) = 0`. Free summands of `Γ` always lift.
pub fn corollary_conditions(gamma: &FgAbGroup, dg: &DeckGroupResult) -> Result<CorollaryReport, ExtClassError> {
    let g = dg.proj_g.target();
    let gt = &dg.gtilde;

    let mut hom_surjective = true;
    for n in gamma.invariants() {
        let target = torsion_generators(g, n);
        let images: Vec<GroupElement> = torsion_generators(gt, n)
            .iter()
            .map(|x| dg.proj_g.apply(x))
            .collect();
        if subgroup_order(g, &images) != subgroup_order(g, &target) {
            hom_surjective = false;
            break;
        }
    }
    let splits = sequence_splits(&dg.inc_k, &dg.proj_g)?.splits;
    let hom_to_g_trivial = gamma
        .moduli()
        .iter()
        .all(|n| subgroup_order(g, &torsion_generators(g, n)) == Some(BigInt::one()));
    Ok(CorollaryReport {
        hom_surjective,
        splits,
        hom_to_g_trivial,
        i_injective_guaranteed: hom_surjective || splits || hom_to_g_trivial,
    })
}

/// `κ ∈ K/nK` from `ξ ∈ H² ⊗ K` through `r ⊗ id : H² ⊗ K → Z/n ⊗ K`,
/// returned as a representative in `K`.
pub fn restrict_class(xi: &ExtensionClass, coh: &CohomologyModel) -> Result<GroupElement, ExtClassError> {
    let r = coh
        .restriction
        .as_ref()
        .ok_or_else(|| ExtClassError::Mismatch("no restriction functional supplied".into()))?;
    if r.map.source() != xi.tensor.left() {
        return Err(ExtClassError::Mismatch("restriction is not defined on this H²".into()));
    }
    let k = xi.tensor.right();
    let mut acc = k.zero();
    for (u, v, c) in xi.tensor.expand(&xi.coords) {
        let ru = r
            .map
            .image_of_generator(u)
            .coords()
            .first()
            .cloned()
            .unwrap_or_else(BigInt::zero);
        acc = k.add(&acc, &k.scale(&(c * ru), &k.generator(v)));
    }
    Ok(acc)
}

/// `0 → K → E → Z/n → 0` with class `κ`.
#[derive(Clone, Debug)]
pub struct CyclicExtension {
    pub group: FgAbGroup,
    pub inclusion: Homomorphism,
    pub projection: Homomorphism,
}

/// `E = (Z ⊕ K)/⟨(n, −κ)⟩`, verified exact.
pub fn realize_cyclic_extension(
    n: &BigInt,
    k: &FgAbGroup,
    kappa: &GroupElement,
) -> Result<CyclicExtension, ExtClassError> {
    if *n < BigInt::one() {
        return Err(ExtClassError::Mismatch(format!("cyclic order {n} must be positive")));
    }
    if !k.is_finite() {
        return Err(AbGroupError::NotFinite.into());
    }
    let kappa = k.element(kappa.coords())?;
    let r = k.num_generators();
    let mut rows = Vec::with_capacity(r + 1);
    for (v, d) in k.invariants().iter().enumerate() {
        let mut row = vec![BigInt::zero(); r + 1];
        row[v + 1] = d.clone();
        rows.push(row);
    }
    let mut row = vec![n.clone()];
    row.extend(kappa.coords().iter().map(|x| -x));
    rows.push(row);
    let c = canonicalize(&IntMatrix::from_rows(rows, r + 1), r + 1);

    let inc_images: Vec<GroupElement> = (0..r)
        .map(|v| {
            let mut e = vec![BigInt::zero(); r + 1];
            e[v + 1] = BigInt::one();
            c.map(&e)
        })
        .collect();
    let inclusion = Homomorphism::from_images(k.clone(), c.group.clone(), &inc_images)?;

    let zn = FgAbGroup::cyclic(n);
    let proj_images: Vec<GroupElement> = (0..c.group.num_generators())
        .map(|u| zn.reduce(&c.lift(u)[..zn.num_generators()]))
        .collect();
    let projection = Homomorphism::from_images(c.group.clone(), zn, &proj_images)?;
    check_exact(&inclusion, &projection)?;
    Ok(CyclicExtension {
        group: c.group,
        inclusion,
        projection,
    })
}

/// Whether `κ ∈ nK`, i.e. the class in `K/nK` vanishes.
pub fn is_trivial_class(n: &BigInt, k: &FgAbGroup, kappa: &GroupElement) -> bool {
    k.invariants()
        .iter()
        .zip(kappa.coords())
        .all(|(d, x)| x.is_multiple_of(&n.gcd(d)))
}
