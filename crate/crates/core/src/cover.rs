//! Building data of a totally ramified abelian cover.
//!
//! A cover with Galois group `G` is described by its branch components
//! `D_1, …, D_k`, the inertia generators `g_j` (of order `m_j`) and, for a
//! basis `χ_1, …, χ_n` of the character group `G*`, the eigensheaf classes
//! `L_{χ_i}`. Characters are homomorphisms `G → Q/Z` stored exactly as one
//! rational in `[0, 1)` per canonical generator of `G`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::abgrp::{
    solve_mixed_congruences, subgroup_quotient, AbGroupError, FgAbGroup, GroupElement, IntMatrix,
    Subgroup,
};
use crate::arith::factorize;
use crate::report::ValidationReport;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoverError {
    #[error("invalid building data:\n{0}")]
    Invalid(ValidationReport),
    #[error("{0}")]
    NotACharacter(String),
    #[error("expected {expected} {what}, found {found}")]
    Count {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error(transparent)]
    Group(#[from] AbGroupError),
}

fn frac(r: BigRational) -> BigRational {
    let f = r.floor();
    r - f
}

/// A character `G → Q/Z`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Character {
    values: Vec<BigRational>,
}

impl Character {
    pub fn trivial(g: &FgAbGroup) -> Self {
        Character {
            values: vec![BigRational::zero(); g.num_generators()],
        }
    }

    /// From the values on the canonical generators of a finite `G`. Each
    /// value is reduced mod 1 and must be killed by the generator's order.
    pub fn from_values(g: &FgAbGroup, values: Vec<BigRational>) -> Result<Self, CoverError> {
        if !g.is_finite() {
            return Err(AbGroupError::NotFinite.into());
        }
        if values.len() != g.num_generators() {
            return Err(CoverError::Count {
                what: "character values",
                expected: g.num_generators(),
                found: values.len(),
            });
        }
        let values: Vec<BigRational> = values.into_iter().map(frac).collect();
        for (u, (v, d)) in values.iter().zip(g.invariants()).enumerate() {
            if !(v * d).is_integer() {
                return Err(CoverError::NotACharacter(format!(
                    "value {v} on generator {u} of order {d} is not a character value"
                )));
            }
        }
        Ok(Character { values })
    }

    /// The character with the given coordinates in `G* ≅ ⊕ Z/d_u`, where
    /// coordinate `u` is `d_u·χ(e_u)`.
    pub fn from_dual_coordinates(g: &FgAbGroup, x: &GroupElement) -> Self {
        Character {
            values: x
                .coords()
                .iter()
                .zip(g.invariants())
                .map(|(c, d)| frac(BigRational::new(c.clone(), d.clone())))
                .collect(),
        }
    }

    pub fn dual_coordinates(&self, g: &FgAbGroup) -> GroupElement {
        let coords: Vec<BigInt> = self
            .values
            .iter()
            .zip(g.invariants())
            .map(|(v, d)| (v * d).to_integer())
            .collect();
        g.reduce(&coords)
    }

    pub fn values(&self) -> &[BigRational] {
        &self.values
    }

    /// `χ(x) ∈ [0, 1)`.
    pub fn evaluate(&self, x: &GroupElement) -> BigRational {
        let s: BigRational = self
            .values
            .iter()
            .zip(x.coords())
            .map(|(v, c)| v * BigRational::from_integer(c.clone()))
            .sum();
        frac(s)
    }

    pub fn add(&self, other: &Character) -> Character {
        Character {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| frac(a + b))
                .collect(),
        }
    }

    pub fn scale(&self, n: &BigInt) -> Character {
        Character {
            values: self
                .values
                .iter()
                .map(|a| frac(a * BigRational::from_integer(n.clone())))
                .collect(),
        }
    }

    pub fn order(&self) -> BigInt {
        self.values
            .iter()
            .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
    }

    pub fn is_trivial(&self) -> bool {
        self.values.iter().all(Zero::is_zero)
    }

    /// The unique character with `χ(g_j) = a_j / m_j` for every branch, if
    /// there is one. Requires the branches to generate `G`.
    pub fn from_components(
        g: &FgAbGroup,
        branches: &[Branch],
        a: &[BigInt],
    ) -> Result<Self, CoverError> {
        if a.len() != branches.len() {
            return Err(CoverError::Count {
                what: "character components",
                expected: branches.len(),
                found: a.len(),
            });
        }
        let sigma = sigma_matrix(g, branches);
        let moduli = g.moduli();
        let mut values = Vec::with_capacity(g.num_generators());
        for u in 0..g.num_generators() {
            let t = solve_mixed_congruences(&sigma, g.generator(u).coords(), &moduli)
                .into_option()
                .ok_or_else(|| {
                    CoverError::NotACharacter(
                        "inertia generators do not generate G; characters are not determined by components".into(),
                    )
                })?;
            let v: BigRational = t
                .iter()
                .zip(a)
                .zip(branches)
                .map(|((t, a), b)| BigRational::new(t * a, b.order.clone()))
                .sum();
            values.push(v);
        }
        let chi = Character::from_values(g, values)?;
        for (j, (b, aj)) in branches.iter().zip(a).enumerate() {
            if chi.evaluate(&b.generator) != frac(BigRational::new(aj.clone(), b.order.clone())) {
                return Err(CoverError::NotACharacter(format!(
                    "components {a:?} do not define a character of G (fails on g_{})",
                    j + 1
                )));
            }
        }
        Ok(chi)
    }
}

/// An inertia subgroup `G_j = ⟨g_j⟩` of order `m_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Branch {
    pub order: BigInt,
    pub generator: GroupElement,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacterGenerator {
    pub character: Character,
    /// Declared order `d_i`.
    pub order: BigInt,
}

/// `(G, (m_j, g_j)_j, (χ_i, d_i)_i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BuildingData {
    pub group: FgAbGroup,
    pub branches: Vec<Branch>,
    pub chi_gens: Vec<CharacterGenerator>,
}

/// `|G| × k` matrix whose columns are the `g_j`.
fn sigma_matrix(g: &FgAbGroup, branches: &[Branch]) -> IntMatrix {
    let cols: Vec<Vec<BigInt>> = branches
        .iter()
        .map(|b| b.generator.coords().to_vec())
        .collect();
    IntMatrix::from_cols(&cols, g.num_generators())
}

impl BuildingData {
    pub fn new(group: FgAbGroup, branches: Vec<Branch>, chi_gens: Vec<CharacterGenerator>) -> Self {
        BuildingData {
            group,
            branches,
            chi_gens,
        }
    }

    /// Derives each character (and its order) from its components `a_ij`.
    pub fn from_components(
        group: FgAbGroup,
        branches: Vec<Branch>,
        components: &[Vec<BigInt>],
    ) -> Result<Self, CoverError> {
        let chi_gens = components
            .iter()
            .map(|a| {
                let character = Character::from_components(&group, &branches, a)?;
                let order = character.order();
                Ok(CharacterGenerator { character, order })
            })
            .collect::<Result<_, CoverError>>()?;
        Ok(BuildingData {
            group,
            branches,
            chi_gens,
        })
    }

    /// Uses the basis of `G*` dual to the canonical generators of `G`.
    pub fn with_dual_basis(group: FgAbGroup, branches: Vec<Branch>) -> Self {
        let chi_gens = (0..group.torsion_rank())
            .map(|u| CharacterGenerator {
                character: Character::from_dual_coordinates(&group, &group.generator(u)),
                order: group.invariants()[u].clone(),
            })
            .collect();
        BuildingData {
            group,
            branches,
            chi_gens,
        }
    }

    pub fn num_branches(&self) -> usize {
        self.branches.len()
    }

    pub fn inertia_orders(&self) -> Vec<BigInt> {
        self.branches.iter().map(|b| b.order.clone()).collect()
    }

    pub fn character_orders(&self) -> Vec<BigInt> {
        self.chi_gens.iter().map(|c| c.order.clone()).collect()
    }

    /// Columns are the `g_j` in canonical coordinates of `G`.
    pub fn sigma(&self) -> IntMatrix {
        sigma_matrix(&self.group, &self.branches)
    }

    /// The `n × k` matrix of components `a_ij` of the chosen characters.
    pub fn component_matrix(&self) -> IntMatrix {
        let rows: Vec<Vec<BigInt>> = self
            .chi_gens
            .iter()
            .map(|c| character_components(self, &c.character))
            .collect();
        IntMatrix::from_rows(rows, self.num_branches())
    }

    /// Coefficients `b_i ∈ [0, d_i)` with `χ = Σ b_i χ_i`.
    pub fn character_coefficients(&self, chi: &Character) -> Result<Vec<BigInt>, CoverError> {
        let g = &self.group;
        let cols: Vec<Vec<BigInt>> = self
            .chi_gens
            .iter()
            .map(|c| c.character.dual_coordinates(g).into_coords())
            .collect();
        let m = IntMatrix::from_cols(&cols, g.num_generators());
        let b = solve_mixed_congruences(&m, chi.dual_coordinates(g).coords(), &g.moduli())
            .into_option()
            .ok_or_else(|| {
                CoverError::NotACharacter("character is not in the span of the chosen generators".into())
            })?;
        Ok(b
            .iter()
            .zip(&self.chi_gens)
            .map(|(x, c)| x.mod_floor(&c.order))
            .collect())
    }

    /// Every character of `G`, for small groups.
    pub fn all_characters(&self) -> Result<Vec<Character>, CoverError> {
        Ok(self
            .group
            .elements()?
            .iter()
            .map(|x| Character::from_dual_coordinates(&self.group, x))
            .collect())
    }
}

/// Checks finiteness, inertia orders, total ramification and that the chosen
/// characters form a basis of `G*` with the declared orders.
pub fn validate_building_data(bd: &BuildingData) -> ValidationReport {
    let mut r = ValidationReport::new();
    let g = &bd.group;
    let Some(order) = g.order() else {
        r.push("group_not_finite", format!("G = {g} is infinite"));
        return r;
    };

    for (j, b) in bd.branches.iter().enumerate() {
        if b.generator.coords().len() != g.num_generators() {
            r.push(
                "branch_dimension",
                format!("g_{} has {} coordinates, G has {} generators", j + 1, b.generator.coords().len(), g.num_generators()),
            );
            continue;
        }
        let ord = g.element_order(&b.generator).expect("G is finite");
        if ord != b.order {
            r.push(
                "inertia_order_mismatch",
                format!("g_{} has order {ord}, declared m_{} = {}", j + 1, j + 1, b.order),
            );
        }
    }
    if !r.is_valid() {
        return r;
    }

    let gens: Vec<GroupElement> = bd.branches.iter().map(|b| b.generator.clone()).collect();
    let q = subgroup_quotient(g, &gens);
    if !q.group.is_trivial() {
        r.push(
            "not_totally_ramified",
            format!("the inertia generators span a proper subgroup (G/⟨g_j⟩ = {})", q.group),
        );
    }

    for (i, c) in bd.chi_gens.iter().enumerate() {
        if c.character.values().len() != g.num_generators() {
            r.push("character_dimension", format!("χ_{} has the wrong number of values", i + 1));
            return r;
        }
        let true_order = c.character.order();
        if true_order != c.order {
            r.push(
                "character_order_mismatch",
                format!("χ_{} has order {true_order}, declared d_{} = {}", i + 1, i + 1, c.order),
            );
        }
    }
    let product: BigInt = bd.chi_gens.iter().map(|c| c.character.order()).product();
    let duals: Vec<GroupElement> = bd
        .chi_gens
        .iter()
        .map(|c| c.character.dual_coordinates(g))
        .collect();
    let span = Subgroup::generated(g, &duals);
    if product != order || span.order() != Some(order.clone()) {
        r.push(
            "characters_not_basis",
            format!(
                "G* is not the direct sum of the chosen characters (orders multiply to {product}, |G*| = {order})"
            ),
        );
    }
    r
}

/// `(a_{χ,1}, …, a_{χ,k})` with `0 ≤ a_{χ,j} < m_j` and `χ(g_j) = a_{χ,j}/m_j`.
pub fn character_components(bd: &BuildingData, chi: &Character) -> Vec<BigInt> {
    bd.branches
        .iter()
        .map(|b| {
            let v = chi.evaluate(&b.generator) * BigRational::from_integer(b.order.clone());
            debug_assert!(v.is_integer(), "m_j·χ(g_j) is integral when g_j has order m_j");
            v.to_integer().mod_floor(&b.order)
        })
        .collect()
}

/// The subgroup `A ⊆ Pic(X)` generated by the branch classes `D_j` and the
/// eigensheaf classes `L_{χ_i}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PicardModel {
    pub group: FgAbGroup,
    pub d: Vec<GroupElement>,
    pub l: Vec<GroupElement>,
}

impl PicardModel {
    /// Checks that `A` is generated by `{D_j} ∪ {L_{χ_i}}`.
    pub fn validate(&self) -> ValidationReport {
        let mut r = ValidationReport::new();
        let gens: Vec<GroupElement> = self.d.iter().chain(&self.l).cloned().collect();
        let q = subgroup_quotient(&self.group, &gens);
        if !q.group.is_trivial() {
            r.push(
                "picard_not_generated",
                format!("D_j and L_χ do not generate A (A/⟨D, L⟩ = {})", q.group),
            );
        }
        r
    }
}

/// Verifies `d_i·L_{χ_i} = Σ_j (d_i a_ij / m_j)·D_j` in `A` for every `i`.
pub fn check_characteristic_relations(bd: &BuildingData, pic: &PicardModel) -> ValidationReport {
    let mut r = ValidationReport::new();
    let (k, n) = (bd.num_branches(), bd.chi_gens.len());
    if pic.d.len() != k || pic.l.len() != n {
        r.push(
            "picard_dimension_mismatch",
            format!("expected {k} branch classes and {n} eigensheaf classes, found {} and {}", pic.d.len(), pic.l.len()),
        );
        return r;
    }
    let a = bd.component_matrix();
    let grp = &pic.group;
    for (i, c) in bd.chi_gens.iter().enumerate() {
        let mut coeffs = Vec::with_capacity(k);
        let mut integral = true;
        for (j, b) in bd.branches.iter().enumerate() {
            let num = &c.order * &a[(i, j)];
            if !num.is_multiple_of(&b.order) {
                r.push(
                    "non_integral_coefficient",
                    format!("d_{}·a_{}{}/m_{} = {num}/{} is not an integer", i + 1, i + 1, j + 1, j + 1, b.order),
                );
                integral = false;
            }
            coeffs.push(num / &b.order);
        }
        if !integral {
            continue;
        }
        let lhs = grp.scale(&c.order, &pic.l[i]);
        let rhs = grp.combine(&coeffs, &pic.d);
        if lhs != rhs {
            r.push(
                "characteristic_relation_failed",
                format!(
                    "relation {}: d·L = {lhs} but Σ (d a/m)·D = {rhs} (coefficients {:?})",
                    i + 1,
                    coeffs.iter().map(ToString::to_string).collect::<Vec<_>>()
                ),
            );
        }
    }
    r
}

/// `L_χ = Σ_i b_i L_{χ_i} − Σ_j q_j D_j` with `q_j = ⌊Σ_i b_i a_ij / m_j⌋`.
pub fn derive_eigensheaf_class(
    bd: &BuildingData,
    pic: &PicardModel,
    chi: &Character,
) -> Result<GroupElement, CoverError> {
    let b = bd.character_coefficients(chi)?;
    let a = bd.component_matrix();
    let q: Vec<BigInt> = bd
        .branches
        .iter()
        .enumerate()
        .map(|(j, br)| {
            let s: BigInt = b.iter().enumerate().map(|(i, bi)| bi * &a[(i, j)]).sum();
            s.div_floor(&br.order)
        })
        .collect();
    let grp = &pic.group;
    let pos = grp.combine(&b, &pic.l);
    let neg = grp.combine(&q, &pic.d);
    Ok(grp.sub(&pos, &neg))
}

/// Replaces every character generator by its prime-power components
/// `(d/p^e)·χ`, deriving the matching eigensheaf classes.
pub fn refine_to_prime_powers(
    bd: &BuildingData,
    pic: &PicardModel,
) -> Result<(BuildingData, PicardModel), CoverError> {
    let mut chi_gens = Vec::new();
    let mut l = Vec::new();
    for (i, c) in bd.chi_gens.iter().enumerate() {
        let parts = factorize(&c.order);
        if parts.len() <= 1 {
            chi_gens.push(c.clone());
            l.push(pic.l[i].clone());
            continue;
        }
        for (p, e) in parts {
            let pe = crate::arith::pow(&p, e);
            let character = c.character.scale(&(&c.order / &pe));
            l.push(derive_eigensheaf_class(bd, pic, &character)?);
            chi_gens.push(CharacterGenerator {
                character,
                order: pe,
            });
        }
    }
    Ok((
        BuildingData::new(bd.group.clone(), bd.branches.clone(), chi_gens),
        PicardModel {
            group: pic.group.clone(),
            d: pic.d.clone(),
            l,
        },
    ))
}
