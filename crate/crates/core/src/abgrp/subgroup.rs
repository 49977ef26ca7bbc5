//! Presentations, subgroups, kernels and quotients.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::linsolve::{integer_kernel, solve_mixed_congruences};
use super::snf::smith_decomposition;
use super::{AbGroupError, FgAbGroup, GroupElement, Homomorphism, IntMatrix};

/// A presented group brought to invariant-factor form.
#[derive(Clone, Debug)]
pub struct Canonical {
    pub group: FgAbGroup,
    /// From the free group on the presentation generators.
    pub to_canonical: Homomorphism,
    /// `n × g`; column `u` is a preimage of canonical generator `u` in the
    /// presentation generators.
    pub lifts: IntMatrix,
}

impl Canonical {
    pub fn lift(&self, u: usize) -> Vec<BigInt> {
        self.lifts.col(u)
    }

    /// Image in the canonical group of a vector of presentation coordinates.
    pub fn map(&self, x: &[BigInt]) -> GroupElement {
        self.to_canonical.apply(&FgAbGroup::free(x.len()).reduce(x))
    }
}

/// Cokernel of the row space of `relations` on `num_generators` generators.
pub fn canonicalize(relations: &IntMatrix, num_generators: usize) -> Canonical {
    assert_eq!(
        relations.num_cols(),
        num_generators,
        "relation rows must have one entry per generator"
    );
    let n = num_generators;
    let s = smith_decomposition(relations);

    // In the coordinates y = Vᵀx the relations become diagonal. Unit
    // diagonal entries come first in the chain and are dropped.
    let mut keep = Vec::new();
    let mut invariants = Vec::new();
    let mut free_rank = 0;
    for i in 0..n {
        if i < s.rank {
            let d = &s.d[(i, i)];
            if *d > BigInt::from(1) {
                keep.push(i);
                invariants.push(d.clone());
            }
        } else {
            keep.push(i);
            free_rank += 1;
        }
    }
    let group = FgAbGroup::new(invariants, free_rank).expect("SNF diagonal is a divisibility chain");

    let mut to_c = IntMatrix::zeros(keep.len(), n);
    let mut lifts = IntMatrix::zeros(n, keep.len());
    for (row, &i) in keep.iter().enumerate() {
        for j in 0..n {
            to_c[(row, j)] = s.v[(j, i)].clone();
            lifts[(j, row)] = s.v_inv[(i, j)].clone();
        }
    }
    let to_canonical = Homomorphism::new(FgAbGroup::free(n), group.clone(), to_c)
        .expect("maps out of a free group are always well defined");
    Canonical {
        group,
        to_canonical,
        lifts,
    }
}

fn reduce_mod(moduli: &[BigInt], v: &[BigInt]) -> Vec<BigInt> {
    v.iter()
        .zip(moduli)
        .map(|(x, m)| if m.is_zero() { x.clone() } else { x.mod_floor(&m.abs()) })
        .collect()
}

/// A subgroup of `⊕ Z/μ_i` (with `μ_i = 0` meaning `Z`), carried together with
/// its own invariant-factor form. The ambient need not be canonical.
#[derive(Clone, Debug)]
pub struct Subgroup {
    ambient_moduli: Vec<BigInt>,
    spanning: Vec<Vec<BigInt>>,
    canonical: Canonical,
    basis: Vec<Vec<BigInt>>,
}

impl Subgroup {
    pub fn generated_in(moduli: &[BigInt], gens: &[Vec<BigInt>]) -> Self {
        let dim = moduli.len();
        let spanning: Vec<Vec<BigInt>> = gens
            .iter()
            .map(|g| {
                assert_eq!(g.len(), dim, "generator has wrong length");
                reduce_mod(moduli, g)
            })
            .collect();
        let r = spanning.len();

        // x ∈ Z^r is a relation iff Σ x_l v_l ∈ ⊕ μ_i Z.
        let slack: Vec<usize> = (0..dim).filter(|&i| !moduli[i].is_zero()).collect();
        let mut ext = IntMatrix::zeros(dim, r + slack.len());
        for (l, v) in spanning.iter().enumerate() {
            for i in 0..dim {
                ext[(i, l)] = v[i].clone();
            }
        }
        for (t, &i) in slack.iter().enumerate() {
            ext[(i, r + t)] = -moduli[i].abs();
        }
        let relations: Vec<Vec<BigInt>> = integer_kernel(&ext)
            .into_iter()
            .map(|mut k| {
                k.truncate(r);
                k
            })
            .filter(|k| k.iter().any(|x| !x.is_zero()))
            .collect();
        let canonical = canonicalize(&IntMatrix::from_rows(relations, r), r);

        let basis = (0..canonical.group.num_generators())
            .map(|u| {
                let lift = canonical.lift(u);
                let mut acc = vec![BigInt::zero(); dim];
                for (c, v) in lift.iter().zip(&spanning) {
                    for (a, x) in acc.iter_mut().zip(v) {
                        *a += c * x;
                    }
                }
                reduce_mod(moduli, &acc)
            })
            .collect();

        Subgroup {
            ambient_moduli: moduli.to_vec(),
            spanning,
            canonical,
            basis,
        }
    }

    pub fn generated(ambient: &FgAbGroup, gens: &[GroupElement]) -> Self {
        let raw: Vec<Vec<BigInt>> = gens.iter().map(|g| g.coords().to_vec()).collect();
        Self::generated_in(&ambient.moduli(), &raw)
    }

    pub fn group(&self) -> &FgAbGroup {
        &self.canonical.group
    }

    pub fn ambient_moduli(&self) -> &[BigInt] {
        &self.ambient_moduli
    }

    /// Ambient coordinates of the canonical generators.
    pub fn basis(&self) -> &[Vec<BigInt>] {
        &self.basis
    }

    pub fn order(&self) -> Option<BigInt> {
        self.group().order()
    }

    /// Canonical coordinates of an ambient vector, or `None` if it is not in
    /// the subgroup.
    pub fn coordinates(&self, y: &[BigInt]) -> Option<GroupElement> {
        assert_eq!(y.len(), self.ambient_moduli.len(), "vector has wrong length");
        let a = IntMatrix::from_cols(&self.spanning, self.ambient_moduli.len());
        let x = solve_mixed_congruences(&a, y, &self.ambient_moduli).into_option()?;
        Some(self.canonical.map(&x))
    }

    pub fn contains(&self, y: &[BigInt]) -> bool {
        self.coordinates(y).is_some()
    }

    /// Ambient vector of an element given in canonical coordinates.
    pub fn embed(&self, x: &GroupElement) -> Vec<BigInt> {
        let mut acc = vec![BigInt::zero(); self.ambient_moduli.len()];
        for (c, v) in x.coords().iter().zip(&self.basis) {
            for (a, b) in acc.iter_mut().zip(v) {
                *a += c * b;
            }
        }
        reduce_mod(&self.ambient_moduli, &acc)
    }

    /// The inclusion into a canonical ambient group.
    pub fn inclusion(&self, ambient: &FgAbGroup) -> Result<Homomorphism, AbGroupError> {
        if ambient.moduli() != self.ambient_moduli {
            return Err(AbGroupError::DimensionMismatch {
                expected: self.ambient_moduli.len(),
                found: ambient.num_generators(),
            });
        }
        let cols = IntMatrix::from_cols(&self.basis, ambient.num_generators());
        Homomorphism::new(self.group().clone(), ambient.clone(), cols)
    }
}

/// A quotient `G/⟨gens⟩` together with its projection.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub group: FgAbGroup,
    pub projection: Homomorphism,
    /// Preimages in `G` of the canonical generators of the quotient.
    pub lifts: Vec<GroupElement>,
}

pub fn subgroup_quotient(g: &FgAbGroup, gens: &[GroupElement]) -> Quotient {
    let n = g.num_generators();
    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    for (u, d) in g.invariants().iter().enumerate() {
        let mut r = vec![BigInt::zero(); n];
        r[u] = d.clone();
        rows.push(r);
    }
    for x in gens {
        assert_eq!(x.coords().len(), n, "generator has wrong length");
        rows.push(x.coords().to_vec());
    }
    let c = canonicalize(&IntMatrix::from_rows(rows, n), n);
    let projection = Homomorphism::new(g.clone(), c.group.clone(), c.to_canonical.matrix().clone())
        .expect("projection kills the torsion relations of G");
    let lifts = (0..c.group.num_generators())
        .map(|u| g.reduce(&c.lift(u)))
        .collect();
    Quotient {
        group: c.group,
        projection,
        lifts,
    }
}

impl Homomorphism {
    /// The kernel as a subgroup of the source.
    pub fn kernel_subgroup(&self) -> Subgroup {
        let src = self.source();
        let tgt = self.target();
        let n = src.num_generators();
        let slack: Vec<usize> = (0..tgt.torsion_rank()).collect();
        let mut ext = IntMatrix::zeros(tgt.num_generators(), n + slack.len());
        for i in 0..tgt.num_generators() {
            for j in 0..n {
                ext[(i, j)] = self.matrix()[(i, j)].clone();
            }
        }
        for &i in &slack {
            ext[(i, n + i)] = -tgt.invariants()[i].clone();
        }
        let gens: Vec<GroupElement> = integer_kernel(&ext)
            .into_iter()
            .map(|mut k| {
                k.truncate(n);
                src.reduce(&k)
            })
            .filter(|x| !x.is_zero())
            .collect();
        Subgroup::generated(src, &gens)
    }

    pub fn image_subgroup(&self) -> Subgroup {
        let gens: Vec<GroupElement> = (0..self.source().num_generators())
            .map(|u| self.image_of_generator(u))
            .collect();
        Subgroup::generated(self.target(), &gens)
    }

    /// Some `x` with `f(x) = y`.
    pub fn preimage(&self, y: &GroupElement) -> Option<GroupElement> {
        let x = solve_mixed_congruences(self.matrix(), y.coords(), &self.target().moduli())
            .into_option()?;
        Some(self.source().reduce(&x))
    }

    pub fn is_injective(&self) -> bool {
        self.kernel_subgroup().group().is_trivial()
    }

    pub fn is_surjective(&self) -> bool {
        let gens: Vec<GroupElement> = (0..self.source().num_generators())
            .map(|u| self.image_of_generator(u))
            .collect();
        subgroup_quotient(self.target(), &gens).group.is_trivial()
    }
}

/// Generators of `ker f` in canonical source coordinates; empty iff the kernel
/// is trivial.
pub fn hom_kernel(f: &Homomorphism) -> Vec<GroupElement> {
    let k = f.kernel_subgroup();
    k.basis()
        .iter()
        .map(|b| f.source().reduce(b))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn group(inv: &[i64], r: usize) -> FgAbGroup {
        FgAbGroup::from_i64(inv, r).unwrap()
    }

    #[test]
    fn canonicalize_examples() {
        let z = canonicalize(&IntMatrix::zeros(0, 1), 1);
        assert_eq!(z.group, FgAbGroup::free(1));

        let rel = IntMatrix::from_i64(&[&[4, 0, 0], &[0, 4, 0], &[0, 0, 4], &[2, 2, 2]]);
        let g = canonicalize(&rel, 3);
        assert_eq!(g.group, group(&[2, 4, 4], 0));
        // every relation maps to zero, every lift maps back to its generator
        for r in rel.rows() {
            assert!(g.map(r).is_zero());
        }
        for u in 0..3 {
            assert_eq!(g.map(&g.lift(u)), g.group.generator(u));
        }

        let z2 = canonicalize(&IntMatrix::from_i64(&[&[2]]), 1);
        assert_eq!(z2.group, group(&[2], 0));
    }

    #[test]
    fn kernel_examples() {
        let z4 = group(&[4], 0);
        assert!(hom_kernel(&Homomorphism::identity(&z4)).is_empty());
        let k = hom_kernel(&Homomorphism::zero(&z4, &z4));
        assert_eq!(k.len(), 1);
        assert_eq!(k[0], z4.generator(0));
    }

    #[test]
    fn kernel_of_projection_onto_order_32_group() {
        let src = group(&[4, 4, 4], 0);
        let q = subgroup_quotient(&src, &[src.element_i64(&[2, 2, 2]).unwrap()]);
        assert_eq!(q.group, group(&[2, 4, 4], 0));
        let ker = q.projection.kernel_subgroup();
        assert_eq!(ker.group(), &group(&[2], 0));
        assert_eq!(ker.basis(), &[big(&[2, 2, 2])]);
    }

    #[test]
    fn quotient_examples() {
        let g = group(&[2, 4], 1);
        let q = subgroup_quotient(&g, &[]);
        assert_eq!(q.group, g);
        assert_eq!(q.projection.matrix(), &IntMatrix::identity(3));

        let z = FgAbGroup::free(1);
        let q = subgroup_quotient(&z, &[z.element_i64(&[2]).unwrap()]);
        assert_eq!(q.group, group(&[2], 0));
    }

    #[test]
    fn subgroup_coordinates_round_trip() {
        let moduli = big(&[4, 4, 4]);
        let n = Subgroup::generated_in(&moduli, &[big(&[2, 2, 2]), big(&[6, 2, -2])]);
        assert_eq!(n.group(), &group(&[2], 0));
        let c = n.coordinates(&big(&[2, 2, 2])).unwrap();
        assert_eq!(n.embed(&c), big(&[2, 2, 2]));
        assert!(n.coordinates(&big(&[1, 0, 0])).is_none());
    }

    #[test]
    fn preimage_and_surjectivity() {
        let z4 = group(&[4], 0);
        let z2 = group(&[2], 0);
        let p = Homomorphism::new(z4.clone(), z2.clone(), IntMatrix::from_i64(&[&[1]])).unwrap();
        assert!(p.is_surjective());
        assert!(!p.is_injective());
        let x = p.preimage(&z2.generator(0)).unwrap();
        assert_eq!(p.apply(&x), z2.generator(0));
        let i = Homomorphism::new(z2, z4, IntMatrix::from_i64(&[&[2]])).unwrap();
        assert!(i.is_injective());
        assert!(!i.is_surjective());
    }
}
