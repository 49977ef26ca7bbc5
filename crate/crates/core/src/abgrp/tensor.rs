//! Tensor products of finitely generated abelian groups.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use super::subgroup::{canonicalize, Canonical};
use super::{AbGroupError, FgAbGroup, GroupElement, Homomorphism, IntMatrix};

/// `L ⊗ R`, presented on the pairs of canonical generators
/// `e_u ⊗ f_v` with `gcd(ord e_u, ord f_v)·(e_u ⊗ f_v) = 0`.
#[derive(Clone, Debug)]
pub struct TensorProduct {
    left: FgAbGroup,
    right: FgAbGroup,
    canonical: Canonical,
}

impl TensorProduct {
    pub fn new(left: &FgAbGroup, right: &FgAbGroup) -> Self {
        let (nl, nr) = (left.num_generators(), right.num_generators());
        let (ml, mr) = (left.moduli(), right.moduli());
        let n = nl * nr;
        let mut rows = Vec::new();
        for u in 0..nl {
            for v in 0..nr {
                let g = ml[u].gcd(&mr[v]);
                if !g.is_zero() {
                    let mut row = vec![BigInt::zero(); n];
                    row[u * nr + v] = g;
                    rows.push(row);
                }
            }
        }
        let canonical = canonicalize(&IntMatrix::from_rows(rows, n), n);
        TensorProduct {
            left: left.clone(),
            right: right.clone(),
            canonical,
        }
    }

    pub fn group(&self) -> &FgAbGroup {
        &self.canonical.group
    }

    pub fn left(&self) -> &FgAbGroup {
        &self.left
    }

    pub fn right(&self) -> &FgAbGroup {
        &self.right
    }

    /// `x ⊗ y` in canonical coordinates.
    pub fn eval(&self, x: &GroupElement, y: &GroupElement) -> GroupElement {
        let nr = self.right.num_generators();
        let mut pairs = vec![BigInt::zero(); self.left.num_generators() * nr];
        for (u, a) in x.coords().iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (v, b) in y.coords().iter().enumerate() {
                pairs[u * nr + v] = a * b;
            }
        }
        self.canonical.map(&pairs)
    }

    /// Expresses canonical generator `w` as `Σ c·(e_u ⊗ f_v)`, returning the
    /// nonzero `(u, v, c)` terms.
    pub fn expand_generator(&self, w: usize) -> Vec<(usize, usize, BigInt)> {
        let nr = self.right.num_generators();
        self.canonical
            .lift(w)
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (i / nr, i % nr, c))
            .collect()
    }

    /// Expands an arbitrary element into pure tensors `(e_u, f_v, c)`.
    pub fn expand(&self, x: &GroupElement) -> Vec<(usize, usize, BigInt)> {
        let nr = self.right.num_generators();
        let mut acc = vec![BigInt::zero(); self.left.num_generators() * nr];
        for (w, xw) in x.coords().iter().enumerate() {
            if xw.is_zero() {
                continue;
            }
            for (u, v, c) in self.expand_generator(w) {
                acc[u * nr + v] += xw * c;
            }
        }
        acc.into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (i / nr, i % nr, c))
            .collect()
    }
}

pub fn tensor_with(g: &FgAbGroup, k: &FgAbGroup) -> TensorProduct {
    TensorProduct::new(g, k)
}

/// `f ⊗ g : A ⊗ B → A' ⊗ B'`.
pub fn tensor_hom(f: &Homomorphism, g: &Homomorphism) -> Result<Homomorphism, AbGroupError> {
    let src = TensorProduct::new(f.source(), g.source());
    let dst = TensorProduct::new(f.target(), g.target());
    let images: Vec<GroupElement> = (0..src.group().num_generators())
        .map(|w| {
            let mut acc = dst.group().zero();
            for (u, v, c) in src.expand_generator(w) {
                let t = dst.eval(&f.image_of_generator(u), &g.image_of_generator(v));
                acc = dst.group().add(&acc, &dst.group().scale(&c, &t));
            }
            acc
        })
        .collect();
    Homomorphism::from_images(src.group().clone(), dst.group().clone(), &images)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn group(inv: &[i64], r: usize) -> FgAbGroup {
        FgAbGroup::from_i64(inv, r).unwrap()
    }

    #[test]
    fn integers_tensor_z2() {
        let t = tensor_with(&FgAbGroup::free(1), &group(&[2], 0));
        assert_eq!(t.group(), &group(&[2], 0));
        let one = FgAbGroup::free(1).generator(0);
        assert_eq!(t.eval(&one, &group(&[2], 0).generator(0)).coords(), &[BigInt::from(1)]);
    }

    #[test]
    fn z4_tensor_z2_kills_two() {
        let (z4, z2) = (group(&[4], 0), group(&[2], 0));
        let t = tensor_with(&z4, &z2);
        assert_eq!(t.group(), &z2);
        let two = z4.element_i64(&[2]).unwrap();
        assert!(t.eval(&two, &z2.generator(0)).is_zero());
    }

    #[test]
    fn distributes_over_sums() {
        let t = tensor_with(&group(&[2], 1), &group(&[2], 0));
        assert_eq!(t.group(), &group(&[2, 2], 0));
    }

    #[test]
    fn tensor_of_identity_is_identity() {
        let a = group(&[2], 1);
        let b = group(&[4], 0);
        let h = tensor_hom(&Homomorphism::identity(&a), &Homomorphism::identity(&b)).unwrap();
        assert_eq!(h.matrix(), &IntMatrix::identity(h.source().num_generators()));
    }
}
