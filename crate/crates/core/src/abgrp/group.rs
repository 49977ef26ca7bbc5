use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{AbGroupError, IntMatrix};

/// A finitely generated abelian group `Z/d_1 ⊕ … ⊕ Z/d_t ⊕ Z^r` in
/// invariant-factor form: every `d_u ≥ 2` and `d_u | d_{u+1}`.
///
/// Canonical generators are ordered torsion first, then free.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FgAbGroup {
    invariants: Vec<BigInt>,
    free_rank: usize,
}

/// Coordinates of an element with respect to the canonical generators of some
/// [`FgAbGroup`]. Torsion coordinates are kept in `[0, d_u)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement(Vec<BigInt>);

impl GroupElement {
    pub fn coords(&self) -> &[BigInt] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<BigInt> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn to_i64(&self) -> Option<Vec<i64>> {
        self.0.iter().map(ToPrimitive::to_i64).collect()
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

impl FgAbGroup {
    pub fn new(invariants: Vec<BigInt>, free_rank: usize) -> Result<Self, AbGroupError> {
        for (u, d) in invariants.iter().enumerate() {
            if *d < BigInt::from(2) {
                return Err(AbGroupError::InvalidInvariants(format!(
                    "invariant {u} is {d}, expected at least 2"
                )));
            }
            if u > 0 && !d.is_multiple_of(&invariants[u - 1]) {
                return Err(AbGroupError::InvalidInvariants(format!(
                    "{} does not divide {d}",
                    invariants[u - 1]
                )));
            }
        }
        Ok(FgAbGroup {
            invariants,
            free_rank,
        })
    }

    pub fn from_i64(invariants: &[i64], free_rank: usize) -> Result<Self, AbGroupError> {
        Self::new(invariants.iter().map(|&d| BigInt::from(d)).collect(), free_rank)
    }

    pub fn trivial() -> Self {
        FgAbGroup {
            invariants: vec![],
            free_rank: 0,
        }
    }

    pub fn free(rank: usize) -> Self {
        FgAbGroup {
            invariants: vec![],
            free_rank: rank,
        }
    }

    /// `Z/n`; `n = 0` gives `Z` and `n = 1` the trivial group.
    pub fn cyclic(n: &BigInt) -> Self {
        let n = n.abs();
        if n.is_zero() {
            Self::free(1)
        } else if n.is_one() {
            Self::trivial()
        } else {
            FgAbGroup {
                invariants: vec![n],
                free_rank: 0,
            }
        }
    }

    pub fn invariants(&self) -> &[BigInt] {
        &self.invariants
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion_rank(&self) -> usize {
        self.invariants.len()
    }

    pub fn num_generators(&self) -> usize {
        self.invariants.len() + self.free_rank
    }

    /// Order of each canonical generator, `0` standing for infinite order.
    pub fn moduli(&self) -> Vec<BigInt> {
        self.invariants
            .iter()
            .cloned()
            .chain(std::iter::repeat_n(BigInt::zero(), self.free_rank))
            .collect()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    pub fn is_trivial(&self) -> bool {
        self.num_generators() == 0
    }

    /// Group order, `None` when infinite.
    pub fn order(&self) -> Option<BigInt> {
        self.is_finite().then(|| self.invariants.iter().product())
    }

    /// Exponent of the torsion subgroup.
    pub fn exponent(&self) -> BigInt {
        self.invariants.last().cloned().unwrap_or_else(BigInt::one)
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement(vec![BigInt::zero(); self.num_generators()])
    }

    pub fn generator(&self, u: usize) -> GroupElement {
        let mut c = vec![BigInt::zero(); self.num_generators()];
        c[u] = BigInt::one();
        GroupElement(c)
    }

    pub fn generators(&self) -> Vec<GroupElement> {
        (0..self.num_generators()).map(|u| self.generator(u)).collect()
    }

    /// Reduces raw coordinates. Panics on a length mismatch; use
    /// [`FgAbGroup::element`] for untrusted input.
    pub fn reduce(&self, coords: &[BigInt]) -> GroupElement {
        assert_eq!(
            coords.len(),
            self.num_generators(),
            "coordinate vector has wrong length"
        );
        GroupElement(
            coords
                .iter()
                .enumerate()
                .map(|(u, x)| match self.invariants.get(u) {
                    Some(d) => x.mod_floor(d),
                    None => x.clone(),
                })
                .collect(),
        )
    }

    pub fn element(&self, coords: &[BigInt]) -> Result<GroupElement, AbGroupError> {
        if coords.len() != self.num_generators() {
            return Err(AbGroupError::DimensionMismatch {
                expected: self.num_generators(),
                found: coords.len(),
            });
        }
        Ok(self.reduce(coords))
    }

    pub fn element_i64(&self, coords: &[i64]) -> Result<GroupElement, AbGroupError> {
        let c: Vec<BigInt> = coords.iter().map(|&x| BigInt::from(x)).collect();
        self.element(&c)
    }

    pub fn add(&self, x: &GroupElement, y: &GroupElement) -> GroupElement {
        let s: Vec<BigInt> = x.0.iter().zip(&y.0).map(|(a, b)| a + b).collect();
        self.reduce(&s)
    }

    pub fn sub(&self, x: &GroupElement, y: &GroupElement) -> GroupElement {
        let s: Vec<BigInt> = x.0.iter().zip(&y.0).map(|(a, b)| a - b).collect();
        self.reduce(&s)
    }

    pub fn neg(&self, x: &GroupElement) -> GroupElement {
        let s: Vec<BigInt> = x.0.iter().map(|a| -a).collect();
        self.reduce(&s)
    }

    pub fn scale(&self, n: &BigInt, x: &GroupElement) -> GroupElement {
        let s: Vec<BigInt> = x.0.iter().map(|a| a * n).collect();
        self.reduce(&s)
    }

    /// `Σ coeffs[l]·elems[l]`
    pub fn combine(&self, coeffs: &[BigInt], elems: &[GroupElement]) -> GroupElement {
        assert_eq!(coeffs.len(), elems.len());
        let mut acc = vec![BigInt::zero(); self.num_generators()];
        for (c, e) in coeffs.iter().zip(elems) {
            for (a, x) in acc.iter_mut().zip(&e.0) {
                *a += c * x;
            }
        }
        self.reduce(&acc)
    }

    /// Order of an element, `None` when infinite.
    pub fn element_order(&self, x: &GroupElement) -> Option<BigInt> {
        let mut ord = BigInt::one();
        for (u, c) in x.0.iter().enumerate() {
            match self.invariants.get(u) {
                Some(d) => {
                    let g = c.gcd(d);
                    ord = ord.lcm(&(d / g));
                }
                None if !c.is_zero() => return None,
                None => {}
            }
        }
        Some(ord)
    }

    /// Whether `x = n·y` for some `y`.
    pub fn is_divisible_by(&self, x: &GroupElement, n: &BigInt) -> bool {
        let n = n.abs();
        x.0.iter().enumerate().all(|(u, c)| {
            let modulus = self.invariants.get(u).cloned().unwrap_or_else(BigInt::zero);
            // n·y ≡ c mod modulus is solvable iff gcd(n, modulus) | c
            let g = n.gcd(&modulus);
            if g.is_zero() {
                c.is_zero()
            } else {
                c.is_multiple_of(&g)
            }
        })
    }

    /// Every element of a finite group, in lexicographic coordinate order.
    pub fn elements(&self) -> Result<Vec<GroupElement>, AbGroupError> {
        if !self.is_finite() {
            return Err(AbGroupError::NotFinite);
        }
        let dims: Vec<u64> = self
            .invariants
            .iter()
            .map(|d| d.to_u64().ok_or(AbGroupError::TooLarge))
            .collect::<Result<_, _>>()?;
        let total: u64 = dims.iter().product();
        let mut out = Vec::with_capacity(total as usize);
        let mut cur = vec![0u64; dims.len()];
        for _ in 0..total {
            out.push(GroupElement(cur.iter().map(|&x| BigInt::from(x)).collect()));
            for u in (0..dims.len()).rev() {
                cur[u] += 1;
                if cur[u] < dims[u] {
                    break;
                }
                cur[u] = 0;
            }
        }
        Ok(out)
    }
}

impl fmt::Display for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts: Vec<String> = self.invariants.iter().map(|d| format!("Z/{d}")).collect();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// A homomorphism between canonical generator systems. Column `u` of the
/// matrix is the image of the `u`-th canonical generator of the source.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Homomorphism {
    source: FgAbGroup,
    target: FgAbGroup,
    matrix: IntMatrix,
}

impl Homomorphism {
    /// Validates shape and well-definedness (`d·image` vanishes for every
    /// source torsion generator of order `d`) and reduces the columns.
    pub fn new(
        source: FgAbGroup,
        target: FgAbGroup,
        matrix: IntMatrix,
    ) -> Result<Self, AbGroupError> {
        if matrix.num_rows() != target.num_generators()
            || matrix.num_cols() != source.num_generators()
        {
            return Err(AbGroupError::ShapeMismatch {
                rows: matrix.num_rows(),
                cols: matrix.num_cols(),
                target: target.num_generators(),
                domain: source.num_generators(),
            });
        }
        let mut reduced = IntMatrix::zeros(matrix.num_rows(), matrix.num_cols());
        for u in 0..source.num_generators() {
            let img = target.reduce(&matrix.col(u));
            if let Some(d) = source.invariants.get(u) {
                if !target.scale(d, &img).is_zero() {
                    return Err(AbGroupError::IllDefined { generator: u });
                }
            }
            for (i, x) in img.into_coords().into_iter().enumerate() {
                reduced[(i, u)] = x;
            }
        }
        Ok(Homomorphism {
            source,
            target,
            matrix: reduced,
        })
    }

    /// Builds the homomorphism sending canonical generator `u` to `images[u]`.
    pub fn from_images(
        source: FgAbGroup,
        target: FgAbGroup,
        images: &[GroupElement],
    ) -> Result<Self, AbGroupError> {
        let cols: Vec<Vec<BigInt>> = images.iter().map(|g| g.coords().to_vec()).collect();
        if let Some(bad) = cols.iter().find(|c| c.len() != target.num_generators()) {
            return Err(AbGroupError::DimensionMismatch {
                expected: target.num_generators(),
                found: bad.len(),
            });
        }
        if images.len() != source.num_generators() {
            return Err(AbGroupError::DimensionMismatch {
                expected: source.num_generators(),
                found: images.len(),
            });
        }
        let m = IntMatrix::from_cols(&cols, target.num_generators());
        Self::new(source, target, m)
    }

    pub fn identity(g: &FgAbGroup) -> Self {
        Homomorphism {
            source: g.clone(),
            target: g.clone(),
            matrix: IntMatrix::identity(g.num_generators()),
        }
    }

    pub fn zero(source: &FgAbGroup, target: &FgAbGroup) -> Self {
        Homomorphism {
            source: source.clone(),
            target: target.clone(),
            matrix: IntMatrix::zeros(target.num_generators(), source.num_generators()),
        }
    }

    pub fn source(&self) -> &FgAbGroup {
        &self.source
    }

    pub fn target(&self) -> &FgAbGroup {
        &self.target
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn image_of_generator(&self, u: usize) -> GroupElement {
        GroupElement(self.matrix.col(u))
    }

    pub fn apply(&self, x: &GroupElement) -> GroupElement {
        self.target.reduce(&self.matrix.mul_vec(x.coords()))
    }

    /// `other ∘ self`
    pub fn then(&self, other: &Homomorphism) -> Result<Homomorphism, AbGroupError> {
        if self.target != other.source {
            return Err(AbGroupError::IncompatibleComposition);
        }
        Homomorphism::new(
            self.source.clone(),
            other.target.clone(),
            &other.matrix * &self.matrix,
        )
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }
}
