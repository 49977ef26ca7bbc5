//! Splitting of short exact sequences `0 → K → E → G → 0` of finite abelian
//! groups.

use super::linsolve::solve_mixed_congruences;
use super::{AbGroupError, GroupElement, Homomorphism, IntMatrix};

#[derive(Clone, Debug)]
pub struct SplitDecision {
    pub splits: bool,
    /// A homomorphic section `G → E` when the sequence splits.
    pub section: Option<Homomorphism>,
    /// For each canonical generator `e_u` of `G` (order `d_u`), the element
    /// `κ_u ∈ K` with `inc(κ_u) = d_u·ê_u` for the chosen lift `ê_u`. The
    /// sequence splits iff every `κ_u ∈ d_u K`; the tuple is a representative
    /// of the extension class in `⊕ K/d_u K`.
    pub obstruction: Vec<GroupElement>,
}

/// Checks exactness of `K → E → G` and the finiteness of all three groups.
pub fn check_exact(inc: &Homomorphism, proj: &Homomorphism) -> Result<(), AbGroupError> {
    let violated = |m: &str| Err(AbGroupError::ExactnessViolated(m.to_string()));
    if inc.target() != proj.source() {
        return violated("inclusion target differs from projection source");
    }
    let (k, e, g) = (inc.source(), inc.target(), proj.target());
    let (Some(ok), Some(oe), Some(og)) = (k.order(), e.order(), g.order()) else {
        return Err(AbGroupError::NotFinite);
    };
    if !inc.is_injective() {
        return violated("inclusion is not injective");
    }
    if !proj.is_surjective() {
        return violated("projection is not surjective");
    }
    if !inc.then(proj)?.is_zero() {
        return violated("projection does not vanish on the image of the inclusion");
    }
    if ok * og != oe {
        return violated("image of the inclusion is smaller than the kernel of the projection");
    }
    Ok(())
}

/// Decides whether the sequence splits, through its class in
/// `Ext(G, K) = ⊕ K/d_u K` computed on the cyclic presentation of `G`.
pub fn sequence_splits(
    inc: &Homomorphism,
    proj: &Homomorphism,
) -> Result<SplitDecision, AbGroupError> {
    check_exact(inc, proj)?;
    let (k, e, g) = (inc.source(), inc.target(), proj.target());

    let mut lifts = Vec::new();
    let mut obstruction = Vec::new();
    let mut corrections = Vec::new();
    for (u, d) in g.invariants().iter().enumerate() {
        let lift = proj
            .preimage(&g.generator(u))
            .expect("projection is surjective");
        let kappa = inc
            .preimage(&e.scale(d, &lift))
            .expect("d·lift lies in the kernel of the projection");
        // d·x ≡ κ coordinate-wise in K
        let n = k.num_generators();
        let mut dm = IntMatrix::zeros(n, n);
        for i in 0..n {
            dm[(i, i)] = d.clone();
        }
        let sol = solve_mixed_congruences(&dm, kappa.coords(), &k.moduli()).into_option();
        corrections.push(sol.map(|x| k.reduce(&x)));
        lifts.push(lift);
        obstruction.push(kappa);
    }

    if corrections.iter().any(Option::is_none) {
        return Ok(SplitDecision {
            splits: false,
            section: None,
            obstruction,
        });
    }
    let images: Vec<GroupElement> = lifts
        .iter()
        .zip(corrections)
        .map(|(l, c)| e.sub(l, &inc.apply(&c.expect("checked above"))))
        .collect();
    let section = Homomorphism::from_images(g.clone(), e.clone(), &images)?;
    debug_assert!(section
        .then(proj)
        .map(|id| id.matrix() == Homomorphism::identity(g).matrix())
        .unwrap_or(false));
    Ok(SplitDecision {
        splits: true,
        section: Some(section),
        obstruction,
    })
}
