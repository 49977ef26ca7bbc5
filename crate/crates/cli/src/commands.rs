//! The commands of the `cover` binary.

use clap::ValueEnum;
use cover_core::cover::refine_to_prime_powers;
use cover_core::decomp::{decompose_divisors, DecompError, Decomposition};
use cover_core::extclass::{
    check_divisibility_vanishing, check_xi_icf_consistency, compute_icf, compute_xi,
    corollary_conditions, realize_cyclic_extension, restrict_class, ExtClassError, ExtensionClass,
};
use cover_core::topology::{compute_g_tilde, DeckGroupResult, TopologyError};
use cover_core::abgrp::sequence_splits;
use cover_core::{FgAbGroup, GroupElement};
use serde_json::json;

use crate::output::{self, fmt_vec};
use crate::{selftest, CliError, Report, Scenario, FORMAT_VERSION};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Validate the scenario and print the character data.
    Validate,
    /// N, K and the deck group order data.
    Kernel,
    /// The deck group of the lifted cover with its exact sequence.
    Gtilde,
    /// A decomposition D = C·M with columns in N.
    Decompose,
    /// The extension class in H² ⊗ K.
    Class,
    /// The class Σ c1(D_j) ⊗ g̃_j and its consistency with the extension class.
    Icf,
    /// The extension group for cyclic π₁(X).
    Realize,
    /// Run the bundled scenarios and the congruence oracle suite.
    Selftest,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Kernel => "kernel",
            Command::Gtilde => "gtilde",
            Command::Decompose => "decompose",
            Command::Class => "class",
            Command::Icf => "icf",
            Command::Realize => "realize",
            Command::Selftest => "selftest",
        }
    }
}

fn topology_error(e: TopologyError) -> CliError {
    match e {
        TopologyError::InvalidBuildingData(r) => CliError::Semantic(r.to_string()),
        TopologyError::RhoDimension { .. } => CliError::Schema(format!("rho_image: {e}")),
        other => CliError::Rejected(other.to_string()),
    }
}

fn decomp_error(e: DecompError) -> CliError {
    match e {
        DecompError::InvalidInput(r) => CliError::Semantic(r.to_string()),
        other => CliError::Rejected(other.to_string()),
    }
}

fn ext_error(e: ExtClassError) -> CliError {
    CliError::Rejected(e.to_string())
}

fn deck_group(sc: &Scenario) -> Result<DeckGroupResult, CliError> {
    compute_g_tilde(&sc.building, &sc.rho).map_err(topology_error)
}

/// Decomposes over prime-power character generators, refining first.
fn decomposition(sc: &Scenario) -> Result<Decomposition, CliError> {
    let (bd, pic) = refine_to_prime_powers(&sc.building, &sc.picard)
        .map_err(|e| CliError::Semantic(e.to_string()))?;
    decompose_divisors(&bd, &pic).map_err(decomp_error)
}

fn xi(sc: &Scenario, dg: &DeckGroupResult) -> Result<(Decomposition, ExtensionClass), CliError> {
    let dec = decomposition(sc)?;
    let xi = compute_xi(&dg.kernel, &dec, &sc.cohomology).map_err(ext_error)?;
    Ok((dec, xi))
}

fn kappa(sc: &Scenario, xi: &ExtensionClass) -> Result<Option<GroupElement>, CliError> {
    match &sc.cohomology.restriction {
        None => Ok(None),
        Some(_) => restrict_class(xi, &sc.cohomology).map(Some).map_err(ext_error),
    }
}

fn report(cmd: Command, text: String, mut json: serde_json::Value) -> Report {
    let obj = json.as_object_mut().expect("payload is an object");
    obj.insert("format_version".into(), json!(FORMAT_VERSION));
    obj.insert("command".into(), json!(cmd.name()));
    Report { text, json }
}

pub fn run_command(cmd: Command, sc: &Scenario) -> Result<Report, CliError> {
    match cmd {
        Command::Validate => validate(sc),
        Command::Kernel => kernel(sc),
        Command::Gtilde => gtilde(sc),
        Command::Decompose => decompose(sc),
        Command::Class => class(sc),
        Command::Icf => icf(sc),
        Command::Realize => realize(sc),
        Command::Selftest => Ok(selftest::run()),
    }
}

fn validate(sc: &Scenario) -> Result<Report, CliError> {
    let bd = &sc.building;
    let comps = bd.component_matrix();
    let mut text = format!("G = {}\nk = {}\n", bd.group, bd.num_branches());
    for (i, c) in bd.chi_gens.iter().enumerate() {
        text.push_str(&format!(
            "chi_{}: order {}, components {}\n",
            i + 1,
            c.order,
            fmt_vec(comps.row(i))
        ));
    }
    text.push_str("building data valid; characteristic relations hold\n");
    Ok(report(
        Command::Validate,
        text,
        json!({
            "valid": true,
            "G": output::group(&bd.group),
            "k": bd.num_branches(),
            "inertia_orders": output::ints(&bd.inertia_orders()),
            "character_orders": output::ints(&bd.character_orders()),
            "components": output::rows(&comps),
            "A": output::group(&sc.picard.group),
            "H2": output::group(&sc.cohomology.h2),
        }),
    ))
}

fn kernel(sc: &Scenario) -> Result<Report, CliError> {
    let dg = deck_group(sc)?;
    let kr = &dg.kernel;
    let text = format!(
        "N = {} generated by {}\nK = {}\nGtilde = {}\n",
        kr.n_group(),
        kr.n_generators()
            .iter()
            .map(|v| fmt_vec(v))
            .collect::<Vec<_>>()
            .join(", "),
        kr.k,
        dg.gtilde
    );
    Ok(report(
        Command::Kernel,
        text,
        json!({
            "N": output::group(kr.n_group()),
            "N_generators": output::vectors(kr.n_generators()),
            "K": output::group(&kr.k),
            "Gtilde": output::group(&dg.gtilde),
        }),
    ))
}

fn gtilde(sc: &Scenario) -> Result<Report, CliError> {
    let dg = deck_group(sc)?;
    let split = sequence_splits(&dg.inc_k, &dg.proj_g).map_err(|e| CliError::Rejected(e.to_string()))?;
    let mut text = format!(
        "0 -> K = {} -> Gtilde = {} -> G = {} -> 0 ({})\n",
        dg.kernel.k,
        dg.gtilde,
        sc.building.group,
        if split.splits { "split" } else { "non-split" }
    );
    for (j, g) in dg.gtilde_gens.iter().enumerate() {
        text.push_str(&format!("gtilde_{} = {}\n", j + 1, g));
    }
    Ok(report(
        Command::Gtilde,
        text,
        json!({
            "K": output::group(&dg.kernel.k),
            "Gtilde": output::group(&dg.gtilde),
            "G": output::group(&sc.building.group),
            "gtilde_gens": output::elements(&dg.gtilde_gens),
            "inc_K": output::rows(dg.inc_k.matrix()),
            "proj_G": output::rows(dg.proj_g.matrix()),
            "splits": split.splits,
        }),
    ))
}

fn decompose(sc: &Scenario) -> Result<Report, CliError> {
    let dec = decomposition(sc)?;
    let mut text = format!("A = {}\n", sc.picard.group);
    for (l, (m, o)) in dec.m.iter().zip(&dec.orders).enumerate() {
        let ord = if o == &0.into() { "infinite".to_string() } else { o.to_string() };
        text.push_str(&format!("M_{} = {} (order {}), column {}\n", l + 1, m, ord, fmt_vec(&dec.c.col(l))));
    }
    Ok(report(
        Command::Decompose,
        text,
        json!({
            "A": output::group(&sc.picard.group),
            "M": output::elements(&dec.m),
            "orders": output::ints(&dec.orders),
            "C": output::rows(&dec.c),
        }),
    ))
}

fn class(sc: &Scenario) -> Result<Report, CliError> {
    let dg = deck_group(sc)?;
    let (_, xi) = xi(sc, &dg)?;
    let mut text = format!(
        "xi = {} in H2 (x) K = {}{}\n",
        xi.coords,
        xi.ambient(),
        if xi.is_zero() { " (zero)" } else { "" }
    );
    let mut payload = json!({
        "K": output::group(&dg.kernel.k),
        "xi": output::class(&xi),
    });
    let obj = payload.as_object_mut().expect("object");
    if let Some(k) = kappa(sc, &xi)? {
        text.push_str(&format!("restricted class kappa = {k}\n"));
        obj.insert("kappa".into(), output::element(&k));
    }
    if let Some(n) = &sc.pi1_cyclic {
        let c = corollary_conditions(&FgAbGroup::cyclic(n), &dg).map_err(ext_error)?;
        text.push_str(&format!(
            "pi1 = Z/{n}: class determined uniquely: {}\n",
            if c.i_injective_guaranteed { "yes" } else { "not guaranteed" }
        ));
        obj.insert(
            "corollary".into(),
            json!({
                "hom_surjective": c.hom_surjective,
                "splits": c.splits,
                "hom_to_G_trivial": c.hom_to_g_trivial,
                "i_injective_guaranteed": c.i_injective_guaranteed,
            }),
        );
    }
    Ok(report(Command::Class, text, payload))
}

fn icf(sc: &Scenario) -> Result<Report, CliError> {
    let dg = deck_group(sc)?;
    let (_, xi) = xi(sc, &dg)?;
    let icf = compute_icf(&sc.building, &sc.picard, &dg, &sc.cohomology).map_err(ext_error)?;
    let consistent = check_xi_icf_consistency(&xi, &icf, &dg.inc_k).map_err(ext_error)?;
    let div = check_divisibility_vanishing(&sc.building, &sc.picard, &sc.cohomology, &dg).map_err(ext_error)?;
    if !consistent {
        return Err(CliError::Rejected(
            "pushing the extension class into H2 (x) Gtilde does not give sum c1(D_j) (x) gtilde_j".into(),
        ));
    }
    let text = format!(
        "icf = {} in H2 (x) Gtilde = {}{}\nconsistent with the extension class: yes\nbranch classes divisible by m_j: {}\n",
        icf.coords,
        icf.ambient(),
        if icf.is_zero() { " (zero)" } else { "" },
        if div.hypothesis_holds { "yes" } else { "no" }
    );
    Ok(report(
        Command::Icf,
        text,
        json!({
            "icf": output::class(&icf),
            "consistent": consistent,
            "divisibility": {
                "divisible": div.divisible,
                "hypothesis_holds": div.hypothesis_holds,
                "icf_is_zero": div.icf_is_zero,
            },
        }),
    ))
}

fn realize(sc: &Scenario) -> Result<Report, CliError> {
    let n = sc
        .pi1_cyclic
        .as_ref()
        .ok_or_else(|| CliError::Semantic("realize needs \"pi1\": {\"cyclic\": n}".into()))?;
    if sc.cohomology.restriction.is_none() {
        return Err(CliError::Semantic("realize needs a \"restriction\" functional".into()));
    }
    let dg = deck_group(sc)?;
    let (_, xi) = xi(sc, &dg)?;
    let k = kappa(sc, &xi)?.expect("restriction present");
    let e = realize_cyclic_extension(n, &dg.kernel.k, &k).map_err(ext_error)?;
    let split = sequence_splits(&e.inclusion, &e.projection).map_err(|e| CliError::Rejected(e.to_string()))?;
    let text = format!(
        "0 -> K = {} -> pi1(Y) = {} -> Z/{} -> 0 (kappa = {}, {})\n",
        dg.kernel.k,
        e.group,
        n,
        k,
        if split.splits { "split" } else { "non-split" }
    );
    Ok(report(
        Command::Realize,
        text,
        json!({
            "pi1": {"cyclic": output::int(n)},
            "K": output::group(&dg.kernel.k),
            "kappa": output::element(&k),
            "E": output::group(&e.group),
            "splits": split.splits,
        }),
    ))
}
