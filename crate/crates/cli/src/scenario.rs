//! Scenario files: JSON documents holding the building data, the Picard and
//! cohomology models and the topological inputs of one cover.
//!
//! Every group is given by a presentation, either as a list of cyclic orders
//! (`{"invariants": [...], "free_rank": r}`) or by generators and relations
//! (`{"generators": n, "relations": [[...], ...]}`). Element coordinates in
//! the file always refer to the generators of that presentation; they are
//! converted to canonical coordinates on load.

use cover_core::abgrp::{canonicalize, Canonical};
use cover_core::cover::{
    check_characteristic_relations, validate_building_data, Branch, BuildingData, CoverError,
    PicardModel,
};
use cover_core::extclass::{CohomologyModel, Restriction};
use cover_core::topology::RhoImage;
use cover_core::{BigInt, FgAbGroup, GroupElement, Homomorphism, IntMatrix};
use num_traits::Zero;
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpec {
    pub invariants: Option<Vec<i64>>,
    pub free_rank: Option<usize>,
    pub generators: Option<usize>,
    pub relations: Option<Vec<Vec<i64>>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBranch {
    m: i64,
    g: Vec<i64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCharacter {
    a: Vec<i64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPicard {
    group: GroupSpec,
    #[serde(rename = "D")]
    d: Vec<Vec<i64>>,
    #[serde(rename = "L")]
    l: Vec<Vec<i64>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawH2 {
    group: GroupSpec,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum RawRho {
    Generators(Vec<Vec<i64>>),
    Divisible { divisible: Vec<i64> },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPi1 {
    cyclic: i64,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum RawImage {
    Scalar(i64),
    Row(Vec<i64>),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    #[serde(default)]
    #[allow(dead_code)]
    description: Option<String>,
    group: GroupSpec,
    branch: Vec<RawBranch>,
    char_generators: Vec<RawCharacter>,
    picard: RawPicard,
    h2: RawH2,
    c1: Vec<Vec<i64>>,
    #[serde(default)]
    rho_image: Option<RawRho>,
    #[serde(default)]
    pi1: Option<RawPi1>,
    #[serde(default)]
    restriction: Option<Vec<RawImage>>,
}

/// A group presentation together with its canonical form.
#[derive(Clone, Debug)]
pub struct PresentedGroup {
    pub canonical: Canonical,
    pub relations: IntMatrix,
}

impl PresentedGroup {
    pub fn group(&self) -> &FgAbGroup {
        &self.canonical.group
    }

    pub fn num_generators(&self) -> usize {
        self.relations.num_cols()
    }

    /// Converts presentation coordinates to a canonical element.
    pub fn element(&self, path: &str, coords: &[i64]) -> Result<GroupElement, CliError> {
        let n = self.num_generators();
        if coords.len() != n {
            return Err(CliError::Schema(format!(
                "{path}: expected {n} coordinates, found {}",
                coords.len()
            )));
        }
        Ok(self.canonical.map(&big(coords)))
    }

    /// `Σ_i lift_u[i]·images[i]` for each canonical generator `u`.
    fn pull_images(&self, images: &[Vec<BigInt>], width: usize) -> Vec<Vec<BigInt>> {
        (0..self.group().num_generators())
            .map(|u| {
                let lift = self.canonical.lift(u);
                let mut acc = vec![BigInt::zero(); width];
                for (c, img) in lift.iter().zip(images) {
                    for (a, x) in acc.iter_mut().zip(img) {
                        *a += c * x;
                    }
                }
                acc
            })
            .collect()
    }
}

fn big(xs: &[i64]) -> Vec<BigInt> {
    xs.iter().map(|&x| BigInt::from(x)).collect()
}

/// Builds a group from its specification; `path` names the JSON field.
pub fn parse_group(spec: &GroupSpec, path: &str) -> Result<PresentedGroup, CliError> {
    let (n, rows) = match spec {
        GroupSpec {
            invariants: Some(inv),
            generators: None,
            relations: None,
            free_rank,
        } => {
            let r = free_rank.unwrap_or(0);
            let n = inv.len() + r;
            let mut rows = Vec::new();
            for (i, &d) in inv.iter().enumerate() {
                if d < 1 {
                    return Err(CliError::Schema(format!(
                        "{path}.invariants[{i}]: cyclic orders must be positive (use free_rank for Z)"
                    )));
                }
                let mut row = vec![BigInt::zero(); n];
                row[i] = BigInt::from(d);
                rows.push(row);
            }
            (n, rows)
        }
        GroupSpec {
            generators: Some(n),
            relations,
            invariants: None,
            free_rank: None,
        } => {
            let mut rows = Vec::new();
            for (i, r) in relations.iter().flatten().enumerate() {
                if r.len() != *n {
                    return Err(CliError::Schema(format!(
                        "{path}.relations[{i}]: expected {n} entries, found {}",
                        r.len()
                    )));
                }
                rows.push(big(r));
            }
            (*n, rows)
        }
        _ => {
            return Err(CliError::Schema(format!(
                "{path}: give either \"invariants\" (with optional \"free_rank\") or \"generators\" with \"relations\""
            )))
        }
    };
    let relations = IntMatrix::from_rows(rows, n);
    Ok(PresentedGroup {
        canonical: canonicalize(&relations, n),
        relations,
    })
}

/// A fully validated input.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub building: BuildingData,
    pub picard: PicardModel,
    pub rho: RhoImage,
    pub cohomology: CohomologyModel,
    pub pi1_cyclic: Option<BigInt>,
}

fn schema_error(e: serde_path_to_error::Error<serde_json::Error>) -> CliError {
    let path = e.path().to_string();
    let inner = e.into_inner();
    if path.is_empty() || path == "." {
        CliError::Schema(inner.to_string())
    } else {
        CliError::Schema(format!("{path}: {inner}"))
    }
}

/// Parses and validates a scenario document.
pub fn parse_input(text: &str) -> Result<Scenario, CliError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let raw: RawScenario = serde_path_to_error::deserialize(de).map_err(schema_error)?;

    let g = parse_group(&raw.group, "group")?;
    let group = g.group().clone();
    if !group.is_finite() {
        return Err(CliError::Semantic(format!("group: G = {group} must be finite")));
    }
    let mut branches = Vec::with_capacity(raw.branch.len());
    for (j, b) in raw.branch.iter().enumerate() {
        if b.m < 1 {
            return Err(CliError::Schema(format!("branch[{j}].m: must be positive")));
        }
        branches.push(Branch {
            order: BigInt::from(b.m),
            generator: g.element(&format!("branch[{j}].g"), &b.g)?,
        });
    }
    let k = branches.len();

    // branch checks only; the dual basis always passes the character checks
    let probe = BuildingData::with_dual_basis(group.clone(), branches.clone());
    let report = validate_building_data(&probe);
    if !report.is_valid() {
        return Err(CliError::Semantic(report.to_string()));
    }

    let mut comps = Vec::with_capacity(raw.char_generators.len());
    for (i, c) in raw.char_generators.iter().enumerate() {
        if c.a.len() != k {
            return Err(CliError::Schema(format!(
                "char_generators[{i}].a: expected {k} components, found {}",
                c.a.len()
            )));
        }
        comps.push(big(&c.a));
    }
    let building = BuildingData::from_components(group, branches, &comps).map_err(|e| match e {
        CoverError::NotACharacter(m) => CliError::Semantic(format!("char_generators: {m}")),
        other => CliError::Semantic(other.to_string()),
    })?;
    let report = validate_building_data(&building);
    if !report.is_valid() {
        return Err(CliError::Semantic(report.to_string()));
    }

    let a = parse_group(&raw.picard.group, "picard.group")?;
    if raw.picard.d.len() != k {
        return Err(CliError::Schema(format!("picard.D: expected {k} classes, found {}", raw.picard.d.len())));
    }
    let n = building.chi_gens.len();
    if raw.picard.l.len() != n {
        return Err(CliError::Schema(format!("picard.L: expected {n} classes, found {}", raw.picard.l.len())));
    }
    let d = raw
        .picard
        .d
        .iter()
        .enumerate()
        .map(|(j, x)| a.element(&format!("picard.D[{j}]"), x))
        .collect::<Result<Vec<_>, _>>()?;
    let l = raw
        .picard
        .l
        .iter()
        .enumerate()
        .map(|(i, x)| a.element(&format!("picard.L[{i}]"), x))
        .collect::<Result<Vec<_>, _>>()?;
    let picard = PicardModel {
        group: a.group().clone(),
        d,
        l,
    };
    let mut report = check_characteristic_relations(&building, &picard);
    report.extend(picard.validate());
    if !report.is_valid() {
        return Err(CliError::Semantic(report.to_string()));
    }

    let h2 = parse_group(&raw.h2.group, "h2.group")?;
    let c1 = parse_c1(&raw.c1, &a, &h2)?;

    let rho = match raw.rho_image {
        None => RhoImage::empty(),
        Some(RawRho::Generators(gens)) => {
            for (i, t) in gens.iter().enumerate() {
                if t.len() != k {
                    return Err(CliError::Schema(format!(
                        "rho_image[{i}]: expected {k} entries, found {}",
                        t.len()
                    )));
                }
            }
            RhoImage::new(gens.iter().map(|t| big(t)).collect())
        }
        Some(RawRho::Divisible { divisible }) => {
            if divisible.len() != k {
                return Err(CliError::Schema(format!(
                    "rho_image.divisible: expected {k} entries, found {}",
                    divisible.len()
                )));
            }
            RhoImage::from_divisibility(&big(&divisible))
        }
    };

    let pi1_cyclic = match raw.pi1 {
        Some(RawPi1 { cyclic }) if cyclic < 1 => {
            return Err(CliError::Schema("pi1.cyclic: must be positive".into()))
        }
        Some(RawPi1 { cyclic }) => Some(BigInt::from(cyclic)),
        None => None,
    };
    let restriction = match (&raw.restriction, &pi1_cyclic) {
        (None, _) => None,
        (Some(_), None) => {
            return Err(CliError::Schema("restriction: requires \"pi1\": {\"cyclic\": n}".into()))
        }
        (Some(imgs), Some(n)) => Some(parse_restriction(imgs, &h2, n)?),
    };
    let cohomology = CohomologyModel::new(c1, restriction).map_err(|e| CliError::Semantic(e.to_string()))?;

    Ok(Scenario {
        building,
        picard,
        rho,
        cohomology,
        pi1_cyclic,
    })
}

fn parse_c1(raw: &[Vec<i64>], a: &PresentedGroup, h2: &PresentedGroup) -> Result<Homomorphism, CliError> {
    if raw.len() != a.num_generators() {
        return Err(CliError::Schema(format!(
            "c1: expected one image per generator of picard.group ({}), found {}",
            a.num_generators(),
            raw.len()
        )));
    }
    let w = h2.num_generators();
    let mut images = Vec::with_capacity(raw.len());
    for (i, img) in raw.iter().enumerate() {
        if img.len() != w {
            return Err(CliError::Schema(format!(
                "c1[{i}]: expected {w} coordinates, found {}",
                img.len()
            )));
        }
        images.push(big(img));
    }
    for r in 0..a.relations.num_rows() {
        let mut acc = vec![BigInt::zero(); w];
        for (c, img) in a.relations.row(r).iter().zip(&images) {
            for (x, y) in acc.iter_mut().zip(img) {
                *x += c * y;
            }
        }
        if !h2.canonical.map(&acc).is_zero() {
            return Err(CliError::Semantic(format!(
                "c1: relation {} of picard.group does not map to zero in h2",
                r + 1
            )));
        }
    }
    let cols: Vec<GroupElement> = a
        .pull_images(&images, w)
        .iter()
        .map(|v| h2.canonical.map(v))
        .collect();
    Homomorphism::from_images(a.group().clone(), h2.group().clone(), &cols)
        .map_err(|e| CliError::Semantic(format!("c1: {e}")))
}

fn parse_restriction(raw: &[RawImage], h2: &PresentedGroup, n: &BigInt) -> Result<Restriction, CliError> {
    if raw.len() != h2.num_generators() {
        return Err(CliError::Schema(format!(
            "restriction: expected one image per generator of h2.group ({}), found {}",
            h2.num_generators(),
            raw.len()
        )));
    }
    let mut images = Vec::with_capacity(raw.len());
    for (i, x) in raw.iter().enumerate() {
        let v = match x {
            RawImage::Scalar(v) => *v,
            RawImage::Row(r) if r.len() == 1 => r[0],
            RawImage::Row(r) => {
                return Err(CliError::Schema(format!(
                    "restriction[{i}]: expected 1 entry, found {}",
                    r.len()
                )))
            }
        };
        images.push(vec![BigInt::from(v)]);
    }
    for r in 0..h2.relations.num_rows() {
        let s: BigInt = h2
            .relations
            .row(r)
            .iter()
            .zip(&images)
            .map(|(c, img)| c * &img[0])
            .sum();
        if !(s % n).is_zero() {
            return Err(CliError::Semantic(format!(
                "restriction: relation {} of h2.group does not map to zero in Z/{n}",
                r + 1
            )));
        }
    }
    let pulled: Vec<BigInt> = h2
        .pull_images(&images, 1)
        .into_iter()
        .map(|v| v[0].clone())
        .collect();
    Restriction::new(h2.group(), n, &pulled).map_err(|e| CliError::Semantic(format!("restriction: {e}")))
}
