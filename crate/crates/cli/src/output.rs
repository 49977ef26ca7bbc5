//! JSON encodings of groups, elements and matrices.

use cover_core::extclass::ExtensionClass;
use cover_core::{BigInt, FgAbGroup, GroupElement, IntMatrix};
use serde_json::{json, Map, Value};

/// Integers that fit in `i64` are written as JSON numbers, larger ones as
/// decimal strings.
pub fn int(x: &BigInt) -> Value {
    match i64::try_from(x) {
        Ok(v) => json!(v),
        Err(_) => json!(x.to_string()),
    }
}

pub fn ints(xs: &[BigInt]) -> Value {
    Value::Array(xs.iter().map(int).collect())
}

pub fn group(g: &FgAbGroup) -> Value {
    let mut m = Map::new();
    m.insert("invariants".into(), ints(g.invariants()));
    if g.free_rank() > 0 {
        m.insert("free_rank".into(), json!(g.free_rank()));
    }
    Value::Object(m)
}

pub fn element(x: &GroupElement) -> Value {
    ints(x.coords())
}

pub fn elements(xs: &[GroupElement]) -> Value {
    Value::Array(xs.iter().map(element).collect())
}

pub fn rows(m: &IntMatrix) -> Value {
    Value::Array((0..m.num_rows()).map(|i| ints(m.row(i))).collect())
}

pub fn vectors(vs: &[Vec<BigInt>]) -> Value {
    Value::Array(vs.iter().map(|v| ints(v)).collect())
}

pub fn class(c: &ExtensionClass) -> Value {
    json!({
        "ambient": group(c.ambient()),
        "coords": element(&c.coords),
        "zero": c.is_zero(),
    })
}

pub fn fmt_vec(xs: &[BigInt]) -> String {
    let parts: Vec<String> = xs.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}
