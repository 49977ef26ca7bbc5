//! Bundled scenarios with their expected results, plus a randomized
//! congruence suite checked against exhaustive search.

use cover_core::arith::pow;
use cover_core::congruence::{solve_lifting, LemmaSystem};
use cover_core::{BigInt, IntMatrix};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::{parse_input, run_command, Command, Report, FORMAT_VERSION};

pub const ORDER32_UNTWISTED: &str = include_str!("../scenarios/order32_untwisted.json");
pub const ORDER32_TWISTED: &str = include_str!("../scenarios/order32_twisted.json");
pub const BIDOUBLE: &str = include_str!("../scenarios/bidouble.json");

/// `(scenario name, source)` for every bundled file.
pub fn bundled() -> [(&'static str, &'static str); 3] {
    [
        ("order32_untwisted", ORDER32_UNTWISTED),
        ("order32_twisted", ORDER32_TWISTED),
        ("bidouble", BIDOUBLE),
    ]
}

struct Case {
    name: String,
    ok: bool,
    detail: String,
}

/// Runs `cmd` on `src` and compares `expected` against the payload at each
/// JSON pointer.
fn expect(name: &str, src: &str, cmd: Command, expected: &[(&str, Value)]) -> Case {
    let name = format!("{name}/{}", cmd.name());
    let payload = parse_input(src).and_then(|sc| run_command(cmd, &sc));
    match payload {
        Err(e) => Case {
            name,
            ok: false,
            detail: e.to_string(),
        },
        Ok(r) => {
            let bad: Vec<String> = expected
                .iter()
                .filter(|(ptr, v)| r.json.pointer(ptr) != Some(v))
                .map(|(ptr, v)| format!("{ptr}: expected {v}, got {:?}", r.json.pointer(ptr)))
                .collect();
            Case {
                name,
                ok: bad.is_empty(),
                detail: bad.join("; "),
            }
        }
    }
}

fn scenario_cases() -> Vec<Case> {
    use Command::*;
    let z2 = json!({"invariants": [2]});
    vec![
        expect("order32_untwisted", ORDER32_UNTWISTED, Validate, &[("/G", json!({"invariants": [2, 4, 4]}))]),
        expect(
            "order32_untwisted",
            ORDER32_UNTWISTED,
            Kernel,
            &[
                ("/N", z2.clone()),
                ("/K", z2.clone()),
                ("/Gtilde", json!({"invariants": [4, 4, 4]})),
            ],
        ),
        expect("order32_untwisted", ORDER32_UNTWISTED, Class, &[("/xi/zero", json!(true))]),
        expect(
            "order32_untwisted",
            ORDER32_UNTWISTED,
            Icf,
            &[("/consistent", json!(true)), ("/icf/zero", json!(true))],
        ),
        expect("order32_untwisted", ORDER32_UNTWISTED, Realize, &[("/E", json!({"invariants": [2, 2]}))]),
        expect("order32_twisted", ORDER32_TWISTED, Class, &[("/xi/zero", json!(false)), ("/kappa", json!([1]))]),
        expect(
            "order32_twisted",
            ORDER32_TWISTED,
            Icf,
            &[("/consistent", json!(true)), ("/icf/zero", json!(true))],
        ),
        expect("order32_twisted", ORDER32_TWISTED, Realize, &[("/E", json!({"invariants": [4]}))]),
        expect(
            "bidouble",
            BIDOUBLE,
            Kernel,
            &[("/K", z2), ("/Gtilde", json!({"invariants": [2, 2, 2]}))],
        ),
        expect("bidouble", BIDOUBLE, Decompose, &[("/C", json!([[1], [1], [1]]))]),
        expect(
            "bidouble",
            BIDOUBLE,
            Icf,
            &[
                ("/consistent", json!(true)),
                ("/icf/zero", json!(false)),
                ("/divisibility/hypothesis_holds", json!(false)),
            ],
        ),
    ]
}

/// A random system satisfying the solvability hypotheses, or `None` when the
/// sampled characters are dependent.
pub fn random_lemma_system<R: Rng>(rng: &mut R, max_modulus: u32) -> Option<LemmaSystem> {
    let p: u32 = if rng.gen_bool(0.5) { 2 } else { 3 };
    let p_big = BigInt::from(p);
    let m = rng.gen_range(1..=4usize);
    // h_j = p^e·u with a unit cofactor now and then
    let h: Vec<BigInt> = (0..m)
        .map(|_| {
            let e = rng.gen_range(1..=2u32);
            let u = if rng.gen_bool(0.3) { 5 } else { 1 };
            pow(&p_big, e) * BigInt::from(u)
        })
        .collect();
    let t = rng.gen_range(1..=m);
    let mut a = IntMatrix::zeros(t, m);
    let mut d = Vec::with_capacity(t);
    for i in 0..t {
        // a random p-torsion element: multiples of the cofactor h_j/p^{v_p(h_j)}
        let mut order = BigInt::one();
        for j in 0..m {
            let hj = &h[j];
            let cof = if (hj % BigInt::from(5)).is_zero() { BigInt::from(5) } else { BigInt::one() };
            let pe = hj / &cof;
            let x = BigInt::from(rng.gen_range(0..=8u32)) % &pe;
            a[(i, j)] = &x * &cof;
            if !x.is_zero() {
                let ord = &pe / num_integer::Integer::gcd(&x, &pe);
                order = num_integer::Integer::lcm(&order, &ord);
            }
        }
        if order.is_one() {
            return None;
        }
        d.push(order);
    }
    let mut gamma = 1;
    while gamma < 4 && rng.gen_bool(0.5) && pow(&p_big, gamma + 1) <= BigInt::from(max_modulus) {
        gamma += 1;
    }
    let q = pow(&p_big, gamma);
    let x = (0..t)
        .map(|_| BigInt::from(rng.gen_range(0..1000u32)) % &q)
        .collect();
    let sys = LemmaSystem {
        h,
        a,
        d,
        p: p_big,
        gamma,
        x,
    };
    sys.validate().ok().map(|_| sys)
}

/// Whether some `s ∈ [0, p^γ)^m` satisfies the system.
pub fn brute_force_solvable(sys: &LemmaSystem) -> bool {
    let c = sys.validate().expect("valid system");
    let q = sys.modulus();
    let qi = i64::try_from(&q).expect("small modulus");
    let m = sys.h.len();
    let mut s = vec![0i64; m];
    loop {
        let sb: Vec<BigInt> = s.iter().map(|&v| BigInt::from(v)).collect();
        if c.mul_vec(&sb)
            .iter()
            .zip(&sys.x)
            .all(|(l, r)| ((l - r) % &q).is_zero())
        {
            return true;
        }
        let mut i = 0;
        loop {
            if i == m {
                return false;
            }
            s[i] += 1;
            if s[i] < qi {
                break;
            }
            s[i] = 0;
            i += 1;
        }
    }
}

fn congruence_cases() -> Vec<Case> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut cases = Vec::new();
    let mut failures = Vec::new();
    let mut n = 0;
    while n < 200 {
        let Some(sys) = random_lemma_system(&mut rng, 27) else {
            continue;
        };
        n += 1;
        match solve_lifting(&sys) {
            Ok(s) if sys.is_satisfied_by(&s) && brute_force_solvable(&sys) => {}
            Ok(_) => failures.push(format!("system {n}: solution check failed")),
            Err(e) => failures.push(format!("system {n}: {e}")),
        }
    }
    cases.push(Case {
        name: format!("congruence/{n} random systems"),
        ok: failures.is_empty(),
        detail: failures.join("; "),
    });
    cases
}

pub fn run() -> Report {
    let mut cases = scenario_cases();
    cases.extend(congruence_cases());
    let passed = cases.iter().filter(|c| c.ok).count();
    let failed = cases.len() - passed;
    let mut text = String::new();
    for c in &cases {
        text.push_str(&format!("{} {}", if c.ok { "PASS" } else { "FAIL" }, c.name));
        if !c.ok {
            text.push_str(&format!(": {}", c.detail));
        }
        text.push('\n');
    }
    text.push_str(&format!("{passed} passed, {failed} failed\n"));
    let json = json!({
        "format_version": FORMAT_VERSION,
        "command": "selftest",
        "passed": passed,
        "failed": failed,
        "cases": cases
            .iter()
            .map(|c| json!({"name": c.name, "ok": c.ok, "detail": c.detail}))
            .collect::<Vec<_>>(),
    });
    Report { text, json }
}
