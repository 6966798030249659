//! Test-only reference implementations.
//!
//! Everything here works straight from declaration lists with small-integer
//! rationals and exhaustive enumeration. It deliberately shares no code with
//! the library beyond the plain data types.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use num_rational::Ratio;
use oodq::{AttributeDef, ClassDef, ClassKind, MethodDef, Rational, Visibility};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Q = Ratio<i64>;

pub const IDS: [&str; 14] = [
    "NOC", "NOH", "NOA", "MDIT", "NAR", "NAH", "CAM", "NOP", "DAR", "FA", "DCC", "NOM", "CIS",
    "EOD",
];

pub fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn fixture(name: &str) -> PathBuf {
    fixtures_dir().join(name)
}

pub fn to_big(q: Q) -> Rational {
    Rational::new((*q.numer()).into(), (*q.denom()).into())
}

fn find<'a>(classes: &'a [ClassDef], name: &str) -> Option<&'a ClassDef> {
    classes.iter().find(|c| c.name == name)
}

fn declared(classes: &[ClassDef], ty: &str) -> bool {
    find(classes, ty).is_some()
}

/// Every upward path starting at `name`, listed node by node (the class first).
fn paths_up(classes: &[ClassDef], name: &str) -> Vec<Vec<String>> {
    let class = find(classes, name).expect("declared");
    if class.parents.is_empty() {
        return vec![vec![name.to_string()]];
    }
    let mut out = Vec::new();
    for p in &class.parents {
        for mut path in paths_up(classes, p) {
            path.insert(0, name.to_string());
            out.push(path);
        }
    }
    out
}

pub fn ancestors(classes: &[ClassDef], name: &str) -> BTreeSet<String> {
    paths_up(classes, name)
        .into_iter()
        .flat_map(|p| p.into_iter().skip(1))
        .collect()
}

pub fn depth(classes: &[ClassDef], name: &str) -> usize {
    paths_up(classes, name).iter().map(Vec::len).max().unwrap()
}

fn descendants(classes: &[ClassDef], name: &str) -> Vec<String> {
    classes
        .iter()
        .filter(|c| ancestors(classes, &c.name).contains(name))
        .map(|c| c.name.clone())
        .collect()
}

type Sig = (String, Vec<String>);

fn sig(m: &MethodDef) -> Sig {
    (m.name.clone(), m.parameter_types.clone())
}

fn visible_up(m: &MethodDef) -> bool {
    !matches!(m.visibility, Visibility::Private)
}

fn mean(values: Vec<Q>) -> Q {
    if values.is_empty() {
        return Q::from_integer(0);
    }
    let n = values.len() as i64;
    values.into_iter().sum::<Q>() / n
}

fn ratio(num: usize, den: usize) -> Q {
    Q::new(num as i64, den as i64)
}

pub fn oracle_metrics(classes: &[ClassDef]) -> BTreeMap<&'static str, Q> {
    let mut out = BTreeMap::new();
    let int = |n: usize| Q::from_integer(n as i64);

    out.insert("NOC", int(classes.len()));

    let roots_with_children = classes
        .iter()
        .filter(|c| c.parents.is_empty())
        .filter(|c| classes.iter().any(|d| d.parents.contains(&c.name)))
        .count();
    out.insert("NOH", int(roots_with_children));

    let noa = classes
        .iter()
        .map(|c| ancestors(classes, &c.name).len())
        .max()
        .unwrap_or(0);
    out.insert("NOA", int(noa));

    let mdit = classes.iter().map(|c| depth(classes, &c.name)).max().unwrap_or(0);
    out.insert("MDIT", int(mdit));

    let mut nar = 0;
    let mut edges: Vec<(String, String)> = Vec::new();
    for c in classes {
        for a in &c.attributes {
            if declared(classes, &a.type_name) {
                nar += 1;
                edges.push((c.name.clone(), a.type_name.clone()));
            }
        }
    }
    out.insert("NAR", int(nar));

    // Grow each edge's endpoint set until no other edge touches it.
    let mut components: BTreeSet<BTreeSet<String>> = BTreeSet::new();
    for (a, b) in &edges {
        let mut set: BTreeSet<String> = [a.clone(), b.clone()].into();
        loop {
            let before = set.len();
            for (x, y) in &edges {
                if set.contains(x) || set.contains(y) {
                    set.insert(x.clone());
                    set.insert(y.clone());
                }
            }
            if set.len() == before {
                break;
            }
        }
        components.insert(set);
    }
    out.insert("NAH", int(components.len()));

    let cam: Vec<Q> = classes
        .iter()
        .map(|c| {
            let k = c.methods.len();
            let sets: Vec<BTreeSet<&String>> =
                c.methods.iter().map(|m| m.parameter_types.iter().collect()).collect();
            let all: BTreeSet<&String> = sets.iter().flatten().copied().collect();
            if k == 0 || all.is_empty() {
                return Q::from_integer(0);
            }
            ratio(sets.iter().map(BTreeSet::len).sum(), k * all.len())
        })
        .collect();
    out.insert("CAM", mean(cam));

    let mut nop = 0;
    for c in classes {
        let ups = ancestors(classes, &c.name);
        let downs = descendants(classes, &c.name);
        let mut counted: BTreeSet<Sig> = BTreeSet::new();
        for m in c.methods.iter().filter(|m| visible_up(m)) {
            let s = sig(m);
            let declared_above = ups.iter().any(|u| {
                find(classes, u)
                    .unwrap()
                    .methods
                    .iter()
                    .any(|um| visible_up(um) && sig(um) == s)
            });
            let redeclared_below = downs
                .iter()
                .any(|d| find(classes, d).unwrap().methods.iter().any(|dm| sig(dm) == s));
            if !declared_above && redeclared_below && counted.insert(s) {
                nop += 1;
            }
        }
    }
    out.insert("NOP", int(nop));

    let dar: Vec<Q> = classes
        .iter()
        .map(|c| {
            if c.attributes.is_empty() {
                Q::from_integer(1)
            } else {
                let hidden = c
                    .attributes
                    .iter()
                    .filter(|a| a.visibility != Visibility::Public)
                    .count();
                ratio(hidden, c.attributes.len())
            }
        })
        .collect();
    out.insert("DAR", mean(dar));

    let fa: Vec<Q> = classes
        .iter()
        .map(|c| {
            let local: BTreeSet<Sig> = c.methods.iter().map(sig).collect();
            let inherited: BTreeSet<Sig> = ancestors(classes, &c.name)
                .iter()
                .flat_map(|a| find(classes, a).unwrap().methods.iter())
                .filter(|m| visible_up(m))
                .map(sig)
                .filter(|s| !local.contains(s))
                .collect();
            let accessible = inherited.len() + local.len();
            if accessible == 0 {
                Q::from_integer(0)
            } else {
                ratio(inherited.len(), accessible)
            }
        })
        .collect();
    out.insert("FA", mean(fa));

    let dcc: Vec<Q> = classes
        .iter()
        .map(|c| {
            let mut related: BTreeSet<&String> = BTreeSet::new();
            for a in &c.attributes {
                related.insert(&a.type_name);
            }
            for m in &c.methods {
                related.extend(m.parameter_types.iter());
            }
            int(related
                .into_iter()
                .filter(|t| **t != c.name && declared(classes, t))
                .count())
        })
        .collect();
    out.insert("DCC", mean(dcc));

    out.insert("NOM", mean(classes.iter().map(|c| int(c.methods.len())).collect()));
    out.insert(
        "CIS",
        mean(
            classes
                .iter()
                .map(|c| {
                    int(c
                        .methods
                        .iter()
                        .filter(|m| m.visibility == Visibility::Public)
                        .count())
                })
                .collect(),
        ),
    );

    let mut entities = 0;
    let mut documented = 0;
    for c in classes {
        entities += 1 + c.attributes.len() + c.methods.len();
        documented += c.documented as usize
            + c.attributes.iter().filter(|a| a.documented).count()
            + c.methods.iter().filter(|m| m.documented).count();
    }
    out.insert(
        "EOD",
        if entities == 0 {
            Q::from_integer(0)
        } else {
            ratio(documented, entities)
        },
    );
    out
}

/// Wilson bounds found by bisecting the score-test acceptance region
/// `|p̂ - p| <= z * sqrt(p(1-p)/n)` rather than by the closed form.
pub fn wilson_by_bisection(successes: f64, n: usize, z: f64) -> (f64, f64) {
    let n = n as f64;
    let p_hat = successes / n;
    let inside = |p: f64| (p_hat - p).abs() <= z * (p * (1.0 - p) / n).sqrt() + 1e-15;
    let edge = |mut out: f64, mut inn: f64| {
        for _ in 0..200 {
            let mid = (out + inn) / 2.0;
            if inside(mid) {
                inn = mid;
            } else {
                out = mid;
            }
        }
        inn
    };
    let low = if inside(0.0) { 0.0 } else { edge(0.0, p_hat) };
    let high = if inside(1.0) { 1.0 } else { edge(1.0, p_hat) };
    (low * 100.0, high * 100.0)
}

const TYPES: [&str; 1] = ["int"];
const METHOD_NAMES: [&str; 3] = ["f", "g", "h"];
const VISIBILITY: [Visibility; 3] = [Visibility::Public, Visibility::Protected, Visibility::Private];

/// Random valid design: up to 5 classes, up to 3 members each, parents drawn
/// from earlier classes only.
pub fn random_classes(rng: &mut ChaCha8Rng) -> Vec<ClassDef> {
    let n = rng.gen_range(0..=5);
    let names: Vec<String> = (0..n).map(|i| format!("K{i}")).collect();
    let mut type_pool: Vec<String> = TYPES.iter().map(|t| t.to_string()).collect();
    type_pool.extend(names.iter().cloned());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let kind = if rng.gen_bool(0.2) {
            ClassKind::Interface
        } else {
            ClassKind::Class
        };
        let mut c = ClassDef::new(names[i].clone(), kind);
        c.documented = rng.gen_bool(0.3);
        for parent in &names[..i] {
            if rng.gen_bool(0.35) {
                c.parents.push(parent.clone());
            }
        }
        let members = rng.gen_range(0..=3);
        for k in 0..members {
            let pick = |rng: &mut ChaCha8Rng| type_pool[rng.gen_range(0..type_pool.len())].clone();
            if rng.gen_bool(0.4) {
                c.attributes.push(AttributeDef {
                    name: format!("a{k}"),
                    type_name: pick(rng),
                    visibility: VISIBILITY[rng.gen_range(0..3)],
                    documented: rng.gen_bool(0.3),
                });
            } else {
                let params = (0..rng.gen_range(0..=2)).map(|_| pick(rng)).collect();
                let m = MethodDef {
                    name: METHOD_NAMES[rng.gen_range(0..METHOD_NAMES.len())].to_string(),
                    parameter_types: params,
                    return_type: pick(rng),
                    visibility: VISIBILITY[rng.gen_range(0..3)],
                    documented: rng.gen_bool(0.3),
                };
                if !c.methods.iter().any(|o| o.name == m.name && o.parameter_types == m.parameter_types) {
                    c.methods.push(m);
                }
            }
        }
        out.push(c);
    }
    out
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
