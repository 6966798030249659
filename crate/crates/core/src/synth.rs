//! Deterministic synthetic designs for benchmarks and scale checks.

use crate::model::{AttributeDef, ClassDef, ClassKind, ClassModel, MethodDef, Visibility};

/// splitmix64; enough to vary shapes without pulling in an RNG crate.
struct Mix(u64);

impl Mix {
    fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    fn below(&mut self, n: u64) -> u64 {
        self.next() % n.max(1)
    }
}

const VISIBILITY: [Visibility; 3] = [Visibility::Public, Visibility::Protected, Visibility::Private];
const PRIMITIVES: [&str; 4] = ["int", "bool", "str", "float"];

fn class_name(i: usize) -> String {
    format!("C{i:05}")
}

/// A valid model of `classes` classes. Parents always precede children, so
/// the inheritance graph is acyclic; roughly one class in six starts a new
/// hierarchy. Method names come from a small pool so overrides are common.
pub fn generated_model(classes: usize, seed: u64) -> ClassModel {
    let mut rng = Mix(seed);
    let mut defs = Vec::with_capacity(classes);
    for i in 0..classes {
        let kind = if rng.below(10) == 0 {
            ClassKind::Interface
        } else {
            ClassKind::Class
        };
        let mut def = ClassDef::new(class_name(i), kind);
        def.documented = rng.below(3) == 0;
        if i > 0 && rng.below(6) != 0 {
            let window = i.min(8) as u64;
            def.parents.push(class_name(i - 1 - rng.below(window) as usize));
            if i > 2 && rng.below(8) == 0 {
                let other = class_name(rng.below(i as u64) as usize);
                if !def.parents.contains(&other) {
                    def.parents.push(other);
                }
            }
        }
        let pick_type = |rng: &mut Mix| -> String {
            if classes > 0 && rng.below(3) == 0 {
                class_name(rng.below(classes as u64) as usize)
            } else {
                PRIMITIVES[rng.below(4) as usize].to_string()
            }
        };
        for a in 0..rng.below(5) {
            def.attributes.push(AttributeDef {
                name: format!("f{a}"),
                type_name: pick_type(&mut rng),
                visibility: VISIBILITY[rng.below(3) as usize],
                documented: rng.below(4) == 0,
            });
        }
        for _ in 0..rng.below(6) {
            let params = (0..rng.below(3)).map(|_| pick_type(&mut rng)).collect();
            def.methods.push(MethodDef {
                name: format!("m{}", rng.below(6)),
                parameter_types: params,
                return_type: pick_type(&mut rng),
                visibility: VISIBILITY[rng.below(3) as usize],
                documented: rng.below(4) == 0,
            });
        }
        let mut seen = std::collections::HashSet::new();
        def.methods.retain(|m| seen.insert((m.name.clone(), m.parameter_types.clone())));
        defs.push(def);
    }
    ClassModel::from_classes(defs)
}
