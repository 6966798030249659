//! The fourteen design metrics.
//!
//! Every metric is a pure function of a [`ClassModel`]. Class-scoped metrics
//! (CAM, DAR, FA, DCC, NOM, CIS) are averaged over classes at design level,
//! NOA and MDIT take the maximum over classes, and every metric of an empty
//! model is zero. Values are exact rationals.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use num_traits::Zero;

use crate::model::{ClassDef, ClassModel, Signature, Visibility};
use crate::par::Execution;
use crate::ratio::{self, int, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MetricId {
    Noc,
    Noh,
    Noa,
    Mdit,
    Nar,
    Nah,
    Cam,
    Nop,
    Dar,
    Fa,
    Dcc,
    Nom,
    Cis,
    Eod,
}

impl MetricId {
    /// Report order.
    pub const ALL: [MetricId; 14] = [
        MetricId::Noc,
        MetricId::Noh,
        MetricId::Noa,
        MetricId::Mdit,
        MetricId::Nar,
        MetricId::Nah,
        MetricId::Cam,
        MetricId::Nop,
        MetricId::Dar,
        MetricId::Fa,
        MetricId::Dcc,
        MetricId::Nom,
        MetricId::Cis,
        MetricId::Eod,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            MetricId::Noc => "NOC",
            MetricId::Noh => "NOH",
            MetricId::Noa => "NOA",
            MetricId::Mdit => "MDIT",
            MetricId::Nar => "NAR",
            MetricId::Nah => "NAH",
            MetricId::Cam => "CAM",
            MetricId::Nop => "NOP",
            MetricId::Dar => "DAR",
            MetricId::Fa => "FA",
            MetricId::Dcc => "DCC",
            MetricId::Nom => "NOM",
            MetricId::Cis => "CIS",
            MetricId::Eod => "EOD",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            MetricId::Noc => "Number of Classes",
            MetricId::Noh => "Number of Hierarchies",
            MetricId::Noa => "Number of Ancestors",
            MetricId::Mdit => "Maximum Depth of Inheritance",
            MetricId::Nar => "Number of Aggregation Relationships",
            MetricId::Nah => "Number of Aggregation Hierarchies",
            MetricId::Cam => "Cohesion Among Methods of Class",
            MetricId::Nop => "Number of Polymorphic Methods",
            MetricId::Dar => "Data Access Ratio",
            MetricId::Fa => "Functional Abstraction",
            MetricId::Dcc => "Direct Class Coupling",
            MetricId::Nom => "Number of Methods",
            MetricId::Cis => "Class Interface Size",
            MetricId::Eod => "Extent of Documentation",
        }
    }

    /// Position in [`MetricId::ALL`].
    pub fn index(self) -> usize {
        self as usize
    }

    /// Metrics whose values are ratios in `[0, 1]`.
    pub fn is_ratio(self) -> bool {
        matches!(self, MetricId::Cam | MetricId::Dar | MetricId::Fa | MetricId::Eod)
    }
}

impl fmt::Display for MetricId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown metric `{0}`")]
pub struct UnknownMetric(pub String);

impl FromStr for MetricId {
    type Err = UnknownMetric;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        MetricId::ALL
            .into_iter()
            .find(|m| m.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| UnknownMetric(s.to_string()))
    }
}

/// Per-class values behind the design-level metrics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassMetrics {
    pub name: String,
    pub ancestors: usize,
    pub depth: usize,
    pub aggregations: usize,
    /// Polymorphic methods whose topmost declaration is in this class.
    pub polymorphic: usize,
    pub cam: Rational,
    pub dar: Rational,
    pub fa: Rational,
    pub dcc: usize,
    pub nom: usize,
    pub cis: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetricVector {
    values: Vec<Rational>,
    pub per_class: Vec<ClassMetrics>,
}

impl MetricVector {
    pub fn get(&self, id: MetricId) -> &Rational {
        &self.values[id.index()]
    }

    pub fn iter(&self) -> impl Iterator<Item = (MetricId, &Rational)> {
        MetricId::ALL.into_iter().zip(self.values.iter())
    }
}

impl std::ops::Index<MetricId> for MetricVector {
    type Output = Rational;

    fn index(&self, id: MetricId) -> &Rational {
        self.get(id)
    }
}

fn signatures(class: &ClassDef) -> HashSet<Signature<'_>> {
    class.methods.iter().map(|m| m.signature()).collect()
}

/// Signatures a class exposes to its descendants.
fn inheritable(class: &ClassDef) -> HashSet<Signature<'_>> {
    class
        .methods
        .iter()
        .filter(|m| m.visibility != Visibility::Private)
        .map(|m| m.signature())
        .collect()
}

pub fn cam_class(class: &ClassDef) -> Rational {
    let k = class.methods.len();
    let per_method: Vec<HashSet<&str>> = class
        .methods
        .iter()
        .map(|m| m.parameter_types.iter().map(String::as_str).collect())
        .collect();
    let all: HashSet<&str> = per_method.iter().flatten().copied().collect();
    if k == 0 || all.is_empty() {
        return Rational::zero();
    }
    let hits: usize = per_method.iter().map(HashSet::len).sum();
    Rational::new((hits as i64).into(), ((k * all.len()) as i64).into())
}

pub fn dar_class(class: &ClassDef) -> Rational {
    if class.attributes.is_empty() {
        return int(1);
    }
    let hidden = class
        .attributes
        .iter()
        .filter(|a| a.visibility.is_hidden())
        .count();
    Rational::new((hidden as i64).into(), (class.attributes.len() as i64).into())
}

pub fn nom_class(class: &ClassDef) -> usize {
    class.methods.len()
}

pub fn cis_class(class: &ClassDef) -> usize {
    class
        .methods
        .iter()
        .filter(|m| !m.visibility.is_hidden())
        .count()
}

pub fn dcc_class(model: &ClassModel, class: &ClassDef) -> usize {
    class
        .attributes
        .iter()
        .map(|a| a.type_name.as_str())
        .chain(
            class
                .methods
                .iter()
                .flat_map(|m| m.parameter_types.iter().map(String::as_str)),
        )
        .filter(|ty| *ty != class.name && model.is_declared(ty))
        .collect::<HashSet<_>>()
        .len()
}

pub fn nar_class(model: &ClassModel, class: &ClassDef) -> usize {
    class
        .attributes
        .iter()
        .filter(|a| model.is_declared(&a.type_name))
        .count()
}

fn fa_with(model: &ClassModel, class: usize, ancestors: &[usize]) -> Rational {
    let classes = model.classes();
    let local = signatures(&classes[class]);
    let inherited = ancestors
        .iter()
        .flat_map(|&a| inheritable(&classes[a]))
        .filter(|s| !local.contains(s))
        .collect::<HashSet<_>>()
        .len();
    let accessible = inherited + local.len();
    if accessible == 0 {
        return Rational::zero();
    }
    Rational::new((inherited as i64).into(), (accessible as i64).into())
}

/// Inheritable methods of `class` that no ancestor declares and some
/// descendant redeclares.
fn polymorphic_with<'m>(
    model: &'m ClassModel,
    class: usize,
    ancestors: &[usize],
    descendants: &[usize],
) -> Vec<Signature<'m>> {
    let classes = model.classes();
    let from_above: HashSet<Signature<'_>> =
        ancestors.iter().flat_map(|&a| inheritable(&classes[a])).collect();
    let below: Vec<HashSet<Signature<'_>>> =
        descendants.iter().map(|&d| signatures(&classes[d])).collect();
    let mut out: Vec<Signature<'m>> = inheritable(&classes[class])
        .into_iter()
        .filter(|s| !from_above.contains(s) && below.iter().any(|b| b.contains(s)))
        .collect();
    out.sort();
    out
}

fn nop_with(model: &ClassModel, class: usize, ancestors: &[usize], descendants: &[usize]) -> usize {
    polymorphic_with(model, class, ancestors, descendants).len()
}

fn descendant_table(ancestors: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new(); ancestors.len()];
    for (c, list) in ancestors.iter().enumerate() {
        for &a in list {
            out[a].push(c);
        }
    }
    out
}

fn descendants_of(model: &ClassModel, class: usize) -> Vec<usize> {
    (0..model.len())
        .filter(|&c| model.ancestor_indices(c).contains(&class))
        .collect()
}

fn mean_of<F: Fn(usize) -> Rational>(model: &ClassModel, f: F) -> Rational {
    let values: Vec<Rational> = (0..model.len()).map(f).collect();
    ratio::mean(&values)
}

fn usize_r(n: usize) -> Rational {
    int(n as i64)
}

pub fn noc(model: &ClassModel) -> Rational {
    usize_r(model.len())
}

pub fn noh(model: &ClassModel) -> Rational {
    usize_r(model.inheritance_hierarchies().len())
}

pub fn noa_class(model: &ClassModel, class: usize) -> usize {
    model.ancestor_indices(class).len()
}

pub fn noa(model: &ClassModel) -> Rational {
    usize_r((0..model.len()).map(|c| noa_class(model, c)).max().unwrap_or(0))
}

pub fn mdit(model: &ClassModel) -> Rational {
    usize_r(model.depth_table().into_iter().max().unwrap_or(0))
}

pub fn nar(model: &ClassModel) -> Rational {
    usize_r(model.classes().iter().map(|c| nar_class(model, c)).sum())
}

pub fn nah(model: &ClassModel) -> Rational {
    usize_r(model.aggregation_components().len())
}

pub fn cam(model: &ClassModel) -> Rational {
    mean_of(model, |c| cam_class(&model.classes()[c]))
}

pub fn nop_class(model: &ClassModel, class: usize) -> usize {
    nop_with(
        model,
        class,
        &model.ancestor_indices(class),
        &descendants_of(model, class),
    )
}

/// `Class.method(params)` ids of every polymorphic method, each at its
/// topmost declaring class.
pub fn polymorphic_methods(model: &ClassModel) -> BTreeSet<String> {
    let ancestors = model.ancestor_table(Execution::Sequential);
    let descendants = descendant_table(&ancestors);
    (0..model.len())
        .flat_map(|c| {
            polymorphic_with(model, c, &ancestors[c], &descendants[c])
                .into_iter()
                .map(move |s| format!("{}.{s}", model.classes()[c].name))
        })
        .collect()
}

pub fn nop(model: &ClassModel) -> Rational {
    usize_r((0..model.len()).map(|c| nop_class(model, c)).sum())
}

pub fn dar(model: &ClassModel) -> Rational {
    mean_of(model, |c| dar_class(&model.classes()[c]))
}

pub fn fa_class(model: &ClassModel, class: usize) -> Rational {
    fa_with(model, class, &model.ancestor_indices(class))
}

pub fn fa(model: &ClassModel) -> Rational {
    mean_of(model, |c| fa_class(model, c))
}

pub fn dcc(model: &ClassModel) -> Rational {
    mean_of(model, |c| usize_r(dcc_class(model, &model.classes()[c])))
}

pub fn nom(model: &ClassModel) -> Rational {
    mean_of(model, |c| usize_r(nom_class(&model.classes()[c])))
}

pub fn cis(model: &ClassModel) -> Rational {
    mean_of(model, |c| usize_r(cis_class(&model.classes()[c])))
}

/// Documented share of classes, methods and attributes.
pub fn eod(model: &ClassModel) -> Rational {
    let (mut documented, mut total) = (0usize, 0usize);
    for class in model.classes() {
        let flags = std::iter::once(class.documented)
            .chain(class.attributes.iter().map(|a| a.documented))
            .chain(class.methods.iter().map(|m| m.documented));
        for flag in flags {
            total += 1;
            documented += flag as usize;
        }
    }
    if total == 0 {
        return Rational::zero();
    }
    Rational::new((documented as i64).into(), (total as i64).into())
}

/// Single-metric entry point.
pub fn metric(model: &ClassModel, id: MetricId) -> Rational {
    match id {
        MetricId::Noc => noc(model),
        MetricId::Noh => noh(model),
        MetricId::Noa => noa(model),
        MetricId::Mdit => mdit(model),
        MetricId::Nar => nar(model),
        MetricId::Nah => nah(model),
        MetricId::Cam => cam(model),
        MetricId::Nop => nop(model),
        MetricId::Dar => dar(model),
        MetricId::Fa => fa(model),
        MetricId::Dcc => dcc(model),
        MetricId::Nom => nom(model),
        MetricId::Cis => cis(model),
        MetricId::Eod => eod(model),
    }
}

pub fn compute_all(model: &ClassModel) -> MetricVector {
    compute_all_with(model, Execution::default())
}

/// All fourteen metrics plus the per-class breakdown, with the per-class work
/// spread according to `exec`.
pub fn compute_all_with(model: &ClassModel, exec: Execution) -> MetricVector {
    let ancestors = model.ancestor_table(exec);
    let descendants = descendant_table(&ancestors);
    let depth = model.depth_table();
    let classes = model.classes();

    let per_class: Vec<ClassMetrics> = exec.map_range(classes.len(), |i| {
        let class = &classes[i];
        ClassMetrics {
            name: class.name.clone(),
            ancestors: ancestors[i].len(),
            depth: depth[i],
            aggregations: nar_class(model, class),
            polymorphic: nop_with(model, i, &ancestors[i], &descendants[i]),
            cam: cam_class(class),
            dar: dar_class(class),
            fa: fa_with(model, i, &ancestors[i]),
            dcc: dcc_class(model, class),
            nom: nom_class(class),
            cis: cis_class(class),
        }
    });

    let max = |f: fn(&ClassMetrics) -> usize| usize_r(per_class.iter().map(f).max().unwrap_or(0));
    let sum = |f: fn(&ClassMetrics) -> usize| usize_r(per_class.iter().map(f).sum());
    let mean = |f: fn(&ClassMetrics) -> Rational| {
        ratio::mean(&per_class.iter().map(f).collect::<Vec<_>>())
    };

    let mut values = vec![Rational::zero(); MetricId::ALL.len()];
    values[MetricId::Noc.index()] = usize_r(classes.len());
    values[MetricId::Noh.index()] = noh(model);
    values[MetricId::Noa.index()] = max(|c| c.ancestors);
    values[MetricId::Mdit.index()] = max(|c| c.depth);
    values[MetricId::Nar.index()] = sum(|c| c.aggregations);
    values[MetricId::Nah.index()] = nah(model);
    values[MetricId::Cam.index()] = mean(|c| c.cam.clone());
    values[MetricId::Nop.index()] = sum(|c| c.polymorphic);
    values[MetricId::Dar.index()] = mean(|c| c.dar.clone());
    values[MetricId::Fa.index()] = mean(|c| c.fa.clone());
    values[MetricId::Dcc.index()] = mean(|c| usize_r(c.dcc));
    values[MetricId::Nom.index()] = mean(|c| usize_r(c.nom));
    values[MetricId::Cis.index()] = mean(|c| usize_r(c.cis));
    values[MetricId::Eod.index()] = eod(model);

    MetricVector { values, per_class }
}
