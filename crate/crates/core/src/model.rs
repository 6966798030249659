//! Class-design data model and the graph queries the metrics are built on.
//!
//! A [`ClassModel`] is immutable once built. Classes are kept sorted by name;
//! members stay in declaration order. Inheritance and aggregation edges are
//! derived from the class declarations and never stored independently.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::par::Execution;

/// Words of the ODL grammar that cannot be used as identifiers.
pub const KEYWORDS: [&str; 6] = ["class", "interface", "extends", "public", "protected", "private"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassKind {
    Class,
    Interface,
}

impl ClassKind {
    pub fn keyword(self) -> &'static str {
        match self {
            ClassKind::Class => "class",
            ClassKind::Interface => "interface",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Visibility {
    Public,
    Protected,
    Private,
}

impl Visibility {
    pub fn keyword(self) -> &'static str {
        match self {
            Visibility::Public => "public",
            Visibility::Protected => "protected",
            Visibility::Private => "private",
        }
    }

    pub fn from_keyword(word: &str) -> Option<Self> {
        match word {
            "public" => Some(Visibility::Public),
            "protected" => Some(Visibility::Protected),
            "private" => Some(Visibility::Private),
            _ => None,
        }
    }

    /// Private and protected members count as encapsulated.
    pub fn is_hidden(self) -> bool {
        !matches!(self, Visibility::Public)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AttributeDef {
    pub name: String,
    #[serde(rename = "type")]
    pub type_name: String,
    pub visibility: Visibility,
    pub documented: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MethodDef {
    pub name: String,
    #[serde(rename = "params")]
    pub parameter_types: Vec<String>,
    #[serde(rename = "returns")]
    pub return_type: String,
    pub visibility: Visibility,
    pub documented: bool,
}

/// Method identity: name plus the ordered parameter-type list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Signature<'a> {
    pub name: &'a str,
    pub params: &'a [String],
}

impl fmt::Display for Signature<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.name, self.params.join(", "))
    }
}

impl MethodDef {
    pub fn signature(&self) -> Signature<'_> {
        Signature {
            name: &self.name,
            params: &self.parameter_types,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassDef {
    pub name: String,
    pub kind: ClassKind,
    pub parents: Vec<String>,
    pub documented: bool,
    pub attributes: Vec<AttributeDef>,
    pub methods: Vec<MethodDef>,
}

impl ClassDef {
    pub fn new(name: impl Into<String>, kind: ClassKind) -> Self {
        Self {
            name: name.into(),
            kind,
            parents: Vec::new(),
            documented: false,
            attributes: Vec::new(),
            methods: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("unknown class `{0}`")]
    UnknownClass(String),
}

/// Identifier of a violated model rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    DuplicateClass,
    SelfInheritance,
    UnknownParent,
    InheritanceCycle,
    DuplicateAttribute,
    DuplicateMethod,
    InvalidIdentifier,
}

impl Rule {
    pub fn id(self) -> &'static str {
        match self {
            Rule::DuplicateClass => "duplicate-class",
            Rule::SelfInheritance => "self-inheritance",
            Rule::UnknownParent => "unknown-parent",
            Rule::InheritanceCycle => "inheritance-cycle",
            Rule::DuplicateAttribute => "duplicate-attribute",
            Rule::DuplicateMethod => "duplicate-method",
            Rule::InvalidIdentifier => "invalid-identifier",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub class: String,
    pub rule: Rule,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} ({})", self.class, self.rule, self.detail)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn len(&self) -> usize {
        self.violations.len()
    }

    pub fn has(&self, rule: Rule) -> bool {
        self.violations.iter().any(|v| v.rule == rule)
    }

    /// Drops violations of the given rule.
    pub fn without(mut self, rule: Rule) -> Self {
        self.violations.retain(|v| v.rule != rule);
        self
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ValidationReport {}

pub fn is_identifier(text: &str) -> bool {
    let mut chars = text.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_') && !KEYWORDS.contains(&text)
}

#[derive(Debug, Clone, Default)]
pub struct ClassModel {
    classes: Vec<ClassDef>,
    index: HashMap<String, usize>,
    parents: Vec<Vec<usize>>,
    children: Vec<Vec<usize>>,
    inheritance_edges: BTreeSet<(String, String)>,
    aggregation_edges: BTreeSet<(String, String)>,
}

impl PartialEq for ClassModel {
    fn eq(&self, other: &Self) -> bool {
        self.classes == other.classes
    }
}

impl Eq for ClassModel {}

impl ClassModel {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds a model without checking its invariants. Use [`ClassModel::validate`]
    /// to find out what is wrong with it; graph queries stay finite on any input.
    pub fn from_classes(mut classes: Vec<ClassDef>) -> Self {
        classes.sort_by(|a, b| a.name.cmp(&b.name));
        let mut index = HashMap::with_capacity(classes.len());
        for (i, class) in classes.iter().enumerate() {
            index.entry(class.name.clone()).or_insert(i);
        }

        let mut parents = vec![Vec::new(); classes.len()];
        let mut children = vec![Vec::new(); classes.len()];
        let mut inheritance_edges = BTreeSet::new();
        let mut aggregation_edges = BTreeSet::new();
        for (i, class) in classes.iter().enumerate() {
            for parent in &class.parents {
                if let Some(&p) = index.get(parent) {
                    if !parents[i].contains(&p) {
                        parents[i].push(p);
                        children[p].push(i);
                    }
                    inheritance_edges.insert((class.name.clone(), parent.clone()));
                }
            }
            for attr in &class.attributes {
                if index.contains_key(&attr.type_name) {
                    aggregation_edges.insert((class.name.clone(), attr.type_name.clone()));
                }
            }
        }

        Self {
            classes,
            index,
            parents,
            children,
            inheritance_edges,
            aggregation_edges,
        }
    }

    /// Builds a model, rejecting it if any invariant fails.
    pub fn new(classes: Vec<ClassDef>) -> Result<Self, ValidationReport> {
        let model = Self::from_classes(classes);
        let report = model.validate();
        if report.is_empty() {
            Ok(model)
        } else {
            Err(report)
        }
    }

    pub fn classes(&self) -> &[ClassDef] {
        &self.classes
    }

    pub fn into_classes(self) -> Vec<ClassDef> {
        self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn class(&self, name: &str) -> Option<&ClassDef> {
        self.index.get(name).map(|&i| &self.classes[i])
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    /// True when `type_name` names a declared class or interface.
    pub fn is_declared(&self, type_name: &str) -> bool {
        self.index.contains_key(type_name)
    }

    /// `(child, parent)` pairs whose parent is declared.
    pub fn inheritance_edges(&self) -> &BTreeSet<(String, String)> {
        &self.inheritance_edges
    }

    /// `(owner, part)` pairs, one per owner/part-type combination.
    pub fn aggregation_edges(&self) -> &BTreeSet<(String, String)> {
        &self.aggregation_edges
    }

    pub fn parent_indices(&self, class: usize) -> &[usize] {
        &self.parents[class]
    }

    pub fn child_indices(&self, class: usize) -> &[usize] {
        &self.children[class]
    }

    fn require(&self, class: &str) -> Result<usize, ModelError> {
        self.index_of(class)
            .ok_or_else(|| ModelError::UnknownClass(class.to_string()))
    }

    /// Indices of every class reachable through parent edges, excluding
    /// `class` itself, sorted ascending.
    pub fn ancestor_indices(&self, class: usize) -> Vec<usize> {
        let mut seen = vec![false; self.classes.len()];
        let mut queue: VecDeque<usize> = self.parents[class].iter().copied().collect();
        let mut out = Vec::new();
        while let Some(c) = queue.pop_front() {
            if c == class || seen[c] {
                continue;
            }
            seen[c] = true;
            out.push(c);
            queue.extend(self.parents[c].iter().copied());
        }
        out.sort_unstable();
        out
    }

    /// Ancestor sets of every class, indexed like [`ClassModel::classes`].
    pub fn ancestor_table(&self, exec: Execution) -> Vec<Vec<usize>> {
        exec.map_range(self.classes.len(), |i| self.ancestor_indices(i))
    }

    pub fn ancestors_of(&self, class: &str) -> Result<BTreeSet<String>, ModelError> {
        let i = self.require(class)?;
        Ok(self
            .ancestor_indices(i)
            .into_iter()
            .map(|a| self.classes[a].name.clone())
            .collect())
    }

    /// Levels on the longest parent path of every class, counting the class.
    ///
    /// Classes on an inheritance cycle get a finite but otherwise meaningless depth.
    pub fn depth_table(&self) -> Vec<usize> {
        let n = self.classes.len();
        let mut pending: Vec<usize> = self.parents.iter().map(Vec::len).collect();
        let mut depth = vec![0usize; n];
        let mut queue: VecDeque<usize> = (0..n).filter(|&i| pending[i] == 0).collect();
        let mut done = vec![false; n];
        while let Some(c) = queue.pop_front() {
            done[c] = true;
            depth[c] = 1 + self.parents[c].iter().map(|&p| depth[p]).max().unwrap_or(0);
            for &child in &self.children[c] {
                pending[child] -= 1;
                if pending[child] == 0 {
                    queue.push_back(child);
                }
            }
        }
        for c in 0..n {
            if !done[c] {
                depth[c] = 1 + self.parents[c].iter().map(|&p| depth[p]).max().unwrap_or(0);
            }
        }
        depth
    }

    pub fn depth_levels(&self, class: &str) -> Result<usize, ModelError> {
        let i = self.require(class)?;
        Ok(self.depth_table()[i])
    }

    /// Parentless classes with at least one descendant.
    pub fn inheritance_hierarchies(&self) -> BTreeSet<String> {
        (0..self.classes.len())
            .filter(|&i| self.parents[i].is_empty() && !self.children[i].is_empty())
            .map(|i| self.classes[i].name.clone())
            .collect()
    }

    /// Weakly connected components of the aggregation graph that contain at
    /// least one edge.
    pub fn aggregation_components(&self) -> BTreeSet<BTreeSet<String>> {
        let n = self.classes.len();
        let mut sets = UnionFind::<usize>::new(n);
        let mut touched = vec![false; n];
        for (owner, part) in &self.aggregation_edges {
            let (a, b) = (self.index[owner], self.index[part]);
            sets.union(a, b);
            touched[a] = true;
            touched[b] = true;
        }
        let mut groups: HashMap<usize, BTreeSet<String>> = HashMap::new();
        for i in (0..n).filter(|&i| touched[i]) {
            groups
                .entry(sets.find(i))
                .or_default()
                .insert(self.classes[i].name.clone());
        }
        groups.into_values().collect()
    }

    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        let mut names = HashSet::new();
        let mut push = |class: &str, rule: Rule, detail: String| {
            violations.push(Violation {
                class: class.to_string(),
                rule,
                detail,
            })
        };

        for class in &self.classes {
            let name = class.name.as_str();
            if !names.insert(name) {
                push(name, Rule::DuplicateClass, "class declared more than once".into());
            }
            let mut identifiers = vec![("class name", name)];
            for parent in &class.parents {
                identifiers.push(("parent", parent));
                if parent == name {
                    push(name, Rule::SelfInheritance, "class lists itself as parent".into());
                } else if !self.is_declared(parent) {
                    push(name, Rule::UnknownParent, format!("parent `{parent}` is not declared"));
                }
            }
            let mut attr_names = HashSet::new();
            for attr in &class.attributes {
                identifiers.push(("attribute name", &attr.name));
                identifiers.push(("attribute type", &attr.type_name));
                if !attr_names.insert(attr.name.as_str()) {
                    push(name, Rule::DuplicateAttribute, format!("attribute `{}`", attr.name));
                }
            }
            let mut signatures = HashSet::new();
            for method in &class.methods {
                identifiers.push(("method name", &method.name));
                identifiers.push(("return type", &method.return_type));
                identifiers.extend(method.parameter_types.iter().map(|p| ("parameter type", p.as_str())));
                if !signatures.insert(method.signature()) {
                    push(name, Rule::DuplicateMethod, format!("method `{}`", method.signature()));
                }
            }
            for (what, ident) in identifiers {
                if !is_identifier(ident) {
                    push(name, Rule::InvalidIdentifier, format!("{what} `{ident}`"));
                }
            }
        }

        // Self-loops are reported above; cycles need at least two classes.
        let mut graph = DiGraph::<usize, ()>::new();
        let nodes: Vec<_> = (0..self.classes.len()).map(|i| graph.add_node(i)).collect();
        for (child, parents) in self.parents.iter().enumerate() {
            for &p in parents.iter().filter(|&&p| p != child) {
                graph.add_edge(nodes[child], nodes[p], ());
            }
        }
        let mut cycles: Vec<Vec<&str>> = tarjan_scc(&graph)
            .into_iter()
            .filter(|scc| scc.len() > 1)
            .map(|scc| {
                let mut members: Vec<&str> =
                    scc.iter().map(|&n| self.classes[graph[n]].name.as_str()).collect();
                members.sort_unstable();
                members
            })
            .collect();
        cycles.sort();
        for members in cycles {
            push(members[0], Rule::InheritanceCycle, members.join(", "));
        }
        ValidationReport { violations }
    }
}

/// Free-function form of [`ClassModel::validate`].
pub fn validate(model: &ClassModel) -> ValidationReport {
    model.validate()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn class(name: &str, parents: &[&str]) -> ClassDef {
        let mut c = ClassDef::new(name, ClassKind::Class);
        c.parents = parents.iter().map(|p| p.to_string()).collect();
        c
    }

    fn attr(name: &str, ty: &str) -> AttributeDef {
        AttributeDef {
            name: name.into(),
            type_name: ty.into(),
            visibility: Visibility::Private,
            documented: false,
        }
    }

    /// Cycle check that walks every simple parent path explicitly.
    fn has_cycle_by_path_walk(model: &ClassModel) -> bool {
        fn walk(model: &ClassModel, start: usize, at: usize, path: &mut Vec<usize>) -> bool {
            for &p in model.parent_indices(at) {
                if p == start && path.len() > 1 {
                    return true;
                }
                if !path.contains(&p) {
                    path.push(p);
                    if walk(model, start, p, path) {
                        return true;
                    }
                    path.pop();
                }
            }
            false
        }
        (0..model.len()).any(|s| walk(model, s, s, &mut vec![s]))
    }

    #[test]
    fn empty_model_is_valid() {
        assert!(ClassModel::empty().validate().is_empty());
        assert!(ClassModel::empty().inheritance_hierarchies().is_empty());
        assert!(ClassModel::empty().aggregation_components().is_empty());
    }

    #[test]
    fn self_inheritance_is_one_violation() {
        let model = ClassModel::from_classes(vec![class("A", &["A"])]);
        let report = model.validate();
        assert_eq!(report.len(), 1);
        assert_eq!(report.violations[0].rule, Rule::SelfInheritance);
        assert_eq!(report.violations[0].class, "A");
        assert!(model.depth_levels("A").is_ok());
    }

    #[test]
    fn two_cycle_is_one_violation() {
        let model = ClassModel::from_classes(vec![class("A", &["B"]), class("B", &["A"])]);
        assert!(has_cycle_by_path_walk(&model));
        let report = model.validate();
        assert_eq!(report.len(), 1);
        assert_eq!(report.violations[0].rule, Rule::InheritanceCycle);
        // queries stay finite
        assert_eq!(model.ancestors_of("A").unwrap(), BTreeSet::from(["B".to_string()]));
        assert!(model.depth_levels("B").unwrap() >= 1);
    }

    #[test]
    fn cycle_detection_agrees_with_path_walk() {
        let shapes: [&[(&str, &[&str])]; 6] = [
            &[("A", &[]), ("B", &["A"]), ("C", &["B"])],
            &[("A", &["C"]), ("B", &["A"]), ("C", &["B"])],
            &[("A", &[]), ("B", &["A", "C"]), ("C", &["A"])],
            &[("A", &["B"]), ("B", &["C"]), ("C", &["B"])],
            &[("A", &["B", "C"]), ("B", &[]), ("C", &["A"])],
            &[("A", &[]), ("B", &["A"]), ("C", &["A", "B"]), ("D", &["C"])],
        ];
        for shape in shapes {
            let model =
                ClassModel::from_classes(shape.iter().map(|(n, p)| class(n, p)).collect());
            assert_eq!(
                model.validate().has(Rule::InheritanceCycle),
                has_cycle_by_path_walk(&model),
                "{shape:?}"
            );
        }
    }

    #[test]
    fn other_rules() {
        let mut a = class("A", &["Missing"]);
        a.attributes = vec![attr("x", "int"), attr("x", "int")];
        let m = MethodDef {
            name: "m".into(),
            parameter_types: vec!["int".into()],
            return_type: "void".into(),
            visibility: Visibility::Public,
            documented: false,
        };
        a.methods = vec![m.clone(), m];
        let mut bad = class("class", &[]);
        bad.attributes.push(attr("9x", "int"));
        let model = ClassModel::from_classes(vec![a, class("B", &[]), class("B", &[]), bad]);
        let report = model.validate();
        for rule in [
            Rule::UnknownParent,
            Rule::DuplicateAttribute,
            Rule::DuplicateMethod,
            Rule::DuplicateClass,
            Rule::InvalidIdentifier,
        ] {
            assert!(report.has(rule), "missing {rule}");
        }
        assert_eq!(report.without(Rule::InvalidIdentifier).len(), 4);
    }

    #[test]
    fn multiple_inheritance_queries() {
        // D -> B -> A, D -> C, C -> A; E isolated.
        let model = ClassModel::new(vec![
            class("A", &[]),
            class("B", &["A"]),
            class("C", &["A"]),
            class("D", &["B", "C"]),
            class("E", &[]),
            class("F", &["E2"]),
            class("E2", &[]),
        ])
        .unwrap();
        let names = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<BTreeSet<_>>();
        assert_eq!(model.ancestors_of("D").unwrap(), names(&["A", "B", "C"]));
        assert_eq!(model.depth_levels("D"), Ok(3));
        assert_eq!(model.depth_levels("E"), Ok(1));
        assert_eq!(model.inheritance_hierarchies(), names(&["A", "E2"]));
        assert_eq!(
            model.ancestors_of("Z"),
            Err(ModelError::UnknownClass("Z".into()))
        );
        assert!(model.depth_levels("Z").is_err());
    }

    #[test]
    fn aggregation_components_drop_isolated_classes() {
        let mut a = class("A", &[]);
        a.attributes = vec![attr("b", "B"), attr("n", "int")];
        let mut c = class("C", &[]);
        c.attributes = vec![attr("d", "D")];
        let model = ClassModel::new(vec![a, class("B", &[]), c, class("D", &[]), class("E", &[])])
            .unwrap();
        let comps = model.aggregation_components();
        assert_eq!(comps.len(), 2);
        assert!(comps.contains(&BTreeSet::from(["A".to_string(), "B".to_string()])));
        assert_eq!(model.aggregation_edges().len(), 2);
    }

    #[test]
    fn classes_are_sorted_and_equality_ignores_input_order() {
        let a = ClassModel::from_classes(vec![class("B", &[]), class("A", &[])]);
        let b = ClassModel::from_classes(vec![class("A", &[]), class("B", &[])]);
        assert_eq!(a, b);
        assert_eq!(a.classes()[0].name, "A");
    }
}
