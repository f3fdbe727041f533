//! Definitions: rule sets with their defined and parameter symbols, the
//! predicate dependency graph, stratification and module partitions.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};
use serde::Serialize;
use thiserror::Error;

use crate::rule::{Literal, Rule};
use crate::vocab::{ConstructorSet, Symbol, Vocabulary};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DefinitionError {
    #[error("a definition needs at least one rule")]
    EmptyDefinition,
    #[error("not stratified: cycle through negation {}", render_cycle(.cycle))]
    NotStratified { cycle: Vec<Symbol> },
    #[error("not a partition: {0}")]
    NotAPartition(String),
    #[error("partition is not a valid modularization: {0}")]
    InvalidPartition(String),
}

fn render_cycle(cycle: &[Symbol]) -> String {
    cycle
        .iter()
        .map(|s| s.to_string())
        .collect::<Vec<_>>()
        .join(" -> ")
}

/// A non-empty rule set with its defined predicates and parameter symbols.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Definition {
    rules: Vec<Rule>,
    defined: BTreeSet<Symbol>,
    parameters: Vocabulary,
}

/// Computes defined predicates (rule heads) and parameters (every other
/// non-variable symbol).
pub fn classify(rules: impl IntoIterator<Item = Rule>) -> Result<Definition, DefinitionError> {
    let rules: Vec<Rule> = rules.into_iter().collect();
    if rules.is_empty() {
        return Err(DefinitionError::EmptyDefinition);
    }
    let defined: BTreeSet<Symbol> = rules.iter().map(|r| r.head.symbol()).collect();
    let mut parameters = Vocabulary::new();
    let mut functions = BTreeSet::new();
    for r in &rules {
        r.head.args.iter().for_each(|t| t.collect_functions(&mut functions));
        for l in &r.body {
            if let Some(a) = l.atom() {
                if !defined.contains(&a.symbol()) {
                    parameters.add_predicate(a.symbol());
                }
            }
            l.terms().into_iter().for_each(|t| t.collect_functions(&mut functions));
        }
    }
    for f in functions {
        parameters.add_function(f);
    }
    Ok(Definition {
        rules,
        defined,
        parameters,
    })
}

impl Definition {
    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn defined(&self) -> &BTreeSet<Symbol> {
        &self.defined
    }

    pub fn parameters(&self) -> &Vocabulary {
        &self.parameters
    }

    pub fn parameter_predicates(&self) -> impl Iterator<Item = &Symbol> {
        self.parameters.predicates()
    }

    pub fn is_defined(&self, p: &Symbol) -> bool {
        self.defined.contains(p)
    }

    /// Every symbol of the definition: defined predicates plus parameters.
    pub fn vocabulary(&self) -> Vocabulary {
        let mut v = self.parameters.clone();
        for d in &self.defined {
            v.add_predicate(d.clone());
        }
        v
    }

    pub fn is_negation_free(&self) -> bool {
        !self.rules.iter().any(Rule::has_negation)
    }

    pub fn dependency_graph(&self) -> DependencyGraph {
        DependencyGraph::of(self)
    }

    /// The same definition with its rules in another order.
    pub fn with_rule_order(&self, order: &[usize]) -> Definition {
        Definition {
            rules: order.iter().map(|&i| self.rules[i].clone()).collect(),
            defined: self.defined.clone(),
            parameters: self.parameters.clone(),
        }
    }

    /// Sub-definition made of the rules at the given indices.
    pub fn subdefinition(&self, indices: &[usize]) -> Result<Definition, DefinitionError> {
        classify(indices.iter().map(|&i| self.rules[i].clone()))
    }
}

impl fmt::Display for Definition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rules {
            writeln!(f, "{r}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarity {
    Positive,
    Negative,
}

/// Edges `(P, Q)` where `Q` heads a rule with `P` in its body, tagged with
/// the polarity of the body occurrence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DependencyGraph {
    vertices: BTreeSet<Symbol>,
    edges: BTreeSet<(Symbol, Symbol, Polarity)>,
}

impl DependencyGraph {
    pub fn of(d: &Definition) -> Self {
        let mut vertices: BTreeSet<Symbol> = d.defined.clone();
        vertices.extend(d.parameters.predicates().cloned());
        let mut edges = BTreeSet::new();
        for r in &d.rules {
            let q = r.head.symbol();
            for l in &r.body {
                let (atom, pol) = match l {
                    Literal::Pos(a) => (a, Polarity::Positive),
                    Literal::Neg(a) => (a, Polarity::Negative),
                    _ => continue,
                };
                edges.insert((atom.symbol(), q.clone(), pol));
            }
        }
        DependencyGraph { vertices, edges }
    }

    pub fn vertices(&self) -> &BTreeSet<Symbol> {
        &self.vertices
    }

    pub fn edges(&self) -> &BTreeSet<(Symbol, Symbol, Polarity)> {
        &self.edges
    }

    fn successors<'a>(&'a self, p: &'a Symbol) -> impl Iterator<Item = &'a Symbol> + 'a {
        self.edges
            .iter()
            .filter(move |(from, _, _)| from == p)
            .map(|(_, to, _)| to)
    }

    /// Strongly connected components, dependencies before dependents.
    pub fn components(&self) -> Vec<BTreeSet<Symbol>> {
        let mut graph = DiGraph::<Symbol, ()>::new();
        let index: BTreeMap<&Symbol, NodeIndex> = self
            .vertices
            .iter()
            .map(|v| (v, graph.add_node(v.clone())))
            .collect();
        for (from, to, _) in &self.edges {
            graph.update_edge(index[from], index[to], ());
        }
        // tarjan_scc yields components in reverse topological order of the
        // edge direction; edges point from dependency to dependent, so
        // reversing puts dependencies first.
        let mut sccs = tarjan_scc(&graph);
        sccs.reverse();
        sccs.into_iter()
            .map(|c| c.into_iter().map(|n| graph[n].clone()).collect())
            .collect()
    }

    pub fn has_cycle(&self) -> bool {
        self.edges.iter().any(|(a, b, _)| a == b)
            || self.components().iter().any(|c| c.len() > 1)
    }

    /// Shortest path `from ->* to` inside `within`.
    fn path(&self, from: &Symbol, to: &Symbol, within: &BTreeSet<Symbol>) -> Vec<Symbol> {
        let mut prev: BTreeMap<Symbol, Symbol> = BTreeMap::new();
        let mut queue = VecDeque::from([from.clone()]);
        let mut seen = BTreeSet::from([from.clone()]);
        while let Some(v) = queue.pop_front() {
            if &v == to {
                break;
            }
            for w in self.successors(&v) {
                if within.contains(w) && seen.insert(w.clone()) {
                    prev.insert(w.clone(), v.clone());
                    queue.push_back(w.clone());
                }
            }
        }
        let mut path = vec![to.clone()];
        let mut cur = to.clone();
        while &cur != from {
            match prev.get(&cur) {
                Some(p) => {
                    cur = p.clone();
                    path.push(cur.clone());
                }
                None => break,
            }
        }
        path.reverse();
        path
    }
}

/// Whether the dependency graph of `d` has a cycle.
pub fn is_inductive(d: &Definition) -> bool {
    d.dependency_graph().has_cycle()
}

/// Strata of defined predicates: the components of the dependency graph in
/// dependency order. Fails when a negative edge lies on a cycle.
pub fn stratify(d: &Definition) -> Result<Vec<BTreeSet<Symbol>>, DefinitionError> {
    let g = d.dependency_graph();
    let components = g.components();
    for c in &components {
        for (from, to, pol) in g.edges() {
            if *pol == Polarity::Negative && c.contains(from) && c.contains(to) {
                // from -not-> to, then back from `to` to `from`.
                let mut cycle = vec![from.clone()];
                cycle.extend(g.path(to, from, c));
                return Err(DefinitionError::NotStratified { cycle });
            }
        }
    }
    Ok(components
        .into_iter()
        .map(|c| c.into_iter().filter(|p| d.is_defined(p)).collect::<BTreeSet<_>>())
        .filter(|c| !c.is_empty())
        .collect())
}

/// A named group of rules, given by their indices in the definition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Part {
    pub name: String,
    pub rules: Vec<usize>,
}

/// A definition plus a constructor set: the theory `{H(CF), D}`, with an
/// optional declared split into modules.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Program {
    pub definition: Definition,
    pub constructors: ConstructorSet,
    pub modules: Vec<Part>,
}

impl Program {
    /// Checks that the constructors cover every function symbol of the rules
    /// that is not otherwise interpreted; returns the uncovered ones.
    pub fn non_constructor_functions(&self) -> Vec<Symbol> {
        self.definition
            .parameters()
            .functions()
            .filter(|f| !self.constructors.contains(f))
            .cloned()
            .collect()
    }

    /// Every symbol of the program and its constructors.
    pub fn vocabulary(&self) -> Vocabulary {
        self.definition.vocabulary().union(&self.constructors.vocabulary())
    }

    pub fn module(&self, name: &str) -> Option<&Part> {
        self.modules.iter().find(|m| m.name == name)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PartitionViolation {
    /// Rules for one predicate spread over several parts.
    RuleScatter { predicate: String, parts: Vec<String> },
    /// Parts that depend on each other cyclically.
    CrossPartCycle { parts: Vec<String> },
}

impl fmt::Display for PartitionViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PartitionViolation::RuleScatter { predicate, parts } => {
                write!(f, "rules for {predicate} are spread over {}", parts.join(", "))
            }
            PartitionViolation::CrossPartCycle { parts } => {
                write!(f, "cyclic dependency between parts {}", parts.join(" -> "))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartitionReport {
    pub violations: Vec<PartitionViolation>,
}

impl PartitionReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks that `parts` is a sensible modularization of `d`: every predicate
/// is defined in exactly one part, and the dependency relation between parts
/// is acyclic.
pub fn validate_partition(d: &Definition, parts: &[Part]) -> Result<PartitionReport, DefinitionError> {
    let mut owner: Vec<Option<&str>> = vec![None; d.rules().len()];
    for p in parts {
        if p.rules.is_empty() {
            return Err(DefinitionError::NotAPartition(format!("part {} is empty", p.name)));
        }
        for &i in &p.rules {
            let slot = owner.get_mut(i).ok_or_else(|| {
                DefinitionError::NotAPartition(format!("part {} names missing rule {i}", p.name))
            })?;
            if let Some(other) = slot {
                return Err(DefinitionError::NotAPartition(format!(
                    "rule {i} is in both {other} and {}",
                    p.name
                )));
            }
            *slot = Some(&p.name);
        }
    }
    if let Some(i) = owner.iter().position(Option::is_none) {
        return Err(DefinitionError::NotAPartition(format!(
            "rule {i} ({}) is in no part",
            d.rules()[i]
        )));
    }

    let mut definers: BTreeMap<Symbol, BTreeSet<usize>> = BTreeMap::new();
    for (pi, p) in parts.iter().enumerate() {
        for &i in &p.rules {
            definers.entry(d.rules()[i].head.symbol()).or_default().insert(pi);
        }
    }
    let mut violations = Vec::new();
    for (pred, ps) in &definers {
        if ps.len() > 1 {
            violations.push(PartitionViolation::RuleScatter {
                predicate: pred.to_string(),
                parts: ps.iter().map(|&i| parts[i].name.clone()).collect(),
            });
        }
    }

    // Part-level dependency graph: i -> j when a rule of j uses a predicate
    // defined in i.
    let mut graph = DiGraph::<usize, ()>::new();
    let nodes: Vec<NodeIndex> = (0..parts.len()).map(|i| graph.add_node(i)).collect();
    for (j, p) in parts.iter().enumerate() {
        for &ri in &p.rules {
            for l in &d.rules()[ri].body {
                let Some(a) = l.atom() else { continue };
                for &i in definers.get(&a.symbol()).into_iter().flatten() {
                    if i != j {
                        graph.update_edge(nodes[i], nodes[j], ());
                    }
                }
            }
        }
    }
    for scc in tarjan_scc(&graph) {
        if scc.len() > 1 {
            let mut names: Vec<String> = scc.iter().map(|n| parts[graph[*n]].name.clone()).collect();
            names.sort();
            violations.push(PartitionViolation::CrossPartCycle { parts: names });
        }
    }
    Ok(PartitionReport { violations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rule::Atom;
    use crate::term::Term;
    use crate::vocab::SymbolKind;

    fn v(n: &str) -> Term {
        Term::var(n)
    }

    fn atom(p: &str, args: &[&str]) -> Atom {
        Atom::new(
            p,
            args.iter()
                .map(|a| {
                    if a.chars().next().unwrap().is_uppercase() {
                        v(a)
                    } else {
                        Term::constant(*a)
                    }
                })
                .collect(),
        )
    }

    fn pos(p: &str, args: &[&str]) -> Literal {
        Literal::Pos(atom(p, args))
    }

    fn d_r() -> Definition {
        classify([
            Rule::new(atom("r", &["X", "Y"]), vec![pos("g", &["X", "Y"])]),
            Rule::new(atom("r", &["X", "Z"]), vec![pos("r", &["X", "Y"]), pos("g", &["Y", "Z"])]),
        ])
        .unwrap()
    }

    fn d_s() -> Definition {
        classify([Rule::new(
            atom("sibling", &["X", "Y"]),
            vec![
                pos("child_of", &["X", "Z"]),
                pos("child_of", &["Y", "Z"]),
                Literal::Neq(v("X"), v("Y")),
            ],
        )])
        .unwrap()
    }

    fn even_odd() -> Definition {
        let s = |x: &str| Term::app("s", vec![v(x)]);
        classify([
            Rule::fact(atom("even", &["0"])),
            Rule::new(Atom::new("odd", vec![s("N")]), vec![pos("even", &["N"])]),
            Rule::new(Atom::new("even", vec![s("N")]), vec![pos("odd", &["N"])]),
        ])
        .unwrap()
    }

    #[test]
    fn classify_sibling() {
        let d = d_s();
        assert_eq!(d.defined(), &BTreeSet::from([Symbol::new("sibling", 2)]));
        assert_eq!(
            d.parameter_predicates().cloned().collect::<Vec<_>>(),
            vec![Symbol::new("child_of", 2)]
        );
    }

    #[test]
    fn classify_reachability() {
        let d = d_r();
        assert_eq!(d.defined(), &BTreeSet::from([Symbol::new("r", 2)]));
        assert_eq!(d.parameters().len(), 1);
        assert!(d.parameters().contains(SymbolKind::Predicate, &Symbol::new("g", 2)));
    }

    #[test]
    fn classify_list_product_has_function_parameters() {
        let d = classify([
            Rule::fact(Atom::new("listproduct", vec![Term::nil(), Term::constant("1")])),
            Rule::new(
                Atom::new(
                    "listproduct",
                    vec![
                        Term::cons(v("H"), v("T")),
                        Term::app("times", vec![v("H"), v("P")]),
                    ],
                ),
                vec![Literal::Pos(Atom::new("listproduct", vec![v("T"), v("P")]))],
            ),
        ])
        .unwrap();
        let params = d.parameters();
        assert!(params.contains(SymbolKind::Function, &Symbol::new("times", 2)));
        assert!(params.contains(SymbolKind::Function, &Symbol::new("cons", 2)));
        assert!(params.contains(SymbolKind::Constant, &Symbol::new("nil", 0)));
        assert_eq!(params.predicates().count(), 0);
    }

    #[test]
    fn empty_definition_rejected() {
        assert_eq!(classify([]), Err(DefinitionError::EmptyDefinition));
    }

    #[test]
    fn classify_ignores_rule_order() {
        let d = d_r();
        let rev = d.with_rule_order(&[1, 0]);
        let again = classify(rev.rules().to_vec()).unwrap();
        assert_eq!(again.defined(), d.defined());
        assert_eq!(again.parameters(), d.parameters());
    }

    #[test]
    fn inductiveness() {
        assert!(is_inductive(&d_r()));
        assert!(!is_inductive(&d_s()));
        assert!(is_inductive(&even_odd()));
    }

    #[test]
    fn stratify_examples() {
        assert_eq!(stratify(&d_r()).unwrap(), vec![BTreeSet::from([Symbol::new("r", 2)])]);
        let p = Rule::new(atom("p", &[]), vec![Literal::Neg(atom("p", &[]))]);
        let err = stratify(&classify([p]).unwrap()).unwrap_err();
        assert_eq!(
            err,
            DefinitionError::NotStratified {
                cycle: vec![Symbol::new("p", 0), Symbol::new("p", 0)]
            }
        );
    }

    #[test]
    fn stratify_compress_puts_member_first() {
        let cons = |h: &str, t: &str| Term::cons(v(h), v(t));
        let rules = [
            Rule::fact(Atom::new("member", vec![v("X"), cons("X", "T")])),
            Rule::new(Atom::new("member", vec![v("X"), cons("H", "T")]), vec![pos("member", &["X", "T"])]),
            Rule::fact(Atom::new("compress", vec![Term::nil(), Term::nil()])),
            Rule::new(
                Atom::new("compress", vec![cons("X", "T"), cons("X", "T1")]),
                vec![pos("compress", &["T", "T1"]), Literal::Neg(atom("member", &["X", "T1"]))],
            ),
            Rule::new(
                Atom::new("compress", vec![cons("X", "T"), v("T1")]),
                vec![pos("compress", &["T", "T1"]), pos("member", &["X", "T1"])],
            ),
        ];
        let strata = stratify(&classify(rules).unwrap()).unwrap();
        assert_eq!(
            strata,
            vec![
                BTreeSet::from([Symbol::new("member", 2)]),
                BTreeSet::from([Symbol::new("compress", 2)])
            ]
        );
    }

    #[test]
    fn negative_cycle_through_two_predicates_is_reported() {
        let d = classify([
            Rule::new(atom("p", &[]), vec![Literal::Neg(atom("q", &[]))]),
            Rule::new(atom("q", &[]), vec![pos("p", &[])]),
        ])
        .unwrap();
        match stratify(&d) {
            Err(DefinitionError::NotStratified { cycle }) => {
                assert_eq!(cycle.first(), cycle.last());
                assert_eq!(cycle.len(), 3);
            }
            other => panic!("expected NotStratified, got {other:?}"),
        }
    }

    #[test]
    fn family_split_is_valid() {
        let d = classify([
            Rule::new(
                atom("sibling", &["X", "Y"]),
                vec![pos("child_of", &["X", "P"]), pos("child_of", &["Y", "P"]), Literal::Neq(v("X"), v("Y"))],
            ),
            Rule::fact(atom("child_of", &["tessa", "david"])),
            Rule::fact(atom("child_of", &["jonah", "david"])),
        ])
        .unwrap();
        let parts = [
            Part { name: "sibling".into(), rules: vec![0] },
            Part { name: "child_of".into(), rules: vec![1, 2] },
        ];
        assert!(validate_partition(&d, &parts).unwrap().is_valid());
    }

    #[test]
    fn scattered_rules_are_a_violation() {
        let parts = [
            Part { name: "base".into(), rules: vec![0] },
            Part { name: "step".into(), rules: vec![1] },
        ];
        let report = validate_partition(&d_r(), &parts).unwrap();
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, PartitionViolation::RuleScatter { predicate, .. } if predicate == "r/2")));
    }

    #[test]
    fn simultaneous_induction_split_is_a_cycle() {
        let parts = [
            Part { name: "even".into(), rules: vec![0, 2] },
            Part { name: "odd".into(), rules: vec![1] },
        ];
        let report = validate_partition(&even_odd(), &parts).unwrap();
        assert_eq!(
            report.violations,
            vec![PartitionViolation::CrossPartCycle { parts: vec!["even".into(), "odd".into()] }]
        );
    }

    #[test]
    fn overlapping_or_incomplete_parts_are_not_partitions() {
        let overlap = [
            Part { name: "a".into(), rules: vec![0, 1] },
            Part { name: "b".into(), rules: vec![1] },
        ];
        assert!(matches!(validate_partition(&d_r(), &overlap), Err(DefinitionError::NotAPartition(_))));
        let missing = [Part { name: "a".into(), rules: vec![0] }];
        assert!(matches!(validate_partition(&d_r(), &missing), Err(DefinitionError::NotAPartition(_))));
    }

    #[test]
    fn trivial_partition_always_valid() {
        for d in [d_r(), d_s(), even_odd()] {
            let all = Part { name: "all".into(), rules: (0..d.rules().len()).collect() };
            assert!(validate_partition(&d, &[all]).unwrap().is_valid());
        }
    }
}
