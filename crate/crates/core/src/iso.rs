//! Isomorphism of extensional structures and the Herbrand axiom check.

use std::collections::{BTreeMap, BTreeSet};

use crate::exactness::Exactness;
use crate::structure::{tuples_over, Form, FunctionValue, ModelError, Structure, Tuple};
use crate::term::GroundTerm;
use crate::vocab::{ConstructorSet, Symbol, SymbolKind, Vocabulary};

/// A one-to-one, onto map between two domains.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bijection {
    pairs: BTreeMap<GroundTerm, GroundTerm>,
}

impl Bijection {
    /// Checks injectivity; totality and surjectivity are relative to the
    /// structures the map is used with.
    pub fn new(pairs: impl IntoIterator<Item = (GroundTerm, GroundTerm)>) -> Option<Self> {
        let pairs: BTreeMap<_, _> = pairs.into_iter().collect();
        let images: BTreeSet<_> = pairs.values().collect();
        (images.len() == pairs.len()).then_some(Bijection { pairs })
    }

    pub fn identity<'a>(domain: impl IntoIterator<Item = &'a GroundTerm>) -> Self {
        Bijection {
            pairs: domain.into_iter().map(|e| (e.clone(), e.clone())).collect(),
        }
    }

    pub fn apply(&self, e: &GroundTerm) -> Option<&GroundTerm> {
        self.pairs.get(e)
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&GroundTerm, &GroundTerm)> {
        self.pairs.iter()
    }

    pub fn inverse(&self) -> Bijection {
        Bijection {
            pairs: self.pairs.iter().map(|(a, b)| (b.clone(), a.clone())).collect(),
        }
    }

    fn map_tuple(&self, t: &[GroundTerm]) -> Option<Tuple> {
        t.iter().map(|e| self.apply(e).cloned()).collect()
    }
}

fn extensional_domain(m: &Structure) -> Result<&BTreeSet<GroundTerm>, ModelError> {
    match m.form() {
        Form::Extensional { domain } => Ok(domain),
        Form::TermGenerated { .. } => Err(ModelError::UnsupportedForm),
    }
}

/// Applies a bijection of the domain to every symbol value of `m`.
pub fn rename(m: &Structure, b: &Bijection) -> Result<Structure, ModelError> {
    let domain = extensional_domain(m)?;
    let image = |e: &GroundTerm| {
        b.apply(e).cloned().ok_or_else(|| ModelError::UnknownElement {
            element: e.to_string(),
            symbol: "bijection".into(),
        })
    };
    let mut out = Structure::extensional(domain.iter().map(image).collect::<Result<Vec<_>, _>>()?)?;
    for (p, rel) in m.predicates() {
        let tuples = rel
            .iter()
            .map(|t| t.iter().map(image).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        out.set_predicate(p.clone(), tuples)?;
    }
    for (f, value) in m.functions() {
        let value = match value {
            FunctionValue::Table { entries, default } => FunctionValue::Table {
                entries: entries
                    .iter()
                    .map(|(args, v)| {
                        Ok((args.iter().map(image).collect::<Result<Vec<_>, _>>()?, image(v)?))
                    })
                    .collect::<Result<_, ModelError>>()?,
                default: default.as_ref().map(image).transpose()?,
            },
            FunctionValue::Builtin { .. } => return Err(ModelError::UnsupportedForm),
        };
        out.set_function(f.clone(), value)?;
    }
    Ok(out)
}

/// Per-element counts used to prune candidate pairings.
type Signature = BTreeMap<(Symbol, usize), usize>;

fn signatures(
    m: &Structure,
    domain: &[GroundTerm],
    sigma: &Vocabulary,
) -> Result<BTreeMap<GroundTerm, Signature>, ModelError> {
    let mut sig: BTreeMap<GroundTerm, Signature> =
        domain.iter().map(|e| (e.clone(), Signature::new())).collect();
    for p in sigma.predicates() {
        let rel = m
            .predicate(p)
            .ok_or_else(|| ModelError::UnknownSymbol(p.to_string()))?;
        for t in rel {
            for (i, e) in t.iter().enumerate() {
                *sig.get_mut(e).unwrap().entry((p.clone(), i)).or_default() += 1;
            }
        }
    }
    for f in sigma.functions() {
        if m.function(f).is_none() {
            return Err(ModelError::UnknownSymbol(f.to_string()));
        }
        // Position `arity` counts how often the element is a value.
        for args in tuples_over(domain, f.arity) {
            let v = m.apply_function(&f.name, args)?;
            *sig.get_mut(&v).unwrap().entry((f.clone(), f.arity)).or_default() += 1;
        }
    }
    Ok(sig)
}

/// Searches for `b: dom(m) -> dom(n)` with `b(s^m) = s^n` for every `s` in
/// `sigma`. Exhaustive backtracking with signature pruning.
///
/// Both structures must be extensional and interpret `sigma`.
pub fn find_isomorphism(
    m: &Structure,
    n: &Structure,
    sigma: &Vocabulary,
) -> Result<Option<Bijection>, ModelError> {
    let dm: Vec<_> = extensional_domain(m)?.iter().cloned().collect();
    let dn: Vec<_> = extensional_domain(n)?.iter().cloned().collect();
    let sm = signatures(m, &dm, sigma)?;
    let sn = signatures(n, &dn, sigma)?;
    if dm.len() != dn.len() {
        return Ok(None);
    }
    for p in sigma.predicates() {
        if m.predicate(p).map(|r| r.len()) != n.predicate(p).map(|r| r.len()) {
            return Ok(None);
        }
    }
    let candidates: Vec<Vec<GroundTerm>> = dm
        .iter()
        .map(|e| dn.iter().filter(|x| sn[*x] == sm[e]).cloned().collect())
        .collect();
    if candidates.iter().any(Vec::is_empty) {
        return Ok(None);
    }
    let mut search = Search {
        m,
        n,
        sigma,
        order: &dm,
        candidates: &candidates,
        map: BTreeMap::new(),
        used: BTreeSet::new(),
    };
    search.extend(0)
}

struct Search<'a> {
    m: &'a Structure,
    n: &'a Structure,
    sigma: &'a Vocabulary,
    order: &'a [GroundTerm],
    candidates: &'a [Vec<GroundTerm>],
    map: BTreeMap<GroundTerm, GroundTerm>,
    used: BTreeSet<GroundTerm>,
}

impl Search<'_> {
    fn extend(&mut self, i: usize) -> Result<Option<Bijection>, ModelError> {
        if i == self.order.len() {
            let b = Bijection {
                pairs: self.map.clone(),
            };
            return Ok(self.verify(&b)?.then_some(b));
        }
        let e = &self.order[i];
        for c in &self.candidates[i] {
            if self.used.contains(c) {
                continue;
            }
            self.map.insert(e.clone(), c.clone());
            self.used.insert(c.clone());
            if self.consistent(e) {
                if let Some(b) = self.extend(i + 1)? {
                    return Ok(Some(b));
                }
            }
            self.map.remove(e);
            self.used.remove(c);
        }
        Ok(None)
    }

    /// Predicate tuples through `e` whose elements are all mapped must map
    /// into the target relation.
    fn consistent(&self, e: &GroundTerm) -> bool {
        self.sigma.predicates().all(|p| {
            let (Some(rm), Some(rn)) = (self.m.predicate(p), self.n.predicate(p)) else {
                return false;
            };
            rm.iter().filter(|t| t.contains(e)).all(|t| {
                match t.iter().map(|x| self.map.get(x).cloned()).collect::<Option<Vec<_>>>() {
                    Some(image) => rn.contains(&image),
                    None => true,
                }
            })
        })
    }

    fn verify(&self, b: &Bijection) -> Result<bool, ModelError> {
        for p in self.sigma.predicates() {
            let rn = self.n.predicate(p).unwrap();
            for t in self.m.predicate(p).unwrap() {
                if !b.map_tuple(t).is_some_and(|img| rn.contains(&img)) {
                    return Ok(false);
                }
            }
        }
        for f in self.sigma.functions() {
            for args in tuples_over(self.order, f.arity) {
                let vm = self.m.apply_function(&f.name, args.clone())?;
                let vn = self.n.apply_function(&f.name, b.map_tuple(&args).unwrap())?;
                if b.apply(&vm) != Some(&vn) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Result of checking the Herbrand axiom.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct HerbrandCheck {
    pub holds: bool,
    pub exactness: Exactness,
    /// Why the axiom fails, when it does.
    pub reason: Option<String>,
}

impl HerbrandCheck {
    fn yes(exactness: Exactness) -> Self {
        HerbrandCheck {
            holds: true,
            exactness,
            reason: None,
        }
    }

    fn no(reason: impl Into<String>) -> Self {
        HerbrandCheck {
            holds: false,
            exactness: Exactness::Exact,
            reason: Some(reason.into()),
        }
    }
}

/// The Herbrand structure of a set of constants: each constant denotes itself.
pub fn herbrand_structure_of_constants(cf: &ConstructorSet) -> Result<Structure, ModelError> {
    let mut h = Structure::extensional(cf.constants().map(|c| GroundTerm::constant(c.name.clone())))?;
    for c in cf.constants() {
        h.set_function(c.clone(), FunctionValue::constant(GroundTerm::constant(c.name.clone())))?;
    }
    Ok(h)
}

/// Whether `m` satisfies the Herbrand axiom for `cf`: its domain is (up to
/// isomorphism) the Herbrand universe of `cf` with the symbols of `cf` as
/// constructors. Only the `cf`-reduct of `m` is examined.
pub fn satisfies_herbrand_axiom(m: &Structure, cf: &ConstructorSet) -> HerbrandCheck {
    if !cf.has_constants() {
        return HerbrandCheck::no(format!("{cf} has no constants; the axiom is inconsistent"));
    }
    match m.form() {
        Form::TermGenerated {
            constructors,
            depth_bound,
        } => {
            if constructors != cf {
                return HerbrandCheck::no(format!(
                    "structure is generated by {constructors}, not {cf}"
                ));
            }
            if cf.has_functors() {
                HerbrandCheck::yes(Exactness::Truncated(format!(
                    "Herbrand universe cut at depth {depth_bound}"
                )))
            } else {
                HerbrandCheck::yes(Exactness::Exact)
            }
        }
        Form::Extensional { .. } => {
            if let Some(f) = cf.functors().next() {
                return HerbrandCheck::no(format!(
                    "{f} generates an infinite universe; no finite structure is isomorphic to it"
                ));
            }
            if let Some(c) = cf
                .constants()
                .find(|c| !m.interprets(SymbolKind::Constant, c))
            {
                return HerbrandCheck::no(format!("constant {c} is not interpreted"));
            }
            let sigma = cf.vocabulary();
            let herbrand = match herbrand_structure_of_constants(cf) {
                Ok(h) => h,
                Err(e) => return HerbrandCheck::no(e.to_string()),
            };
            match find_isomorphism(&m.reduct(&sigma), &herbrand, &sigma) {
                Ok(Some(_)) => HerbrandCheck::yes(Exactness::Exact),
                Ok(None) => HerbrandCheck::no(
                    "constants do not denote pairwise distinct elements exhausting the domain",
                ),
                Err(e) => HerbrandCheck::no(e.to_string()),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn el(name: &str) -> GroundTerm {
        GroundTerm::constant(name)
    }

    fn example_one() -> Structure {
        Structure::with_elements(&["a", "b", "c"])
            .unwrap()
            .with_predicate(
                Symbol::new("G", 2),
                [("a", "b"), ("b", "a"), ("c", "c")].map(|(x, y)| vec![el(x), el(y)]),
            )
            .unwrap()
            .with_predicate(
                Symbol::new("R", 2),
                [("a", "a"), ("b", "b"), ("c", "c"), ("a", "b"), ("b", "a")]
                    .map(|(x, y)| vec![el(x), el(y)]),
            )
            .unwrap()
    }

    fn gr() -> Vocabulary {
        [
            (SymbolKind::Predicate, Symbol::new("G", 2)),
            (SymbolKind::Predicate, Symbol::new("R", 2)),
        ]
        .into_iter()
        .collect()
    }

    #[test]
    fn reflexive_isomorphism_is_found() {
        let m = example_one();
        let b = find_isomorphism(&m, &m, &gr()).unwrap().unwrap();
        // G forces c to itself; a and b may swap, but both maps are valid.
        assert_eq!(b.apply(&el("c")), Some(&el("c")));
    }

    #[test]
    fn renamed_copy_is_isomorphic() {
        let m = example_one();
        let pi = Bijection::new([("a", "x"), ("b", "y"), ("c", "z")].map(|(p, q)| (el(p), el(q)))).unwrap();
        let n = rename(&m, &pi).unwrap();
        assert_eq!(
            n.predicate(&Symbol::new("G", 2)).unwrap(),
            &[("x", "y"), ("y", "x"), ("z", "z")]
                .map(|(p, q)| vec![el(p), el(q)])
                .into_iter()
                .collect()
        );
        let b = find_isomorphism(&m, &n, &gr()).unwrap().unwrap();
        assert_eq!(b.apply(&el("c")), Some(&el("z")));
        // Check the found map pointwise on every tuple.
        for p in gr().predicates() {
            for t in m.predicate(p).unwrap() {
                let img: Vec<_> = t.iter().map(|e| b.apply(e).unwrap().clone()).collect();
                assert!(n.predicate(p).unwrap().contains(&img));
            }
        }
    }

    #[test]
    fn unequal_cardinalities_have_no_bijection() {
        let m = Structure::with_elements(&["a", "b", "c"]).unwrap();
        let n = Structure::with_elements(&["a", "b"]).unwrap();
        assert_eq!(find_isomorphism(&m, &n, &Vocabulary::new()).unwrap(), None);
    }

    #[test]
    fn term_generated_structures_are_rejected() {
        let cf: ConstructorSet = [Symbol::new("a", 0)].into_iter().collect();
        let t = Structure::term_generated(cf, 0).unwrap();
        assert_eq!(
            find_isomorphism(&t, &t, &Vocabulary::new()).unwrap_err(),
            ModelError::UnsupportedForm
        );
    }

    #[test]
    fn different_relations_are_not_isomorphic() {
        let m = example_one();
        let n = m
            .clone()
            .with_predicate(Symbol::new("R", 2), [vec![el("a"), el("a")]])
            .unwrap();
        assert_eq!(find_isomorphism(&m, &n, &gr()).unwrap(), None);
    }

    fn family_cf() -> ConstructorSet {
        ["tessa", "jonah", "david"].map(|c| Symbol::new(c, 0)).into_iter().collect()
    }

    #[test]
    fn herbrand_structure_of_constants_satisfies_axiom() {
        let h = herbrand_structure_of_constants(&family_cf())
            .unwrap()
            .with_predicate(Symbol::new("child_of", 2), [vec![el("tessa"), el("david")]])
            .unwrap();
        assert!(satisfies_herbrand_axiom(&h, &family_cf()).holds);
    }

    #[test]
    fn collapsed_structure_fails_axiom() {
        let mut m = Structure::with_elements(&["a"]).unwrap();
        for c in family_cf().iter() {
            m.set_function(c.clone(), FunctionValue::constant(el("a"))).unwrap();
        }
        let check = satisfies_herbrand_axiom(&m, &family_cf());
        assert!(!check.holds);
    }

    #[test]
    fn term_generated_structure_over_cf_satisfies_axiom() {
        let mut cf: ConstructorSet = [Symbol::new("nil", 0), Symbol::new("cons", 2)].into_iter().collect();
        for n in 0..10 {
            cf.insert(Symbol::new(n.to_string(), 0));
        }
        let m = Structure::term_generated(cf.clone(), 2)
            .unwrap()
            .with_function(
                Symbol::new("times", 2),
                FunctionValue::Builtin {
                    op: crate::structure::BuiltinOp::Product,
                    default: GroundTerm::nil(),
                },
            )
            .unwrap();
        let check = satisfies_herbrand_axiom(&m, &cf);
        assert!(check.holds);
        assert!(!check.exactness.is_exact());
        let cons_only: ConstructorSet = [Symbol::new("cons", 2)].into_iter().collect();
        assert!(!satisfies_herbrand_axiom(&m, &cons_only).holds);
    }

    fn random_structure(size: usize, bits: &[bool]) -> Structure {
        let names: Vec<String> = (0..size).map(|i| format!("e{i}")).collect();
        let elems: Vec<_> = names.iter().map(|n| el(n)).collect();
        let binary: Vec<_> = tuples_over(&elems, 2)
            .zip(bits.iter().cycle())
            .filter(|(_, b)| **b)
            .map(|(t, _)| t)
            .collect();
        let unary: Vec<_> = elems
            .iter()
            .zip(bits.iter().rev().cycle())
            .filter(|(_, b)| **b)
            .map(|(e, _)| vec![e.clone()])
            .collect();
        Structure::with_elements(&names)
            .unwrap()
            .with_predicate(Symbol::new("q", 2), binary)
            .unwrap()
            .with_predicate(Symbol::new("p", 1), unary)
            .unwrap()
    }

    fn pq() -> Vocabulary {
        [
            (SymbolKind::Predicate, Symbol::new("p", 1)),
            (SymbolKind::Predicate, Symbol::new("q", 2)),
        ]
        .into_iter()
        .collect()
    }

    proptest! {
        #[test]
        fn permuted_structures_are_isomorphic(size in 1usize..5, bits in proptest::collection::vec(any::<bool>(), 16), perm_seed in any::<u64>()) {
            let m = random_structure(size, &bits);
            let domain: Vec<_> = m.domain().iter().cloned().collect();
            let mut shuffled = domain.clone();
            let mut s = perm_seed;
            for i in (1..shuffled.len()).rev() {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                shuffled.swap(i, (s >> 33) as usize % (i + 1));
            }
            let renamed: Vec<_> = shuffled.iter().map(|e| GroundTerm::constant(format!("r{}", e.functor()))).collect();
            let pi = Bijection::new(domain.into_iter().zip(renamed)).unwrap();
            let n = rename(&m, &pi).unwrap();
            let forward = find_isomorphism(&m, &n, &pq()).unwrap();
            prop_assert!(forward.is_some());
            let backward = find_isomorphism(&n, &m, &pq()).unwrap();
            prop_assert!(backward.is_some());
        }

        #[test]
        fn isomorphism_search_is_symmetric(size in 1usize..4, a in proptest::collection::vec(any::<bool>(), 16), b in proptest::collection::vec(any::<bool>(), 16)) {
            let m = random_structure(size, &a);
            let n = random_structure(size, &b);
            let mn = find_isomorphism(&m, &n, &pq()).unwrap();
            let nm = find_isomorphism(&n, &m, &pq()).unwrap();
            prop_assert_eq!(mn.is_some(), nm.is_some());
        }

        #[test]
        fn herbrand_axiom_is_isomorphism_invariant(targets in proptest::collection::vec(0usize..3, 3)) {
            let cf = family_cf();
            let elems = [el("e0"), el("e1"), el("e2")];
            let mut m = Structure::extensional(elems.clone()).unwrap();
            for (c, t) in cf.iter().zip(&targets) {
                m.set_function(c.clone(), FunctionValue::constant(elems[*t].clone())).unwrap();
            }
            let pi = Bijection::new([
                (el("e0"), el("x")), (el("e1"), el("y")), (el("e2"), el("z")),
            ]).unwrap();
            let n = rename(&m, &pi).unwrap();
            prop_assert_eq!(satisfies_herbrand_axiom(&m, &cf).holds, satisfies_herbrand_axiom(&n, &cf).holds);
            let mut distinct = targets.clone();
            distinct.sort();
            distinct.dedup();
            prop_assert_eq!(satisfies_herbrand_axiom(&m, &cf).holds, distinct.len() == 3);
        }
    }
}
