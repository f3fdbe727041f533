use std::fmt::Write;

use crate::definition::Program;
use crate::structure::{Form, FunctionValue, Structure};
use crate::term::{display_name, GroundTerm};
use crate::vocab::{ConstructorSet, Symbol};

/// Renders a program in the `.lpd` syntax. Parsing the output gives back
/// the same program.
pub fn print_program(p: &Program) -> String {
    let mut out = String::new();
    writeln!(out, "#universe constructors: {}.", constructor_list(&p.constructors)).unwrap();
    let module_of = |i: usize| p.modules.iter().find(|m| m.rules.contains(&i)).map(|m| m.name.as_str());
    let rules = p.definition.rules();
    let mut i = 0;
    while i < rules.len() {
        match module_of(i) {
            None => {
                writeln!(out, "{}", rules[i]).unwrap();
                i += 1;
            }
            Some(name) => {
                writeln!(out, "#module {} {{", display_name(name)).unwrap();
                while i < rules.len() && module_of(i) == Some(name) {
                    writeln!(out, "    {}", rules[i]).unwrap();
                    i += 1;
                }
                out.push_str("}\n");
            }
        }
    }
    out
}

/// Renders a structure in the `.fos` syntax.
pub fn print_structure(m: &Structure) -> String {
    let mut out = String::new();
    match m.form() {
        Form::Extensional { domain } => {
            writeln!(out, "domain: {}.", join(domain.iter())).unwrap();
        }
        Form::TermGenerated {
            constructors,
            depth_bound,
        } => {
            writeln!(
                out,
                "universe: constructors {} depth {depth_bound}.",
                constructor_list(constructors)
            )
            .unwrap();
        }
    }
    for (symbol, rel) in m.predicates() {
        let tuples: Vec<String> = rel.iter().map(|t| tuple(t)).collect();
        if tuples.is_empty() {
            writeln!(out, "pred {} = {{}}.", signature(symbol)).unwrap();
        } else {
            writeln!(out, "pred {} = {{ {} }}.", signature(symbol), tuples.join(", ")).unwrap();
        }
    }
    for (symbol, value) in m.functions() {
        match value {
            FunctionValue::Table { entries, default: None } if symbol.arity == 0 && entries.len() == 1 => {
                let v = entries.values().next().unwrap();
                writeln!(out, "const {} = {v}.", display_name(&symbol.name)).unwrap();
            }
            FunctionValue::Table { entries, default } => {
                let body: Vec<String> = entries.iter().map(|(k, v)| format!("{} -> {v}", tuple(k))).collect();
                write!(out, "func {} = {{", signature(symbol)).unwrap();
                if !body.is_empty() {
                    write!(out, " {} ", body.join(", ")).unwrap();
                }
                out.push('}');
                if let Some(d) = default {
                    write!(out, " default {d}").unwrap();
                }
                out.push_str(".\n");
            }
            FunctionValue::Builtin { op, default } => {
                writeln!(out, "func {} = builtin {} default {default}.", signature(symbol), op.name()).unwrap();
            }
        }
    }
    out
}

fn signature(s: &Symbol) -> String {
    format!("{}/{}", display_name(&s.name), s.arity)
}

fn constructor_list(cf: &ConstructorSet) -> String {
    cf.iter().map(signature).collect::<Vec<_>>().join(", ")
}

fn tuple(t: &[GroundTerm]) -> String {
    format!("({})", join(t.iter()))
}

fn join<'a>(items: impl Iterator<Item = &'a GroundTerm>) -> String {
    items.map(|t| t.to_string()).collect::<Vec<_>>().join(", ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_program, parse_structure};
    use proptest::prelude::*;

    #[test]
    fn program_round_trip() {
        let src = "#module m { member(X, [X|_]). member(X, [_|T]) :- member(X, T). }\n\
                   compress([], []).\n\
                   #module m { 'R'(X) :- not member(X, [a]), X \\= b. }\n";
        let p = parse_program(src, None).unwrap();
        let printed = print_program(&p);
        let q = parse_program(&printed, None).unwrap();
        assert_eq!(p, q);
        assert_eq!(print_program(&q), printed);
    }

    #[test]
    fn structure_round_trip() {
        let src = "domain: a, b, 'C'.\npred G/2 = { (a,b), (b,a) }.\npred e/0 = {}.\n\
                   func f/1 = { (a) -> b } default a.\nconst c = b.";
        let m = parse_structure(src, None).unwrap();
        assert_eq!(parse_structure(&print_structure(&m), None).unwrap(), m);
        let t = parse_structure(
            "universe: constructors [] / 0, '|'/2, 0..4 depth 3.\nfunc times/2 = builtin product default [].",
            None,
        )
        .unwrap();
        assert_eq!(parse_structure(&print_structure(&t), None).unwrap(), t);
    }

    fn arb_term(vars: bool) -> impl Strategy<Value = String> {
        let leaf = if vars {
            prop_oneof![Just("X".to_string()), Just("Y".to_string()), Just("a".to_string()), Just("3".to_string())].boxed()
        } else {
            prop_oneof![Just("a".to_string()), Just("3".to_string())].boxed()
        };
        leaf.prop_recursive(3, 12, 3, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("f({a}, {b})")),
                prop::collection::vec(inner.clone(), 0..3).prop_map(|v| format!("[{}]", v.join(", "))),
                (inner.clone(), inner).prop_map(|(h, t)| format!("[{h}|{t}]")),
            ]
        })
    }

    fn arb_literal() -> impl Strategy<Value = String> {
        prop_oneof![
            arb_term(true).prop_map(|t| format!("q({t})")),
            arb_term(true).prop_map(|t| format!("not r({t})")),
            (arb_term(true), arb_term(true)).prop_map(|(s, t)| format!("{s} = {t}")),
            (arb_term(true), arb_term(true)).prop_map(|(s, t)| format!("{s} != {t}")),
            Just("true".to_string()),
        ]
    }

    fn arb_rule() -> impl Strategy<Value = String> {
        (arb_term(true), prop::collection::vec(arb_literal(), 0..3)).prop_map(|(h, body)| {
            if body.is_empty() {
                format!("p({h}).")
            } else {
                format!("p({h}) :- {}.", body.join(", "))
            }
        })
    }

    proptest! {
        #[test]
        fn print_parse_is_identity(rules in prop::collection::vec(arb_rule(), 1..5)) {
            let p = parse_program(&rules.join("\n"), None).unwrap();
            let printed = print_program(&p);
            prop_assert_eq!(&parse_program(&printed, None).unwrap(), &p);
        }

        #[test]
        fn structure_print_parse(tuples in prop::collection::btree_set((arb_term(false), arb_term(false)), 0..6)) {
            let mut m = Structure::extensional(
                tuples.iter().flat_map(|(a, b)| [a, b]).map(|s| crate::parse::parse_term(s).unwrap().to_ground().unwrap())
                    .chain([GroundTerm::constant("a")]),
            ).unwrap();
            let rel = tuples.iter().map(|(a, b)| {
                vec![crate::parse::parse_term(a).unwrap().to_ground().unwrap(), crate::parse::parse_term(b).unwrap().to_ground().unwrap()]
            });
            m.set_predicate(Symbol::new("p", 2), rel).unwrap();
            prop_assert_eq!(parse_structure(&print_structure(&m), None).unwrap(), m);
        }
    }
}
