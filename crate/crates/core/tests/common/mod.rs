#![allow(dead_code)]

use std::path::PathBuf;

use defcheck::parse::{parse_ground_atom, parse_program, parse_structure};
use defcheck::{GroundAtom, Program, Structure};

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

pub fn program(name: &str) -> Program {
    let path = fixture(name);
    let text = std::fs::read_to_string(&path).unwrap();
    parse_program(&text, Some(name)).unwrap()
}

pub fn structure(name: &str) -> Structure {
    let text = std::fs::read_to_string(fixture(name)).unwrap();
    parse_structure(&text, Some(name)).unwrap()
}

pub fn atom(text: &str) -> GroundAtom {
    parse_ground_atom(text).unwrap()
}
