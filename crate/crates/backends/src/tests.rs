use super::*;
use crate::names::{ident, suffixed, Case};

#[test]
fn normalize_keeps_only_separating_spaces() {
    assert_eq!(normalize_ws("let  f x =\n   g (x ,  y)"), "let f x=g(x,y)");
    assert_eq!(normalize_ws("a'  b"), "a' b");
}

#[test]
fn listing_blocks_split_at_blank_lines() {
    let text = "type a = A\n\nlet f x =\n  x\nlet g = f\n-- note\nlet h = g\n";
    let b = listing_blocks(text);
    assert_eq!(b.len(), 3);
    assert_eq!(b[1], "let f x =\n  x\nlet g = f\n");
    assert!(missing_blocks(text, "type a = A let f x = x let g = f\n\nlet h = g").is_empty());
    assert_eq!(missing_blocks(text, "type a = A").len(), 2);
}

#[test]
fn identifiers_follow_target_rules() {
    assert_eq!(ident("type", Case::Lower, Target::Ml), "type_");
    assert_eq!(ident("nat", Case::Upper, Target::Elm), "Nat");
    assert_eq!(ident("x'", Case::Keep, Target::Rust), "x_");
    assert_eq!(suffixed("m", |s| s == "m" || s == "m2"), "m3");
}

#[test]
fn target_names_parse() {
    assert_eq!("cameligo".parse::<Target>(), Ok(Target::Ml));
    assert_eq!("Elm".parse::<Target>(), Ok(Target::Elm));
    assert!("coq".parse::<Target>().is_err());
}
