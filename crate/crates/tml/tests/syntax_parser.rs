mod common;

use common::{raw_term, scoped, th1};
use proptest::prelude::*;
use tml::parser::{parse_term, parse_term_in, parse_theory, print_term, print_term_in};
use tml::syntax::{shift, substitute};

proptest! {
    #[test]
    fn weaken_then_substitute_is_identity(t in raw_term(), s in raw_term()) {
        prop_assert_eq!(substitute(&shift(&t, 1, 0), 0, &s), t);
    }

    #[test]
    fn shifts_compose(t in raw_term(), a in 0usize..4, b in 0usize..4, c in 0usize..4) {
        prop_assert_eq!(shift(&shift(&t, a, c), b, c), shift(&t, a + b, c));
    }

    #[test]
    fn closed_terms_round_trip(t in raw_term()) {
        let t = scoped(&t, 0);
        prop_assert_eq!(parse_term(&print_term(&t), &th1()), Ok(t));
    }

    #[test]
    fn open_terms_round_trip(t in raw_term(), free in 1usize..4) {
        let t = scoped(&t, free);
        let names: Vec<String> = (0..free).map(|i| format!("x{i}")).collect();
        let names: Vec<&str> = names.iter().map(String::as_str).collect();
        let back = parse_term_in(&print_term_in(&t, free), &th1(), &names, "<t>");
        prop_assert_eq!(back, Ok(t));
    }

    #[test]
    fn parsing_is_total_on_bytes(bytes in prop::collection::vec(any::<u8>(), 0..200)) {
        let text = String::from_utf8_lossy(&bytes);
        let lines = text.lines().count().max(1);
        if let Err(e) = parse_term(&text, &th1()) {
            prop_assert!(e.span().line >= 1 && e.span().line <= lines + 1);
            prop_assert!(e.span().column >= 1);
        }
        if let Err(e) = parse_theory(&text) {
            prop_assert!(e.span().line >= 1 && e.span().column >= 1);
        }
    }

    #[test]
    fn parsing_is_total_on_token_soup(words in prop::collection::vec(
        prop::sample::select(vec!["(", ")", "lam", "Pi", "J", "rec", "'a", "'f", "x", "G", "Nat", "z", "s", "theory", "vertex", "edge", ":", "->", "\n", ";"]),
        0..60,
    )) {
        let text = words.join(" ");
        if let Err(e) = parse_term(&text, &th1()) {
            prop_assert!(e.span().line >= 1 && e.span().column >= 1);
        }
        if let Err(e) = parse_theory(&text) {
            prop_assert!(e.span().line >= 1 && e.span().column >= 1);
        }
    }
}

#[test]
fn deep_nesting_is_a_diagnostic() {
    let text = format!("{}z{}", "(s ".repeat(5000), ")".repeat(5000));
    assert!(parse_term(&text, &th1()).is_err());
}
