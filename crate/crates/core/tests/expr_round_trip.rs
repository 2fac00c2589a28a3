use hermite_io2::expr::{parse_element, parse_operator, ExprError};
use hermite_io2::sample::{random_element, seeded};
use hermite_io2::uea::Basis;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn printed_elements_parse_back(seed in any::<u64>(), ladder in any::<bool>()) {
        let basis = if ladder { Basis::Ladder } else { Basis::Differential };
        let a = random_element(&mut seeded(seed), basis, 5, 5);
        let text = a.to_string();
        let back = parse_operator(&text).unwrap().lower_in(basis).unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn ast_display_reparses_to_the_same_element(seed in any::<u64>()) {
        let a = random_element(&mut seeded(seed), Basis::Differential, 3, 3);
        let ast = parse_operator(&a.to_string()).unwrap();
        let again = parse_operator(&ast.to_string()).unwrap();
        prop_assert_eq!(again.lower().unwrap(), a);
    }

    #[test]
    fn parser_never_panics(text in "[XDPNIa()+*/^0-9 -]{0,24}") {
        let _ = parse_element(&text);
    }
}

#[test]
fn whitespace_is_insignificant() {
    assert_eq!(
        parse_element(" X ^ 2-2 *N- I ").unwrap(),
        parse_element("X^2 - 2*N - I").unwrap()
    );
}

#[test]
fn empty_input_is_a_syntax_error() {
    assert!(matches!(parse_element(""), Err(ExprError::Syntax { pos: 0, .. })));
}
