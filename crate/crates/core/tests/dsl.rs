use proptest::prelude::*;
use superbracket::dsl::{parse, print, ParseError};
use superbracket::poly::VarKind;
use superbracket::random::Sampler;

const HEADER: &str = "manifold { even x, even y, odd th }\n";

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn printed_polynomials_parse_back(seed in any::<u64>()) {
        let session = parse(HEADER).unwrap();
        let m = session.manifold().clone();
        let vars: Vec<_> = [VarKind::Base, VarKind::AntitangentFiber, VarKind::AnticotangentFiber]
            .into_iter()
            .flat_map(|k| m.vars(k))
            .collect();
        let mut s = Sampler::new(m.clone(), seed);
        let parity = s.parity();
        let p = s.polynomial(&vars, parity, 4);
        let text = print(&m, &p);
        prop_assert_eq!(session.parse_expr(&text).unwrap(), p.clone());
        let file = format!("{HEADER}let Q = {text}\n");
        let reparsed = parse(&file).unwrap();
        prop_assert_eq!(reparsed.get("Q").unwrap(), &p);
    }
}

#[test]
fn fixture_sources_parse() {
    let src = "# plane\nmanifold { even x, even y }\nlet P = s(x)*s(y)\n";
    let session = parse(src).unwrap();
    let m = session.manifold().clone();
    assert_eq!(print(&m, session.structure().unwrap()), "s(x)*s(y)");
}

#[test]
fn undeclared_identifier_is_reported() {
    let err = parse("manifold { even x }\nlet P = s(z)").unwrap_err();
    assert!(matches!(err, ParseError::UndeclaredIdentifier { .. } ), "{err:?}");
}
