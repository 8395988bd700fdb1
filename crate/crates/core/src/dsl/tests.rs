use super::*;
use crate::bf::build_bf;

const BF2: &str = include_str!("../../models/bf2.kt");
const BF3: &str = include_str!("../../models/bf3.kt");

fn message(src: &str) -> String {
    load_model(src).unwrap_err().message
}

#[test]
fn empty_file() {
    assert!(message("").contains("missing base_dim"));
    assert!(message("# only a comment\n").contains("missing base_dim"));
}

#[test]
fn index_out_of_range() {
    let e = load_model("base_dim 2\nfield y even\nlagrangian = d(3, y)^2").unwrap_err();
    assert!(e.message.contains("index out of range"), "{e}");
    assert_eq!((e.line, e.col), (3, 16));
}

#[test]
fn diagnostics() {
    assert!(message("base_dim 2\nlagrangian = z").contains("undeclared identifier"));
    assert!(message("base_dim 2\nfield B even antisym(1)\nlagrangian = B^2").contains("arity mismatch"));
    assert!(message("base_dim 2\nlagrangian = eps(1)").contains("arity mismatch"));
    assert!(message("base_dim 1\nfield y even\nlagrangian = y*y_bar").contains("not allowed in the lagrangian"));
    assert!(message("base_dim 1\nfield y odd\nlagrangian = y").contains("parity mismatch"));
    assert!(message("base_dim 1\nfield y even\nfield y odd").contains("declared twice"));
    assert!(message("base_dim 1\nfield y even\nstage 1 c = y_bar").contains("declared before stage 0"));
    assert!(message("base_dim 1\nfield y even\nstage 0 c = y_bar\nstage 2 e = c").contains("declared before stage 1"));
    assert!(message("base_dim 1\nfield y even\nstage 0 c = y_bar + y").contains("parity mismatch"));
    assert!(message("base_dim 1\nlagrangian = 1/0").contains("zero denominator"));
    assert!(message("base_dim 0").contains("between 1 and 9"));
    assert!(message("base_dim 1\nfield d even").contains("reserved"));
}

#[test]
fn positions_point_at_the_offending_token() {
    let e = load_model("base_dim 1\nfield y even\nlagrangian = y + w").unwrap_err();
    assert_eq!((e.line, e.col), (3, 18));
    assert_eq!(e.to_string(), "3:18: undeclared identifier `w`");
}

#[test]
fn round_trip() {
    for src in [BF2, BF3, "base_dim 2\ncoords t x\nfield y odd plain(2)\nlagrangian = -(1/2 - x)*y[1, 2]_(t)*y[2, 1]^1\n"] {
        let a = parse_model(src).unwrap();
        let text = a.canonical_text();
        let b = parse_model(&text).unwrap();
        assert_eq!(a, b);
        assert_eq!(text, b.canonical_text());
    }
}

#[test]
fn precedence_survives_printing() {
    let m = parse_model("base_dim 1\nfield y even\nlagrangian = -(y - y)^2*(y + 1) - (y - 1)").unwrap();
    let text = m.canonical_text();
    assert!(text.contains("-(y - y)^2*(y + 1) - (y - 1)"), "{text}");
}

#[test]
fn jets_accept_coordinate_names() {
    let a = load_model("base_dim 1\ncoords t\nfield y even\nlagrangian = y_(t, t)").unwrap();
    let b = load_model("base_dim 1\ncoords t\nfield y even\nlagrangian = y_(1, 1)").unwrap();
    assert_eq!(a.lagrangian, b.lagrangian);
}

#[test]
fn bf_models_match_the_builtin_construction() {
    for (n, src) in [(2, BF2), (3, BF3)] {
        let model = load_model(src).unwrap();
        let kt = model.complex().unwrap();
        let built = build_bf(n).unwrap();
        assert_eq!(kt.lagrangian(), built.complex.lagrangian());
        assert_eq!(kt.stage_count(), built.complex.stage_count());
        let sig = kt.signature();
        for k in 0..kt.stage_count() {
            let a = &kt.stages()[k];
            let b = &built.complex.stages()[k];
            assert_eq!(a.operators.len(), b.operators.len());
            for (x, y) in a.operators.iter().zip(&b.operators) {
                assert_eq!(x.expression.to_text(sig), y.expression.to_text(built.complex.signature()));
            }
        }
    }
}

#[test]
fn broken_stage_is_rejected() {
    let model = load_model(include_str!("../../models/bf3_broken.kt")).unwrap();
    assert!(model.complex().is_err());
    assert!(model.complex_unchecked().unwrap().check_nilpotency().failures().count() > 0);
}
