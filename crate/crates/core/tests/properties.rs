use std::collections::HashMap;

use proptest::prelude::*;

use ssnm_core::algebra::{dot_action, tachibana};
use ssnm_core::classify::compatibility_check;
use ssnm_core::curvature::{Curvature, CurvatureBundle};
use ssnm_core::expr::{parse, AnySymbol, Expr, FunctionRegistry, Var};
use ssnm_core::geometry::parse_manifest;
use ssnm_core::tensor::multi_indices;

fn leaf() -> impl Strategy<Value = Expr> {
    prop_oneof![
        (-6i64..=6).prop_map(Expr::int),
        (-5i64..=5, 1i64..=4).prop_map(|(p, q)| Expr::rational(p, q)),
        Just(Expr::sym("x")),
        Just(Expr::sym("y")),
        Just(Expr::func("sin", Expr::sym("x"))),
        Just(Expr::func("cos", Expr::sym("y"))),
    ]
}

/// Expressions without poles on the real line.
fn expr() -> impl Strategy<Value = Expr> {
    leaf().prop_recursive(3, 16, 3, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 2..4).prop_map(Expr::add),
            prop::collection::vec(inner.clone(), 2..3).prop_map(Expr::mul),
            (inner.clone(), 0i64..=2).prop_map(|(b, k)| Expr::pow(b, k)),
            (inner.clone(), inner).prop_map(|(n, d)| {
                Expr::div(n, Expr::add(vec![Expr::int(2), Expr::pow(d, 2)]))
            }),
        ]
    })
}

fn point() -> impl Strategy<Value = HashMap<String, f64>> {
    (-2.0f64..2.0, -2.0f64..2.0)
        .prop_map(|(x, y)| HashMap::from([("x".to_string(), x), ("y".to_string(), y)]))
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn canonical_form_preserves_value(e in expr(), at in point()) {
        let c = e.canonicalize().unwrap().to_expr();
        prop_assert!(close(e.eval(&at).unwrap(), c.eval(&at).unwrap(), 1e-9));
    }

    #[test]
    fn canonicalization_is_idempotent(e in expr()) {
        let once = e.canonicalize().unwrap();
        prop_assert_eq!(once.to_expr().canonicalize().unwrap(), once);
    }

    #[test]
    fn printing_round_trips(e in expr()) {
        let c = e.canonicalize().unwrap();
        let back = parse(&c.to_string(), &AnySymbol).unwrap().canonicalize().unwrap();
        prop_assert_eq!(back, c);
    }

    #[test]
    fn difference_with_itself_is_zero(e in expr()) {
        let trig = Expr::add(vec![
            Expr::pow(Expr::func("sin", Expr::sym("x")), 2),
            Expr::pow(Expr::func("cos", Expr::sym("x")), 2),
        ]);
        let disguised = Expr::mul(vec![e.clone(), trig]);
        prop_assert!(Expr::sub(e, disguised).is_zero().unwrap());
    }

    #[test]
    fn zero_test_agrees_with_evaluation(e in expr(), at in point()) {
        if e.is_zero().unwrap() {
            prop_assert!(e.eval(&at).unwrap().abs() < 1e-9);
        }
    }

    #[test]
    fn derivative_is_linear(a in expr(), b in expr(), k in -4i64..=4) {
        let reg = FunctionRegistry::standard();
        let lhs = Expr::add(vec![a.clone(), Expr::mul(vec![Expr::int(k), b.clone()])]).diff("x", &reg).unwrap();
        let rhs = Expr::add(vec![a.diff("x", &reg).unwrap(), Expr::mul(vec![Expr::int(k), b.diff("x", &reg).unwrap()])]);
        prop_assert!(Expr::sub(lhs, rhs).is_zero().unwrap());
    }

    #[test]
    fn derivative_matches_finite_difference(e in expr(), at in point()) {
        let reg = FunctionRegistry::standard();
        let d = e.diff("x", &reg).unwrap();
        let h = 1e-5;
        let shifted = |dx: f64| {
            let mut p = at.clone();
            *p.get_mut("x").unwrap() += dx;
            e.eval(&p).unwrap()
        };
        let numeric = (shifted(h) - shifted(-h)) / (2.0 * h);
        let exact = d.eval(&at).unwrap();
        prop_assert!(close(numeric, exact, 1e-5), "{} vs {}", numeric, exact);
    }

    #[test]
    fn exact_and_symbolic_derivatives_agree(e in expr()) {
        let reg = FunctionRegistry::standard();
        let sym = e.diff("x", &reg).unwrap().canonicalize().unwrap();
        prop_assert_eq!(e.canonicalize().unwrap().diff(Var::symbol("x")), sym);
    }
}

fn warped(k: [i64; 3], ssnm: Option<[i64; 3]>) -> CurvatureBundle {
    let mut src = format!(
        "dim = 3\ncoords = x, y, z\ng[1][1] = {}\ng[2][2] = {} + x^2\ng[3][3] = ({} + x^2) * ({} + y^2)\n",
        k[0], k[1], k[2], k[1]
    );
    match ssnm {
        Some(p) => src.push_str(&format!(
            "connection = ssnm\nP = {}, {}, {}\n",
            p[0], p[1], p[2]
        )),
        None => src.push_str("connection = levi-civita\n"),
    }
    CurvatureBundle::new(parse_manifest(&src).unwrap().build().unwrap())
}

fn signature() -> impl Strategy<Value = [i64; 3]> {
    (prop_oneof![Just(-1i64), Just(1), Just(2)], 1i64..4, 1i64..4).prop_map(|(a, b, c)| [a, b, c])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn levi_civita_identities(k in signature()) {
        let b = warped(k, None);
        let r = b.riemann();
        for i in multi_indices(3, 4) {
            let (h, kk, p, q) = (i[0], i[1], i[2], i[3]);
            prop_assert!((r.get(&i) + r.get(&[kk, h, p, q])).is_zero());
            prop_assert!((r.get(&i) - r.get(&[p, q, h, kk])).is_zero());
            let bianchi = &(r.get(&i) + r.get(&[h, p, q, kk])) + r.get(&[h, q, kk, p]);
            prop_assert!(bianchi.is_zero());
        }
        prop_assert!(b.ricci_symmetric());
        prop_assert!(dot_action(r, b.g(), b.metric()).unwrap().is_zero());
        for which in Curvature::ALL {
            let t = b.tensor(which).unwrap();
            if t.rank() == 4 && which != Curvature::Projective {
                prop_assert!(compatibility_check(&b, b.g(), &t).unwrap().holds());
            }
        }
    }

    #[test]
    fn ssnm_with_closed_form_keeps_pair_antisymmetry(k in signature(), p in prop::array::uniform3(-2i64..=2)) {
        let b = warped(k, Some(p));
        for which in [Curvature::Riemann, Curvature::Weyl, Curvature::Conharmonic, Curvature::Concircular] {
            let t = b.tensor(which).unwrap();
            for i in multi_indices(3, 4) {
                prop_assert!((t.get(&i) + t.get(&[i[0], i[1], i[3], i[2]])).is_zero());
            }
        }
        prop_assert!(tachibana(b.g(), b.g()).unwrap().is_zero());
    }
}
