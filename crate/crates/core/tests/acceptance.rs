//! Acceptance run: one PASS/FAIL line per criterion, details indented below
//! any failure. Exits nonzero when a criterion fails.

use std::collections::HashMap;
use std::process::ExitCode;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ssnm_core::algebra::{dot_action, tachibana};
use ssnm_core::catalog::Catalog;
use ssnm_core::classify::report::{structure_report, Claims};
use ssnm_core::classify::{
    compatibility_check, quasi_einstein_rank, recurrent_two_forms, roter_solve,
    solve_recurrence_form, RecurrenceOutcome,
};
use ssnm_core::curvature::{Curvature, CurvatureBundle};
use ssnm_core::expr::{parse, AnySymbol, Expr, FunctionRegistry, RatFunc};
use ssnm_core::fixtures::{self, ValidationReport};
use ssnm_core::geometry::{non_metricity, parse_manifest, Chart, Geometry, MetricSpec};
use ssnm_core::presets;
use ssnm_core::tensor::{format_index, multi_indices, TensorField};

struct Criterion {
    ok: bool,
    notes: Vec<String>,
}

impl Criterion {
    fn new() -> Criterion {
        Criterion {
            ok: true,
            notes: Vec::new(),
        }
    }

    fn check(&mut self, cond: bool, what: impl Into<String>) {
        if !cond {
            self.ok = false;
            self.notes.push(what.into());
        }
    }
}

fn wormhole() -> Catalog {
    Catalog::new(CurvatureBundle::new(
        presets::geometry("morris-thorne").unwrap(),
    ))
}

fn bundle_from(src: &str) -> CurvatureBundle {
    CurvatureBundle::new(parse_manifest(src).unwrap().build().unwrap())
}

/// SSNM connection on flat space whose one-form `x dy` is not closed.
const TWISTED: &str = "dim = 3\ncoords = x, y, z\ng[1][1] = 1\ng[2][2] = 1\ng[3][3] = 1\nconnection = ssnm\nP = 0, x, 0\n";

fn groups(report: &ValidationReport, ids: &[&str], c: &mut Criterion) {
    for g in report.groups.iter().filter(|g| ids.contains(&g.id)) {
        c.check(g.passed(), format!("group {} failed", g.id));
        for m in &g.mismatches {
            c.notes.push(format!("  {m}"));
        }
    }
}

fn criterion_fixtures(report: &ValidationReport, ids: &[&str]) -> Criterion {
    let mut c = Criterion::new();
    groups(report, ids, &mut c);
    c
}

fn chart_scalar(cat: &Catalog, s: &str) -> RatFunc {
    cat.bundle().metric().chart().scalar(s).unwrap()
}

fn criterion6(cat: &Catalog) -> Criterion {
    let mut c = Criterion::new();
    let b = cat.bundle();
    let chart = b.metric().chart();
    let claims = Claims::morris_thorne(chart).unwrap();
    let report = structure_report(cat, 0, Some(&claims)).unwrap();
    for item in &report.items {
        let claim = item.claim.as_ref().unwrap();
        c.check(
            claim.matched,
            format!("({}) {}: claimed {}", item.id, item.title, claim.statement),
        );
    }
    c.check(
        report.items.len() == 12,
        format!("{} scoreboard items", report.items.len()),
    );

    // II through the rank operation directly
    let alpha = chart_scalar(cat, "2*b^2/(b^2+X2^2)^2");
    let r0 = quasi_einstein_rank(b, &RatFunc::zero(), 11).unwrap();
    let r1 = quasi_einstein_rank(b, &alpha, 11).unwrap();
    c.check(
        r0.rank == 1 && r1.rank == 3,
        format!("ranks {} and {}", r0.rank, r1.rank),
    );

    // III, both modes, and the printed wedge factor
    for generalized in [false, true] {
        c.check(
            !roter_solve(b, generalized).unwrap().is_solvable(),
            format!("roter_solve(generalized = {generalized}) found a solution"),
        );
    }
    let g_ric2 = ssnm_core::algebra::kulkarni_nomizu(b.g(), b.ricci_power(2).unwrap()).unwrap();
    let printed = chart_scalar(cat, "2*b^2/(b^2+X2^2)");
    let diff = g_ric2.sub(&b.g_wedge_ric().scale(&printed));
    if let Some((idx, v)) = diff.nonzero().first() {
        c.check(
            false,
            format!(
                "g^Ric2 - (2b^2/(b^2+X2^2)) g^Ric is nonzero at [{}]: {v}",
                format_index(idx)
            ),
        );
    }

    // VII, checker and solver
    let sigma = claims.sigma.clone();
    let check = recurrent_two_forms(b, Curvature::Weyl, &sigma).unwrap();
    if let Some(w) = check.witness() {
        c.check(
            false,
            format!("recurrence fails for the claimed sigma at {w}"),
        );
    }
    match solve_recurrence_form(b, Curvature::Weyl).unwrap() {
        RecurrenceOutcome::Recurrent(s) => {
            let same = s.iter().zip(&sigma).all(|(x, y)| (x - y).is_zero());
            let shown: Vec<String> = s.iter().map(ToString::to_string).collect();
            c.check(
                same,
                format!("solve_recurrence_form recovered ({})", shown.join(", ")),
            );
        }
        RecurrenceOutcome::NotRecurrent(_) => {
            c.check(false, "solve_recurrence_form: not recurrent")
        }
    }
    c
}

fn pi_of(b: &CurvatureBundle) -> Vec<RatFunc> {
    b.connection().pi(b.metric())
}

fn criterion7() -> Criterion {
    let mut c = Criterion::new();
    let presets: Vec<(&str, CurvatureBundle)> = presets::NAMES
        .iter()
        .map(|n| (*n, CurvatureBundle::new(presets::geometry(n).unwrap())))
        .chain([("twisted-ssnm", bundle_from(TWISTED))])
        .collect();

    // P = 0 reduces to the Levi-Civita pipeline
    let zero_p = presets::MORRIS_THORNE.replace("P = 0, a, 0, 0", "P = 0, 0, 0, 0");
    let ssnm0 = CurvatureBundle::new(parse_manifest(&zero_p).unwrap().build().unwrap());
    let lc = {
        let m = parse_manifest(&zero_p).unwrap();
        CurvatureBundle::new(Geometry::levi_civita(m.build().unwrap().metric))
    };
    for which in Curvature::ALL {
        let (x, y) = (ssnm0.tensor(which).unwrap(), lc.tensor(which).unwrap());
        c.check(
            x == y,
            format!("P = 0 reduction differs for {}", which.symbol()),
        );
    }
    let n = 4;
    let same_gamma = multi_indices(n, 3).all(|i| {
        ssnm0.connection().gamma(i[0], i[1], i[2]) == lc.connection().gamma(i[0], i[1], i[2])
    });
    c.check(
        same_gamma,
        "P = 0 reduction differs for the Christoffel symbols",
    );

    for (name, b) in &presets {
        let n = b.dim();
        let pi = pi_of(b);
        let conn = b.connection();
        // torsion: T(∂i,∂j) = π_j ∂i - π_i ∂j
        for i in multi_indices(n, 3) {
            let (a, p, q) = (i[0], i[1], i[2]);
            let torsion = conn.gamma(a, p, q) - conn.gamma(a, q, p);
            let mut expected = RatFunc::zero();
            if a == p {
                expected = &expected + &pi[q];
            }
            if a == q {
                expected = &expected - &pi[p];
            }
            c.check(
                (&torsion - &expected).is_zero(),
                format!("{name}: torsion at [{}]", format_index(&i)),
            );
        }
        // non-metricity: (∇_i g)_{jk} = -π_j g_{ik} - π_k g_{ij}
        let q = non_metricity(conn, b.metric());
        for i in multi_indices(n, 3) {
            let (x, j, k) = (i[0], i[1], i[2]);
            let expected = -&(&(&pi[j] * b.metric().g(x, k)) + &(&pi[k] * b.metric().g(x, j)));
            c.check(
                (q.get(&i) - &expected).is_zero(),
                format!("{name}: non-metricity at [{}]", format_index(&i)),
            );
        }
        // last-pair antisymmetry
        for which in [
            Curvature::Riemann,
            Curvature::Weyl,
            Curvature::Conharmonic,
            Curvature::Concircular,
        ] {
            let t = b.tensor(which).unwrap();
            let bad = multi_indices(n, 4)
                .find(|i| !(t.get(i) + t.get(&[i[0], i[1], i[3], i[2]])).is_zero());
            if let Some(i) = bad {
                c.check(
                    false,
                    format!(
                        "{name}: {} not antisymmetric at [{}]",
                        which.symbol(),
                        format_index(&i)
                    ),
                );
            }
        }
        c.check(
            tachibana(b.g(), b.g()).unwrap().is_zero(),
            format!("{name}: Q(g,g) is nonzero"),
        );
        for which in [
            Curvature::Riemann,
            Curvature::Weyl,
            Curvature::Conharmonic,
            Curvature::Concircular,
            Curvature::Projective,
        ] {
            let check = compatibility_check(b, b.g(), b.tensor(which).unwrap()).unwrap();
            if let Some(w) = check.witness() {
                c.check(
                    false,
                    format!(
                        "{name}: g is not {}-compatible, witness {w}",
                        which.symbol()
                    ),
                );
            }
        }
    }

    finite_differences(&mut c);
    zero_test_consistency(&mut c);
    c
}

const DIFF_EXPRS: [&str; 20] = [
    "x^3 - 2*x*y + 5",
    "sin(x)*cos(y)",
    "x/(1 + y^2)",
    "cot(x)",
    "sin(x)^2*(x^2 + y)",
    "1/(x^2 + y^2)^2",
    "cos(x*y)",
    "sin(x + y)/(2 + cos(x))",
    "x*sin(2*x)",
    "(b^2 + x^2)*sin(y)^2",
    "2*b^2*x/(b^2 + x^2)^2",
    "cot(y)*x^2",
    "1/(3 + sin(x)) - x",
    "sin(x)^3 - cos(x)^3",
    "(x - y)^5",
    "x^2*y^3/(1 + x^4)",
    "cos(x)^2 - sin(y)",
    "-x/(b^2 + x^2)",
    "sin(x)*sin(y)*cos(x + y)",
    "a*x^2 + 2*x + a*b^2",
];

fn point(rng: &mut ChaCha8Rng) -> HashMap<String, f64> {
    ["x", "y", "a", "b"]
        .iter()
        .map(|s| (s.to_string(), rng.gen_range(0.3..2.5)))
        .collect()
}

fn finite_differences(c: &mut Criterion) {
    let reg = FunctionRegistry::standard();
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    for text in DIFF_EXPRS {
        let e = parse(text, &AnySymbol).unwrap();
        let d = e.diff("x", &reg).unwrap();
        for _ in 0..20 {
            let p = point(&mut rng);
            let x = p["x"];
            let h = 1e-5 * x.abs().max(1.0);
            let at = |v: f64| {
                let mut q = p.clone();
                q.insert("x".into(), v);
                e.eval(&q).unwrap()
            };
            let fd = (at(x + h) - at(x - h)) / (2.0 * h);
            let exact = d.eval(&p).unwrap();
            let rel = (fd - exact).abs() / exact.abs().max(1.0);
            c.check(
                rel < 1e-6,
                format!("d/dx {text} at x = {x}: exact {exact}, difference quotient {fd}"),
            );
        }
    }
}

const IDENTITIES: [(&str, &str); 8] = [
    ("sin(x)^2 + cos(x)^2", "1"),
    ("cot(x)*sin(x)", "cos(x)"),
    ("(x + y)^2", "x^2 + 2*x*y + y^2"),
    ("1/(x - 1) - 1/(x + 1)", "2/(x^2 - 1)"),
    ("cos(x)^4 - sin(x)^4", "cos(x)^2 - sin(x)^2"),
    ("2*b^2/(b^2 + x^2)^2*(b^2 + x^2)", "2*b^2/(b^2 + x^2)"),
    ("sin(y)^2*(1 - cos(y)^2)", "sin(y)^4"),
    ("x/(x*y + x)", "1/(y + 1)"),
];

const NON_IDENTITIES: [(&str, &str); 4] = [
    ("sin(x)^2", "cos(x)^2"),
    ("(x + y)^2", "x^2 + y^2"),
    ("cot(x)", "1/sin(x)"),
    ("2*b^2/(b^2 + x^2)", "2*b^2/(b^2 + x^2)^2"),
];

fn zero_test_consistency(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(100);
    let all = IDENTITIES
        .iter()
        .map(|p| (p, true))
        .chain(NON_IDENTITIES.iter().map(|p| (p, false)));
    for ((l, r), expect) in all {
        let diff = Expr::sub(parse(l, &AnySymbol).unwrap(), parse(r, &AnySymbol).unwrap());
        let symbolic = diff.is_zero().unwrap();
        c.check(
            symbolic == expect,
            format!("is_zero({l} - {r}) = {symbolic}"),
        );
        let mut numeric_zero = true;
        for _ in 0..100 {
            let p = point(&mut rng);
            let v = diff.eval(&p).unwrap();
            let scale = 1.0 + parse(l, &AnySymbol).unwrap().eval(&p).unwrap().abs();
            if v.abs() > 1e-9 * scale {
                numeric_zero = false;
            }
        }
        c.check(
            numeric_zero == symbolic,
            format!("{l} - {r}: is_zero = {symbolic} but sampling says {numeric_zero}"),
        );
    }
}

type Arr = HashMap<Vec<usize>, BigRational>;

fn q(k: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(k))
}

fn random_tensor(rng: &mut ChaCha8Rng, rank: usize) -> Arr {
    multi_indices(3, rank)
        .map(|i| (i, q(rng.gen_range(-4..=4))))
        .collect()
}

fn to_field(a: &Arr, rank: usize) -> TensorField {
    TensorField::from_fn(3, rank, "T", |i| RatFunc::from_rational(&a[i]))
}

fn inverse3(g: &[[BigRational; 3]; 3]) -> [[BigRational; 3]; 3] {
    let cof = |r: usize, s: usize| {
        let rows: Vec<usize> = (0..3).filter(|&x| x != r).collect();
        let cols: Vec<usize> = (0..3).filter(|&x| x != s).collect();
        let m = &g[rows[0]][cols[0]] * &g[rows[1]][cols[1]]
            - &g[rows[0]][cols[1]] * &g[rows[1]][cols[0]];
        if (r + s) % 2 == 0 {
            m
        } else {
            -m
        }
    };
    let det: BigRational = (0..3).map(|s| &g[0][s] * cof(0, s)).sum();
    std::array::from_fn(|i| std::array::from_fn(|j| cof(j, i) / &det))
}

/// Literal expansion of `(E·F)(Y1..Yk,U1,U2) = -Σ_m F(.., ℰ(U1,U2)Y_m, ..)`.
fn oracle_dot(e: &Arr, f: &Arr, ginv: &[[BigRational; 3]; 3], k: usize) -> Arr {
    let mut out = Arr::new();
    for idx in multi_indices(3, k + 2) {
        let (ys, us) = idx.split_at(k);
        let mut total = BigRational::zero();
        for m in 0..k {
            for alpha in 0..3 {
                let mut image = BigRational::zero();
                for d in 0..3 {
                    image += &ginv[alpha][d] * &e[&vec![us[0], us[1], ys[m], d]];
                }
                let mut slot = ys.to_vec();
                slot[m] = alpha;
                total -= image * &f[&slot];
            }
        }
        out.insert(idx, total);
    }
    out
}

/// Literal expansion of `Q(Z,F)`.
fn oracle_q(z: &Arr, f: &Arr, k: usize) -> Arr {
    let mut out = Arr::new();
    for idx in multi_indices(3, k + 2) {
        let (ys, us) = idx.split_at(k);
        let mut total = BigRational::zero();
        for m in 0..k {
            let mut a = ys.to_vec();
            a[m] = us[1];
            let mut b = ys.to_vec();
            b[m] = us[0];
            total += &z[&vec![us[0], ys[m]]] * &f[&a];
            total -= &z[&vec![us[1], ys[m]]] * &f[&b];
        }
        out.insert(idx, total);
    }
    out
}

fn agrees(t: &TensorField, oracle: &Arr) -> Option<Vec<usize>> {
    t.indices()
        .find(|i| t.get(i).as_rational().as_ref() != Some(&oracle[i]))
}

fn criterion8() -> Criterion {
    let mut c = Criterion::new();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let chart = Chart::new(&["x1", "x2", "x3"], &[]).unwrap();
    let mut done = 0;
    while done < 10 {
        let mut g: [[BigRational; 3]; 3] = std::array::from_fn(|_| std::array::from_fn(|_| q(0)));
        for i in 0..3 {
            for j in i..3 {
                let v = q(rng.gen_range(-3..=3));
                g[i][j] = v.clone();
                g[j][i] = v;
            }
        }
        let det: BigRational = {
            let m =
                |a: usize, b: usize, c: usize, d: usize| &g[a][c] * &g[b][d] - &g[a][d] * &g[b][c];
            &g[0][0] * m(1, 2, 1, 2) - &g[0][1] * m(1, 2, 0, 2) + &g[0][2] * m(1, 2, 0, 1)
        };
        if det.is_zero() {
            continue;
        }
        let ginv = inverse3(&g);
        let matrix = g
            .iter()
            .map(|row| row.iter().map(RatFunc::from_rational).collect())
            .collect();
        let metric = MetricSpec::from_matrix(chart.clone(), matrix).unwrap();
        let k = 2 + done % 3;
        let e = random_tensor(&mut rng, 4);
        let f = random_tensor(&mut rng, k);
        let z = random_tensor(&mut rng, 2);
        let dot = dot_action(&to_field(&e, 4), &to_field(&f, k), &metric).unwrap();
        if let Some(i) = agrees(&dot, &oracle_dot(&e, &f, &ginv, k)) {
            c.check(
                false,
                format!(
                    "instance {done}: dot_action differs at [{}]",
                    format_index(&i)
                ),
            );
        }
        let qt = tachibana(&to_field(&z, 2), &to_field(&f, k)).unwrap();
        if let Some(i) = agrees(&qt, &oracle_q(&z, &f, k)) {
            c.check(
                false,
                format!(
                    "instance {done}: tachibana differs at [{}]",
                    format_index(&i)
                ),
            );
        }
        done += 1;
    }
    c
}

fn main() -> ExitCode {
    let cat = wormhole();
    let report = fixtures::validate(&cat).unwrap();
    let criteria: Vec<(&str, Criterion)> = vec![
        ("Christoffel fixture", criterion_fixtures(&report, &["3.2"])),
        ("curvature fixture", criterion_fixtures(&report, &["3.3"])),
        (
            "derivative fixtures",
            criterion_fixtures(&report, &["3.4", "3.6"]),
        ),
        ("derived tensors", criterion_fixtures(&report, &["3.5"])),
        (
            "products",
            criterion_fixtures(&report, &["3.7", "3.8", "3.9"]),
        ),
        ("structure scoreboard", criterion6(&cat)),
        ("property suites", criterion7()),
        ("oracle equivalence", criterion8()),
    ];
    let mut failed = 0;
    for (k, (title, c)) in criteria.iter().enumerate() {
        println!(
            "{} criterion {}: {title}",
            if c.ok { "PASS" } else { "FAIL" },
            k + 1
        );
        for note in &c.notes {
            println!("    {note}");
        }
        failed += usize::from(!c.ok);
    }
    println!(
        "{}/{} criteria PASS",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
