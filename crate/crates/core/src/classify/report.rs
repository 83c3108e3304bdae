//! One scoreboard line per structure item, optionally checked against a set
//! of claimed values.

use std::fmt::Write as _;

use serde_json::{json, Map, Value};

use super::{
    certificate_witness, compatibility_check, einstein_level, first_nonzero,
    minimal_einstein_level, pseudosymmetry_factor, quasi_einstein_candidates, quasi_einstein_rank,
    recurrent_two_forms, ricci_codazzi_cyclic, roter_solve, semisymmetry_check,
    solve_recurrence_form, Check, ClassifyError, EinsteinOutcome, Proportionality,
    RecurrenceOutcome, RoterOutcome, Witness, ROTER_COEFFICIENTS,
};
use crate::algebra::kulkarni_nomizu;
use crate::catalog::{Catalog, TensorName};
use crate::curvature::{Curvature, CurvatureBundle};
use crate::expr::{ExprError, RatFunc};
use crate::geometry::{Chart, ConnectionKind};
use crate::tensor::TensorField;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Fails,
    HoldsWithFactor,
    NotSolvable,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::Fails => "fails",
            Verdict::HoldsWithFactor => "holds-with-factor",
            Verdict::NotSolvable => "not-solvable",
        }
    }
}

/// One predicate evaluated on the bundle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Finding {
    pub predicate: String,
    pub verdict: Verdict,
    pub factor: Option<RatFunc>,
    pub witness: Option<Witness>,
    pub values: Vec<(String, String)>,
}

impl Finding {
    fn new(predicate: impl Into<String>, verdict: Verdict) -> Finding {
        Finding {
            predicate: predicate.into(),
            verdict,
            factor: None,
            witness: None,
            values: Vec::new(),
        }
    }

    fn from_check(predicate: impl Into<String>, check: &Check) -> Finding {
        match check {
            Check::Holds => Finding::new(predicate, Verdict::Holds),
            Check::Fails(w) => Finding::new(predicate, Verdict::Fails).with_witness(w.clone()),
        }
    }

    fn from_proportionality(predicate: impl Into<String>, p: &Proportionality) -> Finding {
        match p {
            Proportionality::Factor(f) => {
                Finding::new(predicate, Verdict::HoldsWithFactor).with_factor(f.clone())
            }
            Proportionality::BothZero => {
                Finding::new(predicate, Verdict::Holds).with_value("left side", "0")
            }
            Proportionality::NotProportional(w) => {
                Finding::new(predicate, Verdict::Fails).with_witness(w.clone())
            }
        }
    }

    fn with_factor(mut self, f: RatFunc) -> Finding {
        self.factor = Some(f);
        self
    }

    fn with_witness(mut self, w: Witness) -> Finding {
        self.witness = Some(w);
        self
    }

    fn with_value(mut self, key: impl Into<String>, value: impl ToString) -> Finding {
        self.values.push((key.into(), value.to_string()));
        self
    }

    fn human(&self) -> String {
        let mut s = format!("{} {}", self.predicate, self.verdict.as_str());
        if let Some(f) = &self.factor {
            let _ = write!(s, " f = {f}");
        }
        for (k, v) in &self.values {
            let _ = write!(s, ", {k} = {v}");
        }
        if let Some(w) = &self.witness {
            let _ = write!(s, ", witness {w}");
        }
        s
    }

    fn tree(&self) -> Value {
        let mut m = Map::new();
        m.insert("predicate".into(), json!(self.predicate));
        m.insert("verdict".into(), json!(self.verdict.as_str()));
        if let Some(f) = &self.factor {
            m.insert("factor".into(), json!(f.to_string()));
        }
        if let Some(w) = &self.witness {
            let index: Vec<usize> = w.index.iter().map(|i| i + 1).collect();
            m.insert(
                "witness".into(),
                json!({ "index": index, "value": w.value.to_string() }),
            );
        }
        if !self.values.is_empty() {
            let values: Map<String, Value> = self
                .values
                .iter()
                .map(|(k, v)| (k.clone(), json!(v)))
                .collect();
            m.insert("values".into(), Value::Object(values));
        }
        Value::Object(m)
    }
}

/// A claimed statement and whether the findings bear it out.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Claim {
    pub statement: String,
    pub matched: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Item {
    pub id: &'static str,
    pub title: &'static str,
    pub findings: Vec<Finding>,
    pub claim: Option<Claim>,
}

impl Item {
    /// Leading factor of the item, if any finding recovered one.
    pub fn factor(&self) -> Option<&RatFunc> {
        self.findings.iter().find_map(|f| f.factor.as_ref())
    }
}

/// Values asserted for a specific geometry, compared against the findings.
#[derive(Debug, Clone)]
pub struct Claims {
    pub rr: RatFunc,
    pub pr: RatFunc,
    pub cc: RatFunc,
    pub ck: RatFunc,
    pub alpha: RatFunc,
    pub eta: Vec<RatFunc>,
    pub ric2_over_ric_wedge: RatFunc,
    pub ric2_over_ric: RatFunc,
    pub sigma: Vec<RatFunc>,
}

impl Claims {
    /// The published values for the wormhole preset, in its chart.
    pub fn morris_thorne(chart: &Chart) -> Result<Claims, ExprError> {
        let s = |t: &str| chart.scalar(t);
        let v = |ts: &[&str]| {
            ts.iter()
                .map(|t| chart.scalar(t))
                .collect::<Result<Vec<_>, _>>()
        };
        Ok(Claims {
            rr: s("1")?,
            pr: s("2/3")?,
            cc: s("b^2/(3*(b^2+X2^2)^2)")?,
            ck: s("b^2/(3*(b^2+X2^2)^2)")?,
            alpha: s("2*b^2/(b^2+X2^2)^2")?,
            eta: v(&["0", "1", "0", "0"])?,
            ric2_over_ric_wedge: s("2*b^2/(b^2+X2^2)")?,
            ric2_over_ric: s("2*b^2/(b^2+X2^2)^2")?,
            sigma: v(&["0", "-X2/(b^2+X2^2)", "0", "0"])?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureReport {
    pub dim: usize,
    pub connection: String,
    pub seed: u64,
    pub items: Vec<Item>,
}

impl StructureReport {
    /// `(matched, compared)` over the items that carry a claim.
    pub fn tally(&self) -> (usize, usize) {
        let claims: Vec<&Claim> = self.items.iter().filter_map(|i| i.claim.as_ref()).collect();
        (claims.iter().filter(|c| c.matched).count(), claims.len())
    }

    pub fn all_matched(&self) -> bool {
        let (m, n) = self.tally();
        m == n
    }

    pub fn item(&self, id: &str) -> Option<&Item> {
        self.items.iter().find(|i| i.id == id)
    }

    pub fn to_human(&self) -> String {
        let mut out = String::new();
        for item in &self.items {
            let status = match &item.claim {
                Some(c) if c.matched => "PASS ",
                Some(_) => "FAIL ",
                None => "",
            };
            let findings: Vec<String> = item.findings.iter().map(Finding::human).collect();
            let _ = write!(
                out,
                "{status}({}) {}: {}",
                item.id,
                item.title,
                findings.join("; ")
            );
            if let Some(c) = item.claim.as_ref().filter(|c| !c.matched) {
                let _ = write!(out, " [claimed: {}]", c.statement);
            }
            out.push('\n');
        }
        let (m, n) = self.tally();
        if n > 0 {
            let _ = writeln!(out, "{m}/{n} items match the claims");
        }
        out
    }

    pub fn to_tree(&self) -> Value {
        let items: Vec<Value> = self
            .items
            .iter()
            .map(|item| {
                let mut m = Map::new();
                m.insert("id".into(), json!(item.id));
                m.insert("title".into(), json!(item.title));
                m.insert(
                    "findings".into(),
                    Value::Array(item.findings.iter().map(Finding::tree).collect()),
                );
                if let Some(f) = item.factor() {
                    m.insert("factor".into(), json!(f.to_string()));
                }
                if let Some(c) = &item.claim {
                    m.insert("claim".into(), json!(c.statement));
                    m.insert(
                        "status".into(),
                        json!(if c.matched { "PASS" } else { "FAIL" }),
                    );
                }
                Value::Object(m)
            })
            .collect();
        let (matched, compared) = self.tally();
        json!({
            "dim": self.dim,
            "connection": self.connection,
            "seed": self.seed,
            "items": items,
            "summary": { "items": self.items.len(), "compared": compared, "matched": matched },
        })
    }
}

fn same(a: &RatFunc, b: &RatFunc) -> bool {
    (a - b).is_zero()
}

fn same_vec(a: &[RatFunc], b: &[RatFunc]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| same(x, y))
}

fn format_form(v: &[RatFunc]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}

fn claim(statement: impl Into<String>, matched: bool) -> Option<Claim> {
    Some(Claim {
        statement: statement.into(),
        matched,
    })
}

fn pseudosymmetry_item(
    catalog: &Catalog,
    id: &'static str,
    title: &'static str,
    left: TensorName,
    right: TensorName,
    expected: Option<&RatFunc>,
) -> Result<Item, ClassifyError> {
    let l = catalog.get(left)?;
    let r = catalog.get(right)?;
    let p = pseudosymmetry_factor(&l, &r)?;
    let predicate = format!(
        "{} = f*{}",
        left.symbol().trim_matches(|c| c == '(' || c == ')'),
        right.symbol()
    );
    let claim = expected.and_then(|e| {
        let ok = match &p {
            Proportionality::Factor(f) => same(f, e),
            Proportionality::BothZero => r.scale(e).is_zero(),
            Proportionality::NotProportional(_) => false,
        };
        claim(format!("f = {e}"), ok)
    });
    Ok(Item {
        id,
        title,
        findings: vec![Finding::from_proportionality(predicate, &p)],
        claim,
    })
}

fn semisymmetry_item(
    catalog: &Catalog,
    id: &'static str,
    title: &'static str,
    which: TensorName,
    compare: bool,
) -> Result<Item, ClassifyError> {
    let check = semisymmetry_check(&*catalog.get(which)?);
    let predicate = format!(
        "{} = 0",
        which.symbol().trim_matches(|c| c == '(' || c == ')')
    );
    let claim = if compare {
        claim(predicate.clone(), check.holds())
    } else {
        None
    };
    Ok(Item {
        id,
        title,
        findings: vec![Finding::from_check(predicate, &check)],
        claim,
    })
}

fn structure_name(k: usize) -> String {
    match k {
        0 => "Einstein".to_owned(),
        1 => "quasi-Einstein".to_owned(),
        k => format!("{k}-quasi-Einstein"),
    }
}

fn quasi_einstein_item(
    b: &CurvatureBundle,
    seed: u64,
    claims: Option<&Claims>,
) -> Result<Item, ClassifyError> {
    let mut findings = Vec::new();
    let ric_rank = quasi_einstein_rank(b, &RatFunc::zero(), seed)?;
    let simple = if ric_rank.rank == 0 {
        "Einstein"
    } else {
        "Ricci simple"
    };
    let mut f = Finding::new("rank(Ric)", Verdict::Holds).with_value("rank", ric_rank.rank);
    if ric_rank.rank <= 1 {
        f = f.with_value("structure", simple);
    }
    findings.push(f);
    for alpha in quasi_einstein_candidates(b)
        .into_iter()
        .filter(|a| !a.is_zero())
    {
        let r = quasi_einstein_rank(b, &alpha, seed)?;
        findings.push(
            Finding::new("rank(Ric - alpha*g)", Verdict::Holds)
                .with_value("alpha", &alpha)
                .with_value("rank", r.rank)
                .with_value("structure", structure_name(r.rank)),
        );
    }
    let mut claimed = None;
    if let Some(c) = claims {
        let n = b.dim();
        let eta_eta = TensorField::from_fn(n, 2, "", |i| &(&c.eta[i[0]] * &c.eta[i[1]]) * &c.alpha);
        let product = first_nonzero(&b.ricci().sub(&eta_eta));
        findings.push(
            Finding::from_check("Ric = alpha*eta(x)eta", &product).with_value("alpha", &c.alpha),
        );
        let r = quasi_einstein_rank(b, &c.alpha, seed)?;
        let ok = ric_rank.rank == 1 && r.rank == 3 && product.holds();
        claimed = claim(
            format!(
                "rank(Ric) = 1, Ric = alpha*eta(x)eta and rank(Ric - alpha*g) = 3 for alpha = {}",
                c.alpha
            ),
            ok,
        );
    }
    Ok(Item {
        id: "II",
        title: "quasi-Einstein",
        findings,
        claim: claimed,
    })
}

fn roter_finding(name: &str, outcome: &RoterOutcome, generalized: bool) -> Finding {
    match outcome {
        RoterOutcome::NotSolvable(c) => Finding::new(name, Verdict::NotSolvable)
            .with_value("certificate equations", c.combination.len())
            .with_witness(certificate_witness(c)),
        RoterOutcome::Solved(mu) => {
            let mut f = Finding::new(name, Verdict::Holds);
            let used = if generalized { 0 } else { 3 };
            for (k, v) in ROTER_COEFFICIENTS.iter().zip(mu).skip(used) {
                f = f.with_value(*k, v);
            }
            f
        }
    }
}

fn roter_item(b: &CurvatureBundle, claims: Option<&Claims>) -> Result<Item, ClassifyError> {
    let plain = roter_solve(b, false)?;
    let general = roter_solve(b, true)?;
    let g_ric2 = kulkarni_nomizu(b.g(), b.ricci_power(2)?)?;
    let wedge = pseudosymmetry_factor(&g_ric2, b.g_wedge_ric())?;
    let findings = vec![
        roter_finding("Roter", &plain, false),
        roter_finding("generalized Roter", &general, true),
        Finding::from_proportionality("g^Ric2 = f*g^Ric", &wedge),
    ];
    let claimed = claims.and_then(|c| {
        let factor_ok =
            matches!(&wedge, Proportionality::Factor(f) if same(f, &c.ric2_over_ric_wedge));
        claim(
            format!(
                "neither Roter nor generalized Roter, and f = {}",
                c.ric2_over_ric_wedge
            ),
            !plain.is_solvable() && !general.is_solvable() && factor_ok,
        )
    });
    Ok(Item {
        id: "III",
        title: "Roter type",
        findings,
        claim: claimed,
    })
}

fn einstein_item(b: &CurvatureBundle, claims: Option<&Claims>) -> Result<Item, ClassifyError> {
    let mut findings = Vec::new();
    match minimal_einstein_level(b)? {
        Some((level, lambdas)) => {
            let first = match level {
                2 => 1,
                3 => 3,
                _ => 6,
            };
            let mut f = Finding::new("Einstein level", Verdict::Holds).with_value("level", level);
            for (k, l) in lambdas.iter().enumerate() {
                f = f.with_value(format!("lambda{}", first + k), l);
            }
            findings.push(f);
        }
        None => {
            let f = match einstein_level(b, 4)? {
                EinsteinOutcome::NotSatisfied(c) => {
                    Finding::new("Einstein level", Verdict::NotSolvable)
                        .with_witness(certificate_witness(&c))
                }
                EinsteinOutcome::Satisfied(_) => unreachable!("level 4 holds but was not minimal"),
            };
            findings.push(f);
        }
    }
    let ric2 = b.ricci_power(2)?;
    let prop = pseudosymmetry_factor(ric2, b.ricci())?;
    findings.push(Finding::from_proportionality("Ric2 = f*Ric", &prop));
    let claimed = claims.and_then(|c| {
        let ok = match einstein_level(b, 2) {
            Ok(EinsteinOutcome::Satisfied(l)) => same(&l[0], &-&c.ric2_over_ric) && l[1].is_zero(),
            _ => false,
        };
        claim(
            format!("Ric2 = {}*Ric, Einstein of level 2", c.ric2_over_ric),
            ok,
        )
    });
    Ok(Item {
        id: "IV",
        title: "Einstein of level 2",
        findings,
        claim: claimed,
    })
}

fn codazzi_item(b: &CurvatureBundle, compare: bool) -> Result<Item, ClassifyError> {
    let checks = ricci_codazzi_cyclic(b)?;
    let claimed = if compare {
        claim(
            "neither Codazzi nor cyclic parallel",
            !checks.codazzi.holds() && !checks.cyclic_parallel.holds(),
        )
    } else {
        None
    };
    Ok(Item {
        id: "V",
        title: "Codazzi and cyclic parallel Ricci tensor",
        findings: vec![
            Finding::from_check("Codazzi", &checks.codazzi),
            Finding::from_check("cyclic parallel", &checks.cyclic_parallel),
        ],
        claim: claimed,
    })
}

fn compatibility_item(b: &CurvatureBundle, compare: bool) -> Result<Item, ClassifyError> {
    let mut findings = Vec::new();
    let mut claimed_ok = true;
    for which in [
        Curvature::Riemann,
        Curvature::Weyl,
        Curvature::Conharmonic,
        Curvature::Concircular,
        Curvature::Projective,
    ] {
        let check = compatibility_check(b, b.ricci(), b.tensor(which)?)?;
        if matches!(
            which,
            Curvature::Riemann | Curvature::Weyl | Curvature::Conharmonic
        ) {
            claimed_ok &= check.holds();
        }
        findings.push(Finding::from_check(
            format!("Ric {}-compatible", which.symbol()),
            &check,
        ));
    }
    let claimed = if compare {
        claim("Ric is R-, C- and K-compatible", claimed_ok)
    } else {
        None
    };
    Ok(Item {
        id: "VI",
        title: "Ricci compatibility",
        findings,
        claim: claimed,
    })
}

fn recurrence_item(b: &CurvatureBundle, claims: Option<&Claims>) -> Result<Item, ClassifyError> {
    let mut findings = Vec::new();
    let solved = match solve_recurrence_form(b, Curvature::Weyl) {
        Ok(RecurrenceOutcome::Recurrent(sigma)) => {
            findings.push(
                Finding::new("C recurrent", Verdict::Holds)
                    .with_value("sigma", format_form(&sigma)),
            );
            Some(sigma)
        }
        Ok(RecurrenceOutcome::NotRecurrent(c)) => {
            findings.push(
                Finding::new("C recurrent", Verdict::NotSolvable)
                    .with_witness(certificate_witness(&c)),
            );
            None
        }
        Err(ClassifyError::Degenerate { .. }) => {
            findings.push(Finding::new("C recurrent", Verdict::NotSolvable).with_value("C", "0"));
            None
        }
        Err(e) => return Err(e),
    };
    let mut claimed = None;
    if let Some(c) = claims {
        let check = recurrent_two_forms(b, Curvature::Weyl, &c.sigma)?;
        findings.push(
            Finding::from_check("C recurrent for the claimed sigma", &check)
                .with_value("sigma", format_form(&c.sigma)),
        );
        let recovered = solved.as_deref().is_some_and(|s| same_vec(s, &c.sigma));
        claimed = claim(
            format!("C recurrent for sigma = {}", format_form(&c.sigma)),
            check.holds() && recovered,
        );
    }
    Ok(Item {
        id: "VII",
        title: "recurrent conformal curvature 2-forms",
        findings,
        claim: claimed,
    })
}

/// Evaluates every item in a fixed order. `seed` drives the rank sampling.
pub fn structure_report(
    catalog: &Catalog,
    seed: u64,
    claims: Option<&Claims>,
) -> Result<StructureReport, ClassifyError> {
    let b = catalog.bundle();
    let compare = claims.is_some();
    let items = vec![
        pseudosymmetry_item(
            catalog,
            "I.1",
            "Ricci generalized pseudosymmetric",
            TensorName::RR,
            TensorName::QRicR,
            claims.map(|c| &c.rr),
        )?,
        pseudosymmetry_item(
            catalog,
            "I.2",
            "Ricci generalized projectively pseudosymmetric",
            TensorName::PR,
            TensorName::QRicR,
            claims.map(|c| &c.pr),
        )?,
        pseudosymmetry_item(
            catalog,
            "I.3",
            "pseudosymmetric Weyl conformal curvature",
            TensorName::CC,
            TensorName::QgC,
            claims.map(|c| &c.cc),
        )?,
        pseudosymmetry_item(
            catalog,
            "I.4",
            "conharmonic pseudosymmetric due to Weyl",
            TensorName::CK,
            TensorName::QgK,
            claims.map(|c| &c.ck),
        )?,
        semisymmetry_item(
            catalog,
            "I.5",
            "Weyl semisymmetric due to conharmonic",
            TensorName::KC,
            compare,
        )?,
        semisymmetry_item(
            catalog,
            "I.6",
            "semisymmetric conharmonic curvature",
            TensorName::KK,
            compare,
        )?,
        quasi_einstein_item(b, seed, claims)?,
        roter_item(b, claims)?,
        einstein_item(b, claims)?,
        codazzi_item(b, compare)?,
        compatibility_item(b, compare)?,
        recurrence_item(b, claims)?,
    ];
    let connection = match b.connection().kind() {
        ConnectionKind::LeviCivita => "levi-civita".to_owned(),
        ConnectionKind::SemiSymmetricNonMetric { .. } => "ssnm".to_owned(),
    };
    Ok(StructureReport {
        dim: b.dim(),
        connection,
        seed,
        items,
    })
}
