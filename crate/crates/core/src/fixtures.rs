//! Reference component tables for the Morris-Thorne preset and the
//! validator that compares them with computed tensors.
//!
//! Reference values are stored as parseable strings and compared
//! semantically (`is_zero` of the difference), never textually.

use std::fmt;

use crate::catalog::{Catalog, CatalogError, TensorName};
use crate::expr::{AnySymbol, RatFunc};
use crate::tensor::{format_index, TensorField};

/// Which components outside the listed ones must vanish.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coverage {
    /// Only the listed components are checked.
    Listed,
    /// Every component not listed is zero.
    Exact,
    /// Every component outside the orbit of the listed ones under
    /// antisymmetry in each index pair and pair exchange is zero.
    CurvatureOrbit,
    /// As `Exact`, modulo antisymmetry in the first index pair.
    FirstPairOrbit,
}

#[derive(Debug, Clone)]
pub struct Entry {
    pub tensor: TensorName,
    /// 1-based digits, e.g. `"2323"`; empty for scalars.
    pub index: String,
    pub expr: String,
}

#[derive(Debug, Clone)]
pub struct Group {
    pub id: &'static str,
    pub title: &'static str,
    pub entries: Vec<Entry>,
    pub coverage: Vec<(TensorName, Coverage)>,
}

const D: &str = "(b^2+X2^2)";
const S2: &str = "sin(X3)^2";
const A: &str = "(a*b^2+2*X2+a*X2^2)";
const A3: &str = "(a*b^2+3*X2+a*X2^2)";

fn fill(template: &str) -> String {
    template
        .replace("D", D)
        .replace("S2", S2)
        .replace("A3", A3)
        .replace("AA", A)
}

fn entries(tensor: TensorName, rows: &[(&str, &str)]) -> Vec<Entry> {
    rows.iter()
        .map(|(idx, e)| Entry {
            tensor,
            index: idx.to_string(),
            expr: fill(e),
        })
        .collect()
}

/// The nine reference groups. Placeholders: `D = b^2+X2^2`,
/// `S2 = sin(X3)^2`, `AA = a*b^2+2*X2+a*X2^2`, `A3 = a*b^2+3*X2+a*X2^2`.
pub fn morris_thorne_groups() -> Vec<Group> {
    use TensorName::*;
    let mut g34 = entries(
        NablaRiemann,
        &[
            ("22323", "2*b^2*AA/D^2"),
            ("22424", "2*b^2*S2*AA/D^2"),
            ("23434", "-4*b^2*X2*S2/D"),
            ("32434", "-b^2*S2*AA/D"),
            ("42334", "b^2*S2*AA/D"),
        ],
    );
    g34.extend(entries(
        NablaRicci,
        &[
            ("222", "-4*b^2*AA/D^3"),
            ("323", "2*b^2*X2/D^2"),
            ("424", "2*b^2*X2*S2/D^2"),
        ],
    ));

    let mut g35 = entries(
        Weyl,
        &[
            ("1212", "-2*b^2*c^2/(3*D^2)"),
            ("1313", "b^2*c^2/(3*D)"),
            ("1414", "b^2*c^2*S2/(3*D)"),
            ("2323", "-b^2/(3*D)"),
            ("2424", "-b^2*S2/(3*D)"),
            ("3434", "2/3*b^2*S2"),
        ],
    );
    g35.extend(entries(
        Projective,
        &[
            ("1221", "2*b^2*c^2/(3*D^2)"),
            ("2323", "-b^2/(3*D)"),
            ("2332", "b^2/D"),
            ("2424", "-b^2*S2/(3*D)"),
            ("2442", "b^2*S2/D"),
            ("3434", "b^2*S2"),
            ("3443", "-b^2*S2"),
        ],
    ));
    g35.extend(entries(
        Conharmonic,
        &[("1212", "-b^2*c^2/D^2"), ("3434", "b^2*S2")],
    ));

    let mut g36 = entries(
        NablaWeyl,
        &[
            ("21212", "4*b^2*c^2*AA/(3*D^3)"),
            ("31213", "-b^2*c^2*A3/(3*D^2)"),
            ("41214", "-b^2*c^2*S2*A3/(3*D^2)"),
            ("21313", "-4*b^2*c^2*X2/(3*D^2)"),
            ("11323", "-a*b^2*c^2/(3*D)"),
            ("21414", "-4*b^2*c^2*X2*S2/(3*D^2)"),
            ("11424", "-a*b^2*c^2*S2/(3*D)"),
        ],
    );
    g36.extend(entries(
        NablaProjective,
        &[
            ("21221", "-4*b^2*c^2*AA/(3*D^3)"),
            ("11222", "-2*a*b^2*c^2/(3*D^2)"),
            ("31231", "2*b^2*c^2*X2/(3*D^2)"),
            ("31321", "2*b^2*c^2*X2/(3*D^2)"),
            ("41241", "2*b^2*c^2*X2*S2/(3*D^2)"),
            ("41421", "2*b^2*c^2*X2*S2/(3*D^2)"),
        ],
    ));
    g36.extend(entries(
        NablaConharmonic,
        &[
            ("21212", "2*b^2*c^2*AA/D^3"),
            ("31213", "-b^2*c^2*X2/D^2"),
            ("41214", "-b^2*c^2*X2*S2/D^2"),
        ],
    ));

    let mut g37 = entries(
        RR,
        &[("233424", "-2*b^4*S2/D^2"), ("243423", "2*b^4*S2/D^2")],
    );
    g37.extend(entries(
        PR,
        &[
            ("233424", "-4*b^4*S2/(3*D^2)"),
            ("243423", "4*b^4*S2/(3*D^2)"),
        ],
    ));

    let cc_rows = [
        ("121323", "b^4*c^2/(3*D^3)"),
        ("122313", "-b^4*c^2/(3*D^3)"),
        ("121424", "b^4*c^2*S2/(3*D^3)"),
        ("122414", "-b^4*c^2*S2/(3*D^3)"),
        ("133414", "b^4*c^2*S2/(3*D^2)"),
        ("143413", "-b^4*c^2*S2/(3*D^2)"),
        ("233424", "-b^4*S2/(3*D^2)"),
        ("243423", "b^4*S2/(3*D^2)"),
    ];
    let mut g38 = entries(CC, &cc_rows);
    g38.extend(entries(CK, &cc_rows));
    g38.extend(entries(
        CK,
        &[
            ("131223", "b^4*c^2/(3*D^3)"),
            ("231213", "-b^4*c^2/(3*D^3)"),
            ("141224", "b^4*c^2*S2/(3*D^3)"),
            ("241214", "-b^4*c^2*S2/(3*D^3)"),
        ],
    ));

    let qg_rows = [
        ("121323", "b^2*c^2/D"),
        ("122313", "-b^2*c^2/D"),
        ("121424", "b^2*c^2*S2/D"),
        ("122414", "-b^2*c^2*S2/D"),
        ("133414", "b^2*c^2*S2"),
        ("143413", "-b^2*c^2*S2"),
        ("233424", "-b^2*S2"),
        ("243423", "b^2*S2"),
    ];
    let mut g39 = entries(
        QRicR,
        &[("233424", "-2*b^4*S2/D^2"), ("243423", "2*b^4*S2/D^2")],
    );
    g39.extend(entries(QgC, &qg_rows));
    g39.extend(entries(QgK, &qg_rows));
    g39.extend(entries(
        QgK,
        &[
            ("131223", "b^2*c^2/D"),
            ("231213", "-b^2*c^2/D"),
            ("141224", "b^2*c^2*S2/D"),
            ("241214", "-b^2*c^2*S2/D"),
        ],
    ));

    let mut g33 = entries(
        Riemann,
        &[
            ("2323", "-b^2/D"),
            ("2424", "-b^2*S2/D"),
            ("3434", "b^2*S2"),
        ],
    );
    g33.extend(entries(Ricci, &[("22", "2*b^2/D^2")]));
    g33.extend(entries(Scalar, &[("", "2*b^2/D^2")]));

    vec![
        Group {
            id: "3.1",
            title: "metric",
            entries: entries(
                Metric,
                &[("11", "-c^2"), ("22", "1"), ("33", "D"), ("44", "D*S2")],
            ),
            coverage: vec![(Metric, Coverage::Exact)],
        },
        Group {
            id: "3.2",
            title: "Christoffel coefficients",
            entries: entries(
                Christoffel,
                &[
                    ("112", "a"),
                    ("222", "a"),
                    ("233", "-X2"),
                    ("434", "cot(X3)"),
                    ("443", "cot(X3)"),
                    ("323", "X2/D"),
                    ("424", "X2/D"),
                    ("332", "X2/D+a"),
                    ("442", "X2/D+a"),
                    ("244", "-X2*S2"),
                    ("344", "-sin(X3)*cos(X3)"),
                ],
            ),
            coverage: vec![(Christoffel, Coverage::Exact)],
        },
        Group {
            id: "3.3",
            title: "R, Ric, kappa",
            entries: g33,
            coverage: vec![
                (Riemann, Coverage::CurvatureOrbit),
                (Ricci, Coverage::Exact),
                (Scalar, Coverage::Exact),
            ],
        },
        Group {
            id: "3.4",
            title: "nabla R, nabla Ric",
            entries: g34,
            coverage: vec![
                (NablaRiemann, Coverage::Listed),
                (NablaRicci, Coverage::Listed),
            ],
        },
        Group {
            id: "3.5",
            title: "C, P, K",
            entries: g35,
            coverage: vec![
                (Weyl, Coverage::CurvatureOrbit),
                (Projective, Coverage::FirstPairOrbit),
                (Conharmonic, Coverage::CurvatureOrbit),
            ],
        },
        Group {
            id: "3.6",
            title: "nabla C, nabla P, nabla K",
            entries: g36,
            coverage: vec![
                (NablaWeyl, Coverage::Listed),
                (NablaProjective, Coverage::Listed),
                (NablaConharmonic, Coverage::Listed),
            ],
        },
        Group {
            id: "3.7",
            title: "R.R, P.R",
            entries: g37,
            coverage: vec![(RR, Coverage::Listed), (PR, Coverage::Listed)],
        },
        Group {
            id: "3.8",
            title: "C.C, C.K",
            entries: g38,
            coverage: vec![(CC, Coverage::Listed), (CK, Coverage::Listed)],
        },
        Group {
            id: "3.9",
            title: "Q(Ric,R), Q(g,C), Q(g,K)",
            entries: g39,
            coverage: vec![
                (QRicR, Coverage::Listed),
                (QgC, Coverage::Listed),
                (QgK, Coverage::Listed),
            ],
        },
    ]
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Mismatch {
    /// A listed component differs from the computed one.
    Value {
        tensor: TensorName,
        index: Vec<usize>,
        computed: String,
        reference: String,
    },
    /// A component outside the listed set (and its symmetry orbit) is nonzero.
    Unlisted {
        tensor: TensorName,
        index: Vec<usize>,
        computed: String,
    },
    /// The reference string could not be parsed.
    BadReference { entry: String, error: String },
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mismatch::Value {
                tensor,
                index,
                computed,
                reference,
            } => write!(
                f,
                "{}[{}]: computed {computed}, reference {reference}",
                tensor.symbol(),
                format_index(index)
            ),
            Mismatch::Unlisted {
                tensor,
                index,
                computed,
            } => write!(
                f,
                "{}[{}]: computed {computed}, reference lists no such component",
                tensor.symbol(),
                format_index(index)
            ),
            Mismatch::BadReference { entry, error } => {
                write!(f, "reference `{entry}` does not parse: {error}")
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct GroupResult {
    pub id: &'static str,
    pub title: &'static str,
    pub checked: usize,
    pub mismatches: Vec<Mismatch>,
}

impl GroupResult {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub groups: Vec<GroupResult>,
}

impl ValidationReport {
    pub fn passed(&self) -> usize {
        self.groups.iter().filter(|g| g.passed()).count()
    }

    pub fn all_passed(&self) -> bool {
        self.passed() == self.groups.len()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for g in &self.groups {
            let verdict = if g.passed() { "PASS" } else { "FAIL" };
            writeln!(
                f,
                "{verdict} ({}) {} [{} components]",
                g.id, g.title, g.checked
            )?;
            for m in &g.mismatches {
                writeln!(f, "    {m}")?;
            }
        }
        write!(
            f,
            "{}/{} equation groups PASS",
            self.passed(),
            self.groups.len()
        )
    }
}

fn parse_index(s: &str) -> Vec<usize> {
    s.chars()
        .map(|c| c.to_digit(10).expect("index digit") as usize - 1)
        .collect()
}

fn orbit(idx: &[usize], coverage: Coverage) -> Vec<Vec<usize>> {
    let mut out = vec![idx.to_vec()];
    let mut push = |v: Vec<usize>| {
        if !out.contains(&v) {
            out.push(v);
        }
    };
    match coverage {
        Coverage::CurvatureOrbit => {
            let (h, k, i, j) = (idx[0], idx[1], idx[2], idx[3]);
            for (p, q) in [([h, k], [i, j]), ([i, j], [h, k])] {
                for a in [[p[0], p[1]], [p[1], p[0]]] {
                    for b in [[q[0], q[1]], [q[1], q[0]]] {
                        push(vec![a[0], a[1], b[0], b[1]]);
                    }
                }
            }
        }
        Coverage::FirstPairOrbit => {
            let mut v = idx.to_vec();
            v.swap(0, 1);
            push(v);
        }
        Coverage::Exact | Coverage::Listed => {}
    }
    out
}

fn check_group(catalog: &Catalog, group: &Group) -> Result<GroupResult, CatalogError> {
    let mut mismatches = Vec::new();
    let mut checked = 0;
    for e in &group.entries {
        let t = catalog.get(e.tensor)?;
        let index = parse_index(&e.index);
        let reference = match crate::expr::parse(&e.expr, &AnySymbol).and_then(|x| x.canonicalize())
        {
            Ok(r) => r,
            Err(err) => {
                mismatches.push(Mismatch::BadReference {
                    entry: format!("{}[{}] = {}", e.tensor.symbol(), e.index, e.expr),
                    error: err.to_string(),
                });
                continue;
            }
        };
        checked += 1;
        let computed = t.get(&index);
        if !(computed - &reference).is_zero() {
            mismatches.push(Mismatch::Value {
                tensor: e.tensor,
                index,
                computed: computed.to_string(),
                reference: reference.to_string(),
            });
        }
    }
    for &(name, coverage) in &group.coverage {
        if coverage == Coverage::Listed {
            continue;
        }
        let t: std::sync::Arc<TensorField> = catalog.get(name)?;
        let mut allowed: Vec<Vec<usize>> = Vec::new();
        for e in group.entries.iter().filter(|e| e.tensor == name) {
            allowed.extend(orbit(&parse_index(&e.index), coverage));
        }
        for (index, value) in t.nonzero() {
            if !allowed.contains(&index) {
                checked += 1;
                mismatches.push(Mismatch::Unlisted {
                    tensor: name,
                    index,
                    computed: value.to_string(),
                });
            }
        }
    }
    Ok(GroupResult {
        id: group.id,
        title: group.title,
        checked,
        mismatches,
    })
}

/// Compares `groups` against the tensors of `catalog`.
pub fn validate_groups(
    catalog: &Catalog,
    groups: &[Group],
) -> Result<ValidationReport, CatalogError> {
    let groups = groups
        .iter()
        .map(|g| check_group(catalog, g))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ValidationReport { groups })
}

pub fn validate(catalog: &Catalog) -> Result<ValidationReport, CatalogError> {
    validate_groups(catalog, &morris_thorne_groups())
}

/// Canonical value of a reference entry, for callers that want to compare
/// by hand.
pub fn reference_value(entry: &Entry) -> Option<RatFunc> {
    crate::expr::parse(&entry.expr, &AnySymbol)
        .ok()?
        .canonicalize()
        .ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn placeholders_expand() {
        assert_eq!(
            fill("2*b^2*AA/D^2"),
            "2*b^2*(a*b^2+2*X2+a*X2^2)/(b^2+X2^2)^2"
        );
        assert_eq!(fill("A3*S2"), "(a*b^2+3*X2+a*X2^2)*sin(X3)^2");
    }

    #[test]
    fn every_reference_parses() {
        for g in morris_thorne_groups() {
            for e in &g.entries {
                assert!(reference_value(e).is_some(), "{} {}", e.index, e.expr);
            }
        }
    }

    #[test]
    fn curvature_orbit_has_eight_members() {
        assert_eq!(orbit(&[1, 2, 1, 2], Coverage::CurvatureOrbit).len(), 4);
        assert_eq!(orbit(&[0, 1, 2, 3], Coverage::CurvatureOrbit).len(), 8);
    }
}
