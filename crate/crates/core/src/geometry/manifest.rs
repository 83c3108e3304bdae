//! Line-oriented manifest files.
//!
//! ```text
//! dim = 4
//! coords = X1, X2, X3, X4
//! params = a, b, c
//! g[1][1] = -c^2
//! g[3][3] = b^2 + X2^2
//! connection = ssnm
//! P = 0, a, 0, 0
//! ```
//!
//! Unlisted metric entries are zero, and `g[i][j]` also fills `g[j][i]`
//! unless that entry is given explicitly. Lines starting with `#` are
//! comments.

use std::collections::BTreeMap;

use thiserror::Error;

use super::{Chart, Geometry, GeometryError, MetricSpec};
use crate::expr::{Expr, RatFunc};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ManifestError {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ConnectionChoice {
    LeviCivita,
    Ssnm(Vec<Expr>),
}

#[derive(Debug, Clone)]
pub struct Manifest {
    pub chart: Chart,
    pub metric: Vec<Vec<Expr>>,
    pub connection: ConnectionChoice,
}

fn err(line: usize, message: impl Into<String>) -> ManifestError {
    ManifestError {
        line,
        message: message.into(),
    }
}

fn split_list(v: &str) -> Vec<String> {
    v.split(',')
        .map(|s| s.trim().to_owned())
        .filter(|s| !s.is_empty())
        .collect()
}

fn parse_metric_key(key: &str) -> Option<(usize, usize)> {
    let rest = key.strip_prefix("g[")?;
    let (i, rest) = rest.split_once("][")?;
    let j = rest.strip_suffix(']')?;
    Some((i.trim().parse().ok()?, j.trim().parse().ok()?))
}

pub fn parse_manifest(text: &str) -> Result<Manifest, ManifestError> {
    let mut dim: Option<(usize, usize)> = None;
    let mut coords: Option<(Vec<String>, usize)> = None;
    let mut params: Vec<String> = Vec::new();
    let mut entries: BTreeMap<(usize, usize), (String, usize)> = BTreeMap::new();
    let mut connection: Option<(String, usize)> = None;
    let mut p_line: Option<(String, usize)> = None;

    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let body = raw.trim();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        let (key, value) = body
            .split_once('=')
            .ok_or_else(|| err(line, format!("expected `key = value`, found `{body}`")))?;
        let (key, value) = (key.trim(), value.trim());
        match key {
            "dim" => {
                let n: usize = value.parse().map_err(|_| {
                    err(
                        line,
                        format!("dim must be a positive integer, found `{value}`"),
                    )
                })?;
                dim = Some((n, line));
            }
            "coords" => coords = Some((split_list(value), line)),
            "params" => params = split_list(value),
            "connection" => connection = Some((value.to_owned(), line)),
            "P" => p_line = Some((value.to_owned(), line)),
            _ => match parse_metric_key(key) {
                Some(ij) => {
                    if entries.insert(ij, (value.to_owned(), line)).is_some() {
                        return Err(err(line, format!("duplicate entry {key}")));
                    }
                }
                None => return Err(err(line, format!("unknown key `{key}`"))),
            },
        }
    }

    let (coords, coords_line) = coords.ok_or_else(|| err(0, "missing `coords`"))?;
    let n = coords.len();
    if let Some((d, line)) = dim {
        if d != n {
            return Err(err(
                line,
                format!("dim = {d} but {n} coordinates are listed"),
            ));
        }
    }
    let chart = Chart::new(&coords, &params).map_err(|e| err(coords_line, e.to_string()))?;

    let mut metric = vec![vec![Expr::int(0); n]; n];
    for (&(i, j), (text, line)) in &entries {
        if i == 0 || j == 0 || i > n || j > n {
            return Err(err(*line, format!("index g[{i}][{j}] out of range 1..{n}")));
        }
        let e = chart.parse(text).map_err(|e| err(*line, e.to_string()))?;
        metric[i - 1][j - 1] = e.clone();
        if !entries.contains_key(&(j, i)) {
            metric[j - 1][i - 1] = e;
        }
    }

    let connection = match connection {
        None => ConnectionChoice::LeviCivita,
        Some((kind, line)) => match kind.as_str() {
            "levi-civita" => {
                if let Some((_, pl)) = p_line {
                    return Err(err(pl, "`P` is only valid with `connection = ssnm`"));
                }
                ConnectionChoice::LeviCivita
            }
            "ssnm" => {
                let (text, pl) =
                    p_line.ok_or_else(|| err(line, "`connection = ssnm` requires a `P` line"))?;
                let parts = split_list(&text);
                if parts.len() != n {
                    return Err(err(
                        pl,
                        format!("P needs {n} components, found {}", parts.len()),
                    ));
                }
                let comps = parts
                    .iter()
                    .map(|s| chart.parse(s).map_err(|e| err(pl, e.to_string())))
                    .collect::<Result<Vec<_>, _>>()?;
                ConnectionChoice::Ssnm(comps)
            }
            other => return Err(err(line, format!("unknown connection `{other}`"))),
        },
    };

    Ok(Manifest {
        chart,
        metric,
        connection,
    })
}

impl Manifest {
    pub fn build(&self) -> Result<Geometry, GeometryError> {
        let metric = MetricSpec::new(self.chart.clone(), &self.metric)?;
        match &self.connection {
            ConnectionChoice::LeviCivita => Ok(Geometry::levi_civita(metric)),
            ConnectionChoice::Ssnm(p) => {
                let p = p
                    .iter()
                    .map(Expr::canonicalize)
                    .collect::<Result<Vec<RatFunc>, _>>()?;
                Geometry::ssnm(metric, p)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MT: &str = "dim = 4
coords = X1, X2, X3, X4
params = a, b, c
g[1][1] = -c^2
g[2][2] = 1
g[3][3] = b^2 + X2^2
g[4][4] = (b^2 + X2^2) * sin(X3)^2
connection = ssnm
P = 0, a, 0, 0
";

    #[test]
    fn parses_example_manifest() {
        let m = parse_manifest(MT).unwrap();
        assert_eq!(m.chart.dim(), 4);
        assert_eq!(m.metric[2][2].to_string(), "b^2+X2^2");
        assert!(matches!(m.connection, ConnectionChoice::Ssnm(ref p) if p.len() == 4));
        let geo = m.build().unwrap();
        assert_eq!(geo.connection.nonzero().len(), 11);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let bad = MT.replace("g[2][2] = 1", "g[2][2] = 1 +");
        assert_eq!(parse_manifest(&bad).unwrap_err().line, 5);
        let bad = MT.replace("g[3][3] = b^2 + X2^2", "g[3][3] = q");
        assert_eq!(parse_manifest(&bad).unwrap_err().line, 6);
        let bad = MT.replace("P = 0, a, 0, 0", "P = 0, a");
        assert_eq!(parse_manifest(&bad).unwrap_err().line, 9);
        let bad = MT.replace("dim = 4", "dim = 3");
        assert_eq!(parse_manifest(&bad).unwrap_err().line, 1);
        assert_eq!(
            parse_manifest("coords = x, y\nfoo = 1\n").unwrap_err().line,
            2
        );
    }

    #[test]
    fn off_diagonal_entries_are_mirrored() {
        let m = parse_manifest("coords = x, y\ng[1][1] = 1\ng[2][2] = 1\ng[1][2] = x\n").unwrap();
        assert_eq!(m.metric[1][0], m.metric[0][1]);
        assert!(matches!(m.connection, ConnectionChoice::LeviCivita));
    }
}
