use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use ssnm_core::catalog::{Catalog, TensorName};
use ssnm_core::classify::report::{structure_report, Claims};
use ssnm_core::curvature::CurvatureBundle;
use ssnm_core::fixtures;
use ssnm_core::geometry::{parse_manifest, Geometry};
use ssnm_core::presets;
use ssnm_core::tensor::{format_index, TensorField};

const WORMHOLE: &str = "morris-thorne";

/// Exact curvature computations for semi-Riemannian manifolds.
#[derive(Parser)]
#[command(name = "ssnm", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the nonzero components of the requested tensors.
    Compute {
        #[command(flatten)]
        source: Source,
        /// Tensor to print; repeat for several.
        #[arg(long = "tensor", required = true, value_parser = tensor_name)]
        tensors: Vec<TensorName>,
        #[command(flatten)]
        output: Output,
    },
    /// Run every structure classifier and print the scoreboard.
    Report {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        output: Output,
    },
    /// Compare the wormhole preset against its reference tables.
    Validate {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Source {
    /// Manifest file describing chart, metric and connection.
    #[arg(long)]
    manifest: Option<PathBuf>,
    /// Built-in geometry.
    #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(presets::NAMES))]
    preset: Option<String>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Tree,
}

#[derive(Args)]
struct Output {
    #[arg(long, value_enum, default_value_t = Format::Human)]
    format: Format,
    /// Write to this file instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed for the random sample points used by rank computations.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn tensor_name(s: &str) -> Result<TensorName, String> {
    match s.parse::<TensorName>() {
        Ok(t) if t != TensorName::Metric => Ok(t),
        _ => {
            let names: Vec<&str> = TensorName::ALL
                .iter()
                .filter(|t| **t != TensorName::Metric)
                .map(|t| t.key())
                .collect();
            Err(format!(
                "unknown tensor `{s}`; expected one of: {}",
                names.join(", ")
            ))
        }
    }
}

impl Source {
    fn is_wormhole(&self) -> bool {
        self.preset.as_deref() == Some(WORMHOLE)
    }

    fn geometry(&self) -> Result<Geometry> {
        if let Some(name) = &self.preset {
            return presets::geometry(name).with_context(|| format!("unknown preset `{name}`"));
        }
        let path = self.manifest.as_ref().expect("clap enforces one source");
        let text =
            fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
        let manifest = parse_manifest(&text).with_context(|| format!("{}", path.display()))?;
        Ok(manifest
            .build()
            .with_context(|| format!("{}", path.display()))?)
    }

    fn catalog(&self) -> Result<Catalog> {
        Ok(Catalog::new(CurvatureBundle::new(self.geometry()?)))
    }
}

impl Output {
    fn emit(&self, text: &str) -> Result<()> {
        match &self.out {
            Some(path) => {
                fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
            }
            None => {
                let mut stdout = std::io::stdout().lock();
                stdout.write_all(text.as_bytes())?;
                Ok(stdout.flush()?)
            }
        }
    }
}

fn tree_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn component_rows(name: TensorName, t: &TensorField) -> Vec<String> {
    let rows = t.nonzero();
    if rows.is_empty() {
        return vec![format!("{}: all components zero", name.symbol())];
    }
    rows.into_iter()
        .map(|(idx, v)| {
            if idx.is_empty() {
                format!("{} = {v}", name.symbol())
            } else {
                format!("{}[{}] = {v}", name.symbol(), format_index(&idx))
            }
        })
        .collect()
}

fn component_tree(name: TensorName, t: &TensorField) -> Value {
    let components: Vec<Value> = t
        .nonzero()
        .into_iter()
        .map(|(idx, v)| {
            let index: Vec<usize> = idx.iter().map(|i| i + 1).collect();
            json!({ "index": index, "value": v.to_string() })
        })
        .collect();
    json!({
        "name": name.key(),
        "symbol": name.symbol(),
        "rank": t.total_rank(),
        "zero": components.is_empty(),
        "components": components,
    })
}

fn compute(source: &Source, tensors: &[TensorName], output: &Output) -> Result<ExitCode> {
    let catalog = source.catalog()?;
    let mut rows = Vec::new();
    let mut trees = Vec::new();
    for &name in tensors {
        let t = catalog
            .get(name)
            .with_context(|| format!("cannot compute {name}"))?;
        match output.format {
            Format::Human => rows.extend(component_rows(name, &t)),
            Format::Tree => trees.push(component_tree(name, &t)),
        }
    }
    let text = match output.format {
        Format::Human => rows.join("\n") + "\n",
        Format::Tree => tree_text(&json!({ "dim": catalog.bundle().dim(), "tensors": trees })),
    };
    output.emit(&text)?;
    Ok(ExitCode::SUCCESS)
}

fn report(source: &Source, output: &Output) -> Result<ExitCode> {
    let catalog = source.catalog()?;
    let claims = if source.is_wormhole() {
        Some(Claims::morris_thorne(catalog.bundle().metric().chart())?)
    } else {
        None
    };
    let report = structure_report(&catalog, output.seed, claims.as_ref())?;
    let text = match output.format {
        Format::Human => report.to_human(),
        Format::Tree => tree_text(&report.to_tree()),
    };
    output.emit(&text)?;
    Ok(if report.all_matched() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

fn validate(source: &Source, output: &Output) -> Result<ExitCode> {
    if !source.is_wormhole() {
        bail!("validate compares against the reference tables of --preset {WORMHOLE} only");
    }
    let catalog = source.catalog()?;
    let result = fixtures::validate(&catalog)?;
    let text = match output.format {
        Format::Human => format!("{result}\n"),
        Format::Tree => {
            let groups: Vec<Value> = result
                .groups
                .iter()
                .map(|g| {
                    let mismatches: Vec<String> =
                        g.mismatches.iter().map(ToString::to_string).collect();
                    json!({
                        "id": g.id,
                        "title": g.title,
                        "checked": g.checked,
                        "status": if g.passed() { "PASS" } else { "FAIL" },
                        "mismatches": mismatches,
                    })
                })
                .collect();
            tree_text(&json!({
                "groups": groups,
                "summary": { "passed": result.passed(), "total": result.groups.len() },
            }))
        }
    };
    output.emit(&text)?;
    Ok(if result.all_passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Compute {
            source,
            tensors,
            output,
        } => compute(source, tensors, output),
        Command::Report { source, output } => report(source, output),
        Command::Validate { source, output } => validate(source, output),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
