//! Batch front end over the `bialg` library.
//!
//! Every command writes its report to a caller-supplied stream and returns
//! an [`Outcome`]; the binary maps that to an exit code.

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use bialg::catalog::{verify_all, Catalog, EntryReport, Summary, VariantReport, VerifyMode};
use bialg::cohomology::{
    cocycle_space, coboundary_space, invariants, Acting, Module, ModuleSpec,
};
use bialg::exterior::MultiVector;
use bialg::format::{multivector_to_doc, parse_multivector};
use bialg::linalg::Rat;
use bialg::poincare::{make_inhomogeneous, InhomogeneousAlgebra};
use bialg::schouten::{gcybe_check, schouten_bracket, GcybeVerdict};
use bialg::catalog::CATALOG_ENV;
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] bialg::error::Error),
    #[error("{0}: {1}")]
    Io(String, io::Error),
    #[error("bad --algebra value '{0}': expected p,q")]
    Signature(String),
}

pub type Result<T> = std::result::Result<T, CliError>;

/// How a run ended; maps onto exit codes 0, 1 and 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
}

impl Outcome {
    pub fn exit_code(self) -> u8 {
        match self {
            Outcome::Pass => 0,
            Outcome::Fail => 1,
        }
    }

    fn from_pass(pass: bool) -> Outcome {
        if pass {
            Outcome::Pass
        } else {
            Outcome::Fail
        }
    }
}

pub const ERROR_EXIT: u8 = 2;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    #[default]
    Text,
    Jsonl,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    #[default]
    Symbolic,
    Sampled,
}

#[derive(Debug, Parser)]
#[command(name = "bialg", version, about = "Exact Lie-bialgebra computations on inhomogeneous o(p,q)")]
pub struct Cli {
    /// Report format.
    #[arg(long, value_enum, default_value_t, global = true)]
    pub format: OutputFormat,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Verify the catalog of r-matrices on the Poincaré algebra.
    VerifyCatalog {
        /// Restrict to these entry ids (repeatable).
        #[arg(long)]
        entry: Vec<String>,
        #[arg(long, value_enum, default_value_t)]
        mode: Mode,
        /// Random instantiations per entry in sampled mode.
        #[arg(long, default_value_t = 5)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Catalog directory; defaults to $BIALG_CATALOG_DIR or the shipped set.
        #[arg(long, env = CATALOG_ENV)]
        catalog_dir: Option<PathBuf>,
    },
    /// Check the generalized classical Yang–Baxter equation for r.
    Gcybe {
        file: PathBuf,
        /// Signature p,q of the inhomogeneous algebra.
        #[arg(long, default_value = "1,3")]
        algebra: String,
    },
    /// Cocycle, coboundary and invariant dimensions for a module.
    Cohomology {
        /// Module: R, g, V, h, L2g, L3g, L2V, L3V, L2h, L3h, V^h, L2V^h, V^L2h.
        module: String,
        #[arg(long, default_value = "1,3")]
        algebra: String,
        /// Acting subalgebra (source of cochains): g, h or V.
        #[arg(long, default_value = "g")]
        acting: String,
        /// Also print echelon bases.
        #[arg(long)]
        emit_basis: bool,
    },
    /// Schouten bracket [r, s] of two multivector files.
    Schouten {
        first: PathBuf,
        second: PathBuf,
        #[arg(long, default_value = "1,3")]
        algebra: String,
    },
}

/// Dispatches a parsed command line.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<Outcome> {
    let fmt = cli.format;
    match &cli.command {
        Command::VerifyCatalog {
            entry,
            mode,
            samples,
            seed,
            catalog_dir,
        } => {
            let dir = catalog_dir.clone().unwrap_or_else(Catalog::default_dir);
            let mode = match mode {
                Mode::Symbolic => VerifyMode::Symbolic,
                Mode::Sampled => VerifyMode::Sampled {
                    samples: *samples,
                    seed: *seed,
                },
            };
            cmd_verify_catalog(&dir, entry, mode, fmt, out)
        }
        Command::Gcybe { file, algebra } => cmd_gcybe(&parse_signature(algebra)?, file, fmt, out),
        Command::Cohomology {
            module,
            algebra,
            acting,
            emit_basis,
        } => {
            let p = parse_signature(algebra)?;
            let spec: ModuleSpec = module.parse()?;
            let acting: Acting = acting.parse()?;
            cmd_cohomology(&p, spec, acting, *emit_basis, fmt, out)
        }
        Command::Schouten {
            first,
            second,
            algebra,
        } => cmd_schouten(&parse_signature(algebra)?, first, second, fmt, out),
    }
}

pub fn parse_signature(s: &str) -> Result<InhomogeneousAlgebra> {
    let bad = || CliError::Signature(s.to_string());
    let (p, q) = s.split_once(',').ok_or_else(bad)?;
    let p = p.trim().parse().map_err(|_| bad())?;
    let q = q.trim().parse().map_err(|_| bad())?;
    Ok(make_inhomogeneous(p, q)?)
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| CliError::Io(path.display().to_string(), e))
}

pub fn load_multivector(p: &InhomogeneousAlgebra, path: &Path) -> Result<MultiVector> {
    let text = read(path)?;
    parse_multivector(&text, p).map_err(|e| match e {
        bialg::error::Error::Document(m) => {
            bialg::error::Error::Document(format!("{}: {m}", path.display())).into()
        }
        other => other.into(),
    })
}

fn line(out: &mut dyn Write, s: impl AsRef<str>) -> Result<()> {
    writeln!(out, "{}", s.as_ref()).map_err(|e| CliError::Io("output".into(), e))
}

fn doc(w: &MultiVector) -> Value {
    serde_json::to_value(multivector_to_doc(w)).expect("documents serialize")
}

fn rat_map(m: &BTreeMap<String, Rat>) -> Value {
    Value::Object(m.iter().map(|(k, v)| (k.clone(), json!(v.to_string()))).collect())
}

pub fn cmd_verify_catalog(
    dir: &Path,
    entries: &[String],
    mode: VerifyMode,
    fmt: OutputFormat,
    out: &mut dyn Write,
) -> Result<Outcome> {
    let mut catalog = Catalog::load_dir(dir)?;
    if !entries.is_empty() {
        catalog = catalog.select(entries)?;
    }
    let summary = verify_all(&catalog, mode)?;
    for report in &summary.reports {
        match fmt {
            OutputFormat::Text => text_entry(&catalog, report, out)?,
            OutputFormat::Jsonl => line(out, jsonl_entry(report).to_string())?,
        }
    }
    write_summary(&summary, fmt, out)?;
    Ok(Outcome::from_pass(summary.all_pass()))
}

fn variant_tag(v: &VariantReport) -> String {
    let mut parts: Vec<String> = v.discrete.iter().map(|(k, x)| format!("{k}={x}")).collect();
    if let Some(s) = &v.sample {
        parts.extend(s.iter().map(|(k, x)| format!("{k}={x}")));
    }
    if parts.is_empty() {
        String::new()
    } else {
        format!(" [{}]", parts.join(", "))
    }
}

fn text_entry(catalog: &Catalog, report: &EntryReport, out: &mut dyn Write) -> Result<()> {
    let verdict = if report.pass { "PASS" } else { "FAIL" };
    line(out, format!("{}: {verdict} ({} variant(s))", report.id, report.variants.len()))?;
    for v in report.variants.iter().filter(|v| !v.pass) {
        line(out, format!("  variant{}: t = {} (expected {})", variant_tag(v), v.t, v.expected_t))?;
        for (eq, w) in v.residuals() {
            if !w.is_zero() {
                line(out, format!("    {eq} residual: {}", catalog.algebra().display(w)))?;
            }
        }
        for (eq, block, terms) in v.failing_blocks() {
            line(out, format!("    {eq} in {block}: {terms} term(s)"))?;
        }
    }
    Ok(())
}

fn jsonl_entry(report: &EntryReport) -> Value {
    let variants: Vec<Value> = report
        .variants
        .iter()
        .map(|v| {
            let residuals: serde_json::Map<String, Value> = v
                .residuals()
                .iter()
                .map(|(eq, w)| (eq.to_string(), doc(w)))
                .collect();
            json!({
                "discrete": rat_map(&v.discrete),
                "sample": v.sample.as_ref().map(rat_map),
                "t": v.t.to_string(),
                "expected_t": v.expected_t.to_string(),
                "pass": v.pass,
                "residuals": residuals,
            })
        })
        .collect();
    json!({"id": report.id, "pass": report.pass, "variants": variants})
}

fn write_summary(summary: &Summary, fmt: OutputFormat, out: &mut dyn Write) -> Result<()> {
    let total = summary.reports.len();
    match fmt {
        OutputFormat::Text => {
            line(out, format!("summary: {}/{total} pass", summary.passed()))?;
            let failed = summary.failed_ids();
            if !failed.is_empty() {
                line(out, format!("failed: {}", failed.join(", ")))?;
            }
            Ok(())
        }
        OutputFormat::Jsonl => line(
            out,
            json!({"summary": {"passed": summary.passed(), "total": total, "failed": summary.failed_ids()}})
                .to_string(),
        ),
    }
}

/// Basis of the g-invariant trivectors; Ω itself when it spans them, so
/// that the reported coordinate is the usual t.
fn invariant_basis(p: &InhomogeneousAlgebra) -> Result<Vec<MultiVector>> {
    let spec = ModuleSpec::wedge(3, bialg::cohomology::Block::All);
    let space = invariants(p.algebra(), spec, Acting::G)?;
    let omega = p.omega_invariant();
    let module = Module::new(p.algebra(), spec)?;
    if space.dim() == 1 && !omega.is_zero() && space.contains(&module.coords_of(&omega)?) {
        return Ok(vec![omega]);
    }
    Ok(space.basis().iter().map(|b| module.element(b)).collect())
}

pub fn cmd_gcybe(p: &InhomogeneousAlgebra, file: &Path, fmt: OutputFormat, out: &mut dyn Write) -> Result<Outcome> {
    let r = load_multivector(p, file)?;
    let basis = invariant_basis(p)?;
    let verdict = gcybe_check(&r, &basis)?;
    let t = match &verdict {
        GcybeVerdict::InSpan { coords, .. } if coords.len() == 1 => Some(coords[0].to_string()),
        _ => None,
    };
    match fmt {
        OutputFormat::Text => {
            let rr = verdict.bracket();
            line(out, format!("[r,r] = {}", p.display(rr)))?;
            match &verdict {
                GcybeVerdict::InSpan { coords, .. } => {
                    match &t {
                        Some(t) => line(out, format!("t = {t}"))?,
                        None => {
                            let cs: Vec<String> = coords.iter().map(|c| c.to_string()).collect();
                            line(out, format!("invariant coordinates = [{}]", cs.join(", ")))?
                        }
                    }
                    line(out, "holds")?;
                }
                GcybeVerdict::Fails { residual, .. } => {
                    line(out, format!("Fails: residual off the invariants has {} term(s)", residual.num_terms()))?;
                }
            }
        }
        OutputFormat::Jsonl => {
            let mut obj = json!({"bracket": doc(verdict.bracket()), "holds": verdict.holds(), "t": t});
            match &verdict {
                GcybeVerdict::InSpan { coords, .. } => {
                    obj["coords"] = json!(coords.iter().map(|c| c.to_string()).collect::<Vec<_>>());
                }
                GcybeVerdict::Fails { residual, .. } => obj["residual"] = doc(residual),
            }
            line(out, obj.to_string())?;
        }
    }
    Ok(Outcome::from_pass(verdict.holds()))
}

fn basis_strings(basis: &[Vec<Rat>]) -> Vec<Vec<String>> {
    basis.iter().map(|v| v.iter().map(|x| x.to_string()).collect()).collect()
}

pub fn cmd_cohomology(
    p: &InhomogeneousAlgebra,
    spec: ModuleSpec,
    acting: Acting,
    emit_basis: bool,
    fmt: OutputFormat,
    out: &mut dyn Write,
) -> Result<Outcome> {
    let alg = p.algebra();
    let z = cocycle_space(alg, spec, acting)?;
    let b = coboundary_space(alg, spec, acting)?;
    let inv = invariants(alg, spec, acting)?;
    let consistent = b.is_subspace_of(&z);
    let h = z.dim().saturating_sub(b.dim());
    match fmt {
        OutputFormat::Text => {
            line(out, format!("module {spec}, acting {acting:?}"))?;
            line(out, format!("Z={} B={} H={h}", z.dim(), b.dim()))?;
            line(out, format!("invariants: dim = {}", inv.dim()))?;
            if emit_basis {
                let module = Module::new(alg, spec)?;
                line(out, "invariant basis:")?;
                for v in inv.basis() {
                    line(out, format!("  {}", p.display(&module.element(v))))?;
                }
                for (name, space) in [("Z", &z), ("B", &b)] {
                    line(out, format!("{name} basis:"))?;
                    for v in basis_strings(space.basis()) {
                        line(out, format!("  [{}]", v.join(", ")))?;
                    }
                }
            }
        }
        OutputFormat::Jsonl => {
            let mut obj = json!({
                "module": spec.to_string(),
                "acting": format!("{acting:?}"),
                "Z": z.dim(), "B": b.dim(), "H": h,
                "invariants": inv.dim(),
            });
            if emit_basis {
                let module = Module::new(alg, spec)?;
                obj["invariant_basis"] =
                    json!(inv.basis().iter().map(|v| doc(&module.element(v))).collect::<Vec<_>>());
                obj["Z_basis"] = json!(basis_strings(z.basis()));
                obj["B_basis"] = json!(basis_strings(b.basis()));
            }
            line(out, obj.to_string())?;
        }
    }
    Ok(Outcome::from_pass(consistent))
}

pub fn cmd_schouten(
    p: &InhomogeneousAlgebra,
    first: &Path,
    second: &Path,
    fmt: OutputFormat,
    out: &mut dyn Write,
) -> Result<Outcome> {
    let r = load_multivector(p, first)?;
    let s = load_multivector(p, second)?;
    let bracket = schouten_bracket(&r, &s)?;
    let blocks = if bracket.degree() == 3 {
        let parts = bracket.split3()?;
        bialg::exterior::GradedComponents3::NAMES
            .iter()
            .zip(parts.blocks())
            .map(|(n, w)| (n.to_string(), w.clone()))
            .collect()
    } else {
        Vec::new()
    };
    match fmt {
        OutputFormat::Text => {
            line(out, format!("[r,s] = {}", p.display(&bracket)))?;
            for (name, w) in &blocks {
                line(out, format!("  {name}: {}", p.display(w)))?;
            }
        }
        OutputFormat::Jsonl => {
            let blocks: serde_json::Map<String, Value> =
                blocks.iter().map(|(n, w)| (n.clone(), doc(w))).collect();
            line(out, json!({"bracket": doc(&bracket), "blocks": blocks}).to_string())?;
        }
    }
    Ok(Outcome::Pass)
}
