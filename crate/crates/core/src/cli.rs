//! Command-line front end. Every artifact carries the tool version, an echo
//! of the configuration and the seed, so identical invocations produce
//! identical bytes.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::asymptotics::{binomial_gaussian_ratio, gaussian_experiment, p_of, EntrySource, GaussianSequenceSpec};
use crate::curves::{curve_normalized, curve_profile, CurveEmbedding, RegimeGuard};
use crate::decomposition::decompose;
use crate::error::{Error, Result};
use crate::io::{self, AnyTable};
use crate::report::{ExperimentPoint, ExperimentReport};
use crate::sampling::{
    estimate_deviation_probability, expected_table, mean_table, sample_uniform, table_of, SamplingConfig,
};
use crate::svg::{self, Panel, Series, Style};
use crate::tables::{pure_diagram, rational_to_f64, ExactTable, FloatTable, IndexSet};
use crate::weighted::{weighted_expected, weighted_gaussian_experiment, weighted_sample, WeightFunction};

pub const TOOL: &str = "betti";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Debug, Parser, Serialize)]
#[command(name = "betti", version, about = "Pure Betti diagrams, random Betti tables and their Gaussian limits")]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    pub format: Format,
    /// Write here instead of standard output.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub output: Option<PathBuf>,
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,
    /// Cap on worker threads.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "lowercase", tag = "subcommand")]
pub enum Command {
    /// Pure diagram pi(r, I).
    Pure(PureArgs),
    /// Exact expected random table.
    Expect(ExpectArgs),
    /// One random table, or the mean of several.
    Sample(SampleArgs),
    /// Deviation probabilities of the normalized entry over a grid of r.
    Converge(ConvergeArgs),
    /// Stirling-normalized Gaussian experiments.
    Gauss(GaussArgs),
    /// k_{p,1} profile of a curve embedding.
    Curve(CurveArgs),
    /// Weighted two-row tables.
    Weighted(WeightedArgs),
    /// Decompose a two-row table read from CSV or JSON.
    Decompose(DecomposeArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct PureArgs {
    #[arg(long)]
    pub r: usize,
    #[arg(long)]
    pub n: usize,
    /// The n-1 elements of I, comma separated.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub index: Vec<usize>,
    /// Emit floating point entries.
    #[arg(long)]
    pub float: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct ExpectArgs {
    #[arg(long)]
    pub r: usize,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub float: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct SampleArgs {
    #[arg(long)]
    pub r: usize,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 1)]
    pub samples: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct ConvergeArgs {
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    #[arg(long, default_value_t = 1)]
    pub q: usize,
    #[arg(long, value_delimiter = ',', num_args = 1.., default_values_t = [200usize, 500, 2000])]
    pub r_values: Vec<usize>,
    /// Column p = round(r/2 + a sqrt(r)/2).
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub a: f64,
    #[arg(long, default_value_t = 0.1)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GaussSource {
    /// sqrt(2 pi r) / 2^{r+1} C(r, p_r).
    Binomial,
    Expected,
    Sampled,
}

#[derive(Debug, Args, Serialize)]
pub struct GaussArgs {
    #[arg(long, value_enum, default_value_t = GaussSource::Expected)]
    pub source: GaussSource,
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    #[arg(long, default_value_t = 1)]
    pub q: usize,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub a: f64,
    #[arg(long, value_delimiter = ',', num_args = 1.., default_values_t = [200usize, 500, 1000, 2000])]
    pub r_values: Vec<usize>,
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
    #[arg(long, default_value_t = 0.05)]
    pub tolerance: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct CurveArgs {
    #[arg(long)]
    pub genus: usize,
    #[arg(long)]
    pub degree: usize,
    #[arg(long, value_enum, default_value_t = GuardArg::Strict)]
    pub guard: GuardArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GuardArg {
    Strict,
    Warn,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightedMode {
    Sample,
    Expect,
    Gauss,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightKind {
    Constant,
    Sin2,
    Table,
}

#[derive(Debug, Args, Serialize)]
pub struct WeightedArgs {
    #[arg(long, value_enum, default_value_t = WeightedMode::Sample)]
    pub mode: WeightedMode,
    #[arg(long, default_value_t = 500)]
    pub r: usize,
    #[arg(long, value_enum, default_value_t = WeightKind::Sin2)]
    pub weight: WeightKind,
    /// Value of the constant weight.
    #[arg(long, default_value_t = 1.0)]
    pub value: f64,
    /// Shift s of sin^2(2 pi (t - s)).
    #[arg(long, default_value_t = 0.35, allow_hyphen_values = true)]
    pub shift: f64,
    /// Two-column t,h CSV for the table weight.
    #[arg(long)]
    pub weight_file: Option<PathBuf>,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub a: f64,
    #[arg(long, value_delimiter = ',', num_args = 1.., default_values_t = [200usize, 500, 1000, 2000])]
    pub r_values: Vec<usize>,
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
    #[arg(long, default_value_t = 0.05)]
    pub tolerance: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct DecomposeArgs {
    /// Exact two-row table, CSV (p,q,num,den) or JSON.
    #[arg(long)]
    pub input: PathBuf,
}

/// Provenance stamp shared by every output format.
fn stamp(cli: &Cli) -> Value {
    json!({
        "tool": { "name": TOOL, "version": VERSION },
        "config": cli,
        "seed": cli.seed,
    })
}

fn csv_meta(cli: &Cli) -> Vec<String> {
    let s = stamp(cli);
    vec![format!("tool: {TOOL} {VERSION}"), format!("config: {}", s["config"]), format!("seed: {}", cli.seed)]
}

fn json_doc(cli: &Cli, result: Value) -> String {
    let mut doc = stamp(cli);
    doc["result"] = result;
    let mut s = serde_json::to_string_pretty(&doc).expect("JSON values serialize");
    s.push('\n');
    s
}

fn svg_doc(cli: &Cli, panels: &[Panel]) -> String {
    svg::render(panels, &stamp(cli).to_string())
}

fn table_panel(title: String, table: &FloatTable) -> Panel {
    let series = (1..=table.n())
        .map(|q| Series {
            label: format!("q={q}"),
            style: Style::Scatter,
            points: table.row(q).iter().enumerate().map(|(p, &v)| (p as f64, v)).collect(),
        })
        .collect();
    Panel { title, x_label: "p".into(), y_label: "k_{p,q}".into(), series }
}

fn emit_exact(cli: &Cli, title: String, table: &ExactTable, extra: Value) -> String {
    match cli.format {
        Format::Csv => io::exact_table_csv(table, &csv_meta(cli)),
        Format::Json => json_doc(cli, with_table(extra, io::exact_table_json(table))),
        Format::Svg => svg_doc(cli, &[table_panel(title, &table.to_float())]),
    }
}

fn emit_float(cli: &Cli, title: String, table: &FloatTable, extra: Value) -> String {
    match cli.format {
        Format::Csv => io::float_table_csv(table, &csv_meta(cli)),
        Format::Json => json_doc(cli, with_table(extra, io::float_table_json(table))),
        Format::Svg => svg_doc(cli, &[table_panel(title, table)]),
    }
}

fn with_table(mut extra: Value, table: Value) -> Value {
    if !extra.is_object() {
        extra = json!({});
    }
    extra["table"] = table;
    extra
}

fn emit_report(cli: &Cli, report: &ExperimentReport, y_label: &str) -> String {
    match cli.format {
        Format::Csv => {
            let mut out: String = csv_meta(cli).iter().map(|m| format!("# {m}\n")).collect();
            out.push_str(&format!("# passed: {}\n", report.passed));
            out.push_str("r,p_r,value,target,abs_error\n");
            for pt in &report.per_r {
                out.push_str(&format!("{},{},{},{},{}\n", pt.r, pt.p_r, pt.value, pt.target, pt.abs_error));
            }
            out
        }
        Format::Json => json_doc(cli, serde_json::to_value(report).expect("report serializes")),
        Format::Svg => {
            let line = |label: &str, f: fn(&ExperimentPoint) -> f64| Series {
                label: label.into(),
                style: Style::Line,
                points: report.per_r.iter().map(|pt| (pt.r as f64, f(pt))).collect(),
            };
            let panel = Panel {
                title: format!("{} experiment", report.kind),
                x_label: "r".into(),
                y_label: y_label.into(),
                series: vec![line("value", |pt| pt.value), line("target", |pt| pt.target)],
            };
            svg_doc(cli, &[panel])
        }
    }
}

fn weight_of(args: &WeightedArgs) -> Result<WeightFunction> {
    match args.weight {
        WeightKind::Constant => WeightFunction::constant(args.value),
        WeightKind::Sin2 => WeightFunction::sin2(args.shift),
        WeightKind::Table => {
            let path = args
                .weight_file
                .as_ref()
                .ok_or_else(|| Error::Parameter("--weight table needs --weight-file".into()))?;
            WeightFunction::from_csv(std::fs::File::open(path)?)
        }
    }
}

fn weight_panel(h: &WeightFunction) -> Panel {
    let points = (0..=400).map(|k| k as f64 / 400.0).map(|t| (t, h.eval(t))).collect();
    Panel {
        title: format!("weight {h}"),
        x_label: "t".into(),
        y_label: "h(t)".into(),
        series: vec![Series { label: "h".into(), style: Style::Line, points }],
    }
}

fn run_weighted(cli: &Cli, args: &WeightedArgs, cfg: &SamplingConfig) -> Result<String> {
    let h = weight_of(args)?;
    let table = match args.mode {
        WeightedMode::Gauss => {
            let report =
                weighted_gaussian_experiment(&h, &args.r_values, args.a, cli.seed, args.samples, args.tolerance)?;
            return Ok(emit_report(cli, &report, "F_1(r) k_{p_r,1}"));
        }
        WeightedMode::Sample => table_of(&weighted_sample(args.r, 2, &h, cli.seed)?, cfg)?,
        WeightedMode::Expect => {
            let mut cells = Vec::new();
            for q in 1..=2 {
                for p in 0..=args.r.saturating_sub(2) {
                    cells.push((p, q, weighted_expected(args.r, p, q, &h)?));
                }
            }
            FloatTable::from_entries(args.r, 2, cells)?
        }
    };
    let title = format!("weighted table r={} h={h}", args.r);
    Ok(match cli.format {
        Format::Svg => svg_doc(cli, &[weight_panel(&h), table_panel(title, &table)]),
        _ => emit_float(cli, title, &table, json!({ "weight": h })),
    })
}

fn read_exact_table(path: &PathBuf) -> Result<ExactTable> {
    let text = std::fs::read_to_string(path)?;
    let parsed = if text.trim_start().starts_with('{') {
        // accept documents written by this tool as well as bare tables
        let v: Value = serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
        let inner = v.get("result").unwrap_or(&v);
        let inner = inner.get("table").unwrap_or(inner);
        io::read_table_json(&inner.to_string())?
    } else {
        io::read_table_csv(&text)?
    };
    match parsed {
        AnyTable::Exact(t) => Ok(t),
        AnyTable::Float(_) => Err(Error::Mode("decomposition needs an exact table".into())),
    }
}

/// Runs one invocation and returns the artifact text.
pub fn run(cli: &Cli) -> Result<String> {
    let cfg = SamplingConfig::from_env()?;
    match &cli.command {
        Command::Pure(a) => {
            let is = IndexSet::new(a.r, a.n, a.index.clone())?;
            let pd = pure_diagram(a.r, a.n, &is)?;
            let extra = json!({ "index_set": is.elements(), "degree_sequence": pd.degree_sequence.degrees() });
            let title = format!("pure diagram r={} I={is}", a.r);
            Ok(if a.float {
                emit_float(cli, title, &pd.table.to_float(), extra)
            } else {
                emit_exact(cli, title, &pd.table, extra)
            })
        }
        Command::Expect(a) => {
            let t = expected_table(a.r, a.n)?;
            let title = format!("expected table r={} n={}", a.r, a.n);
            Ok(if a.float {
                emit_float(cli, title, &t.to_float(), json!({}))
            } else {
                emit_exact(cli, title, &t, json!({}))
            })
        }
        Command::Sample(a) => {
            let title = format!("random Betti table r={} n={}", a.r, a.n);
            if a.samples <= 1 {
                let t = table_of(&sample_uniform(a.r, a.n, cli.seed, &cfg)?, &cfg)?;
                Ok(emit_float(cli, title, &t, json!({ "samples": 1 })))
            } else {
                let m = mean_table(a.r, a.n, a.samples, cli.seed, &cfg)?;
                let extra = json!({ "samples": m.samples, "standard_error": io::float_table_json(&m.standard_error) });
                Ok(emit_float(cli, format!("mean of {} {title}", a.samples), &m.mean, extra))
            }
        }
        Command::Converge(a) => {
            let mut rows = Vec::new();
            for &r in &a.r_values {
                let p = p_of(r, a.a)?;
                rows.push(estimate_deviation_probability(r, a.n, p, a.q, a.epsilon, a.samples, cli.seed, &cfg)?);
            }
            Ok(match cli.format {
                Format::Csv => {
                    let mut out: String = csv_meta(cli).iter().map(|m| format!("# {m}\n")).collect();
                    out.push_str("r,p,hit_fraction,standard_error,analytic_ratio_std\n");
                    for e in &rows {
                        out.push_str(&format!(
                            "{},{},{},{},{}\n",
                            e.r, e.p, e.hit_fraction, e.standard_error, e.analytic_ratio_std
                        ));
                    }
                    out
                }
                Format::Json => json_doc(cli, serde_json::to_value(&rows).expect("estimates serialize")),
                Format::Svg => {
                    let points = rows.iter().map(|e| (e.r as f64, e.hit_fraction)).collect();
                    let panel = Panel {
                        title: format!("P(|ratio - 1| > {})", a.epsilon),
                        x_label: "r".into(),
                        y_label: "deviation probability".into(),
                        series: vec![Series { label: "estimate".into(), style: Style::Line, points }],
                    };
                    svg_doc(cli, &[panel])
                }
            })
        }
        Command::Gauss(a) => {
            let report = match a.source {
                GaussSource::Binomial => {
                    let target = (-a.a * a.a / 2.0).exp();
                    let mut pts = Vec::new();
                    for &r in &a.r_values {
                        let p = p_of(r, a.a)?;
                        pts.push(ExperimentPoint::new(r, p, binomial_gaussian_ratio(r, p)?, target));
                    }
                    ExperimentReport::new(
                        "binomial",
                        json!({ "a": a.a, "r_values": a.r_values }),
                        None,
                        a.tolerance,
                        pts,
                    )
                }
                source => {
                    let spec = GaussianSequenceSpec { a: a.a, r_values: a.r_values.clone(), n: a.n, q: a.q };
                    let src = match source {
                        GaussSource::Sampled => EntrySource::Sampled { seed: cli.seed, samples: a.samples },
                        _ => EntrySource::Expected,
                    };
                    gaussian_experiment(&spec, src, a.tolerance, &cfg)?
                }
            };
            Ok(emit_report(cli, &report, "normalized entry"))
        }
        Command::Curve(a) => {
            let guard = match a.guard {
                GuardArg::Strict => RegimeGuard::Strict,
                GuardArg::Warn => RegimeGuard::Warn,
            };
            let e = CurveEmbedding::with_guard(a.genus, a.degree, guard)?;
            let profile = curve_profile(&e);
            Ok(match cli.format {
                Format::Csv => {
                    let cells = profile.iter().map(|(p, v)| (*p, 1, v.clone()));
                    let mut out: String = csv_meta(cli).iter().map(|m| format!("# {m}\n")).collect();
                    out.push_str("p,q,num,den\n");
                    for (p, q, v) in cells {
                        out.push_str(&format!("{p},{q},{},{}\n", v.numer(), v.denom()));
                    }
                    out
                }
                Format::Json => {
                    let rows: Vec<_> = profile
                        .iter()
                        .map(|(p, v)| {
                            let norm = curve_normalized(&e, *p).expect("inside regime");
                            json!({ "p": p, "value": io::format_rational(v), "normalized": norm })
                        })
                        .collect();
                    let res = json!({ "genus": e.genus(), "degree": e.degree(), "r_d": e.r_d(), "regime_max": e.regime_max(), "profile": rows });
                    json_doc(cli, res)
                }
                Format::Svg => {
                    let points = profile.iter().map(|(p, v)| (*p as f64, rational_to_f64(v))).collect();
                    let panel = Panel {
                        title: format!("k_(p,1) for genus {} degree {}", e.genus(), e.degree()),
                        x_label: "p".into(),
                        y_label: "k_{p,q}".into(),
                        series: vec![Series { label: "q=1".into(), style: Style::Scatter, points }],
                    };
                    svg_doc(cli, &[panel])
                }
            })
        }
        Command::Weighted(a) => run_weighted(cli, a, &cfg),
        Command::Decompose(a) => {
            let d = decompose(&read_exact_table(&a.input)?)?;
            Ok(match cli.format {
                Format::Csv => {
                    let mut out: String = csv_meta(cli).iter().map(|m| format!("# {m}\n")).collect();
                    out.push_str("i,num,den\n");
                    for (k, x) in d.coefficients().iter().enumerate() {
                        out.push_str(&format!("{},{},{}\n", k + 1, x.numer(), x.denom()));
                    }
                    out
                }
                Format::Json => json_doc(cli, d.to_json()),
                Format::Svg => {
                    let points = d
                        .coefficients()
                        .iter()
                        .enumerate()
                        .map(|(k, x)| ((k + 1) as f64, rational_to_f64(x)))
                        .collect();
                    let panel = Panel {
                        title: format!("decomposition r={}", d.r()),
                        x_label: "i".into(),
                        y_label: "x_i".into(),
                        series: vec![Series { label: "x_i".into(), style: Style::Scatter, points }],
                    };
                    svg_doc(cli, &[panel])
                }
            })
        }
    }
}

/// Machine-readable error report for standard error.
pub fn error_json(e: &Error) -> String {
    json!({ "error": e.kind(), "message": e.to_string(), "exit_code": e.exit_code() }).to_string()
}
