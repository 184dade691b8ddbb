mod render;

use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use pdcalc::arith::{Assignment, BaseRing, PrimeLevel, RingElem};
use pdcalc::complex::{BLComplex, SimplicialShape};
use pdcalc::invariant::{
    closed_invariant_forms, delta_map, delta_map_in, delta_universal, rank_scan, reduce_universal, GroupSpec,
    InvariantSetup,
};
use pdcalc::poincare::{build_de_rham, build_linearized};

use render::{DeltaColumn, DeltaTable, Term};

/// Environment variable capping the truncation degree and law precision.
const MAX_DEGREE_VAR: &str = "PDCALC_MAX_DEGREE";

#[derive(Parser)]
#[command(name = "pdcalc", version, about = "Divided-power invariant forms, comultiplication tables and filtered Poincaré checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Group {
    Ga,
    Gm,
    Legendre,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Shape {
    Product,
    ProductWithBase,
    ProductShifted,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum PoincareKind {
    Linearized,
    DeRham,
}

#[derive(Subcommand)]
enum Command {
    /// Closed invariant forms of level m and their Hodge filtration.
    InvariantForms(InvariantArgs),
    /// Rank of the closed invariant forms across the Legendre family.
    Scan(ScanArgs),
    /// Coefficient table of a formal group law.
    GroupLaw(GroupLawArgs),
    /// The comultiplication map on the basis of invariant forms.
    DeltaTable(DeltaArgs),
    /// Filtered exactness of the linearized complex.
    Poincare(PoincareArgs),
    /// Generators, relations and filtration lengths of a complex.
    Describe(DescribeArgs),
}

#[derive(Args)]
struct Level {
    /// The prime.
    #[arg(long)]
    p: u64,
    /// The level of the divided powers.
    #[arg(long, default_value_t = 1)]
    m: u32,
}

#[derive(Args)]
struct GroupChoice {
    #[arg(long, value_enum)]
    group: Group,
    /// Specialize the Legendre parameter to this integer.
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<i64>,
}

#[derive(Args)]
struct InvariantArgs {
    #[command(flatten)]
    level: Level,
    #[command(flatten)]
    group: GroupChoice,
    /// fp, zmod:N, fp-poly:NAME, fp-rational:NAME or gf:e.
    #[arg(long)]
    ring: Option<String>,
    /// Truncation degree (default 3 p^m).
    #[arg(long = "D")]
    d: Option<u32>,
    /// Ignore the comultiplication relations in degree two.
    #[arg(long)]
    naive: bool,
    /// Also scan the Legendre family over F_{p^e}.
    #[arg(long)]
    ext: Option<u32>,
}

#[derive(Args)]
struct ScanArgs {
    #[command(flatten)]
    level: Level,
    /// Scan the points of F_{p^e}.
    #[arg(long, default_value_t = 1)]
    ext: u32,
    #[arg(long = "D")]
    d: Option<u32>,
}

#[derive(Args)]
struct GroupLawArgs {
    #[arg(long, value_enum)]
    kind: Group,
    #[arg(long)]
    p: u64,
    /// Total-degree precision of the series.
    #[arg(long, default_value_t = 6)]
    prec: u32,
    /// Reduce the universal law to this ring.
    #[arg(long)]
    ring: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<i64>,
}

#[derive(Args)]
struct DeltaArgs {
    #[command(flatten)]
    level: Level,
    #[command(flatten)]
    group: GroupChoice,
    /// Defaults to the integral lift `universal`.
    #[arg(long)]
    ring: Option<String>,
    #[arg(long = "D")]
    d: Option<u32>,
}

#[derive(Args)]
struct PoincareArgs {
    #[command(flatten)]
    level: Level,
    /// Number of coordinates.
    #[arg(long, default_value_t = 1)]
    n: usize,
    #[arg(long, default_value = "fp")]
    ring: String,
    #[arg(long = "D")]
    d: Option<u32>,
    #[arg(long, value_enum, default_value_t = PoincareKind::Linearized)]
    kind: PoincareKind,
    /// Check this filtration index only.
    #[arg(long)]
    k: Option<u32>,
}

#[derive(Args)]
struct DescribeArgs {
    #[command(flatten)]
    level: Level,
    #[arg(long, value_enum, conflicts_with = "shape")]
    group: Option<Group>,
    #[arg(long, value_enum)]
    shape: Option<Shape>,
    #[arg(long, default_value_t = 1)]
    n: usize,
    #[arg(long)]
    ring: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<i64>,
    #[arg(long = "D")]
    d: Option<u32>,
    /// Highest cosimplicial degree to build.
    #[arg(long, default_value_t = 2)]
    max_r: usize,
}

/// A mistake in the invocation rather than in the computation.
#[derive(Debug)]
struct ConfigError(String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

fn config(msg: impl Into<String>) -> anyhow::Error {
    anyhow!(ConfigError(msg.into()))
}

fn exit_code(e: &anyhow::Error) -> u8 {
    use pdcalc::Error as E;
    if e.downcast_ref::<ConfigError>().is_some() {
        return 2;
    }
    match e.downcast_ref::<E>() {
        Some(E::NotPIntegral(_) | E::Inconsistent(_) | E::DimensionMismatch(_) | E::PrecisionUnreachable(_)) => 1,
        Some(_) => 2,
        None => 1,
    }
}

fn level(l: &Level) -> Result<PrimeLevel> {
    Ok(PrimeLevel::new(l.p, l.m)?)
}

fn max_degree() -> Result<Option<u32>> {
    match std::env::var(MAX_DEGREE_VAR) {
        Ok(v) => v.trim().parse().map(Some).map_err(|_| config(format!("{MAX_DEGREE_VAR}={v} is not an integer"))),
        Err(_) => Ok(None),
    }
}

fn capped(value: u32, what: &str) -> Result<u32> {
    match max_degree()? {
        Some(cap) if value > cap => Err(config(format!("{what} {value} exceeds {MAX_DEGREE_VAR}={cap}"))),
        _ => Ok(value),
    }
}

/// The requested truncation, or `3 p^m`.
fn truncation(pl: PrimeLevel, d: Option<u32>) -> Result<u32> {
    let auto = u32::try_from(3 * pl.pm()).map_err(|_| config("p^m too large for an automatic truncation"))?;
    capped(d.unwrap_or(auto), "truncation degree")
}

fn parse_ring(spec: &str, p: u64) -> Result<BaseRing> {
    BaseRing::from_spec(spec, p).map_err(|e| config(e.to_string()))
}

fn group_spec(group: Group, ring: &BaseRing) -> GroupSpec {
    match group {
        Group::Ga => GroupSpec::Additive,
        Group::Gm => GroupSpec::Multiplicative,
        Group::Legendre => GroupSpec::Legendre { param: ring.param().unwrap_or("lambda").to_string() },
    }
}

/// Binds the Legendre parameter when the ring has none of its own.
fn assignment(group: Group, ring: &BaseRing, lambda: Option<i64>) -> Result<Assignment> {
    let mut a = Assignment::new();
    match (group, lambda, ring.param()) {
        (Group::Legendre, Some(_), Some(param)) => {
            return Err(config(format!("--lambda conflicts with the parameter `{param}` of the ring")));
        }
        (Group::Legendre, Some(v), None) => {
            if matches!(ring, BaseRing::Universal { .. }) {
                return Err(config("--lambda needs a concrete ring"));
            }
            a.insert("lambda".into(), ring.from_int(v));
        }
        (Group::Legendre, None, None) if !matches!(ring, BaseRing::Universal { .. }) => {
            return Err(config(format!("legendre over {ring} needs --lambda or a ring such as fp-rational:lambda")));
        }
        (_, Some(_), _) => return Err(config("--lambda only applies to the legendre group")),
        _ => {}
    }
    Ok(a)
}

fn default_ring(group: Group) -> &'static str {
    match group {
        Group::Legendre => "fp-rational:lambda",
        _ => "fp",
    }
}

fn setup(l: &Level, g: &GroupChoice, ring: Option<&str>, d: Option<u32>, fallback: &str) -> Result<InvariantSetup> {
    let pl = level(l)?;
    let ring = parse_ring(ring.unwrap_or(fallback), pl.p())?;
    let a = assignment(g.group, &ring, g.lambda)?;
    let d = truncation(pl, d)?;
    Ok(InvariantSetup::new(group_spec(g.group, &ring), pl, ring, a, d)?)
}

struct Output {
    format: Format,
    sink: Box<dyn Write>,
}

impl Output {
    fn json<T: Serialize>(&mut self, value: &T) -> Result<()> {
        serde_json::to_writer_pretty(&mut self.sink, value)?;
        writeln!(self.sink)?;
        Ok(())
    }

    fn text(&mut self, s: &str) -> Result<()> {
        self.sink.write_all(s.as_bytes())?;
        Ok(())
    }

    fn csv<R: Serialize>(&mut self, rows: impl IntoIterator<Item = R>) -> Result<()> {
        let mut w = csv::Writer::from_writer(&mut self.sink);
        for r in rows {
            w.serialize(r)?;
        }
        w.flush()?;
        Ok(())
    }
}

fn invariant_forms(args: &InvariantArgs, out: &mut Output) -> Result<()> {
    let s = setup(&args.level, &args.group, args.ring.as_deref(), args.d, default_ring(args.group.group))?
        .with_naive(args.naive);
    let mut result = closed_invariant_forms(&s)?;
    if let Some(ext) = args.ext {
        if args.group.group != Group::Legendre {
            return Err(config("--ext only applies to the legendre group"));
        }
        result.scan = rank_scan(s.pl, ext, s.d)?.points;
    }
    match out.format {
        Format::Json => out.json(&result),
        Format::Csv => out.csv(render::fil_rows(&result)),
        Format::Text => out.text(&render::invariant_text(&result)),
    }
}

fn scan(args: &ScanArgs, out: &mut Output) -> Result<()> {
    let pl = level(&args.level)?;
    if pl.p() == 2 {
        return Err(config("the Legendre family needs p != 2"));
    }
    let d = truncation(pl, args.d)?;
    let result = rank_scan(pl, args.ext, d)?;
    match out.format {
        Format::Json => out.json(&result),
        Format::Csv => out.csv(render::scan_rows(&result)),
        Format::Text => out.text(&render::scan_text(&result)),
    }
}

fn group_law(args: &GroupLawArgs, out: &mut Output) -> Result<()> {
    let prec = capped(args.prec, "precision")?;
    let ring = parse_ring(args.ring.as_deref().unwrap_or("universal"), args.p)?;
    let mut a = assignment(args.kind, &ring, args.lambda)?;
    let universal = group_spec(args.kind, &ring).law(args.p, prec)?;
    let law = if matches!(ring, BaseRing::Universal { .. }) {
        universal
    } else {
        if let Some(param) = ring.param() {
            a.insert(param.to_string(), ring.generator()?);
        }
        universal.reduce(&ring, &a)?
    };
    let axioms = law.verify_axioms()?;
    #[derive(Serialize)]
    struct Report {
        law: pdcalc::formal_group::LawReport,
        axioms: pdcalc::formal_group::AxiomReport,
    }
    let report = Report { law: law.report(), axioms };
    match out.format {
        Format::Json => out.json(&report),
        Format::Csv => out.csv(report.law.coefficients.iter()),
        Format::Text => out.text(&render::law_text(&report.law, &report.axioms)),
    }
}

fn term_list(labels: &[String], ring: &BaseRing, entries: impl IntoIterator<Item = (usize, RingElem)>) -> Vec<Term> {
    entries
        .into_iter()
        .filter(|(_, c)| !ring.is_zero(c))
        .map(|(i, c)| Term { label: labels[i].clone(), coeff: ring.format(&c) })
        .collect()
}

fn delta_table(args: &DeltaArgs, out: &mut Output) -> Result<()> {
    let s = setup(&args.level, &args.group, args.ring.as_deref(), args.d, "universal")?;
    let labels = s.complex.labels(2)?;
    let raw = delta_map(&s)?;
    let mut columns = Vec::new();
    if let BaseRing::Universal { .. } = s.ring {
        let u = &s.ring;
        for (j, v) in delta_universal(&s)?.iter().enumerate() {
            let reduced = reduce_universal(&s, v)?;
            let as_elems = |v: &pdcalc::complex::SparseVec| -> Vec<(usize, RingElem)> {
                v.iter().map(|(&i, c)| (i, RingElem::Univ(c.clone()))).collect()
            };
            columns.push(DeltaColumn {
                form: raw.col_labels[j].clone(),
                image: term_list(&labels, u, as_elems(v)),
                reduced: term_list(&labels, u, as_elems(&reduced)),
            });
        }
    } else {
        let work = s.complex.work_ring()?;
        let in_work = delta_map_in(&s, &work)?;
        let pres = s.complex.presentation(2)?;
        for j in 0..raw.matrix.cols() {
            let col = in_work.matrix.column(j);
            let reduced = pres.reduce(&col);
            columns.push(DeltaColumn {
                form: raw.col_labels[j].clone(),
                image: term_list(&labels, &work, col.into_iter().enumerate()),
                reduced: term_list(&labels, &work, reduced.into_iter().enumerate()),
            });
        }
    }
    let table = DeltaTable {
        group: s.group.name(),
        p: s.pl.p(),
        m: s.pl.m(),
        ring: s.ring.to_string(),
        d: s.d,
        columns,
        matrix: raw.report(),
    };
    match out.format {
        Format::Json => out.json(&table),
        Format::Csv => out.csv(render::delta_rows(&table)),
        Format::Text => out.text(&render::delta_text(&table)),
    }
}

fn poincare(args: &PoincareArgs, out: &mut Output) -> Result<()> {
    let pl = level(&args.level)?;
    let ring = parse_ring(&args.ring, pl.p())?;
    let d = truncation(pl, args.d)?;
    let complex = match args.kind {
        PoincareKind::Linearized => build_linearized(pl, args.n, ring, d)?,
        PoincareKind::DeRham => build_de_rham(pl, args.n, ring, d)?,
    };
    let mut report = complex.report_for(args.k)?;
    report.checks.sort_by_key(|c| (c.k, c.position));
    match out.format {
        Format::Json => out.json(&report),
        Format::Csv => out.csv(report.checks.iter()),
        Format::Text => out.text(&render::poincare_text(&report)),
    }
}

trait ReportFor {
    fn report_for(&self, k: Option<u32>) -> Result<pdcalc::poincare::PoincareReport>;
}

impl ReportFor for pdcalc::poincare::LinearizedComplex {
    fn report_for(&self, k: Option<u32>) -> Result<pdcalc::poincare::PoincareReport> {
        let mut report = self.report()?;
        if let Some(k) = k {
            if k > report.band {
                return Err(pdcalc::Error::BandViolation { k, max: report.band }.into());
            }
            report.checks.retain(|c| c.k == k);
            report.all_exact = report.checks.iter().all(|c| c.exact);
        }
        Ok(report)
    }
}

fn describe(args: &DescribeArgs, out: &mut Output) -> Result<()> {
    let pl = level(&args.level)?;
    let d = truncation(pl, args.d)?;
    let (shape, ring, a) = match (args.group, args.shape) {
        (Some(g), None) => {
            let ring = parse_ring(args.ring.as_deref().unwrap_or(default_ring(g)), pl.p())?;
            let a = assignment(g, &ring, args.lambda)?;
            let spec = group_spec(g, &ring);
            let shape = SimplicialShape::group(spec.law(pl.p(), d.max(3))?)?.with_letter(spec.letter());
            (shape, ring, a)
        }
        (None, Some(s)) => {
            if args.lambda.is_some() {
                return Err(config("--lambda only applies to the legendre group"));
            }
            let ring = parse_ring(args.ring.as_deref().unwrap_or("fp"), pl.p())?;
            let shape = match s {
                Shape::Product => SimplicialShape::product(args.n),
                Shape::ProductWithBase => SimplicialShape::product_with_base(args.n),
                Shape::ProductShifted => SimplicialShape::product_shifted(args.n),
            };
            (shape, ring, Assignment::new())
        }
        _ => return Err(config("describe needs exactly one of --group or --shape")),
    };
    let complex = BLComplex::build(shape, pl, ring, a, d, args.max_r)?;
    let summary = complex.summary()?;
    match out.format {
        Format::Json => out.json(&summary),
        Format::Csv => out.csv(render::describe_rows(&summary)),
        Format::Text => out.text(&render::describe_text(&summary)),
    }
}

fn run(cli: &Cli) -> Result<()> {
    let sink: Box<dyn Write> = match &cli.output {
        Some(path) => Box::new(io::BufWriter::new(
            File::create(path).with_context(|| format!("cannot create {}", path.display()))?,
        )),
        None => Box::new(io::BufWriter::new(io::stdout().lock())),
    };
    let mut out = Output { format: cli.format, sink };
    match &cli.command {
        Command::InvariantForms(a) => invariant_forms(a, &mut out)?,
        Command::Scan(a) => scan(a, &mut out)?,
        Command::GroupLaw(a) => group_law(a, &mut out)?,
        Command::DeltaTable(a) => delta_table(a, &mut out)?,
        Command::Poincare(a) => poincare(a, &mut out)?,
        Command::Describe(a) => describe(a, &mut out)?,
    }
    out.sink.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
