use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use syzygy_core::bounds::{self, ThresholdClass};
use syzygy_core::construct::{self, Strictness};
use syzygy_core::criterion::{self, Status};
use syzygy_core::document::{
    CheckPath, ConstructionDocument, Exact, ExteriorDocument, InputEcho, MonomialSetDocument,
    SubspaceDocument, VerdictDocument, TOOL_NAME, TOOL_VERSION,
};
use syzygy_core::exterior::{FamilyCheck, IndexFamilies};
use syzygy_core::secant::{self, QuadricFunctional, SecantVerdict};
use syzygy_core::{linalg, Error};

use crate::EXIT_USAGE;

pub const EXIT_SEMISTABLE: u8 = 10;
pub const EXIT_UNSTABLE: u8 = 20;
pub const EXIT_RESOURCE: u8 = 70;
pub const EXIT_UNATTAINABLE: u8 = 75;
pub const EXIT_FAILURE: u8 = 1;

#[derive(Debug, Parser)]
#[command(name = "syzygy", version, about = "Exact stability certificates for monomial syzygy bundles")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Counting polynomial, stability threshold and gap inequality.
    Bounds {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        d: u32,
        #[arg(long)]
        c: Option<u32>,
        #[command(flatten)]
        io: Output,
    },
    /// Certify (semi)stability of a monomial set.
    Check {
        #[arg(long, value_enum, default_value_t = Mode::Auto)]
        mode: Mode,
        /// Largest set size accepted by the mixed-degree subset search.
        #[arg(long, default_value_t = criterion::DEFAULT_SUBSET_BUDGET)]
        budget: usize,
        #[command(flatten)]
        io: InputOutput,
    },
    /// Build a certified monomial subspace of the given shape.
    Construct {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        d: u32,
        #[arg(long)]
        m: u64,
        #[arg(long, value_enum, default_value_t = Require::Strict)]
        require: Require,
        #[command(flatten)]
        io: Output,
    },
    /// Construct and verify every m in a range.
    Sweep {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        d: u32,
        #[arg(long)]
        m_min: Option<u64>,
        #[arg(long)]
        m_max: Option<u64>,
        #[arg(long, value_enum, default_value_t = Require::Strict)]
        require: Require,
        #[arg(long)]
        jobs: Option<usize>,
        /// Plain-text table instead of JSON.
        #[arg(long)]
        table: bool,
        #[command(flatten)]
        io: Output,
    },
    /// Classify every base point free m-subset of S_d.
    Exhaustive {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        d: u32,
        #[arg(long)]
        m: u64,
        #[arg(long, default_value_t = criterion::DEFAULT_EXHAUSTIVE_GUARD)]
        guard: u128,
        #[arg(long)]
        jobs: Option<usize>,
        #[command(flatten)]
        io: Output,
    },
    /// Koszul closedness, decomposability and index families of an exterior element.
    Decompose {
        #[command(flatten)]
        io: InputOutput,
    },
    /// Secant test for a 5-dimensional space of ternary quadrics.
    Secant {
        #[command(flatten)]
        io: InputOutput,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Mode {
    Auto,
    Equal,
    Mixed,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Require {
    Strict,
    Nonstrict,
}

impl From<Require> for Strictness {
    fn from(r: Require) -> Self {
        match r {
            Require::Strict => Strictness::Strict,
            Require::Nonstrict => Strictness::NonStrict,
        }
    }
}

#[derive(Debug, Args)]
struct Output {
    /// Write the document here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct InputOutput {
    /// Read the document from here instead of stdin.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl From<Error> for CliError {
    fn from(err: Error) -> Self {
        let code = match err {
            Error::Domain(_) | Error::Parse(_) => EXIT_USAGE,
            Error::Resource(_) => EXIT_RESOURCE,
            Error::Unattainable(_) => EXIT_UNATTAINABLE,
            Error::Verification(_) => EXIT_FAILURE,
        };
        CliError {
            code,
            message: err.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> CliError {
    CliError {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

type CliResult<T> = Result<T, CliError>;

fn status_code(status: Status) -> u8 {
    match status {
        Status::Stable => 0,
        Status::StrictlySemistable => EXIT_SEMISTABLE,
        Status::Unstable => EXIT_UNSTABLE,
    }
}

fn read_input(path: &Option<PathBuf>) -> CliResult<String> {
    match path {
        Some(p) => fs::read_to_string(p).map_err(|e| usage(format!("cannot read {}: {e}", p.display()))),
        None => {
            let mut text = String::new();
            io::stdin()
                .read_to_string(&mut text)
                .map_err(|e| usage(format!("cannot read stdin: {e}")))?;
            Ok(text)
        }
    }
}

fn parse_doc<T: serde::de::DeserializeOwned>(text: &str) -> CliResult<T> {
    serde_json::from_str(text).map_err(|e| usage(format!("invalid document: {e}")))
}

fn emit(path: &Option<PathBuf>, text: &str) -> CliResult<()> {
    let written = match path {
        Some(p) => fs::write(p, format!("{text}\n")),
        None => writeln!(io::stdout().lock(), "{text}"),
    };
    written.map_err(|e| CliError {
        code: EXIT_FAILURE,
        message: format!("cannot write output: {e}"),
    })
}

fn emit_json<T: Serialize>(path: &Option<PathBuf>, value: &T) -> CliResult<()> {
    let text = serde_json::to_string_pretty(value).expect("documents serialize");
    emit(path, &text)
}

fn pool(jobs: Option<usize>) -> CliResult<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(j) = jobs {
        if j == 0 {
            return Err(usage("--jobs must be at least 1"));
        }
        builder = builder.num_threads(j);
    }
    builder.build().map_err(|e| CliError {
        code: EXIT_RESOURCE,
        message: format!("cannot start worker pool: {e}"),
    })
}

pub fn run(cli: Cli) -> CliResult<u8> {
    match cli.command {
        Command::Bounds { n, d, c, io } => cmd_bounds(n, d, c, &io.output),
        Command::Check { mode, budget, io } => cmd_check(mode, budget, &io),
        Command::Construct { n, d, m, require, io } => cmd_construct(n, d, m, require.into(), &io.output),
        Command::Sweep {
            n,
            d,
            m_min,
            m_max,
            require,
            jobs,
            table,
            io,
        } => cmd_sweep(n, d, (m_min, m_max), require.into(), jobs, table, &io.output),
        Command::Exhaustive { n, d, m, guard, jobs, io } => cmd_exhaustive(n, d, m, guard, jobs, &io.output),
        Command::Decompose { io } => cmd_decompose(&io),
        Command::Secant { io } => cmd_secant(&io),
    }
}

#[derive(Serialize)]
struct ClassRow {
    m: u64,
    class: ThresholdClass,
}

#[derive(Serialize)]
struct BoundsDocument {
    tool: &'static str,
    version: &'static str,
    #[serde(flatten)]
    report: bounds::BoundReport,
    classes: Vec<ClassRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    c: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    gap_holds: Option<bool>,
}

fn cmd_bounds(n: u32, d: u32, c: Option<u32>, out: &Option<PathBuf>) -> CliResult<u8> {
    let report = bounds::bound_report(n, d)?;
    let classes = (u64::from(n) + 1..=bounds::count_monomials(n, d))
        .map(|m| Ok(ClassRow { m, class: bounds::classify_by_threshold(n, d, m)? }))
        .collect::<Result<Vec<_>, Error>>()?;
    let gap_holds = c.map(|c| bounds::flenner_gap_holds(n, d, c)).transpose()?;
    emit_json(
        out,
        &BoundsDocument {
            tool: TOOL_NAME,
            version: TOOL_VERSION,
            report,
            classes,
            c,
            gap_holds,
        },
    )?;
    Ok(0)
}

fn cmd_check(mode: Mode, budget: usize, io: &InputOutput) -> CliResult<u8> {
    let doc = MonomialSetDocument::parse_json(&read_input(&io.input)?)?;
    let set = doc.to_set()?;
    let path = match mode {
        Mode::Auto if set.uniform_degree().is_some() => CheckPath::Equal,
        Mode::Auto | Mode::Mixed => CheckPath::Mixed,
        Mode::Equal => CheckPath::Equal,
    };
    let verdict = match path {
        CheckPath::Equal => criterion::check_equal_degree(&set)?,
        CheckPath::Mixed => criterion::check_mixed(&set, budget)?,
    };
    let out = VerdictDocument::new(&verdict, path, InputEcho::of(&set, doc.label));
    emit_json(&io.output, &out)?;
    Ok(status_code(verdict.status))
}

fn cmd_construct(n: u32, d: u32, m: u64, require: Strictness, out: &Option<PathBuf>) -> CliResult<u8> {
    let c = construct::construct(n, d, m, require)?;
    if construct::replay(&c.trace)? != c.set {
        return Err(CliError {
            code: EXIT_FAILURE,
            message: format!("trace of ({n}, {d}, {m}) does not replay to the emitted set"),
        });
    }
    emit_json(out, &ConstructionDocument::new(&c, require))?;
    Ok(status_code(c.verdict.status))
}

#[derive(Serialize)]
struct SweepRow {
    m: u64,
    ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    status: Option<Status>,
    #[serde(skip_serializing_if = "Option::is_none")]
    rule: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<String>,
}

#[derive(Serialize)]
struct SweepDocument {
    tool: &'static str,
    version: &'static str,
    n: u32,
    d: u32,
    require: Strictness,
    rows: Vec<SweepRow>,
    failures: usize,
}

fn rule_name(trace: &construct::ConstructionTrace) -> String {
    serde_json::to_value(trace.rule)
        .ok()
        .and_then(|v| v.as_str().map(str::to_string))
        .unwrap_or_default()
}

fn sweep_one(n: u32, d: u32, m: u64, require: Strictness) -> SweepRow {
    let fail = |note: String| SweepRow {
        m,
        ok: false,
        status: None,
        rule: None,
        note: Some(note),
    };
    let (built, note) = match construct::construct(n, d, m, require) {
        Err(Error::Unattainable(msg)) => (construct::construct(n, d, m, Strictness::NonStrict), Some(msg)),
        other => (other, None),
    };
    let c = match built {
        Ok(c) => c,
        Err(e) => return fail(e.to_string()),
    };
    match construct::replay(&c.trace) {
        Ok(set) if set == c.set => {}
        Ok(_) => return fail("trace does not replay to the set".into()),
        Err(e) => return fail(e.to_string()),
    }
    let ok = match criterion::check_equal_degree(&c.set) {
        Ok(v) if v.status == c.verdict.status => {
            // The impossible strict case is acceptable only as semistable.
            match note {
                Some(_) => v.status == Status::StrictlySemistable,
                None => require.accepts(v.status),
            }
        }
        Ok(_) => false,
        Err(e) => return fail(e.to_string()),
    };
    SweepRow {
        m,
        ok,
        status: Some(c.verdict.status),
        rule: Some(rule_name(&c.trace)),
        note: note.map(|msg| format!("semistable only: {msg}")),
    }
}

fn cmd_sweep(
    n: u32,
    d: u32,
    (m_min, m_max): (Option<u64>, Option<u64>),
    require: Strictness,
    jobs: Option<usize>,
    table: bool,
    out: &Option<PathBuf>,
) -> CliResult<u8> {
    if n == 0 || d == 0 {
        return Err(usage("sweep needs n >= 1 and d >= 1"));
    }
    let (lo, hi) = match n {
        1 => (2, u64::from(d) + 1),
        _ => (u64::from(n) + 1, bounds::count_monomials(n, d)),
    };
    let (from, to) = (m_min.unwrap_or(lo), m_max.unwrap_or(hi));
    if from < lo || to > hi || from > to {
        return Err(usage(format!("m range {from}..={to} outside {lo}..={hi}")));
    }
    let rows: Vec<SweepRow> = pool(jobs)?.install(|| {
        (from..=to)
            .into_par_iter()
            .map(|m| sweep_one(n, d, m, require))
            .collect()
    });
    let failures = rows.iter().filter(|r| !r.ok).count();
    if table {
        let mut text = format!("{:>6}  {:<20} {:<20} {}", "m", "status", "rule", "ok");
        for r in &rows {
            let status = r.status.map(|s| format!("{s:?}")).unwrap_or_else(|| "-".into());
            text.push_str(&format!(
                "\n{:>6}  {:<20} {:<20} {}{}",
                r.m,
                status,
                r.rule.as_deref().unwrap_or("-"),
                if r.ok { "yes" } else { "NO" },
                r.note.as_deref().map(|n| format!("  ({n})")).unwrap_or_default()
            ));
        }
        emit(out, &text)?;
    } else {
        emit_json(
            out,
            &SweepDocument {
                tool: TOOL_NAME,
                version: TOOL_VERSION,
                n,
                d,
                require,
                rows,
                failures,
            },
        )?;
    }
    Ok(if failures == 0 { 0 } else { EXIT_FAILURE })
}

#[derive(Serialize)]
struct ExhaustiveEntry {
    monomials: Vec<Vec<u32>>,
    status: Status,
    extremal_value: Option<Exact>,
}

#[derive(Serialize)]
struct ExhaustiveDocument {
    tool: &'static str,
    version: &'static str,
    n: u32,
    d: u32,
    m: u64,
    total: usize,
    stable: usize,
    strictly_semistable: usize,
    unstable: usize,
    sets: Vec<ExhaustiveEntry>,
}

fn cmd_exhaustive(n: u32, d: u32, m: u64, guard: u128, jobs: Option<usize>, out: &Option<PathBuf>) -> CliResult<u8> {
    let results = pool(jobs)?.install(|| criterion::exhaustive_classify(n, d, m, guard))?;
    let count = |s: Status| results.iter().filter(|(_, v)| v.status == s).count();
    let doc = ExhaustiveDocument {
        tool: TOOL_NAME,
        version: TOOL_VERSION,
        n,
        d,
        m,
        total: results.len(),
        stable: count(Status::Stable),
        strictly_semistable: count(Status::StrictlySemistable),
        unstable: count(Status::Unstable),
        sets: results
            .iter()
            .map(|(set, v)| ExhaustiveEntry {
                monomials: set.iter().map(|u| u.exponents().to_vec()).collect(),
                status: v.status,
                extremal_value: v.extremal_value.clone().map(Exact),
            })
            .collect(),
    };
    emit_json(out, &doc)?;
    Ok(0)
}

#[derive(Serialize)]
struct DecomposeDocument {
    tool: &'static str,
    version: &'static str,
    m: usize,
    r: usize,
    delta_closed: Option<bool>,
    decomposable: bool,
    summary: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    factors: Option<Vec<Vec<Exact>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    families: Option<IndexFamilies>,
    #[serde(skip_serializing_if = "Option::is_none")]
    families_check: Option<FamilyCheck>,
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn cmd_decompose(io: &InputOutput) -> CliResult<u8> {
    let doc: ExteriorDocument = parse_doc(&read_input(&io.input)?)?;
    let omega = doc.to_element()?;
    let delta_closed = if omega.degree() == 0 {
        None
    } else {
        Some(omega.koszul_delta()?.is_zero())
    };
    let decomposable = omega.is_decomposable()?;
    let factors = if decomposable {
        Some(
            omega
                .recover_factors()?
                .into_iter()
                .map(|row| row.into_iter().map(Exact).collect())
                .collect(),
        )
    } else {
        None
    };
    let families = if decomposable && delta_closed == Some(true) {
        Some(omega.extract_index_families()?)
    } else {
        None
    };
    let families_check = families.as_ref().map(|f| f.check(&omega)).transpose()?;
    let summary = format!(
        "delta-closed: {}, decomposable: {}",
        delta_closed.map_or("n/a", yes_no),
        yes_no(decomposable)
    );
    emit_json(
        &io.output,
        &DecomposeDocument {
            tool: TOOL_NAME,
            version: TOOL_VERSION,
            m: omega.m(),
            r: omega.degree(),
            delta_closed,
            decomposable,
            summary,
            factors,
            families,
            families_check,
        },
    )?;
    Ok(0)
}

#[derive(Serialize)]
struct SecantDocument {
    tool: &'static str,
    version: &'static str,
    functional: QuadricFunctional,
    catalecticant_rank: usize,
    verdict: SecantVerdict,
    /// Only computed when the subspace itself was given.
    #[serde(skip_serializing_if = "Option::is_none")]
    linear_factor: Option<Option<Vec<Exact>>>,
}

fn cmd_secant(io: &InputOutput) -> CliResult<u8> {
    let doc: SubspaceDocument = parse_doc(&read_input(&io.input)?)?;
    let (lambda, factor) = match (doc.matrix(), &doc.functional) {
        (Some(rows), None) => {
            let lambda = secant::functional_from_subspace(&rows)?;
            let f = secant::find_linear_factor(&rows)?;
            (lambda, Some(f.map(|f| f.into_iter().map(Exact).collect())))
        }
        (None, Some(values)) => {
            let values: [_; 6] = values
                .iter()
                .map(|x| x.0.clone())
                .collect::<Vec<_>>()
                .try_into()
                .map_err(|_| usage("functional needs exactly six values"))?;
            (QuadricFunctional::new(values)?, None)
        }
        _ => return Err(usage("give exactly one of \"rows\" or \"functional\"")),
    };
    let out = SecantDocument {
        tool: TOOL_NAME,
        version: TOOL_VERSION,
        catalecticant_rank: linalg::rank(&lambda.catalecticant()),
        verdict: secant::secant_stability_test(&lambda),
        functional: lambda,
        linear_factor: factor,
    };
    emit_json(&io.output, &out)?;
    Ok(0)
}
