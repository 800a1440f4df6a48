//! `gravity-ss`: filtration reports for cube configurations, gravity spectral
//! sequence pages, and Cotor tables.
//!
//! Exit codes: 0 success, 1 a verification failed, 2 invalid input,
//! 3 success with truncation warnings.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use gravity_core::io::{
    config_to_json, format_e1_word, geometry_report, matrices_json, page_rows, parse_coalgebra, parse_config,
    parse_page_request, CoalgebraJson, CotorJson, PageJson, PageMode, PageRequest, VerdictJson,
};
use gravity_core::{
    build_e1, compare_d1, compute_e2, cotor, gen_random_coalgebra, gen_random_config, verify_d1_squared,
    verify_d_squared, BigradedPage, CobarBox, CobarComplex, D1Route, SignConvention,
};

const THREADS_ENV: &str = "GRAVITY_SS_THREADS";

#[derive(Parser, Debug)]
#[command(
    name = "gravity-ss",
    version,
    about = "Gravity filtration and cobar spectral sequence tools"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Gravity and skewer degrees, u_s, σ_s and decomposability of a configuration.
    Geometry(GeometryArgs),
    /// E1/E2 pages of the gravity spectral sequence for a wedge of spheres.
    Page(PageArgs),
    /// Cotor of a coalgebra given as JSON.
    Cotor(CotorArgs),
    /// Check d∘d = 0 and shuffle/cobar agreement for a page request, or d∘d = 0
    /// for a coalgebra file.
    Verify(VerifyArgs),
    /// Seeded random configuration or coalgebra.
    Gen(GenArgs),
}

#[derive(Args, Debug)]
struct GeometryArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
struct BoxArgs {
    /// Sphere dimensions of X, comma separated.
    #[arg(long, value_delimiter = ',')]
    x: Option<Vec<u32>>,
    #[arg(long)]
    p: Option<u32>,
    #[arg(long)]
    max_s: Option<usize>,
    #[arg(long)]
    max_degree: Option<i32>,
    #[arg(long)]
    max_weight: Option<usize>,
}

#[derive(Args, Debug)]
struct PageArgs {
    /// Page request JSON; command-line bounds override its fields.
    #[arg(long)]
    input: Option<PathBuf>,
    /// JSON output, or CSV dimensions when the path ends in `.csv`.
    #[arg(long)]
    output: Option<PathBuf>,
    #[command(flatten)]
    bounds: BoxArgs,
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    /// Write the d1 matrices as sparse triplets to this file.
    #[arg(long)]
    matrices: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum ModeArg {
    Shuffle,
    Cobar,
    Compare,
    E2,
}

impl From<ModeArg> for PageMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Shuffle => PageMode::Shuffle,
            ModeArg::Cobar => PageMode::Cobar,
            ModeArg::Compare => PageMode::Compare,
            ModeArg::E2 => PageMode::E2,
        }
    }
}

#[derive(Args, Debug)]
struct CotorArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, default_value_t = 4)]
    max_s: usize,
    #[arg(long, default_value_t = 12)]
    max_degree: i32,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    output: Option<PathBuf>,
    #[command(flatten)]
    bounds: BoxArgs,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum GenKind {
    Config,
    Coalgebra,
}

#[derive(Args, Debug)]
struct GenArgs {
    #[arg(long, value_enum, default_value_t = GenKind::Config)]
    kind: GenKind,
    /// Cube dimension.
    #[arg(long, default_value_t = 2)]
    n: usize,
    /// Number of cubes.
    #[arg(long, default_value_t = 4)]
    j: usize,
    /// Prime for generated coalgebras.
    #[arg(long, default_value_t = 2)]
    p: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    output: Option<PathBuf>,
}

/// An error carrying its exit code.
#[derive(Debug)]
enum Failure {
    Invalid(anyhow::Error),
    Verification(String),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Invalid(e)
    }
}

enum Outcome {
    Ok,
    Truncated,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    match run(cli.command) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Truncated) => {
            eprintln!("warning: results are truncated at the box boundary");
            ExitCode::from(3)
        }
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Invalid(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn configure_threads() -> Result<()> {
    let Ok(value) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .with_context(|| format!("{THREADS_ENV}={value:?} is not a count"))?;
    if n == 0 {
        bail!("{THREADS_ENV} must be positive");
    }
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    Ok(())
}

fn run(command: Command) -> Result<Outcome, Failure> {
    match command {
        Command::Geometry(args) => geometry(args),
        Command::Page(args) => page(args),
        Command::Cotor(args) => cotor_cmd(args),
        Command::Verify(args) => verify(args),
        Command::Gen(args) => generate(args),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn emit(output: Option<&Path>, text: &str) -> Result<()> {
    match output {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut out = std::io::stdout().lock();
            writeln!(out, "{text}")?;
            Ok(())
        }
    }
}

fn emit_json<T: Serialize>(output: Option<&Path>, value: &T) -> Result<()> {
    emit(output, &serde_json::to_string_pretty(value)?)
}

fn geometry(args: GeometryArgs) -> Result<Outcome, Failure> {
    let cfg = parse_config(&read(&args.input)?).with_context(|| args.input.display().to_string())?;
    let report = geometry_report(&cfg).map_err(anyhow::Error::from)?;
    emit_json(args.output.as_deref(), &report)?;
    Ok(Outcome::Ok)
}

fn page_request(input: Option<&Path>, bounds: &BoxArgs, mode: Option<ModeArg>) -> Result<PageRequest> {
    let mut request = match input {
        Some(path) => parse_page_request(&read(path)?).with_context(|| path.display().to_string())?,
        None => {
            let missing = |flag: &str| anyhow::anyhow!("--{flag} is required without --input");
            PageRequest {
                x: bounds.x.clone().ok_or_else(|| missing("x"))?,
                p: bounds.p.ok_or_else(|| missing("p"))?,
                max_s: bounds.max_s.ok_or_else(|| missing("max-s"))?,
                max_degree: bounds.max_degree.ok_or_else(|| missing("max-degree"))?,
                max_weight: bounds.max_weight.ok_or_else(|| missing("max-weight"))?,
                mode: PageMode::E2,
            }
        }
    };
    if let Some(x) = &bounds.x {
        request.x = x.clone();
    }
    if let Some(p) = bounds.p {
        request.p = p;
    }
    if let Some(s) = bounds.max_s {
        request.max_s = s;
    }
    if let Some(d) = bounds.max_degree {
        request.max_degree = d;
    }
    if let Some(w) = bounds.max_weight {
        request.max_weight = w;
    }
    if let Some(m) = mode {
        request.mode = m.into();
    }
    Ok(request)
}

fn route_for(mode: PageMode) -> D1Route {
    match mode {
        PageMode::Cobar => D1Route::Cobar,
        _ => D1Route::Shuffle(SignConvention::Koszul),
    }
}

fn page(args: PageArgs) -> Result<Outcome, Failure> {
    let request = page_request(args.input.as_deref(), &args.bounds, args.mode)?;
    let wedge = request.wedge().map_err(anyhow::Error::from)?;
    let e1 = build_e1(&wedge, request.p, request.bounds()).map_err(anyhow::Error::from)?;
    let route = route_for(request.mode);

    if let Some(path) = &args.matrices {
        let matrices = matrices_json(&e1.d1_matrices(route));
        fs::write(path, serde_json::to_string(&matrices).map_err(anyhow::Error::from)?)
            .with_context(|| format!("writing {}", path.display()))?;
    }

    let (page, json, failure) = match request.mode {
        PageMode::E2 => {
            let page = compute_e2(&e1).map_err(anyhow::Error::from)?;
            let json = PageJson::from_page(&request, &page, true);
            (page, json, None)
        }
        PageMode::Shuffle | PageMode::Cobar => {
            let page = e1_only(&e1);
            let mut json = PageJson::from_page(&request, &page, false);
            let report = verify_d1_squared(&e1, route);
            let witness = report.witness.as_ref().map(format_e1_word);
            let failure = witness.clone().map(|w| format!("d1∘d1 ≠ 0 on {w}"));
            json.d_squared = Some(VerdictJson {
                holds: report.holds(),
                witness,
            });
            (page, json, failure)
        }
        PageMode::Compare => {
            let page = e1_only(&e1);
            let mut json = PageJson::from_page(&request, &page, false);
            let cmp = compare_d1(&e1);
            let witness = cmp.witness.as_ref().map(format_e1_word);
            let failure = witness.clone().map(|w| format!("shuffle and cobar d1 differ on {w}"));
            json.comparison = Some(VerdictJson {
                holds: cmp.equal(),
                witness,
            });
            (page, json, failure)
        }
    };

    match args.output.as_deref() {
        Some(path) if path.extension().is_some_and(|e| e == "csv") => {
            let mut writer = csv::Writer::from_path(path).with_context(|| format!("writing {}", path.display()))?;
            for row in page_rows(&page, request.mode == PageMode::E2) {
                writer.serialize(row).map_err(anyhow::Error::from)?;
            }
            writer.flush().map_err(anyhow::Error::from)?;
        }
        output => emit_json(output, &json)?,
    }
    if let Some(msg) = failure {
        return Err(Failure::Verification(msg));
    }
    Ok(if json.truncated {
        Outcome::Truncated
    } else {
        Outcome::Ok
    })
}

fn e1_only(e1: &gravity_core::GravityE1) -> BigradedPage {
    BigradedPage {
        p: e1.field().p(),
        bounds: e1.bounds(),
        e1: e1.groups().iter().map(|(&c, w)| (c, w.len())).collect(),
        e2: Default::default(),
        truncated: false,
    }
}

fn cotor_cmd(args: CotorArgs) -> Result<Outcome, Failure> {
    let c = parse_coalgebra(&read(&args.input)?).with_context(|| args.input.display().to_string())?;
    if args.max_s == 0 || args.max_degree < 1 {
        return Err(Failure::Invalid(anyhow::anyhow!(
            "--max-s and --max-degree must be positive"
        )));
    }
    let table = cotor(&c, args.max_s, args.max_degree);
    emit_json(args.output.as_deref(), &CotorJson::from_table(c.field().p(), &table))?;
    Ok(if table.truncated {
        Outcome::Truncated
    } else {
        Outcome::Ok
    })
}

#[derive(Serialize)]
struct VerifyReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    d_squared_shuffle: Option<VerdictJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    d_squared_cobar: Option<VerdictJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    comparison: Option<VerdictJson>,
}

fn verify(args: VerifyArgs) -> Result<Outcome, Failure> {
    let coalgebra_input = match &args.input {
        Some(path) => {
            let text = read(path)?;
            let value: serde_json::Value = serde_json::from_str(&text).with_context(|| path.display().to_string())?;
            value.get("basis").is_some().then_some(text)
        }
        None => None,
    };

    let report = match coalgebra_input {
        Some(text) => {
            let c = parse_coalgebra(&text).map_err(anyhow::Error::from)?;
            let bounds = CobarBox::new(args.bounds.max_s.unwrap_or(4), args.bounds.max_degree.unwrap_or(12));
            let complex = CobarComplex::one_sided(&c, bounds, SignConvention::Koszul);
            let r = verify_d_squared(&complex);
            let witness = r.witness.map(|w| {
                let names: Vec<&str> = w.blocks.iter().map(|&b| c.space().name(b)).collect();
                format!("[{}]", names.join("|"))
            });
            VerifyReport {
                d_squared_shuffle: None,
                d_squared_cobar: Some(VerdictJson {
                    holds: witness.is_none(),
                    witness,
                }),
                comparison: None,
            }
        }
        None => {
            let request = page_request(args.input.as_deref(), &args.bounds, None)?;
            let wedge = request.wedge().map_err(anyhow::Error::from)?;
            let e1 = build_e1(&wedge, request.p, request.bounds()).map_err(anyhow::Error::from)?;
            let verdict = |route| {
                let r = verify_d1_squared(&e1, route);
                VerdictJson {
                    holds: r.holds(),
                    witness: r.witness.as_ref().map(format_e1_word),
                }
            };
            let cmp = compare_d1(&e1);
            VerifyReport {
                d_squared_shuffle: Some(verdict(D1Route::Shuffle(SignConvention::Koszul))),
                d_squared_cobar: Some(verdict(D1Route::Cobar)),
                comparison: Some(VerdictJson {
                    holds: cmp.equal(),
                    witness: cmp.witness.as_ref().map(format_e1_word),
                }),
            }
        }
    };
    emit_json(args.output.as_deref(), &report)?;
    let failed: Vec<&str> = [
        ("shuffle d1∘d1", &report.d_squared_shuffle),
        ("cobar d∘d", &report.d_squared_cobar),
        ("shuffle/cobar comparison", &report.comparison),
    ]
    .into_iter()
    .filter(|(_, v)| v.as_ref().is_some_and(|v| !v.holds))
    .map(|(name, _)| name)
    .collect();
    if !failed.is_empty() {
        return Err(Failure::Verification(failed.join(", ")));
    }
    Ok(Outcome::Ok)
}

fn generate(args: GenArgs) -> Result<Outcome, Failure> {
    let text = match args.kind {
        GenKind::Config => {
            let cfg = gen_random_config(args.n, args.j, args.seed).map_err(anyhow::Error::from)?;
            config_to_json(&cfg)
        }
        GenKind::Coalgebra => {
            let c = gen_random_coalgebra(args.p, args.seed).map_err(anyhow::Error::from)?;
            serde_json::to_string_pretty(&CoalgebraJson::from_coalgebra(&c)).map_err(anyhow::Error::from)?
        }
    };
    emit(args.output.as_deref(), &text)?;
    Ok(Outcome::Ok)
}
