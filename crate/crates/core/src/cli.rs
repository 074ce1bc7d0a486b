//! Command-line front end.
//!
//! Exit codes: 0 pass, 1 internal error, 2 input or precondition error,
//! 3 mathematical failure (invalid candidate, failed verification).

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::certify::{
    certify_with, check_affine_weights, envelope_at, AffineDominator, CertifyOptions, EnvelopeResult, FitMode,
    Outcome, Verdict, VERDICT_TOL,
};
use crate::corpus::{refine_levels, GridFunction, Kind};
use crate::error::Error;
use crate::io::{certificate_to_json, parse_certificate, parse_input, GridSpec, InputDoc, FORMAT_VERSION};
use crate::oracle::{brute_force_envelope, OracleOutcome};
use crate::witness::{monte_carlo_check, verify_certificate, Certificate};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_FAIL: i32 = 3;

/// Oracle and LP must agree to this.
pub const AGREEMENT_TOL: f64 = 1e-7;

#[derive(Debug, Parser)]
#[command(name = "emcert", version, about = "Certify e-merging functions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide validity of a candidate; writes a verdict and, on failure, a certificate
    Certify(CertifyArgs),
    /// Evaluate the grid concave envelope at a target
    Envelope(TargetArgs),
    /// Verify a certificate file
    VerifyCert(VerifyArgs),
    /// Monte-Carlo spot check of a certificate
    Mc(McArgs),
    /// Compare the LP envelope with brute-force enumeration
    Oracle(TargetArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModeArg {
    PaperForm,
    Unconstrained,
}

#[derive(Debug, Args)]
pub struct CertifyArgs {
    pub input: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Verdict threshold, within [1e-12, 1e-3]
    #[arg(long)]
    pub tolerance: Option<f64>,
    #[arg(long, value_enum, default_value = "paper-form")]
    pub mode: ModeArg,
    /// Lattice refinement rounds (levels grids of closed-form candidates only)
    #[arg(long, default_value_t = 0)]
    pub refine: u32,
    /// Also write the sampled grid as CSV next to the verdict
    #[arg(long)]
    pub dump_table: bool,
}

#[derive(Debug, Args)]
pub struct TargetArgs {
    pub input: PathBuf,
    /// Comma-separated target, overrides the document's `target`
    #[arg(long, value_delimiter = ',')]
    pub target: Option<Vec<f64>>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub certificate: PathBuf,
    /// Candidate document used to recompute f at every atom
    #[arg(long)]
    pub candidate: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct McArgs {
    pub certificate: PathBuf,
    #[arg(long)]
    pub candidate: PathBuf,
    #[arg(long, default_value_t = 100_000)]
    pub draws: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Failure of a command, carrying its exit code.
#[derive(Debug)]
pub struct CmdError {
    pub code: i32,
    pub message: String,
}

impl From<Error> for CmdError {
    fn from(e: Error) -> Self {
        let code = if e.is_internal() { EXIT_INTERNAL } else { EXIT_INPUT };
        CmdError { code, message: e.to_string() }
    }
}

type CmdResult = std::result::Result<i32, CmdError>;

fn input_error(message: impl Into<String>) -> CmdError {
    CmdError { code: EXIT_INPUT, message: message.into() }
}

fn read(path: &Path) -> std::result::Result<String, CmdError> {
    fs::read_to_string(path).map_err(|e| input_error(format!("{}: {e}", path.display())))
}

fn write_json<T: Serialize>(path: &Path, doc: &T) -> std::result::Result<(), CmdError> {
    let text = serde_json::to_string_pretty(doc).expect("report serializes");
    fs::write(path, text + "\n").map_err(|e| CmdError {
        code: EXIT_INTERNAL,
        message: format!("{}: {e}", path.display()),
    })
}

/// `dir/stem.<suffix>` where `stem` strips one `.json` and any trailing
/// report suffix from `base`.
fn sibling(base: &Path, suffix: &str) -> PathBuf {
    let name = base.file_name().and_then(|s| s.to_str()).unwrap_or("emcert");
    let mut stem = name.strip_suffix(".json").unwrap_or(name);
    for s in [".verdict", ".envelope", ".oracle", ".mc", ".certificate"] {
        if let Some(x) = stem.strip_suffix(s) {
            stem = x;
            break;
        }
    }
    base.with_file_name(format!("{stem}.{suffix}"))
}

fn load_input(path: &Path) -> std::result::Result<InputDoc, CmdError> {
    parse_input(&read(path)?).map_err(|e| input_error(format!("{}: {e}", path.display())))
}

#[derive(Debug, Serialize)]
struct SupportEntry {
    index: usize,
    point: Vec<f64>,
    q: f64,
    value: f64,
}

fn support(g: &GridFunction, env: &EnvelopeResult) -> Vec<SupportEntry> {
    env.weights
        .iter()
        .map(|&(j, q)| SupportEntry { index: j, point: g.point(j).to_vec(), q, value: g.value(j) })
        .collect()
}

#[derive(Debug, Serialize)]
struct DominatorDoc {
    mode: &'static str,
    w: Vec<f64>,
    slack: f64,
}

impl From<&AffineDominator> for DominatorDoc {
    fn from(d: &AffineDominator) -> Self {
        DominatorDoc { mode: d.mode.as_str(), w: d.w.clone(), slack: d.slack }
    }
}

#[derive(Debug, Serialize)]
struct RoundDoc {
    round: u32,
    levels: Option<Vec<f64>>,
    n: usize,
    outcome: &'static str,
    envelope_value_at_one: f64,
}

#[derive(Debug, Serialize)]
struct AffineDoc {
    weights_valid: bool,
    min_weight: f64,
    weight_sum: f64,
}

#[derive(Debug, Serialize)]
struct VerdictDoc {
    format_version: u32,
    candidate: &'static str,
    #[serde(rename = "K")]
    k: usize,
    outcome: &'static str,
    scope: &'static str,
    tolerance: f64,
    envelope_value_at_one: Option<f64>,
    support: Vec<SupportEntry>,
    dominator: Option<DominatorDoc>,
    unconstrained_dominator: Option<DominatorDoc>,
    affine_weights: Option<AffineDoc>,
    notes: Vec<String>,
    rounds: Vec<RoundDoc>,
    certificate_file: Option<String>,
}

fn options(args: &CertifyArgs) -> std::result::Result<CertifyOptions, CmdError> {
    let tolerance = match args.tolerance {
        None => VERDICT_TOL,
        Some(t) if (1e-12..=1e-3).contains(&t) => t,
        Some(t) => return Err(input_error(format!("--tolerance {t} outside [1e-12, 1e-3]"))),
    };
    let mode = match args.mode {
        ModeArg::PaperForm => FitMode::PaperForm,
        ModeArg::Unconstrained => FitMode::Unconstrained,
    };
    Ok(CertifyOptions { tolerance, mode })
}

fn write_table(path: &Path, g: &GridFunction) -> std::result::Result<(), CmdError> {
    let internal = |e: csv::Error| CmdError { code: EXIT_INTERNAL, message: format!("{}: {e}", path.display()) };
    let mut w = csv::Writer::from_path(path).map_err(internal)?;
    let mut header: Vec<String> = (1..=g.dim()).map(|k| format!("u{k}")).collect();
    header.push("F".into());
    w.write_record(&header).map_err(internal)?;
    for (u, v) in g.points().iter().zip(g.values()) {
        let row: Vec<String> = u.iter().chain(std::iter::once(v)).map(|x| x.to_string()).collect();
        w.write_record(&row).map_err(internal)?;
    }
    w.flush().map_err(|e| internal(e.into()))
}

pub fn cmd_certify(args: &CertifyArgs) -> CmdResult {
    let opts = options(args)?;
    let doc = load_input(&args.input)?;
    let out = args.out.clone().unwrap_or_else(|| sibling(&args.input, "verdict.json"));

    let affine = match doc.candidate.kind() {
        Kind::Affine { w, .. } => Some(check_affine_weights(w)),
        _ => None,
    };

    // grids to certify, one per refinement round
    let base_levels = match &doc.grid {
        Some(GridSpec::Levels(l)) => Some(l.clone()),
        _ => None,
    };
    if args.refine > 0 && (doc.is_table() || base_levels.is_none()) {
        return Err(input_error("--refine needs a closed-form candidate with a `grid.levels` lattice"));
    }

    let mut rounds = Vec::new();
    let mut last: Option<(GridFunction, Verdict)> = None;
    let mut levels = base_levels.clone();
    let mut sampling_error = None;
    for round in 0..=args.refine {
        let grid = match &levels {
            Some(l) if round > 0 => doc.lattice(l),
            _ => doc.grid_function(),
        };
        let grid = match grid {
            Ok(g) => g,
            Err(e) => {
                // an invalid affine candidate may be negative on the grid; that is a
                // full-domain failure rather than an input error
                if matches!(&affine, Some(a) if !a.valid) {
                    sampling_error = Some(e.to_string());
                    break;
                }
                return Err(e.into());
            }
        };
        let verdict = certify_with(&grid, &opts)?;
        rounds.push(RoundDoc {
            round,
            levels: levels.clone(),
            n: grid.len(),
            outcome: if verdict.is_pass() { "pass" } else { "fail" },
            envelope_value_at_one: verdict.envelope_value_at_one,
        });
        let pass = verdict.is_pass();
        last = Some((grid, verdict));
        if !pass {
            break;
        }
        levels = levels.map(|l| refine_levels(&l));
    }

    let mut vdoc = VerdictDoc {
        format_version: FORMAT_VERSION,
        candidate: doc.candidate.name(),
        k: doc.dim(),
        outcome: "pass",
        scope: "grid-exact",
        tolerance: opts.tolerance,
        envelope_value_at_one: None,
        support: Vec::new(),
        dominator: None,
        unconstrained_dominator: None,
        affine_weights: affine.as_ref().map(|a| AffineDoc {
            weights_valid: a.valid,
            min_weight: a.min_weight,
            weight_sum: a.weight_sum,
        }),
        notes: Vec::new(),
        rounds,
        certificate_file: None,
    };
    if let Some(e) = sampling_error {
        vdoc.notes.push(format!("grid sampling failed: {e}"));
    }

    let mut code = EXIT_PASS;
    let mut summary = Vec::new();
    if let Some((grid, verdict)) = &last {
        vdoc.envelope_value_at_one = Some(verdict.envelope_value_at_one);
        vdoc.support = support(grid, &verdict.envelope);
        vdoc.scope = verdict.scope.as_str();
        vdoc.notes.extend(verdict.notes.iter().map(|n| n.describe()));
        match &verdict.outcome {
            Outcome::Pass { dominator, unconstrained } => {
                vdoc.dominator = Some(dominator.into());
                vdoc.unconstrained_dominator = Some(unconstrained.into());
                summary.push(format!(
                    "PASS ({}) envelope(1) = {}, w = {:?}, slack = {:e}",
                    verdict.scope.as_str(),
                    verdict.envelope_value_at_one,
                    dominator.w,
                    dominator.slack
                ));
            }
            Outcome::Fail(cert) => {
                let cpath = sibling(&out, "certificate.json");
                fs::write(&cpath, certificate_to_json(cert) + "\n").map_err(|e| CmdError {
                    code: EXIT_INTERNAL,
                    message: format!("{}: {e}", cpath.display()),
                })?;
                vdoc.outcome = "fail";
                vdoc.certificate_file = Some(cpath.display().to_string());
                code = EXIT_FAIL;
                summary.push(format!(
                    "FAIL (full-domain) merged expectation {} > 1 on {} atoms; certificate {}",
                    cert.merged_expectation,
                    cert.n,
                    cpath.display()
                ));
            }
        }
        if args.dump_table {
            write_table(&sibling(&out, "table.csv"), grid)?;
        }
    }

    if let Some(a) = &affine {
        if a.valid && code == EXIT_PASS {
            vdoc.scope = "full-domain";
            summary.push("affine weights satisfy w >= 0, sum w <= 1: valid on the whole orthant".into());
        } else if !a.valid {
            vdoc.scope = "full-domain";
            if code == EXIT_PASS {
                vdoc.outcome = "fail";
                code = EXIT_FAIL;
            }
            summary.push(format!(
                "FAIL (full-domain) affine weights outside the valid set: min w = {}, sum w = {}",
                a.min_weight, a.weight_sum
            ));
        }
    }

    write_json(&out, &vdoc)?;
    for line in summary {
        println!("{line}");
    }
    for note in &vdoc.notes {
        println!("note: {note}");
    }
    println!("verdict written to {}", out.display());
    Ok(code)
}

#[derive(Debug, Serialize)]
struct EnvelopeDoc {
    format_version: u32,
    target: Vec<f64>,
    value: f64,
    n_support: usize,
    support: Vec<SupportEntry>,
}

fn target_for(doc: &InputDoc, arg: &Option<Vec<f64>>) -> std::result::Result<Vec<f64>, CmdError> {
    let t = arg.clone().or_else(|| doc.target.clone()).unwrap_or_else(|| vec![1.0; doc.dim()]);
    if t.len() != doc.dim() {
        return Err(input_error(format!("target: expected {} coordinates, got {}", doc.dim(), t.len())));
    }
    Ok(t)
}

pub fn cmd_envelope(args: &TargetArgs) -> CmdResult {
    let doc = load_input(&args.input)?;
    let target = target_for(&doc, &args.target)?;
    let g = doc.grid_function()?;
    let env = envelope_at(&g, &target)?;
    let out = args.out.clone().unwrap_or_else(|| sibling(&args.input, "envelope.json"));
    write_json(
        &out,
        &EnvelopeDoc {
            format_version: FORMAT_VERSION,
            target: target.clone(),
            value: env.value,
            n_support: env.n_support(),
            support: support(&g, &env),
        },
    )?;
    println!("envelope at {target:?} = {} (support {})", env.value, env.n_support());
    Ok(EXIT_PASS)
}

pub fn cmd_verify_cert(args: &VerifyArgs) -> CmdResult {
    let cert = parse_certificate(&read(&args.certificate)?)
        .map_err(|e| input_error(format!("{}: {e}", args.certificate.display())))?;
    let candidate = match &args.candidate {
        Some(p) => Some(load_input(p)?.candidate),
        None => None,
    };
    let report = verify_certificate(&cert, candidate.as_ref());
    for c in &report.checks {
        println!("[{}] {}: {}", if c.passed { "ok" } else { "FAIL" }, c.name, c.detail);
    }
    println!("margin over 1: {}", report.margin);
    if let Some(out) = &args.out {
        write_json(out, &report)?;
    }
    Ok(if report.passed() { EXIT_PASS } else { EXIT_FAIL })
}

pub fn cmd_mc(args: &McArgs) -> CmdResult {
    let cert: Certificate = parse_certificate(&read(&args.certificate)?)
        .map_err(|e| input_error(format!("{}: {e}", args.certificate.display())))?;
    let f = load_input(&args.candidate)?.candidate;
    let report = monte_carlo_check(&cert, &f, args.draws, args.seed)?;
    let out = args.out.clone().unwrap_or_else(|| sibling(&args.certificate, "mc.json"));
    write_json(&out, &report)?;
    println!("generator {}, seed {}, draws {}", report.generator, report.seed, report.draws);
    for (k, e) in report.evar_means.iter().enumerate() {
        println!("E_{} mean {} (expected 1, se {})", k + 1, e.mean, e.se);
    }
    println!(
        "F(E) mean {} (expected {}, se {})",
        report.merged.mean, report.merged.expected, report.merged.se
    );
    Ok(EXIT_PASS)
}

#[derive(Debug, Serialize)]
struct OracleDoc {
    format_version: u32,
    target: Vec<f64>,
    lp_value: Option<f64>,
    oracle_value: Option<f64>,
    difference: Option<f64>,
    agree: bool,
}

pub fn cmd_oracle(args: &TargetArgs) -> CmdResult {
    let doc = load_input(&args.input)?;
    let target = target_for(&doc, &args.target)?;
    let g = doc.grid_function()?;
    let oracle = brute_force_envelope(&g, &target)?;
    let lp = match envelope_at(&g, &target) {
        Ok(e) => Some(e.value),
        Err(Error::TargetOutsideHull) => None,
        Err(e) => return Err(e.into()),
    };
    let ov = oracle.value();
    let (difference, agree) = match (lp, ov) {
        (Some(a), Some(b)) => (Some((a - b).abs()), (a - b).abs() <= AGREEMENT_TOL),
        (None, None) => (None, true),
        _ => (None, false),
    };
    let out = args.out.clone().unwrap_or_else(|| sibling(&args.input, "oracle.json"));
    write_json(
        &out,
        &OracleDoc { format_version: FORMAT_VERSION, target, lp_value: lp, oracle_value: ov, difference, agree },
    )?;
    let show = |v: Option<f64>| v.map_or("infeasible".to_string(), |x| x.to_string());
    println!("lp {} oracle {} agree {agree}", show(lp), show(ov));
    if matches!(oracle, OracleOutcome::Infeasible) && lp.is_none() {
        println!("target outside hull (both routes)");
    }
    Ok(if agree { EXIT_PASS } else { EXIT_FAIL })
}

pub fn dispatch(cli: &Cli) -> i32 {
    let result = match &cli.command {
        Command::Certify(a) => cmd_certify(a),
        Command::Envelope(a) => cmd_envelope(a),
        Command::VerifyCert(a) => cmd_verify_cert(a),
        Command::Mc(a) => cmd_mc(a),
        Command::Oracle(a) => cmd_oracle(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => dispatch(&cli),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_PASS };
            let _ = e.print();
            code
        }
    }
}
