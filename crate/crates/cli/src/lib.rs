//! Command-line front end: `list-claims`, `run` and `eval`.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use sector_verify::blocks::Block2x2;
use sector_verify::campaign::{run_campaign, CampaignConfig, CampaignReport};
use sector_verify::claims::{registry, ClaimId, Tier};
use sector_verify::functions::{principal_power, OmfDescriptor};
use sector_verify::means::{adjoint_mean, arithmetic_mean, geometric_mean, mean_sigma};
use sector_verify::numeric::{hermitian_part, singular_values, CMatrix, ToleranceProfile};
use sector_verify::sector::sector_angle;
use sector_verify::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURES: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "sector-verify", version, about = "Check matrix inequalities for accretive and sectorial matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List the claim registry.
    ListClaims {
        /// Only claims of one tier: `main` (or 3) or `background` (or 2).
        #[arg(long)]
        section: Option<String>,
        /// Emit a JSON array instead of a table.
        #[arg(long)]
        json: bool,
    },
    /// Run a seeded campaign and write the report.
    Run(RunArgs),
    /// Apply one operation to matrices read from JSON files.
    Eval {
        /// geometric_mean, arithmetic_mean, mean_sigma, adjoint_mean, power,
        /// hermitian_part, partial_transpose, sector_angle, singular_values
        op: String,
        files: Vec<PathBuf>,
        /// Weight for means and powers.
        #[arg(long)]
        t: Option<f64>,
        /// Registry function: `power:T`, `harmonic_like`, `log_mean`,
        /// `affine:T`, or its JSON form.
        #[arg(long)]
        f: Option<String>,
    },
}

#[derive(Debug, Args)]
struct RunArgs {
    /// Comma-separated claim ids; all when omitted.
    #[arg(long, value_delimiter = ',')]
    claims: Vec<String>,
    /// Trials per claim and dimension.
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    #[arg(long, value_delimiter = ',', default_values_t = [1usize, 2, 3, 4, 6])]
    dims: Vec<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    tol_psd: Option<f64>,
    #[arg(long)]
    tol_margin: Option<f64>,
    /// Report path; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

/// Parses `args` (program name first) and runs the command. Returns the
/// process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::ListClaims { section, json } => list_claims(section.as_deref(), json, out),
        Command::Run(a) => run_cmd(a, out, err),
        Command::Eval { op, files, t, f } => eval(&op, &files, t, f.as_deref(), out),
    };
    match result {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Io(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_IO
        }
    }
}

fn io_err(e: std::io::Error) -> Failure {
    Failure::Io(e.to_string())
}

fn list_claims(section: Option<&str>, json: bool, out: &mut dyn Write) -> Result<i32, Failure> {
    let tier: Option<Tier> = section.map(str::parse).transpose()?;
    let rows: Vec<_> = registry().iter().filter(|c| tier.is_none_or(|t| c.tier == t)).collect();
    if json {
        let s = serde_json::to_string_pretty(&rows).expect("registry serializes");
        writeln!(out, "{s}").map_err(io_err)?;
    } else {
        for c in rows {
            writeln!(out, "{:<5}{:<40} {}", c.id.to_string(), c.anchor, c.hypothesis).map_err(io_err)?;
        }
    }
    Ok(EXIT_OK)
}

fn build_config(a: &RunArgs) -> Result<CampaignConfig, Failure> {
    let claims = a
        .claims
        .iter()
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.parse::<ClaimId>())
        .collect::<Result<Vec<_>, _>>()?;
    let mut tolerances = ToleranceProfile::default();
    if let Some(v) = a.tol_psd {
        tolerances.tol_psd = v;
    }
    if let Some(v) = a.tol_margin {
        tolerances.tol_margin = v;
    }
    let cfg = CampaignConfig {
        claims,
        trials: a.trials,
        dims: a.dims.clone(),
        seed: a.seed,
        tolerances,
        ..Default::default()
    };
    cfg.validate()?;
    Ok(cfg)
}

fn summary_table(r: &CampaignReport, err: &mut dyn Write) -> std::io::Result<()> {
    for s in &r.claims {
        let margin = s.min_margin.map_or("-".to_string(), |m| format!("{m:+.3e}"));
        writeln!(
            err,
            "{:<5}trials {:>6}  passes {:>6}  failures {:>6}  min margin {:>11}  {} ms",
            s.claim.to_string(), s.trials, s.passes, s.failures, margin, s.wall_time_ms
        )?;
    }
    writeln!(err, "total: {} trials, {} failures", r.trials, r.failures)
}

fn run_cmd(a: RunArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    let cfg = build_config(&a)?;
    let report = run_campaign(&cfg)?;
    let text = report.to_json_string();
    match &a.out {
        Some(path) => fs::write(path, format!("{text}\n")).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?,
        None => writeln!(out, "{text}").map_err(io_err)?,
    }
    summary_table(&report, err).map_err(io_err)?;
    Ok(if report.all_passed() { EXIT_OK } else { EXIT_FAILURES })
}

/// Accepts `power:T`, `harmonic_like`, `log_mean`, `affine:T` or the JSON
/// descriptor.
pub fn parse_function(s: &str) -> Result<OmfDescriptor, Error> {
    let s = s.trim();
    let f = if s.starts_with('{') {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?
    } else {
        let (name, arg) = match s.split_once(':') {
            Some((n, a)) => (n, Some(a)),
            None => (s, None),
        };
        let t = || -> Result<f64, Error> {
            arg.ok_or_else(|| Error::Parse(format!("{name} needs a weight, e.g. {name}:0.5")))?
                .parse()
                .map_err(|_| Error::Parse(format!("bad weight in {s:?}")))
        };
        match name {
            "power" => OmfDescriptor::Power { t: t()? },
            "affine" => OmfDescriptor::Affine { t: t()? },
            "harmonic_like" | "harmonic" => OmfDescriptor::HarmonicLike,
            "log_mean" => OmfDescriptor::LogMean,
            _ => return Err(Error::Parse(format!("unknown function {name:?}"))),
        }
    };
    f.validate()?;
    Ok(f)
}

fn read_matrix(path: &Path) -> Result<CMatrix, Failure> {
    let s = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    CMatrix::from_json_str(&s).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn read_block(path: &Path) -> Result<Block2x2, Failure> {
    let s = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    if let Ok(b) = Block2x2::from_json_str(&s) {
        return Ok(b);
    }
    let m = CMatrix::from_json_str(&s).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    Ok(Block2x2::split(&m)?)
}

fn eval(op: &str, files: &[PathBuf], t: Option<f64>, f: Option<&str>, out: &mut dyn Write) -> Result<i32, Failure> {
    let arity = match op {
        "geometric_mean" | "arithmetic_mean" | "mean_sigma" | "adjoint_mean" => 2,
        "power" | "hermitian_part" | "partial_transpose" | "sector_angle" | "singular_values" => 1,
        _ => return Err(Failure::Usage(format!("unknown operation {op:?}"))),
    };
    if files.len() != arity {
        return Err(Failure::Usage(format!("{op} takes {arity} operand file(s), got {}", files.len())));
    }
    let weight = || t.ok_or_else(|| Failure::Usage(format!("{op} needs --t")));
    let function = || -> Result<OmfDescriptor, Failure> {
        Ok(parse_function(f.ok_or_else(|| Failure::Usage(format!("{op} needs --f")))?)?)
    };
    let text = match op {
        "partial_transpose" => read_block(&files[0])?.partial_transpose().assemble().to_json_string(),
        _ => {
            let ms = files.iter().map(|p| read_matrix(p)).collect::<Result<Vec<_>, _>>()?;
            match op {
                "geometric_mean" => geometric_mean(&ms[0], &ms[1], t.unwrap_or(0.5))?.to_json_string(),
                "arithmetic_mean" => arithmetic_mean(&ms[0], &ms[1], t.unwrap_or(0.5))?.to_json_string(),
                "mean_sigma" => mean_sigma(&function()?, &ms[0], &ms[1])?.to_json_string(),
                "adjoint_mean" => adjoint_mean(&function()?, &ms[0], &ms[1])?.to_json_string(),
                "power" => principal_power(&ms[0], weight()?)?.to_json_string(),
                "hermitian_part" => hermitian_part(&ms[0]).into_cmatrix().to_json_string(),
                "sector_angle" => {
                    let a = sector_angle(&ms[0], &ToleranceProfile::default())?;
                    serde_json::to_string(&a).expect("number serializes")
                }
                _ => serde_json::to_string(&singular_values(&ms[0])?).expect("numbers serialize"),
            }
        }
    };
    writeln!(out, "{text}").map_err(io_err)?;
    Ok(EXIT_OK)
}
