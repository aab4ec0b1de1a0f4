//! Command-line front end.
//!
//! Exit codes: 0 on success with no disagreements or identity failures, 1 when
//! a campaign completed but recorded disagreements or failures, 2 on usage or
//! validation errors. JSON goes to standard output (or `--output`),
//! diagnostics to standard error.

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use raynaud_core::harness::{
    run_counterexample_campaign, run_identity_campaign, run_theorem_campaign, CampaignConfig, VerificationReport,
    DEFAULT_DEGREE_WINDOW, DEFAULT_GAUGE_SAMPLES, DEFAULT_IDENTITY_SAMPLE_SIZE,
};
use raynaud_core::io::{to_json, ParabolicDoc, RaynaudDoc};
use raynaud_core::raynaud::{certify_semistable, Mode, RaynaudBundle, RaynaudRequest};
use raynaud_core::{Error, Rational};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FINDINGS: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "raynaud", version, about = "Exact parabolic Raynaud bundles on the projective line")]
struct Cli {
    /// Write JSON here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build the Raynaud bundle for (r, d, N) and print it with its provenance.
    Construct(Target),
    /// Read a parabolic bundle and test it against the Raynaud bundle.
    Certify(CertifyArgs),
    /// Exhaustive theorem campaign over line sums and gauge twists.
    Verify(CampaignArgs),
    /// Identity campaign on random linearized bundles.
    Identities(IdentityArgs),
    /// Search for the smallest disagreement.
    Counterexample(CampaignArgs),
}

#[derive(Args, Debug)]
struct Target {
    #[arg(short = 'r', long = "rank")]
    r: u32,
    /// Parabolic degree as "p/q" or "p".
    #[arg(short = 'd', long = "degree", allow_hyphen_values = true)]
    d: Rational,
    #[arg(short = 'N', long = "cover-order")]
    n: u32,
    #[arg(long, default_value = "two-point")]
    mode: Mode,
}

#[derive(Args, Debug)]
struct CertifyArgs {
    /// Parabolic bundle JSON; standard input when absent or "-".
    #[arg(long)]
    input: Option<PathBuf>,
    /// Rank of the Raynaud bundle; defaults to the rank of the input.
    #[arg(short = 'r', long = "rank")]
    r: Option<u32>,
    /// Parabolic degree; defaults to that of the input.
    #[arg(short = 'd', long = "degree", allow_hyphen_values = true)]
    d: Option<Rational>,
    /// Defaults to the "N" field of the input.
    #[arg(short = 'N', long = "cover-order")]
    n: Option<u32>,
    #[arg(long, default_value = "two-point")]
    mode: Mode,
}

#[derive(Args, Debug)]
struct CampaignArgs {
    #[command(flatten)]
    target: Target,
    #[arg(long, default_value_t = DEFAULT_DEGREE_WINDOW)]
    window: u32,
    #[arg(long, default_value_t = DEFAULT_GAUGE_SAMPLES)]
    gauge_samples: u32,
    #[arg(long, env = "RAYNAUD_SEED", default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
struct IdentityArgs {
    #[arg(short = 'r', long = "rank", default_value_t = 1)]
    r: u32,
    #[arg(short = 'd', long = "degree", allow_hyphen_values = true, default_value = "0")]
    d: Rational,
    #[arg(short = 'N', long = "cover-order")]
    n: u32,
    #[arg(long, default_value_t = DEFAULT_IDENTITY_SAMPLE_SIZE)]
    samples: u32,
    #[arg(long, env = "RAYNAUD_SEED", default_value_t = 0)]
    seed: u64,
}

fn describe(e: &Error) -> String {
    match e {
        Error::Usage(m) => format!("usage error: {m}"),
        Error::Domain(m) => format!("validation error: {m}"),
        Error::Schema { path, message } => format!("schema error at {path}: {message}"),
    }
}

struct Io<'a> {
    stdin: &'a mut dyn Read,
    stdout: &'a mut dyn Write,
    stderr: &'a mut dyn Write,
    output: Option<PathBuf>,
}

impl Io<'_> {
    fn emit(&mut self, json: &str) -> Result<(), String> {
        match &self.output {
            Some(path) => std::fs::write(path, json).map_err(|e| format!("cannot write {}: {e}", path.display())),
            None => self.stdout.write_all(json.as_bytes()).map_err(|e| format!("cannot write output: {e}")),
        }
    }

    fn read_input(&mut self, path: &Option<PathBuf>) -> Result<String, String> {
        match path {
            Some(p) if p.as_os_str() != "-" => {
                std::fs::read_to_string(p).map_err(|e| format!("cannot read {}: {e}", p.display()))
            }
            _ => {
                let mut s = String::new();
                self.stdin
                    .read_to_string(&mut s)
                    .map_err(|e| format!("cannot read standard input: {e}"))?;
                Ok(s)
            }
        }
    }
}

enum Failure {
    Core(Error),
    Other(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<String> for Failure {
    fn from(e: String) -> Self {
        Failure::Other(e)
    }
}

fn campaign_config(a: &CampaignArgs) -> Result<CampaignConfig, Error> {
    let t = &a.target;
    Ok(CampaignConfig::new(t.r, t.d.clone(), t.n, t.mode)?
        .with_window(a.window)
        .with_gauge_samples(a.gauge_samples)
        .with_seed(a.seed))
}

fn finish_report(io: &mut Io<'_>, report: &VerificationReport, started: Instant) -> Result<i32, Failure> {
    io.emit(&report.to_json())?;
    let _ = writeln!(
        io.stderr,
        "{}: checked {}, agreements {}, disagreements {}, identity failures {}, elapsed {:.2?}",
        report.campaign,
        report.checked,
        report.agreements,
        report.disagreements.len(),
        report.identity_failures(),
        started.elapsed()
    );
    Ok(if report.is_clean() { EXIT_OK } else { EXIT_FINDINGS })
}

fn dispatch(cmd: Command, io: &mut Io<'_>) -> Result<i32, Failure> {
    let started = Instant::now();
    match cmd {
        Command::Construct(t) => {
            let req = RaynaudRequest::new(t.r, t.d, t.n, t.mode)?;
            let r = RaynaudBundle::build(&req)?;
            let doc = RaynaudDoc::from_raynaud(&r);
            for w in &doc.off_lattice_weights {
                let _ = writeln!(io.stderr, "note: weight {w} lies outside (1/{})Z", req.n);
            }
            io.emit(&to_json(&doc))?;
            Ok(EXIT_OK)
        }
        Command::Certify(a) => {
            let text = io.read_input(&a.input)?;
            let (e, doc_n) = ParabolicDoc::parse(&text)?.to_bundle()?;
            let n = a.n.unwrap_or(doc_n);
            if n != doc_n {
                return Err(Error::Usage(format!("-N {n} does not match the input's N = {doc_n}")).into());
            }
            let r = a.r.unwrap_or(e.rank() as u32);
            let d = a.d.unwrap_or_else(|| e.parabolic_degree());
            let req = RaynaudRequest::new(r, d, n, a.mode)?;
            let rb = RaynaudBundle::build(&req)?;
            let cert = certify_semistable(&e, &rb)?;
            io.emit(&to_json(&cert))?;
            Ok(EXIT_OK)
        }
        Command::Verify(a) => {
            let report = run_theorem_campaign(&campaign_config(&a)?)?;
            finish_report(io, &report, started)
        }
        Command::Counterexample(a) => {
            let report = run_counterexample_campaign(&campaign_config(&a)?)?;
            finish_report(io, &report, started)
        }
        Command::Identities(a) => {
            let mode = Mode::TwoPoint;
            let cfg = CampaignConfig::new(a.r, a.d, a.n, mode)?
                .with_identity_sample_size(a.samples)
                .with_seed(a.seed);
            let report = run_identity_campaign(&cfg)?;
            finish_report(io, &report, started)
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(rendered.as_bytes());
            return code;
        }
    };
    let mut io = Io {
        stdin,
        stdout,
        stderr,
        output: cli.output,
    };
    match dispatch(cli.command, &mut io) {
        Ok(code) => code,
        Err(Failure::Core(e)) => {
            let _ = writeln!(io.stderr, "raynaud: {}", describe(&e));
            EXIT_USAGE
        }
        Err(Failure::Other(m)) => {
            let _ = writeln!(io.stderr, "raynaud: {m}");
            EXIT_USAGE
        }
    }
}
