//! Command-line front end. Every command reads a TOML document, calls one
//! or two library operations and writes the result with a commented header
//! echoing the configuration.
//!
//! Exit codes: 0 success or pass, 1 fail verdict, 2 input error.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::doc;
use crate::domain::{in_domain, in_domain_iterated};
use crate::error::{Error, Result};
use crate::levy::{Centering, StableLaw, Triplet};
use crate::pushforward::{
    noninjective_pair, preimage, preimage_unit, pushforward_law, pushforward_with_certificate,
};
use crate::representability::series_representable;
use crate::shotnoise::{sample_cp_integral, sample_series, ShotNoiseSpec};
use crate::stat::{cf_sup_distance, Grid};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Parser)]
#[command(
    name = "strictstable",
    version,
    about = "Strictly stable laws via stochastic integrals and shot-noise series"
)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,

    /// Stability index; overrides the document's `alpha`.
    #[arg(long, global = true)]
    pub alpha: Option<f64>,
    /// Base seed; overrides the document's `seed`.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Number of samples.
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// Write the main artifact here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Lower integration limit for compound Poisson path sampling.
    #[arg(long, global = true)]
    pub eps: Option<f64>,
    /// Upper integration limit T; switches `sample` to path integrals.
    #[arg(long = "T", global = true)]
    pub horizon: Option<f64>,
    #[arg(long, global = true)]
    pub tail_budget: Option<f64>,
    #[arg(long, global = true)]
    pub max_terms: Option<usize>,
    /// Grid points per axis on [−3, 3].
    #[arg(long, global = true)]
    pub grid: Option<usize>,
    /// Pass threshold for `verify`, replacing the default.
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Draw shot-noise series samples (CSV).
    Sample { input: PathBuf },
    /// Test domain membership of a triplet.
    Domain {
        input: PathBuf,
        /// Test membership in the domain of the twice iterated mapping.
        #[arg(long)]
        iterated: bool,
    },
    /// Push a triplet forward to its stable law.
    Push { input: PathBuf },
    /// Build a compound Poisson preimage of a strictly stable law.
    Preimage { input: PathBuf },
    /// Decide series representability of a strictly stable law.
    Representable { input: PathBuf },
    /// Compare sampler output with the closed-form characteristic function.
    Verify { input: PathBuf },
    /// Two triplets with the same image under the α = 1 mapping.
    Pair { input: PathBuf },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Sample { .. } => "sample",
            Command::Domain { .. } => "domain",
            Command::Push { .. } => "push",
            Command::Preimage { .. } => "preimage",
            Command::Representable { .. } => "representable",
            Command::Verify { .. } => "verify",
            Command::Pair { .. } => "pair",
        }
    }

    fn input(&self) -> &Path {
        match self {
            Command::Sample { input }
            | Command::Domain { input, .. }
            | Command::Push { input }
            | Command::Preimage { input }
            | Command::Representable { input }
            | Command::Verify { input }
            | Command::Pair { input } => input,
        }
    }
}

fn echo<T: std::fmt::Display>(lines: &mut Vec<String>, key: &str, v: &Option<T>) {
    if let Some(v) = v {
        lines.push(format!("{key}: {v}"));
    }
}

impl RunConfig {
    /// Header lines echoing the configuration.
    pub fn header(&self) -> Vec<String> {
        let mut lines = vec![
            format!("strictstable {VERSION}"),
            format!("command: {}", self.command.name()),
            format!("input: {}", self.command.input().display()),
        ];
        echo(&mut lines, "alpha", &self.alpha);
        echo(&mut lines, "seed", &self.seed);
        echo(&mut lines, "n", &self.n);
        echo(&mut lines, "eps", &self.eps);
        echo(&mut lines, "T", &self.horizon);
        echo(&mut lines, "tail-budget", &self.tail_budget);
        echo(&mut lines, "max-terms", &self.max_terms);
        echo(&mut lines, "grid", &self.grid);
        echo(&mut lines, "tolerance", &self.tolerance);
        lines
    }
}

struct Outcome {
    code: i32,
    body: Vec<u8>,
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Document(format!("{}: {e}", path.display())))
}

fn in_file<T>(path: &Path, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Document(msg) => Error::Document(format!("{}: {msg}", path.display())),
        other => other,
    })
}

fn resolve_alpha(flag: Option<f64>, doc: Option<f64>) -> Result<f64> {
    flag.or(doc).ok_or_else(|| {
        Error::Document("alpha: missing; pass --alpha or set it in the document".into())
    })
}

fn with_header(header: &[String], extra: &[String], text: &str) -> Vec<u8> {
    let mut out = Vec::new();
    for line in header.iter().chain(extra) {
        out.extend_from_slice(format!("# {line}\n").as_bytes());
    }
    out.extend_from_slice(text.as_bytes());
    out
}

fn spec_from(cfg: &RunConfig, path: &Path) -> Result<ShotNoiseSpec> {
    let mut spec = in_file(path, doc::parse_spec(&read(path)?))?;
    if let Some(m) = cfg.max_terms {
        spec.truncation.max_terms = m;
    }
    if let Some(b) = cfg.tail_budget {
        spec.truncation.tail_budget = b;
    }
    let alpha = cfg.alpha.unwrap_or(spec.alpha);
    let seed = cfg.seed.unwrap_or(spec.seed);
    ShotNoiseSpec::new(alpha, spec.theta, spec.jump_law, spec.truncation, seed)
}

/// The law the series for `spec` should produce.
pub fn target_law(spec: &ShotNoiseSpec) -> Result<StableLaw> {
    let flavor = if spec.alpha > 1.0 {
        Centering::Mean
    } else {
        Centering::Drift
    };
    let t = Triplet::atomic(spec.levy_measure(), vec![0.0; spec.dim()], flavor)?;
    pushforward_law(spec.alpha, &t)
}

fn execute(cfg: &RunConfig) -> Result<Outcome> {
    let header = cfg.header();
    let path = cfg.command.input();
    match &cfg.command {
        Command::Sample { .. } => {
            let spec = spec_from(cfg, path)?;
            let n = cfg.n.unwrap_or(1000);
            let batch = match cfg.horizon {
                Some(t) => sample_cp_integral(&spec, cfg.eps.unwrap_or(0.0), t, n)?.batch,
                None => {
                    if cfg.eps.is_some() {
                        return Err(Error::Invalid("--eps needs --T".into()));
                    }
                    sample_series(&spec, n)
                }
            };
            let mut lines = header;
            lines.push(format!("resolved alpha: {}", spec.alpha));
            lines.push(format!("resolved seed: {}", spec.seed));
            lines.push(format!("theta: {}", spec.theta));
            lines.push(format!("max terms: {}", spec.truncation.max_terms));
            lines.push(format!("tail budget: {}", spec.truncation.tail_budget));
            let mut body = Vec::new();
            batch
                .write_csv(&mut body, &lines)
                .map_err(|e| Error::Invalid(e.to_string()))?;
            Ok(Outcome {
                code: EXIT_OK,
                body,
            })
        }
        Command::Domain { iterated, .. } => {
            let input = in_file(path, doc::parse_triplet(&read(path)?))?;
            let alpha = resolve_alpha(cfg.alpha, input.alpha)?;
            let (member, text) = if *iterated {
                let r = in_domain_iterated(alpha, &input.triplet)?;
                (r.member, doc::iterated_report_to_toml(&r))
            } else {
                let r = in_domain(alpha, &input.triplet)?;
                (r.member, doc::domain_report_to_toml(&r))
            };
            let verdict = format!(
                "verdict: {}",
                if member { "member" } else { "not a member" }
            );
            Ok(Outcome {
                code: if member { EXIT_OK } else { EXIT_FAIL },
                body: with_header(&header, &[verdict], &text),
            })
        }
        Command::Push { .. } => {
            let input = in_file(path, doc::parse_triplet(&read(path)?))?;
            let alpha = resolve_alpha(cfg.alpha, input.alpha)?;
            let (law, cert) = pushforward_with_certificate(alpha, &input.triplet)?;
            Ok(Outcome {
                code: EXIT_OK,
                body: with_header(&header, &[], &doc::pushforward_to_toml(&law, &cert)),
            })
        }
        Command::Preimage { .. } => {
            let law = load_law(cfg, path)?;
            let t = if law.alpha() == 1.0 {
                preimage_unit(&law)?
            } else {
                preimage(law.alpha(), &law)?
            };
            Ok(Outcome {
                code: EXIT_OK,
                body: with_header(&header, &[], &doc::triplet_to_toml(&t)),
            })
        }
        Command::Representable { .. } => {
            let law = load_law(cfg, path)?;
            let cert = series_representable(&law)?;
            let verdict = format!(
                "verdict: {}",
                if cert.representable {
                    "representable"
                } else {
                    "not representable"
                }
            );
            Ok(Outcome {
                code: if cert.representable {
                    EXIT_OK
                } else {
                    EXIT_FAIL
                },
                body: with_header(&header, &[verdict], &doc::rep_certificate_to_toml(&cert)),
            })
        }
        Command::Verify { .. } => {
            let spec = spec_from(cfg, path)?;
            let n = cfg.n.unwrap_or(10_000);
            let grid = Grid::new(spec.dim(), cfg.grid.unwrap_or(61), 3.0)?;
            let law = target_law(&spec)?;
            let batch = sample_series(&spec, n);
            let mut report = cf_sup_distance(&batch, &law, &grid)?;
            if let Some(t) = cfg.tolerance {
                report.tolerance = t;
            }
            let pass = report.passed();
            if let Some(out) = &cfg.out {
                let mut csv = Vec::new();
                report
                    .write_csv(&mut csv, &header)
                    .map_err(|e| Error::Invalid(e.to_string()))?;
                write_file(out, &csv)?;
            }
            let summary = format!(
                "{}{}",
                doc::law_to_toml(&law)
                    .lines()
                    .filter(|l| !l.is_empty())
                    .map(|l| format!("# target {l}\n"))
                    .collect::<String>(),
                report.summary()
            );
            Ok(Outcome {
                code: if pass { EXIT_OK } else { EXIT_FAIL },
                body: with_header(&header, &[], &summary),
            })
        }
        Command::Pair { .. } => {
            let lambda = in_file(path, doc::parse_spherical(&read(path)?))?;
            let pair = noninjective_pair(&lambda)?;
            let same = laws_agree(&pair.first_law, &pair.second_law, 1e-10);
            Ok(Outcome {
                code: if same { EXIT_OK } else { EXIT_FAIL },
                body: with_header(&header, &[], &doc::pair_to_toml(&pair, same)),
            })
        }
    }
}

fn load_law(cfg: &RunConfig, path: &Path) -> Result<StableLaw> {
    let law = in_file(path, doc::parse_law(&read(path)?))?;
    match cfg.alpha {
        Some(a) if a != law.alpha() => {
            StableLaw::new(a, law.spectral().clone(), law.tau().to_vec())
        }
        _ => Ok(law),
    }
}

/// Same α, matching spectral atoms and shifts within `tol`.
pub fn laws_agree(a: &StableLaw, b: &StableLaw, tol: f64) -> bool {
    a.alpha() == b.alpha()
        && a.spectral().atoms().len() == b.spectral().atoms().len()
        && a.spectral()
            .atoms()
            .iter()
            .all(|(xi, w)| (b.spectral().weight_at(xi.coords()) - w).abs() <= tol)
        && a.tau()
            .iter()
            .zip(b.tau())
            .all(|(x, y)| (x - y).abs() <= tol)
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    let f = File::create(path).map_err(|e| Error::Document(format!("{}: {e}", path.display())))?;
    let mut w = BufWriter::new(f);
    w.write_all(bytes)
        .and_then(|_| w.flush())
        .map_err(|e| Error::Document(format!("{}: {e}", path.display())))
}

/// Run one command, writing the artifact to `--out` or `out` and errors to
/// `err`. Returns the exit code.
pub fn run(cfg: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = execute(cfg).and_then(|o| {
        // verify writes its CSV to --out itself and always prints the summary
        let to_file = !matches!(cfg.command, Command::Verify { .. });
        match (&cfg.out, to_file) {
            (Some(p), true) => write_file(p, &o.body)?,
            _ => out
                .write_all(&o.body)
                .map_err(|e| Error::Invalid(e.to_string()))?,
        }
        Ok(o.code)
    });
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INPUT
        }
    }
}

/// Entry point used by the binary.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cfg = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    run(&cfg, &mut io::stdout().lock(), &mut io::stderr().lock())
}
