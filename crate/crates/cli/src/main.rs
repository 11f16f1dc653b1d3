mod job;
mod run;
mod text;

use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use koahss::algebra::Coeff;
use koahss::complex::{ComplexJson, SignCocycleJson};
use koahss::Error;

use job::{CocycleSpec, Command, JobSpec, Options, SpaceSpec, TwistSpec};

#[derive(Parser)]
#[command(name = "koahss", version, about = "Twisted KO-theory of finite Δ-complexes via the AHSS")]
struct Cli {
    /// Worker threads (overrides KOAHSS_THREADS).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Print the JSON schema of job files and exit.
    #[arg(long)]
    schema: bool,
    #[command(subcommand)]
    command: Option<Sub>,
}

#[derive(Args, Clone)]
struct Common {
    /// Builtin space such as "rp(2)", "klein(3)", "sphere(4)", or @file.json
    /// with an explicit complex.
    #[arg(long, default_value = "point")]
    space: String,
    /// Builtin twist name, inline JSON cocycle, or @file.json.
    #[arg(long)]
    sigma1: Option<String>,
    #[arg(long)]
    sigma2: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Sub {
    /// Cohomology groups with ℤ (σ₁-twisted), ℤ/2 and ℚ/ℤ coefficients.
    Cohomology {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        coeff: Option<String>,
        /// Degree window "lo:hi".
        #[arg(long)]
        degrees: Option<String>,
    },
    /// Squares, Bocksteins, j₂ and d₂ of mod-2 classes.
    Ops {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1)]
        degree: i64,
        /// Coordinates of one class, comma separated; default all generators.
        #[arg(long)]
        class: Option<String>,
    },
    /// Full spectral sequence report.
    Ahss {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        unreduced: bool,
    },
    /// KO groups assembled from E∞.
    Ko {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_negative_numbers = true)]
        degree: Option<i64>,
        #[arg(long, allow_hyphen_values = true)]
        degrees: Option<String>,
        #[arg(long)]
        unreduced: bool,
    },
    /// E₂ page of the differential AHSS.
    DiffE2 {
        #[command(flatten)]
        common: Common,
    },
    /// d₄ lifting check for G ∈ H⁴(X; ℤ).
    CheckLift {
        #[command(flatten)]
        common: Common,
        /// Coordinates of G in the basis of H⁴(X; ℤ), comma separated.
        #[arg(long = "g4", allow_hyphen_values = true)]
        g4: String,
    },
    /// β(B²) obstruction for twisted Spin structures.
    CheckSpin {
        #[command(flatten)]
        common: Common,
        /// Coordinates of B in H²(X; ℤ/2); default all classes.
        #[arg(long)]
        class: Option<String>,
    },
    /// Groups entering R^{-1} and its differential refinement (twist = σ₁).
    RTheory {
        #[command(flatten)]
        common: Common,
    },
    /// Cross-check matrix against the reference data.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Emit the compact status-only matrix.
        #[arg(long)]
        golden: bool,
        #[arg(long)]
        max_rp: Option<usize>,
        #[arg(long)]
        max_thom: Option<usize>,
    },
    /// Run a job file ("-" for stdin).
    Run {
        file: String,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

struct Failure {
    code: u8,
    kind: &'static str,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let (code, kind) = match e {
            Error::Unsupported(_) => (3, "unsupported"),
            Error::Inconsistent(_) => (1, "internal"),
            _ => (2, "validation"),
        };
        Failure { code, kind, message: e.to_string() }
    }
}

fn parse_err(msg: impl Into<String>) -> Failure {
    Failure { code: 2, kind: "validation", message: msg.into() }
}

fn read_source(s: &str) -> Result<String, Failure> {
    let read = |path: &str| -> Result<String, Failure> {
        if path == "-" {
            let mut buf = String::new();
            std::io::stdin().read_to_string(&mut buf).map_err(|e| parse_err(format!("stdin: {e}")))?;
            return Ok(buf);
        }
        std::fs::read_to_string(path).map_err(|e| parse_err(format!("{path}: {e}")))
    };
    match s.strip_prefix('@') {
        Some(path) => read(path),
        None => Ok(s.to_string()),
    }
}

fn space_spec(s: &str) -> Result<SpaceSpec, Failure> {
    if s.starts_with('@') {
        let text = read_source(s)?;
        let complex: ComplexJson = serde_json::from_str(&text).map_err(|e| parse_err(format!("complex: {e}")))?;
        return Ok(SpaceSpec::Explicit { complex });
    }
    if s.trim_start().starts_with('{') {
        return serde_json::from_str(s).map_err(|e| parse_err(format!("space: {e}")));
    }
    Ok(SpaceSpec::Name(s.to_string()))
}

fn cocycle_spec(s: &Option<String>) -> Result<Option<CocycleSpec>, Failure> {
    let Some(s) = s else { return Ok(None) };
    let text = read_source(s)?;
    if text.trim_start().starts_with('{') {
        let c: SignCocycleJson = serde_json::from_str(&text).map_err(|e| parse_err(format!("cocycle: {e}")))?;
        return Ok(Some(CocycleSpec::Explicit(c)));
    }
    Ok(Some(CocycleSpec::Builtin(text.trim().to_string())))
}

fn int_list(s: &str) -> Result<Vec<i64>, Failure> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| t.trim().parse().map_err(|e| parse_err(format!("bad integer {t:?}: {e}"))))
        .collect()
}

fn window(s: &str) -> Result<[i64; 2], Failure> {
    let (a, b) = s.split_once(':').ok_or_else(|| parse_err(format!("degree window {s:?} is not lo:hi")))?;
    let p = |t: &str| t.trim().parse::<i64>().map_err(|e| parse_err(format!("bad degree {t:?}: {e}")));
    Ok([p(a)?, p(b)?])
}

fn job_from(common: &Common, command: Command, options: Options) -> Result<JobSpec, Failure> {
    Ok(JobSpec {
        schema: job::SCHEMA_VERSION,
        space: space_spec(&common.space)?,
        twist: TwistSpec { sigma1: cocycle_spec(&common.sigma1)?, sigma2: cocycle_spec(&common.sigma2)? },
        command,
        options,
    })
}

fn build(sub: Sub) -> Result<(JobSpec, Format, Option<PathBuf>), Failure> {
    let with = |c: &Common, cmd, o| job_from(c, cmd, o).map(|j| (j, c.format, c.output.clone()));
    match sub {
        Sub::Cohomology { common, coeff, degrees } => {
            let coeff = coeff.map(|c| c.parse::<Coeff>()).transpose()?;
            let degrees = degrees.as_deref().map(window).transpose()?;
            with(&common, Command::Cohomology, Options { coeff, degrees, ..Default::default() })
        }
        Sub::Ops { common, degree, class } => {
            let class = class.as_deref().map(int_list).transpose()?;
            with(&common, Command::Ops, Options { degree: Some(degree), class, ..Default::default() })
        }
        Sub::Ahss { common, unreduced } => {
            with(&common, Command::Ahss, Options { reduced: Some(!unreduced), ..Default::default() })
        }
        Sub::Ko { common, degree, degrees, unreduced } => {
            let degrees = degrees.as_deref().map(window).transpose()?;
            with(&common, Command::Ko, Options { degree, degrees, reduced: Some(!unreduced), ..Default::default() })
        }
        Sub::DiffE2 { common } => with(&common, Command::DiffE2, Options::default()),
        Sub::CheckLift { common, g4 } => {
            with(&common, Command::CheckLift, Options { g4: Some(int_list(&g4)?), ..Default::default() })
        }
        Sub::CheckSpin { common, class } => {
            let class = class.as_deref().map(int_list).transpose()?;
            with(&common, Command::CheckSpin, Options { class, ..Default::default() })
        }
        Sub::RTheory { common } => with(&common, Command::RTheory, Options::default()),
        Sub::Verify { common, golden, max_rp, max_thom } => with(
            &common,
            Command::Verify,
            Options { golden: golden.then_some(true), max_rp, max_thom, ..Default::default() },
        ),
        Sub::Run { file, format, output } => {
            let text = read_source(&format!("@{file}"))?;
            let job: JobSpec = serde_json::from_str(&text).map_err(|e| parse_err(format!("job: {e}")))?;
            let output = output.or_else(|| job.options.output.clone().map(PathBuf::from));
            Ok((job, format, output))
        }
    }
}

fn threads(cli_jobs: Option<usize>) -> Result<(), Failure> {
    let n = match cli_jobs {
        Some(n) => Some(n),
        None => match std::env::var("KOAHSS_THREADS") {
            Ok(v) => Some(v.trim().parse().map_err(|_| parse_err(format!("KOAHSS_THREADS={v:?} is not a number")))?),
            Err(_) => None,
        },
    };
    if let Some(n) = n {
        if n == 0 {
            return Err(parse_err("thread count must be positive"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| parse_err(format!("thread pool: {e}")))?;
    }
    Ok(())
}

fn main_inner() -> Result<(), Failure> {
    let cli = Cli::parse();
    if cli.schema {
        return emit(serde_json::to_string_pretty(&job::schema()).expect("schema serializes") + "\n");
    }
    let Some(sub) = cli.command else {
        return Err(parse_err("no subcommand given; see --help"));
    };
    threads(cli.jobs)?;
    let (job, format, output) = build(sub)?;
    let out = run::run(&job)?;
    let body = match format {
        Format::Json => serde_json::to_string_pretty(&out.report).expect("report serializes") + "\n",
        Format::Text => out.text,
    };
    match output {
        Some(path) => std::fs::write(&path, body).map_err(|e| Failure {
            code: 1,
            kind: "io",
            message: format!("{}: {e}", path.display()),
        })?,
        None => emit(body)?,
    }
    Ok(())
}

// A closed pipe on stdout (e.g. `| head`) is not an error.
fn emit(body: String) -> Result<(), Failure> {
    match std::io::stdout().lock().write_all(body.as_bytes()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
            Err(Failure { code: 1, kind: "io", message: format!("stdout: {e}") })
        }
        _ => Ok(()),
    }
}

fn main() -> ExitCode {
    match main_inner() {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let diag = serde_json::json!({"error": {"kind": f.kind, "message": f.message}});
            eprintln!("{diag}");
            ExitCode::from(f.code)
        }
    }
}
