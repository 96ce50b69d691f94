use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use ncgeom::report::{RunReport, ScenarioReport};
use ncgeom::scenarios::{
    run_all, run_connes_lott, run_matrix_geometry, run_projective_structure, AllConfig, ConnesLottConfig, MatrixGeometryConfig,
};
use ncgeom::Scalar;

/// Exact checks of connections, torsion and curvature on three finite geometries.
#[derive(Parser, Debug)]
#[command(name = "ncgeom", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Derivation calculus on M_n.
    MatrixGeometry {
        #[command(flatten)]
        matrix: MatrixArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Connes-Lott calculus on M_2 × M_1.
    ConnesLott {
        #[command(flatten)]
        mu: MuArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Ω¹(M_3^+) as a projective summand of (M_3^+)^3.
    Projective {
        #[command(flatten)]
        out: OutputArgs,
    },
    /// All three scenarios in one report.
    All {
        #[command(flatten)]
        matrix: MatrixArgs,
        #[command(flatten)]
        mu: MuArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Args, Debug)]
struct MatrixArgs {
    /// Matrix size, 2 or 3.
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(2..=3))]
    n: u32,
    /// Coefficient file, or one of the presets `levi-civita` and `zero`.
    #[arg(long, value_name = "PATH", default_value = "levi-civita")]
    gamma_file: String,
    /// Seed for the randomized Γ and traceless J trials.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of randomized trials.
    #[arg(long, default_value_t = 10)]
    trials: usize,
}

#[derive(Args, Debug)]
struct MuArgs {
    /// Sample value of μ (repeatable); defaults to 0, 1, -1, 2, 1/2.
    #[arg(long = "mu", value_name = "SCALAR", value_parser = parse_scalar)]
    mus: Vec<Scalar>,
}

#[derive(Args, Debug)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Text,
    Json,
}

fn parse_scalar(s: &str) -> std::result::Result<Scalar, String> {
    s.parse::<Scalar>().map_err(|e| e.to_string())
}

impl MatrixArgs {
    fn config(&self) -> MatrixGeometryConfig {
        MatrixGeometryConfig { n: self.n as usize, gamma: self.gamma_file.clone(), seed: self.seed, trials: self.trials }
    }
}

impl MuArgs {
    fn config(&self) -> ConnesLottConfig {
        let mut cfg = ConnesLottConfig::default();
        if !self.mus.is_empty() {
            cfg.mus = self.mus.clone();
        }
        cfg
    }
}

enum Output {
    One(ScenarioReport),
    Many(RunReport),
}

impl Output {
    fn passed(&self) -> bool {
        match self {
            Output::One(r) => r.passed(),
            Output::Many(r) => r.passed(),
        }
    }

    fn render(&self, format: Format) -> Result<String> {
        Ok(match (self, format) {
            (Output::One(r), Format::Text) => r.render_text(),
            (Output::Many(r), Format::Text) => r.render_text(),
            (Output::One(r), Format::Json) => serde_json::to_string_pretty(r)? + "\n",
            (Output::Many(r), Format::Json) => serde_json::to_string_pretty(r)? + "\n",
        })
    }
}

fn run(cli: &Cli) -> Result<(Output, &OutputArgs)> {
    Ok(match &cli.command {
        Command::MatrixGeometry { matrix, out } => (Output::One(run_matrix_geometry(&matrix.config())?), out),
        Command::ConnesLott { mu, out } => (Output::One(run_connes_lott(&mu.config())?), out),
        Command::Projective { out } => (Output::One(run_projective_structure()?), out),
        Command::All { matrix, mu, out } => {
            let cfg = AllConfig { matrix: matrix.config(), connes_lott: mu.config() };
            (Output::Many(run_all(&cfg)?), out)
        }
    })
}

fn emit(output: &Output, args: &OutputArgs) -> Result<()> {
    let text = output.render(args.format)?;
    match &args.out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (output, args) = match run(&cli) {
        Ok(x) => x,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    if let Err(e) = emit(&output, args) {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    if output.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
