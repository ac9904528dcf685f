use std::io::Write;
use std::path::PathBuf;

use anyhow::Result;
use clap::{Args, Parser, Subcommand, ValueEnum};

use twistkit::config::{Overrides, Settings};
use twistkit::*;
use twistkit_core::weil::WeilPolynomial;

#[derive(Parser)]
#[command(name = "twistkit", version, about = "Decide quadratic and polyquadratic twist relations exactly")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GlobalArgs {
    /// TOML config file (else $TWISTKIT_CONFIG).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Largest group that will be enumerated.
    #[arg(long, global = true)]
    max_group_order: Option<usize>,
    /// Worker threads for searches and sweeps (0 = one per core).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Permit network access for --remote group sources.
    #[arg(long, global = true)]
    allow_remote: bool,
    #[arg(long, global = true)]
    remote_base_url: Option<String>,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Source {
    /// Bundled group name (trivial, c2, c3, c4, c2xc2, s3, dic3, sg48_3).
    #[arg(long)]
    builtin: Option<String>,
    /// JSON group file.
    #[arg(long)]
    file: Option<PathBuf>,
    /// Abstract-group label fetched from the remote database.
    #[arg(long)]
    remote: Option<String>,
}

impl Source {
    fn get(self) -> GroupSource {
        match (self.builtin, self.file, self.remote) {
            (Some(b), _, _) => GroupSource::Builtin(b),
            (_, Some(f), _) => GroupSource::File(f),
            (_, _, Some(r)) => GroupSource::Remote(r),
            _ => unreachable!("clap enforces one source"),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Order, classes, square map and exponent of a group.
    GroupInfo {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Character table.
    Chartab {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Decide twist relations between two representations given by multiplicities.
    TwistCheck {
        #[command(flatten)]
        source: Source,
        /// Multiplicities `1,0,2` or a JSON spec.
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        /// q, pq, lq, lpq or all.
        #[arg(long, default_value = "all")]
        relation: String,
    },
    /// Exhaustive search for locally-but-not-globally twisted pairs.
    Search {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        degree: u64,
        /// lq-not-q or lpq-not-pq.
        #[arg(long)]
        mode: String,
        /// Maximum number of pairs examined.
        #[arg(long, default_value_t = 1_000_000)]
        budget: usize,
    },
    /// Weil-polynomial tools.
    Weil {
        #[command(subcommand)]
        command: WeilCommand,
    },
    /// Run every reproduction check and print the report.
    Verify {
        #[arg(long)]
        json: bool,
        /// Include wall times in JSON output.
        #[arg(long)]
        timings: bool,
    },
}

#[derive(Subcommand)]
enum WeilCommand {
    /// Base change to the degree-k extension.
    Basechange {
        #[arg(long)]
        g: u32,
        #[arg(long)]
        q: u64,
        /// Comma-separated a_0, ..., a_2g.
        #[arg(long, allow_hyphen_values = true)]
        coeffs: String,
        #[arg(long, default_value_t = 2)]
        k: u32,
    },
    /// Classify consecutive pairs of polynomial lines (`-` reads stdin).
    Classify {
        #[arg(long, default_value = "-")]
        input: PathBuf,
    },
    /// Trace-zero sweep over products of elliptic factors.
    TraceZero {
        #[arg(long, default_value_t = 100)]
        max_q: u64,
    },
    /// Images of the five normalized supersingular quartics.
    Phi,
}

fn run(cli: Cli) -> Result<i32> {
    let flags = Overrides {
        config: cli.global.config,
        max_group_order: cli.global.max_group_order,
        threads: cli.global.threads,
        allow_remote: cli.global.allow_remote,
        remote_base_url: cli.global.remote_base_url,
    };
    let settings = Settings::resolve(&flags, &|k| std::env::var(k).ok())?;
    settings.apply()?;
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let code = match cli.command {
        Command::GroupInfo { source, format } => {
            let g = load_group(&source.get(), &settings)?;
            cmd_group_info(&mut out, &g, matches!(format, Format::Json))?
        }
        Command::Chartab { source, format } => {
            let g = load_group(&source.get(), &settings)?;
            cmd_chartab(&mut out, &g, matches!(format, Format::Json))?
        }
        Command::TwistCheck { source, a, b, relation } => {
            let g = load_group(&source.get(), &settings)?;
            cmd_twist_check(&mut out, g, &a, &b, &parse_relations(&relation)?)?
        }
        Command::Search { source, degree, mode, budget } => {
            let g = load_group(&source.get(), &settings)?;
            cmd_search(&mut out, g, degree, parse_mode(&mode)?, budget)?
        }
        Command::Weil { command } => match command {
            WeilCommand::Basechange { g, q, coeffs, k } => {
                let p = WeilPolynomial::new(g, q, parse_coeffs(&coeffs)?)?;
                cmd_weil_basechange(&mut out, &p, k)?
            }
            WeilCommand::Classify { input } => cmd_weil_classify(&mut out, &read_input(&input)?)?,
            WeilCommand::TraceZero { max_q } => cmd_weil_trace_zero(&mut out, max_q)?,
            WeilCommand::Phi => cmd_weil_phi(&mut out)?,
        },
        Command::Verify { json, timings } => cmd_verify(&mut out, &settings, json, timings)?,
    };
    out.flush()?;
    Ok(code)
}

fn main() {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            exit_code_for(&err)
        }
    };
    std::process::exit(code);
}
