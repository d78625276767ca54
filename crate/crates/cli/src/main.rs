use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};

use indepfam::henkin::ClosureLimits;
use indepfam_cli::commands::{self, CellSelection, EncodeOptions, SolveMode};
use indepfam_cli::{exit_code_for, suite, InputError, OutputFormat, Report, RunConfig};

#[derive(Parser)]
#[command(name = "indepfam")]
#[command(
    about = "Independent families, set-algebra embeddings, filter extension and Henkin reduction"
)]
#[command(version)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GlobalArgs {
    /// Width bound: arities and supports stay below it
    #[arg(long, global = true, default_value_t = 4)]
    width: usize,

    /// Ground-space enumeration uses supports inside {0, …, truncation-1}
    #[arg(long, global = true, default_value_t = 3)]
    truncation: u64,

    /// Search bound for differences and witnesses over the naturals
    #[arg(long, global = true, default_value_t = 64)]
    bound: u64,

    /// Seed for random suites
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Worker threads
    #[arg(long, global = true, default_value_t = 1)]
    parallel: usize,

    #[arg(long, global = true, value_enum, default_value = "human")]
    format: OutputFormat,

    /// Add elapsed time to machine records
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Args)]
struct EncodeArgs {
    /// Filter file with a finite carrier
    filter: PathBuf,

    /// Explicit field of sets, e.g. "{} {0} {1 2 3 4} {0 1 2 3 4}"
    #[arg(long)]
    field: Option<String>,

    /// Instantiate the closure scheme over every short sequence
    #[arg(long)]
    literal: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Witness cells of an independent family
    Indep {
        family: PathBuf,
        /// Cell spec, inline `(cell (pos …) (neg …))` or a file
        #[arg(long, conflicts_with_all = ["all_cells", "full_cells"])]
        cell: Option<String>,
        /// Every sign pattern over fewer than width generators
        #[arg(long)]
        all_cells: bool,
        /// Every sign pattern over all generators
        #[arg(long, conflicts_with = "all_cells")]
        full_cells: bool,
        /// Witnesses per cell
        #[arg(long, default_value_t = 1)]
        count: usize,
        /// Cross-check against the enumerated ground space
        #[arg(long)]
        exhaustive: bool,
    },
    /// Check the embedding identity and cell partition formula by formula
    IotaCheck {
        /// Theory file whose assertions are checked one by one
        theory: Option<PathBuf>,
        /// Family file; defaults to every subset of {0, 1, 2}
        #[arg(long)]
        family: Option<PathBuf>,
        /// Check this many seeded random formulas instead
        #[arg(long, conflicts_with = "theory")]
        random: Option<usize>,
    },
    /// Check that cells over every small index set partition the ground space
    Partition {
        family: PathBuf,
        #[arg(long, default_value_t = 3)]
        max_gamma: usize,
    },
    /// Decide a propositional theory
    Solve {
        theory: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "both")]
        mode: SolveMode,
        /// Solve this many seeded random theories instead
        #[arg(long, conflicts_with = "theory")]
        random: Option<usize>,
        /// Write the model as an assignment file
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reduce a first-order theory to a propositional one and extract a model
    Henkin {
        theory: PathBuf,
        #[arg(long, default_value_t = ClosureLimits::default().max_rounds)]
        max_rounds: usize,
        #[arg(long, default_value_t = ClosureLimits::default().max_terms)]
        max_terms: usize,
        #[arg(long, default_value_t = ClosureLimits::default().max_formulas)]
        max_formulas: usize,
        /// Write the model file here
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compile a filter extension problem into a theory
    Encode {
        #[command(flatten)]
        args: EncodeArgs,
        /// Emit the first-order form over U and the constants a_X
        #[arg(long)]
        fo: bool,
        /// Write the theory here
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Read an ultrafilter off an assignment or model of the encoded theory
    Decode {
        #[command(flatten)]
        args: EncodeArgs,
        /// Assignment or model file
        model: PathBuf,
    },
    /// Encode, solve, decode and compare with the direct extension
    Roundtrip {
        filter: Option<PathBuf>,
        /// Add this many seeded random proper filters
        #[arg(long)]
        random: Option<usize>,
        /// Add every principal filter on bases up to --n
        #[arg(long)]
        principal: bool,
        /// Base size for generated filters
        #[arg(long, default_value_t = 4)]
        n: u32,
        /// Also solve through the first-order pipeline
        #[arg(long)]
        henkin: bool,
        /// Enumerate every assignment and compare models with extensions
        #[arg(long)]
        exhaustive: bool,
    },
    /// Run every workload over the bundled corpus
    Suite,
}

fn write_out(path: &Option<PathBuf>, text: &str) -> Result<()> {
    if let Some(p) = path {
        std::fs::write(p, text).map_err(|e| InputError(format!("{}: {e}", p.display())))?;
    }
    Ok(())
}

fn encode_options(args: &EncodeArgs) -> Result<EncodeOptions> {
    let field = args
        .field
        .as_deref()
        .map(commands::parse_field)
        .transpose()?;
    Ok(EncodeOptions {
        field,
        literal: args.literal,
    })
}

fn run(cmd: &Command, cfg: &RunConfig) -> Result<Report> {
    match cmd {
        Command::Indep {
            family,
            cell,
            all_cells,
            full_cells,
            count,
            exhaustive,
        } => {
            let file = commands::load_family(family, cfg)?;
            let sel = match (cell, all_cells, full_cells) {
                (Some(c), _, _) => CellSelection::One(commands::load_cell(c)?),
                (None, _, true) => CellSelection::Full,
                (None, true, _) => CellSelection::All,
                (None, false, false) => CellSelection::One(Default::default()),
            };
            commands::indep(cfg, &file, &sel, *count, *exhaustive)
        }
        Command::IotaCheck {
            theory,
            family,
            random,
        } => {
            let file = match family {
                Some(p) => commands::load_family(p, cfg)?,
                None => commands::default_iota_family(cfg)?,
            };
            let formulas = match (theory, random) {
                (Some(p), _) => commands::load_theory(p)?,
                (None, Some(n)) => commands::iota_random(cfg, &file, *n)?,
                (None, None) => {
                    return Err(InputError("give a theory file or --random".into()).into())
                }
            };
            commands::iota_check(cfg, &file, &formulas)
        }
        Command::Partition { family, max_gamma } => {
            commands::partition(cfg, &commands::load_family(family, cfg)?, *max_gamma)
        }
        Command::Solve {
            theory,
            mode,
            random,
            out,
        } => {
            let theories = match (theory, random) {
                (Some(p), _) => vec![commands::load_theory(p)?],
                (None, Some(n)) => commands::random_theories(cfg.require_seed()?, *n),
                (None, None) => {
                    return Err(InputError("give a theory file or --random".into()).into())
                }
            };
            let (report, models) = commands::solve(cfg, &theories, *mode)?;
            if let [Some(s)] = models.as_slice() {
                write_out(out, &indepfam::format::print_assignment(s))?;
            }
            Ok(report)
        }
        Command::Henkin {
            theory,
            max_rounds,
            max_terms,
            max_formulas,
            out,
        } => {
            let limits = ClosureLimits {
                max_rounds: *max_rounds,
                max_terms: *max_terms,
                max_formulas: *max_formulas,
            };
            let (report, model) =
                commands::henkin(cfg, &commands::load_fo_theory(theory)?, limits)?;
            if let Some(m) = model {
                write_out(out, &format!("{m}\n"))?;
            }
            Ok(report)
        }
        Command::Encode { args, fo, out } => {
            let filter = commands::load_finite_filter(&args.filter, cfg)?;
            let (report, text) = commands::encode(&filter, &encode_options(args)?, *fo)?;
            write_out(out, &text)?;
            Ok(report)
        }
        Command::Decode { args, model } => {
            let filter = commands::load_finite_filter(&args.filter, cfg)?;
            commands::decode(
                &filter,
                &encode_options(args)?,
                &commands::load_model_input(model)?,
            )
        }
        Command::Roundtrip {
            filter,
            random,
            principal,
            n,
            henkin,
            exhaustive,
        } => {
            let mut filters = match filter {
                Some(p) => vec![commands::load_finite_filter(p, cfg)?],
                None => Vec::new(),
            };
            filters.extend(commands::roundtrip_filters(
                cfg,
                *n,
                *principal,
                random.unwrap_or(0),
            )?);
            if filters.is_empty() {
                return Err(
                    InputError("give a filter file, --principal or --random".into()).into(),
                );
            }
            commands::roundtrip(cfg, &filters, *henkin, *exhaustive)
        }
        Command::Suite => suite::suite(cfg),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let g = &cli.global;
    let cfg = RunConfig {
        width: g.width,
        truncation: g.truncation,
        search_bound: g.bound,
        seed: g.seed,
        parallel: g.parallel,
        format: g.format,
        timing: g.timing,
    };
    let outcome = cfg
        .validate()
        .map_err(anyhow::Error::new)
        .and_then(|_| run(&cli.command, &cfg));
    match outcome {
        Ok(report) => {
            print!("{}", report.render(&cfg));
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code_for(&e) as u8)
        }
    }
}
