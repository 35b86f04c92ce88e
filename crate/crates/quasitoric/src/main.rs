use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use quasitoric::report::{
    self, coloring_source_from_arg, pair_source_from_arg, polytope_source_from_arg, DChoice,
    OutputFormat, RunConfig,
};

#[derive(Parser)]
#[command(
    name = "quasitoric",
    about = "Cohomology, Stiefel-Whitney classes and immersion bounds for manifolds over colored simple polytopes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum DArg {
    #[value(name = "1")]
    One,
    #[value(name = "2")]
    Two,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full pipeline for one polytope and report classes and bounds.
    Compute {
        /// Generator expression (`cube:4`, `cube:2 x perm:3`) or a JSON file.
        #[arg(long)]
        polytope: String,
        /// `auto` or a coloring JSON file.
        #[arg(long, default_value = "auto")]
        coloring: String,
        /// `paper` (staircase columns), `plain` (basis columns), or a
        /// characteristic matrix JSON file to validate and use.
        #[arg(long, default_value = "paper")]
        pair: String,
        /// Coefficient selector: 1 (real), 2 (complex), or both.
        #[arg(long, value_enum, default_value = "both")]
        d: DArg,
        #[arg(long, value_enum, default_value = "text")]
        format: FormatArg,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print only the cross-check results.
        #[arg(long)]
        check: bool,
    },
    /// Print the sigma table (dual class coefficient parities) up to n-max.
    Sigma {
        #[arg(long, default_value_t = 16)]
        n_max: usize,
    },
    /// Print the dual classes for n = 2..5 recomputed from the product form.
    Examples,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(report::exit_code(&err) as u8)
        }
    }
}

fn run(cli: Cli) -> quasitoric::Result<()> {
    match cli.command {
        Command::Compute {
            polytope,
            coloring,
            pair,
            d,
            format,
            out,
            check,
        } => {
            let cfg = RunConfig {
                polytope: polytope_source_from_arg(&polytope),
                coloring: coloring_source_from_arg(&coloring),
                pair: pair_source_from_arg(&pair),
                d: match d {
                    DArg::One => DChoice::One,
                    DArg::Two => DChoice::Two,
                    DArg::Both => DChoice::Both,
                },
                format: match format {
                    FormatArg::Text => OutputFormat::Text,
                    FormatArg::Json => OutputFormat::Json,
                },
                check_only: check,
            };
            let result = report::run_compute(&cfg)?;
            let rendered = report::render(&result, cfg.format, cfg.check_only)?;
            match out {
                Some(path) => std::fs::write(path, rendered)?,
                None => print!("{rendered}"),
            }
            if !result.checks.all_pass() {
                return Err(quasitoric::Error::Internal(
                    "one or more cross-checks failed".into(),
                ));
            }
            Ok(())
        }
        Command::Sigma { n_max } => {
            print!("{}", report::sigma_text(n_max)?);
            Ok(())
        }
        Command::Examples => {
            print!("{}", report::dual_class_lines());
            Ok(())
        }
    }
}
