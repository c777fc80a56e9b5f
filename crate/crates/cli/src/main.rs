mod commands;
mod input;
mod report;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use report::{CliError, Output};

#[derive(Parser)]
#[command(name = "crystal-forge", version, about = "Exact invariants of monomial F-crystals with reductive structure")]
struct Cli {
    /// Print the JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Catalog parameter, overriding any `:param` suffix.
    #[arg(long, visible_alias = "l", global = true)]
    param: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Newton polygon of a type, crystal or matrix.
    Slopes {
        input: String,
        /// Report the adjoint polygon of a module.
        #[arg(long)]
        adjoint: bool,
        /// Include the ASCII picture in the JSON report.
        #[arg(long)]
        ascii: bool,
    },
    /// Hodge polygon.
    Hodge { input: String },
    /// Sh-ordinariness verdict of a module against a type.
    Ordinary {
        input: String,
        /// Type spec file or catalog reference; defaults to the input's own.
        #[arg(long)]
        spec: Option<String>,
    },
    /// FSHW invariant.
    Fshw {
        input: String,
        /// Prime for monomial crystals.
        #[arg(long)]
        p: Option<u64>,
    },
    /// Orbit decomposition, p-divisible types and duality exponents.
    Decompose {
        input: String,
        #[arg(long, value_delimiter = ',', default_values_t = [2u64, 3, 5, 7])]
        primes: Vec<u64>,
    },
    /// Cyclic decomposition of a filtered monomial crystal.
    ClassifyCyclic { input: String },
    /// Sign twists of PGL2^n without slope 0, by formula and brute force.
    /// Takes `n` or a catalog reference to the family.
    CountNu { n: String },
    /// Worked examples.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Root system data, e.g. `roots D4`.
    Roots { system: String },
    /// Intersection of nilradicals over the given nodes.
    Nilradical {
        system: String,
        #[arg(required = true)]
        nodes: Vec<usize>,
    },
    /// Maximum projection dimension over the Weyl group.
    WeylScan {
        system: String,
        #[arg(long)]
        x: Option<usize>,
        #[arg(long)]
        y: Option<usize>,
        #[arg(long)]
        allow_e7: bool,
    },
}

#[derive(Subcommand)]
enum CatalogAction {
    List,
    Show { id: String },
}

fn run(cli: &Cli) -> Result<Output, CliError> {
    let load = |r: &str| input::load(r, cli.param);
    match &cli.command {
        Command::Slopes { input, adjoint, ascii } => commands::slopes(input, load(input)?, *adjoint, *ascii),
        Command::Hodge { input } => commands::hodge(input, load(input)?),
        Command::Ordinary { input, spec } => {
            let t = spec.as_deref().map(input::load_type).transpose()?;
            commands::ordinary(input, load(input)?, t)
        }
        Command::Fshw { input, p } => commands::fshw(input, load(input)?, *p),
        Command::Decompose { input, primes } => commands::decompose(input, load(input)?, primes),
        Command::ClassifyCyclic { input } => commands::classify(input, load(input)?),
        Command::CountNu { n } => match n.parse() {
            Ok(v) => commands::count(v),
            Err(_) => match load(n)? {
                input::Input::Family(v) => commands::count(v),
                other => Err(CliError::Parse(format!("{n} is a {}, not a sign family", other.kind()))),
            },
        },
        Command::Catalog { action: CatalogAction::List } => commands::catalog_list(),
        Command::Catalog { action: CatalogAction::Show { id } } => commands::catalog_show(id, cli.param),
        Command::Roots { system } => commands::roots(&input::root_system(system)?),
        Command::Nilradical { system, nodes } => commands::nilradical(&input::root_system(system)?, nodes),
        Command::WeylScan { system, x, y, allow_e7 } => {
            commands::weyl_scan(&input::root_system(system)?, *x, *y, *allow_e7)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&out.report).expect("reports serialize"));
            } else {
                print!("{}", out.text);
            }
            if out.failed {
                ExitCode::from(4)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
