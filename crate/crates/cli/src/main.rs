use clap::{Parser, Subcommand};

mod commands;

#[derive(Parser)]
#[command(
    name = "tailmf",
    version,
    about = "Matrix completion toolkit for rating data with long-tail frequency skew"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic exact-rank dataset and write the masked triples
    Generate(commands::GenerateArgs),
    /// Apply the two-phase skewed subsample to a ratings file
    Subsample(commands::SubsampleArgs),
    /// Split a ratings file into .train/.val/.test files
    Split(commands::SplitArgs),
    /// Train one method with fixed hyperparameters and save the model
    Train(commands::TrainArgs),
    /// Grid-search hyperparameters on given train/validation files
    Grid(commands::GridArgs),
    /// Repeated split + grid search + test report pipeline
    Experiment(commands::PipelineArgs),
    /// Synthetic study across matrix ranks and seeds
    StudySynthetic(commands::PipelineArgs),
}

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Generate(args) => commands::generate(args),
        Command::Subsample(args) => commands::subsample(args),
        Command::Split(args) => commands::split(args),
        Command::Train(args) => commands::train(args),
        Command::Grid(args) => commands::grid(args),
        Command::Experiment(args) => commands::experiment(args),
        Command::StudySynthetic(args) => commands::study_synthetic(args),
    };
    if let Err(err) = result {
        // single machine-readable error line on stderr
        eprintln!("{{\"error\":{}}}", escape_json(&format!("{err:#}")));
        std::process::exit(1);
    }
}

fn escape_json(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}
