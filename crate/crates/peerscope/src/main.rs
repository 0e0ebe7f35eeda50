use clap::{Parser, Subcommand};

use peerscope::cli::{
    cmd_baselines, cmd_experiment, cmd_generate, cmd_score, cmd_train, ExperimentCmd, GenerateArgs,
    PipelineArgs, ScoreArgs, TrainArgs,
};

/// Peer-group analysis of application privileges.
#[derive(Parser)]
#[command(name = "peerscope", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a seeded synthetic corpus with planted outliers.
    Generate(GenerateArgs),
    /// Score every app against its peer group and rank the results.
    Score(ScoreArgs),
    /// Write each peer group's baseline (expected) privileges.
    Baselines(PipelineArgs),
    /// Run one evaluation procedure and write its CSV table.
    Experiment {
        #[command(subcommand)]
        kind: ExperimentCmd,
    },
    /// Train a text model and write its dump.
    Train(TrainArgs),
}

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Generate(args) => cmd_generate(args),
        Command::Score(args) => cmd_score(args),
        Command::Baselines(args) => cmd_baselines(args),
        Command::Experiment { kind } => cmd_experiment(kind),
        Command::Train(args) => cmd_train(args),
    };
    if let Err(e) = result {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
