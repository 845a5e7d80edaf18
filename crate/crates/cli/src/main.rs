use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use featsel_core::baselines::BaselineMethod;
use featsel_core::classifiers::ClassifierKind;
use featsel_core::experiment::{
    export_projection, export_table, read_arms, run_experiment, select_solution, write_experiment,
    ExperimentConfig, Method, Preset, PROJECTION_FILES,
};
use featsel_core::moea::Algorithm;
use featsel_core::objectives::Formulation;

/// Multi-objective wrapper feature selection for intrusion detection.
#[derive(Parser)]
#[command(name = "featsel", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an evolutionary search and write its archives.
    Run {
        #[command(flatten)]
        common: CommonArgs,
        /// nsga2, nsga3, moead or ga.
        #[arg(long)]
        algorithm: Option<Algorithm>,
        /// dr3, acc2 or acc1.
        #[arg(long)]
        formulation: Option<Formulation>,
        #[arg(long)]
        pop: Option<usize>,
        #[arg(long)]
        gens: Option<usize>,
        /// Crossover probability.
        #[arg(long)]
        pc: Option<f64>,
        /// Mutation probability.
        #[arg(long)]
        pm: Option<f64>,
        #[arg(long)]
        repeats: Option<usize>,
    },
    /// Run a non-evolutionary baseline over the k grid.
    Baseline {
        #[command(flatten)]
        common: CommonArgs,
        /// sfs, rfe, pca or basic.
        #[arg(long)]
        method: BaselineMethod,
        /// Comma-separated subset sizes.
        #[arg(long, value_delimiter = ',')]
        k: Option<Vec<usize>>,
    },
    /// Compare stored runs against a primary method with Welch t-tests.
    Report {
        #[arg(long)]
        results: PathBuf,
        /// Label of the method every other row is compared with.
        #[arg(long)]
        primary: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write pairwise objective projections of stored archives.
    Project {
        #[arg(long)]
        results: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct CommonArgs {
    /// TOML configuration; command-line flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// desk or paper; ignored when --config is given.
    #[arg(long)]
    preset: Option<Preset>,
    #[arg(long)]
    dataset: Option<String>,
    #[arg(long)]
    train: Option<PathBuf>,
    #[arg(long)]
    test: Option<PathBuf>,
    /// cart, logreg or forest.
    #[arg(long)]
    classifier: Option<ClassifierKind>,
    #[arg(long)]
    seed: Option<u64>,
    /// Training rows kept after loading.
    #[arg(long)]
    subsample: Option<usize>,
    #[arg(long)]
    workers: Option<usize>,
    /// Directory name for this arm inside the output directory.
    #[arg(long)]
    label: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl CommonArgs {
    fn config(&self) -> Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(path) => ExperimentConfig::load(path)?,
            None => ExperimentConfig::preset(self.preset.unwrap_or(Preset::Paper)),
        };
        if let Some(v) = &self.dataset {
            cfg.dataset = v.clone();
        }
        if let Some(v) = &self.train {
            cfg.train_path = Some(v.clone());
        }
        if let Some(v) = &self.test {
            cfg.test_path = Some(v.clone());
        }
        if let Some(v) = self.classifier {
            cfg.classifier.kind = v;
        }
        if let Some(v) = self.seed {
            cfg.seed = v;
        }
        if let Some(v) = self.subsample {
            cfg.subsample_train = Some(v);
        }
        if let Some(v) = self.workers {
            cfg.workers = v;
        }
        if let Some(v) = &self.label {
            cfg.label = Some(v.clone());
        }
        if let Some(v) = &self.out {
            cfg.output_dir = v.clone();
        }
        Ok(cfg)
    }
}

fn execute(cfg: &ExperimentConfig) -> Result<()> {
    cfg.validate()?;
    let results = run_experiment(cfg)?;
    let dir = write_experiment(cfg, &results)?;
    for r in &results {
        let s = select_solution(r)?;
        println!(
            "{} repeat {}: size {} accuracy {:.4} detection rate {:.4} ({} archive members)",
            r.meta.label,
            r.meta.repeat,
            s.size,
            s.test.accuracy,
            s.test.detection_rate,
            r.members.len()
        );
    }
    println!("wrote {}", dir.display());
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match dispatch(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run { common, algorithm, formulation, pop, gens, pc, pm, repeats } => {
            let mut cfg = common.config()?;
            if let Some(a) = algorithm {
                cfg.method = Method::Search(a);
            }
            if !cfg.method.is_search() {
                bail!("`run` needs a search algorithm, the configuration names {}", cfg.method);
            }
            if let Some(v) = formulation {
                cfg.formulation = v;
            } else if common.config.is_none() && cfg.method == Method::Search(Algorithm::Ga) {
                cfg.formulation = Formulation::Acc1;
            }
            if let Some(v) = pop {
                cfg.population = v;
            }
            if let Some(v) = gens {
                cfg.generations = v;
            }
            if let Some(v) = pc {
                cfg.crossover_prob = v;
            }
            if let Some(v) = pm {
                cfg.mutation_prob = v;
            }
            if let Some(v) = repeats {
                cfg.repeats = v;
            }
            execute(&cfg)
        }
        Command::Baseline { common, method, k } => {
            let mut cfg = common.config()?;
            cfg.method = Method::Baseline(method);
            if let Some(v) = k {
                cfg.k_grid = v;
            }
            execute(&cfg)
        }
        Command::Report { results, primary, out } => {
            let arms = read_arms(&results).with_context(|| format!("reading {}", results.display()))?;
            if arms.is_empty() {
                bail!("no result directories below {}", results.display());
            }
            let out = out.unwrap_or(results);
            let table = export_table(&arms, &primary, &out)?;
            print!("{}", table.to_text());
            println!("wrote {}", out.join("table.csv").display());
            Ok(())
        }
        Command::Project { results, out } => {
            let arms = read_arms(&results).with_context(|| format!("reading {}", results.display()))?;
            if arms.is_empty() {
                bail!("no result directories below {}", results.display());
            }
            let out = out.unwrap_or(results);
            export_projection(&arms, &out)?;
            for f in PROJECTION_FILES {
                println!("wrote {}", out.join(f).display());
            }
            Ok(())
        }
    }
}
