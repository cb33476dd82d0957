//! `ecoloom` command line.
//!
//! Exit status: 0 success, 1 invalid model or input, 2 I/O failure,
//! 3 network failure.

use clap::{Parser, Subcommand, ValueEnum};
use ecoloom::compiler::{compile, emit_netlogo_with};
use ecoloom::engine::{run, EngineConfig};
use ecoloom::exemplars::{load_exemplar, ExemplarId};
use ecoloom::export::{to_csv, to_svg};
use ecoloom::model::{parse_model, serialize_model, validate_model, ConceptualModel, Format};
use ecoloom_eol::{EolClient, EolError, FixtureTransport, HttpTransport, RecordingTransport};
use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "ecoloom",
    version,
    about = "Build, compile and run agent-based ecology models"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a model document and list every violation.
    Validate { model: PathBuf },
    /// Compile a model and write the generated code.
    Compile {
        model: PathBuf,
        #[arg(long, value_enum, default_value_t = Emit::Netlogo)]
        emit: Emit,
        /// Engine settings baked into the NetLogo setup.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a model and export its population time series.
    Run {
        model: PathBuf,
        #[arg(long)]
        ticks: Option<u32>,
        #[arg(long)]
        seed: Option<u64>,
        /// Engine config file; --ticks and --seed take precedence over it.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Defaults to standard output.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// List or export the bundled exemplar models.
    Exemplar {
        #[command(subcommand)]
        action: ExemplarAction,
    },
    /// Suggest biotic parameters for a species from the Encyclopedia of Life.
    Lookup {
        /// Scientific or common name.
        #[arg(required = true)]
        species: Vec<String>,
        /// Replay recorded responses from this directory instead of the network.
        #[arg(long)]
        fixtures: Option<PathBuf>,
        /// Save live responses here in the fixture layout.
        #[arg(long, conflicts_with = "fixtures")]
        record: Option<PathBuf>,
    },
    /// Start the HTTP service on localhost.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        /// Directory for stored models and projects.
        #[arg(long, default_value = "ecoloom-data")]
        data: PathBuf,
        /// Keep documents in memory only.
        #[arg(long, conflicts_with = "data")]
        memory: bool,
    },
}

#[derive(Subcommand)]
enum ExemplarAction {
    List,
    Export {
        id: ExemplarId,
        /// Model document path; defaults to standard output.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the engine settings the exemplar was tuned under.
        #[arg(long)]
        config_out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Emit {
    Netlogo,
    Ir,
}

struct Failure {
    code: u8,
    message: String,
}

fn invalid(message: impl Display) -> Failure {
    Failure {
        code: 1,
        message: message.to_string(),
    }
}

fn io(path: &Path, e: impl Display) -> Failure {
    Failure {
        code: 2,
        message: format!("{}: {e}", path.display()),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| io(path, e))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| io(path, e))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => write(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_model(path: &Path) -> Result<ConceptualModel, Failure> {
    parse_model(&read(path)?, Format::from_path(path)).map_err(|e| invalid(format!("{}: {e}", path.display())))
}

fn load_config(path: Option<&Path>) -> Result<EngineConfig, Failure> {
    let config = match path {
        Some(p) => serde_json::from_str(&read(p)?).map_err(|e| invalid(format!("{}: {e}", p.display())))?,
        None => EngineConfig::default(),
    };
    Ok(config)
}

fn eol_failure(e: EolError) -> Failure {
    let code = match e {
        EolError::Network(_) | EolError::Malformed(_) => 3,
        EolError::Fixture(_) => 2,
        EolError::NotFound(_) | EolError::InvalidRequest(_) => 1,
    };
    Failure {
        code,
        message: e.to_string(),
    }
}

fn execute(command: Command) -> Result<(), Failure> {
    match command {
        Command::Validate { model } => {
            let model = load_model(&model)?;
            let report = validate_model(&model);
            print!("{report}");
            if report.is_empty() {
                Ok(())
            } else {
                Err(invalid(format!("{} violation(s)", report.violations.len())))
            }
        }
        Command::Compile {
            model,
            emit: target,
            config,
            out,
        } => {
            let program = compile(&load_model(&model)?).map_err(invalid)?;
            let text = match target {
                Emit::Netlogo => emit_netlogo_with(&program, &load_config(config.as_deref())?),
                Emit::Ir => serde_json::to_string_pretty(&program).expect("program serializes") + "\n",
            };
            emit(out.as_deref(), &text)
        }
        Command::Run {
            model,
            ticks,
            seed,
            config,
            csv,
            svg,
        } => {
            let model = load_model(&model)?;
            let mut cfg = load_config(config.as_deref())?;
            if let Some(t) = ticks {
                cfg.max_ticks = t;
            }
            if let Some(s) = seed {
                cfg.rng_seed = s;
            }
            cfg.validate().map_err(invalid)?;
            let program = compile(&model).map_err(invalid)?;
            let series = run(&program, &cfg).map_err(invalid)?;
            emit(csv.as_deref(), &to_csv(&series))?;
            if let Some(path) = svg {
                write(&path, &to_svg(&series, &model.name))?;
            }
            Ok(())
        }
        Command::Exemplar { action } => match action {
            ExemplarAction::List => {
                for id in ExemplarId::ALL {
                    println!("{:<24}{}", id.slug(), id.title());
                }
                Ok(())
            }
            ExemplarAction::Export { id, out, config_out } => {
                let (model, config) = load_exemplar(id);
                emit(out.as_deref(), &serialize_model(&model, Format::Json))?;
                if let Some(path) = config_out {
                    let text = serde_json::to_string_pretty(&config).expect("config serializes") + "\n";
                    write(&path, &text)?;
                }
                Ok(())
            }
        },
        Command::Lookup {
            species,
            fixtures,
            record,
        } => {
            let client = match (fixtures, record) {
                (Some(dir), _) => EolClient::new(FixtureTransport::new(dir)),
                (None, Some(dir)) => EolClient::new(RecordingTransport::new(HttpTransport::from_env(), dir)),
                (None, None) => EolClient::from_env(),
            };
            lookup(&client, &species.join(" "))
        }
        Command::Serve { port, data, memory } => serve(port, &data, memory),
    }
}

fn lookup(client: &EolClient, query: &str) -> Result<(), Failure> {
    let Some(found) = client.lookup(query).map_err(eol_failure)? else {
        println!("no species matched `{query}`");
        return Ok(());
    };
    let c = &found.candidate;
    match &c.common_name {
        Some(common) => println!("{} ({common}), taxon {}", c.scientific_name, c.taxon_id),
        None => println!("{}, taxon {}", c.scientific_name, c.taxon_id),
    }
    println!("{} trait record(s)", found.traits.len());
    if found.estimate.estimates.is_empty() {
        println!("no parameters could be estimated");
    }
    for e in &found.estimate.estimates {
        println!("  {:<24}{:>10}  (median of {})", e.parameter, e.value, e.records);
    }
    for note in &found.estimate.notes {
        println!("  note: {note}");
    }
    Ok(())
}

fn serve(port: u16, data: &Path, memory: bool) -> Result<(), Failure> {
    use ecoloom_service::{AppState, FileStore};
    let state = if memory {
        AppState::in_memory(EolClient::from_env())
    } else {
        let store = FileStore::open(data).map_err(|e| io(data, e))?;
        AppState::new(store, EolClient::from_env())
    };
    let addr = ecoloom_service::local_address(port);
    let runtime = tokio::runtime::Runtime::new().map_err(|e| Failure {
        code: 2,
        message: e.to_string(),
    })?;
    runtime.block_on(async {
        let listener = tokio::net::TcpListener::bind(addr).await.map_err(|e| Failure {
            code: 2,
            message: format!("cannot bind {addr}: {e}"),
        })?;
        eprintln!("listening on http://{addr}");
        ecoloom_service::serve(listener, state).await.map_err(|e| Failure {
            code: 2,
            message: e.to_string(),
        })
    })
}

fn main() -> ExitCode {
    match execute(Cli::parse().command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
