use std::io::{self, BufWriter, Write};
use std::net::SocketAddr;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use planadv::commands::{self, Format, GraphFormat, EXIT_ERROR};
use planadv::inputs::{load_files, read_text, InputFiles};
use planadv::service::{self, AppState, ServiceConfig};
use planadv_core::dialogue::DialogueSession;

#[derive(Parser)]
#[command(
    name = "planadv",
    version,
    about = "Explain classical plans with argument schemes and dialogues"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Files {
    /// PDDL domain file
    domain: PathBuf,
    /// PDDL problem file
    problem: PathBuf,
    /// Plan file, one ground action per line
    plan: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Check a plan: exit 0 if valid, 1 if invalid, 2 on input errors
    Validate {
        #[command(flatten)]
        files: Files,
    },
    /// Print the argument for the plan and for each of its elements
    Explain {
        #[command(flatten)]
        files: Files,
        #[arg(long, value_enum, default_value = "text")]
        format: FormatArg,
    },
    /// Print the argumentation framework as DOT or JSON
    Graph {
        #[command(flatten)]
        files: Files,
        /// Graphviz output (default)
        #[arg(long, conflicts_with = "json")]
        dot: bool,
        #[arg(long)]
        json: bool,
        /// Every argument and question (default)
        #[arg(long, conflicts_with = "session")]
        full: bool,
        /// Only the moves of a recorded dialogue: a transcript JSON file or
        /// one move per line
        #[arg(long, value_name = "FILE")]
        session: Option<PathBuf>,
        #[arg(short, long, value_name = "FILE")]
        output: Option<PathBuf>,
    },
    /// Interactive explanation dialogue on the terminal
    Dialogue {
        #[command(flatten)]
        files: Files,
        /// Write the transcript as JSON when the dialogue ends
        #[arg(long, value_name = "FILE")]
        transcript: Option<PathBuf>,
    },
    /// Run the HTTP session service
    Serve(ServeArgs),
}

#[derive(Args)]
struct ServeArgs {
    #[arg(long, env = "PLANADV_HOST", default_value = "127.0.0.1")]
    host: String,
    #[arg(long, env = "PLANADV_PORT", default_value_t = 8080)]
    port: u16,
    /// Idle sessions are dropped after this many seconds
    #[arg(long, env = "PLANADV_TTL_SECS", default_value_t = 3600)]
    ttl_secs: u64,
    #[arg(long, env = "PLANADV_MAX_SESSIONS", default_value_t = 1000)]
    max_sessions: usize,
    /// Directory of named fixtures, each with domain.pddl, problem.pddl and plan.plan
    #[arg(long, env = "PLANADV_FIXTURE_DIR")]
    fixture_dir: Option<PathBuf>,
    /// Append session events to this file as JSON lines
    #[arg(long, env = "PLANADV_TRANSCRIPT_LOG")]
    transcript_log: Option<PathBuf>,
    /// Development mode: allow cross-origin requests from --ui-origin
    #[arg(long, env = "PLANADV_DEV")]
    dev: bool,
    #[arg(long, env = "PLANADV_UI_ORIGIN", default_value = "http://localhost:5173")]
    ui_origin: String,
}

fn load(files: Files) -> Result<(planadv_core::planning::PlanningProblem, planadv_core::planning::Plan), ExitCode> {
    let files = InputFiles {
        domain: files.domain,
        problem: files.problem,
        plan: files.plan,
    };
    load_files(&files).map_err(|e| {
        eprintln!("error: {e}");
        ExitCode::from(EXIT_ERROR)
    })
}

fn io_failure(e: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(EXIT_ERROR)
}

fn run(cli: Cli) -> Result<ExitCode, ExitCode> {
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let code = match cli.command {
        Command::Validate { files } => {
            let (problem, plan) = load(files)?;
            commands::validate(&problem, &plan, &mut out).map_err(io_failure)?
        }
        Command::Explain { files, format } => {
            let (problem, plan) = load(files)?;
            let format = match format {
                FormatArg::Text => Format::Text,
                FormatArg::Json => Format::Json,
            };
            commands::explain(&problem, &plan, format, &mut out).map_err(io_failure)?
        }
        Command::Graph {
            files,
            json,
            session,
            output,
            ..
        } => {
            let (problem, plan) = load(files)?;
            let format = if json { GraphFormat::Json } else { GraphFormat::Dot };
            let session = match &session {
                Some(path) => Some(read_text(path).map_err(io_failure)?),
                None => None,
            };
            let mut buf = Vec::new();
            commands::graph(&problem, &plan, session.as_deref(), format, &mut buf).map_err(io_failure)?;
            match output {
                Some(path) => std::fs::write(&path, buf).map_err(|e| io_failure(format!("{}: {e}", path.display())))?,
                None => out.write_all(&buf).map_err(io_failure)?,
            }
            0
        }
        Command::Dialogue { files, transcript } => {
            let (problem, plan) = load(files)?;
            let mut session = DialogueSession::new(problem, plan);
            commands::dialogue(&mut session, io::stdin().lock(), &mut out).map_err(io_failure)?;
            if let Some(path) = transcript {
                commands::save_transcript(&session, &path)
                    .map_err(|e| io_failure(format!("{}: {e}", path.display())))?;
            }
            0
        }
        Command::Serve(args) => {
            drop(out);
            return serve(args).map(|()| ExitCode::SUCCESS).map_err(io_failure);
        }
    };
    out.flush().map_err(io_failure)?;
    Ok(ExitCode::from(code))
}

fn serve(args: ServeArgs) -> io::Result<()> {
    let config = ServiceConfig {
        ttl: Duration::from_secs(args.ttl_secs),
        max_sessions: args.max_sessions,
        fixture_dir: args.fixture_dir,
        transcript_log: args.transcript_log,
        cors_origins: if args.dev { vec![args.ui_origin] } else { Vec::new() },
    };
    let state = AppState::new(config)?;
    let addr: SocketAddr = format!("{}:{}", args.host, args.port)
        .parse()
        .map_err(|e| io::Error::new(io::ErrorKind::InvalidInput, format!("{}:{}: {e}", args.host, args.port)))?;
    let runtime = tokio::runtime::Runtime::new()?;
    runtime.block_on(async {
        let listener = tokio::net::TcpListener::bind(addr).await?;
        eprintln!("listening on http://{}", listener.local_addr()?);
        service::serve(state, listener).await
    })
}

fn main() -> ExitCode {
    run(Cli::parse()).unwrap_or_else(|code| code)
}
