//! `swapgame`: validation, enumeration, solving, strategy checks, board
//! generation and the HTTP service from the command line.
//!
//! Exit status is 0 for success or a true/C-wins answer, 1 for a false or
//! losing answer, and 2 for usage or data errors.

use std::io::Write;
use std::net::{IpAddr, SocketAddr};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use swapgame_core::board::Severity;
use swapgame_core::connectivity::{self, BackendKind};
use swapgame_core::disjointtrees::{self, LinkSmoothingClass, MultiGraph};
use swapgame_core::{catalog, parse_board, ribbon, solver, strategy, write_board};
use swapgame_core::{BitVec, Board, CMoves, Connectivity, PairingStrategy, Parallelism, Player};

#[derive(Parser)]
#[command(name = "swapgame", version, about = "Crossing-swap connectivity game tools")]
struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Run enumeration and search on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Backend {
    Auto,
    Planar,
    Ribbon,
    Designated,
}

#[derive(Subcommand)]
enum Command {
    /// Check a board file for structural errors.
    Validate { board: String },
    /// List states; with --connected, only the connected ones.
    States {
        board: String,
        #[arg(long)]
        connected: bool,
        #[arg(long, value_enum, default_value_t = Backend::Auto)]
        backend: Backend,
    },
    /// Winner under optimal play.
    Solve {
        board: String,
        #[arg(long)]
        start: String,
        #[arg(long)]
        first: Player,
    },
    /// Outcome class: whether C wins moving first and moving second.
    Classify {
        board: String,
        #[arg(long)]
        start: String,
    },
    /// Check a pairing strategy against every reply by D.
    Verify {
        board: String,
        #[arg(long)]
        start: String,
        #[arg(long)]
        strategy: String,
    },
    /// Look for a pairing strategy for C.
    Search {
        board: String,
        #[arg(long)]
        start: String,
        #[arg(long, value_name = "first|second")]
        c_moves: CMoves,
    },
    /// Write a catalog board file.
    Gen {
        /// `ladder` or any catalog board name.
        family: String,
        #[arg(long)]
        steps: Option<usize>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Equivalence class of a state: size and whether it holds a connected state.
    Class {
        board: String,
        #[arg(long)]
        start: String,
    },
    /// The move matrix, one row per region.
    Matrix { board: String },
    /// Surface data of an embedded board and of the sub-ribbon graph on `--edges`.
    Surface {
        board: String,
        /// Crossings to keep; all of them by default.
        #[arg(long)]
        edges: Option<String>,
    },
    /// Edge-disjoint spanning trees of an edge-list multigraph.
    Trees {
        edgelist: PathBuf,
        #[arg(long, default_value_t = 2)]
        k: usize,
        /// Also run the link smoothing necessary-condition classifier.
        #[arg(long)]
        link_smoothing: bool,
    },
    /// Run the HTTP API.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: IpAddr,
        /// Directory of board files; the built-in catalog when omitted.
        #[arg(long)]
        boards: Option<PathBuf>,
        /// Directory for session move logs.
        #[arg(long)]
        sessions: Option<PathBuf>,
        #[arg(long)]
        cors_origin: Option<String>,
    },
}

/// A command result: JSON value, text rendering, and whether the answer is
/// true-ish.
struct Report {
    json: Value,
    text: String,
    ok: bool,
}

impl Report {
    fn new(json: Value, text: impl Into<String>, ok: bool) -> Self {
        Report {
            json,
            text: text.into(),
            ok,
        }
    }
}

type CmdResult = Result<Report, String>;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let mode = if cli.sequential {
        Parallelism::Sequential
    } else {
        Parallelism::Parallel
    };
    match run(cli.command, mode) {
        Ok(r) => {
            let body = match cli.format {
                Format::Json => serde_json::to_string_pretty(&r.json).expect("json"),
                Format::Text => r.text.trim_end().to_string(),
            };
            if !body.is_empty() {
                let _ = writeln!(std::io::stdout().lock(), "{body}");
            }
            if r.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

/// A board file path, or a catalog name when no such file exists.
fn load_board(source: &str) -> Result<Board, String> {
    let path = Path::new(source);
    if path.exists() {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{source}: {e}"))?;
        return parse_board(&text).map_err(|e| format!("{source}: {e}"));
    }
    catalog::by_name(source)
        .map(|e| e.board)
        .map_err(|_| format!("{source}: no such file or catalog board"))
}

fn bits(board: &Board, s: &str) -> Result<BitVec, String> {
    let v: BitVec = s.parse().map_err(err)?;
    board.check_len(&v).map_err(err)?;
    Ok(v)
}

fn connectivity(board: &Board, backend: Backend) -> Result<Connectivity, String> {
    let kind = match backend {
        Backend::Auto => return Connectivity::for_board(board).map_err(err),
        Backend::Planar => BackendKind::PlanarGraph,
        Backend::Ribbon => BackendKind::RibbonEmbedding,
        Backend::Designated => BackendKind::DesignatedSet,
    };
    Connectivity::with_backend(board, kind).map_err(err)
}

fn run(command: Command, mode: Parallelism) -> CmdResult {
    match command {
        Command::Validate { board } => validate(&board),
        Command::States {
            board,
            connected,
            backend,
        } => states(&board, connected, backend, mode),
        Command::Solve { board, start, first } => solve(&board, &start, first),
        Command::Classify { board, start } => classify(&board, &start),
        Command::Verify { board, start, strategy } => verify(&board, &start, &strategy, mode),
        Command::Search { board, start, c_moves } => search(&board, &start, c_moves, mode),
        Command::Gen { family, steps, output } => generate(&family, steps, output.as_deref()),
        Command::Class { board, start } => class(&board, &start, mode),
        Command::Matrix { board } => matrix(&board),
        Command::Surface { board, edges } => surface(&board, edges.as_deref()),
        Command::Trees {
            edgelist,
            k,
            link_smoothing,
        } => trees(&edgelist, k, link_smoothing),
        Command::Serve {
            port,
            host,
            boards,
            sessions,
            cors_origin,
        } => serve(SocketAddr::new(host, port), boards, sessions, cors_origin),
    }
}

fn validate(source: &str) -> CmdResult {
    let board = load_board(source)?;
    let violations = board.validate();
    let errors = violations.iter().filter(|v| v.severity == Severity::Error).count();
    let mut text = format!(
        "{}: {} crossings, {} regions, {}\n",
        board.name(),
        board.n(),
        board.k(),
        if errors == 0 { "valid" } else { "invalid" }
    );
    for v in &violations {
        let tag = match v.severity {
            Severity::Error => "error",
            Severity::Notice => "notice",
        };
        text += &format!("{tag}: {v}\n");
    }
    let json = json!({
        "name": board.name(),
        "crossings": board.n(),
        "regions": board.k(),
        "valid": errors == 0,
        "violations": violations,
    });
    Ok(Report::new(json, text, errors == 0))
}

/// Above this many crossings `states` without `--connected` refuses to list.
const MAX_LISTED_CROSSINGS: usize = 16;

fn states(source: &str, connected: bool, backend: Backend, mode: Parallelism) -> CmdResult {
    let board = load_board(source)?;
    let conn = connectivity(&board, backend)?;
    if connected {
        let list = connectivity::enumerate_with(&conn, mode).map_err(err)?;
        let text: String = list.iter().map(|s| format!("{s}\n")).collect();
        let json = json!({ "board": board.name(), "count": list.len(), "states": list });
        return Ok(Report::new(json, text, true));
    }
    let n = board.n();
    if n > MAX_LISTED_CROSSINGS {
        return Err(format!(
            "{n} crossings is too many to list every state; use --connected"
        ));
    }
    let mut all: Vec<BitVec> = (0..1u64 << n).map(|m| BitVec::from_mask(m, n)).collect();
    all.sort_by_key(BitVec::lex_key);
    let mut text = String::new();
    let mut rows = Vec::new();
    for s in all {
        let count = conn.component_count(&s).map_err(err)?;
        let label = match count.is_connected() {
            Some(true) => "connected",
            Some(false) => "disconnected",
            None => "unknown",
        };
        text += &format!("{s} {label}\n");
        rows.push(json!({ "state": s, "components": count, "connected": count.is_connected() }));
    }
    Ok(Report::new(json!({ "board": board.name(), "states": rows }), text, true))
}

fn solve(source: &str, start: &str, first: Player) -> CmdResult {
    let board = load_board(source)?;
    let start = bits(&board, start)?;
    let outcome = solver::solve(&board, &start, first).map_err(err)?;
    let json = json!({ "board": board.name(), "start": start, "first": first, "winner": outcome.winner });
    Ok(Report::new(json, format!("winner: {}", outcome.winner), outcome.winner == Player::C))
}

fn classify(source: &str, start: &str) -> CmdResult {
    let board = load_board(source)?;
    let start = bits(&board, start)?;
    let class = solver::outcome_class(&board, &start).map_err(err)?;
    let text = format!(
        "c wins moving first: {}\nc wins moving second: {}",
        class.c_wins_moving_first, class.c_wins_moving_second
    );
    let json = json!({ "board": board.name(), "start": start, "class": class });
    Ok(Report::new(json, text, true))
}

fn verify(source: &str, start: &str, notation: &str, mode: Parallelism) -> CmdResult {
    let board = load_board(source)?;
    let start = bits(&board, start)?;
    let p: PairingStrategy = notation.parse().map_err(err)?;
    let verdict = strategy::verify_with(&board, &start, &p, mode).map_err(err)?;
    let mut text = format!("wins: {}", verdict.wins);
    if let Some(c) = &verdict.counterexample {
        let choices: String = c.choices.iter().map(|&b| if b { '1' } else { '0' }).collect();
        text += &format!("\ncounterexample: choices {choices}, final state {}", c.final_state);
    }
    let json = json!({
        "board": board.name(),
        "start": start,
        "strategy": p.to_string(),
        "wins": verdict.wins,
        "counterexample": verdict.counterexample,
    });
    Ok(Report::new(json, text, verdict.wins))
}

fn search(source: &str, start: &str, c_moves: CMoves, mode: Parallelism) -> CmdResult {
    let board = load_board(source)?;
    let start = bits(&board, start)?;
    let found = strategy::search_with(&board, &start, c_moves, mode).map_err(err)?;
    let text = match &found {
        Some(p) => format!("strategy: {p}"),
        None => "strategy: none".to_string(),
    };
    let json = json!({
        "board": board.name(),
        "start": start,
        "c_moves": c_moves.to_string(),
        "strategy": found.as_ref().map(|p| p.to_string()),
    });
    Ok(Report::new(json, text, found.is_some()))
}

fn generate(family: &str, steps: Option<usize>, output: Option<&Path>) -> CmdResult {
    let entry = match (family, steps) {
        ("ladder", Some(n)) => catalog::ladder(n).map_err(err)?,
        ("ladder", None) => return Err("gen ladder needs --steps".into()),
        (name, None) => catalog::by_name(name).map_err(err)?,
        (_, Some(_)) => return Err("--steps applies only to ladder".into()),
    };
    let text = write_board(&entry.board);
    let json = match output {
        Some(path) => {
            std::fs::write(path, &text).map_err(|e| format!("{}: {e}", path.display()))?;
            json!({ "board": entry.board.name(), "written": path.display().to_string() })
        }
        None => serde_json::from_str(&text).expect("board json"),
    };
    let text = match output {
        Some(path) => format!("wrote {} to {}", entry.board.name(), path.display()),
        None => text,
    };
    Ok(Report::new(json, text, true))
}

fn class(source: &str, start: &str, mode: Parallelism) -> CmdResult {
    let board = load_board(source)?;
    let start = bits(&board, start)?;
    let size = connectivity::class_size(&board).map_err(err)?;
    let has = connectivity::class_has_connected_state(&board, &start, mode).map_err(err)?;
    let text = format!("class size: {size}\ncontains connected: {has}");
    let json = json!({
        "board": board.name(),
        "start": start,
        "class_size": size.to_string(),
        "contains_connected": has,
    });
    Ok(Report::new(json, text, has))
}

fn matrix(source: &str) -> CmdResult {
    let board = load_board(source)?;
    let m = board.move_matrix().map_err(err)?;
    let mut text = format!("{} x {}, rank {}\n", m.nrows(), m.ncols(), m.rank());
    let mut rows = Vec::new();
    for (i, row) in m.rows().iter().enumerate() {
        text += &format!("{} {row}\n", board.region_id(i));
        rows.push(json!({ "region": board.region_id(i), "row": row }));
    }
    let json = json!({ "board": board.name(), "crossings": board.crossings(), "rank": m.rank(), "rows": rows });
    Ok(Report::new(json, text, true))
}

fn surface(source: &str, edges: Option<&str>) -> CmdResult {
    let board = load_board(source)?;
    let emb = board
        .embedding()
        .ok_or_else(|| format!("{} has no embedding", board.name()))?;
    let g = ribbon::RibbonGraph::compile(emb, board.crossings()).map_err(err)?;
    let on = match edges {
        Some(s) => bits(&board, s)?,
        None => BitVec::ones(board.n()),
    };
    let boundary = g.boundary_components(&on).map_err(err)?;
    let orientable = g.neighborhood_orientable(&on).map_err(err)?;
    let chi = g.euler_characteristic();
    let text = format!(
        "vertices: {}\nedges: {}\nfaces: {}\neuler characteristic: {chi}\nedges kept: {on}\nboundary components: {boundary}\norientable: {orientable}",
        g.vertex_count(),
        g.edge_count(),
        g.face_count()
    );
    let json = json!({
        "board": board.name(),
        "vertices": g.vertex_count(),
        "edges": g.edge_count(),
        "faces": g.face_count(),
        "euler_characteristic": chi,
        "edges_kept": on,
        "boundary_components": boundary,
        "orientable": orientable,
    });
    Ok(Report::new(json, text, true))
}

fn trees(path: &Path, k: usize, link_smoothing: bool) -> CmdResult {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let g = MultiGraph::parse_edge_list(&text).map_err(err)?;
    let has = disjointtrees::has_k_disjoint_spanning_trees(&g, k).map_err(err)?;
    let witness = if has {
        None
    } else {
        disjointtrees::violating_partition(&g, k).map_err(err)?
    };
    let names = g.names();
    let named = |part: &[usize]| part.iter().map(|&v| names[v].clone()).collect::<Vec<_>>();
    let mut out = format!(
        "vertices: {}\nedges: {}\n{k} edge-disjoint spanning trees: {has}\n",
        g.vertex_count(),
        g.edge_count()
    );
    if let Some(w) = &witness {
        let parts: Vec<String> = w.parts.iter().map(|p| format!("{{{}}}", named(p).join(", "))).collect();
        out += &format!(
            "witness: {} parts, {} cross edges < {}: {}\n",
            w.parts.len(),
            w.cross_edges,
            k * (w.parts.len() - 1),
            parts.join(" ")
        );
    }
    let mut json = json!({
        "vertices": g.vertex_count(),
        "edges": g.edge_count(),
        "k": k,
        "has_disjoint_trees": has,
        "witness": witness.as_ref().map(|w| json!({
            "parts": w.parts.iter().map(|p| named(p)).collect::<Vec<_>>(),
            "cross_edges": w.cross_edges,
        })),
    });
    let mut ok = has;
    if link_smoothing {
        let class = disjointtrees::classify_link_smoothing(&g).map_err(err)?;
        match &class {
            LinkSmoothingClass::DefinitelyNotP { reasons, .. } => {
                let reasons: Vec<String> = reasons.iter().map(|r| r.to_string()).collect();
                out += &format!("link smoothing: definitely not P ({})\n", reasons.join(", "));
            }
            LinkSmoothingClass::PNecessaryConditionsHold => {
                out += "link smoothing: necessary conditions for P hold\n";
            }
        }
        ok = matches!(class, LinkSmoothingClass::PNecessaryConditionsHold);
        json["link_smoothing"] = serde_json::to_value(&class).expect("json");
    }
    Ok(Report::new(json, out, ok))
}

fn serve(addr: SocketAddr, boards: Option<PathBuf>, sessions: Option<PathBuf>, cors_origin: Option<String>) -> CmdResult {
    use swapgame_service::{AppState, BoardStore, Config};
    let store = match boards {
        Some(dir) => BoardStore::from_dir(&dir)?,
        None => BoardStore::from_catalog().map_err(err)?,
    };
    let config = Config {
        sessions_dir: sessions,
        cors_origin,
    };
    let state = AppState::new(store, config).map_err(err)?;
    let rt = tokio::runtime::Runtime::new().map_err(err)?;
    eprintln!("serving on http://{addr}");
    rt.block_on(swapgame_service::serve(addr, state)).map_err(err)?;
    Ok(Report::new(Value::Null, "", true))
}
