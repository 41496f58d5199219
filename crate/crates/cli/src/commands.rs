//! Subcommands and their exit codes.
//!
//! Every command yields exactly one document. Exit codes: 0 found, winning or
//! true; 1 not found, losing or false; 2 unknown within the bound; 3 input or
//! format error.

use std::path::{Path, PathBuf};

use causal_games::automata::{is_final_state, AsyncAutomaton, TableAutomaton};
use causal_games::coloring::{self, ColoringConstraint};
use causal_games::games::{self, AllowAll, BlockAll, DistributedGame, Strategy, TableStrategy, Verdict};
use causal_games::pcp::{self, Reduction};
use causal_games::reduction_game::{self, ColoringGame, ColoringStrategy};
use causal_games::traces::{normalize, LetterSet, Trace};
use clap::{Parser, Subcommand};

use crate::documents::*;

pub const EXIT_YES: i32 = 0;
pub const EXIT_NO: i32 = 1;
pub const EXIT_UNKNOWN: i32 = 2;
pub const EXIT_INPUT: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "causal-games", version, about = "Traces, distributed games and the tiling-to-game reductions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Trace documents.
    #[command(subcommand)]
    Trace(TraceCmd),
    /// Tile correspondence instances.
    #[command(subcommand)]
    Pcp(PcpCmd),
    /// Bipartite grid coloring constraints.
    #[command(subcommand)]
    Bcp(BcpCmd),
    /// Distributed games and strategies.
    #[command(subcommand)]
    Game(GameCmd),
}

#[derive(Debug, Subcommand)]
pub enum TraceCmd {
    /// Prints the canonical representative.
    Normalize { file: PathBuf },
    /// Prints the causal view of one process.
    View {
        #[arg(long)]
        process: String,
        file: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
pub enum PcpCmd {
    /// Checks a 1-based tile sequence.
    Check {
        file: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        seq: Vec<usize>,
    },
    /// Searches for the shortest solution up to a length bound.
    Solve {
        file: PathBuf,
        #[arg(long)]
        max_len: usize,
    },
    /// Emits the equivalent coloring constraint.
    ToBcp { file: PathBuf },
}

#[derive(Debug, Subcommand)]
pub enum BcpCmd {
    /// Checks a coloring against a constraint.
    Check { constraint: PathBuf, coloring: PathBuf },
    /// Searches for a satisfying coloring within the size bounds.
    Solve {
        constraint: PathBuf,
        #[arg(long)]
        max_n: usize,
        #[arg(long)]
        max_m: usize,
    },
    /// Emits the six-process game built from a constraint.
    ToGame { constraint: PathBuf },
}

#[derive(Debug, Subcommand)]
pub enum GameCmd {
    /// Decides whether a strategy wins, exploring plays up to a length bound.
    Verify {
        game: PathBuf,
        strategy: PathBuf,
        #[arg(long)]
        max_depth: usize,
    },
    /// Reads a coloring off a winning strategy of a coloring game.
    ExtractColoring {
        game: PathBuf,
        strategy: PathBuf,
        #[arg(long)]
        max_depth: usize,
    },
    /// Replays a scripted word under a strategy.
    Simulate {
        game: PathBuf,
        strategy: PathBuf,
        #[arg(long, default_value = "no")]
        interactive: String,
        /// Letters separated by spaces or commas.
        #[arg(long)]
        script: String,
    },
}

/// A command's document and exit code.
#[derive(Debug)]
pub struct Outcome {
    pub document: Document,
    pub code: i32,
}

impl Outcome {
    fn new(document: Document, code: i32) -> Self {
        Outcome { document, code }
    }

    fn verdict(v: VerdictDoc, code: i32) -> Self {
        Outcome::new(Document::Verdict(v), code)
    }

    /// The document printed for an input error.
    pub fn error(e: &CliError) -> Self {
        let mut v = VerdictDoc::new("error");
        v.detail = Some(e.to_string());
        Outcome::verdict(v, EXIT_INPUT)
    }
}

pub fn run(cmd: Command) -> Result<Outcome, CliError> {
    match cmd {
        Command::Trace(c) => trace(c),
        Command::Pcp(c) => pcp(c),
        Command::Bcp(c) => bcp(c),
        Command::Game(c) => game(c),
    }
}

fn read(path: &Path) -> Result<Document, CliError> {
    let shown = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: shown.clone(),
        source,
    })?;
    Document::parse(&text).map_err(|e| e.in_file(&shown))
}

/// Reads a document and converts it, attributing field errors to the file.
fn load<T>(path: &Path, convert: impl FnOnce(Document) -> Result<T, CliError>) -> Result<T, CliError> {
    let shown = path.display().to_string();
    convert(read(path)?).map_err(|e| e.in_file(&shown))
}

fn wrong_kind(expected: &str, got: &Document) -> CliError {
    field("kind", format!("expected `{expected}`, got `{}`", got.kind()))
}

fn load_pcp(path: &Path) -> Result<pcp::PcpInstance, CliError> {
    load(path, |d| match d {
        Document::Pcp(p) => p.to_instance(),
        other => Err(wrong_kind("pcp", &other)),
    })
}

fn load_constraint(path: &Path) -> Result<ColoringConstraint, CliError> {
    load(path, |d| match d {
        Document::BcpConstraint(k) => k.to_constraint(),
        other => Err(wrong_kind("bcp-constraint", &other)),
    })
}

fn trace(cmd: TraceCmd) -> Result<Outcome, CliError> {
    let (file, process) = match cmd {
        TraceCmd::Normalize { file } => (file, None),
        TraceCmd::View { file, process } => (file, Some(process)),
    };
    let t = load(&file, |d| match d {
        Document::Trace(t) => t.to_trace(),
        other => Err(wrong_kind("trace", &other)),
    })?;
    let out = match process {
        None => t,
        Some(name) => {
            let p = t
                .alphabet()
                .process(&name)
                .ok_or_else(|| field("--process", format!("unknown process `{name}`")))?;
            t.view(p).map_err(|e| CliError::Failed(e.to_string()))?
        }
    };
    Ok(Outcome::new(Document::Trace(TraceDoc::from_trace(&out)), EXIT_YES))
}

fn pcp(cmd: PcpCmd) -> Result<Outcome, CliError> {
    match cmd {
        PcpCmd::Check { file, seq } => {
            let inst = load_pcp(&file)?;
            let zero_based = seq
                .iter()
                .enumerate()
                .map(|(i, &t)| {
                    if t == 0 || t > inst.tile_count() {
                        Err(field(
                            format!("--seq[{i}]"),
                            format!("tile {t} out of range 1..={}", inst.tile_count()),
                        ))
                    } else {
                        Ok(t - 1)
                    }
                })
                .collect::<Result<Vec<_>, _>>()?;
            let ok = pcp::check_solution(&inst, &zero_based).map_err(|e| field("--seq", e))?;
            let mut v = VerdictDoc::new(if ok { "true" } else { "false" });
            v.witness = Some(Witness::Sequence(seq));
            if !ok {
                let top: String = inst.top_word(&zero_based).unwrap_or_default().into_iter().collect();
                let bottom: String = inst.bottom_word(&zero_based).unwrap_or_default().into_iter().collect();
                v.detail = Some(format!("top `{top}` differs from bottom `{bottom}`"));
            }
            Ok(Outcome::verdict(v, if ok { EXIT_YES } else { EXIT_NO }))
        }
        PcpCmd::Solve { file, max_len } => {
            let inst = load_pcp(&file)?;
            let found = pcp::brute_force(&inst, max_len);
            let mut v = VerdictDoc::new(if found.is_some() { "found" } else { "not-found" });
            v.depth = Some(max_len);
            let code = match found {
                Some(seq) => {
                    v.witness = Some(Witness::Sequence(seq.into_iter().map(|t| t + 1).collect()));
                    EXIT_YES
                }
                None => EXIT_NO,
            };
            Ok(Outcome::verdict(v, code))
        }
        PcpCmd::ToBcp { file } => {
            let inst = load_pcp(&file)?;
            let r = Reduction::new(&inst);
            let mut doc = ConstraintDoc::from_constraint(r.constraint());
            doc.pruning = Some(PruningDoc {
                raw_colors: r.raw_color_count(),
                kept_colors: r.color_count(),
            });
            Ok(Outcome::new(Document::BcpConstraint(doc), EXIT_YES))
        }
    }
}

fn bcp(cmd: BcpCmd) -> Result<Outcome, CliError> {
    match cmd {
        BcpCmd::Check { constraint, coloring } => {
            let k = load_constraint(&constraint)?;
            let f = load(&coloring, |d| match d {
                Document::Coloring(c) => c.to_coloring(&k),
                other => Err(wrong_kind("coloring", &other)),
            })?;
            let violation = coloring::check(&f, &k).map_err(|e| field("cells", e))?;
            let mut v = VerdictDoc::new(if violation.is_none() { "true" } else { "false" });
            v.detail = violation.as_ref().map(|x| x.describe(&k));
            Ok(Outcome::verdict(v, if violation.is_none() { EXIT_YES } else { EXIT_NO }))
        }
        BcpCmd::Solve { constraint, max_n, max_m } => {
            if max_n == 0 {
                return Err(field("--max-n", "must be positive"));
            }
            if max_m == 0 {
                return Err(field("--max-m", "must be positive"));
            }
            let k = load_constraint(&constraint)?;
            match coloring::solve(&k, max_n, max_m) {
                Some(f) => Ok(Outcome::new(Document::Coloring(ColoringDoc::from_coloring(&f, &k)), EXIT_YES)),
                None => {
                    let mut v = VerdictDoc::new("not-found");
                    v.detail = Some(format!("no satisfying coloring up to {max_n}x{max_m}"));
                    Ok(Outcome::verdict(v, EXIT_NO))
                }
            }
        }
        BcpCmd::ToGame { constraint } => {
            let k = load_constraint(&constraint)?;
            // Fails early on color names that cannot appear in letter names.
            reduction_game::build_game(&k).map_err(|e| field("colors", e))?;
            let doc = GameDoc {
                builtin: Some(COLORING_GAME.to_string()),
                params: Some(GameParams {
                    constraint: ConstraintDoc::from_constraint(&k),
                }),
                automaton: None,
                environment: None,
            };
            Ok(Outcome::new(Document::Game(doc), EXIT_YES))
        }
    }
}

const COLORING_GAME: &str = "coloring-game";
const COLORING_STRATEGY: &str = "coloring-strategy";

enum LoadedGame {
    Table(DistributedGame<TableAutomaton>),
    Coloring(ColoringGame),
}

fn load_game(path: &Path) -> Result<LoadedGame, CliError> {
    load(path, |d| {
        let g = match d {
            Document::Game(g) => g,
            other => return Err(wrong_kind("game", &other)),
        };
        match (&g.builtin, &g.params, &g.automaton, &g.environment) {
            (Some(name), Some(params), None, None) if name == COLORING_GAME => {
                let k = params.constraint.to_constraint().map_err(|e| prefix_field(e, "params.constraint"))?;
                let game = reduction_game::build_game(&k).map_err(|e| field("params.constraint.colors", e))?;
                Ok(LoadedGame::Coloring(game))
            }
            (Some(name), _, None, None) if name == COLORING_GAME => Err(field("params", "missing")),
            (Some(name), _, None, None) => Err(field("builtin", format!("unknown game `{name}`"))),
            (None, None, Some(aut), Some(env)) => {
                let aut = aut.to_automaton().map_err(|e| prefix_field(e, "automaton"))?;
                let mut letters = LetterSet::new();
                for (i, name) in env.iter().enumerate() {
                    let a = aut
                        .alphabet()
                        .letter(name)
                        .ok_or_else(|| field(format!("environment[{i}]"), format!("unknown letter `{name}`")))?;
                    letters.insert(a);
                }
                let game = DistributedGame::new(aut, letters).map_err(|e| field("environment", e))?;
                Ok(LoadedGame::Table(game))
            }
            (None, None, Some(_), None) => Err(field("environment", "missing")),
            (None, None, None, _) => Err(field("builtin", "a game needs `builtin` or `automaton`")),
            _ => Err(field("builtin", "`builtin`/`params` and `automaton`/`environment` are exclusive")),
        }
    })
}

fn read_strategy(path: &Path) -> Result<StrategyDoc, CliError> {
    let shown = path.display().to_string();
    match read(path)? {
        Document::Strategy(s) => Ok(s),
        other => Err(wrong_kind("strategy", &other).in_file(&shown)),
    }
}

/// Strategies that make sense for any game.
fn generic_strategy<A: AsyncAutomaton>(
    game: &DistributedGame<A>,
    doc: &StrategyDoc,
) -> Result<Box<dyn Strategy>, CliError> {
    match (&doc.builtin, &doc.params, &doc.table) {
        (Some(name), None, None) if name == "block-all" => Ok(Box::new(BlockAll)),
        (Some(name), None, None) if name == "allow-all" => Ok(Box::new(AllowAll::for_game(game))),
        (Some(name), _, None) if name == COLORING_STRATEGY => {
            Err(field("builtin", "`coloring-strategy` needs a `coloring-game`"))
        }
        (Some(name), Some(_), None) if name == "block-all" || name == "allow-all" => {
            Err(field("params", format!("`{name}` takes no parameters")))
        }
        (Some(name), _, None) => Err(field("builtin", format!("unknown strategy `{name}`"))),
        (None, None, Some(table)) => {
            let al = game.automaton().alphabet();
            let mut s = TableStrategy::new();
            for (process, entries) in table {
                let p = al
                    .process(process)
                    .ok_or_else(|| field(format!("table.{process}"), "unknown process"))?;
                for (i, e) in entries.iter().enumerate() {
                    let at = format!("table.{process}[{i}]");
                    let word = parse_word(al, &e.view, &format!("{at}.view"))?;
                    let view = normalize(al, &word).map_err(|err| field(format!("{at}.view"), err))?;
                    if view.view(p).map_err(|err| field(format!("{at}.view"), err))? != view {
                        return Err(field(format!("{at}.view"), format!("not a view of process `{process}`")));
                    }
                    let mut allowed = LetterSet::new();
                    for (j, name) in e.allowed.iter().enumerate() {
                        let a = al
                            .letter(name)
                            .ok_or_else(|| field(format!("{at}.allowed[{j}]"), format!("unknown letter `{name}`")))?;
                        allowed.insert(a);
                    }
                    s.insert(p, &view, allowed);
                }
            }
            Ok(Box::new(s))
        }
        (None, _, None) => Err(field("builtin", "a strategy needs `builtin` or `table`")),
        _ => Err(field("table", "`builtin` and `table` are exclusive")),
    }
}

fn coloring_strategy(game: &ColoringGame, doc: &StrategyDoc) -> Result<Box<dyn Strategy>, CliError> {
    match (&doc.builtin, &doc.params, &doc.table) {
        (Some(name), Some(params), None) if name == COLORING_STRATEGY => {
            let k = game.automaton().constraint();
            let f = params.coloring.to_coloring(k).map_err(|e| prefix_field(e, "params.coloring"))?;
            // Deliberately unchecked: a violating coloring must be reported as losing.
            let s = ColoringStrategy::unchecked(game, f).map_err(|e| field("params.coloring", e))?;
            Ok(Box::new(s))
        }
        (Some(name), None, None) if name == COLORING_STRATEGY => Err(field("params", "missing")),
        _ => generic_strategy(game, doc),
    }
}

fn game(cmd: GameCmd) -> Result<Outcome, CliError> {
    match cmd {
        GameCmd::Verify { game, strategy, max_depth } => {
            let g = load_game(&game)?;
            let doc = read_strategy(&strategy)?;
            let shown = strategy.display().to_string();
            match &g {
                LoadedGame::Table(g) => verify(g, &*generic_strategy(g, &doc).map_err(|e| e.in_file(&shown))?, max_depth),
                LoadedGame::Coloring(g) => verify(g, &*coloring_strategy(g, &doc).map_err(|e| e.in_file(&shown))?, max_depth),
            }
        }
        GameCmd::ExtractColoring { game, strategy, max_depth } => {
            let LoadedGame::Coloring(g) = load_game(&game)? else {
                return Err(field("builtin", format!("extraction needs a `{COLORING_GAME}`")).in_file(&game.display().to_string()));
            };
            let doc = read_strategy(&strategy)?;
            let s = coloring_strategy(&g, &doc).map_err(|e| e.in_file(&strategy.display().to_string()))?;
            let outcome = verify(&g, &*s, max_depth)?;
            if outcome.code != EXIT_YES {
                return Ok(outcome);
            }
            let k = g.automaton().constraint();
            match reduction_game::coloring_from_strategy(&g, &*s, max_depth).map_err(|e| CliError::Failed(e.to_string()))? {
                Some(f) => Ok(Outcome::new(Document::Coloring(ColoringDoc::from_coloring(&f, k)), EXIT_YES)),
                None => Err(CliError::Failed("strategy stopped verifying as winning".into())),
            }
        }
        GameCmd::Simulate {
            game,
            strategy,
            interactive,
            script,
        } => {
            if interactive != "no" {
                return Err(field("--interactive", "only `no` is supported"));
            }
            let g = load_game(&game)?;
            let doc = read_strategy(&strategy)?;
            let shown = strategy.display().to_string();
            match &g {
                LoadedGame::Table(g) => simulate(g, &*generic_strategy(g, &doc).map_err(|e| e.in_file(&shown))?, &script),
                LoadedGame::Coloring(g) => simulate(g, &*coloring_strategy(g, &doc).map_err(|e| e.in_file(&shown))?, &script),
            }
        }
    }
}

fn verify<A: AsyncAutomaton>(game: &DistributedGame<A>, s: &dyn Strategy, depth: usize) -> Result<Outcome, CliError> {
    let verdict = games::verify_winning(game, s, depth).map_err(|e| CliError::Failed(e.to_string()))?;
    let mut v = VerdictDoc::new("");
    v.depth = Some(depth);
    let code = match verdict {
        Verdict::Winning { plays, .. } => {
            v.result = "winning".into();
            v.plays = Some(plays);
            EXIT_YES
        }
        Verdict::Losing { witness, reason, detail } => {
            v.result = "losing".into();
            v.witness = Some(Witness::Play(witness.to_string()));
            v.reason = Some(reason.as_str().to_string());
            v.detail = detail;
            EXIT_NO
        }
        Verdict::Unknown { .. } => {
            v.result = "unknown".into();
            EXIT_UNKNOWN
        }
    };
    Ok(Outcome::verdict(v, code))
}

fn simulate<A: AsyncAutomaton>(game: &DistributedGame<A>, s: &dyn Strategy, script: &str) -> Result<Outcome, CliError> {
    let al = game.automaton().alphabet();
    let word = parse_word(al, &script.replace(',', " "), "--script")?;
    let r = games::replay(game, s, &word).map_err(|e| CliError::Failed(e.to_string()))?;
    let mut v = VerdictDoc::new(if r.rejected_at.is_none() { "accepted" } else { "rejected" });
    v.witness = Some(Witness::Play(r.play.to_string()));
    v.detail = Some(match r.rejected_at {
        Some(i) => format!("letter {} (`{}`) is not enabled and allowed", i + 1, al.letter_name(word[i])),
        None => describe_end(game, s, &r.play, &r.state)?,
    });
    Ok(Outcome::verdict(v, if r.rejected_at.is_none() { EXIT_YES } else { EXIT_NO }))
}

fn describe_end<A: AsyncAutomaton>(
    game: &DistributedGame<A>,
    s: &dyn Strategy,
    play: &Trace,
    state: &causal_games::automata::GlobalState<A::State>,
) -> Result<String, CliError> {
    let aut = game.automaton();
    let next = games::allowed(game, s, play).map_err(|e| CliError::Failed(e.to_string()))?;
    if !next.is_empty() {
        let names: Vec<&str> = next.iter().map(|a| aut.alphabet().letter_name(a)).collect();
        return Ok(format!("continues with {}", names.join(" ")));
    }
    Ok(match (is_final_state(aut, state), aut.loss_label(state)) {
        (true, _) => "maximal and final".to_string(),
        (false, Some(label)) => format!("maximal, {label}"),
        (false, None) => "maximal and not final".to_string(),
    })
}
