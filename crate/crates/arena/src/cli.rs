//! The `arena` command line: validate and enumerate over interchange files,
//! compose strategies, check verdicts (strategy laws, winning, relational
//! lifting), compile terms, build quantifier games, and play a strategy
//! interactively.
//!
//! Exit codes: 0 for success or a verdict that holds, 1 for a verdict that
//! fails (the witness is printed), 2 for usage and file-format errors. All
//! reports are line-oriented and deterministic; `--json` switches to a
//! machine-readable report.

use std::collections::BTreeSet;
use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;
use thiserror::Error;

use crate::category::{compose_hiding, compose_pointwise, CategoryError, Morphism};
use crate::format::{
    read_game, read_refined, read_relation, read_strategy, write_strategy, FormatError,
    LoadedStrategy,
};
use crate::game::{fmt_play, Game, GameError, MoveId, Play, Shape};
use crate::lang::{closed_vartype, denote, parse_term, parse_type, LangError, TypeExpr};
use crate::param::{lift_check, RelationError};
use crate::poly::{build_pi, winning_census, InstanceFamily, PiGame, PolyError};
use crate::strategy::{enumerate_strategies, EnumOpts, Strategy, StrategyError};
use crate::winning::{is_total, is_winning, Totality, WinningError, WinningVerdict};

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(transparent)]
    Strategy(#[from] StrategyError),
    #[error(transparent)]
    Category(#[from] CategoryError),
    #[error(transparent)]
    Winning(#[from] WinningError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Lang(#[from] LangError),
    #[error(transparent)]
    Relation(#[from] RelationError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Parser)]
#[command(name = "arena", version, about = "game semantics workbench", disable_help_flag = false)]
struct Cli {
    /// Emit machine-readable JSON instead of the line report.
    #[arg(long, global = true)]
    json: bool,
    /// Accepted for compatibility; every sweep here is already
    /// deterministic, so the seed changes nothing.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FileKind {
    Game,
    Strategy,
    Refined,
    Relation,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Algo {
    Hiding,
    Pointwise,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Check that a file is well-formed.
    Validate {
        file: PathBuf,
        /// What the file is supposed to contain.
        #[arg(long, value_enum, default_value = "game")]
        kind: FileKind,
    },
    /// Enumerate every strategy on a game.
    Enumerate {
        file: PathBuf,
        /// Only history-free strategies.
        #[arg(long)]
        hf: bool,
        /// Give up beyond this many strategies.
        #[arg(long, default_value_t = 1_000_000)]
        max: usize,
    },
    /// Compose two strategies as morphisms. A file without a declared
    /// domain/codomain split is taken as a point of its game.
    Compose {
        first: PathBuf,
        second: PathBuf,
        #[arg(long, value_enum, default_value = "hiding")]
        algo: Algo,
        /// Exit 0 even when a divergence marker appears.
        #[arg(long)]
        allow_divergence: bool,
        /// Write the composite to this strategy file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verdicts: `--strategy` validates a strategy file, `--winning`
    /// checks a strategy against a refined game, `--relation` checks two
    /// strategies are related under the lifted relation.
    Check {
        /// Strategy file to test for the winning verdict; takes the
        /// refined game as the positional argument.
        #[arg(long)]
        winning: Option<PathBuf>,
        /// The refined game for --winning.
        target: Option<PathBuf>,
        /// Lasso search budget for --winning.
        #[arg(long, default_value_t = 16)]
        lasso_budget: usize,
        /// Relation file; needs --sigma and --tau.
        #[arg(long)]
        relation: Option<PathBuf>,
        #[arg(long)]
        sigma: Option<PathBuf>,
        #[arg(long)]
        tau: Option<PathBuf>,
        /// Validate this strategy file in isolation.
        #[arg(long)]
        strategy: Option<PathBuf>,
    },
    /// Compile a term to the strategy it denotes.
    Denote {
        term: String,
        /// Expected type; the verdict fails if the inferred type differs.
        #[arg(long = "type")]
        ty: Option<String>,
        /// Write the denotation to this strategy file.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Universe tokens for the quantifier's instance family.
        #[arg(long, default_value = "a,b")]
        tokens: String,
        /// Depth of the instance family's universe.
        #[arg(long, default_value_t = 3)]
        family_depth: usize,
        /// Depth the quantifier game is materialised to.
        #[arg(long, default_value_t = 6)]
        depth: usize,
    },
    /// Build a quantifier game from `forall X. <body>` and census its
    /// strategies.
    Pi {
        #[arg(long = "type")]
        ty: String,
        /// Universe tokens for the instance family.
        #[arg(long, default_value = "a,b")]
        tokens: String,
        /// Depth of the instance family's universe.
        #[arg(long, default_value_t = 3)]
        family_depth: usize,
        /// Depth the quantifier game is materialised to.
        #[arg(long, default_value_t = 6)]
        depth: usize,
        /// Only history-free strategies.
        #[arg(long)]
        hf: bool,
        /// Only winning strategies.
        #[arg(long)]
        winning: bool,
        /// Give up beyond this many strategies.
        #[arg(long, default_value_t = 1_000_000)]
        max: usize,
    },
    /// Play interactively against a strategy: you are the environment.
    /// `:legal` lists the moves, `:undo` takes back an exchange, `:quit`
    /// ends the session.
    Play { file: PathBuf },
}

/// Run the command line against explicit streams; returns the exit code.
pub fn run_with_io(argv: &[String], stdin: &mut dyn BufRead, out: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version are requests, not mistakes.
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = write!(out, "{e}");
            return code;
        }
    };
    match dispatch(&cli, stdin, out) {
        Ok(code) => code,
        Err(err) => {
            let _ = writeln!(out, "error: {err}");
            2
        }
    }
}

fn dispatch(cli: &Cli, stdin: &mut dyn BufRead, out: &mut dyn Write) -> Result<i32, CliError> {
    match &cli.command {
        Command::Validate { file, kind } => cmd_validate(file, *kind, cli.json, out),
        Command::Enumerate { file, hf, max } => cmd_enumerate(file, *hf, *max, cli.json, out),
        Command::Compose { first, second, algo, allow_divergence, out: out_path } => {
            cmd_compose(first, second, *algo, *allow_divergence, out_path.as_deref(), cli.json, out)
        }
        Command::Check {
            winning,
            target,
            lasso_budget,
            relation,
            sigma,
            tau,
            strategy,
        } => cmd_check(
            winning.as_deref(),
            target.as_deref(),
            *lasso_budget,
            relation.as_deref(),
            sigma.as_deref(),
            tau.as_deref(),
            strategy.as_deref(),
            cli.json,
            out,
        ),
        Command::Denote { term, ty, out: out_path, tokens, family_depth, depth } => cmd_denote(
            term,
            ty.as_deref(),
            out_path.as_deref(),
            tokens,
            *family_depth,
            *depth,
            cli.json,
            out,
        ),
        Command::Pi { ty, tokens, family_depth, depth, hf, winning, max } => {
            cmd_pi(ty, tokens, *family_depth, *depth, *hf, *winning, *max, cli.json, out)
        }
        Command::Play { file } => cmd_play(file, stdin, out),
    }
}

// ---------------------------------------------------------------------------
// Helpers shared by the report formats.
// ---------------------------------------------------------------------------

fn maximal_even_plays(strat: &Strategy) -> Vec<Play> {
    let evens: BTreeSet<Play> = strat.even_plays().into_iter().collect();
    let mut out: Vec<Play> = evens
        .iter()
        .filter(|p| !evens.iter().any(|q| q.len() > p.len() && q.starts_with(p)))
        .cloned()
        .collect();
    out.sort();
    out
}

fn strategy_summary(strat: &Strategy) -> String {
    let maximal = maximal_even_plays(strat);
    maximal.iter().map(|p| fmt_play(p)).collect::<Vec<_>>().join("  ")
}

fn plays_as_json(strat: &Strategy) -> serde_json::Value {
    let maximal = maximal_even_plays(strat);
    json!(maximal
        .iter()
        .map(|p| p.iter().map(|m| m.to_string()).collect::<Vec<_>>())
        .collect::<Vec<_>>())
}

/// Present a morphism at its most readable: one out of the unit game is
/// shown as the point of its codomain.
fn presentable(mor: &Morphism) -> Result<Strategy, CliError> {
    if mor.dom() == &Game::unit() {
        Ok(mor.to_point()?)
    } else {
        Ok(mor.strategy().clone())
    }
}

fn as_morphism(loaded: &LoadedStrategy) -> Result<Morphism, CliError> {
    match &loaded.split {
        Some((dom, cod)) => Ok(Morphism::new(dom, cod, loaded.strategy.clone())?),
        None => Ok(Morphism::point(&loaded.strategy)),
    }
}

fn parse_quantified(src: &str) -> Result<(String, TypeExpr), CliError> {
    match parse_type(src)? {
        TypeExpr::Forall(x, body) => Ok((x, *body)),
        other => Err(CliError::Usage(format!(
            "the pi command needs a quantified type, got {other}"
        ))),
    }
}

fn family_from_flags(tokens: &str, family_depth: usize) -> Result<InstanceFamily, CliError> {
    let toks: Vec<&str> = tokens.split(',').map(str::trim).filter(|t| !t.is_empty()).collect();
    if toks.is_empty() {
        return Err(CliError::Usage("at least one universe token is required".to_string()));
    }
    Ok(InstanceFamily::flat_all(&toks, family_depth)?)
}

fn build_pi_from_type(
    ty: &str,
    tokens: &str,
    family_depth: usize,
    depth: usize,
) -> Result<PiGame, CliError> {
    let (var, body) = parse_quantified(ty)?;
    let vt = closed_vartype(&body, &var)?;
    let family = family_from_flags(tokens, family_depth)?;
    Ok(build_pi(&vt, &family, depth)?)
}

// ---------------------------------------------------------------------------
// Subcommands.
// ---------------------------------------------------------------------------

fn cmd_validate(
    file: &Path,
    kind: FileKind,
    json: bool,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let report = match kind {
        FileKind::Game => {
            let game = read_game(file)?;
            json!({
                "ok": true, "kind": "game",
                "moves": game.move_count(),
                "plays": game.plays().len(),
                "depth": game.depth_bound(),
            })
        }
        FileKind::Strategy => {
            let loaded = read_strategy(file)?;
            json!({
                "ok": true, "kind": "strategy",
                "plays": loaded.strategy.even_plays().len(),
                "history_free": loaded.strategy.to_table().is_some(),
                "morphism": loaded.split.is_some(),
            })
        }
        FileKind::Refined => {
            let refined = read_refined(file)?;
            json!({
                "ok": true, "kind": "refined",
                "moves": refined.game.move_count(),
            })
        }
        FileKind::Relation => {
            let rel = read_relation(file)?;
            json!({
                "ok": true, "kind": "relation",
                "pairs": rel.pair_count(),
            })
        }
    };
    if json {
        writeln!(out, "{}", serde_json::to_string_pretty(&report).expect("report serializes"))?;
    } else {
        let kind = report["kind"].as_str().expect("kind is set");
        let detail: Vec<String> = report
            .as_object()
            .expect("report is an object")
            .iter()
            .filter(|(k, _)| *k != "ok" && *k != "kind")
            .map(|(k, v)| format!("{k} {v}"))
            .collect();
        writeln!(out, "ok: {kind} ({})", detail.join(", "))?;
    }
    Ok(0)
}

fn cmd_enumerate(
    file: &Path,
    hf: bool,
    max: usize,
    json: bool,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let game = read_game(file)?;
    let opts = EnumOpts { history_free_only: hf, max };
    let strategies = enumerate_strategies(&game, &opts)?;
    if json {
        let report = json!({
            "count": strategies.len(),
            "history_free_only": hf,
            "strategies": strategies.iter().map(plays_as_json).collect::<Vec<_>>(),
        });
        writeln!(out, "{}", serde_json::to_string_pretty(&report).expect("report serializes"))?;
    } else {
        writeln!(out, "{} strategies", strategies.len())?;
        for (i, s) in strategies.iter().enumerate() {
            writeln!(out, "s{i}: {}", strategy_summary(s))?;
        }
    }
    Ok(0)
}

fn cmd_compose(
    first: &Path,
    second: &Path,
    algo: Algo,
    allow_divergence: bool,
    out_path: Option<&Path>,
    json: bool,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let f = as_morphism(&read_strategy(first)?)?;
    let g = as_morphism(&read_strategy(second)?)?;

    let composed = match algo {
        Algo::Hiding => compose_hiding(&f, &g)?,
        Algo::Pointwise => compose_pointwise(&f, &g)?,
        Algo::Both => compose_hiding(&f, &g)?,
    };
    let mut divergence: Vec<String> = Vec::new();
    let mut agreement: Option<bool> = None;
    if algo == Algo::Both {
        let other = compose_pointwise(&f, &g)?;
        let agree = composed.strategy().play_set() == other.strategy().play_set();
        agreement = Some(agree);
        if !agree {
            divergence.push("the two composition algorithms disagree".to_string());
        }
    }
    // Losing totality across a composition is the visible trace of an
    // infinite conversation in the hidden game.
    if matches!(is_total(f.strategy()), Totality::Total)
        && matches!(is_total(g.strategy()), Totality::Total)
        && !matches!(is_total(composed.strategy()), Totality::Total)
    {
        divergence.push("totality lost: the hidden interface can chatter forever".to_string());
    }

    let shown = presentable(&composed)?;
    if let Some(path) = out_path {
        write_strategy(
            composed.strategy(),
            Some((composed.dom(), composed.cod())),
            path,
        )?;
    }

    if json {
        let report = json!({
            "algo": match algo { Algo::Hiding => "hiding", Algo::Pointwise => "pointwise", Algo::Both => "both" },
            "agreement": agreement,
            "divergence": divergence,
            "plays": plays_as_json(&shown),
        });
        writeln!(out, "{}", serde_json::to_string_pretty(&report).expect("report serializes"))?;
    } else {
        writeln!(out, "composite: {}", strategy_summary(&shown))?;
        if let Some(agree) = agreement {
            writeln!(out, "agreement: {}", if agree { "yes" } else { "no" })?;
        }
        for d in &divergence {
            writeln!(out, "divergence: {d}")?;
        }
    }
    if !divergence.is_empty() && !allow_divergence {
        return Ok(1);
    }
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn cmd_check(
    winning: Option<&Path>,
    target: Option<&Path>,
    lasso_budget: usize,
    relation: Option<&Path>,
    sigma: Option<&Path>,
    tau: Option<&Path>,
    strategy: Option<&Path>,
    json: bool,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let modes =
        [winning.is_some(), relation.is_some(), strategy.is_some()].iter().filter(|b| **b).count();
    if modes != 1 {
        return Err(CliError::Usage(
            "check needs exactly one of --winning, --relation, --strategy".to_string(),
        ));
    }

    if let Some(sigma_path) = winning {
        let refined_path = target.ok_or_else(|| {
            CliError::Usage("--winning needs the refined game as its positional file".to_string())
        })?;
        let loaded = read_strategy(sigma_path)?;
        let refined = read_refined(refined_path)?;
        let verdict = is_winning(&loaded.strategy, &refined, lasso_budget)?;
        let ok = matches!(verdict, WinningVerdict::Winning { .. });
        if json {
            let report = json!({ "ok": ok, "verdict": verdict.to_string() });
            writeln!(out, "{}", serde_json::to_string_pretty(&report).expect("report serializes"))?;
        } else {
            writeln!(out, "{verdict}")?;
        }
        return Ok(if ok { 0 } else { 1 });
    }

    if let Some(rel_path) = relation {
        let (sigma_path, tau_path) = match (sigma, tau) {
            (Some(s), Some(t)) => (s, t),
            _ => {
                return Err(CliError::Usage(
                    "--relation needs both --sigma and --tau".to_string(),
                ))
            }
        };
        let rel = read_relation(rel_path)?;
        let s = read_strategy(sigma_path)?;
        let t = read_strategy(tau_path)?;
        let verdict = lift_check(&rel, &s.strategy, &t.strategy)?;
        let ok = verdict.holds();
        if json {
            let report = json!({
                "ok": ok,
                "witness": verdict.witness().map(|w| w.describe()),
            });
            writeln!(out, "{}", serde_json::to_string_pretty(&report).expect("report serializes"))?;
        } else if let Some(w) = verdict.witness() {
            writeln!(out, "relation fails: {}", w.describe())?;
        } else {
            writeln!(out, "relation holds")?;
        }
        return Ok(if ok { 0 } else { 1 });
    }

    let strat_path = strategy.expect("mode counting admitted only --strategy");
    match read_strategy(strat_path) {
        Ok(loaded) => {
            if json {
                let report = json!({
                    "ok": true,
                    "plays": loaded.strategy.even_plays().len(),
                    "history_free": loaded.strategy.to_table().is_some(),
                });
                writeln!(out, "{}", serde_json::to_string_pretty(&report).expect("report serializes"))?;
            } else {
                writeln!(out, "ok: strategy with {} plays", loaded.strategy.even_plays().len())?;
            }
            Ok(0)
        }
        // A file that parses but fails the strategy laws is a verdict
        // failure, not a usage error.
        Err(FormatError::Strategy(e)) => {
            if json {
                let report = json!({ "ok": false, "violation": e.to_string() });
                writeln!(out, "{}", serde_json::to_string_pretty(&report).expect("report serializes"))?;
            } else {
                writeln!(out, "violation: {e}")?;
            }
            Ok(1)
        }
        Err(other) => Err(other.into()),
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_denote(
    term_src: &str,
    ty: Option<&str>,
    out_path: Option<&Path>,
    tokens: &str,
    family_depth: usize,
    depth: usize,
    json: bool,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let term = parse_term(term_src)?;
    let family = family_from_flags(tokens, family_depth)?;
    let (inferred, strat) = denote(&term, &family, depth)?;

    let mut type_ok = true;
    if let Some(expected_src) = ty {
        let expected = parse_type(expected_src)?;
        type_ok = expected == inferred;
    }

    if let Some(path) = out_path {
        let split = match strat.game().shape() {
            Shape::Lolli(dom, cod) => Some((dom.clone(), cod.clone())),
            _ => None,
        };
        write_strategy(&strat, split.as_ref().map(|(d, c)| (d, c)), path)?;
    }

    if json {
        let report = json!({
            "type": inferred.to_string(),
            "type_ok": type_ok,
            "plays": plays_as_json(&strat),
        });
        writeln!(out, "{}", serde_json::to_string_pretty(&report).expect("report serializes"))?;
    } else {
        writeln!(out, "type: {inferred}")?;
        if !type_ok {
            writeln!(out, "type mismatch: expected {}", ty.expect("mismatch implies a --type"))?;
        }
        writeln!(out, "strategy: {}", strategy_summary(&strat))?;
    }
    Ok(if type_ok { 0 } else { 1 })
}

#[allow(clippy::too_many_arguments)]
fn cmd_pi(
    ty: &str,
    tokens: &str,
    family_depth: usize,
    depth: usize,
    hf: bool,
    winning: bool,
    max: usize,
    json: bool,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let pi = build_pi_from_type(ty, tokens, family_depth, depth)?;
    let census = if winning {
        winning_census(&pi, hf, max)?
    } else {
        enumerate_strategies(pi.game(), &EnumOpts { history_free_only: hf, max })?
    };
    if json {
        let report = json!({
            "moves": pi.game().move_count(),
            "depth": pi.game().depth_bound(),
            "history_free_only": hf,
            "winning_only": winning,
            "count": census.len(),
            "strategies": census.iter().map(plays_as_json).collect::<Vec<_>>(),
        });
        writeln!(out, "{}", serde_json::to_string_pretty(&report).expect("report serializes"))?;
    } else {
        writeln!(
            out,
            "pi game: {} moves, depth {}",
            pi.game().move_count(),
            pi.game().depth_bound()
        )?;
        writeln!(out, "{} strategies", census.len())?;
        for (i, s) in census.iter().enumerate() {
            writeln!(out, "s{i}: {}", strategy_summary(s))?;
        }
    }
    Ok(0)
}

fn cmd_play(file: &Path, stdin: &mut dyn BufRead, out: &mut dyn Write) -> Result<i32, CliError> {
    let loaded = read_strategy(file)?;
    let strat = loaded.strategy;
    let game = strat.game().clone();
    let mut position: Play = Vec::new();

    writeln!(out, "you are the environment; moves are written like R/tt")?;
    loop {
        let legal: Vec<MoveId> = match game.plays().node_of(&position) {
            Some(node) => game.plays().children(node).map(|(m, _)| m.clone()).collect(),
            None => Vec::new(),
        };
        if legal.is_empty() {
            writeln!(out, "no legal moves - game over")?;
            break;
        }
        writeln!(out, "position: {}", fmt_play(&position))?;
        writeln!(
            out,
            "legal: {}",
            legal.iter().map(|m| m.to_string()).collect::<Vec<_>>().join(" ")
        )?;
        write!(out, "> ")?;
        out.flush()?;

        let mut line = String::new();
        if stdin.read_line(&mut line)? == 0 {
            writeln!(out)?;
            break;
        }
        let input = line.trim();
        match input {
            "" => continue,
            ":quit" => break,
            ":legal" => continue,
            ":undo" => {
                if position.len() >= 2 {
                    position.truncate(position.len() - 2);
                    writeln!(out, "took back one exchange")?;
                } else {
                    writeln!(out, "nothing to undo")?;
                }
                continue;
            }
            _ => {}
        }
        let mv = match MoveId::parse(input) {
            Ok(m) => m,
            Err(_) => {
                writeln!(out, "illegal move {input:?}, try again")?;
                continue;
            }
        };
        if !legal.contains(&mv) {
            writeln!(out, "illegal move {input:?}, try again")?;
            continue;
        }
        let mut probe = position.clone();
        probe.push(mv.clone());
        match strat.respond(&probe)? {
            Some(answer) => {
                writeln!(out, "response: {answer}")?;
                position.push(mv);
                position.push(answer);
            }
            None => {
                writeln!(out, "no response - the strategy stops here")?;
                break;
            }
        }
    }

    writeln!(out, "transcript: {}", fmt_play(&position))?;
    debug_assert!(game.plays().contains(&position));
    Ok(0)
}
