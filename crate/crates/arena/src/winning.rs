//! Winning conditions: which side wins the plays that never end.
//!
//! A strategy is *total* when it answers every probe it can reach; it *wins*
//! a refined game when it is total and every infinite play it can be drawn
//! into lies in the designated winning set. Infinite plays are presented as
//! lassos — a finite stem followed by a repeating loop — which is exactly the
//! shape bounded model checking can decide.
//!
//! Verdicts are honest about materialisation: on games that continue past
//! their materialised depth, a clean sweep over all lassos within budget is
//! reported as winning-but-not-exhaustive, and a strategy whose behaviour
//! past the bound is unknowable (not history-free, still alive at the edge)
//! gets an inconclusive verdict rather than a guess.
//!
//! Composing two winning strategies preserves winning; the failure mode this
//! theorem rules out is *chattering*, an endless hidden dialogue in the
//! middle game. [`chattering_certificate`] finds chattering explicitly — as
//! a repeating cycle of middle moves — and [`winning_compose`] checks the
//! theorem's premises before certifying the composite.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::category::{
    compose_hiding, fmt_interaction, CategoryError, InteractionMove, Morphism, Zone,
};
use crate::game::{fmt_play, restrict_play, Game, MoveId, Play, Polarity, Shape, Tag, ROOT};
use crate::strategy::Strategy;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WinningError {
    #[error("a lasso needs a non-empty cycle")]
    EmptyCycle,
    #[error("unknown winning atom {0:?} (try \"visits:<move>\" or \"loop-contains:<move>\")")]
    UnknownAtom(String),
    #[error("the winning condition's shape does not match the game's")]
    ShapeMismatch,
    #[error("the strategy lives on a different game than the refinement")]
    WrongGame,
    #[error("the {side} strategy is not winning on its refinement: {verdict}")]
    PreconditionFailed { side: &'static str, verdict: String },
    #[error(transparent)]
    Category(#[from] CategoryError),
    #[error(transparent)]
    Game(#[from] crate::game::GameError),
}

/// An ultimately periodic infinite play: `stem` then `cycle` forever.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Lasso {
    pub stem: Play,
    pub cycle: Play,
}

impl Lasso {
    pub fn new(stem: Play, cycle: Play) -> Result<Lasso, WinningError> {
        if cycle.is_empty() {
            return Err(WinningError::EmptyCycle);
        }
        Ok(Lasso { stem, cycle })
    }

    pub fn describe(&self) -> String {
        format!("{} ({})^ω", fmt_play(&self.stem), fmt_play(&self.cycle))
    }
}

/// Does the game admit the infinite play `stem·cycle^ω`? Decided
/// structurally: a fully materialised game admits no infinite play; a
/// saturated game checks alternation over one unrolling (which pins the
/// cycle to even length); compounds check their own alternation and recurse
/// on the projected lassos.
pub fn admits_lasso(game: &Game, lasso: &Lasso) -> bool {
    !lasso.cycle.is_empty() && admits_ultimately(game, &lasso.stem, &lasso.cycle)
}

/// The generalisation where an empty cycle means the play is finite.
fn admits_ultimately(game: &Game, stem: &[MoveId], cycle: &[MoveId]) -> bool {
    if cycle.is_empty() {
        return game.admits(stem);
    }
    match game.shape() {
        Shape::Atomic => false,
        Shape::Saturated => word_alternates(game, &unroll(stem, cycle, 2)),
        Shape::Tensor(a, b) | Shape::Lolli(a, b) => {
            word_alternates(game, &unroll(stem, cycle, 2))
                && admits_ultimately(
                    a,
                    &restrict_play(stem, &[Tag::L]),
                    &restrict_play(cycle, &[Tag::L]),
                )
                && admits_ultimately(
                    b,
                    &restrict_play(stem, &[Tag::R]),
                    &restrict_play(cycle, &[Tag::R]),
                )
        }
        Shape::With(a, b) => {
            let all: Vec<&MoveId> = stem.iter().chain(cycle.iter()).collect();
            let left = all.iter().any(|m| m.path.first() == Some(&Tag::L));
            let right = all.iter().any(|m| m.path.first() == Some(&Tag::R));
            if left && right {
                return false;
            }
            word_alternates(game, &unroll(stem, cycle, 2))
                && admits_ultimately(
                    a,
                    &restrict_play(stem, &[Tag::L]),
                    &restrict_play(cycle, &[Tag::L]),
                )
                && admits_ultimately(
                    b,
                    &restrict_play(stem, &[Tag::R]),
                    &restrict_play(cycle, &[Tag::R]),
                )
        }
    }
}

fn unroll(stem: &[MoveId], cycle: &[MoveId], times: usize) -> Play {
    let mut w = stem.to_vec();
    for _ in 0..times {
        w.extend_from_slice(cycle);
    }
    w
}

fn word_alternates(game: &Game, word: &[MoveId]) -> bool {
    word.iter()
        .enumerate()
        .all(|(i, m)| game.polarity(m) == Some(Polarity::mover_at(i)))
}

/// Does the game admit any infinite play at all? A function space reaches
/// its left side only after the right side has opened.
pub fn has_infinite_plays(game: &Game) -> bool {
    match game.shape() {
        Shape::Atomic => false,
        Shape::Saturated => {
            let mut has_o = false;
            let mut has_p = false;
            for (_, p) in game.moves() {
                match p {
                    Polarity::O => has_o = true,
                    Polarity::P => has_p = true,
                }
            }
            has_o && has_p
        }
        Shape::Tensor(a, b) | Shape::With(a, b) => {
            has_infinite_plays(a) || has_infinite_plays(b)
        }
        Shape::Lolli(a, b) => {
            has_infinite_plays(b)
                || (has_infinite_plays(a) && !b.opening_moves().is_empty())
        }
    }
}

/// A winning set over a game's infinite plays, evaluated on lassos.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WinningSpec {
    /// Every infinite play wins.
    All,
    /// No infinite play wins.
    Never,
    /// A named predicate: `visits:<move>` (the move occurs at least once) or
    /// `loop-contains:<move>` (the move occurs infinitely often). Both are
    /// invariant under rotating and unrolling the lasso.
    Atom(String),
    /// Componentwise over a tensor game: each side must be finite or win.
    Tensor(Box<WinningSpec>, Box<WinningSpec>),
    /// Over a function space: if the left projection is finite or wins, the
    /// right projection must be infinite and win.
    Lolli(Box<WinningSpec>, Box<WinningSpec>),
    /// All of the listed conditions (an empty meet accepts everything).
    Meet(Vec<WinningSpec>),
    /// Applies only to infinite plays the given game admits; all others win
    /// by default.
    Guarded(Game, Box<WinningSpec>),
}

/// A game together with the winning set refining it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RefinedGame {
    pub game: Game,
    pub spec: WinningSpec,
}

/// Does the infinite play `lasso` lie in the winning set?
pub fn lasso_wins(spec: &WinningSpec, game: &Game, lasso: &Lasso) -> Result<bool, WinningError> {
    if lasso.cycle.is_empty() {
        return Err(WinningError::EmptyCycle);
    }
    eval_spec(spec, game, &lasso.stem, &lasso.cycle)
}

fn eval_spec(
    spec: &WinningSpec,
    game: &Game,
    stem: &[MoveId],
    cycle: &[MoveId],
) -> Result<bool, WinningError> {
    match spec {
        WinningSpec::All => Ok(true),
        WinningSpec::Never => Ok(false),
        WinningSpec::Atom(name) => eval_atom(name, stem, cycle),
        WinningSpec::Meet(specs) => {
            for s in specs {
                if !eval_spec(s, game, stem, cycle)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        WinningSpec::Guarded(guard, inner) => {
            if admits_ultimately(guard, stem, cycle) {
                eval_spec(inner, guard, stem, cycle)
            } else {
                Ok(true)
            }
        }
        WinningSpec::Tensor(wa, wb) => {
            let (a, b) = match game.shape() {
                Shape::Tensor(a, b) => (a.clone(), b.clone()),
                _ => return Err(WinningError::ShapeMismatch),
            };
            let ls = restrict_play(stem, &[Tag::L]);
            let lc = restrict_play(cycle, &[Tag::L]);
            if !lc.is_empty() && !eval_spec(wa, &a, &ls, &lc)? {
                return Ok(false);
            }
            let rs = restrict_play(stem, &[Tag::R]);
            let rc = restrict_play(cycle, &[Tag::R]);
            if !rc.is_empty() && !eval_spec(wb, &b, &rs, &rc)? {
                return Ok(false);
            }
            Ok(true)
        }
        WinningSpec::Lolli(wa, wb) => {
            let (a, b) = match game.shape() {
                Shape::Lolli(a, b) => (a.clone(), b.clone()),
                _ => return Err(WinningError::ShapeMismatch),
            };
            let ls = restrict_play(stem, &[Tag::L]);
            let lc = restrict_play(cycle, &[Tag::L]);
            // A finite left projection satisfies the hypothesis outright.
            let hypothesis = lc.is_empty() || eval_spec(wa, &a, &ls, &lc)?;
            if !hypothesis {
                return Ok(true);
            }
            let rc = restrict_play(cycle, &[Tag::R]);
            if rc.is_empty() {
                // Hypothesis met, but the conclusion needs an infinite
                // winning right projection.
                return Ok(false);
            }
            let rs = restrict_play(stem, &[Tag::R]);
            eval_spec(wb, &b, &rs, &rc)
        }
    }
}

fn eval_atom(name: &str, stem: &[MoveId], cycle: &[MoveId]) -> Result<bool, WinningError> {
    if let Some(r) = name.strip_prefix("visits:") {
        let m = MoveId::parse(r)?;
        return Ok(stem.contains(&m) || cycle.contains(&m));
    }
    if let Some(r) = name.strip_prefix("loop-contains:") {
        let m = MoveId::parse(r)?;
        return Ok(cycle.contains(&m));
    }
    Err(WinningError::UnknownAtom(name.to_string()))
}

// ---------------------------------------------------------------------------
// Totality.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Totality {
    Total,
    /// A reachable probe with no answer, though the materialised game offers
    /// continuations (or none ever will).
    NotTotal { context: Play },
    /// A reachable probe at the materialised edge: an answer would live past
    /// the depth bound, so no verdict is possible.
    Inconclusive { context: Play },
}

/// Does the strategy answer every probe it can reach? A history-free
/// strategy's table settles every edge case: a tabled answer the full game
/// admits counts as an answer even past the materialised depth, and a
/// missing or illegal tabled answer is refusal. Other strategies are only
/// inconclusive where materialisation cut a legal answer off.
pub fn is_total(strat: &Strategy) -> Totality {
    let game = strat.game();
    let table = strat.to_table();
    // Walk the strategy's even nodes alongside the game's nodes.
    let mut stack = vec![(ROOT, ROOT, Vec::<MoveId>::new())];
    let mut worst: Option<Totality> = None;
    while let Some((snode, gnode, play)) = stack.pop() {
        for (a, ga) in game.plays().children(gnode) {
            let mut context = play.clone();
            context.push(a.clone());
            match strat.play_set().child(snode, a) {
                Some(sa) => {
                    let (b, gb2) = {
                        let mut it = strat.play_set().children(sa);
                        let (b, _) = it.next().expect("waypoints carry their response");
                        let gb = game
                            .plays()
                            .child(ga, b)
                            .expect("strategy positions are game positions");
                        (b.clone(), gb)
                    };
                    let snext = strat.play_set().child(sa, &b).unwrap();
                    context.push(b);
                    stack.push((snext, gb2, context));
                }
                None => {
                    if let Some(t) = &table {
                        let answered = t.get(a).is_some_and(|b| {
                            let mut ext = context.clone();
                            ext.push(b.clone());
                            game.admits(&ext)
                        });
                        if !answered {
                            return Totality::NotTotal { context };
                        }
                        // Answered past the bound; nothing more to walk here.
                    } else {
                        // Was some legal answer cut off by the depth bound?
                        let materialised: BTreeSet<&MoveId> =
                            game.plays().children(ga).map(|(m, _)| m).collect();
                        let cut_off = game.moves().any(|(m, _)| {
                            if materialised.contains(m) {
                                return false;
                            }
                            let mut ext = context.clone();
                            ext.push(m.clone());
                            game.admits(&ext)
                        });
                        if cut_off {
                            if worst.is_none() {
                                worst = Some(Totality::Inconclusive { context });
                            }
                        } else {
                            return Totality::NotTotal { context };
                        }
                    }
                }
            }
        }
    }
    worst.unwrap_or(Totality::Total)
}

// ---------------------------------------------------------------------------
// Winning verdicts.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WinningVerdict {
    /// Total, and no losing infinite play was found. `exhaustive` says
    /// whether that sweep provably covered every infinite play (finite
    /// games, or strategies that demonstrably stop) or only every lasso
    /// within the search budget.
    Winning { exhaustive: bool },
    NotTotal { context: Play },
    /// A concrete losing infinite play.
    NotWinning { lasso: Lasso },
    Inconclusive { reason: String },
}

impl std::fmt::Display for WinningVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            WinningVerdict::Winning { exhaustive: true } => write!(f, "winning"),
            WinningVerdict::Winning { exhaustive: false } => {
                write!(f, "winning (every lasso within budget)")
            }
            WinningVerdict::NotTotal { context } => {
                write!(f, "not total: no answer after {}", fmt_play(context))
            }
            WinningVerdict::NotWinning { lasso } => {
                write!(f, "not winning: loses {}", lasso.describe())
            }
            WinningVerdict::Inconclusive { reason } => write!(f, "inconclusive: {reason}"),
        }
    }
}

/// The infinite plays the strategy can be drawn into, as lassos, up to a
/// word-length budget.
pub struct LassoSearch {
    pub lassos: Vec<Lasso>,
    /// A consistent word of full budget length exists, so longer behaviour
    /// was left unexplored.
    pub budget_reached: bool,
}

/// Enumerate lassos consistent with the strategy: every environment move
/// legal, every answer the strategy's own. History-free strategies are
/// followed through their response table past the materialised depth;
/// other strategies only as far as their accepted positions reach.
pub fn consistent_lassos(strat: &Strategy, budget: usize) -> LassoSearch {
    let game = strat.game();
    let table = strat.to_table();
    // Generate consistent words.
    let mut words: Vec<Play> = Vec::new();
    let mut budget_reached = false;
    let mut stack: Vec<Play> = vec![Vec::new()];
    while let Some(w) = stack.pop() {
        if w.len() >= budget {
            budget_reached = true;
            words.push(w);
            continue;
        }
        let mut extended = false;
        if w.len() % 2 == 0 {
            // Environment explores every legal move.
            for (m, _) in game.moves() {
                let mut next = w.clone();
                next.push(m.clone());
                if consistent_step(strat, &table, &next) {
                    stack.push(next);
                    extended = true;
                }
            }
        } else {
            // The strategy answers deterministically.
            let answers: Vec<MoveId> = match &table {
                Some(t) => t.get(w.last().unwrap()).cloned().into_iter().collect(),
                None => match strat.play_set().node_of(&w) {
                    Some(node) => {
                        strat.play_set().children(node).map(|(m, _)| m.clone()).collect()
                    }
                    None => Vec::new(),
                },
            };
            for b in answers {
                let mut next = w.clone();
                next.push(b);
                if consistent_step(strat, &table, &next) {
                    stack.push(next);
                    extended = true;
                }
            }
        }
        if !extended {
            words.push(w);
        }
    }
    // Cut each word into stem/cycle candidates and keep the consistent ones.
    let mut set: BTreeSet<Lasso> = BTreeSet::new();
    for w in &words {
        for i in 0..w.len() {
            for j in ((i + 2)..=w.len()).step_by(2) {
                let lasso = Lasso { stem: w[..i].to_vec(), cycle: w[i..j].to_vec() };
                if admits_lasso(game, &lasso) && lasso_consistent(strat, &table, &lasso) {
                    set.insert(lasso);
                }
            }
        }
    }
    LassoSearch { lassos: set.into_iter().collect(), budget_reached }
}

/// Is the word a legal position the strategy goes along with? For
/// history-free strategies legality extends past the materialised depth;
/// otherwise membership in the accepted set is the test.
fn consistent_step(
    strat: &Strategy,
    table: &Option<std::collections::BTreeMap<MoveId, MoveId>>,
    word: &[MoveId],
) -> bool {
    match table {
        Some(t) => {
            if !strat.game().admits(word) {
                return false;
            }
            // Every answer in the word must be the tabled one.
            word.iter()
                .enumerate()
                .filter(|(i, _)| i % 2 == 1)
                .all(|(i, b)| t.get(&word[i - 1]) == Some(b))
        }
        None => strat.play_set().contains(word),
    }
}

fn lasso_consistent(
    strat: &Strategy,
    table: &Option<std::collections::BTreeMap<MoveId, MoveId>>,
    lasso: &Lasso,
) -> bool {
    consistent_step(strat, table, &unroll(&lasso.stem, &lasso.cycle, 2))
}

/// Decide whether the strategy wins the refined game, searching infinite
/// plays up to the lasso budget.
pub fn is_winning(
    strat: &Strategy,
    refined: &RefinedGame,
    budget: usize,
) -> Result<WinningVerdict, WinningError> {
    if strat.game() != &refined.game {
        return Err(WinningError::WrongGame);
    }
    match is_total(strat) {
        Totality::Total => {}
        Totality::NotTotal { context } => return Ok(WinningVerdict::NotTotal { context }),
        Totality::Inconclusive { context } => {
            return Ok(WinningVerdict::Inconclusive {
                reason: format!(
                    "totality undecidable: the answer after {} lies past the materialised depth",
                    fmt_play(&context)
                ),
            })
        }
    }
    if !has_infinite_plays(&refined.game) {
        return Ok(WinningVerdict::Winning { exhaustive: true });
    }
    let search = consistent_lassos(strat, budget);
    for lasso in &search.lassos {
        if !lasso_wins(&refined.spec, &refined.game, lasso)? {
            return Ok(WinningVerdict::NotWinning { lasso: lasso.clone() });
        }
    }
    if strat.to_table().is_some() {
        // History-free: the table pins behaviour at every depth. If no
        // consistent word fills the budget, the strategy provably stops.
        Ok(WinningVerdict::Winning { exhaustive: !search.budget_reached })
    } else {
        // Behaviour past the accepted positions is unknowable; only a
        // strategy that demonstrably stops gets a verdict.
        let alive = strat.maximal_plays().iter().any(|s| {
            refined.game.moves().any(|(m, _)| {
                let mut ext = s.clone();
                ext.push(m.clone());
                refined.game.admits(&ext)
            })
        });
        if alive {
            Ok(WinningVerdict::Inconclusive {
                reason: "the strategy is not history-free and still has moves at the \
                         materialised edge"
                    .to_string(),
            })
        } else {
            Ok(WinningVerdict::Winning { exhaustive: true })
        }
    }
}

// ---------------------------------------------------------------------------
// Winning composition and chattering.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CompositionReport {
    /// No hidden conversation could have gone on forever; the composite and
    /// its totality come along as evidence.
    Composed { composite: Morphism, totality: Totality },
    /// An explicit endless middle dialogue: the interaction that ran the
    /// middle out of depth, and the cycle of middle moves it repeats.
    Chattering { witness: Vec<InteractionMove>, cycle: Play },
    /// Possible divergences were flagged but at least one strategy is not
    /// history-free, so no cycle can be pinned down.
    Unresolved { markers: Vec<Vec<InteractionMove>> },
}

/// Analyse a composition for chattering, with no winning preconditions.
pub fn chattering_certificate(
    f: &Morphism,
    g: &Morphism,
) -> Result<CompositionReport, WinningError> {
    let composite = compose_hiding(f, g)?;
    if composite.possible_divergences().is_empty() {
        let totality = is_total(composite.strategy());
        return Ok(CompositionReport::Composed { composite, totality });
    }
    let f_free = f.strategy().history_freedom().is_free();
    let g_free = g.strategy().history_freedom().is_free();
    if f_free && g_free {
        for marker in composite.possible_divergences() {
            // The chattering tail: middle moves after the last visible one.
            let last_visible = marker
                .iter()
                .rposition(|im| im.zone != Zone::Mid)
                .map(|i| i + 1)
                .unwrap_or(0);
            let tail: Vec<&MoveId> =
                marker[last_visible..].iter().map(|im| &im.mv).collect();
            // Both strategies answer deterministically, so a repeated middle
            // move closes a genuine cycle.
            for (i, m) in tail.iter().enumerate() {
                if let Some(j) = tail[i + 1..].iter().position(|n| n == m) {
                    let cycle: Play =
                        tail[i..=i + j].iter().map(|m| (*m).clone()).collect();
                    return Ok(CompositionReport::Chattering {
                        witness: marker.clone(),
                        cycle,
                    });
                }
            }
        }
    }
    Ok(CompositionReport::Unresolved {
        markers: composite.possible_divergences().to_vec(),
    })
}

/// Compose two strategies after checking each wins its refined function
/// space; the certificate then says what the composite's hidden dialogues
/// did. With the premises checked, chattering cannot occur — that is the
/// point — so a `Chattering` result here would falsify a premise check.
pub fn winning_compose(
    f: &Morphism,
    g: &Morphism,
    wa: &WinningSpec,
    wb: &WinningSpec,
    wc: &WinningSpec,
    budget: usize,
) -> Result<CompositionReport, WinningError> {
    let f_refined = RefinedGame {
        game: Game::lolli(f.dom(), f.cod()),
        spec: WinningSpec::Lolli(Box::new(wa.clone()), Box::new(wb.clone())),
    };
    let f_verdict = is_winning(f.strategy(), &f_refined, budget)?;
    if !matches!(f_verdict, WinningVerdict::Winning { .. }) {
        return Err(WinningError::PreconditionFailed {
            side: "first",
            verdict: f_verdict.to_string(),
        });
    }
    let g_refined = RefinedGame {
        game: Game::lolli(g.dom(), g.cod()),
        spec: WinningSpec::Lolli(Box::new(wb.clone()), Box::new(wc.clone())),
    };
    let g_verdict = is_winning(g.strategy(), &g_refined, budget)?;
    if !matches!(g_verdict, WinningVerdict::Winning { .. }) {
        return Err(WinningError::PreconditionFailed {
            side: "second",
            verdict: g_verdict.to_string(),
        });
    }
    chattering_certificate(f, g)
}

/// Render a divergence marker for reports.
pub fn describe_marker(marker: &[InteractionMove]) -> String {
    fmt_interaction(marker)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::Tag;
    use crate::strategy::{enumerate_strategies, EnumOpts};
    use std::collections::BTreeMap;

    fn mv(name: &str) -> MoveId {
        MoveId::base(name)
    }

    fn tv(path: &[Tag], name: &str) -> MoveId {
        MoveId::tagged(path, name)
    }

    fn p(names: &[&str]) -> Play {
        names.iter().map(|n| mv(n)).collect()
    }

    fn always_zero() -> Strategy {
        let s = Game::stream(4);
        let table: BTreeMap<MoveId, MoveId> = [(mv("*"), mv("0"))].into_iter().collect();
        Strategy::from_table(&s, &table)
    }

    #[test]
    fn lasso_validity_follows_the_game_structure() {
        let s = Game::stream(4);
        let ok = Lasso::new(p(&["*", "0"]), p(&["*", "1"])).unwrap();
        assert!(admits_lasso(&s, &ok));
        // Odd cycles break alternation.
        let odd = Lasso::new(p(&[]), p(&["*"])).unwrap();
        assert!(!admits_lasso(&s, &odd));
        // Fully materialised games admit no infinite play.
        let b = Game::boolean();
        let finite = Lasso::new(vec![], vec![mv("*"), mv("tt")]).unwrap();
        assert!(!admits_lasso(&b, &finite));
        assert!(Lasso::new(vec![], vec![]).is_err());
    }

    #[test]
    fn compound_lassos_project_into_their_components() {
        // Endless chatter on the left of Str ⊸ 𝔹: legal, because the left
        // projection is an infinite stream dialogue and the right stays put.
        let g = Game::lolli(&Game::stream(4), &Game::boolean());
        let chatter = Lasso::new(
            vec![tv(&[Tag::R], "*"), tv(&[Tag::L], "*")],
            vec![tv(&[Tag::L], "0"), tv(&[Tag::L], "*")],
        )
        .unwrap();
        assert!(admits_lasso(&g, &chatter));
        // A cycle whose left projection does not alternate is rejected.
        let bad = Lasso::new(
            vec![tv(&[Tag::R], "*"), tv(&[Tag::L], "*")],
            vec![tv(&[Tag::L], "0"), tv(&[Tag::L], "0")],
        )
        .unwrap();
        assert!(!admits_lasso(&g, &bad));
    }

    #[test]
    fn which_games_have_infinite_plays() {
        assert!(!has_infinite_plays(&Game::boolean()));
        assert!(has_infinite_plays(&Game::stream(4)));
        assert!(has_infinite_plays(&Game::universe(&["a"], 2).unwrap()));
        assert!(has_infinite_plays(&Game::tensor(&Game::stream(2), &Game::boolean())));
        assert!(has_infinite_plays(&Game::lolli(&Game::stream(2), &Game::boolean())));
        // The stream on the left is unreachable when the right never opens.
        assert!(!has_infinite_plays(&Game::lolli(&Game::stream(2), &Game::unit())));
    }

    #[test]
    fn atoms_are_invariant_under_rotation_and_unrolling() {
        let word_presentations = [
            Lasso::new(p(&["*", "0"]), p(&["*", "1"])).unwrap(),
            // Rotated: push one loop round into the stem.
            Lasso::new(p(&["*", "0", "*", "1"]), p(&["*", "1"])).unwrap(),
            // Unrolled: the doubled loop.
            Lasso::new(p(&["*", "0"]), p(&["*", "1", "*", "1"])).unwrap(),
        ];
        let s = Game::stream(4);
        for atom in ["visits:0", "visits:1", "loop-contains:1", "loop-contains:0"] {
            let spec = WinningSpec::Atom(atom.to_string());
            let values: Vec<bool> = word_presentations
                .iter()
                .map(|l| {
                    assert!(admits_lasso(&s, l));
                    lasso_wins(&spec, &s, l).unwrap()
                })
                .collect();
            assert_eq!(values[0], values[1], "{atom} not rotation invariant");
            assert_eq!(values[0], values[2], "{atom} not unroll invariant");
        }
        let spec = WinningSpec::Atom("loop-contains:0".to_string());
        assert!(!lasso_wins(&spec, &s, &word_presentations[0]).unwrap());
        let spec = WinningSpec::Atom("visits:0".to_string());
        assert!(lasso_wins(&spec, &s, &word_presentations[0]).unwrap());
        let spec = WinningSpec::Atom("frequency:0".to_string());
        assert_eq!(
            lasso_wins(&spec, &s, &word_presentations[0]).unwrap_err(),
            WinningError::UnknownAtom("frequency:0".to_string())
        );
    }

    #[test]
    fn meets_are_intersections_on_lassos() {
        let s = Game::stream(4);
        let visits0 = WinningSpec::Atom("visits:0".to_string());
        let loops1 = WinningSpec::Atom("loop-contains:1".to_string());
        let both = WinningSpec::Meet(vec![visits0.clone(), loops1.clone()]);
        let lassos = [
            Lasso::new(p(&["*", "0"]), p(&["*", "1"])).unwrap(),
            Lasso::new(p(&[]), p(&["*", "1"])).unwrap(),
            Lasso::new(p(&[]), p(&["*", "0"])).unwrap(),
        ];
        for l in &lassos {
            let meet = lasso_wins(&both, &s, l).unwrap();
            let intersect =
                lasso_wins(&visits0, &s, l).unwrap() && lasso_wins(&loops1, &s, l).unwrap();
            assert_eq!(meet, intersect);
        }
        assert!(lasso_wins(&WinningSpec::Meet(vec![]), &s, &lassos[2]).unwrap());
    }

    #[test]
    fn function_space_specs_put_the_burden_on_the_right() {
        let g = Game::lolli(&Game::stream(4), &Game::boolean());
        let chatter = Lasso::new(
            vec![tv(&[Tag::R], "*"), tv(&[Tag::L], "*")],
            vec![tv(&[Tag::L], "0"), tv(&[Tag::L], "*")],
        )
        .unwrap();
        // Left infinite and accepted, right finite: lost.
        let spec = WinningSpec::Lolli(
            Box::new(WinningSpec::All),
            Box::new(WinningSpec::All),
        );
        assert!(!lasso_wins(&spec, &g, &chatter).unwrap());
        // If the left infinite play is itself losing, the hypothesis fails
        // and the play is won.
        let spec = WinningSpec::Lolli(
            Box::new(WinningSpec::Never),
            Box::new(WinningSpec::All),
        );
        assert!(lasso_wins(&spec, &g, &chatter).unwrap());
        // Shape mismatches are reported, not guessed around.
        let spec = WinningSpec::Tensor(
            Box::new(WinningSpec::All),
            Box::new(WinningSpec::All),
        );
        assert_eq!(lasso_wins(&spec, &g, &chatter).unwrap_err(), WinningError::ShapeMismatch);
    }

    #[test]
    fn totality_distinguishes_refusal_from_the_materialised_edge() {
        let b = Game::boolean();
        let answered = Strategy::new(&b, &[vec![mv("*"), mv("tt")]]).unwrap();
        assert_eq!(is_total(&answered), Totality::Total);
        assert_eq!(
            is_total(&Strategy::bottom(&b)),
            Totality::NotTotal { context: vec![mv("*")] }
        );
        // A question with no answer in the game at all: never total.
        let probe = Game::flat_named(&[("q", crate::game::Polarity::O)], &[&["q"]]).unwrap();
        assert_eq!(
            is_total(&Strategy::bottom(&probe)),
            Totality::NotTotal { context: vec![mv("q")] }
        );
        // Refusing mid-game is refusal.
        let s4 = Game::stream(4);
        let short = Strategy::new(&s4, &[p(&["*", "0"])]).unwrap();
        assert_eq!(is_total(&short), Totality::NotTotal { context: p(&["*", "0", "*"]) });
        // Stopping at the materialised edge is fine when the response table
        // settles what comes next: on a shorter materialisation the same
        // table is already everything there is to say.
        let s3 = Game::stream(3);
        let edge = Strategy::new(&s3, &[p(&["*", "0"])]).unwrap();
        assert!(edge.history_freedom().is_free());
        assert_eq!(is_total(&edge), Totality::Total);
        assert_eq!(is_total(&always_zero()), Totality::Total);
    }

    #[test]
    fn history_dependence_at_a_clipped_edge_is_inconclusive() {
        // The strategy echoes the stream but promotes its second answer to
        // the boolean side once: its responses to the same probe differ by
        // history, and at two reachable probes its only unclipped options
        // are ones it never took. No table speaks for it past the bound.
        let g = Game::lolli(&Game::stream(4), &Game::boolean());
        let plays = [
            vec![tv(&[Tag::R], "*"), tv(&[Tag::L], "*")],
            vec![
                tv(&[Tag::R], "*"),
                tv(&[Tag::L], "*"),
                tv(&[Tag::L], "0"),
                tv(&[Tag::L], "*"),
            ],
            vec![
                tv(&[Tag::R], "*"),
                tv(&[Tag::L], "*"),
                tv(&[Tag::L], "1"),
                tv(&[Tag::L], "*"),
            ],
            vec![
                tv(&[Tag::R], "*"),
                tv(&[Tag::L], "*"),
                tv(&[Tag::L], "0"),
                tv(&[Tag::L], "*"),
                tv(&[Tag::L], "0"),
                tv(&[Tag::R], "tt"),
            ],
        ];
        let strat = Strategy::new(&g, &plays).unwrap();
        assert!(!strat.history_freedom().is_free());
        assert!(matches!(is_total(&strat), Totality::Inconclusive { .. }));
    }

    #[test]
    fn history_free_strategies_get_definite_lasso_sweeps() {
        let strat = always_zero();
        let refined = RefinedGame {
            game: strat.game().clone(),
            spec: WinningSpec::Atom("loop-contains:0".to_string()),
        };
        assert_eq!(
            is_winning(&strat, &refined, 8).unwrap(),
            WinningVerdict::Winning { exhaustive: false }
        );
        let refined = RefinedGame {
            game: strat.game().clone(),
            spec: WinningSpec::Atom("loop-contains:1".to_string()),
        };
        match is_winning(&strat, &refined, 8).unwrap() {
            WinningVerdict::NotWinning { lasso } => {
                assert!(lasso.cycle.contains(&mv("0")));
                assert!(!lasso.cycle.contains(&mv("1")));
            }
            other => panic!("expected a losing lasso, got {other}"),
        }
        // On a finite game the sweep is trivially exhaustive.
        let b = Game::boolean();
        let tt = Strategy::new(&b, &[vec![mv("*"), mv("tt")]]).unwrap();
        let refined = RefinedGame { game: b, spec: WinningSpec::Never };
        assert_eq!(
            is_winning(&tt, &refined, 8).unwrap(),
            WinningVerdict::Winning { exhaustive: true }
        );
    }

    #[test]
    fn non_history_free_survivors_at_the_edge_stay_inconclusive() {
        let s4 = Game::stream(4);
        // Answer 0 then 1: deterministic, total to the bound, but its future
        // depends on history we cannot see.
        let strat = Strategy::new(&s4, &[p(&["*", "0", "*", "1"])]).unwrap();
        assert!(!strat.history_freedom().is_free());
        let refined =
            RefinedGame { game: s4.clone(), spec: WinningSpec::All };
        assert!(matches!(
            is_winning(&strat, &refined, 8).unwrap(),
            WinningVerdict::Inconclusive { .. }
        ));
    }

    #[test]
    fn winning_pairs_compose_without_chattering() {
        let b = Game::boolean();
        let game = Game::lolli(&b, &b);
        let all = WinningSpec::All;
        let strategies = enumerate_strategies(&game, &EnumOpts::default()).unwrap();
        let winning: Vec<Morphism> = strategies
            .into_iter()
            .filter(|s| {
                let refined = RefinedGame {
                    game: game.clone(),
                    spec: WinningSpec::Lolli(Box::new(all.clone()), Box::new(all.clone())),
                };
                matches!(
                    is_winning(s, &refined, 8).unwrap(),
                    WinningVerdict::Winning { .. }
                )
            })
            .map(|s| Morphism::new(&b, &b, s).unwrap())
            .collect();
        assert!(!winning.is_empty());
        for f in &winning {
            for g in &winning {
                match winning_compose(f, g, &all, &all, &all, 8).unwrap() {
                    CompositionReport::Composed { totality, .. } => {
                        assert_eq!(totality, Totality::Total);
                    }
                    other => panic!("winning pair chattered: {other:?}"),
                }
            }
        }
    }

    #[test]
    fn the_classic_chattering_pair_is_caught_with_its_cycle() {
        // f feeds the stream zeros; g consults the stream forever and never
        // answers its boolean. Both are total, g is not winning, and the
        // composition chatters.
        let mid = Game::stream(4);
        let b = Game::boolean();
        let unit = Game::unit();
        let f_table: BTreeMap<MoveId, MoveId> =
            [(tv(&[Tag::R], "*"), tv(&[Tag::R], "0"))].into_iter().collect();
        let f = Morphism::new(
            &unit,
            &mid,
            Strategy::from_table(&Game::lolli(&unit, &mid), &f_table),
        )
        .unwrap();
        let g_table: BTreeMap<MoveId, MoveId> = [
            (tv(&[Tag::R], "*"), tv(&[Tag::L], "*")),
            (tv(&[Tag::L], "0"), tv(&[Tag::L], "*")),
            (tv(&[Tag::L], "1"), tv(&[Tag::L], "*")),
        ]
        .into_iter()
        .collect();
        let g = Morphism::new(
            &mid,
            &b,
            Strategy::from_table(&Game::lolli(&mid, &b), &g_table),
        )
        .unwrap();
        assert_eq!(is_total(f.strategy()), Totality::Total);
        assert_eq!(is_total(g.strategy()), Totality::Total);
        // g is total but loses its own function space: it can be drawn into
        // an endless left dialogue with a silent right.
        let g_refined = RefinedGame {
            game: Game::lolli(&mid, &b),
            spec: WinningSpec::Lolli(Box::new(WinningSpec::All), Box::new(WinningSpec::All)),
        };
        assert!(matches!(
            is_winning(g.strategy(), &g_refined, 8).unwrap(),
            WinningVerdict::NotWinning { .. }
        ));
        // The theorem's premise fails, and says so.
        let err =
            winning_compose(&f, &g, &WinningSpec::All, &WinningSpec::All, &WinningSpec::All, 8)
                .unwrap_err();
        assert!(matches!(err, WinningError::PreconditionFailed { side: "second", .. }));
        // The certificate still pins down the endless middle dialogue.
        match chattering_certificate(&f, &g).unwrap() {
            CompositionReport::Chattering { cycle, witness } => {
                assert_eq!(cycle, p(&["*", "0"]));
                assert!(witness.iter().filter(|im| im.zone == Zone::Mid).count() >= 2);
            }
            other => panic!("expected chattering, got {other:?}"),
        }
    }

    #[test]
    fn quiet_compositions_certify_composed() {
        let b = Game::boolean();
        let id = Morphism::identity(&b);
        match chattering_certificate(&id, &id).unwrap() {
            CompositionReport::Composed { totality, composite } => {
                assert_eq!(totality, Totality::Total);
                assert_eq!(composite, Morphism::identity(&b));
            }
            other => panic!("expected a quiet composition, got {other:?}"),
        }
    }
}
