//! Strategies: deterministic plans for the Player side of a game.
//!
//! A strategy is a set of even-length positions containing ε, closed under
//! even prefixes, and deterministic: a position never carries two different
//! responses to the same environment move. The set is stored in the same trie
//! structure games use; odd-depth nodes exist only as waypoints.
//!
//! A strategy is *history-free* when its responses depend only on the last
//! environment move, not on how the position was reached. That is two
//! conditions: the same move always gets the same answer, and an answer given
//! anywhere must be repeated at every reachable position where that move
//! occurs — including positions where the answer would be illegal, which is
//! how a perfectly deterministic strategy can fail to be history-free.
//! [`Strategy::history_freedom`] reports a concrete witness either way.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::game::{fmt_play, Game, MoveId, Play, PlaySet, ROOT};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StrategyError {
    #[error("{play} is not a position of the game")]
    NotAPlay { play: String },
    #[error("strategy positions must have even length; {play} does not")]
    OddLength { play: String },
    #[error("nondeterministic after {context}: both {b} and {c} are answered")]
    Nondeterministic { context: String, b: String, c: String },
    #[error("context {context} is not reachable by this strategy")]
    ContextNotInStrategy { context: String },
    #[error("a response context must end with an environment move; {context} has even length")]
    EvenContext { context: String },
    #[error("more than {max} strategies; raise the budget to enumerate them")]
    BudgetExceeded { max: usize },
}

/// A deterministic strategy on a fixed game.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Strategy {
    game: Game,
    plays: PlaySet,
}

/// The outcome of the history-freedom check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HistoryFreedom {
    /// Responses depend only on the last environment move; the table says how.
    HistoryFree { table: BTreeMap<MoveId, MoveId> },
    /// Two accepted positions answer the same move differently.
    DivergentResponses { first: Play, second: Play },
    /// `seen` answers a move that goes unanswered (or answered, but absent)
    /// after `context`, even though `context` is reachable and legal. The
    /// response being illegal after `context` is an instance of this, not an
    /// excuse: such a strategy genuinely consults history.
    UnreplayedResponse { seen: Play, context: Play },
}

impl HistoryFreedom {
    pub fn is_free(&self) -> bool {
        matches!(self, HistoryFreedom::HistoryFree { .. })
    }
}

impl Strategy {
    /// Build a strategy from a list of accepted positions. Even prefixes are
    /// filled in automatically, so listing only the maximal positions is
    /// enough. Positions must belong to the game, have even length, and agree
    /// on responses.
    pub fn new(game: &Game, accepted: &[Play]) -> Result<Strategy, StrategyError> {
        let mut plays = PlaySet::new();
        for p in accepted {
            if p.len() % 2 != 0 {
                return Err(StrategyError::OddLength { play: fmt_play(p) });
            }
            if !game.plays().contains(p) {
                return Err(StrategyError::NotAPlay { play: fmt_play(p) });
            }
            plays.insert(p);
        }
        let strat = Strategy { game: game.clone(), plays };
        strat.check_deterministic()?;
        Ok(strat)
    }

    /// The strategy that accepts only ε: never responds to anything.
    pub fn bottom(game: &Game) -> Strategy {
        Strategy { game: game.clone(), plays: PlaySet::new() }
    }

    /// The history-free strategy induced by a response table, as far as it
    /// goes: starting from ε, whenever the table answers a legal environment
    /// move and the answer is itself legal, the extended position is
    /// accepted. Table entries that are illegal where they are reached are
    /// skipped — the position simply gets no response there. Note the result
    /// then fails [`Strategy::history_freedom`], by design: no history-free
    /// strategy exists with that table.
    pub fn from_table(game: &Game, table: &BTreeMap<MoveId, MoveId>) -> Strategy {
        let mut plays = PlaySet::new();
        let mut queue = vec![Vec::<MoveId>::new()];
        while let Some(s) = queue.pop() {
            let node = game.plays().node_of(&s).expect("closure stays inside the game");
            for (a, oa) in game.plays().children(node) {
                if let Some(b) = table.get(a) {
                    if game.plays().child(oa, b).is_some() {
                        let mut t = s.clone();
                        t.push(a.clone());
                        t.push(b.clone());
                        plays.insert(&t);
                        queue.push(t);
                    }
                }
            }
        }
        Strategy { game: game.clone(), plays }
    }

    pub fn game(&self) -> &Game {
        &self.game
    }

    /// Is the even-length position accepted?
    pub fn accepts(&self, play: &[MoveId]) -> bool {
        play.len() % 2 == 0 && self.plays.contains(play)
    }

    /// Is the position a prefix of an accepted one (waypoints included)?
    pub fn reaches(&self, play: &[MoveId]) -> bool {
        self.plays.contains(play)
    }

    /// All accepted positions, canonical order, ε first.
    pub fn even_plays(&self) -> Vec<Play> {
        self.plays
            .iter_seqs()
            .into_iter()
            .filter(|p| p.len() % 2 == 0)
            .collect()
    }

    /// The accepted positions no other accepted position extends.
    pub fn maximal_plays(&self) -> Vec<Play> {
        let mut out = Vec::new();
        let mut stack = vec![(ROOT, Vec::new())];
        while let Some((node, prefix)) = stack.pop() {
            if self.plays.is_leaf(node) {
                out.push(prefix);
            } else {
                for (m, c) in self.plays.children(node) {
                    let mut p = prefix.clone();
                    p.push(m.clone());
                    stack.push((c, p));
                }
            }
        }
        out.sort();
        out
    }

    pub fn play_set(&self) -> &PlaySet {
        &self.plays
    }

    /// The response at a context `s·a` (with `s` accepted and `a` an
    /// environment move): `Some` response, or `None` when the strategy has no
    /// answer there.
    pub fn respond(&self, context: &[MoveId]) -> Result<Option<MoveId>, StrategyError> {
        if context.len() % 2 == 0 {
            return Err(StrategyError::EvenContext { context: fmt_play(context) });
        }
        let s = &context[..context.len() - 1];
        if self.plays.node_of(s).is_none() {
            return Err(StrategyError::ContextNotInStrategy { context: fmt_play(context) });
        }
        match self.plays.node_of(context) {
            None => Ok(None),
            Some(node) => Ok(self.plays.children(node).map(|(m, _)| m.clone()).next()),
        }
    }

    fn check_deterministic(&self) -> Result<(), StrategyError> {
        let mut stack = vec![(ROOT, 0usize, Vec::new())];
        while let Some((node, depth, prefix)) = stack.pop() {
            let kids: Vec<(&MoveId, usize)> = self.plays.children(node).collect();
            if depth % 2 == 1 && kids.len() > 1 {
                return Err(StrategyError::Nondeterministic {
                    context: fmt_play(&prefix),
                    b: kids[0].0.to_string(),
                    c: kids[1].0.to_string(),
                });
            }
            for (m, c) in kids {
                let mut p = prefix.clone();
                p.push(m.clone());
                stack.push((c, depth + 1, p));
            }
        }
        Ok(())
    }

    /// Decide history-freedom, with a witness either way: the response table
    /// if free, or a pair of positions exhibiting the failure.
    pub fn history_freedom(&self) -> HistoryFreedom {
        // First pass: collect the response table, watching for conflicts.
        let mut table: BTreeMap<MoveId, (MoveId, Play)> = BTreeMap::new();
        let mut stack = vec![(ROOT, Vec::<MoveId>::new())];
        let mut evens: Vec<Play> = Vec::new();
        while let Some((node, prefix)) = stack.pop() {
            if prefix.len() % 2 == 0 {
                evens.push(prefix.clone());
            } else {
                let a = prefix.last().expect("odd positions are non-empty").clone();
                for (b, _) in self.plays.children(node) {
                    let mut full = prefix.clone();
                    full.push(b.clone());
                    match table.get(&a) {
                        None => {
                            table.insert(a.clone(), (b.clone(), full.clone()));
                        }
                        Some((b0, first)) if b0 != b => {
                            return HistoryFreedom::DivergentResponses {
                                first: first.clone(),
                                second: full,
                            };
                        }
                        Some(_) => {}
                    }
                }
            }
            for (m, c) in self.plays.children(node) {
                let mut p = prefix.clone();
                p.push(m.clone());
                stack.push((c, p));
            }
        }
        // Second pass: every tabled response must be replayed at every
        // accepted position where its move is legal. Legality means the
        // materialised arena: positions at the game's depth bound have
        // nothing left to replay into. One exception survives past it: when
        // the full game admits the replay but the materialised arena clips
        // it (a component ran out of depth), the obligation is vacuous —
        // there is nothing materialised to replay into. A replay the full
        // game rejects outright stays a violation: the tabled answer is
        // simply illegal at that reachable position.
        for t in &evens {
            for (a, (b, seen)) in &table {
                let mut ta = t.clone();
                ta.push(a.clone());
                if !self.game.plays().contains(&ta) {
                    continue;
                }
                let mut tab = ta;
                tab.push(b.clone());
                if !self.plays.contains(&tab) {
                    let clipped = !self.game.plays().contains(&tab) && self.game.admits(&tab);
                    if !clipped {
                        return HistoryFreedom::UnreplayedResponse {
                            seen: seen.clone(),
                            context: {
                                let mut c = t.clone();
                                c.push(a.clone());
                                c
                            },
                        };
                    }
                }
            }
        }
        let table = table.into_iter().map(|(a, (b, _))| (a, b)).collect();
        HistoryFreedom::HistoryFree { table }
    }

    /// The response table, when the strategy is history-free.
    pub fn to_table(&self) -> Option<BTreeMap<MoveId, MoveId>> {
        match self.history_freedom() {
            HistoryFreedom::HistoryFree { table } => Some(table),
            _ => None,
        }
    }
}

/// How [`enumerate_strategies`] should behave.
#[derive(Debug, Clone)]
pub struct EnumOpts {
    /// Keep only history-free strategies (enumerated directly by response
    /// table, not by filtering).
    pub history_free_only: bool,
    /// Give up beyond this many strategies.
    pub max: usize,
}

impl Default for EnumOpts {
    fn default() -> Self {
        EnumOpts { history_free_only: false, max: 1_000_000 }
    }
}

/// The number of strategies on a game, by the product formula over its tree:
/// at each position the environment's moves are answered independently, each
/// either not at all or by one response with a sub-strategy below it. `None`
/// on overflow.
pub fn count_strategies(game: &Game) -> Option<u128> {
    fn go(game: &Game, node: usize) -> Option<u128> {
        let mut prod: u128 = 1;
        for (_, oa) in game.plays().children(node) {
            let mut sum: u128 = 1;
            for (_, eb) in game.plays().children(oa) {
                sum = sum.checked_add(go(game, eb)?)?;
            }
            prod = prod.checked_mul(sum)?;
        }
        Some(prod)
    }
    go(game, ROOT)
}

/// All strategies on a game, in a canonical order. With
/// `history_free_only` the walk enumerates response tables directly,
/// pruning any table whose answer becomes illegal at a reachable position
/// (no history-free strategy has such a table).
pub fn enumerate_strategies(
    game: &Game,
    opts: &EnumOpts,
) -> Result<Vec<Strategy>, StrategyError> {
    let mut out = if opts.history_free_only {
        let mut acc = Vec::new();
        let mut table = BTreeMap::new();
        hf_walk(game, &mut vec![Vec::new()], &mut table, &mut acc, opts.max)?;
        acc
    } else {
        match count_strategies(game) {
            Some(n) if n <= opts.max as u128 => {}
            _ => return Err(StrategyError::BudgetExceeded { max: opts.max }),
        }
        general_walk(game, ROOT)
            .into_iter()
            .map(|plays| {
                let mut set = PlaySet::new();
                for p in &plays {
                    set.insert(p);
                }
                Strategy { game: game.clone(), plays: set }
            })
            .collect()
    };
    out.sort_by_key(|s| s.even_plays());
    Ok(out)
}

/// Sub-strategies below an even node, as relative accepted positions.
fn general_walk(game: &Game, node: usize) -> Vec<Vec<Play>> {
    let mut acc: Vec<Vec<Play>> = vec![vec![Vec::new()]];
    for (a, oa) in game.plays().children(node) {
        let mut options: Vec<Vec<Play>> = vec![Vec::new()]; // leave `a` unanswered
        for (b, eb) in game.plays().children(oa) {
            for sub in general_walk(game, eb) {
                let prefixed: Vec<Play> = sub
                    .into_iter()
                    .map(|p| {
                        let mut q = Vec::with_capacity(p.len() + 2);
                        q.push(a.clone());
                        q.push(b.clone());
                        q.extend(p);
                        q
                    })
                    .collect();
                options.push(prefixed);
            }
        }
        let mut next = Vec::with_capacity(acc.len() * options.len());
        for base in &acc {
            for opt in &options {
                let mut merged = base.clone();
                merged.extend(opt.iter().cloned());
                next.push(merged);
            }
        }
        acc = next;
    }
    acc
}

/// Depth-first over response tables. `frontier` holds accepted positions
/// whose continuations are not yet explored; reaching an undecided
/// environment move branches over leaving it unanswered or each legal
/// answer; reaching a decided move either extends or, if the decided answer
/// is illegal here, prunes the branch.
fn hf_walk(
    game: &Game,
    frontier: &mut Vec<Play>,
    table: &mut BTreeMap<MoveId, Option<MoveId>>,
    acc: &mut Vec<Strategy>,
    max: usize,
) -> Result<(), StrategyError> {
    let s = match frontier.pop() {
        None => {
            // Closure complete: materialise this strategy.
            if acc.len() >= max {
                return Err(StrategyError::BudgetExceeded { max });
            }
            let mut plays = PlaySet::new();
            rebuild_closure(game, table, &mut plays);
            acc.push(Strategy { game: game.clone(), plays });
            return Ok(());
        }
        Some(s) => s,
    };
    let node = game.plays().node_of(&s).expect("frontier stays inside the game");
    let moves: Vec<(MoveId, usize)> =
        game.plays().children(node).map(|(m, c)| (m.clone(), c)).collect();
    // Find the first undecided move at this position; everything decided is
    // forced, so handle forced extensions first, then branch once.
    let mut extensions: Vec<Play> = Vec::new();
    for (a, oa) in &moves {
        match table.get(a) {
            Some(None) => {}
            Some(Some(b)) => match game.plays().child(*oa, b) {
                Some(_) => {
                    let mut t = s.clone();
                    t.push(a.clone());
                    t.push(b.clone());
                    extensions.push(t);
                }
                None => return Ok(()), // the table's answer is illegal here: prune
            },
            None => {
                // Branch on this move, replaying the current position after
                // the decision so remaining moves get processed. The
                // recursion consumes the frontier, so each choice restarts
                // from a snapshot of the pending positions.
                let snapshot = frontier.clone();
                let mut choices: Vec<Option<MoveId>> = vec![None];
                for (b, _) in game.plays().children(*oa) {
                    choices.push(Some(b.clone()));
                }
                for choice in choices {
                    table.insert(a.clone(), choice);
                    frontier.clear();
                    frontier.extend(snapshot.iter().cloned());
                    frontier.push(s.clone());
                    let res = hf_walk(game, frontier, table, acc, max);
                    table.remove(a);
                    res?;
                }
                return Ok(());
            }
        }
    }
    frontier.extend(extensions);
    hf_walk(game, frontier, table, acc, max)
}

/// The accepted positions induced by a fully decided table.
fn rebuild_closure(
    game: &Game,
    table: &BTreeMap<MoveId, Option<MoveId>>,
    plays: &mut PlaySet,
) {
    let mut queue = vec![Vec::<MoveId>::new()];
    while let Some(s) = queue.pop() {
        let node = game.plays().node_of(&s).expect("closure stays inside the game");
        for (a, oa) in game.plays().children(node) {
            if let Some(Some(b)) = table.get(a) {
                if game.plays().child(oa, b).is_some() {
                    let mut t = s.clone();
                    t.push(a.clone());
                    t.push(b.clone());
                    plays.insert(&t);
                    queue.push(t);
                }
            }
        }
    }
}
