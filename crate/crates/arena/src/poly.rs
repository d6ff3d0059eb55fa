//! Quantified games: one arena standing for a whole family of instances at
//! once.
//!
//! A [`VarType`] is a game expression with free variables. Given a family of
//! instance games drawn from a common token universe, [`build_pi`] erects the
//! quantified game: its moves are those of the expression applied to the full
//! universe, and a position extends move by move under two clauses — the
//! environment may play anything that keeps *some* instance alive, while the
//! player may only play what *every* live instance still admits. Strategies
//! on the quantified game restrict to each instance ([`PiGame::instantiate`],
//! [`PiGame::projection`]) and uniform strategies on the universe re-type
//! into it ([`PiGame::abstract_uniform`]).

use thiserror::Error;

use crate::category::{linked_copycat, CategoryError, Morphism};
use crate::game::{
    fmt_play, game_leq, Game, GameError, MoveId, Play, PlaySet, Polarity, Tag, ROOT,
};
use crate::strategy::{enumerate_strategies, EnumOpts, Strategy, StrategyError};
use crate::winning::{is_winning, RefinedGame, WinningError, WinningSpec, WinningVerdict};

#[derive(Debug, Error)]
pub enum PolyError {
    #[error("a quantifier needs at least one instance")]
    EmptyFamily,
    #[error("instance {0} does not embed in the family's universe")]
    InstanceEscapesUniverse(usize),
    #[error("the expression uses {used} variables; at most {max} can be quantified")]
    TooPolymorphic { used: usize, max: usize },
    #[error("the expression expects {expected} game arguments, got {got}")]
    WrongArity { expected: usize, got: usize },
    #[error("no instance {0} in the family")]
    UnknownInstance(usize),
    #[error("the strategy does not live on this quantified game")]
    ForeignStrategy,
    #[error("not uniform: {witness} leaves the quantified game")]
    NotUniform { witness: String },
    #[error("this construction needs the shape X -o (X -o X)")]
    WrongShape,
    #[error("this construction needs depth at least {needed}, the game has {depth}")]
    TooShallow { needed: usize, depth: usize },
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(transparent)]
    Strategy(#[from] StrategyError),
    #[error(transparent)]
    Category(#[from] CategoryError),
    #[error(transparent)]
    Winning(#[from] WinningError),
}

/// A game expression over free game variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VarType {
    /// The `i`-th free variable.
    Var(usize),
    Unit,
    Const(Game),
    Tensor(Box<VarType>, Box<VarType>),
    Lolli(Box<VarType>, Box<VarType>),
    With(Box<VarType>, Box<VarType>),
}

impl VarType {
    /// The first (and usually only) variable.
    pub fn var() -> VarType {
        VarType::Var(0)
    }

    pub fn tensor(a: VarType, b: VarType) -> VarType {
        VarType::Tensor(Box::new(a), Box::new(b))
    }

    pub fn lolli(a: VarType, b: VarType) -> VarType {
        VarType::Lolli(Box::new(a), Box::new(b))
    }

    pub fn with(a: VarType, b: VarType) -> VarType {
        VarType::With(Box::new(a), Box::new(b))
    }

    /// How many game arguments the expression needs: one past the highest
    /// variable index, zero if the expression is closed.
    pub fn arity(&self) -> usize {
        match self {
            VarType::Var(i) => i + 1,
            VarType::Unit | VarType::Const(_) => 0,
            VarType::Tensor(a, b) | VarType::Lolli(a, b) | VarType::With(a, b) => {
                a.arity().max(b.arity())
            }
        }
    }

    /// Instantiate the expression at the given games, materialised in full.
    pub fn apply(&self, env: &[Game]) -> Result<Game, PolyError> {
        self.apply_to(env, usize::MAX)
    }

    /// Instantiate the expression, materialising positions only to `depth`.
    /// Nested compounds over a rich universe grow multiplicatively with
    /// their natural bound, so the quantifier machinery always builds
    /// through here.
    pub fn apply_to(&self, env: &[Game], depth: usize) -> Result<Game, PolyError> {
        let expected = self.arity();
        if env.len() < expected {
            return Err(PolyError::WrongArity { expected, got: env.len() });
        }
        Ok(self.build(env, depth))
    }

    fn build(&self, env: &[Game], depth: usize) -> Game {
        let cap = |g: &Game| if g.depth_bound() > depth { g.truncate(depth) } else { g.clone() };
        match self {
            VarType::Var(i) => cap(&env[*i]),
            VarType::Unit => Game::unit(),
            VarType::Const(g) => cap(g),
            VarType::Tensor(a, b) => {
                Game::tensor_to(&a.build(env, depth), &b.build(env, depth), depth)
            }
            VarType::Lolli(a, b) => {
                Game::lolli_to(&a.build(env, depth), &b.build(env, depth), depth)
            }
            VarType::With(a, b) => {
                Game::with_to(&a.build(env, depth), &b.build(env, depth), depth)
            }
        }
    }

    /// Replace variable `index` by another expression. Instantiating the
    /// result agrees with instantiating the original at the substituted
    /// argument, which is what reindexing a family along a map amounts to.
    pub fn substitute(&self, index: usize, ty: &VarType) -> VarType {
        match self {
            VarType::Var(i) if *i == index => ty.clone(),
            VarType::Var(i) => VarType::Var(*i),
            VarType::Unit => VarType::Unit,
            VarType::Const(g) => VarType::Const(g.clone()),
            VarType::Tensor(a, b) => {
                VarType::tensor(a.substitute(index, ty), b.substitute(index, ty))
            }
            VarType::Lolli(a, b) => {
                VarType::lolli(a.substitute(index, ty), b.substitute(index, ty))
            }
            VarType::With(a, b) => {
                VarType::with(a.substitute(index, ty), b.substitute(index, ty))
            }
        }
    }

    /// Paths in the expression tree to each occurrence of a variable, left
    /// to right. A move belongs to the occurrence whose path prefixes it;
    /// stripping the path leaves the move in universe coordinates.
    pub fn var_occurrences(&self) -> Vec<Vec<Tag>> {
        let mut out = Vec::new();
        self.occurrences_into(&mut Vec::new(), &mut out);
        out
    }

    fn occurrences_into(&self, prefix: &mut Vec<Tag>, out: &mut Vec<Vec<Tag>>) {
        match self {
            VarType::Var(_) => out.push(prefix.clone()),
            VarType::Unit | VarType::Const(_) => {}
            VarType::Tensor(a, b) | VarType::Lolli(a, b) | VarType::With(a, b) => {
                prefix.push(Tag::L);
                a.occurrences_into(prefix, out);
                prefix.pop();
                prefix.push(Tag::R);
                b.occurrences_into(prefix, out);
                prefix.pop();
            }
        }
    }
}

/// The instances a quantifier ranges over: subgames of a shared token
/// universe, all carrying the universe's move alphabet.
#[derive(Debug, Clone)]
pub struct InstanceFamily {
    tokens: Vec<String>,
    depth: usize,
    universe: Game,
    instances: Vec<Game>,
}

impl InstanceFamily {
    pub fn new(tokens: &[&str], depth: usize, instances: Vec<Game>) -> Result<InstanceFamily, PolyError> {
        if instances.is_empty() {
            return Err(PolyError::EmptyFamily);
        }
        let universe = Game::universe(tokens, depth)?;
        for (i, a) in instances.iter().enumerate() {
            if !game_leq(a, &universe) {
                return Err(PolyError::InstanceEscapesUniverse(i));
            }
        }
        Ok(InstanceFamily {
            tokens: tokens.iter().map(|t| t.to_string()).collect(),
            depth,
            universe,
            instances,
        })
    }

    /// Every subgame of the token universe at once: each prefix-closed
    /// subtree of the universe's position tree is one instance. The count
    /// multiplies out as `∏ (1 + below(child))` over each node's children.
    pub fn flat_all(tokens: &[&str], depth: usize) -> Result<InstanceFamily, PolyError> {
        let universe = Game::universe(tokens, depth)?;
        let moves: Vec<(MoveId, Polarity)> = universe.moves().map(|(m, p)| (m.clone(), p)).collect();
        let mut instances = Vec::new();
        for plays in subtrees(universe.plays(), ROOT) {
            instances.push(Game::flat(moves.clone(), plays)?);
        }
        Ok(InstanceFamily {
            tokens: tokens.iter().map(|t| t.to_string()).collect(),
            depth,
            universe,
            instances,
        })
    }

    /// The sub-family of instances with at most `max_positions` positions.
    pub fn capped(&self, max_positions: usize) -> Result<InstanceFamily, PolyError> {
        let instances: Vec<Game> = self
            .instances
            .iter()
            .filter(|g| g.play_count() <= max_positions)
            .cloned()
            .collect();
        if instances.is_empty() {
            return Err(PolyError::EmptyFamily);
        }
        Ok(InstanceFamily {
            tokens: self.tokens.clone(),
            depth: self.depth,
            universe: self.universe.clone(),
            instances,
        })
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn universe_game(&self) -> &Game {
        &self.universe
    }

    pub fn instances(&self) -> &[Game] {
        &self.instances
    }

    pub fn len(&self) -> usize {
        self.instances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instances.is_empty()
    }
}

/// All prefix-closed subtrees rooted at `node`, each given by its plays
/// relative to `node`. The node itself is always kept, so the smallest
/// subtree is the lone empty play.
fn subtrees(trie: &PlaySet, node: usize) -> Vec<Vec<Play>> {
    let mut acc: Vec<Vec<Play>> = vec![vec![Vec::new()]];
    for (m, c) in trie.children(node) {
        let below = subtrees(trie, c);
        let mut next = Vec::with_capacity(acc.len() * (1 + below.len()));
        for chosen in &acc {
            next.push(chosen.clone());
            for sub in &below {
                let mut with_child = chosen.clone();
                for p in sub {
                    let mut q = Vec::with_capacity(p.len() + 1);
                    q.push(m.clone());
                    q.extend(p.iter().cloned());
                    with_child.push(q);
                }
                next.push(with_child);
            }
        }
        acc = next;
    }
    acc
}

/// A game expression quantified over an instance family.
#[derive(Debug, Clone)]
pub struct PiGame {
    ftype: VarType,
    family: InstanceFamily,
    depth: usize,
    occurrences: Vec<Vec<Tag>>,
    game: Game,
}

/// Build the quantified game for `ftype` over `family`, with positions
/// materialised to `depth`.
///
/// The arena is that of the expression applied to the whole universe. A
/// position grows by one move when the mover is entitled to it: the
/// environment's move must keep at least one instance alive, the player's
/// move must be available in every instance still alive. An instance is
/// alive as long as each variable occurrence's projection is one of its
/// positions; moves landing in constant parts of the expression constrain
/// nothing.
pub fn build_pi(ftype: &VarType, family: &InstanceFamily, depth: usize) -> Result<PiGame, PolyError> {
    let used = ftype.arity();
    if used > 1 {
        return Err(PolyError::TooPolymorphic { used, max: 1 });
    }
    let fu = ftype.apply_to(&[family.universe_game().clone()], depth)?;
    let occurrences = ftype.var_occurrences();

    let init: Vec<(usize, Vec<usize>)> = (0..family.instances.len())
        .map(|i| (i, vec![ROOT; occurrences.len()]))
        .collect();
    let mut plays: Vec<Play> = Vec::new();
    let mut stack: Vec<(usize, Play, Vec<(usize, Vec<usize>)>)> = vec![(ROOT, Vec::new(), init)];
    while let Some((node, prefix, live)) = stack.pop() {
        plays.push(prefix.clone());
        if prefix.len() >= depth {
            continue;
        }
        let mover = Polarity::mover_at(prefix.len());
        'moves: for (m, child) in fu.plays().children(node) {
            let touched = occurrences
                .iter()
                .enumerate()
                .find_map(|(k, occ)| m.strip_prefix(occ).map(|u| (k, u)));
            let next_live = match &touched {
                None => live.clone(),
                Some((k, u)) => {
                    let mut kept = Vec::with_capacity(live.len());
                    for (i, cursors) in &live {
                        match family.instances[*i].plays().child(cursors[*k], u) {
                            Some(c) => {
                                let mut cs = cursors.clone();
                                cs[*k] = c;
                                kept.push((*i, cs));
                            }
                            None if mover == Polarity::P => continue 'moves,
                            None => {}
                        }
                    }
                    kept
                }
            };
            if next_live.is_empty() {
                continue;
            }
            let mut extended = prefix.clone();
            extended.push(m.clone());
            stack.push((child, extended, next_live));
        }
    }

    let moves: Vec<(MoveId, Polarity)> = fu.moves().map(|(m, p)| (m.clone(), p)).collect();
    let game = Game::flat(moves, plays)?;
    Ok(PiGame { ftype: ftype.clone(), family: family.clone(), depth, occurrences, game })
}

impl PiGame {
    pub fn game(&self) -> &Game {
        &self.game
    }

    pub fn ftype(&self) -> &VarType {
        &self.ftype
    }

    pub fn family(&self) -> &InstanceFamily {
        &self.family
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// Where the quantified variable sits in the expression tree.
    pub fn occurrences(&self) -> &[Vec<Tag>] {
        &self.occurrences
    }

    /// The expression applied to one family member, materialised to the
    /// quantifier's depth.
    pub fn instance_game(&self, idx: usize) -> Result<Game, PolyError> {
        let a = self.family.instances.get(idx).ok_or(PolyError::UnknownInstance(idx))?;
        self.ftype.apply_to(&[a.clone()], self.depth)
    }

    /// The projection onto instance `idx`: the copycat morphism that replays
    /// quantified moves into the instance and back. Every quantified
    /// position is a position of each live instance, so the copying is
    /// always legal.
    pub fn projection(&self, idx: usize) -> Result<Morphism, PolyError> {
        let fa = self.instance_game(idx)?;
        let arena = Game::lolli(&self.game, &fa);
        let strat = linked_copycat(&arena, &[(vec![Tag::L], vec![Tag::R])]);
        Ok(Morphism::new(&self.game, &fa, strat)?)
    }

    /// Restrict a strategy on the quantified game to one instance: keep the
    /// plays the instance can follow.
    pub fn instantiate(&self, strat: &Strategy, idx: usize) -> Result<Strategy, PolyError> {
        if strat.game() != &self.game {
            return Err(PolyError::ForeignStrategy);
        }
        let fa = self.instance_game(idx)?;
        let kept: Vec<Play> = strat
            .even_plays()
            .into_iter()
            .filter(|s| fa.plays().contains(s))
            .collect();
        Ok(Strategy::new(&fa, &kept)?)
    }

    /// Re-type a strategy `dom ⊸ F(universe)` as a morphism into the
    /// quantified game. The play set is unchanged; the re-typing succeeds
    /// exactly when every play already respects the quantifier's clauses,
    /// otherwise the escaping play is reported.
    pub fn abstract_uniform(&self, dom: &Game, sigma: &Strategy) -> Result<Morphism, PolyError> {
        let arena = Game::lolli(dom, &self.game);
        let evens = sigma.even_plays();
        for s in &evens {
            if !arena.plays().contains(s) {
                return Err(PolyError::NotUniform { witness: fmt_play(s) });
            }
        }
        let strat = Strategy::new(&arena, &evens)?;
        Ok(Morphism::new(dom, &self.game, strat)?)
    }

    /// Winning on the quantified game: whichever instance an infinite play
    /// stays inside, it must win there in the sense of `inner`.
    pub fn winning_spec(&self, inner: &WinningSpec) -> Result<WinningSpec, PolyError> {
        let mut parts = Vec::with_capacity(self.family.instances.len());
        for idx in 0..self.family.instances.len() {
            let fa = self.instance_game(idx)?;
            parts.push(WinningSpec::Guarded(fa, Box::new(inner.clone())));
        }
        Ok(WinningSpec::Meet(parts))
    }
}

/// Enumerate the winning strategies on a quantified game, optionally only
/// the history-free ones. `max` bounds the enumeration before filtering.
pub fn winning_census(
    pi: &PiGame,
    history_free_only: bool,
    max: usize,
) -> Result<Vec<Strategy>, PolyError> {
    let opts = EnumOpts { history_free_only, max };
    let all = enumerate_strategies(pi.game(), &opts)?;
    let refined = RefinedGame {
        game: pi.game().clone(),
        spec: pi.winning_spec(&WinningSpec::All)?,
    };
    let mut out = Vec::new();
    for s in all {
        if matches!(is_winning(&s, &refined, 16)?, WinningVerdict::Winning { .. }) {
            out.push(s);
        }
    }
    Ok(out)
}

/// The strategy on the quantified game of `X ⊸ (X ⊸ X)` that answers an
/// opening question by touring through both arguments: it repeats the
/// question in the second argument, and when that argument answers, repeats
/// the question in the *first* argument instead of concluding, finally
/// answering the opening with whatever the first argument returned.
///
/// Every play here is legal — each repetition lands on a string some live
/// instance already contains — and the strategy is total and winning. It is
/// not history-free: its response to the second argument's answer repeats
/// the move that opened the play, which the last move alone does not
/// determine.
pub fn detour_strategy(pi: &PiGame) -> Result<Strategy, PolyError> {
    let x = VarType::var;
    let expect = VarType::lolli(x(), VarType::lolli(x(), x()));
    if pi.ftype() != &expect {
        return Err(PolyError::WrongShape);
    }
    if pi.depth() < 4 {
        return Err(PolyError::TooShallow { needed: 4, depth: pi.depth() });
    }
    let ask = |t: &str| MoveId::tagged(&[Tag::R, Tag::R, Tag::R], t);
    let answer = |t: &str| MoveId::tagged(&[Tag::R, Tag::R, Tag::L], t);
    let open_second = |t: &str| MoveId::tagged(&[Tag::R, Tag::L, Tag::R], t);
    let back_second = |t: &str| MoveId::tagged(&[Tag::R, Tag::L, Tag::L], t);
    let open_first = |t: &str| MoveId::tagged(&[Tag::L, Tag::R], t);
    let back_first = |t: &str| MoveId::tagged(&[Tag::L, Tag::L], t);

    let tokens = pi.family().tokens().to_vec();
    let mut plays: Vec<Play> = vec![Vec::new()];
    for t in &tokens {
        plays.push(vec![ask(t), open_second(t)]);
        for v in &tokens {
            let stem = vec![ask(t), open_second(t), back_second(v), open_first(t)];
            plays.push(stem.clone());
            if pi.depth() >= 6 {
                for w in &tokens {
                    let mut full = stem.clone();
                    full.push(back_first(w));
                    full.push(answer(w));
                    plays.push(full);
                }
            }
        }
    }
    Ok(Strategy::new(pi.game(), &plays)?)
}

/// The universe move an absorbed game move turns into: the token keeps the
/// move's path and name, environment moves sit on the universe's question
/// side and player moves on its answer side.
pub fn universe_alias(m: &MoveId, polarity: Polarity) -> MoveId {
    let mut tag_string = String::new();
    for t in &m.path {
        tag_string.push(match t {
            Tag::L => 'L',
            Tag::R => 'R',
        });
    }
    let token = if tag_string.is_empty() {
        m.name.clone()
    } else {
        format!("{tag_string}:{}", m.name)
    };
    let side = match polarity {
        Polarity::O => Tag::R,
        Polarity::P => Tag::L,
    };
    MoveId::tagged(&[side], &token)
}

/// Re-house an arbitrary base game inside a token universe: each move
/// becomes a token that remembers the move's path and name, environment
/// moves on the universe's question side and player moves on its answer
/// side. Returns the embedded game and the token alphabet, ready to be used
/// as a quantifier instance.
pub fn absorb_into_universe(g: &Game) -> Result<(Game, Vec<String>), PolyError> {
    let mut tokens = Vec::new();
    let mut rename = std::collections::BTreeMap::new();
    for (m, p) in g.moves() {
        let alias = universe_alias(m, p);
        tokens.push(alias.name.clone());
        rename.insert(m.clone(), alias);
    }
    let mut moves: Vec<(MoveId, Polarity)> = Vec::new();
    for t in &tokens {
        moves.push((MoveId::tagged(&[Tag::L], t), Polarity::P));
        moves.push((MoveId::tagged(&[Tag::R], t), Polarity::O));
    }
    let plays: Vec<Play> = g
        .all_plays()
        .into_iter()
        .map(|s| s.iter().map(|m| rename[m].clone()).collect())
        .collect();
    let embedded = Game::flat(moves, plays)?;
    Ok((embedded, tokens))
}
