//! Relations between games and the machinery that turns them into a
//! refinement of the strategy model: the bisimulation-style lifting to
//! strategies, relational tensor and arrow, the order on relations with its
//! meets, and the relational reading of the second-order quantifier.
//!
//! A relation here is extensional: a finite, length-preserving,
//! prefix-closed set of play pairs. At desk scale every check below is
//! exhaustive and exact, which is the point — the laws are verified by
//! enumeration, not trusted.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::category::{compose_hiding, CategoryError, Morphism};
use crate::game::{fmt_play, Game, MoveId, Play, Tag, Trie, ROOT};
use crate::poly::{InstanceFamily, PolyError, VarType};
use crate::strategy::Strategy;

#[derive(Debug, Error)]
pub enum RelationError {
    #[error("the games on this side of the relation do not match")]
    GameMismatch,
    #[error("related plays must have equal length: {left} vs {right}")]
    LengthMismatch { left: String, right: String },
    #[error("pair set is not prefix-closed: missing the prefix of ({left} | {right})")]
    PrefixClosureViolation { left: String, right: String },
    #[error("{side} component {play} is not a play of the {side} game")]
    ForeignPlay { side: &'static str, play: String },
    #[error("a meet needs at least one relation")]
    EmptyMeet,
    #[error("morphisms do not chain through the relations")]
    DomainMismatch,
    #[error("{count} relations live on this game pair, more than the cap of {max}")]
    TooManyRelations { count: u128, max: usize },
    #[error("the relational action needs a one-variable expression")]
    TooPolymorphic,
    #[error("the with connective has no relational action")]
    NoWithAction,
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Category(#[from] CategoryError),
}

/// A binary relation between the plays of two games: a non-empty,
/// length-preserving, prefix-closed set of pairs, stored as a trie over
/// move pairs so that each node is one related pair of plays.
#[derive(Debug, Clone)]
pub struct Relation {
    left: Game,
    right: Game,
    pairs: Trie<(MoveId, MoveId)>,
}

impl PartialEq for Relation {
    fn eq(&self, other: &Self) -> bool {
        self.left == other.left
            && self.right == other.right
            && self.pairs.iter_seqs() == other.pairs.iter_seqs()
    }
}

impl Eq for Relation {}

fn zip_pair(s: &[MoveId], t: &[MoveId]) -> Vec<(MoveId, MoveId)> {
    s.iter().cloned().zip(t.iter().cloned()).collect()
}

impl Relation {
    fn check_pair(left: &Game, right: &Game, s: &[MoveId], t: &[MoveId]) -> Result<(), RelationError> {
        if s.len() != t.len() {
            return Err(RelationError::LengthMismatch {
                left: fmt_play(s),
                right: fmt_play(t),
            });
        }
        if !left.plays().contains(s) {
            return Err(RelationError::ForeignPlay { side: "left", play: fmt_play(s) });
        }
        if !right.plays().contains(t) {
            return Err(RelationError::ForeignPlay { side: "right", play: fmt_play(t) });
        }
        Ok(())
    }

    fn from_seqs(left: &Game, right: &Game, seqs: &[Vec<(MoveId, MoveId)>]) -> Relation {
        let mut pairs = Trie::new();
        for seq in seqs {
            pairs.insert(seq);
        }
        Relation { left: left.clone(), right: right.clone(), pairs }
    }

    /// Build a relation from an explicit pair list, which must already be
    /// prefix-closed: dropping the last move from both sides of any listed
    /// pair must give another listed pair. The empty pair is implicit.
    pub fn new(left: &Game, right: &Game, pairs: &[(Play, Play)]) -> Result<Relation, RelationError> {
        let mut given: BTreeSet<Vec<(MoveId, MoveId)>> = BTreeSet::new();
        given.insert(Vec::new());
        for (s, t) in pairs {
            Self::check_pair(left, right, s, t)?;
            given.insert(zip_pair(s, t));
        }
        for seq in &given {
            if !seq.is_empty() && !given.contains(&seq[..seq.len() - 1]) {
                let (s, t): (Play, Play) = seq.iter().cloned().unzip();
                return Err(RelationError::PrefixClosureViolation {
                    left: fmt_play(&s),
                    right: fmt_play(&t),
                });
            }
        }
        let seqs: Vec<_> = given.into_iter().collect();
        Ok(Relation::from_seqs(left, right, &seqs))
    }

    /// Build a relation from generators, filling in all the prefix pairs.
    pub fn generated(
        left: &Game,
        right: &Game,
        pairs: &[(Play, Play)],
    ) -> Result<Relation, RelationError> {
        let mut seqs = Vec::new();
        for (s, t) in pairs {
            Self::check_pair(left, right, s, t)?;
            seqs.push(zip_pair(s, t));
        }
        Ok(Relation::from_seqs(left, right, &seqs))
    }

    /// The identity relation `{(s, s)}` over every play of the game.
    pub fn diagonal(game: &Game) -> Relation {
        let seqs: Vec<_> = game.all_plays().iter().map(|s| zip_pair(s, s)).collect();
        Relation::from_seqs(game, game, &seqs)
    }

    /// Everything relates to everything of the same length.
    pub fn full(left: &Game, right: &Game) -> Relation {
        let mut pairs = Trie::new();
        let mut stack = vec![(ROOT, ROOT, ROOT)];
        while let Some((nl, nr, out)) = stack.pop() {
            for (a, cl) in left.plays().children(nl) {
                for (b, cr) in right.plays().children(nr) {
                    let out2 = pairs.child_or_insert(out, &(a.clone(), b.clone()));
                    stack.push((cl, cr, out2));
                }
            }
        }
        Relation { left: left.clone(), right: right.clone(), pairs }
    }

    /// The same pair set presented over larger games. This is the
    /// monotonicity inclusion: a relation on a subgame is a relation on any
    /// game the subgame embeds into.
    pub fn reframed(&self, left: &Game, right: &Game) -> Result<Relation, RelationError> {
        for seq in self.pairs.iter_seqs() {
            let (s, t): (Play, Play) = seq.iter().cloned().unzip();
            Self::check_pair(left, right, &s, &t)?;
        }
        Ok(Relation { left: left.clone(), right: right.clone(), pairs: self.pairs.clone() })
    }

    pub fn left(&self) -> &Game {
        &self.left
    }

    pub fn right(&self) -> &Game {
        &self.right
    }

    pub fn contains(&self, s: &[MoveId], t: &[MoveId]) -> bool {
        s.len() == t.len() && self.pairs.contains(&zip_pair(s, t))
    }

    /// Every related pair, shortest first, including `(ε, ε)`.
    pub fn pair_list(&self) -> Vec<(Play, Play)> {
        let mut out: Vec<(Play, Play)> =
            self.pairs.iter_seqs().into_iter().map(|seq| seq.into_iter().unzip()).collect();
        out.sort_by_key(|(s, _)| s.len());
        out
    }

    pub fn pair_count(&self) -> usize {
        self.pairs.len()
    }
}

fn same_frame(a: &Relation, b: &Relation) -> Result<(), RelationError> {
    if a.left != b.left || a.right != b.right {
        return Err(RelationError::GameMismatch);
    }
    Ok(())
}

/// Which clause of the lifting a counterexample breaks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LiftClause {
    /// Exactly one of the two strategies has a response.
    Domain,
    /// Both respond, but the positions after the responses are unrelated.
    Response,
}

/// A counterexample to the lifted relation: a related pair of odd positions
/// `(s·a, t·a′)`, reachable by both strategies, where the lifting fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelWitness {
    pub left_prefix: Play,
    pub left_move: MoveId,
    pub right_prefix: Play,
    pub right_move: MoveId,
    pub clause: LiftClause,
}

impl RelWitness {
    pub fn describe(&self) -> String {
        let at = format!(
            "({} . {} | {} . {})",
            fmt_play(&self.left_prefix),
            self.left_move,
            fmt_play(&self.right_prefix),
            self.right_move,
        );
        match self.clause {
            LiftClause::Domain => format!("at {at}: exactly one side has a response"),
            LiftClause::Response => format!("at {at}: the responses leave the relation"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RelVerdict {
    Holds,
    Fails(RelWitness),
}

impl RelVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, RelVerdict::Holds)
    }

    pub fn witness(&self) -> Option<&RelWitness> {
        match self {
            RelVerdict::Holds => None,
            RelVerdict::Fails(w) => Some(w),
        }
    }
}

/// Lift a relation on plays to a relation between strategies: whenever the
/// two strategies reach related positions at their turn, one has a response
/// exactly when the other does, and the positions after the responses are
/// related again. A bisimulation played against the relation.
pub fn lift_check(
    rel: &Relation,
    sigma: &Strategy,
    tau: &Strategy,
) -> Result<RelVerdict, RelationError> {
    if sigma.game() != &rel.left || tau.game() != &rel.right {
        return Err(RelationError::GameMismatch);
    }
    let respond_at = |strat: &Strategy, play: &[MoveId]| -> Option<MoveId> {
        let node = strat.play_set().node_of(play)?;
        strat.play_set().children(node).next().map(|(b, _)| b.clone())
    };
    // Walk the relation trie, pruning branches neither strategy explores.
    // At each related odd pair both clauses are checked; descendants of a
    // pruned even pair can never rejoin the strategies, so pruning is safe.
    let mut stack: Vec<(usize, Play, Play)> = vec![(ROOT, Vec::new(), Vec::new())];
    while let Some((node, s, t)) = stack.pop() {
        if !sigma.accepts(&s) || !tau.accepts(&t) {
            continue;
        }
        for ((a, a2), odd) in rel.pairs.children(node) {
            let mut sa = s.clone();
            sa.push(a.clone());
            let mut ta = t.clone();
            ta.push(a2.clone());
            let left_resp = respond_at(sigma, &sa);
            let right_resp = respond_at(tau, &ta);
            match (left_resp, right_resp) {
                (None, None) => {}
                (Some(b), Some(b2)) => {
                    if rel.pairs.child(odd, &(b.clone(), b2.clone())).is_none() {
                        return Ok(RelVerdict::Fails(RelWitness {
                            left_prefix: s,
                            left_move: a.clone(),
                            right_prefix: t,
                            right_move: a2.clone(),
                            clause: LiftClause::Response,
                        }));
                    }
                }
                _ => {
                    return Ok(RelVerdict::Fails(RelWitness {
                        left_prefix: s,
                        left_move: a.clone(),
                        right_prefix: t,
                        right_move: a2.clone(),
                        clause: LiftClause::Domain,
                    }));
                }
            }
            for ((b, b2), even) in rel.pairs.children(odd) {
                let mut sab = sa.clone();
                sab.push(b.clone());
                let mut tab = ta.clone();
                tab.push(b2.clone());
                stack.push((even, sab, tab));
            }
        }
    }
    Ok(RelVerdict::Holds)
}

/// Shared builder for the relational tensor and arrow: pairs of compound
/// positions whose component projections are componentwise related and
/// whose component-tag traces agree move for move. The tag condition is
/// what rules out equal projections reached through different
/// interleavings.
fn combine(ra: &Relation, rb: &Relation, arrow: bool, depth: usize) -> Relation {
    let build = |x: &Game, y: &Game| {
        if arrow {
            Game::lolli_to(x, y, depth)
        } else {
            Game::tensor_to(x, y, depth)
        }
    };
    let left = build(&ra.left, &rb.left);
    let right = build(&ra.right, &rb.right);
    let mut pairs = Trie::new();
    let mut stack = vec![(ROOT, ROOT, ROOT, ROOT, ROOT)];
    while let Some((nl, nr, ca, cb, out)) = stack.pop() {
        for (a, nl2) in left.plays().children(nl) {
            for (a2, nr2) in right.plays().children(nr) {
                let tag = a.path[0];
                if tag != a2.path[0] {
                    continue;
                }
                let key = (
                    a.strip_prefix(&[tag]).expect("compound moves carry their component tag"),
                    a2.strip_prefix(&[tag]).expect("compound moves carry their component tag"),
                );
                let (ca2, cb2) = match tag {
                    Tag::L => match ra.pairs.child(ca, &key) {
                        Some(c) => (c, cb),
                        None => continue,
                    },
                    Tag::R => match rb.pairs.child(cb, &key) {
                        Some(c) => (ca, c),
                        None => continue,
                    },
                };
                let out2 = pairs.child_or_insert(out, &(a.clone(), a2.clone()));
                stack.push((nl2, nr2, ca2, cb2, out2));
            }
        }
    }
    Relation { left, right, pairs }
}

pub fn rel_tensor(ra: &Relation, rb: &Relation) -> Relation {
    rel_tensor_to(ra, rb, ra.left.depth_bound() + rb.left.depth_bound())
}

pub fn rel_tensor_to(ra: &Relation, rb: &Relation, depth: usize) -> Relation {
    combine(ra, rb, false, depth)
}

pub fn rel_lolli(ra: &Relation, rb: &Relation) -> Relation {
    rel_lolli_to(ra, rb, ra.left.depth_bound() + rb.left.depth_bound())
}

pub fn rel_lolli_to(ra: &Relation, rb: &Relation, depth: usize) -> Relation {
    combine(ra, rb, true, depth)
}

/// The order on relations over a fixed game pair: towards the environment
/// the smaller relation must absorb the larger (`S`-extensions at even
/// pairs stay in `R`), towards the system the reverse (`R`-extensions at
/// odd pairs stay in `S`).
pub fn rel_leq(r: &Relation, s: &Relation) -> Result<bool, RelationError> {
    same_frame(r, s)?;
    let mut stack = vec![(ROOT, ROOT, 0usize)];
    while let Some((nr, ns, len)) = stack.pop() {
        if len % 2 == 0 {
            for (key, cs) in s.pairs.children(ns) {
                match r.pairs.child(nr, key) {
                    None => return Ok(false),
                    Some(cr) => stack.push((cr, cs, len + 1)),
                }
            }
        } else {
            for (key, cr) in r.pairs.children(nr) {
                match s.pairs.child(ns, key) {
                    None => return Ok(false),
                    Some(cs) => stack.push((cr, cs, len + 1)),
                }
            }
        }
    }
    Ok(true)
}

/// The order as originally given: `R ≤ S` when the identity strategies are
/// related from `R` to `S`. `rel_leq` is the direct characterization; this
/// is the definitional form the characterization is checked against.
pub fn definitional_leq(r: &Relation, s: &Relation) -> Result<bool, RelationError> {
    same_frame(r, s)?;
    let arrow = rel_lolli(r, s);
    let id_left = Morphism::identity(&r.left);
    let id_right = Morphism::identity(&r.right);
    Ok(lift_check(&arrow, id_left.strategy(), id_right.strategy())?.holds())
}

/// The meet of a family of relations, built inductively: an extension at an
/// even pair needs some relation to support it, an extension at an odd pair
/// must be followed by every relation that supported the odd pair. The
/// result is the greatest lower bound under `rel_leq` — which is not the
/// intersection.
pub fn rel_meet(rels: &[Relation]) -> Result<Relation, RelationError> {
    let first = rels.first().ok_or(RelationError::EmptyMeet)?;
    for r in rels {
        same_frame(first, r)?;
    }
    let mut pairs = Trie::new();
    let start: Vec<Option<usize>> = vec![Some(ROOT); rels.len()];
    let mut stack = vec![(start, ROOT, 0usize)];
    while let Some((cursors, out, len)) = stack.pop() {
        if len % 2 == 0 {
            let mut keys: BTreeSet<(MoveId, MoveId)> = BTreeSet::new();
            for (i, c) in cursors.iter().enumerate() {
                if let Some(n) = c {
                    for (key, _) in rels[i].pairs.children(*n) {
                        keys.insert(key.clone());
                    }
                }
            }
            for key in keys {
                let next: Vec<Option<usize>> = cursors
                    .iter()
                    .enumerate()
                    .map(|(i, c)| c.and_then(|n| rels[i].pairs.child(n, &key)))
                    .collect();
                let out2 = pairs.child_or_insert(out, &key);
                stack.push((next, out2, len + 1));
            }
        } else {
            let alive: Vec<usize> = (0..rels.len()).filter(|i| cursors[*i].is_some()).collect();
            let mut keys: Vec<(MoveId, MoveId)> = Vec::new();
            if let Some(&i0) = alive.first() {
                for (key, _) in rels[i0].pairs.children(cursors[i0].unwrap()) {
                    if alive
                        .iter()
                        .all(|&i| rels[i].pairs.child(cursors[i].unwrap(), key).is_some())
                    {
                        keys.push(key.clone());
                    }
                }
            }
            for key in keys {
                let next: Vec<Option<usize>> = cursors
                    .iter()
                    .enumerate()
                    .map(|(i, c)| c.and_then(|n| rels[i].pairs.child(n, &key)))
                    .collect();
                let out2 = pairs.child_or_insert(out, &key);
                stack.push((next, out2, len + 1));
            }
        }
    }
    Ok(Relation { left: first.left.clone(), right: first.right.clone(), pairs })
}

/// How many relations exist on the pair — the number of prefix-closed
/// subtrees of the full length-matched pair tree. `None` on overflow.
pub fn count_relations(left: &Game, right: &Game) -> Option<u128> {
    let full = Relation::full(left, right);
    fn below(trie: &Trie<(MoveId, MoveId)>, node: usize) -> Option<u128> {
        let mut product: u128 = 1;
        for (_, child) in trie.children(node) {
            product = product.checked_mul(1u128.checked_add(below(trie, child)?)?)?;
        }
        Some(product)
    }
    below(&full.pairs, ROOT)
}

/// Every relation on the pair, by enumerating prefix-closed subtrees of the
/// full relation. Refuses politely when there are more than `max`.
pub fn enumerate_relations(
    left: &Game,
    right: &Game,
    max: usize,
) -> Result<Vec<Relation>, RelationError> {
    let count = count_relations(left, right).unwrap_or(u128::MAX);
    if count > max as u128 {
        return Err(RelationError::TooManyRelations { count, max });
    }
    let full = Relation::full(left, right);
    // All prefix-closed selections below `node`, each as a list of key
    // sequences relative to the node (the node itself is implicit).
    fn selections(
        trie: &Trie<(MoveId, MoveId)>,
        node: usize,
    ) -> Vec<Vec<Vec<(MoveId, MoveId)>>> {
        let mut acc: Vec<Vec<Vec<(MoveId, MoveId)>>> = vec![Vec::new()];
        for (key, child) in trie.children(node) {
            let mut options: Vec<Option<Vec<Vec<(MoveId, MoveId)>>>> = vec![None];
            for sub in selections(trie, child) {
                options.push(Some(sub));
            }
            let mut next = Vec::new();
            for chosen in &acc {
                for option in &options {
                    let mut grown = chosen.clone();
                    if let Some(sub) = option {
                        grown.push(vec![key.clone()]);
                        for seq in sub {
                            let mut extended = vec![key.clone()];
                            extended.extend(seq.iter().cloned());
                            grown.push(extended);
                        }
                    }
                    next.push(grown);
                }
            }
            acc = next;
        }
        acc
    }
    Ok(selections(&full.pairs, ROOT)
        .into_iter()
        .map(|seqs| Relation::from_seqs(left, right, &seqs))
        .collect())
}

/// One instance of the cut law: if the first pair of strategies is related
/// from `R` to `S` and the second from `S` to `T`, the composites must be
/// related from `R` to `T`. Returns the truth of the implication.
pub fn spec_structure_compose_check(
    r: &Relation,
    s: &Relation,
    t: &Relation,
    sigma: &Morphism,
    sigma2: &Morphism,
    tau: &Morphism,
    tau2: &Morphism,
) -> Result<bool, RelationError> {
    let chains = sigma.dom() == &r.left
        && sigma.cod() == &s.left
        && sigma2.dom() == &s.left
        && sigma2.cod() == &t.left
        && tau.dom() == &r.right
        && tau.cod() == &s.right
        && tau2.dom() == &s.right
        && tau2.cod() == &t.right;
    if !chains {
        return Err(RelationError::DomainMismatch);
    }
    let first = lift_check(&rel_lolli(r, s), sigma.strategy(), tau.strategy())?.holds();
    let second = lift_check(&rel_lolli(s, t), sigma2.strategy(), tau2.strategy())?.holds();
    if !(first && second) {
        return Ok(true);
    }
    let left = compose_hiding(sigma, sigma2)?;
    let right = compose_hiding(tau, tau2)?;
    Ok(lift_check(&rel_lolli(r, t), left.strategy(), right.strategy())?.holds())
}

/// Interpret a one-variable expression on a relation, reading tensor and
/// arrow relationally and constants as their identity relations. Frames are
/// materialised exactly as the game-level instantiation does, so the result
/// lives over the capped compound games.
pub fn rel_apply(ftype: &VarType, rel: &Relation, depth: usize) -> Result<Relation, RelationError> {
    if ftype.arity() > 1 {
        return Err(RelationError::TooPolymorphic);
    }
    rel_interp(ftype, rel, depth)
}

fn rel_interp(ftype: &VarType, rel: &Relation, depth: usize) -> Result<Relation, RelationError> {
    let cap = |g: &Game| if g.depth_bound() > depth { g.truncate(depth) } else { g.clone() };
    match ftype {
        VarType::Var(_) => {
            if rel.left.depth_bound() <= depth && rel.right.depth_bound() <= depth {
                return Ok(rel.clone());
            }
            let seqs: Vec<_> =
                rel.pairs.iter_seqs().into_iter().filter(|s| s.len() <= depth).collect();
            Ok(Relation::from_seqs(&cap(&rel.left), &cap(&rel.right), &seqs))
        }
        VarType::Unit => Ok(Relation::diagonal(&Game::unit())),
        VarType::Const(g) => Ok(Relation::diagonal(&cap(g))),
        VarType::Tensor(a, b) => {
            Ok(rel_tensor_to(&rel_interp(a, rel, depth)?, &rel_interp(b, rel, depth)?, depth))
        }
        VarType::Lolli(a, b) => {
            Ok(rel_lolli_to(&rel_interp(a, rel, depth)?, &rel_interp(b, rel, depth)?, depth))
        }
        VarType::With(_, _) => Err(RelationError::NoWithAction),
    }
}

/// The quantifier as a meet: interpret the expression relationally at each
/// instance's identity relation, view the results over the universe
/// instantiation, and take the meet. The registered property at each
/// instance is its diagonal, which makes this the unary form of the meet
/// construction.
pub fn parametric_pi(
    ftype: &VarType,
    family: &InstanceFamily,
    depth: usize,
) -> Result<Relation, RelationError> {
    if ftype.arity() > 1 {
        return Err(RelationError::TooPolymorphic);
    }
    let fu = ftype.apply_to(&[family.universe_game().clone()], depth)?;
    let mut images = Vec::new();
    for instance in family.instances() {
        let image = rel_apply(ftype, &Relation::diagonal(instance), depth)?;
        images.push(image.reframed(&fu, &fu)?);
    }
    rel_meet(&images)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::Polarity;
    use crate::poly::build_pi;
    use crate::strategy::{enumerate_strategies, EnumOpts, Strategy};
    use crate::winning::{admits_lasso, lasso_wins, Lasso, WinningSpec};
    use proptest::prelude::*;

    fn mv(name: &str) -> MoveId {
        MoveId::base(name)
    }

    fn boolean_strategies() -> Vec<Strategy> {
        enumerate_strategies(&Game::boolean(), &EnumOpts::default()).unwrap()
    }

    fn tt_hat() -> Strategy {
        Strategy::new(&Game::boolean(), &[vec![mv("*"), mv("tt")]]).unwrap()
    }

    fn ff_hat() -> Strategy {
        Strategy::new(&Game::boolean(), &[vec![mv("*"), mv("ff")]]).unwrap()
    }

    fn chain_game() -> Game {
        Game::flat(
            vec![
                (mv("a1"), Polarity::O),
                (mv("b1"), Polarity::P),
                (mv("a2"), Polarity::O),
            ],
            vec![vec![mv("a1"), mv("b1"), mv("a2")]],
        )
        .unwrap()
    }

    fn assert_well_formed(rel: &Relation) {
        for (s, t) in rel.pair_list() {
            assert_eq!(s.len(), t.len(), "length preservation");
            assert!(rel.left().plays().contains(&s), "left components are plays");
            assert!(rel.right().plays().contains(&t), "right components are plays");
            if !s.is_empty() {
                assert!(
                    rel.contains(&s[..s.len() - 1], &t[..t.len() - 1]),
                    "prefix closure"
                );
            }
        }
    }

    #[test]
    fn construction_rejects_ragged_and_gappy_pair_sets() {
        let b = Game::boolean();
        let ragged = Relation::new(&b, &b, &[(vec![mv("*")], vec![])]);
        assert!(matches!(ragged, Err(RelationError::LengthMismatch { .. })));

        let deep = (vec![mv("*"), mv("tt")], vec![mv("*"), mv("ff")]);
        let gappy = Relation::new(&b, &b, &[deep.clone()]);
        assert!(matches!(gappy, Err(RelationError::PrefixClosureViolation { .. })));

        let healed = Relation::generated(&b, &b, &[deep]).unwrap();
        assert!(healed.contains(&[mv("*")], &[mv("*")]));
        assert_well_formed(&healed);

        let foreign = Relation::new(&b, &b, &[(vec![mv("tt")], vec![mv("tt")])]);
        assert!(matches!(foreign, Err(RelationError::ForeignPlay { .. })));
    }

    #[test]
    fn the_diagonal_relates_every_strategy_to_itself() {
        let b = Game::boolean();
        let diag = Relation::diagonal(&b);
        for strat in boolean_strategies() {
            assert!(lift_check(&diag, &strat, &strat).unwrap().holds());
        }
    }

    #[test]
    fn the_full_relation_relates_the_two_answers() {
        let b = Game::boolean();
        let full = Relation::full(&b, &b);
        assert_eq!(full.pair_count(), 1 + 1 + 4);
        assert_well_formed(&full);
        assert!(lift_check(&full, &tt_hat(), &ff_hat()).unwrap().holds());
    }

    #[test]
    fn an_unresponsive_partner_breaks_the_domain_clause() {
        let b = Game::boolean();
        let full = Relation::full(&b, &b);
        let bottom = Strategy::bottom(&b);
        let verdict = lift_check(&full, &tt_hat(), &bottom).unwrap();
        let witness = verdict.witness().expect("the lifting must fail");
        assert_eq!(witness.clause, LiftClause::Domain);
        assert!(witness.left_prefix.is_empty());
        assert!(witness.right_prefix.is_empty());
        assert_eq!(witness.left_move, mv("*"));
        assert_eq!(witness.right_move, mv("*"));
    }

    #[test]
    fn a_response_that_leaves_the_relation_is_reported() {
        let b = Game::boolean();
        let same_answer = Relation::generated(
            &b,
            &b,
            &[(vec![mv("*"), mv("tt")], vec![mv("*"), mv("tt")])],
        )
        .unwrap();
        let verdict = lift_check(&same_answer, &tt_hat(), &ff_hat()).unwrap();
        let witness = verdict.witness().expect("answers diverge out of the relation");
        assert_eq!(witness.clause, LiftClause::Response);
        assert!(witness.left_prefix.is_empty());
        assert_eq!(witness.left_move, mv("*"));
        assert!(witness.describe().contains("leave the relation"));
    }

    #[test]
    fn tag_synchronisation_excludes_shuffled_interleavings() {
        let b = Game::boolean();
        let diag = Relation::diagonal(&b);
        let pair = rel_tensor(&diag, &diag);
        assert_well_formed(&pair);

        let left_first = vec![
            MoveId::tagged(&[Tag::L], "*"),
            MoveId::tagged(&[Tag::L], "tt"),
            MoveId::tagged(&[Tag::R], "*"),
            MoveId::tagged(&[Tag::R], "tt"),
        ];
        let right_first = vec![
            MoveId::tagged(&[Tag::R], "*"),
            MoveId::tagged(&[Tag::R], "tt"),
            MoveId::tagged(&[Tag::L], "*"),
            MoveId::tagged(&[Tag::L], "tt"),
        ];
        assert!(pair.left().plays().contains(&left_first));
        assert!(pair.right().plays().contains(&right_first));
        assert!(pair.contains(&left_first, &left_first));
        assert!(pair.contains(&right_first, &right_first));
        // Equal projections on both components, but the components were
        // visited in different orders.
        assert!(!pair.contains(&left_first, &right_first));
    }

    #[test]
    fn the_arrow_relation_on_diagonals_is_the_diagonal() {
        let diag = Relation::diagonal(&Game::boolean());
        let arrow = rel_lolli(&diag, &diag);
        let expected = Relation::diagonal(&Game::lolli(&Game::boolean(), &Game::boolean()));
        assert_eq!(arrow, expected);
        assert_well_formed(&arrow);
    }

    #[test]
    fn seventeen_relations_live_on_the_boolean_square() {
        let b = Game::boolean();
        assert_eq!(count_relations(&b, &b), Some(17));
        let all = enumerate_relations(&b, &b, 64).unwrap();
        assert_eq!(all.len(), 17);
        for rel in &all {
            assert_well_formed(rel);
        }
        for (i, r) in all.iter().enumerate() {
            for s in &all[i + 1..] {
                assert_ne!(r, s, "enumerated relations are distinct");
            }
        }
        let capped = enumerate_relations(&b, &b, 10);
        assert!(matches!(
            capped,
            Err(RelationError::TooManyRelations { count: 17, max: 10 })
        ));
    }

    #[test]
    fn the_order_agrees_with_identity_lifting_on_every_small_relation() {
        let b = Game::boolean();
        for (left, right) in [(b.clone(), b.clone()), (chain_game(), b)] {
            let all = enumerate_relations(&left, &right, 64).unwrap();
            for r in &all {
                for s in &all {
                    assert_eq!(
                        rel_leq(r, s).unwrap(),
                        definitional_leq(r, s).unwrap(),
                        "characterised and definitional orders disagree"
                    );
                }
            }
        }
    }

    #[test]
    fn the_order_is_a_partial_order_on_the_boolean_square() {
        let b = Game::boolean();
        let all = enumerate_relations(&b, &b, 64).unwrap();
        for r in &all {
            assert!(rel_leq(r, r).unwrap());
        }
        for r in &all {
            for s in &all {
                if rel_leq(r, s).unwrap() && rel_leq(s, r).unwrap() {
                    assert_eq!(r, s, "antisymmetry");
                }
                for t in &all {
                    if rel_leq(r, s).unwrap() && rel_leq(s, t).unwrap() {
                        assert!(rel_leq(r, t).unwrap(), "transitivity");
                    }
                }
            }
        }
    }

    #[test]
    fn meets_are_greatest_lower_bounds_on_the_boolean_square() {
        let b = Game::boolean();
        let all = enumerate_relations(&b, &b, 64).unwrap();
        for r in &all {
            assert_eq!(&rel_meet(std::slice::from_ref(r)).unwrap(), r);
        }
        for r in &all {
            for s in &all {
                let meet = rel_meet(&[r.clone(), s.clone()]).unwrap();
                assert_well_formed(&meet);
                assert!(rel_leq(&meet, r).unwrap(), "meet is below the left input");
                assert!(rel_leq(&meet, s).unwrap(), "meet is below the right input");
                for candidate in &all {
                    if rel_leq(candidate, r).unwrap() && rel_leq(candidate, s).unwrap() {
                        assert!(
                            rel_leq(candidate, &meet).unwrap(),
                            "every common lower bound sits below the meet"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn the_quantifier_is_the_meet_of_its_instance_diagonals() {
        let two_arg = VarType::lolli(VarType::var(), VarType::lolli(VarType::var(), VarType::var()));
        let family = InstanceFamily::flat_all(&["a"], 2).unwrap();
        let depth = 4;
        let meet = parametric_pi(&two_arg, &family, depth).unwrap();
        let pi = build_pi(&two_arg, &family, depth).unwrap();
        let direct = Relation::diagonal(pi.game()).reframed(meet.left(), meet.right()).unwrap();
        assert_eq!(meet, direct);
    }

    #[test]
    fn adding_a_degenerate_property_does_not_move_the_meet() {
        let two_arg = VarType::lolli(VarType::var(), VarType::lolli(VarType::var(), VarType::var()));
        let family = InstanceFamily::flat_all(&["a"], 2).unwrap();
        let depth = 4;
        let fu = two_arg.apply_to(&[family.universe_game().clone()], depth).unwrap();
        let mut images = Vec::new();
        for instance in family.instances() {
            let image = rel_apply(&two_arg, &Relation::diagonal(instance), depth).unwrap();
            images.push(image.reframed(&fu, &fu).unwrap());
        }
        let plain = rel_meet(&images).unwrap();
        // The empty-pair relation is below everything yet supports nothing,
        // so the meet absorbs it — the order is not inclusion.
        images.push(Relation::new(&fu, &fu, &[]).unwrap());
        let padded = rel_meet(&images).unwrap();
        assert_eq!(plain, padded);
    }

    #[test]
    fn composition_respects_relations_across_the_cut() {
        let b = Game::boolean();
        let diag = Relation::diagonal(&b);
        let id = Morphism::identity(&b);
        assert!(lift_check(&rel_lolli(&diag, &diag), id.strategy(), id.strategy())
            .unwrap()
            .holds());
        assert!(
            spec_structure_compose_check(&diag, &diag, &diag, &id, &id, &id, &id).unwrap()
        );

        let skewed = Relation::new(&Game::unit(), &b, &[]).unwrap();
        let from_unit = Morphism::terminal(&b);
        let err = spec_structure_compose_check(
            &skewed, &diag, &diag, &from_unit, &id, &id, &id,
        );
        assert!(matches!(err, Err(RelationError::DomainMismatch)));
    }

    #[test]
    fn winning_meets_coincide_with_winning_intersections() {
        let stream = Game::stream(4);
        let lassos = vec![
            Lasso::new(vec![], vec![mv("*"), mv("0")]).unwrap(),
            Lasso::new(vec![], vec![mv("*"), mv("1")]).unwrap(),
            Lasso::new(vec![mv("*"), mv("0")], vec![mv("*"), mv("1")]).unwrap(),
            Lasso::new(vec![mv("*"), mv("1")], vec![mv("*"), mv("0"), mv("*"), mv("1")]).unwrap(),
        ];
        for lasso in &lassos {
            assert!(admits_lasso(&stream, lasso));
        }
        let specs = vec![
            WinningSpec::All,
            WinningSpec::Never,
            WinningSpec::Atom("visits:0".to_string()),
            WinningSpec::Atom("loop-contains:1".to_string()),
        ];
        for i in 0..specs.len() {
            for j in 0..specs.len() {
                let meet = WinningSpec::Meet(vec![specs[i].clone(), specs[j].clone()]);
                for lasso in &lassos {
                    let joint = lasso_wins(&meet, &stream, lasso).unwrap();
                    let split = lasso_wins(&specs[i], &stream, lasso).unwrap()
                        && lasso_wins(&specs[j], &stream, lasso).unwrap();
                    assert_eq!(joint, split, "a meet of winning sets is their intersection");
                }
            }
        }
    }

    proptest! {
        #[test]
        fn the_cut_law_survives_a_sweep_of_boolean_pairs(
            si in 0usize..12,
            s2i in 0usize..12,
            ti in 0usize..12,
            t2i in 0usize..12,
            ri in 0usize..3,
            mi in 0usize..3,
            oi in 0usize..3,
        ) {
            let b = Game::boolean();
            let hom = Game::lolli(&b, &b);
            let strategies = enumerate_strategies(&hom, &EnumOpts::default()).unwrap();
            prop_assert_eq!(strategies.len(), 12);
            let rels = [
                Relation::diagonal(&b),
                Relation::full(&b, &b),
                Relation::new(&b, &b, &[]).unwrap(),
            ];
            let as_morphism = |i: usize| {
                Morphism::new(&b, &b, strategies[i].clone()).unwrap()
            };
            let ok = spec_structure_compose_check(
                &rels[ri], &rels[mi], &rels[oi],
                &as_morphism(si), &as_morphism(s2i),
                &as_morphism(ti), &as_morphism(t2i),
            ).unwrap();
            prop_assert!(ok, "related cuts must compose to related cuts");
        }

        #[test]
        fn generated_relations_always_pass_strict_validation(
            mask in 0u32..16,
        ) {
            let b = Game::boolean();
            let answers = ["tt", "ff"];
            let mut pairs = Vec::new();
            for (k, (x, y)) in answers
                .iter()
                .flat_map(|x| answers.iter().map(move |y| (*x, *y)))
                .enumerate()
            {
                if mask & (1 << k) != 0 {
                    pairs.push((vec![mv("*"), mv(x)], vec![mv("*"), mv(y)]));
                }
            }
            let rel = Relation::generated(&b, &b, &pairs).unwrap();
            let strict = Relation::new(&b, &b, &rel.pair_list()).unwrap();
            prop_assert_eq!(rel, strict);
        }
    }
}
