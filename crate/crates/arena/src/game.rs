//! Games as alternating dialogue trees.
//!
//! A game is a set of moves, an Opponent/Player labelling, and a non-empty
//! prefix-closed set of alternating positions in which Opponent always moves
//! first. Positions are kept in a trie, so prefix closure is structural
//! rather than something we have to re-check.
//!
//! Compound games (`tensor`, `lolli`, `with`) tag each component's moves with
//! the side they came from, so a move is a name plus a path of tags. The
//! interleaving disciplines (who may switch component when) are not imposed
//! separately: they fall out of alternation plus per-component legality, and
//! [`switching_states`] exists to observe and diagnose them.
//!
//! Every game carries a depth bound: the trie is complete up to that length.
//! Games whose rules continue past the bound (streams, the token universe,
//! compounds of these) also answer [`Game::admits`] for longer candidate
//! plays by structural recursion, which is what the winning-condition layer
//! uses to validate infinite plays presented as lassos.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Who moves: Opponent (environment) or Player (the strategy's side).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Polarity {
    O,
    P,
}

impl Polarity {
    pub fn flip(self) -> Polarity {
        match self {
            Polarity::O => Polarity::P,
            Polarity::P => Polarity::O,
        }
    }

    /// Which side is due to move at a position of the given length.
    pub fn mover_at(len: usize) -> Polarity {
        if len % 2 == 0 {
            Polarity::O
        } else {
            Polarity::P
        }
    }
}

impl fmt::Display for Polarity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Polarity::O => write!(f, "O"),
            Polarity::P => write!(f, "P"),
        }
    }
}

/// Component tag: left or right operand of a binary connective.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Tag {
    L,
    R,
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tag::L => write!(f, "L"),
            Tag::R => write!(f, "R"),
        }
    }
}

/// A move: a base name plus the path of component tags that locates it in a
/// compound game. Base games use the empty path. Ordering is lexicographic on
/// (path, name), which is the canonical order used everywhere output must be
/// reproducible.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MoveId {
    pub path: Vec<Tag>,
    pub name: String,
}

impl MoveId {
    pub fn base(name: &str) -> MoveId {
        MoveId { path: Vec::new(), name: name.to_string() }
    }

    pub fn tagged(path: &[Tag], name: &str) -> MoveId {
        MoveId { path: path.to_vec(), name: name.to_string() }
    }

    /// Prefix one more tag onto the path (used when injecting into a compound).
    pub fn push_front(&self, tag: Tag) -> MoveId {
        let mut path = Vec::with_capacity(self.path.len() + 1);
        path.push(tag);
        path.extend_from_slice(&self.path);
        MoveId { path, name: self.name.clone() }
    }

    /// Strip a leading path prefix, if present.
    pub fn strip_prefix(&self, prefix: &[Tag]) -> Option<MoveId> {
        if self.path.len() >= prefix.len() && self.path[..prefix.len()] == *prefix {
            Some(MoveId { path: self.path[prefix.len()..].to_vec(), name: self.name.clone() })
        } else {
            None
        }
    }

    /// Parse the textual form produced by `Display`: path segments and the
    /// name separated by `/`, e.g. `L/R/tt` or plain `tt`.
    pub fn parse(s: &str) -> Result<MoveId, GameError> {
        let mut parts: Vec<&str> = s.split('/').collect();
        let name = parts.pop().unwrap_or("");
        if name.is_empty() {
            return Err(GameError::BadMoveRef(s.to_string()));
        }
        let mut path = Vec::with_capacity(parts.len());
        for p in parts {
            match p {
                "L" => path.push(Tag::L),
                "R" => path.push(Tag::R),
                _ => return Err(GameError::BadMoveRef(s.to_string())),
            }
        }
        Ok(MoveId { path, name: name.to_string() })
    }
}

impl fmt::Display for MoveId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for t in &self.path {
            write!(f, "{t}/")?;
        }
        write!(f, "{}", self.name)
    }
}

/// A position: a finite sequence of moves.
pub type Play = Vec<MoveId>;

/// Render a play for messages and reports: moves joined by `·`, `ε` if empty.
pub fn fmt_play(play: &[MoveId]) -> String {
    if play.is_empty() {
        "ε".to_string()
    } else {
        play.iter().map(|m| m.to_string()).collect::<Vec<_>>().join("·")
    }
}

/// Keep the moves whose path starts with `prefix`, with the prefix stripped:
/// the view of a play from inside one component.
pub fn restrict_play(play: &[MoveId], prefix: &[Tag]) -> Play {
    play.iter().filter_map(|m| m.strip_prefix(prefix)).collect()
}

/// Rewrite each move's path by the first rule whose left side prefixes it.
/// Rules with longer left sides should come first if they overlap.
pub fn relabel_play(play: &[MoveId], rules: &[(Vec<Tag>, Vec<Tag>)]) -> Play {
    play.iter()
        .map(|m| {
            for (from, to) in rules {
                if m.path.len() >= from.len() && m.path[..from.len()] == **from {
                    let mut path = to.clone();
                    path.extend_from_slice(&m.path[from.len()..]);
                    return MoveId { path, name: m.name.clone() };
                }
            }
            m.clone()
        })
        .collect()
}

/// A prefix-closed set of sequences stored as a trie. Children are kept in a
/// `BTreeMap`, so iteration order is the canonical move order and two tries
/// with the same contents enumerate identically.
#[derive(Debug, Clone)]
pub struct Trie<K: Ord + Clone> {
    nodes: Vec<TrieNode<K>>,
}

#[derive(Debug, Clone)]
struct TrieNode<K: Ord + Clone> {
    children: BTreeMap<K, usize>,
}

pub const ROOT: usize = 0;

impl<K: Ord + Clone> Trie<K> {
    pub fn new() -> Self {
        Trie { nodes: vec![TrieNode { children: BTreeMap::new() }] }
    }

    /// Insert a sequence together with all of its prefixes. Returns the node
    /// of the full sequence.
    pub fn insert(&mut self, seq: &[K]) -> usize {
        let mut at = ROOT;
        for k in seq {
            at = self.child_or_insert(at, k);
        }
        at
    }

    pub fn child_or_insert(&mut self, node: usize, key: &K) -> usize {
        if let Some(&c) = self.nodes[node].children.get(key) {
            return c;
        }
        let fresh = self.nodes.len();
        self.nodes.push(TrieNode { children: BTreeMap::new() });
        self.nodes[node].children.insert(key.clone(), fresh);
        fresh
    }

    pub fn child(&self, node: usize, key: &K) -> Option<usize> {
        self.nodes[node].children.get(key).copied()
    }

    pub fn node_of(&self, seq: &[K]) -> Option<usize> {
        let mut at = ROOT;
        for k in seq {
            at = self.child(at, k)?;
        }
        Some(at)
    }

    pub fn contains(&self, seq: &[K]) -> bool {
        self.node_of(seq).is_some()
    }

    pub fn children(&self, node: usize) -> impl Iterator<Item = (&K, usize)> {
        self.nodes[node].children.iter().map(|(k, &v)| (k, v))
    }

    pub fn is_leaf(&self, node: usize) -> bool {
        self.nodes[node].children.is_empty()
    }

    /// Number of stored sequences, the empty one included.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.len() == 1
    }

    /// All sequences in canonical depth-first order (ε first).
    pub fn iter_seqs(&self) -> Vec<Vec<K>> {
        let mut out = Vec::with_capacity(self.nodes.len());
        let mut prefix = Vec::new();
        self.walk(ROOT, &mut prefix, &mut out);
        out
    }

    fn walk(&self, node: usize, prefix: &mut Vec<K>, out: &mut Vec<Vec<K>>) {
        out.push(prefix.clone());
        for (k, c) in &self.nodes[node].children {
            prefix.push(k.clone());
            self.walk(*c, prefix, out);
            prefix.pop();
        }
    }

    /// Longest stored sequence length.
    pub fn depth(&self) -> usize {
        fn go<K: Ord + Clone>(t: &Trie<K>, node: usize) -> usize {
            t.nodes[node]
                .children
                .values()
                .map(|&c| 1 + go(t, c))
                .max()
                .unwrap_or(0)
        }
        go(self, ROOT)
    }

    /// Structural equality, independent of node numbering.
    fn same(&self, a: usize, other: &Self, b: usize) -> bool {
        let na = &self.nodes[a];
        let nb = &other.nodes[b];
        if na.children.len() != nb.children.len() {
            return false;
        }
        na.children.iter().zip(nb.children.iter()).all(|((ka, &ca), (kb, &cb))| {
            ka == kb && self.same(ca, other, cb)
        })
    }
}

impl<K: Ord + Clone> PartialEq for Trie<K> {
    fn eq(&self, other: &Self) -> bool {
        self.same(ROOT, other, ROOT)
    }
}

impl<K: Ord + Clone> Eq for Trie<K> {}

impl<K: Ord + Clone> Default for Trie<K> {
    fn default() -> Self {
        Self::new()
    }
}

/// The position set of a game.
pub type PlaySet = Trie<MoveId>;

/// How a game's positions continue past the materialised depth bound.
///
/// `Atomic` games are exactly their trie. `Saturated` games allow every
/// alternating sequence over their alphabet at any length (streams, the token
/// universe). Compounds defer to their components.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Shape {
    Atomic,
    Saturated,
    Tensor(Game, Game),
    Lolli(Game, Game),
    With(Game, Game),
}

#[derive(Debug, PartialEq, Eq)]
struct GameInner {
    moves: BTreeMap<MoveId, Polarity>,
    plays: PlaySet,
    depth_bound: usize,
    shape: Shape,
}

/// A game. Cheap to clone (the structure is shared), compared structurally.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Game {
    inner: Arc<GameInner>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GameError {
    #[error("play {play} does not alternate: move at index {index} has the wrong polarity")]
    NonAlternating { play: String, index: usize },
    #[error("unknown move {0}")]
    UnknownMove(String),
    #[error("duplicate move {0}")]
    DuplicateMove(String),
    #[error("the token alphabet is empty")]
    EmptyAlphabet,
    #[error("move reference {0:?} is malformed (expected e.g. \"tt\" or \"L/R/tt\")")]
    BadMoveRef(String),
    #[error("the play is not a position of this game")]
    PlayNotInGame,
    #[error("switching analysis applies to tensor and lolli games only")]
    NotCompound,
}

impl Game {
    fn from_parts(
        moves: BTreeMap<MoveId, Polarity>,
        plays: PlaySet,
        depth_bound: usize,
        shape: Shape,
    ) -> Game {
        Game { inner: Arc::new(GameInner { moves, plays, depth_bound, shape }) }
    }

    /// Build a base game from a labelled alphabet and a set of generating
    /// plays. Prefixes are filled in; alternation and move membership are
    /// checked.
    pub fn flat(
        moves: Vec<(MoveId, Polarity)>,
        generators: Vec<Play>,
    ) -> Result<Game, GameError> {
        let mut table = BTreeMap::new();
        for (m, pol) in moves {
            if table.insert(m.clone(), pol).is_some() {
                return Err(GameError::DuplicateMove(m.to_string()));
            }
        }
        let mut plays = PlaySet::new();
        let mut depth = 0;
        for g in &generators {
            for (i, m) in g.iter().enumerate() {
                let pol = table.get(m).ok_or_else(|| GameError::UnknownMove(m.to_string()))?;
                if *pol != Polarity::mover_at(i) {
                    return Err(GameError::NonAlternating { play: fmt_play(g), index: i });
                }
            }
            plays.insert(g);
            depth = depth.max(g.len());
        }
        Ok(Game::from_parts(table, plays, depth, Shape::Atomic))
    }

    /// Convenience form of [`Game::flat`] taking bare move names.
    pub fn flat_named(
        moves: &[(&str, Polarity)],
        generators: &[&[&str]],
    ) -> Result<Game, GameError> {
        let ms = moves.iter().map(|(n, p)| (MoveId::base(n), *p)).collect();
        let gs = generators
            .iter()
            .map(|g| g.iter().map(|n| MoveId::base(n)).collect())
            .collect();
        Game::flat(ms, gs)
    }

    /// The boolean game: one question `*`, two answers `tt`/`ff`.
    pub fn boolean() -> Game {
        Game::flat_named(
            &[("*", Polarity::O), ("tt", Polarity::P), ("ff", Polarity::P)],
            &[&["*", "tt"], &["*", "ff"]],
        )
        .expect("boolean game is well formed")
    }

    /// The one-position game with no moves; the unit of `tensor`.
    pub fn unit() -> Game {
        Game::flat(Vec::new(), Vec::new()).expect("unit game is well formed")
    }

    /// The bit-stream game, materialised to `depth`: Opponent repeatedly asks
    /// `*`, Player answers `0` or `1`, forever. Positions past the bound stay
    /// legal ([`Game::admits`]), which is what lassos are checked against.
    pub fn stream(depth: usize) -> Game {
        let moves: BTreeMap<MoveId, Polarity> = [
            (MoveId::base("*"), Polarity::O),
            (MoveId::base("0"), Polarity::P),
            (MoveId::base("1"), Polarity::P),
        ]
        .into_iter()
        .collect();
        let plays = saturate(&moves, depth);
        Game::from_parts(moves, plays, depth, Shape::Saturated)
    }

    /// The token universe truncated at `depth`: for each token `t` there is an
    /// Opponent move `R/t` and a Player move `L/t`, and every alternating
    /// sequence is a position. Every game over these tokens embeds into it.
    pub fn universe(tokens: &[&str], depth: usize) -> Result<Game, GameError> {
        if tokens.is_empty() {
            return Err(GameError::EmptyAlphabet);
        }
        let mut moves = BTreeMap::new();
        for t in tokens {
            if moves.insert(MoveId::tagged(&[Tag::L], t), Polarity::P).is_some() {
                return Err(GameError::DuplicateMove(t.to_string()));
            }
            moves.insert(MoveId::tagged(&[Tag::R], t), Polarity::O);
        }
        let plays = saturate(&moves, depth);
        Ok(Game::from_parts(moves, plays, depth, Shape::Saturated))
    }

    /// Both games side by side; Opponent alone may switch between them.
    pub fn tensor(a: &Game, b: &Game) -> Game {
        interleave(a, b, false, a.inner.depth_bound + b.inner.depth_bound)
    }

    /// The function-space game: the left component with polarity flipped,
    /// next to the right. Play starts on the right; Player alone switches.
    pub fn lolli(a: &Game, b: &Game) -> Game {
        interleave(a, b, true, a.inner.depth_bound + b.inner.depth_bound)
    }

    /// [`Game::tensor`] materialised only to `depth`. The positions stored
    /// are exactly the tensor's positions of that length or shorter; longer
    /// ones stay reachable through [`Game::admits`]. Deeply nested compounds
    /// are built this way because their full trees grow multiplicatively.
    pub fn tensor_to(a: &Game, b: &Game, depth: usize) -> Game {
        interleave(a, b, false, depth.min(a.inner.depth_bound + b.inner.depth_bound))
    }

    /// [`Game::lolli`] materialised only to `depth`; see [`Game::tensor_to`].
    pub fn lolli_to(a: &Game, b: &Game, depth: usize) -> Game {
        interleave(a, b, true, depth.min(a.inner.depth_bound + b.inner.depth_bound))
    }

    /// The choice game: the two trees glued at the root. The first move picks
    /// a component and the play never leaves it.
    pub fn with(a: &Game, b: &Game) -> Game {
        let depth = a.inner.depth_bound.max(b.inner.depth_bound);
        Game::with_to(a, b, depth)
    }

    /// [`Game::with`] materialised only to `depth`; see [`Game::tensor_to`].
    pub fn with_to(a: &Game, b: &Game, depth: usize) -> Game {
        let mut moves = BTreeMap::new();
        for (m, p) in &a.inner.moves {
            moves.insert(m.push_front(Tag::L), *p);
        }
        for (m, p) in &b.inner.moves {
            moves.insert(m.push_front(Tag::R), *p);
        }
        let depth = depth.min(a.inner.depth_bound.max(b.inner.depth_bound));
        let mut plays = PlaySet::new();
        for s in a.inner.plays.iter_seqs() {
            if s.len() > depth {
                continue;
            }
            let tagged: Play = s.iter().map(|m| m.push_front(Tag::L)).collect();
            plays.insert(&tagged);
        }
        for s in b.inner.plays.iter_seqs() {
            if s.len() > depth {
                continue;
            }
            let tagged: Play = s.iter().map(|m| m.push_front(Tag::R)).collect();
            plays.insert(&tagged);
        }
        Game::from_parts(moves, plays, depth, Shape::With(a.clone(), b.clone()))
    }

    /// The same game cut off at a smaller depth bound, as an atomic game.
    pub fn truncate(&self, depth: usize) -> Game {
        let mut plays = PlaySet::new();
        let mut stack = vec![(ROOT, 0usize, Vec::new())];
        while let Some((node, len, prefix)) = stack.pop() {
            plays.insert(&prefix);
            if len < depth {
                for (m, c) in self.inner.plays.children(node) {
                    let mut p = prefix.clone();
                    p.push(m.clone());
                    stack.push((c, len + 1, p));
                }
            }
        }
        Game::from_parts(
            self.inner.moves.clone(),
            plays,
            depth.min(self.inner.depth_bound),
            Shape::Atomic,
        )
    }

    pub fn moves(&self) -> impl Iterator<Item = (&MoveId, Polarity)> {
        self.inner.moves.iter().map(|(m, &p)| (m, p))
    }

    pub fn move_count(&self) -> usize {
        self.inner.moves.len()
    }

    pub fn polarity(&self, m: &MoveId) -> Option<Polarity> {
        self.inner.moves.get(m).copied()
    }

    pub fn plays(&self) -> &PlaySet {
        &self.inner.plays
    }

    pub fn depth_bound(&self) -> usize {
        self.inner.depth_bound
    }

    pub fn shape(&self) -> &Shape {
        &self.inner.shape
    }

    /// The number of positions, ε included.
    pub fn play_count(&self) -> usize {
        self.inner.plays.len()
    }

    /// All positions in canonical order.
    pub fn all_plays(&self) -> Vec<Play> {
        self.inner.plays.iter_seqs()
    }

    /// The legal first moves.
    pub fn opening_moves(&self) -> Vec<MoveId> {
        self.inner.plays.children(ROOT).map(|(m, _)| m.clone()).collect()
    }

    /// Is the sequence a legal position? The materialised positions answer
    /// first; a miss falls through to the games whose rules continue past
    /// their materialisation (streams, and compounds around them — a
    /// compound's tree is clipped wherever a component's is), which answer
    /// by structural recursion. Atomic games are their trees.
    pub fn admits(&self, play: &[MoveId]) -> bool {
        self.inner.plays.contains(play) || self.admits_long(play)
    }

    fn admits_long(&self, play: &[MoveId]) -> bool {
        match &self.inner.shape {
            Shape::Atomic => false,
            Shape::Saturated => self.alternates(play),
            Shape::Tensor(a, b) | Shape::Lolli(a, b) => {
                self.alternates(play)
                    && a.admits(&restrict_play(play, &[Tag::L]))
                    && b.admits(&restrict_play(play, &[Tag::R]))
            }
            Shape::With(a, b) => {
                let l = restrict_play(play, &[Tag::L]);
                let r = restrict_play(play, &[Tag::R]);
                if !l.is_empty() && !r.is_empty() {
                    return false;
                }
                self.alternates(play) && a.admits(&l) && b.admits(&r)
            }
        }
    }

    fn alternates(&self, play: &[MoveId]) -> bool {
        play.iter().enumerate().all(|(i, m)| {
            self.inner.moves.get(m).copied() == Some(Polarity::mover_at(i))
        })
    }
}

/// All alternating sequences over an alphabet, up to a depth.
fn saturate(moves: &BTreeMap<MoveId, Polarity>, depth: usize) -> PlaySet {
    let mut plays = PlaySet::new();
    let mut frontier = vec![(ROOT, Vec::<MoveId>::new())];
    for len in 0..depth {
        let mover = Polarity::mover_at(len);
        let mut next = Vec::new();
        for (_, prefix) in &frontier {
            for (m, &p) in moves.iter() {
                if p == mover {
                    let mut s = prefix.clone();
                    s.push(m.clone());
                    let node = plays.insert(&s);
                    next.push((node, s));
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    plays
}

/// Shared builder for `tensor` and `lolli`: alternating interleavings whose
/// restrictions are positions of the components. `flip_left` flips the left
/// labelling (lolli). The switching behaviour is emergent, not imposed.
fn interleave(a: &Game, b: &Game, flip_left: bool, depth: usize) -> Game {
    let mut moves = BTreeMap::new();
    for (m, p) in &a.inner.moves {
        let p = if flip_left { p.flip() } else { *p };
        moves.insert(m.push_front(Tag::L), p);
    }
    for (m, p) in &b.inner.moves {
        moves.insert(m.push_front(Tag::R), *p);
    }
    let mut plays = PlaySet::new();
    // Depth-first over (new node, node in A, node in B, length).
    let mut stack = vec![(ROOT, ROOT, ROOT, 0usize)];
    while let Some((node, na, nb, len)) = stack.pop() {
        if len == depth {
            continue;
        }
        let mover = Polarity::mover_at(len);
        for (m, ca) in a.inner.plays.children(na) {
            let tagged = m.push_front(Tag::L);
            if moves[&tagged] == mover {
                let child = plays.child_or_insert(node, &tagged);
                stack.push((child, ca, nb, len + 1));
            }
        }
        for (m, cb) in b.inner.plays.children(nb) {
            let tagged = m.push_front(Tag::R);
            if moves[&tagged] == mover {
                let child = plays.child_or_insert(node, &tagged);
                stack.push((child, na, cb, len + 1));
            }
        }
    }
    let shape = if flip_left {
        Shape::Lolli(a.clone(), b.clone())
    } else {
        Shape::Tensor(a.clone(), b.clone())
    };
    Game::from_parts(moves, plays, depth, shape)
}

/// Is `a` a subgame of `b`: fewer moves (with the same labelling) and fewer
/// positions. This is the order along which variable types are monotone.
pub fn game_leq(a: &Game, b: &Game) -> bool {
    for (m, p) in &a.inner.moves {
        if b.inner.moves.get(m) != Some(p) {
            return false;
        }
    }
    trie_subset(&a.inner.plays, ROOT, &b.inner.plays, ROOT)
}

fn trie_subset(a: &PlaySet, na: usize, b: &PlaySet, nb: usize) -> bool {
    a.children(na).all(|(m, ca)| match b.child(nb, m) {
        Some(cb) => trie_subset(a, ca, b, cb),
        None => false,
    })
}

/// One entry of a switching trace: which side is due to move in each
/// component after a prefix (`P` on a lolli's left means that component is
/// waiting on Player).
pub type SwitchState = (Polarity, Polarity);

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SwitchVerdict {
    Ok,
    /// Moves `i` and `i+1` change component against the switching discipline.
    SwitchViolation(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwitchReport {
    /// State before any move, then after each move.
    pub states: Vec<SwitchState>,
    pub verdict: SwitchVerdict,
}

/// Trace the per-component turn states of a candidate sequence over a tensor
/// or lolli game, and diagnose illegal component switches. The sequence must
/// use known moves but need not be a position (that is the point: rejected
/// sequences get a diagnosis). If no switch rule is broken and the sequence
/// is still not a position, the error is `PlayNotInGame`.
pub fn switching_states(game: &Game, seq: &[MoveId]) -> Result<SwitchReport, GameError> {
    let is_lolli = match game.shape() {
        Shape::Tensor(_, _) => false,
        Shape::Lolli(_, _) => true,
        _ => return Err(GameError::NotCompound),
    };
    for m in seq {
        if game.polarity(m).is_none() {
            return Err(GameError::UnknownMove(m.to_string()));
        }
    }
    let state = |ls: usize, rs: usize| -> SwitchState {
        let left_even = ls % 2 == 0;
        let right_even = rs % 2 == 0;
        let left = if is_lolli {
            if left_even { Polarity::P } else { Polarity::O }
        } else if left_even {
            Polarity::O
        } else {
            Polarity::P
        };
        let right = if right_even { Polarity::O } else { Polarity::P };
        (left, right)
    };
    let mut states = Vec::with_capacity(seq.len() + 1);
    let (mut ls, mut rs) = (0usize, 0usize);
    states.push(state(ls, rs));
    for m in seq {
        match m.path.first() {
            Some(Tag::L) => ls += 1,
            Some(Tag::R) => rs += 1,
            None => return Err(GameError::UnknownMove(m.to_string())),
        }
        states.push(state(ls, rs));
    }
    // A component change between consecutive moves is legal only for
    // Opponent on a tensor and only for Player on a lolli; equivalently the
    // pair must be (P then O) for tensor, (O then P) for lolli.
    let mut verdict = SwitchVerdict::Ok;
    for i in 0..seq.len().saturating_sub(1) {
        if seq[i].path.first() != seq[i + 1].path.first() {
            let here = game.polarity(&seq[i]).unwrap();
            let next = game.polarity(&seq[i + 1]).unwrap();
            let legal = if is_lolli {
                here == Polarity::O && next == Polarity::P
            } else {
                here == Polarity::P && next == Polarity::O
            };
            if !legal {
                verdict = SwitchVerdict::SwitchViolation(i);
                break;
            }
        }
    }
    if verdict == SwitchVerdict::Ok && !game.admits(seq) {
        return Err(GameError::PlayNotInGame);
    }
    Ok(SwitchReport { states, verdict })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mv(name: &str) -> MoveId {
        MoveId::base(name)
    }

    #[test]
    fn boolean_game_has_exactly_the_four_positions() {
        let b = Game::boolean();
        let plays = b.all_plays();
        assert_eq!(plays.len(), 4);
        assert!(b.admits(&[]));
        assert!(b.admits(&[mv("*")]));
        assert!(b.admits(&[mv("*"), mv("tt")]));
        assert!(b.admits(&[mv("*"), mv("ff")]));
        assert!(!b.admits(&[mv("tt")]));
        assert!(!b.admits(&[mv("*"), mv("tt"), mv("*")]));
    }

    /// Independent count of stream positions: enumerate raw sequences over
    /// the alphabet and keep the alternating ones.
    fn stream_oracle(depth: usize) -> usize {
        let alphabet = ["*", "0", "1"];
        let pol = |n: &str| if n == "*" { Polarity::O } else { Polarity::P };
        let mut count = 0usize;
        let mut level: Vec<Vec<&str>> = vec![Vec::new()];
        for _ in 0..=depth {
            count += level.len();
            let mut next = Vec::new();
            for s in &level {
                if s.len() == depth {
                    continue;
                }
                for a in alphabet {
                    if pol(a) == Polarity::mover_at(s.len()) {
                        let mut t = s.clone();
                        t.push(a);
                        next.push(t);
                    }
                }
            }
            level = next;
        }
        count
    }

    #[test]
    fn stream_counts_match_direct_enumeration() {
        assert_eq!(stream_oracle(4), 10);
        assert_eq!(Game::stream(4).play_count(), 10);
        assert_eq!(Game::stream(6).play_count(), stream_oracle(6));
    }

    #[test]
    fn stream_admits_past_its_bound() {
        let s = Game::stream(4);
        let long = vec![mv("*"), mv("0"), mv("*"), mv("1"), mv("*"), mv("0")];
        assert_eq!(long.len(), 6);
        assert!(s.admits(&long));
        let bad = vec![mv("*"), mv("0"), mv("0"), mv("1"), mv("*"), mv("0")];
        assert!(!s.admits(&bad));
    }

    /// Independent enumeration of tensor positions: all sequences over the
    /// tagged alphabet, filtered by alternation and per-side legality.
    fn tensor_boolean_oracle() -> usize {
        #[derive(Clone)]
        struct S {
            seq: Vec<(Tag, &'static str)>,
        }
        let pol = |n: &str| if n == "*" { Polarity::O } else { Polarity::P };
        let legal_side = |side: &[&str]| -> bool {
            match side {
                [] => true,
                ["*"] => true,
                ["*", "tt"] | ["*", "ff"] => true,
                _ => false,
            }
        };
        let mut count = 0;
        let mut level = vec![S { seq: Vec::new() }];
        for _ in 0..=4 {
            count += level.len();
            let mut next = Vec::new();
            for s in &level {
                if s.seq.len() == 4 {
                    continue;
                }
                for tag in [Tag::L, Tag::R] {
                    for name in ["*", "tt", "ff"] {
                        if pol(name) != Polarity::mover_at(s.seq.len()) {
                            continue;
                        }
                        let mut t = s.clone();
                        t.seq.push((tag, name));
                        let left: Vec<&str> =
                            t.seq.iter().filter(|(g, _)| *g == Tag::L).map(|(_, n)| *n).collect();
                        let right: Vec<&str> =
                            t.seq.iter().filter(|(g, _)| *g == Tag::R).map(|(_, n)| *n).collect();
                        if legal_side(&left) && legal_side(&right) {
                            next.push(t);
                        }
                    }
                }
            }
            level = next;
        }
        count
    }

    #[test]
    fn tensor_of_booleans_matches_direct_enumeration() {
        let t = Game::tensor(&Game::boolean(), &Game::boolean());
        assert_eq!(tensor_boolean_oracle(), 19);
        assert_eq!(t.play_count(), 19);
        // Both components answered, in either order.
        let p = vec![
            MoveId::tagged(&[Tag::L], "*"),
            MoveId::tagged(&[Tag::L], "tt"),
            MoveId::tagged(&[Tag::R], "*"),
            MoveId::tagged(&[Tag::R], "ff"),
        ];
        assert!(t.admits(&p));
    }

    #[test]
    fn lolli_of_booleans_opens_on_the_right() {
        let g = Game::lolli(&Game::boolean(), &Game::boolean());
        assert_eq!(g.opening_moves(), vec![MoveId::tagged(&[Tag::R], "*")]);
        assert_eq!(g.play_count(), 11);
        // The strict identity dialogue: ask, interrogate, copy the answer.
        let p = vec![
            MoveId::tagged(&[Tag::R], "*"),
            MoveId::tagged(&[Tag::L], "*"),
            MoveId::tagged(&[Tag::L], "tt"),
            MoveId::tagged(&[Tag::R], "tt"),
        ];
        assert!(g.admits(&p));
    }

    #[test]
    fn flat_rejects_bad_generators() {
        let err = Game::flat_named(&[("a", Polarity::O)], &[&["a", "a"]]).unwrap_err();
        assert!(matches!(err, GameError::NonAlternating { index: 1, .. }));
        let err = Game::flat_named(&[("a", Polarity::O)], &[&["b"]]).unwrap_err();
        assert_eq!(err, GameError::UnknownMove("b".to_string()));
        let err = Game::flat_named(&[("a", Polarity::P)], &[&["a"]]).unwrap_err();
        assert!(matches!(err, GameError::NonAlternating { index: 0, .. }));
    }

    #[test]
    fn with_keeps_components_apart() {
        let w = Game::with(&Game::boolean(), &Game::boolean());
        assert!(w.admits(&[MoveId::tagged(&[Tag::L], "*"), MoveId::tagged(&[Tag::L], "tt")]));
        assert!(!w.admits(&[MoveId::tagged(&[Tag::L], "*"), MoveId::tagged(&[Tag::R], "tt")]));
        // Root-glued trees: ε plus the two component trees.
        assert_eq!(w.play_count(), 7);
    }

    #[test]
    fn universe_openings_are_the_opponent_tokens() {
        let u = Game::universe(&["a"], 2).unwrap();
        assert_eq!(u.opening_moves(), vec![MoveId::tagged(&[Tag::R], "a")]);
        assert_eq!(
            u.moves().map(|(m, p)| (m.to_string(), p)).collect::<Vec<_>>(),
            vec![("L/a".to_string(), Polarity::P), ("R/a".to_string(), Polarity::O)],
        );
        assert_eq!(Game::universe(&[], 2).unwrap_err(), GameError::EmptyAlphabet);
    }

    #[test]
    fn restriction_strips_the_component_prefix() {
        let p = vec![
            MoveId::tagged(&[Tag::R], "*"),
            MoveId::tagged(&[Tag::L], "*"),
            MoveId::tagged(&[Tag::L], "tt"),
            MoveId::tagged(&[Tag::R], "tt"),
        ];
        assert_eq!(restrict_play(&p, &[Tag::L]), vec![mv("*"), mv("tt")]);
        assert_eq!(restrict_play(&p, &[Tag::R]), vec![mv("*"), mv("tt")]);
    }

    #[test]
    fn switching_states_trace_for_tensor_and_lolli() {
        let t = Game::tensor(&Game::boolean(), &Game::boolean());
        let report = switching_states(&t, &[]).unwrap();
        assert_eq!(report.states, vec![(Polarity::O, Polarity::O)]);
        let l = Game::lolli(&Game::boolean(), &Game::boolean());
        let report = switching_states(&l, &[]).unwrap();
        assert_eq!(report.states, vec![(Polarity::P, Polarity::O)]);
    }

    #[test]
    fn tensor_never_reaches_both_waiting_on_player() {
        // Exhaustive over every position of B ⊗ B: the (P, P) state is
        // unreachable and no switch violation occurs.
        let t = Game::tensor(&Game::boolean(), &Game::boolean());
        for play in t.all_plays() {
            let report = switching_states(&t, &play).unwrap();
            assert_eq!(report.verdict, SwitchVerdict::Ok);
            assert!(report.states.iter().all(|s| *s != (Polarity::P, Polarity::P)));
        }
    }

    #[test]
    fn hand_built_switches_are_diagnosed() {
        // On a tensor, Player may not switch components.
        let t = Game::tensor(&Game::boolean(), &Game::boolean());
        let seq = vec![MoveId::tagged(&[Tag::L], "*"), MoveId::tagged(&[Tag::R], "tt")];
        let report = switching_states(&t, &seq).unwrap();
        assert_eq!(report.verdict, SwitchVerdict::SwitchViolation(0));
        // On a lolli, Opponent may not switch: after Player's left probe it
        // is Opponent's turn, and answering on the right switches sides.
        let l = Game::lolli(&Game::boolean(), &Game::boolean());
        let seq = vec![
            MoveId::tagged(&[Tag::R], "*"),
            MoveId::tagged(&[Tag::L], "*"),
            MoveId::tagged(&[Tag::R], "tt"),
        ];
        let report = switching_states(&l, &seq).unwrap();
        assert_eq!(report.verdict, SwitchVerdict::SwitchViolation(1));
    }

    #[test]
    fn subgame_order_is_a_partial_order_here() {
        let b = Game::boolean();
        let smaller = Game::flat_named(
            &[("*", Polarity::O), ("tt", Polarity::P), ("ff", Polarity::P)],
            &[&["*", "tt"]],
        )
        .unwrap();
        assert!(game_leq(&smaller, &b));
        assert!(!game_leq(&b, &smaller));
        assert!(game_leq(&b, &b));
        let other = Game::flat_named(&[("x", Polarity::O)], &[&["x"]]).unwrap();
        assert!(!game_leq(&other, &b));
        assert!(!game_leq(&b, &other));
    }

    #[test]
    fn truncation_cuts_the_trie_and_keeps_the_alphabet() {
        let s = Game::stream(6);
        let t = s.truncate(2);
        assert_eq!(t.play_count(), 4); // ε, *, *0, *1
        assert_eq!(t.depth_bound(), 2);
        assert_eq!(t.move_count(), 3);
        assert!(!t.admits(&[mv("*"), mv("0"), mv("*")]));
    }

    #[test]
    fn move_references_round_trip() {
        let m = MoveId::tagged(&[Tag::L, Tag::R], "tt");
        assert_eq!(m.to_string(), "L/R/tt");
        assert_eq!(MoveId::parse("L/R/tt").unwrap(), m);
        assert_eq!(MoveId::parse("tt").unwrap(), MoveId::base("tt"));
        assert!(MoveId::parse("X/tt").is_err());
        assert!(MoveId::parse("").is_err());
    }
}
