//! Strategies as morphisms: the category whose objects are games and whose
//! arrows A → B are strategies on the function-space game A ⊸ B.
//!
//! Composition is parallel interaction plus hiding: to compose f: A → B with
//! g: B → C, let the environment probe A or C, route each probe to the
//! strategy that owns it, and let f and g talk to each other over B until one
//! of them answers back in A or C. The B-traffic is then erased. A second,
//! independent implementation ([`compose_pointwise`]) computes the same
//! strategy by zipping pairs of positions with matching B-restrictions; the
//! two are cross-checked in tests and by the composition reports.
//!
//! Most structural morphisms (identities, symmetry, associativity, unit
//! laws, application) are copycats: they answer every probe by replaying it
//! across a fixed linking of subcomponents. [`linked_copycat`] builds all of
//! them from link tables.
//!
//! Two strategies can also talk forever inside B without ever answering —
//! composition in this category is not total-strategy-preserving. In the
//! materialised setting that shows up as an interaction running B out of
//! depth; such interactions are reported as possible divergences on the
//! composite.

use std::fmt;

use thiserror::Error;

use crate::game::{
    fmt_play, relabel_play, restrict_play, Game, MoveId, Play, PlaySet, Shape, Tag, ROOT,
};
use crate::strategy::{Strategy, StrategyError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CategoryError {
    #[error("composition requires the first codomain to equal the second domain")]
    DomainMismatch,
    #[error("pairing requires both strategies to share a domain")]
    PairDomainMismatch,
    #[error("the strategy lives on a different arena than the stated one")]
    WrongArena,
    #[error("currying needs a tensor domain")]
    NotATensorDomain,
    #[error("uncurrying needs a function-space codomain")]
    NotAFunctionCodomain,
    #[error("only morphisms out of the unit game are points")]
    NotAPoint,
    #[error("{play} is not a position of the composite")]
    NotInComposite { play: String },
    #[error(transparent)]
    Strategy(#[from] StrategyError),
}

/// Which component of an interaction a move belongs to: the outer domain A,
/// the hidden middle game B, or the outer codomain C.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Zone {
    Dom,
    Mid,
    Cod,
}

impl fmt::Display for Zone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Zone::Dom => write!(f, "dom"),
            Zone::Mid => write!(f, "mid"),
            Zone::Cod => write!(f, "cod"),
        }
    }
}

/// One move of an interaction, in its component's own coordinates.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct InteractionMove {
    pub zone: Zone,
    pub mv: MoveId,
}

impl fmt::Display for InteractionMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.zone, self.mv)
    }
}

pub fn fmt_interaction(seq: &[InteractionMove]) -> String {
    if seq.is_empty() {
        "ε".to_string()
    } else {
        seq.iter().map(|m| m.to_string()).collect::<Vec<_>>().join("·")
    }
}

/// A strategy presented as an arrow between two games.
#[derive(Debug, Clone)]
pub struct Morphism {
    dom: Game,
    cod: Game,
    strat: Strategy,
    /// Interactions (from a hiding composition) that ran the middle game out
    /// of materialised depth while still hidden: the conversation might have
    /// gone on forever. Empty for directly constructed morphisms.
    possible_divergences: Vec<Vec<InteractionMove>>,
}

impl PartialEq for Morphism {
    fn eq(&self, other: &Self) -> bool {
        self.dom == other.dom && self.cod == other.cod && self.strat == other.strat
    }
}

impl Eq for Morphism {}

impl Morphism {
    /// Present a strategy on `dom ⊸ cod` as an arrow.
    pub fn new(dom: &Game, cod: &Game, strat: Strategy) -> Result<Morphism, CategoryError> {
        if strat.game() != &Game::lolli(dom, cod) {
            return Err(CategoryError::WrongArena);
        }
        Ok(Morphism {
            dom: dom.clone(),
            cod: cod.clone(),
            strat,
            possible_divergences: Vec::new(),
        })
    }

    /// The copycat on A: every probe on one side is replayed on the other.
    pub fn identity(a: &Game) -> Morphism {
        let game = Game::lolli(a, a);
        let strat = linked_copycat(&game, &[(vec![Tag::L], vec![Tag::R])]);
        Morphism {
            dom: a.clone(),
            cod: a.clone(),
            strat,
            possible_divergences: Vec::new(),
        }
    }

    /// A strategy on G, seen as an arrow I → G.
    pub fn point(strat: &Strategy) -> Morphism {
        let unit = Game::unit();
        let game = Game::lolli(&unit, strat.game());
        let plays: Vec<Play> = strat
            .even_plays()
            .iter()
            .map(|p| relabel_play(p, &[(vec![], vec![Tag::R])]))
            .collect();
        let lifted = Strategy::new(&game, &plays).expect("a point play set stays well formed");
        Morphism {
            dom: unit,
            cod: strat.game().clone(),
            strat: lifted,
            possible_divergences: Vec::new(),
        }
    }

    /// The strategy on G behind an arrow I → G.
    pub fn to_point(&self) -> Result<Strategy, CategoryError> {
        if self.dom != Game::unit() {
            return Err(CategoryError::NotAPoint);
        }
        let plays: Vec<Play> = self
            .strat
            .even_plays()
            .iter()
            .map(|p| restrict_play(p, &[Tag::R]))
            .collect();
        Ok(Strategy::new(&self.cod, &plays)?)
    }

    /// The unique arrow A → I: stay silent.
    pub fn terminal(a: &Game) -> Morphism {
        let unit = Game::unit();
        let game = Game::lolli(a, &unit);
        Morphism {
            dom: a.clone(),
            cod: unit,
            strat: Strategy::bottom(&game),
            possible_divergences: Vec::new(),
        }
    }

    pub fn dom(&self) -> &Game {
        &self.dom
    }

    pub fn cod(&self) -> &Game {
        &self.cod
    }

    pub fn strategy(&self) -> &Strategy {
        &self.strat
    }

    pub fn possible_divergences(&self) -> &[Vec<InteractionMove>] {
        &self.possible_divergences
    }
}

/// The copycat strategy on a game whose moves fall under the left or right
/// side of some link: each probe is answered by the same move re-rooted at
/// the other end of its link. Probes under no link get no answer, and a
/// mirror that is not a position of the game prunes that branch.
pub fn linked_copycat(game: &Game, links: &[(Vec<Tag>, Vec<Tag>)]) -> Strategy {
    let mirror = |m: &MoveId| -> Option<MoveId> {
        for (p, q) in links {
            if let Some(stripped) = m.strip_prefix(p) {
                let mut path = q.clone();
                path.extend_from_slice(&stripped.path);
                return Some(MoveId { path, name: m.name.clone() });
            }
            if let Some(stripped) = m.strip_prefix(q) {
                let mut path = p.clone();
                path.extend_from_slice(&stripped.path);
                return Some(MoveId { path, name: m.name.clone() });
            }
        }
        None
    };
    let mut accepted: Vec<Play> = Vec::new();
    let mut stack: Vec<(usize, Play)> = vec![(ROOT, Vec::new())];
    while let Some((node, play)) = stack.pop() {
        accepted.push(play.clone());
        for (o, onode) in game.plays().children(node) {
            let Some(answer) = mirror(o) else { continue };
            let Some(anode) = game.plays().child(onode, &answer) else { continue };
            let mut next = play.clone();
            next.push(o.clone());
            next.push(answer);
            stack.push((anode, next));
        }
    }
    Strategy::new(game, &accepted).expect("mirrored positions stay deterministic")
}

// ---------------------------------------------------------------------------
// Composition by interaction and hiding.
// ---------------------------------------------------------------------------

/// Shared interaction machine: the deterministic run that answers one
/// environment probe by bouncing between f and g until a visible answer (or
/// none) comes out.
struct InteractionMachine<'a> {
    f: &'a Strategy,
    g: &'a Strategy,
    /// Materialised depth of the hidden middle game.
    mid_bound: usize,
}

#[derive(Clone)]
struct IState {
    fnode: usize,
    gnode: usize,
    flen: usize,
    glen: usize,
    mid_traffic: usize,
}

enum StepOutcome {
    /// The machine answered with a visible composite move.
    Visible { mv: MoveId, state: IState },
    /// No answer. `possible_divergence` is set when the hidden conversation
    /// had filled the middle game's materialised depth, so a longer middle
    /// game might have let it continue (perhaps forever).
    Silent { possible_divergence: bool },
}

impl<'a> InteractionMachine<'a> {
    /// Deliver a composite environment move (`L·a` or `R·c`) and run the
    /// hidden conversation to its visible outcome. `trace` records every
    /// move, hidden ones included.
    fn probe(
        &self,
        state: &IState,
        omove: &MoveId,
        trace: &mut Vec<InteractionMove>,
    ) -> StepOutcome {
        let mut st = state.clone();
        // Route the probe to its owner.
        match omove.path.first() {
            Some(Tag::L) => {
                trace.push(InteractionMove {
                    zone: Zone::Dom,
                    mv: omove.strip_prefix(&[Tag::L]).unwrap(),
                });
                match self.f.play_set().child(st.fnode, omove) {
                    Some(n) => {
                        st.fnode = n;
                        st.flen += 1;
                    }
                    None => return StepOutcome::Silent { possible_divergence: false },
                }
            }
            _ => {
                trace.push(InteractionMove {
                    zone: Zone::Cod,
                    mv: omove.strip_prefix(&[Tag::R]).unwrap(),
                });
                match self.g.play_set().child(st.gnode, omove) {
                    Some(n) => {
                        st.gnode = n;
                        st.glen += 1;
                    }
                    None => return StepOutcome::Silent { possible_divergence: false },
                }
            }
        }
        // Bounce until somebody answers outside the middle.
        loop {
            if st.flen % 2 == 1 {
                let (resp, rnode) = self
                    .f
                    .play_set()
                    .children(st.fnode)
                    .map(|(m, n)| (m.clone(), n))
                    .next()
                    .expect("waypoints always carry their response");
                st.fnode = rnode;
                st.flen += 1;
                match resp.path.first() {
                    Some(Tag::L) => {
                        trace.push(InteractionMove {
                            zone: Zone::Dom,
                            mv: resp.strip_prefix(&[Tag::L]).unwrap(),
                        });
                        return StepOutcome::Visible { mv: resp, state: st };
                    }
                    _ => {
                        let b = resp.strip_prefix(&[Tag::R]).unwrap();
                        trace.push(InteractionMove { zone: Zone::Mid, mv: b.clone() });
                        st.mid_traffic += 1;
                        let delivered = b.push_front(Tag::L);
                        match self.g.play_set().child(st.gnode, &delivered) {
                            Some(n) => {
                                st.gnode = n;
                                st.glen += 1;
                            }
                            None => {
                                return StepOutcome::Silent {
                                    possible_divergence: st.mid_traffic >= self.mid_bound,
                                }
                            }
                        }
                    }
                }
            } else {
                let (resp, rnode) = self
                    .g
                    .play_set()
                    .children(st.gnode)
                    .map(|(m, n)| (m.clone(), n))
                    .next()
                    .expect("waypoints always carry their response");
                st.gnode = rnode;
                st.glen += 1;
                match resp.path.first() {
                    Some(Tag::R) => {
                        trace.push(InteractionMove {
                            zone: Zone::Cod,
                            mv: resp.strip_prefix(&[Tag::R]).unwrap(),
                        });
                        return StepOutcome::Visible { mv: resp, state: st };
                    }
                    _ => {
                        let b = resp.strip_prefix(&[Tag::L]).unwrap();
                        trace.push(InteractionMove { zone: Zone::Mid, mv: b.clone() });
                        st.mid_traffic += 1;
                        let delivered = b.push_front(Tag::R);
                        match self.f.play_set().child(st.fnode, &delivered) {
                            Some(n) => {
                                st.fnode = n;
                                st.flen += 1;
                            }
                            None => {
                                return StepOutcome::Silent {
                                    possible_divergence: st.mid_traffic >= self.mid_bound,
                                }
                            }
                        }
                    }
                }
            }
        }
    }
}

/// Compose f: A → B and g: B → C by interaction and hiding.
pub fn compose_hiding(f: &Morphism, g: &Morphism) -> Result<Morphism, CategoryError> {
    if f.cod != g.dom {
        return Err(CategoryError::DomainMismatch);
    }
    let comp_game = Game::lolli(&f.dom, &g.cod);
    let machine = InteractionMachine {
        f: &f.strat,
        g: &g.strat,
        mid_bound: f.cod.depth_bound(),
    };
    let mut plays = PlaySet::new();
    let mut divergences: Vec<Vec<InteractionMove>> = Vec::new();
    let start = IState { fnode: ROOT, gnode: ROOT, flen: 0, glen: 0, mid_traffic: 0 };
    let mut stack: Vec<(IState, Play, Vec<InteractionMove>)> =
        vec![(start, Vec::new(), Vec::new())];
    while let Some((state, visible, trace)) = stack.pop() {
        plays.insert(&visible);
        let mut probes: Vec<MoveId> = f
            .strat
            .play_set()
            .children(state.fnode)
            .filter(|(m, _)| m.path.first() == Some(&Tag::L))
            .map(|(m, _)| m.clone())
            .collect();
        probes.extend(
            g.strat
                .play_set()
                .children(state.gnode)
                .filter(|(m, _)| m.path.first() == Some(&Tag::R))
                .map(|(m, _)| m.clone()),
        );
        for omove in probes {
            let mut branch_trace = trace.clone();
            match machine.probe(&state, &omove, &mut branch_trace) {
                StepOutcome::Visible { mv, state: next } => {
                    let mut next_visible = visible.clone();
                    next_visible.push(omove.clone());
                    next_visible.push(mv);
                    stack.push((next, next_visible, branch_trace));
                }
                StepOutcome::Silent { possible_divergence } => {
                    if possible_divergence {
                        divergences.push(branch_trace);
                    }
                }
            }
        }
    }
    divergences.sort();
    divergences.dedup();
    let accepted: Vec<Play> =
        plays.iter_seqs().into_iter().filter(|p| p.len() % 2 == 0).collect();
    let strat = Strategy::new(&comp_game, &accepted)?;
    Ok(Morphism {
        dom: f.dom.clone(),
        cod: g.cod.clone(),
        strat,
        possible_divergences: divergences,
    })
}

/// The full interaction of a probe-by-probe run of f against g: every
/// reachable interaction sequence at a visible rest point, hidden moves
/// included, in a canonical order.
pub fn interactions(f: &Morphism, g: &Morphism) -> Result<Vec<Vec<InteractionMove>>, CategoryError> {
    if f.cod != g.dom {
        return Err(CategoryError::DomainMismatch);
    }
    let machine = InteractionMachine {
        f: &f.strat,
        g: &g.strat,
        mid_bound: f.cod.depth_bound(),
    };
    let start = IState { fnode: ROOT, gnode: ROOT, flen: 0, glen: 0, mid_traffic: 0 };
    let mut out: Vec<Vec<InteractionMove>> = Vec::new();
    let mut stack: Vec<(IState, Vec<InteractionMove>)> = vec![(start, Vec::new())];
    while let Some((state, trace)) = stack.pop() {
        out.push(trace.clone());
        let mut probes: Vec<MoveId> = f
            .strat
            .play_set()
            .children(state.fnode)
            .filter(|(m, _)| m.path.first() == Some(&Tag::L))
            .map(|(m, _)| m.clone())
            .collect();
        probes.extend(
            g.strat
                .play_set()
                .children(state.gnode)
                .filter(|(m, _)| m.path.first() == Some(&Tag::R))
                .map(|(m, _)| m.clone()),
        );
        for omove in probes {
            let mut branch_trace = trace.clone();
            if let StepOutcome::Visible { state: next, .. } =
                machine.probe(&state, &omove, &mut branch_trace)
            {
                stack.push((next, branch_trace));
            }
        }
    }
    out.sort();
    Ok(out)
}

/// The interaction behind one composite position: re-runs the machine along
/// `play` and returns the full sequence with its hidden middle moves. This
/// is the constructive half of the covering property: every composite
/// position is the visible part of exactly one interaction.
pub fn covering_witness(
    f: &Morphism,
    g: &Morphism,
    play: &[MoveId],
) -> Result<Vec<InteractionMove>, CategoryError> {
    if f.cod != g.dom {
        return Err(CategoryError::DomainMismatch);
    }
    if play.len() % 2 != 0 {
        return Err(CategoryError::NotInComposite { play: fmt_play(play) });
    }
    let machine = InteractionMachine {
        f: &f.strat,
        g: &g.strat,
        mid_bound: f.cod.depth_bound(),
    };
    let mut state = IState { fnode: ROOT, gnode: ROOT, flen: 0, glen: 0, mid_traffic: 0 };
    let mut trace: Vec<InteractionMove> = Vec::new();
    let mut i = 0;
    while i < play.len() {
        match machine.probe(&state, &play[i], &mut trace) {
            StepOutcome::Visible { mv, state: next } if mv == play[i + 1] => {
                state = next;
                i += 2;
            }
            _ => return Err(CategoryError::NotInComposite { play: fmt_play(play) }),
        }
    }
    Ok(trace)
}

// ---------------------------------------------------------------------------
// Composition, pointwise.
// ---------------------------------------------------------------------------

/// Compose by zipping positions directly: for every pair of positions with
/// the same hidden-middle restriction, merge them into the visible composite
/// position they cover. Independent of the interaction machine; the two
/// agree, and tests hold them to that.
pub fn compose_pointwise(f: &Morphism, g: &Morphism) -> Result<Morphism, CategoryError> {
    if f.cod != g.dom {
        return Err(CategoryError::DomainMismatch);
    }
    let comp_game = Game::lolli(&f.dom, &g.cod);
    let mut accepted: Vec<Play> = Vec::new();
    let fplays = f.strat.even_plays();
    let gplays = g.strat.even_plays();
    for s in &fplays {
        let s_mid = restrict_play(s, &[Tag::R]);
        for t in &gplays {
            if s_mid != restrict_play(t, &[Tag::L]) {
                continue;
            }
            if let Some(z) = zip_cod_turn(s, t) {
                debug_assert!(z.len() % 2 == 0, "zips of equal-middle pairs are even");
                accepted.push(z);
            }
        }
    }
    accepted.sort();
    accepted.dedup();
    let strat = Strategy::new(&comp_game, &accepted)?;
    Ok(Morphism {
        dom: f.dom.clone(),
        cod: g.cod.clone(),
        strat,
        possible_divergences: Vec::new(),
    })
}

/// The four mutually recursive merge steps. Which one applies is determined
/// by whose turn the composite is at: the environment in the codomain, the
/// environment in the domain, f to move, or g to move. The switching
/// discipline of the function space makes the environment's component
/// predictable, which is what lets the merge be defined move by move.
fn zip_cod_turn(s: &[MoveId], t: &[MoveId]) -> Option<Play> {
    match t.first() {
        None => Some(Vec::new()),
        Some(m) if m.path.first() == Some(&Tag::R) => {
            let mut rest = zip_g_turn(s, &t[1..])?;
            rest.insert(0, m.clone());
            Some(rest)
        }
        _ => None,
    }
}

fn zip_dom_turn(s: &[MoveId], t: &[MoveId]) -> Option<Play> {
    match s.first() {
        None => Some(Vec::new()),
        Some(m) if m.path.first() == Some(&Tag::L) => {
            let mut rest = zip_f_turn(&s[1..], t)?;
            rest.insert(0, m.clone());
            Some(rest)
        }
        _ => None,
    }
}

fn zip_f_turn(s: &[MoveId], t: &[MoveId]) -> Option<Play> {
    match s.first() {
        None => Some(Vec::new()),
        Some(m) if m.path.first() == Some(&Tag::L) => {
            let mut rest = zip_dom_turn(&s[1..], t)?;
            rest.insert(0, m.clone());
            Some(rest)
        }
        Some(m) => {
            // f speaks into the middle; g must hear the same move.
            let b = m.strip_prefix(&[Tag::R])?;
            let heard = t.first()?.strip_prefix(&[Tag::L])?;
            if b == heard {
                zip_g_turn(&s[1..], &t[1..])
            } else {
                None
            }
        }
    }
}

fn zip_g_turn(s: &[MoveId], t: &[MoveId]) -> Option<Play> {
    match t.first() {
        None => Some(Vec::new()),
        Some(m) if m.path.first() == Some(&Tag::R) => {
            let mut rest = zip_cod_turn(s, &t[1..])?;
            rest.insert(0, m.clone());
            Some(rest)
        }
        Some(m) => {
            let b = m.strip_prefix(&[Tag::L])?;
            let heard = s.first()?.strip_prefix(&[Tag::R])?;
            if b == heard {
                zip_f_turn(&s[1..], &t[1..])
            } else {
                None
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Monoidal structure.
// ---------------------------------------------------------------------------

/// f ⊗ g on arrows: run f and g side by side, each on its own factor.
pub fn tensor_mor(f: &Morphism, g: &Morphism) -> Morphism {
    let dom = Game::tensor(&f.dom, &g.dom);
    let cod = Game::tensor(&f.cod, &g.cod);
    let game = Game::lolli(&dom, &cod);
    let mut accepted: Vec<Play> = Vec::new();
    // (game node, f node, g node, depth)
    let mut stack: Vec<(usize, usize, usize, usize, Play)> =
        vec![(ROOT, ROOT, ROOT, 0, Vec::new())];
    while let Some((node, fnode, gnode, depth, play)) = stack.pop() {
        if depth % 2 == 0 {
            accepted.push(play.clone());
        }
        for (m, child) in game.plays().children(node) {
            let side = m.path[0];
            let factor = m.path[1];
            let routed = MoveId {
                path: std::iter::once(side).chain(m.path[2..].iter().copied()).collect(),
                name: m.name.clone(),
            };
            let (fnext, gnext) = match factor {
                Tag::L => match f.strat.play_set().child(fnode, &routed) {
                    Some(n) => (n, gnode),
                    None => continue,
                },
                Tag::R => match g.strat.play_set().child(gnode, &routed) {
                    Some(n) => (fnode, n),
                    None => continue,
                },
            };
            let mut next = play.clone();
            next.push(m.clone());
            stack.push((child, fnext, gnext, depth + 1, next));
        }
    }
    let strat = Strategy::new(&game, &accepted).expect("factor routing stays deterministic");
    Morphism { dom, cod, strat, possible_divergences: Vec::new() }
}

pub(crate) fn copycat_morphism(dom: &Game, cod: &Game, links: &[(Vec<Tag>, Vec<Tag>)]) -> Morphism {
    let game = Game::lolli(dom, cod);
    let strat = linked_copycat(&game, links);
    Morphism {
        dom: dom.clone(),
        cod: cod.clone(),
        strat,
        possible_divergences: Vec::new(),
    }
}

/// (A ⊗ B) ⊗ C → A ⊗ (B ⊗ C).
pub fn assoc(a: &Game, b: &Game, c: &Game) -> Morphism {
    copycat_morphism(
        &Game::tensor(&Game::tensor(a, b), c),
        &Game::tensor(a, &Game::tensor(b, c)),
        &[
            (vec![Tag::L, Tag::L, Tag::L], vec![Tag::R, Tag::L]),
            (vec![Tag::L, Tag::L, Tag::R], vec![Tag::R, Tag::R, Tag::L]),
            (vec![Tag::L, Tag::R], vec![Tag::R, Tag::R, Tag::R]),
        ],
    )
}

/// A ⊗ (B ⊗ C) → (A ⊗ B) ⊗ C.
pub fn assoc_inv(a: &Game, b: &Game, c: &Game) -> Morphism {
    copycat_morphism(
        &Game::tensor(a, &Game::tensor(b, c)),
        &Game::tensor(&Game::tensor(a, b), c),
        &[
            (vec![Tag::L, Tag::L], vec![Tag::R, Tag::L, Tag::L]),
            (vec![Tag::L, Tag::R, Tag::L], vec![Tag::R, Tag::L, Tag::R]),
            (vec![Tag::L, Tag::R, Tag::R], vec![Tag::R, Tag::R]),
        ],
    )
}

/// A ⊗ B → B ⊗ A.
pub fn symm(a: &Game, b: &Game) -> Morphism {
    copycat_morphism(
        &Game::tensor(a, b),
        &Game::tensor(b, a),
        &[
            (vec![Tag::L, Tag::L], vec![Tag::R, Tag::R]),
            (vec![Tag::L, Tag::R], vec![Tag::R, Tag::L]),
        ],
    )
}

/// I ⊗ A → A.
pub fn unit_l(a: &Game) -> Morphism {
    copycat_morphism(
        &Game::tensor(&Game::unit(), a),
        a,
        &[(vec![Tag::L, Tag::R], vec![Tag::R])],
    )
}

/// A → I ⊗ A.
pub fn unit_l_inv(a: &Game) -> Morphism {
    copycat_morphism(
        a,
        &Game::tensor(&Game::unit(), a),
        &[(vec![Tag::L], vec![Tag::R, Tag::R])],
    )
}

/// A ⊗ I → A.
pub fn unit_r(a: &Game) -> Morphism {
    copycat_morphism(
        &Game::tensor(a, &Game::unit()),
        a,
        &[(vec![Tag::L, Tag::L], vec![Tag::R])],
    )
}

/// A → A ⊗ I.
pub fn unit_r_inv(a: &Game) -> Morphism {
    copycat_morphism(
        a,
        &Game::tensor(a, &Game::unit()),
        &[(vec![Tag::L], vec![Tag::R, Tag::L])],
    )
}

/// Application: (A ⊸ B) ⊗ A → B. The function's inner A is wired to the
/// supplied A, its inner B to the result.
pub fn ap(a: &Game, b: &Game) -> Morphism {
    copycat_morphism(
        &Game::tensor(&Game::lolli(a, b), a),
        b,
        &[
            (vec![Tag::L, Tag::L, Tag::L], vec![Tag::L, Tag::R]),
            (vec![Tag::L, Tag::L, Tag::R], vec![Tag::R]),
        ],
    )
}

/// A ⊗ B → A, built from the monoidal pieces: discard B, then drop the unit.
pub fn proj_tensor_left(a: &Game, b: &Game) -> Result<Morphism, CategoryError> {
    let discard = tensor_mor(&Morphism::identity(a), &Morphism::terminal(b));
    compose_hiding(&discard, &unit_r(a))
}

/// A ⊗ B → B.
pub fn proj_tensor_right(a: &Game, b: &Game) -> Result<Morphism, CategoryError> {
    let discard = tensor_mor(&Morphism::terminal(a), &Morphism::identity(b));
    compose_hiding(&discard, &unit_l(b))
}

/// Curry f: A ⊗ B → C into A → (B ⊸ C) by re-rooting its moves.
pub fn curry(f: &Morphism) -> Result<Morphism, CategoryError> {
    let (a, b) = match f.dom.shape() {
        Shape::Tensor(a, b) => (a.clone(), b.clone()),
        _ => return Err(CategoryError::NotATensorDomain),
    };
    let cod = Game::lolli(&b, &f.cod);
    let game = Game::lolli(&a, &cod);
    let rules = [
        (vec![Tag::L, Tag::L], vec![Tag::L]),
        (vec![Tag::L, Tag::R], vec![Tag::R, Tag::L]),
        (vec![Tag::R], vec![Tag::R, Tag::R]),
    ];
    let plays: Vec<Play> =
        f.strat.even_plays().iter().map(|p| relabel_play(p, &rules)).collect();
    let strat = Strategy::new(&game, &plays)?;
    Ok(Morphism { dom: a, cod, strat, possible_divergences: Vec::new() })
}

/// Uncurry f: A → (B ⊸ C) into A ⊗ B → C.
pub fn uncurry(f: &Morphism) -> Result<Morphism, CategoryError> {
    let (b, c) = match f.cod.shape() {
        Shape::Lolli(b, c) => (b.clone(), c.clone()),
        _ => return Err(CategoryError::NotAFunctionCodomain),
    };
    let dom = Game::tensor(&f.dom, &b);
    let game = Game::lolli(&dom, &c);
    let rules = [
        (vec![Tag::L], vec![Tag::L, Tag::L]),
        (vec![Tag::R, Tag::L], vec![Tag::L, Tag::R]),
        (vec![Tag::R, Tag::R], vec![Tag::R]),
    ];
    let plays: Vec<Play> =
        f.strat.even_plays().iter().map(|p| relabel_play(p, &rules)).collect();
    let strat = Strategy::new(&game, &plays)?;
    Ok(Morphism { dom, cod: c, strat, possible_divergences: Vec::new() })
}

// ---------------------------------------------------------------------------
// The product given by the choice game.
// ---------------------------------------------------------------------------

/// ⟨f, g⟩: C → A & B. The opening move picks a component; from then on the
/// play is f's or g's with its codomain re-rooted.
pub fn pair(f: &Morphism, g: &Morphism) -> Result<Morphism, CategoryError> {
    if f.dom != g.dom {
        return Err(CategoryError::PairDomainMismatch);
    }
    let cod = Game::with(&f.cod, &g.cod);
    let game = Game::lolli(&f.dom, &cod);
    let mut plays: Vec<Play> = f
        .strat
        .even_plays()
        .iter()
        .map(|p| relabel_play(p, &[(vec![Tag::R], vec![Tag::R, Tag::L])]))
        .collect();
    plays.extend(
        g.strat
            .even_plays()
            .iter()
            .map(|p| relabel_play(p, &[(vec![Tag::R], vec![Tag::R, Tag::R])])),
    );
    let strat = Strategy::new(&game, &plays)?;
    Ok(Morphism {
        dom: f.dom.clone(),
        cod,
        strat,
        possible_divergences: Vec::new(),
    })
}

/// A & B → A.
pub fn fst(a: &Game, b: &Game) -> Morphism {
    copycat_morphism(&Game::with(a, b), a, &[(vec![Tag::L, Tag::L], vec![Tag::R])])
}

/// A & B → B.
pub fn snd(a: &Game, b: &Game) -> Morphism {
    copycat_morphism(&Game::with(a, b), b, &[(vec![Tag::L, Tag::R], vec![Tag::R])])
}
