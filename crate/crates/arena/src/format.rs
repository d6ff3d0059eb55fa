//! On-disk interchange: games, strategies, refined games, and relations as
//! JSON. Plays are written as lists of move references (`L/R/tt` — path
//! segments then the name, `/`-separated), and only maximal plays are
//! listed: prefix closure is implied and restored on load.
//!
//! A strategy file names its game either inline, as a path to a `.game`
//! file, or as `{"lolli": {"dom": …, "cod": …}}` — the last form declares
//! the strategy to be a morphism and survives reloading with its
//! domain/codomain split intact, which `arena compose` needs.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::game::{Game, GameError, MoveId, Play, Polarity, Tag, ROOT};
use crate::param::{Relation, RelationError};
use crate::strategy::{Strategy, StrategyError};
use crate::winning::{RefinedGame, WinningSpec};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("cannot read {path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Json { path: String, source: serde_json::Error },
    #[error("polarity must be \"O\" or \"P\", got {0:?}")]
    BadPolarity(String),
    #[error("path segments must be \"L\" or \"R\", got {0:?}")]
    BadSegment(String),
    #[error("move name {0:?} cannot be written unambiguously")]
    UnwritableName(String),
    #[error("a strategy file needs exactly one of \"plays\" and \"table\"")]
    PlaysOrTable,
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(transparent)]
    Strategy(#[from] StrategyError),
    #[error(transparent)]
    Relation(#[from] RelationError),
}

// ---------------------------------------------------------------------------
// Games.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MoveRepr {
    pub name: String,
    pub path: Vec<String>,
    pub polarity: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GameRepr {
    pub moves: Vec<MoveRepr>,
    pub plays: Vec<Vec<String>>,
}

fn moveref(m: &MoveId) -> Result<String, FormatError> {
    if m.name.contains('/') || m.name.is_empty() {
        return Err(FormatError::UnwritableName(m.name.clone()));
    }
    Ok(m.to_string())
}

/// The maximal sequences of a trie — everything else is implied closure.
fn maximal_plays(game: &Game) -> Vec<Play> {
    let trie = game.plays();
    let mut out = Vec::new();
    let mut stack: Vec<(usize, Play)> = vec![(ROOT, Vec::new())];
    while let Some((node, play)) = stack.pop() {
        if trie.is_leaf(node) {
            if !play.is_empty() {
                out.push(play);
            }
            continue;
        }
        for (m, child) in trie.children(node) {
            let mut grown = play.clone();
            grown.push(m.clone());
            stack.push((child, grown));
        }
    }
    out.sort();
    out
}

impl GameRepr {
    pub fn from_game(game: &Game) -> Result<GameRepr, FormatError> {
        let mut moves = Vec::new();
        for (m, pol) in game.moves() {
            moveref(m)?;
            moves.push(MoveRepr {
                name: m.name.clone(),
                path: m.path.iter().map(|t| t.to_string()).collect(),
                polarity: match pol {
                    Polarity::O => "O".to_string(),
                    Polarity::P => "P".to_string(),
                },
            });
        }
        let mut plays = Vec::new();
        for p in maximal_plays(game) {
            let mut refs = Vec::new();
            for m in &p {
                refs.push(moveref(m)?);
            }
            plays.push(refs);
        }
        Ok(GameRepr { moves, plays })
    }

    pub fn to_game(&self) -> Result<Game, FormatError> {
        let mut moves = Vec::new();
        for mr in &self.moves {
            let mut path = Vec::new();
            for seg in &mr.path {
                match seg.as_str() {
                    "L" => path.push(Tag::L),
                    "R" => path.push(Tag::R),
                    other => return Err(FormatError::BadSegment(other.to_string())),
                }
            }
            let pol = match mr.polarity.as_str() {
                "O" => Polarity::O,
                "P" => Polarity::P,
                other => return Err(FormatError::BadPolarity(other.to_string())),
            };
            moves.push((MoveId::tagged(&path, &mr.name), pol));
        }
        let mut generators = Vec::new();
        for p in &self.plays {
            let mut play = Vec::new();
            for r in p {
                play.push(MoveId::parse(r)?);
            }
            generators.push(play);
        }
        Ok(Game::flat(moves, generators)?)
    }
}

pub fn read_game(path: &Path) -> Result<Game, FormatError> {
    let repr: GameRepr = read_json(path)?;
    repr.to_game()
}

pub fn write_game(game: &Game, path: &Path) -> Result<(), FormatError> {
    write_json(path, &GameRepr::from_game(game)?)
}

// ---------------------------------------------------------------------------
// Strategies.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GameRef {
    Inline(GameRepr),
    Lolli { lolli: LolliRef },
    File(String),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LolliRef {
    pub dom: Box<GameRef>,
    pub cod: Box<GameRef>,
}

impl GameRef {
    /// Resolve to a game; file references are taken relative to `base`.
    /// A lolli reference also yields the declared domain/codomain split.
    pub fn resolve(&self, base: &Path) -> Result<(Game, Option<(Game, Game)>), FormatError> {
        match self {
            GameRef::Inline(repr) => Ok((repr.to_game()?, None)),
            GameRef::File(rel) => {
                let target = base.join(rel);
                Ok((read_game(&target)?, None))
            }
            GameRef::Lolli { lolli } => {
                let (dom, _) = lolli.dom.resolve(base)?;
                let (cod, _) = lolli.cod.resolve(base)?;
                Ok((Game::lolli(&dom, &cod), Some((dom, cod))))
            }
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TableEntry {
    pub on: String,
    pub play: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StrategyRepr {
    pub game: GameRef,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plays: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<TableEntry>>,
}

/// A strategy read back from disk, with the morphism split when the file
/// declared one.
#[derive(Debug, Clone)]
pub struct LoadedStrategy {
    pub strategy: Strategy,
    pub split: Option<(Game, Game)>,
}

impl StrategyRepr {
    pub fn from_strategy(
        strategy: &Strategy,
        split: Option<(&Game, &Game)>,
    ) -> Result<StrategyRepr, FormatError> {
        let game = match split {
            Some((dom, cod)) => GameRef::Lolli {
                lolli: LolliRef {
                    dom: Box::new(GameRef::Inline(GameRepr::from_game(dom)?)),
                    cod: Box::new(GameRef::Inline(GameRepr::from_game(cod)?)),
                },
            },
            None => GameRef::Inline(GameRepr::from_game(strategy.game())?),
        };
        // Maximal accepted plays; the closure is restored on load.
        let evens: BTreeSet<Play> = strategy.even_plays().into_iter().collect();
        let mut maximal = Vec::new();
        for p in &evens {
            let extended = evens.iter().any(|q| q.len() > p.len() && q.starts_with(p));
            if !p.is_empty() && !extended {
                let mut refs = Vec::new();
                for m in p {
                    refs.push(moveref(m)?);
                }
                maximal.push(refs);
            }
        }
        Ok(StrategyRepr { game, plays: Some(maximal), table: None })
    }

    pub fn to_strategy(&self, base: &Path) -> Result<LoadedStrategy, FormatError> {
        let (game, split) = self.game.resolve(base)?;
        let strategy = match (&self.plays, &self.table) {
            (Some(plays), None) => {
                let mut evens: BTreeSet<Play> = BTreeSet::new();
                evens.insert(Vec::new());
                for p in plays {
                    let mut play = Vec::new();
                    for r in p {
                        play.push(MoveId::parse(r)?);
                    }
                    let mut k = 0;
                    while k + 2 <= play.len() {
                        k += 2;
                        evens.insert(play[..k].to_vec());
                    }
                    evens.insert(play);
                }
                let evens: Vec<Play> = evens.into_iter().collect();
                Strategy::new(&game, &evens)?
            }
            (None, Some(table)) => {
                let mut map = std::collections::BTreeMap::new();
                for e in table {
                    map.insert(MoveId::parse(&e.on)?, MoveId::parse(&e.play)?);
                }
                Strategy::from_table(&game, &map)
            }
            _ => return Err(FormatError::PlaysOrTable),
        };
        Ok(LoadedStrategy { strategy, split })
    }
}

pub fn read_strategy(path: &Path) -> Result<LoadedStrategy, FormatError> {
    let repr: StrategyRepr = read_json(path)?;
    repr.to_strategy(&parent_of(path))
}

pub fn write_strategy(
    strategy: &Strategy,
    split: Option<(&Game, &Game)>,
    path: &Path,
) -> Result<(), FormatError> {
    write_json(path, &StrategyRepr::from_strategy(strategy, split)?)
}

// ---------------------------------------------------------------------------
// Refined games.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SpecRepr {
    All,
    Never,
    Atom { name: String },
    Tensor { left: Box<SpecRepr>, right: Box<SpecRepr> },
    Lolli { left: Box<SpecRepr>, right: Box<SpecRepr> },
    Meet { parts: Vec<SpecRepr> },
    Guarded { game: GameRepr, inner: Box<SpecRepr> },
}

impl SpecRepr {
    pub fn from_spec(spec: &WinningSpec) -> Result<SpecRepr, FormatError> {
        Ok(match spec {
            WinningSpec::All => SpecRepr::All,
            WinningSpec::Never => SpecRepr::Never,
            WinningSpec::Atom(name) => SpecRepr::Atom { name: name.clone() },
            WinningSpec::Tensor(a, b) => SpecRepr::Tensor {
                left: Box::new(SpecRepr::from_spec(a)?),
                right: Box::new(SpecRepr::from_spec(b)?),
            },
            WinningSpec::Lolli(a, b) => SpecRepr::Lolli {
                left: Box::new(SpecRepr::from_spec(a)?),
                right: Box::new(SpecRepr::from_spec(b)?),
            },
            WinningSpec::Meet(parts) => SpecRepr::Meet {
                parts: parts.iter().map(SpecRepr::from_spec).collect::<Result<_, _>>()?,
            },
            WinningSpec::Guarded(game, inner) => SpecRepr::Guarded {
                game: GameRepr::from_game(game)?,
                inner: Box::new(SpecRepr::from_spec(inner)?),
            },
        })
    }

    pub fn to_spec(&self) -> Result<WinningSpec, FormatError> {
        Ok(match self {
            SpecRepr::All => WinningSpec::All,
            SpecRepr::Never => WinningSpec::Never,
            SpecRepr::Atom { name } => WinningSpec::Atom(name.clone()),
            SpecRepr::Tensor { left, right } => {
                WinningSpec::Tensor(Box::new(left.to_spec()?), Box::new(right.to_spec()?))
            }
            SpecRepr::Lolli { left, right } => {
                WinningSpec::Lolli(Box::new(left.to_spec()?), Box::new(right.to_spec()?))
            }
            SpecRepr::Meet { parts } => {
                WinningSpec::Meet(parts.iter().map(SpecRepr::to_spec).collect::<Result<_, _>>()?)
            }
            SpecRepr::Guarded { game, inner } => {
                WinningSpec::Guarded(game.to_game()?, Box::new(inner.to_spec()?))
            }
        })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RefinedGameRepr {
    #[serde(flatten)]
    pub game: GameRepr,
    pub winning: SpecRepr,
}

pub fn read_refined(path: &Path) -> Result<RefinedGame, FormatError> {
    let repr: RefinedGameRepr = read_json(path)?;
    Ok(RefinedGame { game: repr.game.to_game()?, spec: repr.winning.to_spec()? })
}

pub fn write_refined(refined: &RefinedGame, path: &Path) -> Result<(), FormatError> {
    let repr = RefinedGameRepr {
        game: GameRepr::from_game(&refined.game)?,
        winning: SpecRepr::from_spec(&refined.spec)?,
    };
    write_json(path, &repr)
}

// ---------------------------------------------------------------------------
// Relations.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RelationRepr {
    pub left: GameRef,
    pub right: GameRef,
    pub pairs: Vec<(Vec<String>, Vec<String>)>,
}

impl RelationRepr {
    pub fn from_relation(rel: &Relation) -> Result<RelationRepr, FormatError> {
        let mut pairs = Vec::new();
        for (l, r) in rel.pair_list() {
            if l.is_empty() {
                continue;
            }
            let mut lrefs = Vec::new();
            for m in &l {
                lrefs.push(moveref(m)?);
            }
            let mut rrefs = Vec::new();
            for m in &r {
                rrefs.push(moveref(m)?);
            }
            pairs.push((lrefs, rrefs));
        }
        Ok(RelationRepr {
            left: GameRef::Inline(GameRepr::from_game(rel.left())?),
            right: GameRef::Inline(GameRepr::from_game(rel.right())?),
            pairs,
        })
    }

    pub fn to_relation(&self, base: &Path) -> Result<Relation, FormatError> {
        let (left, _) = self.left.resolve(base)?;
        let (right, _) = self.right.resolve(base)?;
        let mut pairs = Vec::new();
        for (l, r) in &self.pairs {
            let mut lp = Vec::new();
            for m in l {
                lp.push(MoveId::parse(m)?);
            }
            let mut rp = Vec::new();
            for m in r {
                rp.push(MoveId::parse(m)?);
            }
            pairs.push((lp, rp));
        }
        Ok(Relation::generated(&left, &right, &pairs)?)
    }
}

pub fn read_relation(path: &Path) -> Result<Relation, FormatError> {
    let repr: RelationRepr = read_json(path)?;
    repr.to_relation(&parent_of(path))
}

pub fn write_relation(rel: &Relation, path: &Path) -> Result<(), FormatError> {
    write_json(path, &RelationRepr::from_relation(rel)?)
}

// ---------------------------------------------------------------------------
// Shared plumbing.
// ---------------------------------------------------------------------------

fn parent_of(path: &Path) -> PathBuf {
    path.parent().map(|p| p.to_path_buf()).unwrap_or_else(|| PathBuf::from("."))
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, FormatError> {
    let text = fs::read_to_string(path)
        .map_err(|source| FormatError::Read { path: path.display().to_string(), source })?;
    serde_json::from_str(&text)
        .map_err(|source| FormatError::Json { path: path.display().to_string(), source })
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), FormatError> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|source| FormatError::Json { path: path.display().to_string(), source })?;
    text.push('\n');
    fs::write(path, text)
        .map_err(|source| FormatError::Write { path: path.display().to_string(), source })
}
