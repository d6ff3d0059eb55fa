//! Two-player game semantics, executable.
//!
//! Games are alternating dialogue trees, strategies are deterministic
//! response tables over them, and strategies compose by letting two of them
//! talk to each other across a shared interface and hiding the conversation.
//! On top of that sit winning conditions over infinite plays, a quantifier
//! game for type variables, and a parametricity layer relating strategies
//! across instantiations.

pub mod catalog;
pub mod category;
pub mod cli;
pub mod format;
pub mod game;
pub mod lang;
pub mod param;
pub mod poly;
pub mod strategy;
pub mod winning;

pub use category::{CategoryError, Morphism};
pub use game::{Game, GameError, MoveId, Play, Polarity, Tag};
pub use lang::{denote, parse_term, parse_type, typecheck, LangError, Term, TypeExpr};
pub use param::{
    lift_check, parametric_pi, rel_leq, rel_lolli, rel_meet, rel_tensor, Relation, RelationError,
    RelVerdict,
};
pub use poly::{build_pi, InstanceFamily, PiGame, PolyError, VarType};
pub use strategy::{Strategy, StrategyError};
pub use winning::{Lasso, RefinedGame, WinningError, WinningSpec};
