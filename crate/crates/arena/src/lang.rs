//! A small affine term language compiled to strategies: linear lambdas,
//! tensor and choice pairs, second-order abstraction and instantiation, and
//! the boolean constants. Terms are what the definability experiments run
//! on — a term denotes a morphism assembled from copycats and the category
//! combinators, and a closed term denotes a strategy on its type's game.
//!
//! Concrete syntax: `\x:T. t` (also `\x,y:T. t`), application by
//! juxtaposition, `t * u` and `let x*y = t in u`, `<t, u>` with `fst`/`snd`
//! taking an atom, `/\X. t`, `t {T}`, `()`, and the constants `tt`, `ff`,
//! `not`. Types: `Bool`, `I`, variables, `-o` (right associative), `*` and
//! `&` (left associative, binding tighter than `-o`), `forall X. T`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::category::{
    ap, compose_hiding, copycat_morphism, fst, pair, snd, tensor_mor, CategoryError, Morphism,
};
use crate::game::{Game, GameError, MoveId, Play, Tag, ROOT};
use crate::poly::{build_pi, universe_alias, InstanceFamily, PolyError, VarType};
use crate::strategy::{Strategy, StrategyError};

#[derive(Debug, Error)]
pub enum LangError {
    #[error("parse error at {line}:{col}: {message}")]
    Parse { line: usize, col: usize, message: String },
    #[error("unbound variable {0}")]
    UnboundVariable(String),
    #[error("variable {0} is used more than once")]
    NonAffineUse(String),
    #[error("type variable {0} is not in scope")]
    UnboundTypeVariable(String),
    #[error("cannot abstract {0}: it is free in the context")]
    ScopeViolation(String),
    #[error("expected an argument of type {expected}, got {got}")]
    Mismatch { expected: String, got: String },
    #[error("cannot apply a term of type {0}")]
    NotAFunction(String),
    #[error("let x*y expects a tensor, got {0}")]
    NotATensor(String),
    #[error("fst/snd expect a choice pair, got {0}")]
    NotAChoice(String),
    #[error("cannot instantiate a term of type {0}")]
    NotQuantified(String),
    #[error("instantiation targets must be closed and quantifier-free, got {0}")]
    UnsupportedInstantiation(String),
    #[error("only one quantifier level denotes")]
    QuantifierDepth,
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Category(#[from] CategoryError),
    #[error(transparent)]
    Strategy(#[from] StrategyError),
    #[error(transparent)]
    Game(#[from] GameError),
}

// ---------------------------------------------------------------------------
// Syntax.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TypeExpr {
    Bool,
    Unit,
    Var(String),
    Lolli(Box<TypeExpr>, Box<TypeExpr>),
    Tensor(Box<TypeExpr>, Box<TypeExpr>),
    With(Box<TypeExpr>, Box<TypeExpr>),
    Forall(String, Box<TypeExpr>),
}

impl TypeExpr {
    pub fn free_vars(&self) -> BTreeSet<String> {
        match self {
            TypeExpr::Bool | TypeExpr::Unit => BTreeSet::new(),
            TypeExpr::Var(x) => [x.clone()].into_iter().collect(),
            TypeExpr::Lolli(a, b) | TypeExpr::Tensor(a, b) | TypeExpr::With(a, b) => {
                let mut s = a.free_vars();
                s.extend(b.free_vars());
                s
            }
            TypeExpr::Forall(x, body) => {
                let mut s = body.free_vars();
                s.remove(x);
                s
            }
        }
    }

    /// Substitute `to` for the free occurrences of `var`, renaming binders
    /// that would capture.
    pub fn subst(&self, var: &str, to: &TypeExpr) -> TypeExpr {
        match self {
            TypeExpr::Bool | TypeExpr::Unit => self.clone(),
            TypeExpr::Var(x) => {
                if x == var {
                    to.clone()
                } else {
                    self.clone()
                }
            }
            TypeExpr::Lolli(a, b) => {
                TypeExpr::Lolli(Box::new(a.subst(var, to)), Box::new(b.subst(var, to)))
            }
            TypeExpr::Tensor(a, b) => {
                TypeExpr::Tensor(Box::new(a.subst(var, to)), Box::new(b.subst(var, to)))
            }
            TypeExpr::With(a, b) => {
                TypeExpr::With(Box::new(a.subst(var, to)), Box::new(b.subst(var, to)))
            }
            TypeExpr::Forall(x, body) => {
                if x == var {
                    self.clone()
                } else if to.free_vars().contains(x) {
                    let mut avoid = to.free_vars();
                    avoid.extend(body.free_vars());
                    let mut fresh = format!("{x}'");
                    while avoid.contains(&fresh) {
                        fresh.push('\'');
                    }
                    let renamed = body.subst(x, &TypeExpr::Var(fresh.clone()));
                    TypeExpr::Forall(fresh, Box::new(renamed.subst(var, to)))
                } else {
                    TypeExpr::Forall(x.clone(), Box::new(body.subst(var, to)))
                }
            }
        }
    }

    fn fmt_prec(&self, prec: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TypeExpr::Bool => write!(f, "Bool"),
            TypeExpr::Unit => write!(f, "I"),
            TypeExpr::Var(x) => write!(f, "{x}"),
            TypeExpr::Lolli(a, b) => {
                if prec > 0 {
                    write!(f, "(")?;
                }
                a.fmt_prec(1, f)?;
                write!(f, " -o ")?;
                b.fmt_prec(0, f)?;
                if prec > 0 {
                    write!(f, ")")?;
                }
                Ok(())
            }
            TypeExpr::Tensor(a, b) | TypeExpr::With(a, b) => {
                if prec > 1 {
                    write!(f, "(")?;
                }
                a.fmt_prec(1, f)?;
                write!(f, " {} ", if matches!(self, TypeExpr::Tensor(_, _)) { "*" } else { "&" })?;
                b.fmt_prec(2, f)?;
                if prec > 1 {
                    write!(f, ")")?;
                }
                Ok(())
            }
            TypeExpr::Forall(x, body) => {
                if prec > 0 {
                    write!(f, "(")?;
                }
                write!(f, "forall {x}. ")?;
                body.fmt_prec(0, f)?;
                if prec > 0 {
                    write!(f, ")")?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for TypeExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(0, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Term {
    Var(String),
    Lam(String, TypeExpr, Box<Term>),
    App(Box<Term>, Box<Term>),
    TensorPair(Box<Term>, Box<Term>),
    LetPair(String, String, Box<Term>, Box<Term>),
    WithPair(Box<Term>, Box<Term>),
    Fst(Box<Term>),
    Snd(Box<Term>),
    Unit,
    TypeAbs(String, Box<Term>),
    TypeApp(Box<Term>, TypeExpr),
    Not,
}

impl Term {
    fn fmt_prec(&self, prec: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let group = |low: u8, f: &mut fmt::Formatter<'_>, body: &dyn Fn(&mut fmt::Formatter<'_>) -> fmt::Result| {
            if prec > low {
                write!(f, "(")?;
                body(f)?;
                write!(f, ")")
            } else {
                body(f)
            }
        };
        match self {
            Term::Var(x) => write!(f, "{x}"),
            Term::Unit => write!(f, "()"),
            Term::Not => write!(f, "not"),
            Term::WithPair(t, u) => write!(f, "<{t}, {u}>"),
            Term::Lam(x, ty, body) => group(0, f, &|f| {
                write!(f, "\\{x}:{ty}. ")?;
                body.fmt_prec(0, f)
            }),
            Term::TypeAbs(x, body) => group(0, f, &|f| {
                write!(f, "/\\{x}. ")?;
                body.fmt_prec(0, f)
            }),
            Term::LetPair(x, y, t, u) => group(0, f, &|f| {
                write!(f, "let {x}*{y} = ")?;
                t.fmt_prec(1, f)?;
                write!(f, " in ")?;
                u.fmt_prec(0, f)
            }),
            Term::TensorPair(t, u) => group(1, f, &|f| {
                t.fmt_prec(2, f)?;
                write!(f, " * ")?;
                u.fmt_prec(1, f)
            }),
            Term::App(t, u) => group(2, f, &|f| {
                t.fmt_prec(2, f)?;
                write!(f, " ")?;
                u.fmt_prec(3, f)
            }),
            Term::TypeApp(t, ty) => group(2, f, &|f| {
                t.fmt_prec(2, f)?;
                write!(f, " {{{ty}}}")
            }),
            Term::Fst(t) => group(2, f, &|f| {
                write!(f, "fst ")?;
                t.fmt_prec(3, f)
            }),
            Term::Snd(t) => group(2, f, &|f| {
                write!(f, "snd ")?;
                t.fmt_prec(3, f)
            }),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(0, f)
    }
}

// ---------------------------------------------------------------------------
// Lexing and parsing.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Lambda,
    BigLambda,
    Dot,
    Colon,
    Comma,
    Star,
    Amp,
    Arrow,
    Eq,
    LPar,
    RPar,
    LBrace,
    RBrace,
    LAngle,
    RAngle,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Ident(w) => return write!(f, "{w}"),
            Tok::Lambda => "\\",
            Tok::BigLambda => "/\\",
            Tok::Dot => ".",
            Tok::Colon => ":",
            Tok::Comma => ",",
            Tok::Star => "*",
            Tok::Amp => "&",
            Tok::Arrow => "-o",
            Tok::Eq => "=",
            Tok::LPar => "(",
            Tok::RPar => ")",
            Tok::LBrace => "{",
            Tok::RBrace => "}",
            Tok::LAngle => "<",
            Tok::RAngle => ">",
        };
        write!(f, "{s}")
    }
}

struct SpannedTok {
    tok: Tok,
    line: usize,
    col: usize,
}

/// Words that can never be a term or type variable.
const KEYWORDS: [&str; 9] = ["let", "in", "fst", "snd", "forall", "tt", "ff", "not", "Bool"];

fn lex(src: &str) -> Result<(Vec<SpannedTok>, usize, usize), LangError> {
    let mut out = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let mut chars = src.chars().peekable();
    let parse_err = |line: usize, col: usize, message: String| LangError::Parse { line, col, message };
    while let Some(&c) = chars.peek() {
        let (tline, tcol) = (line, col);
        let bump = |c: char, line: &mut usize, col: &mut usize| {
            if c == '\n' {
                *line += 1;
                *col = 1;
            } else {
                *col += 1;
            }
        };
        if c.is_whitespace() {
            chars.next();
            bump(c, &mut line, &mut col);
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let mut word = String::new();
            while let Some(&d) = chars.peek() {
                if d.is_alphanumeric() || d == '_' || d == '\'' {
                    word.push(d);
                    chars.next();
                    bump(d, &mut line, &mut col);
                } else {
                    break;
                }
            }
            out.push(SpannedTok { tok: Tok::Ident(word), line: tline, col: tcol });
            continue;
        }
        chars.next();
        bump(c, &mut line, &mut col);
        let tok = match c {
            '\\' => Tok::Lambda,
            '/' => {
                if chars.peek() == Some(&'\\') {
                    chars.next();
                    bump('\\', &mut line, &mut col);
                    Tok::BigLambda
                } else {
                    return Err(parse_err(tline, tcol, "expected /\\".to_string()));
                }
            }
            '-' => {
                if chars.peek() == Some(&'o') {
                    chars.next();
                    bump('o', &mut line, &mut col);
                    if chars.peek().is_some_and(|d| d.is_alphanumeric() || *d == '_') {
                        return Err(parse_err(tline, tcol, "expected -o".to_string()));
                    }
                    Tok::Arrow
                } else {
                    return Err(parse_err(tline, tcol, "expected -o".to_string()));
                }
            }
            '.' => Tok::Dot,
            ':' => Tok::Colon,
            ',' => Tok::Comma,
            '*' => Tok::Star,
            '&' => Tok::Amp,
            '=' => Tok::Eq,
            '(' => Tok::LPar,
            ')' => Tok::RPar,
            '{' => Tok::LBrace,
            '}' => Tok::RBrace,
            '<' => Tok::LAngle,
            '>' => Tok::RAngle,
            other => {
                return Err(parse_err(tline, tcol, format!("unexpected character {other:?}")));
            }
        };
        out.push(SpannedTok { tok, line: tline, col: tcol });
    }
    Ok((out, line, col))
}

struct Parser {
    toks: Vec<SpannedTok>,
    pos: usize,
    end_line: usize,
    end_col: usize,
}

impl Parser {
    fn new(src: &str) -> Result<Parser, LangError> {
        let (toks, end_line, end_col) = lex(src)?;
        Ok(Parser { toks, pos: 0, end_line, end_col })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.toks
            .get(self.pos)
            .map(|t| (t.line, t.col))
            .unwrap_or((self.end_line, self.end_col))
    }

    fn fail<T>(&self, message: impl Into<String>) -> Result<T, LangError> {
        let (line, col) = self.here();
        Err(LangError::Parse { line, col, message: message.into() })
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &Tok) -> Result<(), LangError> {
        if self.eat(tok) {
            Ok(())
        } else {
            let found = match self.peek() {
                Some(t) => format!("found {t}"),
                None => "found end of input".to_string(),
            };
            self.fail(format!("expected {tok}, {found}"))
        }
    }

    fn ident(&mut self, what: &str) -> Result<String, LangError> {
        match self.peek() {
            Some(Tok::Ident(w)) if !KEYWORDS.contains(&w.as_str()) && w != "I" => {
                let w = w.clone();
                self.pos += 1;
                Ok(w)
            }
            Some(t) => {
                let t = format!("{t}");
                self.fail(format!("expected {what}, found {t}"))
            }
            None => self.fail(format!("expected {what}, found end of input")),
        }
    }

    fn at_word(&self, w: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(k)) if k == w)
    }

    // -- types ------------------------------------------------------------

    fn ptype(&mut self) -> Result<TypeExpr, LangError> {
        if self.at_word("forall") {
            self.pos += 1;
            let x = self.ident("a type variable")?;
            self.expect(&Tok::Dot)?;
            let body = self.ptype()?;
            return Ok(TypeExpr::Forall(x, Box::new(body)));
        }
        let left = self.prod_ty()?;
        if self.eat(&Tok::Arrow) {
            let right = self.ptype()?;
            return Ok(TypeExpr::Lolli(Box::new(left), Box::new(right)));
        }
        Ok(left)
    }

    fn prod_ty(&mut self) -> Result<TypeExpr, LangError> {
        let mut t = self.atom_ty()?;
        loop {
            if self.eat(&Tok::Star) {
                let u = self.atom_ty()?;
                t = TypeExpr::Tensor(Box::new(t), Box::new(u));
            } else if self.eat(&Tok::Amp) {
                let u = self.atom_ty()?;
                t = TypeExpr::With(Box::new(t), Box::new(u));
            } else {
                return Ok(t);
            }
        }
    }

    fn atom_ty(&mut self) -> Result<TypeExpr, LangError> {
        match self.peek() {
            Some(Tok::Ident(w)) if w == "Bool" => {
                self.pos += 1;
                Ok(TypeExpr::Bool)
            }
            Some(Tok::Ident(w)) if w == "I" => {
                self.pos += 1;
                Ok(TypeExpr::Unit)
            }
            Some(Tok::Ident(_)) => Ok(TypeExpr::Var(self.ident("a type")?)),
            Some(Tok::LPar) => {
                self.pos += 1;
                let t = self.ptype()?;
                self.expect(&Tok::RPar)?;
                Ok(t)
            }
            _ => self.fail("expected a type"),
        }
    }

    // -- terms ------------------------------------------------------------

    fn pterm(&mut self) -> Result<Term, LangError> {
        match self.peek() {
            Some(Tok::Lambda) => {
                self.pos += 1;
                let mut binders = vec![self.ident("a variable")?];
                while self.eat(&Tok::Comma) {
                    binders.push(self.ident("a variable")?);
                }
                self.expect(&Tok::Colon)?;
                let ty = self.ptype()?;
                self.expect(&Tok::Dot)?;
                let mut body = self.pterm()?;
                for x in binders.into_iter().rev() {
                    body = Term::Lam(x, ty.clone(), Box::new(body));
                }
                Ok(body)
            }
            Some(Tok::BigLambda) => {
                self.pos += 1;
                let x = self.ident("a type variable")?;
                self.expect(&Tok::Dot)?;
                let body = self.pterm()?;
                Ok(Term::TypeAbs(x, Box::new(body)))
            }
            Some(Tok::Ident(w)) if w == "let" => {
                self.pos += 1;
                let x = self.ident("a variable")?;
                self.expect(&Tok::Star)?;
                let y = self.ident("a variable")?;
                self.expect(&Tok::Eq)?;
                let t = self.pterm()?;
                if !self.at_word("in") {
                    return self.fail("expected in");
                }
                self.pos += 1;
                let u = self.pterm()?;
                Ok(Term::LetPair(x, y, Box::new(t), Box::new(u)))
            }
            _ => self.ppair(),
        }
    }

    fn ppair(&mut self) -> Result<Term, LangError> {
        let t = self.papp()?;
        if self.eat(&Tok::Star) {
            let u = self.ppair()?;
            return Ok(Term::TensorPair(Box::new(t), Box::new(u)));
        }
        Ok(t)
    }

    fn papp(&mut self) -> Result<Term, LangError> {
        let mut head = if self.at_word("fst") {
            self.pos += 1;
            Term::Fst(Box::new(self.patom()?))
        } else if self.at_word("snd") {
            self.pos += 1;
            Term::Snd(Box::new(self.patom()?))
        } else {
            self.patom()?
        };
        loop {
            if self.eat(&Tok::LBrace) {
                let ty = self.ptype()?;
                self.expect(&Tok::RBrace)?;
                head = Term::TypeApp(Box::new(head), ty);
            } else if self.starts_atom() {
                let arg = self.patom()?;
                head = Term::App(Box::new(head), Box::new(arg));
            } else {
                return Ok(head);
            }
        }
    }

    fn starts_atom(&self) -> bool {
        match self.peek() {
            Some(Tok::LPar) | Some(Tok::LAngle) => true,
            Some(Tok::Ident(w)) => {
                !matches!(w.as_str(), "let" | "in" | "fst" | "snd" | "forall" | "Bool" | "I")
            }
            _ => false,
        }
    }

    fn patom(&mut self) -> Result<Term, LangError> {
        match self.peek() {
            Some(Tok::LPar) => {
                self.pos += 1;
                if self.eat(&Tok::RPar) {
                    return Ok(Term::Unit);
                }
                let t = self.pterm()?;
                self.expect(&Tok::RPar)?;
                Ok(t)
            }
            Some(Tok::LAngle) => {
                self.pos += 1;
                let t = self.pterm()?;
                self.expect(&Tok::Comma)?;
                let u = self.pterm()?;
                self.expect(&Tok::RAngle)?;
                Ok(Term::WithPair(Box::new(t), Box::new(u)))
            }
            Some(Tok::Ident(w)) if w == "tt" => {
                self.pos += 1;
                Ok(boolean_term(true))
            }
            Some(Tok::Ident(w)) if w == "ff" => {
                self.pos += 1;
                Ok(boolean_term(false))
            }
            Some(Tok::Ident(w)) if w == "not" => {
                self.pos += 1;
                Ok(Term::Not)
            }
            Some(Tok::Ident(_)) => Ok(Term::Var(self.ident("a term")?)),
            _ => self.fail("expected a term"),
        }
    }
}

/// The polymorphic booleans: project the first or the second of two
/// arguments of the quantified type.
pub fn boolean_term(first: bool) -> Term {
    let x = TypeExpr::Var("X".to_string());
    let picked = if first { "x" } else { "y" };
    Term::TypeAbs(
        "X".to_string(),
        Box::new(Term::Lam(
            "x".to_string(),
            x.clone(),
            Box::new(Term::Lam(
                "y".to_string(),
                x,
                Box::new(Term::Var(picked.to_string())),
            )),
        )),
    )
}

pub fn parse_term(src: &str) -> Result<Term, LangError> {
    let mut p = Parser::new(src)?;
    let t = p.pterm()?;
    if p.peek().is_some() {
        return p.fail("unexpected trailing input");
    }
    Ok(t)
}

pub fn parse_type(src: &str) -> Result<TypeExpr, LangError> {
    let mut p = Parser::new(src)?;
    let t = p.ptype()?;
    if p.peek().is_some() {
        return p.fail("unexpected trailing input");
    }
    Ok(t)
}

// ---------------------------------------------------------------------------
// Typechecking.
// ---------------------------------------------------------------------------

struct Binding {
    name: String,
    ty: TypeExpr,
    used: bool,
}

fn well_scoped(ty: &TypeExpr, tyvars: &[String]) -> Result<(), LangError> {
    for v in ty.free_vars() {
        if !tyvars.contains(&v) {
            return Err(LangError::UnboundTypeVariable(v));
        }
    }
    Ok(())
}

fn check(
    term: &Term,
    ctx: &mut Vec<Binding>,
    tyvars: &mut Vec<String>,
) -> Result<TypeExpr, LangError> {
    match term {
        Term::Var(x) => {
            let binding = ctx
                .iter_mut()
                .rev()
                .find(|b| &b.name == x)
                .ok_or_else(|| LangError::UnboundVariable(x.clone()))?;
            if binding.used {
                return Err(LangError::NonAffineUse(x.clone()));
            }
            binding.used = true;
            Ok(binding.ty.clone())
        }
        Term::Unit => Ok(TypeExpr::Unit),
        Term::Not => Ok(TypeExpr::Lolli(Box::new(TypeExpr::Bool), Box::new(TypeExpr::Bool))),
        Term::Lam(x, ty, body) => {
            well_scoped(ty, tyvars)?;
            ctx.push(Binding { name: x.clone(), ty: ty.clone(), used: false });
            let bty = check(body, ctx, tyvars)?;
            ctx.pop();
            Ok(TypeExpr::Lolli(Box::new(ty.clone()), Box::new(bty)))
        }
        Term::App(t, u) => {
            let fty = check(t, ctx, tyvars)?;
            let aty = check(u, ctx, tyvars)?;
            match fty {
                TypeExpr::Lolli(a, b) => {
                    if *a != aty {
                        return Err(LangError::Mismatch {
                            expected: a.to_string(),
                            got: aty.to_string(),
                        });
                    }
                    Ok(*b)
                }
                other => Err(LangError::NotAFunction(other.to_string())),
            }
        }
        Term::TensorPair(t, u) => {
            let a = check(t, ctx, tyvars)?;
            let b = check(u, ctx, tyvars)?;
            Ok(TypeExpr::Tensor(Box::new(a), Box::new(b)))
        }
        Term::LetPair(x, y, t, u) => {
            let tty = check(t, ctx, tyvars)?;
            let (a, b) = match tty {
                TypeExpr::Tensor(a, b) => (*a, *b),
                other => return Err(LangError::NotATensor(other.to_string())),
            };
            ctx.push(Binding { name: x.clone(), ty: a, used: false });
            ctx.push(Binding { name: y.clone(), ty: b, used: false });
            let uty = check(u, ctx, tyvars)?;
            ctx.pop();
            ctx.pop();
            Ok(uty)
        }
        Term::WithPair(t, u) => {
            // Both components draw on the same resources: only one of them
            // will ever be run, so their uses are merged, not sequenced.
            let before: Vec<bool> = ctx.iter().map(|b| b.used).collect();
            let a = check(t, ctx, tyvars)?;
            let after_left: Vec<bool> = ctx.iter().map(|b| b.used).collect();
            for (binding, was) in ctx.iter_mut().zip(before.iter()) {
                binding.used = *was;
            }
            let b = check(u, ctx, tyvars)?;
            for (binding, left) in ctx.iter_mut().zip(after_left.iter()) {
                binding.used = binding.used || *left;
            }
            Ok(TypeExpr::With(Box::new(a), Box::new(b)))
        }
        Term::Fst(t) => match check(t, ctx, tyvars)? {
            TypeExpr::With(a, _) => Ok(*a),
            other => Err(LangError::NotAChoice(other.to_string())),
        },
        Term::Snd(t) => match check(t, ctx, tyvars)? {
            TypeExpr::With(_, b) => Ok(*b),
            other => Err(LangError::NotAChoice(other.to_string())),
        },
        Term::TypeAbs(x, body) => {
            for binding in ctx.iter() {
                if binding.ty.free_vars().contains(x) {
                    return Err(LangError::ScopeViolation(x.clone()));
                }
            }
            tyvars.push(x.clone());
            let bty = check(body, ctx, tyvars)?;
            tyvars.pop();
            Ok(TypeExpr::Forall(x.clone(), Box::new(bty)))
        }
        Term::TypeApp(t, target) => {
            well_scoped(target, tyvars)?;
            match check(t, ctx, tyvars)? {
                TypeExpr::Forall(x, body) => Ok(body.subst(&x, target)),
                other => Err(LangError::NotQuantified(other.to_string())),
            }
        }
    }
}

/// Type a closed term under the affine discipline.
pub fn typecheck(term: &Term) -> Result<TypeExpr, LangError> {
    check(term, &mut Vec::new(), &mut Vec::new())
}

// ---------------------------------------------------------------------------
// Denotation.
// ---------------------------------------------------------------------------

struct DenoteCx {
    family: InstanceFamily,
    depth: usize,
    /// Closed instantiation targets appearing in the term, with their games
    /// and the index of their embedded form in `family`.
    targets: Vec<(TypeExpr, Game, usize)>,
}

/// The path of factor `i` in a right-nested tensor of `n` factors.
fn factor_path(i: usize, n: usize) -> Vec<Tag> {
    if n == 1 {
        Vec::new()
    } else if i + 1 == n {
        vec![Tag::R; n - 1]
    } else {
        let mut p = vec![Tag::R; i];
        p.push(Tag::L);
        p
    }
}

fn prefixed(prefix: &[Tag], rest: &[Tag]) -> Vec<Tag> {
    let mut p = prefix.to_vec();
    p.extend_from_slice(rest);
    p
}

type Ctx = Vec<(String, TypeExpr)>;

/// Which context entries a term actually mentions, honoring shadowing.
fn used_entries(term: &Term, ctx: &Ctx) -> Vec<bool> {
    fn walk(term: &Term, names: &[String], shadow: &mut Vec<String>, used: &mut [bool]) {
        match term {
            Term::Var(x) => {
                if !shadow.contains(x) {
                    if let Some(i) = names.iter().rposition(|n| n == x) {
                        used[i] = true;
                    }
                }
            }
            Term::Unit | Term::Not => {}
            Term::Lam(x, _, body) => {
                shadow.push(x.clone());
                walk(body, names, shadow, used);
                shadow.pop();
            }
            Term::App(t, u) | Term::TensorPair(t, u) | Term::WithPair(t, u) => {
                walk(t, names, shadow, used);
                walk(u, names, shadow, used);
            }
            Term::LetPair(x, y, t, u) => {
                walk(t, names, shadow, used);
                shadow.push(x.clone());
                shadow.push(y.clone());
                walk(u, names, shadow, used);
                shadow.pop();
                shadow.pop();
            }
            Term::Fst(t) | Term::Snd(t) | Term::TypeAbs(_, t) => walk(t, names, shadow, used),
            Term::TypeApp(t, _) => walk(t, names, shadow, used),
        }
    }
    let names: Vec<String> = ctx.iter().map(|(n, _)| n.clone()).collect();
    let mut used = vec![false; ctx.len()];
    walk(term, &names, &mut Vec::new(), &mut used);
    used
}

fn collect_targets(term: &Term, acc: &mut Vec<TypeExpr>) {
    match term {
        Term::Var(_) | Term::Unit | Term::Not => {}
        Term::Lam(_, _, t) | Term::Fst(t) | Term::Snd(t) | Term::TypeAbs(_, t) => {
            collect_targets(t, acc)
        }
        Term::App(t, u)
        | Term::TensorPair(t, u)
        | Term::WithPair(t, u)
        | Term::LetPair(_, _, t, u) => {
            collect_targets(t, acc);
            collect_targets(u, acc);
        }
        Term::TypeApp(t, ty) => {
            collect_targets(t, acc);
            if !acc.contains(ty) {
                acc.push(ty.clone());
            }
        }
    }
}

fn quantifier_free(ty: &TypeExpr) -> bool {
    match ty {
        TypeExpr::Bool | TypeExpr::Unit | TypeExpr::Var(_) => !matches!(ty, TypeExpr::Var(_)),
        TypeExpr::Lolli(a, b) | TypeExpr::Tensor(a, b) | TypeExpr::With(a, b) => {
            quantifier_free(a) && quantifier_free(b)
        }
        TypeExpr::Forall(_, _) => false,
    }
}

/// Interpret a closed quantifier-free type as a game directly.
fn closed_type_game(ty: &TypeExpr) -> Result<Game, LangError> {
    match ty {
        TypeExpr::Bool => Ok(Game::boolean()),
        TypeExpr::Unit => Ok(Game::unit()),
        TypeExpr::Var(x) => Err(LangError::UnboundTypeVariable(x.clone())),
        TypeExpr::Lolli(a, b) => Ok(Game::lolli(&closed_type_game(a)?, &closed_type_game(b)?)),
        TypeExpr::Tensor(a, b) => Ok(Game::tensor(&closed_type_game(a)?, &closed_type_game(b)?)),
        TypeExpr::With(a, b) => Ok(Game::with(&closed_type_game(a)?, &closed_type_game(b)?)),
        TypeExpr::Forall(_, _) => Err(LangError::UnsupportedInstantiation(ty.to_string())),
    }
}

impl DenoteCx {
    /// Pool the term's instantiation targets, embed them into the token
    /// universe, and extend the instance family with the embeddings so
    /// every quantifier in this denotation ranges over the same family.
    fn prepare(term: &Term, family: &InstanceFamily, depth: usize) -> Result<DenoteCx, LangError> {
        let mut raw = Vec::new();
        collect_targets(term, &mut raw);
        let mut tokens: Vec<String> = family.tokens().to_vec();
        let mut instances: Vec<Game> = family.instances().to_vec();
        let mut targets = Vec::new();
        for ty in raw {
            if !ty.free_vars().is_empty() || !quantifier_free(&ty) {
                return Err(LangError::UnsupportedInstantiation(ty.to_string()));
            }
            let game = closed_type_game(&ty)?;
            let (embedded, emb_tokens) = crate::poly::absorb_into_universe(&game)?;
            for t in emb_tokens {
                if !tokens.contains(&t) {
                    tokens.push(t);
                }
            }
            let idx = match instances.iter().position(|g| g == &embedded) {
                Some(i) => i,
                None => {
                    instances.push(embedded);
                    instances.len() - 1
                }
            };
            targets.push((ty, game, idx));
        }
        let token_refs: Vec<&str> = tokens.iter().map(|t| t.as_str()).collect();
        let family = InstanceFamily::new(&token_refs, family.depth(), instances)?;
        Ok(DenoteCx { family, depth, targets })
    }

    fn type_game(&self, ty: &TypeExpr, tyenv: &BTreeMap<String, Game>) -> Result<Game, LangError> {
        match ty {
            TypeExpr::Bool => Ok(Game::boolean()),
            TypeExpr::Unit => Ok(Game::unit()),
            TypeExpr::Var(x) => tyenv
                .get(x)
                .cloned()
                .ok_or_else(|| LangError::UnboundTypeVariable(x.clone())),
            TypeExpr::Lolli(a, b) => {
                Ok(Game::lolli(&self.type_game(a, tyenv)?, &self.type_game(b, tyenv)?))
            }
            TypeExpr::Tensor(a, b) => {
                Ok(Game::tensor(&self.type_game(a, tyenv)?, &self.type_game(b, tyenv)?))
            }
            TypeExpr::With(a, b) => {
                Ok(Game::with(&self.type_game(a, tyenv)?, &self.type_game(b, tyenv)?))
            }
            TypeExpr::Forall(x, body) => {
                let vt = to_vartype(body, x, tyenv, self)?;
                Ok(build_pi(&vt, &self.family, self.depth)?.game().clone())
            }
        }
    }

    fn ctx_game(&self, ctx: &Ctx, tyenv: &BTreeMap<String, Game>) -> Result<Game, LangError> {
        let mut games = Vec::new();
        for (_, ty) in ctx {
            games.push(self.type_game(ty, tyenv)?);
        }
        Ok(nest_tensor(&games))
    }
}

fn nest_tensor(games: &[Game]) -> Game {
    match games.len() {
        0 => Game::unit(),
        1 => games[0].clone(),
        _ => Game::tensor(&games[0], &nest_tensor(&games[1..])),
    }
}

/// The one-variable expression of a quantifier body with no other free
/// variables: `Bool` and `I` become constants, the bound variable the hole.
pub fn closed_vartype(ty: &TypeExpr, var: &str) -> Result<VarType, LangError> {
    match ty {
        TypeExpr::Var(x) if x == var => Ok(VarType::var()),
        TypeExpr::Var(x) => Err(LangError::UnboundTypeVariable(x.clone())),
        TypeExpr::Bool => Ok(VarType::Const(Game::boolean())),
        TypeExpr::Unit => Ok(VarType::Unit),
        TypeExpr::Lolli(a, b) => {
            Ok(VarType::lolli(closed_vartype(a, var)?, closed_vartype(b, var)?))
        }
        TypeExpr::Tensor(a, b) => {
            Ok(VarType::tensor(closed_vartype(a, var)?, closed_vartype(b, var)?))
        }
        TypeExpr::With(a, b) => {
            Ok(VarType::with(closed_vartype(a, var)?, closed_vartype(b, var)?))
        }
        TypeExpr::Forall(_, _) => Err(LangError::QuantifierDepth),
    }
}

/// A one-variable expression for the body of a quantifier: the bound
/// variable becomes the hole, every other variable in scope is frozen at
/// its current game.
fn to_vartype(
    ty: &TypeExpr,
    var: &str,
    tyenv: &BTreeMap<String, Game>,
    cx: &DenoteCx,
) -> Result<VarType, LangError> {
    match ty {
        TypeExpr::Var(x) if x == var => Ok(VarType::var()),
        TypeExpr::Var(x) => {
            let g = tyenv
                .get(x)
                .cloned()
                .ok_or_else(|| LangError::UnboundTypeVariable(x.clone()))?;
            Ok(VarType::Const(g))
        }
        TypeExpr::Bool => Ok(VarType::Const(Game::boolean())),
        TypeExpr::Unit => Ok(VarType::Unit),
        TypeExpr::Lolli(a, b) => Ok(VarType::lolli(
            to_vartype(a, var, tyenv, cx)?,
            to_vartype(b, var, tyenv, cx)?,
        )),
        TypeExpr::Tensor(a, b) => Ok(VarType::tensor(
            to_vartype(a, var, tyenv, cx)?,
            to_vartype(b, var, tyenv, cx)?,
        )),
        TypeExpr::With(a, b) => Ok(VarType::with(
            to_vartype(a, var, tyenv, cx)?,
            to_vartype(b, var, tyenv, cx)?,
        )),
        TypeExpr::Forall(_, _) => Err(LangError::QuantifierDepth),
    }
}

/// The copycat that repositions the factors of one tensor nest into
/// another. `links` pairs a factor's path in the domain with its path in
/// the codomain; unlisted factors are discarded.
fn reroute(dom: &Game, cod: &Game, links: &[(Vec<Tag>, Vec<Tag>)]) -> Morphism {
    let full: Vec<(Vec<Tag>, Vec<Tag>)> = links
        .iter()
        .map(|(d, c)| (prefixed(&[Tag::L], d), prefixed(&[Tag::R], c)))
        .collect();
    copycat_morphism(dom, cod, &full)
}

/// The complement table on the boolean game.
fn not_strategy() -> Strategy {
    let game = Game::lolli(&Game::boolean(), &Game::boolean());
    let table: BTreeMap<MoveId, MoveId> = [
        (MoveId::tagged(&[Tag::R], "*"), MoveId::tagged(&[Tag::L], "*")),
        (MoveId::tagged(&[Tag::L], "tt"), MoveId::tagged(&[Tag::R], "ff")),
        (MoveId::tagged(&[Tag::L], "ff"), MoveId::tagged(&[Tag::R], "tt")),
    ]
    .into_iter()
    .collect();
    Strategy::from_table(&game, &table)
}

/// The copycat between two games that are identical up to a move renaming:
/// every probe is answered by the image of the same move on the other side.
fn renaming_copycat(dom: &Game, cod: &Game, map: &BTreeMap<MoveId, MoveId>) -> Result<Strategy, LangError> {
    let arena = Game::lolli(dom, cod);
    let inverse: BTreeMap<MoveId, MoveId> =
        map.iter().map(|(k, v)| (v.clone(), k.clone())).collect();
    let partner = |m: &MoveId| -> Option<MoveId> {
        match m.path.first()? {
            Tag::L => {
                let inner = m.strip_prefix(&[Tag::L])?;
                Some(map.get(&inner)?.push_front(Tag::R))
            }
            Tag::R => {
                let inner = m.strip_prefix(&[Tag::R])?;
                Some(inverse.get(&inner)?.push_front(Tag::L))
            }
        }
    };
    let mut plays: Vec<Play> = Vec::new();
    let mut stack: Vec<(usize, Play)> = vec![(ROOT, Vec::new())];
    while let Some((node, play)) = stack.pop() {
        plays.push(play.clone());
        for (probe, odd) in arena.plays().children(node) {
            let Some(echo) = partner(probe) else { continue };
            let Some(even) = arena.plays().child(odd, &echo) else { continue };
            let mut grown = play.clone();
            grown.push(probe.clone());
            grown.push(echo);
            stack.push((even, grown));
        }
    }
    Ok(Strategy::new(&arena, &plays)?)
}

/// Split a context for a two-sided node: the left side receives exactly the
/// entries the left subterm mentions, the right side everything else.
fn split_ctx(ctx: &Ctx, left_uses: &[bool]) -> (Ctx, Ctx, Vec<usize>, Vec<usize>) {
    let mut left = Vec::new();
    let mut right = Vec::new();
    let mut left_idx = Vec::new();
    let mut right_idx = Vec::new();
    for (i, entry) in ctx.iter().enumerate() {
        if left_uses[i] {
            left.push(entry.clone());
            left_idx.push(i);
        } else {
            right.push(entry.clone());
            right_idx.push(i);
        }
    }
    (left, right, left_idx, right_idx)
}

/// The routing morphism from a context to the tensor of two sub-contexts.
fn route_morphism(
    cx: &DenoteCx,
    tyenv: &BTreeMap<String, Game>,
    ctx: &Ctx,
    left_idx: &[usize],
    right_idx: &[usize],
    left_game: &Game,
    right_game: &Game,
) -> Result<Morphism, LangError> {
    let dom = cx.ctx_game(ctx, tyenv)?;
    let cod = Game::tensor(left_game, right_game);
    let n = ctx.len();
    let mut links = Vec::new();
    for (k, &i) in left_idx.iter().enumerate() {
        links.push((
            factor_path(i, n),
            prefixed(&[Tag::L], &factor_path(k, left_idx.len())),
        ));
    }
    for (k, &i) in right_idx.iter().enumerate() {
        links.push((
            factor_path(i, n),
            prefixed(&[Tag::R], &factor_path(k, right_idx.len())),
        ));
    }
    Ok(reroute(&dom, &cod, &links))
}

fn denote_in(
    cx: &DenoteCx,
    tyenv: &BTreeMap<String, Game>,
    ctx: &Ctx,
    term: &Term,
) -> Result<(TypeExpr, Morphism), LangError> {
    match term {
        Term::Var(x) => {
            let i = ctx
                .iter()
                .rposition(|(n, _)| n == x)
                .ok_or_else(|| LangError::UnboundVariable(x.clone()))?;
            let dom = cx.ctx_game(ctx, tyenv)?;
            let cod = cx.type_game(&ctx[i].1, tyenv)?;
            let links = vec![(factor_path(i, ctx.len()), Vec::new())];
            Ok((ctx[i].1.clone(), reroute(&dom, &cod, &links)))
        }
        Term::Unit => {
            let dom = cx.ctx_game(ctx, tyenv)?;
            Ok((TypeExpr::Unit, Morphism::terminal(&dom)))
        }
        Term::Not => {
            let dom = cx.ctx_game(ctx, tyenv)?;
            let point = Morphism::point(&not_strategy());
            let mor = compose_hiding(&Morphism::terminal(&dom), &point)?;
            Ok((
                TypeExpr::Lolli(Box::new(TypeExpr::Bool), Box::new(TypeExpr::Bool)),
                mor,
            ))
        }
        Term::Lam(x, ty, body) => {
            let mut ctx2 = ctx.clone();
            ctx2.push((x.clone(), ty.clone()));
            let (bty, bmor) = denote_in(cx, tyenv, &ctx2, body)?;
            let lam_ty = TypeExpr::Lolli(Box::new(ty.clone()), Box::new(bty));
            if ctx.is_empty() {
                return Ok((lam_ty, Morphism::point(bmor.strategy())));
            }
            let ctx_g = cx.ctx_game(ctx, tyenv)?;
            let arg_g = cx.type_game(ty, tyenv)?;
            let dom0 = Game::tensor(&ctx_g, &arg_g);
            let body_dom = cx.ctx_game(&ctx2, tyenv)?;
            let shuffled = if dom0 == body_dom {
                bmor
            } else {
                let n = ctx.len();
                let mut links = Vec::new();
                for i in 0..n {
                    links.push((
                        prefixed(&[Tag::L], &factor_path(i, n)),
                        factor_path(i, n + 1),
                    ));
                }
                links.push((vec![Tag::R], factor_path(n, n + 1)));
                let shuffle = reroute(&dom0, &body_dom, &links);
                compose_hiding(&shuffle, &bmor)?
            };
            Ok((lam_ty, crate::category::curry(&shuffled)?))
        }
        Term::App(t, u) => {
            let uses = used_entries(t, ctx);
            let (ctx_t, ctx_u, idx_t, idx_u) = split_ctx(ctx, &uses);
            let (fty, fmor) = denote_in(cx, tyenv, &ctx_t, t)?;
            let (aty, amor) = denote_in(cx, tyenv, &ctx_u, u)?;
            let (a, b) = match &fty {
                TypeExpr::Lolli(a, b) => (a.as_ref().clone(), b.as_ref().clone()),
                other => return Err(LangError::NotAFunction(other.to_string())),
            };
            if a != aty {
                return Err(LangError::Mismatch { expected: a.to_string(), got: aty.to_string() });
            }
            let route = route_morphism(cx, tyenv, ctx, &idx_t, &idx_u, fmor.dom(), amor.dom())?;
            let pairing = tensor_mor(&fmor, &amor);
            let apply = ap(&cx.type_game(&a, tyenv)?, &cx.type_game(&b, tyenv)?);
            let mor = compose_hiding(&compose_hiding(&route, &pairing)?, &apply)?;
            Ok((b, mor))
        }
        Term::TensorPair(t, u) => {
            let uses = used_entries(t, ctx);
            let (ctx_t, ctx_u, idx_t, idx_u) = split_ctx(ctx, &uses);
            let (a, fmor) = denote_in(cx, tyenv, &ctx_t, t)?;
            let (b, amor) = denote_in(cx, tyenv, &ctx_u, u)?;
            let route = route_morphism(cx, tyenv, ctx, &idx_t, &idx_u, fmor.dom(), amor.dom())?;
            let mor = compose_hiding(&route, &tensor_mor(&fmor, &amor))?;
            Ok((TypeExpr::Tensor(Box::new(a), Box::new(b)), mor))
        }
        Term::LetPair(x, y, t, u) => {
            let uses = used_entries(t, ctx);
            let (ctx_t, ctx_rest, idx_t, idx_rest) = split_ctx(ctx, &uses);
            let (tty, tmor) = denote_in(cx, tyenv, &ctx_t, t)?;
            let (a, b) = match tty {
                TypeExpr::Tensor(a, b) => (*a, *b),
                other => return Err(LangError::NotATensor(other.to_string())),
            };
            let mut ctx_u = ctx_rest.clone();
            ctx_u.push((x.clone(), a.clone()));
            ctx_u.push((y.clone(), b.clone()));
            let (uty, umor) = denote_in(cx, tyenv, &ctx_u, u)?;

            let rest_g = cx.ctx_game(&ctx_rest, tyenv)?;
            let route = route_morphism(cx, tyenv, ctx, &idx_t, &idx_rest, tmor.dom(), &rest_g)?;
            let opened = tensor_mor(&tmor, &Morphism::identity(&rest_g));
            // (A ⊗ B) ⊗ rest → rest, x:A, y:B
            let m = ctx_rest.len();
            let mut links = Vec::new();
            for k in 0..m {
                links.push((
                    prefixed(&[Tag::R], &factor_path(k, m)),
                    factor_path(k, m + 2),
                ));
            }
            links.push((vec![Tag::L, Tag::L], factor_path(m, m + 2)));
            links.push((vec![Tag::L, Tag::R], factor_path(m + 1, m + 2)));
            let shuffle = reroute(opened.cod(), &cx.ctx_game(&ctx_u, tyenv)?, &links);

            let mor = compose_hiding(
                &compose_hiding(&compose_hiding(&route, &opened)?, &shuffle)?,
                &umor,
            )?;
            Ok((uty, mor))
        }
        Term::WithPair(t, u) => {
            let (a, fmor) = denote_in(cx, tyenv, ctx, t)?;
            let (b, gmor) = denote_in(cx, tyenv, ctx, u)?;
            let mor = pair(&fmor, &gmor)?;
            Ok((TypeExpr::With(Box::new(a), Box::new(b)), mor))
        }
        Term::Fst(t) => {
            let (ty, mor) = denote_in(cx, tyenv, ctx, t)?;
            let (a, b) = match ty {
                TypeExpr::With(a, b) => (*a, *b),
                other => return Err(LangError::NotAChoice(other.to_string())),
            };
            let proj = fst(&cx.type_game(&a, tyenv)?, &cx.type_game(&b, tyenv)?);
            Ok((a, compose_hiding(&mor, &proj)?))
        }
        Term::Snd(t) => {
            let (ty, mor) = denote_in(cx, tyenv, ctx, t)?;
            let (a, b) = match ty {
                TypeExpr::With(a, b) => (*a, *b),
                other => return Err(LangError::NotAChoice(other.to_string())),
            };
            let proj = snd(&cx.type_game(&a, tyenv)?, &cx.type_game(&b, tyenv)?);
            Ok((b, compose_hiding(&mor, &proj)?))
        }
        Term::TypeAbs(x, body) => {
            let mut tyenv2 = tyenv.clone();
            tyenv2.insert(x.clone(), cx.family.universe_game().clone());
            let (bty, bmor) = denote_in(cx, &tyenv2, ctx, body)?;
            let vt = to_vartype(&bty, x, tyenv, cx)?;
            let pi = build_pi(&vt, &cx.family, cx.depth)?;
            // The body was interpreted over the full universe, where the
            // opponent may probe positions no instance decomposes into —
            // positions the quantifier game never reaches. Cut the body to
            // the quantifier arena before abstracting.
            let dom = cx.ctx_game(ctx, tyenv)?;
            let arena = Game::lolli(&dom, pi.game());
            let kept: Vec<Play> = bmor
                .strategy()
                .even_plays()
                .into_iter()
                .filter(|p| arena.plays().contains(p))
                .collect();
            let trimmed = Strategy::new(bmor.strategy().game(), &kept)?;
            let mor = pi.abstract_uniform(&dom, &trimmed)?;
            Ok((TypeExpr::Forall(x.clone(), Box::new(bty)), mor))
        }
        Term::TypeApp(t, target) => {
            let (fty, fmor) = denote_in(cx, tyenv, ctx, t)?;
            let (x, body) = match fty {
                TypeExpr::Forall(x, body) => (x, *body),
                other => return Err(LangError::NotQuantified(other.to_string())),
            };
            let vt = to_vartype(&body, &x, tyenv, cx)?;
            let pi = build_pi(&vt, &cx.family, cx.depth)?;
            let (_, target_game, idx) = cx
                .targets
                .iter()
                .find(|(ty, _, _)| ty == target)
                .ok_or_else(|| LangError::UnsupportedInstantiation(target.to_string()))?;
            let projection = pi.projection(*idx)?;
            let narrowed = compose_hiding(&fmor, &projection)?;

            // The projection lands on the embedded instance; rename its
            // moves back to the target's own alphabet.
            let result_ty = body.subst(&x, target);
            let cod = cx.type_game(&result_ty, tyenv)?;
            // The embedded instance carries an alias move per (side, token);
            // only aliases of actual target moves are reachable, and the
            // side matters: a token can name an ask on one side and an
            // answer on the other.
            let alias_to_move: BTreeMap<MoveId, MoveId> = target_game
                .moves()
                .map(|(m, p)| (universe_alias(m, p), m.clone()))
                .collect();
            let occurrences = vt.var_occurrences();
            let mut rename: BTreeMap<MoveId, MoveId> = BTreeMap::new();
            for (m, _) in projection.cod().moves() {
                let image = occurrences.iter().find_map(|occ| {
                    let inner = m.strip_prefix(occ)?;
                    let original = alias_to_move.get(&inner)?;
                    Some(MoveId {
                        path: prefixed(occ, &original.path),
                        name: original.name.clone(),
                    })
                });
                rename.insert(m.clone(), image.unwrap_or_else(|| m.clone()));
            }
            let back = renaming_copycat(projection.cod(), &cod, &rename)?;
            let back_mor = Morphism::new(projection.cod(), &cod, back)?;
            Ok((result_ty, compose_hiding(&narrowed, &back_mor)?))
        }
    }
}

/// Compile a closed, well-typed term to the strategy it denotes. The family
/// supplies the instances every quantifier in the term ranges over
/// (extended with any instantiation targets the term mentions), and `depth`
/// bounds the quantifier game's materialisation.
pub fn denote(
    term: &Term,
    family: &InstanceFamily,
    depth: usize,
) -> Result<(TypeExpr, Strategy), LangError> {
    let ty = typecheck(term)?;
    let cx = DenoteCx::prepare(term, family, depth)?;
    let tyenv = BTreeMap::new();
    let (dty, mor) = denote_in(&cx, &tyenv, &Vec::new(), term)?;
    debug_assert_eq!(dty, ty);
    Ok((ty, mor.to_point()?))
}
