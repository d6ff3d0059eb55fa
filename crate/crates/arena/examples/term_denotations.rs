//! From syntax to strategies: the affine term language.
//!
//! Terms are parsed, typechecked affinely (weakening yes, contraction no),
//! and compiled to strategies. The identity becomes copy-cat, the boolean
//! constants become the two quantifier-game survivors, and instantiating a
//! polymorphic term recovers the behaviour at the chosen type.

use arena::category::compose_hiding;
use arena::{denote, parse_term, typecheck, Game, InstanceFamily, Morphism, Strategy};

fn show(src: &str, family: &InstanceFamily) -> (String, Strategy) {
    let term = parse_term(src).unwrap();
    let (ty, strat) = denote(&term, family, 6).unwrap();
    println!("  {src}  :  {ty}");
    (ty.to_string(), strat)
}

fn main() {
    let family = InstanceFamily::flat_all(&["a"], 2).unwrap();

    println!("typechecking is affine:");
    assert!(typecheck(&parse_term(r"\x:Bool. x").unwrap()).is_ok());
    assert!(typecheck(&parse_term(r"\x:Bool. x * x").unwrap()).is_err());
    assert!(typecheck(&parse_term(r"\x:Bool. \y:Bool. x").unwrap()).is_ok());
    println!("  x * x rejected, weakening accepted");

    println!("denotations:");
    let (_, id) = show(r"\x:Bool. x", &family);
    assert_eq!(
        id.play_set(),
        Morphism::identity(&Game::boolean()).strategy().play_set()
    );

    let (_, not) = show("not", &family);
    assert_eq!(not.to_table().map(|t| t.len()), Some(3));

    let (tt_ty, tt) = show("tt", &family);
    let (ff_ty, ff) = show("ff", &family);
    assert_eq!(tt_ty, ff_ty);
    assert_ne!(tt.play_set(), ff.play_set());

    // Instantiating the polymorphic identity at Bool gives copy-cat back.
    let (_, inst) = show(r"(/\X. \x:X. x) {Bool}", &family);
    assert_eq!(
        inst.play_set(),
        Morphism::identity(&Game::boolean()).strategy().play_set()
    );

    // β and η hold semantically: the redex and its reduct denote the same
    // strategy.
    let (_, redex) = show(r"(\x:Bool -o Bool. x) not", &family);
    let (_, eta) = show(r"\x:Bool. not x", &family);
    assert_eq!(redex.play_set(), not.play_set());
    assert_eq!(eta.play_set(), not.play_set());
    println!("β- and η-equal terms denote equal strategies");

    // The complement composes like its table says: tt̂;not = f̂f.
    let b = Game::boolean();
    let not_mor = {
        let term = parse_term("not").unwrap();
        let (_, s) = denote(&term, &family, 6).unwrap();
        Morphism::new(&b, &b, s).unwrap()
    };
    let tt_point = Strategy::new(
        &b,
        &[vec![], vec![arena::MoveId::base("*"), arena::MoveId::base("tt")]],
    )
    .unwrap();
    let composed =
        compose_hiding(&Morphism::point(&tt_point), &not_mor).unwrap().to_point().unwrap();
    let ff_point = Strategy::new(
        &b,
        &[vec![], vec![arena::MoveId::base("*"), arena::MoveId::base("ff")]],
    )
    .unwrap();
    assert_eq!(composed.play_set(), ff_point.play_set());
    println!("tt̂;not = f̂f");
}
