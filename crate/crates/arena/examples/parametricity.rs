//! Relations between games, extended in time.
//!
//! A relation on positions lifts to a relation on strategies: related
//! Opponent probes must draw related responses, forever. The lifted
//! diagonal is equality of behaviour; lifting through ⊸ relates strategies
//! that map related arguments to related results; and the quantifier game
//! is itself the meet of its instance diagonals — parametricity as a
//! theorem about the model, checked here by enumeration.

use arena::param::rel_apply;
use arena::{
    build_pi, lift_check, rel_leq, rel_lolli, rel_meet, InstanceFamily, Relation, VarType,
};
use arena::{Game, Morphism, MoveId, Strategy};

fn main() {
    let boolean = Game::boolean();
    let diag = Relation::diagonal(&boolean);

    let tt = Strategy::new(
        &boolean,
        &[vec![], vec![MoveId::base("*"), MoveId::base("tt")]],
    )
    .unwrap();
    let ff = Strategy::new(
        &boolean,
        &[vec![], vec![MoveId::base("*"), MoveId::base("ff")]],
    )
    .unwrap();

    assert!(lift_check(&diag, &tt, &tt).unwrap().holds());
    println!("tt is related to itself under the lifted diagonal");
    let verdict = lift_check(&diag, &tt, &ff).unwrap();
    let witness = verdict.witness().unwrap();
    println!("tt vs ff fails: {}", witness.describe());

    // Copy-cat respects every ⊸-lifted diagonal; that is exactly the
    // logical-relations reading of the identity.
    let id = Morphism::identity(&boolean);
    assert!(lift_check(&rel_lolli(&diag, &diag), id.strategy(), id.strategy())
        .unwrap()
        .holds());
    println!("copy-cat maps related arguments to related results");

    // The meet of relations is their greatest lower bound in the
    // definitional order (not plain intersection of pair sets).
    let full = Relation::full(&boolean, &boolean);
    let meet = rel_meet(&[diag.clone(), full.clone()]).unwrap();
    assert!(rel_leq(&meet, &diag).unwrap() && rel_leq(&meet, &full).unwrap());
    println!("diag ⋀ full sits below both inputs");

    // Parametricity at the quantifier: acting the two-argument type on each
    // instance diagonal and meeting the images gives back the diagonal of
    // the quantifier game itself.
    let x = VarType::var;
    let two_arg = VarType::lolli(x(), VarType::lolli(x(), x()));
    let family = InstanceFamily::flat_all(&["a"], 2).unwrap();
    let depth = 4;
    let fu = two_arg.apply_to(&[family.universe_game().clone()], depth).unwrap();
    let mut images = Vec::new();
    for instance in family.instances() {
        let image = rel_apply(&two_arg, &Relation::diagonal(instance), depth).unwrap();
        images.push(image.reframed(&fu, &fu).unwrap());
    }
    let meet = rel_meet(&images).unwrap();
    let pi = build_pi(&two_arg, &family, depth).unwrap();
    let direct = Relation::diagonal(pi.game()).reframed(meet.left(), meet.right()).unwrap();
    assert_eq!(meet, direct);
    println!(
        "the quantifier game's diagonal = meet of {} instance images",
        images.len()
    );
}
