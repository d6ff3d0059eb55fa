//! Copy-cat and complement: the two canonical strategies on 𝔹 ⊸ 𝔹.
//!
//! Copy-cat relays every move to the other side unchanged and interprets
//! the identity. The complement relays the question but swaps the answers.
//! Feeding the constant `tt` through the complement — under both
//! composition algorithms — yields the constant `ff`.

use std::collections::BTreeMap;

use arena::category::{compose_hiding, compose_pointwise};
use arena::game::Tag;
use arena::{Game, Morphism, MoveId, Strategy};

fn main() {
    let boolean = Game::boolean();
    let identity = Morphism::identity(&boolean);
    println!("copy-cat on 𝔹 ⊸ 𝔹 responds:");
    for (on, with) in identity.strategy().to_table().unwrap() {
        println!("  {on} -> {with}");
    }

    let table: BTreeMap<MoveId, MoveId> = [
        (MoveId::tagged(&[Tag::R], "*"), MoveId::tagged(&[Tag::L], "*")),
        (MoveId::tagged(&[Tag::L], "tt"), MoveId::tagged(&[Tag::R], "ff")),
        (MoveId::tagged(&[Tag::L], "ff"), MoveId::tagged(&[Tag::R], "tt")),
    ]
    .into_iter()
    .collect();
    let not = Morphism::new(
        &boolean,
        &boolean,
        Strategy::from_table(&Game::lolli(&boolean, &boolean), &table),
    )
    .unwrap();

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

    let hidden = compose_hiding(&Morphism::point(&tt), &not).unwrap();
    let pointwise = compose_pointwise(&Morphism::point(&tt), &not).unwrap();
    assert_eq!(hidden.strategy().play_set(), pointwise.strategy().play_set());
    println!("both composition algorithms agree on tt;not");

    let flipped = hidden.to_point().unwrap();
    assert_eq!(flipped.play_set(), ff.play_set());
    println!("tt;not = ff");

    // And through copy-cat, nothing changes.
    let same = compose_hiding(&Morphism::point(&ff), &identity).unwrap().to_point().unwrap();
    assert_eq!(same.play_set(), ff.play_set());
    println!("ff;copy-cat = ff");
}
