//! Everything on disk: the JSON interchange formats.
//!
//! Games, strategies, refined games, and relations all serialize to plain
//! JSON with stable key order, so runs are reproducible and diffable. A
//! strategy file may declare its function-space split, which is what lets a
//! reloaded file take part in composition again.

use arena::category::compose_hiding;
use arena::format::{read_strategy, write_game, write_strategy};
use arena::{Game, Morphism, MoveId, Strategy};
use std::collections::BTreeMap;

use arena::game::Tag;

fn main() {
    let dir = std::env::temp_dir().join("arena-interchange-example");
    std::fs::create_dir_all(&dir).unwrap();

    let boolean = Game::boolean();
    let game_path = dir.join("bool.game");
    write_game(&boolean, &game_path).unwrap();
    println!("wrote {}", game_path.display());
    println!("{}", std::fs::read_to_string(&game_path).unwrap());

    let table: BTreeMap<MoveId, MoveId> = [
        (MoveId::tagged(&[Tag::R], "*"), MoveId::tagged(&[Tag::L], "*")),
        (MoveId::tagged(&[Tag::L], "tt"), MoveId::tagged(&[Tag::R], "ff")),
        (MoveId::tagged(&[Tag::L], "ff"), MoveId::tagged(&[Tag::R], "tt")),
    ]
    .into_iter()
    .collect();
    let not = Strategy::from_table(&Game::lolli(&boolean, &boolean), &table);
    let strat_path = dir.join("not.strat");
    write_strategy(&not, Some((&boolean, &boolean)), &strat_path).unwrap();
    println!("wrote {} with its ⊸-split declared", strat_path.display());

    // Reload and compose: the split survives the round trip.
    let loaded = read_strategy(&strat_path).unwrap();
    let (dom, cod) = loaded.split.clone().unwrap();
    let not_again = Morphism::new(&dom, &cod, loaded.strategy).unwrap();
    let tt = Strategy::new(
        &boolean,
        &[vec![], vec![MoveId::base("*"), MoveId::base("tt")]],
    )
    .unwrap();
    let out = compose_hiding(&Morphism::point(&tt), &not_again).unwrap().to_point().unwrap();
    let answered: Vec<String> = out
        .even_plays()
        .iter()
        .filter(|p| !p.is_empty())
        .map(|p| p.iter().map(|m| m.to_string()).collect::<Vec<_>>().join("·"))
        .collect();
    println!("reloaded complement still flips: {}", answered.join(" "));
    assert_eq!(answered, vec!["*·ff"]);

    std::fs::remove_dir_all(&dir).ok();
}
