//! Totality is not enough: winning conditions and the chattering theorem.
//!
//! Over games with infinite plays, two total strategies can compose to a
//! strategy that never answers — the hidden middle game chatters forever.
//! Winning conditions repair the theorem: winning strategies compose to
//! winning strategies. This example shows both halves on the stream game,
//! with the endless middle dialogue pinned down as an explicit cycle.

use std::collections::BTreeMap;

use arena::game::{fmt_play, Tag};
use arena::winning::{
    chattering_certificate, is_total, is_winning, winning_compose, CompositionReport, Totality,
    WinningVerdict,
};
use arena::{Game, Morphism, MoveId, RefinedGame, Strategy, WinningSpec};

fn mv(path: &[Tag], name: &str) -> MoveId {
    MoveId::tagged(path, name)
}

fn main() {
    let stream = Game::stream(4);
    let boolean = Game::boolean();
    let unit = Game::unit();

    // f : I ⊸ Str feeds zeros; g : Str ⊸ 𝔹 consults the stream forever.
    let f_table: BTreeMap<MoveId, MoveId> =
        [(mv(&[Tag::R], "*"), mv(&[Tag::R], "0"))].into_iter().collect();
    let f = Morphism::new(
        &unit,
        &stream,
        Strategy::from_table(&Game::lolli(&unit, &stream), &f_table),
    )
    .unwrap();
    let g_table: BTreeMap<MoveId, MoveId> = [
        (mv(&[Tag::R], "*"), mv(&[Tag::L], "*")),
        (mv(&[Tag::L], "0"), mv(&[Tag::L], "*")),
        (mv(&[Tag::L], "1"), mv(&[Tag::L], "*")),
    ]
    .into_iter()
    .collect();
    let g = Morphism::new(
        &stream,
        &boolean,
        Strategy::from_table(&Game::lolli(&stream, &boolean), &g_table),
    )
    .unwrap();

    assert_eq!(is_total(f.strategy()), Totality::Total);
    assert_eq!(is_total(g.strategy()), Totality::Total);
    println!("both strategies are total");

    match chattering_certificate(&f, &g).unwrap() {
        CompositionReport::Chattering { cycle, .. } => {
            println!("their composite chatters, repeating {}", fmt_play(&cycle));
        }
        other => panic!("expected chattering, got {other:?}"),
    }

    // The culprit: g is not winning on its function space. An infinite
    // left dialogue with a silent right violates the ⊸ winning clause.
    let g_refined = RefinedGame {
        game: Game::lolli(&stream, &boolean),
        spec: WinningSpec::Lolli(Box::new(WinningSpec::All), Box::new(WinningSpec::All)),
    };
    match is_winning(g.strategy(), &g_refined, 8).unwrap() {
        WinningVerdict::NotWinning { lasso } => {
            println!("g is total but not winning: loses {}", lasso.describe());
        }
        other => panic!("expected a losing lasso, got {other}"),
    }
    let all = WinningSpec::All;
    let err = winning_compose(&f, &g, &all, &all, &all, 8).unwrap_err();
    println!("winning_compose refuses the pair: {err}");

    // With winning premises the theorem holds: copy-cat wins the stream's
    // function space, and composing it with itself stays total.
    let id = Morphism::identity(&stream);
    let id_refined = RefinedGame {
        game: Game::lolli(&stream, &stream),
        spec: WinningSpec::Lolli(Box::new(WinningSpec::All), Box::new(WinningSpec::All)),
    };
    assert!(matches!(
        is_winning(id.strategy(), &id_refined, 8).unwrap(),
        WinningVerdict::Winning { .. }
    ));
    match winning_compose(&id, &id, &all, &all, &all, 8).unwrap() {
        CompositionReport::Composed { totality, .. } => {
            assert_eq!(totality, Totality::Total);
            println!("copy-cat;copy-cat composes without chattering and stays total");
        }
        other => panic!("expected a clean composite, got {other:?}"),
    }
}
