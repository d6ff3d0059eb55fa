//! The quantifier game for ∀X. X ⊸ (X ⊸ X) and its census.
//!
//! The Environment reveals which instance it is playing only through its
//! moves; the System must keep every still-possible instance happy. Under
//! that veil of ignorance exactly two history-free winning strategies
//! survive: the copy-cats that answer from the first or from the second
//! argument — the two booleans. Dropping the history-free cut admits more,
//! including a detour strategy that tours both arguments before answering.

use arena::poly::{detour_strategy, winning_census};
use arena::winning::{is_winning, WinningVerdict};
use arena::{build_pi, InstanceFamily, RefinedGame, VarType, WinningSpec};

fn main() {
    let x = VarType::var;
    let two_arg = VarType::lolli(x(), VarType::lolli(x(), x()));

    // Three growing instance families, one census each: the survivors
    // never change, because the small families already contain the
    // refuting instances.
    for cap in [Some(4), Some(6), None] {
        let family = InstanceFamily::flat_all(&["a", "b"], 3).unwrap();
        let family = match cap {
            Some(c) => family.capped(c).unwrap(),
            None => family,
        };
        let pi = build_pi(&two_arg, &family, 6).unwrap();
        let census = winning_census(&pi, true, 1_000_000).unwrap();
        println!(
            "family of {}: {} history-free winning strategies on {} moves",
            pi.family().len(),
            census.len(),
            pi.game().move_count(),
        );
        assert_eq!(census.len(), 2);
    }

    let family = InstanceFamily::flat_all(&["a", "b"], 3).unwrap();
    let pi = build_pi(&two_arg, &family, 6).unwrap();
    let census = winning_census(&pi, true, 1_000_000).unwrap();
    for s in &census {
        let table = s.to_table().unwrap();
        let (on, with) = table.iter().next().unwrap();
        println!("survivor answers {on} with {with}");
    }

    // Projecting the quantified game onto an instance is a copy-cat: the
    // veil of ignorance lifts pointwise.
    let sample = pi.family().len().min(8);
    for idx in 0..sample {
        let proj = pi.projection(idx).unwrap();
        assert!(proj.strategy().history_freedom().is_free());
    }
    println!("sampled {sample} instance projections: all copy-cats");

    // The detour: answer the question by touring both arguments. Winning,
    // but its final answer repeats the opening move — history matters.
    let detour = detour_strategy(&pi).unwrap();
    assert!(!detour.history_freedom().is_free());
    assert!(census.iter().all(|s| s.play_set() != detour.play_set()));
    let refined = RefinedGame {
        game: pi.game().clone(),
        spec: pi.winning_spec(&WinningSpec::All).unwrap(),
    };
    assert!(matches!(
        is_winning(&detour, &refined, 16).unwrap(),
        WinningVerdict::Winning { .. }
    ));
    println!("the detour strategy is winning but not history-free");
}
