//! The smallest interesting game: one question, two answers.
//!
//! The Environment opens with `*`, the System may answer `tt` or `ff` — or
//! sit silent forever. Those three behaviours are the game's only
//! strategies, and the enumerator finds exactly them.

use arena::game::fmt_play;
use arena::strategy::{enumerate_strategies, EnumOpts};
use arena::Game;

fn main() {
    let boolean = Game::boolean();
    println!("the boolean game:");
    for (m, pol) in boolean.moves() {
        println!("  move {m} ({pol:?})");
    }
    for play in boolean.all_plays() {
        println!("  play {}", fmt_play(&play));
    }

    let opts = EnumOpts { history_free_only: false, max: 1000 };
    let strategies = enumerate_strategies(&boolean, &opts).unwrap();
    println!("{} strategies:", strategies.len());
    for s in &strategies {
        let plays = s.even_plays();
        let longest = plays.iter().max_by_key(|p| p.len()).unwrap();
        println!("  {}", if longest.is_empty() { "stay silent".to_string() } else { fmt_play(longest) });
    }
    assert_eq!(strategies.len(), 3);
}
