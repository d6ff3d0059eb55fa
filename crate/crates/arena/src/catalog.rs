//! Exhaustive families of small games, for sweeping laws at desk scale.
//!
//! [`small_games`] enumerates every base game over canonically named
//! alphabets up to a move count and depth. The counts grow fast, so the
//! intended use is tiny parameters — `small_games(2, 2)` yields the
//! fifteen-game family the law sweeps run on: every composite function-space
//! arena built from it stays within four moves and depth four.

use crate::game::{Game, MoveId, Play, Polarity};

/// Every base game with at most `max_moves` moves (canonically named
/// `a`, `b`, …) and positions of length at most `max_depth`, in a stable
/// order. Isomorphic games with different namings both appear; the sweeps
/// want raw coverage, not quotients.
pub fn small_games(max_moves: usize, max_depth: usize) -> Vec<Game> {
    const NAMES: [&str; 4] = ["a", "b", "c", "d"];
    assert!(max_moves <= NAMES.len(), "small game alphabets stop at {}", NAMES.len());
    let mut out = Vec::new();
    for k in 0..=max_moves {
        let names = &NAMES[..k];
        for mask in 0u32..(1 << k) {
            let alphabet: Vec<(MoveId, Polarity)> = names
                .iter()
                .enumerate()
                .map(|(i, n)| {
                    let pol = if mask & (1 << i) != 0 { Polarity::P } else { Polarity::O };
                    (MoveId::base(n), pol)
                })
                .collect();
            for plays in position_sets(&alphabet, max_depth, 0) {
                out.push(
                    Game::flat(alphabet.clone(), plays)
                        .expect("enumerated positions are alternating by construction"),
                );
            }
        }
    }
    out
}

/// All prefix-closed alternating position sets over a labelled alphabet, to
/// a depth, as lists of plays relative to the current parity.
fn position_sets(
    alphabet: &[(MoveId, Polarity)],
    depth_left: usize,
    parity: usize,
) -> Vec<Vec<Play>> {
    let mut acc: Vec<Vec<Play>> = vec![vec![Vec::new()]];
    if depth_left == 0 {
        return acc;
    }
    let mover = Polarity::mover_at(parity);
    for (m, pol) in alphabet {
        if *pol != mover {
            continue;
        }
        let mut options: Vec<Vec<Play>> = vec![Vec::new()]; // leave this move out
        for sub in position_sets(alphabet, depth_left - 1, parity + 1) {
            let prefixed: Vec<Play> = sub
                .into_iter()
                .map(|p| {
                    let mut q = Vec::with_capacity(p.len() + 1);
                    q.push(m.clone());
                    q.extend(p);
                    q
                })
                .collect();
            options.push(prefixed);
        }
        let mut next = Vec::with_capacity(acc.len() * options.len());
        for base in &acc {
            for opt in &options {
                let mut merged = base.clone();
                merged.extend(opt.iter().cloned());
                next.push(merged);
            }
        }
        acc = next;
    }
    acc
}

/// The pinned four-game family the heavier law sweeps (associativity,
/// functoriality, β) quantify over: the silent game, a lone unanswered
/// question, a question with one answer, and the boolean game.
pub fn law_games() -> Vec<Game> {
    vec![
        Game::unit(),
        Game::flat_named(&[("q", Polarity::O)], &[&["q"]]).unwrap(),
        Game::flat_named(&[("q", Polarity::O), ("x", Polarity::P)], &[&["q", "x"]]).unwrap(),
        Game::boolean(),
    ]
}
