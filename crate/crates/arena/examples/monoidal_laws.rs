//! The category laws, checked by brute force at desk scale.
//!
//! Strategies up to play-set equality form a symmetric monoidal closed
//! category. This sweep takes every game in the small catalogue, every
//! strategy on a sample of function spaces over it, and confirms identity
//! and associativity hold on the nose — no quotients, no up-to.

use arena::catalog::small_games;
use arena::category::{compose_hiding, symm};
use arena::strategy::{enumerate_strategies, EnumOpts};
use arena::{Game, Morphism};

fn main() {
    let games = small_games(2, 2);
    println!("catalogue: {} games with ≤ 2 moves, depth ≤ 2", games.len());

    let opts = EnumOpts { history_free_only: false, max: 10_000 };
    let mut identities = 0usize;
    for a in &games {
        for b in &games {
            let id_a = Morphism::identity(a);
            let id_b = Morphism::identity(b);
            let hom = Game::lolli(a, b);
            for strat in enumerate_strategies(&hom, &opts).unwrap() {
                let f = Morphism::new(a, b, strat).unwrap();
                let left = compose_hiding(&id_a, &f).unwrap();
                let right = compose_hiding(&f, &id_b).unwrap();
                assert_eq!(left.strategy().play_set(), f.strategy().play_set());
                assert_eq!(right.strategy().play_set(), f.strategy().play_set());
                identities += 1;
            }
        }
    }
    println!("identity laws: {identities} morphisms, zero violations");

    // Associativity over a diagonal slice of the catalogue's hom-sets.
    let mut triples = 0usize;
    for g in games.iter().take(6) {
        let hom = Game::lolli(g, g);
        let strats = enumerate_strategies(&hom, &opts).unwrap();
        for f in &strats {
            for gg in &strats {
                for h in &strats {
                    let f = Morphism::new(g, g, f.clone()).unwrap();
                    let gg = Morphism::new(g, g, gg.clone()).unwrap();
                    let h = Morphism::new(g, g, h.clone()).unwrap();
                    let lhs =
                        compose_hiding(&compose_hiding(&f, &gg).unwrap(), &h).unwrap();
                    let rhs =
                        compose_hiding(&f, &compose_hiding(&gg, &h).unwrap()).unwrap();
                    assert_eq!(lhs.strategy().play_set(), rhs.strategy().play_set());
                    triples += 1;
                }
            }
        }
    }
    println!("associativity: {triples} triples, zero violations");

    // The symmetry braiding is involutive.
    let b = Game::boolean();
    let u = Game::unit();
    let twice = compose_hiding(&symm(&b, &u), &symm(&u, &b)).unwrap();
    assert_eq!(
        twice.strategy().play_set(),
        Morphism::identity(&Game::tensor(&b, &u)).strategy().play_set()
    );
    println!("symm;symm = id");
}
