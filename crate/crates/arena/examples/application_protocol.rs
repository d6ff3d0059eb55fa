//! Function application as a dialogue protocol.
//!
//! `ap : (A⊸B) ⊗ A ⊸ B` answers a question about the result by asking the
//! function, relays the function's demand to the argument, and carries the
//! answer back. Currying and uncurrying shuffle a morphism between the
//! tensor and the function space without changing what it says, and the
//! β-law — uncurry(curry(f)) = f — falls out of play-set equality.

use arena::category::{ap, compose_hiding, curry, tensor_mor, uncurry};
use arena::{Game, Morphism};

fn main() {
    let b = Game::boolean();
    let eval = ap(&b, &b);
    println!("ap on (𝔹⊸𝔹) ⊗ 𝔹 ⊸ 𝔹 has {} plays", eval.strategy().even_plays().len());

    // The identity 𝔹⊗𝔹 ⊸ 𝔹⊗𝔹, curried to 𝔹 ⊸ (𝔹 ⊸ 𝔹⊗𝔹) and back.
    let f = Morphism::identity(&Game::tensor(&b, &b));
    let curried = curry(&f).unwrap();
    println!(
        "curry turns {} ⊸ {} into {} ⊸ {}",
        f.dom().move_count(),
        f.cod().move_count(),
        curried.dom().move_count(),
        curried.cod().move_count(),
    );
    let back = uncurry(&curried).unwrap();
    assert_eq!(back.strategy().play_set(), f.strategy().play_set());
    println!("uncurry(curry(f)) = f");

    // β through ap: (curry(f) ⊗ id);ap recovers f itself.
    let staged = compose_hiding(
        &tensor_mor(&curried, &Morphism::identity(&b)),
        &ap(&b, &Game::tensor(&b, &b)),
    )
    .unwrap();
    assert_eq!(staged.strategy().play_set(), f.strategy().play_set());
    println!("(curry(f) ⊗ id);ap = f");
}
