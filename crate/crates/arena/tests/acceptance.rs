//! End-to-end checks at desk scale, one test per headline guarantee:
//! exact censuses, oracle equivalence of the two composition algorithms,
//! exhaustive law sweeps over the small-game catalogue, the switching and
//! covering facts, winning composition, the quantifier experiments, term
//! definability, and the relation calculus. Every budget and tolerance is
//! pinned here as a constant.

use std::collections::{BTreeMap, BTreeSet};

use arena::catalog::small_games;
use arena::category::{
    ap, assoc, compose_hiding, compose_pointwise, covering_witness, curry, interactions, pair,
    symm, tensor_mor, uncurry, unit_l, InteractionMove, Zone,
};
use arena::game::{switching_states, SwitchVerdict};
use arena::param::{
    count_relations, definitional_leq, enumerate_relations, spec_structure_compose_check,
};
use arena::poly::{detour_strategy, winning_census};
use arena::strategy::{enumerate_strategies, EnumOpts};
use arena::winning::{
    admits_lasso, chattering_certificate, is_total, is_winning, lasso_wins, winning_compose,
    CompositionReport, Totality, WinningError, WinningVerdict,
};
use arena::{
    build_pi, denote, parse_term, rel_leq, rel_meet, Game, InstanceFamily, Lasso, Morphism,
    MoveId, Play, RefinedGame, Relation, Strategy, Tag, VarType, WinningSpec,
};

/// Enumeration cap for every census; hit it and the test fails loudly.
const ENUM_MAX: usize = 1_000_000;
/// Lasso budget for winning verdicts on ordinary refined games.
const LASSO_BUDGET: usize = 8;
/// Lasso budget for winning verdicts on quantifier games.
const PI_LASSO_BUDGET: usize = 16;
/// The quantifier experiments: two universe tokens, instances to depth 3,
/// the quantifier game materialised to depth 6.
const PI_TOKENS: [&str; 2] = ["a", "b"];
const PI_INSTANCE_DEPTH: usize = 3;
const PI_DEPTH: usize = 6;
/// Depth for the shallow quantifier sweep with the history-free filter off.
const PI_SHALLOW_DEPTH: usize = 4;
/// Relation sweeps run on game pairs with at most this many plays per side.
const REL_MAX_PLAYS: usize = 6;

fn opts() -> EnumOpts {
    EnumOpts { history_free_only: false, max: ENUM_MAX }
}

fn b_strategy(answer: Option<&str>) -> Strategy {
    let mut plays: Vec<Play> = vec![vec![]];
    if let Some(a) = answer {
        plays.push(vec![MoveId::base("*"), MoveId::base(a)]);
    }
    Strategy::new(&Game::boolean(), &plays).unwrap()
}

fn not_morphism() -> Morphism {
    let b = Game::boolean();
    let table: BTreeMap<MoveId, MoveId> = [
        (MoveId::tagged(&[Tag::R], "*"), MoveId::tagged(&[Tag::L], "*")),
        (MoveId::tagged(&[Tag::L], "tt"), MoveId::tagged(&[Tag::R], "ff")),
        (MoveId::tagged(&[Tag::L], "ff"), MoveId::tagged(&[Tag::R], "tt")),
    ]
    .into_iter()
    .collect();
    Morphism::new(&b, &b, Strategy::from_table(&Game::lolli(&b, &b), &table)).unwrap()
}

/// Every morphism between two games, as re-typed enumerated strategies.
fn hom(a: &Game, b: &Game) -> Vec<Morphism> {
    enumerate_strategies(&Game::lolli(a, b), &opts())
        .unwrap()
        .into_iter()
        .map(|s| Morphism::new(a, b, s).unwrap())
        .collect()
}

#[test]
fn c1_the_boolean_game_has_exactly_three_strategies() {
    let census = enumerate_strategies(&Game::boolean(), &opts()).unwrap();
    assert_eq!(census.len(), 3);
    let expected = [b_strategy(None), b_strategy(Some("tt")), b_strategy(Some("ff"))];
    for want in &expected {
        assert!(
            census.iter().any(|s| s.play_set() == want.play_set()),
            "missing a boolean strategy"
        );
    }
}

#[test]
fn c2_the_complement_acts_as_its_table_under_both_algorithms() {
    let not = not_morphism();
    let cases = [
        (b_strategy(None), b_strategy(None)),
        (b_strategy(Some("tt")), b_strategy(Some("ff"))),
        (b_strategy(Some("ff")), b_strategy(Some("tt"))),
    ];
    for (input, expected) in &cases {
        let point = Morphism::point(input);
        let via_hiding = compose_hiding(&point, &not).unwrap().to_point().unwrap();
        let via_pointwise = compose_pointwise(&point, &not).unwrap().to_point().unwrap();
        assert_eq!(via_hiding.play_set(), expected.play_set());
        assert_eq!(via_pointwise.play_set(), expected.play_set());
    }
}

#[test]
fn c3_the_two_composition_algorithms_agree_on_the_desk_family() {
    let games = small_games(2, 2);
    let mut pairs = 0usize;
    for a in &games {
        for b in &games {
            let fs = hom(a, b);
            for c in &games {
                let gs = hom(b, c);
                for f in &fs {
                    for g in &gs {
                        let hidden = compose_hiding(f, g).unwrap();
                        let pointwise = compose_pointwise(f, g).unwrap();
                        assert_eq!(
                            hidden.strategy().play_set(),
                            pointwise.strategy().play_set(),
                            "algorithms disagree"
                        );
                        pairs += 1;
                    }
                }
            }
        }
    }
    assert_eq!(pairs, 9119, "the desk family changed size");
}

#[test]
fn c4_category_and_monoidal_laws_hold_exhaustively() {
    let games = small_games(2, 2);
    let b = Game::boolean();

    // Left and right identity over every morphism in the family.
    for x in &games {
        for y in &games {
            for f in hom(x, y) {
                let l = compose_hiding(&Morphism::identity(x), &f).unwrap();
                let r = compose_hiding(&f, &Morphism::identity(y)).unwrap();
                assert_eq!(l.strategy().play_set(), f.strategy().play_set());
                assert_eq!(r.strategy().play_set(), f.strategy().play_set());
            }
        }
    }

    // Associativity over every composable triple.
    let n = games.len();
    let mut homs: Vec<Vec<Vec<Morphism>>> = Vec::with_capacity(n);
    for x in &games {
        let mut row = Vec::with_capacity(n);
        for y in &games {
            row.push(hom(x, y));
        }
        homs.push(row);
    }
    let mut triples = 0usize;
    for ai in 0..n {
        for bi in 0..n {
            for ci in 0..n {
                for di in 0..n {
                    for f in &homs[ai][bi] {
                        for g in &homs[bi][ci] {
                            let fg = compose_hiding(f, g).unwrap();
                            for h in &homs[ci][di] {
                                let gh = compose_hiding(g, h).unwrap();
                                let left = compose_hiding(&fg, h).unwrap();
                                let right = compose_hiding(f, &gh).unwrap();
                                assert_eq!(
                                    left.strategy().play_set(),
                                    right.strategy().play_set(),
                                    "associativity failed"
                                );
                                triples += 1;
                            }
                        }
                    }
                }
            }
        }
    }
    assert_eq!(triples, 241_647, "the desk family changed size");

    // Tensor is functorial: identities to identities, composition to
    // componentwise composition (exhaustive over the one-move slice).
    for x in &games {
        for y in &games {
            let both = tensor_mor(&Morphism::identity(x), &Morphism::identity(y));
            let direct = Morphism::identity(&Game::tensor(x, y));
            assert_eq!(both.strategy().play_set(), direct.strategy().play_set());
        }
    }
    let small = small_games(1, 2);
    let mut small_pairs: Vec<(Morphism, Morphism)> = Vec::new();
    for x in &small {
        for y in &small {
            let fs = hom(x, y);
            for z in &small {
                for g in hom(y, z) {
                    for f in &fs {
                        small_pairs.push((f.clone(), g.clone()));
                    }
                }
            }
        }
    }
    for (f, f2) in &small_pairs {
        for (g, g2) in &small_pairs {
            let joint =
                compose_hiding(&tensor_mor(f, g), &tensor_mor(f2, g2)).unwrap();
            let split =
                tensor_mor(&compose_hiding(f, f2).unwrap(), &compose_hiding(g, g2).unwrap());
            assert_eq!(
                joint.strategy().play_set(),
                split.strategy().play_set(),
                "tensor functoriality failed"
            );
        }
    }

    // β and η for currying, over every strategy on the relevant homs.
    for f in hom(&Game::tensor(&b, &b), &b) {
        let curried = curry(&f).unwrap();
        let back = uncurry(&curried).unwrap();
        assert_eq!(back.strategy().play_set(), f.strategy().play_set());
        let applied = compose_hiding(
            &tensor_mor(&curried, &Morphism::identity(&b)),
            &ap(&b, &b),
        )
        .unwrap();
        assert_eq!(applied.strategy().play_set(), f.strategy().play_set());
    }
    for f in hom(&b, &Game::lolli(&b, &b)) {
        let flat = uncurry(&f).unwrap();
        let again = curry(&flat).unwrap();
        assert_eq!(again.strategy().play_set(), f.strategy().play_set());
    }

    // Product equations for the choice game.
    let fs = hom(&b, &b);
    for f in &fs {
        for g in &fs {
            let paired = pair(f, g).unwrap();
            let left = compose_hiding(&paired, &arena::category::fst(&b, &b)).unwrap();
            let right = compose_hiding(&paired, &arena::category::snd(&b, &b)).unwrap();
            assert_eq!(left.strategy().play_set(), f.strategy().play_set());
            assert_eq!(right.strategy().play_set(), g.strategy().play_set());
        }
    }
    for v in hom(&b, &Game::with(&b, &b)) {
        let via_fst = compose_hiding(&v, &arena::category::fst(&b, &b)).unwrap();
        let via_snd = compose_hiding(&v, &arena::category::snd(&b, &b)).unwrap();
        let rebuilt = pair(&via_fst, &via_snd).unwrap();
        assert_eq!(rebuilt.strategy().play_set(), v.strategy().play_set());
    }

    // The unit game is terminal: exactly one morphism from anywhere.
    for x in &games {
        let silences = enumerate_strategies(&Game::lolli(x, &Game::unit()), &opts()).unwrap();
        assert_eq!(silences.len(), 1, "the unit game is not terminal");
    }

    // Coherence: symmetry is involutive and the associator satisfies the
    // pentagon on a spread of quadruples.
    let u = Game::unit();
    let two = compose_hiding(&symm(&b, &u), &symm(&u, &b)).unwrap();
    assert_eq!(
        two.strategy().play_set(),
        Morphism::identity(&Game::tensor(&b, &u)).strategy().play_set()
    );
    let quads = [
        (&b, &u, &b, &u),
        (&u, &b, &b, &u),
        (&b, &b, &u, &u),
        (&u, &u, &b, &b),
    ];
    for (a, b2, c, d) in quads {
        let one = compose_hiding(
            &compose_hiding(
                &tensor_mor(&assoc(a, b2, c), &Morphism::identity(d)),
                &assoc(a, &Game::tensor(b2, c), d),
            )
            .unwrap(),
            &tensor_mor(&Morphism::identity(a), &assoc(b2, c, d)),
        )
        .unwrap();
        let other = compose_hiding(
            &assoc(&Game::tensor(a, b2), c, d),
            &assoc(a, b2, &Game::tensor(c, d)),
        )
        .unwrap();
        assert_eq!(
            one.strategy().play_set(),
            other.strategy().play_set(),
            "pentagon failed"
        );
    }

    // The left unitor is a bijection on strategy sets by pre-composition.
    let from_unit_tensor = hom(&Game::tensor(&u, &b), &b);
    let image: BTreeSet<Vec<Play>> = fs
        .iter()
        .map(|f| {
            compose_hiding(&unit_l(&b), f)
                .unwrap()
                .strategy()
                .even_plays()
                .into_iter()
                .collect::<BTreeSet<Play>>()
                .into_iter()
                .collect()
        })
        .collect();
    assert_eq!(image.len(), fs.len(), "pre-composition with the unitor is not injective");
    assert_eq!(image.len(), from_unit_tensor.len(), "the unitor is not surjective");
}

#[test]
fn c5_switching_discipline_holds_on_every_generated_play() {
    let b = Game::boolean();
    for game in [Game::tensor(&b, &b), Game::lolli(&b, &b)] {
        let is_tensor = matches!(game.shape(), arena::game::Shape::Tensor(_, _));
        let plays = game.all_plays();
        assert!(plays.iter().all(|p| p.len() <= 6), "generation depth exceeded");
        for play in &plays {
            let report = switching_states(&game, play).unwrap();
            assert_eq!(report.verdict, SwitchVerdict::Ok, "switching violation in {play:?}");
            if is_tensor {
                use arena::Polarity;
                assert!(
                    report.states.iter().all(|s| *s != (Polarity::P, Polarity::P)),
                    "a tensor play reached a (P,P) state"
                );
            }
        }
    }
}

#[test]
fn c6_every_composite_play_covers_exactly_one_interaction() {
    let games = small_games(2, 2);
    let visible_part = |trace: &[InteractionMove]| -> Play {
        trace
            .iter()
            .filter_map(|im| match im.zone {
                Zone::Dom => Some(im.mv.push_front(Tag::L)),
                Zone::Cod => Some(im.mv.push_front(Tag::R)),
                Zone::Mid => None,
            })
            .collect()
    };
    for a in &games {
        for b in &games {
            let fs = hom(a, b);
            let mid_moves: BTreeSet<MoveId> = b.moves().map(|(m, _)| m.clone()).collect();
            for c in &games {
                let gs = hom(b, c);
                for f in &fs {
                    for g in &gs {
                        let composite = compose_hiding(f, g).unwrap();
                        let all: Vec<Vec<InteractionMove>> = interactions(f, g).unwrap();
                        let mut seen: BTreeMap<Play, usize> = BTreeMap::new();
                        for trace in &all {
                            *seen.entry(visible_part(trace)).or_insert(0) += 1;
                        }
                        let plays: BTreeSet<Play> =
                            composite.strategy().even_plays().into_iter().collect();
                        // The covering map is a bijection: every composite
                        // play is hit exactly once, and nothing else is.
                        assert_eq!(
                            seen.keys().cloned().collect::<BTreeSet<Play>>(),
                            plays,
                            "interactions and composite plays differ"
                        );
                        assert!(seen.values().all(|&k| k == 1), "covering is not injective");
                        for t in &plays {
                            let trace = covering_witness(f, g, t).unwrap();
                            assert_eq!(visible_part(&trace), *t);
                            // Interleaving shape: visible moves bracket the
                            // hidden runs, and hidden moves belong to the
                            // middle game.
                            if !trace.is_empty() {
                                assert_ne!(trace[0].zone, Zone::Mid);
                                assert_ne!(trace[trace.len() - 1].zone, Zone::Mid);
                            }
                            for im in &trace {
                                if im.zone == Zone::Mid {
                                    assert!(
                                        mid_moves.contains(&im.mv),
                                        "hidden move outside the middle game"
                                    );
                                }
                            }
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn c7_winning_strategies_compose_totally_and_chattering_is_certified() {
    let b = Game::boolean();
    let game = Game::lolli(&b, &b);
    let all = WinningSpec::All;
    let refined = RefinedGame {
        game: game.clone(),
        spec: WinningSpec::Lolli(Box::new(all.clone()), Box::new(all.clone())),
    };
    let winning: Vec<Morphism> = enumerate_strategies(&game, &opts())
        .unwrap()
        .into_iter()
        .filter(|s| {
            matches!(is_winning(s, &refined, LASSO_BUDGET).unwrap(), WinningVerdict::Winning { .. })
        })
        .map(|s| Morphism::new(&b, &b, s).unwrap())
        .collect();
    assert!(!winning.is_empty());
    for f in &winning {
        for g in &winning {
            match winning_compose(f, g, &all, &all, &all, LASSO_BUDGET).unwrap() {
                CompositionReport::Composed { totality, .. } => {
                    assert_eq!(totality, Totality::Total, "a winning pair lost totality");
                }
                other => panic!("a winning pair chattered: {other:?}"),
            }
        }
    }

    // One total-but-not-winning pair, with the endless middle dialogue
    // pinned down as an explicit cycle of middle-game moves.
    let mid = Game::stream(4);
    let f_table: BTreeMap<MoveId, MoveId> =
        [(MoveId::tagged(&[Tag::R], "*"), MoveId::tagged(&[Tag::R], "0"))].into_iter().collect();
    let f = Morphism::new(
        &Game::unit(),
        &mid,
        Strategy::from_table(&Game::lolli(&Game::unit(), &mid), &f_table),
    )
    .unwrap();
    let g_table: BTreeMap<MoveId, MoveId> = [
        (MoveId::tagged(&[Tag::R], "*"), MoveId::tagged(&[Tag::L], "*")),
        (MoveId::tagged(&[Tag::L], "0"), MoveId::tagged(&[Tag::L], "*")),
        (MoveId::tagged(&[Tag::L], "1"), MoveId::tagged(&[Tag::L], "*")),
    ]
    .into_iter()
    .collect();
    let g = Morphism::new(
        &mid,
        &b,
        Strategy::from_table(&Game::lolli(&mid, &b), &g_table),
    )
    .unwrap();
    assert_eq!(is_total(f.strategy()), Totality::Total);
    assert_eq!(is_total(g.strategy()), Totality::Total);
    let err = winning_compose(&f, &g, &all, &all, &all, LASSO_BUDGET).unwrap_err();
    assert!(matches!(err, WinningError::PreconditionFailed { side: "second", .. }));
    match chattering_certificate(&f, &g).unwrap() {
        CompositionReport::Chattering { cycle, .. } => {
            assert!(!cycle.is_empty());
            let stream_moves: BTreeSet<MoveId> = mid.moves().map(|(m, _)| m.clone()).collect();
            assert!(cycle.iter().all(|m| stream_moves.contains(m)));
        }
        other => panic!("expected an explicit chattering cycle, got {other:?}"),
    }
}

fn two_argument_type() -> VarType {
    let x = VarType::var;
    VarType::lolli(x(), VarType::lolli(x(), x()))
}

fn pi_family() -> InstanceFamily {
    InstanceFamily::flat_all(&PI_TOKENS, PI_INSTANCE_DEPTH).unwrap()
}

#[test]
fn c8_quantifier_censuses_are_exact_and_stable() {
    // The two-argument experiment: exactly two history-free winners — the
    // copy-cats answering from the first or the second argument — at every
    // family size.
    let mv = MoveId::tagged;
    let first_table: BTreeMap<MoveId, MoveId> = PI_TOKENS
        .iter()
        .flat_map(|t| {
            [
                (mv(&[Tag::R, Tag::R, Tag::R], t), mv(&[Tag::L, Tag::R], t)),
                (mv(&[Tag::L, Tag::L], t), mv(&[Tag::R, Tag::R, Tag::L], t)),
            ]
        })
        .collect();
    let second_table: BTreeMap<MoveId, MoveId> = PI_TOKENS
        .iter()
        .flat_map(|t| {
            [
                (mv(&[Tag::R, Tag::R, Tag::R], t), mv(&[Tag::R, Tag::L, Tag::R], t)),
                (mv(&[Tag::R, Tag::L, Tag::L], t), mv(&[Tag::R, Tag::R, Tag::L], t)),
            ]
        })
        .collect();
    let mut sizes = Vec::new();
    for cap in [Some(4), Some(6), None] {
        let family = match cap {
            Some(c) => pi_family().capped(c).unwrap(),
            None => pi_family(),
        };
        let pi = build_pi(&two_argument_type(), &family, PI_DEPTH).unwrap();
        sizes.push(pi.family().len());
        let census = winning_census(&pi, true, ENUM_MAX).unwrap();
        assert_eq!(census.len(), 2, "the two-argument census moved");
        let tables: Vec<BTreeMap<MoveId, MoveId>> =
            census.iter().map(|s| s.to_table().unwrap()).collect();
        assert!(tables.contains(&first_table));
        assert!(tables.contains(&second_table));
    }
    assert!(sizes[0] < sizes[1] && sizes[1] < sizes[2], "families are not growing");

    // The doubled experiment: exactly the identity and the twist.
    let pair_type = VarType::tensor(VarType::var(), VarType::var());
    let doubled = VarType::lolli(pair_type.clone(), pair_type);
    let pi2 = build_pi(&doubled, &pi_family(), PI_DEPTH).unwrap();
    let census2 = winning_census(&pi2, true, ENUM_MAX).unwrap();
    assert_eq!(census2.len(), 2, "the doubled census moved");
    let link = |from: &[Tag], to: &[Tag]| -> Vec<(MoveId, MoveId)> {
        PI_TOKENS
            .iter()
            .flat_map(|t| {
                let mut ask = from.to_vec();
                ask.push(Tag::R);
                let mut repeat = to.to_vec();
                repeat.push(Tag::R);
                let mut back = to.to_vec();
                back.push(Tag::L);
                let mut reply = from.to_vec();
                reply.push(Tag::L);
                [(mv(&ask, t), mv(&repeat, t)), (mv(&back, t), mv(&reply, t))]
            })
            .collect()
    };
    let identity: BTreeMap<MoveId, MoveId> = link(&[Tag::R, Tag::L], &[Tag::L, Tag::L])
        .into_iter()
        .chain(link(&[Tag::R, Tag::R], &[Tag::L, Tag::R]))
        .collect();
    let twist: BTreeMap<MoveId, MoveId> = link(&[Tag::R, Tag::L], &[Tag::L, Tag::R])
        .into_iter()
        .chain(link(&[Tag::R, Tag::R], &[Tag::L, Tag::L]))
        .collect();
    let tables2: Vec<BTreeMap<MoveId, MoveId>> =
        census2.iter().map(|s| s.to_table().unwrap()).collect();
    assert!(tables2.contains(&identity), "missing the identity");
    assert!(tables2.contains(&twist), "missing the twist");

    // With the history-free filter off, more winners appear — among them
    // the strategy that answers the opening question by probing the second
    // argument, replaying the question in the first, and copy-catting the
    // first argument's answer out.
    let shallow = build_pi(&two_argument_type(), &pi_family(), PI_SHALLOW_DEPTH).unwrap();
    let free = winning_census(&shallow, true, ENUM_MAX).unwrap();
    let unfiltered = winning_census(&shallow, false, ENUM_MAX).unwrap();
    assert!(unfiltered.len() >= 3, "expected extra winners, got {}", unfiltered.len());
    assert!(unfiltered.len() > free.len());
    let tour = detour_strategy(&shallow).unwrap();
    assert!(unfiltered.iter().any(|s| s.play_set() == tour.play_set()));

    // At full depth the tour strategy is winning yet survives no census
    // with the history-free filter on.
    let pi = build_pi(&two_argument_type(), &pi_family(), PI_DEPTH).unwrap();
    let tour = detour_strategy(&pi).unwrap();
    assert!(!tour.history_freedom().is_free());
    let refined = RefinedGame {
        game: pi.game().clone(),
        spec: pi.winning_spec(&WinningSpec::All).unwrap(),
    };
    assert!(matches!(
        is_winning(&tour, &refined, PI_LASSO_BUDGET).unwrap(),
        WinningVerdict::Winning { .. }
    ));
    let census = winning_census(&pi, true, ENUM_MAX).unwrap();
    assert!(census.iter().all(|s| s.play_set() != tour.play_set()));
}

#[test]
fn c9_the_boolean_terms_denote_the_census_survivors() {
    let family = pi_family();
    let pi = build_pi(&two_argument_type(), &family, PI_DEPTH).unwrap();
    let census = winning_census(&pi, true, ENUM_MAX).unwrap();
    assert_eq!(census.len(), 2);

    let (_, tt) = denote(&parse_term("tt").unwrap(), &family, PI_DEPTH).unwrap();
    let (_, ff) = denote(&parse_term("ff").unwrap(), &family, PI_DEPTH).unwrap();
    assert_ne!(tt.play_set(), ff.play_set());
    for strat in [&tt, &ff] {
        assert!(
            census.iter().any(|s| s.play_set() == strat.play_set()),
            "a boolean term denotes outside the census"
        );
    }
}

#[test]
fn c10_relation_order_meet_and_cut_preservation() {
    let b = Game::boolean();
    assert!(b.all_plays().len() <= REL_MAX_PLAYS);
    let total = count_relations(&b, &b).unwrap();
    let rels = enumerate_relations(&b, &b, ENUM_MAX).unwrap();
    assert_eq!(rels.len() as u128, total);

    // The subtlety rel_leq navigates: the definitional order is not pair
    // inclusion. The two must agree on every pair of relations.
    for r in &rels {
        for s in &rels {
            assert_eq!(
                rel_leq(r, s).unwrap(),
                definitional_leq(r, s).unwrap(),
                "the fast order disagrees with the definitional one"
            );
        }
    }

    // Meets are greatest lower bounds in that order.
    for r in &rels {
        for s in &rels {
            let m = rel_meet(&[r.clone(), s.clone()]).unwrap();
            assert!(rel_leq(&m, r).unwrap() && rel_leq(&m, s).unwrap());
            for candidate in &rels {
                if rel_leq(candidate, r).unwrap() && rel_leq(candidate, s).unwrap() {
                    assert!(rel_leq(candidate, &m).unwrap(), "meet is not greatest");
                }
            }
        }
    }

    // Cut preservation: related strategies compose to related strategies,
    // over every triple of relations and every pair of boolean morphisms,
    // with the second stage ranging over copy-cat and complement.
    let fs = hom(&b, &b);
    let id = Morphism::identity(&b);
    let not = not_morphism();
    let mut checked = 0u64;
    for r in &rels {
        for s in &rels {
            for t in &rels {
                for sigma in &fs {
                    for tau in &fs {
                        for stage2 in [&id, &not] {
                            assert!(
                                spec_structure_compose_check(
                                    r, s, t, sigma, stage2, tau, stage2
                                )
                                .unwrap(),
                                "cut preservation failed"
                            );
                            checked += 1;
                        }
                    }
                }
            }
        }
    }
    assert_eq!(checked, (rels.len() as u64).pow(3) * (fs.len() as u64).pow(2) * 2);
}

#[test]
fn c11_winning_meets_are_intersections_on_stream_lassos() {
    let mv = MoveId::base;
    for depth in [4, 6] {
        let stream = Game::stream(depth);
        let lassos = vec![
            Lasso::new(vec![], vec![mv("*"), mv("0")]).unwrap(),
            Lasso::new(vec![], vec![mv("*"), mv("1")]).unwrap(),
            Lasso::new(vec![mv("*"), mv("0")], vec![mv("*"), mv("1")]).unwrap(),
            Lasso::new(vec![mv("*"), mv("1")], vec![mv("*"), mv("0"), mv("*"), mv("1")])
                .unwrap(),
        ];
        for lasso in &lassos {
            assert!(admits_lasso(&stream, lasso));
        }
        let specs = vec![
            WinningSpec::All,
            WinningSpec::Never,
            WinningSpec::Atom("visits:0".to_string()),
            WinningSpec::Atom("loop-contains:1".to_string()),
        ];
        for i in 0..specs.len() {
            for j in 0..specs.len() {
                let meet = WinningSpec::Meet(vec![specs[i].clone(), specs[j].clone()]);
                for lasso in &lassos {
                    let joint = lasso_wins(&meet, &stream, lasso).unwrap();
                    let split = lasso_wins(&specs[i], &stream, lasso).unwrap()
                        && lasso_wins(&specs[j], &stream, lasso).unwrap();
                    assert_eq!(joint, split, "a meet of winning sets is their intersection");
                }
            }
        }
    }
    let _ = Relation::diagonal(&Game::boolean());
}
