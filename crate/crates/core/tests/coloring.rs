mod support;

use causal_games::coloring::{check, patterns, satisfies, search_order, solve, solve_at, Coloring, ColoringConstraint, Violation};
use proptest::prelude::*;

/// A constraint over `k ≤ 3` colors from bit masks of the corner sets and of
/// the three forbidden-pair sets.
fn constraint() -> impl Strategy<Value = ColoringConstraint> {
    (1usize..=3).prop_flat_map(|k| {
        let pairs = 1u32 << (k * k);
        (Just(k), 1u8..(1 << k), 1u8..(1 << k), 0..pairs, 0..pairs, 0..pairs)
    })
    .prop_map(|(k, init, fin, s, ut, lt)| {
        let mut c = ColoringConstraint::new((0..k).map(|i| format!("c{i}")).collect()).unwrap();
        for i in 0..k {
            if init & (1 << i) != 0 {
                c.allow_initial(i);
            }
            if fin & (1 << i) != 0 {
                c.allow_final(i);
            }
        }
        for (mask, set) in [(s, 0), (ut, 1), (lt, 2)] {
            for bit in 0..k * k {
                if mask & (1 << bit) != 0 {
                    let target = match set {
                        0 => c.squares_mut(),
                        1 => c.upper_mut(),
                        _ => c.lower_mut(),
                    };
                    target.insert(bit / k, bit % k);
                }
            }
        }
        c
    })
}

proptest! {
    #[test]
    fn solver_agrees_with_enumeration(k in constraint(), n in 1usize..=3, m in 1usize..=3) {
        let all = support::all_satisfying(&k, n, m);
        let got = solve_at(&k, n, m);
        prop_assert_eq!(got.as_ref(), all.first());
        for f in &all {
            prop_assert!(satisfies(f, &k).unwrap());
        }
    }

    #[test]
    fn bounded_search_finds_first_satisfiable_size(k in constraint()) {
        let expected = search_order(3, 3).into_iter().find_map(|(n, m)| support::all_satisfying(&k, n, m).into_iter().next());
        prop_assert_eq!(solve(&k, 3, 3), expected);
    }

    #[test]
    fn larger_bounds_never_lose_solutions(k in constraint()) {
        if solve(&k, 2, 2).is_some() {
            prop_assert!(solve(&k, 3, 3).is_some());
            prop_assert!(solve(&k, 2, 3).is_some());
        }
    }

    #[test]
    fn check_agrees_with_patterns(k in constraint(), cells in prop::collection::vec(0usize..3, 6)) {
        let colors = k.color_count();
        let f = Coloring::new(2, 3, cells.into_iter().map(|c| c % colors).collect()).unwrap();
        let p = patterns(&f);
        let ok = k.is_initial(f.get(0, 0))
            && k.is_final(f.get(1, 2))
            && p.squares.iter().all(|&(c, d)| !k.squares().contains(c, d))
            && p.upper.iter().all(|&(c, d)| !k.upper().contains(c, d))
            && p.lower.iter().all(|&(c, d)| !k.lower().contains(c, d));
        prop_assert_eq!(satisfies(&f, &k).unwrap(), ok);
    }
}

#[test]
fn first_column_constraint_matches_enumeration() {
    let k = support::first_column_constraint();
    for n in 1..=3 {
        for m in 1..=3 {
            let all = support::all_satisfying(&k, n, m);
            assert_eq!(all.len(), 1, "{n}x{m}");
            for x in 0..n {
                for y in 0..m {
                    assert_eq!(all[0].get(x, y) == 0, x == 0);
                }
            }
        }
    }
}

#[test]
fn sign_constraint_is_unique() {
    let k = support::sign_constraint(false);
    for n in 1..=4 {
        for m in 1..=4 {
            assert_eq!(support::all_satisfying(&k, n, m), [support::sign_coloring(n, m)]);
            assert_eq!(solve_at(&k, n, m), Some(support::sign_coloring(n, m)));
        }
    }
}

#[test]
fn final_zero_forces_square_grids() {
    let k = support::sign_constraint(true);
    for n in 1..=4 {
        for m in 1..=4 {
            assert_eq!(solve_at(&k, n, m).is_some(), n == m, "{n}x{m}");
        }
    }
}

#[test]
fn four_by_two_example() {
    let (k, f) = support::figure_three();
    assert!(satisfies(&f, &k).unwrap());
    let p = patterns(&f);
    assert!(!p.squares.contains(&(0, 2)) && !p.squares.contains(&(2, 0)));
    // The least solution is smaller than the drawn one.
    let least = solve(&k, 4, 2).unwrap();
    assert!(satisfies(&least, &k).unwrap());
    assert!(least.n() + least.m() <= f.n() + f.m());
}

#[test]
fn violations_are_reported_in_order() {
    let (k, _) = support::figure_three();
    let bad = Coloring::new(1, 2, vec![2, 0]).unwrap();
    assert_eq!(check(&bad, &k).unwrap(), Some(Violation::Initial { color: 2 }));
    let bad = Coloring::new(1, 2, vec![0, 1]).unwrap();
    assert_eq!(check(&bad, &k).unwrap(), Some(Violation::Final { color: 1 }));
    let bad = Coloring::new(1, 2, vec![0, 2]).unwrap();
    assert!(matches!(check(&bad, &k).unwrap(), Some(Violation::Lower { .. })));
    let bad = Coloring::new(2, 1, vec![0, 2]).unwrap();
    assert!(matches!(check(&bad, &k).unwrap(), Some(Violation::Upper { .. })));
}
