use causal_games::coloring::{satisfies, solve};
use causal_games::pcp::{
    brute_force, canonical_same_length, canonical_same_tile, check_solution, decode_coloring, exists_same_length,
    exists_same_tile, to_coloring_constraint, verify_same_length, verify_same_tile, PcpInstance,
};
use proptest::prelude::*;

fn words_up_to(len: usize) -> Vec<Vec<char>> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..len {
        layer = layer
            .iter()
            .flat_map(|w: &Vec<char>| {
                ['a', 'b'].into_iter().map(move |c| {
                    let mut w = w.clone();
                    w.push(c);
                    w
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out.retain(|w| !w.is_empty());
    out
}

#[test]
fn same_length_witness_exists_iff_words_are_equal() {
    let words = words_up_to(4);
    let mut checked = 0;
    for u in &words {
        for v in &words {
            if u.len() * v.len() > 12 {
                continue;
            }
            assert_eq!(exists_same_length(u, v).unwrap(), u == v, "{u:?} / {v:?}");
            checked += 1;
        }
    }
    assert!(checked > 400);
}

#[test]
fn canonical_witnesses_verify() {
    for u in words_up_to(4) {
        let set = canonical_same_length(&u, &u).unwrap();
        assert!(verify_same_length(&set, &u, &u).unwrap());
    }
    let inst = PcpInstance::from_strs(&[("ab", "a"), ("a", "ba")]).unwrap();
    for seq in [vec![0], vec![0, 1], vec![1, 0, 1]] {
        let set = canonical_same_tile(&inst, &seq, &seq).unwrap();
        assert!(verify_same_tile(&set, &inst, &seq, &seq).unwrap());
    }
}

fn tile_config() -> impl Strategy<Value = (Vec<(String, String)>, Vec<usize>, Vec<usize>)> {
    let word = prop::collection::vec(prop::sample::select(vec!['a', 'b']), 1..=2).prop_map(|w| w.into_iter().collect());
    prop::collection::vec((word.clone(), word), 1..=2).prop_flat_map(|tiles| {
        let n = tiles.len();
        let seq = prop::collection::vec(0..n, 1..=3);
        (Just(tiles), seq.clone(), seq)
    })
}

proptest! {
    #[test]
    fn same_tile_witness_exists_iff_sequences_are_equal((tiles, top, other) in tile_config(), copy in any::<bool>()) {
        let refs: Vec<(&str, &str)> = tiles.iter().map(|(t, b)| (t.as_str(), b.as_str())).collect();
        let inst = PcpInstance::from_strs(&refs).unwrap();
        let bottom = if copy { top.clone() } else { other };
        let cells = inst.top_word(&top).unwrap().len() * inst.bottom_word(&bottom).unwrap().len();
        prop_assume!(cells <= 16);
        prop_assert_eq!(exists_same_tile(&inst, &top, &bottom).unwrap(), top == bottom);
    }

    #[test]
    fn brute_force_solutions_check((tiles, _, _) in tile_config()) {
        let refs: Vec<(&str, &str)> = tiles.iter().map(|(t, b)| (t.as_str(), b.as_str())).collect();
        let inst = PcpInstance::from_strs(&refs).unwrap();
        if let Some(seq) = brute_force(&inst, 4) {
            prop_assert!(check_solution(&inst, &seq).unwrap());
            // Nothing shorter works.
            prop_assert!(brute_force(&inst, seq.len() - 1).is_none());
        }
    }
}

#[test]
fn reduction_round_trip_on_small_instances() {
    let corpus: [&[(&str, &str)]; 5] = [
        &[("a", "a")],
        &[("ab", "a"), ("a", "ba")],
        &[("ab", "ba")],
        &[("a", "ab")],
        &[("a", "b"), ("b", "a")],
    ];
    for tiles in corpus {
        let inst = PcpInstance::from_strs(tiles).unwrap();
        let k = to_coloring_constraint(&inst);
        let bound = 3 * tiles.iter().map(|(t, b)| t.len().max(b.len())).max().unwrap();
        let f = solve(&k, bound, bound);
        assert_eq!(f.is_some(), brute_force(&inst, 3).is_some(), "{tiles:?}");
        if let Some(f) = f {
            assert!(satisfies(&f, &k).unwrap());
            let (top, bottom) = decode_coloring(&inst, &f).unwrap();
            assert_eq!(top, bottom);
            assert!(check_solution(&inst, &top).unwrap(), "{tiles:?}: {top:?}");
        }
    }
}

#[test]
fn shortest_solution_is_found_first() {
    let inst = PcpInstance::from_strs(&[("a", "ab"), ("b", "")]).err();
    assert!(inst.is_some(), "empty words are rejected");
    let inst = PcpInstance::from_strs(&[("a", "baa"), ("ab", "aa"), ("bba", "bb")]).unwrap();
    let sol = brute_force(&inst, 4).unwrap();
    assert!(check_solution(&inst, &sol).unwrap());
    assert_eq!(sol.len(), 4);
    assert!(brute_force(&inst, 3).is_none());
}
