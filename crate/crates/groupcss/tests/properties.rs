use groupcss::abelian::{diagonalize_mod, quotient_size_brute, rank_mod_p, to_gkp, to_parity_pair};
use groupcss::bounds::{build_tree_matching, classical_parameters, dz_upper_bound, kernel_mod_p, moore_bound};
use groupcss::code::{code_from_complex, verify_commuting_projectors, verify_compatible};
use groupcss::complex::{presentation_complex, rose};
use groupcss::oracle::{codewords, decode, encode, kl_distance_z};
use groupcss::topology::Topology;
use groupcss::words::Letter;
use groupcss::{Budget, FiniteGroup, GroupWord};
use proptest::prelude::*;

fn small_groups() -> Vec<FiniteGroup> {
    vec![
        FiniteGroup::cyclic(2).unwrap(),
        FiniteGroup::cyclic(3).unwrap(),
        FiniteGroup::cyclic(4).unwrap(),
        FiniteGroup::power(2, 2).unwrap(),
        FiniteGroup::symmetric(3).unwrap(),
        FiniteGroup::dihedral(8).unwrap(),
    ]
}

fn word_strategy(vars: usize, max_len: usize) -> impl Strategy<Value = GroupWord> {
    prop::collection::vec((0..vars, prop::bool::ANY), 0..=max_len)
        .prop_map(|v| GroupWord::new(v.into_iter().map(|(x, s)| Letter::new(x, if s { 1 } else { -1 })).collect()))
}

/// Wraps a word into a freely trivial one by nesting conjugates and inverses.
fn freely_trivial(w: &GroupWord, u: &GroupWord) -> GroupWord {
    let mut letters = u.letters.clone();
    letters.extend(w.letters.iter().copied());
    letters.extend(w.inverse().letters);
    letters.extend(u.inverse().letters);
    GroupWord::new(letters)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reduce_free_idempotent_and_shorter(w in word_strategy(3, 12)) {
        let r = w.reduce_free();
        prop_assert!(r.letters.len() <= w.letters.len());
        prop_assert_eq!(r.reduce_free(), r.clone());
        let c = w.reduce_cyclic();
        prop_assert!(c.letters.len() <= r.letters.len());
    }

    #[test]
    fn freely_trivial_words_are_laws(w in word_strategy(2, 5), u in word_strategy(2, 3)) {
        let f = freely_trivial(&w, &u);
        prop_assert!(f.is_freely_trivial());
        for g in small_groups() {
            prop_assert!(f.is_group_law(&g, &Budget::default()).unwrap());
        }
    }

    #[test]
    fn decomposition_partitions_letters(w in word_strategy(3, 5), u in word_strategy(3, 4)) {
        let f = freely_trivial(&w, &u).reduce_cyclic();
        let f = freely_trivial(&f, &w);
        let dec = f.decompose_two_cells().unwrap();
        let mut seen = vec![0usize; f.letters.len()];
        for cell in &dec.cells {
            prop_assert!(cell.word.is_freely_trivial());
            for (&p, l) in cell.positions.iter().zip(&cell.word.letters) {
                seen[p] += 1;
                prop_assert_eq!(f.letters[p], *l);
            }
        }
        prop_assert!(seen.iter().all(|&s| s == 1));
    }

    #[test]
    fn evaluate_respects_inverse(w in word_strategy(3, 8), a in 0usize..8, b in 0usize..8, c in 0usize..8) {
        let g = FiniteGroup::dihedral(8).unwrap();
        let assignment = &[a, b, c][..w.arity()];
        let x = w.evaluate(&g, assignment).unwrap();
        let y = w.inverse().evaluate(&g, assignment).unwrap();
        prop_assert_eq!(g.mul(x, y), g.identity());
    }

    #[test]
    fn mixed_radix_round_trip(config in prop::collection::vec(0usize..6, 1..8)) {
        let id = encode(&config, 6);
        prop_assert_eq!(decode(id, config.len(), 6), config);
    }

    #[test]
    fn moore_bound_decreases_in_degree(n in 2.0f64..500.0, k in 2.1f64..20.0) {
        prop_assert!(moore_bound(n, k + 0.5).unwrap() <= moore_bound(n, k).unwrap() + 1e-12);
    }

    #[test]
    fn dz_bound_at_least_two(n in 3.0f64..1000.0, frac in 0.01f64..1.0) {
        let k = 1.0 + frac * (n - 1.0);
        prop_assert!(dz_upper_bound(n, k).unwrap() > 2.0);
    }

    #[test]
    fn tree_matching_invariants(seed in 0u64..1000, r in 2usize..5, alpha in 0.5f64..1.6) {
        if let Ok(g) = build_tree_matching(4, r, alpha, seed) {
            prop_assert_eq!(g.leaves, 4usize.pow(r as u32));
            prop_assert_eq!(g.pruned.len() + 2 * g.matching.len(), g.leaves);
            if let Some(girth) = g.girth {
                prop_assert!(girth >= g.girth_target);
                prop_assert!(girth as f64 >= alpha * r as f64 - 1e-9);
            }
            prop_assert!((g.num_edges() as f64) < g.edge_bound());
            let mut ends: Vec<usize> = g.matching.iter().flat_map(|&(u, v)| [u, v]).collect();
            ends.sort_unstable();
            ends.dedup();
            prop_assert_eq!(ends.len(), 2 * g.matching.len());
        }
    }

    #[test]
    fn kernel_dimension_is_rank_nullity(rows in prop::collection::vec(prop::collection::vec(0u64..3, 7), 0..6)) {
        let kernel = kernel_mod_p(&rows, 7, 3);
        prop_assert_eq!(kernel.len() + rank_mod_p(&rows, 3), 7);
        for v in &kernel {
            for r in &rows {
                prop_assert_eq!(r.iter().zip(v).map(|(a, b)| a * b).sum::<u64>() % 3, 0);
            }
        }
    }

    #[test]
    fn classical_distance_matches_brute_force(rows in prop::collection::vec(prop::collection::vec(0u64..2, 8), 1..5)) {
        let code = classical_parameters(&rows, 8, 2, &Budget::default()).unwrap();
        let mut best: Option<usize> = None;
        for x in 1u32..256 {
            let v: Vec<u64> = (0..8).map(|i| ((x >> i) & 1) as u64).collect();
            if rows.iter().all(|r| r.iter().zip(&v).map(|(a, b)| a * b).sum::<u64>() % 2 == 0) {
                let w = v.iter().filter(|&&b| b == 1).count();
                best = Some(best.map_or(w, |d| d.min(w)));
            }
        }
        prop_assert_eq!(code.d0, best);
    }

    #[test]
    fn diagonal_counts_match_brute_force(hx in prop::collection::vec(prop::collection::vec(0u64..4, 4), 0..3),
                                         hz in prop::collection::vec(prop::collection::vec(0u64..4, 4), 0..3)) {
        // image of hx^T inside Z_4^4 has size prod(4 / gcd(d, 4)) over the diagonal
        let image: u128 = diagonalize_mod(&hx, 4).iter().map(|&d| 4 / gcd(d, 4)).product::<u64>() as u128;
        let mut members = std::collections::BTreeSet::new();
        let rows = hx.len();
        for x in 0..4u64.pow(rows as u32) {
            let coeff: Vec<u64> = (0..rows).map(|i| (x / 4u64.pow(i as u32)) % 4).collect();
            let v: Vec<u64> = (0..4).map(|j| (0..rows).map(|i| coeff[i] * hx[i][j]).sum::<u64>() % 4).collect();
            members.insert(v);
        }
        prop_assert_eq!(image, members.len() as u128);
        let q = quotient_size_brute(&hx, &hz, 4, 4, &Budget::default()).unwrap();
        prop_assert!(q >= 1);
    }

    /// One-vertex complexes over small groups: the Hom-orbit count and the
    /// brute-force codeword count agree, and so do systole and KL distance.
    #[test]
    fn rose_topology_matches_oracle(relator in word_strategy(2, 5), gi in 0usize..5) {
        let g = &small_groups()[gi];
        let relator = relator.reduce_cyclic();
        prop_assume!(!relator.letters.is_empty());
        let c = presentation_complex(2, &[relator]).unwrap();
        let code = code_from_complex(&c, g).unwrap();
        let b = Budget::default();
        let topo = Topology::from_code(&code).unwrap();
        let dim = topo.codespace_dim(&b).unwrap().dim;
        let cw = codewords(&code, &b).unwrap();
        prop_assert_eq!(dim, cw.dim());
        if dim > 1 {
            let sys = topo.systole_dz(&b).unwrap();
            prop_assert_eq!(kl_distance_z(&cw, code.n, &b).unwrap().exact(), Some(sys));
        }
        verify_commuting_projectors(&code, &b).unwrap();
        verify_compatible(&code, &b).unwrap();
    }

    /// Abelian doubles: the matrix dimension, the subgroup quotient and the
    /// oracle agree.
    #[test]
    fn abelian_paths_agree(relator in word_strategy(2, 6), m in 2usize..5) {
        let relator = relator.reduce_cyclic();
        prop_assume!(!relator.letters.is_empty());
        let g = FiniteGroup::cyclic(m).unwrap();
        let c = presentation_complex(2, &[relator]).unwrap();
        let code = code_from_complex(&c, &g).unwrap();
        let b = Budget::default();
        let oracle = codewords(&code, &b).unwrap().dim() as u128;
        let pp = to_parity_pair(&code).unwrap();
        prop_assert!(pp.orthogonal);
        prop_assert_eq!(pp.dim, Some(oracle));
        let gkp = to_gkp(&code, &b).unwrap();
        prop_assert_eq!(gkp.dim() as u128, oracle);
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[test]
fn rose_with_commutator_face_is_the_torus() {
    let c = rose(2, &[vec![1, 2, -1, -2]]).unwrap();
    let g = FiniteGroup::dihedral(8).unwrap();
    let code = code_from_complex(&c, &g).unwrap();
    assert_eq!(Topology::from_code(&code).unwrap().codespace_dim(&Budget::default()).unwrap().dim, 22);
}
