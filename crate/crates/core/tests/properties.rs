use std::sync::OnceLock;

use proptest::prelude::*;

use nielsen::braid::{apply_qi, apply_qi_inv, apply_qij, apply_qij_alt, split_generators, RamificationType};
use nielsen::catalog;
use nielsen::classic::{canonical_form, tuple_product, Tuple};
use nielsen::group::DoubleCosets;
use nielsen::matching::{MatchingOptions, NodeIndex};
use nielsen::{Perm, PermGroup};

fn groups() -> &'static [PermGroup] {
    static G: OnceLock<Vec<PermGroup>> = OnceLock::new();
    G.get_or_init(|| {
        let entries = catalog::builtin_unchecked();
        let s5 = PermGroup::new(
            5,
            vec![Perm::parse(5, "(1,2)").unwrap(), Perm::parse(5, "(1,2,3,4,5)").unwrap()],
        )
        .unwrap();
        let mut v = vec![s5];
        for name in ["AGL(2,3)", "ASL(3,2)", "2^4:D(2*5)"] {
            v.push(catalog::find(&entries, name).unwrap().group().unwrap());
        }
        for g in &v {
            g.elements().unwrap();
            g.conjugacy_classes().unwrap();
        }
        v
    })
}

fn tuple(g: &PermGroup, idx: &[u32]) -> Tuple {
    let e = g.elements().unwrap();
    idx.iter().map(|&i| e.get(i % e.len() as u32).clone()).collect()
}

fn classes(g: &PermGroup, t: &[Perm]) -> Vec<usize> {
    let table = g.conjugacy_classes().unwrap();
    t.iter().map(|x| table.class_of(x).unwrap()).collect()
}

fn arb_tuple(len: usize) -> impl Strategy<Value = (usize, Vec<u32>)> {
    (0..4usize, prop::collection::vec(any::<u32>(), len))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn braid_relation((gi, idx) in arb_tuple(5), i in 1usize..4) {
        let g = &groups()[gi];
        let t = tuple(g, &idx);
        let mut a = t.clone();
        for j in [i, i + 1, i] { apply_qi(&mut a, j).unwrap(); }
        let mut b = t.clone();
        for j in [i + 1, i, i + 1] { apply_qi(&mut b, j).unwrap(); }
        prop_assert_eq!(a, b);
    }

    #[test]
    fn far_generators_commute((gi, idx) in arb_tuple(6), i in 1usize..3, gap in 2usize..4) {
        let g = &groups()[gi];
        let j = i + gap;
        prop_assume!(j < 6);
        let t = tuple(g, &idx);
        let mut a = t.clone();
        apply_qi(&mut a, i).unwrap();
        apply_qi(&mut a, j).unwrap();
        let mut b = t;
        apply_qi(&mut b, j).unwrap();
        apply_qi(&mut b, i).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn qij_formulas_agree((gi, idx) in arb_tuple(6), i in 1usize..6, span in 1usize..6) {
        let g = &groups()[gi];
        let j = i + span;
        prop_assume!(j <= 6);
        let t = tuple(g, &idx);
        let (mut a, mut b) = (t.clone(), t.clone());
        apply_qij(&mut a, i, j).unwrap();
        apply_qij_alt(&mut b, i, j).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(tuple_product(&a), tuple_product(&t));
        prop_assert_eq!(classes(g, &a), classes(g, &t));
    }

    #[test]
    fn qi_preserves_product_and_inverts((gi, idx) in arb_tuple(4), i in 1usize..4) {
        let g = &groups()[gi];
        let t = tuple(g, &idx);
        let mut a = t.clone();
        apply_qi(&mut a, i).unwrap();
        prop_assert_eq!(tuple_product(&a), tuple_product(&t));
        let mut sorted_a = classes(g, &a);
        let mut sorted_t = classes(g, &t);
        sorted_a.sort();
        sorted_t.sort();
        prop_assert_eq!(sorted_a, sorted_t);
        apply_qi_inv(&mut a, i).unwrap();
        prop_assert_eq!(a, t);
    }

    #[test]
    fn composition_is_associative((gi, idx) in arb_tuple(3)) {
        let g = &groups()[gi];
        let t = tuple(g, &idx);
        prop_assert_eq!(&(&t[0] * &t[1]) * &t[2], &t[0] * &(&t[1] * &t[2]));
        prop_assert!((&t[0] * &t[0].inverse()).is_identity());
        prop_assert_eq!(t[0].conj(&t[1]), &(&t[1].inverse() * &t[0]) * &t[1]);
    }

    #[test]
    fn cycle_notation_round_trips((gi, idx) in arb_tuple(1)) {
        let g = &groups()[gi];
        let x = &tuple(g, &idx)[0];
        prop_assert_eq!(&Perm::parse(g.degree(), &x.to_string()).unwrap(), x);
    }

    #[test]
    fn canonical_form_is_a_class_invariant((gi, idx) in arb_tuple(4)) {
        let g = &groups()[gi];
        let t = tuple(g, &idx[..3]);
        let c = &tuple(g, &idx[3..])[0];
        let e = g.elements().unwrap();
        let moved: Tuple = t.iter().map(|x| x.conj(c)).collect();
        prop_assert_eq!(canonical_form(&t, e.as_slice()), canonical_form(&moved, e.as_slice()));
    }

    #[test]
    fn double_cosets_partition((gi, idx) in arb_tuple(2)) {
        let g = &groups()[gi];
        prop_assume!(g.order() <= 2000);
        let t = tuple(g, &idx);
        let a = g.subgroup(vec![t[0].clone()]).unwrap();
        let b = g.subgroup(vec![t[1].clone()]).unwrap();
        let dc = DoubleCosets::compute(&a, &b, g).unwrap();
        prop_assert_eq!(dc.sizes.iter().sum::<usize>() as u128, g.order());
    }
}

fn agl23_index() -> &'static NodeIndex<'static> {
    static I: OnceLock<NodeIndex<'static>> = OnceLock::new();
    I.get_or_init(|| {
        let g = &groups()[1];
        let rt = RamificationType::parse(g.conjugacy_classes().unwrap(), "2A,2A,2A,2A,3A").unwrap();
        NodeIndex::build(g, &rt, &MatchingOptions { k: Some(2), ..MatchingOptions::default() }).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn nodes_are_invariant(seed in any::<u64>(), word in prop::collection::vec(0usize..32, 1..6)) {
        use rand::SeedableRng;
        let idx = agl23_index();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let nodes: Vec<usize> = idx.nodes().map(|n| n.id).collect();
        let node = nodes[(seed as usize) % nodes.len()];
        let t = idx.random_tuple(node, &mut rng).unwrap();
        prop_assert_eq!(idx.identify_node(&t).unwrap(), node);
        let g = idx.group.random_element(&mut rng);
        let moved: Tuple = t.iter().map(|x| x.conj(&g)).collect();
        prop_assert_eq!(idx.identify_node(&moved).unwrap(), node);
        let split = split_generators(&idx.rt, idx.k()).unwrap();
        let local: Vec<_> = split.left.iter().chain(split.right.iter()).collect();
        let mut u = t;
        for w in word {
            local[w % local.len()].apply(&mut u).unwrap();
        }
        prop_assert_eq!(idx.identify_node(&u).unwrap(), node);
    }
}
