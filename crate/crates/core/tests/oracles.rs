//! Worked examples with known answers, one per documented case.

use nielsen::braid::{
    apply_qi, apply_qi_inv, apply_qij, apply_qij_alt, parabolic_generators, split_generators,
    BraidGen, RamificationType,
};
use nielsen::catalog;
use nielsen::classic::{enumerate_tuples, orbit_partition, tuple_product, ClassicParams};
use nielsen::genus::{self, enumerate_triples, rh_candidate_types, structure_constant_filter};
use nielsen::group::{ClassProducts, DoubleCosets};
use nielsen::{Perm, PermGroup};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn p(n: usize, s: &str) -> Perm {
    Perm::parse(n, s).unwrap()
}

fn s3() -> PermGroup {
    PermGroup::new(3, vec![p(3, "(1,2)"), p(3, "(1,2,3)")]).unwrap()
}

fn named(name: &str) -> PermGroup {
    let entries = catalog::builtin_unchecked();
    catalog::find(&entries, name).unwrap().group().unwrap()
}

fn rt(g: &PermGroup, s: &str) -> RamificationType {
    RamificationType::parse(g.conjugacy_classes().unwrap(), s).unwrap()
}

#[test]
fn permutation_arithmetic() {
    let t = p(2, "(1,2)");
    assert!((&t * &t).is_identity());
    let c = p(3, "(1,2,3)");
    assert_eq!(&c * &c, p(3, "(1,3,2)"));
    assert_eq!(p(3, "(1,2)").conj(&p(3, "(2,3)")), p(3, "(1,3)"));
    assert_eq!(t.conj(&Perm::identity(2)), t);
    let seven = p(8, "(1,2,3,4,5,6,7)");
    assert_eq!(seven.order(), 7);
    assert_eq!(seven.perm_index(), 6);
    assert_eq!(Perm::identity(8).perm_index(), 0);
    assert_eq!(p(8, "(1,2)(3,4)").perm_index(), 2);
    assert_eq!(Perm::identity(16).fixed_points(), 16);
}

#[test]
fn random_inverses() {
    let s16 = PermGroup::new(16, vec![p(16, "(1,2)"), p(16, "(1,2,3,4,5,6,7,8,9,10,11,12,13,14,15,16)")])
        .unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..100 {
        let a = s16.random_element(&mut rng);
        assert!((&a * &a.inverse()).is_identity());
    }
}

#[test]
fn degree_mismatch_is_an_error() {
    assert!(p(3, "(1,2)").compose(&p(4, "(1,2)")).is_err());
    assert!(Perm::from_images(&[0, 0, 1]).is_err());
}

#[test]
fn group_orders() {
    assert_eq!(s3().order(), 6);
    assert_eq!(named("ASL(3,2)").order(), 1344);
    assert_eq!(named("AGL(4,2)").order(), 322560);
}

#[test]
fn s3_classes_and_centralizers() {
    let g = s3();
    let t = g.conjugacy_classes().unwrap();
    let mut sizes: Vec<usize> = t.classes().iter().map(|c| c.size()).collect();
    sizes.sort();
    assert_eq!(sizes, vec![1, 2, 3]);
    assert_eq!(g.centralizer(&p(3, "(1,2)")).unwrap().order(), 2);
    let c = g.find_conjugator(&p(3, "(1,2)"), &p(3, "(1,3)")).unwrap().unwrap();
    assert_eq!(p(3, "(1,2)").conj(&c), p(3, "(1,3)"));
}

#[test]
fn generation() {
    let g = s3();
    assert!(g.generates(g.generators()));
    assert!(!g.generates(&[Perm::identity(3), Perm::identity(3)]));
}

#[test]
fn agl42_involutions() {
    let g = named("AGL(4,2)");
    let t = g.conjugacy_classes().unwrap();
    assert_eq!(t.len() - 1, 24);
    // 8 and 4 fixed points; no conjugator between them
    let a = t.class(t.by_label("2B").unwrap());
    let b = t.class(t.by_label("2D").unwrap());
    assert_eq!(a.representative.fixed_points(), 8);
    assert_eq!(b.representative.fixed_points(), 4);
    assert!(g.find_conjugator(&a.representative, &b.representative).unwrap().is_none());
    let total: usize = t.classes().iter().map(|c| c.size()).sum();
    assert_eq!(total as u128, g.order());
}

#[test]
fn double_coset_counts() {
    let g = s3();
    let a = g.subgroup(vec![p(3, "(1,2)")]).unwrap();
    assert_eq!(DoubleCosets::compute(&a, &a, &g).unwrap().len(), 2);
    assert_eq!(DoubleCosets::compute(&g, &a, &g).unwrap().len(), 1);
    let e = PermGroup::trivial(3);
    assert_eq!(DoubleCosets::compute(&e, &e, &g).unwrap().len(), 6);
}

#[test]
fn s3_structure_constants() {
    let g = s3();
    let t = g.conjugacy_classes().unwrap();
    let pr = ClassProducts::new(t);
    assert_eq!(pr.product_one_count(&rt(&g, "2A,2A,2A").classes), 0);
    assert_eq!(pr.product_one_count(&rt(&g, "2A,2A,3A").classes), 6);
    let all = enumerate_tuples(&g, &rt(&g, "2A,2A,3A"), false).unwrap();
    assert_eq!(all.len(), 6);
    assert!(enumerate_tuples(&g, &rt(&g, "2A,2A,2A"), false)
        .unwrap()
        .is_empty());
    assert!(!structure_constant_filter(&pr, &rt(&g, "2A,2A,2A")));
}

#[test]
fn translation_subgroups() {
    let g = named("AGL(2,3)");
    let v = g.socle_regular_elementary(3, 2).unwrap();
    assert_eq!(v.order(), 9);
    for x in v.elements().unwrap().iter().filter(|x| !x.is_identity()) {
        assert_eq!((x.order(), x.fixed_points()), (3, 0));
    }
    assert_eq!(named("5^2:3").socle_regular_elementary(5, 2).unwrap().order(), 25);
    let s5 = PermGroup::new(5, vec![p(5, "(1,2)"), p(5, "(1,2,3,4,5)")]).unwrap();
    assert!(s5.socle_regular_elementary(5, 1).is_err());
}

#[test]
fn braid_formulas() {
    let (a, b, c) = (p(4, "(1,2)"), p(4, "(2,3,4)"), p(4, "(1,4)"));
    let mut t = vec![a.clone(), b.clone(), c.clone()];
    apply_qi(&mut t, 1).unwrap();
    assert_eq!(t, vec![b.clone(), a.conj(&b), c.clone()]);
    apply_qi_inv(&mut t, 1).unwrap();
    assert_eq!(t, vec![a, b, c]);
    let s4 = named_s4();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..100 {
        let t: Vec<Perm> = (0..5).map(|_| s4.random_element(&mut rng)).collect();
        let (mut u, mut v) = (t.clone(), t.clone());
        apply_qij(&mut u, 2, 3).unwrap();
        apply_qi(&mut v, 2).unwrap();
        apply_qi(&mut v, 2).unwrap();
        assert_eq!(u, v);
        let (mut u, mut v) = (t.clone(), t.clone());
        apply_qij(&mut u, 1, 4).unwrap();
        apply_qij_alt(&mut v, 1, 4).unwrap();
        assert_eq!(u, v);
        assert_eq!(tuple_product(&u), tuple_product(&t));
    }
}

fn named_s4() -> PermGroup {
    PermGroup::new(4, vec![p(4, "(1,2)"), p(4, "(1,2,3,4)")]).unwrap()
}

#[test]
fn parabolic_generator_sets() {
    let s5 = PermGroup::new(5, vec![p(5, "(1,2)"), p(5, "(1,2,3,4,5)")]).unwrap();
    let distinct = rt(&s5, "2A,3A,5A");
    let gens = parabolic_generators(&distinct, false);
    assert_eq!(gens, vec![BraidGen::Qij(1, 2), BraidGen::Qij(1, 3), BraidGen::Qij(2, 3)]);
    let equal = rt(&s5, "3A,3A,3A");
    let mut gens = parabolic_generators(&equal, false);
    gens.sort_by_key(|g| format!("{g:?}"));
    assert_eq!(gens.len(), 5);
    assert!(gens.contains(&BraidGen::Q(1)) && gens.contains(&BraidGen::Q(2)));

    let six = rt(&s5, "2A,2B,3A,4A,5A,6A");
    assert_eq!(split_generators(&six, 3).unwrap().cross.len(), 9);
    let blocks = rt(&s5, "2A,2A,2A,2B,2B,2B");
    let split = split_generators(&blocks, 3).unwrap();
    assert_eq!(split.cross.len(), 9);
    assert!(!split.cross.contains(&BraidGen::Q(3)));
    assert!(split_generators(&blocks, 6).is_err());
}

#[test]
fn classic_orbit_examples() {
    let g = named("ASL(3,2)");
    let r = orbit_partition(&g, &rt(&g, "2B,3A,3A,3A"), &ClassicParams::default()).unwrap();
    assert_eq!(r.lengths(), vec![120]);
    let g = named("AGL(2,3)");
    let r = orbit_partition(&g, &rt(&g, "2A,2A,2A,2A,3A"), &ClassicParams::default()).unwrap();
    assert_eq!(r.lengths(), vec![216]);
    assert_eq!(r.generating_tuples(), 216 * 432);
}

#[test]
fn triple_examples() {
    for (group, ty, orbits) in [
        ("5^2:3", "3B,3B,3B", 8),
        ("AGammaL(1,8)", "3B,3B,6B", 2),
        ("11^2:3", "3A,3A,3A", 40),
        ("AGL(3,3)", "3E,4A,6E", 8),
    ] {
        let g = named(group);
        let report = enumerate_triples(&g, &rt(&g, ty)).unwrap();
        assert_eq!(report.orbits.len(), orbits, "{group} {ty}");
        assert!(report.orbits.iter().all(|o| o.length == 1));
    }
}

#[test]
fn degree8_candidates_reach_index_14() {
    let g = named("ASL(3,2)");
    let t = g.conjugacy_classes().unwrap();
    for rt in rh_candidate_types(t, 8, 0) {
        let s: usize = rt.classes.iter().map(|&c| t.class(c).perm_index).sum();
        assert_eq!(s, 14);
    }
}

#[test]
fn degree8_has_50_system_types() {
    let params = genus::ClassifyParams {
        engine: genus::Engine::Classic,
        ..Default::default()
    };
    let mut n = 0;
    for name in ["AGammaL(1,8)", "ASL(3,2)"] {
        let g = named(name);
        n += genus::classify(name, &g, 2, 3, &params).unwrap().systems.len();
    }
    assert_eq!(n, 50);
}

#[test]
fn builtin_catalog_validates() {
    let entries = catalog::builtin().unwrap();
    for d in [8, 9, 16, 25, 27, 49, 121] {
        assert!(entries.iter().any(|e| e.degree == d), "degree {d}");
    }
    assert!(catalog::find(&entries, "AΓL(1,8)").is_some());
}
