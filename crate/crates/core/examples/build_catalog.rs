//! Dev tool: searches matrix groups for the affine groups of the reference
//! tables, pins class labels against the reference rows and prints catalog
//! entries.
//!
//! cargo run --release -p nielsen --example build_catalog -- [names...]

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use nielsen::affine::{affine_group, frobenius, general_linear_generators, singer_cycle, Mat};
use nielsen::genus::{classify_type, ClassifyParams, Engine};
use nielsen::group::{ClassProducts, PermGroup};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Row {
    labels: Vec<String>,
    orbits: usize,
    largest: u128,
}

fn reference_rows() -> BTreeMap<String, Vec<Row>> {
    let text = include_str!("../data/reference_tables.tsv");
    let mut out: BTreeMap<String, Vec<Row>> = BTreeMap::new();
    for line in text.lines().filter(|l| !l.starts_with('#')) {
        let f: Vec<&str> = line.split('\t').collect();
        out.entry(f[1].to_string()).or_default().push(Row {
            labels: f[2].split(',').map(|s| s.trim().to_string()).collect(),
            orbits: f[3].parse().unwrap(),
            largest: f[4].parse().unwrap(),
        });
    }
    out
}

fn random_mat(p: u64, e: usize, rng: &mut ChaCha8Rng) -> Mat {
    loop {
        let m = Mat::from_entries(p, e, (0..e * e).map(|_| rng.gen_range(0..p)).collect());
        if m.is_invertible() {
            return m;
        }
    }
}

fn random_of_order(p: u64, e: usize, order: u64, rng: &mut ChaCha8Rng) -> Mat {
    loop {
        let m = random_mat(p, e, rng);
        if m.order() == order {
            return m;
        }
    }
}

fn linear_group(p: u64, e: usize, gens: &[Mat]) -> PermGroup {
    let n = (p as usize).pow(e as u32);
    PermGroup::new(n, gens.iter().map(|m| m.to_perm().unwrap()).collect()).unwrap()
}

fn rank_of(p: u64, e: usize, vecs: &[Vec<u64>]) -> usize {
    let mut rows: Vec<Vec<u64>> = vecs.to_vec();
    let mut rank = 0;
    for col in 0..e {
        let Some(piv) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, piv);
        let inv = nielsen::affine::mod_inverse(rows[rank][col], p);
        let pr: Vec<u64> = rows[rank].iter().map(|&x| x * inv % p).collect();
        rows[rank] = pr.clone();
        for r in 0..rows.len() {
            if r != rank && rows[r][col] != 0 {
                let f = rows[r][col];
                for c in 0..e {
                    rows[r][c] = (rows[r][c] + p * p - f * pr[c] % p) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn irreducible(p: u64, e: usize, h: &PermGroup) -> bool {
    let n = h.degree();
    let mut seen = vec![false; n];
    for v in 1..n {
        if seen[v] {
            continue;
        }
        let orbit = h.orbit(v);
        for &w in &orbit {
            seen[w] = true;
        }
        let vecs: Vec<Vec<u64>> = orbit.iter().map(|&w| nielsen::affine::vector_of(p, e, w)).collect();
        if rank_of(p, e, &vecs) < e {
            return false;
        }
    }
    true
}

fn invariant(h: &PermGroup) -> Vec<(u64, usize, usize)> {
    let mut m: BTreeMap<(u64, usize), usize> = BTreeMap::new();
    for x in h.elements().unwrap().iter() {
        *m.entry((x.order(), x.fixed_points())).or_insert(0) += 1;
    }
    m.into_iter().map(|((a, b), c)| (a, b, c)).collect()
}

/// Irreducible subgroups of the given order, found from random generators
/// of the hinted orders; one per invariant.
fn search(
    p: u64,
    e: usize,
    order: u128,
    hints: &[u64],
    tries: usize,
    seed: u64,
) -> Vec<Vec<Mat>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for _ in 0..tries {
        let gens: Vec<Mat> = hints.iter().map(|&o| random_of_order(p, e, o, &mut rng)).collect();
        let h = linear_group(p, e, &gens);
        if h.order() != order || !irreducible(p, e, &h) {
            continue;
        }
        let inv = invariant(&h);
        if seen.insert(inv) {
            out.push(gens);
        }
    }
    out
}

struct Target {
    name: &'static str,
    p: u64,
    e: usize,
    order: u128,
    /// Explicit generator sets, or empty to use the search.
    explicit: Vec<Vec<Mat>>,
    hints: Vec<Vec<u64>>,
    max_arity: usize,
}

fn targets() -> Vec<Target> {
    let mut v = Vec::new();
    let t = |name, p, e, order: u128, explicit, hints, max_arity| Target {
        name,
        p,
        e,
        order,
        explicit,
        hints,
        max_arity,
    };
    let s8 = singer_cycle(2, 3);
    v.push(t("AGammaL(1,8)", 2, 3, 168, vec![vec![s8.clone(), frobenius(&s8)]], vec![], 9));
    v.push(t("ASL(3,2)", 2, 3, 1344, vec![general_linear_generators(2, 3)], vec![], 9));
    let s9 = singer_cycle(3, 2);
    let f9 = frobenius(&s9);
    v.push(t("3^2:4", 3, 2, 36, vec![vec![s9.pow(2)]], vec![], 9));
    v.push(t(
        "3^2:D(2*4)",
        3,
        2,
        72,
        vec![vec![Mat::new(3, 2, &[&[1, 0], &[0, -1]]), Mat::new(3, 2, &[&[0, 1], &[1, 0]])]],
        vec![],
        9,
    ));
    v.push(t(
        "3^2:(2'A4)",
        3,
        2,
        216,
        vec![vec![Mat::new(3, 2, &[&[1, 1], &[0, 1]]), Mat::new(3, 2, &[&[1, 0], &[1, 1]])]],
        vec![],
        9,
    ));
    v.push(t("AGammaL(1,9)", 3, 2, 144, vec![vec![s9.clone(), f9.clone()]], vec![], 9));
    v.push(t("AGL(2,3)", 3, 2, 432, vec![general_linear_generators(3, 2)], vec![], 9));

    let s25 = singer_cycle(5, 2);
    let f25 = frobenius(&s25);
    v.push(t("5^2:3", 5, 2, 75, vec![vec![s25.pow(8)]], vec![], 4));
    v.push(t("5^2:6", 5, 2, 150, vec![vec![s25.pow(4)]], vec![], 4));
    v.push(t("5^2:S3", 5, 2, 150, vec![vec![s25.pow(8), f25.clone()]], vec![vec![3, 2]], 4));
    v.push(t("5^2:D(2*6)", 5, 2, 300, vec![vec![s25.pow(4), f25.clone()]], vec![vec![6, 2]], 4));
    v.push(t("5^2:D(2*4):2", 5, 2, 400, vec![], vec![vec![4, 2, 2], vec![8, 2], vec![4, 4], vec![4, 2]], 4));
    v.push(t("5^2:O+(2,5)", 5, 2, 0, vec![], vec![vec![8, 2], vec![8, 4], vec![4, 2], vec![8, 2, 2]], 4));
    v.push(t("5^2:((Q8:3)'2)", 5, 2, 1200, vec![], vec![vec![3, 4], vec![3, 8], vec![6, 4], vec![12, 2]], 4));
    v.push(t("5^2:((Q8:3)'4)", 5, 2, 2400, vec![], vec![vec![3, 4], vec![3, 8], vec![12, 4], vec![6, 8]], 4));
    v.push(t("ASL(2,5):2", 5, 2, 6000, vec![], vec![vec![5, 4], vec![5, 2], vec![20, 3]], 4));
    v.push(t("5^3:4^2:S3", 5, 3, 12000, vec![], vec![vec![4, 2, 3], vec![8, 3], vec![4, 6]], 3));

    let s49 = singer_cycle(7, 2);
    v.push(t("7^2:4", 7, 2, 196, vec![vec![s49.pow(12)]], vec![], 3));
    v.push(t("7^2:3:D(2*4)", 7, 2, 1176, vec![], vec![vec![6, 4], vec![3, 8], vec![12, 2], vec![6, 2, 2], vec![3, 4, 2]], 3));

    let s121 = singer_cycle(11, 2);
    v.push(t("11^2:3", 11, 2, 363, vec![vec![s121.pow(40)]], vec![], 3));
    v.push(t("11^2:4", 11, 2, 484, vec![vec![s121.pow(30)]], vec![], 3));
    v.push(t("11^2:6", 11, 2, 726, vec![vec![s121.pow(20)]], vec![], 3));
    v.push(t("11^2:(Q8:D6)", 11, 2, 5808, vec![], vec![vec![8, 3], vec![8, 2], vec![3, 8, 2]], 3));
    let h = |v: &[&[u64]]| -> Vec<Vec<u64>> { v.iter().map(|x| x.to_vec()).collect() };
    v.push(t("2^4:D(2*5)", 2, 4, 160, vec![], h(&[&[5, 2]]), 4));
    // ω on F_4 is [[0,1],[1,1]]; the two blocks are swapped by the last generator
    let w1 = Mat::new(2, 4, &[&[0, 1, 0, 0], &[1, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]]);
    let w2 = Mat::new(2, 4, &[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 0, 1], &[0, 0, 1, 1]]);
    let sw = Mat::new(2, 4, &[&[0, 0, 1, 0], &[0, 0, 0, 1], &[1, 0, 0, 0], &[0, 1, 0, 0]]);
    v.push(t("(A4xA4):2", 2, 4, 288, vec![vec![w1, w2, sw]], vec![], 4));
    v.push(t("(2^4:5).4", 2, 4, 320, vec![], h(&[&[5, 4]]), 4));
    v.push(t("2^4:S3xS3", 2, 4, 576, vec![], h(&[&[6, 6], &[6, 2], &[3, 2, 2], &[6, 3]]), 5));
    v.push(t("2^4.3^2:4", 2, 4, 576, vec![], h(&[&[3, 4], &[6, 4]]), 5));
    v.push(t("(S4xS4):2", 2, 4, 1152, vec![], h(&[&[4, 6], &[2, 6], &[4, 3]]), 5));
    v.push(t("2^4:A5", 2, 4, 960, vec![], h(&[&[5, 3], &[5, 2], &[3, 2]]), 5));
    v.push(t("2^4:S5", 2, 4, 1920, vec![], h(&[&[5, 4], &[5, 2], &[6, 4], &[6, 2]]), 4));
    v.push(t("ASL(2,4):2", 2, 4, 1920, vec![], h(&[&[5, 4], &[5, 2], &[6, 4], &[6, 2]]), 5));
    v.push(t("2^4.A6", 2, 4, 5760, vec![], h(&[&[5, 4], &[5, 3], &[4, 3]]), 4));
    v.push(t("AGammaL(2,4)", 2, 4, 5760, vec![], h(&[&[15, 2], &[15, 4], &[5, 4], &[6, 4]]), 4));
    v.push(t("2^4.S6", 2, 4, 11520, vec![], h(&[&[5, 4], &[6, 4], &[6, 2]]), 3));
    v.push(t("2^4.A7", 2, 4, 40320, vec![], h(&[&[7, 4], &[7, 2], &[7, 3]]), 3));
    v.push(t("AGL(4,2)", 2, 4, 322560, vec![general_linear_generators(2, 4)], vec![], 3));

    v.push(t("3^3.A4", 3, 3, 324, vec![], h(&[&[3, 2], &[2, 3]]), 4));
    v.push(t("3^3(A4x2)", 3, 3, 648, vec![], h(&[&[6, 2], &[3, 2, 2], &[6, 6]]), 4));
    v.push(t("3^3.S4", 3, 3, 648, vec![], h(&[&[4, 3], &[4, 2]]), 4));
    v.push(t("3^3(S4x2)", 3, 3, 1296, vec![], h(&[&[4, 6], &[4, 3, 2], &[4, 2, 2]]), 4));
    let sl3 = vec![Mat::new(3, 3, &[&[1, 1, 0], &[0, 1, 0], &[0, 0, 1]]), Mat::new(3, 3, &[&[0, 0, 1], &[1, 0, 0], &[0, 1, 0]])];
    v.push(t("ASL(3,3)", 3, 3, 151632, vec![sl3], vec![], 3));
    v.push(t("AGL(3,3)", 3, 3, 303264, vec![general_linear_generators(3, 3)], vec![], 3));
    v
}

/// Assigns reference labels to classes so that every reference row maps to
/// a computed row with equal counts. Returns label -> class id.
fn pin_labels(
    group: &PermGroup,
    rows: &[Row],
    computed: &BTreeMap<Vec<usize>, (usize, u128)>,
    slack: usize,
) -> Option<BTreeMap<String, usize>> {
    let table = group.conjugacy_classes().unwrap();
    let mut labels: Vec<String> = rows.iter().flat_map(|r| r.labels.clone()).collect();
    labels.sort();
    labels.dedup();
    // most frequent labels first
    labels.sort_by_key(|l| std::cmp::Reverse(rows.iter().filter(|r| r.labels.contains(l)).count()));
    let order_of = |l: &str| -> u64 {
        l.trim_end_matches(|c: char| c.is_ascii_uppercase()).parse().unwrap()
    };
    let domains: Vec<Vec<usize>> = labels
        .iter()
        .map(|l| {
            table
                .classes()
                .iter()
                .filter(|c| c.element_order == order_of(l))
                .map(|c| c.id)
                .collect()
        })
        .collect();
    let mut assign: BTreeMap<String, usize> = BTreeMap::new();
    fn misses(
        rows: &[Row],
        assign: &BTreeMap<String, usize>,
        computed: &BTreeMap<Vec<usize>, (usize, u128)>,
    ) -> usize {
        let mut n = 0;
        for r in rows {
            if r.labels.iter().all(|l| assign.contains_key(l)) {
                let mut key: Vec<usize> = r.labels.iter().map(|l| assign[l]).collect();
                key.sort();
                match computed.get(&key) {
                    Some(&(o, lg)) if o == r.orbits && lg == r.largest => {}
                    _ => n += 1,
                }
            }
        }
        n
    }
    #[allow(clippy::too_many_arguments)]
    fn go(
        i: usize,
        labels: &[String],
        domains: &[Vec<usize>],
        rows: &[Row],
        assign: &mut BTreeMap<String, usize>,
        computed: &BTreeMap<Vec<usize>, (usize, u128)>,
        slack: usize,
    ) -> bool {
        if i == labels.len() {
            return true;
        }
        for &c in &domains[i] {
            if assign.values().any(|&x| x == c) {
                continue;
            }
            assign.insert(labels[i].clone(), c);
            if misses(rows, assign, computed) <= slack
                && go(i + 1, labels, domains, rows, assign, computed, slack)
            {
                return true;
            }
            assign.remove(&labels[i]);
        }
        false
    }
    if go(0, &labels, &domains, rows, &mut assign, computed, slack) {
        Some(assign)
    } else {
        None
    }
}

fn compute_rows(
    name: &str,
    g: &PermGroup,
    p: u64,
    e: u32,
    max_arity: usize,
) -> BTreeMap<Vec<usize>, (usize, u128)> {
    let table = g.conjugacy_classes().unwrap();
    let products = ClassProducts::new(table);
    let socle = g.socle_regular_elementary(p, e).unwrap();
    let values = nielsen::genus::scott_values(table, &socle, p, e).unwrap();
    let params = ClassifyParams {
        engine: Engine::Classic,
        max_arity,
        ..ClassifyParams::default()
    };
    let mut out = BTreeMap::new();
    for rt in nielsen::genus::rh_candidate_types(table, g.degree(), 0) {
        if rt.arity() > max_arity
            || !nielsen::genus::scott_filter(&rt, &values, e)
            || !nielsen::genus::structure_constant_filter(&products, &rt)
        {
            continue;
        }
        if let Some(row) = classify_type(name, g, &rt, &params).unwrap() {
            let mut key = rt.classes.clone();
            key.sort();
            out.insert(key, (row.orbits, row.largest));
        }
    }
    out
}

fn describe(g: &PermGroup, rows: &BTreeMap<Vec<usize>, (usize, u128)>) -> String {
    let table = g.conjugacy_classes().unwrap();
    let mut s = String::new();
    for (k, (o, l)) in rows {
        let lab: Vec<&str> = k.iter().map(|&c| table.class(c).label.as_str()).collect();
        s += &format!("  ({}) {} {}\n", lab.join(","), o, l);
    }
    s
}

fn main() {
    let only: Vec<String> = std::env::args().skip(1).collect();
    let refs = reference_rows();
    for t in targets() {
        if !only.is_empty() && !only.iter().any(|o| o == t.name) {
            continue;
        }
        let start = Instant::now();
        let rows = refs.get(t.name).map(|v| v.as_slice()).unwrap_or(&[]);
        let mut cands = t.explicit.clone();
        let vol = (t.p as u128).pow(t.e as u32);
        if cands.is_empty() {
            for (i, h) in t.hints.iter().enumerate() {
                let orders: Vec<u128> = if t.order == 0 {
                    vec![8, 16, 32]
                } else {
                    vec![t.order / vol]
                };
                for o in orders {
                    cands.extend(search(t.p, t.e, o, h, 3000, i as u64));
                }
            }
        }
        eprintln!("{}: {} candidates", t.name, cands.len());
        let rows_cmp: Vec<Row> = rows
            .iter()
            .filter(|r| r.labels.len() <= t.max_arity)
            .map(|r| Row {
                labels: r.labels.clone(),
                orbits: r.orbits,
                largest: r.largest,
            })
            .collect();
        let mut evaluated = Vec::new();
        for gens in &cands {
            let g = affine_group(t.p, t.e, gens).unwrap();
            if t.order != 0 && g.order() != t.order {
                eprintln!("  order {} != {}", g.order(), t.order);
                continue;
            }
            let computed = compute_rows(t.name, &g, t.p, t.e as u32, t.max_arity);
            evaluated.push((gens, g, computed));
        }
        let mut pinned = None;
        'outer: for slack in 0..=2 {
            for (i, (_, g, computed)) in evaluated.iter().enumerate() {
                if computed.is_empty() || 2 * slack > rows_cmp.len() {
                    continue;
                }
                if let Some(pins) = pin_labels(g, &rows_cmp, computed, slack) {
                    if slack > 0 || computed.len() == rows_cmp.len() {
                        pinned = Some((i, pins, slack));
                        break 'outer;
                    }
                }
            }
        }
        let found = pinned.is_some();
        if let Some((i, pins, slack)) = pinned {
            let (gens, g, computed) = &evaluated[i];
            let table = g.conjugacy_classes().unwrap();
            if slack > 0 || computed.len() != rows_cmp.len() {
                eprintln!(
                    "  pinned with {} mismatched rows; {} computed vs {} reference rows:\n{}",
                    slack,
                    computed.len(),
                    rows_cmp.len(),
                    describe(g, computed)
                );
            }
            println!("group {}", t.name);
            println!("degree {}", g.degree());
            println!("pe {} {}", t.p, t.e);
            println!("order {}", g.order());
            for m in gens.iter() {
                println!("# linear {:?}", m);
            }
            for x in g.generators() {
                println!("gen {}", x);
            }
            for (l, c) in &pins {
                println!("label {} {}", l, table.class(*c).representative);
            }
            println!("end\n");
        } else {
            for (_, g, computed) in &evaluated {
                eprintln!("  order {} no pin; computed:\n{}", g.order(), describe(g, computed));
            }
        }
        eprintln!("{}: {} in {:.1?}", t.name, if found { "ok" } else { "NOT FOUND" }, start.elapsed());
    }
}
