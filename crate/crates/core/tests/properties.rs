mod common;

use cpw_core::decomp::induced;
use cpw_core::oracle::oracle_cpw_layout;
use cpw_core::*;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use common::random_connected;

fn graph(seed: u64, n: usize) -> (Graph, StdRng) {
    let mut rng = StdRng::seed_from_u64(seed);
    let p = rng.gen_range(0.0..0.5);
    (random_connected(&mut rng, n, p), rng)
}

/// Decomposition of a random order; connected when `connected` (the order
/// then grows a connected set).
fn random_layout(g: &Graph, rng: &mut StdRng, connected: bool) -> PathDecomposition {
    let n = g.n();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    if connected {
        let mut placed = vec![false; n];
        let mut out = vec![order[0]];
        placed[order[0]] = true;
        while out.len() < n {
            let next = *order.iter().find(|&&u| !placed[u] && g.neighbors(u).iter().any(|&x| placed[x])).unwrap();
            placed[next] = true;
            out.push(next);
        }
        order = out;
    }
    layout_decomposition(g, &order)
}

fn random_subset(n: usize, rng: &mut StdRng) -> VertexSet {
    (0..n).filter(|_| rng.gen_bool(0.4)).collect()
}

fn encoded(seed: u64, n: usize) -> BSequence {
    let (g, mut rng) = graph(seed, n);
    let connected = rng.gen_bool(0.5);
        let p = random_layout(&g, &mut rng, connected);
    let b = random_subset(n, &mut rng);
    encode(&BoundariedGraph::new(g, b).unwrap(), &p).unwrap().0
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn rep_is_equivalent(seed in any::<u64>(), n in 1usize..9) {
        let s = encoded(seed, n);
        let r = s.rep();
        prop_assert!(r.is_rep());
        prop_assert_eq!(r.rep(), r.clone());
        prop_assert!(r.dominates(&s) && s.dominates(&r));
        prop_assert_eq!(r.model(), s.model());
        if s.is_connected() {
            prop_assert!(r.model().0.len() <= 3 * s.boundary().len() + 2);
        }
    }

    #[test]
    fn rep_ignores_extensions(seed in any::<u64>(), n in 1usize..9, picks in prop::collection::vec(any::<prop::sample::Index>(), 1..4)) {
        let s = encoded(seed, n);
        let mut t = s.clone();
        for i in picks {
            t = t.duplicate(i.index(t.len()));
        }
        prop_assert_eq!(t.rep(), s.rep());
        prop_assert_eq!(t.model(), s.model());
        prop_assert!(t.dominates(&s) && s.dominates(&t));
    }

    #[test]
    fn projection_matches_encoding(seed in any::<u64>(), n in 2usize..9) {
        let (g, mut rng) = graph(seed, n);
        let p = random_layout(&g, &mut rng, false);
        let mut b = random_subset(n, &mut rng);
        let x = rng.gen_range(0..n);
        b.insert(x);
        let (s, labels) = encode(&BoundariedGraph::new(g.clone(), b.clone()).unwrap(), &p).unwrap();
        let ix = labels.iter().position(|&v| v == x).unwrap();
        b.remove(x);
        let (t, _) = encode(&BoundariedGraph::new(g, b).unwrap(), &p).unwrap();
        let projected = s.project(s.boundary().without(ix)).unwrap();
        let renamed = projected.relabel(|l| if l > ix { l - 1 } else { l });
        prop_assert_eq!(renamed, t);
    }

    #[test]
    fn insertion_matches_encoding(seed in any::<u64>(), n in 2usize..9) {
        let (g, mut rng) = graph(seed, n);
        let p = random_layout(&g, &mut rng, false);
        let x = rng.gen_range(0..n);
        let mut b = random_subset(n, &mut rng);
        b.insert(x);
        for &u in g.neighbors(x) {
            b.insert(u);
        }
        let (s, labels) = encode(&BoundariedGraph::new(g.clone(), b.clone()).unwrap(), &p).unwrap();
        let ix = labels.iter().position(|&v| v == x).unwrap();

        let rest: VertexSet = (0..n).filter(|&v| v != x).collect();
        let (h, ids) = induced(&g, &rest);
        let new_id = |v: usize| ids.iter().position(|&u| u == v).unwrap();
        let bags = p.bags.iter().map(|bag| bag.iter().filter(|&v| v != x).map(new_id).collect()).collect();
        let hb = b.iter().filter(|&v| v != x).map(new_id).collect();
        let (t, _) = encode(&BoundariedGraph::new(h, hb).unwrap(), &PathDecomposition::new(bags)).unwrap();
        let t = t.relabel(|l| if l >= ix { l + 1 } else { l });

        let trace: Vec<usize> = (0..p.len()).filter(|&i| p.bags[i].contains(x)).collect();
        let xs: LabelSet = g.neighbors(x).iter().map(|&u| labels.iter().position(|&v| v == u).unwrap()).collect();
        let inserted = t.insert(ix, xs, trace[0], *trace.last().unwrap()).unwrap();
        prop_assert_eq!(inserted, s);
    }

    #[test]
    fn boundary_vertex_removal(seed in any::<u64>(), n in 2usize..9) {
        let (g, mut rng) = graph(seed, n);
        let connected = rng.gen_bool(0.7);
        let p = random_layout(&g, &mut rng, connected);
        let mut b = random_subset(n, &mut rng);
        let x = rng.gen_range(0..n);
        b.insert(x);
        for &u in g.neighbors(x) {
            b.insert(u);
        }
        prop_assume!(is_connected_decomposition(&g, &p, &b));
        let rest: VertexSet = (0..n).filter(|&v| v != x).collect();
        let (h, ids) = induced(&g, &rest);
        let new_id = |v: usize| ids.iter().position(|&u| u == v).unwrap();
        let bags = p.bags.iter().map(|bag| bag.iter().filter(|&v| v != x).map(new_id).collect()).collect();
        let q = PathDecomposition::new(bags);
        let hb: VertexSet = b.iter().filter(|&v| v != x).map(new_id).collect();
        prop_assert!(validate(&h, &q).is_ok());
        prop_assert!(is_connected_decomposition(&h, &q, &hb));
    }

    #[test]
    fn nice_steps(seed in any::<u64>(), n in 1usize..10) {
        let (g, mut rng) = graph(seed, n);
        let p = random_layout(&g, &mut rng, false);
        let steps = make_nice(&p).unwrap();
        prop_assert_eq!(steps.len(), 2 * n);
        prop_assert_eq!(steps[0].bag.len(), 1);
        prop_assert!(steps.last().unwrap().bag.is_empty());
        let widest = steps.iter().map(|s| s.bag.len()).max().unwrap();
        prop_assert_eq!(widest, p.width() + 1);
        let mut seen = vec![(0, 0); n];
        for s in &steps {
            match s.kind {
                StepKind::Introduce(v) => seen[v].0 += 1,
                StepKind::Forget(v) => seen[v].1 += 1,
            }
        }
        prop_assert!(seen.iter().all(|&c| c == (1, 1)));
        let bags = PathDecomposition::new(steps.iter().map(|s| s.bag.clone()).collect());
        prop_assert!(validate(&g, &bags.compact()).is_ok());
    }

    #[test]
    fn text_round_trips(seed in any::<u64>(), n in 1usize..12) {
        let (g, mut rng) = graph(seed, n);
        prop_assert_eq!(parse_graph(&format_graph(&g)).unwrap().graph, g.clone());
        let p = random_layout(&g, &mut rng, false);
        prop_assert_eq!(parse_decomposition(&format_decomposition(&p)).unwrap(), p);
    }

    #[test]
    fn greedy_is_a_connected_upper_bound(seed in any::<u64>(), n in 1usize..9) {
        let (g, _) = graph(seed, n);
        let (k, p) = greedy_connected_decomposition(&g).unwrap();
        prop_assert_eq!(validate(&g, &p), Ok(k));
        prop_assert!(is_connected_decomposition(&g, &p, &VertexSet::new()));
        prop_assert!(oracle_cpw(&g, k).unwrap());
    }
}

#[test]
fn oracles_agree() {
    for n in 1..=7 {
        for seed in 0..40 {
            let (g, _) = graph(seed * 31 + n as u64, n);
            for w in 0..n {
                assert_eq!(oracle_cpw(&g, w), oracle_cpw_layout(&g, w), "{:?} w={w}", g.edges().collect::<Vec<_>>());
            }
        }
    }
}

#[test]
fn apex_raises_pathwidth_by_one() {
    for g in common::connected_graphs_upto(5) {
        assert_eq!(oracle_pw(&apex_augment(&g)).unwrap(), oracle_pw(&g).unwrap() + 1);
    }
}

/// The decision must not depend on which decomposition drives it.
#[test]
fn any_decomposition_gives_the_same_answer() {
    let opts = Options { check_invariants: true, check_replay: true, ..Options::strict() };
    for seed in 0..60u64 {
        let n = 2 + (seed % 5) as usize;
        let (g, mut rng) = graph(seed, n);
        let connected = rng.gen_bool(0.5);
        let p = random_layout(&g, &mut rng, connected);
        for w in 0..n {
            let d = decide_cpw_with(&g, &p, w, &opts).unwrap();
            assert_eq!(d.feasible, oracle_cpw(&g, w).unwrap(), "{:?} {:?} w={w}", g.edges().collect::<Vec<_>>(), p.to_vecs());
        }
    }
}

#[test]
fn typical_sequence_count() {
    for k in 0..=4u32 {
        let mut count = 0;
        let mut layer: Vec<Vec<u32>> = vec![vec![]];
        for _ in 0..2 * k + 1 {
            layer = layer
                .iter()
                .flat_map(|s| (0..=k).map(move |v| [s.as_slice(), &[v]].concat()))
                .filter(|s| s.windows(2).all(|w| w[0] != w[1]))
                .collect();
            count += layer.iter().filter(|s| tseq(s).unwrap().values == **s).count();
        }
        let bound = 8.0 / 3.0 * 4f64.powi(k as i32);
        assert!(count as f64 <= bound, "k={k}: {count} typical sequences > {bound}");
    }
}

/// Is there an extension of `t` with the length of `a` that relates to `a`
/// pointwise by `ok`? Extensions of `t` to length |a| are exactly the
/// monotone onto maps from positions of `a` to positions of `t`.
fn extension_fits(t: &[u32], a: &[u32], ok: impl Fn(u32, u32) -> bool) -> bool {
    let mut reach = vec![false; t.len()];
    reach[0] = ok(t[0], a[0]);
    for &v in &a[1..] {
        let prev = reach.clone();
        for j in 0..t.len() {
            reach[j] = (prev[j] || (j > 0 && prev[j - 1])) && ok(t[j], v);
        }
    }
    reach[t.len() - 1]
}

#[test]
fn sandwich() {
    let mut rng = StdRng::seed_from_u64(5);
    for _ in 0..1000 {
        let len = rng.gen_range(1..=20);
        let a: Vec<u32> = (0..len).map(|_| rng.gen_range(0..7)).collect();
        let t = tseq(&a).unwrap().values;
        assert!(extension_fits(&t, &a, |x, y| x <= y), "{a:?}");
        assert!(extension_fits(&t, &a, |x, y| x >= y), "{a:?}");
    }
}
