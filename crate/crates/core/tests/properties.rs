use homdens::drc::Hypergraph;
use homdens::drc::{drc_classify, hyper_embed_count, DrcParams, Mode};
use homdens::enumerate::graphs_up_to;
use homdens::exact::ratio_of;
use homdens::forcing::{leaf_extension, quasirandom_battery, Tolerances};
use homdens::generators::{generate, paley, GenSpec, Prob};
use homdens::homcount::{
    hom_count_brute, injective_count, kernel_density, CountConfig, Counter, Kernel,
};
use homdens::inequality::{sidorenko_report, Host};
use homdens::ramsey::{mono_density, Coloring, Variant};
use homdens::{density, hom_count, Graph, PatternGraph, Side};
use num_bigint::BigUint;
use num_traits::{One, Zero};
use proptest::collection::vec;
use proptest::prelude::*;

fn graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let mut edges = Vec::new();
            let mut i = 0;
            for u in 0..n {
                for v in u + 1..n {
                    if bits[i] {
                        edges.push((u, v));
                    }
                    i += 1;
                }
            }
            Graph::from_edges(n, &edges).unwrap()
        })
    })
}

/// Parts `0..a` and `a..a+b`, at least one edge.
fn pattern(max_side: usize) -> impl Strategy<Value = PatternGraph> {
    (1..=max_side, 1..=max_side).prop_flat_map(|(a, b)| {
        vec(any::<bool>(), a * b).prop_filter_map("no edges", move |bits| {
            let edges: Vec<(usize, usize)> = (0..a * b)
                .filter(|&i| bits[i])
                .map(|i| (i / b, a + i % b))
                .collect();
            if edges.is_empty() {
                return None;
            }
            let parts = ((0..a).collect(), (a..a + b).collect());
            PatternGraph::from_edges(a + b, &edges, Some(parts)).ok()
        })
    })
}

fn has_complete_vertex(p: &PatternGraph) -> bool {
    [Side::First, Side::Second].iter().any(|&s| {
        let other = p.part(s.other()).len();
        p.part(s).iter().any(|&v| p.graph().degree(v) == other)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn common_neighborhood_ignores_order_and_repeats(
        g in graph(9),
        picks in vec(any::<prop::sample::Index>(), 0..5),
        shuffle in any::<u64>(),
    ) {
        let seq: Vec<usize> = picks.iter().map(|i| i.index(g.n())).collect();
        let base = g.common_neighborhood(&seq).unwrap();
        let mut other = seq.clone();
        other.extend(seq.iter().take(2));
        let k = other.len().max(1);
        other.rotate_left(shuffle as usize % k);
        other.reverse();
        prop_assert_eq!(g.common_neighborhood(&other).unwrap(), base);
    }

    #[test]
    fn common_neighborhood_shrinks_on_extension(
        g in graph(9),
        s in vec(any::<prop::sample::Index>(), 0..4),
        t in vec(any::<prop::sample::Index>(), 0..4),
    ) {
        let s: Vec<usize> = s.iter().map(|i| i.index(g.n())).collect();
        let mut st = s.clone();
        st.extend(t.iter().map(|i| i.index(g.n())));
        let small = g.common_neighborhood(&st).unwrap();
        let big = g.common_neighborhood(&s).unwrap();
        prop_assert!(small.len() <= big.len());
        prop_assert!(small.iter().all(|v| big.contains(v)));
    }

    #[test]
    fn tensor_density_multiplies(h in graph(4), f in graph(4), g in graph(4)) {
        let fg = f.tensor_product(&g, 1_000).unwrap();
        let lhs = density(&h, &fg).unwrap().to_ratio();
        let rhs = density(&h, &f).unwrap().to_ratio() * density(&h, &g).unwrap().to_ratio();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn counter_matches_brute_and_kernel(h in pattern(3), g in graph(6)) {
        let hg = h.graph();
        let checked = Counter::new(CountConfig { cross_check: true, ..CountConfig::default() })
            .count(hg, &g)
            .unwrap();
        prop_assert_eq!(&checked.count, &hom_count_brute(hg, &g, 10).unwrap());
        let k = Kernel::from_graph(&g).unwrap();
        prop_assert_eq!(kernel_density(hg, &k), density(hg, &g).unwrap().to_ratio());
    }

    #[test]
    fn components_factorize(a in pattern(2), b in pattern(2), g in graph(6)) {
        let h = a.disjoint_union(&b);
        let product: BigUint = h
            .components()
            .iter()
            .map(|c| hom_count(c.graph(), &g).unwrap())
            .product();
        prop_assert_eq!(hom_count(h.graph(), &g).unwrap(), product);
    }

    #[test]
    fn extra_edge_never_raises_density(h in pattern(3), g in graph(6), pick in any::<prop::sample::Index>()) {
        let missing: Vec<(usize, usize)> = h
            .part1()
            .iter()
            .flat_map(|&u| h.part2().into_iter().map(move |v| (u, v)))
            .filter(|&(u, v)| !h.graph().has_edge(u, v))
            .collect();
        prop_assume!(!missing.is_empty());
        let (u, v) = missing[pick.index(missing.len())];
        let denser = h.with_edge(u, v).unwrap();
        prop_assert!(density(denser.graph(), &g).unwrap() <= density(h.graph(), &g).unwrap());
    }

    #[test]
    fn k2_injective_equals_hom(g in graph(8)) {
        let k2 = Graph::complete(2);
        prop_assert_eq!(injective_count(&k2, &g), hom_count(&k2, &g).unwrap());
    }

    #[test]
    fn gnp_is_seed_stable(n in 2usize..60, num in 1u64..=10, seed in any::<u64>()) {
        let spec = GenSpec::gnp(n, Prob::new(num, 10).unwrap(), seed);
        let a = generate(&spec).unwrap();
        let b = generate(&spec).unwrap();
        prop_assert_eq!(a.edges(), b.edges());
        let tol = Tolerances::default();
        let p = ratio_of(num as i64, 10);
        let ra = serde_json::to_string(&quasirandom_battery(&a, Some(&p), &tol).unwrap()).unwrap();
        let rb = serde_json::to_string(&quasirandom_battery(&b, Some(&p), &tol).unwrap()).unwrap();
        prop_assert_eq!(ra, rb);
    }

    #[test]
    fn drc_tallies_agree_and_shrink_with_c(g in graph(7), which in 0usize..3) {
        let (r, d, n) = [(1, 1, 3), (1, 2, 4), (2, 2, 4)][which];
        let mut prev_rare: Option<Vec<BigUint>> = None;
        let mut prev_good = None;
        for c in [ratio_of(1, 2), ratio_of(1, 4), ratio_of(1, 16)] {
            let params = DrcParams::new(r, d, n, Some(c)).unwrap();
            let rep = match drc_classify(&g, &params, &Mode::default()) {
                Ok(rep) => rep,
                Err(homdens::Error::Vacuous { .. }) => return Ok(()),
                Err(e) => panic!("{e}"),
            };
            prop_assert!(rep.x_consistent());
            let rare: Vec<BigUint> = rep.tallies.iter().map(|t| t.rare_sequences.clone()).collect();
            if let Some(prev) = &prev_rare {
                prop_assert!(rare.iter().zip(prev).all(|(now, before)| now <= before));
            }
            if let Some(prev) = &prev_good {
                prop_assert!(rep.good_sum.0 >= *prev);
            }
            prev_rare = Some(rare);
            prev_good = Some(rep.good_sum.0.clone());
        }
    }

    #[test]
    fn embedding_conclusion_follows_hypothesis(
        h in 1usize..=3,
        raw_edges in vec(vec(0usize..3, 1..=3), 0..=3),
        big_n in 1usize..=4,
        bits in vec(prop::bool::weighted(0.93), 4 + 16 + 64),
    ) {
        let edges: Vec<Vec<usize>> = raw_edges
            .into_iter()
            .map(|e| e.into_iter().map(|v| v % h).collect())
            .collect();
        let hg = Hypergraph::new(h, edges).unwrap();
        let offsets = [0, 0, big_n, big_n + big_n * big_n];
        let target = (big_n, |s: &[usize]| {
            let code = s.iter().fold(0, |acc, &x| acc * big_n + x);
            bits[offsets[s.len()] + code]
        });
        let rep = hyper_embed_count(&hg, &target).unwrap();
        if rep.hypothesis {
            prop_assert!(rep.conclusion, "{rep:?}");
        }
    }

    #[test]
    fn sidorenko_type_bounds_hold(h in pattern(3), g in graph(7)) {
        let rep = sidorenko_report(&h, Host::Graph(&g)).unwrap();
        prop_assert!(rep.width_bound.holds);
        if h.complete_side_params().is_some() {
            prop_assert!(rep.conjecture);
            prop_assert!(rep.theorem13.as_ref().unwrap().holds);
        }
    }

    #[test]
    fn leaf_extension_identity(h in pattern(3), g in graph(6)) {
        let rep = leaf_extension(&h, &g).unwrap();
        prop_assert!(rep.identity_holds);
        prop_assert!(rep.bound_holds);
    }

    #[test]
    fn zero_codegree_deviation_needs_integral_target(g in graph(8), num in 1i64..8, den in 1i64..8) {
        prop_assume!(g.n() >= 2 && num <= den);
        let p = ratio_of(num, den);
        let rep = quasirandom_battery(&g, Some(&p), &Tolerances::default()).unwrap();
        if rep.dev_codeg.0.is_zero() {
            let target = &p * &p * ratio_of(g.n() as i64, 1);
            prop_assert!(target.is_integer());
        }
    }

    #[test]
    fn color_swap_keeps_mono_density(red in graph(6), h in pattern(2)) {
        prop_assume!(red.n() >= h.n());
        let col = Coloring::new(red);
        for variant in [Variant::Injective, Variant::Homomorphism] {
            prop_assert_eq!(
                mono_density(&col, &h, variant).unwrap(),
                mono_density(&col.swapped(), &h, variant).unwrap()
            );
        }
    }
}

#[test]
fn tensor_degrees_multiply() {
    let corpus = graphs_up_to(5);
    for f in &corpus {
        for g in &corpus {
            let fg = f.tensor_product(g, 1_000).unwrap();
            for u in 0..f.n() {
                for v in 0..g.n() {
                    assert_eq!(fg.degree(u * g.n() + v), f.degree(u) * g.degree(v));
                }
            }
        }
    }
}

#[test]
fn width_zero_iff_every_component_has_complete_vertex() {
    let mut seen = 0;
    for g in graphs_up_to(7) {
        let Ok(h) = PatternGraph::from_graph(g) else {
            continue;
        };
        seen += 1;
        let characterized = h.components().iter().all(has_complete_vertex);
        assert_eq!(h.width() == 0, characterized, "{h:?}");
        if h.graph().is_connected() && h.m() > 0 {
            assert_eq!(h.complete_side_params().is_some(), h.width() == 0, "{h:?}");
        }
    }
    assert!(seen > 100);
}

#[test]
fn paley_edge_count() {
    for q in [5u64, 13, 17, 29, 37, 41] {
        let g = paley(q).unwrap();
        assert_eq!(g.edge_count() as u64, q * (q - 1) / 4);
        assert!(g.is_regular());
        assert_eq!(g.degree(0) as u64, (q - 1) / 2);
    }
}

#[test]
fn edgeless_host_is_degenerate_not_a_failure() {
    let h = homdens::generators::pattern_shorthand("C4").unwrap();
    let g = Graph::empty(3);
    let rep = sidorenko_report(&h, Host::Graph(&g)).unwrap();
    assert!(rep.degenerate && rep.conjecture);
    assert!(rep.t_k2.0.is_zero() && !rep.p_power.0.is_one());
}
