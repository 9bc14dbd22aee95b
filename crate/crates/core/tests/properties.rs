use proptest::prelude::*;

use purepair::certify;
use purepair::extract::basic::{controlled_subgraph, gyarfas_colour_bound, gyarfas_vertex, min_degree_core};
use purepair::extract::broom::star_step;
use purepair::extract::p5::{assert_unmixed, nonneighbour_cover, terminal_partition, MixedCheck, P5Params};
use purepair::generators::{c5_join_power, gnp, named, path, random_h_free};
use purepair::harness::{run_sample, CampaignParams, Lemma, Status};
use purepair::oracles::{
    alpha_of, chromatic_number, degeneracy, find_induced_copy, is_induced_copy, naive_count_induced_copies,
    omega_of, submeasure_axiom_check, MeasureKind,
};
use purepair::rational::{q, qu};
use purepair::{Graph, PairStatus, VertexSet};

fn graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n, 1i64..10, any::<u64>()).prop_map(|(n, p, seed)| gnp(n, &q(p, 10), seed).unwrap())
}

fn p5_free(max_n: usize) -> impl Strategy<Value = Graph> {
    (5..=max_n, 2i64..9, any::<u64>()).prop_map(|(n, p, seed)| random_h_free(n, &q(p, 10), &path(5), seed, 2000).unwrap())
}

fn subset(g: &Graph, bits: u64) -> VertexSet {
    VertexSet(bits & g.vertices().0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn pair_status_dualises_under_complement(g in graph(10), a in any::<u64>(), b in any::<u64>()) {
        let a = subset(&g, a);
        let b = subset(&g, b) - a;
        prop_assume!(!a.is_empty() && !b.is_empty());
        let here = g.pair_status(a, b).unwrap();
        let there = g.complement().pair_status(a, b).unwrap();
        prop_assert_eq!(here == PairStatus::Anticomplete, there == PairStatus::Complete);
        prop_assert_eq!(here == PairStatus::Complete, there == PairStatus::Anticomplete);
    }

    #[test]
    fn components_partition_and_separate(g in graph(12), s in any::<u64>()) {
        let s = subset(&g, s);
        let comps = g.components(s);
        let mut seen = VertexSet::EMPTY;
        for &c in &comps {
            prop_assert!(c.is_disjoint(seen));
            prop_assert!(g.is_connected(c));
            seen = seen | c;
        }
        prop_assert_eq!(seen, s);
        for (i, &c) in comps.iter().enumerate() {
            for &d in &comps[i + 1..] {
                prop_assert!(g.is_anticomplete_to(c, d));
            }
        }
    }

    #[test]
    fn induced_on_everything_is_identity(g in graph(12)) {
        let (h, map) = g.induced(g.vertices()).unwrap();
        prop_assert_eq!(map, (0..g.n()).collect::<Vec<_>>());
        prop_assert_eq!(h, g);
    }

    #[test]
    fn chromatic_invariants(g in graph(12)) {
        let r = chromatic_number(&g).unwrap();
        let all = g.vertices();
        let (w, a) = (omega_of(&g, all), alpha_of(&g, all));
        prop_assert!(r.value >= w);
        prop_assert!(r.value * a >= g.n());
        prop_assert!(r.value <= degeneracy(&g).0 + 1);
        prop_assert_eq!(r.colouring.count(), r.value);
        let mut seen = VertexSet::EMPTY;
        for &c in &r.colouring.classes {
            prop_assert!(g.is_stable(c) && c.is_disjoint(seen));
            seen = seen | c;
        }
        prop_assert_eq!(seen, all);
    }

    #[test]
    fn copy_search_matches_naive(g in graph(9), h in prop::sample::select(vec!["P3", "P4", "P5", "C4", "K3", "broom(3,2)", "star(3)", "E3"])) {
        let h = named(h).unwrap();
        let fast = find_induced_copy(&h, &g, None).unwrap();
        prop_assert_eq!(fast.is_some(), naive_count_induced_copies(&h, &g) > 0);
        if let Some(phi) = fast {
            prop_assert!(is_induced_copy(&h, &g, &phi));
        }
    }

    #[test]
    fn submeasure_axioms(g in graph(12), seed in any::<u64>()) {
        for mu in [MeasureKind::Cardinality, MeasureKind::Chromatic] {
            prop_assert!(submeasure_axiom_check(&mu, &g, 50, seed).passed());
        }
    }

    #[test]
    fn h_free_sampler_output_is_h_free(n in 5usize..14, seed in any::<u64>(), h in prop::sample::select(vec!["P4", "P5", "K3", "broom(3,2)"])) {
        let hg = named(h).unwrap();
        let g = random_h_free(n, &q(1, 2), &hg, seed, 2000).unwrap();
        prop_assert!(find_induced_copy(&hg, &g, None).unwrap().is_none());
    }

    #[test]
    fn gyarfas_postconditions(g in p5_free(13)) {
        prop_assume!(g.edge_count() > 0);
        let v = gyarfas_vertex(&g, 5).unwrap();
        prop_assert!(certify::gyarfas_vertex(&g, 5, v).passed());
        let c = gyarfas_colour_bound(&g, 5).unwrap();
        prop_assert!(certify::gyarfas_colouring(&g, 5, &c).passed());
    }

    #[test]
    fn core_and_control_postconditions(g in graph(13), p in 0usize..6, qq in 2usize..6) {
        if let Ok(core) = min_degree_core(&g, p) {
            prop_assert!(certify::min_degree_core(&g, p, &core).passed());
        }
        let qv = qq.max(omega_of(&g, g.vertices()));
        let c = controlled_subgraph(&g, qv).unwrap();
        prop_assert!(certify::controlled_subgraph(&g, qv, &c).passed());
    }

    #[test]
    fn star_step_postconditions(g in graph(12), a in any::<u64>(), b in any::<u64>(), t in 1usize..3, qn in 1i64..4) {
        let a = subset(&g, a);
        let b = subset(&g, b) - a;
        let w = omega_of(&g, g.vertices()).max(1);
        let q = qu(qn as usize);
        if let Ok(r) = star_step(&g, a, b, t, &q, w) {
            prop_assert!(certify::star_step(&g, a, b, t, &q, w, &r).passed());
        }
    }

    #[test]
    fn unmixed_on_p5_free(g in p5_free(10), a in any::<u64>(), b in any::<u64>()) {
        let a = g.components(subset(&g, a)).into_iter().next().unwrap_or(VertexSet::EMPTY);
        let rest = g.vertices() - a - g.nbrs_of_set(a);
        let b = g.components(subset(&g, b) & rest).into_iter().next().unwrap_or(VertexSet::EMPTY);
        prop_assume!(!a.is_empty() && !b.is_empty());
        let r = assert_unmixed(&g, a, b).unwrap();
        prop_assert_eq!(&r, &MixedCheck::Unmixed);
        prop_assert!(certify::unmixed(&g, a, b, &r).passed());
    }

    #[test]
    fn terminal_partition_bullets(g in p5_free(12)) {
        let w = omega_of(&g, g.vertices()).max(2);
        let j = controlled_subgraph(&g, w).unwrap().j;
        let (h, _) = g.induced(j).unwrap();
        if let Ok(r) = terminal_partition(&h, &q(1, 1)) {
            prop_assert!(certify::terminal_run(&h, &r).passed());
        }
    }

    #[test]
    fn nonneighbour_cover_bound(g in p5_free(12), p in any::<u64>(), qs in any::<u64>()) {
        let p = subset(&g, p);
        let qs = subset(&g, qs) - p;
        prop_assume!(!p.is_empty() && !qs.is_empty());
        if let Ok(r) = nonneighbour_cover(&g, p, qs, &P5Params::default()) {
            prop_assert!(certify::nonneighbour_cover(&g, p, qs, &r).passed());
        }
    }

    #[test]
    fn every_lemma_run_certifies(g in graph(11), seed in any::<u64>(), li in 0usize..Lemma::ALL.len()) {
        let rec = run_sample(Lemma::ALL[li], &g, &CampaignParams::default(), seed, false);
        prop_assert!(rec.status != Status::Fail, "{:?}: {:?}", Lemma::ALL[li], rec.reason);
    }
}

#[test]
fn c5_join_powers_have_the_stated_gap() {
    for m in 1..=3 {
        let g = c5_join_power(m).unwrap();
        assert_eq!(chromatic_number(&g).unwrap().value, 3 * m);
        assert_eq!(omega_of(&g, g.vertices()), 2 * m);
        assert!(find_induced_copy(&path(5), &g, None).unwrap().is_none());
    }
}
