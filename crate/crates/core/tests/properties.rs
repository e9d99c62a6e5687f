use cir_core::assignment::{operating_links, CaKind, ChannelAssignment, ChannelSet};
use cir_core::capsim::{nat_on_routes, simulate_nat, Flow, DEFAULT_PAYLOAD_MB};
use cir_core::conflict::{build_conflict_graph, Mesh};
use cir_core::tiem::{compute_calm, compute_cdal, compute_tid, evaluate, TiemId, TiemParams};
use cir_core::topology::{build_grid, global_metrics, potential_links, WmnTopology};
use proptest::prelude::*;

fn topo_strategy(max_nodes: usize) -> impl Strategy<Value = WmnTopology> {
    prop::collection::vec((0.0..900.0f64, 0.0..900.0f64), 2..=max_nodes)
        .prop_map(|pts| WmnTopology::from_points("rand", &pts, 2, 250.0).unwrap())
}

fn ca_for(n: usize, channels: u32, radios: usize) -> impl Strategy<Value = ChannelAssignment> {
    prop::collection::vec(prop::collection::btree_set(1..=channels, 1..=radios), n).prop_map(move |sets| {
        let sets = sets.into_iter().map(|s| s.into_iter().collect::<ChannelSet>()).collect();
        ChannelAssignment::new(sets, channels, CaKind::Generic).unwrap()
    })
}

fn topo_and_ca(max_nodes: usize) -> impl Strategy<Value = (WmnTopology, ChannelAssignment)> {
    topo_strategy(max_nodes).prop_flat_map(|t| {
        let n = t.node_count();
        (Just(t), ca_for(n, 3, 2))
    })
}

/// Conflict edges straight from the definition, over the operating links.
fn oracle_conflicts(t: &WmnTopology, ca: &ChannelAssignment, range: f64) -> Vec<(usize, usize)> {
    let links = operating_links(t, ca).unwrap();
    let near = |a: usize, b: usize| a == b || t.distance(a, b) <= range;
    let mut out = vec![];
    for i in 0..links.len() {
        for j in i + 1..links.len() {
            let (p, q) = (links[i], links[j]);
            if p.channel != q.channel {
                continue;
            }
            if [p.a, p.b].iter().any(|&u| near(u, q.a) || near(u, q.b)) {
                out.push((i, j));
            }
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn unit_disk_links_are_symmetric_and_exact(t in topo_strategy(14)) {
        let links = potential_links(&t);
        let n = t.node_count();
        for a in 0..n {
            for b in 0..n {
                if a == b { continue; }
                let present = links.iter().any(|l| (l.a, l.b) == (a.min(b), a.max(b)));
                prop_assert_eq!(present, t.distance(a, b) <= 250.0);
            }
        }
        let mut keys: Vec<_> = links.iter().map(|l| (l.a, l.b)).collect();
        keys.dedup();
        prop_assert_eq!(keys.len(), links.len());
    }

    #[test]
    fn operating_links_use_lowest_common_channel((t, ca) in topo_and_ca(12)) {
        let links = operating_links(&t, &ca).unwrap();
        let expected: Vec<_> = potential_links(&t)
            .into_iter()
            .filter_map(|l| {
                let common: Vec<u32> = ca.node_channels(l.a).iter().filter(|&c| ca.node_channels(l.b).contains(c)).collect();
                common.first().map(|&c| (l.a, l.b, c))
            })
            .collect();
        let got: Vec<_> = links.iter().map(|l| (l.a, l.b, l.channel)).collect();
        prop_assert_eq!(got, expected);
    }

    #[test]
    fn conflict_graph_matches_definition((t, ca) in topo_and_ca(12), factor in 1.0..3.0f64) {
        let range = 250.0 * factor;
        let cg = build_conflict_graph(&t, &ca, range).unwrap();
        prop_assert_eq!(cg.edges().to_vec(), oracle_conflicts(&t, &ca, range));
        for &(i, j) in cg.edges() {
            prop_assert!(i != j);
            prop_assert_eq!(cg.vertices()[i].channel, cg.vertices()[j].channel);
        }
    }

    #[test]
    fn superset_keeps_preserved_links((t, ca) in topo_and_ca(10), node in 0usize..10, extra in 1u32..=3) {
        let node = node % t.node_count();
        let mesh = Mesh::with_default_range(&t);
        let before: Vec<_> = potential_links(&t).into_iter()
            .map(|l| !ca.node_channels(l.a).is_disjoint(&ca.node_channels(l.b))).collect();
        let set = ca.node_channels(node).with(extra);
        let wide = ChannelAssignment::new(
            (0..t.node_count()).map(|i| if i == node { set } else { ca.node_channels(i) }).collect(),
            3,
            CaKind::Generic,
        ).unwrap();
        let after: Vec<_> = potential_links(&t).into_iter()
            .map(|l| !wide.node_channels(l.a).is_disjoint(&wide.node_channels(l.b))).collect();
        for (b, a) in before.iter().zip(&after) {
            prop_assert!(!b || *a);
        }
        if mesh.preserves_topology(&ca).unwrap() {
            prop_assert!(mesh.preserves_topology(&wide).unwrap());
        }
    }

    #[test]
    fn metric_bounds_and_orientation((t, ca) in topo_and_ca(12)) {
        let p = TiemParams::default();
        let cg = Mesh::with_default_range(&t).conflict_graph(&ca).unwrap();
        let l = cg.vertices().len() as f64;
        let cdal = compute_cdal(cg.vertices()).value;
        let calm = compute_calm(&cg).value;
        prop_assert!(cdal >= 0.0 && cdal <= l * (l - 1.0) / 2.0 + 1e-12);
        prop_assert!(calm >= 0.0 && calm <= l + 1e-12);
        prop_assert_eq!(compute_tid(&cg).value, cg.edge_count() as f64);
        for m in TiemId::ALL {
            let a = evaluate(m, &t, &ca, &p).unwrap();
            let b = evaluate(m, &t, &ca, &p).unwrap();
            prop_assert_eq!(a, b);
            prop_assert!(a.value >= 0.0 && a.value.is_finite());
            let expected = if matches!(m, TiemId::Tid | TiemId::Cdal) { a.value } else { -a.value };
            prop_assert_eq!(a.min_form(), expected);
        }
    }

    #[test]
    fn nat_is_sum_of_flows(k in 2usize..5, seed in any::<u64>()) {
        let t = build_grid(k, k + 1, 250.0, 250.0).unwrap().with_radios(2).unwrap();
        let ca = cir_core::cagen::random_valid_ca(&t, 3, seed).unwrap();
        let flows = cir_core::capsim::all_pairs_flows(&t);
        let r = simulate_nat(&t, &ca, &flows, 54.0).unwrap();
        prop_assert_eq!(r.per_flow_mbps.len(), flows.len());
        prop_assert_eq!(r.nat_mbps, r.per_flow_mbps.iter().sum::<f64>());
        prop_assert_eq!(r.nat_mbps, simulate_nat(&t, &ca, &flows, 54.0).unwrap().nat_mbps);
    }

    #[test]
    fn extra_conflict_never_raises_nat(
        links in 2usize..12,
        routes in prop::collection::vec(prop::collection::vec(0usize..12, 1..5), 1..8),
        edges in prop::collection::vec((0usize..12, 0usize..12), 0..20),
        extra in (0usize..12, 0usize..12),
    ) {
        let routes: Vec<Vec<usize>> = routes.into_iter().map(|r| r.into_iter().map(|l| l % links).collect()).collect();
        let mut edges: Vec<(usize, usize)> = edges.into_iter()
            .map(|(a, b)| (a % links, b % links)).filter(|(a, b)| a != b)
            .map(|(a, b)| (a.min(b), a.max(b))).collect();
        edges.sort_unstable();
        edges.dedup();
        let (a, b) = (extra.0 % links, extra.1 % links);
        prop_assume!(a != b && !edges.contains(&(a.min(b), a.max(b))));
        let base = nat_on_routes(links, &edges, &routes, 9.0).unwrap().nat_mbps;
        edges.push((a.min(b), a.max(b)));
        let more = nat_on_routes(links, &edges, &routes, 9.0).unwrap().nat_mbps;
        prop_assert!(more <= base + 1e-12);
    }

    #[test]
    fn lower_conflict_degree_on_frozen_routes_never_hurts(
        routes in prop::collection::vec(prop::collection::vec(0usize..8, 1..4), 1..6),
        keep in prop::collection::vec(any::<bool>(), 28),
    ) {
        // Complete conflict graph, as every co-channel link of a dense
        // all-default mesh, against a thinned one on the same routes.
        let n = 8;
        let all: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        let thin: Vec<_> = all.iter().zip(&keep).filter(|(_, k)| **k).map(|(e, _)| *e).collect();
        let full = nat_on_routes(n, &all, &routes, 54.0).unwrap().nat_mbps;
        let less = nat_on_routes(n, &thin, &routes, 54.0).unwrap().nat_mbps;
        prop_assert!(full <= less + 1e-12);
    }
}

#[test]
fn grid_link_count_formula() {
    for rows in 2..7 {
        for cols in 2..7 {
            let g = build_grid(rows, cols, 250.0, 250.0).unwrap();
            assert_eq!(potential_links(&g).len(), rows * (cols - 1) + cols * (rows - 1));
            let m = global_metrics(&g).unwrap();
            assert_eq!(m.triangles, 0);
            assert!(!m.transitivity_defined);
        }
    }
}

fn all_cas_2x2(channels: u32) -> Vec<ChannelAssignment> {
    let opts: Vec<ChannelSet> = match channels {
        2 => vec![[1].into_iter().collect(), [2].into_iter().collect(), [1, 2].into_iter().collect()],
        _ => unreachable!(),
    };
    (0..81usize)
        .map(|code| {
            let sets = (0..4).map(|i| opts[(code / 3usize.pow(i)) % 3]).collect();
            ChannelAssignment::new(sets, channels, CaKind::Generic).unwrap()
        })
        .collect()
}

#[test]
fn all_default_maximises_tid_on_small_grid() {
    let g = build_grid(2, 2, 250.0, 250.0).unwrap().with_radios(2).unwrap();
    let p = TiemParams::default();
    let default = evaluate(TiemId::Tid, &g, &ChannelAssignment::all_default(4, 2).unwrap(), &p).unwrap().value;
    assert_eq!(default, 6.0);
    for ca in all_cas_2x2(2) {
        assert!(evaluate(TiemId::Tid, &g, &ca, &p).unwrap().value <= default);
    }
}

type LinkPair = ((usize, usize), (usize, usize));

#[test]
fn tid_grows_with_its_conflict_edges_on_small_grid() {
    // Over every pair of assignments: if one's conflict edge set (as link
    // pairs) contains the other's, its TID is at least as large.
    let g = build_grid(2, 2, 250.0, 250.0).unwrap().with_radios(2).unwrap();
    let mesh = Mesh::with_default_range(&g);
    let edge_sets: Vec<Vec<LinkPair>> = all_cas_2x2(2)
        .iter()
        .map(|ca| {
            let cg = mesh.conflict_graph(ca).unwrap();
            let v = cg.vertices();
            cg.edges().iter().map(|&(i, j)| ((v[i].a, v[i].b), (v[j].a, v[j].b))).collect()
        })
        .collect();
    for a in &edge_sets {
        for b in &edge_sets {
            if a.iter().all(|e| b.contains(e)) {
                assert!(b.len() >= a.len());
            }
        }
    }
}

#[test]
fn flows_carry_payload() {
    let g = build_grid(2, 2, 250.0, 250.0).unwrap();
    let flows = cir_core::capsim::all_pairs_flows(&g);
    assert!(flows.iter().all(|f: &Flow| f.payload_mb == DEFAULT_PAYLOAD_MB && f.source < f.destination));
}
