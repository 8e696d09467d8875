use cobalt_core::community::LeidenConfig;
use cobalt_core::model::{EntityId, LayerId, MultiLayerNetwork, ScoreTable};
use cobalt_core::network::{build_layer_graph, build_network};
use cobalt_core::pruning::{prune_graph, prune_mln, PruneConfig};
use cobalt_core::selector::*;
use cobalt_core::synthetic::{planted_layers, planted_table, PlantedConfig};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn column(t: &ScoreTable<f64>, l: usize) -> Vec<Option<f64>> {
    (0..t.n_entities()).map(|e| t.get(e, l)).collect()
}

fn table(names: &[&str], columns: &[Vec<Option<f64>>]) -> ScoreTable<f64> {
    let n = columns[0].len();
    ScoreTable::new(
        (0..n).map(|i| EntityId(format!("p{i:02}"))).collect(),
        names.iter().map(|&s| LayerId::from(s)).collect(),
        (0..n).map(|e| columns.iter().map(|c| c[e]).collect()).collect(),
    )
    .unwrap()
}

/// Incumbent `A`, an exact copy `C`, and `D` holding A's scores shuffled
/// across entities.
fn duplicate_and_shuffled(seed: u64) -> ScoreTable<f64> {
    let base = planted_layers(&["A"], &[(0..40).map(|i| Some(i % 2)).collect()], 10.0, 0.5, seed).unwrap();
    let a = column(&base.table, 0);
    let mut d = a.clone();
    d.shuffle(&mut ChaCha8Rng::seed_from_u64(seed + 1000));
    table(&["A", "C", "D"], &[a.clone(), a, d])
}

fn prepare(t: &ScoreTable<f64>, leiden: &LeidenConfig) -> (MultiLayerNetwork<f64>, CobaltInit<f64>) {
    let (net, _) = prune_mln(&build_network(t).unwrap(), &PruneConfig::default()).unwrap();
    let singles: Vec<_> = net.layers().iter().map(|l| net.induced(std::slice::from_ref(l)).unwrap()).collect();
    (net.clone(), cobalt_init(&singles, leiden).unwrap())
}

#[test]
fn differing_layer_beats_duplicate() {
    for seed in 0..20 {
        let t = duplicate_and_shuffled(seed);
        let leiden = LeidenConfig { seed, ..Default::default() };
        let (net, mut init) = prepare(&t, &leiden);
        // identical columns give identical partitions
        assert_eq!(init.partitions[0].membership(), init.partitions[1].membership());
        init.best = 0;
        let trace = cobalt_select(&net, &init, &leiden, StoppingMode::None).unwrap();
        let second = &trace.records[1];
        assert_eq!(second.layer.as_str(), "D", "seed {seed}");
        let cs: Vec<f64> = second.candidates.iter().map(|c| c.community_similarity).collect();
        assert_eq!(cs[0], 1.0);
        assert!(cs[1] < 1.0);
    }
}

#[test]
fn tie_on_modularity_keeps_input_order() {
    let t = duplicate_and_shuffled(3);
    let (_, init) = prepare(&t, &LeidenConfig::default());
    assert_eq!(init.partitions[0].quality(), init.partitions[1].quality());
    assert_ne!(init.best, 1);
}

/// L0 complete, L1 a copy of it, L2 and L3 present on the same 30%.
fn availability_drop() -> ScoreTable<f64> {
    let labels: Vec<Option<usize>> = (0..40).map(|i| Some(i % 2)).collect();
    let base = planted_layers(&["X", "Y"], &[labels.clone(), labels], 10.0, 0.5, 5).unwrap();
    let full = column(&base.table, 0);
    let partial: Vec<Option<f64>> = column(&base.table, 1)
        .into_iter()
        .enumerate()
        .map(|(i, v)| if i % 10 < 3 { v } else { None })
        .collect();
    table(&["L0", "L1", "L2", "L3"], &[full.clone(), full, partial.clone(), partial])
}

fn select(t: &ScoreTable<f64>, mode: StoppingMode) -> IterationTrace<f64> {
    let leiden = LeidenConfig::default();
    let (net, mut init) = prepare(t, &leiden);
    init.best = 0;
    cobalt_select(&net, &init, &leiden, mode).unwrap()
}

#[test]
fn sc1_stops_at_first_drop() {
    let t = availability_drop();
    let none = select(&t, StoppingMode::None);
    assert_eq!(none.records.len(), 4);
    let a: Vec<f64> = none.records[1..].iter().map(|r| r.cost.as_ref().unwrap().availability).collect();
    assert_eq!(a[0], 1.0);
    assert!((a[1] - 0.3).abs() < 1e-12);

    let sc1 = select(&t, StoppingMode::Sc1);
    assert_eq!(sc1.records.len(), 3);
    assert_eq!(sc1.records, none.records[..3]);
    // similarity 1 at iteration 2 cannot increase, so SC2 runs on
    assert_eq!(select(&t, StoppingMode::Sc2).records.len(), 4);
}

#[test]
fn single_candidate_gives_two_iterations() {
    let t = planted_table(&PlantedConfig { entities: 30, layers: 2, groups: 2, ..Default::default() }).unwrap();
    let run = run_cobalt(&t.table, &CobaltConfig::default()).unwrap();
    assert_eq!(run.trace.records.len(), 2);
    assert!(run.trace.records[0].cost.is_none());
}

#[test]
fn zero_availability_loses() {
    // H covers only entities outside the incumbent; G covers half of it
    let n = 40;
    let base = planted_table(&PlantedConfig { entities: n, layers: 3, groups: 2, seed: 4, ..Default::default() })
        .unwrap()
        .table;
    let inc: Vec<Option<f64>> = column(&base, 0).into_iter().enumerate().map(|(i, v)| (i < 20).then_some(v.unwrap())).collect();
    let h: Vec<Option<f64>> = column(&base, 1).into_iter().enumerate().map(|(i, v)| (i >= 20).then_some(v.unwrap())).collect();
    let g: Vec<Option<f64>> = column(&base, 2).into_iter().enumerate().map(|(i, v)| (i >= 10).then_some(v.unwrap())).collect();
    let t = table(&["I", "H", "G"], &[inc, h, g]);
    let trace = select(&t, StoppingMode::None);
    let second = &trace.records[1];
    assert_eq!(second.layer.as_str(), "G");
    let h_cost = second.candidates.iter().find(|c| c.layer.as_str() == "H").unwrap();
    assert!(h_cost.cost.is_infinite());
    assert_eq!(second.cost.as_ref().unwrap().availability, 0.5);
    // once G is in, H overlaps the incumbent and is selectable
    assert_eq!(trace.records.len(), 3);
}

#[test]
fn all_layers_unreachable_stops() {
    let base = planted_table(&PlantedConfig { entities: 20, layers: 2, groups: 2, ..Default::default() }).unwrap().table;
    let a: Vec<Option<f64>> = column(&base, 0).into_iter().enumerate().map(|(i, v)| (i < 10).then_some(v.unwrap())).collect();
    let b: Vec<Option<f64>> = column(&base, 1).into_iter().enumerate().map(|(i, v)| (i >= 10).then_some(v.unwrap())).collect();
    let trace = select(&table(&["A", "B"], &[a, b]), StoppingMode::None);
    assert_eq!(trace.records.len(), 1);
}

#[test]
fn run_all_invariants() {
    for seed in 0..5 {
        let t = planted_table(&PlantedConfig { entities: 60, layers: 5, groups: 3, seed, ..Default::default() }).unwrap();
        let cfg = CobaltConfig { leiden: LeidenConfig { seed, ..Default::default() }, ..Default::default() };
        let run = run_cobalt(&t.table, &cfg).unwrap();
        let layers = run.trace.layers();
        let mut sorted = layers.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), 5);
        for (i, r) in run.trace.records.iter().enumerate() {
            assert_eq!(r.iteration, i + 1);
            assert_eq!(r.candidates.len(), if i == 0 { 0 } else { 5 - i });
            if let Some(c) = &r.cost {
                assert!((c.cost - (1.0 / c.availability + c.community_similarity)).abs() < 1e-12);
                assert!(run.trace.records[i].candidates.iter().all(|o| o.cost >= c.cost));
            }
        }
        assert_eq!(run, run_cobalt(&t.table, &cfg).unwrap());
    }
}

#[test]
fn order_preserving_relabel_keeps_selection() {
    let t = planted_table(&PlantedConfig { entities: 50, layers: 4, groups: 3, seed: 8, ..Default::default() }).unwrap().table;
    let renamed = ScoreTable::new(
        t.entities().iter().map(|e| EntityId(format!("x-{e}"))).collect(),
        t.layers().to_vec(),
        (0..t.n_entities()).map(|e| (0..t.n_layers()).map(|l| t.get(e, l)).collect()).collect(),
    )
    .unwrap();
    let cfg = CobaltConfig::default();
    assert_eq!(run_cobalt(&t, &cfg).unwrap().trace.layers(), run_cobalt(&renamed, &cfg).unwrap().trace.layers());
}

#[test]
fn induced_layer_equals_separately_pruned_graph() {
    let t = planted_table(&PlantedConfig { entities: 40, layers: 3, groups: 2, ..Default::default() }).unwrap().table;
    let (net, _) = prune_mln(&build_network(&t).unwrap(), &PruneConfig::default()).unwrap();
    for l in t.layers() {
        let single = net.induced(std::slice::from_ref(l)).unwrap();
        let pruned = prune_graph(&build_layer_graph(&t, l).unwrap(), &PruneConfig::default()).unwrap();
        assert_eq!(single.intra_edges(), pruned.edges.as_slice());
        assert!(single.inter_edges().is_empty());
    }
}
