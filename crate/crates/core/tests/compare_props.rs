use std::collections::{BTreeMap, BTreeSet};

use cobalt_core::compare::{bidirectional_f, bidirectional_purity, one_way_f, one_way_purity, FScore};
use num_rational::Ratio;
use proptest::prelude::*;

type Q = Ratio<i64>;
type Part = BTreeMap<u8, usize>;

/// Communities ordered by their smallest member.
fn groups(p: &Part) -> Vec<BTreeSet<u8>> {
    let mut by: BTreeMap<usize, BTreeSet<u8>> = BTreeMap::new();
    for (&k, &c) in p {
        by.entry(c).or_default().insert(k);
    }
    let mut out: Vec<BTreeSet<u8>> = by.into_values().collect();
    out.sort_by_key(|g| *g.iter().next().unwrap());
    out
}

fn hm(a: Q, b: Q) -> Q {
    if a == Q::from_integer(0) || b == Q::from_integer(0) {
        Q::from_integer(0)
    } else {
        Q::from_integer(2) * a * b / (a + b)
    }
}

/// Set-intersection oracle, written independently of the overlap matrix.
fn oracle_f(truth: &Part, system: &Part) -> Option<Q> {
    let (g, s) = (groups(truth), groups(system));
    if truth.keys().all(|k| !system.contains_key(k)) {
        return None;
    }
    let mut p = Q::from_integer(0);
    let mut r = Q::from_integer(0);
    for gi in &g {
        let mut best: Option<(usize, &BTreeSet<u8>)> = None;
        for sj in &s {
            let n = gi.intersection(sj).count();
            if n > 0 && best.map_or(true, |(b, _)| n > b) {
                best = Some((n, sj));
            }
        }
        if let Some((n, sj)) = best {
            p += Q::new(n as i64, sj.len() as i64);
            r += Q::new(n as i64, gi.len() as i64);
        }
    }
    let k = Q::from_integer(g.len() as i64);
    Some(hm(p / k, r / k))
}

fn oracle_purity(truth: &Part, system: &Part) -> Option<Q> {
    if truth.keys().all(|k| !system.contains_key(k)) {
        return None;
    }
    let g = groups(truth);
    let hits: usize = groups(system)
        .iter()
        .map(|sj| g.iter().map(|gi| gi.intersection(sj).count()).max().unwrap_or(0))
        .sum();
    Some(Q::new(hits as i64, system.len() as i64))
}

fn partition(max_entity: u8) -> impl Strategy<Value = Part> {
    proptest::collection::btree_map(0..max_entity, 0usize..4, 1..=8)
}

proptest! {
    #[test]
    fn matches_brute_force(a in partition(10), b in partition(10)) {
        match oracle_f(&a, &b) {
            None => prop_assert!(one_way_f::<_, Q>(&a, &b).is_err()),
            Some(f) => {
                let got: FScore<Q> = one_way_f(&a, &b).unwrap();
                prop_assert_eq!(got.f, f);
                let back = oracle_f(&b, &a).unwrap();
                prop_assert_eq!(bidirectional_f::<_, Q>(&a, &b).unwrap(), hm(f, back));
                prop_assert_eq!(one_way_purity::<_, Q>(&a, &b).unwrap(), oracle_purity(&a, &b).unwrap());
            }
        }
    }

    #[test]
    fn symmetric_and_bounded(a in partition(8), b in partition(8)) {
        if let Ok(f) = bidirectional_f::<_, Q>(&a, &b) {
            prop_assert_eq!(f, bidirectional_f::<_, Q>(&b, &a).unwrap());
            prop_assert!(f >= Q::from_integer(0) && f <= Q::from_integer(1));
            let p: Q = bidirectional_purity(&a, &b).unwrap();
            prop_assert_eq!(p, bidirectional_purity::<_, Q>(&b, &a).unwrap());
            prop_assert!(p >= Q::from_integer(0) && p <= Q::from_integer(1));
        }
    }

    #[test]
    fn reflexive(a in partition(12)) {
        prop_assert_eq!(bidirectional_f::<_, Q>(&a, &a).unwrap(), Q::from_integer(1));
        prop_assert_eq!(bidirectional_purity::<_, Q>(&a, &a).unwrap(), Q::from_integer(1));
    }

    #[test]
    fn label_invariant(a in partition(8), b in partition(8), perm in Just((0usize..4).collect::<Vec<_>>()).prop_shuffle()) {
        let relabel: Part = b.iter().map(|(&k, &c)| (k, 100 + perm[c])).collect();
        let x = bidirectional_f::<_, Q>(&a, &b);
        let y = bidirectional_f::<_, Q>(&a, &relabel);
        prop_assert_eq!(x.is_ok(), y.is_ok());
        if let (Ok(x), Ok(y)) = (x, y) {
            prop_assert_eq!(x, y);
            prop_assert_eq!(one_way_f::<_, Q>(&relabel, &a).unwrap(), one_way_f::<_, Q>(&b, &a).unwrap());
            prop_assert_eq!(
                bidirectional_purity::<_, Q>(&a, &relabel).unwrap(),
                bidirectional_purity::<_, Q>(&a, &b).unwrap()
            );
        }
    }
}

#[test]
fn f64_agrees_with_exact() {
    let a: Part = (0..8).map(|i| (i, (i % 3) as usize)).collect();
    let b: Part = (2..10).map(|i| (i, (i / 3) as usize)).collect();
    let exact: Q = bidirectional_f(&a, &b).unwrap();
    let float: f64 = bidirectional_f(&a, &b).unwrap();
    assert!((float - *exact.numer() as f64 / *exact.denom() as f64).abs() < 1e-15);
}
