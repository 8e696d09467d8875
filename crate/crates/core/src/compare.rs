//! Two-way purity and F-measure between partitions of possibly different
//! entity sets.
//!
//! Each ground-truth community is matched to the system community it shares
//! the most entities with. Precision and recall are averaged per
//! ground-truth community (communities with no overlap contribute zeros),
//! and the two directions are combined by a harmonic mean.

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::scalar::{harmonic_mean, Fraction};

/// Shared-entity counts between the communities of two partitions.
///
/// Communities are indexed canonically, by first appearance in entity order,
/// so the matrix does not depend on the raw community ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OverlapMatrix {
    /// Raw community ids of the row partition, in canonical order.
    pub rows: Vec<usize>,
    /// Raw community ids of the column partition, in canonical order.
    pub cols: Vec<usize>,
    pub counts: Vec<Vec<usize>>,
    /// Full community sizes (not restricted to shared entities).
    pub row_sizes: Vec<usize>,
    pub col_sizes: Vec<usize>,
    pub shared: usize,
}

struct Canonical {
    ids: Vec<usize>,
    pos: HashMap<usize, usize>,
    sizes: Vec<usize>,
}

fn canonical<K>(p: &BTreeMap<K, usize>) -> Canonical {
    let mut c = Canonical { ids: Vec::new(), pos: HashMap::new(), sizes: Vec::new() };
    for &id in p.values() {
        let next = c.ids.len();
        let k = *c.pos.entry(id).or_insert(next);
        if k == next {
            c.ids.push(id);
            c.sizes.push(0);
        }
        c.sizes[k] += 1;
    }
    c
}

impl OverlapMatrix {
    pub fn new<K: Ord>(rows: &BTreeMap<K, usize>, cols: &BTreeMap<K, usize>) -> Self {
        let rs = canonical(rows);
        let cs = canonical(cols);
        let mut counts = vec![vec![0; cs.ids.len()]; rs.ids.len()];
        let mut shared = 0;
        for (k, a) in rows {
            if let Some(b) = cols.get(k) {
                counts[rs.pos[a]][cs.pos[b]] += 1;
                shared += 1;
            }
        }
        Self { rows: rs.ids, cols: cs.ids, counts, row_sizes: rs.sizes, col_sizes: cs.sizes, shared }
    }

    pub fn transpose(&self) -> Self {
        let counts = (0..self.cols.len())
            .map(|j| self.counts.iter().map(|row| row[j]).collect())
            .collect();
        Self {
            rows: self.cols.clone(),
            cols: self.rows.clone(),
            counts,
            row_sizes: self.col_sizes.clone(),
            col_sizes: self.row_sizes.clone(),
            shared: self.shared,
        }
    }

    /// Best-matching column of a row: maximum overlap, lowest canonical id on ties.
    fn best_match(&self, row: usize) -> (usize, usize) {
        let mut best = (0, 0);
        for (j, &c) in self.counts[row].iter().enumerate() {
            if c > best.1 {
                best = (j, c);
            }
        }
        best
    }
}

/// Both partitions restricted to their common entities, plus that set.
pub fn restrict_to_shared<K: Ord + Clone>(
    a: &BTreeMap<K, usize>,
    b: &BTreeMap<K, usize>,
) -> (BTreeMap<K, usize>, BTreeMap<K, usize>, Vec<K>) {
    let shared: Vec<K> = a.keys().filter(|k| b.contains_key(*k)).cloned().collect();
    let ra = shared.iter().map(|k| (k.clone(), a[k])).collect();
    let rb = shared.iter().map(|k| (k.clone(), b[k])).collect();
    (ra, rb, shared)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FScore<T> {
    pub precision: T,
    pub recall: T,
    pub f: T,
}

fn f_from_matrix<T: Fraction>(m: &OverlapMatrix) -> Result<FScore<T>> {
    if m.shared == 0 || m.rows.is_empty() {
        return Err(Error::UndefinedSimilarity);
    }
    let (mut p_sum, mut r_sum) = (T::zero(), T::zero());
    for i in 0..m.rows.len() {
        let (j, overlap) = m.best_match(i);
        if overlap == 0 {
            continue;
        }
        p_sum = p_sum + T::count(overlap) / T::count(m.col_sizes[j]);
        r_sum = r_sum + T::count(overlap) / T::count(m.row_sizes[i]);
    }
    let k = T::count(m.rows.len());
    let (precision, recall) = (p_sum / k, r_sum / k);
    Ok(FScore { precision, recall, f: harmonic_mean(precision, recall) })
}

/// Macro precision, recall and F of `system` against `truth`.
pub fn one_way_f<K: Ord, T: Fraction>(truth: &BTreeMap<K, usize>, system: &BTreeMap<K, usize>) -> Result<FScore<T>> {
    f_from_matrix(&OverlapMatrix::new(truth, system))
}

/// Harmonic mean of the two directed F values.
pub fn bidirectional_f<K: Ord, T: Fraction>(a: &BTreeMap<K, usize>, b: &BTreeMap<K, usize>) -> Result<T> {
    let m = OverlapMatrix::new(a, b);
    let ab: FScore<T> = f_from_matrix(&m)?;
    let ba: FScore<T> = f_from_matrix(&m.transpose())?;
    Ok(harmonic_mean(ab.f, ba.f))
}

fn purity_from_matrix<T: Fraction>(m: &OverlapMatrix) -> Result<T> {
    // rows are ground truth, columns the system communities
    if m.shared == 0 || m.cols.is_empty() {
        return Err(Error::UndefinedSimilarity);
    }
    let hits: usize = (0..m.cols.len())
        .map(|j| m.counts.iter().map(|row| row[j]).max().unwrap_or(0))
        .sum();
    let total: usize = m.col_sizes.iter().sum();
    Ok(T::count(hits) / T::count(total))
}

/// `(1/N) sum_s max_g |g ∩ s|` over the system communities, `N` the number
/// of system entities.
pub fn one_way_purity<K: Ord, T: Fraction>(truth: &BTreeMap<K, usize>, system: &BTreeMap<K, usize>) -> Result<T> {
    purity_from_matrix(&OverlapMatrix::new(truth, system))
}

pub fn bidirectional_purity<K: Ord, T: Fraction>(a: &BTreeMap<K, usize>, b: &BTreeMap<K, usize>) -> Result<T> {
    let m = OverlapMatrix::new(a, b);
    let ab: T = purity_from_matrix(&m)?;
    let ba: T = purity_from_matrix(&m.transpose())?;
    Ok(harmonic_mean(ab, ba))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;

    type Q = Ratio<i64>;

    fn part(items: &[(&'static str, usize)]) -> BTreeMap<&'static str, usize> {
        items.iter().copied().collect()
    }

    /// Layer alpha: red {i, j}, blue {k}. Layer m: red {i}, blue {l}, grey {n}.
    fn illustration() -> (BTreeMap<&'static str, usize>, BTreeMap<&'static str, usize>) {
        (
            part(&[("pi", 0), ("pj", 0), ("pk", 1)]),
            part(&[("pi", 0), ("pl", 1), ("pn", 2)]),
        )
    }

    #[test]
    fn illustration_directions_are_exact() {
        let (alpha, m) = illustration();
        let fwd: FScore<Q> = one_way_f(&alpha, &m).unwrap();
        assert_eq!(fwd.precision, Q::new(1, 2));
        assert_eq!(fwd.recall, Q::new(1, 4));
        assert_eq!(fwd.f, Q::new(1, 3));
        let rev: FScore<Q> = one_way_f(&m, &alpha).unwrap();
        assert_eq!(rev.precision, Q::new(1, 6));
        assert_eq!(rev.recall, Q::new(1, 3));
        assert_eq!(rev.f, Q::new(2, 9));
        assert_eq!(bidirectional_f::<_, Q>(&alpha, &m).unwrap(), Q::new(4, 15));
    }

    #[test]
    fn identical_partitions_score_one() {
        let a = part(&[("a", 0), ("b", 0), ("c", 1), ("d", 2)]);
        let f: FScore<f64> = one_way_f(&a, &a).unwrap();
        assert_eq!((f.precision, f.recall, f.f), (1.0, 1.0, 1.0));
        assert_eq!(bidirectional_f::<_, f64>(&a, &a).unwrap(), 1.0);
        assert_eq!(bidirectional_purity::<_, f64>(&a, &a).unwrap(), 1.0);
    }

    #[test]
    fn disjoint_partitions_are_undefined() {
        let a = part(&[("a", 0), ("b", 0)]);
        let b = part(&[("c", 0), ("d", 1)]);
        assert!(matches!(bidirectional_f::<_, f64>(&a, &b), Err(Error::UndefinedSimilarity)));
        let (ra, rb, shared) = restrict_to_shared(&a, &b);
        assert!(ra.is_empty() && rb.is_empty() && shared.is_empty());
    }

    #[test]
    fn restriction_keeps_intersection() {
        let a: BTreeMap<usize, usize> = (0..30).map(|i| (i, i % 3)).collect();
        let b: BTreeMap<usize, usize> = (15..45).map(|i| (i, i % 2)).collect();
        let (ra, rb, shared) = restrict_to_shared(&a, &b);
        assert_eq!((ra.len(), rb.len(), shared.len()), (15, 15, 15));
        let (same_a, same_b, _) = restrict_to_shared(&a, &a);
        assert_eq!((same_a, same_b), (a.clone(), a));
    }

    #[test]
    fn purity_subset_case() {
        // ground truth community of 30, system community of 15 inside it
        let truth: BTreeMap<usize, usize> = (0..30).map(|i| (i, 0)).collect();
        let system: BTreeMap<usize, usize> = (0..15).map(|i| (i, 0)).collect();
        assert_eq!(one_way_purity::<_, Q>(&truth, &system).unwrap(), Q::from_integer(1));
        assert_eq!(one_way_purity::<_, Q>(&system, &truth).unwrap(), Q::new(1, 2));
        let two_way: Q = bidirectional_purity(&truth, &system).unwrap();
        assert_eq!(two_way, Q::new(2, 3));
    }

    #[test]
    fn one_direction_zero_gives_zero() {
        assert_eq!(harmonic_mean(0.0, 0.8), 0.0);
    }
}
