use crate::error::{Error, Result};
use crate::model::canonical_labels;
use crate::scalar::Scalar;

use super::SupraGraph;

/// Multislice modularity of a vertex membership.
///
/// `Q = (1/2mu) * sum_{ij} [(A_ij - gamma k_i k_j / 2m_alpha) [same layer] + C_ij] [same community]`
/// where the null term runs only over vertex pairs of one layer.
pub fn multislice_modularity<T: Scalar>(supra: &SupraGraph<T>, membership: &[usize], gamma: T) -> Result<T> {
    if membership.len() != supra.len() {
        return Err(Error::InvalidInput(format!(
            "membership covers {} of {} vertices",
            membership.len(),
            supra.len()
        )));
    }
    if !(supra.two_mu() > T::zero()) {
        return Err(Error::EmptyGraph);
    }
    let labels = canonical_labels(membership);
    let k = labels.iter().max().map_or(0, |m| m + 1);
    let nl = supra.layers().len();

    let mut internal = T::zero();
    let mut totals = vec![T::zero(); k * nl];
    for v in 0..supra.len() {
        let c = labels[v];
        for &(u, w) in supra.neighbors(v) {
            if labels[u] == c {
                internal = internal + w;
            }
        }
        let slot = c * nl + supra.layer_of()[v];
        totals[slot] = totals[slot] + supra.intra_strength(v);
    }
    let mut null = T::zero();
    for (l, &tm) in supra.two_m().iter().enumerate() {
        if tm > T::zero() {
            let sq = (0..k).map(|c| totals[c * nl + l] * totals[c * nl + l]).sum::<T>();
            null = null + sq / tm;
        }
    }
    Ok((internal - gamma * null) / supra.two_mu())
}
