//! Predicting post-treatment scores from covariates, with and without
//! community membership as extra features.

use nalgebra::{DMatrix, DVector};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{CovariateTable, EntityId, EntityPartition, LayerId, ScoreTable, TargetTable};
use crate::scalar::Scalar;

pub const INTERCEPT: &str = "intercept";
pub const NO_COMMUNITY: &str = "community=none";

/// Relative eigenvalue floor below which the normal system counts as
/// singular.
const SINGULAR_RCOND: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct DesignMatrix {
    pub columns: Vec<String>,
    pub entities: Vec<EntityId>,
    pub x: DMatrix<f64>,
}

impl DesignMatrix {
    pub fn rows(&self) -> usize {
        self.x.nrows()
    }
}

/// Rows are the entities (in table order) with age, gender, the target
/// layer's t0 score and its t1 target all present. Columns: intercept, age,
/// one-hot gender over all observed codes, the t0 score, then one-hot
/// community (plus a no-community column) if a partition is given.
pub fn build_design_matrix<T: Scalar>(
    covariates: &CovariateTable,
    table: &ScoreTable<T>,
    targets: &TargetTable,
    target_layer: &LayerId,
    partition: Option<&EntityPartition>,
) -> Result<(DesignMatrix, DVector<f64>)> {
    if !targets.has_layer(target_layer) {
        return Err(Error::UnknownLayer(target_layer.0.clone()));
    }
    let l = table.layer_index(target_layer)?;
    let genders = covariates.gender_codes();
    let mut communities: Vec<usize> = partition.map(|p| p.values().copied().collect()).unwrap_or_default();
    communities.sort_unstable();
    communities.dedup();

    let mut columns = vec![INTERCEPT.to_string(), "age".to_string()];
    columns.extend(genders.iter().map(|g| format!("gender={g}")));
    columns.push(format!("t0:{target_layer}"));
    if partition.is_some() {
        columns.extend(communities.iter().map(|c| format!("community={c}")));
        columns.push(NO_COMMUNITY.to_string());
    }

    let mut entities = Vec::new();
    let mut data = Vec::new();
    let mut y = Vec::new();
    for (e, id) in table.entities().iter().enumerate() {
        let (Some(cov), Some(t0), Some(t1)) = (covariates.get(id), table.get(e, l), targets.get(id, target_layer)) else {
            continue;
        };
        let mut row = vec![1.0, cov.age];
        row.extend(genders.iter().map(|g| if *g == cov.gender { 1.0 } else { 0.0 }));
        row.push(t0.as_f64());
        if let Some(p) = partition {
            let own = p.get(id);
            row.extend(communities.iter().map(|c| if own == Some(c) { 1.0 } else { 0.0 }));
            row.push(if own.is_none() { 1.0 } else { 0.0 });
        }
        entities.push(id.clone());
        data.extend(row);
        y.push(t1);
    }
    if entities.is_empty() {
        return Err(Error::InvalidInput(format!("no entity has every feature and a target for `{target_layer}`")));
    }
    let x = DMatrix::from_row_slice(entities.len(), columns.len(), &data);
    Ok((DesignMatrix { columns, entities, x }, DVector::from_vec(y)))
}

/// Minimizes `|y - X b|^2 + lambda |b[1..]|^2`; column 0 is the intercept
/// and is not penalized.
pub fn fit_ridge(x: &DMatrix<f64>, y: &DVector<f64>, lambda: f64) -> Result<DVector<f64>> {
    if x.nrows() != y.len() {
        return Err(Error::InvalidInput(format!("{} rows but {} targets", x.nrows(), y.len())));
    }
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidInput(format!("ridge penalty must be non-negative, got {lambda}")));
    }
    let mut a = x.transpose() * x;
    for j in 1..a.ncols() {
        a[(j, j)] += lambda;
    }
    let eig = a.clone().symmetric_eigen().eigenvalues;
    let max = eig.iter().fold(0.0f64, |m, &v| m.max(v.abs()));
    let min = eig.iter().fold(f64::INFINITY, |m, &v| m.min(v));
    if !(max > 0.0) || min <= max * SINGULAR_RCOND {
        return Err(Error::SingularSystem);
    }
    let rhs = x.transpose() * y;
    let chol = a.cholesky().ok_or(Error::SingularSystem)?;
    Ok(chol.solve(&rhs))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub mae: f64,
    pub mse: f64,
    pub r2: f64,
}

fn check_lengths(y_true: &[f64], y_pred: &[f64]) -> Result<()> {
    if y_true.len() != y_pred.len() || y_true.len() < 2 {
        return Err(Error::InvalidInput(format!(
            "metrics need two equal-length vectors of at least 2 values, got {} and {}",
            y_true.len(),
            y_pred.len()
        )));
    }
    Ok(())
}

fn errors(y_true: &[f64], y_pred: &[f64]) -> (f64, f64, f64) {
    let n = y_true.len() as f64;
    let mae = y_true.iter().zip(y_pred).map(|(a, b)| (a - b).abs()).sum::<f64>() / n;
    let ss_res: f64 = y_true.iter().zip(y_pred).map(|(a, b)| (a - b) * (a - b)).sum();
    (mae, ss_res / n, ss_res)
}

/// MAE, MSE and `R^2 = 1 - SS_res / SS_tot` about the mean of `y_true`.
pub fn regression_metrics(y_true: &[f64], y_pred: &[f64]) -> Result<Metrics> {
    check_lengths(y_true, y_pred)?;
    let (mae, mse, ss_res) = errors(y_true, y_pred);
    let mean = y_true.iter().sum::<f64>() / y_true.len() as f64;
    let ss_tot: f64 = y_true.iter().map(|v| (v - mean) * (v - mean)).sum();
    if ss_tot == 0.0 {
        return Err(Error::UndefinedR2);
    }
    Ok(Metrics { mae, mse, r2: 1.0 - ss_res / ss_tot })
}

/// Out-of-fold metrics where `SS_tot` is taken about `reference_mean`
/// (the training-fold mean). A fold whose targets all equal that mean
/// scores `R^2 = 0`.
fn held_out_metrics(y_true: &[f64], y_pred: &[f64], reference_mean: f64) -> Metrics {
    let (mae, mse, ss_res) = errors(y_true, y_pred);
    let ss_tot: f64 = y_true.iter().map(|v| (v - reference_mean) * (v - reference_mean)).sum();
    let r2 = if ss_tot > 0.0 { 1.0 - ss_res / ss_tot } else { 0.0 };
    Metrics { mae, mse, r2 }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RegressionConfig {
    pub folds: usize,
    pub lambda_grid: Vec<f64>,
    pub seed: u64,
}

impl Default for RegressionConfig {
    fn default() -> Self {
        Self { folds: 10, lambda_grid: vec![0.01, 0.1, 1.0, 10.0, 100.0], seed: 0 }
    }
}

impl RegressionConfig {
    pub fn validate(&self) -> Result<()> {
        if self.folds < 2 {
            return Err(Error::InvalidInput(format!("need at least 2 folds, got {}", self.folds)));
        }
        if self.lambda_grid.is_empty() || self.lambda_grid.iter().any(|l| !(*l >= 0.0 && l.is_finite())) {
            return Err(Error::InvalidInput("lambda grid must be non-empty and non-negative".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LambdaScore {
    pub lambda: f64,
    /// Fold-averaged out-of-fold metrics; absent if some fold was singular.
    pub metrics: Option<Metrics>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvResult {
    pub lambda: f64,
    pub metrics: Metrics,
    pub folds: usize,
    pub n: usize,
    pub grid: Vec<LambdaScore>,
}

/// Seeded assignment of `n` rows to `k` folds of near-equal size.
pub fn fold_assignment(n: usize, k: usize, seed: u64) -> Vec<usize> {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut fold = vec![0; n];
    for (pos, &row) in order.iter().enumerate() {
        fold[row] = pos % k;
    }
    fold
}

fn select_rows(x: &DMatrix<f64>, y: &DVector<f64>, rows: &[usize]) -> (DMatrix<f64>, DVector<f64>) {
    (x.select_rows(rows), y.select_rows(rows))
}

/// k-fold grid search; the best lambda has the lowest mean out-of-fold MSE
/// (earliest in the grid on ties).
pub fn cross_validate(x: &DMatrix<f64>, y: &DVector<f64>, cfg: &RegressionConfig) -> Result<CvResult> {
    cfg.validate()?;
    let n = x.nrows();
    if n < cfg.folds {
        return Err(Error::InvalidInput(format!("{n} rows cannot fill {} folds", cfg.folds)));
    }
    let fold = fold_assignment(n, cfg.folds, cfg.seed);
    let splits: Vec<(Vec<usize>, Vec<usize>)> = (0..cfg.folds)
        .map(|f| (0..n).partition::<Vec<usize>, _>(|&i| fold[i] != f))
        .collect();

    let mut grid = Vec::with_capacity(cfg.lambda_grid.len());
    for &lambda in &cfg.lambda_grid {
        let mut sum = Metrics { mae: 0.0, mse: 0.0, r2: 0.0 };
        let mut ok = true;
        for (train, test) in &splits {
            let (xt, yt) = select_rows(x, y, train);
            let beta = match fit_ridge(&xt, &yt, lambda) {
                Ok(b) => b,
                Err(Error::SingularSystem) => {
                    ok = false;
                    break;
                }
                Err(e) => return Err(e),
            };
            let (xv, yv) = select_rows(x, y, test);
            let pred = &xv * &beta;
            let m = held_out_metrics(yv.as_slice(), pred.as_slice(), yt.mean());
            sum.mae += m.mae;
            sum.mse += m.mse;
            sum.r2 += m.r2;
        }
        let k = cfg.folds as f64;
        let metrics = ok.then(|| Metrics { mae: sum.mae / k, mse: sum.mse / k, r2: sum.r2 / k });
        grid.push(LambdaScore { lambda, metrics });
    }
    let best = grid
        .iter()
        .filter_map(|s| s.metrics.map(|m| (s.lambda, m)))
        .fold(None, |best: Option<(f64, Metrics)>, cur| match best {
            Some(b) if b.1.mse <= cur.1.mse => Some(b),
            _ => Some(cur),
        })
        .ok_or(Error::SingularSystem)?;
    if !(best.1.mae.is_finite() && best.1.mse.is_finite() && best.1.r2.is_finite()) {
        return Err(Error::Numerical("cross-validation produced non-finite metrics".into()));
    }
    Ok(CvResult { lambda: best.0, metrics: best.1, folds: cfg.folds, n, grid })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegressionRow {
    pub target_layer: LayerId,
    /// `baseline` or `cobalt@<iteration>`.
    pub feature_set: String,
    /// `linear` when the chosen penalty is 0, else `ridge`.
    pub model: String,
    pub lambda: f64,
    pub mae: f64,
    pub mse: f64,
    pub r2: f64,
    pub folds: usize,
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegressionReport {
    /// How held-out `R^2` is computed.
    pub r2_convention: String,
    pub rows: Vec<RegressionRow>,
    /// Targets that could not be evaluated, with the reason.
    pub skipped: Vec<String>,
}

/// Baseline plus one feature set per supplied partition (labelled by
/// iteration number) for every target layer.
pub fn evaluate_regression<T: Scalar>(
    table: &ScoreTable<T>,
    covariates: &CovariateTable,
    targets: &TargetTable,
    partitions: &[(usize, EntityPartition)],
    cfg: &RegressionConfig,
) -> Result<RegressionReport> {
    cfg.validate()?;
    let mut rows = Vec::new();
    let mut skipped = Vec::new();
    for layer in targets.layers() {
        if table.layer_index(layer).is_err() {
            skipped.push(format!("target `{layer}` has no t0 layer in the score table"));
            continue;
        }
        let sets = std::iter::once(("baseline".to_string(), None))
            .chain(partitions.iter().map(|(k, p)| (format!("cobalt@{k}"), Some(p))));
        for (name, partition) in sets {
            let (design, y) = match build_design_matrix(covariates, table, targets, layer, partition) {
                Ok(d) => d,
                Err(e) => {
                    skipped.push(format!("target `{layer}` ({name}): {e}"));
                    continue;
                }
            };
            let cv = match cross_validate(&design.x, &y, cfg) {
                Ok(cv) => cv,
                Err(e) if !e.is_numerical() => {
                    skipped.push(format!("target `{layer}` ({name}): {e}"));
                    continue;
                }
                Err(e) => return Err(e),
            };
            rows.push(RegressionRow {
                target_layer: layer.clone(),
                feature_set: name,
                model: if cv.lambda == 0.0 { "linear" } else { "ridge" }.into(),
                lambda: cv.lambda,
                mae: cv.metrics.mae,
                mse: cv.metrics.mse,
                r2: cv.metrics.r2,
                folds: cv.folds,
                n: cv.n,
            });
        }
    }
    Ok(RegressionReport { r2_convention: "held-out SS_tot about the training-fold mean".into(), rows, skipped })
}
