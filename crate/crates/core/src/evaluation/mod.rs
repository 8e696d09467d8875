//! Evaluation harnesses: robustness to missing entities and downstream
//! regression with community features.

mod missingness;
mod regression;

pub use missingness::{
    derive_seed, inject_missingness, missingness_sweep, MissingnessSweepReport, SweepConfig, SweepEntry,
    MIN_LAYER_ENTITIES,
};
pub use regression::{
    build_design_matrix, cross_validate, evaluate_regression, fit_ridge, fold_assignment, regression_metrics, CvResult,
    DesignMatrix, LambdaScore, Metrics, RegressionConfig, RegressionReport, RegressionRow, INTERCEPT, NO_COMMUNITY,
};
