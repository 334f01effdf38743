//! Threshold exponents, critical covers, balance classification and the
//! probability predictors.

pub mod eta;
pub mod predict;
pub mod report;

pub use eta::{eta0, eta0_with, eta1, eta2, eta2_detail, eta2_table, Eta0, Eta2Branch, Eta2Detail, ETA0_NODE_BUDGET};
pub use predict::{
    floor_power, ln_psi, omega, phi, pi_order, pi_predict, pi_predict_above, pi_predict_with, psi, regime_check,
    ModelParams, Prediction, RegimeDiagnostics, MP2_SMALL,
};
pub use report::{
    classify_balance, cover_balance, lambda0, BalanceVerdict, CoverBalance, CoverEta, LambdaPolynomial,
    ThresholdReport, COVER_TABLE_LIMIT,
};
