//! Validation and experiment infrastructure: DCT frames, metrics, the
//! successive-conditional (Geweke) check, goodness of fit, scenarios and
//! file formats.

mod dct;
pub mod io;
mod metrics;
mod scenario;
mod validation;

pub use dct::{build_dct_frame, dct_matrix};
pub use metrics::{evaluate_metrics, papr, Metrics};
pub use validation::{
    cone_uniformity, dominant_magnitudes, gamma_gof, geweke_run, ks_p_value, ks_two_sample, ConeReport, GewekeConfig,
    GewekeOutput, GofReport,
};
pub use scenario::{
    beta_path, chain_label, draw_problem, run_scenario, run_trial, tune_fitra, BaselineSettings, EstimateRecord,
    EstimatorSummary, FitraTarget, SamplerSettings, ScenarioConfig, ScenarioReport, SignalModel, Summary, TrialReport,
};
