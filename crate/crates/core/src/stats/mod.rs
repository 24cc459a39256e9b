//! Sampling, windowed expectations, moments and the KS statistic.

mod moments;
pub mod rng;
mod sample;
mod window;

pub use moments::{
    cdf_normal, empirical_moments, gaussian_moment, kolmogorov_survival, ks_statistic, summarize, KsResult,
    MomentEstimate, Summary, MIN_SAMPLES,
};
pub use sample::{
    delta_validity, histogram, sample_uniform, with_workers, write_histogram_csv, write_plot_script,
    write_samples_csv, write_summary_json, DeltaAdvisory, Histogram, Method, SampleRun, DELTA_ADVISORY_THRESHOLD,
};
pub use window::{window_expectation, WindowResult, WindowW, MAX_POWER};
