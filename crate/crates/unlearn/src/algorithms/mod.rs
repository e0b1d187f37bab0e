//! Random and selective removal, their fits, and their certificates.

mod certificate;
mod fit;

pub use certificate::{
    comparison_threshold, random_removal_certificate, selective_quantile_level,
    selective_removal_certificate, Algorithm, CertificateInput, ComparisonResult, DataModel,
    RemovalCertificate, SelectiveCertificates, Variant,
};
pub use fit::{
    median, random_removal_fit, random_removal_fit_with, selective_removal_fit, Estimator,
    SampleSet,
};
