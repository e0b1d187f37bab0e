//! Monte Carlo coverage trials and exact oracles for the other modules.

mod exact;
mod hellinger;
mod oracle;
mod trials;

pub use exact::check_unlearning_exact;
pub use hellinger::{
    hellinger_sweep, sample_dominating_poisson, HellingerReport, HellingerViolation, HELLINGER_TOL,
    HELLINGER_T_GRID,
};
pub use oracle::{
    domination_oracle_sweep, oracle_verdict, OracleVerdicts, PairFamily, SweepReport, SweepRow,
    ASYMPTOTIC_PROBE_LIMIT, BOUNDARY_EXCLUSION, ORACLE_GRID_POINTS, ORACLE_TOL, TAIL_PROBE_LIMIT,
    WALK_ATOMS,
};
pub use trials::{run_trials, Quantiles, TrialConfig, TrialModel, TrialReport};
