//! Averages over systems of linear forms and the bounds that control them.

mod average;
mod bilinear;
mod excess;
mod quadpart;

pub use average::{expected_count, gvn_check, system_average, GvnReport, DEFAULT_AVERAGE_CAP};
pub use bilinear::{
    bilinear_correlation_check, multibilinear_average, rank_combination,
    square_indep_rank_witness, BilinearCorrelation, MultiBilinearAverage, MultiBilinearSystem,
    RankCombination, RankWitness,
};
pub use excess::{build_excess_4ap_set, level_set_report, ExcessReport};
pub use quadpart::{quadraticpart_bound_check, QuadPartParams, QuadPartReport};
