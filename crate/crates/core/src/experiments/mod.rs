//! Batch experiments: the interval-plus-points tightness construction, the
//! simplex doubling table, extremal search for small doubling among sets with
//! large cover number, and grids estimating the constant `c`.

mod estimate;
mod search;
mod simplex_table;
mod tightness;

pub use estimate::{
    constant_estimation, write_estimate_csv, CellMaximum, EstimateRow, EstimateTable, ExperimentGrid, Family,
    ESTIMATE_COLUMNS,
};
pub use search::{
    extremal_search, FrontierRecord, FrontierStore, SearchParams, SearchStrategy, EXHAUSTIVE_MAX_SIZE, EXHAUSTIVE_SIDE,
};
pub use simplex_table::{simplex_doubling_table, write_simplex_csv, SimplexRow, SIMPLEX_COLUMNS};
pub use tightness::{asymptotic_band, tightness_example, tightness_slope, SlopeFit, TightnessExample, TightnessParams, SEED_ATTEMPTS};
