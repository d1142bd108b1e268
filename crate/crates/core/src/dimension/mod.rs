//! Box dimensions, growth rates and the dimension-bound report.

pub mod boxcount;
pub mod growth;
pub mod report;
pub mod sample;
pub mod sweep;

pub use boxcount::{
    attracting_traps, box_dimension_indicator, box_dimension_points, BoxCountResult, Cube, IndicatorOptions,
    IndicatorTarget,
};
pub use growth::{growth_rate, growth_rate_cycles, growth_rate_dyn, GrowthRate};
pub use sample::{escape_time, escapes, sample_julia, BoundaryOptions, JuliaTarget, Strategy};
pub use report::{bound_report, Bound, Check, DimensionReport, Measurements, ThermoInputs, Verdict};
pub use sweep::{dimension_sweep, linear_path, saddle_points, SweepOptions, SweepResult, SweepStep};
