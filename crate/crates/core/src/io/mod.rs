//! Config files, density/fuzzy CSV, PGM rendering and trace logs.

pub mod config;
pub mod csv;
pub mod pgm;
pub mod run;
pub mod trace;

pub use config::{parse_config, Algorithm, MapConfig, OutputSection, RunConfig, RunSection, SpaceSection};
pub use csv::{
    density_to_csv, fuzzy_to_csv, read_density_csv, read_fuzzy_csv, write_density_csv,
    write_fuzzy_csv,
};
pub use pgm::{render_pgm, RenderSpec};
pub use run::{execute, RunOutcome};
pub use trace::{trace_records, write_trace, TraceRecord};
