//! Run harness around the `hypabc` optimizer: bundled search spaces,
//! objective wiring (including external commands), per-run CSV/JSON
//! artifacts, and summaries across repeats.

pub mod driver;
pub mod external;
pub mod logs;
pub mod spacefile;
pub mod summary;

pub use driver::{execute, load_reports, parse_grid_steps, GridSteps, Method, RunConfig};
pub use external::ExternalCommand;
pub use logs::{write_log_csv, RecordJson, RunReport, LOG_COLUMNS};
pub use spacefile::{load_space, parse_space, BUNDLED};
pub use summary::{
    parse_group_keys, render_text, summarize, write_summary_csv, GroupKey, SummaryRow,
};
