//! Text formats: Newick trees, quartet files, JSON reports.

pub mod newick;
pub mod quartet_file;
pub mod report;

pub use newick::{parse_newick, serialize_newick};
pub use quartet_file::{parse_quartet_file, serialize_quartet_file, QuartetFile};
pub use report::{ReportJson, SearchJson, TheoremRowJson};
