//! Library surface of the hirob command-line tool: problem-file schema,
//! canonical serialization, check orchestration, reports, and returns
//! ingestion. The binary in `main.rs` is a thin argument layer over this.

pub mod canon;
pub mod checks;
pub mod error;
pub mod ingest;
pub mod report;
pub mod schema;

pub use error::CliError;
