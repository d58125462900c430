//! Command-line front end: `solve`, `verify`, `gamma`, `rado` and `bounds`.

pub mod app;
pub mod cache;
pub mod cert;
pub mod error;
pub mod table;

pub use app::run;
pub use error::{code, CliError, CliResult};
