//! Command-line front end: configuration parsing, object-map ingestion,
//! result emission, and the `upqi` subcommands.

pub mod config;
pub mod error;
pub mod object_io;
pub mod output;
pub mod run;

pub use config::{parse_config, Config};
pub use error::CliError;
pub use object_io::load_object;
pub use run::{run_cli, run_image};
