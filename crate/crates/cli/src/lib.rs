//! Batch interface: named examples with pinned verdicts, JSON evaluation of
//! single operations, and the seeded property suites.

pub mod error;
pub mod eval;
pub mod examples;
pub mod fuzzing;
pub mod output;
pub mod schedule;
pub mod schema;
pub mod verify;

pub use error::{CliError, ExitCode};
pub use eval::{eval, Command};
pub use examples::{run_example, ExampleId, ExampleOptions, ExampleRun};
pub use schedule::parse_schedule;
