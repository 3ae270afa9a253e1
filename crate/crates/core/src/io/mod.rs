//! File formats: benchmark instances, permutation and solution files, result tables.

mod instance;
mod results;
mod text;

pub use instance::{emit_instance, parse_instance, parse_instance_file, InstanceFile, ParseError};
pub use results::{
    fmt_sig, read_results_csv, read_results_jsonl, write_results, Format, Method, ResultRow, ResultsError,
    CSV_HEADER, SCHEMA_VERSION,
};
pub use text::{emit_permutations, emit_solution, parse_permutations, parse_solution, TextError};
