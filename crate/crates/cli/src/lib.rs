//! Image ingestion, the operator mini-language, and the end-to-end
//! decompose → transform → synthesize pipeline behind the `zdisk` binary.

pub mod image;
pub mod parser;
pub mod pipeline;

pub use image::DiskImage;
pub use parser::{parse_operator, to_source, ParseError};
pub use pipeline::{run_pipeline, PipelineConfig, PipelineOutput, RunReport};
