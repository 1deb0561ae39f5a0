//! Instance generators and file formats.

mod generators;
mod io;

pub use generators::{
    gen_claim1, gen_planted, gen_random, gen_shrink, Certified, LabeledInstance, Provenance,
    CLAIM_MARKERS,
};
pub use io::{
    format_instance, format_solution, parse_instance, parse_solution, read_instance,
    read_solution, write_instance, write_solution, SolutionDoc,
};
