//! Finite plain and prefix complexity tables, the toy machine that
//! produces them, and the complexity-gap profiles of a string.

mod machine;
mod profile;
mod table;

pub use machine::{
    enumerate_toy_machine, run_program, RunOutcome, ToyMachineConfig, MACHINE_ID, PROGRAM_LENGTH_CAP,
};
pub use profile::{profile, Lookup, Profile, ProfileRow};
pub use table::{
    ComplexityTable, CountingViolation, ModelKind, PlainModel, PrefixModel, TableMeta, ValidationReport,
};
