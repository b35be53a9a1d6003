//! The toy interpreter `randlab-toy-v1`.
//!
//! A program is a bit string read left to right as a sequence of
//! instructions over an output tape and one counter register:
//!
//! | code      | effect                                                   |
//! |-----------|----------------------------------------------------------|
//! | `00`      | append 0                                                 |
//! | `01`      | append 1                                                 |
//! | `100`     | double the output (`out := out out`)                     |
//! | `101 kk`  | set the register to `kk + 1`                             |
//! | `110 ddd` | if the register is positive, decrement it and jump back  |
//! |           | `2(ddd + 1)` bits from the start of this instruction     |
//! | `111`     | halt                                                     |
//!
//! Every instruction costs one step; a run that has not halted after
//! `step_budget` steps does not halt. Output beyond `max_output_length`
//! aborts the run, which is sound because no instruction shrinks the output.
//!
//! Plain programs halt when they run off the end. Prefix programs must halt
//! through `111` having read exactly their last bit and never past it, so
//! no halting prefix program is a proper prefix of another.

use std::collections::BTreeMap;

use rayon::prelude::*;

use super::table::{ComplexityTable, ModelKind, TableMeta};
use crate::bits::Bits;
use crate::error::{Error, Result};

pub const MACHINE_ID: &str = "randlab-toy-v1";

/// Largest `max_program_length` accepted by the enumerator.
pub const PROGRAM_LENGTH_CAP: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToyMachineConfig {
    pub kind: ModelKind,
    pub max_program_length: usize,
    pub step_budget: u64,
    /// Longest output recorded; also the table's `n_max`.
    pub max_output_length: usize,
}

impl ToyMachineConfig {
    pub fn new(kind: ModelKind, max_program_length: usize, step_budget: u64, max_output_length: usize) -> Self {
        ToyMachineConfig {
            kind,
            max_program_length,
            step_budget,
            max_output_length,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RunOutcome {
    Halted(Bits),
    OutOfSteps,
    OutputOverflow,
    /// Prefix mode: the program asked for a bit past its end.
    ReadPastEnd,
    /// Prefix mode: the program halted without reading all of itself.
    Unread,
}

struct Tape<'a> {
    program: &'a [bool],
    ip: usize,
    high: usize,
}

impl Tape<'_> {
    fn read(&mut self) -> Option<bool> {
        let b = *self.program.get(self.ip)?;
        self.ip += 1;
        self.high = self.high.max(self.ip);
        Some(b)
    }

    fn read_n(&mut self, n: usize) -> Option<usize> {
        (0..n).try_fold(0usize, |acc, _| self.read().map(|b| acc << 1 | b as usize))
    }
}

pub fn run_program(program: &Bits, kind: ModelKind, step_budget: u64, max_output_length: usize) -> RunOutcome {
    let mut tape = Tape {
        program: program.as_slice(),
        ip: 0,
        high: 0,
    };
    let mut out: Vec<bool> = Vec::new();
    let mut reg = 0usize;
    let mut steps = 0u64;

    let ran_off = |out: Vec<bool>| match kind {
        ModelKind::Plain => RunOutcome::Halted(Bits::from_bools(out)),
        ModelKind::Prefix => RunOutcome::ReadPastEnd,
    };

    loop {
        if steps == step_budget {
            return RunOutcome::OutOfSteps;
        }
        steps += 1;
        let start = tape.ip;
        let Some(op) = tape.read() else { return ran_off(out) };
        let Some(b) = tape.read() else { return ran_off(out) };
        if !op {
            if out.len() == max_output_length {
                return RunOutcome::OutputOverflow;
            }
            out.push(b);
            continue;
        }
        let Some(c) = tape.read() else { return ran_off(out) };
        match (b, c) {
            (false, false) => {
                if 2 * out.len() > max_output_length {
                    return RunOutcome::OutputOverflow;
                }
                out.extend_from_within(..);
            }
            (false, true) => match tape.read_n(2) {
                Some(k) => reg = k + 1,
                None => return ran_off(out),
            },
            (true, false) => match tape.read_n(3) {
                Some(d) => {
                    if reg > 0 {
                        reg -= 1;
                        tape.ip = start.saturating_sub(2 * (d + 1));
                    }
                }
                None => return ran_off(out),
            },
            (true, true) => {
                let out = Bits::from_bools(out);
                return match kind {
                    ModelKind::Plain => RunOutcome::Halted(out),
                    ModelKind::Prefix if tape.high == program.len() => RunOutcome::Halted(out),
                    ModelKind::Prefix => RunOutcome::Unread,
                };
            }
        }
    }
}

/// Runs every program up to the length cap and records, for each output,
/// the shortest program producing it.
pub fn enumerate_toy_machine(cfg: &ToyMachineConfig) -> Result<ComplexityTable> {
    if cfg.max_program_length > PROGRAM_LENGTH_CAP {
        return Err(Error::Resource(format!(
            "max_program_length {} exceeds the cap of {PROGRAM_LENGTH_CAP}",
            cfg.max_program_length
        )));
    }
    let mut best: BTreeMap<Bits, Option<u32>> = BTreeMap::new();
    for len in 0..=cfg.max_program_length {
        let outputs: Vec<Bits> = (0..1u64 << len)
            .into_par_iter()
            .filter_map(|code| {
                let program = Bits::from_index(code, len);
                match run_program(&program, cfg.kind, cfg.step_budget, cfg.max_output_length) {
                    RunOutcome::Halted(out) => Some(out),
                    _ => None,
                }
            })
            .collect();
        for out in outputs {
            best.entry(out).or_insert(Some(len as u32));
        }
    }
    let meta = TableMeta {
        machine_id: MACHINE_ID.to_string(),
        max_program_length: Some(cfg.max_program_length),
        step_budget: Some(cfg.step_budget),
    };
    ComplexityTable::new(cfg.kind, cfg.max_output_length, meta, best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bits;

    fn run(p: &str, kind: ModelKind) -> RunOutcome {
        run_program(&bits(p), kind, 1000, 12)
    }

    #[test]
    fn plain_programs() {
        assert_eq!(run("", ModelKind::Plain), RunOutcome::Halted(bits("")));
        assert_eq!(run("0100", ModelKind::Plain), RunOutcome::Halted(bits("10")));
        assert_eq!(run("01100", ModelKind::Plain), RunOutcome::Halted(bits("11")));
        // set reg = 3, emit 1, loop back over the emit: four ones.
        assert_eq!(run("1011001110000", ModelKind::Plain), RunOutcome::Halted(bits("1111")));
        assert_eq!(run("0111101", ModelKind::Plain), RunOutcome::Halted(bits("1")));
    }

    #[test]
    fn prefix_programs_must_end_exactly_at_halt() {
        assert_eq!(run("01111", ModelKind::Prefix), RunOutcome::Halted(bits("1")));
        assert_eq!(run("011110", ModelKind::Prefix), RunOutcome::Unread);
        assert_eq!(run("01", ModelKind::Prefix), RunOutcome::ReadPastEnd);
    }

    #[test]
    fn budgets_and_overflow() {
        assert_eq!(run_program(&bits(""), ModelKind::Plain, 0, 4), RunOutcome::OutOfSteps);
        // set reg, double, loop back onto the set forever.
        assert_eq!(run("10100100110011", ModelKind::Plain), RunOutcome::OutOfSteps);
        assert_eq!(run_program(&bits("01100100100"), ModelKind::Plain, 100, 3), RunOutcome::OutputOverflow);
    }

    #[test]
    fn cap_is_enforced() {
        let cfg = ToyMachineConfig::new(ModelKind::Plain, PROGRAM_LENGTH_CAP + 1, 10, 4);
        assert!(matches!(enumerate_toy_machine(&cfg), Err(Error::Resource(_))));
    }

    #[test]
    fn zero_budget_gives_empty_table() {
        for kind in [ModelKind::Plain, ModelKind::Prefix] {
            let t = enumerate_toy_machine(&ToyMachineConfig::new(kind, 8, 0, 6)).unwrap();
            assert_eq!(t.defined().count(), 0);
            assert_eq!(t.kraft_sum(), crate::rational::int(0));
        }
    }

    #[test]
    fn small_tables_validate() {
        for kind in [ModelKind::Plain, ModelKind::Prefix] {
            let t = enumerate_toy_machine(&ToyMachineConfig::new(kind, 10, 200, 8)).unwrap();
            assert!(t.validate().passed, "{kind}");
            assert!(t.defined().count() > 0);
        }
    }
}
