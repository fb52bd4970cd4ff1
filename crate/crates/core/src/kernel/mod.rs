//! Fuel-indexed partial computation: coding, names, observations,
//! transducers, dovetailing and the toy machine.

pub mod coding;
pub mod machine;
pub mod name;
pub mod observe;
pub mod transducer;

pub use coding::{decode_word, encode_word, pair, unpair, Nat, Word};
pub use machine::{encode_program, enumerate_program, interpret, GoedelIndex, Instr, Machine, RunOutcome, ToyProgram};
pub use name::{interleave, project, Fuel, Name, Side};
pub use observe::{dovetail, dovetail_budget, dovetail_winner, tasks, Observation, TaskStream, Verdict};
pub use transducer::{CodeSpec, Transducer};
