//! A Minsky-style counter machine that stands in for "the n-th program".
//!
//! Programs use registers `r0`..`r15`. The input is placed in `r0`, all
//! other registers start at zero, and the output is `r0` at halt. Execution
//! halts at `HALT` or by running off the end of the instruction list. Each
//! executed instruction costs one unit of fuel.
//!
//! Text format, one instruction per line:
//!
//! ```text
//! # comments start with '#'
//! INC r1
//! DECJZ r0 3     # if r0 == 0 jump to 3, else decrement r0
//! GOTO 0
//! HALT
//! ```
//!
//! Labels are zero-based indices into the instruction list; blank and
//! comment-only lines are not counted.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::coding::{decode_word, encode_word, pair, unpair, Nat};
use super::name::Fuel;
use crate::error::{Error, Result};

pub const REGISTERS: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Instr {
    Inc(u8),
    /// Jump to the label if the register is zero, otherwise decrement it.
    DecJz(u8, usize),
    Goto(usize),
    Halt,
}

impl fmt::Display for Instr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Instr::Inc(r) => write!(f, "INC r{r}"),
            Instr::DecJz(r, l) => write!(f, "DECJZ r{r} {l}"),
            Instr::Goto(l) => write!(f, "GOTO {l}"),
            Instr::Halt => write!(f, "HALT"),
        }
    }
}

/// A syntactically valid program.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ToyProgram {
    instrs: Arc<[Instr]>,
}

/// Index into the fixed enumeration of programs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GoedelIndex(pub Nat);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RunOutcome {
    Halted { output: Nat, steps: Fuel },
    Running,
}

impl RunOutcome {
    pub fn output(self) -> Option<Nat> {
        match self {
            RunOutcome::Halted { output, .. } => Some(output),
            RunOutcome::Running => None,
        }
    }
}

impl ToyProgram {
    pub fn new(instrs: Vec<Instr>) -> Result<Self> {
        if instrs.is_empty() {
            return Err(Error::InvalidProgram("empty program".into()));
        }
        let len = instrs.len();
        for (i, ins) in instrs.iter().enumerate() {
            let (reg, label) = match *ins {
                Instr::Inc(r) => (Some(r), None),
                Instr::DecJz(r, l) => (Some(r), Some(l)),
                Instr::Goto(l) => (None, Some(l)),
                Instr::Halt => (None, None),
            };
            if reg.is_some_and(|r| r as usize >= REGISTERS) {
                return Err(Error::InvalidProgram(format!("line {i}: register out of range")));
            }
            if label.is_some_and(|l| l >= len) {
                return Err(Error::InvalidProgram(format!("line {i}: label {} out of range", label.unwrap())));
            }
        }
        Ok(ToyProgram { instrs: instrs.into() })
    }

    pub fn halt() -> Self {
        ToyProgram::new(vec![Instr::Halt]).unwrap()
    }

    pub fn instrs(&self) -> &[Instr] {
        &self.instrs
    }

    pub fn len(&self) -> usize {
        self.instrs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut instrs = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            let bad = || Error::Parse(format!("program line {}: `{}`", lineno + 1, raw.trim()));
            let reg =
                |t: &str| -> Result<u8> { t.strip_prefix('r').and_then(|d| d.parse::<u8>().ok()).ok_or_else(bad) };
            let label = |t: &str| -> Result<usize> { t.parse::<usize>().map_err(|_| bad()) };
            let ins = match toks.as_slice() {
                ["INC", r] => Instr::Inc(reg(r)?),
                ["DECJZ", r, l] => Instr::DecJz(reg(r)?, label(l)?),
                ["GOTO", l] => Instr::Goto(label(l)?),
                ["HALT"] => Instr::Halt,
                _ => return Err(bad()),
            };
            instrs.push(ins);
        }
        ToyProgram::new(instrs)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for ins in self.instrs.iter() {
            s.push_str(&ins.to_string());
            s.push('\n');
        }
        s
    }

    pub fn index(&self) -> Option<GoedelIndex> {
        encode_program(self)
    }
}

impl fmt::Display for ToyProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.instrs.iter().map(|i| i.to_string()).collect();
        write!(f, "{}", parts.join("; "))
    }
}

/// Incremental execution state, for schedules that advance many runs in
/// small slices.
#[derive(Clone, Debug)]
pub struct Machine {
    prog: ToyProgram,
    pc: usize,
    regs: [Nat; REGISTERS],
    steps: Fuel,
    halted: bool,
}

impl Machine {
    pub fn new(prog: &ToyProgram, input: Nat) -> Self {
        let mut regs = [0; REGISTERS];
        regs[0] = input;
        Machine { prog: prog.clone(), pc: 0, regs, steps: 0, halted: false }
    }

    pub fn steps(&self) -> Fuel {
        self.steps
    }

    pub fn outcome(&self) -> RunOutcome {
        if self.halted {
            RunOutcome::Halted { output: self.regs[0], steps: self.steps }
        } else {
            RunOutcome::Running
        }
    }

    /// Executes one instruction; returns whether the machine has halted.
    pub fn step(&mut self) -> bool {
        if self.halted {
            return true;
        }
        let Some(&ins) = self.prog.instrs.get(self.pc) else {
            self.halted = true;
            return true;
        };
        self.steps += 1;
        match ins {
            Instr::Inc(r) => {
                self.regs[r as usize] = self.regs[r as usize].saturating_add(1);
                self.pc += 1;
            }
            Instr::DecJz(r, l) => {
                if self.regs[r as usize] == 0 {
                    self.pc = l;
                } else {
                    self.regs[r as usize] -= 1;
                    self.pc += 1;
                }
            }
            Instr::Goto(l) => self.pc = l,
            Instr::Halt => {
                self.halted = true;
                return true;
            }
        }
        if self.pc >= self.prog.instrs.len() {
            self.halted = true;
        }
        self.halted
    }

    /// Runs until halted or until the total step count reaches `until`.
    pub fn run_until(&mut self, until: Fuel) -> RunOutcome {
        while !self.halted && self.steps < until {
            self.step();
        }
        self.outcome()
    }
}

/// Runs `prog` on `input` for at most `fuel` instructions.
pub fn interpret(prog: &ToyProgram, input: Nat, fuel: Fuel) -> RunOutcome {
    Machine::new(prog, input).run_until(fuel)
}

const OPCODES: Nat = 4;

/// The fixed enumeration of programs. Total; every valid program occurs.
pub fn enumerate_program(index: GoedelIndex) -> ToyProgram {
    let word = decode_word(index.0);
    if word.is_empty() {
        return ToyProgram::halt();
    }
    let len = word.len();
    let instrs = word
        .iter()
        .map(|&sym| {
            let payload = sym / OPCODES;
            match sym % OPCODES {
                0 => Instr::Inc((payload % REGISTERS as Nat) as u8),
                1 => {
                    let (r, l) = unpair(payload);
                    Instr::DecJz((r % REGISTERS as Nat) as u8, (l % len as Nat) as usize)
                }
                2 => Instr::Goto((payload % len as Nat) as usize),
                _ => Instr::Halt,
            }
        })
        .collect();
    ToyProgram::new(instrs).expect("enumeration yields valid programs")
}

/// An index of `prog` (the canonical one), if its code fits in a `u64`.
pub fn encode_program(prog: &ToyProgram) -> Option<GoedelIndex> {
    if prog.instrs() == [Instr::Halt] {
        return Some(GoedelIndex(0));
    }
    let mut word = Vec::with_capacity(prog.len());
    for ins in prog.instrs() {
        let sym = match *ins {
            Instr::Inc(r) => OPCODES * r as Nat,
            Instr::DecJz(r, l) => OPCODES.checked_mul(pair(r as Nat, l as Nat))? + 1,
            Instr::Goto(l) => OPCODES * l as Nat + 2,
            Instr::Halt => 3,
        };
        word.push(sym);
    }
    encode_word(&word).map(GoedelIndex)
}

/// A few named programs used throughout the tests and demos.
pub mod library {
    use super::*;

    /// Outputs its input.
    pub fn echo() -> ToyProgram {
        ToyProgram::halt()
    }

    /// Never halts.
    pub fn looping() -> ToyProgram {
        ToyProgram::new(vec![Instr::Goto(0)]).unwrap()
    }

    /// Outputs `c` on every input.
    pub fn constant(c: Nat) -> ToyProgram {
        let mut v = vec![Instr::DecJz(0, 2), Instr::Goto(0)];
        v.extend(std::iter::repeat_n(Instr::Inc(0), c as usize));
        v.push(Instr::Halt);
        ToyProgram::new(v).unwrap()
    }

    pub fn increment_twice() -> ToyProgram {
        ToyProgram::new(vec![Instr::Inc(0), Instr::Inc(0), Instr::Halt]).unwrap()
    }

    /// Outputs `input mod 2`.
    pub fn parity() -> ToyProgram {
        // 0: DECJZ r0 4   ; r0 == 0 → even
        // 1: DECJZ r0 5   ; r0 == 0 → odd
        // 2: GOTO 0
        // 3: HALT
        // 4: HALT          (r0 = 0)
        // 5: INC r0 ; 6: HALT   (r0 = 1)
        ToyProgram::new(vec![
            Instr::DecJz(0, 4),
            Instr::DecJz(0, 5),
            Instr::Goto(0),
            Instr::Halt,
            Instr::Halt,
            Instr::Inc(0),
            Instr::Halt,
        ])
        .unwrap()
    }
}
