//! ℕ′: naturals named through the busy beaver function.
//!
//! `δ(p) = p(BB(p(0)))`. The table is computed by exhaustive interpretation
//! of every program of bounded size, so each entry is only a lower bound on
//! the true value, audited up to the recorded fuel ceiling.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::machine::{interpret, Instr, RunOutcome, ToyProgram};
use crate::kernel::observe::least_true;
use crate::kernel::{Fuel, Name, Nat};
use crate::spaces::descriptor::{Denotation, SpaceDescriptor, SpaceTag};
use crate::spaces::open::OpenSetCode;

use super::oracle::{content_lines, expect_header, parse_nat};

/// Busy beaver values for program sizes `0..=cutoff`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BbTable {
    pub cutoff: usize,
    /// Fuel ceiling of the audit; runs longer than this count as divergent.
    pub fuel_ceiling: Fuel,
    /// Registers the audited programs may use.
    pub registers: u8,
    pub entries: Vec<Fuel>,
}

/// Every program with exactly `len` instructions over `registers` registers.
fn programs_of_len(len: usize, registers: u8) -> Vec<ToyProgram> {
    let mut choices = Vec::new();
    for r in 0..registers {
        choices.push(Instr::Inc(r));
        for l in 0..len {
            choices.push(Instr::DecJz(r, l));
        }
    }
    for l in 0..len {
        choices.push(Instr::Goto(l));
    }
    choices.push(Instr::Halt);
    let mut out = Vec::new();
    let total = choices.len().pow(len as u32);
    for mut idx in 0..total {
        let mut instrs = Vec::with_capacity(len);
        for _ in 0..len {
            instrs.push(choices[idx % choices.len()]);
            idx /= choices.len();
        }
        out.push(ToyProgram::new(instrs).expect("labels in range"));
    }
    out
}

impl BbTable {
    /// Runs every program of size `1..=cutoff` on input 0. `bb(0) = 0`.
    pub fn compute(cutoff: usize, fuel_ceiling: Fuel, registers: u8) -> Self {
        let mut entries = vec![0];
        let mut best = 0;
        for len in 1..=cutoff {
            for p in programs_of_len(len, registers) {
                if let RunOutcome::Halted { steps, .. } = interpret(&p, 0, fuel_ceiling) {
                    best = best.max(steps);
                }
            }
            entries.push(best);
        }
        BbTable { cutoff, fuel_ceiling, registers, entries }
    }

    pub fn get(&self, m: Nat) -> Result<Fuel> {
        if m as usize > self.cutoff {
            return Err(Error::CutoffExceeded { value: m, cutoff: self.cutoff as Nat });
        }
        Ok(self.entries[m as usize])
    }

    /// `bb v1`, `cutoff c`, `fuel f`, `registers r`, then lines `m value`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = content_lines(text);
        expect_header(&mut lines, "bb v1")?;
        let mut field = |key: &str| -> Result<Nat> {
            let line = lines.next().ok_or_else(|| Error::Parse(format!("missing `{key}`")))?;
            let v = line.strip_prefix(key).ok_or_else(|| Error::Parse(format!("expected `{key} <n>`")))?;
            parse_nat(v.trim())
        };
        let cutoff = field("cutoff")? as usize;
        let fuel_ceiling = field("fuel")?;
        let registers = field("registers")? as u8;
        let mut entries = Vec::new();
        for (i, line) in lines.enumerate() {
            let toks: Vec<&str> = line.split_whitespace().collect();
            let [m, v] = toks.as_slice() else {
                return Err(Error::Parse(format!("expected `m value`, found `{line}`")));
            };
            if parse_nat(m)? != i as Nat {
                return Err(Error::Parse(format!("entries must be listed in order, found `{line}`")));
            }
            entries.push(parse_nat(v)?);
        }
        if entries.len() != cutoff + 1 {
            return Err(Error::Parse(format!("expected {} entries, found {}", cutoff + 1, entries.len())));
        }
        Ok(BbTable { cutoff, fuel_ceiling, registers, entries })
    }

    pub fn to_text(&self) -> String {
        let mut s =
            format!("bb v1\ncutoff {}\nfuel {}\nregisters {}\n", self.cutoff, self.fuel_ceiling, self.registers);
        for (m, v) in self.entries.iter().enumerate() {
            s.push_str(&format!("{m} {v}\n"));
        }
        s
    }
}

/// ℕ′ for a given table.
#[derive(Clone, Debug)]
pub struct NPrime {
    pub bb: BbTable,
}

impl NPrime {
    pub fn new(bb: BbTable) -> Self {
        NPrime { bb }
    }

    pub fn space(&self) -> SpaceDescriptor {
        let me = self.clone();
        SpaceDescriptor::new(SpaceTag::NPrime(self.bb.clone()), move |p, h| me.decode(p, h).ok().map(Denotation::Nat))
    }

    /// `δ(p) = p(BB(p(0)))`, reading positions available at `fuel`.
    pub fn decode(&self, p: &Name, fuel: Fuel) -> Result<Nat> {
        let head = p.at(0, fuel).ok_or(Error::FuelExhausted { fuel, context: "reading p(0)".into() })?;
        let at = self.bb.get(head)? as usize;
        p.at(at, fuel).ok_or(Error::FuelExhausted { fuel, context: format!("reading p({at})") })
    }

    /// The constant name `n^ω`, valid since `δ(n^ω) = n`.
    pub fn encode(&self, n: Nat) -> Name {
        Name::constant(n)
    }

    /// The realizer of `{target}` that reads `p(0)`, looks up the table and
    /// waits for position `BB(p(0))`.
    pub fn canonical_singleton(&self, target: Nat) -> OpenSetCode {
        let bb = self.bb.clone();
        OpenSetCode::from_predicate("nprime-singleton", vec![target], move |w, _| {
            let Some(&head) = w.first() else { return false };
            match bb.get(head) {
                Ok(at) => w.get(at as usize) == Some(&target),
                Err(_) => false,
            }
        })
    }

    /// The least fuel at which `u` accepts the name `m n^ω`, offered as an
    /// upper bound for `BB(m)` when `u` is neither empty nor everything.
    pub fn bound_extractor(&self, u: &OpenSetCode, m: Nat, n: Nat, fuel: Fuel) -> Result<Fuel> {
        let name = Name::prepend(vec![m], Name::constant(n));
        let accepts = |f: Fuel| u.accepts_prefix(&name.prefix(f), f);
        if !accepts(fuel) {
            return Err(Error::FuelExhausted { fuel, context: format!("name {m} {n}^ω not accepted") });
        }
        Ok(least_true(0, fuel, accepts))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> BbTable {
        BbTable::compute(3, 1000, 2)
    }

    #[test]
    fn table_basics() {
        let bb = small();
        assert_eq!(bb.entries[0], 0);
        // a single instruction always halts in one step
        assert_eq!(bb.entries[1], 1);
        assert!(bb.entries.windows(2).all(|w| w[0] <= w[1]));
        assert_eq!(BbTable::parse(&bb.to_text()).unwrap(), bb);
        assert!(BbTable::parse("bb v1\ncutoff 1\nfuel 5\nregisters 2\n0 0\n").is_err());
    }

    #[test]
    fn table_matches_independent_count_for_size_two() {
        // Independent simulator over all two-instruction programs on r0, r1.
        let mut best = 0;
        let regs = 2u8;
        let mut ops = Vec::new();
        for r in 0..regs {
            ops.push((0u8, r, 0usize));
            for l in 0..2 {
                ops.push((1, r, l));
            }
        }
        for l in 0..2 {
            ops.push((2, 0, l));
        }
        ops.push((3, 0, 0));
        for a in &ops {
            for b in &ops {
                let prog = [*a, *b];
                let (mut pc, mut regs, mut steps) = (0usize, [0u64; 2], 0u64);
                let mut halted = false;
                while steps < 1000 {
                    if pc >= 2 {
                        halted = true;
                        break;
                    }
                    steps += 1;
                    let (op, r, l) = prog[pc];
                    match op {
                        0 => {
                            regs[r as usize] += 1;
                            pc += 1
                        }
                        1 => {
                            if regs[r as usize] == 0 {
                                pc = l
                            } else {
                                regs[r as usize] -= 1;
                                pc += 1
                            }
                        }
                        2 => pc = l,
                        _ => {
                            halted = true;
                            break;
                        }
                    }
                }
                if halted {
                    best = best.max(steps);
                }
            }
        }
        assert_eq!(small().entries[2], best);
    }

    #[test]
    fn decode_encode() {
        let np = NPrime::new(small());
        for n in 0..=3 {
            assert_eq!(np.decode(&np.encode(n), 100).unwrap(), n);
        }
        assert_eq!(np.decode(&Name::constant(5), 100), Err(Error::CutoffExceeded { value: 5, cutoff: 3 }));
        let at = np.bb.entries[2] as usize;
        let p = Name::total(move |k| {
            if k == 0 {
                2
            } else if k == at {
                9
            } else {
                0
            }
        });
        assert_eq!(np.decode(&p, 100).unwrap(), 9);
    }

    #[test]
    fn bound_extractor_dominates_table() {
        let np = NPrime::new(small());
        let u = np.canonical_singleton(0);
        for m in 0..=3 {
            let step = np.bound_extractor(&u, m, 0, 10_000).unwrap();
            assert!(step >= np.bb.entries[m as usize]);
        }
    }
}
