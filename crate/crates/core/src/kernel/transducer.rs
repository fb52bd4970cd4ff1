//! Monotone, fuel-indexed maps from finite words to finite words.
//!
//! Every realizer in the crate is a [`Transducer`]. Each one carries a
//! [`CodeSpec`] (a tag, a finite parameter word and optionally a toy
//! program) so codes can be written out and, for program-backed codes,
//! read back in.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::coding::{checked_pair, encode_word, Nat, Word};
use super::machine::{interpret, RunOutcome, ToyProgram};
use super::name::Fuel;
use crate::error::{Error, Result};

type RunFn = dyn Fn(&[Nat], Fuel) -> Word + Send + Sync;

/// Serializable description of a code.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeSpec {
    pub tag: String,
    pub params: Word,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub program: Option<ToyProgram>,
}

impl CodeSpec {
    pub fn native(tag: &str, params: Vec<Nat>) -> Self {
        CodeSpec { tag: tag.to_string(), params: Word(params), program: None }
    }

    /// Text form: `code v1`, `tag <tag>`, `params <symbols>`, then an optional
    /// `program` line followed by the program text.
    pub fn to_text(&self) -> String {
        let mut s = format!("code v1\ntag {}\nparams", self.tag);
        for p in self.params.iter() {
            s.push_str(&format!(" {p}"));
        }
        s.push('\n');
        if let Some(prog) = &self.program {
            s.push_str("program\n");
            s.push_str(&prog.to_text());
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        if lines.next().map(str::trim) != Some("code v1") {
            return Err(Error::Parse("expected header `code v1`".into()));
        }
        let tag = lines
            .next()
            .and_then(|l| l.trim().strip_prefix("tag "))
            .ok_or_else(|| Error::Parse("expected `tag <name>`".into()))?
            .trim()
            .to_string();
        let params_line = lines
            .next()
            .and_then(|l| l.trim().strip_prefix("params"))
            .ok_or_else(|| Error::Parse("expected `params ...`".into()))?;
        let params = params_line
            .split_whitespace()
            .map(|t| t.parse::<Nat>().map_err(|_| Error::Parse(format!("bad parameter `{t}`"))))
            .collect::<Result<Vec<_>>>()?;
        let program = match lines.next().map(str::trim) {
            Some("program") => Some(ToyProgram::parse(&lines.collect::<Vec<_>>().join("\n"))?),
            None | Some("") => None,
            Some(other) => return Err(Error::Parse(format!("unexpected line `{other}`"))),
        };
        Ok(CodeSpec { tag, params: Word(params), program })
    }
}

#[derive(Clone)]
pub struct Transducer {
    run: Arc<RunFn>,
    spec: CodeSpec,
}

impl Transducer {
    /// `run` must be monotone in both the input prefix and the fuel.
    pub fn new(spec: CodeSpec, run: impl Fn(&[Nat], Fuel) -> Word + Send + Sync + 'static) -> Self {
        Transducer { run: Arc::new(run), spec }
    }

    /// A Sierpiński-valued transducer: writes a single `1` once `accepts` holds.
    /// `accepts` must be monotone.
    pub fn acceptor(spec: CodeSpec, accepts: impl Fn(&[Nat], Fuel) -> bool + Send + Sync + 'static) -> Self {
        Transducer::new(spec, move |input, fuel| if accepts(input, fuel) { Word(vec![1]) } else { Word::empty() })
    }

    /// Program-backed transducer. Output symbol `k` is the result of running
    /// the program on `pair(pair(k, input[k]), code(params))`, and the
    /// output stops at the first run that has not halted within `fuel`.
    pub fn from_program(program: ToyProgram, params: Vec<Nat>) -> Result<Self> {
        let param_code =
            encode_word(&params).ok_or_else(|| Error::InvalidProgram("parameter word too long to encode".into()))?;
        let spec = CodeSpec { tag: "program".into(), params: Word(params), program: Some(program.clone()) };
        Ok(Transducer::new(spec, move |input, fuel| {
            let mut out = Vec::new();
            for (k, &sym) in input.iter().enumerate() {
                let Some(arg) = checked_pair(k as Nat, sym).and_then(|a| checked_pair(a, param_code)) else {
                    break;
                };
                match interpret(&program, arg, fuel) {
                    RunOutcome::Halted { output, .. } => out.push(output),
                    RunOutcome::Running => break,
                }
            }
            Word(out)
        }))
    }

    pub fn run(&self, input: &[Nat], fuel: Fuel) -> Word {
        (self.run)(input, fuel)
    }

    pub fn spec(&self) -> &CodeSpec {
        &self.spec
    }

    /// Rebuilds a transducer from a serialized spec. Native tags are only
    /// reconstructible when listed in [`Transducer::from_native_spec`].
    pub fn from_spec(spec: &CodeSpec) -> Result<Self> {
        match (&spec.program, spec.tag.as_str()) {
            (Some(prog), "program") => Transducer::from_program(prog.clone(), spec.params.0.clone()),
            _ => Transducer::from_native_spec(spec),
        }
    }

    fn from_native_spec(spec: &CodeSpec) -> Result<Self> {
        let p = spec.params.0.clone();
        Ok(match spec.tag.as_str() {
            "accept-all" => library::accept_all(),
            "accept-none" => library::accept_none(),
            "symbol-equals" if p.len() == 2 => library::symbol_equals(p[0] as usize, p[1]),
            "cylinder" => library::cylinder(Word(p)),
            "identity" => library::identity(),
            other => return Err(Error::Parse(format!("no reconstruction for code tag `{other}`"))),
        })
    }
}

impl fmt::Debug for Transducer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Transducer({} {})", self.spec.tag, self.spec.params)
    }
}

/// Whether some output symbol is nonzero, the Sierpiński reading of an output.
pub fn signals_top(out: &[Nat]) -> bool {
    out.iter().any(|&s| s != 0)
}

/// Basic transducers.
pub mod library {
    use super::*;

    pub fn accept_all() -> Transducer {
        Transducer::acceptor(CodeSpec::native("accept-all", vec![]), |_, _| true)
    }

    pub fn accept_none() -> Transducer {
        Transducer::acceptor(CodeSpec::native("accept-none", vec![]), |_, _| false)
    }

    /// Accepts once position `pos` has been read and equals `value`.
    pub fn symbol_equals(pos: usize, value: Nat) -> Transducer {
        Transducer::acceptor(CodeSpec::native("symbol-equals", vec![pos as Nat, value]), move |input, _| {
            input.get(pos) == Some(&value)
        })
    }

    /// Accepts once the input is seen to extend `w`.
    pub fn cylinder(w: Word) -> Transducer {
        let spec = CodeSpec::native("cylinder", w.0.clone());
        Transducer::acceptor(spec, move |input, _| w.is_prefix_of(input))
    }

    pub fn identity() -> Transducer {
        Transducer::new(CodeSpec::native("identity", vec![]), |input, _| Word(input.to_vec()))
    }

    /// Emits the prefix sums of the input, a stateful but monotone map.
    pub fn running_sum() -> Transducer {
        Transducer::new(CodeSpec::native("running-sum", vec![]), |input, _| {
            let mut acc: Nat = 0;
            Word(
                input
                    .iter()
                    .map(|&s| {
                        acc = acc.saturating_add(s);
                        acc
                    })
                    .collect(),
            )
        })
    }

    /// Emits one symbol per `delay` units of fuel, copying the input.
    pub fn throttled_copy(delay: Fuel) -> Transducer {
        let delay = delay.max(1);
        Transducer::new(CodeSpec::native("throttled-copy", vec![delay]), move |input, fuel| {
            let n = ((fuel / delay) as usize).min(input.len());
            Word(input[..n].to_vec())
        })
    }
}
