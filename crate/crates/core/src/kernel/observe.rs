//! Semidecision processes (Sierpiński observations) and the dovetailing
//! scheduler that runs countably many of them fairly.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::name::Fuel;

/// Outcome of an observation at some fuel.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    /// Confirmed; the payload is the least confirming fuel.
    Confirmed(Fuel),
    NotYet,
}

impl Verdict {
    pub fn is_confirmed(self) -> bool {
        matches!(self, Verdict::Confirmed(_))
    }

    pub fn step(self) -> Option<Fuel> {
        match self {
            Verdict::Confirmed(s) => Some(s),
            Verdict::NotYet => None,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Confirmed(s) => write!(f, "Confirmed({s})"),
            Verdict::NotYet => write!(f, "NotYet"),
        }
    }
}

type Probe = dyn Fn(Fuel) -> bool + Send + Sync;

/// A monotone semidecision: `probe(f)` answers "confirmed within fuel `f`?".
#[derive(Clone)]
pub struct Observation {
    probe: Arc<Probe>,
}

impl Observation {
    /// `probe` must be monotone in fuel.
    pub fn new(probe: impl Fn(Fuel) -> bool + Send + Sync + 'static) -> Self {
        Observation { probe: Arc::new(probe) }
    }

    pub fn never() -> Self {
        Observation::new(|_| false)
    }

    pub fn always() -> Self {
        Observation::new(|_| true)
    }

    pub fn at_step(step: Fuel) -> Self {
        Observation::new(move |f| f >= step)
    }

    pub fn confirmed_by(&self, fuel: Fuel) -> bool {
        (self.probe)(fuel)
    }

    /// The verdict at `fuel`, reporting the least confirming fuel.
    pub fn observe(&self, fuel: Fuel) -> Verdict {
        if !self.confirmed_by(fuel) {
            return Verdict::NotYet;
        }
        Verdict::Confirmed(least_true(0, fuel, |f| self.confirmed_by(f)))
    }

    pub fn or(&self, other: &Observation) -> Observation {
        let (a, b) = (self.clone(), other.clone());
        Observation::new(move |f| a.confirmed_by(f) || b.confirmed_by(f))
    }

    pub fn and(&self, other: &Observation) -> Observation {
        let (a, b) = (self.clone(), other.clone());
        Observation::new(move |f| a.confirmed_by(f) && b.confirmed_by(f))
    }
}

impl fmt::Debug for Observation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Observation")
    }
}

/// Least `f` in `lo..=hi` with `pred(f)`, given `pred(hi)` and monotone `pred`.
pub(crate) fn least_true(mut lo: Fuel, mut hi: Fuel, pred: impl Fn(Fuel) -> bool) -> Fuel {
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if pred(mid) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    hi
}

/// Fuel granted to task `index` when the scheduler as a whole holds `fuel`.
///
/// Task `i` takes part once `fuel >= i + 2` and then receives
/// `fuel / (i + 2)`, so task `i` confirming at step `s` makes the
/// dovetail confirm by fuel `(i + 2) * max(s, 1)`.
pub fn dovetail_budget(index: usize, fuel: Fuel) -> Fuel {
    fuel / (index as Fuel + 2)
}

/// Number of tasks taking part at `fuel`.
pub fn dovetail_width(fuel: Fuel) -> usize {
    fuel.saturating_sub(1) as usize
}

/// A countable family of tasks; `None` marks the end of a finite family.
pub type TaskStream = Arc<dyn Fn(usize) -> Option<Observation> + Send + Sync>;

fn dovetail_probe(tasks: &TaskStream, fuel: Fuel) -> Option<usize> {
    for i in 0..dovetail_width(fuel) {
        match tasks(i) {
            Some(task) => {
                if task.confirmed_by(dovetail_budget(i, fuel)) {
                    return Some(i);
                }
            }
            None => break,
        }
    }
    None
}

/// Confirms iff some task confirms, under the round-robin schedule.
pub fn dovetail(tasks: TaskStream) -> Observation {
    Observation::new(move |fuel| dovetail_probe(&tasks, fuel).is_some())
}

/// The first task to confirm under the schedule, with the global fuel at
/// which it did. Ties at the same global fuel go to the lowest index.
pub fn dovetail_winner(tasks: &TaskStream, fuel: Fuel) -> Option<(usize, Fuel)> {
    dovetail_probe(tasks, fuel)?;
    let at = least_true(0, fuel, |f| dovetail_probe(tasks, f).is_some());
    dovetail_probe(tasks, at).map(|i| (i, at))
}

/// Convenience constructor for a task stream from a closure.
pub fn tasks(f: impl Fn(usize) -> Option<Observation> + Send + Sync + 'static) -> TaskStream {
    Arc::new(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::atomic::{AtomicU64, Ordering};

    #[test]
    fn observe_reports_least_fuel() {
        let o = Observation::at_step(37);
        assert_eq!(o.observe(36), Verdict::NotYet);
        assert_eq!(o.observe(1000), Verdict::Confirmed(37));
        assert_eq!(Observation::always().observe(0), Verdict::Confirmed(0));
    }

    #[test]
    fn dovetail_of_silent_tasks_never_confirms() {
        let d = dovetail(tasks(|_| Some(Observation::never())));
        for f in [0, 1, 10, 1000] {
            assert_eq!(d.observe(f), Verdict::NotYet);
        }
    }

    #[test]
    fn dovetail_bound_for_first_task() {
        let d = dovetail(tasks(|i| Some(if i == 0 { Observation::at_step(3) } else { Observation::never() })));
        // task 0 needs budget 3, i.e. fuel / 2 >= 3
        assert_eq!(d.observe(10_000), Verdict::Confirmed(6));
    }

    #[test]
    fn dovetail_finds_late_task() {
        let d = dovetail(tasks(|i| Some(if i == 7 { Observation::at_step(5) } else { Observation::never() })));
        assert_eq!(d.observe(10_000), Verdict::Confirmed(45));
        let ts = tasks(|i| Some(if i == 7 { Observation::at_step(5) } else { Observation::never() }));
        assert_eq!(dovetail_winner(&ts, 10_000), Some((7, 45)));
    }

    #[test]
    fn finite_task_families_end() {
        let d = dovetail(tasks(|i| if i < 3 { Some(Observation::never()) } else { None }));
        assert_eq!(d.observe(500), Verdict::NotYet);
    }

    #[test]
    fn scheduled_budgets_are_respected() {
        // Instrumented tasks record the largest budget they were ever given.
        let seen: Arc<Vec<AtomicU64>> = Arc::new((0..64).map(|_| AtomicU64::new(0)).collect());
        let s = seen.clone();
        let d = dovetail(tasks(move |i| {
            let s = s.clone();
            Some(Observation::new(move |f| {
                s[i].fetch_max(f, Ordering::Relaxed);
                false
            }))
        }));
        assert!(!d.confirmed_by(60));
        for (i, slot) in seen.iter().enumerate() {
            let got = slot.load(Ordering::Relaxed);
            if i + 2 <= 60 {
                assert_eq!(got, 60 / (i as u64 + 2));
            } else {
                assert_eq!(got, 0);
            }
        }
    }
}
