//! Focus arbitration with two timers.
//!
//! A candidate may take focus when it has strictly higher priority than the
//! current focus and at least `t_min` frames passed since the last focus
//! change, or unconditionally once `t_max` frames passed. Both bounds are
//! inclusive.

use thiserror::Error;

use crate::config::DirectorConfig;
use crate::detection::{EventCandidate, EventKind, FocusTarget};
use crate::model::FrameTime;

/// What the camera is currently watching.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FocusState {
    pub target: FocusTarget,
    pub priority: u32,
    pub adopted_at: FrameTime,
    pub kind: EventKind,
}

impl FocusState {
    pub fn adopt(candidate: &EventCandidate, now: FrameTime) -> Self {
        FocusState {
            target: candidate.target,
            priority: candidate.priority,
            adopted_at: now,
            kind: candidate.kind,
        }
    }

    fn is_same_as(&self, candidate: &EventCandidate) -> bool {
        self.kind == candidate.kind && self.target == candidate.target
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Decision {
    Adopt(FocusState),
    Unchanged,
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("candidate {kind} stamped frame {candidate_frame} offered at frame {now}")]
pub struct StaleCandidate {
    pub kind: EventKind,
    pub candidate_frame: FrameTime,
    pub now: FrameTime,
}

/// The eligibility predicate. `elapsed` is `None` when nothing is focused yet.
pub fn is_eligible(
    current_priority: u32,
    elapsed: Option<u64>,
    candidate_priority: u32,
    c: &DirectorConfig,
) -> bool {
    match elapsed {
        None => true,
        Some(d) => (candidate_priority > current_priority && d >= c.t_min.0) || d >= c.t_max.0,
    }
}

/// Picks the candidate, if any, that takes focus at `now`.
///
/// The highest priority eligible candidate wins, earliest in `candidates`
/// on ties. A candidate matching the current focus in both kind and target
/// is skipped: it neither refreshes the timers nor blocks other candidates.
pub fn arbitrate(
    current: Option<&FocusState>,
    candidates: &[EventCandidate],
    now: FrameTime,
    c: &DirectorConfig,
) -> Result<Decision, StaleCandidate> {
    if let Some(bad) = candidates.iter().find(|e| e.frame != now) {
        return Err(StaleCandidate {
            kind: bad.kind,
            candidate_frame: bad.frame,
            now,
        });
    }

    let elapsed = current.map(|f| now.since(f.adopted_at));
    let current_priority = current.map_or(0, |f| f.priority);

    let mut best: Option<&EventCandidate> = None;
    for e in candidates {
        if current.is_some_and(|f| f.is_same_as(e)) {
            continue;
        }
        if !is_eligible(current_priority, elapsed, e.priority, c) {
            continue;
        }
        if best.is_none_or(|b| e.priority > b.priority) {
            best = Some(e);
        }
    }

    Ok(match best {
        Some(e) => Decision::Adopt(FocusState::adopt(e, now)),
        None => Decision::Unchanged,
    })
}
