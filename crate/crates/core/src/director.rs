//! The per-frame orchestration loop.
//!
//! Each frame runs detection, arbitration, focus resolution and one camera
//! step, in that order, and yields one [`TrajectorySample`].

use std::collections::BTreeMap;

use thiserror::Error;

use crate::arbiter::{arbitrate, Decision, StaleCandidate};
use crate::camera::{
    clamp_center, resolve_focus_position, screen_rect, step_camera, CameraState, ScreenRect,
};
use crate::config::{validate_config, ConfigError, DirectorConfig};
use crate::detection::{detect_events, EventCandidate, EventKind, FocusTarget};
use crate::model::{
    validate_frame, validate_map, FrameTime, MapInfo, MapPos, TraceFrame, TraceViolation,
};

/// One line of camera output.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectorySample {
    pub frame: FrameTime,
    pub rect: ScreenRect,
    pub focus_kind: Option<EventKind>,
    pub focus_target: Option<FocusTarget>,
}

/// A focus adoption, as decided by the arbiter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FocusChange {
    pub frame: FrameTime,
    pub kind: EventKind,
    pub priority: u32,
    pub target: FocusTarget,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DirectorError {
    #[error("invalid config: {0}")]
    Config(#[from] ConfigError),
    #[error("invalid map: {0}")]
    Map(TraceViolation),
    #[error("frame {frame}: {violation}")]
    Frame {
        frame: FrameTime,
        violation: TraceViolation,
    },
    #[error("frame {frame}: {source}")]
    Candidate {
        frame: FrameTime,
        source: StaleCandidate,
    },
}

/// Stateful director. Feed frames in order with [`Director::step`].
#[derive(Debug, Clone)]
pub struct Director {
    map: MapInfo,
    config: DirectorConfig,
    camera: CameraState,
    last_frame: Option<FrameTime>,
    changes: Vec<FocusChange>,
    candidate_counts: BTreeMap<EventKind, u64>,
}

impl Director {
    pub fn new(map: MapInfo, config: DirectorConfig) -> Result<Self, DirectorError> {
        validate_map(&map).map_err(DirectorError::Map)?;
        validate_config(&config, &map)?;
        let camera = CameraState::initial(&map, &config);
        Ok(Director {
            map,
            config,
            camera,
            last_frame: None,
            changes: Vec::new(),
            candidate_counts: BTreeMap::new(),
        })
    }

    pub fn camera(&self) -> &CameraState {
        &self.camera
    }

    pub fn config(&self) -> &DirectorConfig {
        &self.config
    }

    pub fn focus_changes(&self) -> &[FocusChange] {
        &self.changes
    }

    /// Candidates seen so far, per kind.
    pub fn candidate_counts(&self) -> &BTreeMap<EventKind, u64> {
        &self.candidate_counts
    }

    /// Validates `f`, detects its candidates, and advances one frame.
    pub fn step(&mut self, f: &TraceFrame) -> Result<TrajectorySample, DirectorError> {
        validate_frame(f, &self.map, self.last_frame).map_err(|violation| {
            DirectorError::Frame {
                frame: f.frame,
                violation,
            }
        })?;
        let candidates = detect_events(f, &self.map, &self.config);
        self.step_with_candidates(f, &candidates)
    }

    /// Advances one frame using an externally supplied candidate list in
    /// place of detection. `f` still drives unit-follow resolution.
    pub fn step_with_candidates(
        &mut self,
        f: &TraceFrame,
        candidates: &[EventCandidate],
    ) -> Result<TrajectorySample, DirectorError> {
        let now = f.frame;
        if let Some(prev) = self.last_frame {
            if now <= prev {
                return Err(DirectorError::Frame {
                    frame: now,
                    violation: TraceViolation {
                        rule: crate::model::TraceRule::NonIncreasingFrameTime,
                        detail: format!("non-increasing frame time: {now} after {prev}"),
                    },
                });
            }
        }
        for e in candidates {
            *self.candidate_counts.entry(e.kind).or_default() += 1;
        }

        let decision = arbitrate(self.camera.focus.as_ref(), candidates, now, &self.config)
            .map_err(|source| DirectorError::Candidate { frame: now, source })?;
        if let Decision::Adopt(focus) = decision {
            self.camera.focus = Some(focus);
            self.camera.last_known_target_pos = None;
            self.changes.push(FocusChange {
                frame: now,
                kind: focus.kind,
                priority: focus.priority,
                target: focus.target,
            });
        }

        let goal = match self.camera.focus.as_mut() {
            None => self.camera.center,
            Some(focus) => {
                let fallback = self.camera.last_known_target_pos;
                let goal = match resolve_focus_position(focus, f, fallback) {
                    Ok(p) => p,
                    // Only reachable when a fresh unit target is absent on its
                    // adoption frame; aim at where the camera already is.
                    Err(_) => self.camera.center,
                };
                if matches!(focus.target, FocusTarget::Unit(id) if f.unit(id).is_none()) {
                    focus.target = FocusTarget::Position(goal);
                }
                self.camera.last_known_target_pos = Some(goal);
                goal
            }
        };

        self.camera.center = clamp_center(
            step_camera(self.camera.center, goal, self.config.move_factor),
            &self.map,
            &self.config,
        );
        self.last_frame = Some(now);

        Ok(TrajectorySample {
            frame: now,
            rect: screen_rect(self.camera.center, &self.config),
            focus_kind: self.camera.focus.map(|fs| fs.kind),
            focus_target: self.camera.focus.map(|fs| fs.target),
        })
    }
}

/// Everything a complete run produces.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectorRun {
    pub samples: Vec<TrajectorySample>,
    pub focus_changes: Vec<FocusChange>,
    pub candidate_counts: BTreeMap<EventKind, u64>,
    /// Continuous camera center after each frame.
    pub centers: Vec<MapPos>,
}

pub fn run_director<'a, I>(
    trace: I,
    map: &MapInfo,
    c: &DirectorConfig,
) -> Result<DirectorRun, DirectorError>
where
    I: IntoIterator<Item = &'a TraceFrame>,
{
    let mut director = Director::new(map.clone(), *c)?;
    let mut samples = Vec::new();
    let mut centers = Vec::new();
    for f in trace {
        samples.push(director.step(f)?);
        centers.push(director.camera().center);
    }
    Ok(DirectorRun {
        samples,
        focus_changes: director.changes,
        candidate_counts: director.candidate_counts,
        centers,
    })
}

/// Recovers focus changes from a trajectory alone.
///
/// A followed unit disappearing turns its `unit:` target into a `pos:`
/// target of the same kind. That is not a new adoption, and since detection
/// only ever produces position targets for army clusters, same-kind
/// unit-to-position transitions are read as this degradation.
pub fn focus_changes_from_samples(
    samples: &[TrajectorySample],
) -> Vec<(FrameTime, EventKind, FocusTarget)> {
    let mut out = Vec::new();
    let mut prev: Option<(EventKind, FocusTarget)> = None;
    for s in samples {
        let (Some(kind), Some(target)) = (s.focus_kind, s.focus_target) else {
            continue;
        };
        let changed = match prev {
            None => true,
            Some((pk, pt)) => {
                let degraded = pk == kind
                    && matches!(
                        (pt, target),
                        (FocusTarget::Unit(_), FocusTarget::Position(_))
                    );
                !(degraded || (pk == kind && pt == target))
            }
        };
        if changed {
            out.push((s.frame, kind, target));
        }
        prev = Some((kind, target));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{UnitId, UnitSnapshot};

    fn map() -> MapInfo {
        MapInfo::two_player(2048, 2048)
    }

    #[test]
    fn empty_trace() {
        let run = run_director(&[], &map(), &DirectorConfig::default()).unwrap();
        assert!(run.samples.is_empty() && run.focus_changes.is_empty());
    }

    #[test]
    fn walkthrough_with_position_candidates() {
        let c = DirectorConfig::default();
        let mut d = Director::new(map(), c).unwrap();
        let schedule = [
            (0u64, EventKind::UnitCreated, 1.0),
            (40, EventKind::Drop, 2.0),
            (60, EventKind::ScoutFar, 3.0),
            (160, EventKind::ScoutFar, 4.0),
            (220, EventKind::UnderAttack, 5.0),
        ];
        for t in 0..300u64 {
            let cands: Vec<_> = schedule
                .iter()
                .filter(|(at, _, _)| *at == t)
                .map(|(at, kind, n)| {
                    EventCandidate::new(
                        *kind,
                        FocusTarget::Position(MapPos::new(100.0 * n, 100.0 * n)),
                        FrameTime(*at),
                    )
                })
                .collect();
            d.step_with_candidates(&TraceFrame::new(t), &cands).unwrap();
        }
        let got: Vec<_> = d
            .focus_changes()
            .iter()
            .map(|ch| (ch.frame.0, ch.target))
            .collect();
        let at = |n: f64| FocusTarget::Position(MapPos::new(100.0 * n, 100.0 * n));
        assert_eq!(got, vec![(0, at(1.0)), (160, at(4.0)), (220, at(5.0))]);
    }

    #[test]
    fn static_battle_converges_geometrically() {
        let c = DirectorConfig::default();
        let target = MapPos::new(800.0, 800.0);
        let frames: Vec<_> = (0..120u64)
            .map(|t| {
                let mut f = TraceFrame::new(t);
                f.units
                    .push(UnitSnapshot::new(1, 0, target).under_attack(true));
                f
            })
            .collect();
        let run = run_director(&frames, &map(), &c).unwrap();
        let d0 = MapPos::new(1024.0, 1024.0).distance(target);
        let mut last = d0;
        for (n, center) in run.centers.iter().enumerate() {
            let d = center.distance(target);
            let closed = 0.9f64.powi(n as i32 + 1) * d0;
            assert!((d - closed).abs() < 1e-9, "frame {n}: {d} vs {closed}");
            assert!(d < last);
            last = d;
        }
    }

    #[test]
    fn no_candidates_means_no_motion() {
        let frames: Vec<_> = (0..50u64).map(TraceFrame::new).collect();
        let run = run_director(&frames, &map(), &DirectorConfig::default()).unwrap();
        assert!(run
            .centers
            .iter()
            .all(|c| *c == MapPos::new(1024.0, 1024.0)));
        assert!(run.samples.iter().all(|s| s.focus_kind.is_none()));
    }

    #[test]
    fn followed_unit_loss_degrades_to_last_position() {
        let c = DirectorConfig::default();
        let mut frames = Vec::new();
        for t in 0..10u64 {
            let mut f = TraceFrame::new(t);
            if t < 5 {
                f.units.push(
                    UnitSnapshot::new(7, 0, MapPos::new(300.0 + t as f64, 300.0))
                        .under_attack(t == 0),
                );
            }
            frames.push(f);
        }
        let run = run_director(&frames, &map(), &c).unwrap();
        assert_eq!(run.focus_changes.len(), 1);
        assert_eq!(
            run.samples[4].focus_target,
            Some(FocusTarget::Unit(UnitId(7)))
        );
        for s in &run.samples[5..] {
            assert_eq!(
                s.focus_target,
                Some(FocusTarget::Position(MapPos::new(304.0, 300.0)))
            );
            assert_eq!(s.focus_kind, Some(EventKind::UnderAttack));
        }
        assert_eq!(focus_changes_from_samples(&run.samples).len(), 1);
    }

    #[test]
    fn frame_errors_carry_frame_number() {
        let frames = [TraceFrame::new(10), TraceFrame::new(10)];
        let err = run_director(&frames, &map(), &DirectorConfig::default()).unwrap_err();
        assert!(matches!(
            err,
            DirectorError::Frame {
                frame: FrameTime(10),
                ..
            }
        ));
    }

    #[test]
    fn rejects_bad_config() {
        let c = DirectorConfig {
            t_min: FrameTime(150),
            ..Default::default()
        };
        assert!(matches!(
            Director::new(map(), c),
            Err(DirectorError::Config(_))
        ));
    }
}
