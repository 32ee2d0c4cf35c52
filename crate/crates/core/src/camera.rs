//! Camera kinematics: focus resolution, smoothing, clamping and the screen rectangle.

use thiserror::Error;

use crate::arbiter::FocusState;
use crate::config::DirectorConfig;
use crate::detection::FocusTarget;
use crate::model::{MapInfo, MapPos, TraceFrame, UnitId};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CameraState {
    /// Continuous, always clamped.
    pub center: MapPos,
    pub focus: Option<FocusState>,
    pub last_known_target_pos: Option<MapPos>,
}

impl CameraState {
    /// A camera at the (clamped) map center with nothing focused.
    pub fn initial(map: &MapInfo, c: &DirectorConfig) -> Self {
        CameraState {
            center: clamp_center(map.center(), map, c),
            focus: None,
            last_known_target_pos: None,
        }
    }
}

/// The visible part of the map, top-left anchored, in whole pixels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ScreenRect {
    pub left: i64,
    pub top: i64,
    pub width: u32,
    pub height: u32,
}

impl ScreenRect {
    pub fn contains(&self, p: MapPos) -> bool {
        p.x >= self.left as f64
            && p.y >= self.top as f64
            && p.x <= (self.left + self.width as i64) as f64
            && p.y <= (self.top + self.height as i64) as f64
    }

    pub fn inside_map(&self, map: &MapInfo) -> bool {
        self.left >= 0
            && self.top >= 0
            && self.left + self.width as i64 <= map.width_px as i64
            && self.top + self.height as i64 <= map.height_px as i64
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("followed unit {0} is not in the frame and no last known position exists")]
pub struct LostTarget(pub UnitId);

/// Where the camera should head this frame.
///
/// A followed unit that is missing from `f` resolves to `fallback`, its last
/// known position.
pub fn resolve_focus_position(
    focus: &FocusState,
    f: &TraceFrame,
    fallback: Option<MapPos>,
) -> Result<MapPos, LostTarget> {
    match focus.target {
        FocusTarget::Position(p) => Ok(p),
        FocusTarget::Unit(id) => match f.unit(id) {
            Some(u) => Ok(u.pos),
            None => fallback.ok_or(LostTarget(id)),
        },
    }
}

/// Moves a fraction `m` of the way from `pos` toward `focus_pos`.
pub fn step_camera(pos: MapPos, focus_pos: MapPos, m: f64) -> MapPos {
    MapPos::new(
        pos.x + m * (focus_pos.x - pos.x),
        pos.y + m * (focus_pos.y - pos.y),
    )
}

/// Keeps the whole viewport on the map.
pub fn clamp_center(center: MapPos, map: &MapInfo, c: &DirectorConfig) -> MapPos {
    let half_w = c.viewport_width_px as f64 / 2.0;
    let half_h = c.viewport_height_px as f64 / 2.0;
    MapPos::new(
        center
            .x
            .clamp(half_w, (map.width_px as f64 - half_w).max(half_w)),
        center
            .y
            .clamp(half_h, (map.height_px as f64 - half_h).max(half_h)),
    )
}

pub fn screen_rect(center: MapPos, c: &DirectorConfig) -> ScreenRect {
    ScreenRect {
        left: (center.x - c.viewport_width_px as f64 / 2.0).floor() as i64,
        top: (center.y - c.viewport_height_px as f64 / 2.0).floor() as i64,
        width: c.viewport_width_px,
        height: c.viewport_height_px,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detection::EventKind;
    use crate::model::{FrameTime, UnitSnapshot};
    use proptest::prelude::*;

    fn map() -> MapInfo {
        MapInfo::two_player(2048, 2048)
    }

    fn focus_on(target: FocusTarget) -> FocusState {
        FocusState {
            target,
            priority: 3,
            adopted_at: FrameTime(0),
            kind: EventKind::UnderAttack,
        }
    }

    #[test]
    fn resolve_position_and_unit_targets() {
        let f = {
            let mut f = TraceFrame::new(3);
            f.units
                .push(UnitSnapshot::new(4, 0, MapPos::new(100.0, 200.0)));
            f
        };
        let p = focus_on(FocusTarget::Position(MapPos::new(500.0, 600.0)));
        assert_eq!(
            resolve_focus_position(&p, &f, None),
            Ok(MapPos::new(500.0, 600.0))
        );
        assert_eq!(
            resolve_focus_position(&p, &TraceFrame::new(9), None),
            Ok(MapPos::new(500.0, 600.0))
        );

        let u = focus_on(FocusTarget::Unit(UnitId(4)));
        assert_eq!(
            resolve_focus_position(&u, &f, None),
            Ok(MapPos::new(100.0, 200.0))
        );

        let gone = focus_on(FocusTarget::Unit(UnitId(5)));
        let fb = Some(MapPos::new(300.0, 300.0));
        assert_eq!(
            resolve_focus_position(&gone, &f, fb),
            Ok(MapPos::new(300.0, 300.0))
        );
        assert_eq!(
            resolve_focus_position(&gone, &f, None),
            Err(LostTarget(UnitId(5)))
        );
    }

    #[test]
    fn step_examples() {
        assert_eq!(
            step_camera(MapPos::new(0.0, 0.0), MapPos::new(100.0, 0.0), 0.1),
            MapPos::new(10.0, 0.0)
        );
        for m in [0.0, 0.3, 1.0] {
            let p = MapPos::new(50.0, 50.0);
            assert_eq!(step_camera(p, p, m), p);
        }
        assert_eq!(
            step_camera(MapPos::new(0.0, 0.0), MapPos::new(100.0, 40.0), 1.0),
            MapPos::new(100.0, 40.0)
        );
    }

    #[test]
    fn repeated_steps_follow_closed_form() {
        let target = MapPos::new(100.0, 0.0);
        let mut p = MapPos::new(0.0, 0.0);
        for _ in 0..22 {
            p = step_camera(p, target, 0.1);
        }
        let closed = 100.0 * (1.0 - 0.9f64.powi(22));
        assert!((p.x - closed).abs() < 1e-9);
        assert!((p.distance(target) - 9.847709021836112).abs() < 1e-9);
    }

    #[test]
    fn clamp_examples() {
        let c = DirectorConfig::default();
        let m = map();
        assert_eq!(
            clamp_center(MapPos::new(0.0, 0.0), &m, &c),
            MapPos::new(320.0, 240.0)
        );
        assert_eq!(
            clamp_center(MapPos::new(1024.0, 1024.0), &m, &c),
            MapPos::new(1024.0, 1024.0)
        );
        assert_eq!(
            clamp_center(MapPos::new(2048.0, 2048.0), &m, &c),
            MapPos::new(1728.0, 1808.0)
        );
    }

    #[test]
    fn rect_examples() {
        let c = DirectorConfig::default();
        let r = |x, y, c: &DirectorConfig| screen_rect(MapPos::new(x, y), c);
        assert_eq!(
            r(320.0, 240.0, &c),
            ScreenRect {
                left: 0,
                top: 0,
                width: 640,
                height: 480
            }
        );
        let hd = DirectorConfig {
            viewport_width_px: 1920,
            viewport_height_px: 1080,
            ..c
        };
        assert_eq!(
            r(960.0, 540.0, &hd),
            ScreenRect {
                left: 0,
                top: 0,
                width: 1920,
                height: 1080
            }
        );
        assert_eq!(
            r(320.7, 240.2, &c),
            ScreenRect {
                left: 0,
                top: 0,
                width: 640,
                height: 480
            }
        );
    }

    fn coord() -> impl Strategy<Value = f64> {
        -5000.0f64..5000.0
    }

    proptest! {
        #[test]
        fn one_step_contracts_distance(
            px in coord(), py in coord(), fx in coord(), fy in coord(), m in 0.0f64..=1.0
        ) {
            let (p, f) = (MapPos::new(px, py), MapPos::new(fx, fy));
            let before = p.distance(f);
            let after = step_camera(p, f, m).distance(f);
            prop_assert!((after - (1.0 - m) * before).abs() <= 1e-9 * before.max(1.0));
            // Displacement never exceeds m times the distance to focus.
            prop_assert!(p.distance(step_camera(p, f, m)) <= m * before + 1e-9 * before.max(1.0));
        }

        #[test]
        fn clamp_is_idempotent_and_rect_fits(
            x in coord(), y in coord(),
            vw in 1u32..=2048, vh in 1u32..=1024,
        ) {
            let m = MapInfo::two_player(2048, 1024);
            let c = DirectorConfig { viewport_width_px: vw, viewport_height_px: vh, ..Default::default() };
            let once = clamp_center(MapPos::new(x, y), &m, &c);
            prop_assert_eq!(clamp_center(once, &m, &c), once);
            prop_assert!(screen_rect(once, &c).inside_map(&m));
        }
    }
}
