//! Automatic spectator camera for RTS game traces.
//!
//! Given a per-frame trace of unit states and game events, the engine
//! decides what is worth watching, arbitrates between competing events with
//! a two-timer rule, and moves a virtual camera smoothly toward the chosen
//! focus, producing one screen rectangle per frame.
//!
//! The pipeline per frame is [`detection`] → [`arbiter`] → [`camera`], driven
//! by [`director`]. [`trace_io`] reads and writes the file formats,
//! [`simulator`] produces synthetic traces and [`render`] draws them.

pub mod arbiter;
pub mod camera;
pub mod config;
pub mod detection;
pub mod director;
pub mod model;
pub mod pipeline;
pub mod render;
pub mod simulator;
pub mod trace_io;

pub use arbiter::{arbitrate, Decision, FocusState};
pub use camera::{
    clamp_center, resolve_focus_position, screen_rect, step_camera, CameraState, ScreenRect,
};
pub use config::{default_config, validate_config, ConfigError, ConfigOverrides, DirectorConfig};
pub use detection::{
    detect_clusters, detect_events, is_army_unit, is_scouting_worker, near_potential_enemy_base,
    EventCandidate, EventKind, FocusTarget,
};
pub use director::{
    run_director, Director, DirectorError, DirectorRun, FocusChange, TrajectorySample,
};
pub use model::{
    DiscreteEvent, DiscreteEventKind, FrameTime, MapInfo, MapPos, PlayerId, StartLocation,
    TraceFrame, UnitClass, UnitId, UnitSnapshot,
};
pub use simulator::{generate_scenario, Scenario};
pub use trace_io::{
    parse_trace, parse_trajectory, write_trace, write_trajectory, ParseError, TraceDocument,
};
