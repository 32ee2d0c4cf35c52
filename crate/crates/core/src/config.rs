//! Director tunables and their validation.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{FrameTime, MapInfo};

/// All tunables of one director run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirectorConfig {
    /// Frames after a focus change before a strictly higher priority event may take over.
    pub t_min: FrameTime,
    /// Frames after a focus change before any new event may take over.
    pub t_max: FrameTime,
    /// Fraction of the remaining distance to the focus covered per frame.
    pub move_factor: f64,
    /// Workers only count as scouts strictly before this frame.
    pub scout_frame_cutoff: FrameTime,
    pub near_base_radius_px: f64,
    pub own_base_radius_px: f64,
    pub cluster_min_units: u32,
    /// Single-linkage distance for army clustering.
    pub cluster_radius_px: f64,
    pub viewport_width_px: u32,
    pub viewport_height_px: u32,
}

impl Default for DirectorConfig {
    fn default() -> Self {
        DirectorConfig {
            t_min: FrameTime(50),
            t_max: FrameTime(150),
            move_factor: 0.1,
            scout_frame_cutoff: FrameTime(7500),
            near_base_radius_px: 320.0,
            own_base_radius_px: 320.0,
            cluster_min_units: 6,
            cluster_radius_px: 128.0,
            viewport_width_px: 640,
            viewport_height_px: 480,
        }
    }
}

pub fn default_config() -> DirectorConfig {
    DirectorConfig::default()
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("t_min must be > 0")]
    TMinNotPositive,
    #[error("t_min must be < t_max (t_min={t_min}, t_max={t_max})")]
    TMinNotBelowTMax { t_min: FrameTime, t_max: FrameTime },
    #[error("m out of [0,1]: move_factor={0}")]
    MoveFactorOutOfRange(f64),
    #[error("{field} must be a positive finite number, got {value}")]
    NotPositive { field: &'static str, value: f64 },
    #[error("{field} must be positive")]
    ZeroCount { field: &'static str },
    #[error("viewport {width}x{height} does not fit map {map_width}x{map_height}")]
    ViewportExceedsMap {
        width: u32,
        height: u32,
        map_width: u32,
        map_height: u32,
    },
}

impl ConfigError {
    /// Name of the offending config field.
    pub fn field(&self) -> &'static str {
        match self {
            ConfigError::TMinNotPositive | ConfigError::TMinNotBelowTMax { .. } => "t_min",
            ConfigError::MoveFactorOutOfRange(_) => "move_factor",
            ConfigError::NotPositive { field, .. } | ConfigError::ZeroCount { field } => field,
            ConfigError::ViewportExceedsMap { .. } => "viewport",
        }
    }
}

/// Checks every config invariant, then that the viewport fits on `map`.
pub fn validate_config(c: &DirectorConfig, map: &MapInfo) -> Result<(), ConfigError> {
    if c.t_min.0 == 0 {
        return Err(ConfigError::TMinNotPositive);
    }
    if c.t_min >= c.t_max {
        return Err(ConfigError::TMinNotBelowTMax {
            t_min: c.t_min,
            t_max: c.t_max,
        });
    }
    if !(0.0..=1.0).contains(&c.move_factor) {
        return Err(ConfigError::MoveFactorOutOfRange(c.move_factor));
    }
    for (field, value) in [
        ("near_base_radius_px", c.near_base_radius_px),
        ("own_base_radius_px", c.own_base_radius_px),
        ("cluster_radius_px", c.cluster_radius_px),
    ] {
        if !(value.is_finite() && value > 0.0) {
            return Err(ConfigError::NotPositive { field, value });
        }
    }
    for (field, value) in [
        ("cluster_min_units", c.cluster_min_units),
        ("viewport_width_px", c.viewport_width_px),
        ("viewport_height_px", c.viewport_height_px),
    ] {
        if value == 0 {
            return Err(ConfigError::ZeroCount { field });
        }
    }
    if c.viewport_width_px > map.width_px || c.viewport_height_px > map.height_px {
        return Err(ConfigError::ViewportExceedsMap {
            width: c.viewport_width_px,
            height: c.viewport_height_px,
            map_width: map.width_px,
            map_height: map.height_px,
        });
    }
    Ok(())
}

/// A partial config, as found in config files, trace headers and CLI flags.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigOverrides {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_min: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_max: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub move_factor: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scout_frame_cutoff: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub near_base_radius_px: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub own_base_radius_px: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cluster_min_units: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cluster_radius_px: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub viewport_width_px: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub viewport_height_px: Option<u32>,
}

impl ConfigOverrides {
    pub const FIELD_NAMES: [&'static str; 10] = [
        "t_min",
        "t_max",
        "move_factor",
        "scout_frame_cutoff",
        "near_base_radius_px",
        "own_base_radius_px",
        "cluster_min_units",
        "cluster_radius_px",
        "viewport_width_px",
        "viewport_height_px",
    ];

    pub fn is_empty(&self) -> bool {
        *self == ConfigOverrides::default()
    }

    pub fn apply(&self, base: DirectorConfig) -> DirectorConfig {
        DirectorConfig {
            t_min: self.t_min.map(FrameTime).unwrap_or(base.t_min),
            t_max: self.t_max.map(FrameTime).unwrap_or(base.t_max),
            move_factor: self.move_factor.unwrap_or(base.move_factor),
            scout_frame_cutoff: self
                .scout_frame_cutoff
                .map(FrameTime)
                .unwrap_or(base.scout_frame_cutoff),
            near_base_radius_px: self.near_base_radius_px.unwrap_or(base.near_base_radius_px),
            own_base_radius_px: self.own_base_radius_px.unwrap_or(base.own_base_radius_px),
            cluster_min_units: self.cluster_min_units.unwrap_or(base.cluster_min_units),
            cluster_radius_px: self.cluster_radius_px.unwrap_or(base.cluster_radius_px),
            viewport_width_px: self.viewport_width_px.unwrap_or(base.viewport_width_px),
            viewport_height_px: self.viewport_height_px.unwrap_or(base.viewport_height_px),
        }
    }

    /// Layers `other` on top of `self`; fields set in `other` win.
    pub fn merged(self, other: ConfigOverrides) -> ConfigOverrides {
        ConfigOverrides {
            t_min: other.t_min.or(self.t_min),
            t_max: other.t_max.or(self.t_max),
            move_factor: other.move_factor.or(self.move_factor),
            scout_frame_cutoff: other.scout_frame_cutoff.or(self.scout_frame_cutoff),
            near_base_radius_px: other.near_base_radius_px.or(self.near_base_radius_px),
            own_base_radius_px: other.own_base_radius_px.or(self.own_base_radius_px),
            cluster_min_units: other.cluster_min_units.or(self.cluster_min_units),
            cluster_radius_px: other.cluster_radius_px.or(self.cluster_radius_px),
            viewport_width_px: other.viewport_width_px.or(self.viewport_width_px),
            viewport_height_px: other.viewport_height_px.or(self.viewport_height_px),
        }
    }

    /// Parses a TOML config file body.
    pub fn from_toml_str(s: &str) -> Result<ConfigOverrides, toml::de::Error> {
        toml::from_str(s)
    }
}
