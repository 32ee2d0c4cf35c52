//! Domain types shared by every stage of the pipeline.
//!
//! Everything here is plain value data. The only behaviour is construction
//! helpers and the structural validators used by both the trace parser and
//! the director loop.

use std::collections::HashSet;
use std::fmt;
use std::ops::Sub;

use bitflags::bitflags;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A logical game frame number.
#[derive(
    Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct FrameTime(pub u64);

impl FrameTime {
    pub const ZERO: FrameTime = FrameTime(0);

    pub fn value(self) -> u64 {
        self.0
    }

    /// Frames elapsed since `earlier`, saturating at zero.
    pub fn since(self, earlier: FrameTime) -> u64 {
        self.0.saturating_sub(earlier.0)
    }
}

impl Sub for FrameTime {
    type Output = u64;

    fn sub(self, rhs: FrameTime) -> u64 {
        self.since(rhs)
    }
}

impl fmt::Display for FrameTime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl From<u64> for FrameTime {
    fn from(v: u64) -> Self {
        FrameTime(v)
    }
}

/// A point in map space, in pixels.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct MapPos {
    pub x: f64,
    pub y: f64,
}

impl MapPos {
    pub const fn new(x: f64, y: f64) -> Self {
        MapPos { x, y }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn distance(self, other: MapPos) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

impl fmt::Display for MapPos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// One of the two players of a 1v1 game.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PlayerId(pub u8);

impl PlayerId {
    pub const COUNT: u8 = 2;

    pub fn is_valid(self) -> bool {
        self.0 < Self::COUNT
    }

    pub fn opponent(self) -> PlayerId {
        PlayerId(1 - self.0.min(1))
    }
}

impl fmt::Display for PlayerId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Stable unit identifier. Zero is reserved and rejected by validation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct UnitId(pub u32);

impl fmt::Display for UnitId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

bitflags! {
    /// Classification flags of a unit. An empty set is a generic combat unit.
    #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
    pub struct UnitClass: u8 {
        const WORKER = 1 << 0;
        const STRUCTURE = 1 << 1;
        const LARVA = 1 << 2;
        const OVERLORD = 1 << 3;
        const SPIDER_MINE = 1 << 4;
        const TRANSPORT = 1 << 5;
    }
}

impl UnitClass {
    /// Canonical flag names, in serialization order.
    pub const NAMES: [(&'static str, UnitClass); 6] = [
        ("worker", UnitClass::WORKER),
        ("structure", UnitClass::STRUCTURE),
        ("larva", UnitClass::LARVA),
        ("overlord", UnitClass::OVERLORD),
        ("spider_mine", UnitClass::SPIDER_MINE),
        ("transport", UnitClass::TRANSPORT),
    ];

    pub fn from_label(name: &str) -> Option<UnitClass> {
        Self::NAMES
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, flag)| *flag)
    }

    pub fn labels(self) -> impl Iterator<Item = &'static str> {
        Self::NAMES
            .into_iter()
            .filter(move |(_, flag)| self.contains(*flag))
            .map(|(n, _)| n)
    }
}

/// The state of one unit in one frame.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitSnapshot {
    pub unit_id: UnitId,
    pub owner: PlayerId,
    pub pos: MapPos,
    pub unit_class: UnitClass,
    pub cargo_count: u32,
    pub is_attacking: bool,
    pub is_under_attack: bool,
}

impl UnitSnapshot {
    /// A flagless, idle unit.
    pub fn new(unit_id: u32, owner: u8, pos: MapPos) -> Self {
        UnitSnapshot {
            unit_id: UnitId(unit_id),
            owner: PlayerId(owner),
            pos,
            unit_class: UnitClass::empty(),
            cargo_count: 0,
            is_attacking: false,
            is_under_attack: false,
        }
    }

    pub fn with_class(mut self, class: UnitClass) -> Self {
        self.unit_class = class;
        self
    }

    pub fn with_cargo(mut self, cargo: u32) -> Self {
        self.cargo_count = cargo;
        self
    }

    pub fn attacking(mut self, v: bool) -> Self {
        self.is_attacking = v;
        self
    }

    pub fn under_attack(mut self, v: bool) -> Self {
        self.is_under_attack = v;
        self
    }

    pub fn is(&self, class: UnitClass) -> bool {
        self.unit_class.contains(class)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiscreteEventKind {
    UnitCreated,
    /// Carried so unit-follow focus can notice target loss. Never watched on its own.
    UnitDestroyed,
}

/// An event the game reports as it happens, rather than one found by scanning.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteEvent {
    pub kind: DiscreteEventKind,
    pub unit_id: UnitId,
    pub owner: PlayerId,
    pub pos: MapPos,
}

impl DiscreteEvent {
    pub fn created(unit_id: u32, owner: u8, pos: MapPos) -> Self {
        DiscreteEvent {
            kind: DiscreteEventKind::UnitCreated,
            unit_id: UnitId(unit_id),
            owner: PlayerId(owner),
            pos,
        }
    }

    pub fn destroyed(unit_id: u32, owner: u8, pos: MapPos) -> Self {
        DiscreteEvent {
            kind: DiscreteEventKind::UnitDestroyed,
            ..Self::created(unit_id, owner, pos)
        }
    }
}

/// Everything the engine knows about one logical frame.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TraceFrame {
    pub frame: FrameTime,
    pub units: Vec<UnitSnapshot>,
    pub events: Vec<DiscreteEvent>,
}

impl TraceFrame {
    pub fn new(frame: u64) -> Self {
        TraceFrame {
            frame: FrameTime(frame),
            ..Default::default()
        }
    }

    pub fn unit(&self, id: UnitId) -> Option<&UnitSnapshot> {
        self.units.iter().find(|u| u.unit_id == id)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StartLocation {
    /// `None` for a start location nobody spawned at.
    pub owner: Option<PlayerId>,
    pub pos: MapPos,
}

/// Static map geometry.
#[derive(Debug, Clone, PartialEq)]
pub struct MapInfo {
    pub width_px: u32,
    pub height_px: u32,
    pub start_locations: Vec<StartLocation>,
}

impl MapInfo {
    /// A square map with the two players on opposite diagonal corners, 256 px in.
    pub fn two_player(width_px: u32, height_px: u32) -> Self {
        let inset = 256.0;
        MapInfo {
            width_px,
            height_px,
            start_locations: vec![
                StartLocation {
                    owner: Some(PlayerId(0)),
                    pos: MapPos::new(inset, inset),
                },
                StartLocation {
                    owner: Some(PlayerId(1)),
                    pos: MapPos::new(width_px as f64 - inset, height_px as f64 - inset),
                },
            ],
        }
    }

    pub fn center(&self) -> MapPos {
        MapPos::new(self.width_px as f64 / 2.0, self.height_px as f64 / 2.0)
    }

    pub fn contains(&self, pos: MapPos) -> bool {
        pos.is_finite()
            && (0.0..=self.width_px as f64).contains(&pos.x)
            && (0.0..=self.height_px as f64).contains(&pos.y)
    }

    /// The main base of `player`, if the map declares one.
    pub fn own_start(&self, player: PlayerId) -> Option<MapPos> {
        self.start_locations
            .iter()
            .find(|s| s.owner == Some(player))
            .map(|s| s.pos)
    }
}

/// The structural rule a trace broke.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TraceRule {
    MapDimensions,
    TooFewStartLocations,
    StartLocationOutOfBounds,
    StartLocationOwner,
    NonIncreasingFrameTime,
    InvalidUnitId,
    DuplicateUnitId,
    InvalidOwner,
    CargoWithoutTransport,
    LarvaTransport,
    CreatedUnitMissing,
    PositionOutOfBounds,
}

impl TraceRule {
    /// Machine-readable reason code.
    pub fn code(self) -> &'static str {
        match self {
            TraceRule::MapDimensions => "map_dimensions",
            TraceRule::TooFewStartLocations => "too_few_start_locations",
            TraceRule::StartLocationOutOfBounds => "start_location_out_of_bounds",
            TraceRule::StartLocationOwner => "start_location_owner",
            TraceRule::NonIncreasingFrameTime => "non_increasing_frame_time",
            TraceRule::InvalidUnitId => "invalid_unit_id",
            TraceRule::DuplicateUnitId => "duplicate_unit_id",
            TraceRule::InvalidOwner => "invalid_owner",
            TraceRule::CargoWithoutTransport => "cargo_without_transport",
            TraceRule::LarvaTransport => "larva_transport",
            TraceRule::CreatedUnitMissing => "created_unit_missing",
            TraceRule::PositionOutOfBounds => "position_out_of_bounds",
        }
    }
}

impl fmt::Display for TraceRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("{rule}: {detail}")]
pub struct TraceViolation {
    pub rule: TraceRule,
    pub detail: String,
}

impl TraceViolation {
    fn new(rule: TraceRule, detail: impl Into<String>) -> Self {
        TraceViolation {
            rule,
            detail: detail.into(),
        }
    }
}

/// Checks the map header: positive dimensions, at least two in-bounds start
/// locations, and exactly one owned start per player.
pub fn validate_map(map: &MapInfo) -> Result<(), TraceViolation> {
    if map.width_px == 0 || map.height_px == 0 {
        return Err(TraceViolation::new(
            TraceRule::MapDimensions,
            format!(
                "map must be non-empty, got {}x{}",
                map.width_px, map.height_px
            ),
        ));
    }
    if map.start_locations.len() < 2 {
        return Err(TraceViolation::new(
            TraceRule::TooFewStartLocations,
            format!(
                "need at least 2 start locations, got {}",
                map.start_locations.len()
            ),
        ));
    }
    for s in &map.start_locations {
        if !map.contains(s.pos) {
            return Err(TraceViolation::new(
                TraceRule::StartLocationOutOfBounds,
                format!("start location {} outside map", s.pos),
            ));
        }
        if let Some(owner) = s.owner {
            if !owner.is_valid() {
                return Err(TraceViolation::new(
                    TraceRule::InvalidOwner,
                    format!("start location owner {owner} is not a player id"),
                ));
            }
        }
    }
    for p in 0..PlayerId::COUNT {
        let owned = map
            .start_locations
            .iter()
            .filter(|s| s.owner == Some(PlayerId(p)))
            .count();
        if owned != 1 {
            return Err(TraceViolation::new(
                TraceRule::StartLocationOwner,
                format!("player {p} owns {owned} start locations, expected 1"),
            ));
        }
    }
    Ok(())
}

/// Checks one frame against the map and the previous frame time.
pub fn validate_frame(
    frame: &TraceFrame,
    map: &MapInfo,
    previous: Option<FrameTime>,
) -> Result<(), TraceViolation> {
    if let Some(prev) = previous {
        if frame.frame <= prev {
            return Err(TraceViolation::new(
                TraceRule::NonIncreasingFrameTime,
                format!("non-increasing frame time: {} after {}", frame.frame, prev),
            ));
        }
    }

    let mut seen = HashSet::with_capacity(frame.units.len());
    for u in &frame.units {
        if u.unit_id.0 == 0 {
            return Err(TraceViolation::new(
                TraceRule::InvalidUnitId,
                "unit id must be positive",
            ));
        }
        if !seen.insert(u.unit_id) {
            return Err(TraceViolation::new(
                TraceRule::DuplicateUnitId,
                format!("unit {} appears twice", u.unit_id),
            ));
        }
        if !u.owner.is_valid() {
            return Err(TraceViolation::new(
                TraceRule::InvalidOwner,
                format!("unit {} has owner {}", u.unit_id, u.owner),
            ));
        }
        if u.cargo_count > 0 && !u.is(UnitClass::TRANSPORT) {
            return Err(TraceViolation::new(
                TraceRule::CargoWithoutTransport,
                format!("unit {} carries cargo but is not a transport", u.unit_id),
            ));
        }
        if u.is(UnitClass::LARVA | UnitClass::TRANSPORT) {
            return Err(TraceViolation::new(
                TraceRule::LarvaTransport,
                format!("unit {} is both larva and transport", u.unit_id),
            ));
        }
        if !map.contains(u.pos) {
            return Err(TraceViolation::new(
                TraceRule::PositionOutOfBounds,
                format!("unit {} at {} is outside the map", u.unit_id, u.pos),
            ));
        }
    }

    for e in &frame.events {
        if e.unit_id.0 == 0 {
            return Err(TraceViolation::new(
                TraceRule::InvalidUnitId,
                "event unit id must be positive",
            ));
        }
        if !e.owner.is_valid() {
            return Err(TraceViolation::new(
                TraceRule::InvalidOwner,
                format!("event for unit {} has owner {}", e.unit_id, e.owner),
            ));
        }
        if !map.contains(e.pos) {
            return Err(TraceViolation::new(
                TraceRule::PositionOutOfBounds,
                format!(
                    "event for unit {} at {} is outside the map",
                    e.unit_id, e.pos
                ),
            ));
        }
        if e.kind == DiscreteEventKind::UnitCreated && !seen.contains(&e.unit_id) {
            return Err(TraceViolation::new(
                TraceRule::CreatedUnitMissing,
                format!(
                    "unit_created for unit {} with no snapshot in frame",
                    e.unit_id
                ),
            ));
        }
    }
    Ok(())
}
