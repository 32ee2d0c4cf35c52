//! Trace and trajectory file formats.
//!
//! # Trace files
//!
//! UTF-8, one JSON object per line. Blank lines are skipped.
//!
//! Line 1 is the header:
//!
//! ```text
//! {"map":{"width_px":2048,"height_px":2048,"start_locations":[{"owner":0,"x":256.0,"y":256.0},{"owner":1,"x":1792.0,"y":1792.0}]},"config":{"t_min":50}}
//! ```
//!
//! `owner` is `0`, `1` or `null` (unowned start). `config` is optional and
//! takes any subset of the config keys (`t_min`, `t_max`, `move_factor`,
//! `scout_frame_cutoff`, `near_base_radius_px`, `own_base_radius_px`,
//! `cluster_min_units`, `cluster_radius_px`, `viewport_width_px`,
//! `viewport_height_px`).
//!
//! Every following line is one frame:
//!
//! ```text
//! {"frame":12,"units":[{"id":3,"owner":0,"x":900.0,"y":900.0,"class":["transport"],"cargo":2,"attacking":true,"under_attack":false}],"events":[{"kind":"unit_created","unit":3,"owner":0,"x":900.0,"y":900.0}]}
//! ```
//!
//! Unit fields `class` (default `[]`), `cargo` (default `0`), `attacking`
//! and `under_attack` (default `false`) may be omitted; the writer omits
//! them at their defaults. Class names are `worker`, `structure`, `larva`,
//! `overlord`, `spider_mine` and `transport`. Event kinds are
//! `unit_created` and `unit_destroyed`.
//!
//! In strict mode (the default) an unknown key anywhere is an error. In
//! lenient mode it is dropped and reported as a [`ParseWarning`].
//!
//! # Trajectory files
//!
//! A header line followed by one space-separated record per frame:
//!
//! ```text
//! frame left top width height focus_kind focus_target
//! 0 704 784 640 480 under_attack unit:3
//! 1 704 784 640 480 - -
//! ```
//!
//! `focus_target` is `unit:<id>`, `pos:<x>,<y>` or `-`.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{self, BufRead, Write};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::camera::ScreenRect;
use crate::config::ConfigOverrides;
use crate::detection::{EventKind, FocusTarget};
use crate::director::TrajectorySample;
use crate::model::{
    validate_frame, validate_map, DiscreteEvent, DiscreteEventKind, FrameTime, MapInfo, MapPos,
    PlayerId, StartLocation, TraceFrame, TraceRule, UnitClass, UnitId, UnitSnapshot,
};

/// A parsed, validated trace.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceDocument {
    pub map: MapInfo,
    pub config: ConfigOverrides,
    pub frames: Vec<TraceFrame>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReasonCode {
    Io,
    InvalidUtf8,
    MissingHeader,
    MalformedRecord,
    UnknownField,
    Invariant(TraceRule),
}

impl ReasonCode {
    pub fn code(self) -> &'static str {
        match self {
            ReasonCode::Io => "io",
            ReasonCode::InvalidUtf8 => "invalid_utf8",
            ReasonCode::MissingHeader => "missing_header",
            ReasonCode::MalformedRecord => "malformed_record",
            ReasonCode::UnknownField => "unknown_field",
            ReasonCode::Invariant(rule) => rule.code(),
        }
    }
}

impl fmt::Display for ReasonCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("line {line}: [{reason}] {message}")]
pub struct ParseError {
    /// 1-based line number.
    pub line: usize,
    pub reason: ReasonCode,
    pub message: String,
}

impl ParseError {
    fn new(line: usize, reason: ReasonCode, message: impl Into<String>) -> Self {
        ParseError {
            line,
            reason,
            message: message.into(),
        }
    }
}

/// An unknown key dropped in lenient mode.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseWarning {
    pub line: usize,
    pub field: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParseOptions {
    pub strict: bool,
}

impl Default for ParseOptions {
    fn default() -> Self {
        ParseOptions { strict: true }
    }
}

type Extra = BTreeMap<String, Value>;

#[derive(Serialize, Deserialize)]
struct RawStart {
    owner: Option<u8>,
    x: f64,
    y: f64,
    #[serde(flatten, skip_serializing)]
    extra: Extra,
}

#[derive(Serialize, Deserialize)]
struct RawMap {
    width_px: u32,
    height_px: u32,
    start_locations: Vec<RawStart>,
    #[serde(flatten, skip_serializing)]
    extra: Extra,
}

#[derive(Serialize, Deserialize)]
struct RawHeader {
    map: RawMap,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    config: Option<serde_json::Map<String, Value>>,
    #[serde(flatten, skip_serializing)]
    extra: Extra,
}

fn is_zero(v: &u32) -> bool {
    *v == 0
}

fn is_false(v: &bool) -> bool {
    !*v
}

#[derive(Serialize, Deserialize)]
struct RawUnit {
    id: u32,
    owner: u8,
    x: f64,
    y: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    class: Vec<String>,
    #[serde(default, skip_serializing_if = "is_zero")]
    cargo: u32,
    #[serde(default, skip_serializing_if = "is_false")]
    attacking: bool,
    #[serde(default, skip_serializing_if = "is_false")]
    under_attack: bool,
    #[serde(flatten, skip_serializing)]
    extra: Extra,
}

#[derive(Serialize, Deserialize)]
struct RawEvent {
    kind: DiscreteEventKind,
    unit: u32,
    owner: u8,
    x: f64,
    y: f64,
    #[serde(flatten, skip_serializing)]
    extra: Extra,
}

#[derive(Serialize, Deserialize)]
struct RawFrame {
    frame: u64,
    #[serde(default)]
    units: Vec<RawUnit>,
    #[serde(default)]
    events: Vec<RawEvent>,
    #[serde(flatten, skip_serializing)]
    extra: Extra,
}

struct LineContext<'a> {
    line: usize,
    options: ParseOptions,
    warnings: &'a mut Vec<ParseWarning>,
}

impl LineContext<'_> {
    fn check_extra(&mut self, path: &str, extra: &Extra) -> Result<(), ParseError> {
        for key in extra.keys() {
            let field = if path.is_empty() {
                key.clone()
            } else {
                format!("{path}.{key}")
            };
            if self.options.strict {
                return Err(ParseError::new(
                    self.line,
                    ReasonCode::UnknownField,
                    format!("unknown field `{field}`"),
                ));
            }
            log::warn!("line {}: ignoring unknown field `{field}`", self.line);
            self.warnings.push(ParseWarning {
                line: self.line,
                field,
            });
        }
        Ok(())
    }

    fn malformed(&self, message: impl Into<String>) -> ParseError {
        ParseError::new(self.line, ReasonCode::MalformedRecord, message)
    }

    fn invariant(&self, rule: TraceRule, message: impl Into<String>) -> ParseError {
        ParseError::new(self.line, ReasonCode::Invariant(rule), message)
    }
}

fn header_from_raw(
    raw: RawHeader,
    cx: &mut LineContext<'_>,
) -> Result<(MapInfo, ConfigOverrides), ParseError> {
    cx.check_extra("", &raw.extra)?;
    cx.check_extra("map", &raw.map.extra)?;
    let mut start_locations = Vec::with_capacity(raw.map.start_locations.len());
    for (i, s) in raw.map.start_locations.into_iter().enumerate() {
        cx.check_extra(&format!("map.start_locations[{i}]"), &s.extra)?;
        start_locations.push(StartLocation {
            owner: s.owner.map(PlayerId),
            pos: MapPos::new(s.x, s.y),
        });
    }
    let map = MapInfo {
        width_px: raw.map.width_px,
        height_px: raw.map.height_px,
        start_locations,
    };
    validate_map(&map).map_err(|v| cx.invariant(v.rule, v.to_string()))?;

    let config = match raw.config {
        None => ConfigOverrides::default(),
        Some(mut fields) => {
            let unknown: Extra = fields
                .iter()
                .filter(|(k, _)| !ConfigOverrides::FIELD_NAMES.contains(&k.as_str()))
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect();
            cx.check_extra("config", &unknown)?;
            for k in unknown.keys() {
                fields.remove(k);
            }
            serde_json::from_value(Value::Object(fields))
                .map_err(|e| cx.malformed(format!("bad config: {e}")))?
        }
    };
    Ok((map, config))
}

fn frame_from_raw(raw: RawFrame, cx: &mut LineContext<'_>) -> Result<TraceFrame, ParseError> {
    cx.check_extra("", &raw.extra)?;
    let mut units = Vec::with_capacity(raw.units.len());
    for (i, u) in raw.units.into_iter().enumerate() {
        cx.check_extra(&format!("units[{i}]"), &u.extra)?;
        let mut unit_class = UnitClass::empty();
        for name in &u.class {
            let flag = UnitClass::from_label(name)
                .ok_or_else(|| cx.malformed(format!("units[{i}]: unknown unit class {name:?}")))?;
            unit_class |= flag;
        }
        units.push(UnitSnapshot {
            unit_id: UnitId(u.id),
            owner: PlayerId(u.owner),
            pos: MapPos::new(u.x, u.y),
            unit_class,
            cargo_count: u.cargo,
            is_attacking: u.attacking,
            is_under_attack: u.under_attack,
        });
    }
    let mut events = Vec::with_capacity(raw.events.len());
    for (i, e) in raw.events.into_iter().enumerate() {
        cx.check_extra(&format!("events[{i}]"), &e.extra)?;
        events.push(DiscreteEvent {
            kind: e.kind,
            unit_id: UnitId(e.unit),
            owner: PlayerId(e.owner),
            pos: MapPos::new(e.x, e.y),
        });
    }
    Ok(TraceFrame {
        frame: FrameTime(raw.frame),
        units,
        events,
    })
}

/// Streaming trace reader: parses the header eagerly, then yields frames.
pub struct TraceReader<R> {
    input: R,
    line: usize,
    options: ParseOptions,
    map: MapInfo,
    config: ConfigOverrides,
    last_frame: Option<FrameTime>,
    warnings: Vec<ParseWarning>,
    buf: Vec<u8>,
    done: bool,
}

enum NextLine {
    Eof,
    Line(String),
}

fn read_line<R: BufRead>(
    input: &mut R,
    buf: &mut Vec<u8>,
    line: &mut usize,
) -> Result<NextLine, ParseError> {
    loop {
        buf.clear();
        let n = input
            .read_until(b'\n', buf)
            .map_err(|e| ParseError::new(*line + 1, ReasonCode::Io, e.to_string()))?;
        if n == 0 {
            return Ok(NextLine::Eof);
        }
        *line += 1;
        let text = std::str::from_utf8(buf)
            .map_err(|e| ParseError::new(*line, ReasonCode::InvalidUtf8, e.to_string()))?;
        let text = text.trim();
        if !text.is_empty() {
            return Ok(NextLine::Line(text.to_owned()));
        }
    }
}

impl<R: BufRead> TraceReader<R> {
    pub fn new(mut input: R, options: ParseOptions) -> Result<Self, ParseError> {
        let mut buf = Vec::new();
        let mut line = 0;
        let mut warnings = Vec::new();
        let text = match read_line(&mut input, &mut buf, &mut line)? {
            NextLine::Eof => {
                return Err(ParseError::new(
                    line.max(1),
                    ReasonCode::MissingHeader,
                    "empty trace",
                ))
            }
            NextLine::Line(t) => t,
        };
        let mut cx = LineContext {
            line,
            options,
            warnings: &mut warnings,
        };
        let raw: RawHeader = serde_json::from_str(&text).map_err(|e| {
            ParseError::new(
                line,
                ReasonCode::MissingHeader,
                format!("bad header record: {e}"),
            )
        })?;
        let (map, config) = header_from_raw(raw, &mut cx)?;
        Ok(TraceReader {
            input,
            line,
            options,
            map,
            config,
            last_frame: None,
            warnings,
            buf,
            done: false,
        })
    }

    pub fn map(&self) -> &MapInfo {
        &self.map
    }

    pub fn config(&self) -> &ConfigOverrides {
        &self.config
    }

    pub fn warnings(&self) -> &[ParseWarning] {
        &self.warnings
    }

    fn next_frame(&mut self) -> Result<Option<TraceFrame>, ParseError> {
        let text = match read_line(&mut self.input, &mut self.buf, &mut self.line)? {
            NextLine::Eof => return Ok(None),
            NextLine::Line(t) => t,
        };
        let mut cx = LineContext {
            line: self.line,
            options: self.options,
            warnings: &mut self.warnings,
        };
        let raw: RawFrame = serde_json::from_str(&text)
            .map_err(|e| cx.malformed(format!("bad frame record: {e}")))?;
        let frame = frame_from_raw(raw, &mut cx)?;
        validate_frame(&frame, &self.map, self.last_frame)
            .map_err(|v| cx.invariant(v.rule, v.to_string()))?;
        self.last_frame = Some(frame.frame);
        Ok(Some(frame))
    }
}

impl<R: BufRead> Iterator for TraceReader<R> {
    type Item = Result<TraceFrame, ParseError>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        match self.next_frame() {
            Ok(Some(f)) => Some(Ok(f)),
            Ok(None) => {
                self.done = true;
                None
            }
            Err(e) => {
                self.done = true;
                Some(Err(e))
            }
        }
    }
}

/// Parses and validates a whole trace in strict mode.
pub fn parse_trace<R: BufRead>(input: R) -> Result<TraceDocument, ParseError> {
    parse_trace_with(input, ParseOptions::default()).map(|(doc, _)| doc)
}

pub fn parse_trace_with<R: BufRead>(
    input: R,
    options: ParseOptions,
) -> Result<(TraceDocument, Vec<ParseWarning>), ParseError> {
    let mut reader = TraceReader::new(input, options)?;
    let frames = reader.by_ref().collect::<Result<Vec<_>, _>>()?;
    let doc = TraceDocument {
        map: reader.map,
        config: reader.config,
        frames,
    };
    Ok((doc, reader.warnings))
}

fn to_line<T: Serialize, W: Write>(sink: &mut W, value: &T) -> io::Result<()> {
    serde_json::to_writer(&mut *sink, value)?;
    sink.write_all(b"\n")
}

pub fn write_trace_header<W: Write>(
    map: &MapInfo,
    config: &ConfigOverrides,
    sink: &mut W,
) -> io::Result<()> {
    let config = if config.is_empty() {
        None
    } else {
        match serde_json::to_value(config)? {
            Value::Object(m) => Some(m),
            _ => unreachable!("config overrides serialize to an object"),
        }
    };
    let header = RawHeader {
        map: RawMap {
            width_px: map.width_px,
            height_px: map.height_px,
            start_locations: map
                .start_locations
                .iter()
                .map(|s| RawStart {
                    owner: s.owner.map(|p| p.0),
                    x: s.pos.x,
                    y: s.pos.y,
                    extra: Extra::new(),
                })
                .collect(),
            extra: Extra::new(),
        },
        config,
        extra: Extra::new(),
    };
    to_line(sink, &header)
}

pub fn write_trace_frame<W: Write>(f: &TraceFrame, sink: &mut W) -> io::Result<()> {
    let raw = RawFrame {
        frame: f.frame.0,
        units: f
            .units
            .iter()
            .map(|u| RawUnit {
                id: u.unit_id.0,
                owner: u.owner.0,
                x: u.pos.x,
                y: u.pos.y,
                class: u.unit_class.labels().map(str::to_owned).collect(),
                cargo: u.cargo_count,
                attacking: u.is_attacking,
                under_attack: u.is_under_attack,
                extra: Extra::new(),
            })
            .collect(),
        events: f
            .events
            .iter()
            .map(|e| RawEvent {
                kind: e.kind,
                unit: e.unit_id.0,
                owner: e.owner.0,
                x: e.pos.x,
                y: e.pos.y,
                extra: Extra::new(),
            })
            .collect(),
        extra: Extra::new(),
    };
    to_line(sink, &raw)
}

pub fn write_trace<W: Write>(doc: &TraceDocument, sink: &mut W) -> io::Result<()> {
    write_trace_header(&doc.map, &doc.config, sink)?;
    for f in &doc.frames {
        write_trace_frame(f, sink)?;
    }
    Ok(())
}

pub const TRAJECTORY_HEADER: &str = "frame left top width height focus_kind focus_target";

pub fn write_trajectory<W: Write>(samples: &[TrajectorySample], sink: &mut W) -> io::Result<()> {
    writeln!(sink, "{TRAJECTORY_HEADER}")?;
    for s in samples {
        let kind = s.focus_kind.map_or("-", EventKind::name);
        let target = s
            .focus_target
            .map_or_else(|| "-".to_owned(), |t| t.to_string());
        writeln!(
            sink,
            "{} {} {} {} {} {} {}",
            s.frame, s.rect.left, s.rect.top, s.rect.width, s.rect.height, kind, target
        )?;
    }
    Ok(())
}

fn parse_field<T: std::str::FromStr>(line: usize, name: &str, s: &str) -> Result<T, ParseError> {
    s.parse().map_err(|_| {
        ParseError::new(
            line,
            ReasonCode::MalformedRecord,
            format!("bad {name} {s:?}"),
        )
    })
}

pub fn parse_trajectory<R: BufRead>(mut input: R) -> Result<Vec<TrajectorySample>, ParseError> {
    let mut buf = Vec::new();
    let mut line = 0;
    match read_line(&mut input, &mut buf, &mut line)? {
        NextLine::Line(h) if h == TRAJECTORY_HEADER => {}
        NextLine::Line(_) => {
            return Err(ParseError::new(
                line,
                ReasonCode::MissingHeader,
                "bad trajectory header",
            ))
        }
        NextLine::Eof => {
            return Err(ParseError::new(
                1,
                ReasonCode::MissingHeader,
                "empty trajectory",
            ))
        }
    }
    let mut out: Vec<TrajectorySample> = Vec::new();
    while let NextLine::Line(text) = read_line(&mut input, &mut buf, &mut line)? {
        let fields: Vec<&str> = text.split(' ').collect();
        let [frame, left, top, width, height, kind, target] = fields[..] else {
            return Err(ParseError::new(
                line,
                ReasonCode::MalformedRecord,
                format!("expected 7 fields, got {}", fields.len()),
            ));
        };
        let frame = FrameTime(parse_field(line, "frame", frame)?);
        if out.last().is_some_and(|prev| prev.frame >= frame) {
            return Err(ParseError::new(
                line,
                ReasonCode::Invariant(TraceRule::NonIncreasingFrameTime),
                format!("non-increasing frame time {frame}"),
            ));
        }
        let focus_kind = match kind {
            "-" => None,
            k => Some(
                k.parse::<EventKind>()
                    .map_err(|e| ParseError::new(line, ReasonCode::MalformedRecord, e))?,
            ),
        };
        let focus_target = match target {
            "-" => None,
            t => Some(
                t.parse::<FocusTarget>()
                    .map_err(|e| ParseError::new(line, ReasonCode::MalformedRecord, e))?,
            ),
        };
        if focus_kind.is_some() != focus_target.is_some() {
            return Err(ParseError::new(
                line,
                ReasonCode::MalformedRecord,
                "focus_kind and focus_target must both be set or both be `-`",
            ));
        }
        out.push(TrajectorySample {
            frame,
            rect: ScreenRect {
                left: parse_field(line, "left", left)?,
                top: parse_field(line, "top", top)?,
                width: parse_field(line, "width", width)?,
                height: parse_field(line, "height", height)?,
            },
            focus_kind,
            focus_target,
        });
    }
    Ok(out)
}
