//! Plain-text frame-by-frame visualization of a trace and its trajectory.
//!
//! Legend: `.` empty, `S` start location, `a`/`b` units of player 0/1,
//! `A`/`B` their structures, `x` a unit in combat, `@` army cluster
//! centroid, `#` camera rectangle border, `+` focus position.

use std::io::{self, Write};

use thiserror::Error;

use crate::camera::ScreenRect;
use crate::config::DirectorConfig;
use crate::detection::{detect_clusters, FocusTarget};
use crate::director::TrajectorySample;
use crate::model::{MapInfo, MapPos, TraceFrame, UnitClass};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RenderOptions {
    /// Render every `stride`-th frame. The last frame is always rendered.
    pub stride: usize,
    pub columns: usize,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions {
            stride: 24,
            columns: 64,
        }
    }
}

#[derive(Debug, Error)]
pub enum RenderError {
    #[error("trace has {trace} frames but trajectory has {trajectory}")]
    LengthMismatch { trace: usize, trajectory: usize },
    #[error("record {index}: trace frame {trace} vs trajectory frame {trajectory}")]
    FrameMismatch {
        index: usize,
        trace: u64,
        trajectory: u64,
    },
    #[error("stride and columns must be positive")]
    BadOptions,
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// A character grid laid over the map.
pub struct Grid {
    cols: usize,
    rows: usize,
    cell_w: f64,
    cell_h: f64,
    cells: Vec<u8>,
}

impl Grid {
    pub fn new(map: &MapInfo, columns: usize) -> Self {
        let cols = columns.max(1);
        let cell_w = map.width_px as f64 / cols as f64;
        // Terminal cells are about twice as tall as wide.
        let cell_h = cell_w * 2.0;
        let rows = ((map.height_px as f64 / cell_h).ceil() as usize).max(1);
        Grid {
            cols,
            rows,
            cell_w,
            cell_h,
            cells: vec![b'.'; cols * rows],
        }
    }

    pub fn cell_of(&self, p: MapPos) -> (usize, usize) {
        let c = ((p.x / self.cell_w).floor().max(0.0) as usize).min(self.cols - 1);
        let r = ((p.y / self.cell_h).floor().max(0.0) as usize).min(self.rows - 1);
        (c, r)
    }

    pub fn get(&self, col: usize, row: usize) -> u8 {
        self.cells[row * self.cols + col]
    }

    fn put(&mut self, p: MapPos, ch: u8) {
        let (c, r) = self.cell_of(p);
        self.cells[r * self.cols + c] = ch;
    }

    fn rect(&mut self, rect: &ScreenRect) {
        let (l, t) = self.cell_of(MapPos::new(rect.left as f64, rect.top as f64));
        let (r, b) = self.cell_of(MapPos::new(
            (rect.left + rect.width as i64) as f64 - 1e-6,
            (rect.top + rect.height as i64) as f64 - 1e-6,
        ));
        for c in l..=r {
            self.cells[t * self.cols + c] = b'#';
            self.cells[b * self.cols + c] = b'#';
        }
        for row in t..=b {
            self.cells[row * self.cols + l] = b'#';
            self.cells[row * self.cols + r] = b'#';
        }
    }

    pub fn rows(&self) -> impl Iterator<Item = &str> {
        self.cells
            .chunks(self.cols)
            .map(|row| std::str::from_utf8(row).expect("grid is ascii"))
    }
}

/// Draws one frame: rectangle first, then start locations, units, clusters and focus on top.
pub fn draw_frame(
    map: &MapInfo,
    c: &DirectorConfig,
    frame: &TraceFrame,
    sample: &TrajectorySample,
    columns: usize,
) -> Grid {
    let mut g = Grid::new(map, columns);
    g.rect(&sample.rect);
    for s in &map.start_locations {
        g.put(s.pos, b'S');
    }
    let mut units: Vec<_> = frame.units.iter().collect();
    units.sort_by_key(|u| u.unit_id);
    for u in units {
        let ch = if u.is_attacking || u.is_under_attack {
            b'x'
        } else {
            match (u.owner.0, u.is(UnitClass::STRUCTURE)) {
                (0, false) => b'a',
                (0, true) => b'A',
                (_, false) => b'b',
                (_, true) => b'B',
            }
        };
        g.put(u.pos, ch);
    }
    for cl in detect_clusters(&frame.units, c) {
        g.put(cl.centroid, b'@');
    }
    if let Some(FocusTarget::Position(p)) = sample.focus_target {
        g.put(p, b'+');
    }
    g
}

pub fn render<W: Write>(
    map: &MapInfo,
    c: &DirectorConfig,
    frames: &[TraceFrame],
    samples: &[TrajectorySample],
    opts: RenderOptions,
    sink: &mut W,
) -> Result<(), RenderError> {
    if opts.stride == 0 || opts.columns == 0 {
        return Err(RenderError::BadOptions);
    }
    if frames.len() != samples.len() {
        return Err(RenderError::LengthMismatch {
            trace: frames.len(),
            trajectory: samples.len(),
        });
    }
    for (index, (f, s)) in frames.iter().zip(samples).enumerate() {
        if f.frame != s.frame {
            return Err(RenderError::FrameMismatch {
                index,
                trace: f.frame.0,
                trajectory: s.frame.0,
            });
        }
    }
    let last = frames.len().saturating_sub(1);
    for (i, (f, s)) in frames.iter().zip(samples).enumerate() {
        if i % opts.stride != 0 && i != last {
            continue;
        }
        let focus = match (s.focus_kind, s.focus_target) {
            (Some(k), Some(t)) => format!("{k} {t}"),
            _ => "-".to_owned(),
        };
        writeln!(
            sink,
            "frame {} rect {},{} {}x{} focus {}",
            s.frame, s.rect.left, s.rect.top, s.rect.width, s.rect.height, focus
        )?;
        for row in draw_frame(map, c, f, s, opts.columns).rows() {
            writeln!(sink, "{row}")?;
        }
        writeln!(sink)?;
    }
    Ok(())
}
