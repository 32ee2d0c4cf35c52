//! End-to-end entry points shared by the CLI and tests.

use std::collections::BTreeMap;
use std::fmt;

use crate::config::{ConfigOverrides, DirectorConfig};
use crate::detection::EventKind;
use crate::director::{run_director, DirectorError, DirectorRun};
use crate::trace_io::TraceDocument;

/// Layers config sources, lowest precedence first: built-in defaults, the
/// trace header, the config file, then command-line flags.
pub fn effective_config(
    header: &ConfigOverrides,
    file: &ConfigOverrides,
    flags: &ConfigOverrides,
) -> DirectorConfig {
    header
        .merged(*file)
        .merged(*flags)
        .apply(DirectorConfig::default())
}

/// Runs the director over a parsed trace with `overrides` on top of the header config.
pub fn run_document(
    doc: &TraceDocument,
    overrides: &ConfigOverrides,
) -> Result<(DirectorRun, DirectorConfig), DirectorError> {
    let config = effective_config(&doc.config, &ConfigOverrides::default(), overrides);
    let run = run_director(&doc.frames, &doc.map, &config)?;
    Ok((run, config))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunSummary {
    pub frames: usize,
    pub focus_changes: usize,
    pub candidate_counts: BTreeMap<EventKind, u64>,
}

impl RunSummary {
    pub fn of(run: &DirectorRun) -> Self {
        RunSummary {
            frames: run.samples.len(),
            focus_changes: run.focus_changes.len(),
            candidate_counts: run.candidate_counts.clone(),
        }
    }
}

impl fmt::Display for RunSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "frames processed: {}", self.frames)?;
        writeln!(f, "focus changes: {}", self.focus_changes)?;
        writeln!(f, "candidates:")?;
        for kind in EventKind::ALL {
            let n = self.candidate_counts.get(&kind).copied().unwrap_or(0);
            writeln!(f, "  {kind}: {n}")?;
        }
        Ok(())
    }
}
