#![allow(dead_code)]

use autodirector::{
    ConfigOverrides, DiscreteEvent, DiscreteEventKind, FrameTime, MapInfo, MapPos, PlayerId,
    StartLocation, TraceDocument, TraceFrame, UnitClass, UnitId, UnitSnapshot,
};
use rand::Rng;

/// A random document satisfying every trace invariant.
pub fn random_document<R: Rng>(rng: &mut R) -> TraceDocument {
    let width = rng.gen_range(640..4096u32);
    let height = rng.gen_range(480..4096u32);
    let pos = |rng: &mut R| {
        MapPos::new(
            rng.gen_range(0.0..=width as f64),
            rng.gen_range(0.0..=height as f64),
        )
    };

    let mut start_locations = vec![
        StartLocation {
            owner: Some(PlayerId(0)),
            pos: pos(rng),
        },
        StartLocation {
            owner: Some(PlayerId(1)),
            pos: pos(rng),
        },
    ];
    for _ in 0..rng.gen_range(0..3) {
        start_locations.push(StartLocation {
            owner: None,
            pos: pos(rng),
        });
    }
    let n = start_locations.len();
    for i in (1..n).rev() {
        start_locations.swap(i, rng.gen_range(0..=i));
    }
    let map = MapInfo {
        width_px: width,
        height_px: height,
        start_locations,
    };

    let mut config = ConfigOverrides::default();
    if rng.gen_bool(0.3) {
        config.t_min = Some(rng.gen_range(1..100));
    }
    if rng.gen_bool(0.3) {
        config.move_factor = Some(rng.gen_range(0.0..=1.0));
    }
    if rng.gen_bool(0.2) {
        config.cluster_radius_px = Some(rng.gen_range(1.0..300.0));
    }
    if rng.gen_bool(0.2) {
        config.viewport_width_px = Some(rng.gen_range(1..=width));
    }

    let mut frames = Vec::new();
    let mut t = rng.gen_range(0..50u64);
    for _ in 0..rng.gen_range(0..12) {
        let mut f = TraceFrame::new(t);
        let count = rng.gen_range(0..15u32);
        let mut ids: Vec<u32> = (1..=count * 3).collect();
        for i in (1..ids.len()).rev() {
            ids.swap(i, rng.gen_range(0..=i));
        }
        for &id in ids.iter().take(count as usize) {
            let mut class = UnitClass::from_bits_truncate(rng.gen::<u8>());
            if class.contains(UnitClass::LARVA) {
                class.remove(UnitClass::TRANSPORT);
            }
            let cargo = if class.contains(UnitClass::TRANSPORT) {
                rng.gen_range(0..8)
            } else {
                0
            };
            f.units.push(UnitSnapshot {
                unit_id: UnitId(id),
                owner: PlayerId(rng.gen_range(0..2)),
                pos: pos(rng),
                unit_class: class,
                cargo_count: cargo,
                is_attacking: rng.gen_bool(0.2),
                is_under_attack: rng.gen_bool(0.2),
            });
        }
        for u in f.units.clone() {
            if rng.gen_bool(0.15) {
                f.events.push(DiscreteEvent {
                    kind: DiscreteEventKind::UnitCreated,
                    unit_id: u.unit_id,
                    owner: u.owner,
                    pos: u.pos,
                });
            }
        }
        if rng.gen_bool(0.3) {
            f.events.push(DiscreteEvent {
                kind: DiscreteEventKind::UnitDestroyed,
                unit_id: UnitId(rng.gen_range(1000..2000)),
                owner: PlayerId(rng.gen_range(0..2)),
                pos: pos(rng),
            });
        }
        frames.push(f);
        t += rng.gen_range(1..40);
    }
    TraceDocument {
        map,
        config,
        frames,
    }
}

pub fn frame_times(doc: &TraceDocument) -> Vec<FrameTime> {
    doc.frames.iter().map(|f| f.frame).collect()
}
