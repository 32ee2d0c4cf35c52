//! Deterministic synthetic traces.
//!
//! Every scenario is a scripted timeline. The seed only jitters spawn
//! positions inside each scenario's declared regions, so event timing is
//! the same for every seed.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::config::ConfigOverrides;
use crate::model::{
    DiscreteEvent, FrameTime, MapInfo, MapPos, PlayerId, TraceFrame, UnitClass, UnitId,
    UnitSnapshot,
};
use crate::trace_io::TraceDocument;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scenario {
    Example1,
    Battle,
    ScoutRun,
    DropPlay,
    Minefield,
    OverlordCorner,
    TwoBattles,
    Quiet,
}

impl Scenario {
    pub const ALL: [Scenario; 8] = [
        Scenario::Example1,
        Scenario::Battle,
        Scenario::ScoutRun,
        Scenario::DropPlay,
        Scenario::Minefield,
        Scenario::OverlordCorner,
        Scenario::TwoBattles,
        Scenario::Quiet,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Scenario::Example1 => "example1",
            Scenario::Battle => "battle",
            Scenario::ScoutRun => "scout_run",
            Scenario::DropPlay => "drop_play",
            Scenario::Minefield => "minefield",
            Scenario::OverlordCorner => "overlord_corner",
            Scenario::TwoBattles => "two_battles",
            Scenario::Quiet => "quiet",
        }
    }

    /// A length long enough for the scenario's whole script to play out.
    pub fn default_length(self) -> u64 {
        match self {
            Scenario::Example1 => 300,
            Scenario::ScoutRun => 9000,
            Scenario::DropPlay | Scenario::TwoBattles => 700,
            _ => 400,
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown scenario {given:?}; valid ids: {}", valid_ids())]
pub struct UnknownScenario {
    pub given: String,
}

pub fn valid_ids() -> String {
    Scenario::ALL.map(Scenario::id).join(", ")
}

impl FromStr for Scenario {
    type Err = UnknownScenario;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Scenario::ALL
            .into_iter()
            .find(|k| k.id() == s)
            .ok_or_else(|| UnknownScenario {
                given: s.to_owned(),
            })
    }
}

/// Where the battle scenario fights.
pub fn battle_site(map: &MapInfo) -> MapPos {
    MapPos::new(map.width_px as f64 * 0.4, map.height_px as f64 * 0.4)
}

/// The two sites of the two_battles scenario.
pub fn two_battle_sites(map: &MapInfo) -> [MapPos; 2] {
    let (w, h) = (map.width_px as f64, map.height_px as f64);
    [
        MapPos::new(w * 0.25, h * 0.75),
        MapPos::new(w * 0.75, h * 0.25),
    ]
}

/// Scripted unit ids of the example1 scenario, by event.
pub mod example1_ids {
    /// Created on frame 0.
    pub const E1_CREATED: u32 = 101;
    /// Loaded transport at the enemy start on frame 40 only.
    pub const E2_DROP: u32 = 102;
    /// Scout far from any base on frame 60 only.
    pub const E3_SCOUT: u32 = 103;
    /// Scout far from any base on frame 160 only.
    pub const E4_SCOUT: u32 = 104;
    /// Under attack on frame 220 only.
    pub const E5_UNDER_ATTACK: u32 = 105;
}

/// A unit on a straight line between `from` and `to` over `[depart, arrive]`.
#[derive(Debug, Clone)]
struct Route {
    unit: UnitSnapshot,
    from: MapPos,
    to: MapPos,
    depart: u64,
    arrive: u64,
}

impl Route {
    fn still(unit: UnitSnapshot) -> Self {
        let p = unit.pos;
        Route {
            unit,
            from: p,
            to: p,
            depart: 0,
            arrive: 0,
        }
    }

    fn at(&self, t: u64) -> MapPos {
        if t <= self.depart || self.arrive <= self.depart {
            return if t >= self.arrive { self.to } else { self.from };
        }
        if t >= self.arrive {
            return self.to;
        }
        let s = (t - self.depart) as f64 / (self.arrive - self.depart) as f64;
        MapPos::new(
            self.from.x + s * (self.to.x - self.from.x),
            self.from.y + s * (self.to.y - self.from.y),
        )
    }
}

struct Builder<'a> {
    map: &'a MapInfo,
    rng: ChaCha8Rng,
    next_id: u32,
}

impl<'a> Builder<'a> {
    fn new(map: &'a MapInfo, seed: u64) -> Self {
        Builder {
            map,
            rng: ChaCha8Rng::seed_from_u64(seed),
            next_id: 1,
        }
    }

    fn id(&mut self) -> u32 {
        let id = self.next_id;
        self.next_id += 1;
        id
    }

    /// A point uniformly inside the disc of `radius` around `center`, kept on the map.
    fn jitter(&mut self, center: MapPos, radius: f64) -> MapPos {
        let r = radius * self.rng.gen::<f64>().sqrt();
        let a = self.rng.gen::<f64>() * std::f64::consts::TAU;
        let p = MapPos::new(center.x + r * a.cos(), center.y + r * a.sin());
        MapPos::new(
            p.x.clamp(0.0, self.map.width_px as f64),
            p.y.clamp(0.0, self.map.height_px as f64),
        )
    }

    fn home(&self, p: u8) -> MapPos {
        self.map
            .own_start(PlayerId(p))
            .unwrap_or_else(|| self.map.center())
    }

    /// A main building plus four mining workers per player, all idle inside their base.
    fn bases(&mut self) -> Vec<Route> {
        let mut out = Vec::new();
        for p in 0..PlayerId::COUNT {
            let home = self.home(p);
            let id = self.id();
            out.push(Route::still(
                UnitSnapshot::new(id, p, home).with_class(UnitClass::STRUCTURE),
            ));
            for _ in 0..4 {
                let id = self.id();
                let pos = self.jitter(home, 120.0);
                out.push(Route::still(
                    UnitSnapshot::new(id, p, pos).with_class(UnitClass::WORKER),
                ));
            }
        }
        out
    }

    fn squad(
        &mut self,
        owner: u8,
        site: MapPos,
        count: usize,
        spread: f64,
        class: UnitClass,
    ) -> Vec<Route> {
        (0..count)
            .map(|_| {
                let id = self.id();
                let pos = self.jitter(site, spread);
                Route::still(UnitSnapshot::new(id, owner, pos).with_class(class))
            })
            .collect()
    }
}

fn render_routes(routes: &[Route], t: u64) -> Vec<UnitSnapshot> {
    routes
        .iter()
        .map(|r| {
            let mut u = r.unit.clone();
            u.pos = r.at(t);
            u
        })
        .collect()
}

fn document(map: &MapInfo, frames: Vec<TraceFrame>) -> TraceDocument {
    TraceDocument {
        map: map.clone(),
        config: ConfigOverrides::default(),
        frames,
    }
}

/// Both squads exchange fire from `start` onward.
fn engagement(routes: &[Route], fighters: &[UnitId], t: u64, start: u64) -> Vec<UnitSnapshot> {
    render_routes(routes, t)
        .into_iter()
        .map(|u| {
            let engaged = t >= start && fighters.contains(&u.unit_id);
            u.attacking(engaged).under_attack(engaged)
        })
        .collect()
}

/// Builds the trace for `kind`, frames `0..length`, densely.
pub fn generate_scenario(kind: Scenario, seed: u64, map: &MapInfo, length: u64) -> TraceDocument {
    let mut b = Builder::new(map, seed);
    let frames: Vec<TraceFrame> = match kind {
        Scenario::Quiet => {
            let mut routes = b.bases();
            // A few army units idling far apart: never a cluster.
            for (p, fx, fy) in [(0u8, 0.3, 0.6), (1, 0.6, 0.3), (0, 0.5, 0.5)] {
                let site = MapPos::new(map.width_px as f64 * fx, map.height_px as f64 * fy);
                routes.extend(b.squad(p, site, 2, 30.0, UnitClass::empty()));
            }
            (0..length)
                .map(|t| TraceFrame {
                    frame: FrameTime(t),
                    units: render_routes(&routes, t),
                    events: Vec::new(),
                })
                .collect()
        }

        Scenario::Example1 => {
            use example1_ids::*;
            let mut routes = b.bases();
            let home = b.home(0);
            let enemy = b.home(1);
            let mid = map.center();
            let e1_pos = b.jitter(MapPos::new(home.x + 400.0, home.y + 100.0), 40.0);
            let e5_pos = b.jitter(MapPos::new(mid.x - 300.0, mid.y + 250.0), 40.0);
            let e3_pos = b.jitter(MapPos::new(mid.x + 150.0, mid.y - 250.0), 40.0);
            let e4_pos = b.jitter(MapPos::new(mid.x - 250.0, mid.y - 100.0), 40.0);
            let drop_pos = b.jitter(enemy, 60.0);
            routes.push(Route::still(UnitSnapshot::new(E5_UNDER_ATTACK, 0, e5_pos)));
            (0..length)
                .map(|t| {
                    let mut units = render_routes(&routes, t);
                    let mut events = Vec::new();
                    for u in &mut units {
                        if u.unit_id == UnitId(E5_UNDER_ATTACK) {
                            u.is_under_attack = t == 220;
                        }
                    }
                    units.push(UnitSnapshot::new(E1_CREATED, 0, e1_pos));
                    if t == 0 {
                        events.push(DiscreteEvent::created(E1_CREATED, 0, e1_pos));
                    }
                    if t >= 40 {
                        // Unloads right after arriving.
                        let cargo = if t == 40 { 2 } else { 0 };
                        units.push(
                            UnitSnapshot::new(E2_DROP, 0, drop_pos)
                                .with_class(UnitClass::TRANSPORT)
                                .with_cargo(cargo),
                        );
                    }
                    // The scouts are only visible for one frame each.
                    if t == 60 {
                        units.push(
                            UnitSnapshot::new(E3_SCOUT, 0, e3_pos).with_class(UnitClass::WORKER),
                        );
                    }
                    if t == 160 {
                        units.push(
                            UnitSnapshot::new(E4_SCOUT, 0, e4_pos).with_class(UnitClass::WORKER),
                        );
                    }
                    units.sort_by_key(|u| u.unit_id);
                    TraceFrame {
                        frame: FrameTime(t),
                        units,
                        events,
                    }
                })
                .collect()
        }

        Scenario::Battle => {
            let mut routes = b.bases();
            let site = battle_site(map);
            let start = 0;
            let mut fighters = Vec::new();
            for p in 0..PlayerId::COUNT {
                let squad = b.squad(p, site, 5, 48.0, UnitClass::empty());
                fighters.extend(squad.iter().map(|r| r.unit.unit_id));
                routes.extend(squad);
            }
            (0..length)
                .map(|t| TraceFrame {
                    frame: FrameTime(t),
                    units: engagement(&routes, &fighters, t, start),
                    events: Vec::new(),
                })
                .collect()
        }

        Scenario::TwoBattles => {
            let mut routes = b.bases();
            let sites = two_battle_sites(map);
            let start = 0;
            let mut fighters = Vec::new();
            // Interleave ids (A0, B0, A1, B1, ...) so consecutive ids alternate sites.
            for _ in 0..4 {
                for p in 0..PlayerId::COUNT {
                    for site in sites {
                        let squad = b.squad(p, site, 1, 48.0, UnitClass::empty());
                        fighters.extend(squad.iter().map(|r| r.unit.unit_id));
                        routes.extend(squad);
                    }
                }
            }
            (0..length)
                .map(|t| TraceFrame {
                    frame: FrameTime(t),
                    units: engagement(&routes, &fighters, t, start),
                    events: Vec::new(),
                })
                .collect()
        }

        Scenario::ScoutRun => {
            let mut routes = b.bases();
            let home = b.home(0);
            let enemy = b.home(1);
            let speed = 2.0;
            let travel = (home.distance(enemy) / speed).ceil() as u64;
            // Centre the trip on the scouting cutoff.
            let depart = 7500u64.saturating_sub(travel / 2);
            let id = b.id();
            let from = b.jitter(home, 60.0);
            let to = b.jitter(enemy, 60.0);
            routes.push(Route {
                unit: UnitSnapshot::new(id, 0, from).with_class(UnitClass::WORKER),
                from,
                to,
                depart,
                arrive: depart + travel,
            });
            (0..length)
                .map(|t| TraceFrame {
                    frame: FrameTime(t),
                    units: render_routes(&routes, t),
                    events: Vec::new(),
                })
                .collect()
        }

        Scenario::DropPlay => {
            let mut routes = b.bases();
            let home = b.home(0);
            let enemy = b.home(1);
            let depart = 50;
            let travel = (home.distance(enemy) / 5.5).ceil() as u64;
            let unload = depart + travel + 60;
            let id = b.id();
            let from = b.jitter(home, 40.0);
            let to = b.jitter(enemy, 40.0);
            let transport = Route {
                unit: UnitSnapshot::new(id, 0, from).with_class(UnitClass::TRANSPORT),
                from,
                to,
                depart,
                arrive: depart + travel,
            };
            routes.push(transport);
            (0..length)
                .map(|t| {
                    let mut units = render_routes(&routes, t);
                    if let Some(u) = units.iter_mut().find(|u| u.unit_id == UnitId(id)) {
                        u.cargo_count = if t < unload { 4 } else { 0 };
                    }
                    TraceFrame {
                        frame: FrameTime(t),
                        units,
                        events: Vec::new(),
                    }
                })
                .collect()
        }

        Scenario::Minefield => {
            let mut routes = b.bases();
            let site = map.center();
            // A dense 6x6 grid of mines, 24 px apart, each jittered a little.
            for i in 0..36 {
                let id = b.id();
                let grid = MapPos::new(
                    site.x + 24.0 * ((i % 6) as f64 - 2.5),
                    site.y + 24.0 * ((i / 6) as f64 - 2.5),
                );
                let pos = b.jitter(grid, 6.0);
                routes.push(Route::still(
                    UnitSnapshot::new(id, 1, pos).with_class(UnitClass::SPIDER_MINE),
                ));
            }
            (0..length)
                .map(|t| TraceFrame {
                    frame: FrameTime(t),
                    units: render_routes(&routes, t),
                    events: Vec::new(),
                })
                .collect()
        }

        Scenario::OverlordCorner => {
            let mut routes = b.bases();
            let corner = MapPos::new(64.0, map.height_px as f64 - 64.0);
            routes.extend(b.squad(1, corner, 14, 56.0, UnitClass::OVERLORD));
            (0..length)
                .map(|t| TraceFrame {
                    frame: FrameTime(t),
                    units: render_routes(&routes, t),
                    events: Vec::new(),
                })
                .collect()
        }
    };
    document(map, frames)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::validate_frame;

    fn map() -> MapInfo {
        MapInfo::two_player(2048, 2048)
    }

    #[test]
    fn scenario_ids_parse() {
        for s in Scenario::ALL {
            assert_eq!(s.id().parse::<Scenario>(), Ok(s));
        }
        let err = "zerg_rush".parse::<Scenario>().unwrap_err();
        assert!(err.to_string().contains("example1, battle, scout_run"));
    }

    #[test]
    fn requested_length_and_valid_frames() {
        let m = map();
        for s in Scenario::ALL {
            let doc = generate_scenario(s, 3, &m, 100);
            assert_eq!(doc.frames.len(), 100, "{s}");
            let mut prev = None;
            for f in &doc.frames {
                validate_frame(f, &m, prev).unwrap_or_else(|e| panic!("{s}: {e}"));
                prev = Some(f.frame);
            }
        }
    }

    #[test]
    fn same_seed_same_document() {
        let m = map();
        for s in Scenario::ALL {
            assert_eq!(
                generate_scenario(s, 11, &m, 50),
                generate_scenario(s, 11, &m, 50)
            );
        }
        assert_ne!(
            generate_scenario(Scenario::Battle, 1, &m, 5),
            generate_scenario(Scenario::Battle, 2, &m, 5)
        );
    }

    #[test]
    fn route_interpolation() {
        let r = Route {
            unit: UnitSnapshot::new(1, 0, MapPos::new(0.0, 0.0)),
            from: MapPos::new(0.0, 0.0),
            to: MapPos::new(100.0, 0.0),
            depart: 10,
            arrive: 20,
        };
        assert_eq!(r.at(0), MapPos::new(0.0, 0.0));
        assert_eq!(r.at(15), MapPos::new(50.0, 0.0));
        assert_eq!(r.at(25), MapPos::new(100.0, 0.0));
    }
}
