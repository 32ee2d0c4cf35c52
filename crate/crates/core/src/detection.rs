//! Per-frame scan that turns a [`TraceFrame`] into watchable [`EventCandidate`]s.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::config::DirectorConfig;
use crate::model::{
    DiscreteEventKind, FrameTime, MapInfo, MapPos, PlayerId, TraceFrame, UnitClass, UnitId,
    UnitSnapshot,
};

/// What kind of moment a candidate represents. Each kind has a fixed priority.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EventKind {
    UnderAttack,
    Attacking,
    ScoutNearEnemy,
    ScoutFar,
    Drop,
    ArmyCluster,
    UnitCreated,
}

impl EventKind {
    pub const ALL: [EventKind; 7] = [
        EventKind::UnderAttack,
        EventKind::Attacking,
        EventKind::ScoutNearEnemy,
        EventKind::ScoutFar,
        EventKind::Drop,
        EventKind::ArmyCluster,
        EventKind::UnitCreated,
    ];

    pub fn priority(self) -> u32 {
        match self {
            EventKind::UnderAttack | EventKind::Attacking => 3,
            EventKind::ScoutNearEnemy | EventKind::Drop => 2,
            EventKind::ArmyCluster | EventKind::UnitCreated => 1,
            EventKind::ScoutFar => 0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            EventKind::UnderAttack => "under_attack",
            EventKind::Attacking => "attacking",
            EventKind::ScoutNearEnemy => "scout_near_enemy",
            EventKind::ScoutFar => "scout_far",
            EventKind::Drop => "drop",
            EventKind::ArmyCluster => "army_cluster",
            EventKind::UnitCreated => "unit_created",
        }
    }
}

impl fmt::Display for EventKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EventKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        EventKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown event kind {s:?}"))
    }
}

/// What the camera should look at: a live unit or a fixed spot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FocusTarget {
    Unit(UnitId),
    Position(MapPos),
}

impl fmt::Display for FocusTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FocusTarget::Unit(id) => write!(f, "unit:{id}"),
            FocusTarget::Position(p) => write!(f, "pos:{},{}", p.x, p.y),
        }
    }
}

impl FromStr for FocusTarget {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if let Some(id) = s.strip_prefix("unit:") {
            let id: u32 = id.parse().map_err(|_| format!("bad unit id in {s:?}"))?;
            return Ok(FocusTarget::Unit(UnitId(id)));
        }
        if let Some(rest) = s.strip_prefix("pos:") {
            let (x, y) = rest
                .split_once(',')
                .ok_or_else(|| format!("bad position {s:?}"))?;
            let x: f64 = x.parse().map_err(|_| format!("bad x in {s:?}"))?;
            let y: f64 = y.parse().map_err(|_| format!("bad y in {s:?}"))?;
            if !(x.is_finite() && y.is_finite()) {
                return Err(format!("non-finite position {s:?}"));
            }
            return Ok(FocusTarget::Position(MapPos::new(x, y)));
        }
        Err(format!("unknown focus target {s:?}"))
    }
}

/// A watchable moment found in one frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EventCandidate {
    pub kind: EventKind,
    pub priority: u32,
    pub target: FocusTarget,
    pub frame: FrameTime,
}

impl EventCandidate {
    pub fn new(kind: EventKind, target: FocusTarget, frame: FrameTime) -> Self {
        EventCandidate {
            kind,
            priority: kind.priority(),
            target,
            frame,
        }
    }
}

const NON_ARMY: UnitClass = UnitClass::WORKER
    .union(UnitClass::STRUCTURE)
    .union(UnitClass::LARVA)
    .union(UnitClass::OVERLORD)
    .union(UnitClass::SPIDER_MINE);

/// Workers, structures, larvae, overlords and spider mines are not army.
/// Transports without any of those flags are.
pub fn is_army_unit(u: &UnitSnapshot) -> bool {
    !u.unit_class.intersects(NON_ARMY)
}

/// A worker away from its own main base before the scouting cutoff.
pub fn is_scouting_worker(
    u: &UnitSnapshot,
    frame: FrameTime,
    map: &MapInfo,
    c: &DirectorConfig,
) -> bool {
    if !u.is(UnitClass::WORKER) || frame >= c.scout_frame_cutoff {
        return false;
    }
    match map.own_start(u.owner) {
        Some(home) => u.pos.distance(home) > c.own_base_radius_px,
        None => true,
    }
}

/// Within `near_base_radius_px` (inclusive) of any start location other than the owner's own.
pub fn near_potential_enemy_base(
    pos: MapPos,
    owner: PlayerId,
    map: &MapInfo,
    c: &DirectorConfig,
) -> bool {
    map.start_locations
        .iter()
        .filter(|s| s.owner != Some(owner))
        .any(|s| pos.distance(s.pos) <= c.near_base_radius_px)
}

/// A connected group of army units.
#[derive(Debug, Clone, PartialEq)]
pub struct Cluster {
    pub centroid: MapPos,
    pub member_count: usize,
    /// Member ids, ascending.
    pub members: Vec<UnitId>,
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

/// Single-linkage clustering of army units: units within `cluster_radius_px`
/// of each other are linked, and every connected component with at least
/// `cluster_min_units` members is a cluster.
///
/// Sorted by member count descending, then centroid x, then centroid y.
pub fn detect_clusters(units: &[UnitSnapshot], c: &DirectorConfig) -> Vec<Cluster> {
    let army: Vec<&UnitSnapshot> = units.iter().filter(|u| is_army_unit(u)).collect();
    let mut parent: Vec<usize> = (0..army.len()).collect();
    for i in 0..army.len() {
        for j in (i + 1)..army.len() {
            if army[i].pos.distance(army[j].pos) <= c.cluster_radius_px {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }

    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut root_slot = vec![usize::MAX; army.len()];
    for i in 0..army.len() {
        let r = find(&mut parent, i);
        if root_slot[r] == usize::MAX {
            root_slot[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[root_slot[r]].push(i);
    }

    let mut clusters: Vec<Cluster> = groups
        .into_iter()
        .filter(|g| g.len() >= c.cluster_min_units as usize)
        .map(|mut g| {
            // Sum in id order so the centroid does not depend on input order.
            g.sort_by_key(|&i| army[i].unit_id);
            let n = g.len() as f64;
            let (sx, sy) = g.iter().fold((0.0, 0.0), |(sx, sy), &i| {
                (sx + army[i].pos.x, sy + army[i].pos.y)
            });
            let mut members: Vec<UnitId> = g.iter().map(|&i| army[i].unit_id).collect();
            members.sort();
            Cluster {
                centroid: MapPos::new(sx / n, sy / n),
                member_count: g.len(),
                members,
            }
        })
        .collect();
    clusters.sort_by(|a, b| {
        b.member_count
            .cmp(&a.member_count)
            .then_with(|| a.centroid.x.total_cmp(&b.centroid.x))
            .then_with(|| a.centroid.y.total_cmp(&b.centroid.y))
    });
    clusters
}

fn by_id(a: &&UnitSnapshot, b: &&UnitSnapshot) -> Ordering {
    a.unit_id.cmp(&b.unit_id)
}

/// All candidates of one frame, in canonical order: under_attack, attacking,
/// drop, scouts, army clusters, unit_created. Ascending unit id within each
/// category.
pub fn detect_events(f: &TraceFrame, map: &MapInfo, c: &DirectorConfig) -> Vec<EventCandidate> {
    let mut units: Vec<&UnitSnapshot> = f.units.iter().collect();
    units.sort_by(by_id);
    let now = f.frame;
    let unit_event =
        |kind, u: &UnitSnapshot| EventCandidate::new(kind, FocusTarget::Unit(u.unit_id), now);

    let mut out = Vec::new();
    out.extend(
        units
            .iter()
            .filter(|u| u.is_under_attack)
            .map(|u| unit_event(EventKind::UnderAttack, u)),
    );
    out.extend(
        units
            .iter()
            .filter(|u| u.is_attacking)
            .map(|u| unit_event(EventKind::Attacking, u)),
    );
    out.extend(
        units
            .iter()
            .filter(|u| {
                u.is(UnitClass::TRANSPORT)
                    && u.cargo_count > 0
                    && near_potential_enemy_base(u.pos, u.owner, map, c)
            })
            .map(|u| unit_event(EventKind::Drop, u)),
    );
    out.extend(
        units
            .iter()
            .filter(|u| is_scouting_worker(u, now, map, c))
            .map(|u| {
                let kind = if near_potential_enemy_base(u.pos, u.owner, map, c) {
                    EventKind::ScoutNearEnemy
                } else {
                    EventKind::ScoutFar
                };
                unit_event(kind, u)
            }),
    );
    out.extend(detect_clusters(&f.units, c).into_iter().map(|cl| {
        EventCandidate::new(
            EventKind::ArmyCluster,
            FocusTarget::Position(cl.centroid),
            now,
        )
    }));

    let mut created: Vec<UnitId> = f
        .events
        .iter()
        .filter(|e| e.kind == DiscreteEventKind::UnitCreated)
        .map(|e| e.unit_id)
        .collect();
    created.sort();
    out.extend(
        created
            .into_iter()
            .map(|id| EventCandidate::new(EventKind::UnitCreated, FocusTarget::Unit(id), now)),
    );
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{DiscreteEvent, StartLocation};
    use proptest::prelude::*;
    use std::collections::{BTreeSet, VecDeque};

    fn map() -> MapInfo {
        MapInfo::two_player(2048, 2048)
    }

    fn cfg() -> DirectorConfig {
        DirectorConfig::default()
    }

    const HOME: MapPos = MapPos::new(256.0, 256.0);
    const ENEMY: MapPos = MapPos::new(1792.0, 1792.0);

    #[test]
    fn priority_table() {
        let table: Vec<(EventKind, u32)> =
            EventKind::ALL.iter().map(|k| (*k, k.priority())).collect();
        assert_eq!(
            table,
            vec![
                (EventKind::UnderAttack, 3),
                (EventKind::Attacking, 3),
                (EventKind::ScoutNearEnemy, 2),
                (EventKind::ScoutFar, 0),
                (EventKind::Drop, 2),
                (EventKind::ArmyCluster, 1),
                (EventKind::UnitCreated, 1),
            ]
        );
        for k in EventKind::ALL {
            assert_eq!(k.name().parse::<EventKind>(), Ok(k));
        }
    }

    #[test]
    fn focus_target_text() {
        let t = FocusTarget::Position(MapPos::new(500.5, 600.0));
        assert_eq!(t.to_string(), "pos:500.5,600");
        assert_eq!("pos:500.5,600".parse::<FocusTarget>(), Ok(t));
        assert_eq!(
            "unit:17".parse::<FocusTarget>(),
            Ok(FocusTarget::Unit(UnitId(17)))
        );
        assert!("pos:NaN,1".parse::<FocusTarget>().is_err());
        assert!("tile:1".parse::<FocusTarget>().is_err());
    }

    #[test]
    fn army_classification() {
        let u = UnitSnapshot::new(1, 0, HOME);
        assert!(is_army_unit(&u));
        for c in [
            UnitClass::WORKER,
            UnitClass::STRUCTURE,
            UnitClass::LARVA,
            UnitClass::OVERLORD,
            UnitClass::SPIDER_MINE,
        ] {
            assert!(!is_army_unit(&u.clone().with_class(c)), "{c:?}");
        }
        assert!(is_army_unit(&u.clone().with_class(UnitClass::TRANSPORT)));
        assert!(!is_army_unit(
            &u.with_class(UnitClass::TRANSPORT | UnitClass::OVERLORD)
        ));
    }

    #[test]
    fn scouting_worker_rules() {
        let (m, c) = (map(), cfg());
        let home = UnitSnapshot::new(1, 0, HOME).with_class(UnitClass::WORKER);
        assert!(!is_scouting_worker(&home, FrameTime(100), &m, &c));

        // 1000 px due east of home.
        let away =
            UnitSnapshot::new(1, 0, MapPos::new(1256.0, 256.0)).with_class(UnitClass::WORKER);
        assert!(!is_scouting_worker(&away, FrameTime(8000), &m, &c));
        assert!(!is_scouting_worker(&away, FrameTime(7500), &m, &c));
        assert!(is_scouting_worker(&away, FrameTime(7499), &m, &c));

        // Not a worker.
        let marine = UnitSnapshot::new(1, 0, MapPos::new(1256.0, 256.0));
        assert!(!is_scouting_worker(&marine, FrameTime(10), &m, &c));

        // Exactly on the own-base radius is still home (strictly greater leaves).
        let edge = UnitSnapshot::new(1, 0, MapPos::new(256.0 + 320.0, 256.0))
            .with_class(UnitClass::WORKER);
        assert!(!is_scouting_worker(&edge, FrameTime(10), &m, &c));
    }

    #[test]
    fn enemy_base_proximity() {
        let (m, c) = (map(), cfg());
        assert!(near_potential_enemy_base(ENEMY, PlayerId(0), &m, &c));
        assert!(!near_potential_enemy_base(HOME, PlayerId(0), &m, &c));
        assert!(near_potential_enemy_base(HOME, PlayerId(1), &m, &c));

        // 3-4-5 triangle scaled by 64: (192, 256) off the enemy start is exactly 320 px.
        let edge = MapPos::new(1792.0 - 192.0, 1792.0 - 256.0);
        assert_eq!(edge.distance(ENEMY), 320.0);
        assert!(near_potential_enemy_base(edge, PlayerId(0), &m, &c));
        let past = MapPos::new(1792.0 - 192.0, 1792.0 - 256.5);
        assert!(!near_potential_enemy_base(past, PlayerId(0), &m, &c));

        // Unowned starts count as potential enemy bases for everybody.
        let mut m3 = map();
        m3.start_locations.push(StartLocation {
            owner: None,
            pos: MapPos::new(256.0, 1792.0),
        });
        assert!(near_potential_enemy_base(
            MapPos::new(256.0, 1792.0),
            PlayerId(0),
            &m3,
            &c
        ));
        assert!(near_potential_enemy_base(
            MapPos::new(256.0, 1792.0),
            PlayerId(1),
            &m3,
            &c
        ));
    }

    fn army_at(id: u32, x: f64, y: f64) -> UnitSnapshot {
        UnitSnapshot::new(id, 0, MapPos::new(x, y))
    }

    #[test]
    fn co_located_cluster_threshold() {
        let c = cfg();
        let six: Vec<_> = (1..=6).map(|i| army_at(i, 700.0, 900.0)).collect();
        let got = detect_clusters(&six, &c);
        assert_eq!(got.len(), 1);
        assert_eq!(got[0].centroid, MapPos::new(700.0, 900.0));
        assert_eq!(got[0].member_count, 6);

        assert!(detect_clusters(&six[..5], &c).is_empty());
    }

    /// Flood fill over the "within radius" relation; independent of the union-find path.
    fn oracle_components(units: &[UnitSnapshot], c: &DirectorConfig) -> BTreeSet<Vec<u32>> {
        let army: Vec<&UnitSnapshot> = units.iter().filter(|u| is_army_unit(u)).collect();
        let mut seen = vec![false; army.len()];
        let mut out = BTreeSet::new();
        for start in 0..army.len() {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut queue = VecDeque::from([start]);
            let mut comp = Vec::new();
            while let Some(i) = queue.pop_front() {
                comp.push(army[i].unit_id.0);
                for j in 0..army.len() {
                    if !seen[j] && army[i].pos.distance(army[j].pos) <= c.cluster_radius_px {
                        seen[j] = true;
                        queue.push_back(j);
                    }
                }
            }
            if comp.len() >= c.cluster_min_units as usize {
                comp.sort();
                out.insert(comp);
            }
        }
        out
    }

    #[test]
    fn two_separated_groups() {
        let c = cfg();
        // Group A: six units on a 40 px ring around (400, 400); group B mirrors it at (1600, 1200).
        let offsets = [
            (0.0, 0.0),
            (40.0, 0.0),
            (-40.0, 0.0),
            (0.0, 40.0),
            (0.0, -40.0),
            (20.0, 20.0),
        ];
        let mut units = Vec::new();
        for (i, (dx, dy)) in offsets.iter().enumerate() {
            units.push(army_at(i as u32 + 1, 400.0 + dx, 400.0 + dy));
            units.push(army_at(i as u32 + 101, 1600.0 + dx, 1200.0 + dy));
        }
        let got = detect_clusters(&units, &c);
        let got_sets: BTreeSet<Vec<u32>> = got
            .iter()
            .map(|cl| cl.members.iter().map(|u| u.0).collect())
            .collect();
        assert_eq!(got_sets, oracle_components(&units, &c));
        assert_eq!(got.len(), 2);
        // Equal sizes: smaller centroid x first. Offsets sum to (20, 20) over six units.
        let shift = 20.0 / 6.0;
        assert!((got[0].centroid.x - (400.0 + shift)).abs() < 1e-9);
        assert!((got[0].centroid.y - (400.0 + shift)).abs() < 1e-9);
        assert!((got[1].centroid.x - (1600.0 + shift)).abs() < 1e-9);
        assert!((got[1].centroid.y - (1200.0 + shift)).abs() < 1e-9);
    }

    #[test]
    fn chain_links_transitively() {
        let c = cfg();
        // 120 px steps: each neighbour linked, ends are 600 px apart.
        let units: Vec<_> = (0..6)
            .map(|i| army_at(i + 1, 100.0 + 120.0 * i as f64, 500.0))
            .collect();
        assert_eq!(detect_clusters(&units, &c).len(), 1);
    }

    #[test]
    fn workers_never_cluster() {
        let c = cfg();
        let units: Vec<_> = (1..=10)
            .map(|i| army_at(i, 300.0, 300.0).with_class(UnitClass::WORKER))
            .collect();
        assert!(detect_clusters(&units, &c).is_empty());
    }

    #[test]
    fn single_under_attack() {
        let mut f = TraceFrame::new(5);
        f.units
            .push(UnitSnapshot::new(3, 0, MapPos::new(900.0, 900.0)).under_attack(true));
        let got = detect_events(&f, &map(), &cfg());
        assert_eq!(
            got,
            vec![EventCandidate {
                kind: EventKind::UnderAttack,
                priority: 3,
                target: FocusTarget::Unit(UnitId(3)),
                frame: FrameTime(5),
            }]
        );
    }

    #[test]
    fn loaded_transport_at_enemy_start_is_a_drop() {
        let mut f = TraceFrame::new(0);
        f.units.push(
            UnitSnapshot::new(9, 0, ENEMY)
                .with_class(UnitClass::TRANSPORT)
                .with_cargo(2),
        );
        let got = detect_events(&f, &map(), &cfg());
        assert_eq!(got.len(), 1);
        assert_eq!((got[0].kind, got[0].priority), (EventKind::Drop, 2));

        f.units[0].cargo_count = 0;
        assert!(detect_events(&f, &map(), &cfg()).is_empty());
    }

    #[test]
    fn empty_frame() {
        assert!(detect_events(&TraceFrame::new(0), &map(), &cfg()).is_empty());
    }

    #[test]
    fn cluster_precedes_creation() {
        let mut f = TraceFrame::new(12);
        for i in 1..=8 {
            f.units.push(army_at(i, 1000.0, 1000.0));
        }
        f.units.push(army_at(20, 1500.0, 300.0));
        f.events
            .push(DiscreteEvent::created(20, 0, MapPos::new(1500.0, 300.0)));
        let got = detect_events(&f, &map(), &cfg());
        let kinds: Vec<_> = got.iter().map(|e| (e.kind, e.priority)).collect();
        assert_eq!(
            kinds,
            vec![(EventKind::ArmyCluster, 1), (EventKind::UnitCreated, 1)]
        );
        assert_eq!(
            got[0].target,
            FocusTarget::Position(MapPos::new(1000.0, 1000.0))
        );
    }

    #[test]
    fn canonical_category_and_id_order() {
        let mut f = TraceFrame::new(100);
        f.units.push(
            UnitSnapshot::new(7, 0, MapPos::new(900.0, 900.0))
                .under_attack(true)
                .attacking(true),
        );
        f.units
            .push(UnitSnapshot::new(2, 1, MapPos::new(950.0, 900.0)).under_attack(true));
        f.units.push(
            UnitSnapshot::new(5, 0, MapPos::new(1256.0, 256.0)).with_class(UnitClass::WORKER),
        );
        f.units
            .push(UnitSnapshot::new(4, 0, ENEMY).with_class(UnitClass::WORKER));
        let got: Vec<_> = detect_events(&f, &map(), &cfg())
            .into_iter()
            .map(|e| (e.kind, e.target))
            .collect();
        let unit = |i| FocusTarget::Unit(UnitId(i));
        assert_eq!(
            got,
            vec![
                (EventKind::UnderAttack, unit(2)),
                (EventKind::UnderAttack, unit(7)),
                (EventKind::Attacking, unit(7)),
                (EventKind::ScoutNearEnemy, unit(4)),
                (EventKind::ScoutFar, unit(5)),
            ]
        );
    }

    fn arb_unit() -> impl Strategy<Value = (u8, f64, f64, u8, u32, bool, bool)> {
        (
            0u8..2,
            0.0f64..2048.0,
            0.0f64..2048.0,
            0u8..64,
            0u32..3,
            any::<bool>(),
            any::<bool>(),
        )
    }

    fn arb_frame() -> impl Strategy<Value = TraceFrame> {
        (
            0u64..10_000,
            prop::collection::vec(arb_unit(), 0..30),
            any::<bool>(),
        )
            .prop_map(|(t, raw, clump)| {
                let mut f = TraceFrame::new(t);
                for (i, (owner, x, y, bits, cargo, att, under)) in raw.into_iter().enumerate() {
                    let mut class = UnitClass::from_bits_truncate(bits);
                    if class.contains(UnitClass::LARVA) {
                        class.remove(UnitClass::TRANSPORT);
                    }
                    let cargo = if class.contains(UnitClass::TRANSPORT) {
                        cargo
                    } else {
                        0
                    };
                    // Pull half the units into a tight patch so clusters actually form.
                    let pos = if clump && i % 2 == 0 {
                        MapPos::new(1000.0 + x / 40.0, 1000.0 + y / 40.0)
                    } else {
                        MapPos::new(x, y)
                    };
                    f.units.push(UnitSnapshot {
                        unit_id: UnitId(i as u32 + 1),
                        owner: PlayerId(owner),
                        pos,
                        unit_class: class,
                        cargo_count: cargo,
                        is_attacking: att,
                        is_under_attack: under,
                    });
                    if i % 7 == 3 {
                        f.events
                            .push(DiscreteEvent::created(i as u32 + 1, owner, pos));
                    }
                }
                f
            })
    }

    proptest! {
        #[test]
        fn candidate_priorities_match_kind(f in arb_frame()) {
            for e in detect_events(&f, &map(), &cfg()) {
                prop_assert_eq!(e.priority, e.kind.priority());
                prop_assert_eq!(e.frame, f.frame);
            }
        }

        #[test]
        fn clusters_only_contain_army(f in arb_frame()) {
            let c = cfg();
            let clusters = detect_clusters(&f.units, &c);
            for cl in &clusters {
                prop_assert!(cl.member_count >= c.cluster_min_units as usize);
                for id in &cl.members {
                    prop_assert!(is_army_unit(f.unit(*id).unwrap()));
                }
            }
            let got: BTreeSet<Vec<u32>> =
                clusters.iter().map(|cl| cl.members.iter().map(|u| u.0).collect()).collect();
            prop_assert_eq!(got, oracle_components(&f.units, &c));
        }

        #[test]
        fn scout_cutoff_and_cargo(f in arb_frame()) {
            let got = detect_events(&f, &map(), &cfg());
            if f.frame.0 >= 7500 {
                prop_assert!(got.iter().all(|e| !matches!(e.kind, EventKind::ScoutFar | EventKind::ScoutNearEnemy)));
            }
            for e in got.iter().filter(|e| e.kind == EventKind::Drop) {
                let FocusTarget::Unit(id) = e.target else { panic!("drop targets a unit") };
                prop_assert!(f.unit(id).unwrap().cargo_count > 0);
            }
        }

        #[test]
        fn detection_ignores_unit_order(f in arb_frame()) {
            let mut shuffled = f.clone();
            shuffled.units.reverse();
            shuffled.events.reverse();
            prop_assert_eq!(detect_events(&f, &map(), &cfg()), detect_events(&shuffled, &map(), &cfg()));
        }
    }
}
