//! Clover-leaf network layout, region partitioning and user drops.
//!
//! Every cell site is three hexagonal sectors meeting at the eNB. Sector
//! hexagons have circumradius `ISD / 3`, which is the only side length for
//! which neighbouring clover-leaf sites tile the plane. Each sector is split
//! into a non-critical inner hexagon (a homothetic copy anchored at the eNB)
//! and the critical remainder towards the cell edge.

use std::collections::HashMap;
use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::channel::{path_loss_db, ChannelConfig, LinkShadowing};
use crate::error::{Result, SimError};

/// Random stream used for user positions.
pub(crate) const POSITION_STREAM: u64 = 0;

/// Boresight of sector 0, 1, 2 in degrees. Sector 0 faces cell 7, sector 1
/// faces cell 3 and sector 2 faces cell 5.
const BORESIGHT_DEG: [f64; 3] = [330.0, 90.0, 210.0];

/// Axial lattice directions, counterclockwise starting at 30 degrees.
const AXIAL_DIRS: [(i32, i32); 6] = [(1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1)];

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn polar(radius: f64, angle_rad: f64) -> Self {
        Point::new(radius * angle_rad.cos(), radius * angle_rad.sin())
    }

    pub fn distance(&self, other: &Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn add(&self, other: &Point) -> Point {
        Point::new(self.x + other.x, self.y + other.y)
    }

    pub fn sub(&self, other: &Point) -> Point {
        Point::new(self.x - other.x, self.y - other.y)
    }

    pub fn scale(&self, k: f64) -> Point {
        Point::new(self.x * k, self.y * k)
    }
}

/// Region label inside a cell. `A`, `B`, `C` are the critical (edge) regions
/// of sectors 0, 1, 2; `D`, `E`, `F` are the matching non-critical regions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    A,
    B,
    C,
    D,
    E,
    F,
}

impl Label {
    pub const ALL: [Label; 6] = [Label::A, Label::B, Label::C, Label::D, Label::E, Label::F];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Label> {
        Label::ALL.get(i).copied()
    }

    pub fn sector(self) -> usize {
        self.index() % 3
    }

    pub fn criticality(self) -> Criticality {
        if self.index() < 3 {
            Criticality::Critical
        } else {
            Criticality::NonCritical
        }
    }

    pub fn is_critical(self) -> bool {
        self.criticality() == Criticality::Critical
    }

    pub fn for_sector(sector: usize, criticality: Criticality) -> Label {
        match criticality {
            Criticality::Critical => Label::ALL[sector % 3],
            Criticality::NonCritical => Label::ALL[3 + sector % 3],
        }
    }

    pub fn as_char(self) -> char {
        (b'A' + self as u8) as char
    }

    pub fn from_char(c: char) -> Option<Label> {
        match c.to_ascii_uppercase() {
            'A' => Some(Label::A),
            'B' => Some(Label::B),
            'C' => Some(Label::C),
            'D' => Some(Label::D),
            'E' => Some(Label::E),
            'F' => Some(Label::F),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Criticality {
    Critical,
    NonCritical,
}

impl fmt::Display for Criticality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Criticality::Critical => "critical",
            Criticality::NonCritical => "non_critical",
        })
    }
}

/// Region identifier; cells are numbered from 1 (the reference cell).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RegionId {
    pub cell: usize,
    pub label: Label,
}

impl RegionId {
    pub const fn new(cell: usize, label: Label) -> Self {
        RegionId { cell, label }
    }

    /// Dense index `(cell - 1) * 6 + label`.
    pub fn index(self) -> usize {
        (self.cell - 1) * 6 + self.label.index()
    }

    pub fn from_index(i: usize) -> RegionId {
        RegionId::new(i / 6 + 1, Label::ALL[i % 6])
    }

    pub fn sector(self) -> usize {
        self.label.sector()
    }
}

impl fmt::Display for RegionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.cell, self.label.as_char())
    }
}

impl std::str::FromStr for RegionId {
    type Err = SimError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || SimError::InvalidParameter(format!("bad region id '{s}'"));
        let last = s.chars().last().ok_or_else(bad)?;
        let label = Label::from_char(last).ok_or_else(bad)?;
        let cell: usize = s[..s.len() - 1].parse().map_err(|_| bad())?;
        if cell == 0 {
            return Err(bad());
        }
        Ok(RegionId::new(cell, label))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NodeKind {
    Enb,
    Rn,
}

/// A transmitting node: the eNB of a cell or the relay of one sector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NodeRef {
    Enb { cell: usize },
    Rn { cell: usize, sector: usize },
}

impl NodeRef {
    pub fn kind(self) -> NodeKind {
        match self {
            NodeRef::Enb { .. } => NodeKind::Enb,
            NodeRef::Rn { .. } => NodeKind::Rn,
        }
    }

    pub fn cell(self) -> usize {
        match self {
            NodeRef::Enb { cell } | NodeRef::Rn { cell, .. } => cell,
        }
    }
}

impl fmt::Display for NodeRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            NodeRef::Enb { cell } => write!(f, "eNB{cell}"),
            NodeRef::Rn { cell, sector } => write!(f, "R{}{}", cell, Label::ALL[sector].as_char()),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Node {
    pub id: NodeRef,
    pub position: Point,
    pub served_regions: Vec<RegionId>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Region {
    pub id: RegionId,
    pub criticality: Criticality,
    pub polygon: Vec<Point>,
    pub area_km2: f64,
    /// Serving node with relays enabled: the sector RN for critical
    /// regions, the cell eNB otherwise.
    pub serving_node: NodeRef,
}

impl Region {
    pub fn centroid(&self) -> Point {
        polygon_centroid(&self.polygon)
    }

    pub fn contains(&self, p: Point) -> bool {
        point_in_polygon(&self.polygon, p)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CellSite {
    pub index: usize,
    /// Axial lattice coordinate of the site.
    pub lattice: (i32, i32),
    pub enb: Point,
    pub sectors: [Vec<Point>; 3],
    pub relays: [Point; 3],
}

impl CellSite {
    pub fn boresight_rad(sector: usize) -> f64 {
        BORESIGHT_DEG[sector % 3].to_radians()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LayoutParams {
    pub inter_site_distance_km: f64,
    pub tiers: usize,
    /// Linear scale of the non-critical inner hexagon relative to its sector.
    pub inner_scale: f64,
}

impl Default for LayoutParams {
    fn default() -> Self {
        LayoutParams {
            inter_site_distance_km: 1.5,
            tiers: 1,
            inner_scale: FRAC_1_SQRT_2,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NetworkLayout {
    pub inter_site_distance_km: f64,
    pub tiers: usize,
    pub inner_scale: f64,
    pub cell_sites: Vec<CellSite>,
    /// Indexed by [`RegionId::index`].
    pub regions: Vec<Region>,
    lattice_index: HashMap<(i32, i32), usize>,
}

/// Builds the layout with the default inner-region scale.
pub fn build_layout(inter_site_distance_km: f64, tiers: usize) -> Result<NetworkLayout> {
    NetworkLayout::new(LayoutParams {
        inter_site_distance_km,
        tiers,
        ..LayoutParams::default()
    })
}

impl NetworkLayout {
    pub fn new(params: LayoutParams) -> Result<Self> {
        let LayoutParams {
            inter_site_distance_km: isd,
            tiers,
            inner_scale,
        } = params;
        if !(isd.is_finite() && isd > 0.0) {
            return Err(SimError::InvalidParameter(format!(
                "inter_site_distance_km must be positive, got {isd}"
            )));
        }
        if tiers == 0 {
            return Err(SimError::InvalidParameter(
                "tiers must be at least 1".into(),
            ));
        }
        if !(inner_scale > 0.0 && inner_scale < 1.0) {
            return Err(SimError::InvalidParameter(format!(
                "inner_scale must lie in (0, 1), got {inner_scale}"
            )));
        }

        let lattice = lattice_sites(tiers);
        let a1 = Point::polar(isd, PI / 6.0);
        let a2 = Point::polar(isd, PI / 2.0);
        let side = isd / 3.0;

        let mut cell_sites = Vec::with_capacity(lattice.len());
        let mut regions = Vec::with_capacity(lattice.len() * 6);
        let mut lattice_index = HashMap::with_capacity(lattice.len());
        for (i, &(q, r)) in lattice.iter().enumerate() {
            let index = i + 1;
            lattice_index.insert((q, r), index);
            let enb = a1.scale(q as f64).add(&a2.scale(r as f64));
            let sectors: [Vec<Point>; 3] = std::array::from_fn(|s| sector_hexagon(enb, s, side));
            let relays: [Point; 3] = std::array::from_fn(|s| {
                enb.add(&Point::polar(2.0 * side, CellSite::boresight_rad(s)))
            });

            let mut critical = Vec::with_capacity(3);
            let mut inner = Vec::with_capacity(3);
            for (s, hex) in sectors.iter().enumerate() {
                let shrunk: Vec<Point> = hex
                    .iter()
                    .map(|v| enb.add(&v.sub(&enb).scale(inner_scale)))
                    .collect();
                // Outer boundary V1..V5, then the inner hexagon back from V5' to V1'.
                let mut ring: Vec<Point> = hex[1..].to_vec();
                ring.extend(shrunk[1..].iter().rev());
                critical.push(make_region(
                    index,
                    Label::for_sector(s, Criticality::Critical),
                    ring,
                ));
                inner.push(make_region(
                    index,
                    Label::for_sector(s, Criticality::NonCritical),
                    shrunk,
                ));
            }
            regions.extend(critical);
            regions.extend(inner);
            cell_sites.push(CellSite {
                index,
                lattice: (q, r),
                enb,
                sectors,
                relays,
            });
        }

        Ok(NetworkLayout {
            inter_site_distance_km: isd,
            tiers,
            inner_scale,
            cell_sites,
            regions,
            lattice_index,
        })
    }

    pub fn num_cells(&self) -> usize {
        self.cell_sites.len()
    }

    /// Circumradius of a sector hexagon, `ISD / 3`.
    pub fn sector_side_km(&self) -> f64 {
        self.inter_site_distance_km / 3.0
    }

    pub fn cell(&self, index: usize) -> &CellSite {
        &self.cell_sites[index - 1]
    }

    pub fn region(&self, id: RegionId) -> &Region {
        &self.regions[id.index()]
    }

    /// Cell index at an axial lattice coordinate, if it is part of the layout.
    pub fn cell_at_lattice(&self, q: i32, r: i32) -> Option<usize> {
        self.lattice_index.get(&(q, r)).copied()
    }

    pub fn node_position(&self, node: NodeRef) -> Point {
        match node {
            NodeRef::Enb { cell } => self.cell(cell).enb,
            NodeRef::Rn { cell, sector } => self.cell(cell).relays[sector],
        }
    }

    pub fn num_relays(&self) -> usize {
        self.num_cells() * 3
    }

    /// Dense relay index `(cell - 1) * 3 + sector`.
    pub fn relay_index(cell: usize, sector: usize) -> usize {
        (cell - 1) * 3 + sector
    }

    /// All eNBs and RNs with the regions each one serves when relays are enabled.
    pub fn nodes(&self) -> Vec<Node> {
        let mut nodes = Vec::with_capacity(self.num_cells() * 4);
        for site in &self.cell_sites {
            let c = site.index;
            nodes.push(Node {
                id: NodeRef::Enb { cell: c },
                position: site.enb,
                served_regions: [Label::D, Label::E, Label::F]
                    .iter()
                    .map(|&l| RegionId::new(c, l))
                    .collect(),
            });
            for s in 0..3 {
                nodes.push(Node {
                    id: NodeRef::Rn { cell: c, sector: s },
                    position: site.relays[s],
                    served_regions: vec![RegionId::new(
                        c,
                        Label::for_sector(s, Criticality::Critical),
                    )],
                });
            }
        }
        nodes
    }

    /// Region containing `p`. Boundary points go to the lowest (cell, label).
    pub fn region_of(&self, p: Point) -> Option<RegionId> {
        let reach = 2.0 * self.sector_side_km() * (1.0 + 1e-9);
        for site in &self.cell_sites {
            if site.enb.distance(&p) > reach {
                continue;
            }
            for label in Label::ALL {
                let id = RegionId::new(site.index, label);
                if self.region(id).contains(p) {
                    return Some(id);
                }
            }
        }
        None
    }

    /// One line per region: cell, label, criticality, area and vertices.
    pub fn geometry_dump(&self) -> String {
        let mut out = String::from("# cell label criticality area_km2 vertices(x,y km)\n");
        for r in &self.regions {
            out.push_str(&format!(
                "{} {} {} {:.9}",
                r.id.cell,
                r.id.label.as_char(),
                r.criticality,
                r.area_km2
            ));
            for v in &r.polygon {
                out.push_str(&format!(" {:.9},{:.9}", v.x, v.y));
            }
            out.push('\n');
        }
        out
    }
}

fn make_region(cell: usize, label: Label, polygon: Vec<Point>) -> Region {
    let area_km2 = polygon_area(&polygon).abs();
    let sector = label.sector();
    let serving_node = match label.criticality() {
        Criticality::Critical => NodeRef::Rn { cell, sector },
        Criticality::NonCritical => NodeRef::Enb { cell },
    };
    Region {
        id: RegionId::new(cell, label),
        criticality: label.criticality(),
        polygon,
        area_km2,
        serving_node,
    }
}

/// Hexagon of circumradius `side` with one vertex (index 0) on the eNB,
/// pointing along the sector boresight. Vertices are counterclockwise.
fn sector_hexagon(enb: Point, sector: usize, side: f64) -> Vec<Point> {
    let theta = CellSite::boresight_rad(sector);
    let center = enb.add(&Point::polar(side, theta));
    (0..6)
        .map(|m| {
            if m == 0 {
                enb
            } else {
                center.add(&Point::polar(side, theta + PI + m as f64 * PI / 3.0))
            }
        })
        .collect()
}

/// Axial coordinates of all sites up to `tiers` rings, ring by ring,
/// counterclockwise from 30 degrees.
fn lattice_sites(tiers: usize) -> Vec<(i32, i32)> {
    let mut out = vec![(0, 0)];
    for k in 1..=tiers as i32 {
        let (mut q, mut r) = (k * AXIAL_DIRS[0].0, k * AXIAL_DIRS[0].1);
        for side in 0..6 {
            let (dq, dr) = AXIAL_DIRS[(side + 2) % 6];
            for _ in 0..k {
                out.push((q, r));
                q += dq;
                r += dr;
            }
        }
    }
    out
}

pub fn polygon_area(poly: &[Point]) -> f64 {
    let n = poly.len();
    let twice: f64 = (0..n)
        .map(|i| {
            let (a, b) = (poly[i], poly[(i + 1) % n]);
            a.x * b.y - b.x * a.y
        })
        .sum();
    twice / 2.0
}

pub fn polygon_centroid(poly: &[Point]) -> Point {
    let n = poly.len();
    let (mut cx, mut cy, mut twice) = (0.0, 0.0, 0.0);
    for i in 0..n {
        let (a, b) = (poly[i], poly[(i + 1) % n]);
        let cross = a.x * b.y - b.x * a.y;
        twice += cross;
        cx += (a.x + b.x) * cross;
        cy += (a.y + b.y) * cross;
    }
    Point::new(cx / (3.0 * twice), cy / (3.0 * twice))
}

/// Closed point-in-polygon test: points on the boundary are inside.
pub fn point_in_polygon(poly: &[Point], p: Point) -> bool {
    let n = poly.len();
    let mut inside = false;
    for i in 0..n {
        let (a, b) = (poly[i], poly[(i + 1) % n]);
        if on_segment(a, b, p) {
            return true;
        }
        if (a.y > p.y) != (b.y > p.y) {
            let x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if p.x < x {
                inside = !inside;
            }
        }
    }
    inside
}

fn on_segment(a: Point, b: Point, p: Point) -> bool {
    let len = a.distance(&b);
    let eps = 1e-12 * len.max(1.0);
    let cross = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
    if cross.abs() > eps * len {
        return false;
    }
    let dot = (p.x - a.x) * (b.x - a.x) + (p.y - a.y) * (b.y - a.y);
    dot >= -eps * len && dot <= len * len + eps * len
}

#[derive(Clone, Debug, PartialEq)]
pub struct User {
    pub position: Point,
    /// Geometric region containing the position.
    pub region: RegionId,
    pub class: Option<Criticality>,
    /// Serving node under the relay association rule (RN for critical users).
    pub serving_node: Option<NodeRef>,
    /// Estimated SNR from the own eNB; NaN until classified.
    pub estimated_snr_db: f64,
}

impl User {
    pub fn cell(&self) -> usize {
        self.region.cell
    }

    pub fn sector(&self) -> usize {
        self.region.sector()
    }

    pub fn is_critical(&self) -> bool {
        self.class == Some(Criticality::Critical)
    }

    /// Region whose resources the user draws from: the critical or
    /// non-critical region of its sector, according to its class.
    pub fn service_region(&self) -> Option<RegionId> {
        self.class
            .map(|c| RegionId::new(self.cell(), Label::for_sector(self.sector(), c)))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct UserDrop {
    pub users: Vec<User>,
    pub drop_seed: u64,
}

impl UserDrop {
    pub fn len(&self) -> usize {
        self.users.len()
    }

    pub fn is_empty(&self) -> bool {
        self.users.is_empty()
    }

    pub fn is_classified(&self) -> bool {
        self.users.iter().all(|u| u.class.is_some())
    }
}

/// Drops `users_per_sector` users uniformly into every sector of every cell
/// by rejection sampling over the sector's bounding box.
pub fn drop_users(layout: &NetworkLayout, users_per_sector: usize, seed: u64) -> Result<UserDrop> {
    if users_per_sector == 0 {
        return Err(SimError::InvalidParameter(
            "users_per_sector must be at least 1".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(POSITION_STREAM);

    let mut users = Vec::with_capacity(layout.num_cells() * 3 * users_per_sector);
    for site in &layout.cell_sites {
        for (s, hex) in site.sectors.iter().enumerate() {
            let (min, max) = bounding_box(hex);
            let mut placed = 0;
            while placed < users_per_sector {
                let p = Point::new(
                    rng.random_range(min.x..max.x),
                    rng.random_range(min.y..max.y),
                );
                match layout.region_of(p) {
                    Some(id) if id.cell == site.index && id.sector() == s => {
                        users.push(User {
                            position: p,
                            region: id,
                            class: None,
                            serving_node: None,
                            estimated_snr_db: f64::NAN,
                        });
                        placed += 1;
                    }
                    _ => {}
                }
            }
        }
    }
    Ok(UserDrop {
        users,
        drop_seed: seed,
    })
}

fn bounding_box(poly: &[Point]) -> (Point, Point) {
    let mut min = Point::new(f64::INFINITY, f64::INFINITY);
    let mut max = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    for v in poly {
        min.x = min.x.min(v.x);
        min.y = min.y.min(v.y);
        max.x = max.x.max(v.x);
        max.y = max.y.max(v.y);
    }
    (min, max)
}

/// Classifies users by estimated SNR against the system-wide percentile.
///
/// The estimated SNR uses the own-cell eNB at `enb_power_dbm`, the
/// deterministic path loss and the frozen eNB-UE shadowing of `shadowing`,
/// with noise only. The `floor(N * threshold / 100)` users with the lowest
/// SNR (ties broken by user index) are critical and associate with their
/// sector RN; all others associate with their eNB.
pub fn classify_users(
    drop: &UserDrop,
    layout: &NetworkLayout,
    shadowing: &LinkShadowing,
    channel_cfg: &ChannelConfig,
    enb_power_dbm: f64,
    percentile_threshold: f64,
) -> Result<UserDrop> {
    if drop.is_empty() {
        return Err(SimError::InvalidParameter(
            "cannot classify an empty drop".into(),
        ));
    }
    if !(0.0..100.0).contains(&percentile_threshold) {
        return Err(SimError::InvalidParameter(format!(
            "percentile_threshold must lie in [0, 100), got {percentile_threshold}"
        )));
    }
    if shadowing.num_users() != drop.len() {
        return Err(SimError::InvalidParameter(
            "shadowing realization does not match the drop".into(),
        ));
    }
    let noise = channel_cfg.noise_floor_dbm();
    let mut out = drop.clone();
    for (i, u) in out.users.iter_mut().enumerate() {
        let cell = u.cell();
        let d = layout.cell(cell).enb.distance(&u.position);
        let rx = enb_power_dbm - path_loss_db(d) + shadowing.enb_db(i, cell);
        u.estimated_snr_db = rx - noise;
    }

    let mut order: Vec<usize> = (0..out.len()).collect();
    order.sort_by(|&a, &b| {
        out.users[a]
            .estimated_snr_db
            .total_cmp(&out.users[b].estimated_snr_db)
            .then(a.cmp(&b))
    });
    let n_critical = (out.len() as f64 * percentile_threshold / 100.0).floor() as usize;
    for (rank, &i) in order.iter().enumerate() {
        let u = &mut out.users[i];
        let class = if rank < n_critical {
            Criticality::Critical
        } else {
            Criticality::NonCritical
        };
        u.class = Some(class);
        u.serving_node = Some(match class {
            Criticality::Critical => NodeRef::Rn {
                cell: u.cell(),
                sector: u.sector(),
            },
            Criticality::NonCritical => NodeRef::Enb { cell: u.cell() },
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn layout() -> NetworkLayout {
        build_layout(1.5, 1).unwrap()
    }

    #[test]
    fn seven_cells_forty_two_regions() {
        let l = layout();
        assert_eq!(l.num_cells(), 7);
        assert_eq!(l.regions.len(), 42);
        let nodes = l.nodes();
        assert_eq!(
            nodes
                .iter()
                .filter(|n| n.id.kind() == NodeKind::Enb)
                .count(),
            7
        );
        assert_eq!(
            nodes.iter().filter(|n| n.id.kind() == NodeKind::Rn).count(),
            21
        );
        assert_eq!(l.cell(1).enb, Point::new(0.0, 0.0));
    }

    #[test]
    fn first_tier_is_counterclockwise() {
        let l = layout();
        for k in 2..=7 {
            let p = l.cell(k).enb;
            let expected = 30.0 + 60.0 * (k - 2) as f64;
            let angle = p.y.atan2(p.x).to_degrees().rem_euclid(360.0);
            assert!((angle - expected).abs() < 1e-9, "cell {k} at {angle}");
            assert!((p.distance(&Point::default()) - 1.5).abs() < 1e-12);
        }
    }

    #[test]
    fn region_areas_and_labels() {
        let l = layout();
        let side = l.sector_side_km();
        let hex = 1.5 * 3f64.sqrt() * side * side;
        for r in &l.regions {
            assert!((r.area_km2 - polygon_area(&r.polygon).abs()).abs() <= 1e-9 * r.area_km2);
            assert!(
                (r.area_km2 - hex / 2.0).abs() < 1e-9,
                "{} area {}",
                r.id,
                r.area_km2
            );
            assert_eq!(
                r.criticality == Criticality::Critical,
                r.id.label.is_critical()
            );
        }
    }

    #[test]
    fn relays_sit_on_the_sector_edge() {
        let l = layout();
        for site in &l.cell_sites {
            for s in 0..3 {
                let rn = site.relays[s];
                assert!((rn.distance(&site.enb) - 2.0 * l.sector_side_km()).abs() < 1e-12);
                assert!(point_in_polygon(&site.sectors[s], rn));
            }
        }
    }

    #[test]
    fn enb_resolves_to_first_inner_region() {
        let l = layout();
        assert_eq!(
            l.region_of(Point::default()),
            Some(RegionId::new(1, Label::D))
        );
        assert_eq!(l.region_of(Point::new(100.0, 100.0)), None);
    }

    #[test]
    fn centroids_stay_in_their_sector() {
        // the critical ring wraps the inner hexagon, so its centroid falls
        // inside the non-critical region of the same sector
        let l = layout();
        for r in &l.regions {
            let c = r.centroid();
            let found = l.region_of(c).unwrap();
            assert_eq!(found.cell, r.id.cell);
            assert_eq!(found.label.sector(), r.id.label.sector());
            if !r.id.label.is_critical() {
                assert_eq!(found, r.id);
            }
        }
    }

    #[test]
    fn scaling_is_linear() {
        let a = build_layout(1.5, 1).unwrap();
        let b = build_layout(3.0, 1).unwrap();
        for (ra, rb) in a.regions.iter().zip(&b.regions) {
            for (va, vb) in ra.polygon.iter().zip(&rb.polygon) {
                assert!((vb.x - 2.0 * va.x).abs() < 1e-12);
                assert!((vb.y - 2.0 * va.y).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(build_layout(0.0, 1).is_err());
        assert!(build_layout(-1.0, 1).is_err());
        assert!(build_layout(1.5, 0).is_err());
        assert!(drop_users(&layout(), 0, 1).is_err());
    }

    #[test]
    fn second_tier_has_nineteen_cells() {
        let l = build_layout(1.5, 2).unwrap();
        assert_eq!(l.num_cells(), 19);
        assert_eq!(l.regions.len(), 19 * 6);
    }

    #[test]
    fn region_id_parses_and_prints() {
        let id: RegionId = "12E".parse().unwrap();
        assert_eq!(id, RegionId::new(12, Label::E));
        assert_eq!(id.to_string(), "12E");
        assert!("0A".parse::<RegionId>().is_err());
        assert!("3G".parse::<RegionId>().is_err());
    }
}
