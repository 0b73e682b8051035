//! Interfering-neighbor relation between regions.
//!
//! `n[i][j] = 1` means transmissions serving region `j` reach users in
//! region `i`. For the proposed schemes the relation is the enumerated
//! neighbor set of the reference cell, translated to every other cell of the
//! layout by its lattice offset. For reuse-1, reuse-3 and SFR it follows the
//! sector beams: region `j` interferes with region `i` when `i`'s centroid
//! lies inside the 120 degree beam of the eNB sector serving `j` in another
//! cell. Under SFR edge and centre transmissions only reach users of their
//! own class.

use std::f64::consts::PI;
use std::fmt::Write as _;

use super::Scheme;
use crate::geometry::{CellSite, Criticality, Label, NetworkLayout, RegionId};

/// Reference-cell rows without relays: `(row, interferers)`.
const PROPOSED_NO_RN_ROWS: [(&str, [&str; 5]); 6] = [
    ("1A", ["2A", "6A", "7A", "3E", "4E"]),
    ("1B", ["2B", "3B", "4B", "5F", "6F"]),
    ("1C", ["4C", "5C", "6C", "2D", "7D"]),
    ("1D", ["2D", "6D", "7D", "4C", "5C"]),
    ("1E", ["2E", "3E", "4E", "6A", "7A"]),
    ("1F", ["4F", "5F", "6F", "3B", "2B"]),
];

/// Reference-cell rows with relays. Critical interferers are RN-served.
const PROPOSED_RN_ROWS: [(&str, &[&str]); 6] = [
    ("1A", &["3A", "4A", "5A", "3E", "4E"]),
    ("1B", &["5B", "6B", "7B", "5F", "6F"]),
    ("1C", &["2C", "3C", "7C", "2D", "7D"]),
    ("1D", &["2D", "6D", "7D", "1C"]),
    ("1E", &["2E", "3E", "4E", "1A"]),
    ("1F", &["4F", "5F", "6F", "1B"]),
];

/// Axial offset of first-tier cell `k` (1..=7) from the reference cell.
fn tier1_offset(cell: usize) -> (i32, i32) {
    const DIRS: [(i32, i32); 6] = [(1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1)];
    if cell == 1 {
        (0, 0)
    } else {
        DIRS[cell - 2]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NeighborMatrix {
    pub scheme: Scheme,
    size: usize,
    n: Vec<bool>,
}

impl NeighborMatrix {
    fn empty(scheme: Scheme, size: usize) -> Self {
        NeighborMatrix {
            scheme,
            size,
            n: vec![false; size * size],
        }
    }

    fn set(&mut self, i: RegionId, j: RegionId) {
        if i != j {
            self.n[i.index() * self.size + j.index()] = true;
        }
    }

    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    /// Region order of the rows and columns.
    pub fn regions(&self) -> impl Iterator<Item = RegionId> {
        (0..self.size).map(RegionId::from_index)
    }

    /// True when transmissions serving `j` interfere with users in `i`.
    pub fn get(&self, i: RegionId, j: RegionId) -> bool {
        self.get_index(i.index(), j.index())
    }

    pub fn get_index(&self, i: usize, j: usize) -> bool {
        self.n[i * self.size + j]
    }

    /// Regions whose transmissions interfere with `i`.
    pub fn interferers(&self, i: RegionId) -> Vec<RegionId> {
        self.regions().filter(|&j| self.get(i, j)).collect()
    }

    /// Regions that may not share a subchannel with `i`, in either direction.
    pub fn conflicts(&self, i: RegionId) -> Vec<RegionId> {
        self.regions()
            .filter(|&j| self.get(i, j) || self.get(j, i))
            .collect()
    }

    /// `"1A: 2A 6A 7A 3E 4E"`. Interferers of the row's own kind come first;
    /// with relays, critical interferers carry an `R` prefix.
    pub fn listing_row(&self, i: RegionId) -> String {
        let mut same: Vec<RegionId> = Vec::new();
        let mut other: Vec<RegionId> = Vec::new();
        for j in self.interferers(i) {
            if j.label.is_critical() == i.label.is_critical() {
                same.push(j);
            } else {
                other.push(j);
            }
        }
        let mut row = format!("{i}:");
        for j in same.into_iter().chain(other) {
            if self.scheme.uses_relays() && j.label.is_critical() {
                let _ = write!(row, " R{j}");
            } else {
                let _ = write!(row, " {j}");
            }
        }
        row
    }

    pub fn listing(&self) -> String {
        let mut out = String::new();
        for i in self.regions() {
            out.push_str(&self.listing_row(i));
            out.push('\n');
        }
        out
    }
}

pub fn build_neighbor_matrix(layout: &NetworkLayout, scheme: Scheme) -> NeighborMatrix {
    let mut nm = NeighborMatrix::empty(scheme, layout.regions.len());
    match scheme {
        Scheme::ProposedNoRn => {
            let rows: Vec<(&str, Vec<&str>)> = PROPOSED_NO_RN_ROWS
                .iter()
                .map(|(r, js)| (*r, js.to_vec()))
                .collect();
            fill_from_reference_rows(&mut nm, layout, &rows);
        }
        Scheme::ProposedRn => {
            let rows: Vec<(&str, Vec<&str>)> = PROPOSED_RN_ROWS
                .iter()
                .map(|(r, js)| (*r, js.to_vec()))
                .collect();
            fill_from_reference_rows(&mut nm, layout, &rows);
        }
        Scheme::Reuse1 | Scheme::Reuse3 => fill_from_beams(&mut nm, layout, false),
        Scheme::Sfr => fill_from_beams(&mut nm, layout, true),
    }
    nm
}

fn fill_from_reference_rows(
    nm: &mut NeighborMatrix,
    layout: &NetworkLayout,
    rows: &[(&str, Vec<&str>)],
) {
    for (row, interferers) in rows {
        let row: RegionId = row.parse().expect("static table");
        for j in interferers {
            let j: RegionId = j.parse().expect("static table");
            let (dq, dr) = tier1_offset(j.cell);
            for site in &layout.cell_sites {
                let (q, r) = site.lattice;
                if let Some(target) = layout.cell_at_lattice(q + dq, r + dr) {
                    nm.set(
                        RegionId::new(site.index, row.label),
                        RegionId::new(target, j.label),
                    );
                }
            }
        }
    }
}

fn fill_from_beams(nm: &mut NeighborMatrix, layout: &NetworkLayout, same_class_only: bool) {
    for victim in &layout.regions {
        let c = victim.centroid();
        for site in &layout.cell_sites {
            if site.index == victim.id.cell {
                continue;
            }
            let dir = c.sub(&site.enb);
            let bearing = dir.y.atan2(dir.x);
            let sector = (0..3)
                .find(|&s| in_beam(bearing, CellSite::boresight_rad(s)))
                .expect("three sectors cover every bearing");
            for crit in [Criticality::Critical, Criticality::NonCritical] {
                if same_class_only && crit != victim.criticality {
                    continue;
                }
                nm.set(
                    victim.id,
                    RegionId::new(site.index, Label::for_sector(sector, crit)),
                );
            }
        }
    }
}

/// Half-open 120 degree beam `[boresight - 60, boresight + 60)`.
fn in_beam(bearing: f64, boresight: f64) -> bool {
    let off = (bearing - boresight + PI).rem_euclid(2.0 * PI) - PI;
    (-PI / 3.0 - 1e-12..PI / 3.0 - 1e-12).contains(&off)
}
