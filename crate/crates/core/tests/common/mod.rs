//! Independent oracles shared by the integration tests. Nothing here calls
//! the neighbor-matrix or SINR code it is used to check.

#![allow(dead_code)]

use std::collections::HashMap;

use racnsim::channel::LinkShadowing;
use racnsim::geometry::{Label, NetworkLayout, RegionId, UserDrop};
use racnsim::schemes::{AllocationPlan, Scheme};

/// Reference-cell interferer rows, without and with relays.
pub const ROWS_NO_RN: [(&str, &[&str]); 6] = [
    ("1A", &["2A", "6A", "7A", "3E", "4E"]),
    ("1B", &["2B", "3B", "4B", "5F", "6F"]),
    ("1C", &["4C", "5C", "6C", "2D", "7D"]),
    ("1D", &["2D", "6D", "7D", "4C", "5C"]),
    ("1E", &["2E", "3E", "4E", "6A", "7A"]),
    ("1F", &["4F", "5F", "6F", "3B", "2B"]),
];

pub const ROWS_RN: [(&str, &[&str]); 6] = [
    ("1A", &["3A", "4A", "5A", "3E", "4E"]),
    ("1B", &["5B", "6B", "7B", "5F", "6F"]),
    ("1C", &["2C", "3C", "7C", "2D", "7D"]),
    ("1D", &["2D", "6D", "7D", "1C"]),
    ("1E", &["2E", "3E", "4E", "1A"]),
    ("1F", &["4F", "5F", "6F", "1B"]),
];

fn label_of(c: char) -> Label {
    Label::ALL[(c as u8 - b'A') as usize]
}

/// Reference cell whose eNB sits at the same offset from cell 1 as
/// `to` does from `from`.
fn reference_cell_for(layout: &NetworkLayout, from: usize, to: usize) -> Option<usize> {
    let dx = layout.cell(to).enb.x - layout.cell(from).enb.x;
    let dy = layout.cell(to).enb.y - layout.cell(from).enb.y;
    let origin = layout.cell(1).enb;
    (1..=7.min(layout.num_cells())).find(|&k| {
        let e = layout.cell(k).enb;
        ((e.x - origin.x) - dx).abs() < 1e-6 && ((e.y - origin.y) - dy).abs() < 1e-6
    })
}

/// Beam sector (0, 1, 2) of a site that covers bearing `deg`.
fn beam_sector(deg: f64) -> usize {
    // A covers [270, 30), B [30, 150), C [150, 270)
    let a = (deg - 270.0).rem_euclid(360.0);
    (((a + 1e-9) / 120.0).floor() as usize) % 3
}

/// Whether transmissions serving `src` reach users of `victim`.
pub fn reaches(layout: &NetworkLayout, scheme: Scheme, victim: RegionId, src: RegionId) -> bool {
    if victim == src {
        return false;
    }
    match scheme {
        Scheme::Reuse1 | Scheme::Reuse3 | Scheme::Sfr => {
            if victim.cell == src.cell {
                return false;
            }
            if scheme == Scheme::Sfr && victim.label.is_critical() != src.label.is_critical() {
                return false;
            }
            let c = layout.region(victim).centroid();
            let e = layout.cell(src.cell).enb;
            let deg = (c.y - e.y).atan2(c.x - e.x).to_degrees();
            beam_sector(deg) == src.label.sector()
        }
        Scheme::ProposedNoRn | Scheme::ProposedRn => {
            let rows = if scheme == Scheme::ProposedRn {
                &ROWS_RN
            } else {
                &ROWS_NO_RN
            };
            let Some(k) = reference_cell_for(layout, victim.cell, src.cell) else {
                return false;
            };
            let row_label = victim.label.as_char();
            rows.iter()
                .find(|(r, _)| r.ends_with(row_label))
                .map(|(_, js)| {
                    js.iter().any(|j| {
                        let mut ch = j.chars();
                        let cell = ch.next().unwrap().to_digit(10).unwrap() as usize;
                        let label = label_of(ch.next().unwrap());
                        cell == k && label == src.label
                    })
                })
                .unwrap_or(false)
        }
    }
}

fn watts(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

fn loss_db(d_km: f64) -> f64 {
    128.1 + 37.6 * d_km.max(0.01).log10()
}

/// Brute-force SINR: enumerate every transmission in the plan and sum the
/// ones that reach the user's region, in watts.
pub fn brute_force_sinr(
    layout: &NetworkLayout,
    drop: &UserDrop,
    plan: &AllocationPlan,
    shadowing: &LinkShadowing,
    noise_dbm: f64,
    user: usize,
) -> Option<f64> {
    let a = plan.assignments[user]?;
    let me = &drop.users[user];
    let region = me.service_region()?;
    let rx = |tx: usize| {
        let t = plan.assignments[tx].unwrap();
        let d = layout.node_position(t.tx_node).distance(&me.position);
        watts(t.tx_power_dbm - loss_db(d) + shadowing.link_db(user, t.tx_node))
    };
    let mut interference = 0.0;
    for v in 0..drop.len() {
        if v == user {
            continue;
        }
        let Some(b) = plan.assignments[v] else {
            continue;
        };
        if b.subchannel != a.subchannel {
            continue;
        }
        if reaches(
            layout,
            plan.scheme,
            region,
            drop.users[v].service_region().unwrap(),
        ) {
            interference += rx(v);
        }
    }
    Some(rx(user) / (watts(noise_dbm) + interference))
}

/// Every rule a plan must respect, checked pair by pair. Returns a
/// description of each violation.
pub fn plan_violations(
    layout: &NetworkLayout,
    drop: &UserDrop,
    plan: &AllocationPlan,
) -> Vec<String> {
    let mut out = Vec::new();
    let mut by_channel: HashMap<u32, Vec<usize>> = HashMap::new();
    for (u, a) in plan.assignments.iter().enumerate() {
        if let Some(a) = a {
            let region = drop.users[u].service_region().unwrap();
            if !plan.pool(region).contains(&a.subchannel) {
                out.push(format!("user {u} in {region} outside its pool"));
            }
            by_channel.entry(a.subchannel).or_default().push(u);
        }
    }
    for (ch, users) in by_channel {
        for (x, &u) in users.iter().enumerate() {
            for &v in &users[x + 1..] {
                let (ru, rv) = (
                    drop.users[u].service_region().unwrap(),
                    drop.users[v].service_region().unwrap(),
                );
                if ru == rv {
                    out.push(format!("users {u} and {v} share {ch} inside {ru}"));
                } else if !plan.scheme.is_proposed() && ru.cell == rv.cell {
                    out.push(format!(
                        "users {u} and {v} share {ch} inside cell {}",
                        ru.cell
                    ));
                } else if plan.scheme.is_proposed()
                    && (reaches(layout, plan.scheme, ru, rv)
                        || reaches(layout, plan.scheme, rv, ru))
                {
                    out.push(format!(
                        "users {u} ({ru}) and {v} ({rv}) share {ch} across a neighbor edge"
                    ));
                }
            }
        }
    }
    out
}
