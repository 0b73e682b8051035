//! Resource-allocation schemes and their interference relations.

mod allocate;
mod neighbors;

use std::fmt;
use std::ops::Range;
use std::str::FromStr;

pub use allocate::{
    allocate, allocate_proposed, allocate_reuse1, allocate_reuse3, allocate_sfr, AllocationPlan,
    Assignment, SfrState,
};
pub use neighbors::{build_neighbor_matrix, NeighborMatrix};

use crate::error::{Result, SimError};
use crate::geometry::Label;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scheme {
    Reuse1,
    Reuse3,
    Sfr,
    ProposedNoRn,
    ProposedRn,
}

impl Scheme {
    pub const ALL: [Scheme; 5] = [
        Scheme::Reuse1,
        Scheme::Reuse3,
        Scheme::Sfr,
        Scheme::ProposedNoRn,
        Scheme::ProposedRn,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::Reuse1 => "reuse1",
            Scheme::Reuse3 => "reuse3",
            Scheme::Sfr => "sfr",
            Scheme::ProposedNoRn => "proposed_no_rn",
            Scheme::ProposedRn => "proposed_rn",
        }
    }

    pub fn is_proposed(self) -> bool {
        matches!(self, Scheme::ProposedNoRn | Scheme::ProposedRn)
    }

    pub fn uses_relays(self) -> bool {
        self == Scheme::ProposedRn
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = SimError;

    fn from_str(s: &str) -> Result<Self> {
        Scheme::ALL
            .into_iter()
            .find(|sc| sc.name() == s.trim())
            .ok_or_else(|| SimError::InvalidParameter(format!("unknown scheme '{}'", s.trim())))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SchemeConfig {
    pub total_bandwidth_hz: f64,
    pub p_enb_dbm: f64,
    pub p_rn_dbm: f64,
    /// Edge-user power of the proposed scheme without relays.
    pub p_high_dbm: f64,
    /// Centre-user power of the proposed scheme without relays.
    pub p_low_dbm: f64,
}

impl Default for SchemeConfig {
    fn default() -> Self {
        SchemeConfig {
            total_bandwidth_hz: 10e6,
            p_enb_dbm: 43.0,
            p_rn_dbm: 40.0,
            p_high_dbm: 43.0,
            p_low_dbm: 40.0,
        }
    }
}

impl SchemeConfig {
    pub fn num_subchannels(&self, subchannel_bandwidth_hz: f64) -> u32 {
        (self.total_bandwidth_hz / subchannel_bandwidth_hz).floor() as u32
    }

    /// The SFR power reference: the larger of `P^cc` and `P^eu` equals `P^eNB`.
    pub fn sfr_base_power_dbm(&self) -> f64 {
        self.p_enb_dbm
    }

    pub fn validate(&self, subchannel_bandwidth_hz: f64) -> Result<()> {
        if !(self.total_bandwidth_hz > 0.0) {
            return Err(SimError::InvalidParameter(
                "total bandwidth must be positive".into(),
            ));
        }
        if self.num_subchannels(subchannel_bandwidth_hz) < 3 {
            return Err(SimError::InvalidParameter(
                "bandwidth must hold at least three subchannels".into(),
            ));
        }
        let powers = [
            self.p_enb_dbm,
            self.p_rn_dbm,
            self.p_high_dbm,
            self.p_low_dbm,
        ];
        if powers.iter().any(|p| !p.is_finite()) {
            return Err(SimError::InvalidParameter(
                "transmit powers must be finite".into(),
            ));
        }
        Ok(())
    }
}

/// Subchannels of third `k` (0, 1 or 2) of an `n`-subchannel band.
pub fn third(k: usize, n: u32) -> Range<u32> {
    let size = n / 3;
    let k = (k % 3) as u32;
    k * size..(k + 1) * size
}

/// Third used by the non-critical region of `sector` in the proposed schemes.
///
/// Sector `s` takes third `(s + 2) mod 3`, so the non-critical region is
/// orthogonal to its own critical region and to the other two non-critical
/// regions of the cell.
pub fn non_critical_third(sector: usize) -> usize {
    (sector + 2) % 3
}

/// Pool of subchannels a region may draw from under `scheme`.
pub fn region_pool(scheme: Scheme, label: Label, n: u32) -> Range<u32> {
    let s = label.sector();
    match scheme {
        Scheme::Reuse1 => 0..n,
        Scheme::Reuse3 => third(s, n),
        Scheme::Sfr if label.is_critical() => third(s, n),
        Scheme::Sfr => 0..n,
        Scheme::ProposedNoRn | Scheme::ProposedRn if label.is_critical() => third(s, n),
        Scheme::ProposedNoRn | Scheme::ProposedRn => third(non_critical_third(s), n),
    }
}

/// Total bandwidth `W_r` usable in a region under `scheme`.
pub fn region_bandwidth_hz(
    scheme: Scheme,
    label: Label,
    cfg: &SchemeConfig,
    subchannel_bandwidth_hz: f64,
) -> f64 {
    if scheme == Scheme::Reuse1 {
        return cfg.total_bandwidth_hz;
    }
    let n = cfg.num_subchannels(subchannel_bandwidth_hz);
    region_pool(scheme, label, n).len() as f64 * subchannel_bandwidth_hz
}

/// Edge-to-centre power ratio chosen from the edge-to-centre user ratio.
///
/// `1/3` when `alpha_u >= 0.5`, `1` when `0.25 <= alpha_u < 0.5` and `3`
/// below `0.25`. An infinite ratio (no centre users) maps to `1/3`.
pub fn sfr_power_ratio(alpha_u: f64) -> f64 {
    debug_assert!(!(alpha_u < 0.0), "alpha_u must be non-negative");
    if alpha_u >= 0.5 || alpha_u.is_nan() {
        1.0 / 3.0
    } else if alpha_u >= 0.25 {
        1.0
    } else {
        3.0
    }
}
