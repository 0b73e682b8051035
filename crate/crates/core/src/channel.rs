//! Link budget: urban macro path loss, log-normal shadowing and noise.

use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Result, SimError};
use crate::geometry::NodeRef;

/// Distances below this are clamped before evaluating the path loss.
pub const MIN_DISTANCE_KM: f64 = 0.01;

/// Random stream used for shadowing draws.
pub(crate) const SHADOWING_STREAM: u64 = 1;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChannelConfig {
    pub noise_density_dbm_per_hz: f64,
    pub subchannel_bandwidth_hz: f64,
    pub shadow_sigma_enb_db: f64,
    pub shadow_sigma_rn_db: f64,
}

impl Default for ChannelConfig {
    fn default() -> Self {
        ChannelConfig {
            noise_density_dbm_per_hz: -174.0,
            subchannel_bandwidth_hz: 15_000.0,
            shadow_sigma_enb_db: 8.0,
            shadow_sigma_rn_db: 6.0,
        }
    }
}

impl ChannelConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.subchannel_bandwidth_hz > 0.0) {
            return Err(SimError::InvalidParameter(
                "subchannel bandwidth must be positive".into(),
            ));
        }
        if !(self.shadow_sigma_enb_db >= 0.0 && self.shadow_sigma_rn_db >= 0.0) {
            return Err(SimError::InvalidParameter(
                "shadowing standard deviations must be non-negative".into(),
            ));
        }
        if !self.noise_density_dbm_per_hz.is_finite() {
            return Err(SimError::InvalidParameter(
                "noise density must be finite".into(),
            ));
        }
        Ok(())
    }

    pub fn noise_floor_dbm(&self) -> f64 {
        noise_floor_dbm(self)
    }

    pub fn sigma_db(&self, kind: LinkKind) -> f64 {
        match kind {
            LinkKind::EnbUe => self.shadow_sigma_enb_db,
            LinkKind::RnUe => self.shadow_sigma_rn_db,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LinkKind {
    EnbUe,
    RnUe,
}

impl From<NodeRef> for LinkKind {
    fn from(node: NodeRef) -> Self {
        match node {
            NodeRef::Enb { .. } => LinkKind::EnbUe,
            NodeRef::Rn { .. } => LinkKind::RnUe,
        }
    }
}

/// `128.1 + 37.6 log10(R)` with `R` in km, clamped at [`MIN_DISTANCE_KM`].
pub fn path_loss_db(distance_km: f64) -> f64 {
    let d = if distance_km.is_nan() {
        MIN_DISTANCE_KM
    } else {
        distance_km.max(MIN_DISTANCE_KM)
    };
    128.1 + 37.6 * d.log10()
}

pub fn noise_floor_dbm(cfg: &ChannelConfig) -> f64 {
    cfg.noise_density_dbm_per_hz + 10.0 * cfg.subchannel_bandwidth_hz.log10()
}

pub fn shadowing_db<R: Rng + ?Sized>(kind: LinkKind, cfg: &ChannelConfig, rng: &mut R) -> f64 {
    gaussian_db(cfg.sigma_db(kind), rng)
}

fn gaussian_db<R: Rng + ?Sized>(sigma: f64, rng: &mut R) -> f64 {
    if sigma == 0.0 {
        return 0.0;
    }
    Normal::new(0.0, sigma)
        .expect("sigma validated non-negative")
        .sample(rng)
}

/// Received power in dBm; an out-of-beam link (`in_beam == false`) yields
/// negative infinity, which contributes nothing once converted to milliwatts.
pub fn received_power_dbm(
    tx_power_dbm: f64,
    path_loss_db: f64,
    shadowing_db: f64,
    in_beam: bool,
) -> f64 {
    if in_beam {
        tx_power_dbm - path_loss_db + shadowing_db
    } else {
        f64::NEG_INFINITY
    }
}

pub fn dbm_to_mw(dbm: f64) -> f64 {
    10f64.powf(dbm / 10.0)
}

pub fn mw_to_dbm(mw: f64) -> f64 {
    10.0 * mw.log10()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinkSample {
    pub tx_node: NodeRef,
    pub path_loss_db: f64,
    pub shadowing_db: f64,
    pub in_beam: bool,
}

impl LinkSample {
    pub fn received_power_dbm(&self, tx_power_dbm: f64) -> f64 {
        received_power_dbm(
            tx_power_dbm,
            self.path_loss_db,
            self.shadowing_db,
            self.in_beam,
        )
    }
}

/// Frozen shadowing for every (user, node) link of one drop.
///
/// Draw order is fixed: for each user, one eNB-UE sample per cell followed
/// by one RN-UE sample per relay. All schemes evaluated on a drop read the
/// same realization.
#[derive(Clone, Debug, PartialEq)]
pub struct LinkShadowing {
    num_cells: usize,
    enb: Vec<f64>,
    rn: Vec<f64>,
}

impl LinkShadowing {
    pub fn draw<R: Rng + ?Sized>(
        num_users: usize,
        num_cells: usize,
        cfg: &ChannelConfig,
        rng: &mut R,
    ) -> Self {
        let num_relays = num_cells * 3;
        let mut enb = Vec::with_capacity(num_users * num_cells);
        let mut rn = Vec::with_capacity(num_users * num_relays);
        for _ in 0..num_users {
            for _ in 0..num_cells {
                enb.push(shadowing_db(LinkKind::EnbUe, cfg, rng));
            }
            for _ in 0..num_relays {
                rn.push(shadowing_db(LinkKind::RnUe, cfg, rng));
            }
        }
        LinkShadowing { num_cells, enb, rn }
    }

    /// No shadowing on any link.
    pub fn zero(num_users: usize, num_cells: usize) -> Self {
        LinkShadowing {
            num_cells,
            enb: vec![0.0; num_users * num_cells],
            rn: vec![0.0; num_users * num_cells * 3],
        }
    }

    pub fn num_users(&self) -> usize {
        self.enb.len().checked_div(self.num_cells).unwrap_or(0)
    }

    pub fn enb_db(&self, user: usize, cell: usize) -> f64 {
        self.enb[user * self.num_cells + cell - 1]
    }

    pub fn rn_db(&self, user: usize, cell: usize, sector: usize) -> f64 {
        self.rn[user * self.num_cells * 3 + (cell - 1) * 3 + sector]
    }

    pub fn link_db(&self, user: usize, node: NodeRef) -> f64 {
        match node {
            NodeRef::Enb { cell } => self.enb_db(user, cell),
            NodeRef::Rn { cell, sector } => self.rn_db(user, cell, sector),
        }
    }
}
