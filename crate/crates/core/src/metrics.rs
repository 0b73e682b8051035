//! Per-user SINR and the aggregate figures computed from it.
//!
//! Interference is summed in milliwatts. A co-channel transmission counts
//! towards a user's interference only when the neighbor matrix of the
//! active scheme says the transmitter's served region reaches the user's
//! region; directivity is modelled entirely through that relation.

use std::collections::BTreeMap;

use crate::channel::{dbm_to_mw, mw_to_dbm, path_loss_db, ChannelConfig, LinkShadowing};
use crate::error::{Result, SimError};
use crate::geometry::{NetworkLayout, RegionId, UserDrop};
use crate::schemes::{region_bandwidth_hz, AllocationPlan, NeighborMatrix, Scheme, SchemeConfig};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SinrSample {
    pub user: usize,
    /// Region whose resources served the user.
    pub region: RegionId,
    pub scheme: Scheme,
    pub sinr_linear: f64,
    pub sinr_db: f64,
    pub signal_dbm: f64,
    pub interference_plus_noise_dbm: f64,
    pub is_edge: bool,
}

impl SinrSample {
    pub fn spectral_efficiency(&self) -> f64 {
        (1.0 + self.sinr_linear).log2()
    }
}

/// Everything needed to evaluate SINR on one allocated drop.
pub struct SinrContext<'a> {
    layout: &'a NetworkLayout,
    drop: &'a UserDrop,
    plan: &'a AllocationPlan,
    shadowing: &'a LinkShadowing,
    nm: &'a NeighborMatrix,
    noise_mw: f64,
    by_subchannel: Vec<Vec<usize>>,
}

impl<'a> SinrContext<'a> {
    pub fn new(
        layout: &'a NetworkLayout,
        drop: &'a UserDrop,
        plan: &'a AllocationPlan,
        shadowing: &'a LinkShadowing,
        channel_cfg: &ChannelConfig,
        nm: &'a NeighborMatrix,
    ) -> Self {
        let mut by_subchannel = vec![Vec::new(); plan.num_subchannels as usize];
        for (u, a) in plan.assignments.iter().enumerate() {
            if let Some(a) = a {
                by_subchannel[a.subchannel as usize].push(u);
            }
        }
        SinrContext {
            layout,
            drop,
            plan,
            shadowing,
            nm,
            noise_mw: dbm_to_mw(channel_cfg.noise_floor_dbm()),
            by_subchannel,
        }
    }

    /// Power in milliwatts that transmission `tx_user`'s assignment delivers to `rx_user`.
    pub fn link_mw(&self, tx_user: usize, rx_user: usize) -> f64 {
        let a = self.plan.assignments[tx_user].expect("assigned transmitter");
        let pos = self.layout.node_position(a.tx_node);
        let d = pos.distance(&self.drop.users[rx_user].position);
        let shadow = self.shadowing.link_db(rx_user, a.tx_node);
        dbm_to_mw(a.tx_power_dbm - path_loss_db(d) + shadow)
    }

    /// SINR of `user`, or `None` if the user was blocked.
    pub fn sinr(&self, user: usize) -> Option<SinrSample> {
        let a = self.plan.assignments[user]?;
        let u = &self.drop.users[user];
        let region = u.service_region()?;
        let signal_mw = self.link_mw(user, user);
        let interference_mw: f64 = self.by_subchannel[a.subchannel as usize]
            .iter()
            .filter(|&&v| v != user)
            .filter(|&&v| {
                let j = self.drop.users[v]
                    .service_region()
                    .expect("assigned users are classified");
                self.nm.get(region, j)
            })
            .map(|&v| self.link_mw(v, user))
            .sum();
        Some(make_sample(
            user,
            region,
            self.plan.scheme,
            signal_mw,
            self.noise_mw + interference_mw,
            u.is_critical(),
        ))
    }
}

pub(crate) fn make_sample(
    user: usize,
    region: RegionId,
    scheme: Scheme,
    signal_mw: f64,
    interference_plus_noise_mw: f64,
    is_edge: bool,
) -> SinrSample {
    let sinr_linear = signal_mw / interference_plus_noise_mw;
    SinrSample {
        user,
        region,
        scheme,
        sinr_linear,
        sinr_db: 10.0 * sinr_linear.log10(),
        signal_dbm: mw_to_dbm(signal_mw),
        interference_plus_noise_dbm: mw_to_dbm(interference_plus_noise_mw),
        is_edge,
    }
}

/// SINR of one user; builds a throwaway [`SinrContext`].
pub fn compute_sinr(
    user: usize,
    plan: &AllocationPlan,
    drop: &UserDrop,
    layout: &NetworkLayout,
    shadowing: &LinkShadowing,
    channel_cfg: &ChannelConfig,
    nm: &NeighborMatrix,
) -> Option<SinrSample> {
    SinrContext::new(layout, drop, plan, shadowing, channel_cfg, nm).sinr(user)
}

/// Sum of `log2(1 + SINR)` over edge users.
pub fn edge_spectral_efficiency(samples: &[SinrSample]) -> f64 {
    samples
        .iter()
        .filter(|s| s.is_edge)
        .map(SinrSample::spectral_efficiency)
        .sum()
}

/// Sum over regions of the region's throughput per hertz of its bandwidth
/// `W_r` per square kilometre of its area `A_r`.
pub fn area_spectral_efficiency(
    samples: &[SinrSample],
    layout: &NetworkLayout,
    scheme: Scheme,
    scheme_cfg: &SchemeConfig,
    channel_cfg: &ChannelConfig,
) -> Result<f64> {
    let df = channel_cfg.subchannel_bandwidth_hz;
    let mut per_region: BTreeMap<RegionId, f64> = BTreeMap::new();
    for s in samples {
        *per_region.entry(s.region).or_insert(0.0) += df * s.spectral_efficiency();
    }
    let mut total = 0.0;
    for (id, throughput) in per_region {
        let area = layout
            .regions
            .get(id.index())
            .map(|r| r.area_km2)
            .ok_or_else(|| SimError::InvalidLayout(format!("region {id} not in layout")))?;
        if !(area > 0.0) {
            return Err(SimError::InvalidLayout(format!(
                "region {id} has zero area"
            )));
        }
        let w = region_bandwidth_hz(scheme, id.label, scheme_cfg, df);
        if !(w > 0.0) {
            return Err(SimError::InvalidParameter(format!(
                "region {id} has no bandwidth"
            )));
        }
        total += throughput / (w * area);
    }
    Ok(total)
}

/// Empirical CDF: one `(value, fraction <= value)` point per distinct value.
pub fn cdf(samples_db: &[f64]) -> Result<Vec<(f64, f64)>> {
    if samples_db.is_empty() {
        return Err(SimError::EmptyInput);
    }
    let mut sorted = samples_db.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mut out: Vec<(f64, f64)> = Vec::new();
    for (i, &v) in sorted.iter().enumerate() {
        let frac = (i + 1) as f64 / n;
        match out.last_mut() {
            Some(last) if last.0 == v => last.1 = frac,
            _ => out.push((v, frac)),
        }
    }
    Ok(out)
}

/// Fixed-width histogram from the minimum sample; the last bin is closed
/// so the maximum is counted. Returns `(lower bin edge, count)` rows.
pub fn histogram(samples_db: &[f64], bin_width_db: f64) -> Result<Vec<(f64, usize)>> {
    if !(bin_width_db > 0.0) {
        return Err(SimError::InvalidParameter(
            "bin width must be positive".into(),
        ));
    }
    if samples_db.is_empty() {
        return Ok(Vec::new());
    }
    let min = samples_db.iter().copied().fold(f64::INFINITY, f64::min);
    let max = samples_db.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let bins = (((max - min) / bin_width_db).ceil() as usize).max(1);
    let mut counts = vec![0usize; bins];
    for &v in samples_db {
        let b = (((v - min) / bin_width_db).floor() as usize).min(bins - 1);
        counts[b] += 1;
    }
    Ok(counts
        .into_iter()
        .enumerate()
        .map(|(i, c)| (min + i as f64 * bin_width_db, c))
        .collect())
}

/// Quantile with linear interpolation between order statistics.
pub fn quantile(samples: &[f64], p: f64) -> Option<f64> {
    if samples.is_empty() {
        return None;
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let h = (sorted.len() - 1) as f64 * p.clamp(0.0, 1.0);
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    Some(sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo]))
}

/// Figures of one scheme on one drop.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DropMetrics {
    pub seed: u64,
    pub eta_edge: f64,
    pub eta_area: f64,
    pub served: usize,
    pub blocked: usize,
}

/// Samples and figures of one scheme, merged over drops in drop order.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricsReport {
    pub scheme: Scheme,
    pub users_per_sector: usize,
    pub samples: Vec<SinrSample>,
    pub per_drop: Vec<DropMetrics>,
    /// Mean over drops of the edge spectral efficiency sum.
    pub edge_spectral_efficiency: f64,
    /// Mean over drops of the per-edge-user spectral efficiency.
    pub edge_spectral_efficiency_per_user: f64,
    /// Mean over drops of the area spectral efficiency.
    pub area_spectral_efficiency: f64,
    pub blocked_count: usize,
}

impl MetricsReport {
    pub fn new(scheme: Scheme, users_per_sector: usize) -> Self {
        MetricsReport {
            scheme,
            users_per_sector,
            samples: Vec::new(),
            per_drop: Vec::new(),
            edge_spectral_efficiency: 0.0,
            edge_spectral_efficiency_per_user: 0.0,
            area_spectral_efficiency: 0.0,
            blocked_count: 0,
        }
    }

    /// Appends one drop and refreshes the means.
    pub fn push_drop(&mut self, drop: DropMetrics, samples: Vec<SinrSample>) {
        self.blocked_count += drop.blocked;
        self.per_drop.push(drop);
        self.samples.extend(samples);
        let n = self.per_drop.len() as f64;
        self.edge_spectral_efficiency = self.per_drop.iter().map(|d| d.eta_edge).sum::<f64>() / n;
        self.area_spectral_efficiency = self.per_drop.iter().map(|d| d.eta_area).sum::<f64>() / n;
        let edge: Vec<&SinrSample> = self.samples.iter().filter(|s| s.is_edge).collect();
        self.edge_spectral_efficiency_per_user = if edge.is_empty() {
            0.0
        } else {
            edge.iter().map(|s| s.spectral_efficiency()).sum::<f64>() / edge.len() as f64
        };
    }

    pub fn sinr_db(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.sinr_db).collect()
    }

    pub fn edge_sinr_db(&self) -> Vec<f64> {
        self.samples
            .iter()
            .filter(|s| s.is_edge)
            .map(|s| s.sinr_db)
            .collect()
    }

    pub fn cdf_all(&self) -> Result<Vec<(f64, f64)>> {
        cdf(&self.sinr_db())
    }

    pub fn cdf_edge(&self) -> Result<Vec<(f64, f64)>> {
        cdf(&self.edge_sinr_db())
    }

    pub fn edge_histogram(&self, bin_width_db: f64) -> Result<Vec<(f64, usize)>> {
        histogram(&self.edge_sinr_db(), bin_width_db)
    }

    pub fn median_sinr_db(&self) -> Option<f64> {
        quantile(&self.sinr_db(), 0.5)
    }

    pub fn median_edge_sinr_db(&self) -> Option<f64> {
        quantile(&self.edge_sinr_db(), 0.5)
    }
}
