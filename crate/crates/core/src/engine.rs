//! Seeded Monte Carlo experiments over user drops.
//!
//! Every drop owns a ChaCha8 generator seeded with [`derive_drop_seed`]. The
//! generator's streams separate the draws: stream 0 places users, stream 1
//! draws link shadowing and stream `2 + k` drives the allocator of the `k`-th
//! scheme in [`Scheme::ALL`]. All schemes of a drop therefore see the same
//! users and the same channel, and results do not depend on which schemes
//! were requested or on the number of worker threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::channel::{ChannelConfig, LinkShadowing, SHADOWING_STREAM};
use crate::error::{ConfigError, Result};
use crate::geometry::{classify_users, drop_users, LayoutParams, NetworkLayout, UserDrop};
use crate::metrics::{
    area_spectral_efficiency, edge_spectral_efficiency, DropMetrics, MetricsReport, SinrContext,
    SinrSample,
};
use crate::schemes::{
    allocate, build_neighbor_matrix, AllocationPlan, NeighborMatrix, Scheme, SchemeConfig,
};

/// Metrics are collected for users of this cell only.
pub const REFERENCE_CELL: usize = 1;

const ALLOCATION_STREAM_BASE: u64 = 2;

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub schemes: Vec<Scheme>,
    pub users_per_sector: Vec<usize>,
    pub num_drops: usize,
    pub master_seed: u64,
    pub channel: ChannelConfig,
    pub scheme: SchemeConfig,
    pub layout: LayoutParams,
    pub percentile_threshold: f64,
    pub histogram_bin_db: f64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            schemes: Scheme::ALL.to_vec(),
            users_per_sector: vec![50, 200, 1000],
            num_drops: 100,
            master_seed: 1,
            channel: ChannelConfig::default(),
            scheme: SchemeConfig::default(),
            layout: LayoutParams::default(),
            percentile_threshold: 25.0,
            histogram_bin_db: 1.0,
        }
    }
}

impl ExperimentConfig {
    /// Checks every field and reports all offending ones at once.
    pub fn validate(&self) -> std::result::Result<(), ConfigError> {
        let mut err = ConfigError::default();
        if self.schemes.is_empty() {
            err.push("run.schemes", "at least one scheme is required");
        }
        if self.users_per_sector.is_empty() {
            err.push("run.users_per_sector", "at least one density is required");
        }
        if self.users_per_sector.contains(&0) {
            err.push("run.users_per_sector", "every density must be at least 1");
        }
        if self.num_drops == 0 {
            err.push("run.num_drops", "must be at least 1");
        }
        if !(0.0..100.0).contains(&self.percentile_threshold) {
            err.push("run.percentile_threshold", "must lie in [0, 100)");
        }
        if !(self.histogram_bin_db > 0.0) {
            err.push("run.histogram_bin_db", "must be positive");
        }
        let ch = &self.channel;
        if !(ch.subchannel_bandwidth_hz > 0.0) {
            err.push("channel.subchannel_bandwidth_hz", "must be positive");
        }
        if !ch.noise_density_dbm_per_hz.is_finite() {
            err.push("channel.noise_density_dbm_per_hz", "must be finite");
        }
        if !(ch.shadow_sigma_enb_db >= 0.0) {
            err.push("channel.shadow_sigma_enb_db", "must be non-negative");
        }
        if !(ch.shadow_sigma_rn_db >= 0.0) {
            err.push("channel.shadow_sigma_rn_db", "must be non-negative");
        }
        let sc = &self.scheme;
        if !(sc.total_bandwidth_hz > 0.0) {
            err.push("scheme.total_bandwidth_hz", "must be positive");
        } else if ch.subchannel_bandwidth_hz > 0.0
            && sc.num_subchannels(ch.subchannel_bandwidth_hz) < 3
        {
            err.push(
                "scheme.total_bandwidth_hz",
                "must hold at least three subchannels",
            );
        }
        for (field, v) in [
            ("scheme.p_enb_dbm", sc.p_enb_dbm),
            ("scheme.p_rn_dbm", sc.p_rn_dbm),
            ("scheme.p_high_dbm", sc.p_high_dbm),
            ("scheme.p_low_dbm", sc.p_low_dbm),
        ] {
            if !v.is_finite() {
                err.push(field, "must be finite");
            }
        }
        let l = &self.layout;
        if !(l.inter_site_distance_km > 0.0 && l.inter_site_distance_km.is_finite()) {
            err.push("layout.inter_site_distance_km", "must be positive");
        }
        if l.tiers == 0 {
            err.push("layout.tiers", "must be at least 1");
        }
        if !(l.inner_scale > 0.0 && l.inner_scale < 1.0) {
            err.push("layout.inner_scale", "must lie in (0, 1)");
        }
        err.into_result()
    }

    pub fn num_subchannels(&self) -> u32 {
        self.scheme
            .num_subchannels(self.channel.subchannel_bandwidth_hz)
    }
}

/// Seed of drop `drop_index`.
///
/// `splitmix64(master_seed + (drop_index + 1) * 0x9E3779B97F4A7C15)`, all
/// arithmetic wrapping. Multiplying by an odd constant, adding a constant
/// and the splitmix64 finalizer are each bijections on `u64`, so the map is
/// injective in `drop_index` for a fixed master seed.
pub fn derive_drop_seed(master_seed: u64, drop_index: u64) -> u64 {
    const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;
    let mut z = master_seed.wrapping_add(drop_index.wrapping_add(1).wrapping_mul(GOLDEN));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// A classified drop together with its frozen shadowing.
#[derive(Clone, Debug, PartialEq)]
pub struct DropRealization {
    pub drop: UserDrop,
    pub shadowing: LinkShadowing,
}

pub fn realize_drop(
    layout: &NetworkLayout,
    cfg: &ExperimentConfig,
    users_per_sector: usize,
    seed: u64,
) -> Result<DropRealization> {
    let drop = drop_users(layout, users_per_sector, seed)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(SHADOWING_STREAM);
    let shadowing = LinkShadowing::draw(drop.len(), layout.num_cells(), &cfg.channel, &mut rng);
    let drop = classify_users(
        &drop,
        layout,
        &shadowing,
        &cfg.channel,
        cfg.scheme.p_enb_dbm,
        cfg.percentile_threshold,
    )?;
    Ok(DropRealization { drop, shadowing })
}

/// Layout and neighbor matrices shared by every drop of an experiment.
pub struct Prepared {
    pub layout: NetworkLayout,
    pub matrices: Vec<(Scheme, NeighborMatrix)>,
}

impl Prepared {
    pub fn new(cfg: &ExperimentConfig) -> Result<Self> {
        cfg.validate()?;
        let layout = NetworkLayout::new(cfg.layout)?;
        let matrices = Scheme::ALL
            .iter()
            .map(|&s| (s, build_neighbor_matrix(&layout, s)))
            .collect();
        Ok(Prepared { layout, matrices })
    }

    pub fn matrix(&self, scheme: Scheme) -> &NeighborMatrix {
        &self
            .matrices
            .iter()
            .find(|(s, _)| *s == scheme)
            .expect("all schemes prepared")
            .1
    }
}

/// Outcome of one scheme on one drop.
#[derive(Clone, Debug)]
pub struct SchemeOutcome {
    pub plan: AllocationPlan,
    pub metrics: DropMetrics,
    /// Reference-cell samples only.
    pub samples: Vec<SinrSample>,
}

pub fn evaluate_scheme(
    prepared: &Prepared,
    cfg: &ExperimentConfig,
    realization: &DropRealization,
    scheme: Scheme,
) -> Result<SchemeOutcome> {
    let layout = &prepared.layout;
    let nm = prepared.matrix(scheme);
    let drop = &realization.drop;
    let scheme_idx = Scheme::ALL
        .iter()
        .position(|&s| s == scheme)
        .expect("known scheme") as u64;
    let mut rng = ChaCha8Rng::seed_from_u64(drop.drop_seed);
    rng.set_stream(ALLOCATION_STREAM_BASE + scheme_idx);
    let plan = allocate(
        scheme,
        drop,
        nm,
        &cfg.scheme,
        cfg.num_subchannels(),
        &mut rng,
    )?;

    let ctx = SinrContext::new(
        layout,
        drop,
        &plan,
        &realization.shadowing,
        &cfg.channel,
        nm,
    );
    let reference: Vec<usize> = (0..drop.len())
        .filter(|&u| drop.users[u].cell() == REFERENCE_CELL)
        .collect();
    let samples: Vec<SinrSample> = reference.iter().filter_map(|&u| ctx.sinr(u)).collect();
    let blocked = reference.len() - samples.len();
    let metrics = DropMetrics {
        seed: drop.drop_seed,
        eta_edge: edge_spectral_efficiency(&samples),
        eta_area: area_spectral_efficiency(&samples, layout, scheme, &cfg.scheme, &cfg.channel)?,
        served: samples.len(),
        blocked,
    };
    Ok(SchemeOutcome {
        plan,
        metrics,
        samples,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SchemeResult {
    pub scheme: Scheme,
    pub users_per_sector: usize,
    pub report: MetricsReport,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentResult {
    pub config: ExperimentConfig,
    /// One entry per (density, scheme), densities outer, in config order.
    pub entries: Vec<SchemeResult>,
    pub drop_seeds: Vec<u64>,
}

impl ExperimentResult {
    pub fn get(&self, scheme: Scheme, users_per_sector: usize) -> Option<&MetricsReport> {
        self.entries
            .iter()
            .find(|e| e.scheme == scheme && e.users_per_sector == users_per_sector)
            .map(|e| &e.report)
    }
}

/// Runs every requested scheme on `num_drops` shared drops per density.
/// Drops run in parallel on the current rayon pool and are merged in drop
/// order.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    let prepared = Prepared::new(cfg)?;
    let drop_seeds: Vec<u64> = (0..cfg.num_drops as u64)
        .map(|i| derive_drop_seed(cfg.master_seed, i))
        .collect();

    let mut entries = Vec::with_capacity(cfg.users_per_sector.len() * cfg.schemes.len());
    for &users in &cfg.users_per_sector {
        let per_drop: Vec<Vec<(DropMetrics, Vec<SinrSample>)>> = drop_seeds
            .par_iter()
            .map(|&seed| -> Result<Vec<(DropMetrics, Vec<SinrSample>)>> {
                let realization = realize_drop(&prepared.layout, cfg, users, seed)?;
                cfg.schemes
                    .iter()
                    .map(|&s| {
                        evaluate_scheme(&prepared, cfg, &realization, s)
                            .map(|o| (o.metrics, o.samples))
                    })
                    .collect()
            })
            .collect::<Result<_>>()?;

        let mut reports: Vec<MetricsReport> = cfg
            .schemes
            .iter()
            .map(|&s| MetricsReport::new(s, users))
            .collect();
        for outcomes in per_drop {
            for (report, (metrics, samples)) in reports.iter_mut().zip(outcomes) {
                report.push_drop(metrics, samples);
            }
        }
        entries.extend(reports.into_iter().map(|report| SchemeResult {
            scheme: report.scheme,
            users_per_sector: users,
            report,
        }));
    }
    Ok(ExperimentResult {
        config: cfg.clone(),
        entries,
        drop_seeds,
    })
}
