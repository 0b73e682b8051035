use std::ops::Range;

use rand::seq::SliceRandom;
use rand::Rng;

use super::{region_pool, sfr_power_ratio, third, NeighborMatrix, Scheme, SchemeConfig};
use crate::error::{Result, SimError};
use crate::geometry::{NodeRef, RegionId, UserDrop};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Assignment {
    pub subchannel: u32,
    pub tx_power_dbm: f64,
    pub tx_node: NodeRef,
}

/// SFR power levels of one cell.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SfrState {
    pub alpha_u: f64,
    pub alpha_p: f64,
    pub p_cc_dbm: f64,
    pub p_eu_dbm: f64,
}

impl SfrState {
    pub fn new(n_edge: usize, n_centre: usize, base_power_dbm: f64) -> Self {
        let alpha_u = if n_centre == 0 {
            f64::INFINITY
        } else {
            n_edge as f64 / n_centre as f64
        };
        let alpha_p = sfr_power_ratio(alpha_u);
        let ratio_db = 10.0 * alpha_p.log10();
        let (p_cc_dbm, p_eu_dbm) = if ratio_db >= 0.0 {
            (base_power_dbm - ratio_db, base_power_dbm)
        } else {
            (base_power_dbm, base_power_dbm + ratio_db)
        };
        SfrState {
            alpha_u,
            alpha_p,
            p_cc_dbm,
            p_eu_dbm,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AllocationPlan {
    pub scheme: Scheme,
    pub num_subchannels: u32,
    /// Indexed by user; `None` for blocked users.
    pub assignments: Vec<Option<Assignment>>,
    /// Subchannel pool of every region, indexed by [`RegionId::index`].
    pub region_pools: Vec<Range<u32>>,
    pub blocked_users: Vec<usize>,
    /// Per-cell SFR power state; empty for other schemes.
    pub sfr_states: Vec<SfrState>,
}

impl AllocationPlan {
    fn new(scheme: Scheme, num_users: usize, num_regions: usize, n: u32) -> Self {
        AllocationPlan {
            scheme,
            num_subchannels: n,
            assignments: vec![None; num_users],
            region_pools: (0..num_regions)
                .map(|i| region_pool(scheme, RegionId::from_index(i).label, n))
                .collect(),
            blocked_users: Vec::new(),
            sfr_states: Vec::new(),
        }
    }

    pub fn pool(&self, region: RegionId) -> Range<u32> {
        self.region_pools[region.index()].clone()
    }

    pub fn served_count(&self) -> usize {
        self.assignments.iter().filter(|a| a.is_some()).count()
    }

    fn finish(mut self) -> Self {
        self.blocked_users = (0..self.assignments.len())
            .filter(|&u| self.assignments[u].is_none())
            .collect();
        self
    }
}

fn check_classified(drop: &UserDrop) -> Result<()> {
    if drop.is_classified() {
        Ok(())
    } else {
        Err(SimError::InvalidParameter(
            "drop must be classified before allocation".into(),
        ))
    }
}

fn num_regions(drop: &UserDrop) -> usize {
    drop.users.iter().map(|u| u.cell()).max().unwrap_or(0) * 6
}

/// Users matching `pred`, worst estimated SNR first, ties by index.
fn worst_first(drop: &UserDrop, pred: impl Fn(usize) -> bool) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..drop.len()).filter(|&u| pred(u)).collect();
    idx.sort_by(|&a, &b| {
        drop.users[a]
            .estimated_snr_db
            .total_cmp(&drop.users[b].estimated_snr_db)
            .then(a.cmp(&b))
    });
    idx
}

fn shuffled<R: Rng + ?Sized>(range: Range<u32>, rng: &mut R) -> Vec<u32> {
    let mut v: Vec<u32> = range.collect();
    v.shuffle(rng);
    v
}

/// Universal reuse: every cell serves its users from the whole band with
/// one subchannel per user, chosen at random among the free ones.
pub fn allocate_reuse1<R: Rng + ?Sized>(
    drop: &UserDrop,
    cfg: &SchemeConfig,
    n: u32,
    rng: &mut R,
) -> Result<AllocationPlan> {
    check_classified(drop)?;
    let mut plan = AllocationPlan::new(Scheme::Reuse1, drop.len(), num_regions(drop), n);
    let cells = num_regions(drop) / 6;
    for cell in 1..=cells {
        let free = shuffled(0..n, rng);
        let users = worst_first(drop, |u| drop.users[u].cell() == cell);
        for (u, ch) in users.into_iter().zip(free) {
            plan.assignments[u] = Some(Assignment {
                subchannel: ch,
                tx_power_dbm: cfg.p_enb_dbm,
                tx_node: NodeRef::Enb { cell },
            });
        }
    }
    Ok(plan.finish())
}

/// Reuse-3: sector `k` of every cell uses third `k` of the band.
pub fn allocate_reuse3<R: Rng + ?Sized>(
    drop: &UserDrop,
    cfg: &SchemeConfig,
    n: u32,
    rng: &mut R,
) -> Result<AllocationPlan> {
    check_classified(drop)?;
    let mut plan = AllocationPlan::new(Scheme::Reuse3, drop.len(), num_regions(drop), n);
    let cells = num_regions(drop) / 6;
    for cell in 1..=cells {
        for sector in 0..3 {
            let free = shuffled(third(sector, n), rng);
            let users = worst_first(drop, |u| {
                let user = &drop.users[u];
                user.cell() == cell && user.sector() == sector
            });
            for (u, ch) in users.into_iter().zip(free) {
                plan.assignments[u] = Some(Assignment {
                    subchannel: ch,
                    tx_power_dbm: cfg.p_enb_dbm,
                    tx_node: NodeRef::Enb { cell },
                });
            }
        }
    }
    Ok(plan.finish())
}

/// Soft frequency reuse. Edge users of sector `k` first claim subchannels
/// from third `k` at `P^eu`; centre users then take any subchannel still
/// free in the cell at `P^cc`. The power ratio follows the cell's edge to
/// centre user ratio.
pub fn allocate_sfr<R: Rng + ?Sized>(
    drop: &UserDrop,
    cfg: &SchemeConfig,
    n: u32,
    rng: &mut R,
) -> Result<AllocationPlan> {
    check_classified(drop)?;
    let mut plan = AllocationPlan::new(Scheme::Sfr, drop.len(), num_regions(drop), n);
    let cells = num_regions(drop) / 6;
    for cell in 1..=cells {
        let in_cell = |u: usize| drop.users[u].cell() == cell;
        let n_edge = (0..drop.len())
            .filter(|&u| in_cell(u) && drop.users[u].is_critical())
            .count();
        let n_centre = (0..drop.len())
            .filter(|&u| in_cell(u) && !drop.users[u].is_critical())
            .count();
        let state = SfrState::new(n_edge, n_centre, cfg.sfr_base_power_dbm());
        plan.sfr_states.push(state);

        let mut used = vec![false; n as usize];
        for sector in 0..3 {
            let edge = worst_first(drop, |u| {
                let user = &drop.users[u];
                in_cell(u) && user.sector() == sector && user.is_critical()
            });
            for (u, ch) in edge.into_iter().zip(shuffled(third(sector, n), rng)) {
                used[ch as usize] = true;
                plan.assignments[u] = Some(Assignment {
                    subchannel: ch,
                    tx_power_dbm: state.p_eu_dbm,
                    tx_node: NodeRef::Enb { cell },
                });
            }
        }
        let mut free: Vec<u32> = (0..n).filter(|&ch| !used[ch as usize]).collect();
        free.shuffle(rng);
        let centre = worst_first(drop, |u| in_cell(u) && !drop.users[u].is_critical());
        for (u, ch) in centre.into_iter().zip(free) {
            plan.assignments[u] = Some(Assignment {
                subchannel: ch,
                tx_power_dbm: state.p_cc_dbm,
                tx_node: NodeRef::Enb { cell },
            });
        }
    }
    Ok(plan.finish())
}

/// Bit set over subchannels.
#[derive(Clone)]
struct ChannelMask(Vec<u64>);

impl ChannelMask {
    fn new(n: u32) -> Self {
        ChannelMask(vec![0; (n as usize).div_ceil(64)])
    }

    fn set(&mut self, ch: u32) {
        self.0[ch as usize / 64] |= 1 << (ch % 64);
    }

    fn or_assign(&mut self, other: &ChannelMask) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a |= b;
        }
    }

    fn first_clear_in(&self, range: Range<u32>) -> Option<u32> {
        let mut ch = range.start;
        while ch < range.end {
            let word = self.0[ch as usize / 64] >> (ch % 64);
            if word == u64::MAX >> (ch % 64) {
                ch = (ch / 64 + 1) * 64;
                continue;
            }
            let candidate = ch + (!word).trailing_zeros();
            return (candidate < range.end).then_some(candidate);
        }
        None
    }
}

/// Neighbor-set coordinated allocation.
///
/// Critical region of sector `k` draws from third `k`, the non-critical
/// region from third `(k + 2) mod 3`. Users are served worst estimated SNR
/// first across the whole network, each taking the lowest subchannel of its
/// pool that is unused in its own region and in every region it conflicts
/// with through `nm`. Users with no legal subchannel are blocked.
pub fn allocate_proposed(
    drop: &UserDrop,
    nm: &NeighborMatrix,
    cfg: &SchemeConfig,
    n: u32,
    relays: bool,
) -> Result<AllocationPlan> {
    check_classified(drop)?;
    let scheme = if relays {
        Scheme::ProposedRn
    } else {
        Scheme::ProposedNoRn
    };
    if nm.scheme != scheme {
        return Err(SimError::InvalidParameter(format!(
            "neighbor matrix built for {} used with {}",
            nm.scheme, scheme
        )));
    }
    let regions = num_regions(drop);
    if nm.len() < regions {
        return Err(SimError::InvalidParameter(
            "neighbor matrix smaller than the drop".into(),
        ));
    }
    let mut plan = AllocationPlan::new(scheme, drop.len(), regions, n);
    let mut used: Vec<ChannelMask> = vec![ChannelMask::new(n); regions];
    let conflicts: Vec<Vec<usize>> = (0..regions)
        .map(|i| {
            nm.conflicts(RegionId::from_index(i))
                .into_iter()
                .map(|j| j.index())
                .filter(|&j| j < regions)
                .collect()
        })
        .collect();

    for u in worst_first(drop, |_| true) {
        let user = &drop.users[u];
        let region = user.service_region().expect("classified");
        let i = region.index();
        let mut busy = used[i].clone();
        for &j in &conflicts[i] {
            busy.or_assign(&used[j]);
        }
        let Some(ch) = busy.first_clear_in(plan.pool(region)) else {
            continue;
        };
        used[i].set(ch);
        let cell = user.cell();
        let (tx_node, tx_power_dbm) = match (relays, user.is_critical()) {
            (false, true) => (NodeRef::Enb { cell }, cfg.p_high_dbm),
            (false, false) => (NodeRef::Enb { cell }, cfg.p_low_dbm),
            (true, true) => (
                NodeRef::Rn {
                    cell,
                    sector: user.sector(),
                },
                cfg.p_rn_dbm,
            ),
            (true, false) => (NodeRef::Enb { cell }, cfg.p_enb_dbm),
        };
        plan.assignments[u] = Some(Assignment {
            subchannel: ch,
            tx_power_dbm,
            tx_node,
        });
    }
    Ok(plan.finish())
}

/// Dispatches to the allocator of `scheme`. `nm` must be the matrix of the
/// same scheme when `scheme` is a proposed variant.
pub fn allocate<R: Rng + ?Sized>(
    scheme: Scheme,
    drop: &UserDrop,
    nm: &NeighborMatrix,
    cfg: &SchemeConfig,
    n: u32,
    rng: &mut R,
) -> Result<AllocationPlan> {
    match scheme {
        Scheme::Reuse1 => allocate_reuse1(drop, cfg, n, rng),
        Scheme::Reuse3 => allocate_reuse3(drop, cfg, n, rng),
        Scheme::Sfr => allocate_sfr(drop, cfg, n, rng),
        Scheme::ProposedNoRn => allocate_proposed(drop, nm, cfg, n, false),
        Scheme::ProposedRn => allocate_proposed(drop, nm, cfg, n, true),
    }
}
