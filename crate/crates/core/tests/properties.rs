use proptest::prelude::*;

use racnsim::channel::{path_loss_db, ChannelConfig, LinkShadowing};
use racnsim::engine::{derive_drop_seed, realize_drop, ExperimentConfig, Prepared};
use racnsim::geometry::{build_layout, point_in_polygon, polygon_area, Label, Point, RegionId};
use racnsim::metrics::{cdf, histogram, SinrContext};
use racnsim::schemes::{allocate, build_neighbor_matrix, sfr_power_ratio, Scheme, SchemeConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rotate(id: RegionId) -> RegionId {
    // 120 degrees counterclockwise about the reference eNB
    let cell = if id.cell == 1 {
        1
    } else {
        (id.cell - 2 + 2) % 6 + 2
    };
    let label = Label::for_sector((id.label.sector() + 1) % 3, id.label.criticality());
    RegionId::new(cell, label)
}

#[test]
fn regions_tile_each_sector() {
    let layout = build_layout(1.5, 1).unwrap();
    let s = layout.sector_side_km();
    let hex = 1.5 * 3f64.sqrt() * s * s;
    for site in &layout.cell_sites {
        for sector in 0..3 {
            let a: f64 = Label::ALL
                .iter()
                .filter(|l| l.sector() == sector)
                .map(|&l| polygon_area(&layout.region(RegionId::new(site.index, l)).polygon))
                .sum();
            assert!((a - hex).abs() < 1e-9);
        }
    }
}

#[test]
fn proposed_matrices_are_rotation_invariant() {
    let layout = build_layout(1.5, 1).unwrap();
    for scheme in [Scheme::ProposedNoRn, Scheme::ProposedRn] {
        let nm = build_neighbor_matrix(&layout, scheme);
        for i in nm.regions() {
            for j in nm.regions() {
                assert_eq!(
                    nm.get(i, j),
                    nm.get(rotate(i), rotate(j)),
                    "{scheme} {i} {j}"
                );
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn points_fall_in_exactly_one_region(x in -3.0f64..3.0, y in -3.0f64..3.0) {
        let layout = build_layout(1.5, 1).unwrap();
        let p = Point::new(x, y);
        let holders: Vec<RegionId> = layout
            .regions
            .iter()
            .filter(|r| point_in_polygon(&r.polygon, p))
            .map(|r| r.id)
            .collect();
        match layout.region_of(p) {
            Some(id) => prop_assert!(holders.contains(&id)),
            None => prop_assert!(holders.is_empty()),
        }
        // closed polygons share boundaries; interior points have one holder
        prop_assert!(holders.len() <= 3);
    }

    #[test]
    fn drops_are_deterministic(seed in any::<u64>(), users in 1usize..30) {
        let cfg = ExperimentConfig::default();
        let layout = build_layout(1.5, 1).unwrap();
        let a = realize_drop(&layout, &cfg, users, seed).unwrap();
        let b = realize_drop(&layout, &cfg, users, seed).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(a.drop.len(), 21 * users);
        for u in &a.drop.users {
            prop_assert_eq!(layout.region_of(u.position), Some(u.region));
        }
    }

    #[test]
    fn classification_takes_the_low_snr_percentile(seed in any::<u64>(), users in 1usize..30, t in 0.0f64..99.0) {
        let cfg = ExperimentConfig { percentile_threshold: t, ..Default::default() };
        let layout = build_layout(1.5, 1).unwrap();
        let r = realize_drop(&layout, &cfg, users, seed).unwrap();
        let n = r.drop.len();
        let critical: Vec<f64> = r.drop.users.iter().filter(|u| u.is_critical()).map(|u| u.estimated_snr_db).collect();
        prop_assert_eq!(critical.len(), (n as f64 * t / 100.0).floor() as usize);
        let worst_normal = r.drop.users.iter().filter(|u| !u.is_critical()).map(|u| u.estimated_snr_db).fold(f64::INFINITY, f64::min);
        prop_assert!(critical.iter().all(|&s| s <= worst_normal));
        for u in &r.drop.users {
            let node = u.serving_node.unwrap();
            prop_assert_eq!(node.cell(), u.cell());
            prop_assert_eq!(matches!(node, racnsim::geometry::NodeRef::Rn { .. }), u.is_critical());
        }
    }

    #[test]
    fn drop_seeds_differ(master in any::<u64>(), i in 0u64..1000, j in 0u64..1000) {
        prop_assume!(i != j);
        prop_assert_ne!(derive_drop_seed(master, i), derive_drop_seed(master, j));
    }

    #[test]
    fn power_ratio_is_a_non_increasing_step(a in 0.0f64..10.0, b in 0.0f64..10.0) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let (p_lo, p_hi) = (sfr_power_ratio(lo), sfr_power_ratio(hi));
        prop_assert!([1.0 / 3.0, 1.0, 3.0].contains(&p_lo));
        prop_assert!(p_hi <= p_lo);
    }

    #[test]
    fn path_loss_increases_with_distance(a in 0.01f64..20.0, b in 0.01f64..20.0) {
        prop_assume!(a < b);
        prop_assert!(path_loss_db(a) < path_loss_db(b));
    }

    #[test]
    fn cdf_is_a_distribution(xs in prop::collection::vec(-50.0f64..80.0, 1..200)) {
        let c = cdf(&xs).unwrap();
        prop_assert!(c.windows(2).all(|w| w[0].0 < w[1].0 && w[0].1 < w[1].1));
        prop_assert!((c.last().unwrap().1 - 1.0).abs() < 1e-12);
        let h = histogram(&xs, 1.0).unwrap();
        prop_assert_eq!(h.iter().map(|&(_, n)| n).sum::<usize>(), xs.len());
    }

    #[test]
    fn louder_interferers_lower_sinr(seed in any::<u64>(), boost in 0.5f64..20.0) {
        let cfg = ExperimentConfig::default();
        let prepared = Prepared::new(&cfg).unwrap();
        let r = realize_drop(&prepared.layout, &cfg, 10, seed).unwrap();
        let nm = prepared.matrix(Scheme::Reuse1);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let plan = allocate(Scheme::Reuse1, &r.drop, nm, &SchemeConfig::default(), 3, &mut rng).unwrap();
        let victim = (0..r.drop.len()).find(|&u| plan.assignments[u].is_some()).unwrap();
        let before = SinrContext::new(&prepared.layout, &r.drop, &plan, &r.shadowing, &ChannelConfig::default(), nm)
            .sinr(victim)
            .unwrap();
        let mut louder = plan.clone();
        for (u, a) in louder.assignments.iter_mut().enumerate() {
            if let Some(a) = a {
                if u != victim {
                    a.tx_power_dbm += boost;
                }
            }
        }
        let after = SinrContext::new(&prepared.layout, &r.drop, &louder, &r.shadowing, &ChannelConfig::default(), nm)
            .sinr(victim)
            .unwrap();
        let interfered = before.interference_plus_noise_dbm > ChannelConfig::default().noise_floor_dbm() + 1e-9;
        if interfered {
            prop_assert!(after.sinr_linear < before.sinr_linear);
        } else {
            prop_assert_eq!(after.sinr_linear, before.sinr_linear);
        }
        prop_assert!(after.sinr_linear >= 0.0);
    }

    #[test]
    fn removing_an_interferer_never_hurts(seed in any::<u64>()) {
        let cfg = ExperimentConfig::default();
        let prepared = Prepared::new(&cfg).unwrap();
        let r = realize_drop(&prepared.layout, &cfg, 10, seed).unwrap();
        let nm = prepared.matrix(Scheme::Reuse1);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let plan = allocate(Scheme::Reuse1, &r.drop, nm, &SchemeConfig::default(), 3, &mut rng).unwrap();
        let channel = ChannelConfig::default();
        let base = SinrContext::new(&prepared.layout, &r.drop, &plan, &r.shadowing, &channel, nm);
        let mut fewer = plan.clone();
        fewer.assignments[0] = None;
        let thinned = SinrContext::new(&prepared.layout, &r.drop, &fewer, &r.shadowing, &channel, nm);
        for u in 1..r.drop.len() {
            if let (Some(a), Some(b)) = (base.sinr(u), thinned.sinr(u)) {
                prop_assert!(b.sinr_linear >= a.sinr_linear);
            }
        }
    }
}

#[test]
fn shadowing_draw_order_is_fixed() {
    let cfg = ChannelConfig::default();
    let a = LinkShadowing::draw(5, 7, &cfg, &mut ChaCha8Rng::seed_from_u64(3));
    let b = LinkShadowing::draw(5, 7, &cfg, &mut ChaCha8Rng::seed_from_u64(3));
    assert_eq!(a, b);
    // user 0 draws seven eNB links, then twenty-one relay links
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let first = racnsim::channel::shadowing_db(racnsim::channel::LinkKind::EnbUe, &cfg, &mut rng);
    assert_eq!(a.enb_db(0, 1), first);
}
