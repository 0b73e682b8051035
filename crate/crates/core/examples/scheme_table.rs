use racnsim::engine::{run_experiment, ExperimentConfig};
use racnsim::metrics::quantile;

fn main() {
    let users: usize = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(200);
    let drops: usize = std::env::args()
        .nth(2)
        .and_then(|s| s.parse().ok())
        .unwrap_or(100);
    let cfg = ExperimentConfig {
        users_per_sector: vec![users],
        num_drops: drops,
        ..Default::default()
    };
    let t = std::time::Instant::now();
    let result = run_experiment(&cfg).unwrap();
    println!("elapsed {:.1}s", t.elapsed().as_secs_f64());
    println!("scheme           med_edge  med_all   p10_all   eta_edge   eta_area   blocked");
    for e in &result.entries {
        let r = &e.report;
        let all = r.sinr_db();
        println!(
            "{:16} {:8.2} {:8.2} {:8.2} {:10.1} {:10.4} {}",
            e.scheme.to_string(),
            r.median_edge_sinr_db().unwrap(),
            r.median_sinr_db().unwrap(),
            quantile(&all, 0.1).unwrap(),
            r.edge_spectral_efficiency,
            r.area_spectral_efficiency,
            r.blocked_count
        );
    }
}
