//! Flat `key = value` configuration text.
//!
//! Keys carry a section prefix (`channel.`, `scheme.`, `layout.`, `run.`).
//! Blank lines and `#` comments are ignored. Every key is optional; an empty
//! file yields the default experiment.

use crate::engine::ExperimentConfig;
use crate::error::ConfigError;
use crate::schemes::Scheme;

type Setter = fn(&mut ExperimentConfig, &str) -> Result<(), String>;
type Getter = fn(&ExperimentConfig) -> String;

fn num<T: std::str::FromStr>(v: &str) -> Result<T, String> {
    v.parse::<T>()
        .map_err(|_| format!("cannot parse '{v}' as a number"))
}

fn list<T: std::str::FromStr>(v: &str) -> Result<Vec<T>, String> {
    v.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(num::<T>)
        .collect()
}

fn join<T: ToString>(items: &[T]) -> String {
    items
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

const KEYS: &[(&str, Setter, Getter)] = &[
    (
        "channel.noise_density_dbm_per_hz",
        |c, v| {
            c.channel.noise_density_dbm_per_hz = num(v)?;
            Ok(())
        },
        |c| c.channel.noise_density_dbm_per_hz.to_string(),
    ),
    (
        "channel.subchannel_bandwidth_hz",
        |c, v| {
            c.channel.subchannel_bandwidth_hz = num(v)?;
            Ok(())
        },
        |c| c.channel.subchannel_bandwidth_hz.to_string(),
    ),
    (
        "channel.shadow_sigma_enb_db",
        |c, v| {
            c.channel.shadow_sigma_enb_db = num(v)?;
            Ok(())
        },
        |c| c.channel.shadow_sigma_enb_db.to_string(),
    ),
    (
        "channel.shadow_sigma_rn_db",
        |c, v| {
            c.channel.shadow_sigma_rn_db = num(v)?;
            Ok(())
        },
        |c| c.channel.shadow_sigma_rn_db.to_string(),
    ),
    (
        "scheme.total_bandwidth_hz",
        |c, v| {
            c.scheme.total_bandwidth_hz = num(v)?;
            Ok(())
        },
        |c| c.scheme.total_bandwidth_hz.to_string(),
    ),
    (
        "scheme.p_enb_dbm",
        |c, v| {
            c.scheme.p_enb_dbm = num(v)?;
            Ok(())
        },
        |c| c.scheme.p_enb_dbm.to_string(),
    ),
    (
        "scheme.p_rn_dbm",
        |c, v| {
            c.scheme.p_rn_dbm = num(v)?;
            Ok(())
        },
        |c| c.scheme.p_rn_dbm.to_string(),
    ),
    (
        "scheme.p_high_dbm",
        |c, v| {
            c.scheme.p_high_dbm = num(v)?;
            Ok(())
        },
        |c| c.scheme.p_high_dbm.to_string(),
    ),
    (
        "scheme.p_low_dbm",
        |c, v| {
            c.scheme.p_low_dbm = num(v)?;
            Ok(())
        },
        |c| c.scheme.p_low_dbm.to_string(),
    ),
    (
        "layout.inter_site_distance_km",
        |c, v| {
            c.layout.inter_site_distance_km = num(v)?;
            Ok(())
        },
        |c| c.layout.inter_site_distance_km.to_string(),
    ),
    (
        "layout.tiers",
        |c, v| {
            c.layout.tiers = num(v)?;
            Ok(())
        },
        |c| c.layout.tiers.to_string(),
    ),
    (
        "layout.inner_scale",
        |c, v| {
            c.layout.inner_scale = num(v)?;
            Ok(())
        },
        |c| c.layout.inner_scale.to_string(),
    ),
    (
        "run.schemes",
        |c, v| {
            c.schemes = v
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(|s| s.parse::<Scheme>().map_err(|e| e.to_string()))
                .collect::<Result<_, _>>()?;
            Ok(())
        },
        |c| join(&c.schemes),
    ),
    (
        "run.users_per_sector",
        |c, v| {
            c.users_per_sector = list(v)?;
            Ok(())
        },
        |c| join(&c.users_per_sector),
    ),
    (
        "run.num_drops",
        |c, v| {
            c.num_drops = num(v)?;
            Ok(())
        },
        |c| c.num_drops.to_string(),
    ),
    (
        "run.master_seed",
        |c, v| {
            c.master_seed = num(v)?;
            Ok(())
        },
        |c| c.master_seed.to_string(),
    ),
    (
        "run.percentile_threshold",
        |c, v| {
            c.percentile_threshold = num(v)?;
            Ok(())
        },
        |c| c.percentile_threshold.to_string(),
    ),
    (
        "run.histogram_bin_db",
        |c, v| {
            c.histogram_bin_db = num(v)?;
            Ok(())
        },
        |c| c.histogram_bin_db.to_string(),
    ),
];

/// Parses configuration text on top of the defaults, then validates it.
pub fn parse_config(text: &str) -> Result<ExperimentConfig, ConfigError> {
    let mut cfg = ExperimentConfig::default();
    let mut err = ConfigError::default();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            err.push(format!("line {}", lineno + 1), "expected 'key = value'");
            continue;
        };
        let (key, value) = (key.trim(), value.trim());
        apply(&mut cfg, key, value, &mut err);
    }
    if !err.is_empty() {
        return Err(err);
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Sets a single key, recording a field error on failure.
pub fn apply(cfg: &mut ExperimentConfig, key: &str, value: &str, err: &mut ConfigError) {
    match KEYS.iter().find(|(k, _, _)| *k == key) {
        Some((_, set, _)) => {
            if let Err(msg) = set(cfg, value) {
                err.push(key, msg);
            }
        }
        None => err.push(key, "unknown key"),
    }
}

/// Renders every key with its resolved value; parses back to `cfg`.
pub fn to_config_text(cfg: &ExperimentConfig) -> String {
    let mut out = String::new();
    for (key, _, get) in KEYS {
        out.push_str(key);
        out.push_str(" = ");
        out.push_str(&get(cfg));
        out.push('\n');
    }
    out
}
