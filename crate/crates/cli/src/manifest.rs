//! Run manifests: tool version, input hash, full config, and seed, written
//! beside every verb's outputs so a run can be reproduced exactly. Only the
//! timestamp field may differ between identical reruns.

use crate::Cli;
use anyhow::{Context, Result};
use evtow_core::ga::GaConfig;
use std::fmt::Write as _;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

/// FNV-1a over the raw file bytes.
fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x100_0000_01b3);
    }
    hash
}

fn config_json(config: &GaConfig) -> String {
    format!(
        "{{\"population_size\": {}, \"max_iterations\": {}, \"generation_gap\": {}, \"pc_range\": [{}, {}], \"pm_range\": [{}, {}], \"seed\": {}, \"repair\": \"{:?}\", \"pm_orientation\": \"{:?}\", \"acceptable_delay_min\": {}, \"repair_delay_min\": {}}}",
        config.population_size,
        config.max_iterations,
        config.generation_gap,
        config.pc_range.0,
        config.pc_range.1,
        config.pm_range.0,
        config.pm_range.1,
        config.seed,
        config.repair,
        config.pm_orientation,
        config.acceptable_delay_min,
        config
            .repair_delay_min
            .map_or("null".to_string(), |v| v.to_string()),
    )
}

pub fn write(cli: &Cli, verb: &str, input: Option<&Path>, extra: &[(&str, &str)]) -> Result<()> {
    write_inner(cli, verb, input, None, extra)
}

pub fn write_with_config(
    cli: &Cli,
    verb: &str,
    input: Option<&Path>,
    config: &GaConfig,
    extra: &[(&str, String)],
) -> Result<()> {
    let borrowed: Vec<(&str, &str)> = extra.iter().map(|(k, v)| (*k, v.as_str())).collect();
    write_inner(cli, verb, input, Some(config), &borrowed)
}

fn write_inner(
    cli: &Cli,
    verb: &str,
    input: Option<&Path>,
    config: Option<&GaConfig>,
    extra: &[(&str, &str)],
) -> Result<()> {
    let mut out = String::from("{\n");
    let _ = writeln!(
        out,
        "  \"tool_version\": \"{}\",",
        env!("CARGO_PKG_VERSION")
    );
    let _ = writeln!(out, "  \"verb\": \"{verb}\",");
    if let Some(seed) = cli.seed {
        let _ = writeln!(out, "  \"seed\": {seed},");
    }
    if let Some(path) = input {
        let bytes =
            std::fs::read(path).with_context(|| format!("hashing input {}", path.display()))?;
        let _ = writeln!(out, "  \"input\": \"{}\",", path.display());
        let _ = writeln!(
            out,
            "  \"input_hash\": \"fnv1a64:{:016x}\",",
            fnv1a64(&bytes)
        );
    }
    if let Some(config) = config {
        let _ = writeln!(out, "  \"config\": {},", config_json(config));
    }
    for (key, value) in extra {
        let _ = writeln!(out, "  \"{key}\": \"{value}\",");
    }
    let timestamp = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let _ = writeln!(out, "  \"timestamp_unix\": {timestamp}");
    out.push_str("}\n");
    let path = cli.out_dir.join(format!("{verb}.manifest.json"));
    std::fs::write(&path, out).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}
