//! CSV and transcript emission.
//!
//! One CSV per invocation. `#`-prefixed metadata lines carry the resolved
//! base configuration (single-line JSON) and column notes; the header row
//! and data rows follow. Floats are printed in shortest round-trip form, so
//! identical runs produce byte-identical files.

use std::io::Write;

use relaysim_core::engine::SweepPoint;
use relaysim_core::{ConfigError, SimConfig};

/// Stable column order.
pub const COLUMNS: &str =
    "axis_value,strategy,r_avg,empirical_throughput,l_av,outage_rate,ci_halfwidth,packets,seed,config_hash";

pub fn write_csv<W: Write>(
    mut w: W,
    base: &SimConfig,
    axis: Option<&str>,
    points: &[SweepPoint],
) -> Result<(), ConfigError> {
    let io = |e: std::io::Error| ConfigError::Io(e.to_string());
    let base_json = serde_json::to_string(base).expect("config serializes");
    writeln!(w, "# relaysim v{}", env!("CARGO_PKG_VERSION")).map_err(io)?;
    writeln!(w, "# axis = {}", axis.unwrap_or("none")).map_err(io)?;
    writeln!(w, "# base_config = {base_json}").map_err(io)?;
    writeln!(
        w,
        "# throughput figure uses n = mother-code length (k / R_m); \
         empirical_throughput = correctly delivered inner info bits / coded bits"
    )
    .map_err(io)?;
    writeln!(w, "{COLUMNS}").map_err(io)?;

    // Deterministic row order: axis value, then strategy token.
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| {
        let pa = &points[a];
        let pb = &points[b];
        pa.axis_value.total_cmp(&pb.axis_value).then_with(|| {
            pa.config
                .strategy
                .to_string()
                .cmp(&pb.config.strategy.to_string())
        })
    });
    for idx in order {
        let p = &points[idx];
        let m = &p.result.metrics;
        writeln!(
            w,
            "{:?},{},{:?},{:?},{:?},{:?},{:?},{},{},{}",
            p.axis_value,
            p.config.strategy,
            m.r_avg,
            m.empirical_throughput,
            m.l_av,
            m.outage_rate,
            m.ci_halfwidth,
            m.packets,
            p.config.seed,
            p.config.hash(),
        )
        .map_err(io)?;
    }
    Ok(())
}

/// JSON-lines transcripts: one object per packet, tagged with the sweep
/// point it came from.
pub fn write_transcripts<W: Write>(mut w: W, points: &[SweepPoint]) -> Result<(), ConfigError> {
    let io = |e: std::io::Error| ConfigError::Io(e.to_string());
    for p in points {
        for t in &p.result.transcripts {
            let mut value = serde_json::to_value(t).expect("transcript serializes");
            let obj = value.as_object_mut().expect("transcript is an object");
            obj.insert("axis_value".into(), p.axis_value.into());
            obj.insert("strategy".into(), p.config.strategy.to_string().into());
            obj.insert("config_hash".into(), p.config.hash().into());
            writeln!(w, "{}", serde_json::Value::Object(obj.clone())).map_err(io)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use relaysim_core::engine::run_campaign;

    #[test]
    fn csv_is_deterministic_and_sorted() {
        let cfg = SimConfig {
            n_packets: 2,
            n_relays: 2,
            ..SimConfig::default()
        };
        let result = run_campaign(&cfg).unwrap();
        let mk = |axis_value: f64| SweepPoint {
            axis_value,
            config: cfg.clone(),
            result: result.clone(),
        };
        let points = vec![mk(0.3), mk(0.1)];
        let mut a = Vec::new();
        write_csv(&mut a, &cfg, Some("feedback_prob"), &points).unwrap();
        let mut b = Vec::new();
        write_csv(&mut b, &cfg, Some("feedback_prob"), &points).unwrap();
        assert_eq!(a, b);
        let text = String::from_utf8(a).unwrap();
        let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
        assert!(rows[0].starts_with("axis_value"));
        assert!(rows[1].starts_with("0.1,"));
        assert!(rows[2].starts_with("0.3,"));
    }
}
