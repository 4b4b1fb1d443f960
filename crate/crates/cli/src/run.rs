//! Invocation plan: preset, explicit sweep, or single campaign.

use std::fs::File;
use std::io::{BufWriter, Write};

use relaysim_core::engine::{run_campaign, sweep, SweepPoint};
use relaysim_core::{ConfigError, SimConfig};

use crate::output::{write_csv, write_transcripts};
use crate::presets::Preset;
use crate::{parse_sweep_spec, resolve_config, Cli};

pub fn run(cli: Cli) -> Result<(), ConfigError> {
    let base = resolve_config(&cli)?;

    let (axis, points) = if let Some(name) = &cli.preset {
        let preset = Preset::by_name(name)?;
        let pinned = preset.pin(&base);
        // An explicit --strategy narrows the preset to that single series.
        let strategies = match cli.strategy {
            Some(s) => vec![s],
            None => preset.strategies.clone(),
        };
        let mut points = Vec::new();
        for &strategy in &strategies {
            let series = SimConfig {
                strategy,
                ..pinned.clone()
            };
            points.extend(sweep(&series, preset.axis, &preset.values)?);
        }
        (Some(preset.axis), points)
    } else if let Some(spec) = &cli.sweep {
        let (axis, values) = parse_sweep_spec(spec)?;
        (Some(axis), sweep(&base, axis, &values)?)
    } else {
        let result = run_campaign(&base)?;
        let point = SweepPoint {
            axis_value: f64::NAN,
            config: base.clone(),
            result,
        };
        (None, vec![point])
    };

    let axis_name = axis.map(|a| a.to_string());
    match &cli.out {
        Some(path) => {
            let file = File::create(path)
                .map_err(|e| ConfigError::Io(format!("{}: {e}", path.display())))?;
            write_csv(BufWriter::new(file), &base, axis_name.as_deref(), &points)?;
        }
        None => {
            let stdout = std::io::stdout();
            write_csv(stdout.lock(), &base, axis_name.as_deref(), &points)?;
        }
    }

    if let Some(path) = &cli.transcripts {
        let file =
            File::create(path).map_err(|e| ConfigError::Io(format!("{}: {e}", path.display())))?;
        let mut w = BufWriter::new(file);
        write_transcripts(&mut w, &points)?;
        w.flush().map_err(|e| ConfigError::Io(e.to_string()))?;
    }
    Ok(())
}
