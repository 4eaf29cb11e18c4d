//! Drive-cycle CSV files. Two header layouts are accepted verbatim:
//! `t_s,q_Wm3` (volumetric heat) and `t_s,I_A,V_V,Vocv_V` (electrical).

use std::path::Path;

use spectherm::{HeatProfile, ProfileKind};

use crate::error::{CliError, CliResult};

const VOLUMETRIC_HEADER: [&str; 2] = ["t_s", "q_Wm3"];
const ELECTRICAL_HEADER: [&str; 4] = ["t_s", "I_A", "V_V", "Vocv_V"];

fn parse_error(path: &Path, line: Option<usize>, message: String) -> CliError {
    CliError::Config { path: Some(path.to_path_buf()), line, message }
}

pub fn ingest_drive_cycle(path: &Path) -> CliResult<HeatProfile> {
    let file = std::fs::File::open(path).map_err(|e| CliError::io(format!("opening {}", path.display()), e))?;
    parse_drive_cycle(file, path)
}

/// Parses CSV text; `path` only labels errors.
pub fn parse_drive_cycle(reader: impl std::io::Read, path: &Path) -> CliResult<HeatProfile> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
    let header: Vec<String> = rdr
        .headers()
        .map_err(|e| parse_error(path, Some(1), e.to_string()))?
        .iter()
        .map(str::to_string)
        .collect();
    let width = if header == VOLUMETRIC_HEADER {
        2
    } else if header == ELECTRICAL_HEADER {
        4
    } else {
        return Err(parse_error(
            path,
            Some(1),
            format!("header must be `t_s,q_Wm3` or `t_s,I_A,V_V,Vocv_V`, got `{}`", header.join(",")),
        ));
    };
    let mut cols: Vec<Vec<f64>> = vec![Vec::new(); width];
    for record in rdr.records() {
        let record = record.map_err(|e| {
            let line = e.position().map(|p| p.line() as usize);
            parse_error(path, line, e.to_string())
        })?;
        let line = record.position().map(|p| p.line() as usize);
        if record.len() != width {
            return Err(parse_error(path, line, format!("expected {width} fields, found {}", record.len())));
        }
        for (c, field) in cols.iter_mut().zip(record.iter()) {
            let v: f64 = field
                .trim()
                .parse()
                .map_err(|_| parse_error(path, line, format!("`{field}` is not a number")))?;
            if !v.is_finite() {
                return Err(parse_error(path, line, format!("`{field}` is not finite")));
            }
            c.push(v);
        }
        if let [.., prev, last] = cols[0].as_slice() {
            if last <= prev {
                return Err(parse_error(path, line, format!("time {last} does not increase (previous {prev})")));
            }
        }
    }
    let times = cols.remove(0);
    let profile = if width == 2 {
        HeatProfile::volumetric(times, cols.remove(0))
    } else {
        let (current, voltage, ocv) = (cols.remove(0), cols.remove(0), cols.remove(0));
        HeatProfile::electrical(times, current, voltage, ocv)
    };
    profile.map_err(|e| parse_error(path, None, e.to_string()))
}

/// Writes a profile in the layout matching its kind. Values use the shortest
/// representation that reads back to the same `f64`.
pub fn write_drive_cycle(profile: &HeatProfile, writer: impl std::io::Write) -> CliResult<()> {
    let mut w = csv::Writer::from_writer(writer);
    let io = |e: csv::Error| CliError::io("writing drive cycle", e.into());
    let t = profile.times();
    match profile.kind() {
        ProfileKind::VolumetricQ(q) => {
            w.write_record(VOLUMETRIC_HEADER).map_err(io)?;
            for (t, q) in t.iter().zip(q) {
                w.write_record([t.to_string(), q.to_string()]).map_err(io)?;
            }
        }
        ProfileKind::ElectricalIvo { current, voltage, ocv } => {
            w.write_record(ELECTRICAL_HEADER).map_err(io)?;
            for k in 0..t.len() {
                w.write_record([t[k], current[k], voltage[k], ocv[k]].map(|v| v.to_string())).map_err(io)?;
            }
        }
    }
    w.flush().map_err(|e| CliError::io("writing drive cycle", e))
}
