//! Text formats for matrices, states, circuits and spectra.
//!
//! Floats in CSV use `{:.16e}` (17 significant digits), which round-trips
//! every finite `f64`. JSON goes through serde_json, whose float printer is
//! also round-trip exact.

use std::io::{Read, Write};

use anyhow::{bail, Context, Result};
use num_complex::Complex64;
use qubit_baker::analysis::SpectrumReport;
use qubit_baker::baker::{Gate, GateList};
use qubit_baker::UnitaryMatrix;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Formats a float with 17 significant digits.
pub fn f17(x: f64) -> String {
    format!("{x:.16e}")
}

fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

pub fn write_matrix(m: &UnitaryMatrix, format: Format, out: &mut dyn Write) -> Result<()> {
    let d = m.dim();
    match format {
        Format::Csv => {
            writeln!(out, "row,col,re,im")?;
            for r in 0..d {
                for (c, z) in m.row(r).iter().enumerate() {
                    writeln!(out, "{r},{c},{},{}", f17(z.re), f17(z.im))?;
                }
            }
        }
        Format::Json => {
            let rows: Vec<Vec<[f64; 2]>> = (0..d).map(|r| m.row(r).iter().copied().map(pair).collect()).collect();
            serde_json::to_writer(&mut *out, &rows)?;
            writeln!(out)?;
        }
    }
    Ok(())
}

#[derive(Debug, Serialize, Deserialize)]
struct AmplitudeRow {
    index: usize,
    re: f64,
    im: f64,
}

pub fn write_state(amps: &[Complex64], format: Format, out: &mut dyn Write) -> Result<()> {
    match format {
        Format::Csv => {
            writeln!(out, "index,re,im")?;
            for (index, z) in amps.iter().enumerate() {
                writeln!(out, "{index},{},{}", f17(z.re), f17(z.im))?;
            }
        }
        Format::Json => {
            let v: Vec<[f64; 2]> = amps.iter().copied().map(pair).collect();
            serde_json::to_writer(&mut *out, &v)?;
            writeln!(out)?;
        }
    }
    Ok(())
}

/// Reads amplitudes written by [`write_state`] in either format. CSV rows may
/// come in any order but must cover every index exactly once.
pub fn read_state(input: impl Read, format: Format) -> Result<Vec<Complex64>> {
    match format {
        Format::Json => {
            let v: Vec<[f64; 2]> = serde_json::from_reader(input).context("state JSON")?;
            Ok(v.into_iter().map(|[re, im]| Complex64::new(re, im)).collect())
        }
        Format::Csv => {
            let rows: Vec<AmplitudeRow> = csv::Reader::from_reader(input)
                .deserialize()
                .collect::<std::result::Result<_, _>>()
                .context("state CSV")?;
            let mut amps = vec![None; rows.len()];
            for row in rows {
                match amps.get_mut(row.index) {
                    Some(slot @ None) => *slot = Some(Complex64::new(row.re, row.im)),
                    Some(Some(_)) => bail!("duplicate amplitude index {}", row.index),
                    None => bail!("amplitude index {} out of range", row.index),
                }
            }
            Ok(amps.into_iter().map(|z| z.expect("every slot filled")).collect())
        }
    }
}

fn gate_record(g: &Gate) -> Value {
    let mut rec = json!({ "kind": g.kind(), "targets": g.targets() });
    match g {
        Gate::SingleQubit { matrix, .. } => {
            let m: Vec<Vec<[f64; 2]>> = matrix.iter().map(|row| row.iter().copied().map(pair).collect()).collect();
            rec["matrix"] = json!(m);
        }
        Gate::ControlledPhase { angle, .. } | Gate::GlobalPhase { angle } => rec["angle"] = json!(angle),
        Gate::Swap { .. } => {}
    }
    rec
}

pub fn circuit_json(gl: &GateList) -> Value {
    json!({
        "N": gl.dims().qubits(),
        "gates": gl.gates().iter().map(gate_record).collect::<Vec<_>>(),
    })
}

/// Rebuilds a gate list from [`circuit_json`] output.
#[cfg(test)]
pub fn parse_circuit(v: &Value) -> Result<GateList> {
    let qubits = v["N"].as_u64().context("circuit N")? as usize;
    let slot = |t: &Value, i: usize| -> Result<usize> {
        t.get(i).and_then(Value::as_u64).map(|s| s as usize).context("gate target")
    };
    let mut gates = Vec::new();
    for g in v["gates"].as_array().context("circuit gates")? {
        let t = &g["targets"];
        let angle = || g["angle"].as_f64().context("gate angle");
        gates.push(match g["kind"].as_str().context("gate kind")? {
            "single_qubit" => {
                let m: [[[f64; 2]; 2]; 2] = serde_json::from_value(g["matrix"].clone())?;
                Gate::SingleQubit {
                    target: slot(t, 0)?,
                    matrix: m.map(|row| row.map(|[re, im]| Complex64::new(re, im))),
                }
            }
            "controlled_phase" => Gate::ControlledPhase {
                control: slot(t, 0)?,
                target: slot(t, 1)?,
                angle: angle()?,
            },
            "swap" => Gate::Swap {
                a: slot(t, 0)?,
                b: slot(t, 1)?,
            },
            "global_phase" => Gate::GlobalPhase { angle: angle()? },
            other => bail!("unknown gate kind {other:?}"),
        });
    }
    Ok(GateList::new(qubit_baker::Dimensions::new(qubits)?, gates)?)
}

pub fn write_spectrum(report: &SpectrumReport, out: &mut dyn Write) -> Result<()> {
    writeln!(out, "index,phase,spacing")?;
    for (i, (p, s)) in report.phases.iter().zip(&report.spacings).enumerate() {
        writeln!(out, "{i},{},{}", f17(*p), f17(*s))?;
    }
    Ok(())
}
