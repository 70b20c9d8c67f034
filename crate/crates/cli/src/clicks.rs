//! Click-stream files: CSV and fixed-size little-endian binary records.
//!
//! Binary record layout (22 bytes): `u64 run_id`, `u16 step`, `i16 position`,
//! `u8 polarization` (0 = H, 1 = V), `u8 detector` (0 = H-port, 1 = V-port),
//! `f64 time_ns`.

use std::io::{Read, Write};

use qwalk::emulator::{ClickEvent, Detector};
use qwalk::Coin;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const RECORD_LEN: usize = 22;

pub const HEADER: [&str; 6] = [
    "run_id",
    "step",
    "position",
    "polarization",
    "detector",
    "time_ns",
];

#[derive(Debug, Serialize, Deserialize)]
struct CsvClick {
    run_id: u64,
    step: usize,
    position: i32,
    polarization: String,
    detector: String,
    time_ns: f64,
}

fn detector_name(d: Detector) -> &'static str {
    match d {
        Detector::HPort => "H-port",
        Detector::VPort => "V-port",
    }
}

fn parse_detector(s: &str) -> Option<Detector> {
    match s {
        "H-port" => Some(Detector::HPort),
        "V-port" => Some(Detector::VPort),
        _ => None,
    }
}

pub fn write_csv<W: Write>(out: W, clicks: &[ClickEvent]) -> Result<(), CliError> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(out);
    w.write_record(HEADER)?;
    for c in clicks {
        w.serialize(CsvClick {
            run_id: c.run_id,
            step: c.step,
            position: c.position,
            polarization: c.polarization.to_string(),
            detector: detector_name(c.detector).to_owned(),
            time_ns: c.time_ns,
        })?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<R: Read>(input: R) -> Result<Vec<ClickEvent>, CliError> {
    let mut r = csv::Reader::from_reader(input);
    let mut out = Vec::new();
    for row in r.deserialize() {
        let row: CsvClick = row?;
        let polarization: Coin = row
            .polarization
            .parse()
            .map_err(|_| CliError::Data(format!("bad polarization `{}`", row.polarization)))?;
        let detector = parse_detector(&row.detector)
            .ok_or_else(|| CliError::Data(format!("bad detector `{}`", row.detector)))?;
        out.push(ClickEvent {
            run_id: row.run_id,
            step: row.step,
            position: row.position,
            polarization,
            detector,
            time_ns: row.time_ns,
        });
    }
    Ok(out)
}

pub fn encode_record(c: &ClickEvent) -> [u8; RECORD_LEN] {
    let mut b = [0u8; RECORD_LEN];
    b[0..8].copy_from_slice(&c.run_id.to_le_bytes());
    b[8..10].copy_from_slice(&(c.step as u16).to_le_bytes());
    b[10..12].copy_from_slice(&(c.position as i16).to_le_bytes());
    b[12] = c.polarization.index() as u8;
    b[13] = c.detector.index();
    b[14..22].copy_from_slice(&c.time_ns.to_le_bytes());
    b
}

pub fn decode_record(b: &[u8; RECORD_LEN]) -> Result<ClickEvent, CliError> {
    let polarization = match b[12] {
        0 => Coin::H,
        1 => Coin::V,
        other => return Err(CliError::Data(format!("bad polarization byte {other}"))),
    };
    let detector = Detector::from_index(b[13])
        .ok_or_else(|| CliError::Data(format!("bad detector byte {}", b[13])))?;
    Ok(ClickEvent {
        run_id: u64::from_le_bytes(b[0..8].try_into().unwrap()),
        step: u16::from_le_bytes(b[8..10].try_into().unwrap()) as usize,
        position: i16::from_le_bytes(b[10..12].try_into().unwrap()) as i32,
        polarization,
        detector,
        time_ns: f64::from_le_bytes(b[14..22].try_into().unwrap()),
    })
}

pub fn write_binary<W: Write>(mut out: W, clicks: &[ClickEvent]) -> Result<(), CliError> {
    for c in clicks {
        out.write_all(&encode_record(c))?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_binary<R: Read>(mut input: R) -> Result<Vec<ClickEvent>, CliError> {
    let mut bytes = Vec::new();
    input.read_to_end(&mut bytes)?;
    if bytes.len() % RECORD_LEN != 0 {
        return Err(CliError::Data(format!(
            "binary click stream length {} is not a multiple of {RECORD_LEN}",
            bytes.len()
        )));
    }
    bytes
        .chunks_exact(RECORD_LEN)
        .map(|chunk| decode_record(chunk.try_into().unwrap()))
        .collect()
}
