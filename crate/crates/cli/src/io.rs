//! Argument parsing helpers and file/stdin plumbing.

use std::fs;
use std::io::{self, Read};
use std::path::{Path, PathBuf};

use lamina::entropy::SweepRow;
use lamina::lamination::LaminationDoc;
use lamina::major::MajorDoc;
use lamina::{Angle, BigInt, FiniteLamination, PrimitiveMajor};

pub fn parse_angle(s: &str) -> Result<Angle, String> {
    s.trim().parse::<Angle>().map_err(|e| e.to_string())
}

pub fn parse_angle_list(s: &str) -> Result<Vec<Angle>, String> {
    s.split(',').filter(|t| !t.trim().is_empty()).map(parse_angle).collect()
}

/// "1/10,13/30;1/2,5/6" → classes.
pub fn parse_classes(s: &str) -> Result<Vec<Vec<Angle>>, String> {
    s.split(';').filter(|c| !c.trim().is_empty()).map(parse_angle_list).collect()
}

pub fn read_input(path: Option<&Path>) -> io::Result<String> {
    match path {
        Some(p) if p != Path::new("-") => fs::read_to_string(p),
        _ => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s)?;
            Ok(s)
        }
    }
}

pub fn write_output(path: Option<&PathBuf>, text: &str) -> io::Result<()> {
    match path {
        Some(p) => fs::write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn major_from_json(text: &str) -> Result<PrimitiveMajor, String> {
    let doc: MajorDoc<BigInt> = serde_json::from_str(text).map_err(|e| format!("major JSON: {e}"))?;
    Ok(doc.into())
}

pub fn lamination_from_json(text: &str) -> Result<FiniteLamination, String> {
    let doc: LaminationDoc<BigInt> = serde_json::from_str(text).map_err(|e| format!("lamination JSON: {e}"))?;
    FiniteLamination::try_from(doc).map_err(|e| e.to_string())
}

pub fn to_json<T: serde::Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string(v).expect("serializable");
    s.push('\n');
    s
}

/// Reads the CSV written by `sweep`.
pub fn parse_sweep_csv(text: &str) -> Result<Vec<SweepRow>, String> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h.trim() == lamina::entropy::CSV_HEADER => {}
        _ => return Err(format!("expected header `{}`", lamina::entropy::CSV_HEADER)),
    }
    lines
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            let f: Vec<&str> = l.split(',').collect();
            let bad = || format!("line {}: malformed row `{l}`", i + 2);
            if f.len() != 5 {
                return Err(bad());
            }
            Ok(SweepRow {
                theta_num: f[0].parse().map_err(|_| bad())?,
                theta_den: f[1].parse().map_err(|_| bad())?,
                rho: f[2].parse().map_err(|_| bad())?,
                entropy: f[3].parse().map_err(|_| bad())?,
                dimension: f[4].parse().map_err(|_| bad())?,
            })
        })
        .collect()
}
