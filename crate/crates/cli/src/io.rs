use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{anyhow, bail, Context};
use isopair_core::linalg::json::rows_to_matrix;
use isopair_core::linalg::{CMatrix, ExtPoint, C64};
use isopair_core::single::SchurParameter;
use isopair_core::Instance;
use serde::de::DeserializeOwned;
use serde::Deserialize;

use crate::report::{input, CmdResult};

pub fn read_json<T: DeserializeOwned>(path: &Path) -> CmdResult<T> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(input)?;
    serde_json::from_str(&text)
        .with_context(|| format!("parsing {}", path.display()))
        .map_err(input)
}

pub fn read_instance(path: &Path) -> CmdResult<Instance> {
    read_json(path)
}

pub fn read_phi(path: Option<&Path>) -> CmdResult<Option<SchurParameter>> {
    path.map(read_json).transpose()
}

/// A bare matrix, or an object holding one under `"U"`.
pub fn read_matrix(path: &Path) -> CmdResult<CMatrix> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Shape {
        Wrapped {
            #[serde(rename = "U")]
            u: Vec<Vec<[f64; 2]>>,
        },
        Bare(Vec<Vec<[f64; 2]>>),
    }
    let rows = match read_json::<Shape>(path)? {
        Shape::Wrapped { u } | Shape::Bare(u) => u,
    };
    rows_to_matrix(&rows).map_err(|e| input(anyhow!(e)))
}

/// `re,im` or `inf`.
pub fn parse_point(s: &str) -> anyhow::Result<ExtPoint> {
    let t = s.trim();
    if t.eq_ignore_ascii_case("inf") {
        return Ok(ExtPoint::Infinity);
    }
    let parts: Vec<&str> = t.split(',').collect();
    let [re, im] = parts.as_slice() else {
        bail!("expected `re,im` or `inf`, got {s:?}");
    };
    let z = C64::new(re.trim().parse()?, im.trim().parse()?);
    if !z.is_finite() {
        bail!("point {s:?} is not finite");
    }
    Ok(ExtPoint::Finite(z))
}

pub fn parse_entry(s: &str) -> anyhow::Result<(usize, usize)> {
    let (i, j) = s.split_once(',').ok_or_else(|| anyhow!("expected `row,col`, got {s:?}"))?;
    Ok((i.trim().parse()?, j.trim().parse()?))
}

/// Writes to `out`, or to stdout when absent.
pub fn emit(out: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

pub fn to_json<T: serde::Serialize>(v: &T) -> anyhow::Result<String> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}
