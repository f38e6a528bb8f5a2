//! Points files, CSV and SVG export.
//!
//! A points file is one JSON document:
//!
//! ```json
//! {"n": 128, "params": {"p": 521, "a": 1, "b": 2, "c": 3, "d": 4, "e": 5}, "points": [[0, 7], [3, 1]]}
//! ```
//!
//! `params` is optional. Reading is strict: unknown fields, repeated or
//! out-of-grid points, and points off the stated parabola are all rejected.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::construction::ParabolaParams;
use crate::error::{Error, Result};
use crate::patterns::{GridPoint, PointSet};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointsFile {
    pub n: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<ParabolaParams>,
    pub points: Vec<[i64; 2]>,
}

impl PointsFile {
    pub fn from_set(set: &PointSet, params: Option<ParabolaParams>) -> Self {
        PointsFile { n: set.n(), params, points: set.iter().map(|p| [p.x.into(), p.y.into()]).collect() }
    }

    /// Validates the document and returns its point set.
    pub fn to_set(&self) -> Result<PointSet> {
        if self.n == 0 || self.n >= 1 << 16 {
            return Err(Error::Format(format!("grid size {} out of range", self.n)));
        }
        let mut pts = Vec::with_capacity(self.points.len());
        for &[x, y] in &self.points {
            if x < 0 || y < 0 || x >= i64::from(self.n) || y >= i64::from(self.n) {
                return Err(Error::OutOfGrid { x, y, n: self.n });
            }
            pts.push(GridPoint::new(x as i32, y as i32));
        }
        let set = PointSet::new(self.n, pts)?;
        if let Some(params) = &self.params {
            if let Some(bad) = set.iter().find(|&&q| !params.contains_grid(q)) {
                return Err(Error::Format(format!("point {bad:?} is not on the parabola {params}")));
            }
        }
        Ok(set)
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))
    }

    pub fn read(path: &Path) -> Result<(Self, PointSet)> {
        let text = fs::read_to_string(path).map_err(|source| Error::Io { path: path.into(), source })?;
        let file = PointsFile::parse(&text)?;
        let set = file.to_set()?;
        Ok((file, set))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string(self).expect("points file serializes");
        s.push('\n');
        s
    }
}

/// `x,y` header, one point per line, LF endings.
pub fn to_csv(set: &PointSet) -> String {
    let mut out = String::from("x,y\n");
    for p in set.iter() {
        let _ = writeln!(out, "{},{}", p.x, p.y);
    }
    out
}

/// Static SVG 1.1 scatter plot on a 1024-unit viewport with the grid border.
pub fn to_svg(set: &PointSet) -> String {
    const VIEW: f64 = 1024.0;
    const MARGIN: f64 = 16.0;
    let n = f64::from(set.n().max(1));
    let scale = (VIEW - 2.0 * MARGIN) / n;
    let r = (scale * 0.4).clamp(1.5, 6.0);
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{VIEW}\" height=\"{VIEW}\" viewBox=\"0 0 {VIEW} {VIEW}\">"
    );
    let _ = writeln!(
        out,
        "  <rect x=\"{MARGIN}\" y=\"{MARGIN}\" width=\"{w:.2}\" height=\"{w:.2}\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>",
        w = VIEW - 2.0 * MARGIN
    );
    for p in set.iter() {
        // Grid y grows upward.
        let cx = MARGIN + (f64::from(p.x) + 0.5) * scale;
        let cy = VIEW - MARGIN - (f64::from(p.y) + 0.5) * scale;
        let _ = writeln!(out, "  <circle cx=\"{cx:.2}\" cy=\"{cy:.2}\" r=\"{r:.2}\" fill=\"black\"/>");
    }
    out.push_str("</svg>\n");
    out
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Writes to a sibling temporary file, then renames over `path`.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let io_err = |source| Error::Io { path: path.into(), source };
    let name =
        path.file_name().ok_or_else(|| Error::InvalidArgument(format!("{} is not a file path", path.display())))?;
    let mut tmp_name = std::ffi::OsString::from(".");
    tmp_name.push(name);
    tmp_name.push(".tmp");
    let tmp = path.with_file_name(tmp_name);
    let mut f = fs::File::create(&tmp).map_err(io_err)?;
    f.write_all(contents).map_err(io_err)?;
    f.sync_all().map_err(io_err)?;
    drop(f);
    fs::rename(&tmp, path).map_err(io_err)
}
