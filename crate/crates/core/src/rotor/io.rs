//! Text formats for density blocks (JSON) and measurement grids (CSV).
//!
//! Block file, upper triangle only (`J1 <= J2`), Hermitian completion on load:
//!
//! ```text
//! {"k": 0, "m": 0, "j_max": 2, "entries": [[0, 0, 0.5, 0.0], [0, 2, 0.1, -0.2], ...]}
//! ```
//!
//! Measurement file: one header line, then one `t, x, weight, pr` row per
//! sample in time-major order:
//!
//! ```text
//! # omega=1, kind=rigid-linear, k=0, m=0, n_t=43, n_x=13, n_periods=1
//! 0.0, -0.98156063424671924, 0.047175336386511828, 0.5
//! ```
//!
//! Numbers are written in shortest round-trip form, so write-then-read is
//! exact.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{DensityBlock, GridHeader, MeasurementGrid, RotorKind, TimeSamples};
use crate::basis::QuadratureGrid;
use crate::{Error, Result};

#[derive(Serialize, Deserialize)]
struct BlockFile {
    k: i32,
    m: i32,
    j_max: u32,
    entries: Vec<(u32, u32, f64, f64)>,
}

pub fn block_to_json(block: &DensityBlock) -> String {
    let file = BlockFile {
        k: block.k(),
        m: block.m(),
        j_max: block.j_max(),
        entries: block.upper_triangle().map(|(a, b, v)| (a, b, v.re, v.im)).collect(),
    };
    serde_json::to_string_pretty(&file).expect("block serializes")
}

pub fn block_from_json(text: &str) -> Result<DensityBlock> {
    let file: BlockFile = serde_json::from_str(text)?;
    let mut block = DensityBlock::zeros(file.k, file.m, file.j_max)?;
    let mut seen = std::collections::HashSet::new();
    for (i, &(a, b, re, im)) in file.entries.iter().enumerate() {
        let bad = |msg: String| Error::domain(format!("entries[{i}] = [{a}, {b}, ..]: {msg}"));
        if a > b {
            return Err(bad("only the upper triangle J1 <= J2 may be listed".into()));
        }
        if a < block.j_min() || b > block.j_max() {
            return Err(bad(format!("outside {}..={}", block.j_min(), block.j_max())));
        }
        if !seen.insert((a, b)) {
            return Err(bad("duplicate entry".into()));
        }
        if a == b && im.abs() > 1e-12 {
            return Err(bad(format!("diagonal entry has imaginary part {im}")));
        }
        block.set_hermitian(a, b, Complex64::new(re, im));
    }
    Ok(block)
}

pub fn save_block(path: impl AsRef<Path>, block: &DensityBlock) -> Result<()> {
    std::fs::write(path, block_to_json(block) + "\n")?;
    Ok(())
}

pub fn load_block(path: impl AsRef<Path>) -> Result<DensityBlock> {
    block_from_json(&std::fs::read_to_string(path)?)
}

pub fn grid_to_csv(grid: &MeasurementGrid) -> String {
    let h = &grid.header;
    let times = grid.times();
    let mut out = format!(
        "# omega={:?}, kind={}, k={}, m={}, n_t={}, n_x={}, n_periods={}\n",
        h.omega,
        h.kind,
        h.k,
        h.m,
        times.n_t(),
        grid.n_x(),
        times.n_periods()
    );
    for i in 0..grid.n_t() {
        let t = times.t(i);
        for (j, (x, w)) in grid.x_grid().iter().enumerate() {
            out.push_str(&format!("{t:?}, {x:?}, {w:?}, {:?}\n", grid.value(i, j)));
        }
    }
    out
}

pub fn grid_from_csv(text: &str) -> Result<MeasurementGrid> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    let (hline, header_text) = lines
        .by_ref()
        .find(|(_, l)| !l.is_empty())
        .ok_or_else(|| Error::parse(1, "empty measurement file"))?;
    let fields = header_text
        .strip_prefix('#')
        .ok_or_else(|| Error::parse(hline, "first line must be the `# omega=..` header"))?;

    let mut omega = None;
    let mut kind = None;
    let (mut k, mut m, mut n_t, mut n_x, mut n_periods) = (None, None, None, None, None);
    for field in fields.split(',') {
        let (key, value) = field
            .split_once('=')
            .ok_or_else(|| Error::parse(hline, format!("header field `{}` lacks `=`", field.trim())))?;
        let value = value.trim();
        let num_err = |key: &str| Error::parse(hline, format!("header field `{key}` has bad value `{value}`"));
        match key.trim() {
            "omega" => omega = Some(value.parse::<f64>().map_err(|_| num_err("omega"))?),
            "kind" => kind = Some(value.parse::<RotorKind>().map_err(|e| Error::parse(hline, e.to_string()))?),
            "k" => k = Some(value.parse::<i32>().map_err(|_| num_err("k"))?),
            "m" => m = Some(value.parse::<i32>().map_err(|_| num_err("m"))?),
            "n_t" => n_t = Some(value.parse::<usize>().map_err(|_| num_err("n_t"))?),
            "n_x" => n_x = Some(value.parse::<usize>().map_err(|_| num_err("n_x"))?),
            "n_periods" => n_periods = Some(value.parse::<u32>().map_err(|_| num_err("n_periods"))?),
            other => return Err(Error::parse(hline, format!("unknown header field `{other}`"))),
        }
    }
    let missing = |name: &str| Error::parse(hline, format!("header is missing `{name}`"));
    let header = GridHeader {
        omega: omega.ok_or_else(|| missing("omega"))?,
        kind: kind.ok_or_else(|| missing("kind"))?,
        k: k.ok_or_else(|| missing("k"))?,
        m: m.ok_or_else(|| missing("m"))?,
    };
    let n_t = n_t.ok_or_else(|| missing("n_t"))?;
    let n_x = n_x.ok_or_else(|| missing("n_x"))?;
    let n_periods = n_periods.ok_or_else(|| missing("n_periods"))?;
    if !(header.omega > 0.0) {
        return Err(Error::parse(hline, "omega must be positive"));
    }
    let times = TimeSamples::new(n_t, n_periods, std::f64::consts::PI / header.omega)
        .map_err(|e| Error::parse(hline, e.to_string()))?;

    let mut nodes = Vec::with_capacity(n_x);
    let mut weights = Vec::with_capacity(n_x);
    let mut values = Vec::with_capacity(n_t * n_x);
    let mut row = 0usize;
    for (ln, line) in lines {
        if line.is_empty() || line.starts_with('#') || line.starts_with('t') {
            continue;
        }
        let cols: Vec<&str> = line.split(',').map(str::trim).collect();
        if cols.len() != 4 {
            return Err(Error::parse(ln, format!("expected 4 columns `t, x, weight, pr`, found {}", cols.len())));
        }
        let mut nums = [0.0; 4];
        for (slot, (name, text)) in nums.iter_mut().zip(["t", "x", "weight", "pr"].iter().zip(&cols)) {
            *slot = text.parse().map_err(|_| Error::parse(ln, format!("column `{name}` is not a number: `{text}`")))?;
        }
        let [t, x, w, pr] = nums;
        if row >= n_t * n_x {
            return Err(Error::parse(ln, format!("more than n_t * n_x = {} rows", n_t * n_x)));
        }
        let (i, j) = (row / n_x, row % n_x);
        let t_expected = times.t(i);
        if (t - t_expected).abs() > 1e-9 * times.window().max(1.0) {
            return Err(Error::parse(ln, format!("column `t` = {t} but sample {i} is at {t_expected}")));
        }
        if i == 0 {
            nodes.push(x);
            weights.push(w);
        } else if x != nodes[j] || w != weights[j] {
            return Err(Error::parse(ln, format!("column `x`/`weight` differs from the first time slice at node {j}")));
        }
        values.push(pr);
        row += 1;
    }
    if row != n_t * n_x {
        return Err(Error::parse(
            text.lines().count(),
            format!("expected n_t * n_x = {} rows, found {row}", n_t * n_x),
        ));
    }
    let x_grid = QuadratureGrid::from_parts(nodes, weights).map_err(|e| Error::parse(hline + 1, e.to_string()))?;
    MeasurementGrid::new(header, x_grid, times, values)
}

pub fn save_grid(path: impl AsRef<Path>, grid: &MeasurementGrid) -> Result<()> {
    std::fs::write(path, grid_to_csv(grid))?;
    Ok(())
}

pub fn load_grid(path: impl AsRef<Path>) -> Result<MeasurementGrid> {
    grid_from_csv(&std::fs::read_to_string(path)?)
}
