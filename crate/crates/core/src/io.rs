//! CSV and JSON files for sampled boundary functions and slice functions.
//!
//! Sampled functions: header `polar_idx,azimuth_idx,t_idx,w,x,y,z`, preceded
//! by `#` lines carrying the library version, the seed and the grid as JSON
//! (`# grid: {...}`). JSON files hold `{"grid": ..., "samples": [[polar_idx,
//! azimuth_idx, t_idx, w, x, y, z], ...]}`. Slice functions use
//! `t_idx,a_w,a_x,a_y,a_z,b_w,b_x,b_y,b_z` with a `# n_t: N` line, or
//! `{"n_t": N, "a": [[w,x,y,z], ...], "b": [...]}`.
//! Floats are written in shortest round-trip form.

use std::fs;
use std::io::Write;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{GridSpec, SampledFunction};
use crate::quaternion::Quaternion;
use crate::slice::SliceFunction;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Run metadata written at the top of every file.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Provenance {
    pub seed: Option<u64>,
    /// Further `key: value` lines, written in order.
    pub notes: Vec<(String, String)>,
}

impl Provenance {
    pub fn with_seed(seed: u64) -> Self {
        Self { seed: Some(seed), notes: Vec::new() }
    }

    pub fn note(mut self, key: impl Into<String>, value: impl Into<String>) -> Self {
        self.notes.push((key.into(), value.into()));
        self
    }

    fn write_comments<W: Write>(&self, w: &mut W) -> Result<()> {
        writeln!(w, "# slicenorm {VERSION}")?;
        if let Some(seed) = self.seed {
            writeln!(w, "# seed: {seed}")?;
        }
        for (k, v) in &self.notes {
            writeln!(w, "# {k}: {v}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    /// `.json` means JSON, anything else CSV.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("json") => Format::Json,
            _ => Format::Csv,
        }
    }
}

/// Value of a `# key: value` comment line.
fn comment_value<'a>(text: &'a str, key: &str) -> Option<&'a str> {
    text.lines()
        .take_while(|l| l.starts_with('#') || l.trim().is_empty())
        .filter_map(|l| l.strip_prefix('#'))
        .filter_map(|l| l.trim_start().strip_prefix(key))
        .find_map(|rest| rest.strip_prefix(':'))
        .map(str::trim)
}

fn csv_reader(text: &str) -> csv::Reader<&[u8]> {
    csv::ReaderBuilder::new().comment(Some(b'#')).trim(csv::Trim::All).from_reader(text.as_bytes())
}

fn check_header(reader: &mut csv::Reader<&[u8]>, expected: &[&str]) -> Result<()> {
    let header = reader.headers()?;
    if header.iter().ne(expected.iter().copied()) {
        return Err(Error::Parse(format!("expected header `{}`, found `{}`", expected.join(","), header.iter().collect::<Vec<_>>().join(","))));
    }
    Ok(())
}

const SAMPLED_HEADER: [&str; 7] = ["polar_idx", "azimuth_idx", "t_idx", "w", "x", "y", "z"];
const SLICE_HEADER: [&str; 9] = ["t_idx", "a_w", "a_x", "a_y", "a_z", "b_w", "b_x", "b_y", "b_z"];

#[derive(Serialize, Deserialize)]
struct SampledJson {
    #[serde(default)]
    version: Option<String>,
    #[serde(default)]
    seed: Option<u64>,
    grid: GridSpec,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    notes: Vec<(String, String)>,
    samples: Vec<(usize, usize, usize, f64, f64, f64, f64)>,
}

#[derive(Serialize, Deserialize)]
struct SliceJson {
    #[serde(default)]
    version: Option<String>,
    #[serde(default)]
    seed: Option<u64>,
    n_t: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    notes: Vec<(String, String)>,
    a: Vec<[f64; 4]>,
    b: Vec<[f64; 4]>,
}

/// Sampled function as CSV text.
pub fn sampled_to_csv(phi: &SampledFunction, prov: &Provenance) -> Result<String> {
    let mut out = Vec::new();
    prov.write_comments(&mut out)?;
    writeln!(out, "# grid: {}", serde_json::to_string(&phi.grid().spec())?)?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SAMPLED_HEADER)?;
    let grid = phi.grid();
    for node in 0..grid.n_nodes() {
        let (pi, ai) = grid.sphere().split_index(node);
        for (k, v) in phi.slice(node).iter().enumerate() {
            w.write_record(&[pi.to_string(), ai.to_string(), k.to_string(), v.w.to_string(), v.x.to_string(), v.y.to_string(), v.z.to_string()])?;
        }
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("ascii output"))
}

/// Sampled function as JSON text.
pub fn sampled_to_json(phi: &SampledFunction, prov: &Provenance) -> Result<String> {
    let grid = phi.grid();
    let mut samples = Vec::with_capacity(grid.len());
    for node in 0..grid.n_nodes() {
        let (pi, ai) = grid.sphere().split_index(node);
        for (k, v) in phi.slice(node).iter().enumerate() {
            samples.push((pi, ai, k, v.w, v.x, v.y, v.z));
        }
    }
    let doc = SampledJson { version: Some(VERSION.into()), seed: prov.seed, grid: grid.spec(), notes: prov.notes.clone(), samples };
    Ok(serde_json::to_string(&doc)?)
}

fn assemble(spec: GridSpec, rows: impl Iterator<Item = Result<(usize, usize, usize, Quaternion)>>) -> Result<SampledFunction> {
    let grid = Arc::new(spec.build()?);
    let mut values = vec![Quaternion::ZERO; grid.len()];
    let mut seen = vec![false; grid.len()];
    for row in rows {
        let (pi, ai, k, q) = row?;
        if pi >= spec.n_polar || ai >= spec.n_azimuth || k >= spec.n_t {
            return Err(Error::Parse(format!("index ({pi}, {ai}, {k}) outside the grid")));
        }
        let idx = grid.index(pi * spec.n_azimuth + ai, k);
        if seen[idx] {
            return Err(Error::Parse(format!("duplicate sample ({pi}, {ai}, {k})")));
        }
        seen[idx] = true;
        values[idx] = q;
    }
    if let Some(missing) = seen.iter().position(|s| !s) {
        let (node, k) = (missing / spec.n_t, missing % spec.n_t);
        let (pi, ai) = grid.sphere().split_index(node);
        return Err(Error::Parse(format!("missing sample ({pi}, {ai}, {k})")));
    }
    SampledFunction::from_values(grid, values)
}

/// Parses CSV text. Without a `# grid:` line the sizes are taken from the
/// largest indices and the Gauss–Legendre rule with pole `k` is assumed.
pub fn sampled_from_csv(text: &str) -> Result<SampledFunction> {
    let mut reader = csv_reader(text);
    check_header(&mut reader, &SAMPLED_HEADER)?;
    let mut rows = Vec::new();
    for rec in reader.records() {
        let rec = rec?;
        if rec.len() != 7 {
            return Err(Error::Parse(format!("expected 7 fields, found {}", rec.len())));
        }
        let idx = |i: usize| rec[i].parse::<usize>().map_err(|e| Error::Parse(format!("field {}: {e}", SAMPLED_HEADER[i])));
        let num = |i: usize| rec[i].parse::<f64>().map_err(|e| Error::Parse(format!("field {}: {e}", SAMPLED_HEADER[i])));
        rows.push((idx(0)?, idx(1)?, idx(2)?, Quaternion::new(num(3)?, num(4)?, num(5)?, num(6)?)));
    }
    let spec = match comment_value(text, "grid") {
        Some(json) => serde_json::from_str(json)?,
        None => {
            let max = |f: fn(&(usize, usize, usize, Quaternion)) -> usize| rows.iter().map(f).max().map_or(0, |m| m + 1);
            GridSpec::new(max(|r| r.0), max(|r| r.1), max(|r| r.2))
        }
    };
    assemble(spec, rows.into_iter().map(Ok))
}

pub fn sampled_from_json(text: &str) -> Result<SampledFunction> {
    let doc: SampledJson = serde_json::from_str(text)?;
    assemble(doc.grid, doc.samples.into_iter().map(|(p, a, k, w, x, y, z)| Ok((p, a, k, Quaternion::new(w, x, y, z)))))
}

pub fn read_sampled(path: &Path) -> Result<SampledFunction> {
    let text = fs::read_to_string(path)?;
    match Format::from_path(path) {
        Format::Csv => sampled_from_csv(&text),
        Format::Json => sampled_from_json(&text),
    }
}

pub fn write_sampled(path: &Path, phi: &SampledFunction, prov: &Provenance) -> Result<()> {
    let text = match Format::from_path(path) {
        Format::Csv => sampled_to_csv(phi, prov)?,
        Format::Json => sampled_to_json(phi, prov)?,
    };
    fs::write(path, text)?;
    Ok(())
}

pub fn slice_to_csv(f: &SliceFunction, prov: &Provenance) -> Result<String> {
    let mut out = Vec::new();
    prov.write_comments(&mut out)?;
    writeln!(out, "# n_t: {}", f.n_t())?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SLICE_HEADER)?;
    for (k, (a, b)) in f.a().iter().zip(f.b()).enumerate() {
        let mut rec = vec![k.to_string()];
        rec.extend(a.components().iter().chain(b.components().iter()).map(|v| v.to_string()));
        w.write_record(&rec)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("ascii output"))
}

pub fn slice_to_json(f: &SliceFunction, prov: &Provenance) -> Result<String> {
    let doc = SliceJson {
        version: Some(VERSION.into()),
        seed: prov.seed,
        n_t: f.n_t(),
        notes: prov.notes.clone(),
        a: f.a().iter().map(|q| q.components()).collect(),
        b: f.b().iter().map(|q| q.components()).collect(),
    };
    Ok(serde_json::to_string(&doc)?)
}

pub fn slice_from_csv(text: &str) -> Result<SliceFunction> {
    let mut reader = csv_reader(text);
    check_header(&mut reader, &SLICE_HEADER)?;
    let mut rows: Vec<(usize, Quaternion, Quaternion)> = Vec::new();
    for rec in reader.records() {
        let rec = rec?;
        if rec.len() != 9 {
            return Err(Error::Parse(format!("expected 9 fields, found {}", rec.len())));
        }
        let k = rec[0].parse::<usize>().map_err(|e| Error::Parse(format!("field t_idx: {e}")))?;
        let mut v = [0.0; 8];
        for (i, slot) in v.iter_mut().enumerate() {
            *slot = rec[i + 1].parse::<f64>().map_err(|e| Error::Parse(format!("field {}: {e}", SLICE_HEADER[i + 1])))?;
        }
        rows.push((k, Quaternion::new(v[0], v[1], v[2], v[3]), Quaternion::new(v[4], v[5], v[6], v[7])));
    }
    let n_t = match comment_value(text, "n_t") {
        Some(v) => v.parse::<usize>().map_err(|e| Error::Parse(format!("n_t: {e}")))?,
        None => rows.len(),
    };
    let mut a = vec![None; n_t];
    let mut b = vec![Quaternion::ZERO; n_t];
    for (k, qa, qb) in rows {
        if k >= n_t || a[k].is_some() {
            return Err(Error::Parse(format!("t_idx {k} out of range or repeated")));
        }
        a[k] = Some(qa);
        b[k] = qb;
    }
    let a = a
        .into_iter()
        .enumerate()
        .map(|(k, v)| v.ok_or_else(|| Error::Parse(format!("missing t_idx {k}"))))
        .collect::<Result<Vec<_>>>()?;
    SliceFunction::new(a, b)
}

pub fn slice_from_json(text: &str) -> Result<SliceFunction> {
    let doc: SliceJson = serde_json::from_str(text)?;
    if doc.a.len() != doc.n_t || doc.b.len() != doc.n_t {
        return Err(Error::Parse(format!("n_t = {} but {} / {} samples", doc.n_t, doc.a.len(), doc.b.len())));
    }
    let conv = |v: Vec<[f64; 4]>| v.into_iter().map(Quaternion::from_components).collect();
    SliceFunction::new(conv(doc.a), conv(doc.b))
}

pub fn read_slice(path: &Path) -> Result<SliceFunction> {
    let text = fs::read_to_string(path)?;
    match Format::from_path(path) {
        Format::Csv => slice_from_csv(&text),
        Format::Json => slice_from_json(&text),
    }
}

pub fn write_slice(path: &Path, f: &SliceFunction, prov: &Provenance) -> Result<()> {
    let text = match Format::from_path(path) {
        Format::Csv => slice_to_csv(f, prov)?,
        Format::Json => slice_to_json(f, prov)?,
    };
    fs::write(path, text)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::BoundaryGrid;
    use crate::testfns::{RandomPolynomial, RandomSlice};
    use crate::ImaginaryUnit;

    fn grid() -> Arc<BoundaryGrid> {
        Arc::new(BoundaryGrid::standard(4, 6, 8).unwrap())
    }

    #[test]
    fn sampled_csv_round_trip_is_exact() {
        let phi = RandomPolynomial::new(3, 1).sample(grid());
        let text = sampled_to_csv(&phi, &Provenance::with_seed(7)).unwrap();
        assert!(text.starts_with("# slicenorm "));
        assert!(text.contains("# seed: 7\n"));
        let back = sampled_from_csv(&text).unwrap();
        assert_eq!(back.values(), phi.values());
        assert_eq!(back.grid().spec(), phi.grid().spec());
    }

    #[test]
    fn sampled_json_round_trip_keeps_pole() {
        let pole = ImaginaryUnit::new(0.3, 0.1, -0.9).unwrap();
        let g = Arc::new(BoundaryGrid::standard(4, 6, 8).unwrap().with_pole(pole));
        let phi = RandomPolynomial::new(2, 4).sample(g);
        let back = sampled_from_json(&sampled_to_json(&phi, &Provenance::default()).unwrap()).unwrap();
        assert_eq!(back.values(), phi.values());
        assert_eq!(back.grid().sphere().nodes(), phi.grid().sphere().nodes());
    }

    #[test]
    fn csv_without_grid_line_infers_sizes() {
        let phi = RandomPolynomial::new(1, 2).sample(grid());
        let text = sampled_to_csv(&phi, &Provenance::default()).unwrap();
        let stripped: String = text.lines().filter(|l| !l.starts_with('#')).map(|l| format!("{l}\n")).collect();
        let back = sampled_from_csv(&stripped).unwrap();
        assert_eq!(back.grid().spec(), GridSpec::new(4, 6, 8));
        assert_eq!(back.values(), phi.values());
    }

    #[test]
    fn malformed_sampled_files() {
        assert!(matches!(sampled_from_csv("a,b,c\n1,2,3\n"), Err(Error::Parse(_))));
        let phi = RandomPolynomial::new(1, 2).sample(grid());
        let text = sampled_to_csv(&phi, &Provenance::default()).unwrap();
        let truncated: String = text.lines().take(20).map(|l| format!("{l}\n")).collect();
        assert!(matches!(sampled_from_csv(&truncated), Err(Error::Parse(m)) if m.contains("missing")));
        // without the grid line the Gauss-Legendre grid is inferred from the indices
        let bare = text.replace("# grid", "# nothing");
        assert_eq!(sampled_from_csv(&bare).unwrap().grid().spec(), phi.grid().spec());
        assert!(sampled_from_csv(&format!("{text}0,0,0,1,1,1,1\n")).is_err());
        assert!(matches!(sampled_from_csv("polar_idx,azimuth_idx,t_idx,w,x,y,z\n0,0,0,abc,0,0,0\n"), Err(Error::Parse(_))));
    }

    #[test]
    fn slice_round_trips() {
        let f = RandomSlice::new(3, 5).to_slice_function(&crate::CircleGrid::new(16).unwrap());
        let csv = slice_to_csv(&f, &Provenance::with_seed(1).note("route", "boundary")).unwrap();
        assert!(csv.contains("# route: boundary\n"));
        assert_eq!(slice_from_csv(&csv).unwrap(), f);
        assert_eq!(slice_from_json(&slice_to_json(&f, &Provenance::default()).unwrap()).unwrap(), f);
        assert!(slice_from_json(r#"{"n_t": 8, "a": [], "b": []}"#).is_err());
    }

    #[test]
    fn files_by_extension() {
        let dir = tempfile::tempdir().unwrap();
        let phi = RandomPolynomial::new(2, 3).sample(grid());
        for name in ["f.csv", "f.json"] {
            let path = dir.path().join(name);
            write_sampled(&path, &phi, &Provenance::default()).unwrap();
            assert_eq!(read_sampled(&path).unwrap().values(), phi.values());
        }
        let f = RandomSlice::new(2, 3).to_slice_function(&crate::CircleGrid::new(8).unwrap());
        for name in ["s.csv", "s.json"] {
            let path = dir.path().join(name);
            write_slice(&path, &f, &Provenance::default()).unwrap();
            assert_eq!(read_slice(&path).unwrap(), f);
        }
    }
}
