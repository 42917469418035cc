//! TSPLIB reader for symmetric instances and integer edge costs.
//!
//! Supported edge weight types are `EUC_2D`, `GEO` and `EXPLICIT` (with the
//! `FULL_MATRIX`, `UPPER_ROW` and `LOWER_DIAG_ROW` layouts). Costs follow the
//! TSPLIB conventions, so published optima are reproduced exactly.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use log::warn;

use crate::error::{Error, Result};

/// Edge weight type of an instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Metric {
    Euc2d,
    Geo,
    Explicit,
}

impl Metric {
    pub fn as_str(self) -> &'static str {
        match self {
            Metric::Euc2d => "EUC_2D",
            Metric::Geo => "GEO",
            Metric::Explicit => "EXPLICIT",
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Metric {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "EUC_2D" => Ok(Metric::Euc2d),
            "GEO" => Ok(Metric::Geo),
            "EXPLICIT" => Ok(Metric::Explicit),
            other => Err(format!("unsupported EDGE_WEIGHT_TYPE `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum MatrixLayout {
    FullMatrix,
    UpperRow,
    LowerDiagRow,
}

impl MatrixLayout {
    fn entries(self, n: usize) -> usize {
        match self {
            MatrixLayout::FullMatrix => n * n,
            MatrixLayout::UpperRow => n * (n - 1) / 2,
            MatrixLayout::LowerDiagRow => n * (n + 1) / 2,
        }
    }
}

/// A symmetric TSP instance. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct TspInstance {
    name: String,
    metric: Metric,
    coords: Option<Vec<(f64, f64)>>,
    weights: Option<Vec<u32>>,
    // row-major n×n cost cache
    costs: Vec<u32>,
    n: usize,
}

impl TspInstance {
    /// Builds a coordinate instance (`EUC_2D` or `GEO`).
    pub fn from_coords(
        name: impl Into<String>,
        metric: Metric,
        coords: Vec<(f64, f64)>,
    ) -> Result<Self> {
        if metric == Metric::Explicit {
            return Err(Error::Parse {
                line: 0,
                message: "EXPLICIT instances need a weight matrix".into(),
            });
        }
        let n = coords.len();
        check_dimension(n, 0)?;
        if let Some(k) = coords
            .iter()
            .position(|(x, y)| !x.is_finite() || !y.is_finite())
        {
            return Err(Error::Parse {
                line: 0,
                message: format!("non-finite coordinate for node {}", k + 1),
            });
        }
        let mut costs = vec![0u32; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let d = match metric {
                    Metric::Euc2d => euc_2d(coords[i], coords[j]),
                    Metric::Geo => geo(coords[i], coords[j]),
                    Metric::Explicit => unreachable!(),
                };
                costs[i * n + j] = d;
                costs[j * n + i] = d;
            }
        }
        Ok(Self {
            name: name.into(),
            metric,
            coords: Some(coords),
            weights: None,
            costs,
            n,
        })
    }

    /// Builds an `EXPLICIT` instance from a full row-major `n×n` matrix.
    pub fn from_weights(name: impl Into<String>, n: usize, weights: Vec<u32>) -> Result<Self> {
        check_dimension(n, 0)?;
        if weights.len() != n * n {
            return Err(Error::Parse {
                line: 0,
                message: format!("expected {} matrix entries, got {}", n * n, weights.len()),
            });
        }
        for i in 0..n {
            if weights[i * n + i] != 0 {
                return Err(Error::Parse {
                    line: 0,
                    message: format!("non-zero diagonal at node {}", i + 1),
                });
            }
            for j in (i + 1)..n {
                if weights[i * n + j] != weights[j * n + i] {
                    return Err(Error::Parse {
                        line: 0,
                        message: format!(
                            "asymmetric weights between nodes {} and {}",
                            i + 1,
                            j + 1
                        ),
                    });
                }
            }
        }
        Ok(Self {
            name: name.into(),
            metric: Metric::Explicit,
            coords: None,
            costs: weights.clone(),
            weights: Some(weights),
            n,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn metric(&self) -> Metric {
        self.metric
    }

    pub fn coords(&self) -> Option<&[(f64, f64)]> {
        self.coords.as_deref()
    }

    pub fn weights(&self) -> Option<&[u32]> {
        self.weights.as_deref()
    }

    /// Edge cost with bounds checking.
    pub fn distance(&self, i: usize, j: usize) -> Result<u32> {
        for index in [i, j] {
            if index >= self.n {
                return Err(Error::IndexOutOfRange {
                    index,
                    dimension: self.n,
                });
            }
        }
        Ok(self.cost(i, j))
    }

    /// Edge cost; panics on out-of-range indices.
    #[inline]
    pub fn cost(&self, i: usize, j: usize) -> u32 {
        self.costs[i * self.n + j]
    }

    /// Cyclic tour length including the closing edge.
    pub fn tour_length(&self, order: &[usize]) -> Result<u64> {
        check_permutation(order, self.n)?;
        Ok(self.cyclic_length(order))
    }

    pub(crate) fn cyclic_length(&self, order: &[usize]) -> u64 {
        let n = order.len();
        (0..n)
            .map(|k| u64::from(self.cost(order[k], order[(k + 1) % n])))
            .sum()
    }

    /// Returns a copy with every edge cost multiplied by `factor`.
    pub fn scaled(&self, factor: u32) -> Result<Self> {
        let weights = self.costs.iter().map(|&c| c * factor).collect();
        Self::from_weights(format!("{}x{factor}", self.name), self.n, weights)
    }

    /// Writes the instance back out in TSPLIB format.
    pub fn to_tsplib(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "NAME : {}", self.name);
        let _ = writeln!(out, "TYPE : TSP");
        let _ = writeln!(out, "DIMENSION : {}", self.n);
        let _ = writeln!(out, "EDGE_WEIGHT_TYPE : {}", self.metric);
        match (&self.coords, &self.weights) {
            (Some(coords), _) => {
                let _ = writeln!(out, "NODE_COORD_SECTION");
                for (k, (x, y)) in coords.iter().enumerate() {
                    let _ = writeln!(out, "{} {x:?} {y:?}", k + 1);
                }
            }
            (None, Some(w)) => {
                let _ = writeln!(out, "EDGE_WEIGHT_FORMAT : FULL_MATRIX");
                let _ = writeln!(out, "EDGE_WEIGHT_SECTION");
                for row in w.chunks(self.n) {
                    let line: Vec<String> = row.iter().map(u32::to_string).collect();
                    let _ = writeln!(out, "{}", line.join(" "));
                }
            }
            (None, None) => unreachable!("instance without data"),
        }
        out.push_str("EOF\n");
        out
    }
}

/// A closed tour with its cached length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tour {
    order: Vec<usize>,
    length: u64,
}

impl Tour {
    pub fn new(inst: &TspInstance, order: Vec<usize>) -> Result<Self> {
        let length = inst.tour_length(&order)?;
        Ok(Self { order, length })
    }

    /// Caller guarantees `order` is a permutation.
    pub(crate) fn from_valid(inst: &TspInstance, order: Vec<usize>) -> Self {
        debug_assert!(check_permutation(&order, inst.dimension()).is_ok());
        let length = inst.cyclic_length(&order);
        Self { order, length }
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn length(&self) -> u64 {
        self.length
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Undirected edges of the tour, closing edge included.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.order.len();
        (0..n).map(move |k| (self.order[k], self.order[(k + 1) % n]))
    }
}

/// Checks that `order` visits every city in `0..n` exactly once.
pub fn check_permutation(order: &[usize], n: usize) -> Result<()> {
    if order.len() != n {
        return Err(Error::NotAPermutation(n));
    }
    let mut seen = vec![false; n];
    for &c in order {
        if c >= n || std::mem::replace(&mut seen[c], true) {
            return Err(Error::NotAPermutation(n));
        }
    }
    Ok(())
}

fn check_dimension(n: usize, line: usize) -> Result<()> {
    if n < 3 {
        return Err(Error::Parse {
            line,
            message: format!("dimension must be at least 3, got {n}"),
        });
    }
    Ok(())
}

fn nint(x: f64) -> u32 {
    (x + 0.5) as u32
}

fn euc_2d(a: (f64, f64), b: (f64, f64)) -> u32 {
    nint((a.0 - b.0).hypot(a.1 - b.1))
}

#[allow(clippy::approx_constant)]
const GEO_PI: f64 = 3.141592;
const EARTH_RADIUS: f64 = 6378.388;

// DDD.MM degree-minute decoding.
fn geo_radians(x: f64) -> f64 {
    let deg = x.trunc();
    let min = x - deg;
    GEO_PI * (deg + 5.0 * min / 3.0) / 180.0
}

fn geo(a: (f64, f64), b: (f64, f64)) -> u32 {
    let (lat_a, lon_a) = (geo_radians(a.0), geo_radians(a.1));
    let (lat_b, lon_b) = (geo_radians(b.0), geo_radians(b.1));
    let q1 = (lon_a - lon_b).cos();
    let q2 = (lat_a - lat_b).cos();
    let q3 = (lat_a + lat_b).cos();
    let arg = (0.5 * ((1.0 + q1) * q2 - (1.0 - q1) * q3)).clamp(-1.0, 1.0);
    (EARTH_RADIUS * arg.acos() + 1.0) as u32
}

#[derive(Default)]
struct Header {
    name: Option<String>,
    dimension: Option<usize>,
    metric: Option<Metric>,
    layout: Option<MatrixLayout>,
}

fn split_keyword(line: &str) -> (&str, Option<&str>) {
    match line.split_once(':') {
        Some((k, v)) => (k.trim(), Some(v.trim())),
        None => (line.trim(), None),
    }
}

fn is_section_start(keyword: &str) -> bool {
    keyword.ends_with("_SECTION") || keyword == "EOF"
}

/// Parses a TSPLIB file.
pub fn parse_instance(text: &str) -> Result<TspInstance> {
    let lines: Vec<&str> = text.lines().collect();
    let mut header = Header::default();
    let mut coords: Option<Vec<(f64, f64)>> = None;
    let mut raw_weights: Option<(Vec<u32>, usize)> = None;
    let mut i = 0;

    let err = |line: usize, message: String| Error::Parse { line, message };

    while i < lines.len() {
        let lineno = i + 1;
        let line = lines[i].trim();
        i += 1;
        if line.is_empty() {
            continue;
        }
        let (keyword, value) = split_keyword(line);
        let need_value = || {
            value
                .filter(|v| !v.is_empty())
                .ok_or_else(|| err(lineno, format!("missing value for {keyword}")))
        };
        match keyword {
            "NAME" => header.name = Some(need_value()?.to_string()),
            "TYPE" => {
                let v = need_value()?;
                if v != "TSP" {
                    return Err(err(
                        lineno,
                        format!("unsupported TYPE `{v}`, only symmetric TSP"),
                    ));
                }
            }
            "COMMENT" | "DISPLAY_DATA_TYPE" | "NODE_COORD_TYPE" => {}
            "DIMENSION" => {
                let v = need_value()?;
                let n = v
                    .parse::<usize>()
                    .map_err(|_| err(lineno, format!("invalid DIMENSION `{v}`")))?;
                check_dimension(n, lineno)?;
                header.dimension = Some(n);
            }
            "EDGE_WEIGHT_TYPE" => {
                header.metric = Some(need_value()?.parse().map_err(|m| err(lineno, m))?);
            }
            "EDGE_WEIGHT_FORMAT" => {
                let v = need_value()?;
                header.layout = Some(match v {
                    "FULL_MATRIX" => MatrixLayout::FullMatrix,
                    "UPPER_ROW" => MatrixLayout::UpperRow,
                    "LOWER_DIAG_ROW" => MatrixLayout::LowerDiagRow,
                    "FUNCTION" => continue,
                    other => {
                        return Err(err(
                            lineno,
                            format!("unsupported EDGE_WEIGHT_FORMAT `{other}`"),
                        ))
                    }
                });
            }
            "NODE_COORD_SECTION" => {
                let n = header
                    .dimension
                    .ok_or_else(|| err(lineno, "NODE_COORD_SECTION before DIMENSION".into()))?;
                let mut pts: Vec<Option<(f64, f64)>> = vec![None; n];
                let mut count = 0;
                while i < lines.len() {
                    let l = lines[i].trim();
                    if l.is_empty() {
                        i += 1;
                        continue;
                    }
                    if is_section_start(split_keyword(l).0) {
                        break;
                    }
                    let ln = i + 1;
                    let fields: Vec<&str> = l.split_whitespace().collect();
                    if fields.len() != 3 {
                        return Err(err(ln, format!("expected `id x y`, got `{l}`")));
                    }
                    let id: usize = fields[0]
                        .parse()
                        .map_err(|_| err(ln, format!("invalid node id `{}`", fields[0])))?;
                    if id == 0 || id > n {
                        return Err(err(ln, format!("node id {id} outside 1..={n}")));
                    }
                    let x: f64 = fields[1]
                        .parse()
                        .map_err(|_| err(ln, format!("invalid coordinate `{}`", fields[1])))?;
                    let y: f64 = fields[2]
                        .parse()
                        .map_err(|_| err(ln, format!("invalid coordinate `{}`", fields[2])))?;
                    if pts[id - 1].replace((x, y)).is_some() {
                        return Err(err(ln, format!("duplicate node id {id}")));
                    }
                    count += 1;
                    i += 1;
                }
                if count != n {
                    return Err(err(
                        (i + 1).min(lines.len()),
                        format!("DIMENSION is {n} but NODE_COORD_SECTION lists {count} nodes"),
                    ));
                }
                coords = Some(pts.into_iter().map(|p| p.expect("all ids seen")).collect());
            }
            "EDGE_WEIGHT_SECTION" => {
                let mut values = Vec::new();
                while i < lines.len() {
                    let l = lines[i].trim();
                    if l.is_empty() {
                        i += 1;
                        continue;
                    }
                    if l.starts_with(|c: char| c.is_ascii_alphabetic()) {
                        break;
                    }
                    for tok in l.split_whitespace() {
                        let v = tok
                            .parse::<f64>()
                            .ok()
                            .filter(|v| *v >= 0.0 && v.fract() == 0.0 && *v <= f64::from(u32::MAX))
                            .ok_or_else(|| err(i + 1, format!("invalid edge weight `{tok}`")))?;
                        values.push(v as u32);
                    }
                    i += 1;
                }
                raw_weights = Some((values, (i + 1).min(lines.len())));
            }
            "DISPLAY_DATA_SECTION" | "FIXED_EDGES_SECTION" => {
                while i < lines.len() {
                    let l = lines[i].trim();
                    if !l.is_empty() && l.starts_with(|c: char| c.is_ascii_alphabetic()) {
                        break;
                    }
                    i += 1;
                }
            }
            "EOF" => break,
            other => {
                if value.is_none() && !other.starts_with(|c: char| c.is_ascii_alphabetic()) {
                    return Err(err(lineno, format!("unexpected data line `{line}`")));
                }
                warn!("line {lineno}: ignoring keyword `{other}`");
            }
        }
    }

    let last = lines.len().max(1);
    let n = header
        .dimension
        .ok_or_else(|| err(last, "missing DIMENSION".into()))?;
    let metric = header
        .metric
        .ok_or_else(|| err(last, "missing EDGE_WEIGHT_TYPE".into()))?;
    let name = header.name.unwrap_or_default();

    match metric {
        Metric::Euc2d | Metric::Geo => {
            let coords = coords.ok_or_else(|| err(last, "missing NODE_COORD_SECTION".into()))?;
            TspInstance::from_coords(name, metric, coords)
        }
        Metric::Explicit => {
            let layout = header
                .layout
                .ok_or_else(|| err(last, "EXPLICIT instance without EDGE_WEIGHT_FORMAT".into()))?;
            let (values, end_line) =
                raw_weights.ok_or_else(|| err(last, "missing EDGE_WEIGHT_SECTION".into()))?;
            let expected = layout.entries(n);
            if values.len() != expected {
                return Err(err(
                    end_line,
                    format!(
                        "DIMENSION {n} needs {expected} edge weights, found {}",
                        values.len()
                    ),
                ));
            }
            let full = expand_matrix(layout, n, &values);
            TspInstance::from_weights(name, n, full).map_err(|e| match e {
                Error::Parse { message, .. } => err(end_line, message),
                other => other,
            })
        }
    }
}

fn expand_matrix(layout: MatrixLayout, n: usize, values: &[u32]) -> Vec<u32> {
    let mut m = vec![0u32; n * n];
    let mut it = values.iter().copied();
    match layout {
        MatrixLayout::FullMatrix => m.copy_from_slice(values),
        MatrixLayout::UpperRow => {
            for i in 0..n {
                for j in (i + 1)..n {
                    let v = it.next().expect("length checked");
                    m[i * n + j] = v;
                    m[j * n + i] = v;
                }
            }
        }
        MatrixLayout::LowerDiagRow => {
            for i in 0..n {
                for j in 0..=i {
                    let v = it.next().expect("length checked");
                    m[i * n + j] = v;
                    m[j * n + i] = v;
                }
            }
        }
    }
    m
}
