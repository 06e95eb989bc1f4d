//! Reader for the symmetric TSP subset of the TSPLIB format.

use std::str::FromStr;

use super::{Instance, InstanceError, Point, WeightKind};
use crate::Weight;

/// Layouts accepted in `EDGE_WEIGHT_SECTION`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExplicitFormat {
    FullMatrix,
    UpperRow,
    LowerRow,
    UpperDiagRow,
    LowerDiagRow,
}

impl ExplicitFormat {
    fn parse(name: &str) -> Option<Self> {
        Some(match name {
            "FULL_MATRIX" => Self::FullMatrix,
            "UPPER_ROW" => Self::UpperRow,
            "LOWER_ROW" => Self::LowerRow,
            "UPPER_DIAG_ROW" => Self::UpperDiagRow,
            "LOWER_DIAG_ROW" => Self::LowerDiagRow,
            _ => return None,
        })
    }

    fn entry_count(self, n: usize) -> usize {
        match self {
            Self::FullMatrix => n * n,
            Self::UpperRow | Self::LowerRow => n * (n - 1) / 2,
            Self::UpperDiagRow | Self::LowerDiagRow => n * (n + 1) / 2,
        }
    }

    /// Cells `(i, j)` in the order the values appear in the file.
    fn cells(self, n: usize) -> Vec<(usize, usize)> {
        let mut cells = Vec::with_capacity(self.entry_count(n));
        for i in 0..n {
            let range = match self {
                Self::FullMatrix => 0..n,
                Self::UpperRow => (i + 1)..n,
                Self::UpperDiagRow => i..n,
                Self::LowerRow => 0..i,
                Self::LowerDiagRow => 0..(i + 1),
            };
            cells.extend(range.map(|j| (i, j)));
        }
        cells
    }
}

#[derive(Default)]
struct Header {
    name: Option<String>,
    dimension: Option<usize>,
    weight_type: Option<String>,
    weight_format: Option<String>,
}

/// Parses a TSPLIB `.tsp` file. Triangular explicit matrices are
/// symmetrized into full form.
pub fn parse_tsplib<W: Weight>(text: &str) -> Result<Instance<W>, InstanceError> {
    let mut header = Header::default();
    let mut lines = text.lines().peekable();
    let mut coord_tokens: Option<Vec<String>> = None;
    let mut weight_tokens: Option<Vec<String>> = None;

    while let Some(raw) = lines.next() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = match line.split_once(':') {
            Some((k, v)) => (k.trim(), Some(v.trim())),
            None => (line, None),
        };
        match (key, value) {
            ("EOF", _) => break,
            ("NAME", Some(v)) => header.name = Some(v.to_string()),
            ("TYPE", Some(v)) => {
                if v != "TSP" {
                    return Err(InstanceError::MalformedHeader(format!(
                        "only symmetric TSP files are supported, got TYPE {v}"
                    )));
                }
            }
            ("DIMENSION", Some(v)) => {
                let n = v.parse().map_err(|_| {
                    InstanceError::MalformedHeader(format!("DIMENSION is not an integer: {v}"))
                })?;
                header.dimension = Some(n);
            }
            ("EDGE_WEIGHT_TYPE", Some(v)) => header.weight_type = Some(v.to_string()),
            ("EDGE_WEIGHT_FORMAT", Some(v)) => header.weight_format = Some(v.to_string()),
            ("COMMENT" | "NODE_COORD_TYPE" | "DISPLAY_DATA_TYPE" | "CAPACITY", _) => {}
            ("NODE_COORD_SECTION", _) => {
                let n = require_dimension(&header)?;
                coord_tokens = Some(take_tokens(&mut lines, 3 * n, "NODE_COORD_SECTION")?);
            }
            ("EDGE_WEIGHT_SECTION", _) => {
                let n = require_dimension(&header)?;
                let format = explicit_format(&header)?;
                weight_tokens =
                    Some(take_tokens(&mut lines, format.entry_count(n), "EDGE_WEIGHT_SECTION")?);
            }
            ("DISPLAY_DATA_SECTION", _) => {
                let n = require_dimension(&header)?;
                take_tokens(&mut lines, 3 * n, "DISPLAY_DATA_SECTION")?;
            }
            (other, _) => {
                return Err(InstanceError::MalformedHeader(format!("unrecognized line: {other}")))
            }
        }
    }

    let name = header
        .name
        .clone()
        .ok_or_else(|| InstanceError::MalformedHeader("missing NAME".into()))?;
    let n = require_dimension(&header)?;
    let type_name = header
        .weight_type
        .as_deref()
        .ok_or_else(|| InstanceError::MalformedHeader("missing EDGE_WEIGHT_TYPE".into()))?;
    let kind = WeightKind::from_tsplib_name(type_name)
        .ok_or_else(|| InstanceError::UnsupportedWeightType(type_name.to_string()))?;
    if n < 3 {
        return Err(InstanceError::DimensionMismatch(format!(
            "a tour needs at least 3 vertices, got DIMENSION {n}"
        )));
    }

    match kind {
        WeightKind::Explicit => {
            let tokens = weight_tokens.ok_or_else(|| {
                InstanceError::MalformedHeader("EXPLICIT instance without EDGE_WEIGHT_SECTION".into())
            })?;
            let format = explicit_format(&header)?;
            let mut matrix = vec![W::zero(); n * n];
            for ((i, j), tok) in format.cells(n).into_iter().zip(&tokens) {
                let w = parse_number::<W>(tok)?;
                if format == ExplicitFormat::FullMatrix {
                    matrix[i * n + j] = w;
                } else {
                    matrix[i * n + j] = w;
                    matrix[j * n + i] = w;
                }
            }
            Instance::from_matrix(name, n, matrix)
        }
        _ => {
            let tokens = coord_tokens.ok_or_else(|| {
                InstanceError::MalformedHeader(format!("{kind} instance without NODE_COORD_SECTION"))
            })?;
            let mut points = vec![None; n];
            for chunk in tokens.chunks(3) {
                let id: usize = chunk[0]
                    .parse()
                    .map_err(|_| InstanceError::MalformedData(format!("bad node id {}", chunk[0])))?;
                if id == 0 || id > n {
                    return Err(InstanceError::DimensionMismatch(format!(
                        "node id {id} outside 1..={n}"
                    )));
                }
                let x = parse_real(&chunk[1])?;
                let y = parse_real(&chunk[2])?;
                if points[id - 1].replace(Point { x, y }).is_some() {
                    return Err(InstanceError::MalformedData(format!("node {id} listed twice")));
                }
            }
            let points = points.into_iter().map(|p| p.expect("ids unique and in range")).collect();
            Instance::from_coords(name, kind, points)
        }
    }
}

fn require_dimension(header: &Header) -> Result<usize, InstanceError> {
    header
        .dimension
        .ok_or_else(|| InstanceError::MalformedHeader("missing DIMENSION before data".into()))
}

fn explicit_format(header: &Header) -> Result<ExplicitFormat, InstanceError> {
    let name = header
        .weight_format
        .as_deref()
        .ok_or_else(|| InstanceError::MalformedHeader("missing EDGE_WEIGHT_FORMAT".into()))?;
    ExplicitFormat::parse(name).ok_or_else(|| InstanceError::UnsupportedWeightType(name.to_string()))
}

fn take_tokens<'a, I>(lines: &mut std::iter::Peekable<I>, count: usize, section: &str) -> Result<Vec<String>, InstanceError>
where
    I: Iterator<Item = &'a str>,
{
    let mut tokens = Vec::with_capacity(count);
    while tokens.len() < count {
        let Some(line) = lines.next() else { break };
        if line.trim() == "EOF" {
            break;
        }
        tokens.extend(line.split_whitespace().map(str::to_string));
    }
    if tokens.len() != count {
        return Err(InstanceError::DimensionMismatch(format!(
            "{section}: expected {count} values, found {}",
            tokens.len()
        )));
    }
    Ok(tokens)
}

fn parse_real(tok: &str) -> Result<f64, InstanceError> {
    f64::from_str(tok).map_err(|_| InstanceError::MalformedData(format!("bad number {tok}")))
}

fn parse_number<W: Weight>(tok: &str) -> Result<W, InstanceError> {
    if let Ok(w) = W::from_str(tok) {
        return Ok(w);
    }
    // some files write integral weights as reals
    let x = parse_real(tok)?;
    if x.fract() != 0.0 {
        return Err(InstanceError::MalformedData(format!("non-integral edge weight {tok}")));
    }
    W::from(x).ok_or_else(|| InstanceError::MalformedData(format!("edge weight {tok} out of range")))
}
