//! Problem instances: vertex set plus an exact integer cost function.

mod generate;
mod metric;
mod registry;
mod tsplib;

pub mod fixtures;

use std::fmt;

use thiserror::Error;

use crate::{Vertex, Weight};

pub use generate::{grid_instance, random_euclidean, random_symmetric_matrix};
pub use metric::{att_distance, ceil_2d_distance, euc_2d_distance, geo_distance, geo_radians};
pub use registry::OptimaRegistry;
pub use tsplib::{parse_tsplib, ExplicitFormat};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InstanceError {
    #[error("malformed header: {0}")]
    MalformedHeader(String),
    #[error("malformed data: {0}")]
    MalformedData(String),
    #[error("unsupported edge weight type or format: {0}")]
    UnsupportedWeightType(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("cost matrix is not symmetric at ({0}, {1})")]
    NonSymmetricMatrix(Vertex, Vertex),
    #[error("explicit cost of edge ({0}, {1}) is not positive")]
    NonPositiveCost(Vertex, Vertex),
    #[error("vertex {vertex} out of range for dimension {dimension}")]
    IndexOutOfRange { vertex: Vertex, dimension: usize },
    #[error("self loop at vertex {0}")]
    SelfLoop(Vertex),
    #[error("not a permutation: {0}")]
    NotAPermutation(String),
    #[error("malformed optima registry line {line}: {message}")]
    MalformedRegistry { line: usize, message: String },
}

/// TSPLIB `EDGE_WEIGHT_TYPE`s understood by the solver.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WeightKind {
    Euc2d,
    Ceil2d,
    Geo,
    Att,
    Explicit,
}

impl WeightKind {
    pub fn tsplib_name(self) -> &'static str {
        match self {
            WeightKind::Euc2d => "EUC_2D",
            WeightKind::Ceil2d => "CEIL_2D",
            WeightKind::Geo => "GEO",
            WeightKind::Att => "ATT",
            WeightKind::Explicit => "EXPLICIT",
        }
    }

    pub fn from_tsplib_name(name: &str) -> Option<Self> {
        Some(match name {
            "EUC_2D" => WeightKind::Euc2d,
            "CEIL_2D" => WeightKind::Ceil2d,
            "GEO" => WeightKind::Geo,
            "ATT" => WeightKind::Att,
            "EXPLICIT" => WeightKind::Explicit,
            _ => return None,
        })
    }
}

impl fmt::Display for WeightKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tsplib_name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

#[derive(Debug, Clone)]
enum CostSource<W> {
    Coords {
        points: Vec<Point>,
        // (latitude, longitude) in radians, only for GEO
        geo: Vec<(f64, f64)>,
    },
    Matrix(Vec<W>),
}

/// An immutable symmetric TSP instance.
///
/// Coordinate instances compute costs on demand with TSPLIB rounding;
/// explicit instances keep the full `n x n` matrix.
#[derive(Debug, Clone)]
pub struct Instance<W = i64> {
    name: String,
    dimension: usize,
    weight_kind: WeightKind,
    source: CostSource<W>,
    known_optimum: Option<W>,
}

impl<W: Weight> Instance<W> {
    /// Builds a coordinate instance. Zero-cost edges between coincident
    /// points are tolerated with a warning.
    pub fn from_coords(
        name: impl Into<String>,
        weight_kind: WeightKind,
        points: Vec<Point>,
    ) -> Result<Self, InstanceError> {
        if weight_kind == WeightKind::Explicit {
            return Err(InstanceError::UnsupportedWeightType(
                "EXPLICIT instances need a matrix, not coordinates".into(),
            ));
        }
        let dimension = points.len();
        if dimension < 3 {
            return Err(InstanceError::DimensionMismatch(format!(
                "a tour needs at least 3 vertices, got {dimension}"
            )));
        }
        if points.iter().any(|p| !p.x.is_finite() || !p.y.is_finite()) {
            return Err(InstanceError::MalformedData("non-finite coordinate".into()));
        }
        let geo = if weight_kind == WeightKind::Geo {
            points.iter().map(|p| geo_radians(p.x, p.y)).collect()
        } else {
            Vec::new()
        };
        let name = name.into();
        let duplicates = count_duplicate_points(&points);
        if duplicates > 0 {
            log::warn!("{name}: {duplicates} coincident points produce zero-cost edges");
        }
        Ok(Self {
            name,
            dimension,
            weight_kind,
            source: CostSource::Coords { points, geo },
            known_optimum: None,
        })
    }

    /// Builds an explicit instance from a full row-major `n x n` matrix.
    /// The matrix must be symmetric with strictly positive off-diagonal
    /// entries; the diagonal is ignored.
    pub fn from_matrix(
        name: impl Into<String>,
        dimension: usize,
        matrix: Vec<W>,
    ) -> Result<Self, InstanceError> {
        if dimension < 3 {
            return Err(InstanceError::DimensionMismatch(format!(
                "a tour needs at least 3 vertices, got {dimension}"
            )));
        }
        if matrix.len() != dimension * dimension {
            return Err(InstanceError::DimensionMismatch(format!(
                "expected {} matrix entries, got {}",
                dimension * dimension,
                matrix.len()
            )));
        }
        for i in 0..dimension {
            for j in (i + 1)..dimension {
                let a = matrix[i * dimension + j];
                if a != matrix[j * dimension + i] {
                    return Err(InstanceError::NonSymmetricMatrix(i, j));
                }
                if a <= W::zero() {
                    return Err(InstanceError::NonPositiveCost(i, j));
                }
            }
        }
        let mut matrix = matrix;
        for i in 0..dimension {
            matrix[i * dimension + i] = W::zero();
        }
        Ok(Self {
            name: name.into(),
            dimension,
            weight_kind: WeightKind::Explicit,
            source: CostSource::Matrix(matrix),
            known_optimum: None,
        })
    }

    pub fn with_known_optimum(mut self, optimum: Option<W>) -> Self {
        self.known_optimum = optimum;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn weight_kind(&self) -> WeightKind {
        self.weight_kind
    }

    pub fn known_optimum(&self) -> Option<W> {
        self.known_optimum
    }

    pub fn coords(&self) -> Option<&[Point]> {
        match &self.source {
            CostSource::Coords { points, .. } => Some(points),
            CostSource::Matrix(_) => None,
        }
    }

    /// The full cost matrix of an explicit instance.
    pub fn matrix(&self) -> Option<&[W]> {
        match &self.source {
            CostSource::Matrix(m) => Some(m),
            CostSource::Coords { .. } => None,
        }
    }

    /// Checked edge cost.
    pub fn edge_cost(&self, i: Vertex, j: Vertex) -> Result<W, InstanceError> {
        for v in [i, j] {
            if v >= self.dimension {
                return Err(InstanceError::IndexOutOfRange {
                    vertex: v,
                    dimension: self.dimension,
                });
            }
        }
        if i == j {
            return Err(InstanceError::SelfLoop(i));
        }
        Ok(self.cost(i, j))
    }

    /// Unchecked edge cost for the hot paths. `cost(v, v)` is zero.
    #[inline]
    pub fn cost(&self, i: Vertex, j: Vertex) -> W {
        debug_assert!(i < self.dimension && j < self.dimension);
        if i == j {
            return W::zero();
        }
        match &self.source {
            CostSource::Matrix(m) => m[i * self.dimension + j],
            CostSource::Coords { points, geo } => {
                let d = match self.weight_kind {
                    WeightKind::Euc2d => euc_2d_distance(points[i], points[j]),
                    WeightKind::Ceil2d => ceil_2d_distance(points[i], points[j]),
                    WeightKind::Att => att_distance(points[i], points[j]),
                    WeightKind::Geo => geo_distance(geo[i], geo[j]),
                    WeightKind::Explicit => unreachable!("explicit instances carry a matrix"),
                };
                W::from_f64_saturating(d)
            }
        }
    }

    /// Cost of the closed tour visiting `order` in sequence.
    pub fn tour_cost(&self, order: &[Vertex]) -> Result<W, InstanceError> {
        check_permutation(order, self.dimension)?;
        Ok(self.cycle_cost(order))
    }

    pub(crate) fn cycle_cost(&self, order: &[Vertex]) -> W {
        let n = order.len();
        (0..n)
            .map(|k| self.cost(order[k], order[(k + 1) % n]))
            .fold(W::zero(), |acc, c| acc + c)
    }

    /// Serializes to TSPLIB text. Explicit instances are written as
    /// `FULL_MATRIX`.
    pub fn to_tsplib(&self) -> String {
        use std::fmt::Write;
        let mut out = String::new();
        let _ = writeln!(out, "NAME : {}", self.name);
        let _ = writeln!(out, "TYPE : TSP");
        let _ = writeln!(out, "DIMENSION : {}", self.dimension);
        let _ = writeln!(out, "EDGE_WEIGHT_TYPE : {}", self.weight_kind);
        match &self.source {
            CostSource::Matrix(m) => {
                let _ = writeln!(out, "EDGE_WEIGHT_FORMAT : FULL_MATRIX");
                let _ = writeln!(out, "EDGE_WEIGHT_SECTION");
                for row in m.chunks(self.dimension) {
                    let line: Vec<String> = row.iter().map(|w| w.to_string()).collect();
                    let _ = writeln!(out, "{}", line.join(" "));
                }
            }
            CostSource::Coords { points, .. } => {
                let _ = writeln!(out, "NODE_COORD_SECTION");
                for (k, p) in points.iter().enumerate() {
                    let _ = writeln!(out, "{} {} {}", k + 1, p.x, p.y);
                }
            }
        }
        out.push_str("EOF\n");
        out
    }
}

/// Verifies that `order` lists each of `0..n` exactly once.
pub fn check_permutation(order: &[Vertex], n: usize) -> Result<(), InstanceError> {
    if order.len() != n {
        return Err(InstanceError::NotAPermutation(format!(
            "expected {n} vertices, got {}",
            order.len()
        )));
    }
    let mut seen = vec![false; n];
    for &v in order {
        if v >= n {
            return Err(InstanceError::NotAPermutation(format!("vertex {v} out of range")));
        }
        if std::mem::replace(&mut seen[v], true) {
            return Err(InstanceError::NotAPermutation(format!("vertex {v} repeated")));
        }
    }
    Ok(())
}

fn count_duplicate_points(points: &[Point]) -> usize {
    let mut sorted: Vec<(f64, f64)> = points.iter().map(|p| (p.x, p.y)).collect();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite coordinates"));
    sorted.windows(2).filter(|w| w[0] == w[1]).count()
}
