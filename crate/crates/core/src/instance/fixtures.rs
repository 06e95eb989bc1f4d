//! Small hand-built instances.

use super::Instance;
use crate::{Vertex, Weight};

/// Vertex names of the hexagon fixture, `a..f` mapped to `0..5`.
pub const HEXAGON_LABELS: [char; 6] = ['a', 'b', 'c', 'd', 'e', 'f'];

/// Start tour `a d c b e f` of cost 24.
pub const HEXAGON_START_TOUR: [Vertex; 6] = [0, 3, 2, 1, 4, 5];

/// Optimal tour `a b c d e f` of cost 20.
pub const HEXAGON_OPTIMAL_TOUR: [Vertex; 6] = [0, 1, 2, 3, 4, 5];

pub const HEXAGON_OPTIMUM: i64 = 20;

const HEXAGON_MATRIX: [[i64; 6]; 6] = [
    //a  b  c  d  e  f
    [0, 4, 5, 6, 5, 3], // a
    [4, 0, 3, 5, 6, 5], // b
    [5, 3, 0, 3, 5, 6], // c
    [6, 5, 3, 0, 4, 5], // d
    [5, 6, 5, 4, 0, 3], // e
    [3, 5, 6, 5, 3, 0], // f
];

/// Six vertices on a hexagon: outer edges `ab` and `de` cost 4, the other
/// outer edges 3, short chords 5 and the three long diagonals 6.
pub fn hexagon<W: Weight>() -> Instance<W> {
    let matrix = HEXAGON_MATRIX
        .iter()
        .flatten()
        .map(|&c| W::from(c).expect("small constant"))
        .collect();
    Instance::from_matrix("hexagon6", 6, matrix)
        .expect("hexagon matrix is valid")
        .with_known_optimum(W::from(HEXAGON_OPTIMUM))
}

pub fn label(v: Vertex) -> char {
    HEXAGON_LABELS.get(v).copied().unwrap_or('?')
}
