use rand::Rng;

use super::{Instance, Point, WeightKind};
use crate::Weight;

/// Uniform random integer coordinates in `[0, side)^2`, EUC_2D metric.
pub fn random_euclidean<W: Weight, R: Rng + ?Sized>(
    name: impl Into<String>,
    n: usize,
    side: u32,
    rng: &mut R,
) -> Instance<W> {
    let points = (0..n)
        .map(|_| Point {
            x: f64::from(rng.gen_range(0..side)),
            y: f64::from(rng.gen_range(0..side)),
        })
        .collect();
    Instance::from_coords(name, WeightKind::Euc2d, points).expect("n >= 3 and finite coordinates")
}

/// Symmetric explicit instance with costs drawn uniformly from `lo..=hi`.
pub fn random_symmetric_matrix<W: Weight, R: Rng + ?Sized>(
    name: impl Into<String>,
    n: usize,
    lo: i64,
    hi: i64,
    rng: &mut R,
) -> Instance<W> {
    assert!(lo >= 1 && lo <= hi, "costs must be positive");
    let mut m = vec![W::zero(); n * n];
    for i in 0..n {
        for j in (i + 1)..n {
            let c = W::from(rng.gen_range(lo..=hi)).expect("cost fits the weight type");
            m[i * n + j] = c;
            m[j * n + i] = c;
        }
    }
    Instance::from_matrix(name, n, m).expect("generated matrix is valid")
}

/// `rows x cols` lattice with the given spacing, EUC_2D metric. When the
/// vertex count is even the lattice has a Hamiltonian cycle of unit steps,
/// so the optimum `n * spacing` is recorded as known.
pub fn grid_instance<W: Weight>(name: impl Into<String>, rows: usize, cols: usize, spacing: u32) -> Instance<W> {
    assert!(rows >= 2 && cols >= 2 && spacing >= 1, "grid needs at least 2x2 points");
    let s = f64::from(spacing);
    let points = (0..rows)
        .flat_map(|r| (0..cols).map(move |c| Point { x: c as f64 * s, y: r as f64 * s }))
        .collect();
    let n = rows * cols;
    let optimum = (n % 2 == 0).then(|| W::from(n as u64 * u64::from(spacing)).expect("optimum fits the weight type"));
    Instance::from_coords(name, WeightKind::Euc2d, points)
        .expect("lattice points are distinct")
        .with_known_optimum(optimum)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_optimum_is_a_unit_step_cycle() {
        let inst = grid_instance::<i64>("g", 4, 3, 7);
        assert_eq!(inst.known_optimum(), Some(84));
        // serpentine through columns 1..3, back along column 0
        let mut order = Vec::new();
        for r in 0..4 {
            let cols: Vec<usize> = if r % 2 == 0 { vec![1, 2] } else { vec![2, 1] };
            order.extend(cols.into_iter().map(|c| r * 3 + c));
        }
        order.extend((0..4).rev().map(|r| r * 3));
        assert_eq!(inst.tour_cost(&order).unwrap(), 84);
        assert_eq!(grid_instance::<i64>("odd", 3, 3, 1).known_optimum(), None);
    }
}
