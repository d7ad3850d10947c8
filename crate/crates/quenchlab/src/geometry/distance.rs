use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::solver::{Grid, ScalarField};

use super::boundary::FreeBoundarySet;

/// Per-node Euclidean distance to the free boundary point cloud.
#[derive(Debug, Clone)]
pub struct DistanceField {
    grid: Grid,
    values: Vec<f64>,
}

impl DistanceField {
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[self.grid.index(i, j)]
    }

    /// Distance value at the node nearest to `p`.
    pub fn nearest(&self, p: [f64; 2]) -> f64 {
        let h = self.grid.h();
        let nmax = self.grid.n_axis() - 1;
        let i = (((p[0] - self.grid.origin()[0]) / h).round().max(0.0) as usize).min(nmax);
        let j = if self.grid.dim() == 2 {
            (((p[1] - self.grid.origin()[1]) / h).round().max(0.0) as usize).min(nmax)
        } else {
            0
        };
        self.at(i, j)
    }

    pub fn as_field(&self) -> ScalarField {
        ScalarField::new(self.grid.clone(), self.values.clone()).expect("finite distances")
    }
}

/// Exact (brute force) distance from every node to the nearest cloud point.
pub fn distance_field(fb: &FreeBoundarySet) -> Result<DistanceField> {
    if fb.is_empty() {
        return Err(Error::EmptyFreeBoundary);
    }
    let grid = fb.grid().clone();
    let pts = fb.points();
    let values: Vec<f64> = (0..grid.node_count())
        .into_par_iter()
        .map(|k| {
            let (i, j) = grid.coords(k);
            let p = grid.position(i, j);
            let mut best = f64::INFINITY;
            for q in pts {
                let d2 = (p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2);
                if d2 < best {
                    best = d2;
                }
            }
            best.sqrt()
        })
        .collect();
    Ok(DistanceField { grid, values })
}
