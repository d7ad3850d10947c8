use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Supported domain shapes on a uniform grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DomainShape {
    /// 1D interval `[x0, x0 + (n-1)h]`.
    Interval,
    /// 2D square `[x0, x0+L] × [y0, y0+L]`.
    Square,
    /// Disk inscribed in the square, realized as a masked square: nodes with
    /// `|X - c| < R` are interior, everything else holds the datum.
    Disk,
}

/// Node classification. Every node is exactly one of the two.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeClass {
    Interior,
    Boundary,
}

/// Uniform grid in dimension 1 or 2 with odd points-per-axis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    dim: usize,
    n_axis: usize,
    h: f64,
    origin: [f64; 2],
    shape: DomainShape,
}

impl Grid {
    pub fn interval(n_axis: usize, origin: f64, h: f64) -> Result<Self> {
        Self::new(1, n_axis, h, [origin, 0.0], DomainShape::Interval)
    }

    pub fn square(n_axis: usize, origin: [f64; 2], h: f64) -> Result<Self> {
        Self::new(2, n_axis, h, origin, DomainShape::Square)
    }

    pub fn disk(n_axis: usize, origin: [f64; 2], h: f64) -> Result<Self> {
        Self::new(2, n_axis, h, origin, DomainShape::Disk)
    }

    pub fn new(
        dim: usize,
        n_axis: usize,
        h: f64,
        origin: [f64; 2],
        shape: DomainShape,
    ) -> Result<Self> {
        if !(dim == 1 || dim == 2) {
            return Err(Error::Grid(format!("dimension must be 1 or 2, got {dim}")));
        }
        if n_axis < 33 || n_axis % 2 == 0 {
            return Err(Error::Grid(format!(
                "points-per-axis must be odd and >= 33, got {n_axis}"
            )));
        }
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::Grid(format!("spacing must be positive, got {h}")));
        }
        match (dim, shape) {
            (1, DomainShape::Interval) | (2, DomainShape::Square) | (2, DomainShape::Disk) => {}
            _ => {
                return Err(Error::Grid(format!(
                    "shape {shape:?} incompatible with dimension {dim}"
                )))
            }
        }
        Ok(Self { dim, n_axis, h, origin, shape })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_axis(&self) -> usize {
        self.n_axis
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn origin(&self) -> [f64; 2] {
        self.origin
    }

    pub fn shape(&self) -> DomainShape {
        self.shape
    }

    /// Side length `(n-1) h`.
    pub fn extent(&self) -> f64 {
        (self.n_axis - 1) as f64 * self.h
    }

    /// Total number of nodes.
    pub fn node_count(&self) -> usize {
        match self.dim {
            1 => self.n_axis,
            _ => self.n_axis * self.n_axis,
        }
    }

    /// Row-major linear index; `j` ignored in 1D.
    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        match self.dim {
            1 => i,
            _ => j * self.n_axis + i,
        }
    }

    #[inline]
    pub fn coords(&self, idx: usize) -> (usize, usize) {
        match self.dim {
            1 => (idx, 0),
            _ => (idx % self.n_axis, idx / self.n_axis),
        }
    }

    /// Physical position of node (i, j).
    #[inline]
    pub fn position(&self, i: usize, j: usize) -> [f64; 2] {
        [
            self.origin[0] + i as f64 * self.h,
            if self.dim == 2 { self.origin[1] + j as f64 * self.h } else { 0.0 },
        ]
    }

    /// Disk center and radius (largest inscribed in the square).
    pub fn disk_center_radius(&self) -> ([f64; 2], f64) {
        let half = 0.5 * self.extent();
        ([self.origin[0] + half, self.origin[1] + half], half)
    }

    pub fn classify(&self, i: usize, j: usize) -> NodeClass {
        match (self.dim, self.shape) {
            (1, _) => {
                if i == 0 || i == self.n_axis - 1 {
                    NodeClass::Boundary
                } else {
                    NodeClass::Interior
                }
            }
            (_, DomainShape::Square) => {
                if i == 0 || j == 0 || i == self.n_axis - 1 || j == self.n_axis - 1 {
                    NodeClass::Boundary
                } else {
                    NodeClass::Interior
                }
            }
            (_, _) => {
                // disk mask; the outermost frame is always collocation
                if i == 0 || j == 0 || i == self.n_axis - 1 || j == self.n_axis - 1 {
                    return NodeClass::Boundary;
                }
                let (c, r) = self.disk_center_radius();
                let p = self.position(i, j);
                let d2 = (p[0] - c[0]).powi(2) + (p[1] - c[1]).powi(2);
                if d2 < r * r {
                    NodeClass::Interior
                } else {
                    NodeClass::Boundary
                }
            }
        }
    }

    /// Linear indices of all interior nodes, in row-major order.
    pub fn interior_indices(&self) -> Vec<usize> {
        let mut out = Vec::new();
        match self.dim {
            1 => {
                for i in 1..self.n_axis - 1 {
                    out.push(i);
                }
            }
            _ => {
                for j in 0..self.n_axis {
                    for i in 0..self.n_axis {
                        if self.classify(i, j) == NodeClass::Interior {
                            out.push(self.index(i, j));
                        }
                    }
                }
            }
        }
        out
    }

    /// Linear indices of boundary (datum-holding) nodes.
    pub fn boundary_indices(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for idx in 0..self.node_count() {
            let (i, j) = self.coords(idx);
            if self.classify(i, j) == NodeClass::Boundary {
                out.push(idx);
            }
        }
        out
    }
}
