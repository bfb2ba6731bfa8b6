//! Uniform height grids over a disk.

use crate::error::{domain, Error, Result};

/// Relative slack on the rim test, so that a cell lying on the rim up to
/// coordinate roundoff is kept.
const RIM_SLACK: f64 = 1e-12;

/// Minimum number of usable points a grid must carry to be fitted.
pub const MIN_FIT_POINTS: usize = 100;

/// Cell layout: `nx` columns at `x0 + i·dx`, `ny` rows at `y0 + j·dy`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridLayout {
    pub nx: usize,
    pub ny: usize,
    pub x0: f64,
    pub y0: f64,
    pub dx: f64,
    pub dy: f64,
}

impl GridLayout {
    pub fn validate(&self) -> Result<()> {
        if self.nx == 0 || self.ny == 0 {
            return Err(domain(format!(
                "grid must be non-empty, got {}x{}",
                self.nx, self.ny
            )));
        }
        if !self.x0.is_finite() || !self.y0.is_finite() {
            return Err(domain("grid origin must be finite"));
        }
        if !(self.dx > 0.0 && self.dx.is_finite()) || !(self.dy > 0.0 && self.dy.is_finite()) {
            return Err(domain(format!(
                "grid steps must be finite and > 0, got dx = {}, dy = {}",
                self.dx, self.dy
            )));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x0 + i as f64 * self.dx
    }

    pub fn y(&self, j: usize) -> f64 {
        self.y0 + j as f64 * self.dy
    }

    /// Midpoint of the bounding box.
    pub fn midpoint(&self) -> (f64, f64) {
        (
            self.x0 + 0.5 * (self.nx - 1) as f64 * self.dx,
            self.y0 + 0.5 * (self.ny - 1) as f64 * self.dy,
        )
    }
}

/// Heights in mm on a [`GridLayout`], row-major (`j·nx + i`), with `NaN`
/// marking missing cells, plus the disk center and rim radius.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceGrid {
    layout: GridLayout,
    heights: Vec<f64>,
    center: (f64, f64),
    rim_radius: f64,
}

impl SurfaceGrid {
    /// `center` defaults to the bounding-box midpoint; `rim_radius` to the
    /// largest center distance of any non-missing cell.
    pub fn new(
        layout: GridLayout,
        heights: Vec<f64>,
        center: Option<(f64, f64)>,
        rim_radius: Option<f64>,
    ) -> Result<Self> {
        layout.validate()?;
        if heights.len() != layout.len() {
            return Err(domain(format!(
                "expected {} heights for a {}x{} grid, got {}",
                layout.len(),
                layout.nx,
                layout.ny,
                heights.len()
            )));
        }
        if let Some(k) = heights.iter().position(|h| h.is_infinite()) {
            return Err(domain(format!("height at cell {k} is infinite")));
        }
        let center = center.unwrap_or_else(|| layout.midpoint());
        if !center.0.is_finite() || !center.1.is_finite() {
            return Err(domain("center must be finite"));
        }
        let rim_radius = match rim_radius {
            Some(r) => r,
            None => {
                let mut grid = SurfaceGrid {
                    layout,
                    heights,
                    center,
                    rim_radius: 1.0,
                };
                grid.rim_radius = grid.max_data_radius()?;
                return Ok(grid);
            }
        };
        if !(rim_radius > 0.0 && rim_radius.is_finite()) {
            return Err(domain(format!(
                "rim radius must be finite and > 0, got {rim_radius}"
            )));
        }
        Ok(SurfaceGrid {
            layout,
            heights,
            center,
            rim_radius,
        })
    }

    fn max_data_radius(&self) -> Result<f64> {
        let mut best = 0.0_f64;
        let mut any = false;
        for j in 0..self.layout.ny {
            for i in 0..self.layout.nx {
                if !self.height(i, j).is_nan() {
                    any = true;
                    best = best.max(self.distance(i, j));
                }
            }
        }
        if !any {
            return Err(Error::Empty("grid has no non-missing heights".into()));
        }
        if best == 0.0 {
            return Err(domain(
                "cannot infer a rim radius from data at the center only",
            ));
        }
        Ok(best)
    }

    pub fn layout(&self) -> &GridLayout {
        &self.layout
    }

    pub fn nx(&self) -> usize {
        self.layout.nx
    }

    pub fn ny(&self) -> usize {
        self.layout.ny
    }

    pub fn x_coords(&self) -> Vec<f64> {
        (0..self.layout.nx).map(|i| self.layout.x(i)).collect()
    }

    pub fn y_coords(&self) -> Vec<f64> {
        (0..self.layout.ny).map(|j| self.layout.y(j)).collect()
    }

    pub fn heights(&self) -> &[f64] {
        &self.heights
    }

    pub fn height(&self, i: usize, j: usize) -> f64 {
        self.heights[j * self.layout.nx + i]
    }

    pub fn center(&self) -> (f64, f64) {
        self.center
    }

    pub fn rim_radius(&self) -> f64 {
        self.rim_radius
    }

    /// Distance of cell `(i, j)` from the center, in mm.
    pub fn distance(&self, i: usize, j: usize) -> f64 {
        (self.layout.x(i) - self.center.0).hypot(self.layout.y(j) - self.center.1)
    }

    /// Normalized radius of cell `(i, j)`, or `None` outside the rim.
    /// Cells on the rim up to roundoff map to exactly 1.
    pub fn normalized_radius(&self, i: usize, j: usize) -> Option<f64> {
        let r = self.distance(i, j) / self.rim_radius;
        if r <= 1.0 {
            Some(r)
        } else if r <= 1.0 + RIM_SLACK {
            Some(1.0)
        } else {
            None
        }
    }

    /// Row-major `(i, j, r, h)` for every non-missing cell inside the rim.
    pub fn disk_cells(&self) -> impl Iterator<Item = (usize, usize, f64, f64)> + '_ {
        let nx = self.layout.nx;
        (0..self.heights.len()).filter_map(move |k| {
            let (i, j) = (k % nx, k / nx);
            let h = self.heights[k];
            if h.is_nan() {
                return None;
            }
            self.normalized_radius(i, j).map(|r| (i, j, r, h))
        })
    }

    /// Number of non-missing cells inside the rim.
    pub fn n_disk_points(&self) -> usize {
        self.disk_cells().count()
    }

    /// Checks the fitting precondition of at least [`MIN_FIT_POINTS`]
    /// usable cells.
    pub fn validate(&self) -> Result<()> {
        let n = self.n_disk_points();
        if n == 0 {
            return Err(Error::Empty("no non-missing heights inside the rim".into()));
        }
        if n < MIN_FIT_POINTS {
            return Err(domain(format!(
                "grid has {n} usable points inside the rim, need at least {MIN_FIT_POINTS}"
            )));
        }
        Ok(())
    }

    /// Same geometry with new heights.
    pub fn with_heights(&self, heights: Vec<f64>) -> Result<Self> {
        SurfaceGrid::new(
            self.layout,
            heights,
            Some(self.center),
            Some(self.rim_radius),
        )
    }

    /// Applies `f` to every non-missing height.
    pub fn map_heights(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        let heights = self
            .heights
            .iter()
            .map(|&h| if h.is_nan() { h } else { f(h) })
            .collect();
        self.with_heights(heights)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn layout(n: usize) -> GridLayout {
        GridLayout {
            nx: n,
            ny: n,
            x0: -1.0,
            y0: -1.0,
            dx: 2.0 / (n - 1) as f64,
            dy: 2.0 / (n - 1) as f64,
        }
    }

    #[test]
    fn defaults_from_data() {
        let mut h = vec![f64::NAN; 9];
        h[4] = 3.0;
        h[1] = 1.0;
        let g = SurfaceGrid::new(layout(3), h, None, None).unwrap();
        assert_eq!(g.center(), (0.0, 0.0));
        assert_eq!(g.rim_radius(), 1.0);
        let cells: Vec<_> = g.disk_cells().collect();
        assert_eq!(cells, vec![(1, 0, 1.0, 1.0), (1, 1, 0.0, 3.0)]);
    }

    #[test]
    fn rim_inclusion_and_exclusion() {
        let g = SurfaceGrid::new(layout(3), vec![1.0; 9], None, Some(1.0)).unwrap();
        // Corners lie at distance √2.
        assert_eq!(g.n_disk_points(), 5);
        assert_eq!(g.normalized_radius(0, 0), None);
        assert_eq!(g.normalized_radius(2, 1), Some(1.0));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(SurfaceGrid::new(layout(3), vec![1.0; 8], None, None).is_err());
        let mut h = vec![1.0; 9];
        h[0] = f64::INFINITY;
        assert!(SurfaceGrid::new(layout(3), h, None, None).is_err());
        assert!(matches!(
            SurfaceGrid::new(layout(3), vec![f64::NAN; 9], None, None),
            Err(Error::Empty(_))
        ));
        assert!(SurfaceGrid::new(layout(3), vec![1.0; 9], None, Some(0.0)).is_err());
        let mut bad = layout(3);
        bad.dx = 0.0;
        assert!(SurfaceGrid::new(bad, vec![1.0; 9], None, None).is_err());
    }

    #[test]
    fn validate_counts_points() {
        let small = SurfaceGrid::new(layout(5), vec![1.0; 25], None, None).unwrap();
        assert!(small.validate().is_err());
        let big = SurfaceGrid::new(layout(15), vec![1.0; 225], None, Some(1.0)).unwrap();
        assert!(big.validate().is_ok());
    }
}
