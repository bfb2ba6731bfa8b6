//! Seeded synthetic surfaces from the corneal model.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use super::grid::{GridLayout, SurfaceGrid};
use crate::cornea::{CornealModel, CornealParams};
use crate::error::{domain, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SynthOptions {
    pub nx: usize,
    pub ny: usize,
    /// Standard deviation of additive Gaussian noise, mm.
    pub sigma: f64,
    pub seed: u64,
}

impl Default for SynthOptions {
    fn default() -> Self {
        SynthOptions {
            nx: 123,
            ny: 123,
            sigma: 0.0,
            seed: 0,
        }
    }
}

/// Model heights on an `nx × ny` grid spanning the square circumscribing
/// the rim, centered at the origin. Cells outside the rim are missing.
/// Noise is drawn in row-major order over in-rim cells only, so a given
/// seed and geometry always produce the same grid.
pub fn synth_grid(params: &CornealParams, opts: &SynthOptions) -> Result<SurfaceGrid> {
    if opts.nx < 2 || opts.ny < 2 {
        return Err(domain(format!(
            "synthetic grid needs nx, ny ≥ 2, got {}x{}",
            opts.nx, opts.ny
        )));
    }
    if !(opts.sigma >= 0.0) || !opts.sigma.is_finite() {
        return Err(domain(format!(
            "noise sigma must be finite and ≥ 0, got {}",
            opts.sigma
        )));
    }
    let rim = params.rim_radius;
    let layout = GridLayout {
        nx: opts.nx,
        ny: opts.ny,
        x0: -rim,
        y0: -rim,
        dx: 2.0 * rim / (opts.nx - 1) as f64,
        dy: 2.0 * rim / (opts.ny - 1) as f64,
    };
    let blank = SurfaceGrid::new(layout, vec![0.0; layout.len()], Some((0.0, 0.0)), Some(rim))?;
    let model = CornealModel::new(*params)?;
    let noise = if opts.sigma > 0.0 {
        Some(Normal::new(0.0, opts.sigma).map_err(|e| domain(e.to_string()))?)
    } else {
        None
    };
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut heights = vec![f64::NAN; layout.len()];
    for (i, j, r, _) in blank.disk_cells() {
        let mut h = model.height(r)?;
        if let Some(n) = &noise {
            h += n.sample(&mut rng);
        }
        heights[j * opts.nx + i] = h;
    }
    blank.with_heights(heights)
}
