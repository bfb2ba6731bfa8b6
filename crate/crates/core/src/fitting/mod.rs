//! Least-squares recovery of `(a, b, α)` from gridded surface heights.
//!
//! A grid is oriented (apex up, optionally rim-zeroed), reduced to radial
//! samples `(r, h)` inside the rim, and the sum of squared height
//! residuals is minimized by Nelder–Mead from several starts. Bounds are
//! enforced by a finite penalty so the objective is total.

mod grid;
pub mod io;
pub mod nelder_mead;
mod synth;

pub use grid::{GridLayout, SurfaceGrid, MIN_FIT_POINTS};
pub use synth::{synth_grid, SynthOptions};

use rayon::prelude::*;

use crate::cornea::{CornealModel, CornealParams};
use crate::error::{domain, Error, Result};
use nelder_mead::{minimize, NmOptions};

/// One radial sample: normalized radius and height in mm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialSample {
    pub r: f64,
    pub h: f64,
}

/// Radial samples in canonical `(r, h)` order, with the distinct radii
/// factored out so each model evaluation is done once per radius.
#[derive(Debug, Clone, PartialEq)]
pub struct Samples {
    samples: Vec<RadialSample>,
    radii: Vec<f64>,
    radius_index: Vec<usize>,
}

impl Samples {
    /// Sorts by `(r, h)`. Errors on empty input, `r ∉ [0, 1]` or
    /// non-finite `h`.
    pub fn new(mut samples: Vec<RadialSample>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::Empty("no samples to fit".into()));
        }
        for s in &samples {
            if !(0.0..=1.0).contains(&s.r) {
                return Err(domain(format!("sample radius {} lies outside [0, 1]", s.r)));
            }
            if !s.h.is_finite() {
                return Err(domain(format!("sample height {} is not finite", s.h)));
            }
        }
        samples.sort_by(|p, q| p.r.total_cmp(&q.r).then(p.h.total_cmp(&q.h)));
        let mut radii: Vec<f64> = Vec::new();
        let mut radius_index = Vec::with_capacity(samples.len());
        for s in &samples {
            if radii.last() != Some(&s.r) {
                radii.push(s.r);
            }
            radius_index.push(radii.len() - 1);
        }
        Ok(Samples {
            samples,
            radii,
            radius_index,
        })
    }

    pub fn as_slice(&self) -> &[RadialSample] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Distinct radii, ascending.
    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    /// Multiplies every height by `s`.
    pub fn scaled(&self, s: f64) -> Result<Self> {
        Samples::new(
            self.samples
                .iter()
                .map(|p| RadialSample { r: p.r, h: s * p.h })
                .collect(),
        )
    }
}

/// Every non-missing cell inside the rim as `(r, h)`; no binning.
pub fn radial_reduce(grid: &SurfaceGrid) -> Result<Samples> {
    let samples: Vec<RadialSample> = grid
        .disk_cells()
        .map(|(_, _, r, h)| RadialSample { r, h })
        .collect();
    if samples.is_empty() {
        return Err(Error::Empty("no non-missing heights inside the rim".into()));
    }
    Samples::new(samples)
}

/// Kahan–Babuška–Neumaier summation in iteration order.
fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0_f64;
    let mut comp = 0.0_f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Model heights at the distinct radii. Evaluated in parallel; results
/// come back in index order.
fn model_at_radii(model: &CornealModel, radii: &[f64]) -> Result<Vec<f64>> {
    radii
        .par_iter()
        .with_min_len(256)
        .map(|&r| model.height(r))
        .collect()
}

/// Signed residuals `h_model(rᵢ) - hᵢ` in sample order.
pub fn residuals(params: &CornealParams, samples: &Samples) -> Result<Vec<f64>> {
    let model = CornealModel::new(*params)?;
    let at = model_at_radii(&model, &samples.radii)?;
    Ok(samples
        .samples
        .iter()
        .zip(&samples.radius_index)
        .map(|(s, &k)| at[k] - s.h)
        .collect())
}

/// `Σ (h_model(rᵢ) - hᵢ)²`, accumulated in `(r, h)` order with compensated
/// summation, so the value does not depend on the input order.
pub fn objective(params: &CornealParams, samples: &Samples) -> Result<f64> {
    Ok(compensated_sum(
        residuals(params, samples)?.into_iter().map(|e| e * e),
    ))
}

/// Closed box for `(a, b, α)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bounds {
    pub lower: [f64; 3],
    pub upper: [f64; 3],
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            lower: [1e-3, 1e-6, 0.0],
            upper: [100.0, 1e6, 1.0],
        }
    }
}

impl Bounds {
    pub fn new(lower: [f64; 3], upper: [f64; 3]) -> Result<Self> {
        let b = Bounds { lower, upper };
        b.validate()?;
        Ok(b)
    }

    pub fn validate(&self) -> Result<()> {
        for k in 0..3 {
            if !(self.lower[k] < self.upper[k]) || !self.upper[k].is_finite() {
                return Err(domain(format!(
                    "bound {k}: need finite lower < upper, got [{}, {}]",
                    self.lower[k], self.upper[k]
                )));
            }
        }
        if !(self.lower[0] > 0.0) || !(self.lower[1] > 0.0) {
            return Err(domain("lower bounds on a and b must be > 0"));
        }
        if self.lower[2] < 0.0 || self.upper[2] > 1.0 {
            return Err(domain("bounds on alpha must lie within [0, 1]"));
        }
        Ok(())
    }

    pub fn contains(&self, theta: &[f64; 3]) -> bool {
        (0..3).all(|k| theta[k] >= self.lower[k] && theta[k] <= self.upper[k])
    }

    /// Sum of coordinate excursions outside the box, each relative to the
    /// box width.
    fn excess(&self, theta: &[f64; 3]) -> f64 {
        (0..3)
            .map(|k| {
                let w = self.upper[k] - self.lower[k];
                ((self.lower[k] - theta[k]).max(0.0) + (theta[k] - self.upper[k]).max(0.0)) / w
            })
            .sum()
    }
}

/// Objective value assigned outside the bounds or where the model fails.
pub const PENALTY: f64 = 1e30;

/// [`objective`] over raw `(a, b, α)`, with [`PENALTY`] scaled by the
/// distance from the box for infeasible points.
pub fn penalized_objective(theta: &[f64; 3], samples: &Samples, bounds: &Bounds) -> f64 {
    if theta.iter().any(|v| !v.is_finite()) {
        return f64::INFINITY;
    }
    if !bounds.contains(theta) {
        return PENALTY * (1.0 + bounds.excess(theta));
    }
    CornealParams::unit(theta[0], theta[1], theta[2])
        .and_then(|p| objective(&p, samples))
        .ok()
        .filter(|v| v.is_finite())
        .unwrap_or(PENALTY)
}

/// Default starting points `(a, b, α)`.
pub const DEFAULT_STARTS: [[f64; 3]; 3] = [[0.5, 1.0, 0.5], [1.0, 1.5, 0.8], [0.3, 0.8, 0.3]];

/// Simplex restarts from the incumbent per start.
const MAX_RESTARTS: usize = 5;

#[derive(Debug, Clone, PartialEq)]
pub struct FitOptions {
    /// Extra start tried before [`DEFAULT_STARTS`].
    pub init: Option<[f64; 3]>,
    pub bounds: Bounds,
    pub ftol: f64,
    pub xtol: f64,
    /// Objective evaluations per start, restarts included.
    pub max_evals: usize,
    /// Shift heights so the outer ring averages zero before fitting.
    pub rim_shift: bool,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            init: None,
            bounds: Bounds::default(),
            ftol: 1e-12,
            xtol: 1e-8,
            max_evals: 20_000,
            rim_shift: false,
        }
    }
}

/// Sign and offset applied to the input heights before fitting:
/// `h_fit = sign · h_in - shift`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Orientation {
    pub flipped: bool,
    pub shift: f64,
}

impl Default for Orientation {
    fn default() -> Self {
        Orientation {
            flipped: false,
            shift: 0.0,
        }
    }
}

/// Outer ring used for the optional rim shift, as a fraction of the rim.
pub const RIM_RING: f64 = 0.02;

/// Orients a grid apex-up: the sign is flipped when the inner half of the
/// disk lies below the outer half on average. With `rim_shift`, heights
/// are then offset so the ring `r ≥ 1 - RIM_RING` averages zero.
pub fn orient(grid: &SurfaceGrid, rim_shift: bool) -> Result<(SurfaceGrid, Orientation)> {
    let (mut inner, mut n_in, mut outer, mut n_out) = (0.0, 0usize, 0.0, 0usize);
    let (mut ring, mut n_ring) = (0.0, 0usize);
    for (_, _, r, h) in grid.disk_cells() {
        if r < 0.5 {
            inner += h;
            n_in += 1;
        } else {
            outer += h;
            n_out += 1;
        }
        if r >= 1.0 - RIM_RING {
            ring += h;
            n_ring += 1;
        }
    }
    if n_in + n_out == 0 {
        return Err(Error::Empty("no non-missing heights inside the rim".into()));
    }
    let flipped = n_in > 0 && n_out > 0 && inner / (n_in as f64) < outer / (n_out as f64);
    let sign = if flipped { -1.0 } else { 1.0 };
    let shift = if rim_shift && n_ring > 0 {
        sign * ring / n_ring as f64
    } else {
        0.0
    };
    let oriented = grid.map_heights(|h| sign * h - shift)?;
    Ok((oriented, Orientation { flipped, shift }))
}

/// Result of a fit.
#[derive(Debug, Clone, PartialEq)]
pub struct FitReport {
    pub params: CornealParams,
    pub objective: f64,
    pub mae: f64,
    pub rmse: f64,
    pub max_residual: f64,
    pub n_points_used: usize,
    pub objective_evals: usize,
    /// The best run met both the value-spread and simplex-size tolerances.
    pub converged: bool,
    /// Relative simplex size of the best run at exit.
    pub final_simplex_size: f64,
    pub orientation: Orientation,
    /// Absolute residuals per input cell (`NaN` where missing or outside
    /// the rim); present for grid fits.
    pub residual_grid: Option<SurfaceGrid>,
}

struct Incumbent {
    theta: [f64; 3],
    f: f64,
    converged: bool,
    size: f64,
}

/// Fits `(a, b, α)` on a unit rim to radial samples.
pub fn fit(samples: &Samples, opts: &FitOptions) -> Result<FitReport> {
    opts.bounds.validate()?;
    let energy = compensated_sum(samples.as_slice().iter().map(|s| s.h * s.h));
    let nm = NmOptions {
        ftol: opts.ftol,
        // Objective differences below roundoff in the residuals cannot be resolved.
        fatol: (64.0 * f64::EPSILON).powi(2) * energy,
        xtol: opts.xtol,
        max_evals: opts.max_evals,
        ..NmOptions::default()
    };

    let mut total_evals = 0;
    let mut best: Option<Incumbent> = None;
    let starts = opts.init.iter().chain(DEFAULT_STARTS.iter());
    for start in starts {
        let f = |theta: &[f64; 3]| penalized_objective(theta, samples, &opts.bounds);
        let mut run = minimize(f, *start, &nm);
        let mut used = run.evals;
        for _ in 0..MAX_RESTARTS {
            if used >= opts.max_evals {
                break;
            }
            let budget = NmOptions {
                max_evals: opts.max_evals - used,
                ..nm
            };
            let next = minimize(f, run.x, &budget);
            used += next.evals;
            let improved = next.f < run.f - (opts.ftol * run.f.abs() + nm.fatol);
            if next.f <= run.f {
                run = next;
            }
            if !improved && run.converged {
                break;
            }
        }
        total_evals += used;
        if best.as_ref().is_none_or(|b| run.f < b.f) {
            best = Some(Incumbent {
                theta: run.x,
                f: run.f,
                converged: run.converged,
                size: run.size,
            });
        }
    }
    let best = best.expect("at least one start");
    if best.f >= PENALTY {
        return Err(Error::NonConvergence {
            what: "no start reached a feasible parameter set".into(),
            iterations: total_evals,
        });
    }

    let params = CornealParams::unit(best.theta[0], best.theta[1], best.theta[2])?;
    let res = residuals(&params, samples)?;
    let n = res.len() as f64;
    let mae = compensated_sum(res.iter().map(|e| e.abs())) / n;
    let objective = compensated_sum(res.iter().map(|e| e * e));
    Ok(FitReport {
        params,
        objective,
        mae,
        rmse: (objective / n).sqrt(),
        max_residual: res.iter().fold(0.0_f64, |m, e| m.max(e.abs())),
        n_points_used: res.len(),
        objective_evals: total_evals,
        converged: best.converged,
        final_simplex_size: best.size,
        orientation: Orientation::default(),
        residual_grid: None,
    })
}

/// Orients, validates and reduces a grid, fits it, and maps absolute
/// residuals back to the input layout. The reported parameters carry the
/// grid's rim radius.
pub fn fit_grid(grid: &SurfaceGrid, opts: &FitOptions) -> Result<FitReport> {
    grid.validate()?;
    let (oriented, orientation) = orient(grid, opts.rim_shift)?;
    let samples = radial_reduce(&oriented)?;
    let mut report = fit(&samples, opts)?;
    report.params.rim_radius = grid.rim_radius();
    report.orientation = orientation;
    report.residual_grid = Some(residual_map(&oriented, &report.params)?);
    Ok(report)
}

/// `|h_model - h_data|` for every non-missing cell inside the rim, `NaN`
/// elsewhere. Radii are normalized by the grid's rim radius.
pub fn residual_map(grid: &SurfaceGrid, params: &CornealParams) -> Result<SurfaceGrid> {
    let model = CornealModel::new(*params)?;
    let mut out = vec![f64::NAN; grid.heights().len()];
    let cells: Vec<_> = grid.disk_cells().collect();
    let values: Vec<f64> = cells
        .par_iter()
        .with_min_len(256)
        .map(|&(_, _, r, h)| model.height(r).map(|m| (m - h).abs()))
        .collect::<Result<_>>()?;
    for (&(i, j, _, _), v) in cells.iter().zip(values) {
        out[j * grid.nx() + i] = v;
    }
    grid.with_heights(out)
}
