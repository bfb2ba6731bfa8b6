use std::fmt::Write as _;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};

use fracbessel::cornea::{height_profile, CornealParams};
use fracbessel::fitting::{self, io, Bounds, FitOptions, SurfaceGrid, SynthOptions};
use fracbessel::format::sig;
use fracbessel::specfun::{self, FracOrder};
use fracbessel::volterra::oracle_report;

use crate::output::write_atomic;
use crate::{AsymArgs, EvalArgs, FitArgs, OracleArgs, ProfileArgs, SynthArgs};

pub fn eval(args: &EvalArgs) -> Result<String> {
    let alpha = FracOrder::new(args.alpha)?;
    let v = specfun::i0_alpha(alpha, args.x, args.rel_tol)?;
    Ok(format!(
        "value = {}\nterms_used = {}\nlast_term = {}\ntail_bound = {}\n",
        sig(v.value),
        v.terms_used,
        sig(v.last_term_magnitude),
        sig(v.tail_bound)
    ))
}

pub fn asym_check(args: &AsymArgs) -> Result<String> {
    let alpha = FracOrder::new(args.alpha)?;
    let mut out = format!(
        "# alpha = {}, growth exponent = {}, prefactor exponent = {}\n",
        sig(alpha.value()),
        sig(specfun::growth_exponent(alpha)),
        sig(specfun::prefactor_exponent(alpha))
    );
    let xs = if args.x.is_empty() {
        let x_max = specfun::max_finite_x(alpha)?;
        writeln!(out, "# largest x before overflow = {}", sig(x_max))?;
        specfun::doubling_ladder(x_max, args.rungs)
    } else {
        args.x.clone()
    };
    let rows = specfun::asym_ratio_table(alpha, &xs)?;
    // drift: local exponent d ln(ratio) / d ln x between successive rows.
    out.push_str("x,series,asym,ratio,rel_change,drift\n");
    for (k, r) in rows.iter().enumerate() {
        let (change, drift) = match (r.change, k.checked_sub(1).map(|p| &rows[p])) {
            (Some(c), Some(p)) => (sig(c), sig((r.ratio / p.ratio).ln() / (r.x / p.x).ln())),
            _ => (String::new(), String::new()),
        };
        writeln!(
            out,
            "{},{},{},{},{change},{drift}",
            sig(r.x),
            sig(r.series),
            sig(r.asym),
            sig(r.ratio)
        )?;
    }
    Ok(out)
}

pub fn oracle_check(args: &OracleArgs) -> Result<String> {
    if args.alpha == 0.0 {
        bail!("the Volterra oracle needs alpha > 0 (at alpha = 0 the equation is not an integral equation)");
    }
    let alpha = FracOrder::new(args.alpha)?;
    let table = oracle_report(alpha, args.x_max, &args.steps)?;
    let mut out = String::new();
    if args.alpha == 1.0 {
        out.push_str("# note: alpha = 1 has a regular kernel (x-t)^0 = 1; the product rule reduces to the ordinary trapezoid and the equation to the classical Bessel ODE\n");
    }
    let csv = table.to_csv();
    if let Some(path) = &args.out {
        write_atomic(path, &csv)?;
    }
    out.push_str(&csv);
    if let Some(order) = table.final_order() {
        writeln!(out, "# observed order = {}", sig(order))?;
    }
    Ok(out)
}

fn pair(v: Option<[f64; 2]>, default: (f64, f64)) -> (f64, f64) {
    v.map_or(default, |[lo, hi]| (lo, hi))
}

pub fn fit(args: &FitArgs) -> Result<String> {
    let text = std::fs::read_to_string(&args.input)
        .with_context(|| format!("cannot read {}", args.input.display()))?;
    let mut grid = io::parse_surface(&text).with_context(|| args.input.display().to_string())?;
    if let Some(rim) = args.rim {
        grid = SurfaceGrid::new(
            *grid.layout(),
            grid.heights().to_vec(),
            Some(grid.center()),
            Some(rim),
        )?;
    }

    let d = Bounds::default();
    let (a_lo, a_hi) = pair(args.a_bounds, (d.lower[0], d.upper[0]));
    let (b_lo, b_hi) = pair(args.b_bounds, (d.lower[1], d.upper[1]));
    let (al_lo, al_hi) = pair(args.alpha_bounds, (d.lower[2], d.upper[2]));
    let opts = FitOptions {
        init: args.init,
        bounds: Bounds::new([a_lo, b_lo, al_lo], [a_hi, b_hi, al_hi])?,
        max_evals: args.max_evals,
        rim_shift: args.rim_shift,
        ..FitOptions::default()
    };
    let report = fitting::fit_grid(&grid, &opts)?;

    let residual_path = args.residuals.clone().unwrap_or_else(|| {
        let mut p = args.input.clone().into_os_string();
        p.push(".residuals.csv");
        PathBuf::from(p)
    });
    let text = io::write_report(&report);
    if let Some(map) = &report.residual_grid {
        write_atomic(&residual_path, &io::write_grid(map))?;
    }
    if let Some(path) = &args.report {
        write_atomic(path, &text)?;
    }
    Ok(text)
}

pub fn synth(args: &SynthArgs) -> Result<String> {
    let m = &args.model;
    let params = CornealParams::new(m.a, m.b, m.alpha, args.rim)?;
    let opts = SynthOptions {
        nx: args.nx,
        ny: args.ny,
        sigma: args.sigma,
        seed: args.seed,
    };
    let grid = fitting::synth_grid(&params, &opts)?;
    write_atomic(&args.out, &io::write_grid(&grid))?;
    Ok(format!(
        "wrote {} ({}x{}, {} points inside the rim)\n",
        args.out.display(),
        args.nx,
        args.ny,
        grid.n_disk_points()
    ))
}

pub fn profile(args: &ProfileArgs) -> Result<String> {
    let m = &args.model;
    let params = CornealParams::unit(m.a, m.b, m.alpha)?;
    let rows = height_profile(&params, args.points)?;
    let mut csv = String::from("r,h\n");
    for (r, h) in rows {
        writeln!(csv, "{},{}", sig(r), sig(h))?;
    }
    match &args.out {
        Some(path) => {
            write_atomic(path, &csv)?;
            Ok(String::new())
        }
        None => Ok(csv),
    }
}
