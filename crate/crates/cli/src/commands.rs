use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::{json, Value};

use ab_phase::fredholm::{extrapolate_omega, OmegaSchedule};
use ab_phase::o21::{admissibility_check, algebra_residuals, build_discrete_series, Admissibility};
use ab_phase::radial::{hellmann_check, richardson_spectrum, RadialGrid};
use ab_phase::scattering::{cross_section_table, symmetric_angles, AbelOptions};
use ab_phase::{e0_select, free_phase_numeric, phase_shift_analytic, spectrum_analytic, FluxChannel, PhaseShiftRecord};

use crate::args::{
    AlgebraArgs, Command, CrossSectionArgs, FredholmArgs, FredholmOptions, HellmannArgs, MethodArg, PhaseShiftsArgs,
    SpectrumArgs,
};
use crate::error::CliError;
use crate::table::{Cell, Table};

pub enum Body {
    Table(Table),
    /// Always rendered as JSON.
    Report(Value),
}

/// Rendered body plus the verdict that decides the exit code. The body is
/// printed even when the verdict is a failure.
pub struct Outcome {
    pub body: Body,
    pub verdict: Result<(), CliError>,
}

pub fn execute(command: &Command) -> Result<Outcome, CliError> {
    match command {
        Command::PhaseShifts(a) => phase_shifts(a),
        Command::Spectrum(a) => spectrum(a),
        Command::AlgebraCheck(a) => algebra_check(a),
        Command::Hellmann(a) => hellmann(a),
        Command::Fredholm(a) => fredholm(a),
        Command::CrossSection(a) => cross_section(a),
    }
}

fn finite(name: &str, v: f64) -> Result<f64, CliError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::Usage(format!("--{name} must be finite")))
    }
}

fn schedule(opts: &FredholmOptions) -> Result<OmegaSchedule, CliError> {
    Ok(OmegaSchedule::new(opts.omegas.clone(), opts.ratio)?)
}

fn route(channel: &FluxChannel, method: MethodArg, a: &PhaseShiftsArgs) -> ab_phase::Result<PhaseShiftRecord> {
    match method {
        MethodArg::Analytic => Ok(phase_shift_analytic(channel)),
        MethodArg::Fredholm => {
            let s = OmegaSchedule::new(a.fredholm.omegas.clone(), a.fredholm.ratio)?;
            Ok(extrapolate_omega(channel, a.fredholm.energy, &s, a.fredholm.n_max)?.record)
        }
        MethodArg::Ode => free_phase_numeric(channel, a.k, a.r_max),
    }
}

fn phase_shifts(a: &PhaseShiftsArgs) -> Result<Outcome, CliError> {
    finite("alpha", a.alpha)?;
    let mut methods = a.method.clone();
    methods.sort();
    methods.dedup();
    if methods.contains(&MethodArg::Fredholm) {
        schedule(&a.fredholm)?;
    }

    let items: Vec<(i64, MethodArg)> = a.m.values().flat_map(|m| methods.iter().map(move |&k| (m, k))).collect();
    let results: Vec<_> = items
        .par_iter()
        .map(|&(m, method)| {
            let c = FluxChannel::new(m, a.alpha);
            (c, method, route(&c, method, a))
        })
        .collect();

    let mut table = Table::new(&["m", "alpha", "method", "value", "uncertainty", "deviation", "error"]);
    let mut failures = 0;
    for (c, method, result) in &results {
        let reference = phase_shift_analytic(c).value;
        let name = match method {
            MethodArg::Analytic => "analytic",
            MethodArg::Fredholm => "fredholm",
            MethodArg::Ode => "ode",
        };
        let row = match result {
            Ok(rec) => vec![
                c.m().into(),
                c.alpha().into(),
                name.into(),
                rec.value.into(),
                rec.uncertainty.into(),
                rec.deviation_from(reference).into(),
                Cell::Empty,
            ],
            Err(e) => {
                failures += 1;
                vec![
                    c.m().into(),
                    c.alpha().into(),
                    name.into(),
                    Cell::Empty,
                    Cell::Empty,
                    Cell::Empty,
                    e.to_string().as_str().into(),
                ]
            }
        };
        table.push(row);
    }
    let verdict = if failures == results.len() {
        Err(CliError::Numerical("every route failed".into()))
    } else {
        Ok(())
    };
    Ok(Outcome {
        body: Body::Table(table),
        verdict,
    })
}

fn spectrum(a: &SpectrumArgs) -> Result<Outcome, CliError> {
    finite("alpha", a.alpha)?;
    let channel = FluxChannel::new(a.m, a.alpha);
    let omega = a.omega.unwrap_or(1.0);
    let analytic = spectrum_analytic(&channel, omega, a.n)?;
    let numeric = if a.numeric {
        let grid = RadialGrid::new(a.grid.rho_max, a.grid.points)?;
        let s = richardson_spectrum(&channel, &grid, a.n as usize + 1)?;
        Some(s.extrapolated.iter().map(|r| r * omega).collect::<Vec<f64>>())
    } else {
        None
    };

    let mut table = Table::new(&["n", "analytic", "numeric", "deviation"]);
    let mut worst: f64 = 0.0;
    for (i, level) in analytic.levels.iter().enumerate() {
        let num = numeric.as_ref().map(|v| v[i]);
        let dev = num.map(|x| x - level.energy);
        if let Some(d) = dev {
            worst = worst.max(d.abs() / omega);
        }
        table.push(vec![(level.n as i64).into(), level.energy.into(), num.into(), dev.into()]);
    }
    let verdict = if worst > a.tolerance || worst.is_nan() {
        Err(CliError::Numerical(format!(
            "numeric levels deviate by {worst:e} omega, above {:e}",
            a.tolerance
        )))
    } else {
        Ok(())
    };
    Ok(Outcome {
        body: Body::Table(table),
        verdict,
    })
}

fn algebra_check(a: &AlgebraArgs) -> Result<Outcome, CliError> {
    finite("alpha", a.alpha)?;
    let channel = FluxChannel::new(a.m, a.alpha);
    let e0 = a.e0_override.unwrap_or_else(|| e0_select(&channel));
    let admissibility = admissibility_check(Complex64::new(e0, 0.0));
    let mut doc = json!({
        "channel": {"m": a.m, "alpha": a.alpha},
        "e0": e0,
        "overridden": a.e0_override.is_some(),
        "admissible": admissibility.is_admissible(),
    });
    if let Admissibility::Inadmissible(_) = admissibility {
        doc["reason"] = Value::from(admissibility.reason());
        doc["report"] = Value::Null;
        doc["pass"] = Value::from(false);
        return Ok(Outcome {
            body: Body::Report(doc),
            verdict: Err(CliError::Numerical(format!("e0 = {e0}: {}", admissibility.reason()))),
        });
    }

    let report = algebra_residuals(&build_discrete_series(e0, a.dimension)?);
    let max = report.max_residual();
    let pass = max <= a.tolerance;
    doc["report"] = serde_json::to_value(report)?;
    doc["max_residual"] = Value::from(max);
    doc["pass"] = Value::from(pass);
    let verdict = if pass {
        Ok(())
    } else {
        Err(CliError::Numerical(format!("residual {max:e} above {:e}", a.tolerance)))
    };
    Ok(Outcome {
        body: Body::Report(doc),
        verdict,
    })
}

fn hellmann(a: &HellmannArgs) -> Result<Outcome, CliError> {
    finite("alpha", a.alpha)?;
    let channel = FluxChannel::new(a.m, a.alpha);
    let nu2 = channel.nu() * channel.nu();
    let dnu2 = a.dnu2.unwrap_or(1e-3_f64.min(0.5 * nu2));
    let grid = RadialGrid::new(a.grid.rho_max, a.grid.points)?;
    let check = hellmann_check(&channel, a.level, &grid, dnu2)?;
    let difference = (check.lhs - check.rhs).abs();
    let positive = check.lhs > 0.0 && check.rhs > 0.0;
    let pass = positive && difference <= a.tolerance;
    let doc = json!({
        "channel": {"m": a.m, "alpha": a.alpha},
        "level": a.level,
        "dnu2": dnu2,
        "lhs": check.lhs,
        "rhs": check.rhs,
        "difference": difference,
        "positive": positive,
        "pass": pass,
    });
    let verdict = if pass {
        Ok(())
    } else {
        Err(CliError::Numerical(format!(
            "lhs {} and rhs {} differ by {difference:e} or are not positive",
            check.lhs, check.rhs
        )))
    };
    Ok(Outcome {
        body: Body::Report(doc),
        verdict,
    })
}

fn fredholm(a: &FredholmArgs) -> Result<Outcome, CliError> {
    finite("alpha", a.alpha)?;
    let s = schedule(&a.fredholm)?;
    let channels: Vec<FluxChannel> = a.m.values().map(|m| FluxChannel::new(m, a.alpha)).collect();
    let fits: Vec<_> = channels
        .par_iter()
        .map(|c| extrapolate_omega(c, a.fredholm.energy, &s, a.fredholm.n_max))
        .collect();

    let mut table = Table::new(&[
        "m",
        "alpha",
        "energy",
        "omega",
        "epsilon",
        "phase",
        "uncertainty",
        "analytic",
        "error",
    ]);
    let mut failures = 0;
    for (c, fit) in channels.iter().zip(&fits) {
        let analytic = phase_shift_analytic(c).value;
        let base = |omega: Cell, eps: Cell| vec![c.m().into(), c.alpha().into(), a.fredholm.energy.into(), omega, eps];
        match fit {
            Ok(fit) => {
                for run in &fit.runs {
                    let mut row = base(run.omega.into(), run.epsilon.into());
                    row.extend([run.phase.into(), Cell::Empty, analytic.into(), Cell::Empty]);
                    table.push(row);
                }
                let mut row = base(0.0.into(), 0.0.into());
                row.extend([
                    fit.record.value.into(),
                    fit.record.uncertainty.into(),
                    analytic.into(),
                    Cell::Empty,
                ]);
                table.push(row);
            }
            Err(e) => {
                failures += 1;
                let mut row = base(Cell::Empty, Cell::Empty);
                row.extend([Cell::Empty, Cell::Empty, analytic.into(), e.to_string().as_str().into()]);
                table.push(row);
            }
        }
    }
    let verdict = if failures == channels.len() {
        Err(CliError::Numerical("every channel failed".into()))
    } else {
        Ok(())
    };
    Ok(Outcome {
        body: Body::Table(table),
        verdict,
    })
}

fn cross_section(a: &CrossSectionArgs) -> Result<Outcome, CliError> {
    finite("alpha", a.alpha)?;
    let cone = a.cone_deg.to_radians();
    let opts = AbelOptions {
        m_cut: a.m_cut,
        abel_eta: a.abel_eta,
        levels: a.levels,
        forward_cone: cone,
        ..AbelOptions::default()
    };
    if a.angles == 0 {
        return Err(CliError::Usage("--angles must be positive".into()));
    }
    let angles = symmetric_angles(cone, a.angles);
    let chunks: Vec<Vec<f64>> = angles.chunks(8).map(<[f64]>::to_vec).collect();
    let parts: Vec<_> = chunks
        .par_iter()
        .map(|chunk| cross_section_table(a.alpha, a.k, chunk, &opts))
        .collect::<Result<_, _>>()?;

    let mut table = Table::new(&[
        "angle",
        "amplitude_re",
        "amplitude_im",
        "dcs",
        "dcs_uncertainty",
        "converged",
        "cutoff",
    ]);
    let mut converged = 0;
    for row in parts.iter().flat_map(|t| &t.rows) {
        converged += row.converged as usize;
        table.push(vec![
            row.angle.into(),
            row.amplitude.re.into(),
            row.amplitude.im.into(),
            row.dcs.into(),
            row.dcs_uncertainty.into(),
            row.converged.into(),
            (row.cutoff as i64).into(),
        ]);
    }
    let verdict = if converged == 0 {
        Err(CliError::Numerical("no angle converged".into()))
    } else {
        Ok(())
    };
    Ok(Outcome {
        body: Body::Table(table),
        verdict,
    })
}
