use std::fmt::Write as _;

use cbc_core::metrics::{bounds_report, bounds_report_with_history, l1_error, ViolationTracker};
use cbc_core::nvd::{
    analytic_cmax_clipped_thinc, analytic_cmax_thinc, cbc_report, one_step_oracle, sample_nvd,
    Condition,
};
use cbc_core::schemes::{SchemeConfig, SchemeKind};
use cbc_core::solver::{
    advance_1d, advance_2d, exact_advection_1d, init_square_wave, init_zalesak, Field2D, Grid1D,
    Grid2D, Rotation, SolverConfig,
};
use cbc_core::Error;

use crate::args::{Advect1dArgs, CmaxArgs, NvdArgs, OracleArgs, ZalesakArgs};
use crate::output::{self, commented, num, report_lines, sibling, tagged, RunManifest};
use crate::Failure;

type Outcome = Result<(), Failure>;

fn opt(v: Option<f64>) -> String {
    v.filter(|x| x.is_finite())
        .map(num)
        .unwrap_or_else(|| "none".into())
}

pub fn nvd(a: &NvdArgs) -> Outcome {
    let cfg = a.scheme.config()?;
    let curve = sample_nvd(&cfg, a.n)?;
    let mut csv = String::from("phi_tilde_c,phi_tilde_f\n");
    for s in &curve.samples {
        let _ = writeln!(csv, "{},{}", num(s.phi_c), num(s.phi_f));
    }
    let Some(path) = &a.out else {
        print!("{csv}");
        return Ok(());
    };
    let report = cbc_report(&curve);
    let plot = output::nvd_plot(&output::file_name(path), &cfg.label(), report.c_max);
    let mut m = RunManifest::new("nvd", &cfg);
    m.param("n", a.n);
    output::write_all(
        path,
        &[(path.clone(), csv), (sibling(path, "gp"), plot)],
        &mut m,
    )?;
    println!("c_max={}", num(report.c_max));
    Ok(())
}

fn analytic_cmax(cfg: &SchemeConfig) -> cbc_core::Result<Option<f64>> {
    Ok(match cfg.kind {
        SchemeKind::ThincOriginal => Some(analytic_cmax_thinc(cfg.beta)?),
        SchemeKind::ThincClipped => Some(analytic_cmax_clipped_thinc(cfg.beta, cfg.clip_slope)?),
        _ => None,
    })
}

pub fn cmax(a: &CmaxArgs) -> Outcome {
    let cfg = a.scheme.config()?;
    for &c in &a.at {
        if !(c > 0.0 && c <= 1.0) {
            return Err(Error::Config(format!("--at value {c} lies outside (0, 1]")).into());
        }
    }
    let r = cbc_report(&sample_nvd(&cfg, a.n)?);
    let mut lines = vec![
        format!("scheme={}", cfg.label()),
        format!("n={}", a.n),
        format!("c_max={}", num(r.c_max)),
        format!("unconditional_violation={}", r.unconditional_violation),
        format!("max_phi_tilde_f={}", num(r.max_phi_f)),
        format!("argmax_phi_tilde_c={}", num(r.argmax_phi_c)),
        format!("binding_phi_tilde_c={}", opt(Some(r.binding_phi_c))),
    ];
    if let Some(exact) = analytic_cmax(&cfg)? {
        lines.push(format!("analytic_c_max={}", num(exact)));
        lines.push(format!(
            "analytic_abs_diff={}",
            num((r.c_max - exact).abs())
        ));
    }
    for &c in &a.at {
        let v = r.violations_at(c);
        let desc: Vec<String> = v
            .iter()
            .map(|v| {
                let name = match v.condition {
                    Condition::SlopeCondition => "slope",
                    Condition::UnityCondition => "unity",
                };
                format!("{name}[{},{}]", num(v.lo), num(v.hi))
            })
            .collect();
        lines.push(format!(
            "violations_at c={c}: {}",
            if desc.is_empty() {
                "none".into()
            } else {
                desc.join(" ")
            }
        ));
    }
    let text: String = lines.iter().map(|l| format!("{l}\n")).collect();
    print!("{text}");
    if let Some(path) = &a.out {
        let mut m = RunManifest::new("cmax", &cfg);
        m.param("n", a.n).param("at", a.at.clone());
        output::write_all(path, &[(path.clone(), text)], &mut m)?;
    }
    Ok(())
}

struct Advect1dRun {
    csv: String,
    summary: Vec<String>,
}

fn advect1d_once(
    a: &Advect1dArgs,
    scheme: SchemeConfig,
    cfl: f64,
) -> cbc_core::Result<Advect1dRun> {
    let grid = Grid1D::symmetric_unit(a.n_cells)?;
    let cfg = SolverConfig::new_1d(scheme, cfl, a.velocity, a.t_end)?
        .with_integrator(a.integrator.into());
    let initial = init_square_wave(&grid);
    let mut tracker = ViolationTracker::new(0.0, 1.0, a.tol)?;
    let f = advance_1d(&initial, &cfg, |pre, post, c| tracker.observe(pre, post, c))?;
    let exact = exact_advection_1d(&grid, a.velocity, a.t_end);
    let report = bounds_report_with_history(&f, 0.0, 1.0, a.tol, Some(&tracker))?;
    let l1 = l1_error(&f, &exact)?;

    let mut summary = vec![format!("scheme={}", scheme.label()), format!("cfl={cfl}")];
    summary.extend(report_lines(&report, a.tol, |i| {
        format!("x={}", num(grid.center(i)))
    }));
    summary.push(format!("l1_error={}", num(l1)));
    summary.push(format!("mass_change={}", num(f.mass() - initial.mass())));

    let mut csv = String::from("x,phi,phi_exact\n");
    for i in 0..grid.n_cells {
        let _ = writeln!(
            csv,
            "{},{},{}",
            num(grid.center(i)),
            num(f.values[i]),
            num(exact.values[i])
        );
    }
    csv.push_str(&commented(&summary));
    Ok(Advect1dRun { csv, summary })
}

pub fn advect1d(a: &Advect1dArgs) -> Outcome {
    let scheme = a.scheme.config()?;
    if a.cfl.len() > 1 && a.out.is_none() {
        return Err(Failure::Invalid("a CFL sweep needs --out".into()));
    }
    let runs: Vec<cbc_core::Result<Advect1dRun>> = std::thread::scope(|s| {
        let handles: Vec<_> = a
            .cfl
            .iter()
            .map(|&c| s.spawn(move || advect1d_once(a, scheme, c)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("advection worker panicked"))
            .collect()
    });
    let runs = runs.into_iter().collect::<cbc_core::Result<Vec<_>>>()?;

    let Some(path) = &a.out else {
        print!("{}", runs[0].csv);
        return Ok(());
    };
    let mut files = Vec::new();
    for (run, &cfl) in runs.iter().zip(&a.cfl) {
        let csv_path = if a.cfl.len() == 1 {
            path.clone()
        } else {
            tagged(path, &format!("cfl{cfl}"))
        };
        let plot = output::advect_plot(&output::file_name(&csv_path), &scheme.label(), cfl);
        files.push((sibling(&csv_path, "gp"), plot));
        files.push((csv_path, run.csv.clone()));
        for l in &run.summary {
            println!("{l}");
        }
    }
    let mut m = RunManifest::new("advect1d", &scheme);
    m.param("cfl", a.cfl.clone())
        .param("n_cells", a.n_cells)
        .param("t_end", a.t_end)
        .param("velocity", a.velocity)
        .param("integrator", format!("{:?}", a.integrator))
        .param("tol", a.tol)
        .param("initial", "square wave on [-0.4, 0.4], domain [-1, 1]");
    output::write_all(path, &files, &mut m)?;
    Ok(())
}

pub fn zalesak(a: &ZalesakArgs) -> Outcome {
    let scheme = a.scheme.config()?;
    if !(a.revolutions > 0.0 && a.revolutions.is_finite()) {
        return Err(Error::Config(format!(
            "--revolutions {} must be finite and > 0",
            a.revolutions
        ))
        .into());
    }
    let grid = Grid2D::unit_square(a.nx)?;
    let rot = Rotation::unit_square();
    let cfg = SolverConfig::new_2d(scheme, a.cfl, rot, a.revolutions * rot.period())?
        .with_splitting(a.splitting.into())
        .with_integrator(a.integrator.into());
    let initial = match a.constant {
        Some(v) if v.is_finite() => Field2D::constant(grid, v),
        Some(v) => return Err(Error::Config(format!("--constant {v} is not finite")).into()),
        None => init_zalesak(&grid),
    };
    let lo = initial.values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = initial
        .values
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    let f = advance_2d(&initial, &cfg, |_, _| {})?;
    let report = bounds_report(&f, lo, hi, a.tol)?;

    let mut summary = vec![
        format!("scheme={}", scheme.label()),
        format!("cfl={}", a.cfl),
    ];
    summary.extend(report_lines(&report, a.tol, |k| {
        format!(
            "x={} y={}",
            num(grid.x_center(k % grid.nx)),
            num(grid.y_center(k / grid.nx))
        )
    }));
    summary.push(format!("mass_change={}", num(f.mass() - initial.mass())));

    let mut csv = String::from("x,y,phi\n");
    for j in 0..grid.ny {
        for i in 0..grid.nx {
            let _ = writeln!(
                csv,
                "{},{},{}",
                num(grid.x_center(i)),
                num(grid.y_center(j)),
                num(f.get(i, j))
            );
        }
    }
    csv.push_str(&commented(&summary));

    let Some(path) = &a.out else {
        print!("{csv}");
        return Ok(());
    };
    for l in &summary {
        println!("{l}");
    }
    let plot = output::zalesak_plot(&output::file_name(path), &scheme.label());
    let mut m = RunManifest::new("zalesak", &scheme);
    m.param("cfl", a.cfl)
        .param("nx", a.nx)
        .param("revolutions", a.revolutions)
        .param("splitting", format!("{:?}", a.splitting))
        .param("integrator", format!("{:?}", a.integrator))
        .param("constant", a.constant)
        .param("tol", a.tol);
    output::write_all(
        path,
        &[(path.clone(), csv), (sibling(path, "gp"), plot)],
        &mut m,
    )?;
    Ok(())
}

pub fn oracle(a: &OracleArgs) -> Outcome {
    let cfg = a.scheme.config()?;
    let curve = sample_nvd(&cfg, a.samples)?;
    let report = cbc_report(&curve);
    let mut csv = String::from(
        "cfl,phi_tilde_c,phi_tilde_f,slope_ok,unity_ok,bounded,max_overshoot,max_undershoot\n",
    );
    let (mut cases, mut unbounded, mut inconsistent, mut pointwise) = (0, 0, 0, 0);
    for &c in &a.cfl {
        let admissible = c <= report.c_max && !report.unconditional_violation;
        for s in &curve.samples {
            let o = one_step_oracle(&cfg, c, s.phi_c, a.pad, a.tol)?;
            let slope_ok = !(s.phi_f > 0.0 && c > s.phi_c / s.phi_f);
            let unity_ok = s.phi_f <= 1.0;
            cases += 1;
            if !o.bounded {
                unbounded += 1;
                inconsistent += admissible as usize;
                pointwise += (slope_ok && unity_ok) as usize;
            }
            let _ = writeln!(
                csv,
                "{c},{},{},{slope_ok},{unity_ok},{},{},{}",
                num(s.phi_c),
                num(s.phi_f),
                o.bounded,
                num(o.max_overshoot),
                num(o.max_undershoot)
            );
        }
    }
    let summary = vec![
        format!("scheme={}", cfg.label()),
        format!("c_max={}", num(report.c_max)),
        format!("unconditional_violation={}", report.unconditional_violation),
        format!("cases={cases}"),
        format!("unbounded={unbounded}"),
        format!("consistency_violations={inconsistent}"),
        format!("pointwise_consistency_violations={pointwise}"),
    ];
    csv.push_str(&commented(&summary));
    let Some(path) = &a.out else {
        print!("{csv}");
        return Ok(());
    };
    for l in &summary {
        println!("{l}");
    }
    let plot = output::oracle_plot(&output::file_name(path), &cfg.label());
    let mut m = RunManifest::new("oracle", &cfg);
    m.param("cfl", a.cfl.clone())
        .param("samples", a.samples)
        .param("pad", a.pad)
        .param("tol", a.tol);
    output::write_all(
        path,
        &[(path.clone(), csv), (sibling(path, "gp"), plot)],
        &mut m,
    )?;
    Ok(())
}
