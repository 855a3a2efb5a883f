use pluri_core::conformal;
use pluri_core::cross::{envelope_slice, Cross2, Fixed};
use pluri_core::extension::{self, CarlemanOptions, TestFunction};
use pluri_core::grid::{level_set, solve_extremal_with, SolveOptions};
use pluri_core::potential::DiscPotential;
use pluri_core::Point;

use crate::acceptance;
use crate::config::*;
use crate::formats::{num, sink, write_pgm, CsvWriter};
use crate::CliError;

fn test_function(name: &str) -> Result<TestFunction, CliError> {
    TestFunction::from_name(name).ok_or_else(|| {
        let known: Vec<&str> = TestFunction::ALL.iter().map(|f| f.name()).collect();
        CliError::Config(format!("function: unknown {name:?} (expected one of {})", known.join(", ")))
    })
}

pub fn omega_disc(a: &OmegaDiscArgs) -> Result<(), CliError> {
    if !(1..=4096).contains(&a.grid) {
        return Err(CliError::Config(format!("grid: {} is outside 1..=4096", a.grid)));
    }
    let pot = DiscPotential::new(&a.set.to_set()?);
    let g = a.grid as isize;
    let side = 2 * a.grid + 1;
    let mut csv = CsvWriter::new(sink(a.out.as_deref())?, "omega-disc", &["re", "im", "omega", "omega_conjugate"])?;
    let mut image = vec![f64::NAN; side * side];
    for j in -g..=g {
        for i in -g..=g {
            let z = Point::new(i as f64, j as f64) / a.grid as f64;
            if z.norm() >= 1.0 {
                continue;
            }
            let (w, c) = (pot.omega(z)?, pot.conjugate(z)?);
            image[(j + g) as usize * side + (i + g) as usize] = w;
            csv.row(&[num(z.re), num(z.im), num(w), num(c)])?;
        }
    }
    csv.finish()?;
    if let Some(p) = &a.pgm {
        write_pgm(p, side, side, &image)?;
    }
    Ok(())
}

pub fn omega_grid(a: &OmegaGridArgs) -> Result<(), CliError> {
    let opts = a.solve_options()?;
    let d = a.domain.grid(a.h)?;
    let field = solve_extremal_with(&d, &opts)?;
    let (nx, ny) = d.dims();
    let mut csv = CsvWriter::new(sink(a.out.as_deref())?, "omega-grid", &["i", "j", "re", "im", "omega"])?;
    for j in 0..ny {
        for i in 0..nx {
            let v = field.value(i, j);
            if !v.is_nan() {
                let p = d.point(i, j);
                csv.row(&[i.to_string(), j.to_string(), num(p.re), num(p.im), num(v)])?;
            }
        }
    }
    csv.finish()?;
    if let Some(p) = &a.pgm {
        write_pgm(p, nx, ny, field.values())?;
    }
    Ok(())
}

pub fn cross_envelope(a: &CrossEnvelopeArgs) -> Result<(), CliError> {
    let fixed = match (a.fix_z, a.fix_w) {
        (Some(z), None) => Fixed::Z(z.0),
        (None, Some(w)) => Fixed::W(w.0),
        _ => return Err(CliError::Config("fix_z/fix_w: give exactly one".into())),
    };
    if !(1..=4096).contains(&a.n) {
        return Err(CliError::Config(format!("n: {} is outside 1..=4096", a.n)));
    }
    let c = Cross2::discs(&a.a.to_set()?, &a.b.to_set()?);
    let s = envelope_slice(&c, fixed, a.n)?;
    let mut csv = CsvWriter::new(sink(a.out.as_deref())?, "cross-envelope", &["re", "im", "omega_total", "member"])?;
    for (&(p, t), &m) in s.rows.iter().zip(&s.mask) {
        if !t.is_nan() {
            csv.row(&[num(p.re), num(p.im), num(t), (m as u8).to_string()])?;
        }
    }
    csv.finish()?;
    if let Some(p) = &a.pgm {
        let values: Vec<f64> = s.rows.iter().map(|&(_, t)| t).collect();
        write_pgm(p, a.n, a.n, &values)?;
    }
    Ok(())
}

pub fn extend(a: &ExtendArgs) -> Result<(), CliError> {
    let f = test_function(&a.function)?;
    let opts = CarlemanOptions {
        schedule: a.schedule.clone(),
        tol: a.tol,
        min_nodes: a.min_nodes,
        max_nodes: a.max_nodes,
        ..CarlemanOptions::default()
    };
    let g = extension::build_g(&a.a.to_set()?, &a.b.to_set()?)?;
    let r = extension::carleman_limit(&f, &g, a.z.0, a.w.0, &opts)?;
    let exact = f.eval(a.z.0, a.w.0);
    let mut csv = CsvWriter::new(
        sink(a.out.as_deref())?,
        "extend",
        &[
            "z_re", "z_im", "w_re", "w_im", "value_re", "value_im", "exact_re", "exact_im", "abs_error", "n_used",
            "cauchy_gap", "omega_total", "nodes",
        ],
    )?;
    csv.row(&[
        num(a.z.0.re),
        num(a.z.0.im),
        num(a.w.0.re),
        num(a.w.0.im),
        num(r.value.re),
        num(r.value.im),
        num(exact.re),
        num(exact.im),
        num((r.value - exact).norm()),
        r.n_used.to_string(),
        num(r.cauchy_gap),
        num(r.omega_total),
        r.nodes.to_string(),
    ])?;
    csv.finish()?;
    Ok(())
}

pub fn hartogs(a: &HartogsArgs) -> Result<(), CliError> {
    let f = test_function(&a.function)?;
    if a.nodes < 16 {
        return Err(CliError::Config(format!("nodes: {} is below 16", a.nodes)));
    }
    let v = extension::hartogs_extend(|x, y| f.eval(x, y), a.r, a.z1.0, a.z2.0, a.nodes)?;
    let exact = f.eval(a.z1.0, a.z2.0);
    let mut csv = CsvWriter::new(
        sink(a.out.as_deref())?,
        "hartogs",
        &["z1_re", "z1_im", "z2_re", "z2_im", "value_re", "value_im", "exact_re", "exact_im", "abs_error"],
    )?;
    csv.row(&[
        num(a.z1.0.re),
        num(a.z1.0.im),
        num(a.z2.0.re),
        num(a.z2.0.im),
        num(v.re),
        num(v.im),
        num(exact.re),
        num(exact.im),
        num((v - exact).norm()),
    ])?;
    csv.finish()?;
    Ok(())
}

pub fn riemann_map(a: &RiemannMapArgs) -> Result<(), CliError> {
    let spec = &a.component;
    let d = spec.domain.grid(spec.h)?;
    let region = match spec.delta {
        None => d,
        Some(delta) => {
            if !(delta > 0.0 && delta < 1.0) {
                return Err(CliError::Config(format!("delta: {delta} is outside (0, 1)")));
            }
            let field = solve_extremal_with(&d, &SolveOptions::default())?;
            level_set(&field, delta)?
        }
    };
    let anchor = spec.point.map(|p| Point::new(p[0], p[1])).unwrap_or(a.center.0);
    let component = region.component_containing(anchor)?;
    let m = conformal::riemann_map(&component, a.center.0)?;
    let mut csv = CsvWriter::new(
        sink(a.out.as_deref())?,
        "riemann-map",
        &["k", "re", "im", "image_re", "image_im", "image_angle"],
    )?;
    for (k, (z, w)) in m.boundary().vertices.iter().zip(m.boundary_image()).enumerate() {
        csv.row(&[k.to_string(), num(z.re), num(z.im), num(w.re), num(w.im), num(w.arg())])?;
    }
    csv.finish()?;
    Ok(())
}

pub fn verify(a: &VerifyArgs) -> Result<(), CliError> {
    let ids = acceptance::parse_suite(&a.suite).map_err(CliError::Config)?;
    let results = acceptance::run_suite(&ids, |r| println!("{r}"));
    if let Some(p) = &a.report {
        let text = serde_json::to_string_pretty(&results).map_err(|e| CliError::Config(format!("report: {e}")))?;
        std::fs::write(p, text)?;
    }
    let failed = results.iter().filter(|r| !r.pass).count();
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    if failed > 0 {
        return Err(CliError::Failed(format!("{failed} criteria failed")));
    }
    Ok(())
}
