use std::collections::BTreeMap;
use std::error::Error as StdError;
use std::fs;
use std::path::Path;

use geamlab::coherence::{identity_suite, IdentityReport, SuiteConfig};
use geamlab::entangle::{
    build_reference, conjugate_geam, detect, sweep, Criterion, DetectionReport, Family, SweepRange, SweepSetup,
};
use geamlab::geam::{
    construct_geam, max_feasible_s, preset_basis, preset_geam, preset_spec, validate_geam, Geam, GeamRecord, Preset,
    ValidationReport,
};
use geamlab::linalg::sample::ginibre_state;
use geamlab::linalg::{ComplexMatrix, DensityMatrix};
use geamlab::mcf::MonotoneFunction;
use geamlab::rng::stream_rng;
use geamlab::skewinfo::SkewContext;
use geamlab::Exec;
use rand::Rng;
use serde::Serialize;

use crate::config::{split_list, DetectArgs, Format, GeamCheckArgs, SweepArgs, VerifyArgs};
use crate::output::{fmt_float, Sink};

pub type CmdResult<T> = Result<T, Box<dyn StdError + Send + Sync>>;

/// Whether every check of a command passed.
pub type Passed = bool;

struct Cell {
    d: usize,
    f: MonotoneFunction,
    geam: Geam,
    basis: geamlab::geam::HermitianBasis,
}

pub fn verify(args: &VerifyArgs, format: Format, sink: &mut Sink) -> CmdResult<Passed> {
    let functions: Vec<MonotoneFunction> = split_list(&args.f).iter().map(|s| s.parse()).collect::<Result<_, _>>()?;
    let presets: Vec<Preset> = split_list(&args.preset).iter().map(|s| s.parse()).collect::<Result<_, _>>()?;
    if args.d.is_empty() || functions.is_empty() || presets.is_empty() || args.states == 0 {
        return Err("verify needs at least one d, f, preset and state".into());
    }
    let mut geams = Vec::new();
    let mut validations = Vec::new();
    for &d in &args.d {
        for p in &presets {
            let spec = preset_spec(p, d)?;
            let basis = preset_basis(d, spec.m())?;
            let g = preset_geam(p, d)?;
            validations.push((d, p.to_string(), validate_geam(&g, args.tolerance)));
            geams.push((d, p.to_string(), g, basis));
        }
    }
    let cells: Vec<Cell> = geams
        .iter()
        .flat_map(|(d, _, g, basis)| {
            functions.iter().map(move |f| Cell {
                d: *d,
                f: f.clone(),
                geam: g.clone(),
                basis: basis.clone(),
            })
        })
        .collect();
    let states = args.states;
    let results = Exec::Parallel.map_range(cells.len() * states, |t| -> Result<Vec<IdentityReport>, geamlab::Error> {
        let cell = &cells[t / states];
        let seed = args.seed.wrapping_add((t % states) as u64);
        let mut rng = stream_rng(seed, 0);
        let rank = rng.random_range(1..=cell.d);
        let rho = ginibre_state(&mut rng, cell.d, rank)?;
        let ctx = SkewContext::new(rho, cell.f.clone());
        let cfg = SuiteConfig {
            tolerance: args.tolerance,
            mc_samples: args.samples,
            seed,
            exec: Exec::Sequential,
        };
        identity_suite(&ctx, &cell.geam, &cell.basis, &cfg)
    });
    let mut reports = Vec::new();
    for r in results {
        reports.extend(r?);
    }

    match format {
        Format::Json => {
            for r in &reports {
                sink.json_line(r)?;
            }
        }
        Format::Csv => {
            let mut w = sink.csv();
            w.write_record(["identity", "d", "f", "preset", "lhs", "rhs", "residual", "tolerance", "pass", "seed", "spec"])?;
            for r in &reports {
                w.write_record([
                    r.identity.clone(),
                    r.d.to_string(),
                    r.f.clone(),
                    r.spec.preset().unwrap_or("").to_string(),
                    fmt_float(r.lhs),
                    fmt_float(r.rhs),
                    fmt_float(r.residual),
                    fmt_float(r.tolerance),
                    r.pass.to_string(),
                    r.seed.to_string(),
                    serde_json::to_string(&r.spec)?,
                ])?;
            }
            w.flush()?;
        }
    }
    sink.finish()?;

    let mut table: BTreeMap<&str, (usize, usize, f64)> = BTreeMap::new();
    for r in &reports {
        let e = table.entry(r.identity.as_str()).or_insert((0, 0, 0.0));
        e.0 += 1;
        e.1 += usize::from(r.pass);
        e.2 = e.2.max(r.residual);
    }
    eprintln!("{:<40} {:>7} {:>7} {:>12}", "identity", "checks", "passed", "max resid");
    for (name, (n, ok, worst)) in &table {
        eprintln!("{name:<40} {n:>7} {ok:>7} {worst:>12.3e}");
    }
    let mut passed = reports.iter().all(|r| r.pass);
    for (d, p, v) in &validations {
        let status = if v.pass() { "ok" } else { "FAILED" };
        eprintln!("geam d={d} {p}: {status} (min eigenvalue {:.3e})", v.min_eigenvalue);
        passed &= v.pass();
    }
    eprintln!("{} reports, {}", reports.len(), if passed { "all passed" } else { "FAILURES" });
    Ok(passed)
}

fn family_param(args: &DetectArgs, family: Family) -> CmdResult<f64> {
    let given: Vec<(&str, f64)> = [("q", args.q), ("x", args.x), ("p", args.p)]
        .into_iter()
        .filter_map(|(n, v)| v.map(|v| (n, v)))
        .collect();
    let want = match family {
        Family::Isotropic => "q",
        Family::Werner => "x",
        Family::WernerQubit => "p",
    };
    match given.as_slice() {
        [(name, v)] if *name == want => Ok(*v),
        _ => Err(format!("{family} needs exactly --{want}").into()),
    }
}

fn read_state(path: &Path) -> CmdResult<DensityMatrix> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let m: ComplexMatrix = serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    if !m.is_square() {
        return Err(format!("{}: state is {}x{}, not square", path.display(), m.rows(), m.cols()).into());
    }
    Ok(DensityMatrix::new(m).map_err(|e| format!("{}: {e}", path.display()))?)
}

/// The second party's GEAM: the conjugate for F, the same one for G.
fn pair(g: &Geam, criterion: Criterion) -> Geam {
    match criterion {
        Criterion::F | Criterion::FScaled => conjugate_geam(g),
        Criterion::G | Criterion::GScaled => g.clone(),
    }
}

pub fn detect_cmd(args: &DetectArgs, format: Format, sink: &mut Sink) -> CmdResult<Passed> {
    let criterion: Criterion = args.criterion.parse()?;
    let preset: Preset = args.preset.parse()?;
    let f: MonotoneFunction = args.f.parse()?;
    let (rho, d, family, param) = match (&args.family, &args.state) {
        (Some(name), None) => {
            let family: Family = name.parse()?;
            let d = args.d.ok_or("--d is required with --family")?;
            let param = family_param(args, family)?;
            (build_reference(family, d, param)?.state, d, family.to_string(), Some(param))
        }
        (None, Some(path)) => {
            let rho = read_state(path)?;
            let d = (rho.dim() as f64).sqrt().round() as usize;
            if d * d != rho.dim() || args.d.is_some_and(|given| given != d) {
                return Err(format!("state of dimension {} is not d x d for d = {:?}", rho.dim(), args.d.unwrap_or(d)).into());
            }
            (rho, d, format!("file:{}", path.display()), None)
        }
        _ => return Err("give either --family with its parameter or --state".into()),
    };
    let ga = preset_geam(&preset, d)?;
    let gb = pair(&ga, criterion);
    let uses_f = matches!(criterion, Criterion::F | Criterion::FScaled);
    let f = uses_f.then_some(&f);
    let report = detect(criterion, &rho, &ga, &gb, f)?.report(&family, param, ga.spec(), f);
    write_detection(&report, format, sink)?;
    sink.finish()?;
    eprintln!(
        "{} = {:.6e}, threshold {:.6e}: {}",
        report.criterion, report.value, report.threshold, report.verdict
    );
    Ok(true)
}

fn write_detection(r: &DetectionReport, format: Format, sink: &mut Sink) -> CmdResult<()> {
    match format {
        Format::Json => sink.json_line(r)?,
        Format::Csv => {
            let mut w = sink.csv();
            w.write_record(["criterion", "value", "threshold", "verdict", "family", "param", "d", "f", "spec"])?;
            w.write_record([
                r.criterion.to_string(),
                fmt_float(r.value),
                fmt_float(r.threshold),
                r.verdict.to_string(),
                r.family.clone(),
                r.param.map(fmt_float).unwrap_or_default(),
                r.d.to_string(),
                r.f.clone().unwrap_or_default(),
                serde_json::to_string(&r.spec)?,
            ])?;
            w.flush()?;
        }
    }
    Ok(())
}

pub fn sweep_cmd(args: &SweepArgs, format: Format, sink: &mut Sink) -> CmdResult<Passed> {
    let family: Family = args.family.parse()?;
    let criterion: Criterion = match &args.criterion {
        Some(c) => c.parse()?,
        None if family == Family::Isotropic => Criterion::F,
        None => Criterion::G,
    };
    let preset: Preset = args.preset.parse()?;
    let f: MonotoneFunction = args.f.parse()?;
    let (lo, hi) = family.range();
    let range = SweepRange::new(args.from.unwrap_or(lo), args.to.unwrap_or(hi), args.step)?;
    let ga = preset_geam(&preset, args.d)?;
    let gb = pair(&ga, criterion);
    let setup = SweepSetup {
        family,
        d: args.d,
        criterion,
        ga: &ga,
        gb: &gb,
        f: matches!(criterion, Criterion::F | Criterion::FScaled).then_some(&f),
    };
    let result = sweep(&setup, &range, Exec::Parallel)?;
    match format {
        Format::Csv => {
            let mut w = sink.csv();
            w.write_record(["param", "value", "threshold", "verdict"])?;
            for r in &result.rows {
                w.write_record([fmt_float(r.param), fmt_float(r.value), fmt_float(r.threshold), r.verdict.to_string()])?;
            }
            w.flush()?;
        }
        Format::Json => {
            for r in &result.rows {
                sink.json_line(r)?;
            }
        }
    }
    sink.finish()?;
    match result.critical {
        Some(c) => eprintln!("critical {family} parameter: {c:.4} (first verdict change, step {})", args.step),
        None => eprintln!("no verdict change on [{}, {}]", range.start, range.end),
    }
    Ok(true)
}

#[derive(Serialize)]
struct GeamCheck {
    #[serde(flatten)]
    record: GeamRecord,
    cap: f64,
    max_feasible_s: f64,
    validation: ValidationReport,
}

pub fn geam_check(args: &GeamCheckArgs, sink: &mut Sink) -> CmdResult<Passed> {
    let (g, basis) = match (&args.preset, &args.spec) {
        (Some(p), None) => {
            let p: Preset = p.parse()?;
            let d = args.d.ok_or("--d is required with --preset")?;
            let g = preset_geam(&p, d)?;
            let basis = preset_basis(d, g.spec().m())?;
            (g, basis)
        }
        (None, Some(path)) => {
            let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
            let record: GeamRecord = serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
            let basis = preset_basis(record.spec.dim(), record.spec.m())?;
            (construct_geam(&record.spec, &basis, &record.signs)?, basis)
        }
        _ => return Err("give either --preset with --d or --spec".into()),
    };
    let validation = validate_geam(&g, args.tolerance);
    let out = GeamCheck {
        record: g.record(),
        cap: g.spec().cap(),
        max_feasible_s: max_feasible_s(g.spec().shape(), &basis, g.signs())?,
        validation,
    };
    sink.json_pretty(&out)?;
    sink.finish()?;
    for c in &out.validation.checks {
        eprintln!("{:<28} {:>12.3e} {}", c.name, c.deviation, if c.pass { "ok" } else { "FAILED" });
    }
    eprintln!("largest positive S: {:.12} (cap {:.12})", out.max_feasible_s, out.cap);
    Ok(out.validation.pass())
}
