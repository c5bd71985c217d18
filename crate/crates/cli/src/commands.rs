use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::{Duration, Instant};

use anyhow::{bail, Context, Result};
use chemosched::analysis::{self, SweepParameter, VssRow};
use chemosched::io::{self, Manifest};
use chemosched::milp::{FormulationOptions, HighsBackend, SolveLimits};
use chemosched::sampler::{self, PrimaryNurseRule};
use chemosched::{
    solve_with_method, BaseParameters, Evaluator, FirstStageSolution, Method, SamplerSpec, SolveReport,
    SolverConfig, TypeSource,
};
use serde_json::json;

use crate::args::{BaseArgs, EvaluateArgs, MethodArg, SampleArgs, SolveArgs, SolverArgs, SweepArgs, VssArgs};
use crate::exit::ConfigError;

fn base_parameters(b: &BaseArgs) -> BaseParameters {
    BaseParameters {
        nurse_count: b.nurses,
        chair_count: b.chairs,
        premed_duration: b.premed,
        shift_length: b.shift,
        overtime_limit: b.overtime_limit,
        lambda: b.lambda,
        flexibility_limit: b.flex,
        primary_rule: PrimaryNurseRule::Modulo,
    }
}

fn method(arg: MethodArg, s: &SolverArgs) -> Method {
    match arg {
        MethodArg::Exact => Method::Exact,
        MethodArg::PSgbd => Method::ProgressiveSgbd {
            merge_factor: s.alpha,
            iterations: s.iterations,
        },
        MethodArg::FSgbd => Method::FurthestSgbd {
            group_size: s.group_size,
        },
        MethodArg::CSgbd => Method::ClosestSgbd {
            group_size: s.group_size,
        },
        MethodArg::RSgbd => Method::RandomSgbd {
            group_size: s.group_size,
        },
        MethodArg::Baseline => Method::Baseline,
        MethodArg::Mvp => Method::MeanValue,
    }
}

fn solver_config(s: &SolverArgs) -> Result<SolverConfig> {
    if !(s.gap >= 0.0) {
        return Err(ConfigError(format!("--gap must be non-negative, got {}", s.gap)).into());
    }
    let time_limit = match s.time_limit {
        Some(t) if t > 0.0 && t.is_finite() => Some(Duration::from_secs_f64(t)),
        Some(t) => return Err(ConfigError(format!("--time-limit must be positive, got {t}")).into()),
        None => None,
    };
    Ok(SolverConfig {
        backend: Arc::new(HighsBackend::new()),
        limits: SolveLimits {
            time_limit,
            relative_gap: s.gap,
            seed: s.solver_seed,
            ..SolveLimits::default()
        },
        formulation: FormulationOptions {
            integer_appointments: s.integer_appointments,
            chair_symmetry_breaking: !s.no_symmetry_breaking,
            ..FormulationOptions::default()
        },
        parallel: !s.sequential,
    })
}

fn display(p: &Path) -> String {
    p.display().to_string()
}

fn write_timing(out: &Path, started: Instant) -> Result<()> {
    io::write_json(out.join("timing.json"), &json!({ "wall_time_s": started.elapsed().as_secs_f64() }))?;
    Ok(())
}

pub fn sample(args: &SampleArgs) -> Result<()> {
    let base = base_parameters(&args.base);
    let jobs: Vec<(TypeSource, u64)> = if args.paper_set {
        (1..=10)
            .map(|k| Ok((TypeSource::Explicit(sampler::paper_instance_types(k)?), args.seed + k as u64 - 1)))
            .collect::<Result<_>>()?
    } else {
        let types = match (&args.types, args.patients) {
            (Some(t), _) => TypeSource::Explicit(t.clone()),
            (None, Some(p)) => TypeSource::Drawn(p),
            (None, None) => return Err(ConfigError("give --paper-set, --patients or --types".into()).into()),
        };
        if args.count == 0 {
            return Err(ConfigError("--count must be at least 1".into()).into());
        }
        (0..args.count).map(|k| (types.clone(), args.seed + k as u64)).collect()
    };

    let mut manifest = Manifest::new("sample", serde_json::to_value(args)?, jobs.iter().map(|j| j.1).collect());
    for (k, (types, seed)) in jobs.into_iter().enumerate() {
        let spec = SamplerSpec::new(types, args.scenarios, seed);
        let inst = sampler::sample_instance(&spec, &base).map_err(|e| ConfigError(e.to_string()))?;
        let name = format!("instance_{:02}.json", k + 1);
        io::write_json(args.out.join(&name), &inst)?;
        manifest.outputs.push(name);
    }
    io::write_json(args.out.join("manifest.json"), &manifest)?;
    log::info!("wrote {} instance(s) to {}", manifest.outputs.len(), args.out.display());
    Ok(())
}

fn exact_reference(arg: &str) -> Result<f64> {
    if let Ok(z) = arg.parse::<f64>() {
        return Ok(z);
    }
    let report: SolveReport = io::read_json(arg).with_context(|| format!("reading exact reference {arg}"))?;
    Ok(report.objective)
}

pub fn solve(args: &SolveArgs) -> Result<()> {
    let started = Instant::now();
    let inst = io::read_instance(&args.instance)?;
    let cfg = solver_config(&args.solver)?;
    let m = method(args.method, &args.solver);
    let reference = args.exact_reference.as_deref().map(exact_reference).transpose()?;

    let out = solve_with_method(&inst, m, &cfg, args.solver.seed)?;
    let mut report = out.report;
    if let Some(z) = reference {
        report = report.with_reference(z);
    }

    let mut manifest = Manifest::new("solve", serde_json::to_value(args)?, vec![args.solver.seed, args.solver.solver_seed]);
    manifest.inputs.push(display(&args.instance));
    io::write_json(args.out.join("solution.json"), &out.solution)?;
    io::write_json(args.out.join("report.json"), &report)?;
    manifest.outputs.extend(["solution.json".into(), "report.json".into()]);
    if let Some(plan) = &out.plan {
        io::write_json(args.out.join("plan.json"), plan)?;
        manifest.outputs.push("plan.json".into());
    }
    io::write_json(args.out.join("manifest.json"), &manifest)?;
    write_timing(&args.out, started)?;
    println!(
        "{} {:?}: objective {:.4} (wait {:.4}, overtime {:.4}){}",
        report.method,
        report.status,
        report.objective,
        report.expected_wait,
        report.expected_overtime,
        report.gap_percent.map(|g| format!(", gap {g:.3}%")).unwrap_or_default()
    );
    Ok(())
}

pub fn evaluate(args: &EvaluateArgs) -> Result<()> {
    let inst = io::read_instance(&args.instance)?;
    let sol: FirstStageSolution = io::read_json(&args.solution)?;
    let violations = chemosched::validate_first_stage(&inst, &sol);
    if !violations.is_empty() {
        let text: Vec<String> = violations.iter().map(ToString::to_string).collect();
        return Err(ConfigError(format!("invalid schedule: {}", text.join("; "))).into());
    }
    let report = Evaluator::new(&inst, &sol)?.expected()?;
    let mut manifest = Manifest::new("evaluate", serde_json::to_value(args)?, Vec::new());
    manifest.inputs = vec![display(&args.instance), display(&args.solution)];
    manifest.outputs.push("report.json".into());
    io::write_json(args.out.join("report.json"), &report)?;
    io::write_json(args.out.join("manifest.json"), &manifest)?;
    println!("objective {:.4} (wait {:.4}, overtime {:.4})", report.objective, report.expected_wait, report.expected_overtime);
    Ok(())
}

fn instance_name(p: &Path) -> String {
    p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| display(p))
}

pub fn vss(args: &VssArgs) -> Result<()> {
    let started = Instant::now();
    let cfg = solver_config(&args.solver)?;
    let m = method(args.method, &args.solver);
    let mut rows: Vec<(String, VssRow)> = Vec::new();
    for path in &args.instance {
        let inst = io::read_instance(path)?;
        let row = analysis::compute_vss(&inst, m, &cfg, args.solver.seed)
            .with_context(|| format!("instance {}", path.display()))?;
        println!("{}: z_T {:.4}, z_MVP {:.4}, VSS {:.3}%", instance_name(path), row.z_t, row.z_mvp, row.vss_percent);
        rows.push((instance_name(path), row));
    }
    io::write_text(args.out.join("vss.csv"), &analysis::vss_csv(&rows))?;
    let mut manifest = Manifest::new("vss", serde_json::to_value(args)?, vec![args.solver.seed, args.solver.solver_seed]);
    manifest.inputs = args.instance.iter().map(|p| display(p)).collect();
    manifest.outputs.push("vss.csv".into());
    io::write_json(args.out.join("manifest.json"), &manifest)?;
    write_timing(&args.out, started)
}

pub fn sweep(args: &SweepArgs) -> Result<()> {
    let started = Instant::now();
    let Some(parameter) = SweepParameter::parse(&args.param) else {
        bail!(ConfigError(format!("unknown sweep parameter {:?} (J, lambda, nurses, chairs)", args.param)));
    };
    let cfg = solver_config(&args.solver)?;
    let m = method(args.method, &args.solver);
    let instances = if args.instance.is_empty() {
        let spec = analysis::SweepSpec {
            parameter,
            values: args.values.clone(),
            method: m,
            method_seed: args.solver.seed,
            sampler: SamplerSpec::new(TypeSource::Drawn(args.patients), args.scenarios, 0),
            base: base_parameters(&args.base),
            instance_seeds: args.instance_seeds.clone(),
        };
        spec.validate().map_err(|e| ConfigError(e.to_string()))?;
        spec.instances().map_err(|e| ConfigError(e.to_string()))?
    } else {
        args.instance.iter().map(io::read_instance).collect::<Result<Vec<_>, _>>()?
    };
    let table = analysis::sweep_instances(parameter, &args.values, m, args.solver.seed, &instances, &cfg)
        .map_err(|e| ConfigError(e.to_string()))?;
    print!("{}", table.to_csv());
    io::write_text(args.out.join("sweep.csv"), &table.to_csv())?;
    io::write_json(args.out.join("sweep.json"), &table)?;
    let seeds = if args.instance.is_empty() {
        args.instance_seeds.clone()
    } else {
        Vec::new()
    };
    let mut manifest = Manifest::new("sweep", serde_json::to_value(args)?, seeds);
    manifest.inputs = args.instance.iter().map(|p: &PathBuf| display(p)).collect();
    manifest.outputs = vec!["sweep.csv".into(), "sweep.json".into()];
    io::write_json(args.out.join("manifest.json"), &manifest)?;
    write_timing(&args.out, started)
}
