use std::io::Write;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use serde_json::{json, Value};

use regrad_core::bell::{
    chsh_scan_csv, chsh_value, lhv_chsh_bound, underdetermination_demo, BellError, ChshScenario,
    Settings,
};
use regrad_core::format::csv_num;
use regrad_core::genarith::{self, closure_probe, induced_add, induced_mul, PartialResult};
use regrad_core::quantum::{povm_distribution, validate_povm, DensityOperator, Povm};
use regrad_core::regraduation::{
    check_admissibility, plot_g_csv, CatalogEntry, RegraduationMap, TabulatedMap,
};

use crate::config::{OutputFormat, RunConfig};
use crate::{exit, ArithOp, Command};

pub const CLOSURE_WARNING: &str = "loss of closure";

pub fn run(command: Command, cfg: &RunConfig) -> Result<u8> {
    match command {
        Command::Arith {
            f,
            op,
            a,
            b,
            extend,
        } => arith(&f, op, a, b, extend, cfg),
        Command::CheckG { target } => check_g(&target, cfg),
        Command::PlotG => {
            emit(cfg, &plot_g_csv())?;
            Ok(exit::OK)
        }
        Command::Chsh { angles, scan } => chsh(angles, scan, cfg),
        Command::Underdetermine { g, p } => underdetermine(&g, p, cfg),
        Command::ClosureProbe { f, n } => probe(&f, n, cfg),
        Command::PovmCheck { file, state } => povm_check(&file, state, cfg),
    }
}

/// Writes the primary output to `--output` or stdout.
fn emit(cfg: &RunConfig, text: &str) -> Result<()> {
    match &cfg.output_path {
        Some(path) => {
            std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

fn emit_json(cfg: &RunConfig, value: &Value) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    emit(cfg, &text)
}

fn bijection(name: &str) -> Result<genarith::BijectionSpec> {
    genarith::builtin(name).ok_or_else(|| {
        anyhow!(
            "unknown bijection '{name}' (expected one of: {})",
            genarith::BUILTIN_NAMES.join(", ")
        )
    })
}

fn arith(f: &str, op: ArithOp, a: f64, b: f64, extend: bool, cfg: &RunConfig) -> Result<u8> {
    let spec = bijection(f)?;
    let result = match op {
        ArithOp::Add => induced_add(&spec, a, b, extend),
        ArithOp::Mul => induced_mul(&spec, a, b, extend),
    }?;
    let op_name = match op {
        ArithOp::Add => "add",
        ArithOp::Mul => "mul",
    };
    let warning =
        matches!(result, PartialResult::ExtendedInverse { .. }).then_some(CLOSURE_WARNING);
    match cfg.output_format {
        OutputFormat::Json => {
            let mut v = json!({ "f": f, "op": op_name, "a": a, "b": b });
            let obj = v.as_object_mut().expect("object literal");
            if let Value::Object(fields) = serde_json::to_value(result)? {
                obj.extend(fields);
            }
            if let Some(w) = warning {
                obj.insert("warning".into(), json!(w));
            }
            emit_json(cfg, &v)?;
        }
        OutputFormat::Csv => {
            let kind = match result {
                PartialResult::Defined { .. } => "Defined",
                PartialResult::OutOfImage { .. } => "OutOfImage",
                PartialResult::ExtendedInverse { .. } => "ExtendedInverse",
            };
            let opt = |v: Option<f64>| v.map(csv_num).unwrap_or_default();
            emit(
                cfg,
                &format!(
                    "kind,value,raw_sum,warning\n{kind},{},{},{}\n",
                    opt(result.value()),
                    opt(result.raw_sum()),
                    warning.unwrap_or("")
                ),
            )?;
        }
    }
    if let Some(w) = warning {
        eprintln!(
            "regrad: warning: {w} (raw result {} is outside the image of {f})",
            result.raw_sum().unwrap_or(f64::NAN)
        );
    }
    Ok(match result {
        PartialResult::OutOfImage { .. } => exit::CLOSURE,
        _ => exit::OK,
    })
}

/// A built-in map by name, or a tabulated `p,g` CSV file.
fn load_map(target: &str) -> Result<RegraduationMap> {
    if let Some(g) = RegraduationMap::builtin(target) {
        return Ok(g);
    }
    let path = Path::new(target);
    if !path.exists() {
        bail!("'{target}' is neither a built-in map (czachor, poly, alt, identity) nor a readable file");
    }
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {target}"))?;
    let table = TabulatedMap::parse_csv(&text).with_context(|| format!("parsing {target}"))?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| target.to_string());
    Ok(table.into_map(name)?)
}

fn check_g(target: &str, cfg: &RunConfig) -> Result<u8> {
    let g = load_map(target)?;
    let certificate = check_admissibility(&g, cfg.grid_size, cfg.tol)?;
    let passing = certificate.passing();
    let entry = CatalogEntry {
        name: g.name().to_string(),
        formula: g.formula().to_string(),
        passing,
        certificate,
    };
    match cfg.output_format {
        OutputFormat::Json => emit_json(cfg, &serde_json::to_value(&entry)?)?,
        OutputFormat::Csv => {
            let c = &entry.certificate;
            emit(
                cfg,
                &format!(
                    "name,passing,boundary_ok,monotone_ok,complement_ok,worst_complement_defect,worst_complement_at,worst_monotonicity_gap,continuity_heuristic_ok\n{},{},{},{},{},{},{},{},{}\n",
                    entry.name,
                    passing,
                    c.boundary_ok,
                    c.monotone_ok,
                    c.complement_ok,
                    csv_num(c.worst_complement_defect),
                    csv_num(c.worst_complement_at),
                    csv_num(c.worst_monotonicity_gap),
                    c.continuity_heuristic_ok
                ),
            )?;
        }
    }
    Ok(if passing {
        exit::OK
    } else {
        exit::ADMISSIBILITY
    })
}

fn chsh(angles: Option<Vec<f64>>, scan: Option<usize>, cfg: &RunConfig) -> Result<u8> {
    let settings = match angles.as_deref() {
        None => Settings::optimal(),
        Some(&[a, a_prime, b, b_prime]) => {
            if [a, a_prime, b, b_prime].iter().any(|x| !x.is_finite()) {
                bail!("angles must be finite");
            }
            Settings {
                a,
                a_prime,
                b,
                b_prime,
            }
        }
        Some(other) => bail!("--angles takes exactly 4 values, got {}", other.len()),
    };
    let scenario = ChshScenario::singlet(settings);
    let s_quantum = chsh_value(&scenario);
    let lhv = lhv_chsh_bound();
    let tsirelson = 2.0 * std::f64::consts::SQRT_2;

    if let Some(n) = scan {
        if n == 0 {
            bail!("--scan needs at least one point");
        }
        emit(cfg, &chsh_scan_csv(n))?;
        eprintln!(
            "S_quantum,S_classical_bound\n{},{}",
            csv_num(s_quantum),
            lhv.bound
        );
        return Ok(exit::OK);
    }

    match cfg.output_format {
        OutputFormat::Json => emit_json(
            cfg,
            &json!({
                "settings": settings,
                "correlators": scenario.correlators,
                "S_quantum": s_quantum,
                "S_classical_bound": lhv.bound,
                "classical_maximizers": lhv.maximizers,
                "classical_witness": lhv.witness,
                "tsirelson_bound": tsirelson,
                "exceeds_classical_bound": s_quantum.abs() > f64::from(lhv.bound),
                "tsirelson_gap": tsirelson - s_quantum.abs(),
            }),
        )?,
        OutputFormat::Csv => emit(
            cfg,
            &format!(
                "S_quantum,S_classical_bound\n{},{}\n",
                csv_num(s_quantum),
                lhv.bound
            ),
        )?,
    }
    Ok(exit::OK)
}

fn underdetermine(target: &str, p: f64, cfg: &RunConfig) -> Result<u8> {
    let g = load_map(target)?.certify(cfg.grid_size, cfg.tol)?;
    match underdetermination_demo(&g, p) {
        Ok(report) => {
            emit_json(cfg, &serde_json::to_value(&report)?)?;
            Ok(exit::OK)
        }
        Err(BellError::Inadmissible { name, report }) => {
            eprintln!(
                "regrad: {name} is not admissible (boundary_ok={}, monotone_ok={}, complement_ok={}, worst complement defect {} at p={})",
                report.boundary_ok,
                report.monotone_ok,
                report.complement_ok,
                report.worst_complement_defect,
                report.worst_complement_at
            );
            Ok(exit::ADMISSIBILITY)
        }
        Err(e) => Err(e.into()),
    }
}

fn probe(f: &str, n: u64, cfg: &RunConfig) -> Result<u8> {
    let spec = bijection(f)?;
    let report = closure_probe(&spec, n, cfg.seed)?;
    match cfg.output_format {
        OutputFormat::Json => emit_json(cfg, &serde_json::to_value(&report)?)?,
        OutputFormat::Csv => {
            let (ea, eb) = report
                .example_violation
                .map(|[a, b]| (csv_num(a), csv_num(b)))
                .unwrap_or_default();
            emit(
                cfg,
                &format!(
                    "samples_tested,violations,violation_fraction,example_a,example_b\n{},{},{},{ea},{eb}\n",
                    report.samples_tested,
                    report.violations,
                    csv_num(report.violation_fraction)
                ),
            )?;
        }
    }
    Ok(if report.is_closed() {
        exit::OK
    } else {
        exit::CLOSURE
    })
}

fn povm_check(file: &Path, state: Option<Vec<f64>>, cfg: &RunConfig) -> Result<u8> {
    let text =
        std::fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?;
    let povm: Povm =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", file.display()))?;
    let validation = validate_povm(&povm);
    let diagnostics: Vec<String> = validation
        .diagnostics
        .iter()
        .map(ToString::to_string)
        .collect();
    let mut out = json!({
        "effects": povm.len(),
        "valid": validation.valid(),
        "diagnostics": diagnostics,
    });
    if let Some(bloch) = state {
        let bloch: [f64; 3] = bloch
            .try_into()
            .map_err(|_| anyhow!("--state takes exactly 3 values"))?;
        let rho = DensityOperator::new(bloch)?;
        if validation.valid() {
            let probs = povm_distribution(&rho, &povm)?;
            let total: f64 = probs.iter().sum();
            out["state"] = serde_json::to_value(rho)?;
            out["probabilities"] = json!(probs);
            out["total"] = json!(total);
        }
    }
    emit_json(cfg, &out)?;
    Ok(if validation.valid() {
        exit::OK
    } else {
        exit::ADMISSIBILITY
    })
}
