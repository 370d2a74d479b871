use std::fs;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use nspgap_core::bounds::{
    cai_zhang_constants, gap_threshold, nsp_l1_bound, rip_l2_bound, ripnsp_l2_bound, BoundReport, CAI_ZHANG_L2, NSP_L1, RIPNSP_L2,
};
use nspgap_core::certify::{nsp_constant, opnorm_bound_check, rip_constant, NspOptions, RipOptions, Subsample};
use nspgap_core::gap::{
    adversarial_instance, build_gap_matrix, build_inner_matrix, contradiction_check, ripnsp_disprove, verify_step2_nsp, GapConstruction,
    InnerMatrix,
};
use nspgap_core::io::{matrix_hash, read_matrix_csv, read_vector_csv, write_vector_csv};
use nspgap_core::linalg::{norm2, DenseMatrix};
use nspgap_core::matrixlab::{kernel_basis, DEFAULT_RANK_TOL};
use nspgap_core::report::{nsp_certificate_json, number, report_schema_version, rip_certificate_json};
use nspgap_core::solver::{basis_pursuit, recovery_experiment, BoundContext, BpOptions};

use crate::error::CliError;
use crate::{
    BoundsArgs, CertifyNspArgs, CertifyRipArgs, Command, Common, ExperimentArgs, GapBuildArgs, GapDemoArgs, GapParams, GapThresholdArgs,
    SolveArgs, Tolerances,
};

pub fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::CertifyNsp(a) => certify_nsp(a),
        Command::CertifyRip(a) => certify_rip(a),
        Command::Solve(a) => solve(a),
        Command::Bounds(a) => bounds(a),
        Command::GapBuild(a) => gap_build(a),
        Command::GapDemo(a) => gap_demo(a),
        Command::GapThreshold(a) => gap_threshold_cmd(a),
        Command::Experiment(a) => experiment(a),
    }
}

/// Prints the summary and writes `payload` with the schema version and command name added.
fn emit(common: &Common, command: &str, summary: &str, payload: Value) -> Result<(), CliError> {
    let mut report = match payload {
        Value::Object(map) => map,
        other => {
            let mut map = Map::new();
            map.insert("result".into(), other);
            map
        }
    };
    report.insert("schema_version".into(), Value::from(report_schema_version()));
    report.insert("command".into(), Value::from(command));
    let text = serde_json::to_string_pretty(&Value::Object(report)).expect("JSON values always serialize") + "\n";
    println!("{summary}");
    match &common.out {
        Some(path) => fs::write(path, text).map_err(|e| CliError::Validation(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn positive_finite(name: &str, x: f64) -> Result<f64, CliError> {
    if x.is_finite() && x > 0.0 {
        Ok(x)
    } else {
        Err(CliError::Validation(format!("--{name} = {x} must be a positive finite number")))
    }
}

fn nsp_options(tol: &Tolerances) -> Result<NspOptions<f64>, CliError> {
    let mut opts = NspOptions::default();
    if let Some(t) = tol.lp_tol {
        opts.lp_tol = positive_finite("lp-tol", t)?;
    }
    if let Some(t) = tol.rank_tol {
        opts.rank_tol = positive_finite("rank-tol", t)?;
    }
    if let Some(c) = tol.cap {
        opts.enumeration_cap = c;
    }
    Ok(opts)
}

fn rank_tol(tol: &Tolerances) -> Result<f64, CliError> {
    tol.rank_tol.map_or(Ok(DEFAULT_RANK_TOL), |t| positive_finite("rank-tol", t))
}

fn certify_nsp(a: CertifyNspArgs) -> Result<(), CliError> {
    let opts = nsp_options(&a.tol)?;
    let phi: DenseMatrix<f64> = read_matrix_csv(&a.matrix)?;
    let kernel = kernel_basis(&phi, opts.rank_tol)?;
    let cert = nsp_constant(&kernel, a.s, &opts)?;
    let mut payload = json!({
        "matrix_hash": matrix_hash(&phi),
        "N": phi.cols(),
        "M": phi.rows(),
        "kernel_dim": kernel.dim(),
        "certificate": nsp_certificate_json(&cert),
    });
    let mut summary = format!("nsp constant of order {} is {} (worst support {:?})", a.s, cert.gamma, cert.worst_support);
    if let Some(target) = a.gamma {
        if !(target > 0.0 && target < 1.0) {
            return Err(CliError::Validation(format!("--gamma = {target} must lie in (0, 1)")));
        }
        let holds = cert.satisfies(target);
        payload["target"] = number(target);
        payload["holds"] = Value::from(holds);
        summary += if holds { "; target met" } else { "; target not met" };
    }
    emit(&a.common, "certify-nsp", &summary, payload)
}

fn certify_rip(a: CertifyRipArgs) -> Result<(), CliError> {
    let phi: DenseMatrix<f64> = read_matrix_csv(&a.matrix)?;
    let mut opts = RipOptions::default();
    if let Some(c) = a.cap {
        opts.enumeration_cap = c;
    }
    if let Some(supports) = a.subsample {
        opts.subsample = Some(Subsample { supports, seed: a.seed.unwrap_or(0) });
    }
    let cert = rip_constant(&phi, a.k, &opts)?;
    let check = opnorm_bound_check(&phi, a.k, cert.delta);
    let payload = json!({
        "matrix_hash": matrix_hash(&phi),
        "N": phi.cols(),
        "M": phi.rows(),
        "certificate": rip_certificate_json(&cert),
        "operator_norm_check": { "holds": check.holds, "op_norm": number(check.op_norm), "bound": number(check.bound) },
    });
    let qualifier = if cert.lower_bound_only { " (lower bound from subsampling)" } else { "" };
    let summary = format!("rip constant of order {} is {}{qualifier}, {} side", a.k, cert.delta, cert.side.as_str());
    emit(&a.common, "certify-rip", &summary, payload)
}

fn solve(a: SolveArgs) -> Result<(), CliError> {
    let phi: DenseMatrix<f64> = read_matrix_csv(&a.matrix)?;
    let y: Vec<f64> = read_vector_csv(&a.y)?;
    if !(a.eps.is_finite() && a.eps >= 0.0) {
        return Err(CliError::Validation(format!("--eps = {} must be a non-negative finite number", a.eps)));
    }
    let mut opts = BpOptions::default();
    if let Some(t) = a.opt_tol {
        opts.opt_tol = positive_finite("opt-tol", t)?;
    }
    if let Some(n) = a.max_iter {
        opts.max_iter = n;
    }
    let result = basis_pursuit(&phi, &y, a.eps, &opts)?;
    if let Some(path) = &a.xhat_out {
        write_vector_csv(path, &result.xhat)?;
    }
    let mut payload = result.to_json();
    payload["matrix_hash"] = Value::from(matrix_hash(&phi));
    let summary = format!(
        "{}: ||xhat||_1 = {:.6e}, residual {:.3e}, {} iterations",
        result.status.as_str(),
        result.l1_value,
        result.residual_norm,
        result.iterations
    );
    emit(&a.common, "solve", &summary, payload)
}

fn bounds(a: BoundsArgs) -> Result<(), CliError> {
    let given: [(&str, bool); 7] = [
        ("delta", a.delta.is_some()),
        ("gamma", a.gamma.is_some()),
        ("lambda", a.lambda.is_some()),
        ("N", a.n.is_some()),
        ("s", a.s.is_some()),
        ("eps", a.eps.is_some()),
        ("sigma", a.sigma.is_some()),
    ];
    let required: &[&str] = match a.name.as_str() {
        CAI_ZHANG_L2 => &["delta", "s", "eps", "sigma"],
        NSP_L1 => &["gamma", "lambda", "N", "eps", "sigma"],
        RIPNSP_L2 => &["delta", "lambda", "N", "s", "eps", "sigma"],
        other => {
            return Err(CliError::Validation(format!("unknown bound {other:?}; expected one of {CAI_ZHANG_L2}, {NSP_L1}, {RIPNSP_L2}")));
        }
    };
    for (flag, present) in given {
        let needed = required.contains(&flag);
        if needed && !present {
            return Err(CliError::Validation(format!("bound {} requires --{flag}", a.name)));
        }
        if !needed && present {
            return Err(CliError::Validation(format!("bound {} does not take --{flag}", a.name)));
        }
    }
    let v = |x: Option<f64>| x.unwrap_or_default();
    let u = |x: Option<usize>| x.unwrap_or_default();
    let report: BoundReport<f64> = match a.name.as_str() {
        CAI_ZHANG_L2 => rip_l2_bound(v(a.delta), v(a.eps), v(a.sigma), u(a.s))?,
        NSP_L1 => nsp_l1_bound(v(a.gamma), v(a.lambda), u(a.n), v(a.eps), v(a.sigma))?,
        _ => ripnsp_l2_bound(v(a.delta), v(a.lambda), u(a.n), u(a.s), v(a.eps), v(a.sigma))?,
    };
    let summary = format!("{} = {}", report.name, report.value);
    emit(&a.common, "bounds", &summary, report.to_json())
}

fn build(p: &GapParams) -> Result<(InnerMatrix<f64>, GapConstruction<f64>), CliError> {
    if p.s == 0 || p.n <= 4 * p.s {
        return Err(CliError::Validation(format!("need s >= 1 and N > 4s, got N = {}, s = {}", p.n, p.s)));
    }
    if !(p.gamma > 0.0 && p.gamma < 1.0) {
        return Err(CliError::Validation(format!("--gamma = {} must lie in (0, 1)", p.gamma)));
    }
    let cols = p.n - p.s;
    let inner_rows = match p.m {
        Some(m) if m <= p.s || m - p.s >= cols => {
            return Err(CliError::Validation(format!("--M = {m} must satisfy s < M < N")));
        }
        Some(m) => m - p.s,
        None => 2 * (cols / 3),
    };
    let opts = nsp_options(&p.tol)?;
    let inner = build_inner_matrix(inner_rows, cols, p.s, p.gamma / 3.0, p.seed, p.max_attempts, &opts)?;
    let gc = build_gap_matrix(p.n, p.s, p.gamma, inner.a.clone(), Some(inner.seed))?;
    Ok((inner, gc))
}

fn construction_json(inner: &InnerMatrix<f64>, gc: &GapConstruction<f64>) -> Value {
    json!({
        "params": gc.params_json(),
        "inner": {
            "rows": inner.a.rows(),
            "cols": inner.a.cols(),
            "seed": inner.seed,
            "attempts": inner.attempts,
            "certificate": nsp_certificate_json(&inner.certificate),
        },
        "phi_hash": matrix_hash(&gc.phi),
        "invariants": gc.check_invariants().to_json(),
    })
}

fn gap_build(a: GapBuildArgs) -> Result<(), CliError> {
    let (inner, gc) = build(&a.params)?;
    gc.write_dir(&a.out_dir)?;
    let summary = format!(
        "built {}x{} Phi from a {}x{} inner matrix (seed {}, {} attempts, inner constant {:.6})",
        gc.m(),
        gc.n,
        inner.a.rows(),
        inner.a.cols(),
        inner.seed,
        inner.attempts,
        inner.certificate.gamma
    );
    emit(&a.common, "gap-build", &summary, construction_json(&inner, &gc))
}

fn gap_demo(a: GapDemoArgs) -> Result<(), CliError> {
    let (inner, gc) = build(&a.params)?;
    let opts = nsp_options(&a.params.tol)?;
    let kernel_nsp = verify_step2_nsp(&gc, &opts)?;
    let inst = adversarial_instance(&gc)?;
    if let Some(dir) = &a.out_dir {
        gc.write_dir(dir)?;
        inst.write_dir(dir)?;
    }
    let threshold = gap_threshold(a.delta, a.params.gamma)?;
    let matrix_scale = match ripnsp_disprove(&gc.phi, &inst, a.delta, gc.s) {
        Ok(r) => {
            let in_regime = (gc.s as f64) > threshold.s_min;
            let note = if in_regime {
                "s exceeds the sparsity threshold".to_string()
            } else {
                format!("out of regime: s = {} is below the sparsity threshold {:.1}", gc.s, threshold.s_min)
            };
            json!({ "regime": "matrix", "applicable": true, "report": r.to_json(), "in_regime": in_regime, "note": note })
        }
        Err(e) => json!({ "regime": "matrix", "applicable": false, "in_regime": false, "note": e.to_string() }),
    };
    let formula = contradiction_check(a.formula_n, a.formula_s, a.formula_gamma, a.delta)?;
    let mut payload = construction_json(&inner, &gc);
    payload["kernel_nsp"] = kernel_nsp.to_json();
    payload["instance"] = json!({
        "eps": number(inst.eps),
        "lower_bound": number(inst.lower_bound),
        "upper_bound": number(inst.upper_bound),
        "checks": inst.checks.to_json(),
    });
    payload["disproof"] = matrix_scale.clone();
    payload["contradiction"] = json!({ "regime": "formula", "report": formula.to_json() });

    let disproven = matrix_scale["report"]["disproven"].as_bool().unwrap_or(false);
    let summary = format!(
        "inner seed {}; kernel nsp {} ({:.6} vs {}); matrix-scale disproof {}; formula-scale contradiction at N = {}, s = {}: {}",
        inner.seed,
        if kernel_nsp.holds { "certified" } else { "NOT certified" },
        kernel_nsp.certificate.gamma,
        gc.gamma,
        if disproven { "holds" } else { "out of regime" },
        formula.n,
        formula.s,
        formula.contradiction
    );
    emit(&a.common, "gap-demo", &summary, payload)?;
    if !kernel_nsp.holds || !kernel_nsp.checks.all_passed() {
        return Err(CliError::Internal(format!(
            "ker Phi has NSP constant {} above gamma = {} although the inner matrix is certified",
            kernel_nsp.certificate.gamma, gc.gamma
        )));
    }
    Ok(())
}

fn gap_threshold_cmd(a: GapThresholdArgs) -> Result<(), CliError> {
    let th = gap_threshold(a.delta, a.gamma)?;
    let summary = format!("C = {:.6}, s_min = {:.4}", th.c, th.s_min);
    emit(&a.common, "gap-threshold", &summary, th.to_json(a.delta, a.gamma))
}

fn sparse_signal(n: usize, s: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let mut x = vec![0.0; n];
    for i in sample(rng, n, s).into_iter() {
        let magnitude = rng.gen_range(1.0..2.0);
        x[i] = if rng.gen_bool(0.5) { magnitude } else { -magnitude };
    }
    x
}

fn noise_vector(m: usize, eps: f64, rng: &mut ChaCha8Rng) -> Vec<f64> {
    if eps == 0.0 {
        return vec![0.0; m];
    }
    let v: Vec<f64> = (0..m).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let radius = eps * rng.gen_range(0.0..1.0) / norm2(&v).max(f64::MIN_POSITIVE);
    v.iter().map(|x| x * radius).collect()
}

fn experiment(a: ExperimentArgs) -> Result<(), CliError> {
    let phi: DenseMatrix<f64> = read_matrix_csv(&a.matrix)?;
    let (m, n) = phi.shape();
    if a.s == 0 || a.s > n {
        return Err(CliError::Validation(format!("--s = {} must lie in 1..={n}", a.s)));
    }
    if !(a.eps.is_finite() && a.eps >= 0.0) {
        return Err(CliError::Validation(format!("--eps = {} must be a non-negative finite number", a.eps)));
    }
    if a.trials == 0 {
        return Err(CliError::Validation("--trials must be positive".into()));
    }
    let nsp_opts = nsp_options(&a.tol)?;
    let mut ctx = BoundContext { rip_delta_2s: a.delta, nsp_gamma: a.gamma, kernel_rip_delta_2s: a.kernel_delta };
    let mut certified = Map::new();
    if a.certify {
        let rip_opts = RipOptions { enumeration_cap: nsp_opts.enumeration_cap, subsample: None };
        if 2 * a.s <= n {
            let rip = rip_constant(&phi, 2 * a.s, &rip_opts)?;
            certified.insert("rip".into(), rip_certificate_json(&rip));
            ctx.rip_delta_2s = cai_zhang_constants(rip.delta).is_ok().then_some(rip.delta);
        }
        let kernel = kernel_basis(&phi, rank_tol(&a.tol)?)?;
        if a.s < n {
            let nsp = nsp_constant(&kernel, a.s, &nsp_opts)?;
            certified.insert("nsp".into(), nsp_certificate_json(&nsp));
            ctx.nsp_gamma = (nsp.gamma < 1.0).then_some(nsp.gamma);
        }
    }
    let opts = BpOptions { rank_tol: rank_tol(&a.tol)?, ..BpOptions::default() };
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let mut records = Vec::with_capacity(a.trials);
    let mut violations: Map<String, Value> = Map::new();
    for _ in 0..a.trials {
        let x_true = sparse_signal(n, a.s, &mut rng);
        let noise = noise_vector(m, a.eps, &mut rng);
        let record = recovery_experiment(&phi, &x_true, &noise, a.eps, a.s, &ctx, &opts)?;
        for b in &record.bounds {
            let error = if b.name == NSP_L1 { record.error_l1 } else { record.error_l2 };
            let entry = violations.entry(b.name.to_string()).or_insert(Value::from(0));
            if error > b.value {
                *entry = Value::from(entry.as_u64().unwrap_or(0) + 1);
            }
        }
        records.push(record.to_json());
    }
    let total: u64 = violations.values().filter_map(Value::as_u64).sum();
    let summary = format!("{} trials, {} bounds evaluated per trial, {total} violations", a.trials, violations.len());
    let payload = json!({
        "matrix_hash": matrix_hash(&phi),
        "N": n,
        "M": m,
        "s": a.s,
        "eps": number(a.eps),
        "seed": a.seed,
        "certified": certified,
        "violations": violations,
        "records": records,
    });
    emit(&a.common, "experiment", &summary, payload)
}
