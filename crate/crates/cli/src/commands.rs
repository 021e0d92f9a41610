use anyhow::{anyhow, bail, Context, Result};
use serde_json::{json, Map, Value};
use sinkhorn_core::engine::{DEFAULT_EXACT_MAX_STEPS, DEFAULT_MAX_STEPS, DEFAULT_TOLERANCE};
use sinkhorn_core::io::{matrix_to_json, parse_vector_exact, parse_vector_f64, vector_to_json, JsonEntry};
use sinkhorn_core::*;

use crate::args::*;
use crate::input::{self, Loaded};

/// Exit status for runs that hit the step cap before converging.
pub const EXIT_MAX_STEPS: u8 = 2;

pub const TOL_ENV: &str = "SINKHORN_TOL";

fn approximate_tolerance(explicit: Option<f64>) -> Result<f64> {
    if let Some(tol) = explicit {
        return Ok(tol);
    }
    match std::env::var(TOL_ENV) {
        Ok(text) => text
            .trim()
            .parse::<f64>()
            .with_context(|| format!("{TOL_ENV}={text:?} is not a number")),
        Err(_) => Ok(DEFAULT_TOLERANCE),
    }
}

/// Exact runs ignore the environment default; an explicit nonzero `--tol` is
/// rejected by config validation.
fn run_config(opts: &RunOptions, exact: bool, steps: Option<usize>) -> Result<IterationConfig> {
    let base = if exact {
        let cfg = IterationConfig::exact().with_max_steps(DEFAULT_EXACT_MAX_STEPS);
        match opts.tol {
            Some(tol) => cfg.with_tolerance(tol),
            None => cfg,
        }
    } else {
        IterationConfig::approximate()
            .with_max_steps(DEFAULT_MAX_STEPS)
            .with_tolerance(approximate_tolerance(opts.tol)?)
    };
    let mut base = base.with_start_side(opts.start_side());
    base.max_entry_bits = opts.max_bits;
    Ok(match steps.or(opts.max_steps) {
        Some(n) => base.with_max_steps(n),
        None => base,
    })
}

fn emit(value: &Value) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn mode_name(exact: bool) -> &'static str {
    if exact {
        "exact"
    } else {
        "approximate"
    }
}

fn status_name(status: Status) -> &'static str {
    match status {
        Status::TerminatedFinite(_) => "terminated_finite",
        Status::ConvergedWithinTolerance => "converged",
        Status::MaxStepsReached => "max_steps_reached",
    }
}

fn diag<S: Scalar>(d: &DiagonalScaling<S>) -> String {
    let parts: Vec<String> = d.as_slice().iter().map(ToString::to_string).collect();
    format!("diag({})", parts.join(", "))
}

/// Inline syntax `a,b;c,d`, accepted back as input.
fn inline<S: Scalar>(m: &PositiveMatrix<S>) -> String {
    m.to_rows()
        .iter()
        .map(|r| r.iter().map(ToString::to_string).collect::<Vec<_>>().join(","))
        .collect::<Vec<_>>()
        .join(";")
}

fn matrix_csv<S: Scalar>(m: &PositiveMatrix<S>) -> String {
    m.to_rows()
        .iter()
        .map(|r| r.iter().map(ToString::to_string).collect::<Vec<_>>().join(",") + "\n")
        .collect()
}

fn error_text<S: Scalar>(x: &S) -> String {
    if S::EXACT {
        x.to_string()
    } else {
        format!("{:.3e}", x.to_f64())
    }
}

fn exit_code(status: Status) -> u8 {
    if status.is_success() {
        0
    } else {
        EXIT_MAX_STEPS
    }
}

fn report_run<S: JsonEntry>(
    command: &str,
    a: &PositiveMatrix<S>,
    cfg: &IterationConfig,
    res: &SinkhornResult<S>,
    extra: Map<String, Value>,
    format: Format,
) -> Result<u8> {
    let last = res
        .trace
        .records
        .last()
        .ok_or_else(|| anyhow!("run produced no trace"))?;
    match format {
        Format::Human => {
            println!("status: {}", res.status);
            println!("steps: {}", res.steps_taken);
            println!("start: {}", cfg.start_side);
            println!("limit: {}", res.limit);
            println!("left scaling: {}", diag(&res.left_accum));
            println!("right scaling: {}", diag(&res.right_accum));
            println!(
                "max margin error: rows {}, cols {}",
                error_text(&last.max_row_err),
                error_text(&last.max_col_err)
            );
        }
        Format::Json => {
            let mut out = Map::new();
            out.insert("command".into(), json!(command));
            out.insert("mode".into(), json!(mode_name(S::EXACT)));
            out.insert("start_side".into(), json!(cfg.start_side.to_string()));
            out.insert("input".into(), matrix_to_json(a));
            out.extend(extra);
            out.insert("status".into(), json!(status_name(res.status)));
            out.insert("termination_length".into(), json!(res.termination_length()));
            out.insert("steps_taken".into(), json!(res.steps_taken));
            out.insert("max_row_err".into(), last.max_row_err.to_json());
            out.insert("max_col_err".into(), last.max_col_err.to_json());
            out.insert("limit".into(), matrix_to_json(&res.limit));
            out.insert("left_scaling".into(), vector_to_json(res.left_accum.as_slice()));
            out.insert("right_scaling".into(), vector_to_json(res.right_accum.as_slice()));
            emit(&Value::Object(out))?;
        }
        Format::Csv => print!("{}", matrix_csv(&res.limit)),
    }
    Ok(exit_code(res.status))
}

pub fn scale(args: &ScaleArgs) -> Result<u8> {
    let Loaded { matrix, .. } = input::load(&args.input, args.run.exact)?;
    match matrix {
        AnyMatrix::Approx(a) => {
            let cfg = run_config(&args.run, false, None)?;
            report_run("scale", &a, &cfg, &sinkhorn(&a, &cfg)?, Map::new(), args.format)
        }
        AnyMatrix::Exact(a) => {
            let cfg = run_config(&args.run, true, None)?;
            report_run("scale", &a, &cfg, &sinkhorn(&a, &cfg)?, Map::new(), args.format)
        }
    }
}

pub fn rc_scale(args: &RcScaleArgs) -> Result<u8> {
    let Loaded { matrix, .. } = input::load(&args.input, args.run.exact)?;
    match matrix {
        AnyMatrix::Approx(a) => {
            let target = MarginTarget::new(parse_vector_f64(&args.rows)?, parse_vector_f64(&args.cols)?)?;
            let cfg = run_config(&args.run, false, None)?;
            let res = rc_sinkhorn(&a, &target, &cfg)?;
            report_run("rc-scale", &a, &cfg, &res, targets_json(&target), args.format)
        }
        AnyMatrix::Exact(a) => {
            let target = MarginTarget::new(parse_vector_exact(&args.rows)?, parse_vector_exact(&args.cols)?)?;
            let cfg = run_config(&args.run, true, None)?;
            let res = rc_sinkhorn(&a, &target, &cfg)?;
            report_run("rc-scale", &a, &cfg, &res, targets_json(&target), args.format)
        }
    }
}

fn targets_json<S: JsonEntry>(target: &MarginTarget<S>) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("row_targets".into(), vector_to_json(target.row_targets()));
    m.insert("col_targets".into(), vector_to_json(target.col_targets()));
    m
}

fn two_by_two_f64(matrix: AnyMatrix) -> Result<[f64; 4]> {
    let m = match matrix {
        AnyMatrix::Approx(m) => m,
        AnyMatrix::Exact(m) => m.map_to_f64(),
    };
    if m.rows() != 2 || m.cols() != 2 {
        bail!(
            "the closed form is for 2x2 matrices, got {}x{}; use `scale` or `limit --bordered` for larger ones",
            m.rows(),
            m.cols()
        );
    }
    Ok([*m.get(0, 0), *m.get(0, 1), *m.get(1, 0), *m.get(1, 1)])
}

fn no_csv(format: Format, command: &str) -> Result<()> {
    if format == Format::Csv {
        bail!("csv output is available for scale, rc-scale, search and trace, not {command}");
    }
    Ok(())
}

/// Accepts `n=3`, `N=3` or a bare `3`.
fn keyed_value(token: &str, key: &str) -> Result<String> {
    let value = match token.split_once('=') {
        Some((k, v)) if k.trim().eq_ignore_ascii_case(key) => v,
        Some((k, _)) => bail!("expected {key}=..., got {k}=..."),
        None => token,
    };
    Ok(value.trim().to_string())
}

pub fn limit(args: &LimitArgs) -> Result<u8> {
    no_csv(args.format, "limit")?;
    if let Some(parts) = &args.bordered {
        input::reject(&args.input, "--bordered takes n and K, not a matrix")?;
        let n: usize = keyed_value(&parts[0], "n")?
            .parse()
            .context("n must be a positive integer")?;
        let k = io::parse_f64(&keyed_value(&parts[1], "K")?)?;
        return limit_bordered(n, k, args.format);
    }
    if let Some(k) = args.triangular {
        input::reject(&args.input, "--triangular takes k, not a matrix")?;
        return limit_triangular(k, args.format);
    }
    let Loaded { matrix, .. } = input::load(&args.input, args.exact)?;
    if args.exact {
        let AnyMatrix::Exact(m) = matrix else {
            bail!("internal: exact input expected");
        };
        return limit_exact(&m, args.format);
    }
    let [a, b, c, d] = two_by_two_f64(matrix)?;
    if args.symmetric {
        if b != c {
            bail!("--symmetric needs b = c, got b = {b}, c = {c}");
        }
        let s = limit_2x2_symmetric(a, b, d)?;
        match args.format {
            Format::Json => emit(&json!({
                "command": "limit",
                "kind": "symmetric",
                "input": {"rows": [[a, b], [c, d]]},
                "alpha": s.alpha,
                "beta": s.beta,
                "lambda": s.lambda,
                "scaling": vector_to_json(s.scaler.as_slice()),
                "limit": matrix_to_json(&s.limit_matrix()),
            }))?,
            _ => {
                println!("alpha = {}", s.alpha);
                println!("beta = {}", s.beta);
                println!("lambda = {}", s.lambda);
                println!("D = {}", diag(&s.scaler));
                println!("limit: {}", s.limit_matrix());
            }
        }
        return Ok(0);
    }
    let l = limit_2x2(a, b, c, d)?;
    match args.format {
        Format::Json => emit(&json!({
            "command": "limit",
            "kind": "general",
            "input": {"rows": [[a, b], [c, d]]},
            "alpha": l.alpha,
            "beta": l.beta,
            "left_scaling": vector_to_json(l.left.as_slice()),
            "right_scaling": vector_to_json(l.right.as_slice()),
            "limit": matrix_to_json(&l.limit_matrix()),
        }))?,
        _ => {
            println!("alpha = {}", l.alpha);
            println!("beta = {}", l.beta);
            println!("X = {}", diag(&l.left));
            println!("Y = {}", diag(&l.right));
            println!("limit: {}", l.limit_matrix());
        }
    }
    Ok(0)
}

fn exact_entries(m: &PositiveMatrix<Rational>) -> Result<[&Rational; 4]> {
    if m.rows() != 2 || m.cols() != 2 {
        bail!(
            "the exact closed form is for 2x2 matrices, got {}x{}",
            m.rows(),
            m.cols()
        );
    }
    Ok([m.get(0, 0), m.get(0, 1), m.get(1, 0), m.get(1, 1)])
}

fn irrational_note(ratio: &Rational) -> String {
    format!("irrational: ad/bc = {ratio} is not a rational square")
}

/// JSON and human renderings of the exact closed form.
fn closed_form_exact(m: &PositiveMatrix<Rational>) -> Result<(Value, Vec<String>)> {
    let [a, b, c, d] = exact_entries(m)?;
    Ok(match limit_2x2_exact(a, b, c, d)? {
        ExactLimit2x2::Rational {
            ratio,
            root,
            alpha,
            beta,
        } => {
            let limit = ExactLimit2x2::Rational {
                ratio: ratio.clone(),
                root: root.clone(),
                alpha: alpha.clone(),
                beta: beta.clone(),
            }
            .limit_matrix()
            .ok_or_else(|| anyhow!("rational limit without a matrix"))?;
            let lines = vec![
                format!("rational: ad/bc = {ratio} = ({root})^2"),
                format!("alpha = {alpha}"),
                format!("beta = {beta}"),
                format!("limit: {limit}"),
            ];
            let value = json!({
                "rational": true,
                "ratio": ratio.to_string(),
                "root": root.to_string(),
                "alpha": alpha.to_string(),
                "beta": beta.to_string(),
                "limit": matrix_to_json(&limit),
            });
            (value, lines)
        }
        ExactLimit2x2::Irrational { ratio } => {
            let approx = limit_2x2_of_exact(a, b, c, d)?;
            let lines = vec![
                irrational_note(&ratio),
                format!("alpha ~= {}", approx.alpha),
                format!("beta ~= {}", approx.beta),
                format!("limit ~= {}", approx.limit_matrix()),
            ];
            let value = json!({
                "rational": false,
                "ratio": ratio.to_string(),
                "alpha": approx.alpha,
                "beta": approx.beta,
                "limit": matrix_to_json(&approx.limit_matrix()),
            });
            (value, lines)
        }
    })
}

fn limit_exact(m: &PositiveMatrix<Rational>, format: Format) -> Result<u8> {
    let (value, lines) = closed_form_exact(m)?;
    match format {
        Format::Json => {
            let mut out = Map::new();
            out.insert("command".into(), json!("limit"));
            out.insert("kind".into(), json!("exact"));
            out.insert("input".into(), matrix_to_json(m));
            if let Value::Object(fields) = value {
                out.extend(fields);
            }
            emit(&Value::Object(out))?;
        }
        _ => lines.iter().for_each(|l| println!("{l}")),
    }
    Ok(0)
}

fn limit_bordered(n: usize, k: f64, format: Format) -> Result<u8> {
    let b = bordered_limit(n, k)?;
    match format {
        Format::Json => emit(&json!({
            "command": "limit",
            "kind": "bordered",
            "n": n,
            "K": k,
            "alpha": b.alpha,
            "beta": b.beta,
            "gamma": b.gamma,
            "x1": b.x1,
            "x2": b.x2,
            "limit": matrix_to_json(&b.limit_matrix()),
        }))?,
        _ => {
            println!("n = {n}, K = {k}");
            println!("alpha = {}", b.alpha);
            println!("beta = {}", b.beta);
            println!("gamma = {}", b.gamma);
            println!("D = diag(x1, x2, ..., x2) with x1 = {}, x2 = {}", b.x1, b.x2);
            println!("quadratic residual = {:e}", b.quadratic_residual());
        }
    }
    Ok(0)
}

fn limit_triangular(k: u64, format: Format) -> Result<u8> {
    let t = bordered_limit_triangular(k)?;
    match format {
        Format::Json => emit(&json!({
            "command": "limit",
            "kind": "triangular",
            "k": k,
            "K": t.big_k,
            "alpha": t.alpha.to_string(),
            "beta": t.beta.to_string(),
            "gamma": t.gamma.to_string(),
            "limit": matrix_to_json(&t.limit_matrix()),
        }))?,
        _ => {
            println!("k = {k}, K = {}", t.big_k);
            println!("alpha = {}", t.alpha);
            println!("beta = {}", t.beta);
            println!("gamma = {}", t.gamma);
            println!("limit: {}", t.limit_matrix());
        }
    }
    Ok(0)
}

/// Both parametrizations of a rank-one matrix, `(p pt; r rt)` and
/// `(p q; pt qt)`; the verdict carries the one matching its start side.
fn rank_one_forms(m: &PositiveMatrix<Rational>) -> [(&'static str, Vec<(&'static str, Rational)>); 2] {
    let (a, b, c) = (m.get(0, 0), m.get(0, 1), m.get(1, 0));
    [
        (
            "(p pt; r rt)",
            vec![("p", a.clone()), ("r", c.clone()), ("t", b / a)],
        ),
        (
            "(p q; pt qt)",
            vec![("p", a.clone()), ("q", b.clone()), ("t", c / a)],
        ),
    ]
}

fn is_two_step(v: &TerminationClass) -> bool {
    matches!(
        v.kind,
        TerminationKind::TwoStepColumnLast { .. } | TerminationKind::TwoStepRowLast { .. }
    )
}

fn verdict_json(v: &TerminationClass, m: &PositiveMatrix<Rational>) -> Value {
    let params: Map<String, Value> = v
        .kind
        .parameters()
        .into_iter()
        .map(|(k, x)| (k.to_string(), json!(x.to_string())))
        .collect();
    let mut out = json!({
        "start_side": v.start_side.to_string(),
        "kind": v.kind.name(),
        "steps": v.steps(),
        "parameters": params,
        "limit": v.limit.as_ref().map(matrix_to_json),
    });
    if is_two_step(v) {
        let forms: Map<String, Value> = rank_one_forms(m)
            .into_iter()
            .map(|(shape, ps)| {
                let ps: Map<String, Value> = ps
                    .into_iter()
                    .map(|(k, x)| (k.to_string(), json!(x.to_string())))
                    .collect();
                (shape.to_string(), Value::Object(ps))
            })
            .collect();
        out["rank_one_forms"] = Value::Object(forms);
    }
    out
}

fn verdict_lines(v: &TerminationClass, m: &PositiveMatrix<Rational>) -> Vec<String> {
    let mut lines = vec![format!("{}: {}", v.start_side, v.kind.name())];
    match v.steps() {
        Some(l) => lines.push(format!("  L = {l}")),
        None => lines.push("  never terminates".into()),
    }
    let params = v.kind.parameters();
    if !params.is_empty() {
        let parts: Vec<String> = params.iter().map(|(k, x)| format!("{k} = {x}")).collect();
        lines.push(format!("  parameters: {}", parts.join(", ")));
    }
    if is_two_step(v) {
        for (shape, ps) in rank_one_forms(m) {
            let parts: Vec<String> = ps.iter().map(|(k, x)| format!("{k} = {x}")).collect();
            lines.push(format!("  rank one {shape}: {}", parts.join(", ")));
        }
    }
    if let Some(limit) = &v.limit {
        lines.push(format!("  limit: {limit}"));
    }
    lines
}

pub fn classify(args: &ClassifyArgs) -> Result<u8> {
    no_csv(args.format, "classify")?;
    let Loaded { matrix, decimals } = input::load(&args.input, true)?;
    let AnyMatrix::Exact(m) = matrix else {
        bail!("internal: exact input expected");
    };
    let (verdicts, difference) = if args.both_orders {
        let both = classify_both_orders(&m)?;
        (vec![both.row_first, both.column_first], Some(both.difference))
    } else {
        let side = if args.row_first {
            StartSide::RowFirst
        } else {
            StartSide::ColumnFirst
        };
        (vec![classify_2x2(&m, side)?], None)
    };
    let closed_form = if verdicts.iter().any(|v| !v.is_finite()) {
        Some(closed_form_exact(&m)?)
    } else {
        None
    };
    match args.format {
        Format::Json => {
            let mut out = Map::new();
            out.insert("command".into(), json!("classify"));
            out.insert("input".into(), matrix_to_json(&m));
            out.insert("decimals_converted".into(), json!(decimals));
            out.insert(
                "verdicts".into(),
                Value::Array(verdicts.iter().map(|v| verdict_json(v, &m)).collect()),
            );
            if let Some(diff) = difference {
                out.insert("difference".into(), json!(diff));
            }
            out.insert("closed_form".into(), closed_form.map_or(Value::Null, |(v, _)| v));
            emit(&Value::Object(out))?;
        }
        _ => {
            if decimals {
                println!("note: decimal entries were converted exactly to rationals: {m}");
            }
            for v in &verdicts {
                verdict_lines(v, &m).iter().for_each(|l| println!("{l}"));
            }
            if let Some(diff) = difference {
                match diff {
                    Some(d) => println!("|N1 - N2| = {d} (N1 row-first, N2 column-first)"),
                    None => println!("|N1 - N2| undefined: not both finite"),
                }
            }
            if let Some((_, lines)) = closed_form {
                println!("closed-form limit:");
                lines.iter().for_each(|l| println!("  {l}"));
            }
        }
    }
    Ok(0)
}

pub fn search(args: &SearchArgs) -> Result<u8> {
    let sides = match args.side {
        SideChoice::ColumnFirst => vec![StartSide::ColumnFirst],
        SideChoice::RowFirst => vec![StartSide::RowFirst],
        SideChoice::Both => vec![StartSide::ColumnFirst, StartSide::RowFirst],
    };
    let cfg = SearchConfig {
        max_steps: args.max_steps,
        sides,
        normalize_rows: args.normalize_rows,
        candidate_cap: args.cap,
        max_entry_bits: Some(args.max_bits),
    };
    let catalog = finite_termination_search(args.n, args.bound, &cfg)?;
    match args.format {
        Format::Json => {
            let histogram: Map<String, Value> = catalog
                .histogram
                .iter()
                .map(|(l, count)| (l.to_string(), json!(count)))
                .collect();
            let entries: Vec<Value> = catalog
                .entries
                .iter()
                .map(|e| {
                    json!({
                        "matrix": matrix_to_json(&e.matrix),
                        "start": matrix_to_json(&e.start),
                        "start_side": e.start_side.to_string(),
                        "steps": e.steps,
                        "limit": matrix_to_json(&e.limit),
                    })
                })
                .collect();
            emit(&json!({
                "command": "search",
                "n": args.n,
                "bound": args.bound,
                "normalize_rows": args.normalize_rows,
                "max_steps": args.max_steps,
                "max_bits": args.max_bits,
                "candidates": u64::try_from(catalog.candidates).unwrap_or(u64::MAX),
                "runs": catalog.runs,
                "histogram": histogram,
                "entries": entries,
            }))?;
        }
        Format::Csv => {
            println!("matrix,start,start_side,steps,limit");
            for e in &catalog.entries {
                println!(
                    "\"{}\",\"{}\",{},{},\"{}\"",
                    inline(&e.matrix),
                    inline(&e.start),
                    e.start_side,
                    e.steps,
                    inline(&e.limit)
                );
            }
        }
        Format::Human => {
            for e in &catalog.entries {
                let start = if args.normalize_rows {
                    format!("  start {}", e.start)
                } else {
                    String::new()
                };
                println!(
                    "{}  {}  L = {}  limit {}{start}",
                    e.matrix, e.start_side, e.steps, e.limit
                );
            }
            println!(
                "{} candidates, {} runs, {} terminated within {} steps and {} bits",
                catalog.candidates,
                catalog.runs,
                catalog.entries.len(),
                args.max_steps,
                args.max_bits
            );
            let parts: Vec<String> = catalog
                .histogram
                .iter()
                .map(|(l, c)| format!("L = {l}: {c}"))
                .collect();
            if parts.is_empty() {
                println!("histogram: none found (not a proof that none exist)");
            } else {
                println!("histogram: {}", parts.join(", "));
            }
        }
    }
    Ok(0)
}

fn trace_out<S: JsonEntry>(a: &PositiveMatrix<S>, cfg: &IterationConfig, format: Format) -> Result<u8> {
    let res = sinkhorn(a, cfg)?;
    match format {
        Format::Csv => print!("{}", res.trace.to_csv()),
        Format::Json => {
            let records: Vec<Value> = res
                .trace
                .records
                .iter()
                .map(|r| {
                    json!({
                        "step": r.step,
                        "side": r.side.map(Side::as_str),
                        "max_row_err": r.max_row_err.to_json(),
                        "max_col_err": r.max_col_err.to_json(),
                        "max_entry_bits": r.max_entry_bits,
                    })
                })
                .collect();
            emit(&json!({
                "command": "trace",
                "mode": mode_name(S::EXACT),
                "start_side": cfg.start_side.to_string(),
                "input": matrix_to_json(a),
                "status": status_name(res.status),
                "steps_taken": res.steps_taken,
                "records": records,
            }))?;
        }
        Format::Human => {
            print!("{}", res.trace.to_csv().replace(',', "\t"));
            println!("status: {}", res.status);
        }
    }
    Ok(0)
}

pub fn trace(args: &TraceArgs) -> Result<u8> {
    let Loaded { matrix, .. } = input::load(&args.input, args.run.exact)?;
    match matrix {
        AnyMatrix::Approx(a) => trace_out(&a, &run_config(&args.run, false, args.steps)?, args.format),
        AnyMatrix::Exact(a) => trace_out(&a, &run_config(&args.run, true, args.steps)?, args.format),
    }
}
