use std::fs;
use std::path::Path;

use lmsr_core::recurrence::{limit_threshold, limit_value};
use lmsr_core::{
    build_ds, fit_scaling, iterate_decision_recurrence, iterate_function_recurrence, lmsr_booth,
    lmsr_brute, lmsr_decision, lmsr_function, master_solve, match_full, match_with_ds, verify_ds,
    verify_limit, CostKind, DecisionKind, DeterministicSample, Ledger, LedgerSnapshot, MatchResult,
    Model, Params, SigmaString,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::args::*;
use crate::report::*;

fn read_input(input: &InputArgs) -> CliResult<SigmaString> {
    let bytes = match (&input.text, &input.input) {
        (Some(text), None) => text.as_bytes().to_vec(),
        (None, Some(path)) => read_file(path)?,
        _ => return Err(CliError::Usage("give exactly one of --text or --input".into())),
    };
    Ok(SigmaString::new(bytes)?)
}

fn read_file(path: &Path) -> CliResult<Vec<u8>> {
    fs::read(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn input_json(input: &InputArgs, s: &[u8]) -> Value {
    match &input.input {
        Some(path) => json!({"source": "file", "path": path.display().to_string(), "length": s.len()}),
        None => json!({"source": "text", "text": String::from_utf8_lossy(s), "length": s.len()}),
    }
}

fn cost_model(cost: &CostArgs) -> CliResult<Model> {
    let kind = match cost.cost_model {
        CostModelArg::Quantum => CostKind::QuantumIdeal,
        CostModelArg::Classical => CostKind::Classical,
        CostModelArg::None => CostKind::None,
    };
    Ok(Model::with_constants(kind, cost.cg, cost.cm, cost.cd, cost.cs)?)
}

fn cost_json(cost: &CostArgs) -> Value {
    let name = match cost.cost_model {
        CostModelArg::Quantum => "quantum",
        CostModelArg::Classical => "classical",
        CostModelArg::None => "none",
    };
    json!({"cost_model": name, "cg": cost.cg, "cm": cost.cm, "cd": cost.cd, "cs": cost.cs})
}

fn params(p: &ParamArgs) -> CliResult<Params> {
    Ok(Params::new(p.c, p.d, p.n0)?.with_comparator_success(p.success)?)
}

fn params_json(p: &ParamArgs) -> Value {
    json!({"c": p.c, "d": p.d, "n0": p.n0, "success": p.success})
}

fn algo_name(algo: Algo) -> &'static str {
    match algo {
        Algo::Booth => "booth",
        Algo::Brute => "brute",
        Algo::Dnc => "dnc",
    }
}

fn output_json(o: &OutputArgs) -> Value {
    json!({"json": o.json, "csv": o.csv.as_ref().map(|p| p.display().to_string())})
}

fn charge_table(first: &[&str], values: Vec<String>, snapshot: Option<&LedgerSnapshot>) -> Table {
    let mut header: Vec<&str> = first.to_vec();
    header.extend(LedgerSnapshot::COLUMNS);
    let mut table = Table::new(&header);
    let mut row = values;
    match snapshot {
        Some(s) => row.extend(s.values().iter().map(|&v| fmt_float(v))),
        None => row.extend(LedgerSnapshot::COLUMNS.iter().map(|_| String::new())),
    }
    table.push(row);
    table
}

pub fn solve(args: &SolveArgs) -> CliResult<Report> {
    let s = read_input(&args.input)?;
    let model = cost_model(&args.cost)?;
    let params = params(&args.params)?;
    let (k, snapshot) = match args.algo {
        Algo::Booth => (lmsr_booth(&s), None),
        Algo::Brute => (lmsr_brute(&s)?, None),
        Algo::Dnc => {
            let mut ledger = Ledger::new(model);
            let k = lmsr_function(&s, &params, &mut ledger, args.seed)?;
            (k, Some(ledger.snapshot()))
        }
    };
    let config = object(vec![
        ("command", json!("solve")),
        ("input", input_json(&args.input, &s)),
        ("algo", json!(algo_name(args.algo))),
        ("cost", cost_json(&args.cost)),
        ("params", params_json(&args.params)),
        ("seed", json!(args.seed)),
        ("output", output_json(&args.output)),
    ]);
    let json = object(vec![
        ("answer", json!(k)),
        ("k", json!(k)),
        ("algo", json!(algo_name(args.algo))),
        ("charges", snapshot.as_ref().map(charges_json).unwrap_or_else(null_charges)),
        ("params", json!({"c": args.params.c, "d": args.params.d, "n0": args.params.n0})),
        ("seed", json!(args.seed)),
        ("config", config),
    ]);
    let mut plain = format!("k = {k}\nalgo = {}\nseed = {}\n", algo_name(args.algo), args.seed);
    if let Some(snap) = &snapshot {
        plain.push_str(&charges_plain(snap));
    }
    let table = charge_table(&["k", "algo", "seed"], vec![k.to_string(), algo_name(args.algo).into(), args.seed.to_string()], snapshot.as_ref());
    Ok(Report { json, plain: Some(plain), table })
}

fn min_rotation_by(s: &[u8], k: usize, best: usize) -> bool {
    let n = s.len();
    let doubled = [s, s].concat();
    doubled[k..k + n] == doubled[best..best + n]
}

pub fn decide(args: &DecideArgs) -> CliResult<Report> {
    let s = read_input(&args.input)?;
    if args.k >= s.len() {
        return Err(CliError::Usage(format!("k = {} out of range for length {}", args.k, s.len())));
    }
    let model = cost_model(&args.cost)?;
    let (answer, snapshot) = match args.algo {
        Algo::Booth => (min_rotation_by(&s, args.k, lmsr_booth(&s)), None),
        Algo::Brute => (min_rotation_by(&s, args.k, lmsr_brute(&s)?), None),
        Algo::Dnc => {
            let mut ledger = Ledger::new(model);
            let answer = lmsr_decision(&s, args.k, &mut ledger)?;
            (answer, Some(ledger.snapshot()))
        }
    };
    let bit = u8::from(answer);
    let config = object(vec![
        ("command", json!("decide")),
        ("input", input_json(&args.input, &s)),
        ("k", json!(args.k)),
        ("algo", json!(algo_name(args.algo))),
        ("cost", cost_json(&args.cost)),
        ("seed", json!(args.seed)),
        ("output", output_json(&args.output)),
    ]);
    let json = object(vec![
        ("answer", json!(bit)),
        ("k", json!(args.k)),
        ("algo", json!(algo_name(args.algo))),
        ("charges", snapshot.as_ref().map(charges_json).unwrap_or_else(null_charges)),
        ("seed", json!(args.seed)),
        ("config", config),
    ]);
    let mut plain = format!("answer = {bit}\nk = {}\nseed = {}\n", args.k, args.seed);
    if let Some(snap) = &snapshot {
        plain.push_str(&charges_plain(snap));
    }
    let table = charge_table(&["answer", "k", "seed"], vec![bit.to_string(), args.k.to_string(), args.seed.to_string()], snapshot.as_ref());
    Ok(Report { json, plain: Some(plain), table })
}

fn sample_table(ds: &DeterministicSample) -> Table {
    let mut table = Table::new(&["delta", "witnesses"]);
    let witnesses: Vec<String> = ds.witnesses.iter().map(|w| w.to_string()).collect();
    table.push(vec![ds.delta.to_string(), witnesses.join(" ")]);
    table
}

pub fn ds_build(args: &DsBuildArgs) -> CliResult<Report> {
    let s = read_input(&args.input)?;
    let mut ledger = Ledger::new(cost_model(&args.cost)?);
    let ds = build_ds(&s, &mut ledger)?;
    let snapshot = ledger.snapshot();
    let config = object(vec![
        ("command", json!("ds build")),
        ("input", input_json(&args.input, &s)),
        ("cost", cost_json(&args.cost)),
        ("seed", json!(args.seed)),
        ("output", output_json(&args.output)),
    ]);
    let json = object(vec![
        ("delta", json!(ds.delta)),
        ("witnesses", json!(ds.witnesses)),
        ("charges", charges_json(&snapshot)),
        ("seed", json!(args.seed)),
        ("config", config),
    ]);
    let plain = format!("delta = {}\nwitnesses = {:?}\n{}", ds.delta, ds.witnesses, charges_plain(&snapshot));
    Ok(Report { json, plain: Some(plain), table: sample_table(&ds) })
}

fn parse_sample(text: &str) -> CliResult<DeterministicSample> {
    serde_json::from_str(text).map_err(|e| CliError::Usage(format!("malformed sample JSON: {e}")))
}

pub fn ds_verify(args: &DsVerifyArgs) -> CliResult<Report> {
    let s = read_input(&args.input)?;
    let ds = match (&args.sample.sample, &args.sample.sample_file) {
        (Some(text), None) => parse_sample(text)?,
        (None, Some(path)) => {
            let bytes = read_file(path)?;
            parse_sample(&String::from_utf8_lossy(&bytes))?
        }
        _ => return Err(CliError::Usage("give exactly one of --sample or --sample-file".into())),
    };
    let valid = verify_ds(&s, &ds);
    let config = object(vec![
        ("command", json!("ds verify")),
        ("input", input_json(&args.input, &s)),
        ("sample", json!({"delta": ds.delta, "witnesses": ds.witnesses})),
        ("seed", json!(args.seed)),
        ("output", output_json(&args.output)),
    ]);
    let json = object(vec![("valid", json!(valid)), ("seed", json!(args.seed)), ("config", config)]);
    let mut table = Table::new(&["valid"]);
    table.push(vec![valid.to_string()]);
    Ok(Report { json, plain: Some(format!("valid = {valid}\n")), table })
}

pub fn matching(args: &MatchArgs) -> CliResult<Report> {
    let text = read_input(&args.input)?;
    let pattern = args.pattern.as_bytes();
    if pattern.is_empty() {
        return Err(CliError::Usage("empty pattern".into()));
    }
    let mut ledger = Ledger::new(cost_model(&args.cost)?);
    let result = match &args.sample {
        Some(sample) => match_with_ds(&text, pattern, &parse_sample(sample)?, &mut ledger)?,
        None => match_full(&text, pattern, &mut ledger)?,
    };
    let snapshot = ledger.snapshot();
    let found = result.found();
    let (leftmost, rightmost) = match result {
        MatchResult::Found { leftmost, rightmost } => (json!(leftmost), json!(rightmost)),
        MatchResult::NotFound => (Value::Null, Value::Null),
    };
    let config = object(vec![
        ("command", json!("match")),
        ("input", input_json(&args.input, &text)),
        ("pattern", json!(args.pattern)),
        ("sample", json!(args.sample)),
        ("cost", cost_json(&args.cost)),
        ("seed", json!(args.seed)),
        ("output", output_json(&args.output)),
    ]);
    let json = object(vec![
        ("found", json!(found)),
        ("leftmost", leftmost.clone()),
        ("rightmost", rightmost.clone()),
        ("charges", charges_json(&snapshot)),
        ("seed", json!(args.seed)),
        ("config", config),
    ]);
    let cell = |v: &Value| if v.is_null() { String::new() } else { v.to_string() };
    let plain = format!(
        "found = {found}\nleftmost = {}\nrightmost = {}\n{}",
        cell(&leftmost),
        cell(&rightmost),
        charges_plain(&snapshot)
    );
    let table = charge_table(&["found", "leftmost", "rightmost"], vec![found.to_string(), cell(&leftmost), cell(&rightmost)], Some(&snapshot));
    Ok(Report { json, plain: Some(plain), table })
}

fn check_range(min_exp: u32, max_exp: u32, cap: u32) -> CliResult<()> {
    if min_exp > max_exp {
        return Err(CliError::Usage(format!("empty exponent range {min_exp}..{max_exp}")));
    }
    if max_exp > cap {
        return Err(CliError::Usage(format!("max exponent {max_exp} above {cap}")));
    }
    Ok(())
}

/// Reference growth for the ratio column.
fn scaling_bound(problem: Problem, n: f64) -> f64 {
    match problem {
        Problem::Solve => n.sqrt(),
        Problem::Decide => (n * n.log2().max(1.0).powi(3) * n.log2().log2().max(1.0)).sqrt(),
    }
}

pub fn bench_scaling(args: &ScalingArgs) -> CliResult<Report> {
    check_range(args.min_exp, args.max_exp, 24)?;
    if args.trials == 0 {
        return Err(CliError::Usage("trials must be at least 1".into()));
    }
    if !(1..=256).contains(&args.alphabet) {
        return Err(CliError::Usage("alphabet must be in 1..=256".into()));
    }
    let model = cost_model(&args.cost)?;
    let params = params(&args.params)?;
    let jobs: Vec<(u32, usize)> =
        (args.min_exp..=args.max_exp).flat_map(|e| (0..args.trials).map(move |t| (e, t))).collect();
    // each trial draws from its own stream; results come back in (n, trial) order
    let results: Vec<CliResult<[f64; 6]>> = jobs
        .par_iter()
        .map(|&(e, t)| {
            let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
            rng.set_stream((u64::from(e) << 32) | t as u64);
            let n = 1usize << e;
            let s: Vec<u8> = (0..n).map(|_| rng.random_range(0..args.alphabet) as u8).collect();
            let trial_seed: u64 = rng.random();
            let mut ledger = Ledger::new(model);
            match (args.problem, args.algo) {
                (Problem::Solve, Algo::Dnc) => {
                    lmsr_function(&s, &params, &mut ledger, trial_seed)?;
                }
                (Problem::Decide, Algo::Dnc) => {
                    let k = rng.random_range(0..n);
                    lmsr_decision(&s, k, &mut ledger)?;
                }
                (_, Algo::Booth) => {
                    lmsr_booth(&s);
                }
                (_, Algo::Brute) => {
                    lmsr_brute(&s)?;
                }
            }
            Ok(ledger.snapshot().values())
        })
        .collect();

    let mut table = Table::new(&["n", "trials", "grover", "minfind", "ds_build", "ds_match", "base", "total", "bound", "ratio"]);
    let mut rows_json = Vec::new();
    let mut samples = Vec::new();
    for (i, e) in (args.min_exp..=args.max_exp).enumerate() {
        let chunk = &results[i * args.trials..(i + 1) * args.trials];
        let mut mean = [0.0f64; 6];
        for r in chunk {
            let values = match r {
                Ok(v) => v,
                Err(CliError::Usage(m)) => return Err(CliError::Usage(m.clone())),
                Err(CliError::Io(m)) => return Err(CliError::Io(m.clone())),
            };
            for (m, v) in mean.iter_mut().zip(values) {
                *m += v / args.trials as f64;
            }
        }
        let n = (1u64 << e) as f64;
        let bound = scaling_bound(args.problem, n);
        let ratio = mean[5] / bound;
        samples.push((n, mean[5]));
        let mut row = vec![(1u64 << e).to_string(), args.trials.to_string()];
        row.extend(mean.iter().map(|&v| fmt_float(v)));
        row.push(fmt_float(bound));
        row.push(fmt_float(ratio));
        table.push(row);
        rows_json.push(json!({
            "n": 1u64 << e, "trials": args.trials,
            "grover": mean[0], "minfind": mean[1], "ds_build": mean[2], "ds_match": mean[3], "base": mean[4],
            "total": mean[5], "bound": bound, "ratio": ratio,
        }));
    }
    let fit = if samples.len() >= 5 && samples.iter().all(|&(_, q)| q > 0.0) {
        fit_scaling(&samples).ok().map(|f| json!(f))
    } else {
        None
    };
    let problem = match args.problem {
        Problem::Solve => "solve",
        Problem::Decide => "decide",
    };
    let config = object(vec![
        ("command", json!("bench scaling")),
        ("algo", json!(algo_name(args.algo))),
        ("problem", json!(problem)),
        ("min_exp", json!(args.min_exp)),
        ("max_exp", json!(args.max_exp)),
        ("trials", json!(args.trials)),
        ("alphabet", json!(args.alphabet)),
        ("cost", cost_json(&args.cost)),
        ("params", params_json(&args.params)),
        ("seed", json!(args.seed)),
        ("output", output_json(&args.output)),
    ]);
    let json = object(vec![("rows", Value::Array(rows_json)), ("fit", json!(fit)), ("seed", json!(args.seed)), ("config", config)]);
    Ok(Report { json, plain: None, table })
}

fn series_report(command: &str, extra: Vec<(&str, Value)>, points: Vec<(f64, f64, f64)>, seed: u64, output: &OutputArgs) -> Report {
    let mut table = Table::new(&["n", "value", "bound", "ratio"]);
    let mut rows = Vec::new();
    for (n, value, bound) in points {
        let ratio = value / bound;
        table.push(vec![fmt_float(n), fmt_float(value), fmt_float(bound), fmt_float(ratio)]);
        rows.push(json!({"n": n, "value": value, "bound": bound, "ratio": ratio}));
    }
    let mut config = vec![("command", json!(command))];
    config.extend(extra);
    config.push(("seed", json!(seed)));
    config.push(("output", output_json(output)));
    let json = object(vec![("rows", Value::Array(rows)), ("seed", json!(seed)), ("config", object(config))]);
    Report { json, plain: None, table }
}

pub fn recur_master(args: &MasterArgs) -> CliResult<Report> {
    let class = master_solve(args.a, args.b, args.c, args.p)?;
    let config = object(vec![
        ("command", json!("recur master")),
        ("a", json!(args.a)),
        ("b", json!(args.b)),
        ("c", json!(args.c)),
        ("p", json!(args.p)),
        ("seed", json!(args.seed)),
        ("output", output_json(&args.output)),
    ]);
    let json = object(vec![
        ("class", json!(class)),
        ("bound", json!(class.to_string())),
        ("seed", json!(args.seed)),
        ("config", config),
    ]);
    let mut table = Table::new(&["a", "b", "c", "p", "bound"]);
    table.push(vec![fmt_float(args.a), fmt_float(args.b), fmt_float(args.c), fmt_float(args.p), class.to_string()]);
    Ok(Report { json, plain: Some(format!("{class}\n")), table })
}

pub fn recur_function(args: &FunctionArgs) -> CliResult<Report> {
    check_range(args.min_exp, args.max_exp, 48)?;
    let mut points = Vec::new();
    for k in args.min_exp..=args.max_exp {
        let value = iterate_function_recurrence(args.c, args.d, args.n0, k)?;
        let n = 2f64.powi(k as i32);
        // target envelope sqrt(n) 2^(2d sqrt(log2 n))
        let bound = n.sqrt() * 2f64.powf(2.0 * args.d * f64::from(k).sqrt());
        points.push((n, value, bound));
    }
    let extra = vec![
        ("c", json!(args.c)),
        ("d", json!(args.d)),
        ("n0", json!(args.n0)),
        ("min_exp", json!(args.min_exp)),
        ("max_exp", json!(args.max_exp)),
    ];
    Ok(series_report("recur function", extra, points, args.seed, &args.output))
}

pub fn recur_decision(args: &DecisionArgs) -> CliResult<Report> {
    check_range(args.min_exp, args.max_exp, 60)?;
    let (kind, name) = match args.kind {
        DecisionKindArg::Plain => (DecisionKind::Plain, "plain"),
        DecisionKindArg::Preprocessed => (DecisionKind::Preprocessed, "preprocessed"),
    };
    let points = (args.min_exp..=args.max_exp)
        .map(|k| {
            let n = 2f64.powi(k as i32);
            (n, iterate_decision_recurrence::<f64>(kind, k), kind.expected(n))
        })
        .collect();
    let extra = vec![("kind", json!(name)), ("min_exp", json!(args.min_exp)), ("max_exp", json!(args.max_exp))];
    Ok(series_report("recur decision", extra, points, args.seed, &args.output))
}

/// Parses `2^LO..2^HI` (or `LO..HI` as exponents) into powers of two.
fn parse_grid(spec: &str) -> CliResult<Vec<f64>> {
    let bad = || CliError::Usage(format!("grid must look like 2^20..2^40, got {spec:?}"));
    let (lo, hi) = spec.split_once("..").ok_or_else(bad)?;
    let exp = |part: &str| -> CliResult<i32> {
        let part = part.trim();
        part.strip_prefix("2^").unwrap_or(part).parse::<i32>().map_err(|_| bad())
    };
    let (lo, hi) = (exp(lo)?, exp(hi)?);
    if lo < 1 || lo > hi || hi > 1000 {
        return Err(bad());
    }
    Ok((lo..=hi).map(|k| 2f64.powi(k)).collect())
}

pub fn recur_limit(args: &LimitArgs) -> CliResult<Report> {
    if !(args.c > 1.0) {
        return Err(CliError::Usage("c must exceed 1".into()));
    }
    let d = args.d.unwrap_or(2.0 * args.c.log2().sqrt());
    let grid = parse_grid(&args.grid)?;
    let ratios = verify_limit(args.c, d, &grid)?;
    let target = limit_value(d);
    let threshold = limit_threshold(args.c, &grid, &ratios);
    let points: Vec<(f64, f64, f64)> = grid.iter().zip(&ratios).map(|(&n, &r)| (n, r, target)).collect();
    let mut report = series_report(
        "recur limit",
        vec![("c", json!(args.c)), ("d", json!(d)), ("grid", json!(args.grid))],
        points,
        args.seed,
        &args.output,
    );
    if let Value::Object(map) = &mut report.json {
        map.insert("limit".into(), json!(target));
        map.insert("final_ratio".into(), json!(ratios.last()));
        map.insert("threshold".into(), json!(threshold));
    }
    Ok(report)
}

pub fn recur_fit(args: &FitArgs) -> CliResult<Report> {
    let bytes = read_file(&args.input)?;
    let mut reader = csv::Reader::from_reader(bytes.as_slice());
    let header = reader.headers().map_err(|e| CliError::Usage(format!("bad CSV: {e}")))?.clone();
    let column = |name: &str, fallback: usize| header.iter().position(|h| h.trim() == name).unwrap_or(fallback);
    let (n_col, q_col) = (column("n", 0), column("total", 1));
    let mut samples = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| CliError::Usage(format!("bad CSV: {e}")))?;
        let field = |i: usize| -> CliResult<f64> {
            record
                .get(i)
                .and_then(|v| v.trim().parse::<f64>().ok())
                .ok_or_else(|| CliError::Usage(format!("non-numeric CSV field in column {i}")))
        };
        samples.push((field(n_col)?, field(q_col)?));
    }
    let fit = fit_scaling(&samples)?;
    let config = object(vec![
        ("command", json!("recur fit")),
        ("input", json!(args.input.display().to_string())),
        ("samples", json!(samples.len())),
        ("seed", json!(args.seed)),
        ("output", output_json(&args.output)),
    ]);
    let json = object(vec![
        ("slope", json!(fit.slope)),
        ("intercept", json!(fit.intercept)),
        ("r_squared", json!(fit.r_squared)),
        ("residual_max", json!(fit.residual_max)),
        ("seed", json!(args.seed)),
        ("config", config),
    ]);
    let mut table = Table::new(&["slope", "intercept", "r_squared", "residual_max"]);
    table.push(vec![fmt_float(fit.slope), fmt_float(fit.intercept), fmt_float(fit.r_squared), fmt_float(fit.residual_max)]);
    let plain = format!(
        "slope = {}\nintercept = {}\nr_squared = {}\nresidual_max = {}\n",
        fit.slope, fit.intercept, fit.r_squared, fit.residual_max
    );
    Ok(Report { json, plain: Some(plain), table })
}
