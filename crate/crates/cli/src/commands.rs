use std::path::PathBuf;

use blocknorm::blockpos::{intro_equality_example, sample_random, witness_modulus, BlockPositive, SampleKind};
use blocknorm::ellwidth::{delta2_estimate, delta2_upper_bound, Delta2Options};
use blocknorm::explore::{
    scan_q38, search_conj33_with, search_q26_with, Checkpoint, Q38Table, SearchBudget, SearchResult, Q38_SCHEMA,
    SEARCH_SCHEMA,
};
use blocknorm::linalg::{normality_defect, SchattenP};
use blocknorm::numrange::{dist_to_scalars, range_summary};
use blocknorm::rng::{haar_unitary, rng_from_seed, stream_seed};
use blocknorm::tolerance::{install, tolerances};
use blocknorm::verify::{
    batch_verify, cor37_report, prop39_report, verify_prop34, BatchConfig, BatchResult, BlockInstance, MarginReport,
    StatementId, REPORT_SCHEMA,
};
use blocknorm::{ComplexMatrix, C64};
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::RunConfig;
use crate::error::CliError;
use crate::output::{read_json, read_value, write_text, Ctx, Output};
use crate::{
    Cli, Command, MakeArgs, RangeArgs, ReportArgs, SearchArgs, VerifyArgs, Width2Args, EXIT_OK, EXIT_VIOLATION,
};

pub const RANGE_SCHEMA: &str = "rangesummary/1";
pub const WIDTH2_SCHEMA: &str = "width2/1";

pub fn dispatch(cli: Cli, argv: Vec<String>) -> Result<i32, CliError> {
    let config = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if install(config.tolerances).is_err() && *tolerances() != config.tolerances {
        return Err(CliError::Config("tolerances were already installed".into()));
    }
    let ctx = Ctx { config, argv };
    match cli.command {
        Command::Range(a) => range(&ctx, a),
        Command::Width2(a) => width2(&ctx, a),
        Command::Make(a) => make(&ctx, a),
        Command::Verify(a) => verify(&ctx, a),
        Command::Search(a) => search(&ctx, a),
        Command::Report(a) => report(&ctx, a),
    }
}

fn outs(out: Option<PathBuf>) -> Vec<PathBuf> {
    out.into_iter().collect()
}

fn parse_p_grid(ctx: &Ctx, raw: &[String]) -> Result<Vec<SchattenP>, CliError> {
    if raw.is_empty() {
        return Ok(ctx.config.p_grid.clone());
    }
    raw.iter()
        .map(|s| s.parse::<SchattenP>().map_err(CliError::from))
        .collect()
}

fn parse_complex(s: &str) -> Result<C64, CliError> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |t: &str| {
        t.parse::<f64>()
            .map_err(|_| CliError::Usage(format!("bad number {t:?} in {s:?}")))
    };
    match parts.as_slice() {
        [re] => Ok(C64::new(num(re)?, 0.0)),
        [re, im] => Ok(C64::new(num(re)?, num(im)?)),
        _ => Err(CliError::Usage(format!("expected re,im, got {s:?}"))),
    }
}

#[derive(Serialize)]
struct RangeOutput {
    schema: &'static str,
    summary: blocknorm::numrange::RangeSummary,
    dist_to_scalars: blocknorm::numrange::ScalarDistance,
}

fn range(ctx: &Ctx, a: RangeArgs) -> Result<i32, CliError> {
    let x = read_json::<ComplexMatrix>(&a.input)?;
    let grid = a.grid.unwrap_or(ctx.config.theta_grid);
    let s = range_summary(&x.value, grid)?;
    let out = RangeOutput {
        schema: RANGE_SCHEMA,
        dist_to_scalars: dist_to_scalars(&x.value)?,
        summary: s.clone(),
    };
    let csv = s.boundary_csv();
    ctx.emit(&outs(a.out), Output::new(&out).with_csv(csv).with_input(&x.digest))?;
    Ok(EXIT_OK)
}

fn width2(ctx: &Ctx, a: Width2Args) -> Result<i32, CliError> {
    let x = read_json::<ComplexMatrix>(&a.input)?;
    let seed = a.seed.unwrap_or(ctx.config.seed);
    let est = delta2_estimate(&x.value, a.restarts, seed)?;
    let upper = delta2_upper_bound(&x.value)?;
    let mut csv = String::from("name,family,target,value,delta2_bound\n");
    for c in &est.certificates {
        csv.push_str(&format!(
            "\"{}\",{},{},{},{}\n",
            c.name,
            c.family,
            serde_json::to_value(c.target)
                .expect("target serializes")
                .as_str()
                .unwrap_or(""),
            c.value,
            c.delta2_bound()
        ));
    }
    let doc = json!({
        "schema": WIDTH2_SCHEMA,
        "estimate": est,
        "max_certificate": est.max_certificate_bound(),
        "upper_bound": upper,
    });
    ctx.emit(
        &outs(a.out),
        Output::new(&doc).with_csv(csv).with_seed(seed).with_input(&x.digest),
    )?;
    Ok(EXIT_OK)
}

fn make(ctx: &Ctx, a: MakeArgs) -> Result<i32, CliError> {
    let seed = a.seed.unwrap_or(ctx.config.seed);
    let mut out_meta = Vec::new();
    let bp = match a.kind.as_str() {
        "intro" => intro_equality_example(a.a, a.b)?,
        "modulus" => {
            let path = a
                .input
                .as_ref()
                .ok_or_else(|| CliError::Usage("--kind modulus needs --in X.json".into()))?;
            let x = read_json::<ComplexMatrix>(path)?;
            out_meta.push(x.digest);
            witness_modulus(&x.value)?
        }
        name => {
            let center = parse_complex(&a.center)?;
            sample_random(a.n, SampleKind::from_name(name, a.radius, center)?, seed)?
        }
    };
    let mut out = Output::new(&bp).with_seed(seed);
    for d in &out_meta {
        out = out.with_input(d);
    }
    ctx.emit(&outs(a.out), out)?;
    Ok(EXIT_OK)
}

const BATCH_DEFAULT: [StatementId; 11] = [
    StatementId::Thm11,
    StatementId::RevBl2,
    StatementId::Thm21,
    StatementId::Cor22,
    StatementId::Cor23,
    StatementId::Cor24,
    StatementId::Cor35,
    StatementId::Cor36,
    StatementId::Cor37,
    StatementId::Prop34Fwd,
    StatementId::Prop39,
];

fn parse_statements(raw: &[String]) -> Result<Vec<StatementId>, CliError> {
    if raw.is_empty() {
        return Ok(BATCH_DEFAULT.to_vec());
    }
    let mut out = Vec::new();
    for s in raw {
        let id: StatementId = s.parse()?;
        if !out.contains(&id) {
            out.push(id);
        }
    }
    Ok(out)
}

fn verify(ctx: &Ctx, a: VerifyArgs) -> Result<i32, CliError> {
    let statements = parse_statements(&a.statement)?;
    let p_grid = parse_p_grid(ctx, &a.p_grid)?;
    let seed = a.seed.unwrap_or(ctx.config.seed);
    if let Some(path) = &a.input {
        let bp = read_json::<BlockPositive>(path)?;
        let reports = verify_instance(&bp.value, &statements, &p_grid, a.restarts, seed)?;
        let violations = reports.iter().filter(|r| r.is_violation()).count();
        let mut csv = format!("{}\n", MarginReport::CSV_HEADER);
        for r in &reports {
            csv.push_str(&r.csv_row());
            csv.push('\n');
        }
        let doc = json!({ "schema": REPORT_SCHEMA, "violations": violations, "reports": reports });
        ctx.emit(
            &a.out,
            Output::new(&doc).with_csv(csv).with_seed(seed).with_input(&bp.digest),
        )?;
        return Ok(if violations > 0 { EXIT_VIOLATION } else { EXIT_OK });
    }
    if a.trials == 0 || a.n.contains(&0) {
        return Err(CliError::Usage("--trials and every --n must be positive".into()));
    }
    let mut cfg = BatchConfig::new(statements, a.n, a.trials, seed);
    cfg.p_grid = p_grid;
    cfg.delta2_restarts = a.restarts.max(1);
    let res = batch_verify(&cfg);
    print_batch(&res);
    ctx.emit(&a.out, Output::new(&res).with_csv(res.to_csv()).with_seed(seed))?;
    Ok(if res.total_violations() > 0 {
        EXIT_VIOLATION
    } else {
        EXIT_OK
    })
}

/// Block-level statements on one instance. COR24 is skipped for non-normal
/// off-diagonal blocks unless it was asked for explicitly.
fn verify_instance(
    bp: &BlockPositive,
    statements: &[StatementId],
    p_grid: &[SchattenP],
    restarts: usize,
    seed: u64,
) -> Result<Vec<MarginReport>, CliError> {
    use StatementId::*;
    let wants = |id| statements.contains(&id);
    let inst = BlockInstance::new(bp, seed)?;
    let x = bp.x_block();
    let n = bp.n();
    let mut out = Vec::new();
    for &p in p_grid {
        if wants(Thm11) {
            out.push(inst.thm11(p)?);
        }
        if wants(RevBl2) {
            out.push(inst.reverse(p)?);
        }
    }
    let hat = if n >= 2 && (wants(Thm21) || wants(Prop39) || wants(Cor36)) {
        Some(blocknorm::ellwidth::delta2_estimate_with(x, &Delta2Options::new(restarts.max(1), seed))?.value)
    } else {
        None
    };
    if wants(Thm21) {
        out.extend(inst.thm21(hat)?);
    }
    if wants(Thm21) || wants(Thm21Refined) {
        out.push(inst.thm21_refined());
    }
    if wants(Cor22) {
        out.extend(inst.cor22()?);
    }
    if wants(Cor24) {
        let explicit = statements.len() == 1;
        if explicit || normality_defect(x)? <= tolerances().normality {
            out.extend(inst.cor24(None)?);
        }
    }
    if let Some(hat) = hat {
        if wants(Prop39) {
            out.push(prop39_report(x, hat, seed)?);
        }
        if wants(Cor36) {
            for alpha in blocknorm::ellwidth::default_alpha_grid() {
                let pair = blocknorm::blockpos::FunctionPair::power(alpha)?;
                out.push(blocknorm::verify::cor36_report(x, pair, hat, seed)?);
            }
        }
    }
    if wants(Cor37) {
        let s = range_summary(x, blocknorm::numrange::DEFAULT_GRID)?;
        for a in blocknorm::ellwidth::default_a_grid(x)? {
            out.push(cor37_report(x, a, s.inradius, seed)?);
        }
    }
    if wants(Prop34Fwd) || wants(Prop34Wit) {
        let o = verify_prop34(x, seed)?;
        out.extend(o.forward);
        out.extend(o.witness);
    }
    Ok(out)
}

fn print_batch(res: &BatchResult) {
    eprintln!(
        "{:<14} {:>7} {:>7} {:>10} {:>12} {:>7}",
        "statement", "reports", "sound", "violations", "worst", "tight"
    );
    for s in &res.summaries {
        let worst = s
            .worst
            .as_ref()
            .map_or(String::from("-"), |w| format!("{:.3e}", w.slack));
        eprintln!(
            "{:<14} {:>7} {:>7} {:>10} {:>12} {:>7}",
            s.statement_id.name(),
            s.count,
            s.sound_count,
            s.violations,
            worst,
            s.tight_count
        );
    }
}

fn search(ctx: &Ctx, a: SearchArgs) -> Result<i32, CliError> {
    let seed = a.seed.unwrap_or(ctx.config.seed);
    if a.target == "q38" {
        let grid = parse_p_grid(ctx, &a.p_grid)?;
        let table = scan_q38(&grid, a.n, a.trials, seed)?;
        for row in &table.rows {
            eprintln!(
                "p={:<5} max_ratio={:.12} excess={}",
                row.p.to_string(),
                row.max_ratio,
                row.witnesses.len()
            );
        }
        let csv = table.to_csv();
        ctx.emit(&outs(a.out), Output::new(&table).with_csv(csv).with_seed(seed))?;
        return Ok(EXIT_OK);
    }
    let mut budget = SearchBudget::new(a.restarts, a.iters, seed, a.n);
    budget.time_limit_s = a.time_limit;
    let checkpoint_path = a
        .checkpoint
        .clone()
        .or_else(|| a.out.as_ref().map(|o| ctx.resolve(o).with_extension("checkpoint.json")));
    let checkpoint = checkpoint_path.map(Checkpoint::new);
    let mut digests = Vec::new();
    let result = match a.target.as_str() {
        "q26" => search_q26_with(a.r, a.j, &budget, checkpoint.as_ref())?,
        "conj33" => {
            let x = match &a.input {
                Some(path) => {
                    let x = read_json::<ComplexMatrix>(path)?;
                    digests.push(x.digest);
                    x.value
                }
                None => haar_unitary(a.n, &mut rng_from_seed(stream_seed(seed, "cli/conj33"))),
            };
            budget.n = x.rows();
            search_conj33_with(&x, &budget, checkpoint.as_ref())?
        }
        other => {
            return Err(CliError::Usage(format!(
                "unknown target {other:?}; use q26, conj33 or q38"
            )))
        }
    };
    eprintln!(
        "{}: best {:.12} after {} restarts ({:?})",
        result.objective_name, result.best_value, result.restarts_completed, result.witness.params
    );
    if let Some(h) = &a.history {
        write_text(&ctx.resolve(h), &result.history_csv())?;
    }
    let mut out = Output::new(&result).with_csv(result.history_csv()).with_seed(seed);
    for d in &digests {
        out = out.with_input(d);
    }
    ctx.emit(&outs(a.out), out)?;
    Ok(EXIT_OK)
}

fn report(ctx: &Ctx, a: ReportArgs) -> Result<i32, CliError> {
    let input = read_value(&a.input)?;
    let v = input.value;
    let schema = v.get("schema").and_then(Value::as_str).unwrap_or("").to_string();
    let csv = match schema.as_str() {
        s if s == REPORT_SCHEMA && v.get("summaries").is_some() => report_batch(&v)?,
        s if s == REPORT_SCHEMA => report_reports(&v),
        s if s == SEARCH_SCHEMA => report_search(v)?,
        s if s == Q38_SCHEMA => {
            let table: Q38Table = from_value(v)?;
            for row in &table.rows {
                println!(
                    "p={:<5} max_ratio={:.12} argmax_trial={} excess={}",
                    row.p.to_string(),
                    row.max_ratio,
                    row.argmax_trial,
                    row.witnesses.len()
                );
            }
            table.to_csv()
        }
        s if s == RANGE_SCHEMA => {
            let summary = &v["summary"];
            for key in ["width", "inradius", "indiameter", "dist_zero"] {
                println!("{key}: {}", summary[key]);
            }
            println!("dist_to_scalars: {}", v["dist_to_scalars"]["dist"]);
            String::new()
        }
        other => return Err(CliError::Usage(format!("don't know how to report schema {other:?}"))),
    };
    if let Some(out) = &a.out {
        write_text(&ctx.resolve(out), &csv)?;
    }
    Ok(EXIT_OK)
}

fn from_value<T: serde::de::DeserializeOwned>(v: Value) -> Result<T, CliError> {
    serde_json::from_value(v).map_err(|e| CliError::Json(e.to_string()))
}

fn report_batch(v: &Value) -> Result<String, CliError> {
    let summaries: Vec<blocknorm::verify::StatementSummary> = from_value(v["summaries"].clone())?;
    let mut csv = String::from("statement,reports,sound,violations,worst_slack,tight,skipped\n");
    for s in &summaries {
        let worst = s.worst.as_ref().map_or(String::new(), |w| w.slack.to_string());
        println!(
            "{:<14} reports={:<6} sound={:<6} violations={:<4} worst={:<24} tight={}",
            s.statement_id.name(),
            s.count,
            s.sound_count,
            s.violations,
            worst,
            s.tight_count
        );
        csv.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            s.statement_id, s.count, s.sound_count, s.violations, worst, s.tight_count, s.skipped
        ));
    }
    Ok(csv)
}

fn report_reports(v: &Value) -> String {
    let reports: Vec<MarginReport> = serde_json::from_value(v["reports"].clone()).unwrap_or_default();
    let mut csv = format!("{}\n", MarginReport::CSV_HEADER);
    for r in &reports {
        println!("{}", r.csv_row());
        csv.push_str(&r.csv_row());
        csv.push('\n');
    }
    csv
}

fn report_search(v: Value) -> Result<String, CliError> {
    let result: SearchResult = from_value(v)?;
    let again = result.reevaluate()?;
    println!("objective: {}", result.objective_name);
    println!("best_value: {}", result.best_value);
    println!("recomputed: {again}");
    println!("params: {:?}", result.witness.params);
    println!("restarts_completed: {}", result.restarts_completed);
    if (again - result.best_value).abs() > 1e-9 {
        return Err(CliError::Usage(format!(
            "witness re-evaluates to {again}, stored best_value is {}",
            result.best_value
        )));
    }
    Ok(result.history_csv())
}
