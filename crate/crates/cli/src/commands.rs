use std::fs;
use std::path::Path;

use anyhow::{bail, ensure, Context, Result};
use awtc::channel::{enumerate_read_sets, Dmc};
use awtc::codes::{sample_pseudolinear, AnyCode, CodeHeader, Codebook, CosetCode, LinearCode, WiretapCode};
use awtc::gf2m::{syndromes_for, verify_bch_independence, Field};
use awtc::infotheory::{capacity_bounds, eb_threshold, plotkin_threshold, Pmf};
use awtc::leakage::{
    converse_attack, coset_dual_certificate, coset_leakage_lb, leakage_at, leakage_uniform, lemma1_leakage,
    ozarow_equivocation, sem_leakage, ScanMode,
};
use awtc::reliability::{error_prob, theorem2_experiment, AdversaryStrategy, StrategyKind, Theorem2Params};
use awtc::seed::derive_seed;
use awtc::softcover::{
    atypical_probability, divergence_tail_experiment, fit_decay_exponent, CodebookFamily, TailParams,
};
use awtc::BitMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::output::{csv_body, emit, json_body};
use crate::{
    AttackArgs, Command, CosetArgs, Family, Fig1Args, KwiseArgs, LeakageArgs, Mode, RandomCodeArgs,
    ReliabilityArgs, SoftcoverArgs, Theorem2Args,
};

pub fn run(cmd: &Command) -> Result<()> {
    match cmd {
        Command::Fig1Data(a) => fig1(cmd, a),
        Command::LeakageExact(a) => leakage_exact(cmd, a),
        Command::AttackLinear(a) => attack_linear(cmd, a),
        Command::CosetAttack(a) => coset_attack(cmd, a),
        Command::KwiseCheck(a) => kwise_check(cmd, a),
        Command::SoftcoverRun(a) => softcover(cmd, a),
        Command::ReliabilitySim(a) => reliability(cmd, a),
        Command::Theorem2Run(a) => theorem2(cmd, a),
    }
}

fn rng_for(seed: u64, tag: &str) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(seed, tag, 0))
}

fn load_code(path: &Path) -> Result<(AnyCode, CodeHeader)> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    AnyCode::from_file_text(&text).with_context(|| format!("parsing code file {}", path.display()))
}

fn bundled_code() -> AnyCode {
    let gm = BitMatrix::from_bits(&[&[1, 0, 0]]).expect("valid rows");
    let gw = BitMatrix::from_bits(&[&[0, 1, 1]]).expect("valid rows");
    AnyCode::Linear(LinearCode::new(gm, gw).expect("matching widths"))
}

fn check_budget(name: &str, value: usize, n: usize) -> Result<()> {
    ensure!(value <= n, "{name} = {value} exceeds blocklength n = {n}");
    Ok(())
}

fn scan_mode(mode: Mode, sets: usize, seed: u64, tag: &str) -> ScanMode {
    match mode {
        Mode::Exhaustive => ScanMode::Exhaustive,
        Mode::Sampled => ScanMode::Sampled {
            sets,
            seed: derive_seed(seed, tag, 0),
        },
    }
}

fn parse_channel(spec: &str) -> Result<Dmc> {
    if let Some(p) = spec.strip_prefix("bsc:") {
        let p: f64 = p.parse().with_context(|| format!("bad crossover probability in '{spec}'"))?;
        return Ok(Dmc::bsc(p)?);
    }
    if let Some(path) = spec.strip_prefix("file:") {
        let text = fs::read_to_string(path).with_context(|| format!("reading channel file {path}"))?;
        return Ok(Dmc::from_text(&text)?);
    }
    bail!("channel spec '{spec}' must be bsc:<p> or file:<path>")
}

fn parse_strategies(names: &[String]) -> Result<Vec<StrategyKind>> {
    ensure!(!names.is_empty(), "at least one strategy is required");
    names.iter().map(|s| Ok(s.trim().parse::<StrategyKind>()?)).collect()
}

#[derive(Serialize)]
struct Fig1Row {
    r: f64,
    lower: f64,
    upper: f64,
    plotkin_threshold: f64,
    eb_threshold: f64,
}

fn fig1(cmd: &Command, a: &Fig1Args) -> Result<()> {
    ensure!(a.points >= 2, "--points must be at least 2");
    let rows = (0..a.points)
        .map(|i| {
            let r = i as f64 / (a.points - 1) as f64;
            let b = capacity_bounds(a.p, r)?;
            Ok(Fig1Row {
                r,
                lower: b.lower,
                upper: b.upper,
                plotkin_threshold: plotkin_threshold(r),
                eb_threshold: eb_threshold(r)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let max_gap = rows.iter().map(|r| r.upper - r.lower).fold(0.0, f64::max);
    emit(a.out.out.as_deref(), &csv_body(&rows)?, cmd, json!({ "max_gap": max_gap }))
}

#[derive(Serialize)]
struct ReadSetRow {
    read_set: Vec<usize>,
    uniform_mi: f64,
    capacity_mi: f64,
}

fn leakage_exact(cmd: &Command, a: &LeakageArgs) -> Result<()> {
    let (code, header) = match &a.code {
        Some(p) => load_code(p)?,
        None => {
            let c = bundled_code();
            let h = c.header(None);
            (c, h)
        }
    };
    let cb = code.as_dyn().codebook()?;
    check_budget("rn", a.rn, cb.n())?;
    let mode = scan_mode(a.scan.mode, a.scan.sets, a.seed, "leakage-exact/readsets");
    let sem = sem_leakage(&cb, a.rn, mode)?;
    let per_set = if a.scan.mode == Mode::Exhaustive {
        enumerate_read_sets(cb.n(), a.rn)
            .map(|s| {
                let r = leakage_at(&cb, &s)?;
                Ok(ReadSetRow {
                    read_set: s.one_based(),
                    uniform_mi: r.uniform_mi,
                    capacity_mi: r.capacity_mi,
                })
            })
            .collect::<Result<Vec<_>>>()?
    } else {
        Vec::new()
    };
    let body = json!({
        "config": cmd,
        "code": code_json(&code, &header),
        "sem_leakage": sem,
        "read_sets": per_set,
    });
    emit(a.out.out.as_deref(), &json_body(&body)?, cmd, json!({ "sem": sem.best.capacity_mi }))
}

fn code_json(code: &AnyCode, header: &CodeHeader) -> Value {
    json!({ "header": header, "file": code.to_file_text(header.seed) })
}

fn random_code_dims(a: &RandomCodeArgs, need_wbits: bool) -> Result<(usize, usize, usize)> {
    let (Some(n), Some(mbits)) = (a.n, a.mbits) else {
        bail!("either --code or both --n and --mbits are required");
    };
    let wbits = match (a.wbits, need_wbits) {
        (Some(w), _) => w,
        (None, false) => 0,
        (None, true) => bail!("--wbits is required for a random linear code"),
    };
    Ok((n, mbits, wbits))
}

fn attack_linear(cmd: &Command, a: &AttackArgs) -> Result<()> {
    let (code, header) = match &a.code.code {
        Some(p) => load_code(p)?,
        None => {
            let (n, mbits, wbits) = random_code_dims(&a.code, true)?;
            let mut rng = rng_for(a.code.seed, "attack-linear/code");
            let c = AnyCode::Linear(LinearCode::random_full_rank(n, mbits, wbits, &mut rng)?);
            let h = c.header(Some(a.code.seed));
            (c, h)
        }
    };
    let AnyCode::Linear(lin) = &code else {
        bail!("attack-linear needs a linear code, got {:?}", header.kind);
    };
    check_budget("rn", a.rn, lin.n())?;
    let report = converse_attack(lin, a.rn)?;
    let rank_formula = lemma1_leakage(lin, &report.read_set)?;
    // exact mutual information when the codebook can be enumerated
    let exact = lin
        .codebook()
        .and_then(|cb| leakage_uniform(&cb, &report.read_set))
        .ok();
    let body = json!({
        "config": cmd,
        "code": code_json(&code, &header),
        "attack": report,
        "rank_formula_leakage": rank_formula,
        "exact_uniform_leakage": exact,
    });
    emit(a.out.out.as_deref(), &json_body(&body)?, cmd, json!({ "leakage": report.leakage }))
}

fn coset_attack(cmd: &Command, a: &CosetArgs) -> Result<()> {
    let (code, header) = match &a.code.code {
        Some(p) => load_code(p)?,
        None => {
            let (n, mbits, _) = random_code_dims(&a.code, false)?;
            let mut rng = rng_for(a.code.seed, "coset-attack/code");
            let c = AnyCode::Coset(CosetCode::random(n, mbits, &mut rng)?);
            let h = c.header(Some(a.code.seed));
            (c, h)
        }
    };
    let AnyCode::Coset(coset) = &code else {
        bail!("coset-attack needs a coset code, got {:?}", header.kind);
    };
    check_budget("rn", a.rn, coset.n())?;
    let eq = ozarow_equivocation(coset.parity_check(), a.rn)?;
    let lb = coset_leakage_lb(coset, a.rn)?;
    let cert = coset_dual_certificate(coset, a.rn)?;
    let body = json!({
        "config": cmd,
        "code": code_json(&code, &header),
        "equivocation": eq,
        "leakage_lower_bound": lb,
        "dual_certificate": cert,
    });
    emit(a.out.out.as_deref(), &json_body(&body)?, cmd, json!({ "delta": eq.delta, "leakage_lower_bound": lb }))
}

fn kwise_check(cmd: &Command, a: &KwiseArgs) -> Result<()> {
    ensure!(a.k >= 1, "--k must be at least 1");
    let field = Field::new(a.b as u32)?;
    let t = syndromes_for(a.k);
    let witness = verify_bch_independence(&field, t)?;
    let tuples = a.n.map(|n| awtc::codes::exhaustive_kwise_check(a.b, a.k, n)).transpose()?;
    let body = json!({
        "config": cmd,
        "primitive_poly": field.primitive_poly(),
        "t": t,
        "bch_columns_independent": witness.is_none(),
        "dependency_witness": witness,
        "tuple_check": tuples,
    });
    let summary = json!({
        "bch_columns_independent": witness.is_none(),
        "tuples_uniform": tuples.as_ref().map(|r| r.uniform()),
    });
    emit(a.out.out.as_deref(), &json_body(&body)?, cmd, summary)
}

#[derive(Serialize)]
struct SoftcoverRow {
    n: usize,
    keybits: usize,
    trial: usize,
    seed: u64,
    divergence: f64,
    p2_mass: f64,
    delta1_max: f64,
    lemma4_holds: bool,
}

fn softcover(cmd: &Command, a: &SoftcoverArgs) -> Result<()> {
    ensure!(!a.n.is_empty(), "--n needs at least one blocklength");
    ensure!(a.trials >= 1, "--trials must be at least 1");
    let channel = parse_channel(&a.channel)?;
    let input = Pmf::uniform(channel.in_size());
    let family = match a.family {
        Family::Kwise => {
            ensure!(
                a.k >= 4 && a.k.is_multiple_of(2),
                "k-wise tail experiments need an even k ≥ 4, got {}",
                a.k
            );
            CodebookFamily::Kwise { k: a.k }
        }
        Family::Iid => CodebookFamily::Iid,
    };
    let mut rows = Vec::new();
    let mut per_n = Vec::new();
    for &n in &a.n {
        ensure!(n >= 1, "blocklengths must be positive");
        let keybits = a.keybits.unwrap_or_else(|| (a.key_rate * n as f64).round() as usize);
        let params = TailParams {
            n,
            keybits,
            family,
            channel: channel.clone(),
            input: input.clone(),
            threshold: a.threshold,
            eps: a.eps,
        };
        let res = divergence_tail_experiment(&params, a.trials, a.seed)?;
        for r in &res.records {
            rows.push(SoftcoverRow {
                n,
                keybits,
                trial: r.trial,
                seed: r.seed,
                divergence: r.divergence,
                p2_mass: r.p2_mass,
                delta1_max: r.delta1_max,
                lemma4_holds: r.lemma4_holds,
            });
        }
        per_n.push(json!({
            "n": n,
            "keybits": keybits,
            "mean": res.mean,
            "std_err": res.std_err,
            "fraction_above": res.fraction_above,
            "expected_p2_mass": atypical_probability(&input, &channel, n, a.eps)?,
        }));
    }
    let means: Vec<f64> = per_n.iter().map(|v| v["mean"].as_f64().unwrap_or(0.0)).collect();
    let summary = json!({
        "per_n": per_n,
        "empirical_decay_exponent": fit_decay_exponent(&a.n, &means),
    });
    emit(a.out.out.as_deref(), &csv_body(&rows)?, cmd, summary)
}

#[derive(Serialize)]
struct ReliabilityRow {
    sample: usize,
    code_seed: Option<u64>,
    strategy: &'static str,
    pn: usize,
    rn: usize,
    exact: bool,
    trials: usize,
    max_error: f64,
    mean_error: f64,
}

fn reliability(cmd: &Command, a: &ReliabilityArgs) -> Result<()> {
    let strategies = parse_strategies(&a.strategy)?;
    let books: Vec<(Option<u64>, Codebook)> = match &a.code {
        Some(p) => {
            let (c, _) = load_code(p)?;
            vec![(None, c.as_dyn().codebook()?)]
        }
        None => {
            let Some(n) = a.n else {
                bail!("either --code or --n is required");
            };
            ensure!(a.codes >= 1, "--codes must be at least 1");
            (0..a.codes)
                .map(|i| {
                    let s = derive_seed(a.seed, "reliability-sim/code", i as u64);
                    Ok((Some(s), sample_pseudolinear(n, a.mbits, a.wbits, a.k, s)?.codebook()?))
                })
                .collect::<Result<_>>()?
        }
    };
    let mut rows = Vec::new();
    for (sample, (code_seed, cb)) in books.iter().enumerate() {
        check_budget("pn", a.pn, cb.n())?;
        check_budget("rn", a.rn, cb.n())?;
        for &kind in &strategies {
            let s = derive_seed(a.seed, "reliability-sim/adversary", sample as u64);
            let r = error_prob(cb, AdversaryStrategy::new(kind, a.pn, a.rn), a.trials, s)?;
            let mean = r.per_message.iter().sum::<f64>() / r.per_message.len() as f64;
            rows.push(ReliabilityRow {
                sample,
                code_seed: *code_seed,
                strategy: kind.name(),
                pn: a.pn,
                rn: a.rn,
                exact: r.exact,
                trials: r.trials,
                max_error: r.max_error,
                mean_error: mean,
            });
        }
    }
    let worst = rows.iter().map(|r| r.max_error).fold(0.0, f64::max);
    emit(a.out.out.as_deref(), &csv_body(&rows)?, cmd, json!({ "max_error": worst }))
}

#[derive(Serialize)]
struct Theorem2Row {
    k: usize,
    sample: usize,
    code_seed: u64,
    strategy: &'static str,
    leakage: f64,
    uniform_leakage: f64,
    leakage_is_lower_bound: bool,
    max_error: f64,
    secure: bool,
    reliable: bool,
}

fn theorem2(cmd: &Command, a: &Theorem2Args) -> Result<()> {
    check_budget("rn", a.rn, a.n)?;
    check_budget("pn", a.pn, a.n)?;
    ensure!(!a.k.is_empty(), "--k needs at least one value");
    let strategies = parse_strategies(&a.strategy)?;
    let mut rows = Vec::new();
    let mut per_k = Vec::new();
    for &k in &a.k {
        let params = Theorem2Params {
            n: a.n,
            mbits: a.mbits,
            wbits: a.wbits,
            k,
            pn: a.pn,
            rn: a.rn,
            codes: a.codes,
            trials: a.trials,
            seed: a.seed,
            strategies: strategies.clone(),
            scan: scan_mode(a.scan.mode, a.scan.sets, a.seed, "theorem2-run/readsets"),
            leak_threshold: a.leak_threshold,
            delta: a.delta,
        };
        let report = theorem2_experiment(&params)?;
        for s in &report.samples {
            for r in &s.reliability {
                rows.push(Theorem2Row {
                    k,
                    sample: s.sample,
                    code_seed: s.code_seed,
                    strategy: r.strategy.kind.name(),
                    leakage: s.leakage,
                    uniform_leakage: s.uniform_leakage,
                    leakage_is_lower_bound: s.leakage_is_lower_bound,
                    max_error: r.max_error,
                    secure: s.secure,
                    reliable: s.reliable,
                });
            }
        }
        per_k.push(json!({ "k": k, "joint_success": report.joint_success }));
    }
    emit(a.out.out.as_deref(), &csv_body(&rows)?, cmd, json!({ "per_k": per_k }))
}
