//! One function per subcommand, each a pure function of its config.

use num_rational::Ratio;
use num_traits::Signed;
use serde_json::{json, Value};

use shifted_subset::bits;
use shifted_subset::bounds::{
    closest_pair, copies_bound, copies_bound_from_trace, hy_lower_bound, sphere_distance_survey,
    trace_distance_cube,
};
use shifted_subset::distributions::{
    center_gap_even, center_lower_bound_holds, center_r0_bound_holds, closed_form_middle_probs,
    flank_gap_even, flank_gap_odd, middle_probs, pi_ball, pi_points, pi_sphere, pi_subset,
    WeightDistribution,
};
use shifted_subset::exact::{self, Integer, Rational};
use shifted_subset::krawtchouk::{
    kraw_ball_identity, kraw_direct, kraw_gf_coefficients, kraw_half_weight,
    kraw_recurrence_residual, kraw_table,
};
use shifted_subset::oracle::{build_instance, classical_collision_experiment, quantum_extract};
use shifted_subset::recovery::{
    estimate_size, recover_ball_radius, recover_generalised_parity, recover_junta,
    recover_parity_set, recover_radius_parity, JuntaFamily, RecoveryResult, SampleBudget,
    SphereDecoder, DEFAULT_DRAWS,
};
use shifted_subset::sampler::{
    make_shifted_state, FourierSampler, RngState, SampleStream, WeightSampler,
};
use shifted_subset::subset::{SubsetKind, SubsetSpec};
use shifted_subset::Error as CoreError;

use crate::config::{
    parse_bits, parse_rational, BoundsArgs, DistArgs, KrawArgs, OracleArgs, OracleMode, Problem,
    RecoverArgs, SampleArgs, VerifyArgs,
};
use crate::error::{LabError, LabResult};
use crate::output::{exact_cells, exact_json, Emission, Table};

/// Largest `n` for which `kraw` prints a full table.
pub const MAX_KRAW_TABLE: u32 = 1024;
/// Samples a single trial may draw before the CLI refuses the budget.
pub const MAX_TRIAL_SAMPLES: u64 = 1 << 40;
const JUNTA_DRAWS: u64 = 10;

fn usage(msg: impl Into<String>) -> LabError {
    LabError::Usage(msg.into())
}

pub fn kraw(args: &KrawArgs) -> LabResult<Emission> {
    let n = args.n;
    if let (Some(r), Some(x)) = (args.r, args.x) {
        let value = kraw_direct(n, r, x)?;
        let mut table = Table::new(&["n", "r", "x", "value"]);
        table.push(vec![
            n.to_string(),
            r.to_string(),
            x.to_string(),
            value.to_string(),
        ]);
        let mut em = Emission::new(
            json!({"n": n, "r": r, "x": x, "value": value.to_string()}),
            table,
        );
        em.plain = Some(format!("{value}\n"));
        return Ok(em);
    }
    if n > MAX_KRAW_TABLE {
        return Err(LabError::Capacity(format!(
            "Krawtchouk table for n = {n} exceeds {MAX_KRAW_TABLE}"
        )));
    }
    let t = kraw_table(n);
    let degrees: Vec<u32> = args.r.map_or_else(|| (0..=n).collect(), |r| vec![r]);
    let weights: Vec<u32> = args.x.map_or_else(|| (0..=n).collect(), |x| vec![x]);
    let mut table = Table::new(&["n", "r", "x", "value"]);
    let mut entries = Vec::new();
    for &r in &degrees {
        for &x in &weights {
            let v = t
                .get(r, x)
                .ok_or_else(|| usage(format!("need r, x <= n (r={r}, x={x})")))?;
            table.push(vec![
                n.to_string(),
                r.to_string(),
                x.to_string(),
                v.to_string(),
            ]);
            entries.push(json!({"r": r, "x": x, "value": v.to_string()}));
        }
    }
    Ok(Emission::new(json!({"n": n, "values": entries}), table))
}

fn family_name(spec: &SubsetSpec) -> &'static str {
    match spec.kind() {
        SubsetKind::Explicit(_) => "explicit",
        SubsetKind::Sphere(_) => "sphere",
        SubsetKind::Ball(_) => "ball",
        SubsetKind::Junta { .. } => "junta",
        SubsetKind::ParitySet(_) => "parity-set",
        SubsetKind::GeneralisedParity { .. } => "gen-parity",
    }
}

fn weight_law(spec: &SubsetSpec) -> LabResult<WeightDistribution> {
    Ok(match spec.kind() {
        SubsetKind::Sphere(r) => pi_sphere(spec.dimension(), *r)?,
        SubsetKind::Ball(r) => pi_ball(spec.dimension(), *r)?,
        _ => pi_subset(spec)?.weight_collapse(),
    })
}

pub fn dist(args: &DistArgs) -> LabResult<Emission> {
    let spec = args.spec.to_spec()?;
    let n = spec.dimension();
    let by_weight = match spec.kind() {
        SubsetKind::Sphere(_) | SubsetKind::Ball(_) => !args.cube,
        _ => args.weights,
    };
    let mut entries = Vec::new();
    let mut table;
    if by_weight {
        let law = weight_law(&spec)?;
        table = Table::new(&["weight", "numerator", "denominator", "decimal"]);
        for (w, q) in law.probs().iter().enumerate() {
            let [a, b, c] = exact_cells(q.numer(), q.denom());
            table.push(vec![w.to_string(), a, b, c]);
            let mut e = exact_json(q);
            e["weight"] = json!(w);
            entries.push(e);
        }
    } else {
        let law = pi_subset(&spec)?;
        table = Table::new(&["bitstring", "numerator", "denominator", "decimal"]);
        for z in 0..law.len() as u64 {
            let q = law.prob(z);
            let [a, b, c] = exact_cells(q.numer(), q.denom());
            table.push(vec![bits::format(z, n), a, b, c]);
            let mut e = exact_json(&q);
            e["bitstring"] = json!(bits::format(z, n));
            entries.push(e);
        }
    }
    Ok(Emission::new(
        json!({
            "n": n,
            "family": family_name(&spec),
            "index": if by_weight { "weight" } else { "bitstring" },
            "entries": entries,
        }),
        table,
    ))
}

pub fn sample(args: &SampleArgs, seed: u64) -> LabResult<Emission> {
    let spec = args.spec.to_spec()?;
    let n = spec.dimension();
    let shift = match (&args.shift, args.random_shift) {
        (Some(s), _) => parse_bits(s, n)?,
        (None, true) => {
            use rand::Rng;
            RngState::new(seed, 1).random_range(0..=bits::mask(n))
        }
        (None, false) => 0,
    };
    let sampler = FourierSampler::new(&make_shifted_state(&spec, shift)?);
    let mut stream = SampleStream::new(&sampler, RngState::new(seed, 0));
    let header = json!({
        "n": n,
        "shift": bits::format(shift, n),
        "rng": RngState::ALGORITHM,
        "seed": seed,
        "count": args.count,
    });
    if args.histogram {
        let hist = stream.weight_histogram(args.count);
        let mut table = Table::new(&["weight", "count"]);
        for (w, c) in hist.iter().enumerate() {
            table.push(vec![w.to_string(), c.to_string()]);
        }
        let mut json = header;
        json["histogram"] = json!(hist);
        return Ok(Emission::new(json, table));
    }
    let outcomes: Vec<String> = (0..args.count)
        .map(|_| bits::format(stream.outcome(), n))
        .collect();
    let mut table = Table::new(&["index", "outcome", "weight"]);
    for (i, o) in outcomes.iter().enumerate() {
        let w = o.chars().filter(|&c| c == '1').count();
        table.push(vec![i.to_string(), o.clone(), w.to_string()]);
    }
    let mut em = Emission::new(
        {
            let mut json = header;
            json["outcomes"] = json!(outcomes);
            json
        },
        table,
    );
    em.plain = Some(outcomes.iter().map(|o| format!("{o}\n")).collect());
    Ok(em)
}

struct Trial {
    truth: Value,
    recovered: Option<Value>,
    samples_used: u64,
    correct: bool,
}

fn settle<T>(
    truth: Value,
    outcome: Result<RecoveryResult<T>, CoreError>,
    show: impl Fn(&T) -> Value,
    is_correct: impl Fn(&T) -> bool,
) -> LabResult<Trial> {
    match outcome {
        Ok(res) => Ok(Trial {
            recovered: Some(show(&res.answer)),
            correct: is_correct(&res.answer),
            samples_used: res.samples_used,
            truth,
        }),
        Err(CoreError::Inconclusive { samples_used, .. }) => Ok(Trial {
            truth,
            recovered: None,
            samples_used,
            correct: false,
        }),
        Err(e) => Err(e.into()),
    }
}

/// `AND` on positions 1-2, `XOR` on 3-4, `OR` on 5-6.
pub fn junta_family(n: u32) -> LabResult<Vec<SubsetSpec>> {
    if n < 6 {
        return Err(usage("the junta family needs n >= 6"));
    }
    let tables = [
        [false, false, false, true],
        [false, true, true, false],
        [false, true, true, true],
    ];
    tables
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let vars = vec![2 * i as u32 + 1, 2 * i as u32 + 2];
            Ok(SubsetSpec::new(
                n,
                SubsetKind::Junta {
                    vars,
                    table: t.to_vec(),
                },
            )?)
        })
        .collect()
}

fn shifted_sampler(spec: &SubsetSpec, rng: &mut RngState) -> LabResult<FourierSampler> {
    use rand::Rng;
    let shift = rng.random_range(0..=bits::mask(spec.dimension()));
    Ok(FourierSampler::new(&make_shifted_state(spec, shift)?))
}

fn parse_multiplier(s: &str) -> LabResult<Ratio<u64>> {
    let q = parse_rational(s)?;
    let bad = || {
        usage(format!(
            "budget multiplier '{s}' must be a positive fraction"
        ))
    };
    if !q.is_positive() {
        return Err(bad());
    }
    let num = u64::try_from(q.numer()).map_err(|_| bad())?;
    let den = u64::try_from(q.denom()).map_err(|_| bad())?;
    Ok(Ratio::new(num, den))
}

pub fn recover(args: &RecoverArgs, seed: u64) -> LabResult<Emission> {
    let n = args.spec.dimension()?;
    let base = match args.problem {
        Problem::Sphere => SampleBudget::radius(n),
        Problem::Ball => SampleBudget::ball(n),
        Problem::ParityBit => SampleBudget::radius_parity(n),
        Problem::Junta => SampleBudget::draws(JUNTA_DRAWS),
        Problem::ParitySet | Problem::GenParity => SampleBudget::draws(DEFAULT_DRAWS),
        Problem::Size => SampleBudget::size_estimate(args.epsilon)?,
    };
    let budget = base
        .scaled(parse_multiplier(&args.budget_multiplier)?)?
        .with_repetitions(args.repetitions)?;
    if budget.per_run() > MAX_TRIAL_SAMPLES {
        return Err(LabError::Capacity(format!(
            "{} samples per run exceeds {MAX_TRIAL_SAMPLES}",
            budget.per_run()
        )));
    }

    let mut trials = Vec::with_capacity(args.trials as usize);
    match args.problem {
        Problem::Sphere | Problem::Ball | Problem::ParityBit => {
            let r = args.spec.radius()?;
            let law = if args.problem == Problem::Ball {
                pi_ball(n, r)?
            } else {
                pi_sphere(n, r)?
            };
            // Outcome weights carry all the information these decoders use,
            // and their law does not depend on the shift.
            let sampler = WeightSampler::new(&law);
            let decoder = (args.problem == Problem::Sphere)
                .then(|| SphereDecoder::new(n))
                .transpose()?;
            for t in 0..args.trials {
                let mut stream = SampleStream::new(&sampler, RngState::for_trial(seed, t));
                let trial = match args.problem {
                    Problem::Sphere => settle(
                        json!(r),
                        decoder
                            .as_ref()
                            .expect("built above")
                            .recover(&mut stream, &budget),
                        |a| json!(a),
                        |a| *a == r,
                    )?,
                    Problem::Ball => settle(
                        json!(r),
                        recover_ball_radius(&mut stream, &budget),
                        |a| json!(a),
                        |a| *a == r,
                    )?,
                    _ => {
                        let truth = if r % 2 == 0 { "even" } else { "odd" };
                        settle(
                            json!(truth),
                            recover_radius_parity(&mut stream, &budget),
                            |a| json!(format!("{a:?}").to_lowercase()),
                            |a| a.bit() as u32 == r % 2,
                        )?
                    }
                };
                trials.push(trial);
            }
        }
        Problem::Junta => {
            let members = junta_family(n)?;
            let family = JuntaFamily::new(&members)?;
            let hidden = args.true_index;
            let spec = members
                .get(hidden)
                .ok_or_else(|| usage("--true-index must be 0, 1 or 2"))?;
            for t in 0..args.trials {
                let sampler = shifted_sampler(spec, &mut RngState::for_trial(seed, 2 * t + 1))?;
                let mut stream = SampleStream::new(&sampler, RngState::for_trial(seed, 2 * t));
                trials.push(settle(
                    json!(hidden),
                    recover_junta(&family, &mut stream, &budget),
                    |a| json!(a),
                    |a| *a == hidden,
                )?);
            }
        }
        Problem::ParitySet | Problem::GenParity | Problem::Size => {
            let spec = args.spec.to_spec()?;
            let truth_size = (args.problem == Problem::Size)
                .then(|| pi_subset(&spec).map(|d| d.prob(0)))
                .transpose()?;
            for t in 0..args.trials {
                let sampler = shifted_sampler(&spec, &mut RngState::for_trial(seed, 2 * t + 1))?;
                let mut stream = SampleStream::new(&sampler, RngState::for_trial(seed, 2 * t));
                let trial = match (args.problem, spec.kind()) {
                    (Problem::ParitySet, SubsetKind::ParitySet(_)) => {
                        let truth = spec.parity_vector().expect("parity set");
                        settle(
                            json!(bits::format(truth, n)),
                            recover_parity_set(&mut stream, &budget),
                            |a| json!(bits::format(*a, n)),
                            |a| *a == truth,
                        )?
                    }
                    (Problem::GenParity, SubsetKind::GeneralisedParity { k, t: truth, .. }) => {
                        let (k, truth) = (*k, *truth);
                        settle(
                            json!(bits::format(truth, k)),
                            recover_generalised_parity(k, &mut stream, &budget),
                            |a| json!(bits::format(*a, k)),
                            |a| *a == truth,
                        )?
                    }
                    (Problem::Size, _) => {
                        let truth = truth_size.clone().expect("computed above");
                        let eps = args.epsilon;
                        settle(
                            exact_json(&truth),
                            estimate_size(&mut stream, &budget),
                            exact_json,
                            |a| exact::to_f64(&(a - &truth).abs()) <= eps,
                        )?
                    }
                    _ => return Err(usage("problem does not match the subset flags")),
                };
                trials.push(trial);
            }
        }
    }

    let mut table = Table::new(&["trial", "true", "recovered", "samples_used", "correct"]);
    let mut records = Vec::new();
    let cell = |v: &Value| match v {
        Value::String(s) => s.clone(),
        Value::Object(o) => o.get("decimal").map(|d| d.to_string()).unwrap_or_default(),
        other => other.to_string(),
    };
    for (i, t) in trials.iter().enumerate() {
        table.push(vec![
            i.to_string(),
            cell(&t.truth),
            t.recovered.as_ref().map(cell).unwrap_or_default(),
            t.samples_used.to_string(),
            t.correct.to_string(),
        ]);
        records.push(json!({
            "trial": i,
            "true": t.truth,
            "recovered": t.recovered,
            "samples_used": t.samples_used,
            "correct": t.correct,
        }));
    }
    let successes = trials.iter().filter(|t| t.correct).count();
    let inconclusive = trials.iter().filter(|t| t.recovered.is_none()).count();
    let mut em = Emission::new(
        json!({
            "problem": args.problem,
            "n": n,
            "trials": args.trials,
            "successes": successes,
            "inconclusive": inconclusive,
            "budget_per_run": budget.per_run(),
            "repetitions": budget.repetitions(),
            "records": records,
        }),
        table,
    );
    if inconclusive > 0 {
        em.exit_code = 4;
    }
    Ok(em)
}

fn median(values: &mut [u64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    values.sort_unstable();
    let mid = values.len() / 2;
    if values.len() % 2 == 1 {
        values[mid] as f64
    } else {
        (values[mid - 1] + values[mid]) as f64 / 2.0
    }
}

pub fn oracle_demo(args: &OracleArgs, seed: u64) -> LabResult<Emission> {
    let n = args.spec.dimension()?;
    let spec = if args.spec.has_family() {
        args.spec.to_spec()?
    } else {
        SubsetSpec::parity_set(n, (1..=n).collect())?
    };
    let mut per_run = Vec::new();
    let mut queries = Vec::new();
    let mut table;
    match args.mode {
        OracleMode::Quantum => {
            table = Table::new(&["run", "queries", "colour", "support_size", "deficient"]);
            for run in 0..args.runs {
                let inst = build_instance(&spec, seed.wrapping_add(run))?;
                let mut rng = RngState::for_trial(seed, run);
                let ex = quantum_extract(&inst, &mut rng)?;
                let used = inst.counts().total();
                queries.push(used);
                table.push(vec![
                    run.to_string(),
                    used.to_string(),
                    ex.colour.to_string(),
                    ex.state.support_size().to_string(),
                    ex.deficient.to_string(),
                ]);
                per_run.push(json!({
                    "run": run,
                    "queries": used,
                    "colour": ex.colour,
                    "shift": bits::format(inst.sigma(ex.colour), n),
                    "support_size": ex.state.support_size(),
                    "deficient": ex.deficient,
                }));
            }
        }
        OracleMode::Classical => {
            let cap = args.max_queries.unwrap_or(1u64 << (2 * n).min(24));
            table = Table::new(&["run", "queries", "collision"]);
            for run in 0..args.runs {
                let inst = build_instance(&spec, seed.wrapping_add(run))?;
                let mut rng = RngState::for_trial(seed, run);
                let log = classical_collision_experiment(&inst, cap, &mut rng);
                queries.push(log.counts.c);
                table.push(vec![
                    run.to_string(),
                    log.counts.c.to_string(),
                    log.collision_found().to_string(),
                ]);
                per_run.push(json!({
                    "run": run,
                    "queries": log.counts.c,
                    "collision": log.collision.map(|(a, b)| [bits::format(a, 2 * n), bits::format(b, 2 * n)]),
                }));
            }
        }
    }
    Ok(Emission::new(
        json!({
            "n": n,
            "mode": args.mode,
            "family": family_name(&spec),
            "median_queries": median(&mut queries),
            "per_run": per_run,
        }),
        table,
    ))
}

pub fn bounds(args: &BoundsArgs) -> LabResult<Emission> {
    if args.survey_spheres {
        let n = args.n.ok_or_else(|| usage("--survey-spheres needs --n"))?;
        if n > 64 {
            return Err(LabError::Capacity(format!(
                "sphere survey for n = {n} exceeds 64"
            )));
        }
        let reports = sphere_distance_survey(n)?;
        let mut table = Table::new(&[
            "i",
            "j",
            "trace_numerator",
            "trace_denominator",
            "trace",
            "fidelity",
            "hy_numerator",
            "hy_denominator",
            "hy_lower",
        ]);
        let mut rows = Vec::new();
        for rep in &reports {
            let [tn, td, tf] = exact_cells(rep.trace.numer(), rep.trace.denom());
            let [hn, hd, hf] = exact_cells(rep.hy_lower.numer(), rep.hy_lower.denom());
            table.push(vec![
                rep.pair.0.to_string(),
                rep.pair.1.to_string(),
                tn,
                td,
                tf,
                rep.fidelity.to_string(),
                hn,
                hd,
                hf,
            ]);
            rows.push(json!({
                "pair": [rep.pair.0, rep.pair.1],
                "trace": exact_json(&rep.trace),
                "fidelity": rep.fidelity,
                "hy_lower": exact_json(&rep.hy_lower),
            }));
        }
        let closest = closest_pair(&reports);
        let copies = closest
            .map(|c| copies_bound_from_trace(n as u64 / 2 + 1, &c.trace))
            .transpose()?;
        return Ok(Emission::new(
            json!({
                "n": n,
                "reports": rows,
                "closest_pair": closest.map(|c| json!({"pair": [c.pair.0, c.pair.1], "trace": exact_json(&c.trace)})),
                "copies": copies.map(|c| json!({"copies": c.copies, "degenerate": c.degenerate, "epsilon": "1/3"})),
            }),
            table,
        ));
    }
    if args.copies {
        let family = args
            .family
            .ok_or_else(|| usage("--copies needs --family"))?;
        let (copies, degenerate, basis) = match (&args.trace, &args.fidelity) {
            (Some(t), None) => {
                let t = parse_rational(t)?;
                let b = copies_bound_from_trace(family, &t)?;
                (
                    b.copies,
                    b.degenerate,
                    json!({"trace": exact_json(&t), "epsilon": "1/3"}),
                )
            }
            (None, Some(f)) => {
                let f = parse_rational(f)?;
                let eps = parse_rational(&args.eps)?;
                let k = copies_bound(family, &f, &eps)?;
                (
                    k,
                    false,
                    json!({"fidelity": exact_json(&f), "epsilon": exact_json(&eps)}),
                )
            }
            _ => {
                return Err(usage(
                    "--copies needs exactly one of --trace and --fidelity",
                ))
            }
        };
        let mut table = Table::new(&["family", "copies", "degenerate"]);
        table.push(vec![
            family.to_string(),
            copies.to_string(),
            degenerate.to_string(),
        ]);
        let mut json = json!({"family": family, "copies": copies, "degenerate": degenerate});
        json["basis"] = basis;
        let mut em = Emission::new(json, table);
        em.plain = Some(format!("{copies}\n"));
        return Ok(em);
    }
    Err(usage("bounds needs --survey-spheres or --copies"))
}

struct Check {
    name: &'static str,
    cases: u64,
    failure: Option<String>,
}

fn check(name: &'static str, body: impl FnOnce(&mut u64) -> LabResult<Option<String>>) -> Check {
    let mut cases = 0;
    let failure = match body(&mut cases) {
        Ok(f) => f,
        Err(e) => Some(e.to_string()),
    };
    Check {
        name,
        cases,
        failure,
    }
}

macro_rules! fail_if {
    ($cond:expr, $($msg:tt)*) => {
        if $cond {
            return Ok(Some(format!($($msg)*)));
        }
    };
}

pub fn verify(args: &VerifyArgs, seed: u64) -> LabResult<Emission> {
    let max_n = args.max_n;
    if max_n > 64 {
        return Err(LabError::Capacity(format!("--max-n {max_n} exceeds 64")));
    }
    let checks = vec![
        check("krawtchouk three-way agreement", |cases| {
            for n in 1..=max_n {
                let t = kraw_table(n);
                for x in 0..=n {
                    let gf = kraw_gf_coefficients(n, x)?;
                    for r in 0..=n {
                        let d = kraw_direct(n, r, x)?;
                        fail_if!(
                            t.get(r, x) != Some(&d) || gf[r as usize] != d,
                            "n={n}, r={r}, x={x}"
                        );
                        *cases += 1;
                    }
                }
            }
            Ok(None)
        }),
        check("krawtchouk recurrences", |cases| {
            for n in 1..=max_n {
                for r in 0..=n {
                    for x in 0..=n {
                        if let Ok(res) = kraw_recurrence_residual(n, r, x) {
                            let zero = Integer::from(0);
                            fail_if!(
                                res.three_term.as_ref().is_some_and(|v| *v != zero)
                                    || res.mixed.as_ref().is_some_and(|v| *v != zero),
                                "n={n}, r={r}, x={x}"
                            );
                            *cases += 1;
                        }
                    }
                }
            }
            Ok(None)
        }),
        check("krawtchouk ball sums and half-weight values", |cases| {
            for n in 1..=max_n {
                for r in 0..=n {
                    for x in 1..=n {
                        let (lhs, rhs) = kraw_ball_identity(n, r, x)?;
                        fail_if!(lhs != rhs, "ball sum n={n}, r={r}, x={x}");
                        *cases += 1;
                    }
                    if n % 2 == 0 {
                        fail_if!(
                            kraw_half_weight(n, r)? != kraw_direct(n, r, n / 2)?,
                            "half weight n={n}, r={r}"
                        );
                        *cases += 1;
                    }
                }
            }
            Ok(None)
        }),
        check("middle-weight closed forms", |cases| {
            for n in 1..=max_n {
                for r in 0..=n / 2 {
                    fail_if!(
                        closed_form_middle_probs(n, r)? != middle_probs(&pi_sphere(n, r)?),
                        "n={n}, r={r}"
                    );
                    *cases += 1;
                }
            }
            Ok(None)
        }),
        check("gap formulas", |cases| {
            for n in 4..=max_n {
                let mid: Vec<_> = (0..=n / 2)
                    .map(|r| pi_sphere(n, r).map(|d| middle_probs(&d)))
                    .collect::<Result<_, _>>()?;
                for r in 0..=n / 2 {
                    if 2 * (r + 2) > n {
                        continue;
                    }
                    let (lo, hi) = (&mid[r as usize], &mid[r as usize + 2]);
                    let (gap, direct): (Rational, Rational) = match (n % 2, r % 2) {
                        (0, 0) => (
                            center_gap_even(n, r)?,
                            lo.center.clone().unwrap_or_default()
                                - hi.center.clone().unwrap_or_default(),
                        ),
                        (0, 1) => (flank_gap_even(n, r)?, &hi.flank - &lo.flank),
                        (1, 1) => (flank_gap_odd(n, r)?, &hi.flank - &lo.flank),
                        _ => continue,
                    };
                    fail_if!(gap != direct || !gap.is_positive(), "n={n}, r={r}");
                    *cases += 1;
                }
            }
            Ok(None)
        }),
        check("center lower bounds", |cases| {
            for n in (2..=max_n).step_by(2) {
                fail_if!(!center_r0_bound_holds(n)?, "r=0, n={n}");
                *cases += 1;
                for r in (2..=n / 2).step_by(2) {
                    fail_if!(!center_lower_bound_holds(n, r)?, "n={n}, r={r}");
                    *cases += 1;
                }
            }
            Ok(None)
        }),
        check("hausdorff-young spot checks", |cases| {
            use rand::Rng;
            let mut rng = RngState::new(seed, 0);
            let n = 6;
            for _ in 0..100 {
                let mut draw = || -> Vec<u64> {
                    let mut v: Vec<u64> = (0..64).filter(|_| rng.random_bool(0.3)).collect();
                    if v.is_empty() {
                        v.push(0);
                    }
                    v
                };
                let (s, t) = (draw(), draw());
                let lower = hy_lower_bound(n, &s, &t)?;
                let trace = trace_distance_cube(&pi_points(n, &s)?, &pi_points(n, &t)?)?;
                fail_if!(lower > trace, "sets {s:?} and {t:?}");
                *cases += 1;
            }
            Ok(None)
        }),
    ];
    let mut table = Table::new(&["check", "cases", "status"]);
    let mut rows = Vec::new();
    let mut plain = String::new();
    for c in &checks {
        let status = if c.failure.is_none() { "PASS" } else { "FAIL" };
        table.push(vec![
            c.name.to_string(),
            c.cases.to_string(),
            status.to_string(),
        ]);
        rows.push(
            json!({"check": c.name, "cases": c.cases, "status": status, "failure": c.failure}),
        );
        plain += &format!("{status}  {:<45} {:>8} cases", c.name, c.cases);
        if let Some(f) = &c.failure {
            plain += &format!("  ({f})");
        }
        plain.push('\n');
    }
    let mut em = Emission::new(json!({"max_n": max_n, "checks": rows}), table);
    em.plain = Some(plain);
    if checks.iter().any(|c| c.failure.is_some()) {
        em.exit_code = 1;
    }
    Ok(em)
}
