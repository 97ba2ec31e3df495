//! One function per subcommand, each producing rows and a text rendering.

use std::path::Path;
use std::result::Result;

use betadim::automaton::zero_run_profile;
use betadim::counting::{ln_count_with_sum, Backend};
use betadim::entropy::{default_alpha_star_method, ScheduleStep};
use betadim::erdos_renyi::default_checkpoints;
use betadim::expansion::Precision;
use betadim::moran::{er_sandwich_check, moran_stream_from_levels};
use betadim::*;
use serde::Serialize;
use serde_json::json;

use crate::output::{render, table, CliError, Provenance, Rendered};
use crate::*;

struct Ctx<'a> {
    global: &'a GlobalArgs,
    provenance: Provenance,
}

impl<'a> Ctx<'a> {
    fn new(global: &'a GlobalArgs, command: &str) -> Self {
        let mut provenance = Provenance::new(command);
        provenance.set("depth", global.depth);
        provenance.set("guard_band", global.guard_band);
        provenance.set("max_precision_bits", global.max_precision_bits);
        provenance.set("seed", global.seed);
        Ctx { global, provenance }
    }

    fn literal(&self) -> Result<&str, CliError> {
        self.global.beta.as_deref().ok_or_else(|| CliError::Usage("--beta is required".into()))
    }

    fn param(&mut self) -> Result<BetaParameter, CliError> {
        let precision =
            Precision { guard_band: self.global.guard_band, max_precision_bits: self.global.max_precision_bits };
        let p = BetaParameter::parse_with(self.literal()?, self.global.depth, precision)?;
        let literal = self.literal()?.to_string();
        self.provenance.set("beta", literal);
        self.provenance.set("beta_value", p.beta());
        Ok(p)
    }

    fn automaton(&mut self, param: &BetaParameter) -> Result<ParryAutomaton, CliError> {
        let a = ParryAutomaton::for_param(param)?;
        self.provenance.set("counted_beta", a.param().beta());
        self.provenance.set("truncated", a.is_truncated());
        Ok(a)
    }

    fn set(&mut self, key: &str, value: impl Serialize) {
        self.provenance.set(key, value);
    }

    fn render<R: Serialize>(
        &self,
        summary: Option<serde_json::Value>,
        rows: &[R],
        text: impl FnOnce() -> Result<String, CliError>,
    ) -> Result<Rendered, CliError> {
        render(self.global.format, &self.provenance, summary, rows, text)
    }
}

fn tsv<R: Serialize>(rows: &[R]) -> Result<String, CliError> {
    table(rows, b'\t')
}

fn compact(w: &DigitWord) -> String {
    w.digits().iter().map(|d| d.to_string()).collect::<Vec<_>>().join(",")
}

pub fn dispatch(cli: &Cli) -> Result<Rendered, CliError> {
    let g = &cli.global;
    match &cli.command {
        Command::Expand { x, n } => expand_cmd(Ctx::new(g, "expand"), *x, *n),
        Command::One => one(Ctx::new(g, "one")),
        Command::Admissible { word } => admissible(Ctx::new(g, "admissible"), word),
        Command::Count(a) => count(Ctx::new(g, "count"), a),
        Command::BetaM { m } => beta_m(Ctx::new(g, "beta-m"), *m),
        Command::Entropy(a) => entropy(Ctx::new(g, "entropy"), a),
        Command::AlphaStar(a) => alpha_star_cmd(Ctx::new(g, "alpha-star"), a),
        Command::Lambda { method, n } => lambda(Ctx::new(g, "lambda"), *method, *n),
        Command::Spectrum(a) => spectrum(Ctx::new(g, "spectrum"), a),
        Command::ErTrace(a) => er_trace(Ctx::new(g, "er-trace"), a),
        Command::Moran(a) => moran(Ctx::new(g, "moran"), a),
        Command::SvCheck { theta, c, nu, n_max } => sv_check(Ctx::new(g, "sv-check"), *theta, *c, *nu, *n_max),
    }
}

#[derive(Serialize)]
struct ExpandRow {
    beta: String,
    x: f64,
    n: usize,
    digits: String,
}

fn expand_cmd(mut ctx: Ctx, x: f64, n: usize) -> Result<Rendered, CliError> {
    let p = ctx.param()?;
    let w = expand(&p, x, n)?;
    let row = ExpandRow { beta: p.literal().to_string(), x, n, digits: compact(&w) };
    ctx.render(None, &[&row], || Ok(row.digits.clone()))
}

#[derive(Serialize)]
struct OneRow {
    beta: String,
    depth: usize,
    parry_class: String,
    alphabet_max: u32,
    one_digits: String,
    greedy_one: String,
    period: Option<usize>,
    zero_runs: String,
    running_max: String,
    padding: usize,
    b0_bound: usize,
    b0_depth: usize,
    horizon_limited: bool,
}

fn class_name(c: ParryClass) -> String {
    match c {
        ParryClass::Integer => "Integer".into(),
        ParryClass::SimpleParry(n) => format!("SimpleParry({n})"),
        ParryClass::NonSimple => "NonSimple".into(),
    }
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn one(mut ctx: Ctx) -> Result<Rendered, CliError> {
    let p = ctx.param()?;
    let profile = zero_run_profile(&p, p.depth())?;
    let row = OneRow {
        beta: p.literal().to_string(),
        depth: p.depth(),
        parry_class: class_name(p.parry_class()),
        alphabet_max: p.alphabet_max(),
        one_digits: join(p.one_digits()),
        greedy_one: join(p.greedy_one()),
        period: p.period(),
        zero_runs: join(&profile.l),
        running_max: join(&profile.running_max),
        padding: profile.padding,
        b0_bound: profile.b0_flag.0,
        b0_depth: profile.b0_flag.1,
        horizon_limited: profile.horizon_limited,
    };
    ctx.render(None, &[&row], || {
        Ok(format!(
            "one_digits: {}\nparry_class: {}\nzero_runs: {}\nrunning_max: {}\nM: {}\nb0_flag: bounded by {} at depth {}\n",
            row.one_digits, row.parry_class, row.zero_runs, row.running_max, row.padding, row.b0_bound, row.b0_depth
        ))
    })
}

#[derive(Serialize)]
struct AdmissibleRow {
    beta: String,
    word: String,
    admissible: bool,
    failing_shift: Option<usize>,
}

fn admissible(mut ctx: Ctx, word: &str) -> Result<Rendered, CliError> {
    let p = ctx.param()?;
    let w: DigitWord = word.parse()?;
    let a = is_admissible(&p, w.digits())?;
    let row = AdmissibleRow { beta: p.literal().to_string(), word: compact(&w), admissible: a.admissible, failing_shift: a.failing_shift };
    ctx.render(None, &[&row], || {
        Ok(match a.failing_shift {
            None => "true".into(),
            Some(s) => format!("false (failing shift {s})"),
        })
    })
}

fn parse_range(text: &str) -> Result<(u64, u64), CliError> {
    let bad = || CliError::Usage(format!("expected P:Q, got {text:?}"));
    let (p, q) = text.split_once(':').ok_or_else(bad)?;
    Ok((p.trim().parse().map_err(|_| bad())?, q.trim().parse().map_err(|_| bad())?))
}

fn constraint_of(a: &CountArgs) -> Result<SumConstraint, CliError> {
    Ok(if let Some(p) = a.sum {
        SumConstraint::Exact(p)
    } else if let Some(r) = &a.sum_range {
        let (p, q) = parse_range(r)?;
        if a.open {
            SumConstraint::Open(p, q)
        } else {
            SumConstraint::Closed(p, q)
        }
    } else if let Some(p) = a.above {
        SumConstraint::Above(p)
    } else if let Some(q) = a.below {
        SumConstraint::Below(q)
    } else {
        SumConstraint::Any
    })
}

fn constraint_name(c: SumConstraint) -> String {
    match c {
        SumConstraint::Any => "any".into(),
        SumConstraint::Exact(p) => format!("={p}"),
        SumConstraint::Closed(p, q) => format!("[{p},{q}]"),
        SumConstraint::Open(p, q) => format!("({p},{q})"),
        SumConstraint::Above(p) => format!(">{p}"),
        SumConstraint::Below(q) => format!("<{q}"),
    }
}

#[derive(Serialize)]
struct CountRow {
    beta: String,
    n: usize,
    constraint: String,
    full: bool,
    padding: Option<usize>,
    /// Decimal count; empty on the log-domain backend.
    count: Option<String>,
    ln_count: f64,
}

fn count(mut ctx: Ctx, a: &CountArgs) -> Result<Rendered, CliError> {
    let p = ctx.param()?;
    let automaton = ctx.automaton(&p)?;
    let c = constraint_of(a)?;
    c.validate()?;
    let (count, padding) = if a.full {
        let m = match a.padding {
            Some(m) => m,
            None => zero_run_profile(automaton.param(), automaton.states())?.padding,
        };
        (Some(count_full_words(&automaton, a.n, m, c)?), Some(m))
    } else if Backend::for_length(a.n) == Backend::ExactBigInt {
        (Some(count_with_sum(&automaton, a.n, c)?), None)
    } else {
        (None, None)
    };
    let ln_count = match &count {
        Some(k) => k.ln(),
        None => ln_count_with_sum(&automaton, a.n, c, Backend::LogDomain)?,
    };
    ctx.set("backend", if count.is_some() { "exact-big-int" } else { "log-domain" });
    let row = CountRow {
        beta: p.literal().to_string(),
        n: a.n,
        constraint: constraint_name(c),
        full: a.full,
        padding,
        count: count.map(|k| k.to_string()),
        ln_count,
    };
    ctx.render(None, &[&row], || {
        Ok(match &row.count {
            Some(k) => k.clone(),
            None => format!("ln {}", row.ln_count),
        })
    })
}

#[derive(Serialize)]
struct BetaMRow {
    beta: String,
    m: usize,
    beta_m: f64,
}

fn beta_m(mut ctx: Ctx, m: usize) -> Result<Rendered, CliError> {
    let p = ctx.param()?;
    let row = BetaMRow { beta: p.literal().to_string(), m, beta_m: solve_beta_m(&p, m)? };
    ctx.set("tolerance", betadim::entropy::BETA_M_TOLERANCE);
    ctx.render(None, &[&row], || Ok(row.beta_m.to_string()))
}

fn parse_grid(text: &str) -> Result<Vec<f64>, CliError> {
    let bad = || CliError::Usage(format!("expected A0:A1:STEP or a list, got {text:?}"));
    let num = |s: &str| s.trim().parse::<f64>().map_err(|_| bad());
    let parts: Vec<&str> = text.split(':').collect();
    let mut grid = match parts.as_slice() {
        [a0, a1, step] => {
            let (a0, a1, step) = (num(a0)?, num(a1)?, num(step)?);
            if !(step > 0.0) || a1 < a0 {
                return Err(bad());
            }
            let k = ((a1 - a0) / step + 1e-9).floor() as usize;
            (0..=k).map(|i| ((a0 + i as f64 * step) * 1e12).round() / 1e12).collect::<Vec<_>>()
        }
        [list] => list.split(',').map(num).collect::<Result<Vec<_>, _>>()?,
        _ => return Err(bad()),
    };
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    Ok(grid)
}

fn schedule_of(a: &ScheduleArgs) -> Result<EntropySchedule, CliError> {
    let mut s = match a.schedule {
        ScheduleArg::Default => {
            if !a.n.is_empty() || !a.delta.is_empty() {
                return Err(CliError::Usage("--n and --delta need --schedule custom".into()));
            }
            EntropySchedule::default()
        }
        ScheduleArg::Custom => {
            if a.delta.is_empty() || a.n.is_empty() {
                return Err(CliError::Usage("a custom schedule needs --n and --delta".into()));
            }
            let ns = if a.n.len() == 1 { vec![a.n[0]; a.delta.len()] } else { a.n.clone() };
            if ns.len() != a.delta.len() {
                return Err(CliError::Usage("--n must give one length or one per delta".into()));
            }
            EntropySchedule {
                steps: ns.into_iter().zip(&a.delta).map(|(n, &delta)| ScheduleStep { n, delta }).collect(),
                m_depth: a.m_depth,
            }
        }
    };
    s.m_depth = a.m_depth;
    Ok(s)
}

fn variant_of(v: VariantArg) -> EntropyVariant {
    match v {
        VariantArg::TwoSided => EntropyVariant::TwoSided,
        VariantArg::Lower => EntropyVariant::Lower,
        VariantArg::Upper => EntropyVariant::Upper,
    }
}

#[derive(Serialize)]
struct EntropyOut {
    alpha: f64,
    h_hat: Option<f64>,
    n: usize,
    delta: f64,
    m: usize,
    variant: &'static str,
}

fn entropy(mut ctx: Ctx, a: &EntropyArgs) -> Result<Rendered, CliError> {
    let p = ctx.param()?;
    let grid = parse_grid(&a.schedule.alpha_grid)?;
    let schedule = schedule_of(&a.schedule)?;
    let curve = entropy_curve(&p, &grid, &schedule, variant_of(a.variant))?;
    ctx.set("counted_beta", curve.counted_beta);
    ctx.set("truncated", curve.truncated);
    ctx.set("schedule", &schedule.steps);
    let mut rows: Vec<EntropyOut> = curve
        .rows
        .iter()
        .map(|r| EntropyOut { alpha: r.alpha, h_hat: r.h_hat, n: r.n, delta: r.delta, m: r.m, variant: r.variant.name() })
        .collect();
    rows.sort_by(|x, y| x.alpha.total_cmp(&y.alpha).then(x.n.cmp(&y.n)).then(y.delta.total_cmp(&x.delta)));
    ctx.render(None, &rows, || tsv(&rows))
}

fn alpha_method(p: &BetaParameter, a: &AlphaStarArgs, seed: u64) -> AlphaStarMethod {
    match a.method {
        AlphaMethodArg::Auto => default_alpha_star_method(p),
        AlphaMethodArg::Closed => AlphaStarMethod::ClosedForm,
        AlphaMethodArg::Birkhoff => AlphaStarMethod::Birkhoff { seed, n_digits: a.digits },
        AlphaMethodArg::Density => AlphaStarMethod::ParryDensity { resolution: a.resolution },
    }
}

fn method_name(m: AlphaStarMethod) -> String {
    match m {
        AlphaStarMethod::ClosedForm => "closed".into(),
        AlphaStarMethod::Birkhoff { seed, n_digits } => format!("birkhoff(seed={seed},digits={n_digits})"),
        AlphaStarMethod::ParryDensity { resolution } => format!("density(resolution={resolution})"),
    }
}

#[derive(Serialize)]
struct AlphaStarRow {
    beta: String,
    method: String,
    value: f64,
    std_error: Option<f64>,
    error_bound: Option<f64>,
}

fn alpha_star_cmd(mut ctx: Ctx, a: &AlphaStarArgs) -> Result<Rendered, CliError> {
    let p = ctx.param()?;
    let est = alpha_star(&p, alpha_method(&p, a, ctx.global.seed))?;
    let row = AlphaStarRow {
        beta: p.literal().to_string(),
        method: method_name(est.method),
        value: est.value,
        std_error: est.std_error,
        error_bound: est.error_bound,
    };
    ctx.render(None, &[&row], || {
        Ok(match row.std_error {
            Some(se) => format!("{} ± {se}", row.value),
            None => row.value.to_string(),
        })
    })
}

#[derive(Serialize)]
struct LambdaRow {
    beta: String,
    method: String,
    value: f64,
    exact: Option<String>,
    lower_bound: bool,
}

fn lambda(mut ctx: Ctx, method: LambdaMethodArg, n: usize) -> Result<Rendered, CliError> {
    let p = ctx.param()?;
    let automaton = ctx.automaton(&p)?;
    let (m, name) = match method {
        LambdaMethodArg::Mmc => (LambdaMethod::MaxMeanCycle, "mmc".to_string()),
        LambdaMethodArg::Brute => (LambdaMethod::BruteForce(n), format!("brute(n={n})")),
    };
    let est = betadim::entropy::lambda_on(&automaton, m)?;
    let row = LambdaRow {
        beta: p.literal().to_string(),
        method: name,
        value: est.value,
        exact: est.exact.map(|(a, b)| format!("{a}/{b}")),
        lower_bound: est.lower_bound,
    };
    ctx.render(None, &[&row], || Ok(row.value.to_string()))
}

#[derive(Serialize)]
struct SpectrumOut {
    alpha: f64,
    er: Option<f64>,
    lower_besicovitch: Option<f64>,
    upper_besicovitch: Option<f64>,
    h_hat: Option<f64>,
    n: usize,
    delta: f64,
}

fn spectrum(mut ctx: Ctx, a: &SpectrumArgs) -> Result<Rendered, CliError> {
    let p = ctx.param()?;
    let grid = parse_grid(&a.schedule.alpha_grid)?;
    let schedule = schedule_of(&a.schedule)?;
    let last = schedule.final_step().expect("schedules are non-empty");
    let s = er_spectrum(&p, &grid, &schedule, alpha_method(&p, &a.alpha_star, ctx.global.seed))?;
    ctx.set("counted_beta", s.curve.counted_beta);
    ctx.set("truncated", s.curve.truncated);
    ctx.set("schedule", &schedule.steps);
    let summary = json!({
        "alpha_star": s.alpha_star.value,
        "alpha_star_method": method_name(s.alpha_star.method),
        "alpha_star_std_error": s.alpha_star.std_error,
        "lambda": s.lambda.value,
        "lambda_lower_bound": s.lambda.lower_bound,
        "h_at_alpha_star": s.h_at_alpha_star,
        "continuity_gap": s.continuity_gap,
    });
    let rows: Vec<SpectrumOut> = s
        .rows
        .iter()
        .map(|r| SpectrumOut {
            alpha: r.alpha,
            er: r.er,
            lower_besicovitch: r.lower_besicovitch,
            upper_besicovitch: r.upper_besicovitch,
            h_hat: r.h_hat,
            n: last.n,
            delta: last.delta,
        })
        .collect();
    ctx.render(Some(summary.clone()), &rows, || {
        let mut text = String::new();
        for (k, v) in summary.as_object().expect("object") {
            text.push_str(&format!("# {k}: {v}\n"));
        }
        text.push_str(&tsv(&rows)?);
        Ok(text)
    })
}

fn window_kind(phi: PhiArg, c: f64, nu: f64) -> WindowKind {
    match phi {
        PhiArg::Identity => WindowKind::Identity,
        PhiArg::Log => WindowKind::CLog(c),
        PhiArg::Loglog => WindowKind::CLogLog(c),
        PhiArg::Arctan => WindowKind::CArctan(c),
        PhiArg::Explnnu => WindowKind::ExpLnNu(nu),
    }
}

fn stream_variant(v: StreamVariantArg) -> MoranStreamVariant {
    match v {
        StreamVariantArg::Plus => MoranStreamVariant::Plus,
        StreamVariantArg::Infinite => MoranStreamVariant::Infinite,
    }
}

#[derive(Serialize)]
struct TraceRow {
    n: usize,
    phi_n: usize,
    #[serde(rename = "I")]
    i: u64,
    #[serde(rename = "A")]
    a: f64,
    clamped: bool,
    k: Option<usize>,
    lower: Option<f64>,
    upper: Option<f64>,
    holds: Option<bool>,
}

fn parse_moran_source(text: &str) -> Result<(f64, usize, Option<usize>), CliError> {
    let bad = || CliError::Usage(format!("expected moran:ALPHA,N[,M], got moran:{text}"));
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    match parts.as_slice() {
        [a, n] => Ok((a.parse().map_err(|_| bad())?, n.parse().map_err(|_| bad())?, None)),
        [a, n, m] => Ok((a.parse().map_err(|_| bad())?, n.parse().map_err(|_| bad())?, Some(m.parse().map_err(|_| bad())?))),
        _ => Err(bad()),
    }
}

fn er_trace(mut ctx: Ctx, a: &ErTraceArgs) -> Result<Rendered, CliError> {
    let p = ctx.param()?;
    let phi = WindowFunction::new(window_kind(a.phi, a.c, a.nu))?;
    let checkpoints = default_checkpoints(a.n);
    let seed = ctx.global.seed;
    let mut spec = None;
    let mut stream = if let Some(x) = a.source.strip_prefix("expand:") {
        let x: f64 = x.trim().parse().map_err(|_| CliError::Usage(format!("bad point in {:?}", a.source)))?;
        DigitStream::from_point(&p, x)?
    } else if let Some(rest) = a.source.strip_prefix("moran:") {
        let (alpha, n, m) = parse_moran_source(rest)?;
        let s = MoranSpec::new(&p, alpha, n, m)?;
        let variant = stream_variant(a.variant);
        let levels = variant.levels_for_length(s.block_length(), a.n);
        ctx.set("moran_padding", s.padding());
        ctx.set("moran_levels", levels);
        let stream = alpha_moran_stream(&s, seed, levels, variant)?;
        spec = Some(s);
        stream
    } else if a.source == "random" {
        DigitStream::uniform(&p, seed)?
    } else {
        return Err(CliError::Usage(format!("unknown source {:?}", a.source)));
    };
    if a.r.is_some() && spec.is_none() {
        return Err(CliError::Usage("--r needs a moran source".into()));
    }
    ctx.set("source", &a.source);
    ctx.set("phi", &phi.kind);
    let trace = er_average_trace(&mut stream, &phi, &checkpoints)?;
    let sandwich = match (a.r, &spec) {
        (Some(r), Some(s)) => Some(er_sandwich_check(s, &trace, r)?),
        _ => None,
    };
    let rows: Vec<TraceRow> = trace
        .rows
        .iter()
        .enumerate()
        .map(|(j, r)| {
            let s = sandwich.as_ref().map(|s| &s.rows[j]);
            TraceRow {
                n: r.n,
                phi_n: r.phi_n,
                i: r.i,
                a: r.a,
                clamped: r.clamped,
                k: s.map(|s| s.k),
                lower: s.map(|s| s.lower),
                upper: s.map(|s| s.upper),
                holds: s.map(|s| s.holds),
            }
        })
        .collect();
    let mut summary = json!({
        "tail_inf": trace.tail_inf,
        "tail_sup": trace.tail_sup,
        "last_spread": trace.last_spread,
        "trend": trace.trend,
        "clamped_checkpoints": trace.clamped_checkpoints,
    });
    if let Some(s) = &sandwich {
        summary["sandwich_r"] = json!(s.r);
        summary["sandwich_asserted"] = json!(s.asserted);
        summary["sandwich_violations"] = json!(s.violations);
        summary["final_deviation"] = json!(s.final_deviation);
        summary["final_bound"] = json!(s.final_bound);
    }
    ctx.render(Some(summary), &rows, || tsv(&rows))
}

#[derive(Serialize)]
struct LevelRow {
    level: u32,
    length: usize,
    w_target: u64,
    v_target: u64,
    w_count: String,
    v_count: String,
}

#[derive(Serialize)]
struct SampleEntry {
    seed: u64,
    file: String,
    length: usize,
    digit_sum: u64,
}

fn ascii_digits(w: &DigitWord) -> Result<String, CliError> {
    w.digits()
        .iter()
        .map(|&d| char::from_digit(d, 10).ok_or_else(|| CliError::Usage(format!("digit {d} has no single-byte form"))))
        .collect()
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn moran(mut ctx: Ctx, a: &MoranArgs) -> Result<Rendered, CliError> {
    let p = ctx.param()?;
    if a.sample > 0 && a.out.is_none() {
        return Err(CliError::Usage("--sample needs --out".into()));
    }
    let spec = MoranSpec::new(&p, a.alpha, a.n_digits, a.padding)?;
    let levels = build_levels(&spec, a.levels)?;
    let variant = stream_variant(a.variant);
    let automaton = spec.automaton();
    ctx.set("counted_beta", automaton.param().beta());
    ctx.set("truncated", automaton.is_truncated());
    let spec_json = json!({
        "beta": p.literal(),
        "alpha": spec.alpha(),
        "N": spec.n_digits(),
        "M": spec.padding(),
        "block_length": spec.block_length(),
        "lambda": format!("{}/{}", spec.lambda().0, spec.lambda().1),
        "target_margin_ok": spec.target_margin_ok(),
        "variant": a.variant.to_possible_value().expect("named").get_name(),
    });
    let rows: Vec<LevelRow> = levels
        .levels()
        .iter()
        .map(|l| LevelRow {
            level: l.level,
            length: l.length,
            w_target: l.w_target,
            v_target: l.v_target,
            w_count: l.w_count.to_string(),
            v_count: l.v_count.to_string(),
        })
        .collect();
    if let Some(dir) = &a.out {
        std::fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
        let blocks = (0..).take_while(|&i| variant.block_level(i) <= a.levels).count();
        let full = variant.prefix_length(spec.block_length(), blocks);
        let len = a.len.unwrap_or(full);
        if len > full {
            return Err(CliError::Usage(format!("--len {len} exceeds the {full} digits of {} levels", a.levels)));
        }
        let mut samples = Vec::with_capacity(a.sample);
        for k in 0..a.sample {
            let seed = ctx.global.seed + k as u64;
            let mut stream = moran_stream_from_levels(levels.clone(), seed, variant);
            let w = stream.take_word(len)?;
            let file = format!("stream_{k:03}.txt");
            write_file(&dir.join(&file), &ascii_digits(&w)?)?;
            samples.push(SampleEntry { seed, file, length: len, digit_sum: w.sum() });
        }
        let manifest = json!({
            "provenance": &ctx.provenance,
            "spec": spec_json,
            "levels": levels.levels(),
            "samples": samples,
        });
        write_file(&dir.join("manifest.json"), &(serde_json::to_string_pretty(&manifest)? + "\n"))?;
    }
    ctx.render(Some(spec_json), &rows, || tsv(&rows))
}

fn sv_check(mut ctx: Ctx, theta: PhiArg, c: f64, nu: f64, n_max: usize) -> Result<Rendered, CliError> {
    let kind = window_kind(theta, c, nu);
    let report = slowly_varying_check(&kind, n_max)?;
    ctx.set("theta", &kind);
    ctx.set("n_max", n_max);
    let summary = json!({
        "ratio_nonincreasing_last_decade": report.ratio_nonincreasing_last_decade,
        "log_ratio_decreasing_last_decade": report.log_ratio_decreasing_last_decade,
        "linear_ratio_decreasing_last_decade": report.linear_ratio_decreasing_last_decade,
        "bounded_by": report.bounded_by,
        "passes": report.passes,
    });
    let text_summary = summary.clone();
    ctx.render(Some(summary), &report.rows, || {
        let mut text = String::new();
        for (k, v) in text_summary.as_object().expect("object") {
            text.push_str(&format!("# {k}: {v}\n"));
        }
        text.push_str(&tsv(&report.rows)?);
        Ok(text)
    })
}
