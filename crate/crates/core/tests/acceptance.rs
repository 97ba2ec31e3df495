//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

use std::time::Instant;

use betadim::automaton::DEFAULT_TRUNCATION_DEPTH;
use betadim::erdos_renyi::default_checkpoints;
use betadim::moran::er_sandwich_check;
use betadim::*;
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = std::result::Result<String, String>;

fn check(cond: bool, ok: String, bad: String) -> Outcome {
    if cond {
        Ok(ok)
    } else {
        Err(bad)
    }
}

fn param(text: &str) -> BetaParameter {
    BetaParameter::parse(text, 64).expect("valid base")
}

fn binary_entropy_bits(a: f64) -> f64 {
    (-a * a.ln() - (1.0 - a) * (1.0 - a).ln()) / 2f64.ln()
}

fn grid(start: f64, stop: f64, step: f64) -> Vec<f64> {
    let k = ((stop - start) / step).round() as usize;
    (0..=k).map(|i| ((start + i as f64 * step) * 1e9).round() / 1e9).collect()
}

fn automaton_for(name: &str) -> ParryAutomaton {
    ParryAutomaton::build_truncated(&param(name), DEFAULT_TRUNCATION_DEPTH).expect("automaton")
}

/// Lexicographic test of every suffix against the expansion of one.
fn oracle_admissible(e: &[u32], word: &[u32]) -> bool {
    (0..word.len()).all(|i| {
        let s = &word[i..];
        s <= &e[..s.len()]
    })
}

fn oracle_expansion(p: &BetaParameter, len: usize) -> Vec<u32> {
    (0..len).map(|i| p.one_digit(i).expect("periodic expansion")).collect()
}

fn c1() -> Outcome {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().map_err(|e| e.to_string())?;
    let alphas = grid(0.05, 0.95, 0.05);
    let start = Instant::now();
    let curve = pool
        .install(|| entropy_curve(&param("2"), &alphas, &EntropySchedule::single(2000, 0.005), EntropyVariant::TwoSided))
        .map_err(|e| e.to_string())?;
    let secs = start.elapsed().as_secs_f64();
    let err = alphas
        .iter()
        .map(|&a| (curve.value_at(a).unwrap_or(f64::NAN) - binary_entropy_bits(a)).abs())
        .fold(0.0, f64::max);
    check(
        err <= 0.02 && secs <= 60.0,
        format!("max |h - H/log2| = {err:.4} <= 0.02 in {secs:.2}s"),
        format!("max error {err:.4}, runtime {secs:.2}s"),
    )
}

fn c2() -> Outcome {
    let g = param("golden");
    let a = automaton_for("golden");
    let e = oracle_expansion(&g, 32);
    // Depth-first enumeration of admissible words, counted per length.
    let mut per_len = vec![0u64; 26];
    let mut stack = vec![Vec::<u32>::new()];
    while let Some(w) = stack.pop() {
        per_len[w.len()] += 1;
        if w.len() == 25 {
            continue;
        }
        for d in 0..=1 {
            let mut x = w.clone();
            x.push(d);
            if oracle_admissible(&e, &x) {
                stack.push(x);
            }
        }
    }
    let mut fib = vec![BigUint::from(0u32), BigUint::from(1u32)];
    for i in 2..=27 {
        let next = &fib[i - 1] + &fib[i - 2];
        fib.push(next);
    }
    for n in 1..=25 {
        let c = count_words(&a, n);
        if c != BigUint::from(per_len[n]) || c != fib[n + 2] {
            return Err(format!("n = {n}: count {c}, enumeration {}, F = {}", per_len[n], fib[n + 2]));
        }
    }
    let mut checked = 0;
    for name in ["1.5", "golden", "tribonacci", "2", "2.5", "3"] {
        let a = automaton_for(name);
        let b = a.param().beta();
        for n in 1..=30 {
            let c = count_words(&a, n).to_string().parse::<f64>().expect("count");
            let lo = b.powi(n as i32);
            let hi = b.powi(n as i32 + 1) / (b - 1.0);
            if !(c >= lo * (1.0 - 1e-9) && c <= hi * (1.0 + 1e-9)) {
                return Err(format!("sandwich fails for beta = {b}, n = {n}: {lo} <= {c} <= {hi}"));
            }
            checked += 1;
        }
    }
    Ok(format!("counts n=1..25 equal F(n+2) and enumeration; sandwich holds on {checked} (beta, n)"))
}

fn c3() -> Outcome {
    let two = param("2");
    let ms: Vec<f64> = (2..=30).map(|m| solve_beta_m(&two, m)).collect::<Result<_>>().map_err(|e| e.to_string())?;
    let increasing = ms.windows(2).all(|w| w[0] < w[1]);
    // Independent oracle: Newton's method on x^3 - x^2 - x - 1.
    let mut x = 2.0f64;
    for _ in 0..60 {
        x -= (x * x * x - x * x - x - 1.0) / (3.0 * x * x - 2.0 * x - 1.0);
    }
    let d30 = (ms[28] - 2.0).abs();
    let d3 = (ms[1] - x).abs();
    check(
        increasing && d30 < 1e-8 && d3 < 1e-10,
        format!("strictly increasing; |b30 - 2| = {d30:.2e}; |b3 - tribonacci| = {d3:.2e}"),
        format!("increasing = {increasing}, |b30 - 2| = {d30:.2e}, |b3 - t| = {d3:.2e}"),
    )
}

fn c4() -> Outcome {
    let alphas = grid(0.05, 1.0, 0.05);
    let spec = er_spectrum(&param("2"), &alphas, &EntropySchedule::single(2000, 0.005), AlphaStarMethod::ClosedForm)
        .map_err(|e| e.to_string())?;
    let ones = spec.rows.iter().filter(|r| r.alpha > 0.5).all(|r| r.er == Some(1.0));
    let h_half = spec.rows.iter().find(|r| r.alpha == 0.5).and_then(|r| r.er).unwrap_or(f64::NAN);
    let gap = spec.continuity_gap.unwrap_or(f64::INFINITY);
    check(
        ones && h_half >= 0.98 && gap <= 0.02,
        format!("spectrum = 1 on (0.5, 1]; h(0.5) = {h_half:.4}; gap = {gap:.4}"),
        format!("ones = {ones}, h(0.5) = {h_half}, gap = {gap}"),
    )
}

fn c5() -> Outcome {
    let mmc = |name: &str| lambda_max(&param(name), LambdaMethod::MaxMeanCycle).map_err(|e| e.to_string());
    let (l2, l3, lg) = (mmc("2")?, mmc("3")?, mmc("golden")?);
    let brute = lambda_max(&param("golden"), LambdaMethod::BruteForce(20)).map_err(|e| e.to_string())?;
    // Oracle: best mean over all admissible periodic words of period <= 10.
    let g = param("golden");
    let e = oracle_expansion(&g, 64);
    let mut best = 0.0f64;
    for p in 1..=10usize {
        for bits in 0u32..(1 << p) {
            let w: Vec<u32> = (0..p).map(|i| (bits >> i) & 1).collect();
            let rep: Vec<u32> = w.iter().cycle().take(3 * p).copied().collect();
            if oracle_admissible(&e, &rep) {
                best = best.max(w.iter().sum::<u32>() as f64 / p as f64);
            }
        }
    }
    let ok = l2.exact == Some((1, 1))
        && l3.exact == Some((2, 1))
        && lg.exact == Some((1, 2))
        && best == 0.5
        && (lg.value - brute.value).abs() <= 1.0 / 20.0;
    check(
        ok,
        format!("Lambda(2) = 1, Lambda(3) = 2, Lambda(golden) = 1/2; brute n=20 gives {}", brute.value),
        format!("got {:?} {:?} {:?}, brute {}, cycle oracle {best}", l2.exact, l3.exact, lg.exact, brute.value),
    )
}

fn c6() -> Outcome {
    let g = param("golden");
    let density = alpha_star(&g, AlphaStarMethod::ParryDensity { resolution: 4096 }).map_err(|e| e.to_string())?;
    let dbound = density.error_bound.unwrap_or(0.0);
    let mut lines = Vec::new();
    for seed in [1u64, 2, 3] {
        let b = alpha_star(&g, AlphaStarMethod::Birkhoff { seed, n_digits: 1_000_000 }).map_err(|e| e.to_string())?;
        let se = b.std_error.expect("Birkhoff standard error");
        let tol = 3.0 * (se * se + dbound * dbound).sqrt();
        if (b.value - density.value).abs() > tol {
            return Err(format!("seed {seed}: Birkhoff {} vs density {} exceeds {tol:.2e}", b.value, density.value));
        }
        lines.push(format!("{:.5}", b.value));
    }
    let two = param("2");
    let b2 = alpha_star(&two, AlphaStarMethod::Birkhoff { seed: 1, n_digits: 1_000_000 }).map_err(|e| e.to_string())?;
    let d2 = alpha_star(&two, AlphaStarMethod::ParryDensity { resolution: 64 }).map_err(|e| e.to_string())?;
    check(
        (b2.value - 0.5).abs() <= 0.005 && (d2.value - 0.5).abs() <= 0.005,
        format!("golden density {:.6}, Birkhoff [{}]; beta=2: {:.5}, {:.5}", density.value, lines.join(", "), b2.value, d2.value),
        format!("beta=2 estimates {} and {}", b2.value, d2.value),
    )
}

fn c7() -> Outcome {
    let phi = WindowFunction::new(WindowKind::CLog(5.0)).map_err(|e| e.to_string())?;
    let checkpoints = default_checkpoints(100_000);
    let configs: Vec<(&str, f64)> =
        ["2", "golden"].iter().flat_map(|&b| [0.1, 0.25, 0.4].into_iter().map(move |a| (b, a))).collect();
    let mut asserted = 0;
    for i in 0..100u64 {
        let (b, alpha) = configs[i as usize % configs.len()];
        let spec = MoranSpec::new(&param(b), alpha, 8, None).map_err(|e| e.to_string())?;
        let levels = MoranStreamVariant::Plus.levels_for_length(spec.block_length(), 100_000);
        let mut stream =
            alpha_moran_stream(&spec, i, levels, MoranStreamVariant::Plus).map_err(|e| e.to_string())?;
        let trace = er_average_trace(&mut stream, &phi, &checkpoints).map_err(|e| e.to_string())?;
        let report = er_sandwich_check(&spec, &trace, 2).map_err(|e| e.to_string())?;
        asserted += report.asserted;
        if report.violations > 0 || report.final_deviation > report.final_bound {
            return Err(format!(
                "beta {b}, alpha {alpha}, seed {i}: {} violations, deviation {} vs bound {}",
                report.violations, report.final_deviation, report.final_bound
            ));
        }
    }
    let widest = phi.phi(100_000).map_err(|e| e.to_string())?;
    Ok(format!(
        "100 streams compliant; {asserted} checkpoints with K >= 3 (phi(1e5) = {widest} against blocks of 2^r(N+M) >= 36); final deviations within bound"
    ))
}

fn c8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut pairs = 0;
    for name in ["golden", "tribonacci", "plastic", "2", "3", "1.5", "2.5"] {
        let a = automaton_for(name);
        let profile = zero_run_profile(a.param(), 64).map_err(|e| e.to_string())?;
        let random_full = |rng: &mut ChaCha8Rng| -> std::result::Result<DigitWord, String> {
            let len = rng.gen_range(1..=20);
            let mut state = 0;
            let mut w = Vec::with_capacity(len);
            for _ in 0..len {
                let d = rng.gen_range(0..=a.max_digit(state));
                state = a.step(state, d).expect("allowed digit");
                w.push(d);
            }
            let padded = a.pad_to_full(&DigitWord::new(w)).map_err(|e| e.to_string())?;
            let zeros = padded.len() - len;
            if zeros > profile.running_max[len - 1] + 1 {
                return Err(format!("{name}: padding of {zeros} zeros exceeds M_n + 1"));
            }
            Ok(padded)
        };
        for _ in 0..1000 / 7 + 1 {
            let (u, v) = (random_full(&mut rng)?, random_full(&mut rng)?);
            let uv = u.concat(&v);
            let e = oracle_expansion(a.param(), uv.len());
            if !oracle_admissible(&e, uv.digits()) || !a.is_full(uv.digits()).map_err(|e| e.to_string())? {
                return Err(format!("{name}: concatenation {uv} is not full"));
            }
            pairs += 1;
        }
    }
    check(pairs >= 1000, format!("{pairs} full-word pairs concatenate to full words; padding within M_n + 1"), String::new())
}

fn c9() -> Outcome {
    let mut words_checked = 0u64;
    for name in ["golden", "tribonacci", "plastic", "2", "3", "1.5", "2.5", "1.9"] {
        let a = automaton_for(name);
        let e = oracle_expansion(a.param(), 12);
        let base = u64::from(a.alphabet_max()) + 1;
        for n in 0..=12u32 {
            for code in 0..base.pow(n) {
                let mut c = code;
                let w: Vec<u32> = (0..n)
                    .map(|_| {
                        let d = (c % base) as u32;
                        c /= base;
                        d
                    })
                    .collect();
                let accepted = a.run(&w, 0).map_err(|e| e.to_string())?.state().is_some();
                if accepted != oracle_admissible(&e, &w) {
                    return Err(format!("{name}: disagreement on {}", DigitWord::new(w)));
                }
                words_checked += 1;
            }
        }
    }
    Ok(format!("automata match the lexicographic criterion on all {words_checked} words with n <= 12"))
}

fn c10() -> Outcome {
    let log = slowly_varying_check(&WindowKind::CLog(1.0), 10_000).map_err(|e| e.to_string())?;
    let last = log.rows.last().expect("rows");
    let decade: Vec<f64> = log.rows.iter().filter(|r| r.n * 10 >= 10_000).map(|r| r.ratio).collect();
    let strictly = decade.windows(2).all(|w| w[1] < w[0]);
    let table: Vec<f64> = (1..=1000).map(|n| n as f64).collect();
    let id = slowly_varying_check(&WindowKind::Custom(table), 1000).map_err(|e| e.to_string())?;
    check(
        last.n == 10_000 && last.ratio <= 0.15 && strictly && log.passes && !id.passes,
        format!("log trace at 1e4 = {:.4}, decreasing over last decade; identity reported failing", last.ratio),
        format!("log trace {} (decreasing = {strictly}), identity passes = {}", last.ratio, id.passes),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("C1 binary entropy curve matches H(a)/log 2", c1),
        ("C2 golden word counts and growth sandwich", c2),
        ("C3 beta_m convergence", c3),
        ("C4 spectrum endpoints and continuity", c4),
        ("C5 maximal digit averages", c5),
        ("C6 ergodic digit mean cross-validation", c6),
        ("C7 Moran streams obey the window sandwich", c7),
        ("C8 full-word concatenation and padding", c8),
        ("C9 automaton language equivalence", c9),
        ("C10 slowly varying diagnostics", c10),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        let start = Instant::now();
        let outcome = f();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => println!("PASS {name}: {msg} [{secs:.1}s]"),
            Err(msg) => {
                failed += 1;
                println!("FAIL {name}: {msg} [{secs:.1}s]");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
