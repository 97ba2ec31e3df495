use betadim::automaton::DEFAULT_TRUNCATION_DEPTH;
use betadim::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn param(text: &str) -> BetaParameter {
    BetaParameter::parse(text, 64).unwrap()
}

fn automaton(text: &str) -> ParryAutomaton {
    ParryAutomaton::build_truncated(&param(text), DEFAULT_TRUNCATION_DEPTH).unwrap()
}

/// Parry's criterion by direct lexicographic comparison of every suffix.
fn oracle(e: &[u32], word: &[u32]) -> bool {
    (0..word.len()).all(|i| word[i..] <= e[..word.len() - i])
}

fn expansion(p: &BetaParameter, len: usize) -> Vec<u32> {
    (0..len).map(|i| p.one_digit(i).unwrap()).collect()
}

fn all_words(alphabet_max: u32, n: usize) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|w| {
                (0..=alphabet_max).map(move |d| {
                    let mut v = w.clone();
                    v.push(d);
                    v
                })
            })
            .collect();
    }
    out
}

#[test]
fn admissibility_examples() {
    let g = param("golden");
    let a = is_admissible(&g, &[1, 1]).unwrap();
    assert!(!a.admissible);
    assert_eq!(a.failing_shift, Some(0));
    assert!(is_admissible(&param("2"), &[1, 0, 1]).unwrap().admissible);
    assert!(is_admissible(&g, &[1, 0, 1, 0, 0, 1]).unwrap().admissible);
    assert!(is_admissible(&g, &[2]).is_err());
}

#[test]
fn depth_error_past_the_horizon() {
    let p = BetaParameter::parse("1.5", 4).unwrap();
    let e = p.one_digits().to_vec();
    let mut word = e.clone();
    word.push(0);
    assert!(matches!(is_admissible(&p, &word), Err(Error::Depth(_))));
}

#[test]
fn automaton_structure_examples() {
    let g = automaton("golden").export();
    assert_eq!(g.states, 2);
    assert_eq!(g.allowed_digits, vec![vec![0, 1], vec![0]]);
    assert_eq!(g.next_state, vec![vec![0, 1], vec![0]]);
    let two = automaton("2").export();
    assert_eq!(two.states, 1);
    assert_eq!(two.allowed_digits, vec![vec![0, 1]]);
    assert_eq!(two.next_state, vec![vec![0, 0]]);
    let t = automaton("tribonacci").export();
    assert_eq!(t.states, 3);
    assert_eq!(t.allowed_digits, vec![vec![0, 1], vec![0, 1], vec![0]]);
}

#[test]
fn export_round_trips_through_json() {
    let g = automaton("golden").export();
    let text = serde_json::to_string(&g).unwrap();
    assert_eq!(text, r#"{"states":2,"allowed_digits":[[0,1],[0]],"next_state":[[0,1],[0]]}"#);
    let back: betadim::automaton::AutomatonExport = serde_json::from_str(&text).unwrap();
    assert_eq!(back, g);
}

#[test]
fn run_examples() {
    let g = automaton("golden");
    assert_eq!(g.run(&[1, 0], 0).unwrap(), RunOutcome::State(0));
    assert!(matches!(g.run(&[1, 1], 0).unwrap(), RunOutcome::Reject { .. }));
    let two = automaton("2");
    assert_eq!(two.run(&[1, 1, 0, 1, 1, 1], 0).unwrap(), RunOutcome::State(0));
}

#[test]
fn full_word_examples() {
    let g = automaton("golden");
    assert!(g.is_full(&[1, 0]).unwrap());
    assert!(!g.is_full(&[1]).unwrap());
    assert!(automaton("2").is_full(&[0, 1, 1]).unwrap());
    assert_eq!(g.pad_to_full(&DigitWord::new(vec![1])).unwrap().digits(), &[1, 0]);
    assert_eq!(automaton("2").pad_to_full(&DigitWord::new(vec![1, 0, 1])).unwrap().digits(), &[1, 0, 1]);
    assert_eq!(automaton("tribonacci").pad_to_full(&DigitWord::new(vec![1, 1])).unwrap().digits(), &[1, 1, 0]);
}

#[test]
fn zero_run_examples() {
    let g = zero_run_profile(&param("golden"), 6).unwrap();
    assert_eq!(g.l, vec![1, 0, 1, 0, 1, 0]);
    assert_eq!(g.padding, 2);
    let two = zero_run_profile(&param("2"), 4).unwrap();
    assert_eq!(two.l, vec![0, 0, 0, 0]);
    assert_eq!(two.padding, 1);
    let t = zero_run_profile(&param("tribonacci"), 6).unwrap();
    assert_eq!(t.l, vec![0, 1, 0, 0, 1, 0]);
    assert_eq!(t.padding, 2);
    assert!(t.running_max.windows(2).all(|w| w[0] <= w[1]));
}

#[test]
fn language_matches_criterion_exhaustively() {
    for name in ["golden", "tribonacci", "plastic", "2", "3", "1.5", "2.5"] {
        let a = automaton(name);
        let e = expansion(a.param(), 16);
        for n in 1..=10 {
            for w in all_words(a.alphabet_max(), n) {
                let accepted = a.run(&w, 0).unwrap().state().is_some();
                assert_eq!(accepted, oracle(&e, &w), "{name}: {w:?}");
            }
        }
    }
}

/// Largest value of the cylinder of `w`, approached by admissible continuations.
fn cylinder_length(p: &BetaParameter, e: &[u32], w: &[u32], extra: usize) -> f64 {
    let beta = p.beta();
    let base: f64 = w.iter().enumerate().map(|(i, &d)| f64::from(d) * beta.powi(-(i as i32 + 1))).sum();
    let top = all_words(p.alphabet_max(), extra)
        .into_iter()
        .filter_map(|c| {
            let mut v = w.to_vec();
            v.extend(&c);
            oracle(e, &v).then(|| v.iter().enumerate().map(|(i, &d)| f64::from(d) * beta.powi(-(i as i32 + 1))).sum::<f64>())
        })
        .fold(f64::NEG_INFINITY, f64::max);
    top - base
}

#[test]
fn cylinder_length_sandwich() {
    let extra = 10;
    for name in ["golden", "tribonacci", "2"] {
        let a = automaton(name);
        let p = a.param().clone();
        let e = expansion(&p, 32);
        let m = zero_run_profile(&p, 16).unwrap().padding as i32;
        let beta = p.beta();
        for n in 1..=5 {
            for w in all_words(a.alphabet_max(), n).into_iter().filter(|w| oracle(&e, w)) {
                // Continuations of length `extra` miss at most the last cylinder of that length.
                let len = cylinder_length(&p, &e, &w, extra);
                let slack = beta.powi(-(n as i32 + extra as i32));
                let n = n as i32;
                assert!(len + slack >= beta.powi(-(n + m)), "{name} {w:?}: {len}");
                assert!(len <= beta.powi(-n) + 1e-12, "{name} {w:?}: {len}");
            }
        }
    }
}

#[test]
fn approximant_languages_are_nested() {
    for name in ["1.5", "2.5", "1.7320508"] {
        let p = param(name);
        // `m` with a root above 1 only.
        let (ms, autos): (Vec<usize>, Vec<ParryAutomaton>) = p
            .valid_truncation_indices()
            .into_iter()
            .filter(|&m| m <= 10)
            .filter_map(|m| Some((m, ParryAutomaton::build(&p.truncate(m).ok()?).unwrap())))
            .unzip();
        assert!(ms.len() >= 2, "{name}: {ms:?}");
        let amax = p.alphabet_max();
        for n in 1..=8 {
            for w in all_words(amax, n) {
                let accepted: Vec<bool> = autos.iter().map(|a| a.run(&w, 0).unwrap().state().is_some()).collect();
                for k in 1..accepted.len() {
                    assert!(!accepted[k - 1] || accepted[k], "{name}: {w:?} lost between m={} and m={}", ms[k - 1], ms[k]);
                }
                if accepted[accepted.len() - 1] {
                    assert!(is_admissible(&p, &w).unwrap().admissible, "{name}: {w:?}");
                }
            }
        }
    }
}

fn random_full_word(a: &ParryAutomaton, rng: &mut ChaCha8Rng) -> DigitWord {
    let len = rng.gen_range(0..20);
    let mut state = 0;
    let mut w = DigitWord::empty();
    for _ in 0..len {
        let d = rng.gen_range(0..=a.max_digit(state));
        state = a.step(state, d).unwrap();
        w.push(d);
    }
    a.pad_to_full(&w).unwrap()
}

#[test]
fn full_words_concatenate_to_full_words() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for name in ["golden", "tribonacci", "plastic", "1.5", "2.5", "3"] {
        let a = automaton(name);
        for _ in 0..300 {
            let u = random_full_word(&a, &mut rng);
            let v = random_full_word(&a, &mut rng);
            assert!(a.is_full(u.concat(&v).digits()).unwrap(), "{name}: {u} {v}");
        }
    }
}

proptest! {
    #[test]
    fn padding_is_bounded(digits in prop::collection::vec(0u32..3, 0..40), idx in 0usize..4) {
        let a = automaton(["golden", "tribonacci", "plastic", "2.5"][idx]);
        let mut state = 0;
        let mut w = DigitWord::empty();
        for d in digits {
            let d = d.min(a.max_digit(state));
            state = a.step(state, d).unwrap();
            w.push(d);
        }
        let padded = a.pad_to_full(&w).unwrap();
        let profile = zero_run_profile(a.param(), 32).unwrap();
        prop_assert!(padded.len() - w.len() <= profile.padding + a.states());
        prop_assert!(a.is_full(padded.digits()).unwrap());
    }
}
