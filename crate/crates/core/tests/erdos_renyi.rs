use betadim::erdos_renyi::default_checkpoints;
use betadim::*;
use proptest::prelude::*;

fn brute_max(digits: &[u32], width: usize) -> u64 {
    digits.windows(width).map(|w| w.iter().map(|&d| u64::from(d)).sum()).max().unwrap()
}

fn alternating() -> DigitStream {
    DigitStream::periodic(DigitWord::new(vec![1, 0])).unwrap()
}

proptest! {
    #[test]
    fn window_max_dominates_every_window(digits in prop::collection::vec(0u32..3, 1..=64)) {
        let w = DigitWord::new(digits.clone());
        for width in 1..=digits.len() {
            let got = window_max_sum(&w, width).unwrap();
            prop_assert_eq!(got, brute_max(&digits, width));
            for start in 0..=digits.len() - width {
                let s: u64 = digits[start..start + width].iter().map(|&d| u64::from(d)).sum();
                prop_assert!(got >= s);
            }
        }
        prop_assert_eq!(window_max_sum(&w, digits.len()).unwrap(), w.sum());
        prop_assert_eq!(window_max_sum(&w, 1).unwrap(), u64::from(*digits.iter().max().unwrap()));
    }

    #[test]
    fn phi_stays_in_range(n in 1usize..1_000_000, c in 0.01f64..100.0, k in 0usize..5) {
        let kind = match k {
            0 => WindowKind::Identity,
            1 => WindowKind::CLog(c),
            2 => WindowKind::CLogLog(c),
            3 => WindowKind::CArctan(c),
            _ => WindowKind::ExpLnNu(c.fract().max(0.05).min(0.95)),
        };
        let phi = WindowFunction::new(kind).unwrap().phi(n).unwrap();
        prop_assert!(phi >= 1 && phi <= n);
    }

    #[test]
    fn ratio_trace_is_scale_invariant(c in 0.01f64..1000.0, k in 0usize..3) {
        let (a, b) = match k {
            0 => (WindowKind::CLog(1.0), WindowKind::CLog(c)),
            1 => (WindowKind::CLogLog(1.0), WindowKind::CLogLog(c)),
            _ => (WindowKind::CArctan(1.0), WindowKind::CArctan(c)),
        };
        let ra = slowly_varying_check(&a, 5000).unwrap();
        let rb = slowly_varying_check(&b, 5000).unwrap();
        let x: Vec<f64> = ra.rows.iter().map(|r| r.ratio).collect();
        let y: Vec<f64> = rb.rows.iter().map(|r| r.ratio).collect();
        prop_assert_eq!(x, y);
        prop_assert_eq!(ra.ratio_nonincreasing_last_decade, rb.ratio_nonincreasing_last_decade);
    }
}

#[test]
fn zero_stream_has_zero_averages() {
    let phi = WindowFunction::new(WindowKind::CLog(1.0)).unwrap();
    let t = er_average_trace(&mut DigitStream::zeros(), &phi, &default_checkpoints(10_000)).unwrap();
    assert!(t.rows.iter().all(|r| r.i == 0 && r.a == 0.0));
    assert!(t.clamped_checkpoints > 0);
}

#[test]
fn identity_window_gives_digit_mean() {
    let phi = WindowFunction::new(WindowKind::Identity).unwrap();
    let t = er_average_trace(&mut alternating(), &phi, &default_checkpoints(10_000)).unwrap();
    let last = t.rows.last().unwrap();
    assert_eq!(last.n, 10_000);
    assert!((last.a - 0.5).abs() < 1e-3);
}

#[test]
fn log_window_over_alternating_digits() {
    let phi = WindowFunction::new(WindowKind::CLog(5.0)).unwrap();
    let t = er_average_trace(&mut alternating(), &phi, &default_checkpoints(100_000)).unwrap();
    for r in &t.rows {
        assert_eq!(r.i as usize, r.phi_n.div_ceil(2), "n = {}", r.n);
        assert!((r.a - 0.5).abs() <= 1.0 / r.phi_n as f64 + 1e-12);
    }
    assert!(t.last_spread < 0.05);
}

#[test]
fn rejects_bad_checkpoints() {
    let phi = WindowFunction::new(WindowKind::Identity).unwrap();
    assert!(er_average_trace(&mut alternating(), &phi, &[]).is_err());
    assert!(er_average_trace(&mut alternating(), &phi, &[5, 5]).is_err());
    assert!(er_average_trace(&mut DigitStream::finite(DigitWord::zeros(3)), &phi, &[10]).is_err());
    assert!(WindowFunction::new(WindowKind::CLog(-1.0)).is_err());
}

#[test]
fn slowly_varying_examples() {
    let log = slowly_varying_check(&WindowKind::CLog(1.0), 10_000).unwrap();
    let last = log.rows.last().unwrap();
    assert_eq!(last.n, 10_000);
    assert!((last.ratio - 0.1086).abs() < 1e-3);
    assert!(log.ratio_nonincreasing_last_decade && log.passes);

    let arctan = slowly_varying_check(&WindowKind::CArctan(1.0), 10_000).unwrap();
    assert_eq!(arctan.bounded_by, Some(std::f64::consts::FRAC_PI_2));
    let last = arctan.rows.last().unwrap();
    assert!(last.ratio < 1e-3 && last.linear_ratio < 1e-3 && last.log_ratio < 0.1);

    let table: Vec<f64> = (1..=1000).map(|n| n as f64).collect();
    let id = slowly_varying_check(&WindowKind::Custom(table), 1000).unwrap();
    assert!(id.rows.iter().all(|r| (r.ratio - 1.0).abs() < 1e-9));
    assert!(!id.passes);

    let ll = slowly_varying_check(&WindowKind::CLogLog(1.0), 100_000).unwrap();
    assert!(ll.passes);
    let nu = slowly_varying_check(&WindowKind::ExpLnNu(0.5), 100_000).unwrap();
    assert!(nu.ratio_nonincreasing_last_decade);
}

#[test]
fn checkpoints_are_geometric_and_end_at_n_max() {
    let c = default_checkpoints(100_000);
    assert_eq!(c.first(), Some(&1));
    assert_eq!(c.last(), Some(&100_000));
    assert!(c.windows(2).all(|w| w[0] < w[1]));
}
