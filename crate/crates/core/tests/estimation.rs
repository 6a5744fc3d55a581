use fuzzy_potts::arm_events::ColorSeq;
use fuzzy_potts::estimation::*;
use fuzzy_potts::exponents::{ModelParams, Setting};
use proptest::prelude::*;

fn base(text_extra: &str) -> RunConfig {
    let text = format!(
        "q = 2.0\nr = 0.5\nfamily = \"A\"\ntau = \"RB\"\nladder = [[1, 2], [1, 4], [2, 4]]\n\
         chains = 3\nsamples_per_chain = 20\nburn_in = 5\nseed = 11\n{text_extra}"
    );
    RunConfig::from_text(&text).unwrap()
}

#[test]
fn config_round_trips_through_text() {
    let c = base("padding = 3\noutput = \"x.csv\"\n");
    assert_eq!(RunConfig::from_text(&c.to_text()).unwrap(), c);
    assert_eq!(c.setting, Setting::Plane);
    assert_eq!(c.window_radius(), 12);
}

#[test]
fn readme_example_config_parses() {
    let readme = include_str!("../../../README.md");
    let block = readme
        .split("```toml\n")
        .nth(1)
        .and_then(|b| b.split("```").next())
        .expect("toml block");
    let cfg = RunConfig::from_text(block).unwrap();
    assert_eq!(cfg.family, EventFamily::APlus);
    assert_eq!(cfg.measure, Setting::Plane);
    assert_eq!(cfg.total_samples(), 100_000);
    assert_eq!(cfg.window_radius(), 128);
}

#[test]
fn config_rejects_bad_input() {
    let bad = [
        "q = 2.0\nr = 0.5\nfamily = \"A\"\ntau = \"RB\"\nladder = [[3, 2]]\nsamples_per_chain = 1\n",
        "q = 2.0\nr = 0.5\nfamily = \"A\"\ntau = \"RB\"\nladder = [[0, 2]]\nsamples_per_chain = 1\n",
        "q = 2.0\nr = 0.5\nfamily = \"A+\"\ntau = \"RB\"\nladder = [[1, 2]]\nsamples_per_chain = 1\npadding = 1\n",
        "q = 2.0\nr = 0.5\nfamily = \"A\"\ntau = \"RB\"\nladder = [[1, 2]]\nsamples_per_chain = 1\nmeasure = \"halfplane\"\n",
        "q = 2.0\nr = 0.5\nfamily = \"A\"\ntau = \"RB\"\nsetting = \"halfplane\"\nladder = [[1, 2]]\nsamples_per_chain = 1\n",
        "q = 2.0\nr = 0.5\nfamily = \"FK\"\ntau = \"01\"\nladder = [[1, 2]]\nsamples_per_chain = 1\n",
        "q = 5.0\nr = 0.5\nfamily = \"A\"\ntau = \"RB\"\nladder = [[1, 2]]\nsamples_per_chain = 1\n",
        "q = 2.0\nr = 1.5\nfamily = \"A\"\ntau = \"RB\"\nladder = [[1, 2]]\nsamples_per_chain = 1\n",
        "q = 2.0\nr = 0.5\nfamily = \"A\"\ntau = \"RXB\"\nladder = [[1, 2]]\nsamples_per_chain = 1\n",
        "q = 2.0\nr = 0.5\nfamily = \"Z\"\ntau = \"RB\"\nladder = [[1, 2]]\nsamples_per_chain = 1\n",
        "q = 2.0\nr = 0.5\nfamily = \"A\"\ntau = \"RB\"\nladder = [[1, 2]]\nsamples_per_chain = 1\nbogus = 3\n",
    ];
    for t in bad {
        assert!(
            matches!(RunConfig::from_text(t), Err(EstimationError::Config(_))),
            "accepted:\n{t}"
        );
    }
}

#[test]
fn runs_are_deterministic_and_thread_invariant() {
    let c = base("");
    let a = run_experiment(&c, 1).unwrap();
    let b = run_experiment(&c, 1).unwrap();
    let d = run_experiment(&c, 3).unwrap();
    assert_eq!(a, b);
    assert_eq!(a, d);
    assert_eq!(a.to_csv(None), d.to_csv(None));
    for r in &a.rows {
        assert_eq!(r.trials, 60);
        assert!(r.hits_exclusive <= r.hits && r.hits <= r.trials);
    }
    let mut e = c.clone();
    e.seed = 12;
    assert_ne!(run_experiment(&e, 1).unwrap().rows, a.rows);
}

#[test]
fn event_stream_matches_tally() {
    let c = base("");
    let (t, ev) = run_experiment_with_events(&c, 2, true).unwrap();
    assert_eq!(ev.len(), 60 * 3);
    for r in &t.rows {
        let hits = ev
            .iter()
            .filter(|e| e.m == r.m && e.n == r.n && e.occurs)
            .count() as u64;
        assert_eq!(hits, r.hits);
    }
    assert_eq!(
        EVENT_HEADER.split(',').count(),
        ev[0].to_csv().split(',').count()
    );
}

#[test]
fn every_family_runs() {
    let cases = [
        ("A", "RBR", "plane"),
        ("As", "RB", "plane"),
        ("A+", "RB", "halfplane"),
        ("A+s", "BR", "halfplane"),
        ("FK", "01", "plane"),
        ("FK", "10", "halfplane"),
        ("B", "RB", "plane"),
        ("B+", "RB", "halfplane"),
        ("B++", "RBR", "halfplane"),
    ];
    for (fam, tau, setting) in cases {
        let t = format!(
            "q = 1.5\nr = 0.4\nfamily = \"{fam}\"\ntau = \"{tau}\"\nsetting = \"{setting}\"\n\
             ladder = [[1, 3]]\nsamples_per_chain = 4\n"
        );
        let c = RunConfig::from_text(&t).unwrap();
        let tab = run_experiment(&c, 1).unwrap();
        assert_eq!(tab.rows[0].trials, 4, "{fam}");
    }
}

#[test]
fn csv_has_schema_and_stable_body() {
    let c = base("");
    let t = run_experiment(&c, 1).unwrap();
    let a = t.to_csv(Some(1));
    let b = t.to_csv(Some(2));
    assert!(a.starts_with(&format!("# schema={SCHEMA}\n")));
    assert_ne!(a, b);
    let strip = |s: &str| {
        s.lines()
            .filter(|l| !l.starts_with("# generated="))
            .collect::<Vec<_>>()
            .join("\n")
    };
    assert_eq!(strip(&a), strip(&b));
    assert_eq!(strip(&a), strip(&t.to_csv(None)));
    let body: Vec<&str> = a.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(body[0], TABLE_HEADER);
    assert_eq!(body.len(), 1 + t.rows.len());
}

#[test]
fn colour_swap_symmetry_at_half() {
    // At r = 1/2 the colours are exchangeable, so RB and BR have equal law.
    let a = base("");
    let mut b = a.clone();
    b.tau = ArmSeq::Colors("BR".parse().unwrap());
    let ta = run_experiment(&a, 1).unwrap();
    let tb = run_experiment(&b, 1).unwrap();
    for (x, y) in ta.rows.iter().zip(&tb.rows) {
        assert!(
            x.ci_high >= y.ci_low && y.ci_high >= x.ci_low,
            "{x:?} {y:?}"
        );
    }
}

#[test]
fn red_arm_probability_increases_with_r() {
    let mk = |r: f64| {
        let mut c = base("");
        c.tau = ArmSeq::Colors("R".parse().unwrap());
        c.r = r;
        c.samples_per_chain = 30;
        run_experiment(&c, 1).unwrap()
    };
    // Same seed: clusters agree and colour uniforms are shared, so red sets
    // grow with r and the one-arm indicator is monotone sample by sample.
    let lo = mk(0.3);
    let hi = mk(0.7);
    for (a, b) in lo.rows.iter().zip(&hi.rows) {
        assert!(a.hits <= b.hits, "{} > {}", a.hits, b.hits);
    }
}

fn wilson_oracle(h: u64, n: u64) -> (f64, f64) {
    // Solve |p̂ - p| = z sqrt(p(1-p)/n) for p by bisection.
    let z = 1.959_963_984_540_054_f64;
    let ph = h as f64 / n as f64;
    let g = |p: f64| (ph - p).powi(2) - z * z * p * (1.0 - p) / n as f64;
    let root = |mut a: f64, mut b: f64| {
        for _ in 0..200 {
            let m = 0.5 * (a + b);
            if (g(a) > 0.0) == (g(m) > 0.0) {
                a = m
            } else {
                b = m
            }
        }
        0.5 * (a + b)
    };
    let lo = if h == 0 { 0.0 } else { root(0.0, ph) };
    let hi = if h == n { 1.0 } else { root(ph, 1.0) };
    (lo, hi)
}

proptest! {
    #[test]
    fn wilson_matches_score_inversion(n in 1u64..5000, frac in 0.0f64..=1.0) {
        let h = ((n as f64) * frac).round() as u64;
        let (p, lo, hi) = wilson(h, n);
        let (olo, ohi) = wilson_oracle(h, n);
        prop_assert!((lo - olo).abs() < 1e-9 && (hi - ohi).abs() < 1e-9);
        prop_assert!(lo <= p && p <= hi && 0.0 <= lo && hi <= 1.0);
    }
}

fn synthetic_rows(alpha: f64, c: f64) -> Vec<EstimateRow> {
    [(1, 4), (1, 8), (2, 16), (1, 16), (1, 32)]
        .iter()
        .map(|&(m, n)| {
            let p = c * (m as f64 / n as f64).powf(alpha);
            let mut r = EstimateRow::new(m, n, 10_000, (p * 10_000.0) as u64, 0);
            let rel = 0.05;
            r.p_hat = p;
            r.ci_low = p * (1.0 - rel);
            r.ci_high = p * (1.0 + rel);
            r
        })
        .collect()
}

#[test]
fn noiseless_fit_recovers_slope() {
    let f = fit_rows(&synthetic_rows(0.625, 0.8)).unwrap();
    assert!((f.exponent - 0.625).abs() < 1e-10);
    assert!((f.intercept - 0.8f64.ln()).abs() < 1e-10);
    assert_eq!(f.rungs_used, 5);
}

#[test]
fn fit_needs_three_rungs() {
    let rows = synthetic_rows(0.625, 0.8);
    assert!(matches!(fit_rows(&rows[..1]), Err(FitError::Undefined(_))));
    assert!(matches!(fit_rows(&rows[..2]), Err(FitError::Undefined(_))));
    let mut sparse = rows.clone();
    for r in sparse.iter_mut().skip(2) {
        *r = EstimateRow::new(r.m, r.n, 100, 3, 3);
    }
    assert!(matches!(fit_rows(&sparse), Err(FitError::Undefined(_))));
    let zero: Vec<_> = rows
        .iter()
        .map(|r| EstimateRow::new(r.m, r.n, 100, 0, 0))
        .collect();
    assert!(matches!(fit_rows(&zero), Err(FitError::Undefined(_))));
}

#[test]
fn fit_interval_covers_truth() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
    let alpha = 0.625;
    let ladder = [(1, 2), (1, 4), (1, 8), (1, 16)];
    let trials = 4000u64;
    let mut covered = 0;
    for _ in 0..100 {
        let rows: Vec<EstimateRow> = ladder
            .iter()
            .map(|&(m, n)| {
                let p = 0.9 * (m as f64 / n as f64).powf(alpha);
                let h = (0..trials).filter(|_| rng.random::<f64>() < p).count() as u64;
                EstimateRow::new(m, n, trials, h, h)
            })
            .collect();
        let f = fit_rows(&rows).unwrap();
        if (f.exponent - alpha).abs() <= 1.96 * f.stderr {
            covered += 1;
        }
    }
    assert!(covered >= 93, "coverage {covered}/100");
}

#[test]
fn quasi_mult_table_from_rows() {
    let rows = vec![
        EstimateRow::new(1, 8, 1000, 100, 100),
        EstimateRow::new(1, 2, 1000, 500, 500),
        EstimateRow::new(2, 8, 1000, 200, 200),
        EstimateRow::new(2, 2, 1000, 1000, 1000),
        EstimateRow::new(1, 4, 1000, 0, 0),
    ];
    let t = quasi_mult_from_table(&rows, &[(1, 2, 8), (2, 2, 2), (1, 4, 8)]);
    assert!((t[0].ratio - 1.0).abs() < 1e-12);
    assert!(t[0].ci_low < 1.0 && t[0].ci_high > 1.0);
    assert_eq!(t[0].flag, None);
    assert_eq!(t[1].flag, Some(QmFlag::Degenerate));
    assert_eq!(t[2].flag, Some(QmFlag::ZeroDenominator));
    assert_eq!(qm_ladder(&[(1, 2, 8)]), vec![(1, 2), (1, 8), (2, 8)]);
}

#[test]
fn quasi_mult_rejects_non_alternating() {
    let mut c = base("");
    c.tau = ArmSeq::Colors("RRB".parse().unwrap());
    assert!(matches!(
        quasi_mult_report(&c, &[(1, 2, 4)], 1),
        Err(EstimationError::Config(_))
    ));
    let c = base("");
    assert!(quasi_mult_report(&c, &[(2, 1, 4)], 1).is_err());
    let (tab, rows) = quasi_mult_report(&c, &[(1, 2, 4)], 1).unwrap();
    assert_eq!(tab.rows.len(), 3);
    assert_eq!(rows.len(), 1);
}

#[test]
fn theory_comparison_rows() {
    let p = ModelParams::new(2.0, 0.5).unwrap();
    let tau: ColorSeq = "RB".parse().unwrap();
    let fit = fit_rows(&synthetic_rows(0.625, 1.0)).unwrap();
    let rows = compare_to_theory(&[(tau, Setting::Halfplane, fit)], &p).unwrap();
    assert_eq!(rows[0].setting, "halfplane");
    let th = rows[0].theoretical.unwrap();
    assert!((th - 1.0).abs() < 1e-9);
    assert!(rows[0].z.unwrap() < 0.0);
}

#[test]
fn report_serialises() {
    let c = base("");
    let r = build_report(&c, 1).unwrap();
    let j = serde_json::to_value(&r).unwrap();
    assert_eq!(j["schema"], SCHEMA);
    assert_eq!(j["rows"].as_array().unwrap().len(), 3);
    assert!(!j["flags"].as_array().unwrap().is_empty());
}
