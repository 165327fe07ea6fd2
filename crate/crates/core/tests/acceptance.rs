//! Acceptance criteria, one test each. Every test prints a single
//! `[PASS]`/`[FAIL]` line; run with `--nocapture` to see them all.

use randcirc_core::analysis::{
    haar_average_purity, log_log_slope, theorem1_floors, theorem1_threshold, tv_mixing_time,
};
use randcirc_core::experiment::{
    cross_validate_engines, reference_steps, run_bound_verification, run_cutoff_experiment,
    run_purity_experiment, CutoffConfig, ExperimentConfig, VerifyConfig, VerifyRecord,
};
use randcirc_core::markov::{
    exact_subset_transition_matrix, omega_size, stationary_distribution, ExactSubsetChain,
};
use randcirc_core::spectral::spectral_gap;
use randcirc_core::{Engine, Reference, Suite};

const SIGMAS: f64 = 3.0;

fn report(id: &str, pass: bool, detail: String) -> bool {
    println!("[{}] {id}: {detail}", if pass { "PASS" } else { "FAIL" });
    pass
}

fn failures(records: &[VerifyRecord]) -> Vec<&VerifyRecord> {
    records.iter().filter(|r| !r.pass).collect()
}

#[test]
fn criterion_1_haar_purity_asymptote() {
    let pts = run_purity_experiment(&ExperimentConfig {
        engine: Engine::Statevector,
        n_qubits: 6,
        n_a: 3,
        steps: vec![2000],
        trials: 2000,
        seed: 101,
    })
    .unwrap();
    let target = haar_average_purity(3, 3);
    let p = &pts[0];
    let pass = (p.mean_purity - target).abs() <= SIGMAS * p.stderr;
    assert!(report(
        "C1 statevector purity N=6 N_A=3 n=2000",
        pass,
        format!(
            "mean {:.6} ± {:.6}, target {target:.6}",
            p.mean_purity, p.stderr
        )
    ));
}

#[test]
fn criterion_2_statevector_matches_exact_chain() {
    let steps = vec![0, 5, 25, 125, 625];
    let mut worst = 0f64;
    let mut pass = true;
    for n in [4usize, 5, 6] {
        let n_a = n / 2;
        let cfg = |engine, trials| ExperimentConfig {
            engine,
            n_qubits: n,
            n_a,
            steps: steps.clone(),
            trials,
            seed: 202 + n as u64,
        };
        let mc = run_purity_experiment(&cfg(Engine::Statevector, 2000)).unwrap();
        let exact = run_purity_experiment(&cfg(Engine::SubsetExact, 0)).unwrap();
        for (m, e) in mc.iter().zip(&exact) {
            let dev = (m.mean_purity - e.mean_purity).abs();
            let ok = dev <= SIGMAS * m.stderr + 1e-12;
            if m.stderr > 0.0 {
                worst = worst.max(dev / m.stderr);
            }
            if !ok {
                println!(
                    "  N={n} step={} mc={} exact={} stderr={}",
                    m.step, m.mean_purity, e.mean_purity, m.stderr
                );
            }
            pass &= ok;
        }
    }
    assert!(report(
        "C2 statevector vs 2^N_B * exact containment, N=4,5,6",
        pass,
        format!("largest deviation {worst:.2} stderr")
    ));
}

#[test]
fn criterion_3_lemma1_envelope() {
    let recs =
        run_bound_verification(&VerifyConfig::new(Suite::Lemma1, (2..=8).collect(), 0)).unwrap();
    let bad = failures(&recs);
    let tightest = recs
        .iter()
        .map(|r| r.lhs - r.rhs)
        .fold(f64::NEG_INFINITY, f64::max);
    assert!(report(
        "C3 Lemma 1 envelope, N=2..8, all N_A, n <= 90N(N-1)",
        bad.is_empty(),
        format!(
            "{} cuts checked, largest deviation minus envelope {tightest:.3e}, failures {bad:?}",
            recs.len()
        )
    ));
}

fn comparison_records() -> Vec<VerifyRecord> {
    run_bound_verification(&VerifyConfig::new(Suite::Comparison, (3..=10).collect(), 0)).unwrap()
}

#[test]
fn criterion_4_spectral_inequalities() {
    let recs: Vec<_> = comparison_records()
        .into_iter()
        .filter(|r| r.check != "laziness")
        .collect();
    let bad = failures(&recs);
    let summary: Vec<String> = recs
        .iter()
        .filter(|r| r.check == "gap_vs_comparison")
        .map(|r| format!("N={} {:.4}>={:.4}", r.n_qubits, r.lhs, r.rhs))
        .collect();
    assert!(report(
        "C4a gap >= alpha*gap_R >= 4/(9N(N-1)), domination, stationarity, reversibility, N=3..10",
        bad.is_empty(),
        format!("{}; failures {bad:?}", summary.join(", "))
    ));
}

#[test]
fn criterion_4_laziness() {
    let recs: Vec<_> = comparison_records()
        .into_iter()
        .filter(|r| r.check == "laziness")
        .collect();
    let bad = failures(&recs);
    let mins: Vec<String> = recs
        .iter()
        .map(|r| format!("N={} {:.4}", r.n_qubits, r.lhs))
        .collect();
    assert!(report(
        "C4b min_S Q(S,S) >= 1/2, N=3..10",
        bad.is_empty(),
        format!("min holding probabilities {}", mins.join(", "))
    ));
}

#[test]
fn criterion_5_theorem1_floors() {
    assert_eq!(theorem1_threshold(8, 0.1).unwrap(), 2387);
    let floors = theorem1_floors(4, 0.0, 0.1).unwrap();
    let mut cfg = VerifyConfig::new(Suite::Theorem1, vec![8], 505);
    cfg.trials = 500;
    let recs = run_bound_verification(&cfg).unwrap();
    let detail: Vec<String> = recs
        .iter()
        .map(|r| {
            format!(
                "{} mean-3σ {:.4} vs floor {:.4} at n={}",
                r.check, r.lhs, r.rhs, r.step
            )
        })
        .collect();
    assert!((recs[0].rhs - floors.entropy).abs() < 1e-12);
    assert!((recs[1].rhs - floors.fidelity).abs() < 1e-12);
    assert!(report(
        "C5 Theorem 1 floors N=8 N_A=4 eps=0.1",
        failures(&recs).is_empty(),
        detail.join("; ")
    ));
}

#[test]
fn criterion_6_stabilizer_statevector_agreement() {
    let mut total = 0;
    let mut mismatches = 0;
    let mut circuits = 0;
    for n in 2..=8 {
        let cv = cross_validate_engines(n, 60, 100, 606 + n as u64).unwrap();
        total += cv.comparisons;
        mismatches += cv.mismatches;
        circuits += 100;
    }
    assert!(report(
        "C6 stabilizer vs statevector entropies, N=2..8",
        mismatches == 0,
        format!("{circuits} circuits, {total} comparisons, {mismatches} mismatches")
    ));
}

#[test]
fn criterion_7_stabilizer_purity_asymptote() {
    let pts = run_purity_experiment(&ExperimentConfig {
        engine: Engine::Stabilizer,
        n_qubits: 8,
        n_a: 4,
        steps: vec![3000],
        trials: 4000,
        seed: 707,
    })
    .unwrap();
    let target = haar_average_purity(4, 4);
    let p = &pts[0];
    let pass = (p.mean_purity - target).abs() <= SIGMAS * p.stderr;
    assert!(report(
        "C7 stabilizer purity N=8 N_A=4 n=3000",
        pass,
        format!(
            "mean {:.6} ± {:.6}, target {target:.6}",
            p.mean_purity, p.stderr
        )
    ));
}

#[test]
fn criterion_8_cutoff_sharpens() {
    let mut ratios = Vec::new();
    let mut pass = true;
    let mut detail = Vec::new();
    for n in [20usize, 40, 80] {
        let out = run_cutoff_experiment(&CutoffConfig {
            n_qubits: n,
            n_a: n / 2,
            trials: 5000,
            max_steps: 3 * reference_steps(n) / 20,
            reference: Reference::AsymptoticEmpirical,
            seed: 808,
            steps: None,
        })
        .unwrap();
        let first = out.curve.points.first().unwrap().tv;
        let last = out.curve.points.last().unwrap().tv;
        pass &= first > 0.9 && last < 0.1;
        match out.report {
            Some(r) => {
                ratios.push(r.ratio);
                detail.push(format!(
                    "N={n} TV0={first:.3} TVend={last:.3} loc={:.1} win={:.1} ratio={:.3}",
                    r.location, r.window, r.ratio
                ));
            }
            None => {
                pass = false;
                detail.push(format!("N={n} no crossings"));
            }
        }
    }
    pass &= ratios.len() == 3 && ratios.windows(2).all(|w| w[1] < w[0]);
    assert!(report(
        "C8 stabilizer TV cutoff, N=20,40,80",
        pass,
        detail.join("; ")
    ));
}

#[test]
fn criterion_9_mixing_scale() {
    let ns: Vec<usize> = (3..=12).collect();
    let mut inv_gaps = Vec::new();
    let mut mix = Vec::new();
    let mut mix_single = Vec::new();
    let mut pass = true;
    for &n in &ns {
        let q = exact_subset_transition_matrix(n).unwrap();
        let m = stationary_distribution(n).unwrap();
        let gap = spectral_gap(&q, &m).unwrap();
        pass &= 1.0 / gap <= 2.25 * (n * n) as f64;
        inv_gaps.push(1.0 / gap);
        let chain = ExactSubsetChain::from_matrix(n, q).unwrap();
        let start = vec![1.0 / omega_size(n) as f64; omega_size(n)];
        let t = tv_mixing_time(chain.matrix(), &start, m.as_slice(), 0.25, 100 * n * n).unwrap();
        mix.push(t.expect("mixes within 100 N^2 steps") as f64);
        let mut single = vec![0.0; omega_size(n)];
        single[0] = 1.0;
        let t = tv_mixing_time(chain.matrix(), &single, m.as_slice(), 0.25, 100 * n * n).unwrap();
        mix_single.push(t.expect("mixes within 100 N^2 steps") as f64);
    }
    let xs: Vec<f64> = ns.iter().map(|&n| n as f64).collect();
    let gap_slope = log_log_slope(&xs, &inv_gaps);
    let mix_slope = log_log_slope(&xs, &mix);
    pass &= gap_slope <= 2.0;
    let nlogn: Vec<f64> = ns.iter().map(|&n| n as f64 * (n as f64).log2()).collect();
    let mix_vs_nlogn = log_log_slope(&nlogn, &mix);
    let single_slope = log_log_slope(&xs, &mix_single);
    assert!(report(
        "C9 1/gap <= (9/4)N^2 and log-log slope <= 2, N=3..12",
        pass,
        format!(
            "1/gap {:?}; slope {gap_slope:.3}; TV<0.25 mixing steps {mix:?}; exponent in N {mix_slope:.3}, in N log N {mix_vs_nlogn:.3}; from a singleton {mix_single:?}, exponent in N {single_slope:.3} (reported)",
            inv_gaps.iter().map(|v| (v * 1000.0).round() / 1000.0).collect::<Vec<_>>()
        )
    ));
}
