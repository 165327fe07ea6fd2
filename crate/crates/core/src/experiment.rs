//! Experiment drivers: purity and entropy series, TV cutoff curves and the
//! bound-verification suites.
//!
//! Trajectory `i` of every experiment draws from `RngStream::new(seed, i)`;
//! results are gathered in trajectory order, so output is a pure function of
//! the configuration.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::{
    cutoff_report, haar_average_purity, theorem1_floors, theorem1_threshold, CutoffReport,
    EntropyHistogram, TvCurve, TvPoint,
};
use crate::error::{Error, Result};
use crate::gates::{sample_gate_event, GateSet};
use crate::markov::{
    containment_on_omega, containment_trajectories, omega_size, stationary_distribution,
    ExactSubsetChain, MAX_EXACT_SUBSET_QUBITS,
};
use crate::partition::QubitPartition;
use crate::rng::RngStream;
use crate::spectral::{
    comparison_alpha, comparison_chain_matrix, gap_lower_bound, lemma1_envelope, spectral_analysis,
    spectral_gap, verify_comparison_domination,
};
use crate::stabilizer::StabilizerTableau;
use crate::statevector::{entropy_bits, overlap_from_spectrum, StateVector};
use crate::stats::Estimate;

/// Largest register the statevector engine accepts in experiments.
pub const MAX_STATEVECTOR_EXPERIMENT_QUBITS: usize = 14;
/// Largest register run through the statevector engine by the cutoff driver.
pub const MAX_CUTOFF_STATEVECTOR_QUBITS: usize = 12;
/// Largest register for which a Haar-sampled reference is offered.
pub const MAX_HAAR_REFERENCE_QUBITS: usize = 10;
pub const HAAR_REFERENCE_SAMPLES: usize = 10_000;
/// Default number of points in a dense cutoff schedule.
pub const CUTOFF_SCHEDULE_POINTS: usize = 200;
const MAX_STABILIZER_QUBITS: usize = 4096;
const REFERENCE_STREAM_OFFSET: u64 = 1 << 40;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Engine {
    Statevector,
    SubsetMc,
    SubsetExact,
    Stabilizer,
}

impl Engine {
    pub fn name(self) -> &'static str {
        match self {
            Engine::Statevector => "statevector",
            Engine::SubsetMc => "subset_mc",
            Engine::SubsetExact => "subset_exact",
            Engine::Stabilizer => "stabilizer",
        }
    }

    /// Largest `N` the engine accepts.
    pub fn max_qubits(self) -> usize {
        match self {
            Engine::Statevector => MAX_STATEVECTOR_EXPERIMENT_QUBITS,
            Engine::SubsetExact => MAX_EXACT_SUBSET_QUBITS,
            Engine::SubsetMc | Engine::Stabilizer => MAX_STABILIZER_QUBITS,
        }
    }

    fn check(self, n: usize) -> Result<()> {
        if n < 2 {
            return Err(Error::TooFewQubits(n));
        }
        if n > self.max_qubits() {
            return Err(Error::TooManyQubits {
                what: self.name(),
                n_qubits: n,
                limit: self.max_qubits(),
            });
        }
        Ok(())
    }
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Engine {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "statevector" => Ok(Engine::Statevector),
            "subset_mc" => Ok(Engine::SubsetMc),
            "subset_exact" => Ok(Engine::SubsetExact),
            "stabilizer" => Ok(Engine::Stabilizer),
            _ => Err(Error::Parse(format!("unknown engine '{s}'"))),
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Reference {
    AsymptoticEmpirical,
    HaarSampled,
}

impl FromStr for Reference {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "asymptotic_empirical" => Ok(Reference::AsymptoticEmpirical),
            "haar_sampled" => Ok(Reference::HaarSampled),
            _ => Err(Error::Parse(format!("unknown reference '{s}'"))),
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Lemma1,
    Theorem1,
    Comparison,
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lemma1" => Ok(Suite::Lemma1),
            "theorem1" => Ok(Suite::Theorem1),
            "comparison" => Ok(Suite::Comparison),
            _ => Err(Error::Parse(format!("unknown suite '{s}'"))),
        }
    }
}

/// Parses a step schedule: `0,5,25`, `geo:MAX` (0, 1, 2, 4, …, MAX) or
/// `lin:MAX[:POINTS]`. The result is sorted and deduplicated.
pub fn parse_schedule(spec: &str) -> Result<Vec<usize>> {
    let spec = spec.trim();
    let parse_num = |s: &str| {
        s.trim()
            .parse::<usize>()
            .map_err(|_| Error::Parse(format!("bad step count '{s}' in schedule '{spec}'")))
    };
    let mut steps = if let Some(rest) = spec.strip_prefix("geo:") {
        geometric_schedule(parse_num(rest)?)
    } else if let Some(rest) = spec.strip_prefix("lin:") {
        let mut parts = rest.splitn(2, ':');
        let max = parse_num(parts.next().unwrap_or(""))?;
        let points = match parts.next() {
            Some(p) => parse_num(p)?,
            None => CUTOFF_SCHEDULE_POINTS,
        };
        linear_schedule(max, points)
    } else {
        spec.split(',').map(parse_num).collect::<Result<Vec<_>>>()?
    };
    if steps.is_empty() {
        return Err(Error::Parse("empty schedule".into()));
    }
    steps.sort_unstable();
    steps.dedup();
    Ok(steps)
}

pub fn geometric_schedule(max: usize) -> Vec<usize> {
    let mut out = vec![0];
    let mut s = 1;
    while s <= max {
        out.push(s);
        s *= 2;
    }
    if *out.last().expect("nonempty") != max {
        out.push(max);
    }
    out
}

/// About `points` evenly spaced steps from 0 to `max` inclusive.
pub fn linear_schedule(max: usize, points: usize) -> Vec<usize> {
    let stride = max.div_ceil(points.max(1)).max(1);
    let mut out: Vec<usize> = (0..=max).step_by(stride).collect();
    if *out.last().expect("nonempty") != max {
        out.push(max);
    }
    out
}

/// Runs `trials` independent trajectories in parallel, measuring at each
/// sampled step; returns measurements indexed `[trial][step]`.
fn run_trajectories<S, T, I, A, M>(
    trials: usize,
    seed: u64,
    stream_offset: u64,
    steps: &[usize],
    init: I,
    advance: A,
    measure: M,
) -> Result<Vec<Vec<T>>>
where
    T: Send,
    I: Fn() -> Result<S> + Sync,
    A: Fn(&mut S, &mut RngStream) -> Result<()> + Sync,
    M: Fn(&S) -> Result<T> + Sync,
{
    (0..trials as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = RngStream::new(seed, stream_offset + i);
            let mut state = init()?;
            let mut at = 0;
            steps
                .iter()
                .map(|&target| {
                    while at < target {
                        advance(&mut state, &mut rng)?;
                        at += 1;
                    }
                    measure(&state)
                })
                .collect()
        })
        .collect()
}

fn column<T, F: Fn(&T) -> f64>(rows: &[Vec<T>], k: usize, f: F) -> Vec<f64> {
    rows.iter().map(|r| f(&r[k])).collect()
}

fn haar_advance(n: usize) -> impl Fn(&mut StateVector, &mut RngStream) -> Result<()> + Sync {
    move |s, rng| s.apply_gate(&sample_gate_event(rng, n, GateSet::Haar)?)
}

fn clifford_advance(
    n: usize,
) -> impl Fn(&mut StabilizerTableau, &mut RngStream) -> Result<()> + Sync {
    move |t, rng| t.apply_clifford(&sample_gate_event(rng, n, GateSet::Stabilizer)?)
}

/// Shared configuration for purity and entropy series.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub engine: Engine,
    pub n_qubits: usize,
    pub n_a: usize,
    pub steps: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
}

impl ExperimentConfig {
    fn validate(&self) -> Result<QubitPartition> {
        self.engine.check(self.n_qubits)?;
        if self.steps.is_empty() {
            return Err(Error::InvalidArgument("empty step schedule".into()));
        }
        crate::markov::check_schedule(&self.steps)?;
        if self.trials == 0 && self.engine != Engine::SubsetExact {
            return Err(Error::InvalidArgument("trials must be at least 1".into()));
        }
        QubitPartition::first(self.n_qubits, self.n_a)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PurityPoint {
    pub step: usize,
    pub mean_purity: f64,
    pub stderr: f64,
    pub engine: Engine,
}

pub fn run_purity_experiment(cfg: &ExperimentConfig) -> Result<Vec<PurityPoint>> {
    let part = cfg.validate()?;
    let n = cfg.n_qubits;
    let estimates: Vec<Estimate> = match cfg.engine {
        Engine::Statevector => {
            let rows = run_trajectories(
                cfg.trials,
                cfg.seed,
                0,
                &cfg.steps,
                || StateVector::zero(n),
                haar_advance(n),
                |s| s.reduced_purity(&part),
            )?;
            (0..cfg.steps.len())
                .map(|k| Estimate::from_samples(&column(&rows, k, |&x| x)))
                .collect()
        }
        Engine::Stabilizer => {
            let rows = run_trajectories(
                cfg.trials,
                cfg.seed,
                0,
                &cfg.steps,
                || StabilizerTableau::zero(n),
                clifford_advance(n),
                |t| t.stabilizer_entropy(&part),
            )?;
            (0..cfg.steps.len())
                .map(|k| Estimate::from_samples(&column(&rows, k, |&e| (-(e as f64)).exp2())))
                .collect()
        }
        Engine::SubsetMc => {
            let scale = 2f64.powi(part.n_b() as i32);
            containment_trajectories(&part, &cfg.steps, cfg.trials, cfg.seed)?
                .into_iter()
                .map(|e| Estimate {
                    mean: scale * e.mean,
                    stderr: scale * e.stderr,
                    samples: e.samples,
                })
                .collect()
        }
        Engine::SubsetExact => ExactSubsetChain::new(n)?
            .purity_series(&part, &cfg.steps)?
            .into_iter()
            .map(Estimate::exact)
            .collect(),
    };
    Ok(cfg
        .steps
        .iter()
        .zip(estimates)
        .map(|(&step, e)| PurityPoint {
            step,
            mean_purity: e.mean,
            stderr: e.stderr,
            engine: cfg.engine,
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntropyPoint {
    pub step: usize,
    pub mean_entropy: f64,
    pub stderr: f64,
    pub engine: Engine,
    /// Mean maximal overlap with maximally entangled states (statevector
    /// engine, `N_A ≤ N_B` only).
    pub overlap: Option<Estimate>,
    pub purity: Estimate,
    pub histogram: EntropyHistogram,
}

#[derive(Copy, Clone)]
struct EntropySample {
    entropy: f64,
    overlap: f64,
    purity: f64,
}

fn statevector_sample(
    s: &StateVector,
    part: &QubitPartition,
    with_overlap: bool,
) -> Result<EntropySample> {
    let spectrum = s.schmidt_spectrum(part)?;
    Ok(EntropySample {
        entropy: entropy_bits(&spectrum),
        overlap: if with_overlap {
            overlap_from_spectrum(&spectrum, part.n_a())
        } else {
            f64::NAN
        },
        purity: spectrum.iter().map(|l| l * l).sum(),
    })
}

pub fn run_entropy_experiment(cfg: &ExperimentConfig) -> Result<Vec<EntropyPoint>> {
    let part = cfg.validate()?;
    let n = cfg.n_qubits;
    let with_overlap = part.n_a() <= part.n_b();
    let rows: Vec<Vec<EntropySample>> = match cfg.engine {
        Engine::Statevector => run_trajectories(
            cfg.trials,
            cfg.seed,
            0,
            &cfg.steps,
            || StateVector::zero(n),
            haar_advance(n),
            |s| statevector_sample(s, &part, with_overlap),
        )?,
        Engine::Stabilizer => run_trajectories(
            cfg.trials,
            cfg.seed,
            0,
            &cfg.steps,
            || StabilizerTableau::zero(n),
            clifford_advance(n),
            |t| {
                let e = t.stabilizer_entropy(&part)? as f64;
                Ok(EntropySample {
                    entropy: e,
                    overlap: f64::NAN,
                    purity: (-e).exp2(),
                })
            },
        )?,
        other => {
            return Err(Error::InvalidArgument(format!(
                "engine {other} does not produce entropies"
            )))
        }
    };
    Ok(cfg
        .steps
        .iter()
        .enumerate()
        .map(|(k, &step)| {
            let entropies = column(&rows, k, |s| s.entropy);
            let e = Estimate::from_samples(&entropies);
            let overlap = (cfg.engine == Engine::Statevector && with_overlap)
                .then(|| Estimate::from_samples(&column(&rows, k, |s| s.overlap)));
            EntropyPoint {
                step,
                mean_entropy: e.mean,
                stderr: e.stderr,
                engine: cfg.engine,
                overlap,
                purity: Estimate::from_samples(&column(&rows, k, |s| s.purity)),
                histogram: EntropyHistogram::from_entropies(n, part.n_a(), step, &entropies),
            }
        })
        .collect())
}

/// Burn-in for the self-generated reference: `20·⌈N log₂ N⌉`.
pub fn reference_steps(n: usize) -> usize {
    20 * (n as f64 * (n as f64).log2()).ceil() as usize
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CutoffConfig {
    pub n_qubits: usize,
    pub n_a: usize,
    pub trials: usize,
    pub max_steps: usize,
    pub reference: Reference,
    pub seed: u64,
    /// Explicit schedule; defaults to a dense linear one up to `max_steps`.
    pub steps: Option<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CutoffOutcome {
    pub engine: Engine,
    pub curve: TvCurve,
    pub report: Option<CutoffReport>,
    pub reference: EntropyHistogram,
}

pub fn run_cutoff_experiment(cfg: &CutoffConfig) -> Result<CutoffOutcome> {
    let n = cfg.n_qubits;
    let part = QubitPartition::first(n, cfg.n_a)?;
    let bins = part.n_a() + 1;
    if cfg.trials < 10 * bins {
        return Err(Error::InvalidArgument(format!(
            "{} trials is fewer than 10 per histogram bin ({bins} bins)",
            cfg.trials
        )));
    }
    let engine = if n > MAX_CUTOFF_STATEVECTOR_QUBITS {
        Engine::Stabilizer
    } else {
        Engine::Statevector
    };
    engine.check(n)?;
    let steps = match &cfg.steps {
        Some(s) => {
            crate::markov::check_schedule(s)?;
            s.clone()
        }
        None => linear_schedule(cfg.max_steps, CUTOFF_SCHEDULE_POINTS),
    };
    let entropies = |trials: usize, offset: u64, steps: &[usize]| -> Result<Vec<Vec<f64>>> {
        match engine {
            Engine::Stabilizer => run_trajectories(
                trials,
                cfg.seed,
                offset,
                steps,
                || StabilizerTableau::zero(n),
                clifford_advance(n),
                |t| Ok(t.stabilizer_entropy(&part)? as f64),
            ),
            _ => run_trajectories(
                trials,
                cfg.seed,
                offset,
                steps,
                || StateVector::zero(n),
                haar_advance(n),
                |s| s.entanglement_entropy(&part),
            ),
        }
    };
    let reference = match cfg.reference {
        Reference::HaarSampled => {
            if engine != Engine::Statevector || n > MAX_HAAR_REFERENCE_QUBITS {
                return Err(Error::TooManyQubits {
                    what: "haar_sampled reference",
                    n_qubits: n,
                    limit: MAX_HAAR_REFERENCE_QUBITS,
                });
            }
            let values = (0..HAAR_REFERENCE_SAMPLES as u64)
                .into_par_iter()
                .map(|i| {
                    let mut rng = RngStream::new(cfg.seed, REFERENCE_STREAM_OFFSET + i);
                    StateVector::haar_random(n, &mut rng)?.entanglement_entropy(&part)
                })
                .collect::<Result<Vec<f64>>>()?;
            EntropyHistogram::from_entropies(n, part.n_a(), 0, &values)
        }
        Reference::AsymptoticEmpirical => {
            let n_ref = reference_steps(n);
            let rows = entropies(cfg.trials, REFERENCE_STREAM_OFFSET, &[n_ref])?;
            EntropyHistogram::from_entropies(n, part.n_a(), n_ref, &column(&rows, 0, |&x| x))
        }
    };
    let rows = entropies(cfg.trials, 0, &steps)?;
    let points = steps
        .iter()
        .enumerate()
        .map(|(k, &step)| {
            let h =
                EntropyHistogram::from_entropies(n, part.n_a(), step, &column(&rows, k, |&x| x));
            Ok(TvPoint {
                step,
                tv: h.tv_distance(&reference)?,
                tv_err: h.tv_error(&reference),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let curve = TvCurve { points };
    let report = cutoff_report(&curve, n);
    Ok(CutoffOutcome {
        engine,
        curve,
        report,
        reference,
    })
}

/// Outcome of running identical Clifford circuits through both engines.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CrossValidation {
    pub comparisons: usize,
    pub max_deviation: f64,
    pub mismatches: usize,
}

/// Drives a tableau and a statevector with the same stabilizer-set gate
/// sequence and compares entropies across every cut `{0..k}` at every step.
pub fn cross_validate_engines(
    n: usize,
    n_steps: usize,
    circuits: usize,
    seed: u64,
) -> Result<CrossValidation> {
    Engine::Statevector.check(n)?;
    let parts = (1..n)
        .map(|k| QubitPartition::first(n, k))
        .collect::<Result<Vec<_>>>()?;
    let per_circuit = (0..circuits as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = RngStream::new(seed, i);
            let mut sv = StateVector::zero(n)?;
            let mut tab = StabilizerTableau::zero(n)?;
            let (mut count, mut worst, mut bad) = (0usize, 0f64, 0usize);
            for _ in 0..=n_steps {
                for p in &parts {
                    let e_tab = tab.stabilizer_entropy(p)? as f64;
                    let dev = (sv.entanglement_entropy(p)? - e_tab).abs();
                    count += 1;
                    worst = worst.max(dev);
                    if dev > 1e-8 {
                        bad += 1;
                    }
                }
                let g = sample_gate_event(&mut rng, n, GateSet::Stabilizer)?;
                sv.apply_gate(&g)?;
                tab.apply_clifford(&g)?;
            }
            Ok((count, worst, bad))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(per_circuit.into_iter().fold(
        CrossValidation {
            comparisons: 0,
            max_deviation: 0.0,
            mismatches: 0,
        },
        |acc, (c, w, b)| CrossValidation {
            comparisons: acc.comparisons + c,
            max_deviation: acc.max_deviation.max(w),
            mismatches: acc.mismatches + b,
        },
    ))
}

/// One verdict of a verification suite.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyRecord {
    pub check: String,
    pub n_qubits: usize,
    pub step: u64,
    pub lhs: f64,
    pub rhs: f64,
    pub pass: bool,
}

impl VerifyRecord {
    fn new(
        check: impl Into<String>,
        n_qubits: usize,
        step: u64,
        lhs: f64,
        rhs: f64,
        pass: bool,
    ) -> Self {
        Self {
            check: check.into(),
            n_qubits,
            step,
            lhs,
            rhs,
            pass,
        }
    }

    /// `lhs ≤ rhs`.
    fn at_most(check: &str, n: usize, step: u64, lhs: f64, rhs: f64) -> Self {
        Self::new(check, n, step, lhs, rhs, lhs <= rhs)
    }

    /// `lhs ≥ rhs`.
    fn at_least(check: &str, n: usize, step: u64, lhs: f64, rhs: f64) -> Self {
        Self::new(check, n, step, lhs, rhs, lhs >= rhs)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub suite: Suite,
    pub n_values: Vec<usize>,
    pub seed: u64,
    /// Monte Carlo trials (theorem1 only).
    pub trials: usize,
    /// Accuracy parameter (theorem1 only).
    pub epsilon: f64,
    /// Step horizon for lemma1; defaults to `90N(N−1)`.
    pub max_steps: Option<u64>,
}

impl VerifyConfig {
    pub fn new(suite: Suite, n_values: Vec<usize>, seed: u64) -> Self {
        Self {
            suite,
            n_values,
            seed,
            trials: 500,
            epsilon: 0.1,
            max_steps: None,
        }
    }
}

pub fn run_bound_verification(cfg: &VerifyConfig) -> Result<Vec<VerifyRecord>> {
    let mut out = Vec::new();
    for &n in &cfg.n_values {
        match cfg.suite {
            Suite::Lemma1 => verify_lemma1(n, cfg.max_steps, &mut out)?,
            Suite::Theorem1 => verify_theorem1(n, cfg, &mut out)?,
            Suite::Comparison => verify_comparison(n, &mut out)?,
        }
    }
    Ok(out)
}

/// Lemma 1 tolerance for floating-point propagation.
pub const LEMMA1_ARITHMETIC_TOL: f64 = 1e-10;

fn verify_lemma1(n: usize, max_steps: Option<u64>, out: &mut Vec<VerifyRecord>) -> Result<()> {
    let chain = ExactSubsetChain::new(n)?;
    let horizon = max_steps.unwrap_or(90 * (n * (n - 1)) as u64);
    let empty = (0.5f64).powi(n as i32);
    let cuts: Vec<usize> = (1..n).collect();
    // (largest deviation - envelope, step, deviation, envelope, all passed) per cut
    let mut worst: Vec<(f64, u64, f64, f64, bool)> =
        vec![(f64::NEG_INFINITY, 0, 0.0, 0.0, true); cuts.len()];
    let mut p = chain.initial_omega_mass();
    for step in 0..=horizon {
        if step > 0 {
            p = chain.matrix().step(&p);
        }
        let envelope = lemma1_envelope(n, step);
        for (slot, &n_a) in worst.iter_mut().zip(&cuts) {
            let n_b = n - n_a;
            let mask = (1u64 << n_a) - 1;
            let purity = 2f64.powi(n_b as i32) * (empty + containment_on_omega(&p, mask));
            let dev = (purity - haar_average_purity(n_a, n_b)).abs();
            if dev - envelope > slot.0 {
                *slot = (dev - envelope, step, dev, envelope, slot.4);
            }
            if dev > envelope + LEMMA1_ARITHMETIC_TOL {
                slot.4 = false;
            }
        }
    }
    for (&n_a, &(_, step, dev, env, pass)) in cuts.iter().zip(&worst) {
        out.push(VerifyRecord::new(
            format!("lemma1_na{n_a}"),
            n,
            step,
            dev,
            env,
            pass,
        ));
    }
    Ok(())
}

fn verify_theorem1(n: usize, cfg: &VerifyConfig, out: &mut Vec<VerifyRecord>) -> Result<()> {
    let n_a = n / 2;
    let part = QubitPartition::first(n, n_a)?;
    let offset = part.nonnegative_offset()?;
    let steps = theorem1_threshold(n, cfg.epsilon)? as usize;
    let floors = theorem1_floors(n_a, offset as f64, cfg.epsilon)?;
    let point = run_entropy_experiment(&ExperimentConfig {
        engine: Engine::Statevector,
        n_qubits: n,
        n_a,
        steps: vec![steps],
        trials: cfg.trials,
        seed: cfg.seed,
    })?
    .remove(0);
    let entropy_low = point.mean_entropy - 3.0 * point.stderr;
    out.push(VerifyRecord::at_least(
        "theorem1_entropy",
        n,
        steps as u64,
        entropy_low,
        floors.entropy,
    ));
    let overlap = point.overlap.expect("N_A <= N_B");
    let overlap_low = overlap.mean - 3.0 * overlap.stderr;
    out.push(VerifyRecord::at_least(
        "theorem1_overlap",
        n,
        steps as u64,
        overlap_low,
        floors.fidelity,
    ));
    Ok(())
}

/// Numerical tolerance for stationarity and detailed balance.
pub const CHAIN_IDENTITY_TOL: f64 = 1e-10;

fn verify_comparison(n: usize, out: &mut Vec<VerifyRecord>) -> Result<()> {
    let m = stationary_distribution(n)?;
    let chain = ExactSubsetChain::new(n)?;
    let q = chain.matrix();
    let r = comparison_chain_matrix(n)?;
    let alpha = comparison_alpha(n);
    let analysis = spectral_analysis(q, &m)?;
    let gap_r = spectral_gap(&r, &m)?;
    let dom = verify_comparison_domination(q, &r, n)?;
    let min_hold = q.diagonal().into_iter().fold(f64::INFINITY, f64::min);
    debug_assert_eq!(q.n_states(), omega_size(n));
    out.push(VerifyRecord::at_most(
        "stationarity",
        n,
        0,
        q.stationarity_residual(m.as_slice()),
        CHAIN_IDENTITY_TOL,
    ));
    out.push(VerifyRecord::at_most(
        "reversibility",
        n,
        0,
        q.detailed_balance_violation(m.as_slice()),
        CHAIN_IDENTITY_TOL,
    ));
    out.push(VerifyRecord::new(
        "domination",
        n,
        0,
        dom.max_excess,
        0.0,
        dom.holds,
    ));
    out.push(VerifyRecord::at_least("laziness", n, 0, min_hold, 0.5));
    out.push(VerifyRecord::at_least(
        "gap_vs_comparison",
        n,
        0,
        analysis.gap,
        alpha * gap_r,
    ));
    out.push(VerifyRecord::at_least(
        "comparison_vs_bound",
        n,
        0,
        alpha * gap_r,
        gap_lower_bound(n),
    ));
    out.push(VerifyRecord::at_least(
        "gap_vs_bound",
        n,
        0,
        analysis.gap,
        gap_lower_bound(n),
    ));
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schedules_parse() {
        assert_eq!(parse_schedule("0,5,25").unwrap(), vec![0, 5, 25]);
        assert_eq!(parse_schedule("25, 0,5,5").unwrap(), vec![0, 5, 25]);
        assert_eq!(parse_schedule("geo:8").unwrap(), vec![0, 1, 2, 4, 8]);
        assert_eq!(parse_schedule("geo:10").unwrap(), vec![0, 1, 2, 4, 8, 10]);
        assert_eq!(parse_schedule("geo:0").unwrap(), vec![0]);
        assert_eq!(parse_schedule("lin:10:5").unwrap(), vec![0, 2, 4, 6, 8, 10]);
        assert_eq!(parse_schedule("lin:7:3").unwrap(), vec![0, 3, 6, 7]);
        assert!(parse_schedule("geo:x").is_err());
        assert!(parse_schedule("1,,2").is_err());
        assert!(parse_schedule("-1").is_err());
    }

    #[test]
    fn names_round_trip() {
        for e in [
            Engine::Statevector,
            Engine::SubsetMc,
            Engine::SubsetExact,
            Engine::Stabilizer,
        ] {
            assert_eq!(e.name().parse::<Engine>().unwrap(), e);
            assert_eq!(serde_json::to_string(&e).unwrap(), format!("\"{e}\""));
        }
        assert!("gpu".parse::<Engine>().is_err());
        assert_eq!(
            "haar_sampled".parse::<Reference>().unwrap(),
            Reference::HaarSampled
        );
        assert_eq!("lemma1".parse::<Suite>().unwrap(), Suite::Lemma1);
    }

    fn cfg(
        engine: Engine,
        n: usize,
        n_a: usize,
        steps: Vec<usize>,
        trials: usize,
    ) -> ExperimentConfig {
        ExperimentConfig {
            engine,
            n_qubits: n,
            n_a,
            steps,
            trials,
            seed: 11,
        }
    }

    #[test]
    fn every_engine_starts_pure() {
        for e in [
            Engine::Statevector,
            Engine::SubsetMc,
            Engine::SubsetExact,
            Engine::Stabilizer,
        ] {
            let pts = run_purity_experiment(&cfg(e, 4, 2, vec![0], 50)).unwrap();
            if e == Engine::SubsetMc {
                // containment of a uniformly random subset of N qubits in A
                assert!(pts[0].mean_purity > 0.0);
            } else {
                assert!((pts[0].mean_purity - 1.0).abs() < 1e-12, "{e}");
            }
        }
    }

    #[test]
    fn exact_engine_reaches_haar_value() {
        let pts = run_purity_experiment(&cfg(Engine::SubsetExact, 4, 2, vec![0, 3000], 0)).unwrap();
        assert!((pts[1].mean_purity - 8.0 / 17.0).abs() < 1e-10);
        assert_eq!(pts[1].stderr, 0.0);
    }

    #[test]
    fn engine_limits_enforced() {
        assert!(matches!(
            run_purity_experiment(&cfg(Engine::Statevector, 20, 10, vec![0], 1)),
            Err(Error::TooManyQubits { .. })
        ));
        assert!(run_purity_experiment(&cfg(Engine::SubsetExact, 15, 7, vec![0], 1)).is_err());
        assert!(run_entropy_experiment(&cfg(Engine::SubsetMc, 4, 2, vec![0], 10)).is_err());
        assert!(run_purity_experiment(&cfg(Engine::Statevector, 4, 0, vec![0], 10)).is_err());
        assert!(run_purity_experiment(&cfg(Engine::Statevector, 4, 2, vec![3, 1], 10)).is_err());
    }

    #[test]
    fn entropy_starts_at_zero() {
        let pts = run_entropy_experiment(&cfg(Engine::Statevector, 6, 3, vec![0, 40], 40)).unwrap();
        assert!(pts[0].mean_entropy.abs() < 1e-9);
        assert_eq!(pts[0].histogram.counts[0], 40);
        assert!(pts[1].mean_entropy > 1.0);
        assert!(pts[1].overlap.is_some());
    }

    #[test]
    fn experiments_are_reproducible() {
        let c = cfg(Engine::Statevector, 5, 2, vec![0, 3, 9], 16);
        assert_eq!(
            run_purity_experiment(&c).unwrap(),
            run_purity_experiment(&c).unwrap()
        );
        let c = cfg(Engine::Stabilizer, 9, 4, vec![0, 30], 16);
        assert_eq!(
            run_entropy_experiment(&c).unwrap(),
            run_entropy_experiment(&c).unwrap()
        );
    }

    #[test]
    fn cutoff_rejects_few_trials() {
        let c = CutoffConfig {
            n_qubits: 20,
            n_a: 10,
            trials: 109,
            max_steps: 10,
            reference: Reference::AsymptoticEmpirical,
            seed: 1,
            steps: None,
        };
        assert!(run_cutoff_experiment(&c).is_err());
        let haar_big = CutoffConfig {
            trials: 200,
            reference: Reference::HaarSampled,
            ..c
        };
        assert!(run_cutoff_experiment(&haar_big).is_err());
    }

    #[test]
    fn small_cutoff_curve_falls() {
        let c = CutoffConfig {
            n_qubits: 16,
            n_a: 8,
            trials: 400,
            max_steps: 600,
            reference: Reference::AsymptoticEmpirical,
            seed: 3,
            steps: None,
        };
        let out = run_cutoff_experiment(&c).unwrap();
        assert_eq!(out.engine, Engine::Stabilizer);
        let pts = &out.curve.points;
        assert!(pts[0].tv > 0.99);
        assert!(pts.last().unwrap().tv < 0.2);
    }

    #[test]
    fn cross_validation_small() {
        let cv = cross_validate_engines(4, 30, 5, 9).unwrap();
        assert_eq!(cv.comparisons, 5 * 31 * 3);
        assert_eq!(cv.mismatches, 0);
    }

    #[test]
    fn lemma1_suite_small() {
        let recs =
            run_bound_verification(&VerifyConfig::new(Suite::Lemma1, vec![2, 3], 0)).unwrap();
        assert_eq!(recs.len(), 1 + 2);
        assert!(recs.iter().all(|r| r.pass), "{recs:?}");
    }

    #[test]
    fn comparison_suite_records_laziness_failure() {
        let recs =
            run_bound_verification(&VerifyConfig::new(Suite::Comparison, vec![3], 0)).unwrap();
        for r in &recs {
            assert_eq!(r.pass, r.check != "laziness", "{r:?}");
        }
    }
}
