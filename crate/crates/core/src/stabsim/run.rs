use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::decoder::BlockDecoder;
use super::frame::FrameSampler;
use super::noise::NoiseModel;
use super::simulate_noiseless;
use crate::circuit::{bell_experiment, Basis, Circuit, ExperimentLayout, Scheme};
use crate::code::{BccSpec, CssCode};
use crate::error::{BccError, Result};

/// Shot counts after postselection and decoding.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentStats {
    pub p: f64,
    pub seed: u64,
    pub shots: u64,
    pub accepted: u64,
    pub logical_failures: u64,
    /// `None` when no shot was accepted.
    pub rate: Option<f64>,
    pub ci_low: f64,
    pub ci_high: f64,
    pub basis: Basis,
    pub scheme: Scheme,
}

/// Wilson score interval at 95% confidence.
pub fn wilson_interval(successes: u64, trials: u64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    const Z: f64 = 1.959_963_984_540_054;
    let n = trials as f64;
    let ph = successes as f64 / n;
    let z2 = Z * Z;
    let denom = 1.0 + z2 / n;
    let centre = (ph + z2 / (2.0 * n)) / denom;
    let half = Z * (ph * (1.0 - ph) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((centre - half).max(0.0).min(ph), (centre + half).min(1.0).max(ph))
}

/// A Bell experiment compiled once for repeated sampling.
#[derive(Clone, Debug)]
pub struct Experiment {
    spec: BccSpec,
    scheme: Scheme,
    basis: Basis,
    circuit: Circuit,
    layout: ExperimentLayout,
    decoder: BlockDecoder,
}

impl Experiment {
    /// Builds the circuit and checks by tableau simulation that every ancilla
    /// outcome is a deterministic 0, and that every parity the decoder reads
    /// (each block's same-basis checks and the logical correlation) is
    /// deterministic. The decoder corrects up to weight `d - 1`.
    pub fn new(spec: &BccSpec, scheme: Scheme, basis: Basis) -> Result<Self> {
        let code = CssCode::from_offsets(spec);
        let w_max = code
            .distance(spec.n())
            .exact()
            .map_or(1, |d| d.saturating_sub(1).max(1));
        Self::with_w_max(spec, scheme, basis, w_max)
    }

    pub fn with_w_max(spec: &BccSpec, scheme: Scheme, basis: Basis, w_max: usize) -> Result<Self> {
        let code = CssCode::from_offsets(spec);
        let (circuit, layout) = bell_experiment(spec, scheme, basis)?;
        let run = simulate_noiseless(&circuit)?;
        for &s in &layout.ancilla_slots {
            if run.deterministic_parity([s]) != Some(false) {
                return Err(BccError::Verification(format!(
                    "ancilla outcome in slot {s} is not a deterministic 0"
                )));
            }
        }
        let checks = match basis {
            Basis::Z => code.hz(),
            Basis::X => code.hx(),
        };
        for slots in &layout.data_slots {
            for row in checks.rows() {
                if run.deterministic_parity(row.ones().map(|q| slots[q])).is_none() {
                    return Err(BccError::Verification(
                        "a block check parity is not deterministic".into(),
                    ));
                }
            }
        }
        let logical = match basis {
            Basis::Z => code.logicals()[0].1.z_support().clone(),
            Basis::X => code.logicals()[0].0.x_support().clone(),
        };
        let corr = logical
            .ones()
            .flat_map(|q| [layout.data_slots[0][q], layout.data_slots[1][q]]);
        if run.deterministic_parity(corr).is_none() {
            return Err(BccError::Verification(
                "logical correlation parity is not deterministic".into(),
            ));
        }
        Ok(Self {
            spec: spec.clone(),
            scheme,
            basis,
            circuit,
            layout,
            decoder: BlockDecoder::new(&code, basis, w_max)?,
        })
    }

    pub fn spec(&self) -> &BccSpec {
        &self.spec
    }

    pub fn circuit(&self) -> &Circuit {
        &self.circuit
    }

    pub fn layout(&self) -> &ExperimentLayout {
        &self.layout
    }

    /// Accepted lanes and failing lanes of one batch of flip words.
    pub fn classify(&self, flips: &[u64]) -> (u64, u64) {
        let rejected = self.layout.ancilla_slots.iter().fold(0u64, |m, &s| m | flips[s]);
        let touched = self.layout.data_slots.iter().flatten().fold(0u64, |m, &s| m | flips[s]);
        let mut failed = 0u64;
        let mut todo = touched & !rejected;
        while todo != 0 {
            let lane = todo.trailing_zeros();
            todo &= todo - 1;
            let mut parity = false;
            for slots in &self.layout.data_slots {
                let bits = slots
                    .iter()
                    .enumerate()
                    .fold(0u128, |m, (q, &s)| m | (((flips[s] >> lane) & 1) as u128) << q);
                match self.decoder.decode(bits) {
                    Ok(v) => parity ^= v,
                    Err(_) => {
                        parity = true;
                        break;
                    }
                }
            }
            if parity {
                failed |= 1 << lane;
            }
        }
        (!rejected, failed)
    }

    pub fn run(&self, noise: &NoiseModel, shots: u64, seed: u64) -> Result<ExperimentStats> {
        let sampler = FrameSampler::new(&self.circuit, noise)?;
        let batches = shots.div_ceil(64);
        let (accepted, failures) = (0..batches)
            .into_par_iter()
            .map(|b| {
                let lanes = (shots - b * 64).min(64) as u32;
                let flips = sampler.sample_batch(&mut FrameSampler::batch_rng(seed, b), lanes);
                let mask = if lanes == 64 { u64::MAX } else { (1u64 << lanes) - 1 };
                let (acc, fail) = self.classify(&flips);
                ((acc & mask).count_ones() as u64, (fail & mask).count_ones() as u64)
            })
            .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
        let (ci_low, ci_high) = wilson_interval(failures, accepted);
        Ok(ExperimentStats {
            p: noise.p,
            seed,
            shots,
            accepted,
            logical_failures: failures,
            rate: (accepted > 0).then(|| failures as f64 / accepted as f64),
            ci_low,
            ci_high,
            basis: self.basis,
            scheme: self.scheme,
        })
    }
}

pub fn run_experiment(
    spec: &BccSpec,
    scheme: Scheme,
    basis: Basis,
    noise: &NoiseModel,
    shots: u64,
    seed: u64,
) -> Result<ExperimentStats> {
    Experiment::new(spec, scheme, basis)?.run(noise, shots, seed)
}

/// Least-squares slope of `log(rate)` against `log(p)`.
pub fn scaling_exponent(points: &[(f64, f64)]) -> Result<f64> {
    if points.len() < 3 {
        return Err(BccError::Precondition(format!(
            "need at least 3 points, got {}",
            points.len()
        )));
    }
    if points.iter().any(|&(p, r)| !(p > 0.0 && r > 0.0)) {
        return Err(BccError::Precondition("every p and rate must be positive".into()));
    }
    let k = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|&(p, _)| p.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|&(_, r)| r.ln()).collect();
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx <= f64::EPSILON {
        return Err(BccError::Precondition("all p values coincide".into()));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    Ok(sxy / sxx)
}

/// `k` points spaced evenly in `log p` over `[lo, hi]`.
pub fn log_spaced(lo: f64, hi: f64, k: usize) -> Vec<f64> {
    match k {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..k)
            .map(|i| (lo.ln() + (hi.ln() - lo.ln()) * i as f64 / (k - 1) as f64).exp())
            .collect(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub p: f64,
    pub shots: u64,
    pub accepted: u64,
    pub failures: u64,
    pub rate: Option<f64>,
    pub ci_low: f64,
    pub ci_high: f64,
    pub basis: Basis,
    pub scheme: Scheme,
}

impl From<&ExperimentStats> for SweepRecord {
    fn from(s: &ExperimentStats) -> Self {
        Self {
            p: s.p,
            shots: s.shots,
            accepted: s.accepted,
            failures: s.logical_failures,
            rate: s.rate,
            ci_low: s.ci_low,
            ci_high: s.ci_high,
            basis: s.basis,
            scheme: s.scheme,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sweep {
    pub seed: u64,
    pub records: Vec<SweepRecord>,
    /// Fitted over points with at least `min_failures` failures.
    pub exponent: Option<f64>,
    pub min_failures: u64,
}

impl Sweep {
    pub fn fit(records: &[SweepRecord], min_failures: u64) -> Result<f64> {
        let pts: Vec<(f64, f64)> = records
            .iter()
            .filter(|r| r.failures >= min_failures)
            .filter_map(|r| r.rate.map(|rate| (r.p, rate)))
            .collect();
        scaling_exponent(&pts)
    }

    pub const CSV_HEADER: &'static str = "p,shots,accepted,failures,rate,ci_low,ci_high,basis,scheme";

    /// Header, one record per point, then `# exponent,<value>`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from(Self::CSV_HEADER);
        s.push('\n');
        for r in &self.records {
            let rate = r.rate.map_or(String::from("nan"), |v| format!("{v:e}"));
            let _ = writeln!(
                s,
                "{:e},{},{},{},{},{:e},{:e},{},{}",
                r.p, r.shots, r.accepted, r.failures, rate, r.ci_low, r.ci_high, r.basis, r.scheme
            );
        }
        let exp = self.exponent.map_or(String::from("nan"), |e| format!("{e}"));
        let _ = writeln!(s, "# exponent,{exp}");
        s
    }

    pub fn from_csv(text: &str, seed: u64, min_failures: u64) -> Result<Sweep> {
        let mut records = Vec::new();
        let mut exponent = None;
        for (i, line) in text.lines().enumerate() {
            let err = |msg: String| BccError::Parse { line: i + 1, msg };
            if i == 0 {
                if line != Self::CSV_HEADER {
                    return Err(err("unexpected header".into()));
                }
                continue;
            }
            if let Some(e) = line.strip_prefix("# exponent,") {
                exponent = if e == "nan" {
                    None
                } else {
                    Some(e.parse().map_err(|_| err(format!("bad exponent {e:?}")))?)
                };
                continue;
            }
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 9 {
                return Err(err(format!("expected 9 fields, got {}", f.len())));
            }
            let num = |s: &str| s.parse::<f64>().map_err(|_| err(format!("bad number {s:?}")));
            let int = |s: &str| s.parse::<u64>().map_err(|_| err(format!("bad count {s:?}")));
            records.push(SweepRecord {
                p: num(f[0])?,
                shots: int(f[1])?,
                accepted: int(f[2])?,
                failures: int(f[3])?,
                rate: if f[4] == "nan" { None } else { Some(num(f[4])?) },
                ci_low: num(f[5])?,
                ci_high: num(f[6])?,
                basis: f[7].parse().map_err(|e: BccError| err(e.to_string()))?,
                scheme: f[8].parse().map_err(|e: BccError| err(e.to_string()))?,
            });
        }
        Ok(Sweep {
            seed,
            records,
            exponent,
            min_failures,
        })
    }
}

/// Runs each `(p, shots)` point with seed `seed + index` and fits the
/// exponent over points with at least `min_failures` failures.
pub fn sweep(
    experiment: &Experiment,
    base: &NoiseModel,
    points: &[(f64, u64)],
    seed: u64,
    min_failures: u64,
) -> Result<Sweep> {
    let mut records = Vec::with_capacity(points.len());
    for (i, &(p, shots)) in points.iter().enumerate() {
        let stats = experiment.run(&base.with_p(p), shots, seed.wrapping_add(i as u64))?;
        records.push(SweepRecord::from(&stats));
    }
    let exponent = Sweep::fit(&records, min_failures).ok();
    Ok(Sweep {
        seed,
        records,
        exponent,
        min_failures,
    })
}
