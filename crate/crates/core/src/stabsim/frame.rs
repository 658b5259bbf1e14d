//! Pauli-frame propagation, 64 shots per machine word.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::noise::{noise_locations, Fault, FaultAction, NoiseModel, SinglePauli};
use super::simulate_noiseless;
use crate::circuit::{Circuit, Op};
use crate::error::{BccError, Result};
use crate::gf2::BitVector;

/// Frame of 64 independent shots: bit `l` of each word belongs to lane `l`.
#[derive(Clone, Debug)]
struct Frames {
    x: Vec<u64>,
    z: Vec<u64>,
    flips: Vec<u64>,
}

impl Frames {
    fn new(qubits: usize, slots: usize) -> Self {
        Self {
            x: vec![0; qubits],
            z: vec![0; qubits],
            flips: vec![0; slots],
        }
    }

    /// Applies `op`; `slot` is its measurement slot if it has one.
    fn apply(&mut self, op: Op, slot: Option<usize>) {
        match op {
            Op::InitPlus(q) | Op::InitZero(q) => {
                self.x[q] = 0;
                self.z[q] = 0;
            }
            Op::H(q) => std::mem::swap(&mut self.x[q], &mut self.z[q]),
            Op::Cz(a, b) => {
                self.z[a] ^= self.x[b];
                self.z[b] ^= self.x[a];
            }
            Op::Cnot { control, target } => {
                self.x[target] ^= self.x[control];
                self.z[control] ^= self.z[target];
            }
            Op::MeasureZ(q) => self.flips[slot.expect("measurement slot")] = self.x[q],
            Op::MeasureX(q) => self.flips[slot.expect("measurement slot")] = self.z[q],
        }
    }

    fn inject(&mut self, q: usize, p: SinglePauli, lanes: u64) {
        let (x, z) = p.bits();
        if x {
            self.x[q] ^= lanes;
        }
        if z {
            self.z[q] ^= lanes;
        }
    }

    fn inject_fault(&mut self, action: &FaultAction, slot: Option<usize>, lanes: u64) {
        match action {
            FaultAction::Pauli(ps) => {
                for &(q, p) in ps {
                    self.inject(q, p, lanes);
                }
            }
            FaultAction::FlipMeasurement => self.flips[slot.expect("flip fault on a measurement")] ^= lanes,
        }
    }
}

fn measurement_slots(c: &Circuit) -> Vec<Option<usize>> {
    let mut next = 0;
    c.ops()
        .iter()
        .map(|op| {
            op.is_measurement().then(|| {
                next += 1;
                next - 1
            })
        })
        .collect()
}

/// Outcome flips and final frame from a fixed fault set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrameResult {
    pub flips: BitVector,
    pub x: BitVector,
    pub z: BitVector,
}

/// Propagates `faults` through `c` as a single Pauli frame.
pub fn propagate(c: &Circuit, faults: &[Fault]) -> FrameResult {
    let slots = measurement_slots(c);
    let mut by_op: Vec<Vec<&FaultAction>> = vec![Vec::new(); c.ops().len()];
    for f in faults {
        by_op[f.op_index].push(&f.action);
    }
    let mut frames = Frames::new(c.num_qubits(), c.num_measurements());
    for (i, &op) in c.ops().iter().enumerate() {
        frames.apply(op, slots[i]);
        for action in &by_op[i] {
            frames.inject_fault(action, slots[i], 1);
        }
    }
    let lane0 = |words: &[u64]| BitVector::from_bools(&words.iter().map(|w| w & 1 == 1).collect::<Vec<_>>());
    FrameResult {
        flips: lane0(&frames.flips),
        x: lane0(&frames.x),
        z: lane0(&frames.z),
    }
}

/// Locations sharing one fault probability, sampled together by geometric
/// skipping over the flattened (location, lane) trials.
#[derive(Clone, Debug)]
struct RateClass {
    probability: f64,
    log_q: f64,
    locations: Vec<usize>,
}

/// Precompiled circuit and noise for repeated batched sampling.
#[derive(Clone, Debug)]
pub struct FrameSampler {
    ops: Vec<Op>,
    slots: Vec<Option<usize>>,
    qubits: usize,
    measurements: usize,
    faults: Vec<Vec<Fault>>,
    location_op: Vec<usize>,
    classes: Vec<RateClass>,
}

impl FrameSampler {
    pub fn new(c: &Circuit, noise: &NoiseModel) -> Result<Self> {
        noise.validate()?;
        c.validate()?;
        let locations = noise_locations(c, noise);
        let mut classes: Vec<RateClass> = Vec::new();
        for (i, l) in locations.iter().enumerate() {
            if l.probability <= 0.0 {
                continue;
            }
            match classes.iter_mut().find(|cl| cl.probability == l.probability) {
                Some(cl) => cl.locations.push(i),
                None => classes.push(RateClass {
                    probability: l.probability,
                    log_q: (1.0 - l.probability).ln(),
                    locations: vec![i],
                }),
            }
        }
        Ok(Self {
            ops: c.ops().to_vec(),
            slots: measurement_slots(c),
            qubits: c.num_qubits(),
            measurements: c.num_measurements(),
            faults: locations.iter().map(|l| l.faults().collect()).collect(),
            location_op: locations.iter().map(|l| l.op_index).collect(),
            classes,
        })
    }

    pub fn num_measurements(&self) -> usize {
        self.measurements
    }

    /// Samples one batch. Only the low `lanes` lanes receive faults. Returns
    /// one flip word per measurement slot.
    pub fn sample_batch<R: Rng>(&self, rng: &mut R, lanes: u32) -> Vec<u64> {
        assert!((1..=64).contains(&lanes));
        let lanes_us = lanes as usize;
        // (location, lane, choice)
        let mut events: Vec<(usize, u32, usize)> = Vec::new();
        for class in &self.classes {
            let total = class.locations.len() * lanes_us;
            let mut idx = 0usize;
            loop {
                if class.probability < 1.0 {
                    let u: f64 = 1.0 - rng.gen::<f64>();
                    let skip = (u.ln() / class.log_q).floor();
                    if skip >= (total - idx) as f64 {
                        break;
                    }
                    idx += skip as usize;
                }
                if idx >= total {
                    break;
                }
                let loc = class.locations[idx / lanes_us];
                let lane = (idx % lanes_us) as u32;
                let choice = rng.gen_range(0..self.faults[loc].len());
                events.push((loc, lane, choice));
                idx += 1;
            }
        }
        events.sort_unstable();
        let mut frames = Frames::new(self.qubits, self.measurements);
        let mut next = 0;
        for (i, &op) in self.ops.iter().enumerate() {
            frames.apply(op, self.slots[i]);
            while next < events.len() && self.location_op[events[next].0] == i {
                let (loc, lane, choice) = events[next];
                frames.inject_fault(&self.faults[loc][choice].action, self.slots[i], 1u64 << lane);
                next += 1;
            }
        }
        frames.flips
    }

    /// Deterministic per-batch RNG: stream `batch` of the seed.
    pub fn batch_rng(seed: u64, batch: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(batch);
        rng
    }
}

/// Per-shot outcome-flip vectors. Requires every noiseless outcome of `c` to
/// be deterministic.
pub fn sample_frames(c: &Circuit, noise: &NoiseModel, shots: usize, seed: u64) -> Result<Vec<BitVector>> {
    let run = simulate_noiseless(c)?;
    if !run.deterministic {
        return Err(BccError::Precondition(
            "circuit has non-deterministic noiseless outcomes".into(),
        ));
    }
    let sampler = FrameSampler::new(c, noise)?;
    let batches = shots.div_ceil(64);
    let words: Vec<Vec<u64>> = (0..batches)
        .into_par_iter()
        .map(|b| {
            let lanes = (shots - b * 64).min(64) as u32;
            sampler.sample_batch(&mut FrameSampler::batch_rng(seed, b as u64), lanes)
        })
        .collect();
    let mut out = Vec::with_capacity(shots);
    for (b, batch) in words.iter().enumerate() {
        for lane in 0..(shots - b * 64).min(64) {
            out.push(BitVector::from_bools(
                &batch.iter().map(|w| (w >> lane) & 1 == 1).collect::<Vec<_>>(),
            ));
        }
    }
    Ok(out)
}
