use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::circuit::{bell_experiment, prep_circuit, Basis, Op, Scheme};
use crate::code::{BccSpec, CssCode};
use crate::pauli::PauliOperator;

fn spec(n: usize, s: &[i64]) -> BccSpec {
    BccSpec::new(n, s).unwrap()
}

fn circuit(text: &str) -> Circuit {
    Circuit::from_text(text).unwrap()
}

#[test]
fn eigenstate_measurements() {
    let run = simulate_noiseless(&circuit("INIT+ 0\nMX 0\n")).unwrap();
    assert!(run.deterministic);
    assert!(!run.bits.get(0));

    let run = simulate_noiseless(&circuit("INIT+ 0\nMZ 0\n")).unwrap();
    assert!(!run.deterministic);

    let run = simulate_noiseless(&circuit("INIT0 0\nH 0\nH 0\nMZ 0\n")).unwrap();
    assert!(run.deterministic);
}

#[test]
fn bell_pair_parities() {
    let c = circuit("INIT+ 0\nINIT0 1\nCNOT 0 1\nMZ 0\nMZ 1\n");
    let run = simulate_noiseless(&c).unwrap();
    assert!(!run.deterministic);
    assert_eq!(run.deterministic_parity([0, 1]), Some(false));
    assert_eq!(run.deterministic_parity([0]), None);

    let c = circuit("INIT+ 0\nINIT0 1\nCNOT 0 1\n");
    let t = simulate_noiseless(&c).unwrap().tableau;
    assert!(t.stabilizes(&"+XX".parse().unwrap()));
    assert!(t.stabilizes(&"+ZZ".parse().unwrap()));
    assert!(!t.stabilizes(&"-ZZ".parse().unwrap()));
    assert!(t.stabilizes(&"-YY".parse().unwrap()));
    assert!(!t.stabilizes_up_to_sign(&"+ZI".parse().unwrap()));
}

#[test]
fn pauli_faults_flip_signs() {
    let c = circuit("INIT0 0\nMZ 0\n");
    let x = Fault {
        op_index: 0,
        action: FaultAction::Pauli(vec![(0, SinglePauli::X)]),
    };
    let run = simulate(&c, &[x]).unwrap();
    assert_eq!(run.outcomes[0], run.tableau.constant(true));
    let flip = Fault {
        op_index: 1,
        action: FaultAction::FlipMeasurement,
    };
    let run = simulate(&c, &[flip]).unwrap();
    assert_eq!(run.outcomes[0], run.tableau.constant(true));
}

#[test]
fn reset_after_random_measurement() {
    let mut t = Tableau::new(1, 3);
    t.h(0);
    assert!(!is_constant(&t.measure_z(0)));
    t.reset_z(0);
    assert_eq!(t.measure_z(0), t.constant(false));

    let run = simulate_noiseless(&circuit("INIT+ 0\nINIT0 0\nMZ 0\n")).unwrap();
    assert!(run.deterministic);
    assert!(!run.bits.get(0));
}

#[test]
fn validity_after_every_instruction() {
    for (c, _) in [
        (prep_circuit(&spec(10, &[3, 5, 7])), ()),
        (
            bell_experiment(
                &spec(18, &[5, 11, 15, 17]),
                Scheme::EntangledAncilla { step: 3 },
                Basis::X,
            )
            .unwrap()
            .0,
            (),
        ),
        (
            bell_experiment(&spec(10, &[1, 9]), Scheme::SharedAncilla, Basis::Z)
                .unwrap()
                .0,
            (),
        ),
    ] {
        let vars = c.num_measurements() + c.count(|op| op.is_init());
        let mut t = Tableau::new(c.num_qubits(), vars);
        assert!(t.is_valid());
        for &op in c.ops() {
            t.apply(op);
            assert!(t.is_valid(), "invalid after {op}");
        }
    }
}

fn check_frame_matches_tableau(c: &Circuit, faults: &[Fault], parities: &[Vec<usize>], clean: &NoiselessRun) {
    let frame = propagate(c, faults);
    let noisy = simulate(c, faults).unwrap();
    for par in parities {
        let e0 = clean.parity(par.iter().copied());
        let e1 = noisy.parity(par.iter().copied());
        assert!(is_constant(&e1), "fault changed determinism");
        let flip = par.iter().fold(false, |a, &s| a ^ frame.flips.get(s));
        assert_eq!(constant_value(&e0) ^ constant_value(&e1), flip, "faults {faults:?}");
    }
}

#[test]
fn frame_matches_tableau_single_faults() {
    let mut c = prep_circuit(&spec(10, &[3, 5, 7]));
    c.extend((0..10).map(Op::MeasureZ));
    let clean = simulate_noiseless(&c).unwrap();
    let parities = clean.deterministic_parity_basis();
    assert!(!parities.is_empty());
    for f in all_single_faults(&c) {
        check_frame_matches_tableau(&c, &[f], &parities, &clean);
    }
}

#[test]
fn frame_matches_tableau_sampled_double_faults() {
    let (c, _) = bell_experiment(&spec(10, &[1, 9]), Scheme::SharedAncilla, Basis::X).unwrap();
    let clean = simulate_noiseless(&c).unwrap();
    let parities = clean.deterministic_parity_basis();
    let faults = all_single_faults(&c);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..300 {
        let a = faults[rng.gen_range(0..faults.len())].clone();
        let b = faults[rng.gen_range(0..faults.len())].clone();
        check_frame_matches_tableau(&c, &[a, b], &parities, &clean);
    }
}

#[test]
fn single_x_before_last_cz() {
    // X on qubit 0 before CZ(0,1) becomes X0 Z1; an X readout of 1 flips
    let c = circuit("INIT+ 0\nINIT+ 1\nCZ 0 1\nMX 0\nMX 1\n");
    let f = Fault {
        op_index: 1,
        action: FaultAction::Pauli(vec![(0, SinglePauli::X)]),
    };
    let r = propagate(&c, &[f]);
    assert!(!r.flips.get(0));
    assert!(r.flips.get(1));
}

#[test]
fn noiseless_sampling_has_no_flips() {
    let c = circuit("INIT0 0\nINIT0 1\nH 0\nCNOT 0 1\nCNOT 0 1\nH 0\nMZ 0\nMZ 1\n");
    assert!(sample_frames(&c, &NoiseModel::noiseless(), 200, 3)
        .unwrap()
        .iter()
        .all(|v| v.is_zero()));
}

#[test]
fn sampling_requires_determinism() {
    let c = circuit("INIT+ 0\nMZ 0\n");
    assert!(matches!(
        sample_frames(&c, &NoiseModel::depolarizing(0.1), 10, 1),
        Err(crate::BccError::Precondition(_))
    ));
}

#[test]
fn depolarizing_flip_frequency() {
    let c = circuit("INIT0 0\nH 0\nMX 0\n");
    let noise = NoiseModel {
        p: 0.3,
        gate1: 1.0,
        gate2: 0.0,
        init: 0.0,
        measure: 0.0,
    };
    let shots = 200_000;
    let flips = sample_frames(&c, &noise, shots, 11).unwrap();
    let k = flips.iter().filter(|v| v.get(0)).count() as f64;
    let p = 2.0 * 0.3 / 3.0;
    let sigma = (shots as f64 * p * (1.0 - p)).sqrt();
    assert!((k - shots as f64 * p).abs() < 3.0 * sigma, "{k}");
}

#[test]
fn sampling_is_reproducible() {
    let chain = circuit("INIT0 0\nINIT0 1\nCNOT 0 1\nH 0\nH 0\nMZ 0\nMZ 1\n");
    let noise = NoiseModel::depolarizing(0.05);
    let a = sample_frames(&chain, &noise, 500, 99).unwrap();
    assert_eq!(a.len(), 500);
    assert_eq!(a, sample_frames(&chain, &noise, 500, 99).unwrap());
    assert_ne!(a, sample_frames(&chain, &noise, 500, 100).unwrap());
}

#[test]
fn noise_model_validation() {
    assert!(NoiseModel::depolarizing(0.2).validate().is_ok());
    assert!(NoiseModel::depolarizing(-0.1).validate().is_err());
    let m = NoiseModel {
        gate2: 3.0,
        ..NoiseModel::depolarizing(0.5)
    };
    assert!(m.validate().is_err());
}

#[test]
fn two_qubit_fault_choices() {
    let c = circuit("INIT0 0\nINIT0 1\nCNOT 0 1\n");
    let locs = noise_locations(&c, &NoiseModel::depolarizing(0.1));
    let faults: Vec<Fault> = locs[2].faults().collect();
    assert_eq!(faults.len(), 15);
    let distinct: std::collections::BTreeSet<String> = faults.iter().map(|f| format!("{:?}", f.action)).collect();
    assert_eq!(distinct.len(), 15);
    assert_eq!(
        locs[0].faults().next().unwrap().action,
        FaultAction::Pauli(vec![(0, SinglePauli::X)])
    );
}

#[test]
fn decoder_examples() {
    let code = CssCode::from_offsets(&spec(18, &[5, 11, 15, 17]));
    for basis in [Basis::Z, Basis::X] {
        let dec = BlockDecoder::new(&code, basis, 4).unwrap();
        assert_eq!(dec.correction(0).unwrap(), 0);
        for q in 0..18 {
            assert_eq!(dec.correction(1 << q).unwrap(), 1 << q);
            assert!(!dec.decode(1 << q).unwrap());
        }
        for a in 0..18 {
            for b in a + 1..18 {
                assert!(!dec.decode((1 << a) | (1 << b)).unwrap());
            }
        }
        // a logical readout flip is read back unchanged
        let l = match basis {
            Basis::Z => code.logicals()[0].0.x_support().to_u128(),
            Basis::X => code.logicals()[0].1.z_support().to_u128(),
        };
        assert_eq!(dec.syndrome(l), 0);
        assert!(dec.decode(l).unwrap());
    }
    let bits = crate::gf2::BitVector::from_indices(18, [7]);
    assert!(!decode_block(&bits, &code, Basis::Z, 4).unwrap());
    assert!(decode_block(&crate::gf2::BitVector::zeros(5), &code, Basis::Z, 4).is_err());
}

#[test]
fn decoder_reports_failure_beyond_w_max() {
    let code = CssCode::from_offsets(&spec(18, &[5, 11, 15, 17]));
    let dec = BlockDecoder::new(&code, Basis::Z, 1).unwrap();
    let hard = (0..1u128 << 18).find(|&b| dec.correction(b).is_err()).unwrap();
    assert!(matches!(
        dec.decode(hard),
        Err(crate::BccError::DecodeFail { w_max: 1 })
    ));
}

#[test]
fn wilson_intervals() {
    let (lo, hi) = wilson_interval(0, 100);
    assert_eq!(lo, 0.0);
    assert!(hi > 0.03 && hi < 0.04);
    let (lo, hi) = wilson_interval(50, 100);
    assert!(lo < 0.5 && hi > 0.5);
    assert!((0.5 - lo - (hi - 0.5)).abs() < 1e-12);
    assert_eq!(wilson_interval(0, 0), (0.0, 1.0));
}

#[test]
fn scaling_exponents() {
    let cubic = [(1e-3, 1e-9), (2e-3, 8e-9), (4e-3, 6.4e-8)];
    assert!((scaling_exponent(&cubic).unwrap() - 3.0).abs() < 1e-9);
    let quad: Vec<(f64, f64)> = [1e-3, 3e-3, 1e-2, 2e-2].iter().map(|&p| (p, 7.0 * p * p)).collect();
    assert!((scaling_exponent(&quad).unwrap() - 2.0).abs() < 1e-9);
    assert!(scaling_exponent(&cubic[..2]).is_err());
    assert!(scaling_exponent(&[(1e-3, 0.0), (2e-3, 1.0), (3e-3, 1.0)]).is_err());
    assert!(scaling_exponent(&[(1e-3, 1.0), (1e-3, 2.0), (1e-3, 3.0)]).is_err());
    let pts = log_spaced(1e-3, 3e-2, 5);
    assert!((pts[0] - 1e-3).abs() < 1e-15 && (pts[4] - 3e-2).abs() < 1e-12);
}

#[test]
fn noiseless_experiment() {
    let s = spec(18, &[5, 11, 15, 17]);
    for scheme in [Scheme::SharedAncilla, Scheme::EntangledAncilla { step: 3 }] {
        let stats = run_experiment(&s, scheme, Basis::Z, &NoiseModel::noiseless(), 1000, 1).unwrap();
        assert_eq!(stats.accepted, 1000);
        assert_eq!(stats.logical_failures, 0);
        assert_eq!(stats.rate, Some(0.0));
    }
}

#[test]
fn experiment_is_deterministic_across_thread_counts() {
    let e = Experiment::new(&spec(10, &[1, 9]), Scheme::SharedAncilla, Basis::X).unwrap();
    let noise = NoiseModel::depolarizing(0.02);
    let run_with = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| e.run(&noise, 20_000, 5).unwrap())
    };
    let a = run_with(1);
    assert_eq!(a, run_with(3));
    assert!(a.accepted <= a.shots && a.logical_failures <= a.accepted);
    let r = a.rate.unwrap();
    assert!(a.ci_low <= r && r <= a.ci_high);
}

#[test]
fn late_low_weight_errors_are_corrected() {
    // faults injected after every two-qubit gate, at most two per block,
    // never cause a logical failure
    let s = spec(18, &[5, 11, 15, 17]);
    for basis in [Basis::Z, Basis::X] {
        let e = Experiment::new(&s, Scheme::SharedAncilla, basis).unwrap();
        let c = e.circuit();
        let after_gates = c.ops().len() - 37;
        assert!(matches!(c.ops()[after_gates], Op::Cnot { .. }));
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..400 {
            let mut faults = Vec::new();
            for block in 0..2 {
                for _ in 0..rng.gen_range(0..=2) {
                    let q = block * 18 + rng.gen_range(0..18);
                    let p = SinglePauli::from_index(rng.gen_range(1..=3)).unwrap();
                    faults.push(Fault {
                        op_index: after_gates,
                        action: FaultAction::Pauli(vec![(q, p)]),
                    });
                }
            }
            let r = propagate(c, &faults);
            let words: Vec<u64> = (0..c.num_measurements()).map(|s| r.flips.get(s) as u64).collect();
            let (acc, fail) = e.classify(&words);
            assert_eq!(acc & 1, 1);
            assert_eq!(fail & 1, 0, "{faults:?}");
        }
    }
}

#[test]
fn single_fault_exhaustion_distance_three() {
    let out = single_fault_exhaustion(&spec(10, &[1, 9]), Scheme::None).unwrap();
    assert!(!out.is_empty());
    assert!(out.iter().all(|o| o.residual.iter().all(|r| r.max() <= 1)));
}

#[test]
fn single_fault_exhaustion_without_ancilla_reaches_weight_two() {
    let out = single_fault_exhaustion(&spec(18, &[5, 11, 15, 17]), Scheme::None).unwrap();
    let worst = out
        .iter()
        .map(|o| o.residual.iter().map(|r| r.max()).max().unwrap())
        .max()
        .unwrap();
    assert_eq!(worst, 2);
}

#[test]
fn per_block_scheme_tolerates_all_fault_pairs() {
    let e = Experiment::new(&spec(18, &[5, 11, 15, 17]), Scheme::PerBlockAncilla, Basis::Z).unwrap();
    let c = e.circuit();
    let flips: Vec<Vec<u64>> = all_single_faults(c)
        .iter()
        .map(|f| {
            let r = propagate(c, std::slice::from_ref(f));
            (0..c.num_measurements()).map(|s| r.flips.get(s) as u64).collect()
        })
        .collect();
    use rayon::prelude::*;
    let failing: usize = (0..flips.len())
        .into_par_iter()
        .map(|i| {
            (i..flips.len())
                .filter(|&j| {
                    let v: Vec<u64> = flips[i]
                        .iter()
                        .zip(&flips[j])
                        .map(|(a, b)| if i == j { *a } else { a ^ b })
                        .collect();
                    let (acc, fail) = e.classify(&v);
                    acc & fail & 1 == 1
                })
                .count()
        })
        .sum();
    assert_eq!(failing, 0);
}

#[test]
fn sweep_csv_round_trip() {
    let e = Experiment::new(&spec(10, &[1, 9]), Scheme::None, Basis::Z).unwrap();
    let pts: Vec<(f64, u64)> = log_spaced(1e-2, 4e-2, 3).into_iter().map(|p| (p, 4000)).collect();
    let sw = sweep(&e, &NoiseModel::depolarizing(0.0), &pts, 3, 20).unwrap();
    assert_eq!(sw.records.len(), 3);
    assert!(sw.exponent.is_some());
    let back = Sweep::from_csv(&sw.to_csv(), 3, 20).unwrap();
    assert_eq!(back.records.len(), 3);
    for (a, b) in back.records.iter().zip(&sw.records) {
        assert_eq!(
            (a.shots, a.accepted, a.failures, a.basis, a.scheme),
            (b.shots, b.accepted, b.failures, b.basis, b.scheme)
        );
        assert!((a.p - b.p).abs() < 1e-15);
    }
    assert!((back.exponent.unwrap() - sw.exponent.unwrap()).abs() < 1e-12);
    assert!(Sweep::from_csv("nope\n", 0, 20).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tableau_conjugation_matches_pauli_algebra(ops in prop::collection::vec((0u8..3, 0usize..4, 1usize..4), 1..30)) {
        // start from |0000>, apply random Clifford gates, and check each stabilizer
        // row stays in the group by construction and the tableau stays valid
        let mut t = Tableau::new(4, 4);
        for (kind, a, d) in ops {
            let b = (a + d) % 4;
            match kind {
                0 => t.h(a),
                1 => t.cz(a, b),
                _ => t.cnot(a, b),
            }
            prop_assert!(t.is_valid());
        }
        for i in 0..4 {
            let mut s = t.stabilizer(i);
            if constant_value(t.stabilizer_sign(i)) {
                s = s.negated();
            }
            prop_assert!(t.stabilizes(&s));
            prop_assert!(!t.stabilizes(&s.negated()));
        }
        prop_assert!(!t.stabilizes(&PauliOperator::identity(4).negated()));
    }
}
