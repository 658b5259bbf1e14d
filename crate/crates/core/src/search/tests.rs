use std::collections::{BTreeSet, VecDeque};

use proptest::prelude::*;

use super::*;

/// Orbit by breadth-first closure under the generators x -> cx for each odd
/// unit c, x -> x + 2 and x -> -x.
fn bfs_orbit(n: usize, s: &[usize]) -> BTreeSet<Vec<usize>> {
    let step = |v: &[usize], f: &dyn Fn(usize) -> usize| {
        let mut out: Vec<usize> = v.iter().map(|&x| f(x) % n).collect();
        out.sort_unstable();
        out
    };
    let mut seen = BTreeSet::from([s.to_vec()]);
    let mut queue = VecDeque::from([s.to_vec()]);
    while let Some(v) = queue.pop_front() {
        let mut next = vec![step(&v, &|x| x + 2), step(&v, &|x| n - x)];
        for c in (3..n).step_by(2).filter(|&c| (1..n).any(|y| c * y % n == 1)) {
            next.push(step(&v, &|x| c * x));
        }
        for w in next {
            if seen.insert(w.clone()) {
                queue.push_back(w);
            }
        }
    }
    seen
}

fn all_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let odd: Vec<usize> = (1..n).step_by(2).collect();
    (0..odd.len()).flat_map(|top| subsets_with_top(&odd, k, top)).collect()
}

#[test]
fn colex_enumeration_is_complete() {
    for (n, k, count) in [(10, 2, 10), (10, 3, 10), (18, 4, 126), (34, 6, 12376), (12, 6, 1)] {
        let subsets = all_subsets(n, k);
        assert_eq!(subsets.len(), count);
        let distinct: BTreeSet<_> = subsets.iter().cloned().collect();
        assert_eq!(distinct.len(), count);
        assert!(subsets.windows(2).all(|w| w[0].iter().rev().lt(w[1].iter().rev())));
    }
}

#[test]
fn canonical_forms_match_orbit_oracle_n10() {
    for k in 1..=5 {
        let subsets = all_subsets(10, k);
        for a in &subsets {
            let orbit_a = bfs_orbit(10, a);
            assert_eq!(orbit(10, a).into_iter().collect::<BTreeSet<_>>(), orbit_a);
            for b in &subsets {
                assert_eq!(
                    canonicalize(10, a) == canonicalize(10, b),
                    orbit_a.contains(b),
                    "{a:?} {b:?}"
                );
            }
        }
    }
    assert_eq!(canonicalize(10, &[3, 5, 7]), canonicalize(10, &[1, 5, 9]));
}

#[test]
fn equivalent_offsets_have_equal_distance() {
    for n in [10, 12, 14] {
        for k in 2..=3 {
            for s in all_subsets(n, k) {
                let d: BTreeSet<String> = orbit(n, &s)
                    .iter()
                    .map(|img| {
                        let img: Vec<i64> = img.iter().map(|&x| x as i64).collect();
                        CssCode::from_offsets(&BccSpec::new(n, &img).unwrap())
                            .distance(k + 1)
                            .to_string()
                    })
                    .collect();
                assert_eq!(d.len(), 1, "n={n} S={s:?}");
            }
        }
    }
}

#[test]
fn finds_the_18_qubit_distance_5_code() {
    let hits = run_search(&SearchTask::new(18, 4, 5)).unwrap();
    assert!(!hits.is_empty());
    let want = canonicalize(18, &[5, 11, 15, 17]);
    let hit = hits.iter().find(|h| h.offsets == want).expect("class of {5,11,15,17}");
    assert_eq!(hit.d, Distance::Exact(5));
    assert!(hit.canonical);
    assert!(hit.properties.self_orthogonal);
    assert_eq!(hit.properties.prepared_logical_state, PreparedState::PlusZero);
    assert_eq!(hit.properties.min_stabilizer_weight, Some(4));
    assert_eq!(group_order(18) % hit.orbit_size, 0);
    for h in &hits {
        assert_eq!(CssCode::from_offsets(&h.spec()).distance(h.d.exact().unwrap()), h.d);
    }
}

#[test]
fn no_16_qubit_distance_5_code() {
    assert!(run_search(&SearchTask::new(16, 4, 5)).unwrap().is_empty());
}

#[test]
fn reduction_does_not_lose_classes() {
    for (n, k, d) in [(14, 3, 3), (18, 4, 5), (18, 3, 4), (16, 4, 4)] {
        let mut task = SearchTask::new(n, k, d);
        let reduced = run_search(&task).unwrap();
        task.symmetry_reduce = false;
        assert_eq!(run_search(&task).unwrap(), reduced, "n={n} k={k} d={d}");
    }
}

#[test]
fn task_validation() {
    assert!(SearchTask::new(9, 2, 3).validate().is_err());
    assert!(SearchTask::new(10, 6, 3).validate().is_err());
    assert!(SearchTask::new(10, 0, 3).validate().is_err());
    let mut t = SearchTask::new(10, 2, 3);
    t.w_cap = 2;
    assert!(t.validate().is_err());
    assert!(run_search(&SearchTask::new(20, 2, 4)).unwrap().is_empty());
}

proptest! {
    #[test]
    fn canonicalize_is_idempotent_and_invariant(half in 2usize..16, pick in any::<u32>(), c_pick in any::<usize>(), t in 0usize..16) {
        let n = 2 * half;
        let s: Vec<usize> = (0..half).filter(|i| pick >> i & 1 == 1).map(|i| 2 * i + 1).collect();
        prop_assume!(!s.is_empty());
        let canon = canonicalize(n, &s);
        prop_assert_eq!(canonicalize(n, &canon), canon.clone());
        let units = odd_units(n);
        let img = transform(n, &s, units[c_pick % units.len()], t % half);
        prop_assert_eq!(canonicalize(n, &img), canon);
        prop_assert_eq!(group_order(n) % orbit(n, &s).len(), 0);
    }
}

#[test]
fn finds_the_34_qubit_distance_7_code() {
    let hits = run_search(&SearchTask::new(34, 6, 7)).unwrap();
    let want = canonicalize(34, &[1, 5, 7, 9, 15, 23]);
    let hit = hits
        .iter()
        .find(|h| h.offsets == want)
        .expect("class of {1,5,7,9,15,23}");
    assert_eq!(hit.d, Distance::Exact(7));
}
