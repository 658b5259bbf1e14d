//! Exhaustive search over offset sets for codes of a target distance.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::code::{gcd, prepared_logical_state, BccSpec, CssCode, Distance, PreparedState};
use crate::error::{BccError, Result};

/// Odd residues mod `n` coprime to `n`.
pub fn odd_units(n: usize) -> Vec<usize> {
    (1..n).step_by(2).filter(|&c| gcd(c, n) == 1).collect()
}

/// Image of `s` under `x -> c x + 2t mod n`, sorted.
pub fn transform(n: usize, s: &[usize], c: usize, t: usize) -> Vec<usize> {
    let mut out: Vec<usize> = s.iter().map(|&x| (c * x + 2 * t) % n).collect();
    out.sort_unstable();
    out
}

/// Every distinct image of `s` under multiplication by odd units and
/// shifts by even residues. Negation is the unit `n - 1`.
pub fn orbit(n: usize, s: &[usize]) -> Vec<Vec<usize>> {
    let mut images: Vec<Vec<usize>> = odd_units(n)
        .into_iter()
        .flat_map(|c| (0..n / 2).map(move |t| transform(n, s, c, t)))
        .collect();
    images.sort();
    images.dedup();
    images
}

/// Order of the group acting in [`orbit`].
pub fn group_order(n: usize) -> usize {
    odd_units(n).len() * (n / 2)
}

/// Lexicographically least image of `s`.
pub fn canonicalize(n: usize, s: &[usize]) -> Vec<usize> {
    let mut best: Option<Vec<usize>> = None;
    for c in odd_units(n) {
        for t in 0..n / 2 {
            let img = transform(n, s, c, t);
            if best.as_ref().is_none_or(|b| img < *b) {
                best = Some(img);
            }
        }
    }
    best.unwrap_or_default()
}

fn is_canonical(n: usize, s: &[usize]) -> bool {
    let units = odd_units(n);
    for &c in &units {
        for t in 0..n / 2 {
            if transform(n, s, c, t).as_slice() < s {
                return false;
            }
        }
    }
    true
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchTask {
    pub n: usize,
    pub s_size: usize,
    pub target_d: usize,
    pub symmetry_reduce: bool,
    /// Largest logical weight enumerated when computing a hit's distance.
    pub w_cap: usize,
}

impl SearchTask {
    pub fn new(n: usize, s_size: usize, target_d: usize) -> Self {
        Self {
            n,
            s_size,
            target_d,
            symmetry_reduce: true,
            w_cap: (s_size + 1).max(target_d),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 4 || self.n % 2 == 1 {
            return Err(BccError::InvalidSpec(format!(
                "n must be even and at least 4, got {}",
                self.n
            )));
        }
        if self.n > 128 {
            return Err(BccError::Precondition("search supports n <= 128".into()));
        }
        if self.s_size == 0 || self.s_size > self.n / 2 {
            return Err(BccError::InvalidSpec(format!(
                "|S| = {} must lie in 1..={}",
                self.s_size,
                self.n / 2
            )));
        }
        if self.target_d == 0 {
            return Err(BccError::InvalidSpec("target distance must be positive".into()));
        }
        if self.w_cap < self.target_d {
            return Err(BccError::InvalidSpec(format!(
                "w_cap {} is below the target distance {}",
                self.w_cap, self.target_d
            )));
        }
        Ok(())
    }

    /// No code of distance above `|S| + 1` exists, so such tasks are empty.
    pub fn provably_empty(&self) -> bool {
        self.target_d > self.s_size + 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HitProperties {
    pub self_orthogonal: bool,
    pub prepared_logical_state: PreparedState,
    pub min_stabilizer_weight: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchHit {
    pub n: usize,
    #[serde(rename = "S")]
    pub offsets: Vec<usize>,
    pub d: Distance,
    pub canonical: bool,
    pub orbit_size: usize,
    pub properties: HitProperties,
}

impl SearchHit {
    pub fn spec(&self) -> BccSpec {
        let s: Vec<i64> = self.offsets.iter().map(|&o| o as i64).collect();
        BccSpec::new(self.n, &s).expect("hit offsets are valid")
    }
}

fn annotate(n: usize, offsets: Vec<usize>, d: Distance) -> SearchHit {
    let s: Vec<i64> = offsets.iter().map(|&o| o as i64).collect();
    let spec = BccSpec::new(n, &s).expect("offsets are odd and distinct");
    let code = CssCode::from_offsets(&spec);
    let generator_weight = code
        .hx()
        .rows()
        .iter()
        .chain(code.hz().rows())
        .map(|r| r.weight())
        .min()
        .unwrap_or(0);
    let canonical = is_canonical(n, &offsets);
    SearchHit {
        n,
        orbit_size: orbit(n, &offsets).len(),
        properties: HitProperties {
            self_orthogonal: code.self_orthogonal(),
            prepared_logical_state: prepared_logical_state(&spec),
            min_stabilizer_weight: code.min_stabilizer_weight(generator_weight),
        },
        offsets,
        d,
        canonical,
    }
}

/// Distance of a candidate if it reaches `target_d`, else `None`.
fn screen(n: usize, offsets: &[usize], task: &SearchTask) -> Option<Distance> {
    let s: Vec<i64> = offsets.iter().map(|&o| o as i64).collect();
    let code = CssCode::from_offsets(&BccSpec::new(n, &s).ok()?);
    if code.has_logical_below(task.target_d) {
        return None;
    }
    Some(code.distance(task.w_cap))
}

/// Subsets of `items` of size `k` whose largest element is `items[top]`,
/// in colexicographic order.
fn subsets_with_top(items: &[usize], k: usize, top: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k == 0 || top + 1 < k {
        return out;
    }
    let mut idx: Vec<usize> = (0..k - 1).collect();
    loop {
        let mut s: Vec<usize> = idx.iter().map(|&i| items[i]).collect();
        s.push(items[top]);
        out.push(s);
        // colex successor among indices below `top`
        let m = idx.len();
        let Some(j) = (0..m).find(|&j| idx[j] + 1 < if j + 1 == m { top } else { idx[j + 1] }) else {
            return out;
        };
        idx[j] += 1;
        for (i, v) in idx.iter_mut().enumerate().take(j) {
            *v = i;
        }
    }
}

/// One hit per equivalence class with distance at least `target_d`,
/// ordered by canonical offsets. Hits carry the canonical representative.
pub fn run_search(task: &SearchTask) -> Result<Vec<SearchHit>> {
    task.validate()?;
    if task.provably_empty() {
        return Ok(Vec::new());
    }
    let n = task.n;
    let odd: Vec<usize> = (1..n).step_by(2).collect();
    let found: Vec<(Vec<usize>, Distance)> = (0..odd.len())
        .into_par_iter()
        .flat_map_iter(|top| {
            subsets_with_top(&odd, task.s_size, top).into_iter().filter_map(|s| {
                if task.symmetry_reduce && !is_canonical(n, &s) {
                    return None;
                }
                screen(n, &s, task).map(|d| (s, d))
            })
        })
        .collect();
    let mut classes: BTreeMap<Vec<usize>, Distance> = BTreeMap::new();
    for (s, d) in found {
        classes.entry(canonicalize(n, &s)).or_insert(d);
    }
    Ok(classes.into_iter().map(|(s, d)| annotate(n, s, d)).collect())
}

#[cfg(test)]
mod tests;
