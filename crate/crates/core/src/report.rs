//! Serializable reports for codes, families and searches.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::code::{
    cyclic_cluster_transform, five_qubit_code, hadamard_swap_permutation, multiplier_permutation,
    prepared_logical_state, rotated_toric_offsets, rotated_toric_plaquettes, BccSpec, CssCode, CyclicClusterCode,
    Distance, PreparedState,
};
use crate::error::Result;
use crate::gf2::BitMatrix;
use crate::pauli::PauliOperator;
use crate::search::{SearchHit, SearchTask};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogicalStrings {
    pub x: String,
    pub z: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeReport {
    pub n: usize,
    #[serde(rename = "S")]
    pub offsets: Vec<usize>,
    pub k: usize,
    pub d: Option<Distance>,
    pub generators: Vec<String>,
    pub logicals: Vec<LogicalStrings>,
    pub self_orthogonal: bool,
    pub prepared_logical_state: PreparedState,
}

impl CodeReport {
    /// `w_max = None` skips the distance computation.
    pub fn new(spec: &BccSpec, w_max: Option<usize>) -> Self {
        let code = CssCode::from_offsets(spec);
        Self {
            n: spec.n(),
            offsets: spec.offsets().to_vec(),
            k: code.logical_count(),
            d: w_max.map(|w| code.distance(w)),
            generators: code.generators().iter().map(PauliOperator::to_dense_string).collect(),
            logicals: code
                .logicals()
                .iter()
                .map(|(x, z)| LogicalStrings {
                    x: x.to_dense_string(),
                    z: z.to_dense_string(),
                })
                .collect(),
            self_orthogonal: code.self_orthogonal(),
            prepared_logical_state: prepared_logical_state(spec),
        }
    }
}

impl fmt::Display for CodeReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.d.map_or("?".to_string(), |d| d.to_string());
        writeln!(f, "[[{}, {}, {}]]  S = {:?}", self.n, self.k, d, self.offsets)?;
        writeln!(f, "self_orthogonal: {}", self.self_orthogonal)?;
        writeln!(f, "prepared_logical_state: {}", self.prepared_logical_state)?;
        writeln!(f, "generators:")?;
        for g in &self.generators {
            writeln!(f, "  {g}")?;
        }
        writeln!(f, "logicals:")?;
        for (i, l) in self.logicals.iter().enumerate() {
            writeln!(f, "  X{}: {}", i + 1, l.x)?;
            writeln!(f, "  Z{}: {}", i + 1, l.z)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    RotatedToric,
    CyclicCluster,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::RotatedToric => "rotated-toric",
            Family::CyclicCluster => "cyclic-cluster",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyReport {
    pub family: Family,
    pub d: usize,
    pub n: usize,
    /// `S` for the rotated toric code, `T` for the cyclic cluster code.
    pub offsets: Vec<usize>,
    pub k: usize,
    pub distance: Distance,
    pub checks: Vec<Check>,
}

impl FamilyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn check(name: impl Into<String>, passed: bool) -> Check {
    Check {
        name: name.into(),
        passed,
    }
}

/// Rotated toric code of distance `d`: parameters `[[d²+1, 2, d]]`,
/// plaquette membership and both automorphisms.
pub fn rotated_toric_report(d: usize) -> Result<FamilyReport> {
    let spec = rotated_toric_offsets(d)?;
    let code = CssCode::from_offsets(&spec);
    let n = spec.n();
    let distance = code.distance(d);
    let plaquettes = rotated_toric_plaquettes(d)?;
    let in_rowspace = plaquettes
        .iter()
        .all(|p| code.hz().in_rowspace(p.z_support()).unwrap_or(false));
    let multiplier = multiplier_permutation(n, d)
        .map(|p| code.is_automorphism(&p, true))
        .unwrap_or(false);
    let swap = hadamard_swap_permutation(&spec)
        .map(|p| code.is_automorphism(&p, true))
        .unwrap_or(false);
    let k = code.logical_count();
    Ok(FamilyReport {
        family: Family::RotatedToric,
        d,
        n,
        offsets: spec.offsets().to_vec(),
        k,
        distance,
        checks: vec![
            check(format!("n = {}", d * d + 1), n == d * d + 1),
            check("k = 2", k == 2),
            check(format!("distance = {d}"), distance == Distance::Exact(d)),
            check("plaquettes are stabilizers", in_rowspace),
            check(format!("m -> {d}m with transversal H is an automorphism"), multiplier),
            check("sublattice swap with transversal H is an automorphism", swap),
        ],
    })
}

/// Cyclic cluster code obtained from the rotated toric offsets. For `d = 3`
/// its stabilizer group is compared with the `[[5,1,3]]` code.
pub fn cyclic_cluster_report(d: usize) -> Result<FamilyReport> {
    let spec = rotated_toric_offsets(d)?;
    let (n, t) = cyclic_cluster_transform(&spec)?;
    let signed: Vec<i64> = t.iter().map(|&x| x as i64).collect();
    let cc = CyclicClusterCode::new(n, &signed)?;
    let k = cc.logical_count();
    let distance = cc.distance(d);
    let mut checks = vec![check("offsets are closed under negation", true)];
    if d == 3 {
        let five = BitMatrix::from_rows(10, five_qubit_code().iter().map(PauliOperator::symplectic).collect());
        checks.push(check(
            "generator group equals the [[5,1,3]] code",
            cc.symplectic_generators().same_rowspace(&five),
        ));
    }
    Ok(FamilyReport {
        family: Family::CyclicCluster,
        d,
        n,
        offsets: t,
        k,
        distance,
        checks,
    })
}

impl fmt::Display for FamilyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.family {
            Family::RotatedToric => "S",
            Family::CyclicCluster => "T",
        };
        writeln!(
            f,
            "{} d={}: [[{}, {}, {}]]  {} = {:?}",
            self.family, self.d, self.n, self.k, self.distance, name, self.offsets
        )?;
        for c in &self.checks {
            writeln!(f, "  [{}] {}", if c.passed { "ok" } else { "FAIL" }, c.name)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchReport {
    pub task: SearchTask,
    pub hits: Vec<SearchHit>,
}

impl fmt::Display for SearchReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t = &self.task;
        writeln!(
            f,
            "n={} |S|={} d>={}: {} class(es)",
            t.n,
            t.s_size,
            t.target_d,
            self.hits.len()
        )?;
        if self.hits.is_empty() {
            return Ok(());
        }
        writeln!(
            f,
            "{:<28} {:>3} {:>6} {:>9} {:>10} {:>8}",
            "S", "d", "orbit", "self-orth", "state", "min-stab"
        )?;
        for h in &self.hits {
            let s: Vec<String> = h.offsets.iter().map(|o| o.to_string()).collect();
            let min = h
                .properties
                .min_stabilizer_weight
                .map_or("-".to_string(), |w| w.to_string());
            writeln!(
                f,
                "{:<28} {:>3} {:>6} {:>9} {:>10} {:>8}",
                format!("{{{}}}", s.join(",")),
                h.d.to_string(),
                h.orbit_size,
                h.properties.self_orthogonal,
                h.properties.prepared_logical_state.to_string(),
                min
            )?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::run_search;

    #[test]
    fn code_report_round_trips() {
        let spec = BccSpec::new(18, &[5, 11, 15, 17]).unwrap();
        let r = CodeReport::new(&spec, Some(6));
        assert_eq!((r.k, r.d), (2, Some(Distance::Exact(5))));
        assert!(r.self_orthogonal);
        assert_eq!(r.generators.len(), 18);
        assert!(r.generators.iter().all(|g| g.len() == 18 && !g.contains('Y')));
        let back: CodeReport = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
        assert_eq!(back, r);
        assert!(r.to_string().starts_with("[[18, 2, 5]]"));
    }

    #[test]
    fn family_reports() {
        let r = rotated_toric_report(3).unwrap();
        assert!(r.passed(), "{r}");
        assert_eq!((r.n, r.offsets.clone()), (10, vec![3, 5, 7]));
        let r = rotated_toric_report(5).unwrap();
        assert!(r.passed(), "{r}");
        assert_eq!(r.n, 26);
        let r = cyclic_cluster_report(3).unwrap();
        assert!(r.passed(), "{r}");
        assert_eq!((r.n, r.k, r.distance), (5, 1, Distance::Exact(3)));
        assert!(rotated_toric_report(4).is_err());
    }

    #[test]
    fn search_report_round_trips() {
        let task = SearchTask::new(18, 4, 5);
        let r = SearchReport {
            hits: run_search(&task).unwrap(),
            task,
        };
        let back: SearchReport = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
        assert_eq!(back, r);
        let canon: Vec<String> = crate::search::canonicalize(18, &[5, 11, 15, 17])
            .iter()
            .map(|o| o.to_string())
            .collect();
        assert!(r.to_string().contains(&format!("{{{}}}", canon.join(","))));
    }
}
