//! Brute-force censuses against the closed forms, plus the structural checks
//! behind them.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::enumeration::{element_info, enumerate_family, Family, FamilySpec, Filters, Limits, Poset};
use crate::error::{Error, Result};
use crate::formula::{accepts, admissible, brute_query, eval_formula, family_for, FormulaId, FormulaParams};
use crate::partition::{SignedPartition, TypeVector};
use crate::typeb::psi;

/// Family parameters of one sweep point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FamilyTuple {
    pub n: usize,
    pub k: usize,
    #[serde(default)]
    pub r: usize,
    pub l: usize,
}

/// Bounds for a sweep; every accepted (n, k, r, ℓ) inside them is visited.
#[derive(Clone, Copy, Debug)]
pub struct ParamRange {
    pub max_n: usize,
    pub max_k: usize,
    pub max_kn: usize,
    pub max_l: usize,
}

impl ParamRange {
    pub fn tuples(&self, id: FormulaId) -> Vec<FamilyTuple> {
        let mut out = Vec::new();
        for n in 1..=self.max_n {
            for k in 1..=self.max_k {
                if k * n > self.max_kn {
                    continue;
                }
                for l in 1..=self.max_l {
                    for r in 0..k.max(1) {
                        if accepts(id, n, k, r, l) {
                            out.push(FamilyTuple { n, k, r, l });
                        }
                    }
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CountReport {
    pub id: String,
    pub query: FormulaParams,
    pub brute: String,
    pub formula: String,
    #[serde(rename = "match")]
    pub matches: bool,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct VerifyOutcome {
    pub reports: Vec<CountReport>,
    /// Family tuples not visited because of the scale guard.
    pub skipped: Vec<String>,
}

impl VerifyOutcome {
    pub fn mismatches(&self) -> Vec<&CountReport> {
        self.reports.iter().filter(|r| !r.matches).collect()
    }

    pub fn all_match(&self) -> bool {
        self.reports.iter().all(|r| r.matches)
    }

    pub fn summary(&self) -> String {
        let bad = self.mismatches().len();
        if bad == 0 {
            format!("all {} tuples match", self.reports.len())
        } else {
            format!("{bad} of {} tuples mismatch", self.reports.len())
        }
    }
}

/// Compares `id` against brute force at every admissible tuple of the
/// given family tuples.
pub fn verify(id: FormulaId, tuples: &[FamilyTuple], limits: &Limits) -> Result<VerifyOutcome> {
    let mut by_spec: BTreeMap<FamilySpec, Vec<FamilyTuple>> = BTreeMap::new();
    let mut out = VerifyOutcome::default();
    for t in tuples {
        if !accepts(id, t.n, t.k, t.r, t.l) {
            return Err(Error::Hypothesis(format!("{id} does not apply at {t:?}")));
        }
        let spec = family_for(id, t.n, t.k, t.r)?;
        if let Err(e) = limits.check(&spec) {
            out.skipped.push(format!("{spec}: {e}"));
            continue;
        }
        by_spec.entry(spec).or_default().push(*t);
    }
    let chunks: Vec<Vec<CountReport>> = by_spec
        .into_par_iter()
        .map(|(spec, ts)| -> Result<Vec<CountReport>> {
            let poset = Poset::build(&spec, limits)?;
            let mut reps = Vec::new();
            let mut ls: Vec<usize> = ts.iter().map(|t| t.l).collect();
            ls.sort_unstable();
            ls.dedup();
            for l in ls {
                let census = poset.census(l)?;
                for t in ts.iter().filter(|t| t.l == l) {
                    for p in admissible(id, t.n, t.k, t.r, l) {
                        let (_, filters) = brute_query(id, &p)?;
                        let brute = census.count(&filters)?;
                        let formula = eval_formula(id, &p)?;
                        reps.push(CountReport {
                            id: id.to_string(),
                            matches: brute == formula,
                            brute: brute.to_string(),
                            formula: formula.to_string(),
                            query: p,
                        });
                    }
                }
            }
            Ok(reps)
        })
        .collect::<Result<_>>()?;
    out.reports = chunks.into_iter().flatten().collect();
    Ok(out)
}

/// Outcome of the tilde-A / aug-A comparison.
#[derive(Clone, Debug, Serialize)]
pub struct IsoReport {
    pub n: usize,
    pub k: usize,
    pub size: usize,
    pub bijective: bool,
    pub order_preserving: bool,
    pub type_preserving: bool,
}

impl IsoReport {
    pub fn ok(&self) -> bool {
        self.bijective && self.order_preserving && self.type_preserving
    }
}

/// Reads each half-turn-fixed 2k-divisible partition of the (2n+1)·2k-cycle
/// as a signed partition of ±[2kn+k], applies ψ, and checks that this is an
/// isomorphism onto the augmented family on [2kn+k] preserving 2k-types.
pub fn armstrong_iso(n: usize, k: usize, limits: &Limits) -> Result<IsoReport> {
    let tilde = FamilySpec::new(Family::TildeA, 2 * n + 1, 2 * k, 0)?;
    let aug = FamilySpec::new(Family::AugA, n, 2 * k, k)?;
    let big = 2 * k * n + k;
    let src = enumerate_family(&tilde, limits)?;
    let dst = enumerate_family(&aug, limits)?;
    let mut image = Vec::with_capacity(src.len());
    let mut type_preserving = true;
    for p in &src {
        let s = p.as_set().ok_or_else(|| Error::Param("expected a set partition".into()))?;
        let signed = SignedPartition::from_cyclic_labels(big, &s.labels())?;
        let sigma = psi(&signed)?.sigma;
        let q = crate::partition::AnyPartition::Set(sigma);
        let ta: TypeVector = element_info(&tilde, p)?.ktype;
        let tb = element_info(&aug, &q).map(|i| i.ktype);
        type_preserving &= tb.ok() == Some(ta);
        image.push(q);
    }
    let mut sorted = image.clone();
    sorted.sort();
    let bijective = sorted == dst && {
        let mut d = sorted.clone();
        d.dedup();
        d.len() == sorted.len()
    };
    let leq = |a: &crate::partition::AnyPartition, b: &crate::partition::AnyPartition| -> bool {
        a.as_set().unwrap().refines(b.as_set().unwrap()).unwrap_or(false)
    };
    let order_preserving = (0..src.len())
        .into_par_iter()
        .all(|i| (0..src.len()).all(|j| leq(&src[i], &src[j]) == leq(&image[i], &image[j])));
    Ok(IsoReport { n, k, size: src.len(), bijective, order_preserving, type_preserving })
}

/// Splits the non-wrapping multichains of type D by where ±n joins: for
/// types of weight n their number equals Σ_{i=2}^{ℓ+1} of the type-B(n−1)
/// counts with s_i lowered by one, b_1 lowered by one and zero block first
/// appearing at level i. Returns (params, type-D count, type-B sum).
pub fn d_nonannular_split(n: usize, k: usize, l: usize, limits: &Limits) -> Result<Vec<(FormulaParams, BigUint, BigUint)>> {
    if n < 3 {
        return Err(Error::Param("the split needs n ≥ 3".into()));
    }
    let dspec = FamilySpec::new(Family::D, n, k, 0)?;
    let bspec = FamilySpec::new(Family::B, n - 1, k, 0)?;
    let dc = Poset::build(&dspec, limits)?.census(l)?;
    let bc = Poset::build(&bspec, limits)?.census(l)?;
    let mut out = Vec::new();
    for p in admissible(FormulaId::DAnnular, n, k, 0, l) {
        let t = p.ktype.clone().unwrap();
        let j = p.jumps.clone().unwrap();
        let f = Filters { jumps: Some(j.clone()), ktype: Some(t.clone()), index: None, annular: Some(false) };
        let d = dc.count(&f)?;
        let mut sum = BigUint::from(0u32);
        if t.counts[0] > 0 {
            let mut red = t.counts.clone();
            red[0] -= 1;
            red.truncate(n - 1);
            let red = TypeVector::new(red);
            for i in 1..=l {
                if j[i] == 0 {
                    continue;
                }
                let mut j2 = j.clone();
                j2[i] -= 1;
                let g = Filters { jumps: Some(j2), ktype: Some(red.clone()), index: Some(i + 1), annular: None };
                sum += bc.count(&g)?;
            }
        }
        out.push((p, d, sum));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lim() -> Limits {
        Limits { max_ground: 16, max_family: 200_000 }
    }

    #[test]
    fn small_sweeps_match() {
        let range = ParamRange { max_n: 3, max_k: 2, max_kn: 4, max_l: 2 };
        for id in [FormulaId::ThmA, FormulaId::ThmB, FormulaId::Index, FormulaId::AChainType] {
            let o = verify(id, &range.tuples(id), &lim()).unwrap();
            assert!(o.all_match(), "{id}: {:?}", o.mismatches());
            assert!(!o.reports.is_empty());
        }
    }

    #[test]
    fn armstrong_small() {
        let r = armstrong_iso(1, 1, &lim()).unwrap();
        assert_eq!(r.size, 4);
        assert!(r.ok(), "{r:?}");
    }

    #[test]
    fn split_small() {
        for (a, b, c) in d_nonannular_split(3, 1, 2, &lim()).unwrap() {
            assert_eq!(b, c, "{a:?}");
        }
    }
}
