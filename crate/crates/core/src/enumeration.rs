//! Families of noncrossing partitions, their refinement posets, and
//! multichain censuses filtered by rank jumps, type, zero-block index and
//! annularity.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::annulus::{is_annular, is_member};
use crate::arith::binomial;
use crate::error::{Error, Result};
use crate::generate::{extend_signed, nc_b, nc_labels, nc_labels_exceptional};
use crate::partition::{AnyPartition, SetPartition, TypeVector};

/// Longest multichain the census supports.
pub const MAX_L: usize = 15;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    D,
    AugA,
    TildeA,
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::A => "A",
            Family::B => "B",
            Family::D => "D",
            Family::AugA => "aug-A",
            Family::TildeA => "tilde-A",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "a" => Ok(Family::A),
            "b" => Ok(Family::B),
            "d" => Ok(Family::D),
            "aug-a" | "auga" | "aug" => Ok(Family::AugA),
            "tilde-a" | "tildea" | "tilde" => Ok(Family::TildeA),
            _ => Err(Error::Param(format!("unknown family {s:?}"))),
        }
    }
}

/// A family with its parameters. For `TildeA`, `n` and `k` are the
/// cycle parameters: partitions of `[kn]` fixed by the half-turn.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FamilySpec {
    pub family: Family,
    pub n: usize,
    pub k: usize,
    pub r: usize,
}

impl FamilySpec {
    pub fn new(family: Family, n: usize, k: usize, r: usize) -> Result<Self> {
        let s = FamilySpec { family, n, k, r };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        let FamilySpec { family, n, k, r } = *self;
        if n == 0 || k == 0 {
            return Err(Error::Param("n and k must be positive".into()));
        }
        match family {
            Family::D if n < 2 => Err(Error::Param("type D needs n ≥ 2".into())),
            Family::AugA if r == 0 || r >= k => Err(Error::Param(format!("aug-A needs 0 < r < k, got r={r} k={k}"))),
            Family::TildeA if (k * n) % 2 != 0 => Err(Error::Param("tilde-A needs kn even".into())),
            Family::AugA | Family::TildeA => Ok(()),
            _ if r != 0 => Err(Error::Param("r only applies to aug-A".into())),
            _ => Ok(()),
        }
    }

    /// Number of points the partitions live on (up to sign).
    pub fn ground(&self) -> usize {
        match self.family {
            Family::AugA => self.k * self.n + self.r,
            _ => self.k * self.n,
        }
    }

    /// Rank of a partition is `base − b`, with b the number of (nonzero
    /// pairs of) k-divisible blocks.
    pub fn base(&self) -> usize {
        match self.family {
            Family::TildeA => self.n / 2,
            _ => self.n,
        }
    }

    pub fn max_rank(&self) -> usize {
        match self.family {
            Family::A => self.n - 1,
            _ => self.base(),
        }
    }

    pub fn type_len(&self) -> usize {
        self.base()
    }

    /// Closed-form family size, where known, for the scale guard.
    pub fn size_estimate(&self) -> Option<BigUint> {
        let FamilySpec { family, n, k, r } = *self;
        let (n, k, r) = (n as i64, k as i64, r as i64);
        match family {
            Family::A => Some(binomial((k + 1) * n, n) / BigUint::from((k * n + 1) as u64)),
            Family::B => Some(binomial((k + 1) * n, n)),
            Family::D => {
                // Π over the degrees 2, 4, …, 2n−2, n of (kh + d)/d with h = 2n−2
                let h = 2 * n - 2;
                let mut num = BigUint::from(1u32);
                let mut den = BigUint::from(1u32);
                for d in (1..n).map(|i| 2 * i).chain([n]) {
                    num *= (k * h + d) as u64;
                    den *= d as u64;
                }
                Some(num / den)
            }
            Family::AugA => Some(binomial(n + k * n + r, n)),
            Family::TildeA if n % 2 == 1 && k % 2 == 0 => {
                let (h, kk) = (n / 2, k / 2);
                Some(binomial(h + 2 * kk * h + kk, h))
            }
            Family::TildeA => None,
        }
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::AugA => write!(f, "{}(n={}, k={}, r={})", self.family, self.n, self.k, self.r),
            _ => write!(f, "{}(n={}, k={})", self.family, self.n, self.k),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Limits {
    pub max_ground: usize,
    pub max_family: usize,
}

impl Default for Limits {
    fn default() -> Self {
        let max_ground = std::env::var("NCPART_MAX_GROUND").ok().and_then(|v| v.parse().ok()).unwrap_or(16);
        Limits { max_ground, max_family: 200_000 }
    }
}

impl Limits {
    pub fn check(&self, spec: &FamilySpec) -> Result<()> {
        if spec.ground() > self.max_ground {
            return Err(Error::ScaleGuard(format!(
                "{spec} lives on {} points, above the limit {} (set NCPART_MAX_GROUND to raise it)",
                spec.ground(),
                self.max_ground
            )));
        }
        if let Some(sz) = spec.size_estimate() {
            if sz > BigUint::from(self.max_family) {
                return Err(Error::ScaleGuard(format!("{spec} has {sz} elements, above the limit {}", self.max_family)));
            }
        }
        Ok(())
    }
}

fn is_half_turn_fixed(lab: &[usize]) -> bool {
    let m = lab.len();
    let h = m / 2;
    (0..m).all(|i| (0..m).all(|j| (lab[i] == lab[j]) == (lab[(i + h) % m] == lab[(j + h) % m])))
}

/// Every element of the family, sorted canonically.
pub fn enumerate_family(spec: &FamilySpec, limits: &Limits) -> Result<Vec<AnyPartition>> {
    spec.validate()?;
    limits.check(spec)?;
    let FamilySpec { family, n, k, r } = *spec;
    let mut out: Vec<AnyPartition> = match family {
        Family::A => nc_labels(k * n, k).iter().map(|l| AnyPartition::Set(SetPartition::from_labels(l))).collect(),
        Family::B => nc_b(n, k).into_iter().map(AnyPartition::Signed).collect(),
        Family::D => {
            let m = k * (n - 1);
            nc_b(m, 1)
                .into_par_iter()
                .flat_map_iter(|o| {
                    let reps: Vec<Vec<i32>> = o.pair_reps().iter().map(|b| b.to_vec()).collect();
                    let zero: Vec<i32> =
                        o.zero_block().map(|z| z.iter().copied().filter(|&x| x > 0).collect()).unwrap_or_default();
                    extend_signed(k * n, &reps, &zero).into_iter().filter(|p| is_member(p, n, k))
                })
                .map(AnyPartition::Signed)
                .collect()
        }
        Family::AugA => nc_labels_exceptional(k * n + r, k, 1)
            .iter()
            .map(|l| AnyPartition::Set(SetPartition::from_labels(l)))
            .collect(),
        Family::TildeA => nc_labels(k * n, k)
            .into_iter()
            .filter(|l| is_half_turn_fixed(l))
            .map(|l| AnyPartition::Set(SetPartition::from_labels(&l)))
            .collect(),
    };
    if out.len() > limits.max_family {
        return Err(Error::ScaleGuard(format!("{spec} has {} elements, above the limit {}", out.len(), limits.max_family)));
    }
    out.sort();
    Ok(out)
}

/// Per-element data used by the census.
#[derive(Clone, Debug)]
pub struct ElementInfo {
    pub rank: usize,
    pub ktype: TypeVector,
    pub has_zero: bool,
    pub annular: bool,
}

/// The k-type, rank and flags of an element of `spec`'s family.
pub fn element_info(spec: &FamilySpec, p: &AnyPartition) -> Result<ElementInfo> {
    let k = spec.k;
    let len = spec.type_len();
    let (ktype, has_zero, annular) = match (spec.family, p) {
        (Family::A, AnyPartition::Set(s)) => (s.k_type(k)?, false, false),
        (Family::B, AnyPartition::Signed(s)) => (s.k_type(k)?, s.zero_block().is_some(), false),
        (Family::D, AnyPartition::Signed(s)) => (s.k_type(k)?, s.zero_block().is_some(), is_annular(s, spec.n, k)),
        (Family::AugA, AnyPartition::Set(s)) => {
            let mut c = vec![0; len];
            for b in s.blocks().iter().filter(|b| b.len() % k == 0) {
                c[b.len() / k - 1] += 1;
            }
            (TypeVector::new(c), false, false)
        }
        (Family::TildeA, AnyPartition::Set(s)) => {
            let mut c = vec![0; len];
            let mut zero = false;
            for b in s.blocks() {
                if is_fixed_block(s, b) {
                    zero = true;
                } else {
                    c[b.len() / k - 1] += 1;
                }
            }
            for x in c.iter_mut() {
                *x /= 2;
            }
            (TypeVector::new(c), zero, false)
        }
        _ => return Err(Error::Param(format!("element {p} does not belong to {spec}"))),
    };
    let ktype = ktype.resized(len).ok_or_else(|| Error::Param("type longer than expected".into()))?;
    let rank = spec.base().checked_sub(ktype.b).ok_or_else(|| Error::Param("negative rank".into()))?;
    Ok(ElementInfo { rank, ktype, has_zero, annular })
}

fn is_fixed_block(s: &SetPartition, b: &[usize]) -> bool {
    let m = s.n();
    let h = m / 2;
    b.iter().all(|&x| b.contains(&((x - 1 + h) % m + 1)))
}

/// The family as a graded poset under refinement.
pub struct Poset {
    pub spec: FamilySpec,
    pub elements: Vec<AnyPartition>,
    pub info: Vec<ElementInfo>,
    pub types: Vec<TypeVector>,
    type_id: Vec<u32>,
    /// `below[j]`: every i with element i ≤ element j.
    pub below: Vec<Vec<u32>>,
}

impl Poset {
    pub fn build(spec: &FamilySpec, limits: &Limits) -> Result<Poset> {
        let elements = enumerate_family(spec, limits)?;
        let info: Vec<ElementInfo> = elements.par_iter().map(|p| element_info(spec, p)).collect::<Result<_>>()?;
        let mut types: Vec<TypeVector> = info.iter().map(|i| i.ktype.clone()).collect();
        types.sort();
        types.dedup();
        let type_id = info.iter().map(|i| types.binary_search(&i.ktype).unwrap() as u32).collect();
        let labels: Vec<Vec<usize>> = elements.iter().map(|p| p.labels()).collect();
        let firsts: Vec<Vec<usize>> = labels
            .iter()
            .map(|lab| {
                let mut first: HashMap<usize, usize> = HashMap::new();
                lab.iter().enumerate().map(|(x, &b)| *first.entry(b).or_insert(x)).collect()
            })
            .collect();
        let below = (0..elements.len())
            .into_par_iter()
            .map(|j| {
                let lj = &labels[j];
                (0..elements.len())
                    .filter(|&i| info[i].rank <= info[j].rank && firsts[i].iter().enumerate().all(|(x, &f)| lj[x] == lj[f]))
                    .map(|i| i as u32)
                    .collect()
            })
            .collect();
        Ok(Poset { spec: *spec, elements, info, types, type_id, below })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.below[j].binary_search(&(i as u32)).is_ok()
    }

    /// Counts multichains π_1 ≤ … ≤ π_ℓ grouped by (type of π_1, ranks,
    /// first level with a zero block, some level wraps around).
    pub fn census(&self, l: usize) -> Result<Census> {
        if l == 0 {
            return Err(Error::Param("ℓ must be at least 1".into()));
        }
        if l > MAX_L {
            return Err(Error::Param(format!("ℓ must be at most {MAX_L}")));
        }
        let mut cur: Vec<HashMap<ChainKey, u128>> = (0..self.len())
            .map(|i| {
                let mut ranks = [0u8; MAX_L];
                ranks[0] = self.info[i].rank as u8;
                let key = ChainKey {
                    ty: self.type_id[i],
                    ranks,
                    index: if self.info[i].has_zero { 1 } else { 0 },
                    annular: self.info[i].annular,
                };
                HashMap::from([(key, 1u128)])
            })
            .collect();
        for level in 1..l {
            cur = (0..self.len())
                .into_par_iter()
                .map(|j| {
                    let inf = &self.info[j];
                    let mut acc: HashMap<ChainKey, u128> = HashMap::new();
                    for &i in &self.below[j] {
                        for (key, &c) in &cur[i as usize] {
                            let mut nk = *key;
                            nk.ranks[level] = inf.rank as u8;
                            if nk.index == 0 && inf.has_zero {
                                nk.index = level as u8 + 1;
                            }
                            nk.annular |= inf.annular;
                            let e = acc.entry(nk).or_insert(0);
                            *e = e.checked_add(c).ok_or_else(|| Error::ScaleGuard("count overflow".into()))?;
                        }
                    }
                    Ok(acc)
                })
                .collect::<Result<_>>()?;
        }
        let mut map: HashMap<ChainKey, u128> = HashMap::new();
        for m in cur {
            for (mut key, c) in m {
                if key.index == 0 {
                    key.index = l as u8 + 1;
                }
                let e = map.entry(key).or_insert(0);
                *e = e.checked_add(c).ok_or_else(|| Error::ScaleGuard("count overflow".into()))?;
            }
        }
        Ok(Census { spec: self.spec, l, types: self.types.clone(), map })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
struct ChainKey {
    ty: u32,
    ranks: [u8; MAX_L],
    /// First level (1-based) carrying a zero block; ℓ+1 when none does.
    index: u8,
    annular: bool,
}

/// Optional constraints on a multichain.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Filters {
    /// (s_1, …, s_{ℓ+1}): s_1 = rank π_1, s_i = rank π_i − rank π_{i−1},
    /// s_{ℓ+1} = max rank − rank π_ℓ.
    pub jumps: Option<Vec<usize>>,
    /// k-type of π_1.
    pub ktype: Option<TypeVector>,
    /// First level with a zero block (ℓ+1 if none).
    pub index: Option<usize>,
    /// Some level has a block wrapping around the annulus.
    pub annular: Option<bool>,
}

pub struct Census {
    pub spec: FamilySpec,
    pub l: usize,
    types: Vec<TypeVector>,
    map: HashMap<ChainKey, u128>,
}

impl Census {
    pub fn check(&self, f: &Filters) -> Result<()> {
        let spec = &self.spec;
        if let Some(j) = &f.jumps {
            if j.len() != self.l + 1 {
                return Err(Error::Param(format!("expected {} jumps, got {}", self.l + 1, j.len())));
            }
            if j.iter().sum::<usize>() != spec.max_rank() {
                return Err(Error::Param(format!("jumps must sum to {}", spec.max_rank())));
            }
            if let Some(t) = &f.ktype {
                if spec.base() < t.b || j[0] != spec.base() - t.b {
                    return Err(Error::Param(format!("s_1 = {} is inconsistent with b = {}", j[0], t.b)));
                }
            }
        }
        if let Some(t) = &f.ktype {
            if t.resized(spec.type_len()).is_none() {
                return Err(Error::Param(format!("type vector longer than {}", spec.type_len())));
            }
        }
        if let Some(d) = f.index {
            if spec.family != Family::B {
                return Err(Error::Param("the zero-block index applies to type B".into()));
            }
            if d == 0 || d > self.l + 1 {
                return Err(Error::Param(format!("index must lie in 1..={}", self.l + 1)));
            }
        }
        if f.annular.is_some() && spec.family != Family::D {
            return Err(Error::Param("annularity applies to type D".into()));
        }
        Ok(())
    }

    pub fn count(&self, f: &Filters) -> Result<BigUint> {
        self.check(f)?;
        let ty = match &f.ktype {
            Some(t) => {
                let t = t.resized(self.spec.type_len()).unwrap();
                match self.types.binary_search(&t) {
                    Ok(i) => Some(i as u32),
                    Err(_) => return Ok(BigUint::from(0u32)),
                }
            }
            None => None,
        };
        let max = self.spec.max_rank();
        let l = self.l;
        let mut total: u128 = 0;
        for (key, &c) in &self.map {
            if ty.is_some_and(|t| t != key.ty) {
                continue;
            }
            if f.index.is_some_and(|d| d != key.index as usize) {
                continue;
            }
            if f.annular.is_some_and(|a| a != key.annular) {
                continue;
            }
            if let Some(j) = &f.jumps {
                let mut acc = 0;
                let ok = (0..l).all(|i| {
                    acc += j[i];
                    acc == key.ranks[i] as usize
                }) && acc + j[l] == max;
                if !ok {
                    continue;
                }
            }
            total += c;
        }
        Ok(BigUint::from(total))
    }

    pub fn total(&self) -> BigUint {
        BigUint::from(self.map.values().sum::<u128>())
    }
}

/// A complete counting query.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountQuery {
    pub spec: FamilySpec,
    pub l: usize,
    pub filters: Filters,
}

pub fn count_multichains(q: &CountQuery, limits: &Limits) -> Result<BigUint> {
    Poset::build(&q.spec, limits)?.census(q.l)?.count(&q.filters)
}

/// Z(ℓ): the number of multichains of length ℓ.
pub fn zeta(spec: &FamilySpec, l: usize, limits: &Limits) -> Result<BigUint> {
    Ok(Poset::build(spec, limits)?.census(l)?.total())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lim() -> Limits {
        Limits { max_ground: 16, max_family: 200_000 }
    }

    fn spec(f: Family, n: usize, k: usize, r: usize) -> FamilySpec {
        FamilySpec::new(f, n, k, r).unwrap()
    }

    #[test]
    fn family_sizes_match_estimates() {
        for s in [
            spec(Family::A, 5, 1, 0),
            spec(Family::A, 3, 2, 0),
            spec(Family::B, 4, 1, 0),
            spec(Family::B, 2, 2, 0),
            spec(Family::D, 4, 1, 0),
            spec(Family::D, 3, 2, 0),
            spec(Family::AugA, 2, 3, 1),
            spec(Family::AugA, 3, 2, 1),
            spec(Family::TildeA, 5, 2, 0),
            spec(Family::TildeA, 3, 4, 0),
        ] {
            let n = enumerate_family(&s, &lim()).unwrap().len();
            assert_eq!(BigUint::from(n), s.size_estimate().unwrap(), "{s}");
        }
    }

    #[test]
    fn zeta_of_nc4() {
        // Z(NC(n), ℓ) = C((ℓ+1)n, n)/(ℓn+1)
        let s = spec(Family::A, 4, 1, 0);
        let p = Poset::build(&s, &lim()).unwrap();
        for l in 1..=3 {
            let want = binomial(((l + 1) * 4) as i64, 4) / BigUint::from((l * 4 + 1) as u64);
            assert_eq!(p.census(l).unwrap().total(), want);
        }
    }

    #[test]
    fn rejects_bad_queries() {
        let s = spec(Family::A, 3, 1, 0);
        let p = Poset::build(&s, &lim()).unwrap();
        assert!(p.census(0).is_err());
        let c = p.census(1).unwrap();
        let bad = Filters { jumps: Some(vec![1, 0]), ..Default::default() };
        assert!(c.count(&bad).is_err());
        let ok = Filters { jumps: Some(vec![1, 1]), ..Default::default() };
        assert_eq!(c.count(&ok).unwrap(), BigUint::from(3u32));
        assert!(FamilySpec::new(Family::AugA, 2, 2, 2).is_err());
        let guard = Limits { max_ground: 4, max_family: 10 };
        assert!(matches!(enumerate_family(&spec(Family::A, 5, 1, 0), &guard), Err(Error::ScaleGuard(_))));
    }

    #[test]
    fn tilde_types_pair_up() {
        let s = spec(Family::TildeA, 3, 2, 0);
        for p in enumerate_family(&s, &lim()).unwrap() {
            let inf = element_info(&s, &p).unwrap();
            assert!(inf.has_zero, "{p}");
        }
    }
}
