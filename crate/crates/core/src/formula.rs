//! Closed-form chain counts, keyed by stable string ids.
//!
//! Every formula checks its hypotheses strictly and refuses to evaluate
//! outside them; divisions must come out exact.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::arith::{binomial, multinomial};
use crate::enumeration::{Family, FamilySpec, Filters};
use crate::error::{Error, Result};
use crate::partition::TypeVector;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FormulaId {
    ARank,
    BRank,
    DRank,
    AType,
    BType,
    DTypeLow,
    DTypeFull,
    AChainType,
    BChainType,
    BZeroIndex,
    ThmA,
    ThmB,
    ThmD,
    AugType,
    AugRank,
    AugZeta,
    TildeType,
    TildeRank,
    TildeZeta,
    Index,
    DAnnular,
}

use FormulaId::*;

impl FormulaId {
    pub const ALL: [FormulaId; 21] = [
        ARank, BRank, DRank, AType, BType, DTypeLow, DTypeFull, AChainType, BChainType, BZeroIndex, ThmA, ThmB,
        ThmD, AugType, AugRank, AugZeta, TildeType, TildeRank, TildeZeta, Index, DAnnular,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            ARank => "A-RANK",
            BRank => "B-RANK",
            DRank => "D-RANK",
            AType => "A-TYPE",
            BType => "B-TYPE",
            DTypeLow => "D-TYPE-LOW",
            DTypeFull => "D-TYPE-FULL",
            AChainType => "A-CHAIN-TYPE",
            BChainType => "B-CHAIN-TYPE",
            BZeroIndex => "B-ZERO-INDEX",
            ThmA => "THM-A",
            ThmB => "THM-B",
            ThmD => "THM-D",
            AugType => "AUG-TYPE",
            AugRank => "AUG-RANK",
            AugZeta => "AUG-ZETA",
            TildeType => "TILDE-TYPE",
            TildeRank => "TILDE-RANK",
            TildeZeta => "TILDE-ZETA",
            Index => "INDEX",
            DAnnular => "D-ANNULAR",
        }
    }

    fn uses_jumps(&self) -> bool {
        matches!(self, ARank | BRank | DRank | BZeroIndex | ThmA | ThmB | ThmD | AugType | AugRank | TildeType | TildeRank | Index | DAnnular)
    }

    fn uses_type(&self) -> bool {
        matches!(
            self,
            AType | BType | DTypeLow | DTypeFull | AChainType | BChainType | ThmA | ThmB | ThmD | AugType | TildeType | Index | DAnnular
        )
    }

    fn uses_index(&self) -> bool {
        matches!(self, BZeroIndex | Index)
    }

    fn k_one(&self) -> bool {
        matches!(self, DRank | AType | BType | DTypeLow | DTypeFull | BZeroIndex)
    }

    fn l_one(&self) -> bool {
        matches!(self, AType | BType | DTypeLow | DTypeFull)
    }

    fn family(&self) -> Family {
        match self {
            ARank | AType | AChainType | ThmA => Family::A,
            BRank | BType | BChainType | BZeroIndex | ThmB | Index => Family::B,
            DRank | DTypeLow | DTypeFull | ThmD | DAnnular => Family::D,
            AugType | AugRank | AugZeta => Family::AugA,
            TildeType | TildeRank | TildeZeta => Family::TildeA,
        }
    }

    /// Σ s_i required of the jump vector.
    fn jump_total(&self, n: usize) -> usize {
        match self {
            ARank | ThmA => n - 1,
            _ => n,
        }
    }

    /// Admissible weights Σ i·b_i of the type vector.
    fn weight_ok(&self, w: usize, n: usize) -> bool {
        match self {
            AType | AChainType | ThmA | DTypeFull | DAnnular => w == n,
            DTypeLow => w + 2 <= n,
            ThmD => w <= n && w + 1 != n,
            _ => w <= n,
        }
    }
}

impl fmt::Display for FormulaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FormulaId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        FormulaId::ALL
            .iter()
            .copied()
            .find(|id| id.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Param(format!("unknown formula id {s:?}")))
    }
}

/// Inputs of a formula. `r` is only read by the aug-A formulas.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormulaParams {
    pub n: usize,
    pub k: usize,
    #[serde(default)]
    pub r: usize,
    pub l: usize,
    #[serde(default)]
    pub jumps: Option<Vec<usize>>,
    #[serde(default)]
    pub ktype: Option<TypeVector>,
    #[serde(default)]
    pub index: Option<usize>,
}

impl FormulaParams {
    pub fn new(n: usize, k: usize, l: usize) -> Self {
        FormulaParams { n, k, r: 0, l, jumps: None, ktype: None, index: None }
    }
}

fn hyp(msg: impl Into<String>) -> Error {
    Error::Hypothesis(msg.into())
}

fn exact_div(num: BigUint, den: u64) -> Result<BigUint> {
    if den == 0 {
        return Err(hyp("division by zero"));
    }
    let (q, r) = num.div_rem(&BigUint::from(den));
    if !r.is_zero() {
        return Err(hyp(format!("inexact division by {den}")));
    }
    Ok(q)
}

/// Π_{i ≥ 2} C(top, s_i).
fn tail_product(top: usize, s: &[usize]) -> BigUint {
    s.iter().skip(1).map(|&x| binomial(top as i64, x as i64)).product()
}

/// Checks the hypotheses of `id` and returns the normalized type vector.
fn check(id: FormulaId, p: &FormulaParams) -> Result<Option<TypeVector>> {
    let FormulaParams { n, k, r, l, .. } = *p;
    if n == 0 || k == 0 || l == 0 {
        return Err(hyp("n, k and ℓ must be positive"));
    }
    if id.k_one() && k != 1 {
        return Err(hyp(format!("{id} needs k = 1")));
    }
    if id.l_one() && l != 1 {
        return Err(hyp(format!("{id} needs ℓ = 1")));
    }
    if id.family() == Family::D && n < 2 {
        return Err(hyp("type D needs n ≥ 2"));
    }
    if id.family() == Family::AugA {
        if r == 0 || r >= k {
            return Err(hyp("aug-A needs 0 < r < k"));
        }
    } else if r != 0 {
        return Err(hyp(format!("{id} takes no r")));
    }
    match (&p.jumps, id.uses_jumps()) {
        (Some(j), true) => {
            if j.len() != l + 1 {
                return Err(hyp(format!("{id} needs ℓ+1 = {} jumps", l + 1)));
            }
            if j.iter().sum::<usize>() != id.jump_total(n) {
                return Err(hyp(format!("{id} needs jumps summing to {}", id.jump_total(n))));
            }
        }
        (None, true) => return Err(hyp(format!("{id} needs jumps"))),
        (Some(_), false) => return Err(hyp(format!("{id} takes no jumps"))),
        (None, false) => {}
    }
    match (p.index, id.uses_index()) {
        (Some(d), true) if d == 0 || d > l + 1 => return Err(hyp(format!("index must lie in 1..={}", l + 1))),
        (Some(_), true) => {}
        (None, true) => return Err(hyp(format!("{id} needs an index"))),
        (Some(_), false) => return Err(hyp(format!("{id} takes no index"))),
        (None, false) => {}
    }
    let tv = match (&p.ktype, id.uses_type()) {
        (Some(t), true) => {
            let t = t.resized(n).ok_or_else(|| hyp(format!("type vector longer than n = {n}")))?;
            if !id.weight_ok(t.weight(), n) {
                return Err(hyp(format!("{id} does not cover types of weight {}", t.weight())));
            }
            if let Some(j) = &p.jumps {
                if t.b > n || j[0] != n - t.b {
                    return Err(hyp(format!("s_1 = {} but n − b = {}", j[0], n as i64 - t.b as i64)));
                }
            }
            Some(t)
        }
        (None, true) => return Err(hyp(format!("{id} needs a type vector"))),
        (Some(_), false) => return Err(hyp(format!("{id} takes no type vector"))),
        (None, false) => None,
    };
    Ok(tv)
}

/// Evaluates formula `id` at `p`.
pub fn eval_formula(id: FormulaId, p: &FormulaParams) -> Result<BigUint> {
    let tv = check(id, p)?;
    let FormulaParams { n, k, r, l, .. } = *p;
    let empty = Vec::new();
    let s = p.jumps.as_ref().unwrap_or(&empty);
    let ni = n as i64;
    let c = |a: usize, b: usize| binomial(a as i64, b as i64);
    let mult = || multinomial(&tv.as_ref().unwrap().signed_counts());
    let b = tv.as_ref().map(|t| t.b).unwrap_or(0);
    let w = tv.as_ref().map(|t| t.weight()).unwrap_or(0);
    let kn = k * n;
    Ok(match id {
        ARank => exact_div(c(n, s[0]) * tail_product(kn, s), n as u64)?,
        BRank => c(n, s[0]) * tail_product(kn, s),
        DRank => {
            let prod = |skip: Option<usize>| -> BigUint {
                s.iter().enumerate().filter(|&(i, _)| Some(i) != skip).map(|(_, &x)| c(n - 1, x)).product()
            };
            let mut acc = prod(None) * 2u32;
            for (i, &x) in s.iter().enumerate() {
                acc += binomial(ni - 2, x as i64 - 2) * prod(Some(i));
            }
            acc
        }
        AType => exact_div(mult() * binomial(ni, b as i64 - 1), b as u64)?,
        BType => mult() * c(n, b),
        DTypeLow => mult() * c(n - 1, b),
        DTypeFull => {
            let t = tv.as_ref().unwrap();
            let mut red = t.signed_counts();
            red[0] -= 1;
            mult() * c(n - 1, b) * 2u32 + multinomial(&red) * binomial(ni - 1, b as i64 - 1)
        }
        AChainType => exact_div(mult() * binomial((l * kn) as i64, b as i64 - 1), b as u64)?,
        BChainType => mult() * c(l * kn, b),
        BZeroIndex => {
            let d = p.index.unwrap();
            let prod: BigUint = s.iter().map(|&x| c(n, x)).product();
            exact_div(prod * s[d - 1], n as u64)?
        }
        ThmA => exact_div(mult() * tail_product(kn, s), b as u64)?,
        ThmB => mult() * tail_product(kn, s),
        ThmD => {
            let top = k * (n - 1);
            if w + 2 <= n {
                mult() * tail_product(top, s)
            } else {
                let mut acc = mult() * tail_product(top, s) * 2u32;
                if b >= 2 {
                    let t = tv.as_ref().unwrap();
                    let mut red = t.signed_counts();
                    red[0] -= 1;
                    let rm = multinomial(&red);
                    let mut num = BigUint::zero();
                    for i in 1..=l {
                        if s[i] == 0 {
                            continue;
                        }
                        let mut s2 = s.clone();
                        s2[i] -= 1;
                        num += &rm * tail_product(top, &s2) * (s[i] - 1);
                    }
                    acc += exact_div(num, (b - 1) as u64)?;
                }
                acc
            }
        }
        AugType => mult() * tail_product(kn + r, s),
        AugRank => c(n, s[0]) * tail_product(kn + r, s),
        AugZeta => c(n + l * (kn + r), n),
        TildeType => mult() * tail_product(2 * kn + k, s),
        TildeRank => c(n, s[0]) * tail_product(2 * kn + k, s),
        TildeZeta => c(n + l * (2 * kn + k), n),
        Index => {
            let d = p.index.unwrap();
            if d == 1 {
                if w == n {
                    BigUint::zero()
                } else {
                    mult() * tail_product(kn, s)
                }
            } else if w < n {
                BigUint::zero()
            } else {
                exact_div(mult() * tail_product(kn, s) * s[d - 1], b as u64)?
            }
        }
        DAnnular => mult() * tail_product(k * (n - 1), s) * 2u32,
    })
}

/// The family and filters whose multichain count the formula predicts.
pub fn brute_query(id: FormulaId, p: &FormulaParams) -> Result<(FamilySpec, Filters)> {
    check(id, p)?;
    let spec = match id.family() {
        Family::TildeA => FamilySpec::new(Family::TildeA, 2 * p.n + 1, 2 * p.k, 0)?,
        f => FamilySpec::new(f, p.n, p.k, p.r)?,
    };
    let filters = Filters {
        jumps: p.jumps.clone(),
        ktype: p.ktype.clone(),
        index: p.index,
        annular: if id == DAnnular { Some(true) } else { None },
    };
    Ok((spec, filters))
}

/// The family a formula speaks about at (n, k, r).
pub fn family_for(id: FormulaId, n: usize, k: usize, r: usize) -> Result<FamilySpec> {
    match id.family() {
        Family::TildeA => FamilySpec::new(Family::TildeA, 2 * n + 1, 2 * k, 0),
        f => FamilySpec::new(f, n, k, r),
    }
}

/// Does `id` accept the family parameters (n, k, r, ℓ) at all?
pub fn accepts(id: FormulaId, n: usize, k: usize, r: usize, l: usize) -> bool {
    n >= 1
        && k >= 1
        && l >= 1
        && !(id.k_one() && k != 1)
        && !(id.l_one() && l != 1)
        && !(id.family() == Family::D && n < 2)
        && if id.family() == Family::AugA { r > 0 && r < k } else { r == 0 }
}

/// Every admissible parameter tuple of `id` at fixed (n, k, r, ℓ).
pub fn admissible(id: FormulaId, n: usize, k: usize, r: usize, l: usize) -> Vec<FormulaParams> {
    if !accepts(id, n, k, r, l) {
        return Vec::new();
    }
    let base = FormulaParams { n, k, r, l, jumps: None, ktype: None, index: None };
    let jumps: Vec<Option<Vec<usize>>> = if id.uses_jumps() {
        crate::arith::compositions(id.jump_total(n), l + 1).into_iter().map(Some).collect()
    } else {
        vec![None]
    };
    let types: Vec<Option<TypeVector>> = if id.uses_type() {
        crate::arith::type_vectors(n, n)
            .into_iter()
            .map(TypeVector::new)
            .filter(|t| id.weight_ok(t.weight(), n))
            .map(Some)
            .collect()
    } else {
        vec![None]
    };
    let indices: Vec<Option<usize>> = if id.uses_index() { (1..=l + 1).map(Some).collect() } else { vec![None] };
    let mut out = Vec::new();
    for j in &jumps {
        for t in &types {
            if let (Some(j), Some(t)) = (j, t) {
                if t.b > n || j[0] != n - t.b {
                    continue;
                }
            }
            for d in &indices {
                out.push(FormulaParams { jumps: j.clone(), ktype: t.clone(), index: *d, ..base.clone() });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tv(c: &[usize]) -> TypeVector {
        TypeVector::new(c.to_vec())
    }

    fn with(n: usize, k: usize, l: usize, j: Option<&[usize]>, t: Option<&[usize]>, d: Option<usize>) -> FormulaParams {
        FormulaParams { n, k, r: 0, l, jumps: j.map(|x| x.to_vec()), ktype: t.map(tv), index: d }
    }

    fn ev(id: FormulaId, p: &FormulaParams) -> u64 {
        eval_formula(id, p).unwrap().try_into().unwrap()
    }

    #[test]
    fn ids_round_trip() {
        for id in FormulaId::ALL {
            assert_eq!(id.as_str().parse::<FormulaId>().unwrap(), id);
        }
        assert!("X-RANK".parse::<FormulaId>().is_err());
    }

    #[test]
    fn rank_sums_to_zeta() {
        // summed over jumps, the rank formulas give Z(2)
        for n in 1..=5usize {
            let s: BigUint = admissible(ARank, n, 1, 0, 2).iter().map(|p| eval_formula(ARank, p).unwrap()).sum();
            assert_eq!(s, binomial(3 * n as i64, n as i64) / BigUint::from(2 * n as u64 + 1));
            let s: BigUint = admissible(BRank, n, 1, 0, 2).iter().map(|p| eval_formula(BRank, p).unwrap()).sum();
            assert_eq!(s, binomial(3 * n as i64, n as i64));
        }
    }

    #[test]
    fn d_rank_sums() {
        let want = [4u64, 14, 50, 182];
        for (i, &w) in want.iter().enumerate() {
            let n = i + 2;
            let s: u64 = admissible(DRank, n, 1, 0, 1).iter().map(|p| ev(DRank, p)).sum();
            assert_eq!(s, w);
        }
    }

    #[test]
    fn type_formulas() {
        // (b; b_1..) = (2; 1,1,0) for n = 3 in type A: 3 partitions {1},{2,3} etc.
        assert_eq!(ev(AType, &with(3, 1, 1, None, Some(&[1, 1, 0]), None)), 3);
        assert_eq!(ev(BType, &with(2, 1, 1, None, Some(&[1, 0]), None)), 2);
        assert_eq!(ev(BType, &with(2, 1, 1, None, Some(&[0, 0]), None)), 1);
        // types of NC_D(3) sum to 14
        let s: u64 = admissible(DTypeLow, 3, 1, 0, 1).iter().map(|p| ev(DTypeLow, p)).sum::<u64>()
            + admissible(DTypeFull, 3, 1, 0, 1).iter().map(|p| ev(DTypeFull, p)).sum::<u64>();
        // weight n−1 cannot occur in type D, so the two ranges cover everything
        assert_eq!(s, 14);
    }

    #[test]
    fn index_zero_conditions() {
        let p = with(2, 1, 1, Some(&[1, 1]), Some(&[0, 1]), Some(1));
        assert_eq!(ev(Index, &p), 0);
        let p = with(2, 1, 1, Some(&[1, 1]), Some(&[1, 0]), Some(2));
        assert_eq!(ev(Index, &p), 0);
    }

    #[test]
    fn hypotheses_are_strict() {
        assert!(matches!(eval_formula(DRank, &with(3, 2, 1, Some(&[1, 2]), None, None)), Err(Error::Hypothesis(_))));
        assert!(matches!(eval_formula(ARank, &with(3, 1, 1, Some(&[1, 1, 1]), None, None)), Err(Error::Hypothesis(_))));
        assert!(matches!(eval_formula(ThmA, &with(3, 1, 1, Some(&[1, 1]), Some(&[2, 0, 0]), None)), Err(Error::Hypothesis(_))));
        assert!(matches!(
            eval_formula(ThmD, &with(3, 1, 1, Some(&[1, 2]), Some(&[0, 1, 0]), None)),
            Err(Error::Hypothesis(_))
        ));
        let mut p = with(2, 2, 1, None, None, None);
        p.r = 2;
        assert!(eval_formula(AugZeta, &p).is_err());
        p.r = 1;
        assert_eq!(eval_formula(AugZeta, &p).unwrap(), binomial(2 + 5, 2));
    }
}
