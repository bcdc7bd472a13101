//! Cyclic parenthesizations and the maps τ, τ′ onto pointed noncrossing
//! partitions and pointed multichains.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::arith::{binomial, multinomial};
use crate::error::{Error, Result};
use crate::partition::{SetPartition, TypeVector};

/// `(L, R_1, …, R_ℓ)` on `[n]`, plus the optional `f` labels of unmatched
/// right parentheses used by the type-D variant.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ParenState {
    pub n: usize,
    #[serde(rename = "L")]
    pub l: BTreeSet<usize>,
    #[serde(rename = "Rs")]
    pub rs: Vec<BTreeSet<usize>>,
    pub f: Option<BTreeMap<usize, usize>>,
}

impl ParenState {
    pub fn new(n: usize, l: &[usize], rs: &[&[usize]]) -> Result<Self> {
        let p = ParenState {
            n,
            l: l.iter().copied().collect(),
            rs: rs.iter().map(|r| r.iter().copied().collect()).collect(),
            f: None,
        };
        p.check_range()?;
        Ok(p)
    }

    pub fn with_f(mut self, f: &[(usize, usize)]) -> Self {
        self.f = Some(f.iter().copied().collect());
        self
    }

    pub fn ell(&self) -> usize {
        self.rs.len()
    }

    pub fn num_rights(&self) -> usize {
        self.rs.iter().map(|r| r.len()).sum()
    }

    pub(crate) fn check_range(&self) -> Result<()> {
        for &x in self.l.iter().chain(self.rs.iter().flatten()) {
            if x == 0 || x > self.n {
                return Err(Error::OutOfRange(x as i64, self.n));
            }
        }
        Ok(())
    }

    pub fn matching(&self) -> Matching {
        Matching::compute(self.n, &self.l, &self.rs)
    }
}

/// A right parenthesis after `pos` with label `label` (both 1-based).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RightParen {
    pub pos: usize,
    pub label: usize,
    /// Position of the matching left parenthesis.
    pub left: Option<usize>,
    /// The pair straddles the end of the period.
    pub wraps: bool,
}

/// The matching of a periodic parenthesization.
#[derive(Clone, Debug)]
pub struct Matching {
    pub n: usize,
    /// Sorted by (position, label).
    pub rights: Vec<RightParen>,
    /// For each integer (index x−1) the innermost enclosing matched pair, as
    /// an index into `rights`.
    pub owner: Vec<Option<usize>>,
}

enum Tok {
    Left(usize),
    Int(usize),
    Right(usize, usize),
}

impl Matching {
    /// Scans two periods of the infinite sequence; everything recorded comes
    /// from the second one, where the stack already holds every left
    /// parenthesis still open from the first. A matched pair never spans a
    /// full period when |L| ≤ Σ|R_i|, so this is exact.
    pub fn compute(n: usize, l: &BTreeSet<usize>, rs: &[BTreeSet<usize>]) -> Matching {
        let mut toks = Vec::new();
        for p in 1..=n {
            if l.contains(&p) {
                toks.push(Tok::Left(p));
            }
            toks.push(Tok::Int(p));
            for (j, r) in rs.iter().enumerate() {
                if r.contains(&p) {
                    toks.push(Tok::Right(p, j + 1));
                }
            }
        }
        let mut stack: Vec<(usize, usize)> = Vec::new();
        let mut rights = Vec::new();
        let mut owner_left = vec![None; n];
        for period in 0..2 {
            for t in &toks {
                match *t {
                    Tok::Left(p) => stack.push((p, period)),
                    Tok::Int(p) => {
                        if period == 1 {
                            owner_left[p - 1] = stack.last().map(|&(q, _)| q);
                        }
                    }
                    Tok::Right(p, label) => {
                        let top = stack.pop();
                        if period == 1 {
                            rights.push(RightParen {
                                pos: p,
                                label,
                                left: top.map(|(q, _)| q),
                                wraps: matches!(top, Some((_, 0))),
                            });
                        }
                    }
                }
            }
        }
        let by_left: BTreeMap<usize, usize> =
            rights.iter().enumerate().filter_map(|(i, r)| r.left.map(|q| (q, i))).collect();
        let owner = owner_left.iter().map(|o| o.and_then(|q| by_left.get(&q).copied())).collect();
        Matching { n, rights, owner }
    }

    pub fn unmatched(&self) -> Vec<usize> {
        (0..self.rights.len()).filter(|&i| self.rights[i].left.is_none()).collect()
    }

    pub fn all_matched(&self) -> bool {
        self.rights.iter().all(|r| r.left.is_some())
    }

    /// Integers not enclosed by any matched pair.
    pub fn free(&self) -> Vec<usize> {
        (1..=self.n).filter(|&p| self.owner[p - 1].is_none()).collect()
    }

    /// Integers owned by the pair closed at `rights[idx]`.
    pub fn owned(&self, idx: usize) -> Vec<usize> {
        (1..=self.n).filter(|&p| self.owner[p - 1] == Some(idx)).collect()
    }

    /// Matched pairs as (left, right position, label).
    pub fn pairs(&self) -> Vec<(usize, usize, usize)> {
        self.rights.iter().filter_map(|r| r.left.map(|q| (q, r.pos, r.label))).collect()
    }
}

/// Census of right-parenthesis sizes; every right parenthesis must be matched.
pub fn paren_type(p: &ParenState) -> Result<TypeVector> {
    p.check_range()?;
    let m = p.matching();
    if !m.all_matched() {
        return Err(Error::Cardinality { l: p.l.len(), r: p.num_rights() });
    }
    let mut counts = vec![0; p.n];
    for i in 0..m.rights.len() {
        let s = m.owned(i).len();
        if s == 0 {
            return Err(Error::NotAdmissible("right parenthesis of size 0".into()));
        }
        counts[s - 1] += 1;
    }
    Ok(TypeVector::new(counts))
}

/// τ: peel matched pairs into blocks; the untouched integers form B.
pub fn tau(p: &ParenState) -> Result<(Vec<usize>, SetPartition)> {
    p.check_range()?;
    if p.l.len() != p.num_rights() {
        return Err(Error::Cardinality { l: p.l.len(), r: p.num_rights() });
    }
    let m = p.matching();
    if !m.all_matched() {
        return Err(Error::Cardinality { l: p.l.len(), r: p.num_rights() });
    }
    let free = m.free();
    if free.is_empty() {
        return Err(Error::NotAdmissible("every integer is enclosed".into()));
    }
    let mut blocks: Vec<Vec<usize>> = (0..m.rights.len()).map(|i| m.owned(i)).collect();
    if blocks.iter().any(|b| b.is_empty()) {
        return Err(Error::NotAdmissible("empty pair".into()));
    }
    blocks.push(free.clone());
    Ok((free, SetPartition::new(p.n, blocks)?))
}

/// Cyclic run of `block` inside `seq` (first, last) if its elements are
/// consecutive there.
pub(crate) fn cyclic_run<T: PartialEq + Copy>(seq: &[T], inside: impl Fn(T) -> bool) -> Option<(T, T)> {
    let len = seq.len();
    let starts: Vec<usize> = (0..len).filter(|&i| inside(seq[i]) && !inside(seq[(i + len - 1) % len])).collect();
    if starts.len() != 1 {
        return None;
    }
    let s = starts[0];
    let mut e = s;
    while inside(seq[(e + 1) % len]) {
        e = (e + 1) % len;
    }
    Some((seq[s], seq[e]))
}

/// τ⁻¹: repeatedly delete a cyclically consecutive block A ≠ B, recording
/// its first and last element.
pub fn tau_inv(b: &[usize], pi: &SetPartition) -> Result<ParenState> {
    let mut bs = b.to_vec();
    bs.sort_unstable();
    if !pi.blocks().contains(&bs) {
        return Err(Error::Param(format!("{b:?} is not a block of {pi}")));
    }
    if !pi.is_noncrossing() {
        return Err(Error::NotMember(format!("{pi} is crossing")));
    }
    let lab = pi.labels();
    let bl = lab[bs[0] - 1];
    let mut seq: Vec<usize> = (1..=pi.n()).collect();
    let mut l = BTreeSet::new();
    let mut r = BTreeSet::new();
    let mut left: Vec<usize> = (0..pi.num_blocks()).filter(|&i| i != bl).collect();
    while !left.is_empty() {
        let (pos, first, last) = left
            .iter()
            .enumerate()
            .find_map(|(pos, &blk)| cyclic_run(&seq, |x| lab[x - 1] == blk).map(|(f, e)| (pos, f, e)))
            .ok_or_else(|| Error::NotMember("no consecutive block".into()))?;
        let blk = left.remove(pos);
        l.insert(first);
        r.insert(last);
        seq.retain(|&x| lab[x - 1] != blk);
    }
    Ok(ParenState { n: pi.n(), l, rs: vec![r], f: None })
}

/// Removes every right parenthesis labelled `label` and its partner.
fn strip_label(p: &ParenState, label: usize) -> ParenState {
    let m = p.matching();
    let mut q = p.clone();
    for rp in &m.rights {
        if rp.label == label {
            q.rs[label - 1].remove(&rp.pos);
            if let Some(lp) = rp.left {
                q.l.remove(&lp);
            }
        }
    }
    q
}

/// τ′: peel level by level, stripping the label-i parentheses in between.
pub fn tau_prime(p: &ParenState) -> Result<(Vec<usize>, Vec<SetPartition>)> {
    if p.ell() == 0 {
        return Err(Error::Param("ℓ must be positive".into()));
    }
    let mut cur = p.clone();
    let mut b1 = None;
    let mut chain = Vec::new();
    for i in 1..=p.ell() {
        let (b, pi) = tau(&cur)?;
        if i == 1 {
            b1 = Some(b);
        }
        chain.push(pi);
        cur = strip_label(&cur, i);
    }
    Ok((b1.unwrap(), chain))
}

/// τ′⁻¹: build the top level with τ⁻¹, then add each lower level's new
/// pairs with its label.
pub fn tau_prime_inv(b: &[usize], chain: &[SetPartition]) -> Result<ParenState> {
    let ell = chain.len();
    if ell == 0 {
        return Err(Error::Param("empty chain".into()));
    }
    let n = chain[0].n();
    for w in chain.windows(2) {
        if !w[0].refines(&w[1])? {
            return Err(Error::NotMember("not a multichain".into()));
        }
    }
    let tracking = |pi: &SetPartition| -> Vec<usize> { pi.block_of(b[0]).map(|x| x.to_vec()).unwrap_or_default() };
    if !chain[0].blocks().iter().any(|x| {
        let mut bs = b.to_vec();
        bs.sort_unstable();
        *x == bs
    }) {
        return Err(Error::Param(format!("{b:?} is not a block of the bottom element")));
    }
    let top = tau_inv(&tracking(&chain[ell - 1]), &chain[ell - 1])?;
    let mut l = top.l.clone();
    let mut rs = vec![BTreeSet::new(); ell];
    rs[ell - 1] = top.rs[0].clone();
    for i in (0..ell - 1).rev() {
        let q = tau_inv(&tracking(&chain[i]), &chain[i])?;
        for (lp, rp, _) in q.matching().pairs() {
            if !l.contains(&lp) {
                l.insert(lp);
                rs[i].insert(rp);
            }
        }
    }
    Ok(ParenState { n, l, rs, f: None })
}

/// |{P ∈ P(n, ℓ) : type(P) = tv, (|R_i|) = c}| = multinomial · Π C(n, c_i).
pub fn count_paren_by_type(n: usize, tv: &TypeVector, c: &[usize]) -> Result<BigUint> {
    let total: usize = c.iter().sum();
    if total != tv.b {
        return Err(Error::Param(format!("Σ c_i = {total} but b = {}", tv.b)));
    }
    let mut acc = multinomial(&tv.signed_counts());
    for &ci in c {
        acc *= binomial(n as i64, ci as i64);
    }
    Ok(acc)
}

/// All subsets of `[n]` of size `s`.
pub fn subsets_of_size(n: usize, s: usize) -> Vec<BTreeSet<usize>> {
    fn rec(start: usize, n: usize, s: usize, cur: &mut Vec<usize>, out: &mut Vec<BTreeSet<usize>>) {
        if cur.len() == s {
            out.push(cur.iter().copied().collect());
            return;
        }
        for x in start..=n {
            if n - x + 1 < s - cur.len() {
                break;
            }
            cur.push(x);
            rec(x + 1, n, s, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(1, n, s, &mut Vec::new(), &mut out);
    out
}

/// Every `(L, R_1, …, R_ℓ)` with the given `|R_i|` and `|L| = lsize`.
pub fn states_with_sizes(n: usize, lsize: usize, c: &[usize]) -> Vec<ParenState> {
    let mut out = vec![ParenState { n, l: BTreeSet::new(), rs: Vec::new(), f: None }];
    for &ci in c {
        let subs = subsets_of_size(n, ci);
        out = out
            .into_iter()
            .flat_map(|p| {
                subs.iter().map(move |s| {
                    let mut q = p.clone();
                    q.rs.push(s.clone());
                    q
                })
            })
            .collect();
    }
    let ls = subsets_of_size(n, lsize);
    out.into_iter()
        .flat_map(|p| {
            ls.iter().map(move |l| {
                let mut q = p.clone();
                q.l = l.clone();
                q
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example16() -> ParenState {
        ParenState::new(16, &[2, 3, 9, 11, 15, 16], &[&[1, 4, 5, 8, 9, 12]]).unwrap()
    }

    fn example_t() -> ParenState {
        ParenState::new(7, &[2, 4, 5], &[&[2], &[2, 6]]).unwrap()
    }

    #[test]
    fn types_of_examples() {
        let mut c = vec![0; 16];
        c[0] = 1;
        c[1] = 4;
        c[3] = 1;
        assert_eq!(paren_type(&example16()).unwrap(), TypeVector::new(c));
        let mut c = vec![0; 7];
        c[0] = 1;
        c[1] = 1;
        c[2] = 1;
        assert_eq!(paren_type(&example_t()).unwrap(), TypeVector::new(c));
        let e = ParenState::new(5, &[], &[&[]]).unwrap();
        assert_eq!(paren_type(&e).unwrap(), TypeVector::zero(5));
    }

    #[test]
    fn tau_example() {
        let (b, pi) = tau(&example16()).unwrap();
        assert_eq!(b, vec![10, 13, 14]);
        let expect = SetPartition::new(
            16,
            vec![vec![1, 16], vec![2, 5], vec![3, 4], vec![6, 7, 8, 15], vec![9], vec![11, 12], vec![10, 13, 14]],
        )
        .unwrap();
        assert_eq!(pi, expect);
        assert_eq!(tau_inv(&b, &pi).unwrap(), example16());
    }

    #[test]
    fn tau_empty() {
        let p = ParenState::new(3, &[], &[&[]]).unwrap();
        let (b, pi) = tau(&p).unwrap();
        assert_eq!(b, vec![1, 2, 3]);
        assert_eq!(pi, SetPartition::one_block(3));
        assert_eq!(tau_inv(&b, &pi).unwrap(), p);
    }

    #[test]
    fn tau_prime_example() {
        let (b, chain) = tau_prime(&example_t()).unwrap();
        assert_eq!(b, vec![3]);
        let p1 = SetPartition::new(7, vec![vec![1, 4, 7], vec![2], vec![3], vec![5, 6]]).unwrap();
        let p2 = SetPartition::new(7, vec![vec![1, 2, 4, 7], vec![3], vec![5, 6]]).unwrap();
        assert_eq!(chain, vec![p1, p2]);
        assert_eq!(tau_prime_inv(&b, &chain).unwrap(), example_t());
    }

    #[test]
    fn count_examples() {
        let mut c = vec![0; 7];
        c[0] = 1;
        c[1] = 1;
        c[2] = 1;
        let tv = TypeVector::new(c);
        assert_eq!(count_paren_by_type(7, &tv, &[1, 2]).unwrap(), BigUint::from(882u32));
        assert_eq!(count_paren_by_type(4, &TypeVector::zero(4), &[0]).unwrap(), BigUint::from(1u32));
        let tv = TypeVector::new(vec![0, 1, 0, 0]);
        assert_eq!(count_paren_by_type(4, &tv, &[1]).unwrap(), BigUint::from(4u32));
    }

    #[test]
    fn count_882_by_brute_force() {
        let mut c = vec![0; 7];
        c[0] = 1;
        c[1] = 1;
        c[2] = 1;
        let tv = TypeVector::new(c);
        let hits = states_with_sizes(7, 3, &[1, 2])
            .iter()
            .filter(|p| paren_type(p).map(|t| t == tv).unwrap_or(false))
            .count();
        assert_eq!(hits, 882);
    }

    #[test]
    fn matching_rotation_invariant() {
        // rotating the state rotates the matching
        for p in states_with_sizes(6, 2, &[1, 2]) {
            let m = p.matching();
            for s in 1..6 {
                let rot = |x: usize| (x - 1 + s) % 6 + 1;
                let q = ParenState {
                    n: 6,
                    l: p.l.iter().map(|&x| rot(x)).collect(),
                    rs: p.rs.iter().map(|r| r.iter().map(|&x| rot(x)).collect()).collect(),
                    f: None,
                };
                let mq = q.matching();
                let mut a: Vec<_> = m.rights.iter().map(|r| (rot(r.pos), r.label, r.left.map(rot))).collect();
                let mut b: Vec<_> = mq.rights.iter().map(|r| (r.pos, r.label, r.left)).collect();
                a.sort();
                b.sort();
                assert_eq!(a, b);
            }
        }
    }
}
