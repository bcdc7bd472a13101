//! The annulus model of NC^{(k)}_D(n) and the maps τ_D, τ_D′.
//!
//! With M = k(n−1), the outer circle carries 1, …, M, −1, …, −M and the
//! inner circle M+1, …, kn, −(M+1), …, −kn, both read in increasing index
//! order. A block "wraps around" the annulus when it touches both circles.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::paren::{cyclic_run, Matching, ParenState};
use crate::partition::{cyclic_index, labels_noncrossing, SignedPartition, TypeVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Annulus {
    pub n: usize,
    pub k: usize,
    pub m: usize,
}

impl Annulus {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if n < 2 || k == 0 {
            return Err(Error::Param(format!("annulus needs n ≥ 2 and k ≥ 1, got n={n} k={k}")));
        }
        Ok(Annulus { n, k, m: k * (n - 1) })
    }

    pub fn is_inner(&self, x: i32) -> bool {
        x.unsigned_abs() as usize > self.m
    }

    fn outer_idx(&self, x: i32) -> usize {
        cyclic_index(self.m, x)
    }

    fn inner_idx(&self, x: i32) -> usize {
        let a = x.unsigned_abs() as usize - self.m;
        if x > 0 {
            a - 1
        } else {
            self.k + a - 1
        }
    }

    fn inner_elem(&self, idx: usize) -> i32 {
        let idx = idx % (2 * self.k);
        if idx < self.k {
            (self.m + idx + 1) as i32
        } else {
            -((self.m + idx - self.k + 1) as i32)
        }
    }

    /// Index into the combined point set: outer circle first, then inner.
    fn point(&self, x: i32) -> usize {
        if self.is_inner(x) {
            2 * self.m + self.inner_idx(x)
        } else {
            self.outer_idx(x)
        }
    }

    /// Splits a block into its outer and inner parts, each in circle order.
    fn split(&self, b: &[i32]) -> (Vec<i32>, Vec<i32>) {
        let mut o: Vec<i32> = b.iter().copied().filter(|&x| !self.is_inner(x)).collect();
        let mut i: Vec<i32> = b.iter().copied().filter(|&x| self.is_inner(x)).collect();
        o.sort_by_key(|&x| self.outer_idx(x));
        i.sort_by_key(|&x| self.inner_idx(x));
        (o, i)
    }

    /// Consecutive elements (cyclically) have |next| ≡ |cur| + 1 (mod k).
    fn steps_ok(&self, cyc: &[i32]) -> bool {
        let k = self.k;
        (0..cyc.len()).all(|t| {
            let a = cyc[t].unsigned_abs() as usize;
            let b = cyc[(t + 1) % cyc.len()].unsigned_abs() as usize;
            b % k == (a + 1) % k
        })
    }

    /// The inner positive element congruent to `r` mod k, as an inner index.
    fn inner_residue_idx(&self, r: usize) -> usize {
        (0..self.k).find(|&j| (self.m + 1 + j) % self.k == r % self.k).unwrap()
    }

    /// The k consecutive inner points ending at the positive one ≡ r (mod k).
    fn forced_block(&self, r: usize) -> Vec<i32> {
        let j = self.inner_residue_idx(r);
        let q = 2 * self.k;
        let mut b: Vec<i32> = (0..self.k).map(|t| self.inner_elem((j + q - t) % q)).collect();
        b.sort_by_key(|&x| self.inner_idx(x));
        b
    }
}

/// Is π a member of NC^{(k)}_D(n) in the annulus model?
pub fn is_member(pi: &SignedPartition, n: usize, k: usize) -> bool {
    let Ok(a) = Annulus::new(n, k) else { return false };
    if pi.n() != k * n || !pi.is_k_divisible(k) {
        return false;
    }
    if let Some(z) = pi.zero_block() {
        let inner = z.iter().filter(|&&x| a.is_inner(x)).count();
        if inner != 2 * k || z.len() - inner < 2 {
            return false;
        }
    }
    let parts: Vec<(Vec<i32>, Vec<i32>)> = pi.blocks().iter().map(|b| a.split(b)).collect();
    if parts.iter().all(|(o, i)| o.is_empty() || i.is_empty()) {
        return disconnected_member(&a, pi, &parts);
    }
    let mut perm = vec![usize::MAX; 2 * a.m + 2 * k];
    let mut choices: Vec<Vec<Vec<i32>>> = Vec::new();
    let place = |perm: &mut Vec<usize>, cyc: &[i32]| {
        for t in 0..cyc.len() {
            perm[a.point(cyc[t])] = a.point(cyc[(t + 1) % cyc.len()]);
        }
    };
    for (o, i) in &parts {
        if o.is_empty() || i.is_empty() {
            let cyc = if o.is_empty() { i } else { o };
            if !a.steps_ok(cyc) {
                return false;
            }
            place(&mut perm, cyc);
        } else {
            let mut cands = Vec::new();
            for s in 0..o.len() {
                for t in 0..i.len() {
                    let mut c: Vec<i32> = o[s..].iter().chain(&o[..s]).copied().collect();
                    c.extend(i[t..].iter().chain(&i[..t]));
                    if a.steps_ok(&c) {
                        cands.push(c);
                    }
                }
            }
            if cands.is_empty() {
                return false;
            }
            choices.push(cands);
        }
    }
    let p = 2 * a.m;
    let q = 2 * k;
    let gamma = |x: usize| if x < p { (x + 1) % p } else { p + (x - p + 1) % q };
    let target = p + q - pi.blocks().len();
    let mut pick = vec![0usize; choices.len()];
    loop {
        for (c, &s) in choices.iter().zip(&pick) {
            place(&mut perm, &c[s]);
        }
        let mut inv = vec![0; p + q];
        for (x, &y) in perm.iter().enumerate() {
            inv[y] = x;
        }
        if count_cycles(|x| inv[gamma(x)], p + q) == target {
            return true;
        }
        // odometer
        let mut d = 0;
        loop {
            if d == pick.len() {
                return false;
            }
            pick[d] += 1;
            if pick[d] < choices[d].len() {
                break;
            }
            pick[d] = 0;
            d += 1;
        }
    }
}

fn count_cycles(f: impl Fn(usize) -> usize, len: usize) -> usize {
    let mut seen = vec![false; len];
    let mut c = 0;
    for s in 0..len {
        if !seen[s] {
            c += 1;
            let mut x = s;
            while !seen[x] {
                seen[x] = true;
                x = f(x);
            }
        }
    }
    c
}

/// Is `x` strictly inside the arc from `s` forward to `e` on a p-cycle
/// (the whole circle minus `s` when `s == e`)?
fn in_arc(x: usize, s: usize, e: usize, p: usize) -> bool {
    let len = if s == e { p } else { (e + p - s) % p };
    let d = (x + p - s) % p;
    0 < d && d < len
}

/// The arc (c_t, c_{t+1}) of the sorted cyclic positions `c` containing `y`.
fn gap_containing(c: &[usize], y: usize, p: usize) -> (usize, usize) {
    for t in 0..c.len() {
        let (s, e) = (c[t], c[(t + 1) % c.len()]);
        if in_arc(y, s, e, p) {
            return (s, e);
        }
    }
    unreachable!("position {y} lies on the block")
}

/// The inner block forced by the outer blocks of a disconnected element:
/// every visible outer block A points, via the element a ∈ A just before its
/// gap containing −A, at the k inner points ending at the positive one ≡ |a|.
fn forced_inner(a: &Annulus, outer: &[Vec<i32>]) -> Option<Vec<i32>> {
    let p = 2 * a.m;
    let idx: Vec<Vec<usize>> = outer.iter().map(|b| b.iter().map(|&x| a.outer_idx(x)).collect()).collect();
    let mut forced: Option<usize> = None;
    for (ai, ab) in outer.iter().enumerate() {
        let visible = outer.iter().enumerate().all(|(ci, cb)| {
            if ci == ai {
                return true;
            }
            let (s, e) = gap_containing(&idx[ci], a.outer_idx(-cb[0]), p);
            idx[ai].iter().all(|&x| in_arc(x, s, e, p))
        });
        if !visible {
            continue;
        }
        let (s, _) = gap_containing(&idx[ai], a.outer_idx(-ab[0]), p);
        let r = ab[idx[ai].iter().position(|&x| x == s).unwrap()].unsigned_abs() as usize % a.k;
        match forced {
            None => forced = Some(r),
            Some(f) if f != r => return None,
            _ => {}
        }
    }
    forced.map(|r| a.forced_block(r))
}

fn disconnected_member(a: &Annulus, pi: &SignedPartition, parts: &[(Vec<i32>, Vec<i32>)]) -> bool {
    if pi.zero_block().is_some() {
        return false;
    }
    let mut outer_lab = vec![0; 2 * a.m];
    let mut inner_lab = vec![0; 2 * a.k];
    let mut outer = Vec::new();
    let mut inner = Vec::new();
    for (bi, (o, i)) in parts.iter().enumerate() {
        let cyc = if o.is_empty() { i } else { o };
        if !a.steps_ok(cyc) {
            return false;
        }
        for &x in o {
            outer_lab[a.outer_idx(x)] = bi;
        }
        for &x in i {
            inner_lab[a.inner_idx(x)] = bi;
        }
        if o.is_empty() {
            inner.push(i.clone());
        } else {
            outer.push(o.clone());
        }
    }
    if !labels_noncrossing(&outer_lab) || !labels_noncrossing(&inner_lab) {
        return false;
    }
    let Some(b) = forced_inner(a, &outer) else { return false };
    let mut nb: Vec<i32> = b.iter().map(|&x| -x).collect();
    nb.sort_by_key(|&x| a.inner_idx(x));
    inner.len() == 2 && inner.contains(&b) && inner.contains(&nb)
}

/// The blocks of π touching both circles.
pub fn annular_blocks(pi: &SignedPartition, n: usize, k: usize) -> Vec<Vec<i32>> {
    let Ok(a) = Annulus::new(n, k) else { return Vec::new() };
    pi.blocks()
        .iter()
        .filter(|b| !SignedPartition::is_zero_block(b))
        .filter(|b| b.iter().any(|&x| a.is_inner(x)) && b.iter().any(|&x| !a.is_inner(x)))
        .cloned()
        .collect()
}

pub fn is_annular(pi: &SignedPartition, n: usize, k: usize) -> bool {
    !annular_blocks(pi, n, k).is_empty()
}

/// A block removed by the peel, with its outer run endpoints (signed) and
/// the number of inner points it carries.
#[derive(Clone, Debug, PartialEq, Eq)]
struct PeelItem {
    first: i32,
    last: i32,
    inner: usize,
}

/// Repeatedly removes a nonzero block (with its negative) whose outer points
/// are consecutive among those remaining. The run endpoints do not depend
/// on the removal order: they flank the gap containing the negative block.
fn peel(a: &Annulus, pi: &SignedPartition) -> Result<Vec<PeelItem>> {
    let mut seq: Vec<i32> = (0..2 * a.m).map(|c| crate::partition::cyclic_element(a.m, c)).collect();
    let mut left: Vec<Vec<i32>> = pi
        .blocks()
        .iter()
        .filter(|b| !SignedPartition::is_zero_block(b) && b.iter().any(|&x| !a.is_inner(x)))
        .cloned()
        .collect();
    let mut out = Vec::new();
    while !left.is_empty() {
        let (pos, (first, last)) = left
            .iter()
            .enumerate()
            .find_map(|(pos, b)| cyclic_run(&seq, |x| b.contains(&x)).map(|r| (pos, r)))
            .ok_or_else(|| Error::NotMember(format!("{pi} cannot be peeled")))?;
        let b = left.remove(pos);
        let inner = b.iter().filter(|&&x| a.is_inner(x)).count();
        let neg: Vec<i32> = b.iter().map(|&x| -x).collect();
        left.retain(|c| !c.iter().any(|x| neg.contains(x)));
        seq.retain(|x| !b.contains(x) && !neg.contains(x));
        out.push(PeelItem { first, last, inner });
    }
    Ok(out)
}

/// Reads a parenthesization off π ∈ NC^{(k)}_D(n): each outer run gives a
/// pair `(|first|, |last|)`, or an unmatched right parenthesis at `|last|`
/// labelled by its number of inner points when the block wraps around.
pub fn find_dparen(pi: &SignedPartition, n: usize, k: usize) -> Result<ParenState> {
    let a = Annulus::new(n, k)?;
    if !is_member(pi, n, k) {
        return Err(Error::NotMember(format!("{pi} is not in NC^({k})_D({n})")));
    }
    let mut l = BTreeSet::new();
    let mut r = BTreeSet::new();
    let mut f = BTreeMap::new();
    for it in peel(&a, pi)? {
        let last = it.last.unsigned_abs() as usize;
        r.insert(last);
        if it.inner > 0 {
            f.insert(last, it.inner);
        } else {
            l.insert(it.first.unsigned_abs() as usize);
        }
    }
    Ok(ParenState { n: a.m, l, rs: vec![r], f: Some(f) })
}

/// A checked view of a type-D parenthesization.
struct DView {
    m: Matching,
    free: Vec<usize>,
    /// Unmatched right parentheses: (position, f).
    unmatched: Vec<(usize, usize)>,
}

fn dview(p: &ParenState, a: &Annulus) -> Result<DView> {
    if p.n != a.m {
        return Err(Error::GroundMismatch(p.n, a.m));
    }
    p.check_range()?;
    let nl = p.l.len();
    let nr = p.num_rights();
    if nl > nr {
        return Err(Error::Cardinality { l: nl, r: nr });
    }
    let m = p.matching();
    let free = m.free();
    let mut unmatched: Vec<usize> = m.unmatched().iter().map(|&i| m.rights[i].pos).collect();
    let f = p.f.clone().unwrap_or_default();
    let before = unmatched.len();
    unmatched.dedup();
    if unmatched.len() != before {
        return Err(Error::NotAdmissible("two unmatched right parentheses share a position".into()));
    }
    if f.keys().copied().collect::<Vec<_>>() != unmatched {
        return Err(Error::NotAdmissible("f must be defined exactly on the unmatched positions".into()));
    }
    if f.values().any(|&v| v == 0) {
        return Err(Error::NotAdmissible("f takes positive values".into()));
    }
    if unmatched.is_empty() {
        if free.is_empty() {
            return Err(Error::NotAdmissible("no unmatched parenthesis and no free integer".into()));
        }
    } else if f.values().sum::<usize>() != a.k {
        return Err(Error::NotAdmissible(format!("Σ f must be {}", a.k)));
    }
    for i in 0..m.rights.len() {
        if m.rights[i].left.is_some() && !m.owned(i).len().is_multiple_of(a.k) {
            return Err(Error::NotAdmissible("matched size not divisible by k".into()));
        }
    }
    let um: Vec<(usize, usize)> = unmatched.iter().map(|&x| (x, f[&x])).collect();
    let v = DView { m, free, unmatched: um };
    for (ai, &(_, fx)) in region_free(&v).iter().zip(&v.unmatched) {
        if (ai.len() + fx) % a.k != 0 {
            return Err(Error::NotAdmissible("unmatched size not divisible by k".into()));
        }
    }
    Ok(v)
}

/// For each unmatched x_i, the free integers between x_{i−1} and x_i (signed,
/// in sequence order; the first region runs through −M to 1).
fn region_free(v: &DView) -> Vec<Vec<i32>> {
    let xs: Vec<usize> = v.unmatched.iter().map(|&(x, _)| x).collect();
    let j = xs.len();
    (0..j)
        .map(|i| {
            if i == 0 {
                let mut r: Vec<i32> = v.free.iter().filter(|&&y| y > xs[j - 1]).map(|&y| -(y as i32)).collect();
                r.extend(v.free.iter().filter(|&&y| y <= xs[0]).map(|&y| y as i32));
                r
            } else {
                v.free.iter().filter(|&&y| y > xs[i - 1] && y <= xs[i]).map(|&y| y as i32).collect()
            }
        })
        .collect()
}

/// Is `p` in P^{(k)}_D(n, ℓ)?
pub fn in_domain(p: &ParenState, n: usize, k: usize) -> bool {
    Annulus::new(n, k).and_then(|a| dview(p, &a)).is_ok()
}

/// Census of pair sizes (matched pairs and unmatched groups) divided by k.
pub fn dparen_type(p: &ParenState, n: usize, k: usize) -> Result<TypeVector> {
    let a = Annulus::new(n, k)?;
    let v = dview(p, &a)?;
    let mut counts = vec![0; n];
    for i in 0..v.m.rights.len() {
        if v.m.rights[i].left.is_some() {
            counts[v.m.owned(i).len() / k - 1] += 1;
        }
    }
    if !v.unmatched.is_empty() && !v.free.is_empty() {
        for (ai, &(_, fx)) in region_free(&v).iter().zip(&v.unmatched) {
            counts[(ai.len() + fx) / k - 1] += 1;
        }
    } else if !v.unmatched.is_empty() {
        counts[0] += 1;
    }
    Ok(TypeVector::new(counts))
}

/// τ_D: one partition, or the pair {π⁺, π⁻} when blocks wrap around.
pub fn tau_d(p: &ParenState, n: usize, k: usize) -> Result<Vec<SignedPartition>> {
    let a = Annulus::new(n, k)?;
    let v = dview(p, &a)?;
    let big = k * n;
    let mut reps: Vec<Vec<i32>> = Vec::new();
    for (i, rp) in v.m.rights.iter().enumerate() {
        let Some(q) = rp.left else { continue };
        let rep = v
            .m
            .owned(i)
            .into_iter()
            .map(|x| if rp.wraps && x < q { -(x as i32) } else { x as i32 })
            .collect();
        reps.push(rep);
    }
    let inner_all: Vec<i32> = (a.m + 1..=big).map(|x| x as i32).collect();
    if v.unmatched.is_empty() {
        let mut z: Vec<i32> = v.free.iter().map(|&x| x as i32).collect();
        z.extend(&inner_all);
        return Ok(vec![SignedPartition::from_pairs(big, &reps, Some(&z))?]);
    }
    if v.free.is_empty() {
        if v.unmatched.len() != 1 {
            return Err(Error::NotAdmissible("several unmatched parentheses but no free integer".into()));
        }
        reps.push(a.forced_block(v.unmatched[0].0));
        return Ok(vec![SignedPartition::from_pairs(big, &reps, None)?]);
    }
    let regions = region_free(&v);
    if regions.iter().any(|r| r.is_empty()) {
        return Err(Error::NotAdmissible("an unmatched parenthesis encloses no free integer".into()));
    }
    let j = v.unmatched.len();
    let aj = regions[j - 1].last().unwrap().unsigned_abs() as usize;
    let c = a.inner_residue_idx(aj + 1);
    let q = 2 * k;
    let mut out = Vec::new();
    for start in [c, c + k] {
        let mut reps = reps.clone();
        let mut cur = start;
        for i in (0..j).rev() {
            let mut blk = regions[i].clone();
            for _ in 0..v.unmatched[i].1 {
                blk.push(a.inner_elem(cur % q));
                cur += 1;
            }
            reps.push(blk);
        }
        out.push(SignedPartition::from_pairs(big, &reps, None)?);
    }
    Ok(out)
}

/// Drops label `label`: matched pairs vanish, an unmatched right parenthesis
/// hands its f-value to the next unmatched one (cyclically) that survives.
fn strip_label_d(p: &ParenState, label: usize) -> ParenState {
    let m = p.matching();
    let mut q = p.clone();
    let mut f = p.f.clone().unwrap_or_default();
    let survivors: Vec<usize> =
        m.rights.iter().filter(|r| r.left.is_none() && r.label != label).map(|r| r.pos).collect();
    for rp in &m.rights {
        if rp.label != label {
            continue;
        }
        q.rs[label - 1].remove(&rp.pos);
        match rp.left {
            Some(lp) => {
                q.l.remove(&lp);
            }
            None => {
                let v = f.remove(&rp.pos).unwrap_or(0);
                let next = survivors.iter().min_by_key(|&&y| (y + p.n - rp.pos) % p.n);
                if let Some(&y) = next {
                    *f.entry(y).or_default() += v;
                }
            }
        }
    }
    q.f = Some(f);
    q
}

/// The parenthesizations P_1, …, P_ℓ read at each level.
pub fn d_levels(p: &ParenState) -> Vec<ParenState> {
    let mut cur = p.clone();
    if cur.f.is_none() {
        cur.f = Some(BTreeMap::new());
    }
    let mut out = Vec::new();
    for i in 1..=p.ell() {
        out.push(cur.clone());
        cur = strip_label_d(&cur, i);
    }
    out
}

/// τ_D′: a multichain π_1 ≤ … ≤ π_ℓ in NC^{(k)}_D(n). `eps` (±1) picks the
/// side at the first level whose blocks wrap around.
pub fn tau_d_prime(p: &ParenState, eps: i8, n: usize, k: usize) -> Result<Vec<SignedPartition>> {
    if p.ell() == 0 {
        return Err(Error::Param("ℓ must be positive".into()));
    }
    if p.l.len() >= p.num_rights() {
        return Err(Error::Cardinality { l: p.l.len(), r: p.num_rights() });
    }
    let mut chain: Vec<SignedPartition> = Vec::new();
    let mut chosen = false;
    for lev in d_levels(p) {
        let opts = tau_d(&lev, n, k)?;
        let pick = if opts.len() == 1 {
            opts[0].clone()
        } else if !chosen {
            chosen = true;
            opts[if eps >= 0 { 0 } else { 1 }].clone()
        } else {
            let prev = chain.last().unwrap();
            let ok: Vec<&SignedPartition> = opts.iter().filter(|o| prev.refines(o).unwrap_or(false)).collect();
            if ok.len() != 1 {
                return Err(Error::NotAdmissible(format!("{} comparable choices at a level", ok.len())));
            }
            ok[0].clone()
        };
        if let Some(prev) = chain.last() {
            if !prev.refines(&pick)? {
                return Err(Error::NotAdmissible("levels are not increasing".into()));
            }
        }
        chain.push(pick);
    }
    Ok(chain)
}

/// Inverse of [`tau_d_prime`]; returns the parenthesization and the sign.
pub fn tau_d_prime_inv(chain: &[SignedPartition], n: usize, k: usize) -> Result<(ParenState, i8)> {
    let a = Annulus::new(n, k)?;
    let ell = chain.len();
    if ell == 0 {
        return Err(Error::Param("empty chain".into()));
    }
    for w in chain.windows(2) {
        if !w[0].refines(&w[1])? {
            return Err(Error::NotMember("not a multichain".into()));
        }
    }
    let top = find_dparen(&chain[ell - 1], n, k)?;
    let mut l = top.l.clone();
    let mut rs = vec![BTreeSet::new(); ell];
    rs[ell - 1] = top.rs[0].clone();
    let mut u: BTreeMap<usize, usize> = top.f.clone().unwrap_or_default();
    for i in (0..ell - 1).rev() {
        let pi = &chain[i];
        if !is_member(pi, n, k) {
            return Err(Error::NotMember(format!("{pi} is not in NC^({k})_D({n})")));
        }
        let items = peel(&a, pi)?;
        for it in items.iter().filter(|it| it.inner == 0) {
            let fst = it.first.unsigned_abs() as usize;
            if !l.contains(&fst) {
                l.insert(fst);
                rs[i].insert(it.last.unsigned_abs() as usize);
            }
        }
        let ann: Vec<(usize, usize)> =
            items.iter().filter(|it| it.inner > 0).map(|it| (it.last.unsigned_abs() as usize, it.inner)).collect();
        if ann.is_empty() {
            // zero block (nothing unmatched) or disconnected (one unmatched, f = k)
            continue;
        }
        let mut next = BTreeMap::new();
        let mut used = BTreeSet::new();
        for &x in u.keys() {
            let &(ax, fx) = ann.iter().min_by_key(|&&(y, _)| (x + a.m - y) % a.m).unwrap();
            if !used.insert(ax) {
                return Err(Error::NotMember("two unmatched parentheses share a wrapping block".into()));
            }
            next.insert(x, fx);
        }
        for &(ax, fx) in &ann {
            if !used.contains(&ax) {
                if next.contains_key(&ax) {
                    return Err(Error::NotMember("unmatched positions collide".into()));
                }
                rs[i].insert(ax);
                next.insert(ax, fx);
            }
        }
        u = next;
    }
    let p = ParenState { n: a.m, l, rs, f: Some(u) };
    let mut eps = 1;
    for (lev, pi) in d_levels(&p).iter().zip(chain) {
        let opts = tau_d(lev, n, k)?;
        if opts.len() == 2 {
            eps = if opts[0] == *pi {
                1
            } else if opts[1] == *pi {
                -1
            } else {
                return Err(Error::NotMember("chain is not in the image".into()));
            };
            break;
        }
    }
    Ok((p, eps))
}

/// All of P̄^{(k)}_D(n, ℓ): parenthesizations with more right than left
/// parentheses that lie in P^{(k)}_D(n, ℓ).
pub fn d_domain(n: usize, k: usize, ell: usize) -> Result<Vec<ParenState>> {
    let a = Annulus::new(n, k)?;
    let m = a.m;
    let subsets: Vec<BTreeSet<usize>> =
        (0u64..1 << m).map(|mask| (1..=m).filter(|&x| mask >> (x - 1) & 1 == 1).collect()).collect();
    let mut states = vec![ParenState { n: m, l: BTreeSet::new(), rs: Vec::new(), f: None }];
    for _ in 0..ell {
        states = states
            .into_iter()
            .flat_map(|s| {
                subsets.iter().map(move |r| {
                    let mut t = s.clone();
                    t.rs.push(r.clone());
                    t
                })
            })
            .collect();
    }
    let mut out = Vec::new();
    for s in states {
        let nr = s.num_rights();
        for lset in subsets.iter().filter(|x| x.len() < nr) {
            let mut t = s.clone();
            t.l = lset.clone();
            let mm = t.matching();
            let mut um: Vec<usize> = mm.unmatched().iter().map(|&i| mm.rights[i].pos).collect();
            let cnt = um.len();
            um.dedup();
            if um.len() != cnt || cnt > k {
                continue;
            }
            for comp in positive_compositions(k, cnt) {
                let mut u = t.clone();
                u.f = Some(um.iter().copied().zip(comp).collect());
                if dview(&u, &a).is_ok() {
                    out.push(u);
                }
            }
        }
    }
    Ok(out)
}

fn positive_compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return if total == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    crate::arith::compositions(total - parts.min(total), parts)
        .into_iter()
        .filter(|_| total >= parts)
        .map(|c| c.into_iter().map(|x| x + 1).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{extend_signed, nc_b, signed_partitions};

    fn members(n: usize, k: usize) -> Vec<SignedPartition> {
        signed_partitions(k * n).into_iter().filter(|p| is_member(p, n, k)).collect()
    }

    #[test]
    fn small_counts_k1() {
        assert_eq!(members(2, 1).len(), 4);
        assert_eq!(members(3, 1).len(), 14);
        assert_eq!(members(4, 1).len(), 50);
    }

    #[test]
    fn small_counts_fuss() {
        // Π over degrees (kh + d)/d for D_n with h = 2n−2
        assert_eq!(members(2, 2).len(), 9);
        assert_eq!(members(3, 2).len(), 55);
    }

    #[test]
    fn k1_agrees_with_circular_model() {
        for n in 2..=4 {
            for p in signed_partitions(n) {
                assert_eq!(is_member(&p, n, 1), p.is_noncrossing_d(), "{p}");
            }
        }
    }

    #[test]
    fn outer_restriction_is_type_b() {
        // members restrict to NC_B on the outer circle, so extension is complete
        let (n, k) = (3, 2);
        let mut via_ext = Vec::new();
        for o in nc_b(k * (n - 1), 1) {
            let reps: Vec<Vec<i32>> = o.pair_reps().iter().map(|b| b.to_vec()).collect();
            let zero: Vec<i32> = o.zero_block().map(|z| z.iter().copied().filter(|&x| x > 0).collect()).unwrap_or_default();
            via_ext.extend(extend_signed(k * n, &reps, &zero).into_iter().filter(|p| is_member(p, n, k)));
        }
        via_ext.sort();
        let mut all = members(n, k);
        all.sort();
        assert_eq!(via_ext, all);
    }

    fn fig7_left() -> SignedPartition {
        SignedPartition::from_pairs(
            20,
            &[vec![1, 2, 3, 4], vec![5, 6, 11, 12], vec![7, 8, 9, 10], vec![13, 14, 15, 16], vec![17, 18, 19, 20]],
            None,
        )
        .unwrap()
    }

    fn fig7_right() -> SignedPartition {
        SignedPartition::from_pairs(
            20,
            &[vec![13, 14, 15, 16, -1, -2, -3, -4], vec![5, 6, 11, 12, -17, -18, -19, -20], vec![7, 8, 9, 10]],
            None,
        )
        .unwrap()
    }

    fn fig8_left() -> SignedPartition {
        SignedPartition::from_pairs(
            20,
            &[vec![-16, 1, 2, -19], vec![3, 4, 5, 6], vec![7, 8, -17, -18], vec![9, 14, 15, 20], vec![10, 11, 12, 13]],
            None,
        )
        .unwrap()
    }

    fn fig8_right() -> SignedPartition {
        SignedPartition::from_pairs(
            20,
            &[vec![-16, 1, 2, 3, 4, 5, 6, -19], vec![7, 8, 9, 14, 15, 20, -17, -18], vec![10, 11, 12, 13]],
            None,
        )
        .unwrap()
    }

    #[test]
    fn figure_partitions_are_members() {
        assert!(is_member(&fig7_left(), 5, 4));
        assert!(is_member(&fig7_right(), 5, 4));
        assert!(is_member(&fig8_left(), 5, 4));
        assert!(is_member(&fig8_right(), 5, 4));
        assert!(!is_annular(&fig7_left(), 5, 4));
        assert_eq!(annular_blocks(&fig8_left(), 5, 4).len(), 6);
        assert_eq!(annular_blocks(&fig8_right(), 5, 4).len(), 4);
    }

    #[test]
    fn fig8_parenthesization() {
        let p = find_dparen(&fig8_left(), 5, 4).unwrap();
        assert_eq!(p.l, BTreeSet::from([3, 10]));
        assert_eq!(p.rs[0], BTreeSet::from([2, 6, 8, 13, 15]));
        assert_eq!(p.f, Some(BTreeMap::from([(2, 1), (8, 2), (15, 1)])));
        assert!(in_domain(&p, 5, 4));
        let out = tau_d(&p, 5, 4).unwrap();
        assert_eq!(out.len(), 2);
        assert!(out.contains(&fig8_left()));
    }

    #[test]
    fn fig7_left_peels_fully_matched() {
        let p = find_dparen(&fig7_left(), 5, 4).unwrap();
        assert_eq!(p.f, Some(BTreeMap::new()));
        assert_eq!(p.l.len(), p.rs[0].len());
        assert!(!in_domain(&p, 5, 4));
    }

    #[test]
    fn tau_d_outputs_are_members() {
        for (n, k) in [(3, 1), (4, 1), (2, 2), (3, 2)] {
            for p in d_domain(n, k, 1).unwrap() {
                for pi in tau_d(&p, n, k).unwrap() {
                    assert!(is_member(&pi, n, k), "{pi} from {p:?}");
                }
            }
        }
    }
}
