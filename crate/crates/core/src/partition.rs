//! Set partitions of `[n]`, signed partitions of `±[n]`, block-size
//! censuses and the noncrossing predicates.
//!
//! Cyclic conventions (used everywhere in the crate):
//! * type A: `1, 2, …, m`;
//! * type B: `1, …, n, −1, …, −n`, i.e. `i ↦ i−1` and `−i ↦ n+i−1`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{Error, Result};

/// `(b; b_1, …, b_n)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TypeVector {
    pub b: usize,
    pub counts: Vec<usize>,
}

impl TypeVector {
    pub fn new(counts: Vec<usize>) -> Self {
        TypeVector { b: counts.iter().sum(), counts }
    }

    pub fn zero(len: usize) -> Self {
        Self::new(vec![0; len])
    }

    /// Σ i·b_i.
    pub fn weight(&self) -> usize {
        self.counts.iter().enumerate().map(|(i, c)| (i + 1) * c).sum()
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Counts as signed integers, convenient for multinomials.
    pub fn signed_counts(&self) -> Vec<i64> {
        self.counts.iter().map(|&c| c as i64).collect()
    }

    /// Pads or truncates the count vector (truncation must only drop zeros).
    pub fn resized(&self, len: usize) -> Option<Self> {
        if self.counts.iter().skip(len).any(|&c| c != 0) {
            return None;
        }
        let mut counts = self.counts.clone();
        counts.resize(len, 0);
        Some(Self::new(counts))
    }
}

impl fmt::Display for TypeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cs: Vec<String> = self.counts.iter().map(|c| c.to_string()).collect();
        write!(f, "({}; {})", self.b, cs.join(","))
    }
}

impl FromStr for TypeVector {
    type Err = Error;

    /// Accepts `b;c1,c2,…`, `(b; c1,…)` or just `c1,c2,…`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().trim_start_matches('(').trim_end_matches(')');
        let (b, rest) = match t.split_once(';') {
            Some((b, rest)) => (Some(b.trim()), rest),
            None => (None, t),
        };
        let counts = rest
            .split(',')
            .map(|x| x.trim())
            .filter(|x| !x.is_empty())
            .map(|x| x.parse::<usize>().map_err(|_| Error::Param(format!("bad type entry {x:?}"))))
            .collect::<Result<Vec<_>>>()?;
        let tv = TypeVector::new(counts);
        if let Some(b) = b {
            let b: usize = b.parse().map_err(|_| Error::Param(format!("bad type total {b:?}")))?;
            if b != tv.b {
                return Err(Error::Param(format!("type total {b} ≠ Σ b_i = {}", tv.b)));
            }
        }
        Ok(tv)
    }
}

/// An edge `(i, j)`: consecutive elements of one block.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge {
    pub i: usize,
    pub j: usize,
}

impl Edge {
    pub fn len(&self) -> usize {
        self.j - self.i
    }

    pub fn is_empty(&self) -> bool {
        self.i == self.j
    }
}

/// Noncrossing test on a linear (= cyclic) sequence of block labels.
pub(crate) fn labels_noncrossing(labels: &[usize]) -> bool {
    let nb = labels.iter().map(|&b| b + 1).max().unwrap_or(0);
    let mut last = vec![usize::MAX; nb];
    for (i, &b) in labels.iter().enumerate() {
        last[b] = i;
    }
    let mut seen = vec![false; nb];
    let mut stack: Vec<usize> = Vec::new();
    for (i, &b) in labels.iter().enumerate() {
        if seen[b] {
            if stack.last() != Some(&b) {
                return false;
            }
        } else {
            seen[b] = true;
            stack.push(b);
        }
        if last[b] == i {
            stack.pop();
        }
    }
    true
}

/// Relabels so that labels appear in first-occurrence order (0, 1, 2, …).
pub(crate) fn normalize_labels(labels: &[usize]) -> Vec<usize> {
    let mut map: BTreeMap<usize, usize> = BTreeMap::new();
    labels
        .iter()
        .map(|&l| {
            let next = map.len();
            *map.entry(l).or_insert(next)
        })
        .collect()
}

// ---------------------------------------------------------------------------

/// A partition of `[n]`, blocks sorted ascending and ordered by minimum.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SetPartition {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

impl SetPartition {
    pub fn new(n: usize, mut blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; n + 1];
        for b in &blocks {
            if b.is_empty() {
                return Err(Error::InvalidPartition("empty block".into()));
            }
            for &x in b {
                if x == 0 || x > n {
                    return Err(Error::OutOfRange(x as i64, n));
                }
                if seen[x] {
                    return Err(Error::InvalidPartition(format!("{x} appears twice")));
                }
                seen[x] = true;
            }
        }
        if let Some(x) = (1..=n).find(|&x| !seen[x]) {
            return Err(Error::InvalidPartition(format!("{x} is not covered")));
        }
        for b in blocks.iter_mut() {
            b.sort_unstable();
        }
        blocks.sort();
        Ok(SetPartition { n, blocks })
    }

    /// `labels[i]` is the block id of element `i+1`.
    pub fn from_labels(labels: &[usize]) -> Self {
        let norm = normalize_labels(labels);
        let nb = norm.iter().map(|&b| b + 1).max().unwrap_or(0);
        let mut blocks = vec![Vec::new(); nb];
        for (i, &b) in norm.iter().enumerate() {
            blocks[b].push(i + 1);
        }
        SetPartition { n: labels.len(), blocks }
    }

    pub fn discrete(n: usize) -> Self {
        SetPartition { n, blocks: (1..=n).map(|i| vec![i]).collect() }
    }

    pub fn one_block(n: usize) -> Self {
        SetPartition { n, blocks: vec![(1..=n).collect()] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    /// Block index (in canonical order) of each element, 0-based positions.
    pub fn labels(&self) -> Vec<usize> {
        let mut lab = vec![0; self.n];
        for (bi, b) in self.blocks.iter().enumerate() {
            for &x in b {
                lab[x - 1] = bi;
            }
        }
        lab
    }

    pub fn block_of(&self, x: usize) -> Option<&[usize]> {
        self.blocks.iter().find(|b| b.contains(&x)).map(|b| b.as_slice())
    }

    pub fn is_noncrossing(&self) -> bool {
        labels_noncrossing(&self.labels())
    }

    pub fn refines(&self, other: &SetPartition) -> Result<bool> {
        if self.n != other.n {
            return Err(Error::GroundMismatch(self.n, other.n));
        }
        let lab = other.labels();
        Ok(self.blocks.iter().all(|b| b.iter().all(|&x| lab[x - 1] == lab[b[0] - 1])))
    }

    pub fn is_k_divisible(&self, k: usize) -> bool {
        k > 0 && self.blocks.iter().all(|b| b.len() % k == 0)
    }

    /// Census of block sizes, `counts` of length n.
    pub fn type_of(&self) -> TypeVector {
        let mut counts = vec![0; self.n];
        for b in &self.blocks {
            counts[b.len() - 1] += 1;
        }
        TypeVector::new(counts)
    }

    /// Census of block sizes divided by k; counts of length n/k.
    pub fn k_type(&self, k: usize) -> Result<TypeVector> {
        if k == 0 {
            return Err(Error::Param("k must be positive".into()));
        }
        let mut counts = vec![0; self.n / k];
        for b in &self.blocks {
            if b.len() % k != 0 {
                return Err(Error::NotDivisible { size: b.len(), k });
            }
            counts[b.len() / k - 1] += 1;
        }
        Ok(TypeVector::new(counts))
    }

    pub fn edges(&self) -> Vec<Edge> {
        let mut out: Vec<Edge> = self
            .blocks
            .iter()
            .flat_map(|b| b.windows(2).map(|w| Edge { i: w[0], j: w[1] }))
            .collect();
        out.sort();
        out
    }

    /// Image under `i ↦ i + n/2 (mod n)`.
    pub fn rotate_half(&self) -> Result<SetPartition> {
        if !self.n.is_multiple_of(2) {
            return Err(Error::Param(format!("rotate_half needs an even ground set, got {}", self.n)));
        }
        let h = self.n / 2;
        let blocks = self
            .blocks
            .iter()
            .map(|b| b.iter().map(|&x| (x - 1 + h) % self.n + 1).collect())
            .collect();
        SetPartition::new(self.n, blocks)
    }

    pub fn to_json(&self, family: &str, k: usize) -> serde_json::Value {
        json!({"family": family, "n": self.n, "k": k, "blocks": self.blocks})
    }
}

impl fmt::Display for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bs: Vec<String> = self
            .blocks
            .iter()
            .map(|b| b.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
            .collect();
        write!(f, "{{{{{}}}}}", bs.join("},{"))
    }
}

// ---------------------------------------------------------------------------

/// Sort key realizing the canonical order on `±[n]`: 1, −1, 2, −2, ….
pub fn signed_key(x: i32) -> (i32, bool) {
    (x.abs(), x < 0)
}

/// Position of `x ∈ ±[n]` on the type-B cycle `1..n, −1..−n`.
pub fn cyclic_index(n: usize, x: i32) -> usize {
    if x > 0 {
        x as usize - 1
    } else {
        n + (-x) as usize - 1
    }
}

/// Inverse of [`cyclic_index`].
pub fn cyclic_element(n: usize, idx: usize) -> i32 {
    if idx < n {
        idx as i32 + 1
    } else {
        -((idx - n) as i32 + 1)
    }
}

/// A partition of `±[n]` closed under negation with at most one zero block.
/// All blocks are stored; each block is sorted by [`signed_key`] and blocks
/// are ordered by their first element.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignedPartition {
    n: usize,
    blocks: Vec<Vec<i32>>,
}

fn sort_signed(b: &mut [i32]) {
    b.sort_unstable_by_key(|&x| signed_key(x));
}

impl SignedPartition {
    pub fn new(n: usize, mut blocks: Vec<Vec<i32>>) -> Result<Self> {
        let mut seen = vec![false; 2 * n];
        for b in &blocks {
            if b.is_empty() {
                return Err(Error::InvalidPartition("empty block".into()));
            }
            for &x in b {
                if x == 0 || x.unsigned_abs() as usize > n {
                    return Err(Error::OutOfRange(x as i64, n));
                }
                let c = cyclic_index(n, x);
                if seen[c] {
                    return Err(Error::InvalidPartition(format!("{x} appears twice")));
                }
                seen[c] = true;
            }
        }
        if let Some(c) = (0..2 * n).find(|&c| !seen[c]) {
            return Err(Error::InvalidPartition(format!("{} is not covered", cyclic_element(n, c))));
        }
        for b in blocks.iter_mut() {
            sort_signed(b);
        }
        blocks.sort_by_key(|b| signed_key(b[0]));
        let mut zeros = 0;
        for b in &blocks {
            let mut neg: Vec<i32> = b.iter().map(|&x| -x).collect();
            sort_signed(&mut neg);
            if neg == *b {
                zeros += 1;
            } else if !blocks.contains(&neg) {
                return Err(Error::InvalidPartition(format!("negative of {b:?} is not a block")));
            }
        }
        if zeros > 1 {
            return Err(Error::InvalidPartition("more than one zero block".into()));
        }
        Ok(SignedPartition { n, blocks })
    }

    /// Builds from one representative per nonzero pair plus an optional zero
    /// block (given by any generating subset; it is closed under negation).
    pub fn from_pairs(n: usize, reps: &[Vec<i32>], zero: Option<&[i32]>) -> Result<Self> {
        let mut blocks = Vec::new();
        for r in reps {
            blocks.push(r.clone());
            blocks.push(r.iter().map(|&x| -x).collect());
        }
        if let Some(z) = zero {
            let mut zb: Vec<i32> = z.iter().flat_map(|&x| [x, -x]).collect();
            zb.sort_unstable();
            zb.dedup();
            blocks.push(zb);
        }
        Self::new(n, blocks)
    }

    /// From block labels on the type-B cycle (length 2n).
    pub fn from_cyclic_labels(n: usize, labels: &[usize]) -> Result<Self> {
        if labels.len() != 2 * n {
            return Err(Error::GroundMismatch(labels.len(), 2 * n));
        }
        let mut map: BTreeMap<usize, Vec<i32>> = BTreeMap::new();
        for (c, &l) in labels.iter().enumerate() {
            map.entry(l).or_default().push(cyclic_element(n, c));
        }
        Self::new(n, map.into_values().collect())
    }

    pub fn discrete(n: usize) -> Self {
        let reps: Vec<Vec<i32>> = (1..=n as i32).map(|i| vec![i]).collect();
        Self::from_pairs(n, &reps, None).expect("discrete partition is valid")
    }

    pub fn full_zero(n: usize) -> Self {
        let z: Vec<i32> = (1..=n as i32).collect();
        Self::from_pairs(n, &[], Some(&z)).expect("full zero block is valid")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<i32>] {
        &self.blocks
    }

    pub fn is_zero_block(b: &[i32]) -> bool {
        b.contains(&-b[0])
    }

    pub fn zero_block(&self) -> Option<&[i32]> {
        self.blocks.iter().find(|b| Self::is_zero_block(b)).map(|b| b.as_slice())
    }

    /// Representatives of the nonzero pairs: the block whose first element
    /// (smallest absolute value) is positive.
    pub fn pair_reps(&self) -> Vec<&[i32]> {
        self.blocks
            .iter()
            .filter(|b| b[0] > 0 && !Self::is_zero_block(b))
            .map(|b| b.as_slice())
            .collect()
    }

    /// Number of nonzero pairs.
    pub fn nz(&self) -> usize {
        self.pair_reps().len()
    }

    pub fn block_of(&self, x: i32) -> Option<&[i32]> {
        self.blocks.iter().find(|b| b.contains(&x)).map(|b| b.as_slice())
    }

    pub fn same_block(&self, a: i32, b: i32) -> bool {
        self.block_of(a).is_some_and(|bl| bl.contains(&b))
    }

    /// Block labels indexed by [`cyclic_index`].
    pub fn cyclic_labels(&self) -> Vec<usize> {
        let mut lab = vec![0; 2 * self.n];
        for (bi, b) in self.blocks.iter().enumerate() {
            for &x in b {
                lab[cyclic_index(self.n, x)] = bi;
            }
        }
        lab
    }

    /// Type-B circular test: the type-A test on the 2n-cycle.
    pub fn is_noncrossing_b(&self) -> bool {
        labels_noncrossing(&self.cyclic_labels())
    }

    /// Type-D circular test: ±1..±(n−1) on the circle, ±n at the centre.
    pub fn is_noncrossing_d(&self) -> bool {
        let n = self.n;
        if n < 2 {
            return false;
        }
        let m = n - 1;
        let nn = n as i32;
        // Outer labels; `merge` optionally identifies one block with its negative.
        let outer_labels = |merge: Option<(usize, usize)>| -> Vec<usize> {
            let mut lab = vec![0; 2 * m];
            for (bi, b) in self.blocks.iter().enumerate() {
                let l = match merge {
                    Some((a, c)) if bi == c => a,
                    _ => bi,
                };
                for &x in b {
                    if x.abs() < nn {
                        lab[cyclic_index(m, x)] = l;
                    }
                }
            }
            lab
        };
        let idx_of = |x: i32| self.blocks.iter().position(|b| b.contains(&x)).unwrap();
        if let Some(z) = self.zero_block() {
            if !z.contains(&nn) || z.len() < 4 {
                return false;
            }
            return labels_noncrossing(&outer_labels(None));
        }
        let bi = idx_of(nn);
        let b = &self.blocks[bi];
        if b.len() == 1 {
            return labels_noncrossing(&outer_labels(None));
        }
        let ci = idx_of(-nn);
        if !labels_noncrossing(&outer_labels(Some((bi, ci)))) {
            return false;
        }
        // The outer part of B must be one arc of B° ∪ −B°.
        let mut seq = Vec::new();
        for c in 0..2 * m {
            let x = cyclic_element(m, c);
            if b.contains(&x) {
                seq.push(true);
            } else if b.contains(&-x) {
                seq.push(false);
            }
        }
        let changes = (0..seq.len()).filter(|&i| seq[i] != seq[(i + 1) % seq.len()]).count();
        changes == 2
    }

    pub fn refines(&self, other: &SignedPartition) -> Result<bool> {
        if self.n != other.n {
            return Err(Error::GroundMismatch(self.n, other.n));
        }
        let lab = other.cyclic_labels();
        let n = self.n;
        Ok(self
            .blocks
            .iter()
            .all(|b| b.iter().all(|&x| lab[cyclic_index(n, x)] == lab[cyclic_index(n, b[0])])))
    }

    pub fn is_k_divisible(&self, k: usize) -> bool {
        k > 0 && self.blocks.iter().all(|b| b.len() % k == 0)
    }

    /// Census of nonzero pair sizes, counts of length n.
    pub fn type_of(&self) -> TypeVector {
        let mut counts = vec![0; self.n];
        for b in self.pair_reps() {
            counts[b.len() - 1] += 1;
        }
        TypeVector::new(counts)
    }

    /// Census of nonzero pair sizes divided by k; counts of length n/k.
    pub fn k_type(&self, k: usize) -> Result<TypeVector> {
        if k == 0 {
            return Err(Error::Param("k must be positive".into()));
        }
        let mut counts = vec![0; self.n / k];
        for b in &self.blocks {
            if b.len() % k != 0 {
                return Err(Error::NotDivisible { size: b.len(), k });
            }
        }
        for b in self.pair_reps() {
            counts[b.len() / k - 1] += 1;
        }
        Ok(TypeVector::new(counts))
    }

    /// Applies `f` to every element (must map ±[n] bijectively, commuting
    /// with negation).
    pub fn map_elements(&self, f: impl Fn(i32) -> i32) -> Result<SignedPartition> {
        let blocks = self.blocks.iter().map(|b| b.iter().map(|&x| f(x)).collect()).collect();
        SignedPartition::new(self.n, blocks)
    }

    pub fn to_json(&self, family: &str, k: usize) -> serde_json::Value {
        json!({"family": family, "n": self.n, "k": k, "blocks": self.blocks})
    }
}

impl fmt::Display for SignedPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if let Some(z) = self.zero_block() {
            parts.push(format!("{{{}}}", z.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")));
        }
        for b in self.pair_reps() {
            parts.push(format!("±{{{}}}", b.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")));
        }
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// Either kind of partition, with its family's JSON encoding.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AnyPartition {
    Set(SetPartition),
    Signed(SignedPartition),
}

impl AnyPartition {
    pub fn as_set(&self) -> Option<&SetPartition> {
        match self {
            AnyPartition::Set(p) => Some(p),
            _ => None,
        }
    }

    pub fn as_signed(&self) -> Option<&SignedPartition> {
        match self {
            AnyPartition::Signed(p) => Some(p),
            _ => None,
        }
    }

    /// Block labels over a fixed indexing of the ground set.
    pub fn labels(&self) -> Vec<usize> {
        match self {
            AnyPartition::Set(p) => p.labels(),
            AnyPartition::Signed(p) => p.cyclic_labels(),
        }
    }
}

impl fmt::Display for AnyPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnyPartition::Set(p) => p.fmt(f),
            AnyPartition::Signed(p) => p.fmt(f),
        }
    }
}
