//! Exhaustive generators: Π(n), Π_B(n), k-divisible noncrossing partitions.

use crate::partition::{SetPartition, SignedPartition};

/// All set partitions of `[n]` via restricted growth strings.
pub fn set_partitions(n: usize) -> Vec<SetPartition> {
    fn rec(i: usize, n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<SetPartition>) {
        if i == n {
            out.push(SetPartition::from_labels(cur));
            return;
        }
        for b in 0..=max {
            cur.push(b);
            rec(i + 1, n, if b == max { max + 1 } else { max }, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, 0, &mut Vec::new(), &mut out);
    out
}

/// Block labels of every k-divisible noncrossing partition of `[m]`
/// (k = 1 gives all of NC(m)). Built block-by-block: the block of the first
/// free element, then its gaps recursively.
pub fn nc_labels(m: usize, k: usize) -> Vec<Vec<usize>> {
    nc_labels_exceptional(m, k, 0)
}

/// Noncrossing partitions of `[m]` with exactly `exc` blocks whose size is
/// not divisible by k. A gap whose length is not a multiple of k must hold
/// at least one such block, which prunes the search.
pub fn nc_labels_exceptional(m: usize, k: usize, exc: usize) -> Vec<Vec<usize>> {
    assert!(k > 0);
    let mut g = Gen { k, labels: vec![usize::MAX; m], pending: vec![(0, m)], out: Vec::new() };
    g.rec(0, exc);
    g.out
}

struct Gen {
    k: usize,
    labels: Vec<usize>,
    pending: Vec<(usize, usize)>,
    out: Vec<Vec<usize>>,
}

impl Gen {
    fn bad(&self, len: usize) -> usize {
        usize::from(!len.is_multiple_of(self.k))
    }

    fn pending_bad(&self) -> usize {
        self.pending.iter().map(|&(a, b)| self.bad(b - a)).sum()
    }

    fn rec(&mut self, next: usize, exc: usize) {
        let Some((a, b)) = self.pending.pop() else {
            if exc == 0 {
                self.out.push(self.labels.clone());
            }
            return;
        };
        if a == b {
            self.rec(next, exc);
        } else if self.pending_bad() + self.bad(b - a) <= exc {
            let mut members = vec![a];
            self.grow(next, exc, &mut members, b, 0);
        }
        self.pending.push((a, b));
    }

    /// `inner_bad`: gaps between current members that need an exceptional block.
    fn grow(&mut self, next: usize, exc: usize, members: &mut Vec<usize>, end: usize, inner_bad: usize) {
        let last = *members.last().unwrap();
        let block_bad = self.bad(members.len());
        let need = block_bad + inner_bad + self.bad(end - last - 1) + self.pending_bad();
        if need <= exc {
            let before = self.pending.len();
            for w in members.windows(2) {
                self.pending.push((w[0] + 1, w[1]));
            }
            self.pending.push((last + 1, end));
            for &x in members.iter() {
                self.labels[x] = next;
            }
            self.rec(next + 1, exc - block_bad);
            for &x in members.iter() {
                self.labels[x] = usize::MAX;
            }
            self.pending.truncate(before);
        }
        for q in last + 1..end {
            let ib = inner_bad + self.bad(q - last - 1);
            if ib + self.pending_bad() > exc {
                continue;
            }
            members.push(q);
            self.grow(next, exc, members, end, ib);
            members.pop();
        }
    }
}

/// All k-divisible noncrossing partitions of `[m]`, sorted canonically.
pub fn nc_partitions(m: usize, k: usize) -> Vec<SetPartition> {
    let mut v: Vec<SetPartition> = nc_labels(m, k).iter().map(|l| SetPartition::from_labels(l)).collect();
    v.sort();
    v
}

/// All partitions of type B_n (the whole of Π_B(n)), sorted canonically.
pub fn signed_partitions(n: usize) -> Vec<SignedPartition> {
    let mut out = extend_signed(n, &[], &[]);
    out.sort();
    out
}

/// Every partition of ±[n] whose restriction to ±[j] is the given one, where
/// j is the largest absolute value occurring in `reps`/`zero` (reps carry one
/// block per nonzero pair, first element positive; zero lists positives).
pub fn extend_signed(n: usize, reps: &[Vec<i32>], zero: &[i32]) -> Vec<SignedPartition> {
    fn rec(i: usize, n: usize, reps: &mut Vec<Vec<i32>>, zero: &mut Vec<i32>, out: &mut Vec<SignedPartition>) {
        if i > n {
            let z = if zero.is_empty() { None } else { Some(zero.as_slice()) };
            out.push(SignedPartition::from_pairs(n, reps, z).expect("generated partition is valid"));
            return;
        }
        let x = i as i32;
        zero.push(x);
        rec(i + 1, n, reps, zero, out);
        zero.pop();
        for j in 0..reps.len() {
            for s in [x, -x] {
                reps[j].push(s);
                rec(i + 1, n, reps, zero, out);
                reps[j].pop();
            }
        }
        reps.push(vec![x]);
        rec(i + 1, n, reps, zero, out);
        reps.pop();
    }
    let start = reps.iter().flatten().chain(zero).map(|x| x.unsigned_abs() as usize).max().unwrap_or(0) + 1;
    let mut out = Vec::new();
    rec(start, n, &mut reps.to_vec(), &mut zero.to_vec(), &mut out);
    out
}

/// NC^{(k)}_B(n): rotation-invariant k-divisible noncrossing partitions of
/// the 2kn-cycle, read as signed partitions of ±[kn].
pub fn nc_b(n: usize, k: usize) -> Vec<SignedPartition> {
    let big = k * n;
    let mut out: Vec<SignedPartition> = nc_labels(2 * big, k)
        .into_iter()
        .filter(|lab| (0..big).all(|i| (0..2 * big).all(|j| (lab[i] == lab[j]) == (lab[i + big] == lab[(j + big) % (2 * big)]))))
        .map(|lab| SignedPartition::from_cyclic_labels(big, &lab).expect("rotation-invariant labels"))
        .collect();
    out.sort();
    out
}
