//! The bijection ψ: NC_B(n) → 𝔅(n), pairs (σ, x) with σ ∈ NC(n) and x empty,
//! an edge of σ or a block of σ, and the order-transfer criterion.

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{Error, Result};
use crate::partition::{Edge, SetPartition, SignedPartition};

/// The second component of a pair in 𝔅(n). Blocks are named by their minimum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum XRef {
    Empty,
    Edge(Edge),
    Block(usize),
}

impl XRef {
    pub fn kind(&self) -> &'static str {
        match self {
            XRef::Empty => "empty",
            XRef::Edge(_) => "edge",
            XRef::Block(_) => "block",
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            XRef::Empty => json!({"kind": "empty", "value": null}),
            XRef::Edge(e) => json!({"kind": "edge", "value": [e.i, e.j]}),
            XRef::Block(m) => json!({"kind": "block", "value": m}),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BPair {
    pub sigma: SetPartition,
    pub x: XRef,
}

impl BPair {
    pub fn new(sigma: SetPartition, x: XRef) -> Result<Self> {
        let ok = match x {
            XRef::Empty => true,
            XRef::Edge(e) => sigma.edges().contains(&e),
            XRef::Block(m) => sigma.blocks().iter().any(|b| b[0] == m),
        };
        if !ok {
            return Err(Error::Param(format!("{x:?} does not belong to {sigma}")));
        }
        Ok(BPair { sigma, x })
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({"sigma": self.sigma.to_json("A", 1), "x": self.x.to_json()})
    }

    /// All n+1 admissible x for a given σ.
    pub fn all_for(sigma: &SetPartition) -> Vec<BPair> {
        let mut v = vec![BPair { sigma: sigma.clone(), x: XRef::Empty }];
        for e in sigma.edges() {
            v.push(BPair { sigma: sigma.clone(), x: XRef::Edge(e) });
        }
        for b in sigma.blocks() {
            v.push(BPair { sigma: sigma.clone(), x: XRef::Block(b[0]) });
        }
        v
    }
}

pub fn psi(pi: &SignedPartition) -> Result<BPair> {
    if !pi.is_noncrossing_b() {
        return Err(Error::NotMember(format!("{pi} is not noncrossing of type B")));
    }
    let n = pi.n();
    // η: blocks restricted to positives; X: those whose π-block has a negative
    let mut eta: Vec<Vec<usize>> = Vec::new();
    let mut xs: Vec<Vec<usize>> = Vec::new();
    for b in pi.blocks() {
        let pos: Vec<usize> = b.iter().filter(|&&x| x > 0).map(|&x| x as usize).collect();
        if pos.is_empty() {
            continue;
        }
        if b.iter().any(|&x| x < 0) {
            xs.push(pos);
        } else {
            eta.push(pos);
        }
    }
    xs.sort_by_key(|a| *a.iter().max().unwrap());
    let k = xs.len();
    for i in 0..k / 2 {
        let mut merged = xs[i].clone();
        merged.extend(&xs[k - 1 - i]);
        eta.push(merged);
    }
    let x = if k == 0 {
        XRef::Empty
    } else if k.is_multiple_of(2) {
        let i = *xs[k / 2 - 1].iter().max().unwrap();
        let j = *xs[k / 2].iter().min().unwrap();
        XRef::Edge(Edge { i, j })
    } else {
        let mid = &xs[k / 2];
        eta.push(mid.clone());
        XRef::Block(*mid.iter().min().unwrap())
    };
    let sigma = SetPartition::new(n, eta)?;
    Ok(BPair { sigma, x })
}

pub fn psi_inv(p: &BPair) -> Result<SignedPartition> {
    let n = p.sigma.n();
    // split each block at [1, lo] / [hi, n]
    let split = |lo: usize, hi: usize, skip_min: Option<usize>| -> Result<SignedPartition> {
        let mut reps = Vec::new();
        let mut zero = None;
        for a in p.sigma.blocks() {
            if Some(a[0]) == skip_min {
                zero = Some(a.iter().map(|&x| x as i32).collect::<Vec<_>>());
                continue;
            }
            let a1: Vec<i32> = a.iter().filter(|&&x| x <= lo).map(|&x| x as i32).collect();
            let a2: Vec<i32> = a.iter().filter(|&&x| x >= hi).map(|&x| x as i32).collect();
            if a1.is_empty() || a2.is_empty() || a1.len() + a2.len() != a.len() {
                if !(a1.is_empty() || a2.is_empty()) {
                    return Err(Error::Param("block straddles x without being split cleanly".into()));
                }
                reps.push(a.iter().map(|&x| x as i32).collect());
            } else {
                let mut r = a1;
                r.extend(a2.iter().map(|&x| -x));
                reps.push(r);
            }
        }
        SignedPartition::from_pairs(n, &reps, zero.as_deref())
    };
    match p.x {
        XRef::Empty => split(0, n + 1, None),
        XRef::Edge(e) => split(e.i, e.j, None),
        XRef::Block(m) => {
            let b = p
                .sigma
                .blocks()
                .iter()
                .find(|b| b[0] == m)
                .ok_or_else(|| Error::Param(format!("no block with minimum {m}")))?;
            split(b[0], *b.last().unwrap(), Some(m))
        }
    }
}

/// The x-component read directly off π.
pub fn classify_x(pi: &SignedPartition) -> XRef {
    let n = pi.n() as i32;
    if let Some(z) = pi.zero_block() {
        let m = z.iter().filter(|&&x| x > 0).min().copied().unwrap();
        return XRef::Block(m as usize);
    }
    let mut best: Option<(i32, i32)> = None;
    for i in 1..=n {
        let bl = pi.block_of(i).unwrap();
        for &y in bl {
            if y < 0 {
                let j = -y;
                let (a, b) = (i.min(j), i.max(j));
                if best.is_none_or(|(p, q)| b - a < q - p) {
                    best = Some((a, b));
                }
            }
        }
    }
    match best {
        None => XRef::Empty,
        Some((a, b)) => XRef::Edge(Edge { i: a as usize, j: b as usize }),
    }
}

/// The unique shortest edge of σ with `i ≤ lo` and `hi ≤ j` (strict variants
/// via the flag), if any.
fn minimal_straddling(sigma: &SetPartition, lo: usize, hi: usize, strict: bool) -> Option<Edge> {
    let cands: Vec<Edge> = sigma
        .edges()
        .into_iter()
        .filter(|e| if strict { e.i < lo && hi < e.j } else { e.i <= lo && hi <= e.j })
        .collect();
    let min = cands.iter().map(|e| e.len()).min()?;
    let best: Vec<&Edge> = cands.iter().filter(|e| e.len() == min).collect();
    assert_eq!(best.len(), 1, "minimal straddling edge must be unique");
    Some(*best[0])
}

/// ψ⁻¹(p1) ≤ ψ⁻¹(p2), decided on the pairs alone.
pub fn leq_pairs(p1: &BPair, p2: &BPair) -> bool {
    if !p1.sigma.refines(&p2.sigma).unwrap_or(false) {
        return false;
    }
    let block_of = |s: &SetPartition, m: usize| -> Vec<usize> {
        s.blocks().iter().find(|b| b[0] == m).cloned().unwrap_or_default()
    };
    match (p1.x, p2.x) {
        (XRef::Empty, XRef::Empty) => true,
        (x1, XRef::Edge(e)) => match minimal_straddling(&p1.sigma, e.i, e.j, false) {
            Some(f) => x1 == XRef::Edge(f),
            None => x1 == XRef::Empty,
        },
        (x1, XRef::Block(m2)) => {
            let b2 = block_of(&p2.sigma, m2);
            match x1 {
                XRef::Block(m1) => block_of(&p1.sigma, m1).iter().all(|x| b2.contains(x)),
                XRef::Edge(f) if b2.contains(&f.i) && b2.contains(&f.j) => true,
                _ => {
                    let lo = b2[0];
                    let hi = *b2.last().unwrap();
                    match minimal_straddling(&p1.sigma, lo, hi, true) {
                        Some(f) => x1 == XRef::Edge(f),
                        None => x1 == XRef::Empty,
                    }
                }
            }
        }
        (_, XRef::Empty) => false,
    }
}
