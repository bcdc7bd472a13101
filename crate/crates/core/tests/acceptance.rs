//! Acceptance run: one PASS/FAIL line per criterion, with wall time.
//!
//! `cargo test --release --test acceptance -- --nocapture` shows the lines.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num_bigint::BigUint;

use ncpart::annulus::{d_domain, find_dparen, is_annular, is_member, tau_d, tau_d_prime, tau_d_prime_inv};
use ncpart::arith::{binomial, catalan_table};
use ncpart::enumeration::{enumerate_family, Family, FamilySpec, Filters, Limits, Poset};
use ncpart::formula::{admissible, eval_formula, FormulaId};
use ncpart::generate::{nc_b, nc_partitions, signed_partitions};
use ncpart::paren::{states_with_sizes, tau, tau_inv, tau_prime, tau_prime_inv};
use ncpart::typeb::{classify_x, leq_pairs, psi, psi_inv, BPair};
use ncpart::verify::{armstrong_iso, d_nonannular_split, verify, FamilyTuple, ParamRange};
use ncpart::{AnyPartition, SignedPartition};

fn limits() -> Limits {
    Limits { max_ground: 16, max_family: 200_000 }
}

fn spec(f: Family, n: usize, k: usize) -> FamilySpec {
    FamilySpec::new(f, n, k, 0).unwrap()
}

/// Runs `id` over the family tuples and returns (tuples checked, failure notes).
fn sweep(id: FormulaId, tuples: &[FamilyTuple], notes: &mut Vec<String>) -> usize {
    match verify(id, tuples, &limits()) {
        Ok(o) => {
            for m in o.mismatches().iter().take(3) {
                notes.push(format!("{id} mismatch at {:?}: brute {} formula {}", m.query, m.brute, m.formula));
            }
            if !o.skipped.is_empty() {
                notes.push(format!("{id}: {} family tuples skipped by the scale guard", o.skipped.len()));
            }
            o.reports.len()
        }
        Err(e) => {
            notes.push(format!("{id}: {e}"));
            0
        }
    }
}

fn ft(n: usize, k: usize, l: usize) -> FamilyTuple {
    FamilyTuple { n, k, r: 0, l }
}

fn criterion_1(notes: &mut Vec<String>) -> String {
    let cat = catalan_table(10);
    for (n, c) in cat.iter().enumerate() {
        if &BigUint::from(nc_partitions(n, 1).len()) != c {
            notes.push(format!("|NC({n})| ≠ Catalan({n})"));
        }
    }
    for n in 1..=6usize {
        let brute = signed_partitions(n).iter().filter(|p| p.is_noncrossing_b()).count();
        if BigUint::from(brute) != binomial(2 * n as i64, n as i64) || nc_b(n, 1).len() != brute {
            notes.push(format!("|NC_B({n})| = {brute}"));
        }
    }
    for n in 2..=5usize {
        let formula: BigUint =
            admissible(FormulaId::DRank, n, 1, 0, 1).iter().map(|p| eval_formula(FormulaId::DRank, p).unwrap()).sum();
        let brute = enumerate_family(&spec(Family::D, n, 1), &limits()).unwrap().len();
        if BigUint::from(brute) != formula {
            notes.push(format!("|NC_D({n})| = {brute}, rank sum = {formula}"));
        }
    }
    "NC(n) n≤10, NC_B(n) n≤6, NC_D(n) n≤5".into()
}

fn criterion_2(notes: &mut Vec<String>) -> String {
    let tuples = ParamRange { max_n: 8, max_k: 8, max_kn: 8, max_l: 3 }.tuples(FormulaId::ThmA);
    let c = sweep(FormulaId::ThmA, &tuples, notes);
    format!("THM-A: {c} tuples over {} (n,k,ℓ)", tuples.len())
}

fn criterion_3(notes: &mut Vec<String>) -> String {
    let range = ParamRange { max_n: 5, max_k: 5, max_kn: 5, max_l: 3 };
    let mut total = 0;
    for id in [FormulaId::ThmB, FormulaId::Index, FormulaId::BZeroIndex] {
        total += sweep(id, &range.tuples(id), notes);
    }
    // both branches of the index lemma must be exercised with nonzero counts
    let mut branches = BTreeSet::new();
    for t in range.tuples(FormulaId::Index) {
        for p in admissible(FormulaId::Index, t.n, t.k, 0, t.l) {
            if eval_formula(FormulaId::Index, &p).unwrap() > BigUint::from(0u32) {
                branches.insert(p.index.unwrap() == 1);
            }
        }
    }
    if branches.len() != 2 {
        notes.push("index lemma: a branch was never exercised".into());
    }
    format!("THM-B, INDEX, B-ZERO-INDEX: {total} tuples")
}

fn criterion_4(notes: &mut Vec<String>) -> String {
    let list = [(3, 1, 1), (3, 1, 2), (4, 1, 1), (4, 1, 2), (2, 2, 1), (3, 2, 1)];
    let tuples: Vec<FamilyTuple> = list.iter().map(|&(n, k, l)| ft(n, k, l)).collect();
    let mut total = 0;
    for id in [FormulaId::ThmD, FormulaId::DAnnular] {
        total += sweep(id, &tuples, notes);
    }
    let (mut low, mut full) = (0, 0);
    for &(n, k, l) in &list {
        for p in admissible(FormulaId::ThmD, n, k, 0, l) {
            if p.ktype.as_ref().unwrap().weight() == n {
                full += 1;
            } else {
                low += 1;
            }
        }
    }
    if low == 0 || full == 0 {
        notes.push("THM-D: one of the two cases is empty".into());
    }
    // all-non-wrapping chains via the type-B reduction, plus wrapping chains
    // via D-ANNULAR, give the THM-D total
    let mut split = 0;
    for &(n, k, l) in list.iter().filter(|t| t.0 >= 3) {
        let dc = Poset::build(&spec(Family::D, n, k), &limits()).unwrap().census(l).unwrap();
        for (p, d, b) in d_nonannular_split(n, k, l, &limits()).unwrap() {
            split += 1;
            let all = dc.count(&Filters { jumps: p.jumps.clone(), ktype: p.ktype.clone(), ..Default::default() }).unwrap();
            let ann = eval_formula(FormulaId::DAnnular, &p).unwrap();
            let thm = eval_formula(FormulaId::ThmD, &p).unwrap();
            if d != b || &d + &ann != all || all != thm {
                notes.push(format!("split at {p:?}: non-wrapping {d} vs B-sum {b}, wrapping {ann}, total {all}, THM-D {thm}"));
            }
        }
    }
    format!("THM-D (both cases) and D-ANNULAR: {total} tuples; {split} split checks")
}

fn criterion_5(notes: &mut Vec<String>) -> String {
    let mut checked = 0usize;
    // ψ and the order criterion
    for n in 1..=5 {
        let all = nc_b(n, 1);
        let pairs: Vec<BPair> = all.iter().map(|p| psi(p).unwrap()).collect();
        let images: BTreeSet<&BPair> = pairs.iter().collect();
        let expect: usize = nc_partitions(n, 1).iter().map(|s| BPair::all_for(s).len()).sum();
        if images.len() != all.len() || expect != all.len() {
            notes.push(format!("ψ is not a bijection at n={n}"));
        }
        for (p, q) in all.iter().zip(&pairs) {
            if psi_inv(q).as_ref() != Ok(p) || classify_x(p) != q.x {
                notes.push(format!("ψ round trip fails at {p}"));
            }
        }
        for (a, pa) in all.iter().zip(&pairs) {
            for (b, pb) in all.iter().zip(&pairs) {
                checked += 1;
                if leq_pairs(pa, pb) != a.refines(b).unwrap() {
                    notes.push(format!("order criterion fails at {a} ≤ {b}"));
                }
            }
        }
    }
    // τ, τ′
    for n in 1..=5 {
        for l in 1..=3 {
            let mut count = 0usize;
            let mut images = BTreeSet::new();
            for c in (0..n).flat_map(|t| ncpart::arith::compositions(t, l)) {
                let size: usize = c.iter().sum();
                for p in states_with_sizes(n, size, &c) {
                    let Ok((b, chain)) = tau_prime(&p) else { continue };
                    count += 1;
                    let back = if l == 1 {
                        let (b1, pi) = tau(&p).unwrap();
                        if b1 != b || pi != chain[0] {
                            notes.push(format!("τ and τ′ disagree at {p:?}"));
                        }
                        tau_inv(&b, &chain[0])
                    } else {
                        tau_prime_inv(&b, &chain)
                    };
                    if back.as_ref() != Ok(&p) {
                        notes.push(format!("τ′ round trip fails at {p:?}"));
                    }
                    images.insert((b, chain));
                }
            }
            // pointed multichains: Σ over chains of #blocks(π_1)
            let poset = Poset::build(&spec(Family::A, n, 1), &limits()).unwrap();
            let census = poset.census(l).unwrap();
            let pointed: BigUint = poset
                .types
                .iter()
                .map(|t| {
                    census.count(&Filters { ktype: Some(t.clone()), ..Default::default() }).unwrap() * BigUint::from(t.b)
                })
                .sum();
            if images.len() != count || BigUint::from(count) != pointed {
                notes.push(format!("τ′ at n={n} ℓ={l}: {count} states, {} images, {pointed} pointed chains", images.len()));
            }
            checked += count;
        }
    }
    // τ_D and τ_D′
    for (n, k, l) in [(3, 1, 1), (3, 1, 2), (2, 2, 1)] {
        let dom = d_domain(n, k, l).unwrap();
        let fam: Vec<SignedPartition> = enumerate_family(&spec(Family::D, n, k), &limits())
            .unwrap()
            .into_iter()
            .map(|p| match p {
                AnyPartition::Signed(s) => s,
                _ => unreachable!(),
            })
            .collect();
        if l == 1 {
            let mut images = BTreeSet::new();
            for p in &dom {
                for pi in tau_d(p, n, k).unwrap() {
                    if !is_member(&pi, n, k) || find_dparen(&pi, n, k).as_ref() != Ok(p) {
                        notes.push(format!("τ_D round trip fails at {p:?}"));
                    }
                    images.insert(pi);
                }
            }
            let annular: BTreeSet<SignedPartition> = fam.iter().filter(|p| is_annular(p, n, k)).cloned().collect();
            if images != annular {
                notes.push(format!("τ_D image at {:?} is not the set of wrapping elements", (n, k)));
            }
        }
        let mut images = BTreeSet::new();
        for p in &dom {
            for eps in [1i8, -1] {
                checked += 1;
                match tau_d_prime(p, eps, n, k) {
                    Ok(chain) => {
                        if tau_d_prime_inv(&chain, n, k) != Ok((p.clone(), eps)) {
                            notes.push(format!("τ_D′ round trip fails at {p:?}, ε={eps}"));
                        }
                        images.insert(chain);
                    }
                    Err(e) => notes.push(format!("τ_D′ fails at {p:?}: {e}")),
                }
            }
        }
        let wrapping = Poset::build(&spec(Family::D, n, k), &limits())
            .unwrap()
            .census(l)
            .unwrap()
            .count(&Filters { annular: Some(true), ..Default::default() })
            .unwrap();
        if BigUint::from(images.len()) != wrapping || images.len() != 2 * dom.len() {
            notes.push(format!("τ_D′ at {:?}: {} images, {wrapping} wrapping chains", (n, k, l), images.len()));
        }
    }
    format!("{checked} round trips / order comparisons")
}

fn criterion_6(notes: &mut Vec<String>) -> String {
    let range = ParamRange { max_n: 3, max_k: 3, max_kn: 9, max_l: 4 };
    let mut total = 0;
    for id in [FormulaId::AugType, FormulaId::AugRank, FormulaId::AugZeta] {
        total += sweep(id, &range.tuples(id), notes);
    }
    format!("AUG-TYPE, AUG-RANK, AUG-ZETA: {total} tuples")
}

fn criterion_7(notes: &mut Vec<String>) -> String {
    let mut sizes = Vec::new();
    for (n, k) in [(1, 1), (2, 1), (1, 2)] {
        match armstrong_iso(n, k, &limits()) {
            Ok(r) if r.ok() => sizes.push(r.size),
            Ok(r) => notes.push(format!("isomorphism fails: {r:?}")),
            Err(e) => notes.push(format!("isomorphism at {:?}: {e}", (n, k))),
        }
    }
    for (m, want) in [(3, 4u32), (5, 21)] {
        let z = Poset::build(&spec(Family::TildeA, m, 2), &limits()).unwrap().census(1).unwrap().total();
        if z != BigUint::from(want) {
            notes.push(format!("Z(tilde-A({m}), 1) = {z}, expected {want}"));
        }
    }
    format!("isomorphisms of sizes {sizes:?}; Z = 4, 21")
}

fn criterion_8(notes: &mut Vec<String>) -> String {
    let mut total = 0;
    let up_to = |id: FormulaId, n: usize, k: usize, l: usize| -> Vec<FamilyTuple> {
        ParamRange { max_n: n, max_k: k, max_kn: n * k, max_l: l }.tuples(id).into_iter().filter(|t| t.k == k).collect()
    };
    total += sweep(FormulaId::AType, &up_to(FormulaId::AType, 6, 1, 1), notes);
    total += sweep(FormulaId::BType, &up_to(FormulaId::BType, 5, 1, 1), notes);
    total += sweep(FormulaId::DTypeLow, &up_to(FormulaId::DTypeLow, 5, 1, 1), notes);
    total += sweep(FormulaId::DTypeFull, &up_to(FormulaId::DTypeFull, 5, 1, 1), notes);
    for (n, k) in [(6, 1), (4, 2)] {
        total += sweep(FormulaId::AChainType, &up_to(FormulaId::AChainType, n, k, 2), notes);
    }
    for (n, k) in [(5, 1), (3, 2)] {
        total += sweep(FormulaId::BChainType, &up_to(FormulaId::BChainType, n, k, 2), notes);
    }
    format!("type counts: {total} tuples")
}

fn criterion_9(notes: &mut Vec<String>) -> String {
    let mut compared = 0;
    for n in 2..=5 {
        let mut members = 0;
        for p in signed_partitions(n) {
            compared += 1;
            let a = is_member(&p, n, 1);
            if a != p.is_noncrossing_d() {
                notes.push(format!("models disagree on {p} (annulus: {a})"));
            }
            members += a as usize;
        }
        let want = [4, 14, 50, 182][n - 2];
        if members != want {
            notes.push(format!("|NC_D({n})| = {members}, expected {want}"));
        }
    }
    format!("{compared} partitions of ±[n], n ≤ 5")
}

#[test]
fn acceptance() {
    type Crit = fn(&mut Vec<String>) -> String;
    let criteria: [(Crit, u64); 9] = [
        (criterion_1, 10),
        (criterion_2, 60),
        (criterion_3, 60),
        (criterion_4, 120),
        (criterion_5, 60),
        (criterion_6, 30),
        (criterion_7, 30),
        (criterion_8, 30),
        (criterion_9, 10),
    ];
    let mut failed = Vec::new();
    for (i, (run, budget)) in criteria.iter().enumerate() {
        let mut notes = Vec::new();
        let t = Instant::now();
        let detail = run(&mut notes);
        let dt = t.elapsed();
        if dt > Duration::from_secs(*budget) {
            notes.push(format!("took {dt:.2?}, budget {budget} s"));
        }
        let verdict = if notes.is_empty() { "PASS" } else { "FAIL" };
        println!("criterion {}: {verdict} ({:.2} s, budget {budget} s, exact) {detail}", i + 1, dt.as_secs_f64());
        for n in notes.iter().take(10) {
            println!("    {n}");
        }
        if !notes.is_empty() {
            failed.push(i + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
