//! Exact binomials and multinomials.
//!
//! Out-of-range arguments evaluate to zero, which lets the closed forms be
//! summed over index ranges without special cases.

use num_bigint::BigUint;
use num_traits::{One, Zero};

/// C(n, k); zero when k < 0, n < 0 or k > n.
pub fn binomial(n: i64, k: i64) -> BigUint {
    if n < 0 || k < 0 || k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k) as u64;
    let n = n as u64;
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// (Σ parts)! / Π parts!; zero if any part is negative.
pub fn multinomial(parts: &[i64]) -> BigUint {
    if parts.iter().any(|&p| p < 0) {
        return BigUint::zero();
    }
    let mut total = 0i64;
    let mut acc = BigUint::one();
    for &p in parts {
        total += p;
        acc *= binomial(total, p);
    }
    acc
}

pub fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * i)
}

/// Catalan numbers via the convolution recurrence (kept independent of
/// `binomial` so it can serve as an oracle).
pub fn catalan_table(max: usize) -> Vec<BigUint> {
    let mut c = vec![BigUint::one()];
    for m in 1..=max {
        let mut s = BigUint::zero();
        for i in 0..m {
            s += &c[i] * &c[m - 1 - i];
        }
        c.push(s);
    }
    c
}

/// All compositions of `total` into `parts` nonnegative summands, in
/// lexicographic order.
pub fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    fn rec(rem: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 1 {
            cur.push(rem);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for v in 0..=rem {
            cur.push(v);
            rec(rem - v, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if parts == 0 {
        if total == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(total, parts, &mut Vec::new(), &mut out);
    out
}

/// All count vectors (b_1..b_n) with Σ i·b_i ≤ `max_weight`.
pub fn type_vectors(n: usize, max_weight: usize) -> Vec<Vec<usize>> {
    fn rec(i: usize, n: usize, rem: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i > n {
            out.push(cur.clone());
            return;
        }
        for c in 0..=rem / i {
            cur.push(c);
            rec(i + 1, n, rem - c * i, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(1, n, max_weight, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_edges() {
        assert_eq!(binomial(5, 2), BigUint::from(10u32));
        assert_eq!(binomial(5, -1), BigUint::zero());
        assert_eq!(binomial(5, 6), BigUint::zero());
        assert_eq!(binomial(0, 0), BigUint::one());
        assert_eq!(binomial(-1, 0), BigUint::zero());
    }

    #[test]
    fn multinomial_basics() {
        assert_eq!(multinomial(&[1, 1, 1]), BigUint::from(6u32));
        assert_eq!(multinomial(&[2, -1]), BigUint::zero());
        assert_eq!(multinomial(&[]), BigUint::one());
    }

    #[test]
    fn catalan_matches_binomial() {
        let c = catalan_table(12);
        for (m, cm) in c.iter().enumerate() {
            let m = m as i64;
            assert_eq!(cm * BigUint::from((m + 1) as u64), binomial(2 * m, m));
        }
    }

    #[test]
    fn multinomial_sum_is_binomial() {
        // Σ over (b_1..b_n) with Σ b_i = b and Σ i b_i ≤ n of the multinomial is C(n, b).
        for n in 1..=12usize {
            let mut sums = vec![BigUint::zero(); n + 1];
            for tv in type_vectors(n, n) {
                let b: usize = tv.iter().sum();
                let parts: Vec<i64> = tv.iter().map(|&x| x as i64).collect();
                sums[b] += multinomial(&parts);
            }
            for (b, s) in sums.iter().enumerate() {
                assert_eq!(*s, binomial(n as i64, b as i64), "n={n} b={b}");
            }
        }
    }

    #[test]
    fn compositions_count() {
        assert_eq!(compositions(3, 2).len(), 4);
        assert_eq!(compositions(0, 3), vec![vec![0, 0, 0]]);
    }
}
