//! The groups Gamma_0(N)+S and their prime reductions.
//!
//! A group is written N+S where S is a set of exact divisors of N
//! (Q || N: Q | N and gcd(Q, N/Q) = 1) that is closed under the Hall
//! product Q1 * Q2 / gcd(Q1, Q2)^2 (with 1 omitted). [`Group::new`]
//! normalizes any seed set to its Hall closure.
//!
//! The p-reduction sends N+S to N^(p) + S^(p) with N^(p) = N / gcd(p, N)
//! and S^(p) = { Q in S : Q | N^(p) }; [`Group::reduce_m`] iterates this
//! over the prime factorization of m (with multiplicity), and the result is
//! independent of the order in which the primes are consumed.
//!
//! Text forms: `N` (empty S), `N+q1,q2,...`, and `N+` for the full set of
//! exact divisors greater than 1.

use crate::errors::Error;
use crate::Result;
use num_integer::Integer;
use serde::Serialize;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

/// Hall product of two exact divisors: Q1 * Q2 / gcd(Q1, Q2)^2.
fn hall(a: u64, b: u64) -> u64 {
    let g = a.gcd(&b);
    (a / g) * (b / g)
}

/// True if q is an exact divisor of n (q | n and gcd(q, n/q) = 1).
pub fn is_exact_divisor(q: u64, n: u64) -> bool {
    q >= 1 && n % q == 0 && q.gcd(&(n / q)) == 1
}

/// All exact divisors of n greater than 1, ascending.
pub fn exact_divisors(n: u64) -> Vec<u64> {
    (2..=n).filter(|&q| is_exact_divisor(q, n)).collect()
}

/// Prime factorization as (p, multiplicity) pairs, ascending p.
pub fn factorize(mut m: u64) -> Vec<(u64, u32)> {
    assert!(m >= 1);
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            let mut k = 0;
            while m % p == 0 {
                m /= p;
                k += 1;
            }
            out.push((p, k));
        }
        p += 1;
    }
    if m > 1 {
        out.push((m, 1));
    }
    out
}

/// A group Gamma_0(N)+S in normalized (Hall-closed) form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Group {
    n: u64,
    s: BTreeSet<u64>,
}

impl Group {
    /// Build N+S, checking each seed element is an exact divisor of N and
    /// closing the set under the Hall product. The element 1 is dropped.
    pub fn new(n: u64, seed: &[u64]) -> Result<Group> {
        assert!(n >= 1);
        let mut s: BTreeSet<u64> = BTreeSet::new();
        for &q in seed {
            if !is_exact_divisor(q, n) {
                return Err(Error::NotExactDivisor { q, n });
            }
            if q > 1 {
                s.insert(q);
            }
        }
        // Hall closure: repeat pairwise products until stable.
        loop {
            let mut added = false;
            let items: Vec<u64> = s.iter().copied().collect();
            for (i, &a) in items.iter().enumerate() {
                for &b in &items[i + 1..] {
                    let h = hall(a, b);
                    if h > 1 && s.insert(h) {
                        added = true;
                    }
                }
            }
            if !added {
                break;
            }
        }
        Ok(Group { n, s })
    }

    /// Gamma_0(N) with empty S.
    pub fn gamma0(n: u64) -> Group {
        Group {
            n,
            s: BTreeSet::new(),
        }
    }

    /// The level N.
    pub fn level(&self) -> u64 {
        self.n
    }

    /// The normalized Atkin-Lehner set S (sorted, 1 excluded).
    pub fn s(&self) -> &BTreeSet<u64> {
        &self.s
    }

    /// True if S contains every exact divisor of N greater than 1.
    pub fn is_full(&self) -> bool {
        !self.s.is_empty() && self.s.len() == exact_divisors(self.n).len()
    }

    /// The p-reduction N^(p) + S^(p): N^(p) = N / gcd(p, N) and
    /// S^(p) = { Q in S : Q | N^(p) }. For p not dividing N this is the
    /// group itself.
    pub fn reduce_p(&self, p: u64) -> Group {
        let np = self.n / self.n.gcd(&p);
        let s = self.s.iter().copied().filter(|q| np % q == 0).collect();
        Group { n: np, s }
    }

    /// Iterated reduction over the prime factorization of m (with
    /// multiplicity). Order-independent.
    pub fn reduce_m(&self, m: u64) -> Group {
        assert!(m >= 1);
        let mut g = self.clone();
        for (p, k) in factorize(m) {
            for _ in 0..k {
                g = g.reduce_p(p);
            }
        }
        g
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.s.is_empty() {
            write!(f, "{}", self.n)
        } else if self.is_full() {
            write!(f, "{}+", self.n)
        } else {
            let parts: Vec<String> = self.s.iter().map(|q| q.to_string()).collect();
            write!(f, "{}+{}", self.n, parts.join(","))
        }
    }
}

impl FromStr for Group {
    type Err = Error;

    /// Parses `N`, `N+`, or `N+q1,q2,...` (and normalizes).
    fn from_str(text: &str) -> Result<Group> {
        let t = text.trim();
        let (n_part, s_part) = match t.split_once('+') {
            Some((n, s)) => (n, Some(s)),
            None => (t, None),
        };
        let n: u64 = n_part
            .trim()
            .parse()
            .map_err(|e| Error::GroupParse(format!("bad level {n_part:?}: {e}")))?;
        if n == 0 {
            return Err(Error::GroupParse("level must be positive".into()));
        }
        let seed: Vec<u64> = match s_part {
            None => Vec::new(),
            Some(s) if s.trim().is_empty() => exact_divisors(n),
            Some(s) => s
                .split(',')
                .map(|q| {
                    q.trim()
                        .parse::<u64>()
                        .map_err(|e| Error::GroupParse(format!("bad divisor {q:?}: {e}")))
                })
                .collect::<Result<Vec<u64>>>()?,
        };
        Group::new(n, &seed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hall_closure() {
        // 30 + {2, 3} closes to {2, 3, 6}.
        let g = Group::new(30, &[2, 3]).unwrap();
        assert_eq!(g.s().iter().copied().collect::<Vec<_>>(), vec![2, 3, 6]);
        // The closure is idempotent and drops 1.
        let g2 = Group::new(30, &[2, 3, 6, 1]).unwrap();
        assert_eq!(g, g2);
    }

    #[test]
    fn exact_divisor_check() {
        assert!(is_exact_divisor(2, 22));
        assert!(is_exact_divisor(11, 22));
        assert!(is_exact_divisor(22, 22));
        assert!(!is_exact_divisor(4, 8)); // gcd(4, 2) != 1
        assert!(matches!(
            Group::new(22, &[4]),
            Err(Error::NotExactDivisor { q: 4, n: 22 })
        ));
    }

    #[test]
    fn reduction_rules() {
        let g: Group = "22+2".parse().unwrap();
        // 22+2 reduced at 2 drops both the 2 in the level and the divisor 2.
        assert_eq!(g.reduce_p(2), Group::gamma0(11));
        // reduced at 11, the divisor 2 survives.
        assert_eq!(g.reduce_p(11), "2+2".parse().unwrap());
        // reducing at a prime not dividing the level is the identity.
        assert_eq!(g.reduce_p(7), g);
        // full reduction in either order.
        assert_eq!(g.reduce_m(22), Group::gamma0(1));
        assert_eq!(g.reduce_p(2).reduce_p(11), g.reduce_p(11).reduce_p(2));
        // with multiplicity: only one factor of p is removed per step,
        // but the level loses p entirely at the first step.
        assert_eq!(Group::gamma0(22).reduce_m(4), Group::gamma0(11));
    }

    #[test]
    fn display_and_parse() {
        for label in ["1", "2", "11", "22", "22+2", "30+2,3,6"] {
            let g: Group = label.parse().unwrap();
            assert_eq!(g.to_string(), label);
        }
        // "11+" is the full Fricke set {11}.
        let g: Group = "11+".parse().unwrap();
        assert_eq!(g.s().iter().copied().collect::<Vec<_>>(), vec![11]);
        assert_eq!(g.to_string(), "11+");
        // normalization on parse
        let g: Group = "30+2,3".parse().unwrap();
        assert_eq!(g.to_string(), "30+2,3,6");
        // "2+2" is the full set at level 2, so it prints as "2+".
        let g: Group = "2+2".parse().unwrap();
        assert_eq!(g.to_string(), "2+");
    }

    #[test]
    fn factorize_works() {
        assert_eq!(factorize(1), vec![]);
        assert_eq!(factorize(22), vec![(2, 1), (11, 1)]);
        assert_eq!(factorize(152), vec![(2, 3), (19, 1)]);
    }
}
