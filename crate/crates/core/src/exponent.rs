//! Prime-exponent vectors and the never-connect test.
//!
//! Small primes are removed by trial division. Whatever cofactors remain are
//! split into a pairwise coprime base by gcd refinement, which is enough to
//! make the representation unique without factoring large numbers.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::rational::Rational;

const TRIAL_LIMIT: u32 = 1000;

/// Exponents of a positive rational over a pairwise coprime base.
///
/// For small factors the base elements are primes. Large cofactors that were
/// not split further appear as composite keys, still coprime to every other key.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ExponentVector {
    pub exponents: BTreeMap<BigUint, i64>,
}

impl ExponentVector {
    /// Vector of a single positive rational.
    pub fn of(r: &Rational) -> Self {
        exponent_vectors(std::slice::from_ref(r)).remove(0)
    }

    pub fn is_zero(&self) -> bool {
        self.exponents.values().all(|&e| e == 0)
    }

    pub fn get(&self, base: &BigUint) -> i64 {
        self.exponents.get(base).copied().unwrap_or(0)
    }

    /// Recompute the rational `∏ base^e`.
    pub fn reconstruct(&self) -> Rational {
        let mut num = BigUint::one();
        let mut den = BigUint::one();
        for (base, &e) in &self.exponents {
            let p = num_traits::pow(base.clone(), e.unsigned_abs() as usize);
            if e >= 0 {
                num *= p;
            } else {
                den *= p;
            }
        }
        Rational::new(num, den)
    }
}

fn small_primes() -> Vec<u32> {
    let mut sieve = vec![true; TRIAL_LIMIT as usize + 1];
    let mut primes = Vec::new();
    for i in 2..=TRIAL_LIMIT as usize {
        if sieve[i] {
            primes.push(i as u32);
            let mut j = i * i;
            while j <= TRIAL_LIMIT as usize {
                sieve[j] = false;
                j += i;
            }
        }
    }
    primes
}

fn strip_small(
    mut n: BigUint,
    primes: &[u32],
    out: &mut BTreeMap<BigUint, i64>,
    sign: i64,
) -> BigUint {
    for &p in primes {
        let bp = BigUint::from(p);
        let mut e = 0i64;
        loop {
            let (q, r) = n.div_rem(&bp);
            if !r.is_zero() {
                break;
            }
            n = q;
            e += 1;
        }
        if e > 0 {
            *out.entry(bp).or_insert(0) += sign * e;
        }
        if n.is_one() {
            break;
        }
    }
    n
}

fn coprime_base(values: &[BigUint]) -> Vec<BigUint> {
    let mut base: Vec<BigUint> = values.iter().filter(|v| !v.is_one()).cloned().collect();
    base.sort();
    base.dedup();
    'outer: loop {
        for i in 0..base.len() {
            for j in i + 1..base.len() {
                let g = base[i].gcd(&base[j]);
                if !g.is_one() {
                    let a = &base[i] / &g;
                    let b = &base[j] / &g;
                    base.remove(j);
                    base.remove(i);
                    for v in [a, b, g] {
                        if !v.is_one() {
                            base.push(v);
                        }
                    }
                    base.sort();
                    base.dedup();
                    continue 'outer;
                }
            }
        }
        return base;
    }
}

fn divide_out(mut n: BigUint, base: &[BigUint], out: &mut BTreeMap<BigUint, i64>, sign: i64) {
    for b in base {
        let mut e = 0i64;
        loop {
            let (q, r) = n.div_rem(b);
            if !r.is_zero() {
                break;
            }
            n = q;
            e += 1;
        }
        if e > 0 {
            *out.entry(b.clone()).or_insert(0) += sign * e;
        }
    }
    debug_assert!(n.is_one(), "coprime base does not cover cofactor");
}

/// Exponent vectors of several positive rationals over one shared coprime base.
pub fn exponent_vectors(values: &[Rational]) -> Vec<ExponentVector> {
    let primes = small_primes();
    let mut partial = Vec::with_capacity(values.len());
    let mut cofactors = Vec::new();
    for r in values {
        assert!(r.is_positive(), "exponent vector of non-positive rational");
        let (num, den) = r.parts_unsigned();
        let mut map = BTreeMap::new();
        let n = strip_small(num, &primes, &mut map, 1);
        let d = strip_small(den, &primes, &mut map, -1);
        cofactors.push(n.clone());
        cofactors.push(d.clone());
        partial.push((map, n, d));
    }
    let base = coprime_base(&cofactors);
    partial
        .into_iter()
        .map(|(mut map, n, d)| {
            divide_out(n, &base, &mut map, 1);
            divide_out(d, &base, &mut map, -1);
            map.retain(|_, e| *e != 0);
            ExponentVector { exponents: map }
        })
        .collect()
}

/// True iff `r^k = rho^l` has no solution other than `k = l = 0`.
///
/// Equivalent to the exponent vectors of `r` and `rho` being linearly
/// independent. The ordering `r < 1 < rho` is not checked here.
pub fn never_connect(r: &Rational, rho: &Rational) -> bool {
    let v = exponent_vectors(&[r.clone(), rho.clone()]);
    let (a, b) = (&v[0], &v[1]);
    if a.is_zero() || b.is_zero() {
        return false;
    }
    let keys: Vec<&BigUint> = a.exponents.keys().chain(b.exponents.keys()).collect();
    for (i, p) in keys.iter().enumerate() {
        for q in &keys[i + 1..] {
            let minor = a.get(p) as i128 * b.get(q) as i128 - a.get(q) as i128 * b.get(p) as i128;
            if minor != 0 {
                return true;
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn reconstructs_exactly() {
        for r in [q(1, 2), q(12, 35), q(1, 1), q(1024, 729)] {
            assert_eq!(ExponentVector::of(&r).reconstruct(), r);
        }
    }

    #[test]
    fn large_cofactors_are_split_by_gcd() {
        let p1 = Rational::from_integer(1_000_003u64);
        let p2 = Rational::from_integer(1_000_033u64);
        let a = &p1 * &p2;
        let b = &p1 * &p1;
        assert!(never_connect(&a, &b));
        assert!(!never_connect(
            &(&a * &a),
            &(&(&p1 * &p1) * &(&p2 * &p2)).recip()
        ));
        let v = exponent_vectors(&[a.clone(), b.clone()]);
        assert_eq!(v[0].reconstruct(), a);
        assert_eq!(v[1].reconstruct(), b);
    }

    #[test]
    fn unit_never_connects_with_nothing() {
        assert!(!never_connect(&q(1, 1), &q(3, 1)));
    }
}
