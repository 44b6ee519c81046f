//! Exact integer and rational primitives.
//!
//! Everything here works on arbitrary-precision values; nothing rounds and
//! nothing overflows. The prime machinery (trial division, Pollard rho,
//! Miller-Rabin) is sized for the inputs the family generators and the
//! solvability criteria produce, not for cryptographic integers.

use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_integer::{Integer as _, Roots};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Integer = BigInt;
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ArithError {
    #[error("cannot factorize zero")]
    ZeroInput,
    #[error("precondition violated: {0}")]
    PreconditionViolated(&'static str),
}

/// Trial division covers every prime below this bound before rho takes over.
const TRIAL_LIMIT: u64 = 1_000_000;

/// Miller-Rabin with these bases is deterministic below 3.3e24.
const MR_BASES: [u32; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

pub fn gcd3(x: &Integer, y: &Integer, z: &Integer) -> Integer {
    x.gcd(y).gcd(z)
}

/// Returns the integer cube root of `n` when `n` is a perfect cube.
pub fn is_perfect_cube(n: &Integer) -> Option<Integer> {
    let root = n.cbrt();
    if &(&root * &root * &root) == n {
        Some(root)
    } else {
        None
    }
}

/// Returns the non-negative square root of `n` when `n` is a perfect square.
pub fn is_perfect_square(n: &Integer) -> Option<Integer> {
    if n.is_negative() {
        return None;
    }
    let root = n.sqrt();
    if &(&root * &root) == n {
        Some(root)
    } else {
        None
    }
}

/// Square root of a rational, if it has one.
pub fn rational_sqrt(r: &Rational) -> Option<Rational> {
    let num = is_perfect_square(r.numer())?;
    let den = is_perfect_square(r.denom())?;
    Some(Rational::new(num, den))
}

/// Cube root of a rational, if it has one.
pub fn rational_cbrt(r: &Rational) -> Option<Rational> {
    let num = is_perfect_cube(r.numer())?;
    let den = is_perfect_cube(r.denom())?;
    Some(Rational::new(num, den))
}

/// Prime factorization of `|n|`.
///
/// Primes are strictly increasing and the product of `prime^multiplicity`
/// reconstructs `|n|`. The factorization of `1` is empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    factors: Vec<(Integer, u32)>,
}

impl Factorization {
    pub fn factors(&self) -> &[(Integer, u32)] {
        &self.factors
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn primes(&self) -> impl Iterator<Item = &Integer> {
        self.factors.iter().map(|(p, _)| p)
    }

    pub fn multiplicity(&self, prime: &Integer) -> u32 {
        self.factors
            .iter()
            .find(|(p, _)| p == prime)
            .map_or(0, |(_, m)| *m)
    }

    pub fn product(&self) -> Integer {
        self.factors
            .iter()
            .fold(Integer::one(), |acc, (p, m)| acc * num_traits::pow(p.clone(), *m as usize))
    }

    /// All positive divisors, in increasing order.
    pub fn divisors(&self) -> Vec<Integer> {
        let mut divs = alloc::vec![Integer::one()];
        for (p, m) in &self.factors {
            let mut next = Vec::with_capacity(divs.len() * (*m as usize + 1));
            for d in &divs {
                let mut power = d.clone();
                next.push(power.clone());
                for _ in 0..*m {
                    power *= p;
                    next.push(power.clone());
                }
            }
            divs = next;
        }
        divs.sort();
        divs
    }

    /// Positive `d` with `d^2` dividing the factored number.
    pub fn square_divisors(&self) -> Vec<Integer> {
        let halved = Factorization {
            factors: self
                .factors
                .iter()
                .filter(|(_, m)| *m >= 2)
                .map(|(p, m)| (p.clone(), m / 2))
                .collect(),
        };
        halved.divisors()
    }

    fn from_unsorted(mut primes: Vec<Integer>) -> Self {
        primes.sort();
        let mut factors: Vec<(Integer, u32)> = Vec::new();
        for p in primes {
            match factors.last_mut() {
                Some((q, m)) if *q == p => *m += 1,
                _ => factors.push((p, 1)),
            }
        }
        Factorization { factors }
    }
}

pub fn factorize(n: &Integer) -> Result<Factorization, ArithError> {
    if n.is_zero() {
        return Err(ArithError::ZeroInput);
    }
    let mut rest = n.magnitude().clone();
    let mut primes = Vec::new();

    for p in [2u64, 3] {
        while (&rest % p).is_zero() {
            rest /= p;
            primes.push(Integer::from(p));
        }
    }
    let mut d = 5u64;
    let mut step = 2u64;
    while d <= TRIAL_LIMIT {
        if BigUint::from(d * d) > rest {
            break;
        }
        while (&rest % d).is_zero() {
            rest /= d;
            primes.push(Integer::from(d));
        }
        d += step;
        step = 6 - step;
    }

    if !rest.is_one() {
        split_large(rest, &mut primes);
    }
    Ok(Factorization::from_unsorted(primes))
}

fn split_large(n: BigUint, out: &mut Vec<Integer>) {
    if n.is_one() {
        return;
    }
    if is_prime_unsigned(&n) {
        out.push(Integer::from(n));
        return;
    }
    if let Some(root) = perfect_power_root(&n) {
        // n = root^k; push each copy of root's factors k times
        let k = power_exponent(&n, &root);
        for _ in 0..k {
            split_large(root.clone(), out);
        }
        return;
    }
    let divisor = pollard_brent(&n);
    split_large(divisor.clone(), out);
    split_large(n / divisor, out);
}

fn perfect_power_root(n: &BigUint) -> Option<BigUint> {
    let bits = n.bits() as u32;
    for k in 2..=bits.max(2) {
        let r = n.nth_root(k);
        if r <= BigUint::one() {
            break;
        }
        if num_traits::pow(r.clone(), k as usize) == *n {
            return Some(r);
        }
    }
    None
}

fn power_exponent(n: &BigUint, root: &BigUint) -> u32 {
    let mut k = 0;
    let mut acc = BigUint::one();
    while &acc < n {
        acc *= root;
        k += 1;
    }
    k
}

/// Brent's variant of Pollard rho. `n` must be odd, composite and not a
/// perfect power.
fn pollard_brent(n: &BigUint) -> BigUint {
    let one = BigUint::one();
    for c in 1u32.. {
        let c = BigUint::from(c);
        let f = |v: &BigUint| (v * v + &c) % n;
        let mut y = BigUint::from(2u32);
        let mut r = 1u64;
        let mut q = BigUint::one();
        let mut g = BigUint::one();
        let mut x = y.clone();
        let mut ys = y.clone();
        let m = 128u64;
        while g == one {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g == one {
                ys = y.clone();
                for _ in 0..m.min(r - k) {
                    y = f(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = (q * diff) % n;
                }
                g = q.gcd(n);
                k += m;
            }
            r *= 2;
        }
        if &g == n {
            loop {
                ys = f(&ys);
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if g != one {
                    break;
                }
            }
        }
        if &g != n {
            return g;
        }
    }
    unreachable!("rho exhausted its increments")
}

pub fn is_prime(n: &Integer) -> bool {
    match n.to_biguint() {
        Some(u) => is_prime_unsigned(&u),
        None => false,
    }
}

fn is_prime_unsigned(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        if small < 2 {
            return false;
        }
        for p in MR_BASES {
            let p = u64::from(p);
            if small == p {
                return true;
            }
            if small % p == 0 {
                return false;
            }
        }
        if small < 43 * 43 {
            return true;
        }
    } else if MR_BASES.iter().any(|p| (n % *p).is_zero()) {
        return false;
    }

    let one = BigUint::one();
    let n_minus_one = n - &one;
    let mut d = n_minus_one.clone();
    let mut s = 0u32;
    while d.is_even() {
        d >>= 1;
        s += 1;
    }
    'bases: for base in MR_BASES {
        let mut x = BigUint::from(base).modpow(&d, n);
        if x == one || x == n_minus_one {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_one {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// `(F_n, L_n)`, computed by iterating the shared recurrence.
pub fn fibonacci_lucas(n: u64) -> (Integer, Integer) {
    let (mut f0, mut f1) = (Integer::zero(), Integer::one());
    let (mut l0, mut l1) = (Integer::from(2), Integer::one());
    for _ in 0..n {
        let f2 = &f0 + &f1;
        let l2 = &l0 + &l1;
        f0 = core::mem::replace(&mut f1, f2);
        l0 = core::mem::replace(&mut l1, l2);
    }
    (f0, l0)
}

fn check_prime_one_mod_three(q: u64) -> Result<(), ArithError> {
    if !is_prime(&Integer::from(q)) {
        return Err(ArithError::PreconditionViolated("Q must be prime"));
    }
    if q % 3 != 1 {
        return Err(ArithError::PreconditionViolated("Q must be 1 mod 3"));
    }
    Ok(())
}

/// Whether `s^3 = 4 (mod q)` has a solution, by scanning every residue.
pub fn cubic_residue_4(q: u64) -> Result<bool, ArithError> {
    check_prime_one_mod_three(q)?;
    let q = u128::from(q);
    Ok((0..q).any(|s| s * s % q * s % q == 4 % q))
}

/// Euler's criterion for cubic residues: for a prime `q = 1 (mod 3)`, 4 is a
/// cube mod `q` exactly when `4^((q-1)/3) = 1 (mod q)`.
pub fn cubic_residue_4_euler(q: &Integer) -> Result<bool, ArithError> {
    if !is_prime(q) {
        return Err(ArithError::PreconditionViolated("Q must be prime"));
    }
    if q.mod_floor(&Integer::from(3)) != Integer::one() {
        return Err(ArithError::PreconditionViolated("Q must be 1 mod 3"));
    }
    let exp = (q - 1u32) / 3u32;
    Ok(Integer::from(4).modpow(&exp, q).is_one())
}

/// The unique positive `(L, M)` with `4q = L^2 + 27 M^2`.
pub fn qlm_representation(q: u64) -> Result<(u64, u64), ArithError> {
    check_prime_one_mod_three(q)?;
    let four_q = 4 * u128::from(q);
    let mut m: u128 = 1;
    while 27 * m * m < four_q {
        let rest = four_q - 27 * m * m;
        let l = rest.sqrt();
        if l * l == rest {
            return Ok((l as u64, m as u64));
        }
        m += 1;
    }
    unreachable!("every prime q = 1 mod 3 has the form (L^2 + 27M^2)/4")
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    fn int(v: i64) -> Integer {
        Integer::from(v)
    }

    fn factors(n: i64) -> Vec<(i64, u32)> {
        factorize(&int(n))
            .unwrap()
            .factors()
            .iter()
            .map(|(p, m)| (p.to_i64().unwrap(), *m))
            .collect()
    }

    #[test]
    fn gcd3_cases() {
        assert_eq!(gcd3(&int(18), &int(-17), &int(-10)), int(1));
        assert_eq!(gcd3(&int(0), &int(0), &int(0)), int(0));
        assert_eq!(gcd3(&int(12), &int(-10), &int(-8)), int(2));
    }

    #[test]
    fn perfect_powers() {
        assert_eq!(is_perfect_cube(&int(-8)), Some(int(-2)));
        assert_eq!(is_perfect_cube(&int(8000)), Some(int(20)));
        assert_eq!(is_perfect_cube(&int(2)), None);
        assert_eq!(is_perfect_square(&int(49)), Some(int(7)));
        assert_eq!(is_perfect_square(&int(-4)), None);
        assert_eq!(is_perfect_square(&int(4489)), Some(int(67)));
    }

    #[test]
    fn factorize_examples() {
        assert_eq!(factors(32 - 27), vec![(5, 1)]);
        assert_eq!(factors(24), vec![(2, 3), (3, 1)]);
        assert_eq!(factors(2 * 67 * 67 - 27), vec![(8951, 1)]);
        assert_eq!(factors(-1), vec![]);
        assert_eq!(factorize(&int(0)), Err(ArithError::ZeroInput));
    }

    #[test]
    fn factorize_beyond_trial_division() {
        // two primes above the trial-division limit, and a square of one
        let p = int(1_000_003);
        let q = int(1_000_033);
        let f = factorize(&(&p * &q * &q)).unwrap();
        assert_eq!(f.factors(), &[(p, 1), (q, 2)]);

        let big = Integer::parse_bytes(b"170141183460469231731687303715884105727", 10).unwrap();
        let f = factorize(&(&big * 6)).unwrap();
        assert_eq!(f.factors().last().unwrap().0, big);
    }

    #[test]
    fn divisors_of_72() {
        let f = factorize(&int(72)).unwrap();
        let d: Vec<i64> = f.divisors().iter().map(|v| v.to_i64().unwrap()).collect();
        assert_eq!(d, vec![1, 2, 3, 4, 6, 8, 9, 12, 18, 24, 36, 72]);
        let s: Vec<i64> = f.square_divisors().iter().map(|v| v.to_i64().unwrap()).collect();
        assert_eq!(s, vec![1, 2, 3, 6]);
    }

    #[test]
    fn fibonacci_lucas_examples() {
        assert_eq!(fibonacci_lucas(1), (int(1), int(1)));
        assert_eq!(fibonacci_lucas(8), (int(21), int(47)));
        assert_eq!(fibonacci_lucas(3), (int(2), int(4)));
        assert_eq!(fibonacci_lucas(0), (int(0), int(2)));
    }

    #[test]
    fn fibonacci_lucas_identity() {
        for n in 0..=60u64 {
            let (f, l) = fibonacci_lucas(n);
            let sign = if n % 2 == 0 { 4 } else { -4 };
            assert_eq!(&l * &l - 5 * &f * &f, int(sign), "n = {n}");
        }
    }

    #[test]
    fn cubic_residue_examples() {
        assert_eq!(cubic_residue_4(7), Ok(false));
        assert_eq!(cubic_residue_4(13), Ok(false));
        assert_eq!(cubic_residue_4(31), Ok(true));
        assert!(matches!(cubic_residue_4(11), Err(ArithError::PreconditionViolated(_))));
        assert!(matches!(cubic_residue_4(25), Err(ArithError::PreconditionViolated(_))));
    }

    #[test]
    fn qlm_examples() {
        assert_eq!(qlm_representation(7), Ok((1, 1)));
        assert_eq!(qlm_representation(13), Ok((5, 1)));
        assert_eq!(qlm_representation(37), Ok((11, 1)));
        assert_eq!(qlm_representation(67), Ok((5, 3)));
        assert!(qlm_representation(5).is_err());
    }

    #[test]
    fn non_residue_forces_odd_representation() {
        for q in (7..1000u64).filter(|q| q % 3 == 1 && is_prime(&int(*q as i64))) {
            let residue = cubic_residue_4(q).unwrap();
            assert_eq!(residue, cubic_residue_4_euler(&int(q as i64)).unwrap());
            if !residue {
                let (l, m) = qlm_representation(q).unwrap();
                assert!(l % 2 == 1 && m % 2 == 1, "q = {q}: ({l}, {m})");
            }
        }
    }

    #[test]
    fn primality_agrees_with_sieve() {
        let limit = 20_000usize;
        let mut sieve = vec![true; limit];
        sieve[0] = false;
        sieve[1] = false;
        for i in 2..limit {
            if sieve[i] {
                for j in (i * i..limit).step_by(i) {
                    sieve[j] = false;
                }
            }
        }
        for (n, expected) in sieve.iter().enumerate() {
            assert_eq!(is_prime(&int(n as i64)), *expected, "n = {n}");
        }
    }

    proptest! {
        #[test]
        fn roots_of_powers(n in -1_000_000i64..1_000_000) {
            let v = int(n);
            prop_assert_eq!(is_perfect_cube(&(&v * &v * &v)), Some(v.clone()));
            prop_assert_eq!(is_perfect_square(&(&v * &v)), Some(v.abs()));
        }

        #[test]
        fn factorization_reconstructs(n in 1i64..i64::MAX) {
            let f = factorize(&int(n)).unwrap();
            prop_assert_eq!(f.product(), int(n));
            prop_assert!(f.primes().all(is_prime));
            let primes: Vec<_> = f.primes().collect();
            prop_assert!(primes.windows(2).all(|w| w[0] < w[1]));
        }
    }
}
