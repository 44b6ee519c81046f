//! Exact integer roots of integer polynomials of degree at most three.
//!
//! The interval is cut at brackets around the critical points; in between
//! the polynomial is strictly monotone, so a sign change is bisected down to
//! the unique crossing and checked for an exact zero. Works for any integer
//! type, which lets the search loop stay on `i128` while the elliptic code
//! uses `BigInt`.

use alloc::vec::Vec;

use num_integer::{Integer, Roots};
use num_traits::Signed;

pub(crate) trait Int: Clone + Ord + Integer + Signed + Roots + From<i32> {}

impl<T: Clone + Ord + Integer + Signed + Roots + From<i32>> Int for T {}

/// Coefficients from the constant term up: `c[0] + c[1] z + c[2] z^2 + c[3] z^3`.
pub(crate) type Cubic<T> = [T; 4];

pub(crate) fn eval<T: Int>(c: &Cubic<T>, z: &T) -> T {
    ((c[3].clone() * z.clone() + c[2].clone()) * z.clone() + c[1].clone()) * z.clone()
        + c[0].clone()
}

fn ceil_div<T: Int>(n: T, d: &T) -> T {
    -((-n).div_floor(d))
}

/// Integer interval guaranteed to contain the real number `n/d` for every
/// `n` in `[n_lo, n_hi]`.
fn bracket<T: Int>(n_lo: T, n_hi: T, d: &T) -> (T, T) {
    let (a, b) = if d.is_negative() { (n_hi, n_lo) } else { (n_lo, n_hi) };
    (a.div_floor(d), ceil_div(b, d))
}

fn critical_brackets<T: Int>(c: &Cubic<T>) -> Vec<(T, T)> {
    let zero = T::zero();
    let mut out = Vec::new();
    if c[3] != zero {
        // f'(z) = 3c3 z^2 + 2c2 z + c1, roots (-c2 +- sqrt(c2^2 - 3c3c1)) / 3c3
        let disc = c[2].clone() * c[2].clone() - T::from(3) * c[3].clone() * c[1].clone();
        if disc.is_negative() {
            return out;
        }
        let s = disc.sqrt();
        let den = T::from(3) * c[3].clone();
        let minus_c2 = -c[2].clone();
        out.push(bracket(
            minus_c2.clone() + s.clone(),
            minus_c2.clone() + s.clone() + T::one(),
            &den,
        ));
        out.push(bracket(
            minus_c2.clone() - s.clone() - T::one(),
            minus_c2 - s,
            &den,
        ));
    } else if c[2] != zero {
        let den = T::from(2) * c[2].clone();
        let n = -c[1].clone();
        out.push(bracket(n.clone(), n, &den));
    }
    out.sort();
    out
}

fn monotone_piece<T: Int>(c: &Cubic<T>, lo: T, hi: T, out: &mut Vec<T>) {
    let f_lo = eval(c, &lo);
    if f_lo.is_zero() {
        out.push(lo.clone());
    }
    if lo == hi {
        return;
    }
    let f_hi = eval(c, &hi);
    if f_hi.is_zero() {
        out.push(hi);
        return;
    }
    if f_lo.is_zero() || f_lo.signum() == f_hi.signum() {
        return;
    }
    let lo_sign = f_lo.signum();
    let (mut l, mut r) = (lo, hi);
    while r.clone() - l.clone() > T::one() {
        let m = l.clone() + (r.clone() - l.clone()).div_floor(&T::from(2));
        let f_m = eval(c, &m);
        if f_m.is_zero() {
            out.push(m);
            return;
        }
        if f_m.signum() == lo_sign {
            l = m;
        } else {
            r = m;
        }
    }
}

/// All integer roots in `[lo, hi]`, ascending. `None` when the polynomial
/// vanishes identically.
pub(crate) fn integer_roots_in<T: Int>(c: &Cubic<T>, lo: T, hi: T) -> Option<Vec<T>> {
    if c.iter().all(|v| v.is_zero()) {
        return None;
    }
    let mut out = Vec::new();
    if lo > hi {
        return Some(out);
    }
    let mut cursor = lo;
    for (b_lo, b_hi) in critical_brackets(c) {
        if b_hi < cursor || b_lo > hi {
            continue;
        }
        if b_lo > cursor {
            monotone_piece(c, cursor.clone(), b_lo.clone() - T::one(), &mut out);
            cursor = b_lo;
        }
        let end = if b_hi < hi { b_hi } else { hi.clone() };
        while cursor <= end {
            if eval(c, &cursor).is_zero() {
                out.push(cursor.clone());
            }
            cursor = cursor + T::one();
        }
    }
    if cursor <= hi {
        monotone_piece(c, cursor, hi, &mut out);
    }
    Some(out)
}

/// Every integer root, using the Cauchy bound on the root magnitude.
pub(crate) fn integer_roots<T: Int>(c: &Cubic<T>) -> Option<Vec<T>> {
    let lead = c.iter().rposition(|v| !v.is_zero())?;
    if lead == 0 {
        return Some(Vec::new());
    }
    let lead_abs = c[lead].abs();
    let max_lower = c[..lead]
        .iter()
        .map(|v| v.abs())
        .max_by(|a, b| a.cmp(b))
        .unwrap_or_else(T::zero);
    let bound = max_lower.div_floor(&lead_abs) + T::one();
    integer_roots_in(c, -bound.clone(), bound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    fn from_roots(r: [i128; 3], lead: i128) -> Cubic<i128> {
        let [a, b, c] = r;
        [
            -lead * a * b * c,
            lead * (a * b + b * c + a * c),
            -lead * (a + b + c),
            lead,
        ]
    }

    #[test]
    fn simple_cubic() {
        let c = from_roots([-3, 1, 7], 2);
        assert_eq!(integer_roots_in(&c, -10, 10), Some(vec![-3, 1, 7]));
        assert_eq!(integer_roots_in(&c, 0, 5), Some(vec![1]));
        assert_eq!(integer_roots(&c), Some(vec![-3, 1, 7]));
    }

    #[test]
    fn repeated_and_rational_roots() {
        // (z - 2)^2 (3z + 1)
        let c: Cubic<i128> = [4, 8, -11, 3];
        assert_eq!(integer_roots(&c), Some(vec![2]));
    }

    #[test]
    fn lower_degrees() {
        assert_eq!(integer_roots_in(&[6i128, -5, 1, 0], -10, 10), Some(vec![2, 3]));
        assert_eq!(integer_roots_in(&[6i128, -3, 0, 0], -10, 10), Some(vec![2]));
        assert_eq!(integer_roots_in(&[5i128, 0, 0, 0], -10, 10), Some(vec![]));
        assert_eq!(integer_roots_in(&[0i128, 0, 0, 0], -10, 10), None);
    }

    #[test]
    fn bigint_agrees() {
        let c = [-30, 31, -10, 1].map(BigInt::from);
        assert_eq!(
            integer_roots(&c),
            Some(vec![BigInt::from(2), BigInt::from(3), BigInt::from(5)])
        );
    }

    proptest! {
        #[test]
        fn finds_exactly_the_planted_roots(
            r in proptest::array::uniform3(-500i128..500),
            lead in prop_oneof![-7i128..=-1, 1i128..=7],
            lo in -600i128..0,
            hi in 0i128..600,
        ) {
            let c = from_roots(r, lead);
            let mut expected: Vec<i128> = r.iter().copied().filter(|v| *v >= lo && *v <= hi).collect();
            expected.sort();
            expected.dedup();
            prop_assert_eq!(integer_roots_in(&c, lo, hi), Some(expected));
        }

        #[test]
        fn matches_brute_force(
            c in proptest::array::uniform4(-60i128..60),
        ) {
            prop_assume!(c.iter().any(|v| *v != 0));
            let brute: Vec<i128> = (-200..=200).filter(|z| eval(&c, z) == 0).collect();
            prop_assert_eq!(integer_roots_in(&c, -200, 200), Some(brute));
        }
    }
}
