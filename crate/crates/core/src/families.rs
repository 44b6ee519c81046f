//! Parametric solution generators.
//!
//! Every generator evaluates its closed-form triple, checks it against the
//! coefficient exactly, and returns both the raw triple and its reduced
//! canonical class.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};

use crate::arith::{fibonacci_lucas, is_perfect_cube, Integer, Rational};
use crate::model::{canonicalize, is_primitive, is_solution, CanonicalTriple, Coefficient, Triple};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FamilyId {
    CubeRatio,
    Frac5q2,
    FibonacciLucas,
    Frac2p2q2,
    CubicFrac,
    RsUniversal,
    MinusFour3q2,
    ReciprocalInteger,
    TwoVariable,
    A9General,
    A9Mu,
    SquareCube,
    SquareFib,
}

impl FamilyId {
    pub const ALL: [FamilyId; 13] = [
        FamilyId::CubeRatio,
        FamilyId::Frac5q2,
        FamilyId::FibonacciLucas,
        FamilyId::Frac2p2q2,
        FamilyId::CubicFrac,
        FamilyId::RsUniversal,
        FamilyId::MinusFour3q2,
        FamilyId::ReciprocalInteger,
        FamilyId::TwoVariable,
        FamilyId::A9General,
        FamilyId::A9Mu,
        FamilyId::SquareCube,
        FamilyId::SquareFib,
    ];

    /// Short name used on the command line.
    pub fn name(self) -> &'static str {
        match self {
            FamilyId::CubeRatio => "cube",
            FamilyId::Frac5q2 => "frac5q2",
            FamilyId::FibonacciLucas => "fib",
            FamilyId::Frac2p2q2 => "frac2p2q2",
            FamilyId::CubicFrac => "cubicfrac",
            FamilyId::RsUniversal => "rs",
            FamilyId::MinusFour3q2 => "minus4",
            FamilyId::ReciprocalInteger => "recip",
            FamilyId::TwoVariable => "twovar",
            FamilyId::A9General => "a9",
            FamilyId::A9Mu => "a9mu",
            FamilyId::SquareCube => "square-cube",
            FamilyId::SquareFib => "square-fib",
        }
    }

    /// Number of parameters the generator takes.
    pub fn arity(self) -> usize {
        match self {
            FamilyId::FibonacciLucas
            | FamilyId::MinusFour3q2
            | FamilyId::A9Mu
            | FamilyId::SquareCube
            | FamilyId::SquareFib => 1,
            _ => 2,
        }
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyId {
    type Err = FamilyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FamilyId::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| FamilyError::UnknownFamily(s.into()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FamilyError {
    #[error("excluded parameters: {0}")]
    ExcludedParameters(String),
    #[error("parameters outside the canonical domain (canonical pair: {canonical:?})")]
    NonCanonicalParameters { canonical: Option<(Integer, Integer)> },
    #[error("unknown family {0:?}")]
    UnknownFamily(String),
}

fn excluded<T>(why: &str) -> Result<T, FamilyError> {
    Err(FamilyError::ExcludedParameters(why.into()))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilySolution {
    pub family: FamilyId,
    pub params: Vec<Rational>,
    pub a: Coefficient,
    pub raw: Triple,
    pub primitive: CanonicalTriple,
    pub is_primitive: bool,
}

fn int(v: i64) -> Integer {
    Integer::from(v)
}

fn rat(v: &Integer) -> Rational {
    Rational::from_integer(v.clone())
}

fn finish(
    family: FamilyId,
    params: Vec<Rational>,
    a: Coefficient,
    raw: Triple,
) -> Result<FamilySolution, FamilyError> {
    if a.is_zero() {
        return excluded("the coefficient vanishes");
    }
    if raw.is_zero() {
        return excluded("the triple vanishes");
    }
    assert!(
        is_solution(&a, &raw),
        "{family} generator produced {raw}, which does not solve a = {a}"
    );
    let primitive = canonicalize(&raw.reduced());
    let is_primitive = is_primitive(&a, &primitive.triple);
    Ok(FamilySolution {
        family,
        params,
        a,
        raw,
        primitive,
        is_primitive,
    })
}

fn coefficient(num: Integer, den: Integer) -> Result<Coefficient, FamilyError> {
    if den.is_zero() {
        return excluded("x^3 + y^3 + z^3 vanishes");
    }
    Ok(Coefficient::ratio(num, den))
}

/// `a = p^3 / q^3`.
pub fn cube_family(p: impl Into<Integer>, q: impl Into<Integer>) -> Result<FamilySolution, FamilyError> {
    let (p, q) = (p.into(), q.into());
    if q.is_zero() {
        return excluded("q = 0");
    }
    if p.is_zero() {
        return excluded("p = 0 gives a = 0");
    }
    if p == q {
        return excluded("p = q gives a = 1");
    }
    if p == int(-2) * &q {
        return excluded("q/p = -1/2");
    }
    let (p2, q2, pq) = (&p * &p, &q * &q, &p * &q);
    let x = (&p + int(2) * &q) * (&p2 + &pq + int(4) * &q2);
    let y = int(-3) * &q * (&p2 + int(2) * &pq + int(3) * &q2);
    let z = -(&p2 * &p) - int(3) * &p2 * &q - int(6) * &p * &q2 + &q2 * &q;
    let a = Coefficient::ratio(&p2 * &p, &q2 * &q);
    finish(FamilyId::CubeRatio, vec![rat(&p), rat(&q)], a, Triple::new(x, y, z))
}

/// `a = 4q^2 / (p^2 - 5q^2)`.
pub fn frac_family_5q2(p: impl Into<Integer>, q: impl Into<Integer>) -> Result<FamilySolution, FamilyError> {
    let (p, q) = (p.into(), q.into());
    if q.is_zero() {
        return excluded("q = 0");
    }
    if !p.gcd(&q).is_one() {
        return excluded("p and q are not coprime");
    }
    let (pa, qa) = (p.abs(), q.abs());
    if pa == int(3) * &qa {
        return excluded("p/q = +-3");
    }
    if pa == int(9) * &qa {
        return excluded("p/q = +-9");
    }
    let x = int(12) * &q;
    let y = -&p - int(9) * &q;
    let z = &p - int(9) * &q;
    let a = coefficient(int(4) * &q * &q, &p * &p - int(5) * &q * &q)?;
    finish(FamilyId::Frac5q2, vec![rat(&p), rat(&q)], a, Triple::new(x, y, z))
}

/// `a = (-1)^n F_n^2`.
pub fn fibonacci_family(n: u64) -> Result<FamilySolution, FamilyError> {
    if n == 0 {
        return excluded("n = 0 gives a = 0");
    }
    if n == 2 {
        return excluded("n = 2 is not allowed (p/q = 3)");
    }
    let (f, _) = fibonacci_lucas(n);
    let (f_prev, _) = fibonacci_lucas(n - 1);
    let x = int(6) * &f;
    let y = int(-5) * &f - &f_prev;
    let z = int(-4) * &f + &f_prev;
    let sq = &f * &f;
    let a = Coefficient::integer(if n.is_multiple_of(2) { sq } else { -sq });
    finish(FamilyId::FibonacciLucas, vec![rat(&int(n as i64))], a, Triple::new(x, y, z))
}

/// `a = 9q^2 / (2p^2 + q^2)`.
pub fn frac_family_2p2q2(p: impl Into<Integer>, q: impl Into<Integer>) -> Result<FamilySolution, FamilyError> {
    let (p, q) = (p.into(), q.into());
    if q.is_zero() {
        return excluded("q = 0");
    }
    if !p.gcd(&q).is_one() {
        return excluded("p and q are not coprime");
    }
    let (pa, qa) = (p.abs(), q.abs());
    if pa == qa {
        return excluded("p/q = +-1");
    }
    if pa == int(2) * &qa {
        return excluded("p/q = +-2");
    }
    let x = &p + &q;
    let y = q.clone();
    let z = -&p + &q;
    let a = coefficient(int(9) * &q * &q, int(2) * &p * &p + &q * &q)?;
    finish(FamilyId::Frac2p2q2, vec![rat(&p), rat(&q)], a, Triple::new(x, y, z))
}

/// `a = p^2 (2p + q) / (2p^3 + p^2 q - 6q^3)`.
pub fn cubic_frac_family(p: impl Into<Integer>, q: impl Into<Integer>) -> Result<FamilySolution, FamilyError> {
    let (p, q) = (p.into(), q.into());
    if p.is_zero() || q.is_zero() {
        return excluded("p = 0 or q = 0");
    }
    if !p.gcd(&q).is_one() {
        return excluded("p and q are not coprime");
    }
    if q == -&p {
        return excluded("-q/p = 1");
    }
    if q == int(-2) * &p {
        return excluded("-q/p = 2");
    }
    if int(3) * &q == int(-2) * &p {
        return excluded("-q/p = 2/3");
    }
    let p2 = &p * &p;
    let x = (&p + &q) * (int(2) * &p + &q);
    let y = -&p * (int(2) * &p + int(3) * &q);
    let z = int(-2) * &p2 - &p * &q - &q * &q;
    let a = coefficient(
        &p2 * (int(2) * &p + &q),
        int(2) * &p2 * &p + &p2 * &q - int(6) * &q * &q * &q,
    )?;
    finish(FamilyId::CubicFrac, vec![rat(&p), rat(&q)], a, Triple::new(x, y, z))
}

/// The universal parametrization `a = (s + 2)^3 / (6r^2 + s^3 + 2)`.
pub fn rs_family(r: &Rational, s: &Rational) -> Result<FamilySolution, FamilyError> {
    let one = Rational::one();
    if s.is_zero() {
        return excluded("s = 0");
    }
    if r.abs() == one {
        return excluded("|r| = 1");
    }
    if *r == s + &one || *r == -(s + &one) {
        return excluded("r = +-(s + 1)");
    }
    if *s == Rational::from_integer(int(-2)) {
        return excluded("s = -2 gives a = 0");
    }
    let (r1, r2) = (r.numer(), r.denom());
    let (s1, s2) = (s.numer(), s.denom());
    let x = s1 * r2;
    let y = s2 * (r2 + r1);
    let z = s2 * (r2 - r1);
    let a = crate::model::a_from_rs(r, s)
        .ok_or_else(|| FamilyError::ExcludedParameters("6r^2 + s^3 + 2 = 0".into()))?;
    finish(FamilyId::RsUniversal, vec![r.clone(), s.clone()], a, Triple::new(x, y, z))
}

/// `a = -4 (3q^2 - 1)^3`, the `(r, s) = (-6q^3, -6q^2)` slice of [`rs_family`].
pub fn minus_four_family(q: impl Into<Integer>) -> Result<FamilySolution, FamilyError> {
    let q = q.into();
    if q.is_zero() {
        return excluded("q = 0");
    }
    let q2 = &q * &q;
    let r = rat(&(int(-6) * &q2 * &q));
    let s = rat(&(int(-6) * &q2));
    let mut sol = rs_family(&r, &s)?;
    sol.family = FamilyId::MinusFour3q2;
    sol.params = vec![rat(&q)];
    Ok(sol)
}

/// `1/a = 6q (p^2 - (q - 1)^2) + 1`.
pub fn reciprocal_integer_family(
    p: impl Into<Integer>,
    q: impl Into<Integer>,
) -> Result<FamilySolution, FamilyError> {
    let (p, q) = (p.into(), q.into());
    if q.is_zero() {
        return excluded("q = 0");
    }
    if q == p || q == -&p {
        return excluded("q = +-p");
    }
    if q == int(1) + &p || q == int(1) - &p {
        return excluded("q = 1 +- p");
    }
    let qm = &q - int(1);
    let inv = int(6) * &q * (&p * &p - &qm * &qm) + int(1);
    let raw = Triple::new(int(1) - int(2) * &q, &p + &q, -&p + &q);
    let a = Coefficient::ratio(int(1), inv);
    finish(FamilyId::ReciprocalInteger, vec![rat(&p), rat(&q)], a, raw)
}

/// `a = 4 / (1 + 3 alpha^2)` with `alpha = q/p`; the triple has `z = 0`, so
/// it is never primitive.
pub fn two_variable_family(
    p: impl Into<Integer>,
    q: impl Into<Integer>,
) -> Result<FamilySolution, FamilyError> {
    let (p, q) = (p.into(), q.into());
    if p.is_zero() {
        return excluded("p = 0");
    }
    if q == p || q == -&p {
        return excluded("alpha = +-1");
    }
    let a = Coefficient::ratio(int(4) * &p * &p, &p * &p + int(3) * &q * &q);
    let raw = Triple::new(&p + &q, &p - &q, int(0));
    finish(FamilyId::TwoVariable, vec![rat(&p), rat(&q)], a, raw)
}

fn a9_triple(l1: &Integer, l2: &Integer) -> Triple {
    if l1.is_zero() && l2.is_zero() {
        return Triple::new(1, 1, 1);
    }
    let c1 = l1 * l1 * l1;
    let c2 = l2 * l2 * l2;
    let s = l1 + l2;
    let c3 = &s * &s * &s;
    let two = int(2);
    Triple::new(
        (&c1 + &c2 + &c3) / &two,
        (&c2 - &c3 - &c1) / &two,
        (&c1 - &c2 - &c3) / &two,
    )
}

/// The canonical pair equivalent to `(l1, l2)` under the symmetries of the
/// a = 9 solution, or `None` when the pair only yields vectorlike triples.
pub fn a9_canonical_pair(l1: &Integer, l2: &Integer) -> Option<(Integer, Integer)> {
    if l1.is_zero() && l2.is_zero() {
        return Some((int(0), int(0)));
    }
    let g = l1.gcd(l2);
    let (l1, l2) = (l1 / &g, l2 / &g);
    // the pairwise sums are the cubes of l2, l1 and -(l1 + l2)
    let mut roots = [l2.clone(), l1.clone(), -(&l1 + &l2)];
    if roots.iter().any(Zero::is_zero) {
        return None;
    }
    if roots.iter().filter(|v| v.is_negative()).count() > 1 {
        roots = roots.map(|v| -v);
    }
    let mut positive: Vec<Integer> = roots.into_iter().filter(Signed::is_positive).collect();
    positive.sort();
    Some((positive[1].clone(), positive[0].clone()))
}

/// The a = 9 general solution on its canonical domain:
/// `l1 >= l2 >= 1` with `gcd(l1, l2) = 1`, or `(0, 0)`.
pub fn a9_general(l1: impl Into<Integer>, l2: impl Into<Integer>) -> Result<FamilySolution, FamilyError> {
    let (l1, l2) = (l1.into(), l2.into());
    let origin = l1.is_zero() && l2.is_zero();
    let canonical = origin || (l2 >= int(1) && l1 >= l2 && l1.gcd(&l2).is_one());
    if !canonical {
        return Err(FamilyError::NonCanonicalParameters {
            canonical: a9_canonical_pair(&l1, &l2),
        });
    }
    let raw = a9_triple(&l1, &l2);
    finish(FamilyId::A9General, vec![rat(&l1), rat(&l2)], Coefficient::integer(9), raw)
}

/// Accepts any pair, evaluates the formula as given, and reports the
/// canonical pair of the same class alongside.
pub fn a9_general_relaxed(
    l1: impl Into<Integer>,
    l2: impl Into<Integer>,
) -> Result<(FamilySolution, Option<(Integer, Integer)>), FamilyError> {
    let (l1, l2) = (l1.into(), l2.into());
    let canonical = a9_canonical_pair(&l1, &l2);
    let raw = a9_triple(&l1, &l2);
    let sol = finish(FamilyId::A9General, vec![rat(&l1), rat(&l2)], Coefficient::integer(9), raw)?;
    Ok((sol, canonical))
}

/// The rational parametrization of the singular a = 9 curve.
pub fn a9_from_mu(mu: &Rational) -> FamilySolution {
    let (m, n) = (mu.numer(), mu.denom());
    let n2 = n * n;
    let n3 = &n2 * n;
    let m2 = m * m;
    let x = int(3) * &m2 * n + int(5) * &n3;
    let w = &m2 * m + int(3) * m * &n2;
    let y = -(&w + int(4) * &n3);
    let z = &w - int(4) * &n3;
    finish(FamilyId::A9Mu, vec![mu.clone()], Coefficient::integer(9), Triple::new(x, y, z))
        .expect("the a = 9 parametrization never vanishes")
}

/// Family solutions for `a = N^2`: the cube subfamily when `N = k^3` and
/// the Fibonacci subfamily when `N = F_2k` with `k >= 2`.
pub fn square_families(n: impl Into<Integer>) -> Vec<FamilySolution> {
    let n = n.into();
    let mut out = Vec::new();
    if n < int(1) {
        return out;
    }
    if let Some(k) = is_perfect_cube(&n) {
        if let Ok(mut sol) = cube_family(&k * &k, int(1)) {
            sol.family = FamilyId::SquareCube;
            sol.params = vec![rat(&k)];
            out.push(sol);
        }
    }
    let mut k = 2u64;
    loop {
        let (f, _) = fibonacci_lucas(2 * k);
        if f > n {
            break;
        }
        if f == n {
            if let Ok(mut sol) = fibonacci_family(2 * k) {
                sol.family = FamilyId::SquareFib;
                sol.params = vec![rat(&int(k as i64))];
                out.push(sol);
            }
            break;
        }
        k += 1;
    }
    out
}

/// Dispatch by family id on integer parameters. `A9Mu` and `RsUniversal`
/// take their rational parameters as given.
pub fn generate(family: FamilyId, params: &[Rational]) -> Result<FamilySolution, FamilyError> {
    if params.len() != family.arity() {
        return excluded(&format!(
            "{family} takes {} parameter(s), got {}",
            family.arity(),
            params.len()
        ));
    }
    let need_int = |i: usize| -> Result<Integer, FamilyError> {
        if params[i].is_integer() {
            Ok(params[i].numer().clone())
        } else {
            excluded(&format!("{family} needs integer parameters"))
        }
    };
    match family {
        FamilyId::CubeRatio => cube_family(need_int(0)?, need_int(1)?),
        FamilyId::Frac5q2 => frac_family_5q2(need_int(0)?, need_int(1)?),
        FamilyId::FibonacciLucas => {
            let n = need_int(0)?;
            let n = u64::try_from(&n).map_err(|_| FamilyError::ExcludedParameters("n must be >= 1".into()))?;
            fibonacci_family(n)
        }
        FamilyId::Frac2p2q2 => frac_family_2p2q2(need_int(0)?, need_int(1)?),
        FamilyId::CubicFrac => cubic_frac_family(need_int(0)?, need_int(1)?),
        FamilyId::RsUniversal => rs_family(&params[0], &params[1]),
        FamilyId::MinusFour3q2 => minus_four_family(need_int(0)?),
        FamilyId::ReciprocalInteger => reciprocal_integer_family(need_int(0)?, need_int(1)?),
        FamilyId::TwoVariable => two_variable_family(need_int(0)?, need_int(1)?),
        FamilyId::A9General => a9_general(need_int(0)?, need_int(1)?),
        FamilyId::A9Mu => Ok(a9_from_mu(&params[0])),
        FamilyId::SquareCube | FamilyId::SquareFib => {
            let n = need_int(0)?;
            square_families(n)
                .into_iter()
                .find(|s| s.family == family)
                .ok_or_else(|| FamilyError::ExcludedParameters(format!("{family} has no member at N = {}", params[0])))
        }
    }
}
