//! The elliptic curve behind the equation.
//!
//! For `a = aL/aR` the equation is birational to
//! `Y0^2 = X0^3 + A X0 + B` with `A = -432 aL^3 aR` and
//! `B = -432 aL^4 (aL^2 - 6 aL aR - 3 aR^2)`, via
//! `x = 6 aL (12 aL aR - X0)`, `y, z = 36 aL^2 (aL - aR) +- Y0`.
//! A curve may also be a rescaled model `X0 = u^2 X`, `Y0 = u^3 Y`; the
//! triple maps account for the scale.

use alloc::vec;
use alloc::vec::Vec;

use num_integer::Integer as _;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{factorize, is_perfect_square, Integer, Rational};
use crate::model::{canonicalize, cube, is_primitive, is_solution, CanonicalTriple, Coefficient, Triple};
use crate::roots::integer_roots;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EllipticError {
    #[error("the curve is singular")]
    SingularCurve,
    #[error("the point at infinity has no triple")]
    NotAffine,
    #[error("triple cannot be mapped to a point: {0}")]
    Unmappable(&'static str),
}

/// `Y^2 = X^3 + a X + b`, a model of the curve for `coefficient`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeierstrassCurve {
    pub a: Integer,
    pub b: Integer,
    pub coefficient: Coefficient,
    /// `u` with `X0 = u^2 X`, `Y0 = u^3 Y` relative to the base model.
    pub scale: Integer,
    /// `-16 (4a^3 + 27b^2)`.
    pub discriminant: Integer,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CurvePoint {
    Infinity,
    Affine { x: Rational, y: Rational },
}

impl CurvePoint {
    pub fn affine(x: Rational, y: Rational) -> Self {
        CurvePoint::Affine { x, y }
    }

    pub fn integer(x: impl Into<Integer>, y: impl Into<Integer>) -> Self {
        CurvePoint::Affine {
            x: Rational::from_integer(x.into()),
            y: Rational::from_integer(y.into()),
        }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, CurvePoint::Infinity)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorsionReport {
    pub order: usize,
    pub generators: Vec<CurvePoint>,
    /// Every torsion point, the identity first.
    pub elements: Vec<CurvePoint>,
}

fn int(v: i64) -> Integer {
    Integer::from(v)
}

fn discriminant_of(a: &Integer, b: &Integer) -> Integer {
    int(-16) * (int(4) * cube(a) + int(27) * b * b)
}

/// The closed form `-2^12 3^9 aL^8 (aL - aR)^3 (aL - 9 aR)` of the base
/// model's discriminant.
pub fn base_discriminant_formula(c: &Coefficient) -> Integer {
    let (l, r) = (c.numer(), c.denom());
    let l2 = l * l;
    let l4 = &l2 * &l2;
    let k = int(-(1 << 12) * 19683);
    k * &l4 * &l4 * cube(&(l - r)) * (l - int(9) * r)
}

pub fn to_weierstrass(c: &Coefficient) -> WeierstrassCurve {
    let (l, r) = (c.numer(), c.denom());
    let l3 = cube(l);
    let a = int(-432) * &l3 * r;
    let b = int(-432) * &l3 * l * (l * l - int(6) * l * r - int(3) * r * r);
    let discriminant = discriminant_of(&a, &b);
    WeierstrassCurve {
        a,
        b,
        coefficient: c.clone(),
        scale: Integer::one(),
        discriminant,
    }
}

impl WeierstrassCurve {
    pub fn is_singular(&self) -> bool {
        self.discriminant.is_zero()
    }

    /// The model with the largest `u` such that `u^4 | a` and `u^6 | b`
    /// divided out.
    pub fn reduced(&self) -> WeierstrassCurve {
        if self.a.is_zero() && self.b.is_zero() {
            return self.clone();
        }
        let g = self.a.gcd(&self.b);
        let mut u = Integer::one();
        for (p, _) in factorize(&g).expect("gcd of a nonzero pair").factors() {
            let va = if self.a.is_zero() { u32::MAX } else { valuation(&self.a, p) };
            let vb = if self.b.is_zero() { u32::MAX } else { valuation(&self.b, p) };
            let e = (va / 4).min(vb / 6);
            u *= num_traits::pow(p.clone(), e as usize);
        }
        let u2 = &u * &u;
        let u4 = &u2 * &u2;
        let u6 = &u4 * &u2;
        let (a, b) = (&self.a / u4, &self.b / u6);
        WeierstrassCurve {
            discriminant: discriminant_of(&a, &b),
            a,
            b,
            coefficient: self.coefficient.clone(),
            scale: &self.scale * u,
        }
    }

    fn rhs(&self, x: &Rational) -> Rational {
        let a = Rational::from_integer(self.a.clone());
        let b = Rational::from_integer(self.b.clone());
        x * x * x + a * x + b
    }

    pub fn contains(&self, p: &CurvePoint) -> bool {
        match p {
            CurvePoint::Infinity => true,
            CurvePoint::Affine { x, y } => y * y == self.rhs(x),
        }
    }

    fn require_nonsingular(&self) -> Result<(), EllipticError> {
        if self.is_singular() {
            Err(EllipticError::SingularCurve)
        } else {
            Ok(())
        }
    }
}

fn valuation(n: &Integer, p: &Integer) -> u32 {
    let mut n = n.clone();
    let mut v = 0;
    while (&n % p).is_zero() {
        n /= p;
        v += 1;
    }
    v
}

pub fn point_neg(p: &CurvePoint) -> CurvePoint {
    match p {
        CurvePoint::Infinity => CurvePoint::Infinity,
        CurvePoint::Affine { x, y } => CurvePoint::affine(x.clone(), -y),
    }
}

fn add_unchecked(curve: &WeierstrassCurve, p: &CurvePoint, q: &CurvePoint) -> CurvePoint {
    let (x1, y1, x2, y2) = match (p, q) {
        (CurvePoint::Infinity, _) => return q.clone(),
        (_, CurvePoint::Infinity) => return p.clone(),
        (CurvePoint::Affine { x: x1, y: y1 }, CurvePoint::Affine { x: x2, y: y2 }) => (x1, y1, x2, y2),
    };
    let lambda = if x1 == x2 {
        if (y1 + y2).is_zero() {
            return CurvePoint::Infinity;
        }
        let three = Rational::from_integer(int(3));
        let two = Rational::from_integer(int(2));
        (three * x1 * x1 + Rational::from_integer(curve.a.clone())) / (two * y1)
    } else {
        (y2 - y1) / (x2 - x1)
    };
    let x3 = &lambda * &lambda - x1 - x2;
    let y3 = lambda * (x1 - &x3) - y1;
    CurvePoint::affine(x3, y3)
}

pub fn point_add(curve: &WeierstrassCurve, p: &CurvePoint, q: &CurvePoint) -> Result<CurvePoint, EllipticError> {
    curve.require_nonsingular()?;
    Ok(add_unchecked(curve, p, q))
}

/// `m P` by double-and-add; negative `m` negates.
pub fn point_mul(curve: &WeierstrassCurve, m: &Integer, p: &CurvePoint) -> Result<CurvePoint, EllipticError> {
    curve.require_nonsingular()?;
    let mut base = if m.is_negative() { point_neg(p) } else { p.clone() };
    let mut k = m.abs();
    let mut acc = CurvePoint::Infinity;
    while !k.is_zero() {
        if k.is_odd() {
            acc = add_unchecked(curve, &acc, &base);
        }
        base = add_unchecked(curve, &base, &base);
        k >>= 1;
    }
    Ok(acc)
}

/// Smallest `m <= 12` with `m P = O`.
fn small_order(curve: &WeierstrassCurve, p: &CurvePoint) -> Option<usize> {
    let mut acc = p.clone();
    for m in 1..=12 {
        if acc.is_infinity() {
            return Some(m);
        }
        if let CurvePoint::Affine { x, y } = &acc {
            // torsion points on an integral model are integral
            if !x.is_integer() || !y.is_integer() {
                return None;
            }
        }
        acc = add_unchecked(curve, &acc, p);
    }
    None
}

/// The torsion subgroup, from the integral points allowed by Nagell-Lutz:
/// `y = 0` or `y^2 | 4a^3 + 27b^2`.
pub fn torsion(curve: &WeierstrassCurve) -> Result<TorsionReport, EllipticError> {
    curve.require_nonsingular()?;
    let d = int(4) * cube(&curve.a) + int(27) * &curve.b * &curve.b;
    let mut ys = vec![Integer::zero()];
    ys.extend(factorize(&d).expect("nonsingular").square_divisors());
    let mut found: Vec<CurvePoint> = Vec::new();
    for y in ys {
        let c = [&curve.b - &y * &y, curve.a.clone(), Integer::zero(), Integer::one()];
        for x in integer_roots(&c).unwrap_or_default() {
            for yy in [y.clone(), -&y] {
                let p = CurvePoint::integer(x.clone(), yy);
                if small_order(curve, &p).is_some() && !found.contains(&p) {
                    found.push(p);
                }
                if y.is_zero() {
                    break;
                }
            }
        }
    }
    let mut elements = vec![CurvePoint::Infinity];
    elements.extend(found);
    // close under addition
    loop {
        let mut added = false;
        let snapshot = elements.clone();
        for p in &snapshot {
            for q in &snapshot {
                let s = add_unchecked(curve, p, q);
                if !elements.contains(&s) {
                    elements.push(s);
                    added = true;
                }
            }
        }
        if !added {
            break;
        }
    }
    elements[1..].sort();
    let order = elements.len();
    assert!(
        order <= 12 && order != 11,
        "torsion order {order} violates Mazur's bound"
    );

    let mut by_order: Vec<(usize, &CurvePoint)> = elements[1..]
        .iter()
        .map(|p| (small_order(curve, p).expect("torsion point"), p))
        .collect();
    by_order.sort_by(|a, b| b.0.cmp(&a.0).then_with(|| a.1.cmp(b.1)));
    let mut generators: Vec<CurvePoint> = Vec::new();
    let mut span = vec![CurvePoint::Infinity];
    for (_, p) in by_order {
        if span.contains(p) {
            continue;
        }
        generators.push(p.clone());
        span = subgroup(curve, &generators);
        if span.len() == order {
            break;
        }
    }
    Ok(TorsionReport {
        order,
        generators,
        elements,
    })
}

fn subgroup(curve: &WeierstrassCurve, gens: &[CurvePoint]) -> Vec<CurvePoint> {
    let mut span = vec![CurvePoint::Infinity];
    for g in gens {
        let mut next = span.clone();
        for s in &span {
            let mut acc = add_unchecked(curve, s, g);
            while !next.contains(&acc) {
                next.push(acc.clone());
                acc = add_unchecked(curve, &acc, g);
            }
        }
        span = next;
    }
    span
}

/// The primitive-up-to-scale triple of an affine point.
pub fn point_to_triple(curve: &WeierstrassCurve, p: &CurvePoint) -> Result<Triple, EllipticError> {
    let (x, y) = match p {
        CurvePoint::Infinity => return Err(EllipticError::NotAffine),
        CurvePoint::Affine { x, y } => (x, y),
    };
    let u = Rational::from_integer(curve.scale.clone());
    let x0 = x * &u * &u;
    let y0 = y * &u * &u * &u;
    let (l, r) = (curve.coefficient.numer(), curve.coefficient.denom());
    let l = Rational::from_integer(l.clone());
    let r = Rational::from_integer(r.clone());
    let six = Rational::from_integer(int(6));
    let base = Rational::from_integer(int(36)) * &l * &l * (&l - &r);
    let tx = six * &l * (Rational::from_integer(int(12)) * &l * &r - x0);
    let ty = &base + &y0;
    let tz = base - y0;
    let den = tx.denom().lcm(ty.denom()).lcm(tz.denom());
    let clear = |v: Rational| (v * Rational::from_integer(den.clone())).to_integer();
    Ok(Triple::new(clear(tx), clear(ty), clear(tz)).reduced())
}

/// Inverse of [`point_to_triple`] for a solution with `y + z != 0`.
pub fn triple_to_point(curve: &WeierstrassCurve, t: &Triple) -> Result<CurvePoint, EllipticError> {
    let c = &curve.coefficient;
    if c.is_one() || c.is_zero() {
        return Err(EllipticError::Unmappable("the coefficient is 0 or 1"));
    }
    if !is_solution(c, t) {
        return Err(EllipticError::Unmappable("not a solution for this coefficient"));
    }
    let yz = &t.y + &t.z;
    if yz.is_zero() {
        return Err(EllipticError::Unmappable("y + z = 0"));
    }
    let (l, r) = (
        Rational::from_integer(c.numer().clone()),
        Rational::from_integer(c.denom().clone()),
    );
    let lambda = Rational::from_integer(int(72)) * &l * &l * (&l - &r) / Rational::from_integer(yz);
    let x0 = Rational::from_integer(int(12)) * &l * &r
        - &lambda * Rational::from_integer(t.x.clone()) / (Rational::from_integer(int(6)) * &l);
    let y0 = &lambda * Rational::from_integer(&t.y - &t.z) / Rational::from_integer(int(2));
    let u = Rational::from_integer(curve.scale.clone());
    let p = CurvePoint::affine(x0 / (&u * &u), y0 / (&u * &u * &u));
    debug_assert!(curve.contains(&p));
    Ok(p)
}

/// Canonical primitive classes among the triples of `points`.
pub fn primitive_classes(curve: &WeierstrassCurve, points: &[CurvePoint]) -> Vec<CanonicalTriple> {
    let mut out: Vec<CanonicalTriple> = Vec::new();
    for p in points {
        if let Ok(t) = point_to_triple(curve, p) {
            if is_primitive(&curve.coefficient, &t) {
                let c = canonicalize(&t);
                if !out.iter().any(|o| o.triple == c.triple) {
                    out.push(c);
                }
            }
        }
    }
    out.sort_by(|a, b| a.triple.height().cmp(&b.triple.height()).then_with(|| a.triple.cmp(&b.triple)));
    out
}

/// Moduli for the square sieve. The first three are combined into one
/// wheel whose admissible residues are walked directly; the rest filter
/// the survivors.
const WHEEL_MODULI: [u64; 3] = [64, 63, 65];
const FILTER_MODULI: [u64; 7] = [11, 17, 19, 23, 29, 31, 37];

/// `ok[r]`: whether `m^3 + ae4 m + be6` can be a square mod `q` when
/// `m = r mod q`.
fn square_table(q: u64, ae4: &Integer, be6: &Integer) -> Vec<bool> {
    let qi = Integer::from(q);
    let ca = ae4.mod_floor(&qi).to_u64().unwrap() as u128;
    let cb = be6.mod_floor(&qi).to_u64().unwrap() as u128;
    let q = q as u128;
    let mut squares = vec![false; q as usize];
    for i in 0..q {
        squares[(i * i % q) as usize] = true;
    }
    (0..q)
        .map(|m| squares[((m * m % q * m + ca * m + cb) % q) as usize])
        .collect()
}

fn exact_value(m: i128, ae4: &Integer, be6: &Integer, fast: Option<(i128, i128)>) -> Integer {
    if let Some((a, b)) = fast {
        let v = m
            .checked_mul(m)
            .and_then(|m2| m2.checked_mul(m))
            .and_then(|m3| a.checked_mul(m).and_then(|am| m3.checked_add(am)))
            .and_then(|v| v.checked_add(b));
        if let Some(v) = v {
            return Integer::from(v);
        }
    }
    let m = Integer::from(m);
    cube(&m) + ae4 * &m + be6
}

fn push_pair(out: &mut Vec<CurvePoint>, x: Rational, y: Rational) {
    if !y.is_zero() {
        out.push(CurvePoint::affine(x.clone(), -&y));
    }
    out.push(CurvePoint::affine(x, y));
}

/// Rational points `X = m / e^2` (in lowest terms) for one denominator `e`
/// with `|X| <= max_abs_x`.
pub fn rational_points_with_denominator(
    curve: &WeierstrassCurve,
    e: u64,
    max_abs_x: u64,
) -> Result<Vec<CurvePoint>, EllipticError> {
    curve.require_nonsingular()?;
    let mut out = Vec::new();
    if e == 0 {
        return Ok(out);
    }
    let ei = Integer::from(e);
    let e2 = &ei * &ei;
    let e4 = &e2 * &e2;
    let e6 = &e4 * &e2;
    let ae4 = &curve.a * &e4;
    let be6 = &curve.b * &e6;
    let span = i128::try_from(max_abs_x as u128 * e as u128 * e as u128)
        .expect("search span fits in 127 bits");
    let fast = ae4.to_i128().zip(be6.to_i128());
    let wheel_tables: Vec<Vec<bool>> = WHEEL_MODULI.iter().map(|&q| square_table(q, &ae4, &be6)).collect();
    let wheel: i128 = WHEEL_MODULI.iter().product::<u64>() as i128;
    let admissible: Vec<i128> = (0..wheel)
        .filter(|&r| {
            WHEEL_MODULI
                .iter()
                .zip(&wheel_tables)
                .all(|(&q, t)| t[(r % q as i128) as usize])
        })
        .collect();
    let filters: Vec<(i128, Vec<bool>)> = FILTER_MODULI
        .iter()
        .map(|&q| (q as i128, square_table(q, &ae4, &be6)))
        .collect();
    let e_i = e as i128;
    let mut base = num_integer::Integer::div_floor(&(-span), &wheel) * wheel;
    while base <= span {
        for &r in &admissible {
            let m = base + r;
            if m < -span || m > span {
                continue;
            }
            if e > 1 && m.gcd(&e_i) != 1 {
                continue;
            }
            if !filters.iter().all(|(q, t)| t[m.rem_euclid(*q) as usize]) {
                continue;
            }
            let v = exact_value(m, &ae4, &be6, fast);
            if let Some(w) = is_perfect_square(&v) {
                let x = Rational::new(Integer::from(m), e2.clone());
                let y = Rational::new(w, &e2 * &ei);
                push_pair(&mut out, x, y);
            }
        }
        base += wheel;
    }
    Ok(out)
}

/// Rational points with denominator `e^2`, `e <= max_den`, and
/// `|X| <= max_abs_x`, sorted.
pub fn rational_point_search(
    curve: &WeierstrassCurve,
    max_den: u64,
    max_abs_x: u64,
) -> Result<Vec<CurvePoint>, EllipticError> {
    let mut out = Vec::new();
    for e in 1..=max_den {
        out.extend(rational_points_with_denominator(curve, e, max_abs_x)?);
    }
    out.sort();
    Ok(out)
}

/// Integral points with `|X| <= bound`, sorted.
pub fn integer_point_search(curve: &WeierstrassCurve, bound: u64) -> Result<Vec<CurvePoint>, EllipticError> {
    let mut out = rational_points_with_denominator(curve, 1, bound)?;
    out.sort();
    Ok(out)
}
