//! Bounded exhaustive search and brute-force oracles.
//!
//! Every class has a representative with `x >= |y| >= |z|` and `x > 0`, so
//! the search walks `x` up to the height, `y` over `[-x, x]`, and solves the
//! equation as a cubic in `z` restricted to `[-|y|, |y|]`:
//!
//! `(aL - aR) z^3 - 3 aR s z^2 - 3 aR s^2 z + aL (x^3 + y^3) - aR s^3 = 0`
//! with `s = x + y`.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use num_integer::{Integer as _, Roots};
use num_traits::{Signed, ToPrimitive};

use crate::arith::{is_perfect_cube, Integer};
use crate::elliptic::{self, primitive_classes, to_weierstrass, CurvePoint, EllipticError, WeierstrassCurve};
use crate::families::{square_families, FamilyId};
use crate::model::{canonicalize, is_primitive, CanonicalTriple, Coefficient, Triple};
use crate::roots::{integer_roots_in, Int};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SearchError {
    #[error("a = 0 is excluded")]
    InvalidCoefficient,
    #[error("the search height must be at least 1")]
    InvalidHeight,
    #[error(transparent)]
    Elliptic(#[from] EllipticError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchConfig {
    pub a: Coefficient,
    /// Largest `|coordinate|` searched.
    pub height: u64,
    pub parallelism: usize,
}

impl SearchConfig {
    pub fn new(a: Coefficient, height: u64) -> Self {
        SearchConfig {
            a,
            height,
            parallelism: 1,
        }
    }

    fn validate(&self) -> Result<(), SearchError> {
        if self.a.is_zero() {
            return Err(SearchError::InvalidCoefficient);
        }
        if self.height == 0 {
            return Err(SearchError::InvalidHeight);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchResult {
    /// Sorted by height, then lexicographically.
    pub primitives: Vec<CanonicalTriple>,
    pub exhausted: bool,
    pub height: u64,
}

impl SearchResult {
    pub fn triples(&self) -> impl Iterator<Item = &Triple> {
        self.primitives.iter().map(|c| &c.triple)
    }
}

fn sort_classes(v: &mut [CanonicalTriple]) {
    v.sort_by(|a, b| {
        a.triple
            .height()
            .cmp(&b.triple.height())
            .then_with(|| a.triple.cmp(&b.triple))
    });
}

fn scan_x<T>(l: &T, r: &T, x: i64, out: &mut BTreeSet<Triple>)
where
    T: Int + From<i64> + Into<Integer>,
{
    let three = T::from(3i64);
    let xt = T::from(x);
    let x3 = xt.clone() * xt.clone() * xt.clone();
    let c3 = l.clone() - r.clone();
    for y in -x..=x {
        if y == 0 || y == -x {
            continue;
        }
        let yt = T::from(y);
        let s = T::from(x + y);
        let s2 = s.clone() * s.clone();
        let c = [
            l.clone() * (x3.clone() + yt.clone() * yt.clone() * yt.clone()) - r.clone() * s2.clone() * s.clone(),
            -(three.clone() * r.clone() * s2),
            -(three.clone() * r.clone() * s),
            c3.clone(),
        ];
        let ya = y.abs();
        let roots = match integer_roots_in(&c, T::from(-ya), T::from(ya)) {
            Some(roots) => roots,
            None => continue,
        };
        for z in roots {
            let z: Integer = z.into();
            let z = z.to_i64().expect("root within the search box");
            if z == 0 || z == -y || z == -x || x.gcd(&y).gcd(&z) != 1 {
                continue;
            }
            out.insert(canonicalize(&Triple::new(x, y, z)).triple);
        }
    }
}

/// Search only the `x` with `x % stripes == stripe`.
pub fn enumerate_stripe(cfg: &SearchConfig, stripe: usize, stripes: usize) -> Result<SearchResult, SearchError> {
    cfg.validate()?;
    let stripes = stripes.max(1) as u64;
    let h = cfg.height;
    let (l, r) = (cfg.a.numer(), cfg.a.denom());
    let mag = l.abs().max(r.abs());
    // every intermediate of the root finder stays below 32 max(|aL|, aR) h^3
    let fast = (mag.bits() + 5 + 3 * (64 - h.leading_zeros() as u64)) < 126;
    let mut found = BTreeSet::new();
    let xs = (1..=h as i64).filter(|x| (*x as u64) % stripes == stripe as u64);
    if fast {
        let (l, r) = (l.to_i128().unwrap(), r.to_i128().unwrap());
        for x in xs {
            scan_x(&l, &r, x, &mut found);
        }
    } else {
        for x in xs {
            scan_x(l, r, x, &mut found);
        }
    }
    let mut primitives: Vec<CanonicalTriple> = found
        .into_iter()
        .map(|t| {
            assert!(is_primitive(&cfg.a, &t), "search produced a non-primitive {t}");
            canonicalize(&t)
        })
        .collect();
    sort_classes(&mut primitives);
    Ok(SearchResult {
        primitives,
        exhausted: true,
        height: h,
    })
}

/// Union of stripe results; associative and order-insensitive.
pub fn merge(parts: impl IntoIterator<Item = SearchResult>) -> SearchResult {
    let mut seen = BTreeSet::new();
    let mut primitives = Vec::new();
    let mut exhausted = true;
    let mut height = 0;
    for part in parts {
        exhausted &= part.exhausted;
        height = height.max(part.height);
        for c in part.primitives {
            if seen.insert(c.triple.clone()) {
                primitives.push(c);
            }
        }
    }
    sort_classes(&mut primitives);
    SearchResult {
        primitives,
        exhausted,
        height,
    }
}

/// Single-threaded exhaustive search up to `cfg.height`.
pub fn enumerate_primitive(cfg: &SearchConfig) -> Result<SearchResult, SearchError> {
    enumerate_stripe(cfg, 0, 1)
}

/// How the expensive scans are executed. The default runs serially.
pub trait SearchBackend {
    fn enumerate(&self, cfg: &SearchConfig) -> Result<SearchResult, SearchError> {
        enumerate_primitive(cfg)
    }

    fn rational_points(
        &self,
        curve: &WeierstrassCurve,
        max_den: u64,
        max_abs_x: u64,
    ) -> Result<Vec<CurvePoint>, SearchError> {
        Ok(elliptic::rational_point_search(curve, max_den, max_abs_x)?)
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Serial;

impl SearchBackend for Serial {}

/// All primitive solutions for a = 9 with entries up to 200.
pub fn table1_scan() -> SearchResult {
    enumerate_primitive(&SearchConfig::new(Coefficient::integer(9), 200)).expect("valid configuration")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NScanOptions {
    pub height: u64,
    /// Rational point search bounds; `max_den = 0` disables the stage.
    pub max_den: u64,
    pub max_abs_x: u64,
}

impl Default for NScanOptions {
    fn default() -> Self {
        NScanOptions {
            height: 200,
            max_den: 0,
            max_abs_x: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WitnessMethod {
    Family(FamilyId),
    Search { height: u64 },
    Torsion,
    PointSearch { max_den: u64, max_abs_x: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NWitness {
    pub n: u64,
    pub witness: Option<(CanonicalTriple, WitnessMethod)>,
}

/// A primitive solution for `a = N^2`: families first, then bounded
/// search, then the curve's torsion and rational points.
pub fn n_witness(n: u64, opts: &NScanOptions, backend: &impl SearchBackend) -> Result<NWitness, SearchError> {
    let a = Coefficient::integer(Integer::from(n) * Integer::from(n));
    let found = |witness| Ok(NWitness { n, witness: Some(witness) });
    if let Some(s) = square_families(n).into_iter().find(|s| s.is_primitive) {
        return found((s.primitive, WitnessMethod::Family(s.family)));
    }
    if opts.height > 0 {
        let res = backend.enumerate(&SearchConfig::new(a.clone(), opts.height))?;
        if let Some(c) = res.primitives.into_iter().next() {
            return found((c, WitnessMethod::Search { height: opts.height }));
        }
    }
    let curve = to_weierstrass(&a);
    if !curve.is_singular() {
        let curve = curve.reduced();
        let tors = elliptic::torsion(&curve)?;
        if let Some(c) = primitive_classes(&curve, &tors.elements).into_iter().next() {
            return found((c, WitnessMethod::Torsion));
        }
        if opts.max_den > 0 {
            let pts = backend.rational_points(&curve, opts.max_den, opts.max_abs_x)?;
            if let Some(c) = primitive_classes(&curve, &pts).into_iter().next() {
                return found((
                    c,
                    WitnessMethod::PointSearch {
                        max_den: opts.max_den,
                        max_abs_x: opts.max_abs_x,
                    },
                ));
            }
        }
    }
    Ok(NWitness { n, witness: None })
}

/// [`n_witness`] for every `1 <= N <= n_max`. A missing witness is not a
/// proof of non-membership.
pub fn n_sequence_scan(
    n_max: u64,
    opts: &NScanOptions,
    backend: &impl SearchBackend,
) -> Result<Vec<NWitness>, SearchError> {
    (1..=n_max).map(|n| n_witness(n, opts, backend)).collect()
}

/// Solutions of `q^4 - r^4 + q^2 r^2 = t^2` with `|q|, |r| <= bound`,
/// `qrt != 0` and `gcd(q, r) = 1`.
pub fn oracle_lemma31(bound: u64) -> Vec<(Integer, Integer, Integer)> {
    let b = bound as i64;
    let mut out = Vec::new();
    for q in -b..=b {
        for r in -b..=b {
            if q == 0 || r == 0 || q.gcd(&r) != 1 {
                continue;
            }
            let (q2, r2) = (q as i128 * q as i128, r as i128 * r as i128);
            let v = q2 * q2 - r2 * r2 + q2 * r2;
            if v <= 0 {
                continue;
            }
            let t = v.sqrt();
            if t * t == v {
                for t in [t, -t] {
                    out.push((Integer::from(q), Integer::from(r), Integer::from(t)));
                }
            }
        }
    }
    out
}

/// Integer solutions of `x^3 + 2 y^3 = c` with `|x|, |y| <= bound`,
/// sorted by `y`.
pub fn oracle_thue(c: &Integer, bound: u64) -> Vec<(Integer, Integer)> {
    let b = Integer::from(bound);
    let mut out = Vec::new();
    let mut y = -&b;
    while y <= b {
        let rest = c - Integer::from(2) * &y * &y * &y;
        if let Some(x) = is_perfect_cube(&rest) {
            if x.abs() <= b {
                out.push((x, y.clone()));
            }
        }
        y += 1;
    }
    out
}
