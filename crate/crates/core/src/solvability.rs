//! Non-existence criteria, witness construction, and the combined
//! classifier.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_integer::Integer as _;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Deserialize;

use crate::arith::{
    cubic_residue_4, cubic_residue_4_euler, factorize, is_perfect_square, is_prime, rational_cbrt, rational_sqrt,
    Integer, Rational,
};
use crate::elliptic::{self, primitive_classes, to_weierstrass};
use crate::families::{
    cube_family, cubic_frac_family, frac_family_2p2q2, frac_family_5q2, minus_four_family, reciprocal_integer_family,
    rs_family, square_families, FamilySolution,
};
use crate::model::{canonicalize, is_primitive, is_solution, CanonicalTriple, Coefficient, Triple};
use crate::roots::integer_roots;
use crate::search::{SearchBackend, SearchConfig, SearchError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SolvabilityError {
    #[error("a = 0 is excluded")]
    InvalidCoefficient,
    #[error("the equal-pair classification only covers integer a")]
    OutOfTheoremScope,
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error("curated evidence, line {line}: {message}")]
    CuratedFormat { line: usize, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TheoremId {
    AEqualsOne,
    TheoremA4,
    PrimePower,
    PQSquared,
    CuratedRankZero,
}

impl TheoremId {
    pub fn name(self) -> &'static str {
        match self {
            TheoremId::AEqualsOne => "a-equals-one",
            TheoremId::TheoremA4 => "theorem-a4",
            TheoremId::PrimePower => "prime-power",
            TheoremId::PQSquared => "pq-squared",
            TheoremId::CuratedRankZero => "curated-rank-zero",
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EvidenceItem {
    Torsion { order: usize, primitive_classes: usize },
    SearchExhausted { height: u64, found: usize },
    PointSearch { max_den: u64, max_abs_x: u64, found: usize },
    Curated(CuratedRecord),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Solvable { witness: CanonicalTriple, source: String },
    NoPrimitive { reason: TheoremId, note: Option<String> },
    Unknown { evidence: Vec<EvidenceItem> },
}

impl Verdict {
    pub fn kind(&self) -> &'static str {
        match self {
            Verdict::Solvable { .. } => "solvable",
            Verdict::NoPrimitive { .. } => "no-primitive",
            Verdict::Unknown { .. } => "unknown",
        }
    }
}

fn no_primitive(reason: TheoremId, note: impl Into<String>) -> Verdict {
    Verdict::NoPrimitive {
        reason,
        note: Some(note.into()),
    }
}

/// `24a / (a - 1)` as a positive integer, when it is one.
fn pq_value(a: &Coefficient) -> Option<Integer> {
    let (l, r) = (a.numer(), a.denom());
    let den = l - r;
    if den.is_zero() || a.is_zero() {
        return None;
    }
    let num = Integer::from(24) * l;
    let (v, rem) = num.div_rem(&den);
    (rem.is_zero() && v.is_positive()).then_some(v)
}

/// `a = p^n / (p^n - 24)` with `p = 2 mod 3` prime, `3 ∤ n`, every prime
/// factor of `p^n - 27` equal to 2 mod 3, and `a != -1/11`.
pub fn check_prime_power(a: &Coefficient) -> Option<Verdict> {
    if *a == Coefficient::ratio(-1, 11) {
        return None;
    }
    let v = pq_value(a)?;
    let f = factorize(&v).ok()?;
    let [(p, n)] = f.factors() else { return None };
    let three = Integer::from(3);
    if p.mod_floor(&three) != Integer::from(2) || n % 3 == 0 {
        return None;
    }
    let shifted = &v - Integer::from(27);
    if shifted.is_zero() {
        return None;
    }
    let rest = factorize(&shifted).ok()?;
    if rest.primes().all(|q| q.mod_floor(&three) == Integer::from(2)) {
        Some(no_primitive(TheoremId::PrimePower, format!("p = {p}, n = {n}")))
    } else {
        None
    }
}

fn four_is_cubic_non_residue(q: &Integer) -> bool {
    match q.to_u64() {
        Some(small) if small < 1_000_000 => !cubic_residue_4(small).expect("prime, 1 mod 3"),
        _ => !cubic_residue_4_euler(q).expect("prime, 1 mod 3"),
    }
}

/// `a = p q^2 / (p q^2 - 24)` with `(p, q)` one of `(2, 3)`, `(5, 2)`,
/// `(7, 2)`, or `(2, Q)` for a prime `Q = 1 mod 3` with `2Q^2 - 27` prime
/// and 4 a cubic non-residue mod `Q`.
pub fn check_pq_squared(a: &Coefficient) -> Option<Verdict> {
    let v = pq_value(a)?;
    for (p, q) in [(2, 3), (5, 2), (7, 2)] {
        if v == Integer::from(p * q * q) {
            return Some(no_primitive(TheoremId::PQSquared, format!("p = {p}, q = {q}")));
        }
    }
    if v.is_odd() {
        return None;
    }
    let q = is_perfect_square(&(&v / Integer::from(2)))?;
    let qualifies = is_prime(&q)
        && q.mod_floor(&Integer::from(3)).is_one()
        && is_prime(&(Integer::from(2) * &q * &q - Integer::from(27)))
        && four_is_cubic_non_residue(&q);
    qualifies.then(|| no_primitive(TheoremId::PQSquared, format!("p = 2, q = {q}")))
}

/// Solutions with two equal entries. For integer `a` this is the closed
/// classification: `{1,1,1}` and `{-5,4,4}` for a = 9, the zero-entry pair
/// `{1,1,0}` for a = 4, nothing otherwise. Non-integer `a` is searched for
/// `y = z` in `1..=height` unless `integer_only`.
pub fn equal_pair_solve(a: &Coefficient, integer_only: bool, height: u64) -> Result<Vec<Triple>, SolvabilityError> {
    if a.is_zero() {
        return Err(SolvabilityError::InvalidCoefficient);
    }
    if let Some(n) = a.as_integer() {
        return Ok(if *n == Integer::from(9) {
            vec![Triple::new(1, 1, 1), Triple::new(-5, 4, 4)]
        } else if *n == Integer::from(4) {
            vec![Triple::new(1, 1, 0)]
        } else {
            Vec::new()
        });
    }
    if integer_only {
        return Err(SolvabilityError::OutOfTheoremScope);
    }
    Ok(equal_pair_search(a, height))
}

/// Brute force for `y = z > 0`: roots in `x` of
/// `(aL - aR) x^3 - 6 aR y x^2 - 12 aR y^2 x + (2 aL - 8 aR) y^3`.
pub fn equal_pair_search(a: &Coefficient, height: u64) -> Vec<Triple> {
    let (l, r) = (a.numer(), a.denom());
    let mut out = Vec::new();
    for y in 1..=height {
        let y = Integer::from(y);
        let y2 = &y * &y;
        let c = [
            (Integer::from(2) * l - Integer::from(8) * r) * &y2 * &y,
            Integer::from(-12) * r * &y2,
            Integer::from(-6) * r * &y,
            l - r,
        ];
        for x in integer_roots(&c).unwrap_or_default() {
            if x.gcd(&y).is_one() {
                out.push(Triple::new(x, y.clone(), y.clone()));
            }
        }
    }
    out
}

/// One transcribed record of the evidence table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CuratedRecord {
    pub a: Coefficient,
    /// `"solvable"` or `"none"`.
    pub verdict: String,
    /// `"0"`, `"1"`, `"infinite"`, ...
    pub count: String,
    pub evidence: String,
    pub rank: Option<u32>,
    pub torsion_order: Option<u32>,
    pub solutions: Vec<Triple>,
    pub source: String,
}

impl CuratedRecord {
    pub fn claims_no_primitive(&self) -> bool {
        self.verdict == "none"
    }
}

#[derive(Deserialize)]
struct RawHeader {
    schema: String,
    version: u32,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRecord {
    a: Coefficient,
    verdict: String,
    count: String,
    evidence: String,
    rank: Option<u32>,
    torsion_order: Option<u32>,
    solutions: Vec<[i64; 3]>,
    source: String,
}

pub const CURATED_SCHEMA: &str = "cubesum-curated";
pub const CURATED_VERSION: u32 = 1;

/// The shipped evidence file.
pub const BUILTIN_CURATED: &str = include_str!("../data/curated.jsonl");

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EvidenceTable {
    records: Vec<CuratedRecord>,
}

impl EvidenceTable {
    /// Parses line-delimited JSON: a header line, then one record per line.
    /// Blank lines are ignored.
    pub fn parse(text: &str) -> Result<Self, SolvabilityError> {
        let err = |line: usize, message: String| SolvabilityError::CuratedFormat { line, message };
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (hline, header) = lines.next().ok_or_else(|| err(1, "empty file".into()))?;
        let header: RawHeader = serde_json::from_str(header).map_err(|e| err(hline + 1, e.to_string()))?;
        if header.schema != CURATED_SCHEMA || header.version != CURATED_VERSION {
            return Err(err(
                hline + 1,
                format!("unsupported schema {} v{}", header.schema, header.version),
            ));
        }
        let mut records = Vec::new();
        for (i, line) in lines {
            let raw: RawRecord = serde_json::from_str(line).map_err(|e| err(i + 1, e.to_string()))?;
            if raw.verdict != "solvable" && raw.verdict != "none" {
                return Err(err(i + 1, format!("unknown verdict {:?}", raw.verdict)));
            }
            records.push(CuratedRecord {
                a: raw.a,
                verdict: raw.verdict,
                count: raw.count,
                evidence: raw.evidence,
                rank: raw.rank,
                torsion_order: raw.torsion_order,
                solutions: raw.solutions.iter().map(|[x, y, z]| Triple::new(*x, *y, *z)).collect(),
                source: raw.source,
            });
        }
        Ok(EvidenceTable { records })
    }

    pub fn builtin() -> Self {
        Self::parse(BUILTIN_CURATED).expect("the shipped evidence file parses")
    }

    pub fn records(&self) -> &[CuratedRecord] {
        &self.records
    }

    pub fn curated_evidence(&self, a: &Coefficient) -> Option<&CuratedRecord> {
        self.records.iter().find(|r| r.a == *a)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassifyOptions {
    pub search_height: u64,
    /// Parameter bound for the family inversions.
    pub family_height: u64,
    /// Rational point search `(max_den, max_abs_x)`; `None` skips it.
    pub point_search: Option<(u64, u64)>,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            search_height: 200,
            family_height: 50,
            point_search: None,
        }
    }
}

fn rat(v: i64) -> Rational {
    Rational::from_integer(Integer::from(v))
}

/// Primitive family solutions for `a`, found by inverting each family's
/// coefficient formula.
pub fn family_witnesses(a: &Coefficient, family_height: u64) -> Vec<FamilySolution> {
    let mut out: Vec<FamilySolution> = Vec::new();
    let mut keep = |r: Result<FamilySolution, _>| {
        if let Ok(s) = r {
            if s.is_primitive && s.a == *a {
                out.push(s);
            }
        }
    };
    let av = a.value();

    if let Some(c) = rational_cbrt(av) {
        keep(cube_family(c.numer().clone(), c.denom().clone()));
    }
    if let Some(n) = a.as_integer() {
        if let Some(root) = is_perfect_square(n) {
            for s in square_families(root) {
                keep(Ok(s));
            }
        }
        // a = -4 (3q^2 - 1)^3
        if (n % Integer::from(4)).is_zero() {
            if let Some(c) = rational_cbrt(&Rational::from_integer(-(n / Integer::from(4)))) {
                let c = c.to_integer();
                if let Some(q) = is_perfect_square(&((c + Integer::one()) / Integer::from(3))) {
                    keep(minus_four_family(q));
                }
            }
        }
    }
    // a = 4q^2 / (p^2 - 5q^2): p/q = sqrt(4/a + 5)
    if let Some(t) = rational_sqrt(&(rat(4) / av + rat(5))) {
        keep(frac_family_5q2(t.numer().clone(), t.denom().clone()));
    }
    // a = 9q^2 / (2p^2 + q^2): p/q = sqrt((9/a - 1) / 2)
    if let Some(t) = rational_sqrt(&((rat(9) / av - rat(1)) / rat(2))) {
        keep(frac_family_2p2q2(t.numer().clone(), t.denom().clone()));
    }
    // cubic family in t = q/p: -6 aL t^3 + (aL - aR) t + 2 (aL - aR) = 0
    {
        let (l, r) = (a.numer(), a.denom());
        let c3 = Integer::from(-6) * l;
        let c1 = l - r;
        let c0 = Integer::from(2) * (l - r);
        // monic in s = c3 t: s^3 + c1 c3 s + c0 c3^2 = 0
        let monic = [&c0 * &c3 * &c3, &c1 * &c3, Integer::zero(), Integer::one()];
        for s in integer_roots(&monic).unwrap_or_default() {
            let t = Rational::new(s, c3.clone());
            keep(cubic_frac_family(t.denom().clone(), t.numer().clone()));
        }
    }
    // 1/a = 6q (p^2 - (q - 1)^2) + 1
    if a.numer().abs().is_one() {
        let k = a.denom() * a.numer();
        let m = &k - Integer::one();
        if (&m % Integer::from(6)).is_zero() && !m.is_zero() {
            let m = m / Integer::from(6);
            for q in 1..=family_height as i64 {
                for q in [Integer::from(q), Integer::from(-q)] {
                    if !(&m % &q).is_zero() {
                        continue;
                    }
                    let qm = &q - Integer::one();
                    if let Some(p) = is_perfect_square(&(&m / &q + &qm * &qm)) {
                        keep(reciprocal_integer_family(p, q));
                    }
                }
            }
        }
    }
    // r^2 = ((s + 2)^3 / a - s^3 - 2) / 6 over s = s1/s2
    let h = family_height as i64;
    for s2 in 1..=h {
        for s1 in -h..=h {
            if s1 == 0 || s1.gcd(&s2) != 1 {
                continue;
            }
            let s = Rational::new(s1.into(), s2.into());
            let plus = &s + rat(2);
            let r2 = (&plus * &plus * &plus / av - &s * &s * &s - rat(2)) / rat(6);
            if let Some(r) = rational_sqrt(&r2) {
                keep(rs_family(&r, &s));
            }
        }
    }
    out.sort_by(|x, y| {
        x.primitive
            .triple
            .height()
            .cmp(&y.primitive.triple.height())
            .then_with(|| x.primitive.triple.cmp(&y.primitive.triple))
    });
    out
}

fn solvable(witness: CanonicalTriple, source: String, a: &Coefficient) -> Verdict {
    assert!(is_primitive(a, &witness.triple), "witness {} fails for a = {a}", witness.triple);
    Verdict::Solvable { witness, source }
}

/// Theorems, then constructive witnesses, then torsion, bounded search and
/// rational points, then the curated table (when given).
pub fn classify(
    a: &Coefficient,
    opts: &ClassifyOptions,
    backend: &impl SearchBackend,
    curated: Option<&EvidenceTable>,
) -> Result<Verdict, SolvabilityError> {
    if a.is_zero() {
        return Err(SolvabilityError::InvalidCoefficient);
    }
    if a.is_one() {
        return Ok(no_primitive(TheoremId::AEqualsOne, "(x+y)(y+z)(z+x) = 0 forces a vectorlike pair"));
    }
    if *a == Coefficient::integer(4) {
        return Ok(no_primitive(TheoremId::TheoremA4, "only solutions with a zero entry"));
    }
    if let Some(v) = check_prime_power(a).or_else(|| check_pq_squared(a)) {
        return Ok(v);
    }
    if let Some(s) = family_witnesses(a, opts.family_height).into_iter().next() {
        let source = format!("family:{}", s.family);
        return Ok(solvable(s.primitive, source, a));
    }

    let mut evidence = Vec::new();
    let curve = to_weierstrass(a);
    let reduced = (!curve.is_singular()).then(|| curve.reduced());
    if let Some(curve) = &reduced {
        let tors = elliptic::torsion(curve).expect("nonsingular");
        let classes = primitive_classes(curve, &tors.elements);
        if let Some(c) = classes.first() {
            return Ok(solvable(c.clone(), "torsion".into(), a));
        }
        evidence.push(EvidenceItem::Torsion {
            order: tors.order,
            primitive_classes: 0,
        });
    }
    if opts.search_height > 0 {
        let res = backend.enumerate(&SearchConfig::new(a.clone(), opts.search_height))?;
        if let Some(c) = res.primitives.into_iter().next() {
            return Ok(solvable(c, format!("search:height={}", opts.search_height), a));
        }
        evidence.push(EvidenceItem::SearchExhausted {
            height: opts.search_height,
            found: 0,
        });
    }
    if let (Some(curve), Some((max_den, max_abs_x))) = (&reduced, opts.point_search) {
        let pts = backend.rational_points(curve, max_den, max_abs_x)?;
        if let Some(c) = primitive_classes(curve, &pts).into_iter().next() {
            return Ok(solvable(c, format!("points:den<={max_den},|X|<={max_abs_x}"), a));
        }
        evidence.push(EvidenceItem::PointSearch {
            max_den,
            max_abs_x,
            found: 0,
        });
    }
    if let Some(record) = curated.and_then(|t| t.curated_evidence(a)) {
        if record.claims_no_primitive() {
            return Ok(no_primitive(TheoremId::CuratedRankZero, format!("transcribed: {}", record.evidence)));
        }
        if let Some(t) = record.solutions.iter().find(|t| is_primitive(a, t)) {
            return Ok(solvable(canonicalize(t), "curated".into(), a));
        }
        evidence.push(EvidenceItem::Curated(record.clone()));
    }
    Ok(Verdict::Unknown { evidence })
}

/// Whether every listed curated solution is a primitive solution of its
/// record's coefficient.
pub fn curated_solutions_valid(table: &EvidenceTable) -> bool {
    table
        .records()
        .iter()
        .all(|r| r.solutions.iter().all(|t| is_solution(&r.a, t) && is_primitive(&r.a, t)))
}
