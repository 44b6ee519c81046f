//! Subcommand definitions and their implementations.

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use cubesum_core::elliptic::{self, integer_point_search, point_to_triple, primitive_classes, to_weierstrass, CurvePoint};
use cubesum_core::families::{a9_general, generate, FamilyError, FamilyId};
use cubesum_core::search::{
    n_sequence_scan, oracle_lemma31, oracle_thue, table1_scan, NScanOptions, SearchBackend, SearchConfig,
    WitnessMethod,
};
use cubesum_core::solvability::{classify, ClassifyOptions, EvidenceItem, EvidenceTable, Verdict};
use cubesum_core::{canonicalize, is_primitive, CanonicalTriple, Coefficient, Integer, Rational, Triple};

use crate::backend::Threaded;
use crate::cache::{self, CacheEntry};
use crate::output::{Format, OutputRecord};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("a = 0 is excluded")]
    ZeroCoefficient,
    #[error("{0}")]
    Excluded(String),
    #[error("no cached classification for a = {0}")]
    CacheMiss(String),
    #[error(transparent)]
    Other(#[from] anyhow::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::ZeroCoefficient => 3,
            CliError::Excluded(_) => 4,
            CliError::CacheMiss(_) => 5,
            CliError::Other(_) => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "cubesum", version, about = "Solutions of a (x^3 + y^3 + z^3) = (x + y + z)^3")]
pub struct Cli {
    /// Print one JSON record.
    #[arg(long, global = true, conflicts_with = "tsv")]
    pub json: bool,
    /// Print tab-separated text (the default).
    #[arg(long, global = true)]
    pub tsv: bool,
    /// Worker threads for searches.
    #[arg(long, global = true, env = "CUBESUM_JOBS", default_value_t = 1)]
    pub jobs: usize,
    #[command(subcommand)]
    pub command: Command,
}

impl Cli {
    pub fn format(&self) -> Format {
        if self.json {
            Format::Json
        } else {
            Format::Tsv
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide whether primitive solutions exist for `a`.
    Classify {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(long, default_value_t = 200)]
        height: u64,
        /// Consult the curated evidence table.
        #[arg(long)]
        use_curated: bool,
        /// Curated evidence file replacing the built-in one (implies --use-curated).
        #[arg(long)]
        curated: Option<PathBuf>,
        /// Replay the cached verdict instead of computing.
        #[arg(long)]
        cache_only: bool,
        /// Rational point search: largest denominator root (0 disables).
        #[arg(long, default_value_t = 0)]
        max_den: u64,
        /// Rational point search: bound on |X| in the reduced model.
        #[arg(long, default_value_t = 20000)]
        max_x: u64,
    },
    /// Evaluate a parametric family.
    Family {
        name: String,
        /// Integers or `num/den`; pass negative fractions after `--`.
        #[arg(allow_negative_numbers = true)]
        params: Vec<String>,
    },
    /// Reproduce a table: 1 (a = 9 up to 200) or 2 (|a| <= 10).
    Table {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=2))]
        which: u8,
        #[arg(long, default_value_t = 200)]
        height: u64,
    },
    /// Witnesses for a = N^2.
    ScanN {
        #[arg(long, default_value_t = 25)]
        max: u64,
        #[arg(long, default_value_t = 200)]
        height: u64,
        #[arg(long, default_value_t = 27)]
        max_den: u64,
        #[arg(long, default_value_t = 18000)]
        max_x: u64,
    },
    /// The elliptic curve attached to `a`.
    Ec {
        #[arg(allow_hyphen_values = true)]
        a: String,
        /// Bound on |X| for integral points of the reduced model.
        #[arg(long, default_value_t = 100)]
        bound: u64,
    },
    /// Exhaustive primitive search up to a height.
    Search {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(long, default_value_t = 200)]
        height: u64,
    },
    /// Brute-force checks of auxiliary equations.
    #[command(subcommand)]
    Oracle(Oracle),
}

#[derive(Debug, Subcommand)]
pub enum Oracle {
    /// q^4 - r^4 + q^2 r^2 = t^2.
    Lemma31 { bound: u64 },
    /// x^3 + 2 y^3 = c.
    Thue {
        #[arg(allow_hyphen_values = true)]
        c: i64,
        bound: u64,
    },
}

fn parse_coefficient(s: &str) -> Result<Coefficient, CliError> {
    let a: Coefficient = s.parse().map_err(|e| CliError::Usage(format!("cannot parse {s:?}: {e}")))?;
    if a.is_zero() {
        return Err(CliError::ZeroCoefficient);
    }
    Ok(a)
}

fn ratio_key(a: &Coefficient) -> String {
    format!("{}/{}", a.numer(), a.denom())
}

fn triple(t: &Triple) -> Value {
    Value::String(t.to_string())
}

fn point(p: &CurvePoint) -> Value {
    match p {
        CurvePoint::Infinity => Value::String("O".into()),
        CurvePoint::Affine { x, y } => Value::String(format!("({x}, {y})")),
    }
}

fn evidence(items: &[EvidenceItem]) -> Value {
    Value::Array(
        items
            .iter()
            .map(|e| match e {
                EvidenceItem::Torsion {
                    order,
                    primitive_classes,
                } => json!({"kind": "torsion", "order": order, "primitive_classes": primitive_classes}),
                EvidenceItem::SearchExhausted { height, found } => {
                    json!({"kind": "search", "height": height, "found": found})
                }
                EvidenceItem::PointSearch {
                    max_den,
                    max_abs_x,
                    found,
                } => json!({"kind": "points", "max_den": max_den, "max_abs_x": max_abs_x, "found": found}),
                EvidenceItem::Curated(r) => {
                    json!({"kind": "curated", "evidence": r.evidence, "rank": r.rank, "source": r.source})
                }
            })
            .collect(),
    )
}

pub fn verdict_value(a: &Coefficient, v: &Verdict) -> Value {
    match v {
        Verdict::Solvable { witness, source } => json!({
            "a": a.to_string(),
            "verdict": v.kind(),
            "witness": triple(&witness.triple),
            "source": source,
        }),
        Verdict::NoPrimitive { reason, note } => json!({
            "a": a.to_string(),
            "verdict": v.kind(),
            "reason": reason.name(),
            "note": note,
        }),
        Verdict::Unknown { evidence: items } => json!({
            "a": a.to_string(),
            "verdict": v.kind(),
            "evidence": evidence(items),
        }),
    }
}

fn load_curated(path: Option<&PathBuf>) -> Result<EvidenceTable, CliError> {
    match path {
        None => Ok(EvidenceTable::builtin()),
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", p.display())))?;
            EvidenceTable::parse(&text).map_err(|e| CliError::Usage(format!("{}: {e}", p.display())))
        }
    }
}

pub fn run(cli: &Cli) -> Result<OutputRecord, CliError> {
    let backend = Threaded::new(cli.jobs);
    match &cli.command {
        Command::Classify {
            a,
            height,
            use_curated,
            curated,
            cache_only,
            max_den,
            max_x,
        } => {
            let a = parse_coefficient(a)?;
            let use_curated = *use_curated || curated.is_some();
            let path = cache::default_path();
            let key = ratio_key(&a);
            if *cache_only {
                let entries = cache::load(&path).map_err(|e| CliError::Other(e.into()))?;
                return cache::lookup(&entries, &key, use_curated)
                    .map(|e| e.record.clone())
                    .ok_or(CliError::CacheMiss(a.to_string()));
            }
            let table = use_curated.then(|| load_curated(curated.as_ref())).transpose()?;
            let opts = ClassifyOptions {
                search_height: *height,
                point_search: (*max_den > 0).then_some((*max_den, *max_x)),
                ..ClassifyOptions::default()
            };
            let v = classify(&a, &opts, &backend, table.as_ref()).map_err(|e| CliError::Other(e.into()))?;
            let mut inputs = vec![("a", a.to_string()), ("height", height.to_string()), ("curated", use_curated.to_string())];
            if *max_den > 0 {
                inputs.push(("max_den", max_den.to_string()));
                inputs.push(("max_x", max_x.to_string()));
            }
            let mut rec = OutputRecord::new("classify", &inputs, verdict_value(&a, &v));
            if let Verdict::Unknown { .. } = v {
                rec = rec.note("no verdict: finite search is evidence, not proof");
            }
            if let Err(e) = cache::append(&path, &CacheEntry::new(key, *height, use_curated, rec.clone())) {
                eprintln!("warning: cache not written to {}: {e}", path.display());
            }
            Ok(rec)
        }
        Command::Family { name, params } => cmd_family(name, params),
        Command::Table { which: 1, .. } => Ok(cmd_table1()),
        Command::Table { height, .. } => cmd_table2(*height, &backend),
        Command::ScanN {
            max,
            height,
            max_den,
            max_x,
        } => {
            if *max == 0 {
                return Err(CliError::Usage("--max must be at least 1".into()));
            }
            let opts = NScanOptions {
                height: *height,
                max_den: *max_den,
                max_abs_x: *max_x,
            };
            let rows = n_sequence_scan(*max, &opts, &backend).map_err(|e| CliError::Other(e.into()))?;
            let rows: Vec<Value> = rows
                .iter()
                .map(|w| {
                    let (wit, how) = match &w.witness {
                        Some((c, m)) => (triple(&c.triple), Value::String(method(m))),
                        None => (Value::Null, Value::Null),
                    };
                    json!({"n": w.n, "a": w.n * w.n, "witness": wit, "method": how})
                })
                .collect();
            Ok(OutputRecord::new(
                "scan-n",
                &[
                    ("max", max.to_string()),
                    ("height", height.to_string()),
                    ("max_den", max_den.to_string()),
                    ("max_x", max_x.to_string()),
                ],
                json!({ "rows": rows }),
            )
            .note("a missing witness is not a proof of non-membership"))
        }
        Command::Ec { a, bound } => cmd_ec(&parse_coefficient(a)?, *bound),
        Command::Search { a, height } => {
            let a = parse_coefficient(a)?;
            if *height == 0 {
                return Err(CliError::Usage("--height must be at least 1".into()));
            }
            let res = backend
                .enumerate(&SearchConfig::new(a.clone(), *height))
                .map_err(|e| CliError::Other(e.into()))?;
            let rows: Vec<Value> = res.primitives.iter().map(|c| json!({ "triple": triple(&c.triple) })).collect();
            Ok(OutputRecord::new(
                "search",
                &[("a", a.to_string()), ("height", height.to_string())],
                json!({"count": rows.len(), "exhausted": res.exhausted, "rows": rows}),
            ))
        }
        Command::Oracle(Oracle::Lemma31 { bound }) => {
            if *bound == 0 {
                return Err(CliError::Usage("bound must be at least 1".into()));
            }
            let rows: Vec<Value> = oracle_lemma31(*bound)
                .iter()
                .map(|(q, r, t)| json!({"q": q.to_string(), "r": r.to_string(), "t": t.to_string()}))
                .collect();
            Ok(OutputRecord::new(
                "oracle lemma31",
                &[("bound", bound.to_string())],
                json!({"count": rows.len(), "rows": rows}),
            ))
        }
        Command::Oracle(Oracle::Thue { c, bound }) => {
            if *bound < 5 {
                return Err(CliError::Usage("bound must be at least 5".into()));
            }
            let rows: Vec<Value> = oracle_thue(&Integer::from(*c), *bound)
                .iter()
                .map(|(x, y)| json!({"x": x.to_string(), "y": y.to_string()}))
                .collect();
            Ok(OutputRecord::new(
                "oracle thue",
                &[("c", c.to_string()), ("bound", bound.to_string())],
                json!({"count": rows.len(), "rows": rows}),
            ))
        }
    }
}

fn method(m: &WitnessMethod) -> String {
    match m {
        WitnessMethod::Family(id) => format!("family:{id}"),
        WitnessMethod::Search { height } => format!("search:height={height}"),
        WitnessMethod::Torsion => "torsion".into(),
        WitnessMethod::PointSearch { max_den, max_abs_x } => format!("points:den<={max_den},|X|<={max_abs_x}"),
    }
}

fn cmd_family(name: &str, params: &[String]) -> Result<OutputRecord, CliError> {
    let id: FamilyId = name.parse().map_err(|e: FamilyError| CliError::Usage(e.to_string()))?;
    if params.len() != id.arity() {
        return Err(CliError::Usage(format!(
            "{id} takes {} parameter(s), got {}",
            id.arity(),
            params.len()
        )));
    }
    let values = params
        .iter()
        .map(|p| parse_rational(p))
        .collect::<Result<Vec<Rational>, _>>()?;
    let sol = generate(id, &values).map_err(|e| CliError::Excluded(e.to_string()))?;
    let mut rec = OutputRecord::new(
        "family",
        &[("name", id.to_string()), ("params", params.join(" "))],
        json!({
            "a": sol.a.to_string(),
            "raw": triple(&sol.raw),
            "triple": triple(&sol.primitive.triple),
            "primitive": sol.is_primitive,
        }),
    );
    if !sol.is_primitive {
        rec = rec.note("the reduced triple has a zero entry or a vectorlike pair");
    }
    Ok(rec)
}

fn parse_rational(s: &str) -> Result<Rational, CliError> {
    s.parse::<Coefficient>()
        .map(|c| c.value().clone())
        .map_err(|e| CliError::Usage(format!("cannot parse {s:?}: {e}")))
}

/// `(l1, l2)` labels of the a = 9 solutions, keyed by canonical triple.
fn a9_labels(max_l1: i64) -> BTreeMap<Triple, (i64, i64)> {
    let mut out = BTreeMap::new();
    out.insert(a9_general(0, 0).expect("origin").primitive.triple, (0, 0));
    for l1 in 1..=max_l1 {
        for l2 in 1..=l1 {
            if let Ok(s) = a9_general(l1, l2) {
                out.entry(s.primitive.triple).or_insert((l1, l2));
            }
        }
    }
    out
}

pub fn cmd_table1() -> OutputRecord {
    let res = table1_scan();
    let labels = a9_labels(20);
    let rows: Vec<Value> = res
        .primitives
        .iter()
        .map(|c| {
            let (l1, l2) = labels
                .get(&c.triple)
                .map(|(a, b)| (json!(a), json!(b)))
                .unwrap_or((Value::Null, Value::Null));
            json!({"triple": triple(&c.triple), "l1": l1, "l2": l2})
        })
        .collect();
    OutputRecord::new(
        "table 1",
        &[("a", "9".into()), ("height", res.height.to_string())],
        json!({"count": rows.len(), "rows": rows}),
    )
}

/// One row of the |a| <= 10 table.
pub fn table2_row(a: i64, height: u64, backend: &impl SearchBackend, table: &EvidenceTable) -> Result<Value, CliError> {
    let coeff = Coefficient::integer(a);
    let opts = ClassifyOptions {
        search_height: height,
        ..ClassifyOptions::default()
    };
    let v = classify(&coeff, &opts, backend, Some(table)).map_err(|e| CliError::Other(e.into()))?;
    let found = backend
        .enumerate(&SearchConfig::new(coeff.clone(), height))
        .map_err(|e| CliError::Other(e.into()))?;
    let record = table.curated_evidence(&coeff);
    let (verdict, provenance, reason) = match &v {
        Verdict::Solvable { source, .. } => ("solvable", "computed", source.clone()),
        Verdict::NoPrimitive { reason, .. } if reason.name() == "curated-rank-zero" => (
            "none",
            "transcribed",
            record.map(|r| r.evidence.clone()).unwrap_or_default(),
        ),
        Verdict::NoPrimitive { reason, .. } => ("none", "computed", reason.name().to_string()),
        Verdict::Unknown { .. } => ("unknown", "computed", String::new()),
    };
    let mut solutions: Vec<String> = Vec::new();
    if let Some(r) = record {
        for t in &r.solutions {
            let status = if found.triples().any(|f| f == t) {
                "found by search"
            } else if is_primitive(&coeff, t) {
                "verified, not discovered"
            } else {
                "FAILS"
            };
            solutions.push(format!("{t} ({status})"));
        }
    }
    Ok(json!({
        "a": a,
        "verdict": verdict,
        "evidence": reason,
        "provenance": provenance,
        "rank": record.and_then(|r| r.rank).map(|k| format!("{k} (transcribed)")),
        "solutions": solutions,
    }))
}

fn cmd_table2(height: u64, backend: &impl SearchBackend) -> Result<OutputRecord, CliError> {
    let table = EvidenceTable::builtin();
    let mut rows = Vec::new();
    for k in 1..=10 {
        for a in [k, -k] {
            rows.push(table2_row(a, height, backend, &table)?);
        }
    }
    Ok(OutputRecord::new("table 2", &[("height", height.to_string())], json!({ "rows": rows }))
        .note("ranks and rank-0 verdicts are transcribed; everything marked computed was derived here"))
}

fn classes(list: &[CanonicalTriple]) -> Value {
    Value::Array(list.iter().map(|c| triple(&c.triple)).collect())
}

fn cmd_ec(a: &Coefficient, bound: u64) -> Result<OutputRecord, CliError> {
    let inputs = [("a", a.to_string()), ("bound", bound.to_string())];
    let base = to_weierstrass(a);
    if base.is_singular() {
        return Ok(OutputRecord::new(
            "ec",
            &inputs,
            json!({"A": base.a.to_string(), "B": base.b.to_string(), "singular": true}),
        ));
    }
    let curve = base.reduced();
    let tors = elliptic::torsion(&curve).map_err(|e| CliError::Other(e.into()))?;
    let pts = integer_point_search(&curve, bound).map_err(|e| CliError::Other(e.into()))?;
    let rows: Vec<Value> = tors
        .elements
        .iter()
        .map(|p| (p, "torsion"))
        .chain(pts.iter().map(|p| (p, "integral")))
        .map(|(p, kind)| {
            let t = point_to_triple(&curve, p).ok();
            json!({
                "kind": kind,
                "point": point(p),
                "raw": t.as_ref().map(triple),
                "triple": t.as_ref().map(|t| triple(&canonicalize(t).triple)),
                "primitive": t.as_ref().is_some_and(|t| is_primitive(a, t)),
            })
        })
        .collect();
    Ok(OutputRecord::new(
        "ec",
        &inputs,
        json!({
            "A": base.a.to_string(),
            "B": base.b.to_string(),
            "reduced_A": curve.a.to_string(),
            "reduced_B": curve.b.to_string(),
            "scale": curve.scale.to_string(),
            "discriminant": curve.discriminant.to_string(),
            "singular": false,
            "torsion_order": tors.order,
            "torsion_classes": classes(&primitive_classes(&curve, &tors.elements)),
            "integral_classes": classes(&primitive_classes(&curve, &pts)),
            "rows": rows,
        }),
    ))
}
