//! `ivp`: integer-valued polynomials, p-adic sets and overrings of Int(Z)
//! from the command line. Exit status 0 for a definite answer, 2 for
//! unknown, 1 for errors.

use std::collections::BTreeMap;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use ivp_core::adelic::{adelic_closure_member, closures_differ, product_closure_member, AdelicMembership};
use ivp_core::arith::{fmt_rat, Valuation};
use ivp_core::dsl::{
    parse_intset, parse_irreducible, parse_pres, parse_prime, parse_prime_sets, parse_rat, parse_representation,
    parse_ring, parse_rule, parse_set,
};
use ivp_core::ivp::{is_integer_valued, separating_polynomial, witness_rational_function};
use ivp_core::json::{representation_from_json_str, representation_to_json, ring_from_json_str, ring_to_json};
use ivp_core::representation::{
    nonunitary_contains, representation_equals, ring_of, superfluous_nonunitary, superfluous_unitary,
    unitary_contains, NonunitaryAnswer,
};
use ivp_core::ring::{
    globalize, has_irredundant_representation, localize, minimal_extensions, ring_contains, ring_equal,
};
use ivp_core::roots::{max_valuation, roots_in_set};
use ivp_core::simple::is_simple_integer_set_ring;
use ivp_core::{selftest, Config, Error, IrreduciblePoly, PAdicSet, Representation, Result, RingSpec, TriState};

// stdout may be a closed pipe (`ivp ... | head`); that is not an error
macro_rules! out {
    ($($t:tt)*) => {{
        use std::io::Write;
        let _ = writeln!(std::io::stdout(), $($t)*);
    }};
}

#[derive(Parser)]
#[command(name = "ivp", version, about = "Integer-valued polynomials and polynomial overrings of Int(Z)")]
struct Cli {
    /// Emit machine-checkable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// key=value config file; flags below override it.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<String>,
    /// Residues or tree nodes one operation may visit [default: 1048576].
    #[arg(long, global = true)]
    residue_cap: Option<u64>,
    /// Primes up to this bound are scanned by tail analyses [default: 10000].
    #[arg(long, global = true)]
    prime_scan_bound: Option<u64>,
    /// Largest polynomial degree accepted [default: 64].
    #[arg(long, global = true)]
    degree_bound: Option<usize>,
    /// Bit length accepted by the primality test, at most 64 [default: 64].
    #[arg(long, global = true)]
    primality_bits: Option<u32>,
    /// Primes tried for a mod-p irreducibility witness [default: 200].
    #[arg(long, global = true)]
    irreducibility_prime_bound: Option<u64>,
    /// Accept q as irreducible when no certificate is found.
    #[arg(long, global = true)]
    assert_irreducible: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RepArgs {
    /// Whole representation: rep(...) text, JSON, or @file.
    #[arg(long)]
    rep: Option<String>,
    /// Irreducible polynomials q with V_q in the family, separated by `;`.
    #[arg(long)]
    family: Option<String>,
    /// Include every q without a root in the closed unitary sets.
    #[arg(long)]
    all_min: bool,
    /// Unitary sets: `p: <set>; p: <set>`.
    #[arg(long)]
    unitary: Option<String>,
    /// Rule for the remaining primes.
    #[arg(long, default_value = "empty")]
    tail: String,
}

#[derive(Subcommand)]
enum Command {
    /// Is alpha in the set?
    Member {
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long)]
        set: String,
    },
    /// Topological closure of a set.
    Closure {
        #[arg(long)]
        set: String,
    },
    /// Is A a subset of B?
    Subset {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Is E dense in F?
    Dense {
        #[arg(long)]
        e: String,
        #[arg(long)]
        f: String,
    },
    /// Isolated points of a set.
    Isolated {
        #[arg(long)]
        set: String,
    },
    /// Certified roots of an irreducible q in a set.
    Roots {
        #[arg(long)]
        q: String,
        #[arg(long)]
        set: String,
    },
    /// Supremum of v_p(q) over a set.
    Maxval {
        #[arg(long)]
        q: String,
        #[arg(long)]
        set: String,
    },
    /// Is f integer-valued on the set?
    Intval {
        #[arg(long)]
        poly: String,
        #[arg(long)]
        set: String,
    },
    /// Rational witness prod p^m / q for a family, or with --set and --alpha
    /// a polynomial separating alpha from the set.
    Witness {
        #[arg(long)]
        q: Option<String>,
        /// `p: <set>; p: <set>`.
        #[arg(long)]
        family: Option<String>,
        #[arg(long)]
        set: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<String>,
    },
    /// Are two rings equal?
    RingEq {
        #[arg(long)]
        r1: String,
        #[arg(long)]
        r2: String,
    },
    /// Is R1 contained in R2?
    RingContains {
        #[arg(long)]
        r1: String,
        #[arg(long)]
        r2: String,
    },
    /// Does the representation equal the ring? Without --ring, the ring it
    /// cuts out.
    RepEq {
        #[command(flatten)]
        rep: RepArgs,
        #[arg(long)]
        ring: Option<String>,
    },
    /// Is the represented ring inside V_{p,alpha}?
    UnitaryContains {
        #[command(flatten)]
        rep: RepArgs,
        #[arg(long)]
        p: String,
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
    },
    /// Is the represented ring inside V_q?
    NonunitaryContains {
        #[command(flatten)]
        rep: RepArgs,
        #[arg(long)]
        q: String,
    },
    /// Can V_q (--q) or V_{p,alpha} (--p, --alpha) be dropped?
    Superfluous {
        #[command(flatten)]
        rep: RepArgs,
        #[arg(long)]
        q: Option<String>,
        #[arg(long)]
        p: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<String>,
    },
    /// Minimal ring extensions at a prime.
    MinExt {
        #[arg(long)]
        ring: String,
        #[arg(long)]
        p: String,
    },
    /// Does the ring have an irredundant representation?
    Irredundant {
        #[arg(long)]
        ring: String,
    },
    /// Localization at a prime.
    Localize {
        #[arg(long)]
        ring: String,
        #[arg(long)]
        p: String,
    },
    /// The ring with the given local sets and tail.
    Globalize {
        /// `p: <set>; p: <set>`.
        #[arg(long, default_value = "")]
        parts: String,
        #[arg(long, default_value = "empty")]
        tail: String,
    },
    /// Is the ring Int(E, Z) for a set of integers E?
    Simple {
        #[arg(long)]
        ring: String,
    },
    /// Does the prescription meet the product of the per-prime closures?
    AdeleProd {
        #[arg(long)]
        set: String,
        #[arg(long)]
        pres: String,
    },
    /// Does a single element of the set satisfy the whole prescription?
    AdeleHat {
        #[arg(long)]
        set: String,
        #[arg(long)]
        pres: String,
    },
    /// Does the prescription separate the product closure from the adelic one?
    AdeleDiff {
        #[arg(long)]
        set: String,
        #[arg(long)]
        pres: String,
    },
    /// Run the regression corpus of worked examples.
    Selftest,
}

/// What a command concluded.
enum Answer {
    Bool(bool),
    Tri(TriState),
    /// A computed object rather than a yes/no answer.
    Value(String),
}

struct Report {
    answer: Answer,
    lines: Vec<String>,
    data: Value,
}

impl Report {
    fn new(answer: Answer) -> Self {
        Report { answer, lines: Vec::new(), data: json!({}) }
    }

    fn line(mut self, s: impl Into<String>) -> Self {
        self.lines.push(s.into());
        self
    }

    fn with(mut self, key: &str, v: Value) -> Self {
        self.data[key] = v;
        self
    }
}

fn load(text: &str) -> Result<String> {
    match text.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path).map_err(|e| Error::Invalid(format!("cannot read {path}: {e}"))),
        None => Ok(text.to_string()),
    }
}

fn ring_arg(text: &str, cfg: &Config) -> Result<RingSpec> {
    let text = load(text)?;
    if text.trim_start().starts_with('{') {
        ring_from_json_str(&text, cfg)
    } else {
        parse_ring(&text, cfg)
    }
}

fn irreducible(text: &str, assert: bool, cfg: &Config) -> Result<IrreduciblePoly> {
    parse_irreducible(text, assert, cfg)
}

fn rep_arg(a: &RepArgs, assert: bool, cfg: &Config) -> Result<Representation> {
    if let Some(text) = &a.rep {
        let text = load(text)?;
        return if text.trim_start().starts_with('{') {
            representation_from_json_str(&text, assert, cfg)
        } else {
            parse_representation(&text, assert, cfg)
        };
    }
    let mut family = Vec::new();
    if let Some(list) = &a.family {
        for q in list.split(';').map(str::trim).filter(|s| !s.is_empty()) {
            family.push(irreducible(q, assert, cfg)?);
        }
    }
    let unitary = match &a.unitary {
        Some(s) => parse_prime_sets(s, cfg)?,
        None => BTreeMap::new(),
    };
    Representation::new(family, a.all_min, unitary, parse_rule(&a.tail)?)
}

fn certificate_caveat(q: &IrreduciblePoly) -> Option<String> {
    (q.certificate() == ivp_core::irreducible::Certificate::CallerAsserted)
        .then(|| format!("caveat: irreducibility of {q} is caller-asserted, not certified"))
}

fn ring_json(r: &RingSpec) -> Value {
    serde_json::to_value(ring_to_json(r)).expect("ring json")
}

fn valuation_json(v: Valuation) -> Value {
    match v {
        Valuation::Finite(n) => json!(n),
        Valuation::Infinite => json!("inf"),
    }
}

fn set_json(s: &PAdicSet) -> Value {
    json!({ "p": s.prime().get(), "set": s.to_string() })
}

fn nonunitary_report(a: NonunitaryAnswer, q: &IrreduciblePoly) -> Report {
    let mut r = Report::new(Answer::Tri(a.answer)).line(a.reason.clone()).with("reason", json!(a.reason));
    if let Some(root) = &a.root {
        r = r.line(format!("root certificate: {root}")).with("root", root.to_json());
    }
    if let Some(w) = &a.witness {
        r = r
            .line(format!("witness: {w}"))
            .with("witness", serde_json::to_value(w).expect("witness json"));
    }
    if let Some(c) = certificate_caveat(q) {
        r = r.line(c.clone()).with("caveat", json!(c));
    }
    r
}

fn membership_json(m: &AdelicMembership) -> Value {
    serde_json::to_value(m).expect("membership json")
}

fn run(cli: &Cli, cfg: &Config) -> Result<Report> {
    let assert = cli.assert_irreducible;
    Ok(match &cli.command {
        Command::Member { alpha, set } => {
            let s = parse_set(set, cfg)?;
            Report::new(Answer::Bool(s.member(&parse_rat(alpha)?)?)).with("set", set_json(&s))
        }
        Command::Closure { set } => {
            let c = parse_set(set, cfg)?.closure();
            Report::new(Answer::Value(c.to_string())).with("closure", set_json(&c))
        }
        Command::Subset { a, b } => Report::new(Answer::Bool(parse_set(a, cfg)?.is_subset(&parse_set(b, cfg)?)?)),
        Command::Dense { e, f } => Report::new(Answer::Bool(parse_set(e, cfg)?.is_dense_in(&parse_set(f, cfg)?)?)),
        Command::Isolated { set } => {
            let iso = parse_set(set, cfg)?.isolated_points();
            let pts: Vec<String> = iso.points.iter().map(fmt_rat).collect();
            let tails: Vec<String> = iso.tails.iter().map(|s| s.to_string()).collect();
            let shown = if iso.is_empty() { format!("empty({})", iso.p) } else { iso.as_set().to_string() };
            Report::new(Answer::Value(shown)).with("points", json!(pts)).with("tails", json!(tails))
        }
        Command::Roots { q, set } => {
            let q = irreducible(q, assert, cfg)?;
            let roots = roots_in_set(&q, &parse_set(set, cfg)?, cfg)?;
            for r in &roots {
                r.validate(&q)?;
            }
            let mut rep = Report::new(Answer::Value(format!("{} root(s)", roots.len())))
                .with("roots", Value::Array(roots.iter().map(|r| r.to_json()).collect()));
            for r in &roots {
                rep = rep.line(r.to_string());
            }
            if let Some(c) = certificate_caveat(&q) {
                rep = rep.line(c);
            }
            rep
        }
        Command::Maxval { q, set } => {
            let q = irreducible(q, assert, cfg)?;
            match max_valuation(&q, &parse_set(set, cfg)?, cfg)? {
                None => Report::new(Answer::Value("-inf (empty set)".into())).with("value", json!("-inf")),
                Some(m) => {
                    let shown = match m.value {
                        Valuation::Finite(n) => n.to_string(),
                        Valuation::Infinite => "inf".into(),
                    };
                    let mut rep = Report::new(Answer::Value(shown)).with("value", valuation_json(m.value));
                    if let Some(w) = &m.witness {
                        rep = rep.line(format!("attained at {}", fmt_rat(w))).with("witness", json!(fmt_rat(w)));
                    }
                    rep
                }
            }
        }
        Command::Intval { poly, set } => {
            let f = poly.parse()?;
            Report::new(Answer::Bool(is_integer_valued(&f, &parse_set(set, cfg)?, cfg)?))
        }
        Command::Witness { q, family, set, alpha } => match (q, family, set, alpha) {
            (Some(q), Some(family), None, None) => {
                let q = irreducible(q, assert, cfg)?;
                let fam = parse_prime_sets(family, cfg)?;
                let w = witness_rational_function(&q, &fam, cfg)?;
                let ok = w.verify(&fam, cfg)?;
                Report::new(Answer::Value(w.to_string()))
                    .line(format!("verified: {ok}"))
                    .with("witness", serde_json::to_value(&w).expect("witness json"))
                    .with("verified", json!(ok))
            }
            (None, None, Some(set), Some(alpha)) => {
                let s = parse_set(set, cfg)?;
                let a = parse_rat(alpha)?;
                let f = separating_polynomial(&s, &a, cfg)?;
                let ok = is_integer_valued(&f, &s, cfg)? && !ivp_core::arith::in_zp(&f.eval(&a), s.prime());
                Report::new(Answer::Value(f.to_string()))
                    .line(format!("value at {}: {}", fmt_rat(&a), fmt_rat(&f.eval(&a))))
                    .line(format!("verified: {ok}"))
                    .with("polynomial", json!(f.to_string()))
                    .with("verified", json!(ok))
            }
            _ => return Err(Error::Invalid("witness needs either --q with --family, or --set with --alpha".into())),
        },
        Command::RingEq { r1, r2 } => Report::new(Answer::Bool(ring_equal(&ring_arg(r1, cfg)?, &ring_arg(r2, cfg)?, cfg)?)),
        Command::RingContains { r1, r2 } => {
            Report::new(Answer::Bool(ring_contains(&ring_arg(r1, cfg)?, &ring_arg(r2, cfg)?, cfg)?))
        }
        Command::RepEq { rep, ring } => {
            let rep = rep_arg(rep, assert, cfg)?;
            match ring {
                Some(ring) => {
                    let c = representation_equals(&rep, &ring_arg(ring, cfg)?, cfg)?;
                    let mut r = Report::new(Answer::Tri(c.answer));
                    if let Some(p) = c.not_dense_at {
                        r = r.line(format!("E_{p} is not dense in Z_{p}(R)")).with("not_dense_at", json!(p.get()));
                    }
                    if let Some(q) = &c.missing {
                        r = r
                            .line(format!("the family lacks V_q for q = {q}, which has no root and finitely many primes of positive value"))
                            .with("missing", json!(q.to_string()));
                    }
                    r
                }
                None => {
                    let o = ring_of(&rep, cfg)?;
                    let mut r = Report::new(Answer::Value(o.ring.to_string()))
                        .line(format!("polynomial: {}", o.polynomial))
                        .with("ring", ring_json(&o.ring))
                        .with("polynomial", json!(o.polynomial))
                        .with("representation", serde_json::to_value(representation_to_json(&rep)).expect("rep json"));
                    if let Some(q) = &o.missing {
                        r = r
                            .line(format!("not a polynomial ring: V_q is missing for q = {q}; the ring shown is its polynomial part"))
                            .with("missing", json!(q.to_string()));
                    }
                    r
                }
            }
        }
        Command::UnitaryContains { rep, p, alpha } => {
            let rep = rep_arg(rep, assert, cfg)?;
            Report::new(Answer::Bool(unitary_contains(&rep, parse_prime(p)?, &parse_rat(alpha)?, cfg)?))
        }
        Command::NonunitaryContains { rep, q } => {
            let rep = rep_arg(rep, assert, cfg)?;
            let q = irreducible(q, assert, cfg)?;
            nonunitary_report(nonunitary_contains(&rep, &q, cfg)?, &q)
        }
        Command::Superfluous { rep, q, p, alpha } => {
            let rep = rep_arg(rep, assert, cfg)?;
            match (q, p, alpha) {
                (Some(q), None, None) => {
                    let q = irreducible(q, assert, cfg)?;
                    nonunitary_report(superfluous_nonunitary(&rep, &q, cfg)?, &q)
                }
                (None, Some(p), Some(alpha)) => {
                    let s = superfluous_unitary(&rep, parse_prime(p)?, &parse_rat(alpha)?, cfg)?;
                    Report::new(Answer::Bool(s)).line(if s {
                        "not isolated in E_p, so superfluous"
                    } else {
                        "isolated in E_p, so not superfluous"
                    })
                }
                _ => return Err(Error::Invalid("superfluous needs either --q, or --p with --alpha".into())),
            }
        }
        Command::MinExt { ring, p } => {
            let r = ring_arg(ring, cfg)?;
            let m = minimal_extensions(&r, parse_prime(p)?, cfg)?;
            let mut exts = Vec::new();
            for x in &m.points {
                exts.push(json!({ "drop": fmt_rat(x), "ring": ring_json(&m.extension_for(&r, x, cfg)?) }));
            }
            let families: Vec<String> = m.families.iter().map(|s| s.to_string()).collect();
            let mut rep = Report::new(Answer::Value(format!(
                "{} single extension(s), {} famil{}",
                m.points.len(),
                m.families.len(),
                if m.families.len() == 1 { "y" } else { "ies" }
            )))
            .with("extensions", Value::Array(exts))
            .with("families", json!(families));
            for d in m.describe() {
                rep = rep.line(d);
            }
            rep
        }
        Command::Irredundant { ring } => {
            Report::new(Answer::Tri(has_irredundant_representation(&ring_arg(ring, cfg)?, cfg)?))
        }
        Command::Localize { ring, p } => {
            let l = localize(&ring_arg(ring, cfg)?, parse_prime(p)?, cfg)?;
            Report::new(Answer::Value(l.to_string())).with("ring", ring_json(&l))
        }
        Command::Globalize { parts, tail } => {
            let g = globalize(parse_prime_sets(parts, cfg)?, parse_rule(tail)?, cfg)?;
            Report::new(Answer::Value(g.to_string())).with("ring", ring_json(&g))
        }
        Command::Simple { ring } => {
            let a = is_simple_integer_set_ring(&ring_arg(ring, cfg)?, cfg)?;
            Report::new(Answer::Tri(a.answer)).line(a.reason.clone()).with("reason", json!(a.reason))
        }
        Command::AdeleProd { set, pres } => {
            Report::new(Answer::Bool(product_closure_member(&parse_pres(pres)?, &parse_intset(set)?, cfg)?))
        }
        Command::AdeleHat { set, pres } => {
            let m = adelic_closure_member(&parse_pres(pres)?, &parse_intset(set)?, cfg)?;
            let mut r = Report::new(Answer::Bool(m.member)).with("membership", membership_json(&m));
            if let Some(c) = &m.combined {
                r = r.line(format!("combined class: {c}"));
            }
            if let Some(w) = &m.witness {
                r = r.line(format!("witness: {w}"));
            }
            r
        }
        Command::AdeleDiff { set, pres } => {
            let c = closures_differ(&parse_pres(pres)?, &parse_intset(set)?, cfg)?;
            let mut r = Report::new(Answer::Bool(c.differ))
                .line(format!("product closure: {}", c.product))
                .line(format!("adelic closure: {}", c.adelic.member))
                .with("product", json!(c.product))
                .with("adelic", membership_json(&c.adelic));
            if let Some(k) = &c.adelic.combined {
                r = r.line(format!("combined class: {k}"));
            }
            r
        }
        Command::Selftest => {
            let results = selftest::run(cfg);
            let failed = results.iter().filter(|r| !r.passed).count();
            let mut r = Report::new(Answer::Bool(failed == 0)).with("cases", serde_json::to_value(&results).expect("json"));
            for c in &results {
                let mark = if c.passed { "PASS" } else { "FAIL" };
                r = r.line(if c.detail.is_empty() { format!("{mark} {}", c.name) } else { format!("{mark} {}: {}", c.name, c.detail) });
            }
            r.line(format!("{} of {} cases passed", results.len() - failed, results.len()))
        }
    })
}

fn effective_config(cli: &Cli) -> Result<Config> {
    let mut cfg = match &cli.config {
        Some(path) => Config::from_key_values(&load(&format!("@{path}"))?)?,
        None => Config::default(),
    };
    let flags: [(&str, Option<String>); 5] = [
        ("residue_cap", cli.residue_cap.map(|v| v.to_string())),
        ("prime_scan_bound", cli.prime_scan_bound.map(|v| v.to_string())),
        ("degree_bound", cli.degree_bound.map(|v| v.to_string())),
        ("primality_bits", cli.primality_bits.map(|v| v.to_string())),
        ("irreducibility_prime_bound", cli.irreducibility_prime_bound.map(|v| v.to_string())),
    ];
    for (k, v) in flags {
        if let Some(v) = v {
            cfg.set(k, &v)?;
        }
    }
    Ok(cfg)
}

fn config_line(cfg: &Config) -> String {
    format!(
        "config: residue_cap={} prime_scan_bound={} degree_bound={} primality_bits={} irreducibility_prime_bound={}",
        cfg.residue_cap, cfg.prime_scan_bound, cfg.degree_bound, cfg.primality_bits, cfg.irreducibility_prime_bound
    )
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Member { .. } => "member",
        Command::Closure { .. } => "closure",
        Command::Subset { .. } => "subset",
        Command::Dense { .. } => "dense",
        Command::Isolated { .. } => "isolated",
        Command::Roots { .. } => "roots",
        Command::Maxval { .. } => "maxval",
        Command::Intval { .. } => "intval",
        Command::Witness { .. } => "witness",
        Command::RingEq { .. } => "ring-eq",
        Command::RingContains { .. } => "ring-contains",
        Command::RepEq { .. } => "rep-eq",
        Command::UnitaryContains { .. } => "unitary-contains",
        Command::NonunitaryContains { .. } => "nonunitary-contains",
        Command::Superfluous { .. } => "superfluous",
        Command::MinExt { .. } => "min-ext",
        Command::Irredundant { .. } => "irredundant",
        Command::Localize { .. } => "localize",
        Command::Globalize { .. } => "globalize",
        Command::Simple { .. } => "simple",
        Command::AdeleProd { .. } => "adele-prod",
        Command::AdeleHat { .. } => "adele-hat",
        Command::AdeleDiff { .. } => "adele-diff",
        Command::Selftest => "selftest",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let name = command_name(&cli.command);
    let outcome = effective_config(&cli).and_then(|cfg| run(&cli, &cfg).map(|r| (r, cfg)));
    match outcome {
        Err(e) => {
            if cli.json {
                out!("{}", json!({ "schema": 1, "command": name, "error": e.to_string() }));
            } else {
                eprintln!("error: {e}");
            }
            ExitCode::from(1)
        }
        Ok((report, cfg)) => {
            let (shown, answer_json, code) = match &report.answer {
                Answer::Bool(b) => (b.to_string(), json!(b), 0),
                Answer::Tri(t) => (t.to_string(), json!(t), if matches!(t, TriState::Unknown(_)) { 2 } else { 0 }),
                Answer::Value(v) => (v.clone(), json!(v), 0),
            };
            // a failing selftest is a definite but bad outcome
            let code = if name == "selftest" && matches!(report.answer, Answer::Bool(false)) { 1 } else { code };
            if cli.json {
                let mut out = json!({
                    "schema": 1,
                    "command": name,
                    "answer": answer_json,
                    "config": serde_json::to_value(&cfg).expect("config json"),
                });
                if let Value::Object(extra) = report.data {
                    for (k, v) in extra {
                        out[k] = v;
                    }
                }
                out!("{}", serde_json::to_string_pretty(&out).expect("json"));
            } else {
                out!("{shown}");
                for l in &report.lines {
                    out!("  {l}");
                }
                out!("{}", config_line(&cfg));
            }
            ExitCode::from(code)
        }
    }
}
