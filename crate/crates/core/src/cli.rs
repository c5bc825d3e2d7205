//! Command-line front end: validated run configuration, one runner per subcommand,
//! JSON/CSV rendering with the configuration and version embedded.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::algrec::{self, AlgRelation};
use crate::classnum;
use crate::error::{consistency, Error, Result};
use crate::field::{Fe, Field};
use crate::ideals::{IdealHNF, RingA1};
use crate::jinv::{self, JValue};
use crate::lattice;
use crate::laurent::Laurent;
use crate::poly::Poly;
use crate::quadunit::QuadUnit;
use crate::zeta::{self, ZetaValue};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Largest accepted `--prec`.
pub const MAX_PREC: usize = 4000;
/// Largest accepted `--nmax`.
pub const MAX_NMAX: usize = 64;
/// Coefficients per portrait row.
pub const PORTRAIT_COEFFS: usize = 8;

#[derive(Parser, Debug)]
#[command(name = "qjinv", version, about = "Quantum modular invariants of quadratic units over F_q(T)")]
pub struct Cli {
    #[command(subcommand)]
    pub cmd: Cmd,
    #[command(flatten)]
    pub opts: Opts,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Cmd {
    /// The unit f, its conjugate, √D and the Binet polynomials Q_n with their errors.
    Unit,
    /// Structural and brute-force approximation lattices side by side.
    Lattice,
    /// ζ(q-1) and ζ(q^2-1) of the ε-lattices and of the ideals a_i.
    Zeta,
    /// j_ε(f) at ε = q^-(N d + l) for every l; with b = 0 the rational f = a.
    Jeps,
    /// Limit route against ideal route for every j(a_i).
    Jqt,
    /// N(j^qt(f)) and its comparison with a sampled translated family.
    Norm,
    /// h_K, h_{A1}, h_{O_K} from point counts.
    Classnum,
    /// Polynomial relations over F_q(T) for every j(a_i) and for the norm.
    Minpoly,
    /// Leading coefficients of j_ε for e = 2d ..= nmax d.
    Portrait,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(clap::Args, Debug, Clone)]
pub struct Opts {
    /// Characteristic.
    #[arg(long, global = true, default_value_t = 3)]
    pub p: u32,
    /// Degree of F_q over F_p.
    #[arg(long, global = true, default_value_t = 1)]
    pub m: u32,
    /// Modulus of F_q as comma-separated integers, constant term first.
    #[arg(long, global = true)]
    pub modulus: Option<String>,
    /// Coefficients of a as comma-separated field elements, constant term first.
    #[arg(long, global = true)]
    pub a: Option<String>,
    /// The constant b.
    #[arg(long, global = true, default_value = "1")]
    pub b: String,
    /// Number of Laurent coefficients requested.
    #[arg(long, global = true, default_value_t = 20)]
    pub prec: usize,
    /// Largest N in ε = q^-(N d + l).
    #[arg(long, global = true)]
    pub nmax: Option<usize>,
    /// Degree bound: B for lattice, D[,B] for minpoly.
    #[arg(long, global = true)]
    pub degbound: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Seed for sampled ideals.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

/// A rejected flag value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UsageError {
    pub flag: &'static str,
    pub message: String,
}

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "invalid value for {}: {}", self.flag, self.message)
    }
}

fn usage(flag: &'static str, message: impl std::fmt::Display) -> UsageError {
    UsageError { flag, message: message.to_string() }
}

/// A fully resolved and validated configuration; embedded verbatim in every artifact.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub command: Cmd,
    pub p: u32,
    pub m: u32,
    pub modulus: Vec<u32>,
    pub a: Vec<String>,
    pub b: String,
    pub prec: usize,
    pub nmax: usize,
    pub degbound: Vec<usize>,
    pub format: Format,
    /// Where the artifact goes; kept out of the artifact so it is path independent.
    #[serde(skip)]
    pub out: Option<String>,
    pub seed: u64,
    #[serde(skip)]
    field: Option<Field>,
}

fn parse_list<T: std::str::FromStr>(flag: &'static str, s: &str) -> std::result::Result<Vec<T>, UsageError> {
    s.split(',')
        .map(|t| t.trim().parse::<T>().map_err(|_| usage(flag, format!("cannot parse '{t}'"))))
        .collect()
}

impl RunConfig {
    pub fn from_opts(command: Cmd, o: &Opts) -> std::result::Result<RunConfig, UsageError> {
        let modulus = match &o.modulus {
            Some(s) => Some(parse_list::<u32>("--modulus", s)?),
            None => None,
        };
        if o.m == 0 || o.m > 16 {
            return Err(usage("--m", "must lie in 1..=16"));
        }
        let field = Field::new(o.p, o.m, modulus).map_err(|e| usage("--p/--m/--modulus", e))?;
        let a_txt = o.a.as_deref().ok_or_else(|| usage("--a", "required"))?;
        let a: Vec<Fe> = a_txt
            .split(',')
            .map(|t| field.parse_elem(t))
            .collect::<Result<_>>()
            .map_err(|e| usage("--a", e))?;
        let a = Poly::new(&field, a);
        if a.deg().is_none_or(|d| d == 0) || !a.is_monic() {
            return Err(usage("--a", "a must be monic of degree at least 1"));
        }
        let b = field.parse_elem(&o.b).map_err(|e| usage("--b", e))?;
        if b.is_zero() && command != Cmd::Jeps {
            return Err(usage("--b", "b must be nonzero (b = 0 is accepted by jeps only)"));
        }
        if o.prec == 0 || o.prec > MAX_PREC {
            return Err(usage("--prec", format!("must lie in 1..={MAX_PREC}")));
        }
        let d = a.deg().unwrap();
        let nmax = match (o.nmax, command) {
            (Some(n), _) => n,
            (None, Cmd::Portrait) => 8,
            (None, Cmd::Lattice) => 3,
            (None, _) => jinv::default_nmax(d, o.prec),
        };
        if nmax == 0 || nmax > MAX_NMAX {
            return Err(usage("--nmax", format!("must lie in 1..={MAX_NMAX}")));
        }
        if command == Cmd::Portrait && nmax < 2 {
            return Err(usage("--nmax", "portrait needs nmax >= 2"));
        }
        let given = match &o.degbound {
            Some(s) => parse_list::<usize>("--degbound", s)?,
            None => Vec::new(),
        };
        let degbound = match command {
            Cmd::Lattice => match given.as_slice() {
                [] => vec![8],
                [b] => vec![*b],
                _ => return Err(usage("--degbound", "lattice takes a single bound B")),
            },
            Cmd::Minpoly => {
                let dmax = given.first().copied().unwrap_or(4);
                if dmax == 0 {
                    return Err(usage("--degbound", "D must be positive"));
                }
                let auto = (o.prec.saturating_sub(algrec::MARGIN) / (dmax + 1)).saturating_sub(1);
                match given.as_slice() {
                    [] | [_] => vec![dmax, auto],
                    [_, b] => vec![dmax, *b],
                    _ => return Err(usage("--degbound", "minpoly takes D or D,B")),
                }
            }
            _ => given,
        };
        Ok(RunConfig {
            command,
            p: o.p,
            m: o.m,
            modulus: field.modulus().to_vec(),
            a: a.coeffs().iter().map(|&c| field.format_elem(c)).collect(),
            b: field.format_elem(b),
            prec: o.prec,
            nmax,
            degbound,
            format: o.format,
            out: o.out.as_ref().map(|p| p.display().to_string()),
            seed: o.seed,
            field: Some(field),
        })
    }

    pub fn field(&self) -> &Field {
        self.field.as_ref().expect("validated config")
    }

    fn a_poly(&self) -> Poly {
        let f = self.field();
        Poly::new(f, self.a.iter().map(|c| f.parse_elem(c).expect("validated")).collect())
    }

    fn b_elem(&self) -> Fe {
        self.field().parse_elem(&self.b).expect("validated")
    }

    pub fn unit(&self) -> Result<QuadUnit> {
        QuadUnit::new(&self.a_poly(), self.b_elem(), self.prec)
    }
}

/// A rendered artifact: the JSON result and an optional CSV table.
pub struct Output {
    pub json: Value,
    pub csv: Option<String>,
}

fn csv_line(fields: &[String]) -> String {
    let mut s = fields.join(",");
    s.push('\n');
    s
}

/// The series, or the marker `INFINITY`.
fn jtext(j: &JValue) -> String {
    j.value.as_ref().map_or_else(|| INFINITY.to_string(), |v| v.to_string())
}

pub const INFINITY: &str = "INFINITY";

fn jvalue_json(j: &JValue) -> Value {
    json!({
        "route": j.route,
        "infinity": j.is_infinite(),
        "laurent": jtext(j),
        "delta": j.delta.to_string(),
        "zeta_prec": j.zeta_prec,
    })
}

fn zeta_json(z: &ZetaValue, index: usize) -> Value {
    json!({
        "index": index,
        "source": z.source,
        "n": z.n,
        "exponent": z.exponent,
        "value": z.value.to_string(),
        "tail_exp": z.tail_exp,
        "layers": z.layers,
    })
}

fn cmd_unit(cfg: &RunConfig) -> Result<Output> {
    let u = cfg.unit()?;
    let d = u.d();
    let w = u.with_prec(cfg.prec.max(2 * (cfg.nmax + 1) * d + 8))?;
    let mut rows = Vec::new();
    let mut csv = csv_line(&["n".into(), "l".into(), "q_n".into(), "error".into()]);
    for n in 0..=cfg.nmax {
        let qn = u.q_n(n);
        for l in 0..d {
            let err = w.error(n, l)?;
            rows.push(json!({"n": n, "l": l, "q_n": qn.display("T"), "error": err.to_string()}));
            csv.push_str(&csv_line(&[n.to_string(), l.to_string(), qn.display("T"), err.to_string()]));
        }
    }
    let json = json!({
        "unit": u.descriptor(),
        "d": d,
        "disc": u.disc().display("T"),
        "f": u.f().to_string(),
        "fstar": u.fstar().to_string(),
        "sqrt_d": u.sqrt_d().to_string(),
        "binet": rows,
    });
    Ok(Output { json, csv: Some(csv) })
}

fn cmd_lattice(cfg: &RunConfig) -> Result<Output> {
    let u = cfg.unit()?;
    let d = u.d();
    let degbound = cfg.degbound[0];
    let mut entries = Vec::new();
    let mut csv = csv_line(&["e".into(), "kind".into(), "degree".into(), "value".into()]);
    let mut mismatch = None;
    for n in 0..=cfg.nmax {
        if n * d > degbound {
            break;
        }
        for l in 0..d {
            let e = (n * d + l) as i64;
            let w = u.with_prec(d + e as usize + degbound + 4)?;
            let st = lattice::structural(&u, n, l, degbound)?.canonical();
            let bf = lattice::bruteforce(w.f(), e, degbound)?;
            let equal = st.same_span(&bf);
            if !equal && mismatch.is_none() {
                mismatch = Some(e);
            }
            for lat in [&st, &bf] {
                for p in &lat.elements {
                    csv.push_str(&csv_line(&[
                        e.to_string(),
                        lat.kind.to_string(),
                        p.deg_i().to_string(),
                        p.display("T"),
                    ]));
                }
            }
            entries.push(json!({
                "e": e, "N": n, "l": l, "equal": equal,
                "structural": st.elements.iter().map(|p| p.display("T")).collect::<Vec<_>>(),
                "bruteforce": bf.elements.iter().map(|p| p.display("T")).collect::<Vec<_>>(),
            }));
        }
    }
    if let Some(e) = mismatch {
        return Err(consistency!("structural and brute-force lattices differ at e = {e}"));
    }
    Ok(Output { json: json!({"unit": u.descriptor(), "degbound": degbound, "lattices": entries}), csv: Some(csv) })
}

fn cmd_zeta(cfg: &RunConfig) -> Result<Output> {
    let u = cfg.unit()?;
    let ring = RingA1::new(&u)?;
    let d = u.d();
    let mut values = Vec::new();
    let mut csv = csv_line(
        &["source", "index", "n", "exponent", "layers", "tail_exp", "value"].map(String::from),
    );
    let mut push = |z: &ZetaValue, idx: usize, kind: &str| {
        csv.push_str(&csv_line(&[
            kind.to_string(),
            idx.to_string(),
            z.n.to_string(),
            z.exponent.to_string(),
            z.layers.to_string(),
            z.tail_exp.to_string(),
            z.value.to_string(),
        ]));
        values.push(zeta_json(z, idx));
    };
    for l in 0..d {
        for n in 1..=2 {
            push(&zeta::zeta_eps(&u, cfg.nmax, l, n, cfg.prec)?, l, "eps");
        }
    }
    for i in 0..d {
        let id = IdealHNF::a_i(&ring, i)?;
        for n in 1..=2 {
            push(&zeta::zeta_ideal(&id, n, cfg.prec)?, i, "ideal");
        }
    }
    Ok(Output { json: json!({"unit": u.descriptor(), "nmax": cfg.nmax, "values": values}), csv: Some(csv) })
}

fn jrow_csv(j: &JValue, e: i64, n: usize, l: usize) -> String {
    csv_line(&[
        e.to_string(),
        n.to_string(),
        l.to_string(),
        j.is_infinite().to_string(),
        jtext(j),
    ])
}

fn cmd_jeps(cfg: &RunConfig) -> Result<Output> {
    let d = cfg.a_poly().deg().unwrap();
    let n = cfg.nmax;
    let mut values = Vec::new();
    let mut csv = csv_line(&["e", "N", "l", "infinity", "value"].map(String::from));
    let rational = cfg.b_elem().is_zero();
    let u = if rational { None } else { Some(cfg.unit()?) };
    for l in 0..d {
        let e = (n * d + l) as i64;
        let j = match &u {
            Some(u) => jinv::j_eps(u, n, l, cfg.prec)?,
            // X^2 - aX has the root a itself
            None => jinv::j_bruteforce(&Laurent::from_poly(&cfg.a_poly()), e, cfg.prec)?,
        };
        csv.push_str(&jrow_csv(&j, e, n, l));
        let mut v = jvalue_json(&j);
        v["e"] = json!(e);
        v["N"] = json!(n);
        v["l"] = json!(l);
        values.push(v);
    }
    let subject = match &u {
        Some(u) => json!({"unit": u.descriptor()}),
        None => json!({"rational": cfg.a_poly().display("T")}),
    };
    Ok(Output { json: json!({"subject": subject, "values": values}), csv: Some(csv) })
}

fn cmd_jqt(cfg: &RunConfig) -> Result<Output> {
    let u = cfg.unit()?;
    let rep = jinv::jqt(&u, cfg.prec, cfg.nmax)?;
    let vals = rep.values();
    jinv::pairwise_distinct(&vals)?;
    let norm = if vals.iter().all(|v| !v.is_infinite()) { Some(jinv::norm(&vals)?.to_string()) } else { None };
    let mut entries: Vec<_> = rep.entries.iter().collect();
    entries.sort_by_key(|e| e.i);
    let mut csv = csv_line(&["i", "l", "route", "infinity", "agreement", "value"].map(String::from));
    let mut values = Vec::new();
    let mut limits = Vec::new();
    for e in &entries {
        for (route, j) in [("ideal", &e.ideal), ("limit", &e.limit)] {
            csv.push_str(&csv_line(&[
                e.i.to_string(),
                e.l.to_string(),
                route.to_string(),
                j.is_infinite().to_string(),
                e.agreement.to_string(),
                jtext(j),
            ]));
        }
        let mut v = jvalue_json(&e.ideal);
        v["i"] = json!(e.i);
        v["l"] = json!(e.l);
        values.push(v);
        let mut v = jvalue_json(&e.limit);
        v["i"] = json!(e.i);
        v["l"] = json!(e.l);
        v["agreement"] = json!(e.agreement);
        limits.push(v);
    }
    let json = json!({
        "unit": u.descriptor(),
        "prec": cfg.prec,
        "nmax": rep.nmax,
        "values": values,
        "limit_values": limits,
        "norm": norm,
        "agreement": {"min_agreement": rep.min_agreement, "max_disagreement_exp": rep.max_disagreement_exp},
    });
    Ok(Output { json, csv: Some(csv) })
}

/// Degree-one point ideals of `A1` in a seeded random order.
pub fn sampled_points(ring: &RingA1, seed: u64) -> Vec<(Fe, Fe)> {
    let u = ring.unit();
    let fl = ring.field();
    let mut pts: Vec<(Fe, Fe)> = fl
        .elements()
        .flat_map(|t| fl.elements().map(move |x| (t, x)))
        .filter(|&(t, x)| fl.sub(fl.mul(x, x), fl.add(fl.mul(u.a().eval(t), x), u.b())).is_zero())
        .collect();
    pts.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    pts
}

/// First sampled point ideal whose class is outside `{[a_i]}`.
pub fn non_family_ideal(ring: &RingA1, seed: u64) -> Result<Option<(Fe, Fe, IdealHNF)>> {
    let family: Vec<IdealHNF> = (0..ring.d()).map(|i| IdealHNF::a_i(ring, i)).collect::<Result<_>>()?;
    for (t, x) in sampled_points(ring, seed) {
        let b = IdealHNF::point(ring, t, x)?;
        let mut inside = false;
        for a in &family {
            if b.same_class(a)? {
                inside = true;
                break;
            }
        }
        if !inside {
            return Ok(Some((t, x, b)));
        }
    }
    Ok(None)
}

fn cmd_norm(cfg: &RunConfig) -> Result<Output> {
    let u = cfg.unit()?;
    let ring = RingA1::new(&u)?;
    let fl = u.field();
    let n1 = jinv::norm_jqt(&u, cfg.prec)?;
    let classes = match classnum::class_numbers(&u) {
        Ok(c) => json!(c),
        Err(Error::Unsupported(_)) => Value::Null,
        Err(e) => return Err(e),
    };
    let mut csv = csv_line(&["family", "norm"].map(String::from));
    csv.push_str(&csv_line(&["(1)".into(), n1.to_string()]));
    let sample = match non_family_ideal(&ring, cfg.seed)? {
        None => Value::Null,
        Some((t, x, b)) => {
            let nb = jinv::translated_norm(&ring, &b, cfg.prec)?;
            let n1_2 = jinv::norm_jqt(&u, 2 * cfg.prec)?;
            let nb_2 = jinv::translated_norm(&ring, &b, 2 * cfg.prec)?;
            let diff = jinv::persistent_difference(&n1, &nb, &n1_2, &nb_2);
            let label = format!("b=({},{})", fl.format_elem(t), fl.format_elem(x));
            csv.push_str(&csv_line(&[label, nb.to_string()]));
            json!({
                "point": {"t": fl.format_elem(t), "x": fl.format_elem(x)},
                "ideal": b.to_json(),
                "translated_norm": nb.to_string(),
                "distinguishing_exp": jinv::distinguishing_exp(&n1, &nb),
                "persistent_difference": diff.map(|(e, c)| json!({"exp": e, "coeff": fl.format_elem(c)})),
            })
        }
    };
    let json = json!({"unit": u.descriptor(), "prec": cfg.prec, "norm": n1.to_string(), "class_numbers": classes, "sample": sample});
    Ok(Output { json, csv: Some(csv) })
}

fn cmd_classnum(cfg: &RunConfig) -> Result<Output> {
    let u = cfg.unit()?;
    let c = classnum::class_numbers(&u)?;
    let mut csv = csv_line(&["genus", "h_k", "h_a1", "h_ok", "point_counts", "l_poly"].map(String::from));
    let join = |v: Vec<String>| v.join(" ");
    csv.push_str(&csv_line(&[
        c.genus.to_string(),
        c.h_k.to_string(),
        c.h_a1.to_string(),
        c.h_ok.to_string(),
        join(c.point_counts.iter().map(u64::to_string).collect()),
        join(c.l_poly.iter().map(i64::to_string).collect()),
    ]));
    Ok(Output { json: json!({"unit": u.descriptor(), "class_numbers": c}), csv: Some(csv) })
}

fn relation_json(label: &str, rel: &Option<AlgRelation>, verified: bool) -> Value {
    json!({"subject": label, "relation": rel, "verified": verified})
}

fn cmd_minpoly(cfg: &RunConfig) -> Result<Output> {
    let u = cfg.unit()?;
    let ring = RingA1::new(&u)?;
    let (dmax, bmax) = (cfg.degbound[0], cfg.degbound[1]);
    let prec2 = 2 * cfg.prec;
    let mut subjects = Vec::new();
    let mut csv = csv_line(&["subject", "degree", "deg_bound", "verified", "coeffs"].map(String::from));
    let mut row = |label: &str, rel: &Option<AlgRelation>, ok: bool| {
        let (dg, bd, cs) = match rel {
            Some(r) => (
                r.degree.to_string(),
                r.deg_bound.to_string(),
                r.coeffs.iter().map(|c| c.display("T")).collect::<Vec<_>>().join(" ; "),
            ),
            None => (String::new(), String::new(), String::new()),
        };
        csv.push_str(&csv_line(&[label.to_string(), dg, bd, ok.to_string(), cs]));
        subjects.push(relation_json(label, rel, ok));
    };
    let mut degrees = Vec::new();
    for i in 0..u.d() {
        let j = jinv::j_ideal(&ring, i, cfg.prec)?;
        let x = j.finite()?;
        let mut rel = algrec::minpoly_search(x, dmax, bmax)?;
        let ok = match rel.as_mut() {
            Some(r) => algrec::verify_relation(r, prec2, |p| Ok(jinv::j_ideal(&ring, i, p)?.finite()?.clone())),
            None => false,
        };
        degrees.push(rel.as_ref().map(|r| r.degree));
        row(&format!("j(a_{i})"), &rel, ok);
    }
    let nrm = jinv::norm_jqt(&u, cfg.prec)?;
    let mut rel = algrec::minpoly_search(&nrm, dmax, bmax)?;
    let ok = match rel.as_mut() {
        Some(r) => algrec::verify_relation(r, prec2, |p| jinv::norm_jqt(&u, p)),
        None => false,
    };
    row("norm", &rel, ok);
    let shared = degrees.iter().all(|d| d.is_some() && *d == degrees[0]);
    let json = json!({
        "unit": u.descriptor(),
        "prec": cfg.prec,
        "verify_prec": prec2,
        "max_degree": dmax,
        "max_coeff_degree": bmax,
        "subjects": subjects,
        "shared_degree": shared,
    });
    Ok(Output { json, csv: Some(csv) })
}

/// One portrait row: the leading coefficients of `j_ε` at `e = N d + l`.
#[derive(Clone, Debug, Serialize)]
pub struct PortraitRow {
    pub e: usize,
    pub n: usize,
    pub l: usize,
    /// `None` for infinity.
    pub lead_exp: Option<i64>,
    pub coeffs: Vec<String>,
}

/// Rows for `e = 2d ..= nmax d`.
pub fn portrait(u: &QuadUnit, nmax: usize, prec: usize) -> Result<Vec<PortraitRow>> {
    let d = u.d();
    let fl = u.field();
    let mut rows = Vec::new();
    for e in 2 * d..=nmax * d {
        let (n, l) = (e / d, e % d);
        let j = jinv::j_eps(u, n, l, prec)?;
        let (lead_exp, coeffs) = match &j.value {
            None => (None, Vec::new()),
            Some(v) => {
                let lead = v.lead_exp();
                let cs = match lead {
                    Some(le) => (0..PORTRAIT_COEFFS as i64)
                        .map(|k| v.coeff_at(le - k).map_or("?".to_string(), |c| fl.format_elem(c)))
                        .collect(),
                    None => Vec::new(),
                };
                (lead, cs)
            }
        };
        rows.push(PortraitRow { e, n, l, lead_exp, coeffs });
    }
    Ok(rows)
}

fn cmd_portrait(cfg: &RunConfig) -> Result<Output> {
    let u = cfg.unit()?;
    let rows = portrait(&u, cfg.nmax, cfg.prec)?;
    let mut header = vec!["e".to_string(), "N".into(), "l".into(), "lead_exp".into()];
    header.extend((0..PORTRAIT_COEFFS).map(|k| format!("c{k}")));
    let mut csv = csv_line(&header);
    for r in &rows {
        let mut f = vec![
            r.e.to_string(),
            r.n.to_string(),
            r.l.to_string(),
            r.lead_exp.map_or("inf".to_string(), |e| e.to_string()),
        ];
        let mut cs = r.coeffs.clone();
        cs.resize(PORTRAIT_COEFFS, String::new());
        f.extend(cs);
        csv.push_str(&csv_line(&f));
    }
    Ok(Output { json: json!({"unit": u.descriptor(), "prec": cfg.prec, "rows": rows}), csv: Some(csv) })
}

/// Runs one subcommand.
pub fn execute(cfg: &RunConfig) -> Result<Output> {
    match cfg.command {
        Cmd::Unit => cmd_unit(cfg),
        Cmd::Lattice => cmd_lattice(cfg),
        Cmd::Zeta => cmd_zeta(cfg),
        Cmd::Jeps => cmd_jeps(cfg),
        Cmd::Jqt => cmd_jqt(cfg),
        Cmd::Norm => cmd_norm(cfg),
        Cmd::Classnum => cmd_classnum(cfg),
        Cmd::Minpoly => cmd_minpoly(cfg),
        Cmd::Portrait => cmd_portrait(cfg),
    }
}

/// The artifact text with the configuration and version embedded.
pub fn render(cfg: &RunConfig, out: &Output) -> String {
    match (cfg.format, &out.csv) {
        (Format::Csv, Some(csv)) => {
            let conf = serde_json::to_string(cfg).expect("config serializes");
            format!("# qjinv {VERSION}\n# config {conf}\n{csv}")
        }
        _ => {
            let doc = json!({"program": "qjinv", "version": VERSION, "config": cfg, "result": out.json});
            let mut s = serde_json::to_string_pretty(&doc).expect("result serializes");
            s.push('\n');
            s
        }
    }
}

/// Exit statuses.
pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_CONSISTENCY: i32 = 2;

/// Parses `args`, runs the command and writes the artifact. Returns the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let cfg = match RunConfig::from_opts(cli.cmd, &cli.opts) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let out = match execute(&cfg) {
        Ok(o) => o,
        Err(e @ Error::Consistency(_)) => {
            eprintln!("{e}");
            return EXIT_CONSISTENCY;
        }
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let text = render(&cfg, &out);
    match &cli.opts.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return EXIT_USAGE;
            }
        }
        None => print!("{text}"),
    }
    EXIT_OK
}
