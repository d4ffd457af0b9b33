//! The job language behind the `ewatts` binary.
//!
//! A job file is a sequence of `;`-terminated statements. `field Q;` or
//! `field GF(p);` sets the base field for the jobs that follow (default
//! `Q`); every other statement is a command with its payload:
//!
//! ```text
//! field GF(7);
//! cohomology O(-2);
//! classify-sheaf scramble(O(1) + sky(t^2 + 1, 2));
//! watts tensor(O(2)) + h1twist(-3);
//! gamma tensor(O(1) + sky(t, 1)) at O(2) + sky(inf, 2);
//! classify-tg h1twist(-2) + 2*h1twist(-3);
//! birkhoff [[t^2, 1], [0, t^-1]];
//! affine-roundtrip k[t]/(t^3), module(2, []), action([[0, u], [0, 0]]);
//! probe-right-exact tensor(O(0));
//! ```
//!
//! Reports have one fact per line. The same facts, keyed, form the JSON
//! object printed under `--json`.

mod parse;

use std::ops::RangeInclusive;
use std::sync::Arc;

use serde_json::{json, Map, Value};

pub use parse::{parse_job, parse_jobs, parse_sheaf, ParseError};

use crate::error::{Error, Result};
use crate::exactfield::Field;
use crate::functors::{
    affine_roundtrip, classify_tg, gamma, gamma_kernel_dims, right_exactness_probe, watts_construction, AffineRing,
    Atom, Bimodule, FunctorExpr,
};
use crate::modpid::PidModule;
use crate::polypid::{birkhoff_factorize, LaurentMat, Poly, PolyMat};
use crate::random::{self, Rng64};
use crate::sheafp1::{
    cech_h0, cech_h1, render_laurent_matrix, render_poly_matrix, sheaf_of_split_in, split_classify, GluedSheaf,
    SplitType, TorsionPart,
};

/// Default degree window of the right-exactness probe.
pub const PROBE_WINDOW: RangeInclusive<i64> = -3..=3;
/// Default degree window of the `Γ` kernel table.
pub const GAMMA_WINDOW: RangeInclusive<i64> = -10..=5;

#[derive(Clone, Debug, PartialEq)]
pub struct JobSpec {
    pub field: Field,
    pub command: Command,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Command {
    Cohomology(SheafLit),
    ClassifySheaf(SheafLit),
    Watts(FunctorLit),
    /// `Γ_F(M)` when a sheaf is given, otherwise the kernel table on lines.
    Gamma(FunctorLit, Option<SheafLit>),
    ClassifyTg(FunctorLit),
    Birkhoff(LaurentMat),
    AffineRoundtrip(AffineSpec),
    ProbeRightExact(FunctorLit),
}

/// A sum of sheaf terms.
#[derive(Clone, Debug, PartialEq)]
pub struct SheafLit {
    pub terms: Vec<STerm>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum STerm {
    Line(i64),
    /// Support polynomial in `t` (`None` for the point at infinity), jet.
    Sky(Option<Poly>, u32),
    Glued { n0: usize, r0: PolyMat, n1: usize, r1: PolyMat, glue: LaurentMat },
    /// A seeded random coherent sheaf.
    Random,
    /// The inner sheaf in seeded random chart coordinates.
    Scramble(Box<SheafLit>),
    Zero,
    Times(usize, Box<STerm>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct FunctorLit {
    pub terms: Vec<FTerm>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum FTerm {
    Tensor(SheafLit),
    H1Twist(i64),
    Zero,
    Times(usize, Box<FTerm>),
}

/// `R = k[t]` or `k[t]/(relation)` acting on a `k[u]`-module.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineSpec {
    pub relation: Option<Poly>,
    /// `None` for the regular bimodule `R`.
    pub gens: Option<usize>,
    pub relations: Option<PolyMat>,
    pub action: Option<PolyMat>,
}

fn join<T>(items: &[T], f: impl Fn(&T) -> String) -> String {
    items.iter().map(f).collect::<Vec<_>>().join(" + ")
}

impl SheafLit {
    pub fn render(&self) -> String {
        join(&self.terms, STerm::render)
    }

    /// Builds the sheaf; `random` and `scramble(..)` draw from `seed`.
    pub fn build(&self, field: Field, seed: u64) -> Result<GluedSheaf> {
        build_sheaf(field, self, &mut random::rng(seed))
    }
}

impl STerm {
    pub fn render(&self) -> String {
        match self {
            STerm::Line(d) => format!("O({d})"),
            STerm::Sky(Some(p), e) => format!("sky({}, {e})", p.render("t")),
            STerm::Sky(None, e) => format!("sky(inf, {e})"),
            STerm::Glued { n0, r0, n1, r1, glue } => format!(
                "glued({n0}, {}, {n1}, {}, {})",
                render_poly_matrix(r0, "t"),
                render_poly_matrix(r1, "s"),
                render_laurent_matrix(glue)
            ),
            STerm::Random => "random".to_string(),
            STerm::Scramble(s) => format!("scramble({})", s.render()),
            STerm::Zero => "0".to_string(),
            STerm::Times(k, t) => format!("{k}*{}", t.render()),
        }
    }
}

impl FunctorLit {
    pub fn render(&self) -> String {
        join(&self.terms, FTerm::render)
    }
}

impl FTerm {
    pub fn render(&self) -> String {
        match self {
            FTerm::Tensor(s) => format!("tensor({})", s.render()),
            FTerm::H1Twist(i) => format!("h1twist({i})"),
            FTerm::Zero => "0".to_string(),
            FTerm::Times(k, t) => format!("{k}*{}", t.render()),
        }
    }
}

impl AffineSpec {
    pub fn render(&self) -> String {
        let ring = match &self.relation {
            None => "k[t]".to_string(),
            Some(f) => format!("k[t]/({})", f.render("t")),
        };
        match (self.gens, &self.relations, &self.action) {
            (Some(n), Some(r), Some(a)) => {
                let rel = if r.cols() == 0 { "[]".to_string() } else { render_poly_matrix(r, "u") };
                format!("{ring}, module({n}, {rel}), action({})", render_poly_matrix(a, "u"))
            }
            _ => format!("{ring}, regular"),
        }
    }

    fn ring(&self) -> AffineRing {
        match &self.relation {
            None => AffineRing::Polynomial,
            Some(f) => AffineRing::Quotient(f.clone()),
        }
    }
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Cohomology(_) => "cohomology",
            Command::ClassifySheaf(_) => "classify-sheaf",
            Command::Watts(_) => "watts",
            Command::Gamma(..) => "gamma",
            Command::ClassifyTg(_) => "classify-tg",
            Command::Birkhoff(_) => "birkhoff",
            Command::AffineRoundtrip(_) => "affine-roundtrip",
            Command::ProbeRightExact(_) => "probe-right-exact",
        }
    }

    pub fn render(&self) -> String {
        let body = match self {
            Command::Cohomology(s) | Command::ClassifySheaf(s) => s.render(),
            Command::Watts(f) | Command::ClassifyTg(f) | Command::ProbeRightExact(f) => f.render(),
            Command::Gamma(f, None) => f.render(),
            Command::Gamma(f, Some(s)) => format!("{} at {}", f.render(), s.render()),
            Command::Birkhoff(t) => render_laurent_matrix(t),
            Command::AffineRoundtrip(a) => a.render(),
        };
        format!("{} {body}", self.name())
    }
}

impl JobSpec {
    /// Canonical text: parsing it gives back an equal job.
    pub fn render(&self) -> String {
        format!("field {}; {};", self.field, self.command.render())
    }
}

/// Run-time settings shared by all jobs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Options {
    /// Overrides the degree window of `probe-right-exact` and of the
    /// `gamma` kernel table.
    pub window: Option<RangeInclusive<i64>>,
    /// Seed for `random` and `scramble(..)`; each job starts from it afresh.
    pub seed: u64,
}

impl Default for Options {
    fn default() -> Options {
        Options { window: None, seed: 0 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Fact {
    pub key: String,
    pub value: Value,
    pub line: String,
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct Report {
    pub facts: Vec<Fact>,
}

impl Report {
    fn number(&mut self, key: &str, n: impl Into<Value> + std::fmt::Display + Copy) {
        self.facts.push(Fact { key: key.to_string(), value: n.into(), line: format!("{key} {n}") });
    }

    fn text(&mut self, key: &str, s: String) {
        self.facts.push(Fact { key: key.to_string(), line: format!("{key}: {s}"), value: Value::String(s) });
    }

    fn flag(&mut self, key: &str, b: bool) {
        self.facts.push(Fact { key: key.to_string(), value: Value::Bool(b), line: format!("{key} {}", if b { "yes" } else { "no" }) });
    }

    pub fn render(&self) -> String {
        self.facts.iter().map(|f| format!("{}\n", f.line)).collect()
    }

    /// Flat object: `field`, `command`, then one key per fact.
    pub fn to_json(&self, job: &JobSpec) -> Value {
        let mut m = Map::new();
        m.insert("field".into(), json!(job.field.to_string()));
        m.insert("command".into(), json!(job.command.name()));
        for f in &self.facts {
            m.insert(f.key.clone(), f.value.clone());
        }
        Value::Object(m)
    }
}

fn build_sheaf(field: Field, lit: &SheafLit, rng: &mut Rng64) -> Result<GluedSheaf> {
    let mut parts = Vec::with_capacity(lit.terms.len());
    for t in &lit.terms {
        parts.push(build_term(field, t, rng)?);
    }
    Ok(GluedSheaf::direct_sum_all(field, &parts))
}

fn build_term(field: Field, t: &STerm, rng: &mut Rng64) -> Result<GluedSheaf> {
    Ok(match t {
        STerm::Line(d) => GluedSheaf::line(field, *d),
        STerm::Sky(p, e) => {
            let part = match p {
                Some(p) => TorsionPart::finite(p.clone(), *e),
                None => TorsionPart::infinity(*e),
            };
            sheaf_of_split_in(field, &SplitType::new(vec![], vec![part]))
        }
        STerm::Glued { n0, r0, n1, r1, glue } => GluedSheaf::new(
            PidModule::from_presentation(field, *n0, r0),
            PidModule::from_presentation(field, *n1, r1),
            glue.clone(),
        )?,
        STerm::Random => (*random::random_sheaf(rng, field)?.1).clone(),
        STerm::Scramble(s) => {
            let inner = Arc::new(build_sheaf(field, s, rng)?);
            (*random::scramble(rng, &inner)?.target).clone()
        }
        STerm::Zero => GluedSheaf::zero(field),
        STerm::Times(k, t) => {
            let one = build_term(field, t, rng)?;
            GluedSheaf::direct_sum_all(field, &vec![one; *k])
        }
    })
}

fn build_functor(field: Field, lit: &FunctorLit, rng: &mut Rng64) -> Result<FunctorExpr> {
    let mut atoms = Vec::new();
    for t in &lit.terms {
        push_atoms(field, t, rng, &mut atoms)?;
    }
    Ok(FunctorExpr::new(field, atoms))
}

fn push_atoms(field: Field, t: &FTerm, rng: &mut Rng64, atoms: &mut Vec<Atom>) -> Result<()> {
    match t {
        FTerm::Tensor(s) => atoms.push(Atom::TensorWith(Arc::new(build_sheaf(field, s, rng)?))),
        FTerm::H1Twist(i) => atoms.push(Atom::H1Twist(*i)),
        FTerm::Zero => {}
        FTerm::Times(k, t) => {
            let mut one = Vec::new();
            push_atoms(field, t, rng, &mut one)?;
            for _ in 0..*k {
                atoms.extend(one.iter().cloned());
            }
        }
    }
    Ok(())
}

fn split_facts(r: &mut Report, st: &SplitType) {
    r.text("splitting", st.render_degrees());
    r.text("torsion", st.render_torsion());
}

/// Runs one job. Domain failures come back as library errors with their
/// stable messages.
pub fn run_job(job: &JobSpec, opts: &Options) -> Result<Report> {
    let field = job.field;
    let mut rng = random::rng(opts.seed);
    let mut r = Report::default();
    match &job.command {
        Command::Cohomology(s) => {
            let m = build_sheaf(field, s, &mut rng)?;
            r.number("h0", cech_h0(&m).dim);
            r.number("h1", cech_h1(&m)?.dim);
        }
        Command::ClassifySheaf(s) => {
            let m = build_sheaf(field, s, &mut rng)?;
            split_facts(&mut r, &split_classify(&m)?);
        }
        Command::Watts(f) => {
            let f = build_functor(field, f, &mut rng)?;
            let w = watts_construction(&f)?;
            split_facts(&mut r, &split_classify(&w.sheaf)?);
            r.number("stage", w.stage);
        }
        Command::Gamma(f, Some(s)) => {
            let f = build_functor(field, f, &mut rng)?;
            let m = Arc::new(build_sheaf(field, s, &mut rng)?);
            let g = gamma(&f, &m)?;
            let rank = crate::exactfield::rank(&g);
            r.number("source_dim", g.cols());
            r.number("target_dim", g.rows());
            r.number("rank", rank);
            r.number("kernel", g.cols() - rank);
            r.number("cokernel", g.rows() - rank);
            r.flag("isomorphism", rank == g.rows() && rank == g.cols());
        }
        Command::Gamma(f, None) => {
            let f = build_functor(field, f, &mut rng)?;
            let window = opts.window.clone().unwrap_or(GAMMA_WINDOW);
            let t = gamma_kernel_dims(&f, window)?;
            for (j, n) in t.degrees.iter().enumerate() {
                r.number(&format!("ker({n})"), t.ker[j]);
                r.number(&format!("cok({n})"), t.cok[j]);
            }
        }
        Command::ClassifyTg(f) => {
            let f = build_functor(field, f, &mut rng)?;
            let c = classify_tg(&f)?;
            let line = c.render();
            r.facts.push(Fact { key: "multiplicities".into(), value: Value::String(line.clone()), line });
        }
        Command::Birkhoff(t) => {
            let b = birkhoff_factorize(t)?;
            if b.recompose(t) != b.diagonal(field) {
                return Err(Error::Internal("Birkhoff factors do not recompose".into()));
            }
            r.text("degrees", format!("({})", b.degrees.iter().map(i64::to_string).collect::<Vec<_>>().join(", ")));
            r.text("p", render_poly_matrix(&b.p, "t"));
            r.text("q", render_poly_matrix(&b.q, "s"));
        }
        Command::AffineRoundtrip(a) => {
            let b = match (a.gens, &a.relations, &a.action) {
                (Some(n), Some(rel), Some(act)) => {
                    let m = Arc::new(PidModule::from_presentation(field, n, rel));
                    Bimodule::new(a.ring(), m, act.clone())?
                }
                _ => Bimodule::regular(field, a.ring())?,
            };
            let tors: Vec<String> = b.module.torsion().iter().map(|d| d.render("u")).collect();
            r.text("module", format!("free rank {}, torsion [{}]", b.module.free_rank(), tors.join(", ")));
            r.flag("stable", affine_roundtrip(&b)?);
        }
        Command::ProbeRightExact(f) => {
            let f = build_functor(field, f, &mut rng)?;
            let window = opts.window.clone().unwrap_or(PROBE_WINDOW);
            let p = right_exactness_probe(&f, window)?;
            r.number("checked", p.checked);
            r.flag("right_exact_on_probes", p.counterexample.is_none());
            if let Some(c) = p.counterexample {
                r.text("counterexample", c);
            }
        }
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(text: &str) -> String {
        run_job(&parse_job(text).unwrap(), &Options::default()).unwrap().render()
    }

    #[test]
    fn documented_examples() {
        assert_eq!(run("field Q; cohomology O(-2);"), "h0 0\nh1 1\n");
        assert_eq!(run("field GF(7); watts tensor(O(2));"), "splitting: (2)\ntorsion: none\nstage -2\n");
        assert_eq!(run("classify-tg h1twist(-2)+h1twist(-3)+h1twist(-3);"), "n(-2)=1 n(-3)=2\n");
        let e = parse_job("field GF(4); cohomology O(1);").unwrap_err();
        assert_eq!((e.line, e.column), (1, 10));
        assert!(e.message.contains("not prime"), "{e}");
    }

    #[test]
    fn parse_errors_have_positions() {
        let e = parse_jobs("field Q;\ncohomology O(1);\nfrobnicate O(2);").unwrap_err();
        assert_eq!((e.line, e.column), (3, 1));
        assert_eq!(e.message, "unknown command 'frobnicate'");
        let e = parse_job("cohomology O(1) + sky(x - 1, 2);").unwrap_err();
        assert_eq!((e.line, e.column), (1, 23));
        let e = parse_job("cohomology sky(t, 0);").unwrap_err();
        assert!(e.message.contains("jet"), "{e}");
        assert!(parse_job("watts tensor(O(1)) h1twist(2);").is_err());
    }

    #[test]
    fn canonical_text_round_trips() {
        for src in [
            "cohomology 2*O(-1) + sky(t^2 + 1, 3) + sky(inf, 1);",
            "field GF(5); gamma tensor(O(1)) + h1twist(-3) at O(2) + sky(t - 2, 1);",
            "birkhoff [[t^2, 1/2*t^-1], [0, -t^-1 + 3]];",
            "affine-roundtrip k[t]/(t^3), module(2, []), action([[0, 1], [0, 0]]);",
            "affine-roundtrip k[t], regular;",
            "classify-sheaf glued(1, [[t]], 1, [[]], [[1]]);",
            "watts 0;",
            "classify-sheaf scramble(random + O(3));",
        ] {
            let j = parse_job(src).unwrap();
            let once = j.render();
            let again = parse_job(&once).unwrap();
            assert_eq!(again, j, "{src}");
            assert_eq!(again.render(), once);
        }
    }

    #[test]
    fn reports_are_deterministic() {
        let j = parse_job("classify-sheaf scramble(O(1) + sky(t + 1, 2) + random);").unwrap();
        let o = Options { seed: 9, ..Options::default() };
        assert_eq!(run_job(&j, &o).unwrap(), run_job(&j, &o).unwrap());
    }

    #[test]
    fn gamma_and_probe_reports() {
        let g = run("gamma tensor(O(1)) at O(0) + sky(t - 1, 2);");
        assert!(g.contains("kernel 0\n") && g.contains("isomorphism yes\n"), "{g}");
        let t = run_job(&parse_job("gamma h1twist(0);").unwrap(), &Options { window: Some(-3..=-1), seed: 0 }).unwrap();
        assert_eq!(t.render(), "ker(-3) 2\ncok(-3) 0\nker(-2) 1\ncok(-2) 0\nker(-1) 0\ncok(-1) 0\n");
        let p = run("probe-right-exact tensor(O(0));");
        assert!(p.contains("right_exact_on_probes no\n") && p.contains("counterexample: (x0, x1)"), "{p}");
        let a = run("affine-roundtrip k[t]/(t^2), regular;");
        assert_eq!(a, "module: free rank 0, torsion [u^2]\nstable yes\n");
    }

    #[test]
    fn domain_errors_are_errors() {
        let j = parse_job("classify-tg tensor(O(1));").unwrap();
        assert_eq!(run_job(&j, &Options::default()).unwrap_err(), Error::NotTotallyGlobal);
        let j = parse_job("classify-sheaf glued(1, [[]], 1, [[]], [[1 + t]]);").unwrap();
        assert_eq!(run_job(&j, &Options::default()).unwrap_err(), Error::NotInvertible);
    }
}
