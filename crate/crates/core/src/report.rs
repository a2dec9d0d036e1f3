//! Command dispatch and report emission (text and machine-readable JSON).
//!
//! Reports are deterministic for a fixed input and seed. Machine output uses
//! stable field names and writes every integer and rational as a decimal string.

use std::fmt::Write as _;
use std::str::FromStr;

use num_traits::Zero;
use serde::Serialize;
use serde_json::{json, Value};

use crate::cayley::{auto_placement, build_phase, cayley_matrix, AuxPlacement, CayleyMatrix, LaurentSystem};
use crate::error::{Error, IoError, SpectraError};
use crate::gkz;
use crate::horn::{self, BScaling};
use crate::io::SystemSpec;
use crate::linalg::{Int, IntMatrix, Rat, RatMatrix};
use crate::mellin::{self, AffineZ, GammaProduct};
use crate::mirror;
use crate::polytope::{self, LatticePolytope};
use crate::spectra;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// advisory result; never affects the exit status
    Heuristic,
    Info,
}

impl Status {
    fn tag(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Heuristic => "HEUR",
            Status::Info => "INFO",
        }
    }

    fn of(ok: bool) -> Self {
        if ok { Status::Pass } else { Status::Fail }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Section {
    pub title: String,
    #[serde(skip)]
    pub text: String,
    pub data: Value,
}

/// Machine output keeps every integer as a decimal string.
fn stringify_numbers(v: &mut Value) {
    match v {
        Value::Number(n) => *v = Value::String(n.to_string()),
        Value::Array(a) => a.iter_mut().for_each(stringify_numbers),
        Value::Object(o) => o.values_mut().for_each(stringify_numbers),
        _ => {}
    }
}


#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub input_hash: String,
    pub seed: u64,
    pub sections: Vec<Section>,
    pub checks: Vec<Check>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Machine,
}

impl Report {
    pub fn new(command: &str, input_hash: &str, seed: u64) -> Self {
        Report { command: command.into(), input_hash: input_hash.into(), seed, sections: Vec::new(), checks: Vec::new() }
    }

    fn section(&mut self, title: &str, text: String, data: Value) {
        self.sections.push(Section { title: title.into(), text, data });
    }

    fn check(&mut self, name: impl Into<String>, status: Status, detail: impl Into<String>) {
        self.checks.push(Check { name: name.into(), status, detail: detail.into() });
    }

    /// True iff no non-heuristic check failed.
    pub fn ok(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn count(&self, s: Status) -> usize {
        self.checks.iter().filter(|c| c.status == s).count()
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.render_text(),
            Format::Machine => {
                let mut v = serde_json::to_value(self).expect("report serializes");
                stringify_numbers(&mut v);
                let mut s = serde_json::to_string_pretty(&v).expect("report serializes");
                s.push('\n');
                s
            }
        }
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "command: {}", self.command);
        let _ = writeln!(out, "input:   sha256 {}", self.input_hash);
        let _ = writeln!(out, "seed:    {}", self.seed);
        for s in &self.sections {
            let _ = writeln!(out, "\n== {} ==", s.title);
            out.push_str(&s.text);
            if !s.text.ends_with('\n') {
                out.push('\n');
            }
        }
        let _ = writeln!(out, "\n== checks ==");
        for c in &self.checks {
            if c.detail.is_empty() {
                let _ = writeln!(out, "[{}] {}", c.status.tag(), c.name);
            } else {
                let _ = writeln!(out, "[{}] {}: {}", c.status.tag(), c.name, c.detail);
            }
        }
        let _ = writeln!(
            out,
            "summary: {} pass, {} fail, {} heuristic, {} info",
            self.count(Status::Pass),
            self.count(Status::Fail),
            self.count(Status::Heuristic),
            self.count(Status::Info)
        );
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Matrix,
    Mellin,
    Horn,
    Euler,
    Ehrhart,
    Hodge,
    Spectra,
    Gkz,
    Mirror,
    VerifyAll,
}

impl Command {
    pub const ALL: [&'static str; 10] =
        ["matrix", "mellin", "horn", "euler", "ehrhart", "hodge", "spectra", "gkz", "mirror", "verify-all"];

    pub fn name(self) -> &'static str {
        match self {
            Command::Matrix => "matrix",
            Command::Mellin => "mellin",
            Command::Horn => "horn",
            Command::Euler => "euler",
            Command::Ehrhart => "ehrhart",
            Command::Hodge => "hodge",
            Command::Spectra => "spectra",
            Command::Gkz => "gkz",
            Command::Mirror => "mirror",
            Command::VerifyAll => "verify-all",
        }
    }
}

impl FromStr for Command {
    type Err = IoError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "matrix" => Command::Matrix,
            "mellin" => Command::Mellin,
            "horn" => Command::Horn,
            "euler" => Command::Euler,
            "ehrhart" => Command::Ehrhart,
            "hodge" => Command::Hodge,
            "spectra" => Command::Spectra,
            "gkz" => Command::Gkz,
            "mirror" => Command::Mirror,
            "verify-all" => Command::VerifyAll,
            other => return Err(IoError::UnknownCommand(other.into())),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Placement {
    Auto,
    Explicit,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Options {
    /// `None`: the file's placement if present, else automatic
    pub placement: Option<Placement>,
    /// 1-based deformation index restricting Horn / spectra output
    pub q: Option<usize>,
    pub j: Option<Vec<i64>>,
    pub zeta: Option<Vec<i64>>,
    pub seed: u64,
}

impl Default for Options {
    fn default() -> Self {
        Options { placement: None, q: None, j: None, zeta: None, seed: 0 }
    }
}

fn s<T: ToString>(v: &T) -> String {
    v.to_string()
}

fn mat_int(m: &IntMatrix) -> Value {
    Value::from(m.rows_vec().iter().map(|r| r.iter().map(s).collect::<Vec<_>>()).collect::<Vec<_>>())
}

fn mat_rat(m: &RatMatrix) -> Value {
    Value::from(m.rows_vec().iter().map(|r| r.iter().map(s).collect::<Vec<_>>()).collect::<Vec<_>>())
}

fn z_names(nz: usize) -> Vec<String> {
    (1..=nz).map(|i| format!("z{i}")).collect()
}

fn gamma_json(g: &GammaProduct) -> Value {
    let names = z_names(g.nz);
    let side = |v: Vec<(AffineZ, i64)>| -> Value {
        Value::from(v.iter().map(|(l, e)| json!({"arg": l.render(&names), "power": e.to_string()})).collect::<Vec<_>>())
    };
    json!({"rendered": g.render(&names), "numerator": side(g.numerator()), "denominator": side(g.denominator())})
}

fn render_poly(names: &[String], monomials: &[Vec<i64>], deform: Option<usize>) -> String {
    let mut parts: Vec<String> = monomials
        .iter()
        .map(|e| {
            let f: Vec<String> = e
                .iter()
                .zip(names)
                .filter(|(v, _)| **v != 0)
                .map(|(v, n)| if *v == 1 { n.clone() } else { format!("{n}^{v}") })
                .collect();
            if f.is_empty() { "1".into() } else { f.join("*") }
        })
        .collect();
    if let Some(j) = deform {
        parts.push(format!("s{}", j + 1));
    }
    parts.join(" + ")
}

pub fn render_system(sys: &LaurentSystem) -> Vec<String> {
    let mut j = 0;
    sys.polys
        .iter()
        .map(|p| {
            let d = p.deformed.then(|| {
                j += 1;
                j - 1
            });
            render_poly(&sys.names, &p.monomials, d)
        })
        .collect()
}

struct Ctx {
    spec: SystemSpec,
    sys: LaurentSystem,
    cm: CayleyMatrix,
    j: Vec<Int>,
    jaux: Vec<Int>,
    zeta: Vec<Int>,
    opts: Options,
}

impl Ctx {
    fn new(spec: &SystemSpec, opts: &Options) -> Result<Self, Error> {
        let sys = spec.to_system()?;
        let placement = match opts.placement {
            Some(Placement::Explicit) => spec
                .placement()
                .ok_or_else(|| IoError::Usage("--placement explicit needs aux_placement in the file".into()))?,
            Some(Placement::Auto) => auto_placement(&sys)?,
            None => match spec.placement() {
                Some(p) => p,
                None => auto_placement(&sys)?,
            },
        };
        let cm = cayley_matrix(&build_phase(&sys, &placement)?)?;
        let vec_or = |v: &Option<Vec<i64>>, len: usize, what: &str| -> Result<Vec<Int>, IoError> {
            match v {
                None => Ok(vec![Int::zero(); len]),
                Some(v) if v.len() == len => Ok(v.iter().map(|&x| Int::from(x)).collect()),
                Some(v) => Err(IoError::Usage(format!("--{what} has {} entries, expected {len}", v.len()))),
            }
        };
        let j = vec_or(&opts.j, sys.n_vars(), "J")?;
        let zeta = vec_or(&opts.zeta, sys.k(), "zeta")?;
        let jaux = vec![Int::zero(); cm.phase.m];
        if let Some(q) = opts.q {
            if q == 0 || q > cm.phase.ks() {
                return Err(IoError::Usage(format!("--q {q} outside 1..={}", cm.phase.ks())).into());
            }
        }
        Ok(Ctx { spec: spec.clone(), sys, cm, j, jaux, zeta, opts: opts.clone() })
    }

    fn qs(&self) -> Vec<usize> {
        match self.opts.q {
            Some(q) => vec![q - 1],
            None => (0..self.cm.phase.ks()).collect(),
        }
    }

    /// The degree/χ identity is only claimed when every polynomial carries a deformation.
    fn identity_status(&self, ok: bool) -> Status {
        if self.sys.polys.iter().all(|p| p.deformed) { Status::of(ok) } else { Status::Info }
    }

    fn forms(&self) -> Vec<mellin::LinearForm> {
        mellin::linear_forms(&self.cm)
    }
}

pub fn run(command: Command, spec: &SystemSpec, opts: &Options, input_hash: &str) -> Result<Report, Error> {
    let ctx = Ctx::new(spec, opts)?;
    let mut r = Report::new(command.name(), input_hash, opts.seed);
    system_section(&ctx, &mut r);
    match command {
        Command::Matrix => matrix(&ctx, &mut r),
        Command::Mellin => mellin_cmd(&ctx, &mut r)?,
        Command::Horn => horn_cmd(&ctx, &mut r)?,
        Command::Euler => euler_cmd(&ctx, &mut r)?,
        Command::Ehrhart => ehrhart_cmd(&ctx, &mut r)?,
        Command::Hodge => hodge_cmd(&ctx, &mut r)?,
        Command::Spectra => spectra_cmd(&ctx, &mut r)?,
        Command::Gkz => gkz_cmd(&ctx, &mut r)?,
        Command::Mirror => mirror_cmd(&ctx, &mut r)?,
        Command::VerifyAll => {
            matrix(&ctx, &mut r);
            mellin_cmd(&ctx, &mut r)?;
            horn_cmd(&ctx, &mut r)?;
            euler_cmd(&ctx, &mut r)?;
            ehrhart_cmd(&ctx, &mut r)?;
            hodge_cmd(&ctx, &mut r)?;
            spectra_cmd(&ctx, &mut r)?;
            gkz_cmd(&ctx, &mut r)?;
            if ctx.spec.mirror_partition.is_some() {
                mirror_cmd(&ctx, &mut r)?;
            }
        }
    }
    Ok(r)
}

fn system_section(ctx: &Ctx, r: &mut Report) {
    let polys = render_system(&ctx.sys);
    let mut text = String::new();
    if let Some(n) = &ctx.spec.name {
        let _ = writeln!(text, "name: {n}");
    }
    for (i, p) in polys.iter().enumerate() {
        let _ = writeln!(text, "f{} = {p}", i + 1);
    }
    let placement: Vec<usize> = ctx.cm.phase.placement.assignments.iter().map(|t| t + 1).collect();
    let _ = writeln!(text, "auxiliary placement (1-based terms): {placement:?}");
    r.section(
        "system",
        text,
        json!({"name": ctx.spec.name, "polynomials": polys, "placement": placement.iter().map(s).collect::<Vec<_>>()}),
    );
}

fn matrix(ctx: &Ctx, r: &mut Report) {
    let cm = &ctx.cm;
    let vars = cm.phase.var_names();
    let terms: Vec<String> = (0..cm.size()).map(|a| cm.phase.term_label(a)).collect();
    let mut text = String::new();
    let _ = writeln!(text, "columns: {}", vars.join(" "));
    let _ = writeln!(text, "rows:    {}", terms.join(" "));
    let _ = writeln!(text, "L =\n{}", cm.l);
    let _ = writeln!(text, "det L = {}   Δ = {}", cm.det, cm.delta);
    let _ = writeln!(text, "L^-1 =\n{}", cm.inv);
    r.section(
        "cayley matrix",
        text,
        json!({"columns": vars, "rows": terms, "l": mat_int(&cm.l), "det": s(&cm.det), "delta": s(&cm.delta), "inverse": mat_rat(&cm.inv)}),
    );
    r.check("det L != 0", Status::of(cm.is_nondegenerate()), format!("det = {}", cm.det));
}

fn mellin_cmd(ctx: &Ctx, r: &mut Report) -> Result<(), Error> {
    let forms = ctx.forms();
    let nz = ctx.cm.phase.ks();
    let names = z_names(nz);
    let affs: Vec<AffineZ> = forms.iter().map(|f| f.eval(&ctx.j, &ctx.jaux, &ctx.zeta)).collect::<Result<_, _>>()?;
    let g = mellin::gamma_product(&forms, &ctx.j, &ctx.jaux, &ctx.zeta)?;
    let sets = mellin::index_sets(&forms);
    let mut text = String::new();
    for (a, l) in affs.iter().enumerate() {
        let _ = writeln!(text, "L{} [{}] = {}", a + 1, ctx.cm.phase.term_label(a), l.render(&names));
    }
    let one_based = |v: &Vec<Vec<usize>>| -> Vec<Vec<usize>> { v.iter().map(|x| x.iter().map(|a| a + 1).collect()).collect() };
    let _ = writeln!(text, "I+ = {:?}\nI- = {:?}", one_based(&sets.i_plus), one_based(&sets.i_minus));
    let _ = writeln!(text, "M = {}", g.render(&names));
    r.section(
        "mellin",
        text,
        json!({
            "forms": affs.iter().map(|l| l.render(&names)).collect::<Vec<_>>(),
            "i_plus": one_based(&sets.i_plus),
            "i_minus": one_based(&sets.i_minus),
            "gamma": gamma_json(&g),
        }),
    );
    let rules = mellin::verify_sum_rules(&forms);
    r.check("row sums of L^-1 blocks", Status::of(rules.ok), rules.failures.join("; "));
    let total = mellin::form_sum(&forms, &ctx.j, &ctx.jaux, &ctx.zeta)?;
    let want: Rat = ctx.zeta.iter().map(|z| Rat::from_integer(z.clone())).sum::<Rat>() + Rat::from_integer(Int::from(ctx.sys.k()));
    r.check(
        "Σ L_a = Σζ + k",
        Status::of(total.is_constant() && total.c0 == want),
        format!("Σ L_a = {}", total.render(&names)),
    );
    Ok(())
}

fn horn_cmd(ctx: &Ctx, r: &mut Report) -> Result<(), Error> {
    let forms = ctx.forms();
    let sets = mellin::index_sets(&forms);
    let ops = horn::horn_operators(&forms, &sets, &ctx.j, &ctx.jaux, &ctx.zeta, BScaling::Global)?;
    let nz = ctx.cm.phase.ks();
    let names = z_names(nz);
    let mut text = String::new();
    let mut data = Vec::new();
    for op in ops.iter().filter(|o| ctx.qs().contains(&o.q)) {
        let rep = horn::horn_degree_check(op, &ctx.cm)?;
        let p: Vec<String> = op.p_factors.iter().map(|f| f.form.render(&names)).collect();
        let q: Vec<String> = op.q_factors.iter().map(|f| f.form.render(&names)).collect();
        let _ = writeln!(
            text,
            "q = {}: step {}, deg P = {}, deg Q = {}, |χ| = {}",
            op.q + 1,
            op.delta,
            rep.p_degree,
            rep.q_degree,
            rep.euler_characteristic
        );
        let _ = writeln!(text, "  B row: {:?}", op.b_row.iter().map(s).collect::<Vec<_>>());
        let _ = writeln!(text, "  resonance-free: {}", horn::non_resonance(op));
        data.push(json!({
            "q": (op.q + 1).to_string(),
            "step": s(&op.delta),
            "b_row": op.b_row.iter().map(s).collect::<Vec<_>>(),
            "p_factors": p,
            "q_factors": q,
            "p_degree": rep.p_degree.to_string(),
            "q_degree": rep.q_degree.to_string(),
            "euler_characteristic": s(&rep.euler_characteristic),
            "non_resonant": horn::non_resonance(op),
        }));
        r.check(format!("deg P_{0} = deg Q_{0}", op.q + 1), Status::of(op.degrees_equal()), format!("{} vs {}", rep.p_degree, rep.q_degree));
        r.check(
            format!("Horn degree = |χ(X_{})|", op.q + 1),
            ctx.identity_status(rep.pass),
            format!("{} vs {}", rep.p_degree, rep.euler_characteristic),
        );
    }
    let ratios = horn::ore_sato(&ops);
    let compat = horn::compatibility_check(&ratios, ctx.opts.seed, 20)?;
    let _ = writeln!(text, "Ore–Sato compatibility at {} seeded points: {}", compat.points, compat.pass);
    r.check("Ore–Sato cocycle at 20 seeded points", Status::of(compat.pass), format!("{} failures", compat.failures.len()));
    let g = mellin::gamma_product(&forms, &ctx.j, &ctx.jaux, &ctx.zeta)?;
    let growth = horn::growth_check(&g, ctx.opts.seed);
    let _ = writeln!(text, "growth: balanced {}, α(vertices) = {}, α(sampled) ≈ {:.6}", growth.balanced, growth.alpha_vertex_min, growth.alpha_sample_min + 0.0);
    r.check("growth balance of z-coefficients", Status::Info, format!("balanced = {}, offending = {:?}", growth.balanced, growth.offending));
    r.check("growth α bound", Status::Heuristic, format!("vertex min {}, sampled min {:.6}", growth.alpha_vertex_min, growth.alpha_sample_min + 0.0));
    r.section("horn", text, json!({"operators": data, "ore_sato_pass": compat.pass}));
    Ok(())
}

fn euler_cmd(ctx: &Ctx, r: &mut Report) -> Result<(), Error> {
    let forms = ctx.forms();
    let sets = mellin::index_sets(&forms);
    let mut text = String::new();
    let mut data = Vec::new();
    for q in ctx.qs() {
        let chi = horn::euler_characteristic(&ctx.cm, q)?;
        let bsum: Int = sets.i_plus[q].iter().map(|&a| forms[a].b[q].clone()).sum();
        let _ = writeln!(text, "|χ(X_{})| = {}   Σ_{{I+}} B = {}", q + 1, chi, bsum);
        data.push(json!({"q": (q + 1).to_string(), "euler_characteristic": s(&chi), "b_sum": s(&bsum)}));
        r.check(format!("Σ_{{I+}} B_{0} = |χ(X_{0})|", q + 1), ctx.identity_status(bsum == chi), format!("{bsum} vs {chi}"));
    }
    r.section("euler characteristic", text, Value::from(data));
    Ok(())
}

fn newton_polytopes(sys: &LaurentSystem) -> Vec<(String, Vec<Vec<i64>>)> {
    let mut out = Vec::new();
    for (q, p) in sys.polys.iter().enumerate() {
        out.push((format!("Δ(f{})", q + 1), p.monomials.clone()));
        let mut with0 = p.monomials.clone();
        if !with0.iter().any(|e| e.iter().all(|&v| v == 0)) {
            with0.push(vec![0; sys.n_vars()]);
            out.push((format!("Δ(f{} + 1)", q + 1), with0));
        }
    }
    out
}

fn ehrhart_cmd(ctx: &Ctx, r: &mut Report) -> Result<(), Error> {
    let mut text = String::new();
    let mut data = Vec::new();
    for (name, pts) in newton_polytopes(&ctx.sys) {
        let p = LatticePolytope::hull(&pts)?;
        let e = polytope::ehrhart(&p);
        let _ = writeln!(text, "{name}: dim {}, Ψ = {:?}, Φ = {:?}, vol = {}", e.dim, e.psi, e.phi, p.normalized_volume());
        data.push(json!({
            "polytope": name,
            "dim": e.dim.to_string(),
            "psi": e.psi.iter().map(s).collect::<Vec<_>>(),
            "phi": e.phi.iter().map(s).collect::<Vec<_>>(),
            "normalized_volume": s(&p.normalized_volume()),
        }));
        r.check(format!("reciprocity t^(n+1)Ψ(1/t) = Φ(t) on {name}"), Status::of(e.reciprocity), "");
        r.check(format!("Ψ(1) = n! vol on {name}"), Status::of(e.psi_sum_is_volume), "");
    }
    r.section("ehrhart", text, Value::from(data));
    Ok(())
}

fn hodge_cmd(ctx: &Ctx, r: &mut Report) -> Result<(), Error> {
    let mut text = String::new();
    let mut data = Vec::new();
    for (name, pts) in newton_polytopes(&ctx.sys) {
        match polytope::hodge_dims(&pts) {
            Ok(h) => {
                let _ = writeln!(text, "{name}: Hodge numbers {:?} (sum {}), regularity assumed", h.psi, h.normalized_volume);
                data.push(json!({"polytope": name, "hodge": h.psi.iter().map(s).collect::<Vec<_>>(), "volume": s(&h.normalized_volume)}));
                r.check(format!("Σ Hodge numbers = vol on {name}"), Status::of(h.sum_matches_volume), "");
                let strata = polytope::weight_strata(&pts)?;
                let _ = writeln!(text, "  weight strata (k, face dim) -> count: {strata:?}");
            }
            Err(crate::error::PolytopeError::Degenerate { .. }) => {
                let _ = writeln!(text, "{name}: not full-dimensional, skipped");
            }
            Err(e) => return Err(e.into()),
        }
    }
    match spectra::hodge_level(&ctx.cm, &ctx.j, &ctx.zeta) {
        Ok(h) => {
            let _ = writeln!(text, "x^J: level r = {}, degree {}, Σ L = {}", h.r, h.point_degree, h.form_sum);
            r.check("Hodge level bracket for x^J", Status::of(h.bracket_ok), format!("r = {}, Σ L = {}", h.r, h.form_sum));
        }
        Err(SpectraError::OutsideCone) => {
            let _ = writeln!(text, "x^J lies outside the cone over the Newton simplex");
            r.check("Hodge level bracket for x^J", Status::Info, "x^J outside the cone; not applicable");
        }
        Err(e) => return Err(e.into()),
    }
    r.section("hodge", text, Value::from(data));
    Ok(())
}

fn spectra_cmd(ctx: &Ctx, r: &mut Report) -> Result<(), Error> {
    let forms = ctx.forms();
    let sets = mellin::index_sets(&forms);
    let names = z_names(ctx.cm.phase.ks());
    let mut text = String::new();
    let (ws, count) = spectra::weight_vectors(&ctx.cm);
    let trivial: Vec<usize> = ws.iter().filter(|w| w.trivial).map(|w| w.column + 1).collect();
    let _ = writeln!(
        text,
        "weight vectors: {} trivial {:?}, {} nontrivial (expected {} and {})",
        count.trivial, trivial, count.nontrivial, count.expected_trivial, count.expected_nontrivial
    );
    // k + (M+1) differs from L whenever k > 1, so the stated count cannot hold in general;
    // it is reported, not enforced.
    r.check(
        "trivial / nontrivial weight count",
        Status::Info,
        format!(
            "{}+{} vs stated {}+{} ({})",
            count.trivial,
            count.nontrivial,
            count.expected_trivial,
            count.expected_nontrivial,
            if count.ok() { "agrees" } else { "differs" }
        ),
    );
    let mut data = Vec::new();
    for q in ctx.qs() {
        let sp = spectra::spectra(&forms, &sets, &ctx.j, &ctx.jaux, &ctx.zeta, q)?;
        let wl = spectra::weight_level(&forms, &sets, &ctx.j, &ctx.jaux, &ctx.zeta, q)?;
        let b: Vec<String> = sp.boundary.iter().map(|(a, l)| format!("L{} = {}", a + 1, l.render(&names))).collect();
        let _ = writeln!(text, "q = {}: boundary {{ {} <= 0 }}, weight level {}", q + 1, b.join(", "), wl);
        data.push(json!({"q": (q + 1).to_string(), "boundary": b, "weight_level": wl.to_string()}));
    }
    // keep the (cap+1)^nz search grid near a thousand points per simplex
    let nz = ctx.cm.phase.ks().max(1) as i32;
    let cap = (1..=15i64).rev().find(|c| (c + 1).pow(nz as u32) <= 1000).unwrap_or(1);
    let jb = spectra::jordan_bound(&forms, &ctx.j, &ctx.jaux, &ctx.zeta, cap)?;
    let _ = writeln!(text, "Jordan block size >= {} (search box [0, {}])", jb.block_size, jb.bound);
    r.check("Jordan block bound", Status::Heuristic, format!("size {} within search box {}", jb.block_size, jb.bound));
    if let (Some(p), true) = (ctx.spec.placement(), ctx.cm.phase.m > 0) {
        let other = if ctx.cm.phase.placement == p { auto_placement(&ctx.sys)? } else { p };
        if other != ctx.cm.phase.placement {
            if let Ok(cm2) = cayley_matrix(&build_phase(&ctx.sys, &other)?) {
                let t = spectra::spectra_transition(&ctx.cm, &cm2)?;
                let _ = writeln!(text, "transition to placement {:?}: det C = {}", other.assignments.iter().map(|a| a + 1).collect::<Vec<_>>(), t.det_c);
                r.check("spectra transition consistent", Status::of(t.forms_consistent), format!("det C = {}", t.det_c));
            }
        }
    }
    r.section("spectra", text, json!({"weights_trivial": trivial.iter().map(s).collect::<Vec<_>>(), "blocks": data, "jordan": jb.block_size.to_string()}));
    Ok(())
}

fn gkz_cmd(ctx: &Ctx, r: &mut Report) -> Result<(), Error> {
    let am = gkz::a_matrix(&ctx.sys)?;
    let jr: Vec<Rat> = ctx.j.iter().map(|v| Rat::from_integer(v.clone())).collect();
    let zr: Vec<Rat> = ctx.zeta.iter().map(|v| Rat::from_integer(v.clone())).collect();
    let sys = gkz::gkz_system(&am, &jr, &zr)?;
    let rank = gkz::gkz_rank(&ctx.sys)?;
    let mut text = String::new();
    let _ = writeln!(text, "columns: {}", am.col_labels.join(" "));
    let _ = writeln!(text, "A =\n{}", am.m);
    for b in &sys.boxes {
        let _ = writeln!(text, "box: u = {:?}", b.u.iter().map(s).collect::<Vec<_>>());
    }
    let mixed = rank.mixed.as_ref().map_or_else(|| "skipped (over budget)".to_string(), |m| m.to_string());
    let _ = writeln!(text, "rank: (N+k)! vol = {}, Cayley = {}, mixed = {mixed}", rank.with_origin, rank.cayley);
    r.check("box vectors annihilate A", Status::of(sys.boxes_in_kernel(&am)), format!("{} operators", sys.boxes.len()));
    r.check("rank by three volume routes", Status::of(rank.agree), format!("{} / {} / {mixed}", rank.with_origin, rank.cayley));
    let mut sigma = Value::Null;
    if am.m.ncols() == ctx.cm.size() {
        let sc = gkz::sigma_change(&ctx.cm, &am, &ctx.j, &ctx.zeta)?;
        let _ = writeln!(text, "B_J^ζ exponents: {:?}", sc.b_exponents.iter().map(s).collect::<Vec<_>>());
        r.check("L^-1 L(A) bordered shape", Status::of(sc.bordered_ok), "");
        sigma = json!({"b_exponents": sc.b_exponents.iter().map(s).collect::<Vec<_>>(), "s_exponents": sc.s_exponents.iter().map(|v| v.iter().map(s).collect::<Vec<_>>()).collect::<Vec<_>>()});
    } else {
        r.check("L^-1 L(A) bordered shape", Status::Info, "A and L have different column counts; skipped");
    }
    r.section(
        "gkz",
        text,
        json!({
            "columns": am.col_labels,
            "a": mat_int(&am.m),
            "boxes": sys.boxes.iter().map(|b| b.u.iter().map(s).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "rank": s(rank.value()),
            "sigma": sigma,
        }),
    );
    Ok(())
}

fn mirror_cmd(ctx: &Ctx, r: &mut Report) -> Result<(), Error> {
    let mi = ctx
        .spec
        .mirror_input()
        .ok_or_else(|| IoError::Usage("mirror needs mirror_partition in the file".into()))??;
    let pair = mirror::evaluate_pair(&mi)?;
    let t_sys = pair.y_side.input.system();
    let mut text = String::new();
    for (i, p) in render_system(&t_sys).iter().enumerate() {
        let _ = writeln!(text, "^T f{} = {p}", i + 1);
    }
    let wdesc = |w: &mirror::WeightData| format!("g = {:?}, Q̂ = {:?}", w.g, w.q_hat);
    let _ = writeln!(text, "X weights: {}", wdesc(&pair.x_side.weights));
    let _ = writeln!(text, "Y weights: {}", wdesc(&pair.y_side.weights));
    let nz = mi.k();
    let names = z_names(nz);
    let xi_txt = |v: &Option<Vec<AffineZ>>| -> Vec<String> {
        v.as_ref().map(|x| x.iter().map(|l| l.render(&names)).collect()).unwrap_or_default()
    };
    let _ = writeln!(text, "ξ (X): {:?}", xi_txt(&pair.x_side.xi_blocks));
    let _ = writeln!(text, "ξ (Y): {:?}", xi_txt(&pair.y_side.xi_blocks));
    let c = &pair.conditions;
    for (ok, name) in [
        (c.factor_y, "transposed ξ factors through G V^Λ"),
        (c.factor_x, "direct ξ factors through ^TG ^TV^Λ"),
        (c.blocks_match, "^TV^Λ = V^Λ up to permutation"),
        (c.rank_full, "rank Q̂ = rank ^TQ̂ = k"),
    ] {
        r.check(name, Status::of(ok), "");
    }
    r.check("τ = τ̃ up to block order", Status::of(c.tau_equal), "");
    r.check("ξ at distinguished terms is (z, z, 1-z) [X]", Status::of(pair.x_side.distinguished_ok), "");
    r.check("ξ at distinguished terms is (z, z, 1-z) [Y]", Status::of(pair.y_side.distinguished_ok), "");
    r.check(
        "transpose maps the system to itself",
        Status::Info,
        match &pair.self_dual {
            Some(p) => format!("yes, variable permutation {p:?}"),
            None => "no".into(),
        },
    );
    let mut mellin_data = Value::Null;
    if c.all() {
        let mm = mirror::mellin_mirror(&pair)?;
        let _ = writeln!(text, "M_X = {}", mm.x_theorem.render(&names));
        let _ = writeln!(text, "M_Y = {}", mm.y_theorem.render(&names));
        r.check("Γ-expression in ξ = direct Mellin [X]", Status::of(mm.x_ok()), "");
        r.check("Γ-expression in ξ = direct Mellin [Y]", Status::of(mm.y_ok()), "");
        mellin_data = json!({"x": gamma_json(&mm.x_theorem), "y": gamma_json(&mm.y_theorem)});
    }
    let bck = mirror::verify_bck(&pair);
    let _ = writeln!(text, "P_A_X = {}\nP_A_Y = {}", bck.p_ax, bck.p_ay);
    r.check("M_X(λ..λ) = PO_Y(λ..λ) = P_A_Y(λ)", Status::of(bck.chain_x), "");
    r.check("M_Y(λ..λ) = PO_X(λ..λ) = P_A_X(λ)", Status::of(bck.chain_y), "");
    let ms = mirror::magic_square(&pair.x_side.cm);
    r.check(
        "magic square",
        Status::Info,
        if ms.holds() { format!("holds with block pairing {:?}", ms.block_perm) } else { "no injection found".into() },
    );
    for op in mirror::quantum_operators(&pair.y_side.weights) {
        let _ = writeln!(text, "L_{} = {}", op.nu + 1, op.render());
        r.check(
            format!("quantum operator {} degrees", op.nu + 1),
            Status::Info,
            format!("{} / {} (equal: {})", op.degree_theta, op.degree_t, op.degrees_equal),
        );
    }
    r.section(
        "mirror",
        text,
        json!({
            "transposed": render_system(&t_sys),
            "x_weights": pair.x_side.weights.g.iter().map(|g| g.iter().map(s).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "y_weights": pair.y_side.weights.g.iter().map(|g| g.iter().map(s).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "xi_x": xi_txt(&pair.x_side.xi_blocks),
            "xi_y": xi_txt(&pair.y_side.xi_blocks),
            "mellin": mellin_data,
            "p_a_x": bck.p_ax.to_string(),
            "p_a_y": bck.p_ay.to_string(),
            "magic_square": ms.holds(),
        }),
    );
    Ok(())
}

/// Placement helper shared with the CLI: explicit vector (0-based) or automatic.
pub fn resolve_placement(sys: &LaurentSystem, explicit: Option<&AuxPlacement>) -> Result<AuxPlacement, Error> {
    match explicit {
        Some(p) => Ok(p.clone()),
        None => Ok(auto_placement(sys)?),
    }
}
