//! Command dispatch for the `toramp` binary.
//!
//! Indices in input files and index flags are 0-based unless `--one-based`
//! is given. Human-readable output is 1-based and uses variable labels.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use serde_json::{json, Value};

use toramp::amplitude::{
    adjoint_cone_order, amplitude, evaluate_amplitude, face_restrict, residue, restrict_adjoint, santalo_point,
    warren_adjoint, Restriction,
};
use toramp::combinat::{interpolate_adjoint, irrelevant_generators, primitive_collections, split_restriction};
use toramp::deform::{
    chamber_space, deformation_cone, degeneration_check, facet_defining, membership, shrink_vertex, simplex_faces,
    Degeneration, Membership, WallForm,
};
use toramp::fan::one_based;
use toramp::io::{parse_index_csv, parse_input, parse_rat_csv, Input};
use toramp::polytope::FaceRef;
use toramp::scalar::fmt_rat;
use toramp::singular::{
    all_sing_systems, component_summary, decompose_linear, ngon_generic_check, partials, sing_in_z_check, sing_system,
    warren_smoothness_d2, FactoredCover, SingComponent, SingVerdict, Smoothness,
};
use toramp::variety::LinearVariety;
use toramp::{verify, Error, HPolytope, Poly, Rat, SimplicialFan, VarSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Adjoint,
    Amplitude,
    Evaluate,
    Restrict,
    Residue,
    Warren,
    DualVolume,
    Irrelevant,
    PrimitiveCollections,
    Interpolate,
    Split,
    Walls,
    DefCheck,
    ChamberSpaces,
    Shrink,
    Degenerate,
    Partials,
    SingSystem,
    SingDecompose,
    SingCheck,
    NgonCheck,
    SmoothCheck,
    Santalo,
    Verify,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Structured,
}

#[derive(Debug, Parser)]
#[command(name = "toramp", version, about = "Toric amplitudes and universal adjoints")]
pub struct Cli {
    pub command: Command,
    /// Fan or polytope JSON file. Not used by `verify`.
    pub input: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
    /// Read 1-based indices from the file and from index flags.
    #[arg(long)]
    pub one_based: bool,
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub z: Option<String>,
    #[arg(long)]
    pub tau: Option<String>,
    #[arg(long)]
    pub face: Option<String>,
    #[arg(long = "J")]
    pub j: Option<String>,
    #[arg(long)]
    pub tol: Option<f64>,
    /// Reject fans whose cones overlap in their relative interiors.
    #[arg(long)]
    pub strict: bool,
}

/// Exit code and the text for standard output and standard error.
#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    if cli.command == Command::Verify {
        return run_verify(cli.format);
    }
    match dispatch(&cli) {
        Ok(r) => {
            let stdout = match cli.format {
                Format::Text => r.text,
                Format::Structured => format!("{}\n", serde_json::to_string_pretty(&r.json).expect("json")),
            };
            Outcome { code: 0, stdout, stderr: String::new() }
        }
        Err(e) => Outcome { code: e.exit_code(), stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}

struct Report {
    text: String,
    json: Value,
}

impl Report {
    fn new(text: impl Into<String>, json: Value) -> Self {
        let mut text = text.into();
        if !text.ends_with('\n') {
            text.push('\n');
        }
        Report { text, json }
    }
}

type Result<T> = toramp::Result<T>;

fn precondition(msg: impl Into<String>) -> Error {
    Error::Precondition(msg.into())
}

struct Ctx<'a> {
    cli: &'a Cli,
    input: Input,
}

impl Ctx<'_> {
    fn fan(&self) -> Result<SimplicialFan> {
        let fan = self.input.fan()?;
        if self.cli.strict {
            fan.validate(true)?;
        }
        Ok(fan)
    }

    fn polytope(&self) -> Result<&HPolytope> {
        let p = self.input.polytope()?;
        if self.cli.strict {
            p.normal_fan()?.fan.validate(true)?;
        }
        Ok(p)
    }

    fn indices(&self, flag: &Option<String>, name: &str) -> Result<Vec<usize>> {
        let s = flag.as_deref().ok_or_else(|| precondition(format!("--{name} is required")))?;
        parse_index_csv(s, self.cli.one_based)
    }

    fn x(&self) -> Result<Vec<Rat>> {
        parse_rat_csv(self.cli.x.as_deref().ok_or_else(|| precondition("--x is required"))?)
    }

    /// `--z`, or the polytope's own `z`.
    fn z(&self) -> Result<Vec<Rat>> {
        match (&self.cli.z, &self.input) {
            (Some(s), _) => parse_rat_csv(s),
            (None, Input::Polytope(p)) => Ok(p.z().to_vec()),
            (None, Input::Fan(_)) => Err(precondition("--z is required for a fan input")),
        }
    }

    fn face(&self, p: &HPolytope) -> Result<FaceRef> {
        p.face(&self.indices(&self.cli.face, "face")?)
    }
}

fn dispatch(cli: &Cli) -> Result<Report> {
    let path = cli.input.as_ref().ok_or_else(|| Error::Parse("missing input file".into()))?;
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    let ctx = Ctx { cli, input: parse_input(&text, cli.one_based)? };
    match cli.command {
        Command::Adjoint => {
            let fan = ctx.fan()?;
            let s = adjoint_cone_order(&fan);
            Ok(Report::new(&s, json!({ "adjoint": s })))
        }
        Command::Amplitude => {
            let a = amplitude(&ctx.fan()?);
            let terms: Vec<Value> =
                a.terms.iter().map(|(c, k)| json!({ "coefficient": fmt_rat(c), "cone": ones(k) })).collect();
            Ok(Report::new(a.to_string(), json!({ "amplitude": a.to_string(), "terms": terms })))
        }
        Command::Evaluate => {
            let v = fmt_rat(&evaluate_amplitude(&ctx.fan()?, &ctx.x()?)?);
            Ok(Report::new(&v, json!({ "value": v })))
        }
        Command::Restrict => restrict(&ctx),
        Command::Residue => {
            let fan = ctx.fan()?;
            let r = residue(&fan, &ctx.indices(&cli.tau, "tau")?)?;
            let inv_c = fmt_rat(&r.inv_c);
            let text = format!(
                "tau = {}\nneighbours = {}\n1/c = {inv_c}\nresidue = {} * ({})",
                one_based(&r.star.tau),
                one_based(&r.star.ray_map),
                inv_c,
                r.star_amplitude
            );
            Ok(Report::new(
                text,
                json!({ "tau": ones(&r.star.tau), "neighbours": ones(&r.star.ray_map), "inv_c": inv_c,
                        "star_amplitude": r.star_amplitude.to_string() }),
            ))
        }
        Command::Warren => {
            let fan = ctx.fan()?;
            let z = match &ctx.input {
                Input::Polytope(p) if cli.z.is_none() => {
                    let nf = p.normal_fan()?;
                    nf.rows.iter().map(|&r| p.z()[r].clone()).collect()
                }
                _ => ctx.z()?,
            };
            let w = warren_adjoint(&fan, &z)?;
            Ok(Report::new(w.poly.to_string(), json!({ "warren": w.poly.to_string(), "degree": w.degree })))
        }
        Command::DualVolume => {
            let v = fmt_rat(&ctx.polytope()?.dual_volume_oracle(&ctx.x()?)?);
            Ok(Report::new(&v, json!({ "volume": v })))
        }
        Command::Irrelevant => {
            let fan = ctx.fan()?;
            let gens: Vec<String> = irrelevant_generators(&fan).iter().map(|g| monomial(fan.vars(), g)).collect();
            Ok(Report::new(gens.join("\n"), json!({ "generators": gens })))
        }
        Command::PrimitiveCollections => {
            let fan = ctx.fan()?;
            let cols: Vec<String> = primitive_collections(&fan).iter().map(|c| label_set(fan.vars(), c)).collect();
            Ok(Report::new(cols.join("\n"), json!({ "primitive_collections": cols })))
        }
        Command::Interpolate => {
            let a = interpolate_adjoint(ctx.polytope()?)?;
            Ok(Report::new(a.to_string(), json!({ "adjoint": a.to_string() })))
        }
        Command::Split => {
            let p = ctx.polytope()?;
            let face = ctx.face(p)?;
            match split_restriction(p, &face)? {
                None => Ok(Report::new("no split", json!({ "split": Value::Null }))),
                Some(s) => {
                    let factors: Vec<String> = s.factors.iter().map(|f| f.to_string()).collect();
                    let planes: Vec<String> = s.planes(p.vars(), &face).iter().map(|v| v.to_string()).collect();
                    let mut text = format!(
                        "restriction = {}\n",
                        std::iter::once(monomial_with(p.vars(), &s.prefactor, &s.constant))
                            .chain(factors.iter().map(|f| format!("({f})")))
                            .collect::<Vec<_>>()
                            .join("*")
                    );
                    for v in &planes {
                        let _ = writeln!(text, "{v}");
                    }
                    Ok(Report::new(
                        text,
                        json!({ "prefactor": labels_of(p.vars(), &s.prefactor), "constant": fmt_rat(&s.constant),
                                "factors": factors, "planes": planes }),
                    ))
                }
            }
        }
        Command::Walls => {
            let p = ctx.polytope()?;
            let walls = deformation_cone(p)?;
            let facet = facet_defining(p, &walls)?;
            let mut text = String::new();
            let mut rows = Vec::new();
            for (w, f) in walls.iter().zip(&facet) {
                let kind = if *f { "facet" } else { "redundant" };
                let _ = writeln!(text, "{}: {} >= 0  [{kind}]", one_based(&w.sigma), signed_form(p.vars(), w));
                rows.push(json!({ "sigma": ones(&w.sigma), "nb": ones(&w.nb), "k": ones(&w.k_set),
                                  "form": signed_form(p.vars(), w), "facet_defining": f }));
            }
            Ok(Report::new(text, json!({ "walls": rows })))
        }
        Command::DefCheck => {
            let p = ctx.polytope()?;
            let walls = deformation_cone(p)?;
            let (kind, faces) = match membership(&walls, &ctx.z()?) {
                Membership::Interior => ("interior", Vec::new()),
                Membership::Boundary(i) => ("boundary", i),
                Membership::Outside(i) => ("outside", i),
            };
            let sigmas: Vec<String> = faces.iter().map(|&i| one_based(&walls[i].sigma)).collect();
            let text = if sigmas.is_empty() { kind.to_string() } else { format!("{kind}: {}", sigmas.join(" ")) };
            Ok(Report::new(text, json!({ "membership": kind, "walls": sigmas })))
        }
        Command::ChamberSpaces => {
            let p = ctx.polytope()?;
            let mut text = String::new();
            let mut rows = Vec::new();
            for face in simplex_faces(p)? {
                let v = chamber_space(p, &face)?;
                let _ = writeln!(text, "{} (dim {}): {v}", one_based(&face.facets), face.dim);
                rows.push(json!({ "face": ones(&face.facets), "dim": face.dim, "space": v.to_string() }));
            }
            Ok(Report::new(text, json!({ "chamber_spaces": rows })))
        }
        Command::Shrink => {
            let p = ctx.polytope()?;
            let v = shrink_vertex(p, &ctx.face(p)?, &ctx.z()?)?;
            let s = rat_list(&v);
            Ok(Report::new(format!("({})", s.join(", ")), json!({ "vertex": s })))
        }
        Command::Degenerate => {
            let p = ctx.polytope()?;
            match degeneration_check(p, &ctx.face(p)?, &ctx.z()?)? {
                Degeneration::None => Ok(Report::new("none", json!({ "degeneration": "none" }))),
                Degeneration::LostFacets { warren, lost, factors } => {
                    let mut text = format!("lost facets {}\nwarren = {}\n", one_based(&lost), warren.poly);
                    let mut fs = Vec::new();
                    for (l, q) in &factors {
                        let _ = writeln!(text, "({l}) * ({q})");
                        fs.push(json!({ "linear": l.to_string(), "cofactor": q.to_string() }));
                    }
                    Ok(Report::new(
                        text,
                        json!({ "degeneration": "lost_facets", "lost": ones(&lost), "warren": warren.poly.to_string(),
                                "factors": fs }),
                    ))
                }
                Degeneration::Vertex { warren, vertex } => {
                    let s = rat_list(&vertex);
                    Ok(Report::new(
                        format!("vertex ({})\nwarren = {}", s.join(", "), warren.poly),
                        json!({ "degeneration": "vertex", "vertex": s, "warren": warren.poly.to_string() }),
                    ))
                }
            }
        }
        Command::Partials => {
            let fan = ctx.fan()?;
            let ps: Vec<String> = partials(&fan).iter().map(Poly::to_string).collect();
            let text: Vec<String> =
                ps.iter().enumerate().map(|(r, p)| format!("d/d{} = {p}", fan.vars().label(r))).collect();
            Ok(Report::new(text.join("\n"), json!({ "partials": ps })))
        }
        Command::SingSystem => {
            let fan = ctx.fan()?;
            let sys = sing_system(&fan, &ctx.indices(&cli.j, "J")?)?;
            let eqs: Vec<String> = sys.equations.iter().map(|e| e.poly().to_string()).collect();
            let text = FactoredCover { systems: std::slice::from_ref(&sys) }.to_string();
            Ok(Report::new(text, json!({ "J": ones(&sys.j), "equations": eqs })))
        }
        Command::SingDecompose => sing_decompose(&ctx),
        Command::SingCheck => {
            let fan = ctx.fan()?;
            let (kind, text, extra) = match sing_in_z_check(&fan)? {
                SingVerdict::Guaranteed(why) => ("guaranteed", format!("guaranteed: {why}"), json!(why)),
                SingVerdict::Inconclusive(why) => ("inconclusive", format!("inconclusive: {why}"), json!(why)),
                SingVerdict::TorusWitness(x) => {
                    let s = rat_list(&x);
                    ("torus_witness", format!("torus witness ({})", s.join(", ")), json!(s))
                }
            };
            Ok(Report::new(text, json!({ "verdict": kind, "detail": extra })))
        }
        Command::NgonCheck => {
            let g = ngon_generic_check(&ctx.fan()?)?;
            Ok(Report::new(if g { "generic" } else { "special" }, json!({ "generic": g })))
        }
        Command::SmoothCheck => {
            let p = ctx.polytope()?;
            let (kind, text, extra) = match warren_smoothness_d2(p, &ctx.z()?)? {
                Smoothness::Smooth => ("smooth", "smooth".to_string(), Value::Null),
                Smoothness::SingularAt(pt) => {
                    let s = rat_list(&pt);
                    ("singular", format!("singular at ({})", s.join(", ")), json!(s))
                }
                Smoothness::RetryExhausted(gs) => {
                    let s: Vec<String> = gs.iter().map(|g| g.to_string()).collect();
                    ("inconclusive", format!("inconclusive: common factors {}", s.join("; ")), json!(s))
                }
            };
            Ok(Report::new(text, json!({ "verdict": kind, "detail": extra })))
        }
        Command::Santalo => {
            let tol = cli.tol.unwrap_or(1e-10);
            let s = santalo_point(ctx.polytope()?, tol)?;
            let coords: Vec<String> = s.y.iter().map(|v| format!("{v:.12}")).collect();
            Ok(Report::new(
                format!("({})\ngradient norm {:.3e}, {} iterations", coords.join(", "), s.grad_norm, s.iterations),
                json!({ "y": s.y, "grad_norm": s.grad_norm, "iterations": s.iterations }),
            ))
        }
        Command::Verify => unreachable!("handled before input is read"),
    }
}

fn restrict(ctx: &Ctx) -> Result<Report> {
    let (res, vars): (Restriction, VarSet) = match (&ctx.cli.face, &ctx.input) {
        (Some(_), Input::Polytope(p)) => (face_restrict(p, &ctx.face(p)?)?, p.fan()?.vars().clone()),
        (Some(_), Input::Fan(_)) => return Err(precondition("--face needs a polytope input; use --tau for a fan")),
        (None, _) => {
            let fan = ctx.fan()?;
            (restrict_adjoint(&fan, &ctx.indices(&ctx.cli.tau, "tau")?)?, fan.vars().clone())
        }
    };
    let whole = res.assemble(&vars);
    let text = format!(
        "tau = {}\nprefactor = {}\nc = {}\nstar adjoint = {}\nrestriction = {}",
        one_based(&res.star.tau),
        monomial(&vars, &res.prefactor),
        fmt_rat(&res.c_tau),
        res.star_adjoint,
        whole
    );
    Ok(Report::new(
        text,
        json!({ "tau": ones(&res.star.tau), "prefactor": labels_of(&vars, &res.prefactor), "c": fmt_rat(&res.c_tau),
                "star_adjoint": res.star_adjoint.to_string(), "restriction": whole.to_string() }),
    ))
}

fn sing_decompose(ctx: &Ctx) -> Result<Report> {
    let fan = ctx.fan()?;
    let systems = all_sing_systems(&fan)?;
    match decompose_linear(&systems) {
        Ok(comps) => {
            let mut text = String::new();
            for c in &comps {
                let _ = writeln!(text, "dim {}: {}  [from {}]", c.space.dim(), c.space, sources(fan.vars(), c));
            }
            let summary = component_summary(&comps);
            text.push_str(&summary);
            let rows: Vec<Value> = comps
                .iter()
                .map(|c| json!({ "dim": c.space.dim(), "space": c.space.to_string(), "rows": space_rows(&c.space) }))
                .collect();
            Ok(Report::new(text, json!({ "components": rows, "summary": summary })))
        }
        // Nonlinear star adjoints: report the per-collection systems instead.
        Err(Error::Precondition(why)) => {
            let cover = FactoredCover { systems: &systems }.to_string();
            Ok(Report::new(
                format!("no linear decomposition ({why}); factored cover:\n{cover}"),
                json!({ "components": Value::Null, "factored_cover": cover }),
            ))
        }
        Err(e) => Err(e),
    }
}

fn run_verify(format: Format) -> Outcome {
    let checks = verify::run_all();
    let all = checks.iter().all(|c| c.pass);
    let stdout = match format {
        Format::Text => {
            let mut s = String::new();
            for c in &checks {
                let _ = writeln!(s, "{} {:>2} {}: {}", if c.pass { "PASS" } else { "FAIL" }, c.id, c.title, c.detail);
            }
            s
        }
        Format::Structured => {
            let rows: Vec<Value> = checks
                .iter()
                .map(|c| json!({ "id": c.id, "title": c.title, "pass": c.pass, "detail": c.detail }))
                .collect();
            format!("{}\n", serde_json::to_string_pretty(&json!({ "criteria": rows, "all_pass": all })).expect("json"))
        }
    };
    Outcome { code: if all { 0 } else { 3 }, stdout, stderr: String::new() }
}

fn ones(v: &[usize]) -> Vec<usize> {
    v.iter().map(|i| i + 1).collect()
}

fn labels_of(vars: &VarSet, idx: &[usize]) -> Vec<String> {
    idx.iter().map(|&i| vars.label(i).to_string()).collect()
}

fn label_set(vars: &VarSet, idx: &[usize]) -> String {
    format!("{{{}}}", labels_of(vars, idx).join(", "))
}

fn monomial(vars: &VarSet, idx: &[usize]) -> String {
    if idx.is_empty() { "1".into() } else { labels_of(vars, idx).join("*") }
}

fn monomial_with(vars: &VarSet, idx: &[usize], c: &Rat) -> String {
    Poly::squarefree(vars, idx, c.clone()).to_string()
}

fn rat_list(v: &[Rat]) -> Vec<String> {
    v.iter().map(fmt_rat).collect()
}

fn signed_form(vars: &VarSet, w: &WallForm) -> String {
    let f = w.form(vars);
    if w.sign < 0 { (-&f).to_string() } else { f.to_string() }
}

fn sources(vars: &VarSet, c: &SingComponent) -> String {
    c.sources.iter().map(|s| label_set(vars, s)).collect::<Vec<_>>().join(" ")
}

fn space_rows(v: &LinearVariety) -> Vec<Vec<String>> {
    v.rows().iter().map(|r| rat_list(r)).collect()
}
