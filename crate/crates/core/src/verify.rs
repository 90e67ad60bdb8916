//! The acceptance suite: one check per criterion, each replaying the
//! shipped fixtures and seeded random instances.

use std::collections::BTreeSet;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::amplitude::{adjoint, adjoint_cone_order, amplitude, evaluate_amplitude, santalo_point, vanishes_on_im_u, warren_adjoint};
use crate::combinat::{interpolate_adjoint, primitive_collections, split_restriction};
use crate::deform::{deformation_cone, degeneration_check, facet_defining, Degeneration};
use crate::fan::SimplicialFan;
use crate::fixtures;
use crate::polytope::{FaceRef, HPolytope};
use crate::random;
use crate::scalar::{int, to_f64};
use crate::singular::{
    all_sing_systems, build_m, component_summary, decompose_linear, ngon_generic_check, partials, polygon_dets,
    polygon_order, sing_in_z_check, sing_system, solution_spaces, warren_smoothness_d2, SingVerdict, Smoothness,
};
use crate::variety::LinearVariety;
use crate::{Poly, Rat, RatMat, VarSet};

/// Outcome of one criterion.
#[derive(Clone, Debug)]
pub struct Check {
    pub id: usize,
    pub title: &'static str,
    pub pass: bool,
    pub detail: String,
}

type Outcome = std::result::Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond { Ok(()) } else { Err(msg()) }
}

fn e2s<T>(r: crate::Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn parse(s: &str, vars: &VarSet) -> std::result::Result<Poly, String> {
    e2s(Poly::parse(s, vars))
}

fn ints(v: &[i64]) -> Vec<Rat> {
    v.iter().map(|&x| int(x)).collect()
}

pub const TITLES: [&str; 13] = [
    "pentagon adjoint, nodes, planes and incidences",
    "ABHY 3d associahedron",
    "hexagon singular locus",
    "octagon singular loci",
    "M-matrix laws",
    "adjoint vanishes on im(U)",
    "Warren adjoints",
    "amplitude equals dual volume",
    "interpolation uniqueness",
    "product law",
    "cuboid deformations",
    "Santalo point",
    "Warren smoothness",
];

pub fn run(id: usize) -> Check {
    let outcome = match id {
        1 => pentagon(),
        2 => abhy(),
        3 => hexagon(),
        4 => octagon(),
        5 => m_matrix(),
        6 => im_u(),
        7 => warren(),
        8 => dual_volume(),
        9 => interpolation(),
        10 => product(),
        11 => cuboid(),
        12 => santalo(),
        13 => smoothness(),
        _ => Err(format!("no criterion {id}")),
    };
    let title = TITLES.get(id.wrapping_sub(1)).copied().unwrap_or("unknown");
    match outcome {
        Ok(detail) => Check { id, title, pass: true, detail },
        Err(detail) => Check { id, title, pass: false, detail },
    }
}

pub fn run_all() -> Vec<Check> {
    (1..=TITLES.len()).map(run).collect()
}

fn hessian_rank(a: &Poly, x: &[Rat]) -> std::result::Result<usize, String> {
    let n = x.len();
    let firsts: Vec<Poly> = (0..n).map(|i| a.partial(i)).collect();
    let mut h = RatMat::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            h[(i, j)] = e2s(firsts[i].partial(j).eval(x))?;
        }
    }
    Ok(h.rank())
}

fn pentagon() -> Outcome {
    let plain = fixtures::fan("pentagon");
    let want = "x3*x4*x5 + x1*x4*x5 + x1*x2*x5 + x1*x2*x3 + x2*x3*x4";
    let got = adjoint_cone_order(&plain);
    ensure(got == want, || format!("adjoint is {got}"))?;

    let fan = fixtures::fan("pentagon-general");
    ensure(e2s(polygon_order(&fan))? == vec![0, 1, 2, 3, 4], || "rays are not in cyclic order".into())?;
    let dets = e2s(polygon_dets(&fan))?;
    // u(k) = u_{k,k+1}, cyclic and 1-based; x(k) is the 0-based index of x_k.
    let x = |k: i64| (k - 1).rem_euclid(5) as usize;
    let u = |k: i64| dets[x(k)].clone();
    let vars = fan.vars();
    let a = adjoint(&fan);
    let mut nodes: Vec<(String, Vec<Rat>)> = Vec::new();
    for i in 1..=5 {
        let mut e = vec![Rat::zero(); 5];
        e[x(i)] = Rat::one();
        nodes.push((format!("e{i}"), e));
    }
    for i in 1..=5i64 {
        let mut q = vec![Rat::zero(); 5];
        q[x(i + 1)] = -(u(i) * u(i + 1));
        q[x(i + 3)] = u(i) * u(i + 2);
        q[x(i + 4)] = u(i - 1) * u(i + 1);
        let (a1, a2) = (x(i) + 1, x(i + 2) + 1);
        nodes.push((format!("q{}{}", a1.min(a2), a1.max(a2)), q));
    }
    let parts = partials(&fan);
    for (name, pt) in &nodes {
        for (r, p) in parts.iter().enumerate() {
            ensure(e2s(p.eval(pt))?.is_zero(), || format!("partial {} does not vanish at {name}", r + 1))?;
        }
        let rank = hessian_rank(&a, pt)?;
        ensure(rank == 4, || format!("Hessian at {name} has rank {rank}"))?;
    }

    let lin = |c: &[(i64, Rat)]| -> Vec<Rat> {
        let mut row = vec![Rat::zero(); 5];
        for (k, v) in c {
            row[x(*k)] += v;
        }
        row
    };
    let mut planes: Vec<(String, LinearVariety)> = Vec::new();
    for i in 1..=5i64 {
        let rows = [lin(&[(i, Rat::one())]), lin(&[(i + 2, Rat::one())])];
        planes.push((format!("Lambda{}{}", x(i) + 1, x(i + 2) + 1), e2s(LinearVariety::from_rows(vars, &rows))?));
    }
    for i in 1..=5i64 {
        let rows = [lin(&[(i, Rat::one())]), lin(&[(i + 1, u(i - 1)), (i - 1, u(i))])];
        planes.push((format!("H{i}"), e2s(LinearVariety::from_rows(vars, &rows))?));
    }
    for i in 1..=5i64 {
        let rows = [
            lin(&[(i + 1, u(i - 1)), (i - 1, u(i))]),
            lin(&[(i + 1, u(i - 1) * u(i + 2)), (i + 2, -(u(i) * u(i - 2))), (i - 2, u(i - 1) * u(i + 1))]),
        ];
        planes.push((format!("L{i}"), e2s(LinearVariety::from_rows(vars, &rows))?));
    }
    for (name, v) in &planes {
        ensure(v.dim() == 2, || format!("{name} is not a plane"))?;
        ensure(e2s(v.vanishes(&a))?, || format!("adjoint does not vanish on {name}"))?;
    }
    for (name, v) in &planes {
        let k = nodes.iter().filter(|(_, p)| v.contains_point(p)).count();
        ensure(k == 4, || format!("{name} contains {k} nodes"))?;
    }
    for (name, p) in &nodes {
        let k = planes.iter().filter(|(_, v)| v.contains_point(p)).count();
        ensure(k == 6, || format!("{name} lies on {k} planes"))?;
    }
    Ok("adjoint matches; 10 nodes with Hessian rank 4; 15 planes; (15_4, 10_6)".into())
}

fn abhy() -> Outcome {
    let p = fixtures::polytope("abhy3");
    let vs = e2s(p.vertices())?;
    let edges = e2s(p.faces(1))?;
    let nf = e2s(p.normal_fan())?;
    ensure(vs.len() == 14 && edges.len() == 21 && nf.dropped.is_empty() && p.n() == 9, || {
        format!("{} vertices, {} edges, {} facets", vs.len(), edges.len(), p.n() - nf.dropped.len())
    })?;
    let fan = nf.fan;
    let vars = fan.vars();
    let a = adjoint(&fan);
    let ok = a.num_terms() == 14 && a.terms().all(|(m, _)| m.is_squarefree() && m.degree() == 6);
    ensure(ok, || format!("adjoint has {} terms", a.num_terms()))?;

    let listed = [
        "x46 x35", "x46 x25", "x46 x15", "x36 x25", "x36 x24", "x36 x15", "x36 x14", "x35 x24", "x35 x14", "x26 x15",
        "x26 x14", "x26 x13", "x25 x14", "x25 x13", "x24 x13",
    ];
    let want: BTreeSet<BTreeSet<&str>> = listed.iter().map(|s| s.split(' ').collect()).collect();
    let got: BTreeSet<BTreeSet<&str>> =
        primitive_collections(&fan).iter().map(|c| c.iter().map(|&i| vars.label(i)).collect()).collect();
    ensure(got == want, || format!("primitive collections differ: {got:?}"))?;

    let v = |s: &str| -> std::result::Result<LinearVariety, String> {
        let forms = s.split(',').map(|f| parse(f.trim(), vars)).collect::<std::result::Result<Vec<_>, _>>()?;
        e2s(LinearVariety::from_forms(vars, &forms))
    };
    let want_planes: BTreeSet<LinearVariety> = [
        "x14, x13 + x24",
        "x14, x15 + x46",
        "x25, x24 + x35",
        "x25, x26 + x15",
        "x36, x35 + x46",
        "x36, x13 + x26",
    ]
    .iter()
    .map(|s| v(s))
    .collect::<std::result::Result<_, _>>()?;
    let mut got_planes = BTreeSet::new();
    for q in ["x14", "x25", "x36"] {
        let face = FaceRef { facets: vec![vars.index_of(q).expect("label")], dim: 2 };
        let s = e2s(split_restriction(&p, &face))?.ok_or_else(|| format!("{q} does not split"))?;
        got_planes.extend(s.planes(vars, &face));
    }
    ensure(got_planes == want_planes, || "split planes differ".into())?;
    for plane in &want_planes {
        ensure(e2s(plane.vanishes(&a))?, || format!("adjoint does not vanish on {plane}"))?;
    }
    // x25 and x36 label crossing diagonals, so x36 cannot occur in the star of x25.
    ensure(!e2s(v("x25, x24 + x36")?.vanishes(&a))?, || "adjoint vanishes on V(x25, x24 + x36)".into())?;

    let idx = |l: &str| vars.index_of(l).expect("label");
    let sys = e2s(sing_system(&fan, &[idx("x36"), idx("x15")]))?;
    let eq = |l: &str| sys.equations.iter().find(|e| e.ray == idx(l)).map(|e| e.poly());
    let want15 = parse("x14*x25*x24*(x35 + x46)*(x13 + x26)", vars)?;
    let want36 = parse("x46*x26*(x13*x14*x24 + x13*x14*x35 + x13*x25*x35 + x14*x24*x25 + x24*x25*x35)", vars)?;
    ensure(eq("x15") == Some(want15) && eq("x36") == Some(want36), || "factored system for {x36, x15} differs".into())?;
    Ok("14 vertices, 21 edges, 9 facets; 14-term sextic; 15 primitive collections; 6 split planes; {x36,x15} system".into())
}

fn hexagon() -> Outcome {
    let fan = fixtures::fan("hexagon");
    let systems = e2s(all_sing_systems(&fan))?;
    let comps = e2s(decompose_linear(&systems))?;
    let spaces = e2s(solution_spaces(&systems))?;
    let parts = partials(&fan);
    for c in spaces.iter() {
        for p in &parts {
            ensure(e2s(c.space.vanishes(p))?, || format!("{} is not singular", c.space))?;
        }
    }
    let got = component_summary(&comps);
    let detail = format!("maximal: {got}; before pruning: {}", component_summary(&spaces));
    ensure(got == "30 components of dim 1, 2 components of dim 2", || detail.clone())?;
    Ok(detail)
}

fn octagon() -> Outcome {
    let a2 = fixtures::fan("octagon-alpha2");
    ensure(e2s(ngon_generic_check(&a2))?, || "alpha = 2 reported special".into())?;
    let comps = e2s(decompose_linear(&e2s(all_sing_systems(&a2))?))?;
    let summary = component_summary(&comps);
    ensure(summary == "40 components of dim 3, 16 components of dim 4", || format!("alpha = 2: {summary}"))?;
    let parts = partials(&a2);
    for c in &comps {
        for p in &parts {
            ensure(e2s(c.space.vanishes(p))?, || format!("{} is not singular", c.space))?;
        }
    }
    let a1 = fixtures::fan("octagon-alpha1");
    ensure(!e2s(ngon_generic_check(&a1))?, || "alpha = 1 reported generic".into())?;
    let verdict = e2s(sing_in_z_check(&a1))?;
    ensure(matches!(verdict, SingVerdict::TorusWitness(_)), || format!("alpha = 1 verdict {verdict:?}"))?;
    let forms = ["x6 + x8", "x5 + x7", "x4 - x8", "x3 - x7", "x2 + x8", "x1 + x7"]
        .iter()
        .map(|s| parse(s, a1.vars()))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let line = e2s(LinearVariety::from_forms(a1.vars(), &forms))?;
    ensure(line.dim() == 1, || "the six forms do not cut out a line".into())?;
    for p in partials(&a1) {
        ensure(e2s(line.vanishes(&p))?, || format!("{p} does not vanish on the line"))?;
    }
    Ok(format!("alpha = 2: {summary}; alpha = 1: torus witness and singular line"))
}

/// Columns of `M` in cyclic order `{1,2}, {2,3}, ..., {n,1}`.
fn cyclic_columns(fan: &SimplicialFan, cones: &[Vec<usize>]) -> std::result::Result<Vec<usize>, String> {
    let o = e2s(polygon_order(fan))?;
    let n = o.len();
    (0..n)
        .map(|i| {
            let mut c = vec![o[i], o[(i + 1) % n]];
            c.sort_unstable();
            cones.iter().position(|k| *k == c).ok_or_else(|| "missing cone".to_string())
        })
        .collect()
}

fn check_m_shape(fan: &SimplicialFan) -> std::result::Result<(), String> {
    let data = e2s(build_m(fan))?;
    let o = e2s(polygon_order(fan))?;
    let u = e2s(polygon_dets(fan))?;
    let cols = cyclic_columns(fan, &data.cones)?;
    let n = o.len();
    for (ri, &r) in o.iter().enumerate() {
        for (i, &s) in cols.iter().enumerate() {
            let zero = ri == i || ri == (i + 1) % n;
            let want = if zero { Rat::zero() } else { u[i].clone() };
            ensure(data.m[(r, s)] == want, || format!("M entry ({}, {}) differs", ri + 1, i + 1))?;
        }
    }
    Ok(())
}

fn m_matrix() -> Outcome {
    check_m_shape(&fixtures::fan("pentagon-general"))?;
    check_m_shape(&fixtures::fan("hexagon"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for n in 3..=12 {
        for _ in 0..2 {
            let fan = e2s(random::polygon_fan(&mut rng, n))?;
            check_m_shape(&fan)?;
            let data = e2s(build_m(&fan))?;
            let rank = data.m.rank();
            let want = if n % 2 == 1 { n } else { n - 1 };
            ensure(rank == want, || format!("random {n}-gon: rank {rank}"))?;
            if n == 6 {
                check_hexagon_kernel(&fan)?;
            }
        }
    }
    check_hexagon_kernel(&fixtures::fan("hexagon"))?;
    Ok("displayed shapes; rank law for n = 3..12; hexagon kernel".into())
}

fn check_hexagon_kernel(fan: &SimplicialFan) -> std::result::Result<(), String> {
    let data = e2s(build_m(fan))?;
    ensure(data.kernel.len() == 1, || "hexagon kernel is not one-dimensional".into())?;
    let u = e2s(polygon_dets(fan))?;
    let cols = cyclic_columns(fan, &data.cones)?;
    let k: Vec<Rat> = cols.iter().map(|&c| data.kernel[0][c].clone()).collect();
    let want: Vec<Rat> = u.iter().enumerate().map(|(i, v)| if i % 2 == 0 { v.recip() } else { -v.recip() }).collect();
    let ratio = &k[0] / &want[0];
    ensure(k.iter().zip(&want).all(|(a, b)| *a == b * &ratio), || "hexagon kernel differs".into())
}

fn im_u() -> Outcome {
    for name in ["pentagon", "square", "hexagon", "fulton"] {
        ensure(vanishes_on_im_u(&fixtures::fan(name)), || format!("{name}: Adj(Uy) is not zero"))?;
    }
    for name in ["cube", "cuboid"] {
        let fan = e2s(fixtures::polytope(name).fan())?;
        ensure(vanishes_on_im_u(&fan), || format!("{name}: Adj(Uy) is not zero"))?;
    }
    ensure(!vanishes_on_im_u(&fixtures::fan("cone-over-square")), || "cone over square: Adj(Uy) is zero".into())?;
    Ok("vanishes for 6 complete fans; not for the cone over a square".into())
}

fn warren() -> Outcome {
    let p = fixtures::polytope("pentagon");
    let w = e2s(warren_adjoint(&e2s(p.fan())?, p.z()))?;
    ensure(w.poly == parse("5 - 3*y1 + 3*y2 - y1*y2", w.poly.vars())?, || format!("pentagon: {}", w.poly))?;
    let q = fixtures::polytope("unbounded-pentagon");
    let w = e2s(warren_adjoint(&e2s(q.normal_fan())?.fan, q.z()))?;
    let want = parse("20*y1^3 + 224*y1^2 - 20*y1*y2^2 + 812*y1 - 90*y2^2 + 960", w.poly.vars())?;
    ensure(w.poly == want, || format!("unbounded pentagon: {}", w.poly))?;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..50 {
        let d = rng.gen_range(2..=3);
        let n = rng.gen_range(d + 1..=7);
        let p = e2s(random::polytope(&mut rng, d, n))?;
        let z: Vec<Rat> = (0..n).map(|_| random::small_int(&mut rng, -9, 9)).collect();
        let w = e2s(warren_adjoint(&e2s(p.fan())?, &z))?;
        ensure(w.degree.is_none_or(|k| k as usize + d < n), || format!("degree {:?} with n = {n}, d = {d}", w.degree))?;
    }
    Ok("pentagon hyperbola; unbounded pentagon cubic; degree bound on 50 random fans".into())
}

fn dual_volume() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for name in ["pentagon", "hexagon", "cube", "cuboid"] {
        let p = fixtures::polytope(name);
        let mut done = 0;
        let mut tries = 0;
        while done < 100 {
            tries += 1;
            ensure(tries < 10_000, || format!("{name}: too many non-simple samples"))?;
            let x: Vec<Rat> = (0..p.n()).map(|_| random::positive_rat(&mut rng)).collect();
            let Ok(px) = p.with_z(x.clone()) else { continue };
            let Ok(nf) = px.normal_fan() else { continue };
            let xs: Vec<Rat> = nf.rows.iter().map(|&r| x[r].clone()).collect();
            let amp = e2s(evaluate_amplitude(&nf.fan, &xs))?;
            let vol = e2s(p.dual_volume_oracle(&x))?;
            ensure(amp == vol, || format!("{name} at {x:?}: {amp} vs {vol}"))?;
            done += 1;
        }
    }
    Ok("400 exact comparisons".into())
}

fn interpolation() -> Outcome {
    let mut polys: Vec<(String, HPolytope)> = Vec::new();
    for (name, _) in fixtures::ALL {
        if let Some(base) = name.strip_suffix(".polytope") {
            let p = fixtures::polytope(base);
            if p.is_bounded() {
                polys.push((base.to_string(), p));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for i in 0..20 {
        polys.push((format!("random {i}"), e2s(random::any_polytope(&mut rng, 3, 8))?));
    }
    for (name, p) in &polys {
        let got = e2s(interpolate_adjoint(p))?;
        let want = adjoint(&e2s(p.fan())?);
        ensure(got == want, || format!("{name}: {got} vs {want}"))?;
    }
    Ok(format!("{} polytopes", polys.len()))
}

fn product() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for _ in 0..20 {
        let (d1, d2) = (rng.gen_range(1..=2), rng.gen_range(1..=2));
        let f1 = e2s(random::complete_fan(&mut rng, d1, 6))?;
        let f2 = e2s(random::complete_fan(&mut rng, d2, 6))?;
        let prod = f1.product(&f2);
        let (n1, n2) = (f1.n(), f2.n());
        let vars = prod.vars();
        let a1 = adjoint(&f1).embed(vars, &(0..n1).collect::<Vec<_>>());
        let a2 = adjoint(&f2).embed(vars, &(n1..n1 + n2).collect::<Vec<_>>());
        ensure(adjoint(&prod) == &a1 * &a2, || "adjoint of a product differs".into())?;
    }
    let cube = e2s(fixtures::polytope("cube").fan())?;
    let want = parse("(x1 + x2)*(x3 + x4)*(x5 + x6)", cube.vars())?;
    ensure(adjoint(&cube) == want, || "cube adjoint differs".into())?;
    Ok("20 random products; cube".into())
}

fn cuboid() -> Outcome {
    let p = fixtures::polytope("cuboid");
    let fan = e2s(p.fan())?;
    let want = parse(
        "12*x1*x2*x5 + 48*x1*x3*x5 + 24*x1*x3*x6 + 36*x1*x4*x5 + 28*x1*x4*x6 + 28*x2*x3*x6 + 40*x2*x4*x6 + 20*x2*x5*x6",
        fan.vars(),
    )?;
    ensure(adjoint(&fan) == want, || format!("adjoint is {}", adjoint(&fan)))?;

    let d0 = e2s(degeneration_check(&p, &FaceRef { facets: vec![0], dim: 2 }, &ints(&[7, 0, 1, 0, 0, 2])))?;
    let Degeneration::LostFacets { factors, .. } = d0 else { return Err("z0 does not lose a facet".into()) };
    let split = factors.first().map(|(l, _)| l.to_string()).unwrap_or_default();
    ensure(split == "-8*y1 - 11*y2 - 7*y3 + 7", || format!("z0 splits off {split}"))?;

    let d1 = e2s(degeneration_check(&p, &FaceRef { facets: vec![2, 3], dim: 1 }, &ints(&[33, -26, 9, 0, 0, 0])))?;
    let Degeneration::Vertex { warren, vertex } = d1 else { return Err("z1 is not a vertex degeneration".into()) };
    let want = parse("-16*(120*y1*y2 - 38*y1*y3 + 165*y2^2 + 79*y2*y3 - 495*y2 + 8*y3^2 - 72*y3)", warren.poly.vars())?;
    ensure(warren.poly == want, || format!("z1 quadric is {}", warren.poly))?;
    ensure(vertex == ints(&[0, 3, 0]) && e2s(warren.poly.eval(&vertex))?.is_zero(), || format!("vertex {vertex:?}"))?;

    let walls = e2s(deformation_cone(&p))?;
    let facet = e2s(facet_defining(&p, &walls))?;
    let i35 = walls.iter().position(|w| w.sigma == vec![2, 4]).ok_or("no edge {3,5}")?;
    ensure(!facet[i35], || "edge {3,5} wall reported facet-defining".into())?;
    Ok("adjoint; z0 split; z1 quadric through (0,3,0); wall {3,5} redundant".into())
}

/// Minimizes `Amp(U y + z)` over the interior by repeated grid refinement.
fn grid_santalo(p: &HPolytope) -> std::result::Result<Vec<f64>, String> {
    let d = p.dim();
    let fan = e2s(p.fan())?;
    let terms: Vec<(f64, Vec<usize>)> = amplitude(&fan).terms.iter().map(|(c, k)| (to_f64(c), k.clone())).collect();
    let u: Vec<Vec<f64>> = p.u().to_rows().iter().map(|r| r.iter().map(to_f64).collect()).collect();
    let z: Vec<f64> = p.z().iter().map(to_f64).collect();
    let amp = |y: &[f64]| -> Option<f64> {
        let s: Vec<f64> = u.iter().zip(&z).map(|(r, zi)| r.iter().zip(y).map(|(a, b)| a * b).sum::<f64>() + zi).collect();
        if s.iter().any(|&v| v <= 0.0) {
            return None;
        }
        Some(terms.iter().map(|(c, k)| c / k.iter().map(|&r| s[r]).product::<f64>()).sum())
    };
    let vs = e2s(p.vertices())?;
    let mut lo = vec![f64::INFINITY; d];
    let mut hi = vec![f64::NEG_INFINITY; d];
    for v in &vs {
        for j in 0..d {
            lo[j] = lo[j].min(to_f64(&v.point[j]));
            hi[j] = hi[j].max(to_f64(&v.point[j]));
        }
    }
    const STEPS: usize = 40;
    let mut best: Option<(f64, Vec<f64>)> = None;
    for _ in 0..60 {
        let mut idx = vec![0usize; d];
        loop {
            let y: Vec<f64> = (0..d).map(|j| lo[j] + (hi[j] - lo[j]) * idx[j] as f64 / STEPS as f64).collect();
            if let Some(a) = amp(&y) {
                if best.as_ref().is_none_or(|(b, _)| a < *b) {
                    best = Some((a, y));
                }
            }
            let mut j = 0;
            while j < d && idx[j] == STEPS {
                idx[j] = 0;
                j += 1;
            }
            if j == d {
                break;
            }
            idx[j] += 1;
        }
        let (_, c) = best.clone().ok_or("no interior grid point")?;
        for j in 0..d {
            let w = (hi[j] - lo[j]) / 4.0;
            lo[j] = c[j] - w;
            hi[j] = c[j] + w;
        }
    }
    Ok(best.ok_or("no interior grid point")?.1)
}

fn santalo() -> Outcome {
    let sq = fixtures::polytope("unit-square");
    let s = e2s(santalo_point(&sq, 1e-12))?;
    let err = s.y.iter().map(|v| (v - 0.5).abs()).fold(0.0, f64::max);
    ensure(err < 1e-8 && s.grad_norm < 1e-8, || format!("square: {:?}, gradient {}", s.y, s.grad_norm))?;
    for name in ["pentagon", "simplex2"] {
        let p = fixtures::polytope(name);
        let s = e2s(santalo_point(&p, 1e-12))?;
        let g = grid_santalo(&p)?;
        let err = s.y.iter().zip(&g).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        ensure(err < 1e-4, || format!("{name}: Newton {:?}, grid {:?}", s.y, g))?;
    }
    Ok("square centre; pentagon and triangle agree with grid refinement".into())
}

fn smoothness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for name in ["pentagon", "hexagon"] {
        let p = fixtures::polytope(name);
        for _ in 0..10 {
            let z = e2s(random::interior_z(&mut rng, &p))?;
            let v = e2s(warren_smoothness_d2(&p, &z))?;
            ensure(v == Smoothness::Smooth, || format!("{name} at {z:?}: {v:?}"))?;
        }
    }
    let p = fixtures::polytope("pentagon");
    let z0 = ints(&[1, 1, 1, 2, 1]);
    let Degeneration::LostFacets { factors, .. } = e2s(degeneration_check(&p, &FaceRef { facets: vec![3], dim: 1 }, &z0))?
    else {
        return Err("pentagon z0 does not factor".into());
    };
    let (l, q) = &factors[0];
    let (a, b) = (l.linear_coeffs().ok_or("nonlinear factor")?, q.linear_coeffs().ok_or("nonlinear factor")?);
    let m = e2s(RatMat::from_rows(&[a.0.clone(), b.0.clone()], 2))?;
    let cross = e2s(m.solve(&[-a.1.clone(), -b.1.clone()]))?.ok_or("factors are parallel")?;
    let v = e2s(warren_smoothness_d2(&p, &z0))?;
    ensure(v == Smoothness::SingularAt(cross.clone()), || format!("boundary pentagon: {v:?}, lines cross at {cross:?}"))?;
    Ok("20 smooth certificates; boundary pentagon singular where its two lines cross".into())
}
