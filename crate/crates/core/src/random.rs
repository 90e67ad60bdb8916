//! Seeded random instances for property checks.

use rand::Rng;

use crate::deform::{deformation_cone, membership, Membership};
use crate::error::{Error, Result};
use crate::fan::SimplicialFan;
use crate::polytope::HPolytope;
use crate::scalar::int;
use crate::Rat;

const MAX_TRIES: usize = 10_000;

fn exhausted(what: &str) -> Error {
    Error::Precondition(format!("no {what} found after {MAX_TRIES} tries"))
}

/// A bounded simple polytope `{U y + z >= 0}` of dimension `d` with `n`
/// facets and the origin in its interior. Entries of `U` lie in `[-4, 4]`.
/// A segment has exactly two facets, so `d = 1` requires `n = 2`.
pub fn polytope<R: Rng>(rng: &mut R, d: usize, n: usize) -> Result<HPolytope> {
    if n <= d || (d == 1 && n != 2) {
        return Err(Error::Precondition(format!("no simple {d}-polytope has {n} facets")));
    }
    for _ in 0..MAX_TRIES {
        let u: Vec<Vec<i64>> = (0..n)
            .map(|_| loop {
                let row: Vec<i64> = (0..d).map(|_| rng.gen_range(-4..=4)).collect();
                if row.iter().any(|&v| v != 0) {
                    break row;
                }
            })
            .collect();
        let z: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=6)).collect();
        let rows: Vec<&[i64]> = u.iter().map(Vec::as_slice).collect();
        let Ok(p) = HPolytope::from_ints(&rows, &z) else { continue };
        if !p.is_bounded() || p.vertices().is_err() {
            continue;
        }
        if p.normal_fan().is_ok_and(|nf| nf.dropped.is_empty()) {
            return Ok(p);
        }
    }
    Err(exhausted("simple polytope"))
}

/// Like [`polytope`] with `d` in `1..=max_d` and `n` in `d+1..=max_n`.
pub fn any_polytope<R: Rng>(rng: &mut R, max_d: usize, max_n: usize) -> Result<HPolytope> {
    let d = rng.gen_range(1..=max_d);
    let n = if d == 1 { 2 } else { rng.gen_range(d + 1..=max_n.max(d + 1)) };
    polytope(rng, d, n)
}

/// Complete polygon fan with `n` integer rays in counterclockwise order and
/// cones `{i, i+1}`.
pub fn polygon_fan<R: Rng>(rng: &mut R, n: usize) -> Result<SimplicialFan> {
    if n < 3 {
        return Err(Error::Precondition("a polygon needs three rays".into()));
    }
    let radius = 40.0;
    for _ in 0..MAX_TRIES {
        let mut angles: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..std::f64::consts::TAU)).collect();
        angles.sort_by(f64::total_cmp);
        let rays: Vec<[i64; 2]> =
            angles.iter().map(|a| [(radius * a.cos()).round() as i64, (radius * a.sin()).round() as i64]).collect();
        let turns_left = (0..n).all(|i| {
            let (a, b) = (rays[i], rays[(i + 1) % n]);
            a[0] * b[1] - a[1] * b[0] > 0
        });
        if !turns_left {
            continue;
        }
        let ray_refs: Vec<&[i64]> = rays.iter().map(|r| r.as_slice()).collect();
        let cones: Vec<Vec<usize>> = (0..n).map(|i| vec![i, (i + 1) % n]).collect();
        let cone_refs: Vec<&[usize]> = cones.iter().map(Vec::as_slice).collect();
        if let Ok(f) = SimplicialFan::from_ints(2, &ray_refs, &cone_refs) {
            if f.validate(true).is_ok() {
                return Ok(f);
            }
        }
    }
    Err(exhausted("polygon fan"))
}

/// Normal fan of a random simple polytope of dimension `d`.
pub fn complete_fan<R: Rng>(rng: &mut R, d: usize, max_n: usize) -> Result<SimplicialFan> {
    let n = if d == 1 { 2 } else { rng.gen_range(d + 1..=max_n.max(d + 1)) };
    polytope(rng, d, n)?.fan()
}

/// Strictly positive rational with numerator and denominator at most 20.
pub fn positive_rat<R: Rng>(rng: &mut R) -> Rat {
    Rat::new(rng.gen_range(1..=20).into(), rng.gen_range(1..=20).into())
}

/// `z` plus a small random perturbation, resampled until it lies in the
/// interior of the deformation cone.
pub fn interior_z<R: Rng>(rng: &mut R, p: &HPolytope) -> Result<Vec<Rat>> {
    let walls = deformation_cone(p)?;
    for _ in 0..MAX_TRIES {
        let z: Vec<Rat> = p.z().iter().map(|v| v + Rat::new(rng.gen_range(-10..=10).into(), 20.into())).collect();
        if membership(&walls, &z) == Membership::Interior {
            return Ok(z);
        }
    }
    Err(exhausted("interior z"))
}

pub fn small_int<R: Rng>(rng: &mut R, lo: i64, hi: i64) -> Rat {
    int(rng.gen_range(lo..=hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generators_produce_valid_instances() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for (d, n) in [(1, 2), (2, 5), (3, 6)] {
            let p = polytope(&mut rng, d, n).unwrap();
            assert!(p.is_bounded());
            p.fan().unwrap().validate(true).unwrap();
        }
        for n in 3..=12 {
            let f = polygon_fan(&mut rng, n).unwrap();
            assert!(f.is_complete());
        }
        let p = polytope(&mut rng, 2, 5).unwrap();
        let z = interior_z(&mut rng, &p).unwrap();
        assert!(p.with_z(z).unwrap().vertices().is_ok());
    }
}
