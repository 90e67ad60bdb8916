//! Exact feasibility of linear inequality systems by Fourier–Motzkin
//! elimination. Intended for the handful of variables that occur here
//! (at most the ambient dimension or the corank of a ray matrix).

use std::collections::HashMap;

use num_traits::{Signed, Zero};

use crate::Rat;

/// A constraint `a . x >= b`.
#[derive(Clone, Debug, PartialEq)]
pub struct Ineq {
    pub a: Vec<Rat>,
    pub b: Rat,
}

impl Ineq {
    pub fn new(a: Vec<Rat>, b: Rat) -> Self {
        Ineq { a, b }
    }

    /// `a . x <= b`, stored as `-a . x >= -b`.
    pub fn at_most(a: Vec<Rat>, b: Rat) -> Self {
        Ineq { a: a.into_iter().map(|v| -v).collect(), b: -b }
    }
}

/// Inserts `c` scaled so its first nonzero coefficient is +-1; parallel
/// constraints keep only the tightest bound. Returns false when `c` has no
/// variables and is violated.
fn insert(pool: &mut HashMap<Vec<Rat>, Rat>, c: Ineq) -> bool {
    let Some(lead) = c.a.iter().find(|v| !v.is_zero()).map(|v| v.abs()) else {
        return c.b <= Rat::zero();
    };
    let a: Vec<Rat> = c.a.iter().map(|v| v / &lead).collect();
    let b = c.b / lead;
    match pool.get_mut(&a) {
        Some(old) if *old >= b => {}
        Some(old) => *old = b,
        None => {
            pool.insert(a, b);
        }
    }
    true
}

/// True iff `{x : a_i . x >= b_i for all i}` is nonempty.
pub fn feasible(constraints: &[Ineq], nvars: usize) -> bool {
    let mut pool = HashMap::new();
    for c in constraints {
        debug_assert_eq!(c.a.len(), nvars);
        if !insert(&mut pool, c.clone()) {
            return false;
        }
    }
    let mut remaining: Vec<usize> = (0..nvars).collect();
    while !remaining.is_empty() {
        // Eliminate the variable producing the fewest new constraints.
        let (pos_in_rem, &k) = remaining
            .iter()
            .enumerate()
            .min_by_key(|(_, &k)| {
                let p = pool.keys().filter(|a| a[k].is_positive()).count();
                let n = pool.keys().filter(|a| a[k].is_negative()).count();
                p * n
            })
            .expect("nonempty");
        remaining.swap_remove(pos_in_rem);
        let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), HashMap::new());
        for (a, b) in pool.drain() {
            if a[k].is_positive() {
                pos.push(Ineq { a, b });
            } else if a[k].is_negative() {
                neg.push(Ineq { a, b });
            } else {
                rest.insert(a, b);
            }
        }
        for p in &pos {
            for q in &neg {
                let (s, t) = (-q.a[k].clone(), p.a[k].clone());
                let a: Vec<Rat> = p.a.iter().zip(&q.a).map(|(x, y)| &s * x + &t * y).collect();
                let b = &s * &p.b + &t * &q.b;
                if !insert(&mut rest, Ineq { a, b }) {
                    return false;
                }
            }
        }
        pool = rest;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn ineq(a: &[i64], b: i64) -> Ineq {
        Ineq::new(a.iter().map(|&v| int(v)).collect(), int(b))
    }

    #[test]
    fn box_is_feasible() {
        let c = [ineq(&[1, 0], 0), ineq(&[-1, 0], -1), ineq(&[0, 1], 0), ineq(&[0, -1], -1)];
        assert!(feasible(&c, 2));
    }

    #[test]
    fn contradictory_halfplanes() {
        let c = [ineq(&[1, 1], 3), ineq(&[-1, 0], -1), ineq(&[0, -1], -1)];
        assert!(!feasible(&c, 2));
    }

    #[test]
    fn degenerate_point_is_feasible() {
        let c = [ineq(&[1, 0], 1), ineq(&[-1, 0], -1), ineq(&[0, 1], 2), ineq(&[0, -1], -2)];
        assert!(feasible(&c, 2));
        let c = [ineq(&[0, 0], 1)];
        assert!(!feasible(&c, 2));
    }
}
