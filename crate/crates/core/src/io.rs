//! JSON formats for fans and polytopes.
//!
//! Rationals are integers or `"p/q"` strings; floats are rejected. Index
//! lists are 0-based unless `one_based` is set.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::fan::SimplicialFan;
use crate::polytope::HPolytope;
use crate::scalar::{fmt_rat, parse_rat};
use crate::{Rat, RatMat};

#[derive(Clone, Debug)]
pub enum Input {
    Fan(SimplicialFan),
    Polytope(HPolytope),
}

impl Input {
    /// The fan itself, or the normal fan of the polytope.
    pub fn fan(&self) -> Result<SimplicialFan> {
        match self {
            Input::Fan(f) => Ok(f.clone()),
            Input::Polytope(p) => Ok(p.normal_fan()?.fan),
        }
    }

    pub fn polytope(&self) -> Result<&HPolytope> {
        match self {
            Input::Polytope(p) => Ok(p),
            Input::Fan(_) => Err(Error::Precondition("this operation needs a polytope input".into())),
        }
    }
}

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

pub fn rat_from_json(v: &Value) -> Result<Rat> {
    match v {
        Value::Number(n) => match n.as_i64() {
            Some(i) => Ok(Rat::from_integer(i.into())),
            None if n.is_f64() => Err(parse_err(format!("float {n} rejected; use an integer or \"p/q\""))),
            None => Err(parse_err(format!("integer {n} out of range; quote it as a string"))),
        },
        Value::String(s) => parse_rat(s).ok_or_else(|| parse_err(format!("bad rational \"{s}\""))),
        other => Err(parse_err(format!("expected a rational, found {other}"))),
    }
}

pub fn rat_to_json(r: &Rat) -> Value {
    Value::String(fmt_rat(r))
}

fn rat_vec(v: &Value, what: &str) -> Result<Vec<Rat>> {
    v.as_array().ok_or_else(|| parse_err(format!("{what} must be a list")))?.iter().map(rat_from_json).collect()
}

fn rat_rows(v: &Value, what: &str) -> Result<Vec<Vec<Rat>>> {
    v.as_array()
        .ok_or_else(|| parse_err(format!("{what} must be a list of rows")))?
        .iter()
        .map(|r| rat_vec(r, what))
        .collect()
}

fn index_list(v: &Value, one_based: bool) -> Result<Vec<usize>> {
    let arr = v.as_array().ok_or_else(|| parse_err("cone must be a list of indices"))?;
    arr.iter()
        .map(|x| {
            let i = x.as_u64().ok_or_else(|| parse_err(format!("bad index {x}")))? as usize;
            shift(i, one_based)
        })
        .collect()
}

fn shift(i: usize, one_based: bool) -> Result<usize> {
    if one_based {
        i.checked_sub(1).ok_or_else(|| parse_err("index 0 in a 1-based list"))
    } else {
        Ok(i)
    }
}

fn labels(obj: &Value) -> Result<Option<Vec<String>>> {
    match obj.get("labels") {
        None | Some(Value::Null) => Ok(None),
        Some(Value::Array(a)) => a
            .iter()
            .map(|l| l.as_str().map(str::to_string).ok_or_else(|| parse_err("labels must be strings")))
            .collect::<Result<Vec<_>>>()
            .map(Some),
        Some(_) => Err(parse_err("labels must be a list")),
    }
}

fn matrix(rows: &[Vec<Rat>], cols: usize) -> Result<RatMat> {
    RatMat::from_rows(rows, cols).map_err(|e| parse_err(e.to_string()))
}

pub fn parse_input(text: &str, one_based: bool) -> Result<Input> {
    let obj: Value = serde_json::from_str(text).map_err(|e| parse_err(format!("invalid JSON: {e}")))?;
    match obj.get("kind").and_then(Value::as_str) {
        Some("fan") => {
            let d = obj.get("d").and_then(Value::as_u64).ok_or_else(|| parse_err("fan needs an integer d"))? as usize;
            let rays = rat_rows(obj.get("rays").ok_or_else(|| parse_err("fan needs rays"))?, "rays")?;
            let cones = obj
                .get("max_cones")
                .and_then(Value::as_array)
                .ok_or_else(|| parse_err("fan needs max_cones"))?
                .iter()
                .map(|c| index_list(c, one_based))
                .collect::<Result<Vec<_>>>()?;
            let fan = SimplicialFan::new(d, matrix(&rays, d)?, cones, labels(&obj)?)?;
            Ok(Input::Fan(fan))
        }
        Some("polytope") => {
            let u = rat_rows(obj.get("U").ok_or_else(|| parse_err("polytope needs U"))?, "U")?;
            let z = rat_vec(obj.get("z").ok_or_else(|| parse_err("polytope needs z"))?, "z")?;
            let d = u.first().map_or(0, Vec::len);
            Ok(Input::Polytope(HPolytope::new(matrix(&u, d)?, z, labels(&obj)?)?))
        }
        Some(k) => Err(parse_err(format!("unknown kind \"{k}\""))),
        None => Err(parse_err("missing \"kind\"")),
    }
}

pub fn fan_to_json(fan: &SimplicialFan) -> Value {
    json!({
        "kind": "fan",
        "d": fan.dim(),
        "rays": fan.rays().to_rows().iter().map(|r| r.iter().map(rat_to_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "max_cones": fan.max_cones(),
        "labels": fan.labels(),
    })
}

pub fn polytope_to_json(p: &HPolytope) -> Value {
    json!({
        "kind": "polytope",
        "U": p.u().to_rows().iter().map(|r| r.iter().map(rat_to_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "z": p.z().iter().map(rat_to_json).collect::<Vec<_>>(),
        "labels": p.vars().labels(),
    })
}

/// Comma-separated rationals, e.g. `1,-2,3/4`.
pub fn parse_rat_csv(s: &str) -> Result<Vec<Rat>> {
    s.split(',')
        .map(|t| parse_rat(t.trim()).ok_or_else(|| parse_err(format!("bad rational \"{}\"", t.trim()))))
        .collect()
}

/// Comma-separated indices.
pub fn parse_index_csv(s: &str, one_based: bool) -> Result<Vec<usize>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| {
            let i: usize = t.trim().parse().map_err(|_| parse_err(format!("bad index \"{}\"", t.trim())))?;
            shift(i, one_based)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn fan_roundtrip() {
        let text = r#"{"kind":"fan","d":2,"rays":[[1,0],[0,1],["-1",1],[-1,0],[0,-1]],
                      "max_cones":[[1,2],[2,3],[3,4],[4,5],[1,5]]}"#;
        let Input::Fan(f) = parse_input(text, true).unwrap() else { panic!("fan expected") };
        assert_eq!(f.max_cones()[4], vec![0, 4]);
        let again = parse_input(&fan_to_json(&f).to_string(), false).unwrap();
        let Input::Fan(g) = again else { panic!("fan expected") };
        assert_eq!(g.max_cones(), f.max_cones());
        assert_eq!(g.rays(), f.rays());
    }

    #[test]
    fn floats_rejected() {
        let text = r#"{"kind":"polytope","U":[[1.5,0],[0,1],[-1,-1]],"z":[0,0,1]}"#;
        assert!(matches!(parse_input(text, false), Err(Error::Parse(_))));
        assert!(parse_rat_csv("1,2.5").is_err());
        assert_eq!(parse_rat_csv("1, -3/6").unwrap(), vec![rat(1, 1), rat(-1, 2)]);
    }

    #[test]
    fn index_lists() {
        assert_eq!(parse_index_csv("1,5", true).unwrap(), vec![0, 4]);
        assert!(parse_index_csv("0", true).is_err());
        assert_eq!(parse_index_csv("", false).unwrap(), Vec::<usize>::new());
    }
}
