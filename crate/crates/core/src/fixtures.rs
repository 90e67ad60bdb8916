//! The example fans and polytopes shipped in `fixtures/`.

use crate::fan::SimplicialFan;
use crate::io::{parse_input, Input};
use crate::polytope::HPolytope;

/// `(name, JSON text)` for every shipped fixture.
pub const ALL: &[(&str, &str)] = &[
    ("abhy3.polytope", include_str!("../../../fixtures/abhy3.polytope.json")),
    ("cone-over-square.fan", include_str!("../../../fixtures/cone-over-square.fan.json")),
    ("cube.polytope", include_str!("../../../fixtures/cube.polytope.json")),
    ("cuboid.polytope", include_str!("../../../fixtures/cuboid.polytope.json")),
    ("fulton.fan", include_str!("../../../fixtures/fulton.fan.json")),
    ("hexagon.fan", include_str!("../../../fixtures/hexagon.fan.json")),
    ("hexagon.polytope", include_str!("../../../fixtures/hexagon.polytope.json")),
    ("octagon-alpha1.fan", include_str!("../../../fixtures/octagon-alpha1.fan.json")),
    ("octagon-alpha2.fan", include_str!("../../../fixtures/octagon-alpha2.fan.json")),
    ("pentagon.fan", include_str!("../../../fixtures/pentagon.fan.json")),
    ("pentagon-general.fan", include_str!("../../../fixtures/pentagon-general.fan.json")),
    ("pentagon.polytope", include_str!("../../../fixtures/pentagon.polytope.json")),
    ("simplex2.polytope", include_str!("../../../fixtures/simplex2.polytope.json")),
    ("square.fan", include_str!("../../../fixtures/square.fan.json")),
    ("unbounded-pentagon.polytope", include_str!("../../../fixtures/unbounded-pentagon.polytope.json")),
    ("unit-square.polytope", include_str!("../../../fixtures/unit-square.polytope.json")),
];

/// Panics on an unknown name; fixtures are validated by the test suite.
pub fn load(name: &str) -> Input {
    let text = ALL.iter().find(|(n, _)| *n == name).unwrap_or_else(|| panic!("no fixture {name}")).1;
    parse_input(text, false).unwrap_or_else(|e| panic!("fixture {name}: {e}"))
}

pub fn fan(name: &str) -> SimplicialFan {
    load(&format!("{name}.fan")).fan().expect("fixture fan")
}

pub fn polytope(name: &str) -> HPolytope {
    match load(&format!("{name}.polytope")) {
        Input::Polytope(p) => p,
        Input::Fan(_) => unreachable!("polytope fixture"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_fixture_parses_and_validates() {
        for (name, _) in ALL {
            let f = load(name).fan().unwrap();
            f.validate(true).unwrap_or_else(|e| panic!("{name}: {e}"));
        }
    }
}
