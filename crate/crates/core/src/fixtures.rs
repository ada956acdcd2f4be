//! Built-in example interpretations.

use crate::error::{Error, Result};
use crate::interpretation::Interpretation;

pub const FIXTURE_NAMES: [&str; 5] = ["fig3", "fig4i", "fig4ii", "fig5", "fig7"];

pub fn builtin_fixture(name: &str) -> Result<Interpretation> {
    match name {
        "fig3" => Ok(fig3()),
        "fig4i" => Ok(fig4i()),
        "fig4ii" => Ok(fig4ii()),
        "fig5" => Ok(fig5()),
        "fig7" => Ok(fig7()),
        other => Err(Error::UnknownFixture(other.to_string())),
    }
}

/// Two cities, each with a governing party and a region; the second
/// region's capital is the second city.
pub fn fig3() -> Interpretation {
    Interpretation::new(
        ["x1", "x2", "x3", "x4", "x5", "x6", "x7"],
        vec![
            ("City", vec!["x1", "x2"]),
            ("Party", vec!["x3", "x4"]),
            ("Liberal", vec!["x3"]),
            ("Organization", vec!["x4"]),
            ("Region", vec!["x5", "x7"]),
        ],
        vec![
            ("government", vec![("x1", "x3"), ("x2", "x4")]),
            ("partof", vec![("x1", "x5"), ("x2", "x7")]),
            ("capital", vec![("x5", "x6"), ("x7", "x2")]),
        ],
    )
    .expect("fixture is valid")
}

/// `A` on `v1`, which has an `r`-edge to the `r`-looping `v2`.
pub fn fig4i() -> Interpretation {
    Interpretation::new(
        ["v1", "v2"],
        vec![("A", vec!["v1"])],
        vec![("r", vec![("v1", "v2"), ("v2", "v2")])],
    )
    .expect("fixture is valid")
}

pub fn fig4ii() -> Interpretation {
    Interpretation::new(
        ["x1", "x2", "x3", "x4"],
        vec![("A", vec!["x1"]), ("B", vec!["x2"])],
        vec![
            ("r", vec![("x2", "x2"), ("x4", "x4"), ("x3", "x2")]),
            ("s", vec![("x1", "x2"), ("x3", "x4")]),
        ],
    )
    .expect("fixture is valid")
}

/// `B`-labelled hubs `x1`, `x2`, `x3` on `r`-cycles of lengths 2, 3 and 5,
/// with `A` on each hub's predecessor, plus the self-looping `x4` (`B`) and
/// `x5` (`A`, `B`).
pub fn fig5() -> Interpretation {
    Interpretation::new(
        ["x1", "a1", "x2", "b1", "b2", "x3", "c1", "c2", "c3", "c4", "x4", "x5"],
        vec![
            ("A", vec!["a1", "b2", "c4", "x5"]),
            ("B", vec!["x1", "x2", "x3", "x4", "x5"]),
        ],
        vec![(
            "r",
            vec![
                ("x1", "a1"),
                ("a1", "x1"),
                ("x2", "b1"),
                ("b1", "b2"),
                ("b2", "x2"),
                ("x3", "c1"),
                ("c1", "c2"),
                ("c2", "c3"),
                ("c3", "c4"),
                ("c4", "x3"),
                ("x4", "x4"),
                ("x5", "x5"),
            ],
        )],
    )
    .expect("fixture is valid")
}

/// A `City` and a `Region` connected by roles `1` and `2` in a two-cycle.
pub fn fig7() -> Interpretation {
    Interpretation::new(
        ["a", "b"],
        vec![("City", vec!["a"]), ("Region", vec!["b"])],
        vec![("1", vec![("a", "b")]), ("2", vec![("b", "a")])],
    )
    .expect("fixture is valid")
}
