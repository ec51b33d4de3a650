//! The bundled test corpus of small pointed simplicial sets.

use crate::simplicial::FinSimplicialSet;
use crate::sset_json::from_json;

pub const S1: &str = include_str!("../data/s1.json");
pub const S2: &str = include_str!("../data/s2.json");
pub const BOUNDARY_DELTA3: &str = include_str!("../data/boundary_delta3.json");
pub const MOORE_Z2_1: &str = include_str!("../data/moore_z2_1.json");
pub const MOORE_Z2_2: &str = include_str!("../data/moore_z2_2.json");
pub const WEDGE_S1_S1: &str = include_str!("../data/wedge_s1_s1.json");

/// `(file stem, contents)` for every corpus member.
pub const ALL: [(&str, &str); 6] = [
    ("s1", S1),
    ("s2", S2),
    ("boundary_delta3", BOUNDARY_DELTA3),
    ("moore_z2_1", MOORE_Z2_1),
    ("moore_z2_2", MOORE_Z2_2),
    ("wedge_s1_s1", WEDGE_S1_S1),
];

pub fn load(stem: &str) -> FinSimplicialSet {
    let text = ALL.iter().find(|(n, _)| *n == stem).unwrap_or_else(|| panic!("no corpus entry {stem}")).1;
    from_json(text).expect("corpus files parse")
}

pub fn s2() -> FinSimplicialSet {
    load("s2")
}
