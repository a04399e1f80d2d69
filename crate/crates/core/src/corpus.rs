//! The bundled example inputs.

pub const FILES: &[(&str, &str)] = &[
    ("b2.wt", include_str!("../../../corpus/b2.wt")),
    ("u23.wt", include_str!("../../../corpus/u23.wt")),
    ("coll.wt", include_str!("../../../corpus/coll.wt")),
    ("s2.gkm", include_str!("../../../corpus/s2.gkm")),
    ("cp2.gkm", include_str!("../../../corpus/cp2.gkm")),
    ("square.gkm", include_str!("../../../corpus/square.gkm")),
    ("g6.gkm", include_str!("../../../corpus/g6.gkm")),
    ("glued.poset", include_str!("../../../corpus/glued.poset")),
];

pub fn get(name: &str) -> Option<&'static str> {
    FILES.iter().find(|(n, _)| *n == name).map(|(_, text)| *text)
}

pub fn names() -> impl Iterator<Item = &'static str> {
    FILES.iter().map(|(n, _)| *n)
}
