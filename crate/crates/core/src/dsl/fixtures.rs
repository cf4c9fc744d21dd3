/// Bundled model files, by stem.
pub const FIXTURES: [(&str, &str); 5] = [
    ("su2", include_str!("../../fixtures/su2.eds")),
    ("akns", include_str!("../../fixtures/akns.eds")),
    ("kdv", include_str!("../../fixtures/kdv.eds")),
    ("ch", include_str!("../../fixtures/ch.eds")),
    ("ch_corrupt", include_str!("../../fixtures/ch_corrupt.eds")),
];

pub fn fixture(name: &str) -> Option<&'static str> {
    FIXTURES.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}
