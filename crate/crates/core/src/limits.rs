/// Size caps on constructions and brute-force searches.
///
/// Searches fail fast with [`Error::SizeLimit`](crate::Error::SizeLimit)
/// instead of running for hours. `RETRACTLAB_MAX_N` overrides every
/// brute-force cap at once (the construction cap is left alone).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest lattice any construction may produce.
    pub max_elements: usize,
    /// Retraction backtracking and retract enumeration.
    pub retractions: usize,
    /// Congruence enumeration.
    pub congruences: usize,
    /// Compatible quasiorder enumeration.
    pub quasiorders: usize,
    /// Isomorph-free lattice enumeration.
    pub enumeration: usize,
}

pub const ENV_MAX_N: &str = "RETRACTLAB_MAX_N";

impl Limits {
    pub const DEFAULT: Limits =
        Limits { max_elements: 4096, retractions: 12, congruences: 64, quasiorders: 8, enumeration: 9 };

    pub fn with_brute_force_cap(self, cap: usize) -> Self {
        Limits { retractions: cap, congruences: cap, quasiorders: cap, enumeration: cap, ..self }
    }

    /// Defaults, with the brute-force caps taken from `RETRACTLAB_MAX_N` when set.
    pub fn from_env() -> Self {
        match std::env::var(ENV_MAX_N).ok().and_then(|v| v.trim().parse().ok()) {
            Some(cap) => Self::DEFAULT.with_brute_force_cap(cap),
            None => Self::DEFAULT,
        }
    }
}

impl Default for Limits {
    fn default() -> Self {
        Self::DEFAULT
    }
}
