use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cover relation is not a partial order: element {0} lies on a cycle")]
    NotAPoset(usize),
    #[error("not a lattice: elements {0} and {1} have no unique {2}")]
    NotALattice(usize, usize, &'static str),
    #[error("element index {index} out of range for a lattice with {n} elements")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("{what}: size {size} exceeds the configured cap {cap}")]
    SizeLimit { what: &'static str, size: usize, cap: usize },
    #[error("relation does not factor as a product of component relations")]
    NotFactorizable,
    #[error("map is not a retraction")]
    NotARetraction,
    #[error("partition is not a congruence")]
    NotACongruence,
    #[error("subset is not a retract")]
    NotARetract,
    #[error("invalid grid shape {m}x{n}: {reason}")]
    InvalidShape { m: usize, n: usize, reason: &'static str },
    #[error("unknown catalog name `{0}`")]
    UnknownName(String),
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub(crate) fn check_cap(what: &'static str, size: usize, cap: usize) -> Result<()> {
    if size > cap {
        Err(Error::SizeLimit { what, size, cap })
    } else {
        Ok(())
    }
}
