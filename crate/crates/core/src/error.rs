use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A configured size limit would be exceeded.
    #[error("resource limit exceeded: {what} would exceed the {cap_name} cap of {cap}")]
    Resource {
        what: String,
        cap_name: &'static str,
        cap: u64,
    },

    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("element is not a member of the group: {0}")]
    Membership(String),

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("construction failed: {0}")]
    Construction(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("parse error: {0}")]
    Parse(String),
}
