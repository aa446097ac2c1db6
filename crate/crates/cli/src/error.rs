use std::fmt;

/// Failure class; the discriminant is the process exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Config = 1,
    Io = 2,
    Analysis = 3,
}

impl Kind {
    pub fn exit_code(self) -> u8 {
        self as u8
    }
}

#[derive(Debug)]
pub struct Failure {
    pub kind: Kind,
    pub error: anyhow::Error,
}

impl Failure {
    pub fn new(kind: Kind, error: impl Into<anyhow::Error>) -> Self {
        Self {
            kind,
            error: error.into(),
        }
    }

    pub fn config(msg: impl fmt::Display) -> Self {
        Self::new(Kind::Config, anyhow::anyhow!("{msg}"))
    }

    pub fn analysis(msg: impl fmt::Display) -> Self {
        Self::new(Kind::Analysis, anyhow::anyhow!("{msg}"))
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#}", self.error)
    }
}

/// Config-type library errors map to exit 1, numerical failures to exit 3.
pub fn kind_of(err: &catscale::Error) -> Kind {
    use catscale::Error as E;
    match err {
        E::InvalidParameter(_) | E::Configuration(_) | E::WindowMismatch { .. } | E::NonUnitary { .. } => Kind::Config,
        _ => Kind::Analysis,
    }
}

impl From<catscale::Error> for Failure {
    fn from(err: catscale::Error) -> Self {
        Self::new(kind_of(&err), err)
    }
}

pub type CliResult<T> = Result<T, Failure>;

pub trait Context<T> {
    fn kind(self, kind: Kind, what: impl fmt::Display) -> CliResult<T>;
}

impl<T, E> Context<T> for Result<T, E>
where
    E: std::error::Error + Send + Sync + 'static,
{
    fn kind(self, kind: Kind, what: impl fmt::Display) -> CliResult<T> {
        self.map_err(|e| Failure::new(kind, anyhow::Error::new(e).context(what.to_string())))
    }
}
