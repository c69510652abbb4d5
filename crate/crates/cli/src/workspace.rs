use std::fmt;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use tmodel::chain::{ChainMap, PComplex};
use tmodel::io;
use tmodel::linalg::Ring;
use tmodel::site::{DFunction, FinSpace, Stratification};

pub const USAGE: i32 = 1;
pub const PRECONDITION: i32 = 2;
pub const PROPERTY: i32 = 3;

#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Failure {
        Failure { code: USAGE, message: message.into() }
    }

    /// An error raised by an operation on already-validated inputs: broken
    /// preconditions keep their status, anything else is a failed audit.
    pub fn from_operation(e: tmodel::Error) -> Failure {
        let code = match e.exit_code() {
            PRECONDITION => PRECONDITION,
            _ => PROPERTY,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<tmodel::Error> for Failure {
    fn from(e: tmodel::Error) -> Failure {
        Failure { code: e.exit_code(), message: e.to_string() }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

pub type CliResult<T> = Result<T, Failure>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Structured,
}

/// The site, ring and seed shared by every file an invocation reads.
pub struct Workspace {
    pub site_path: Option<PathBuf>,
    pub site: Option<Arc<FinSpace>>,
    pub ring: Ring,
    pub seed: u64,
    pub format: Format,
}

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))
}

fn located(path: &Path, e: tmodel::Error) -> Failure {
    Failure { code: e.exit_code(), message: format!("{}: {e}", path.display()) }
}

impl Workspace {
    pub fn open(site_path: Option<PathBuf>, ring: &str, seed: u64, format: Format) -> CliResult<Workspace> {
        let ring = Ring::parse(ring)?;
        let site = match &site_path {
            Some(p) => Some(Arc::new(io::parse_site(&read(p)?).map_err(|e| located(p, e))?)),
            None => None,
        };
        Ok(Workspace { site_path, site, ring, seed, format })
    }

    pub fn space(&self) -> CliResult<&Arc<FinSpace>> {
        self.site.as_ref().ok_or_else(|| Failure::usage("this subcommand needs --site <FILE>"))
    }

    pub fn complex(&self, path: &Path) -> CliResult<PComplex> {
        let space = self.space()?;
        io::parse_complex(&read(path)?, space, self.ring).map_err(|e| located(path, e))
    }

    pub fn map(&self, path: &Path) -> CliResult<ChainMap> {
        let space = self.space()?;
        io::parse_map(&read(path)?, space, self.ring).map_err(|e| located(path, e))
    }

    pub fn dfunction(&self, path: Option<&Path>) -> CliResult<DFunction> {
        let path = path.ok_or_else(|| Failure::usage("this subcommand needs --d <FILE>"))?;
        io::parse_dfunction(&read(path)?, self.space()?).map_err(|e| located(path, e))
    }

    pub fn stratification(&self, path: Option<&Path>) -> CliResult<Stratification> {
        let path = path.ok_or_else(|| Failure::usage("this subcommand needs --strata <FILE>"))?;
        io::parse_stratification(&read(path)?, self.space()?).map_err(|e| located(path, e))
    }
}
