//! Reading domain, problem and plan files.

use std::fmt;
use std::path::{Path, PathBuf};

use planadv_core::pddl::{self, decode, FileKind, ParseError};
use planadv_core::planning::{Plan, PlanningProblem};
use thiserror::Error;

#[derive(Debug, Clone)]
pub struct InputFiles {
    pub domain: PathBuf,
    pub problem: PathBuf,
    pub plan: PathBuf,
}

impl InputFiles {
    fn path(&self, kind: FileKind) -> &Path {
        match kind {
            FileKind::Domain => &self.domain,
            FileKind::Problem => &self.problem,
            FileKind::Plan => &self.plan,
        }
    }
}

#[derive(Debug, Error)]
pub enum InputError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{}:{error}", path.display())]
    Parse { path: PathBuf, error: ParseError },
}

pub fn read_text(path: &Path) -> Result<String, InputError> {
    let bytes = std::fs::read(path).map_err(|source| InputError::Io {
        path: path.to_owned(),
        source,
    })?;
    decode(&bytes).map(str::to_owned).map_err(|error| InputError::Parse {
        path: path.to_owned(),
        error,
    })
}

pub fn load_files(files: &InputFiles) -> Result<(PlanningProblem, Plan), InputError> {
    let domain = read_text(&files.domain)?;
    let problem = read_text(&files.problem)?;
    let plan = read_text(&files.plan)?;
    pddl::load(&domain, &problem, &plan).map_err(|e| InputError::Parse {
        path: files.path(e.file).to_owned(),
        error: e.error,
    })
}

impl fmt::Display for InputFiles {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} {}",
            self.domain.display(),
            self.problem.display(),
            self.plan.display()
        )
    }
}
