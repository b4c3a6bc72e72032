use clap::ValueEnum;
use deformq::{Error, Limits};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Pretty,
}

/// Settings shared by every subcommand.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub limits: Limits,
    pub seed: u64,
    pub format: Format,
}

impl RunConfig {
    pub fn new(max_grade: u32, seed: u64, format: Format) -> Result<Self, Error> {
        if max_grade == 0 {
            return Err(Error::Invalid("--max-grade must be positive".into()));
        }
        Ok(RunConfig {
            limits: Limits { max_grade },
            seed,
            format,
        })
    }
}

/// 0 success, 1 invalid input, 2 infeasible solve, 3 cap overflow.
pub fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(Error::Infeasible { .. }) => 2,
        Some(Error::GradeCap { .. }) => 3,
        _ => 1,
    }
}
