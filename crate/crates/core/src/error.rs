use std::fmt;

use thiserror::Error;

/// Where in the solver a failure happened.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Context {
    pub level: Option<usize>,
    pub cell: Option<usize>,
    pub stage: Option<&'static str>,
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if let Some(l) = self.level {
            parts.push(format!("level {l}"));
        }
        if let Some(c) = self.cell {
            parts.push(format!("cell {c}"));
        }
        if let Some(s) = self.stage {
            parts.push(format!("stage {s}"));
        }
        if parts.is_empty() {
            write!(f, "no context")
        } else {
            write!(f, "{}", parts.join(", "))
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    /// Non-positive density or temperature; usually the step was too large.
    #[error("non-realizable state (rho = {rho:e}, theta = {theta:e}) at {context}")]
    Realizability {
        rho: f64,
        theta: f64,
        context: Context,
    },

    #[error("collision model breakdown: {0}")]
    ModelBreakdown(String),

    #[error("configuration error: {0}")]
    Config(String),
}

impl Error {
    pub(crate) fn realizability(rho: f64, theta: f64) -> Self {
        Error::Realizability {
            rho,
            theta,
            context: Context::default(),
        }
    }

    /// Fill in missing location details without overwriting existing ones.
    pub fn with_context(
        self,
        level: Option<usize>,
        cell: Option<usize>,
        stage: Option<&'static str>,
    ) -> Self {
        match self {
            Error::Realizability {
                rho,
                theta,
                mut context,
            } => {
                context.level = context.level.or(level);
                context.cell = context.cell.or(cell);
                context.stage = context.stage.or(stage);
                Error::Realizability {
                    rho,
                    theta,
                    context,
                }
            }
            other => other,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
