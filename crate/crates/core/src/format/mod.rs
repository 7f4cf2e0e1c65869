//! Instance files and JSON output documents.

mod certificate;
mod instance;

pub use certificate::{
    AxiomsDocument, CertificateDocument, ErrorDocument, InstanceEcho, ReverifyError, Status,
    ToolInfo, CERTIFICATE_FORMAT_VERSION,
};
pub use instance::{parse_instance, write_instance, INSTANCE_FORMAT_VERSION};

use thiserror::Error;

use crate::theorem::TheoremError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error(transparent)]
    Instance(#[from] TheoremError),
}

impl FormatError {
    /// Stable machine-readable error kind.
    pub fn kind(&self) -> &'static str {
        match self {
            FormatError::Parse { .. } => "parse_error",
            FormatError::Instance(TheoremError::Partition { .. }) => "partition_error",
            FormatError::Instance(TheoremError::QuotaMismatch { .. }) => "quota_mismatch",
            FormatError::Instance(_) => "invalid_instance",
        }
    }
}
