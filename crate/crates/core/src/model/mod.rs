//! Instance model: sites, links, paths, gap constraints and the RITA spectrum.

mod format;
mod frequency;
mod instance;

use std::fmt;

use thiserror::Error;

pub use format::{read_instance, read_instance_with, write_instance};
pub use frequency::{
    rita_domain, rita_inter_planes, FreqSet, FreqSetIter, Frequency, InterPlane, Spectrum,
    IPE_SPACING, MAX_SPECTRUM,
};
pub use instance::{
    ConstraintKind, GapConstraint, GapDefaults, Instance, InstanceBuilder, InstanceParts, Link,
    LinkId, ModelLimits, Neighbor, Path, PathId, Site, SiteId, DUPLEX_GAP, MAX_SITE_LINKS,
    TX_RX_GAP, TX_TX_GAP,
};

/// Which record of an instance an error refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RecordRef {
    Header,
    Site(SiteId),
    /// Index into the link list.
    Link(usize),
    /// Index into the constraint list, in input order.
    Constraint(usize),
    /// Index into the domain override list, in input order.
    Domain(usize),
}

impl fmt::Display for RecordRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RecordRef::Header => write!(f, "header"),
            RecordRef::Site(s) => write!(f, "site {s}"),
            RecordRef::Link(l) => write!(f, "link {l}"),
            RecordRef::Constraint(c) => write!(f, "constraint #{c}"),
            RecordRef::Domain(d) => write!(f, "domain #{d}"),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{}{record}: {reason}", line.map(|l| format!("line {l}: ")).unwrap_or_default())]
    Invalid {
        record: RecordRef,
        reason: String,
        line: Option<usize>,
    },
    #[error("path {path} out of range ({paths} paths)")]
    PathOutOfRange { path: PathId, paths: usize },
    #[error("path {0} paired with itself")]
    SamePath(PathId),
}
