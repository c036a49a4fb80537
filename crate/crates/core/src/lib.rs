//! Exact construction and verification of canonical systems of basic
//! invariants for finite reflection groups.

pub mod canonical;
pub mod groups;
pub mod json;
pub mod linalg;
pub mod oracle;
pub mod pipeline;
pub mod polys;
pub mod scalars;
pub mod seeds;

#[cfg(test)]
pub(crate) mod test_util;
