//! File formats, experiment reports and the command-line front end for
//! [`circbin_core`].
//!
//! * `PSET1` binary point sets and their CSV interchange form ([`io::pset`], [`io::csv`]),
//! * synthetic point-set generators ([`io::generate`]),
//! * versioned JSON result documents ([`io::report`]),
//! * the `circbin` CLI ([`cli`]).

pub mod cli;
pub mod gates;
pub mod io;

pub use io::IoError;
