//! GRASP with path relinking for the linear ordering problem and weighted
//! max-cut.
//!
//! Construction ([`construction`]), local search ([`local_search`]) and path
//! relinking ([`path_relinking`]) are generic over the [`core::Problem`]
//! interface; [`lop`] and [`maxcut`] provide the two problems. The
//! [`drivers`] module combines them into complete searches, and
//! [`bench_io`] handles instance files, benchmark grids and statistics.

pub mod bench_io;
pub mod cli;
pub mod construction;
pub mod core;
pub mod drivers;
pub mod elite;
pub mod error;
pub mod local_search;
pub mod lop;
pub mod maxcut;
pub mod path_relinking;

pub use error::{Error, Result};
