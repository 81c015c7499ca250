//! Mining of commits in which a hand-written method was deleted and its call
//! sites were rewritten to use a third-party library API.

pub mod cli;
pub mod clustering;
pub mod detector;
pub mod fixtures;
pub mod io;
pub mod library;
pub mod parser;
pub mod pipeline;
pub mod report;
pub mod selector;
pub mod history;
