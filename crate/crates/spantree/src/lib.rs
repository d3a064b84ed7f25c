//! File formats, reports and the verification driver behind the `spantree`
//! command.

pub mod cli;
pub mod format;
pub mod lift_io;
pub mod report;
pub mod verify;
