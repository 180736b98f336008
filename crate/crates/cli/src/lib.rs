//! Command-line front end and HTTP service for `chromatika`.

pub mod args;
pub mod commands;
pub mod output;
pub mod server;
pub mod views;

use std::fmt;

/// A bad argument or input detected by the front end itself.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub const EXIT_USER: i32 = 1;
pub const EXIT_INTERNAL: i32 = 2;

/// 1 for problems with what the user supplied, 2 for anything else.
pub fn exit_code(err: &anyhow::Error) -> i32 {
    let user = err.chain().any(|e| {
        e.is::<UsageError>()
            || e.is::<chromatika::Error>()
            || e.is::<std::io::Error>()
            || e.is::<serde_json::Error>()
            || e.is::<image::ImageError>()
            || e.is::<std::net::AddrParseError>()
    });
    if user {
        EXIT_USER
    } else {
        EXIT_INTERNAL
    }
}
