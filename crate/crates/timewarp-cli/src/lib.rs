//! Library surface of the command-line crate: configuration, subcommand
//! implementations, and the HTTP server, shared with the integration tests.

pub mod commands;
pub mod config;
pub mod server;
