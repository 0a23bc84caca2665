//! Monte Carlo harness for robust wiretap transmit designs: configurable
//! sweeps, CSV and SVG outputs, and the oracle verification suites.

pub mod config;
pub mod output;
pub mod plot;
pub mod runner;
pub mod verify;
