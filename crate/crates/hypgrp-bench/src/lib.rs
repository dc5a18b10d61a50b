//! Shared fixtures for the pipeline benchmarks.
pub use hypgrp_core as core;
