//! Exact arithmetic for hermitian quadratic forms over ramified quadratic
//! extensions of truncated local rings, Teichmuller series over a finite
//! monomial model of `O_C`, and coinvariants of cocharacter lattices.
//!
//! Start with [`ring::RingSpec`] and [`form::HermForm`]; [`disc`],
//! [`reduction`], [`teich`] and [`cochar`] hold the algorithms and [`cli`] the
//! command-line front end.

#![allow(clippy::needless_range_loop)]

pub mod cli;
pub mod cochar;
pub mod disc;
pub mod error;
pub mod form;
pub mod gf;
pub mod json;
pub mod lift;
pub mod linalg;
pub mod reduction;
pub mod ring;
pub mod sample;
pub mod selftest;
pub mod snf;
pub mod teich;
