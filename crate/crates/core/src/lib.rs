//! Planar pentapod toolkit: exact polynomials, Moebius pictures of point
//! tuples, Study-parameter elimination and Duporcq self-motions.

pub mod exactpoly;
pub mod geometry;
pub mod moebius;
pub mod parallel;
pub mod selfmotion;
pub mod study;
