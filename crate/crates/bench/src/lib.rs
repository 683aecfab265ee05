//! Fixtures shared by the benchmarks.

use std::sync::Arc;

use clint_core::artinistic::IrreducibleSequence;
use clint_core::poly::parse_poly;
use clint_core::{Field, Module, RIdeal, RingModel, Subspace};

pub fn cusp(p: u32) -> Arc<RingModel> {
    RingModel::semigroup(Field::prime(p).expect("prime"), &[2, 3]).expect("cusp model")
}

pub fn cubic(p: u32) -> Arc<RingModel> {
    let f = Field::prime(p).expect("prime");
    let vars: Vec<String> = ["x", "y", "z"].iter().map(|s| s.to_string()).collect();
    let tail = parse_poly(&f, &vars, "-(y^3+z^3)").expect("tail");
    RingModel::hypersurface(f, vars, 0, 3, tail).expect("cubic model")
}

pub fn ideal(model: &Arc<RingModel>, s: &str) -> RIdeal {
    RIdeal::parse(model, s).expect("ideal")
}

pub fn standard_sequence(model: &Arc<RingModel>, t_max: u32) -> IrreducibleSequence {
    IrreducibleSequence::standard(model, t_max).expect("sequence")
}

/// The regular module of a semigroup truncation and its maximal ideal.
pub fn truncated_maximal(p: u32, gens: &[u32], n: u32) -> (Arc<RingModel>, Arc<Module>, Subspace) {
    let model = RingModel::semigroup(Field::prime(p).expect("prime"), gens).expect("model");
    let reg = model.truncation(&[n]).expect("truncation").algebra.regular();
    let mm = reg.m_times(&reg.full_space());
    (model, reg, mm)
}
