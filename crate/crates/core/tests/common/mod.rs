#![allow(dead_code)]

use std::f64::consts::TAU;
use std::sync::Arc;

use hydrogreen::chart::{ChartPoint, CylindricalChart};
use hydrogreen::corpus::{self, CorpusEntry};
use hydrogreen::greens::GreensEvaluator;
use hydrogreen::pipeline;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn point(rng: &mut ChaCha8Rng, x1: (f64, f64)) -> ChartPoint {
    ChartPoint::new(rng.gen_range(x1.0..x1.1), rng.gen_range(0.0..TAU))
}

pub fn evaluator(entry: &CorpusEntry) -> GreensEvaluator {
    pipeline::build_evaluator(&entry.spec, 1e-12).unwrap_or_else(|e| panic!("{}: {e}", entry.name))
}

pub fn named(name: &str) -> GreensEvaluator {
    evaluator(&corpus::by_name(name).expect("corpus entry"))
}

pub fn chart(name: &str) -> Arc<CylindricalChart> {
    named(name).chart().clone()
}

/// Whether `a` and `b` are more than `d` apart, counting the lattice
/// images of `b` on a torus.
pub fn separated(chart: &CylindricalChart, a: ChartPoint, b: ChartPoint, d: f64) -> bool {
    let period = match chart.class().i {
        3 => chart.period().unwrap_or(0.0),
        _ => 0.0,
    };
    [-period, 0.0, period].iter().all(|s| hydrogreen::fields::chart_distance(a, ChartPoint::new(b.x1 + s, b.x2)) > d)
}
