//! Instance fixtures shared by the criterion benches.

use acit_cli::gen::{generate, Kind};
use acit_core::{Inequality, Point, Scalar};

pub struct Fixture<S> {
    pub points: Vec<Point<S>>,
    pub halfspaces: Vec<Inequality<S>>,
}

/// A generated instance with `n = m`, converted to the requested scalar.
pub fn fixture<S: Scalar>(kind: Kind, d: usize, n: usize, seed: u64) -> Fixture<S> {
    let g = generate(kind, d, n, n, seed).expect("valid generator sizes");
    Fixture { points: g.points(), halfspaces: g.inequalities() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use acit_core::Float;

    #[test]
    fn fixture_sizes() {
        let f = fixture::<Float>(Kind::Disjoint, 3, 50, 1);
        assert_eq!((f.points.len(), f.halfspaces.len()), (50, 50));
    }
}
