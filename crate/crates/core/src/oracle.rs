//! Exact min-distance parameters by running Dijkstra from and to every
//! vertex. Ground truth for every approximation.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::graph::{Counters, Distance, DistanceField, Graph};

/// Default vertex limit for running the exact oracle from the CLI.
pub const ORACLE_GUARD: usize = 5000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactParameters {
    pub min_diameter: Distance,
    pub min_radius: Distance,
    pub eccentricities: Vec<Distance>,
}

impl ExactParameters {
    /// Vertex of smallest eccentricity, lowest id on ties.
    pub fn center(&self) -> usize {
        (0..self.eccentricities.len())
            .min_by_key(|&v| (self.eccentricities[v], v))
            .unwrap_or(0)
    }
}

pub fn exact_parameters(g: &Graph, counters: &Counters) -> ExactParameters {
    let eccentricities: Vec<Distance> = (0..g.vertex_count())
        .into_par_iter()
        .map(|v| DistanceField::compute(g, v, counters).eccentricity())
        .collect();
    let min_diameter = eccentricities.iter().copied().max().unwrap_or(Distance::ZERO);
    let min_radius = eccentricities.iter().copied().min().unwrap_or(Distance::ZERO);
    ExactParameters {
        min_diameter,
        min_radius,
        eccentricities,
    }
}

/// Min-eccentricity of a single vertex.
pub fn eccentricity(g: &Graph, v: usize, counters: &Counters) -> Distance {
    DistanceField::compute(g, v, counters).eccentricity()
}
