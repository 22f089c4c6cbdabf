//! Versioned JSON envelope shared by every command.

use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::graph::{CounterSnapshot, Vertex};
use crate::partition::Partition;

pub const SCHEMA: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Envelope<T> {
    pub schema: u32,
    pub command: String,
    pub seed: u64,
    pub wall_time_ms: f64,
    pub counters: CounterSnapshot,
    pub result: T,
}

impl<T: Serialize> Envelope<T> {
    pub fn new(command: &str, seed: u64, wall: Duration, counters: CounterSnapshot, result: T) -> Self {
        Envelope {
            schema: SCHEMA,
            command: command.to_string(),
            seed,
            wall_time_ms: wall.as_secs_f64() * 1e3,
            counters,
            result,
        }
    }

    pub fn to_json(&self) -> serde_json::Result<String> {
        serde_json::to_string_pretty(self)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeparationEntry {
    pub a: usize,
    pub b: usize,
    /// Index into `samples`.
    pub witness: Option<usize>,
}

/// Sample set, part sizes and a separating sample for every pair of parts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionDump {
    pub samples: Vec<Vertex>,
    pub part_sizes: Vec<usize>,
    pub parts: Vec<Vec<Vertex>>,
    pub separation: Vec<SeparationEntry>,
}

impl PartitionDump {
    pub fn of(p: &Partition) -> Self {
        let k = p.parts.len();
        let separation = (0..k)
            .flat_map(|a| (a + 1..k).map(move |b| (a, b)))
            .map(|(a, b)| SeparationEntry {
                a,
                b,
                witness: p.separation_witness(a, b),
            })
            .collect();
        PartitionDump {
            samples: p.samples.clone(),
            part_sizes: p.part_sizes(),
            parts: p.parts.clone(),
            separation,
        }
    }
}
