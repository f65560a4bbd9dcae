//! Test-case ingestion: MATPOWER M-files, a native JSON schema, the lossless
//! Kuramoto reduction, and seeded random test networks.

mod matpower;

pub use matpower::parse_matpower;

use nalgebra::DVector;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::path::Path;

use crate::error::{Error, Result};
use crate::linalg::project_mean_free;
use crate::network::Network;
use crate::scalar::{real, Real};

/// Bus role in the source case. Only used for reporting; the reduction
/// treats every bus as one oscillator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum BusKind {
    #[default]
    Load,
    Generator,
}

/// One bus: identifier, voltage magnitude (p.u.), and nominal net injection
/// (p.u., generation minus demand).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bus {
    pub id: usize,
    pub vm: f64,
    pub p_nom: f64,
    #[serde(default, skip_serializing)]
    pub kind: BusKind,
}

/// One branch with its series reactance (p.u.). Parallel branches are merged
/// at parse time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Branch {
    pub from: usize,
    pub to: usize,
    pub x: f64,
}

/// A parsed power-system case, already normalized to per-unit injections.
///
/// Serializes to the native JSON schema
/// `{name, buses: [{id, vm, p_nom}], branches: [{from, to, x}]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseData {
    pub name: String,
    pub buses: Vec<Bus>,
    pub branches: Vec<Branch>,
    #[serde(default = "default_base_mva", skip_serializing)]
    pub base_mva: f64,
}

fn default_base_mva() -> f64 {
    1.0
}

impl CaseData {
    pub fn from_json(text: &str) -> Result<Self> {
        let case: CaseData = serde_json::from_str(text)?;
        case.validate()?;
        Ok(case)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("case serialization cannot fail")
    }

    /// Load a case from a path: `.m` files parse as MATPOWER, everything
    /// else as native JSON.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        let mut case = if path.extension().is_some_and(|e| e == "m") {
            parse_matpower(&text)?
        } else {
            CaseData::from_json(&text)?
        };
        if case.name.is_empty() {
            if let Some(stem) = path.file_stem() {
                case.name = stem.to_string_lossy().into_owned();
            }
        }
        Ok(case)
    }

    fn validate(&self) -> Result<()> {
        let mut ids = std::collections::HashSet::new();
        for bus in &self.buses {
            if !ids.insert(bus.id) {
                return Err(Error::Parse {
                    line: 0,
                    message: format!("duplicate bus id {}", bus.id),
                });
            }
        }
        for branch in &self.branches {
            if !ids.contains(&branch.from) || !ids.contains(&branch.to) {
                return Err(Error::Parse {
                    line: 0,
                    message: format!(
                        "branch ({}, {}) references an unknown bus",
                        branch.from, branch.to
                    ),
                });
            }
        }
        Ok(())
    }

    /// Reduce the case to a Kuramoto network and natural-frequency vector at
    /// load factor `k`.
    ///
    /// Edge weights are the lossless susceptance couplings
    /// `a = |V_i| |V_j| / x`; injections scale linearly with `k` and are
    /// projected onto the rotating frame.
    pub fn to_kuramoto<T: Real>(&self, k: T) -> Result<(Network<T>, DVector<T>)> {
        if k <= T::zero() {
            return Err(Error::DomainError { value: crate::scalar::to_f64(k), min: 0.0 });
        }
        let index: std::collections::HashMap<usize, usize> =
            self.buses.iter().enumerate().map(|(i, b)| (b.id, i)).collect();
        let mut edges = Vec::with_capacity(self.branches.len());
        for br in &self.branches {
            if br.x <= 0.0 {
                return Err(Error::NonPositiveReactance { from: br.from, to: br.to, x: br.x });
            }
            let i = index[&br.from];
            let j = index[&br.to];
            let weight = self.buses[i].vm * self.buses[j].vm / br.x;
            edges.push((i, j, real::<T>(weight)));
        }
        let network = Network::new(self.buses.len(), edges).map_err(|e| match e {
            Error::DisconnectedGraph => Error::DisconnectedCase,
            other => other,
        })?;
        let omega = DVector::from_iterator(
            self.buses.len(),
            self.buses.iter().map(|b| k * real::<T>(b.p_nom)),
        );
        Ok((network, project_mean_free(&omega).0))
    }
}

/// Seeded Erdos-Renyi draw conditioned on connectivity.
///
/// Weights are uniform in `weight_range`. After 1000 rejected draws the last
/// sample is patched with a random spanning structure so the call always
/// returns. Deterministic per seed.
pub fn random_network<T: Real>(
    n: usize,
    p: f64,
    weight_range: (f64, f64),
    seed: u64,
) -> Network<T> {
    assert!(n >= 2, "need at least two nodes");
    assert!(p > 0.0 && p <= 1.0, "edge probability must be in (0, 1]");
    assert!(
        weight_range.0 > 0.0 && weight_range.1 >= weight_range.0,
        "weight range must be positive and ordered"
    );
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let weight = |rng: &mut ChaCha8Rng| -> f64 {
        if weight_range.0 == weight_range.1 {
            weight_range.0
        } else {
            rng.random_range(weight_range.0..weight_range.1)
        }
    };

    for attempt in 0..1000 {
        let mut edges = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                if p >= 1.0 || rng.random::<f64>() < p {
                    edges.push((i, j, real::<T>(weight(&mut rng))));
                }
            }
        }
        match Network::new(n, edges.clone()) {
            Ok(net) => return net,
            Err(_) if attempt < 999 => continue,
            Err(_) => {
                // patch connectivity with a random tree over the components
                let mut have: Vec<(usize, usize, T)> =
                    edges.iter().map(|&(i, j, w)| (i, j, w)).collect();
                let mut order: Vec<usize> = (1..n).collect();
                order.shuffle(&mut rng);
                for &v in &order {
                    let u = rng.random_range(0..v);
                    if !have.iter().any(|&(a, b, _)| (a, b) == (u, v)) {
                        have.push((u, v, real::<T>(weight(&mut rng))));
                    }
                }
                return Network::new(n, have).expect("patched graph is connected");
            }
        }
    }
    unreachable!("loop always returns")
}
