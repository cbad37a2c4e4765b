//! JSON description of a measure system.
//!
//! ```json
//! {"r": 2, "t0": 0.0, "tag": "angelesco",
//!  "components": [
//!    {"arc": [0.2, 1.2], "weight": {"kind": "uniform"}, "masses": []},
//!    {"arc": [2.0, 3.0], "weight": {"kind": "exponential", "lambda": 1.0},
//!     "masses": [{"theta": 2.5, "mass": 0.1}]}]}
//! ```
//!
//! Components are rescaled to unit mass unless `"normalize": false`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::{
    make_angelesco_system, Arc, Component, MeasureSystem, PointMass, SystemTag, Weight,
    ANGLE_TOL,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentDescription {
    pub arc: [f64; 2],
    pub weight: Weight,
    #[serde(default)]
    pub masses: Vec<PointMass>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemDescription {
    pub r: usize,
    pub t0: f64,
    #[serde(default = "default_tag")]
    pub tag: SystemTag,
    pub components: Vec<ComponentDescription>,
    #[serde(default = "default_normalize")]
    pub normalize: bool,
}

fn default_tag() -> SystemTag {
    SystemTag::None
}

fn default_normalize() -> bool {
    true
}

impl SystemDescription {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::ConfigParse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("description serializes")
    }

    /// Describes an existing system (already-normalized scales are folded
    /// into nothing; the description reproduces arcs, weights and masses).
    pub fn from_system(system: &MeasureSystem) -> Self {
        SystemDescription {
            r: system.r(),
            t0: system.t0(),
            tag: system.tag(),
            components: system
                .components()
                .iter()
                .map(|c| ComponentDescription {
                    arc: [c.arc.alpha, c.arc.beta],
                    weight: c.weight.clone(),
                    masses: c.masses.clone(),
                })
                .collect(),
            normalize: true,
        }
    }

    pub fn build(&self) -> Result<MeasureSystem> {
        if self.components.len() != self.r {
            return Err(Error::ComponentCount { expected: self.r, got: self.components.len() });
        }
        let arcs = self
            .components
            .iter()
            .map(|c| Arc::new(c.arc[0], c.arc[1]))
            .collect::<Result<Vec<_>>>()?;
        let system = match self.tag {
            SystemTag::Angelesco => {
                let weights: Vec<Weight> = self.components.iter().map(|c| c.weight.clone()).collect();
                let masses: Vec<Vec<PointMass>> =
                    self.components.iter().map(|c| c.masses.clone()).collect();
                make_angelesco_system(&arcs, &weights, &masses, self.t0)?
            }
            SystemTag::At => {
                let first = arcs[0];
                if arcs.iter().any(|a| {
                    (a.alpha - first.alpha).abs() > ANGLE_TOL || (a.beta - first.beta).abs() > ANGLE_TOL
                }) {
                    return Err(Error::ConfigParse("AT components must share one arc".into()));
                }
                if (self.t0 - first.alpha).abs() > ANGLE_TOL {
                    return Err(Error::ConfigParse(format!(
                        "AT systems use t0 = alpha = {}, got t0 = {}",
                        first.alpha, self.t0
                    )));
                }
                MeasureSystem::tagged(self.t0, SystemTag::At, self.components(arcs))?
            }
            SystemTag::None => MeasureSystem::new(self.t0, self.components(arcs))?,
        };
        if self.normalize {
            system.normalized()
        } else {
            Ok(system)
        }
    }

    fn components(&self, arcs: Vec<Arc>) -> Vec<Component> {
        self.components
            .iter()
            .zip(arcs)
            .map(|(c, arc)| Component {
                arc,
                weight: c.weight.clone(),
                masses: c.masses.clone(),
                scale: 1.0,
            })
            .collect()
    }
}
