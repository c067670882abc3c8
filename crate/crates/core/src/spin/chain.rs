use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest chain for which a dense (or sector-blocked dense) realization is built.
pub const MAX_DENSE_SITES: usize = 13;

/// Largest chain a state vector may be allocated for.
pub const MAX_STATE_SITES: usize = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InteractionRange {
    /// Bonds `(i, i+1)`.
    #[serde(alias = "nearest-neighbor")]
    Nn,
    /// Bonds `(i, i+1)` and `(i, i+2)` with the same coupling.
    #[serde(alias = "next-nearest-neighbor")]
    Nnn,
}

impl InteractionRange {
    pub fn label(self) -> &'static str {
        match self {
            InteractionRange::Nn => "nn",
            InteractionRange::Nnn => "nnn",
        }
    }
}

impl std::str::FromStr for InteractionRange {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "nn" | "nearest-neighbor" => Ok(InteractionRange::Nn),
            "nnn" | "next-nearest-neighbor" => Ok(InteractionRange::Nnn),
            other => Err(Error::InvalidArgument(format!(
                "unknown interaction range '{other}' (expected nn or nnn)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    #[default]
    Open,
}

/// Relative weights of the exchange terms in `J (xy (sx sx + sy sy) + zz sz sz)`.
///
/// The isotropic Heisenberg chain is `xy = zz = 1`. Other values give the
/// XXZ family (and XX / Ising as limits); all of them conserve total
/// magnetization, which the dense engine relies on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Couplings {
    pub xy: f64,
    pub zz: f64,
}

impl Default for Couplings {
    fn default() -> Self {
        Couplings { xy: 1.0, zz: 1.0 }
    }
}

impl Couplings {
    pub fn is_isotropic(&self) -> bool {
        self.xy == self.zz
    }
}

/// Physical model of an open chain:
/// `H = J sum_bonds s_i . s_j - (h/2) sum_i sz_i`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChainSpec {
    pub n_sites: usize,
    pub coupling_j: f64,
    pub field_h: f64,
    pub range: InteractionRange,
    #[serde(default)]
    pub boundary: Boundary,
    #[serde(default)]
    pub couplings: Couplings,
}

impl ChainSpec {
    pub fn new(n_sites: usize, coupling_j: f64, field_h: f64, range: InteractionRange) -> Self {
        ChainSpec {
            n_sites,
            coupling_j,
            field_h,
            range,
            boundary: Boundary::Open,
            couplings: Couplings::default(),
        }
    }

    /// Chain of `2n - 1` sites hosting the symmetric three-party protocol.
    pub fn for_distance(n: usize, coupling_j: f64, field_h: f64, range: InteractionRange) -> Self {
        Self::new(2 * n.max(1) - 1, coupling_j, field_h, range)
    }

    pub fn with_couplings(mut self, couplings: Couplings) -> Self {
        self.couplings = couplings;
        self
    }

    pub fn dim(&self) -> usize {
        1usize << self.n_sites
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_sites == 0 {
            return Err(Error::InvalidChain("n_sites must be at least 1".into()));
        }
        if self.n_sites > MAX_STATE_SITES {
            return Err(Error::Capacity {
                what: format!("chain of {} sites", self.n_sites),
                n_sites: self.n_sites,
                dim: 1u128 << self.n_sites,
            });
        }
        let finite = [self.coupling_j, self.field_h, self.couplings.xy, self.couplings.zz];
        if finite.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidChain("couplings must be finite".into()));
        }
        Ok(())
    }

    /// Interaction bonds as 0-based site pairs. NNN bonds only exist for
    /// `n_sites >= 3`, so shorter chains degrade to nearest-neighbor.
    pub fn bonds(&self) -> Vec<(usize, usize)> {
        let n = self.n_sites;
        let mut bonds: Vec<(usize, usize)> = (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect();
        if self.range == InteractionRange::Nnn {
            bonds.extend((0..n.saturating_sub(2)).map(|i| (i, i + 2)));
        }
        bonds
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nnn_degrades_to_nn_on_short_chains() {
        for n in 1..3 {
            let nn = ChainSpec::new(n, 1.0, 1.0, InteractionRange::Nn);
            let nnn = ChainSpec::new(n, 1.0, 1.0, InteractionRange::Nnn);
            assert_eq!(nn.bonds(), nnn.bonds());
        }
        let nnn = ChainSpec::new(3, 1.0, 1.0, InteractionRange::Nnn);
        assert_eq!(nnn.bonds(), vec![(0, 1), (1, 2), (0, 2)]);
    }

    #[test]
    fn validation() {
        assert!(ChainSpec::new(0, 1.0, 1.0, InteractionRange::Nn).validate().is_err());
        let err = ChainSpec::new(40, 1.0, 1.0, InteractionRange::Nn).validate().unwrap_err();
        assert!(matches!(err, Error::Capacity { n_sites: 40, .. }));
        assert!(ChainSpec::new(3, f64::NAN, 1.0, InteractionRange::Nn).validate().is_err());
        assert_eq!(ChainSpec::for_distance(4, 1.0, 1.0, InteractionRange::Nn).n_sites, 7);
    }

    #[test]
    fn range_parsing() {
        assert_eq!("NN".parse::<InteractionRange>().unwrap(), InteractionRange::Nn);
        assert_eq!("nnn".parse::<InteractionRange>().unwrap(), InteractionRange::Nnn);
        assert!("nnnn".parse::<InteractionRange>().is_err());
    }
}
