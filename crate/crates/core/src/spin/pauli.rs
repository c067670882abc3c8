use serde::{Deserialize, Serialize};

use super::state::StateVector;
use crate::error::{Error, Result};
use crate::C64;

const AXIS_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pauli {
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 3] = [Pauli::X, Pauli::Y, Pauli::Z];

    pub fn index(self) -> usize {
        self as usize
    }
}

/// Unit measurement direction `v`, realizing `sigma^v = v . sigma`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 3]", into = "[f64; 3]")]
pub struct PauliAxis([f64; 3]);

impl PauliAxis {
    /// Accepts a vector already normalized to within `1e-12`.
    pub fn new(v: [f64; 3]) -> Result<Self> {
        let norm = v.iter().map(|c| c * c).sum::<f64>().sqrt();
        if !norm.is_finite() || (norm - 1.0).abs() > AXIS_TOL {
            return Err(Error::InvalidAxis(format!("{v:?} has norm {norm}, expected 1")));
        }
        Ok(PauliAxis(v))
    }

    /// Normalizes any nonzero finite vector.
    pub fn from_direction(v: [f64; 3]) -> Result<Self> {
        let norm = v.iter().map(|c| c * c).sum::<f64>().sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::InvalidAxis(format!("{v:?} has no direction")));
        }
        Ok(PauliAxis(v.map(|c| c / norm)))
    }

    pub fn x() -> Self {
        PauliAxis([1.0, 0.0, 0.0])
    }

    pub fn y() -> Self {
        PauliAxis([0.0, 1.0, 0.0])
    }

    pub fn z() -> Self {
        PauliAxis([0.0, 0.0, 1.0])
    }

    pub fn along(p: Pauli) -> Self {
        match p {
            Pauli::X => Self::x(),
            Pauli::Y => Self::y(),
            Pauli::Z => Self::z(),
        }
    }

    pub fn components(&self) -> [f64; 3] {
        self.0
    }
}

impl TryFrom<[f64; 3]> for PauliAxis {
    type Error = Error;

    fn try_from(v: [f64; 3]) -> Result<Self> {
        PauliAxis::new(v)
    }
}

impl std::str::FromStr for PauliAxis {
    type Err = Error;

    /// `x`, `y`, `z`, or a comma-separated direction such as `1,0,1`.
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "x" | "X" => Ok(Self::x()),
            "y" | "Y" => Ok(Self::y()),
            "z" | "Z" => Ok(Self::z()),
            other => {
                let parts: Vec<f64> = other
                    .split(',')
                    .map(|c| c.trim().parse::<f64>())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|_| Error::InvalidAxis(format!("'{s}' is not x, y, z or vx,vy,vz")))?;
                match parts[..] {
                    [a, b, c] => Self::from_direction([a, b, c]),
                    _ => Err(Error::InvalidAxis(format!("'{s}' needs three components"))),
                }
            }
        }
    }
}

impl From<PauliAxis> for [f64; 3] {
    fn from(a: PauliAxis) -> Self {
        a.0
    }
}

/// Writes `sigma^p_site |input>` into `out`.
pub fn apply_pauli_component(input: &[C64], site: usize, p: Pauli, out: &mut [C64]) {
    debug_assert_eq!(input.len(), out.len());
    let mask = 1usize << site;
    match p {
        Pauli::X => {
            for (k, o) in out.iter_mut().enumerate() {
                *o = input[k ^ mask];
            }
        }
        Pauli::Y => {
            // sigma^y |0> = i|1>, sigma^y |1> = -i|0>
            for (k, o) in out.iter_mut().enumerate() {
                let a = input[k ^ mask];
                *o = if k & mask == 0 {
                    C64::new(a.im, -a.re)
                } else {
                    C64::new(-a.im, a.re)
                };
            }
        }
        Pauli::Z => {
            for (k, o) in out.iter_mut().enumerate() {
                *o = if k & mask == 0 { input[k] } else { -input[k] };
            }
        }
    }
}

/// Writes `(v . sigma)_site |input>` into `out`.
pub(crate) fn apply_axis_raw(input: &[C64], site: usize, axis: &PauliAxis, out: &mut [C64]) {
    let [vx, vy, vz] = axis.0;
    let mask = 1usize << site;
    // Off-diagonal element <k|sigma^v|k^mask> for bit(k) = 0 and 1.
    let flip0 = C64::new(vx, -vy);
    let flip1 = C64::new(vx, vy);
    for (k, o) in out.iter_mut().enumerate() {
        let partner = input[k ^ mask];
        *o = if k & mask == 0 {
            flip0 * partner + vz * input[k]
        } else {
            flip1 * partner - vz * input[k]
        };
    }
}

/// `sigma^v_site |state>` for a 0-based site.
pub fn apply_pauli(state: &StateVector, site: usize, axis: &PauliAxis) -> Result<StateVector> {
    if site >= state.n_sites() {
        return Err(Error::SiteOutOfRange {
            site,
            n_sites: state.n_sites(),
        });
    }
    let mut out = vec![C64::new(0.0, 0.0); state.dim()];
    apply_axis_raw(state.amplitudes(), site, axis, &mut out);
    Ok(StateVector::from_unitary_image(state.n_sites(), out))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_axes() {
        assert_eq!("y".parse::<PauliAxis>().unwrap(), PauliAxis::y());
        let d: PauliAxis = "3,0,4".parse().unwrap();
        assert!((d.components()[2] - 0.8).abs() < 1e-15);
        assert!("0,0,0".parse::<PauliAxis>().is_err());
        assert!("1,2".parse::<PauliAxis>().is_err());
        assert!("w".parse::<PauliAxis>().is_err());
    }
    use proptest::prelude::*;
    use rand::SeedableRng;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn axis_validation() {
        assert!(PauliAxis::new([1.0, 0.0, 0.0]).is_ok());
        assert!(PauliAxis::new([1.0, 1.0, 0.0]).is_err());
        assert!(PauliAxis::from_direction([0.0, 0.0, 0.0]).is_err());
        let a = PauliAxis::from_direction([3.0, 0.0, 4.0]).unwrap();
        assert_eq!(a.components(), [0.6, 0.0, 0.8]);
        let json = serde_json::to_string(&a).unwrap();
        assert_eq!(serde_json::from_str::<PauliAxis>(&json).unwrap(), a);
        assert!(serde_json::from_str::<PauliAxis>("[2.0,0.0,0.0]").is_err());
    }

    #[test]
    fn sigma_z_convention() {
        let zero = StateVector::basis(1, 0).unwrap();
        let one = StateVector::basis(1, 1).unwrap();
        let z0 = apply_pauli(&zero, 0, &PauliAxis::z()).unwrap();
        let z1 = apply_pauli(&one, 0, &PauliAxis::z()).unwrap();
        assert_eq!(z0.amplitudes(), &[c(1.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(z1.amplitudes(), &[c(0.0, 0.0), c(-1.0, 0.0)]);
    }

    #[test]
    fn plus_is_x_eigenstate() {
        let plus = StateVector::plus(1).unwrap();
        let out = apply_pauli(&plus, 0, &PauliAxis::x()).unwrap();
        assert!(out.distance(&plus) < 1e-15);
    }

    #[test]
    fn textbook_action_on_basis_states() {
        // Three sites, act on the middle one; |k> with bit 1 of k.
        let n = 3;
        for k in 0..8usize {
            let s = StateVector::basis(n, k).unwrap();
            let bit = (k >> 1) & 1;
            let flipped = k ^ 0b010;
            let x = apply_pauli(&s, 1, &PauliAxis::x()).unwrap();
            let y = apply_pauli(&s, 1, &PauliAxis::y()).unwrap();
            let z = apply_pauli(&s, 1, &PauliAxis::z()).unwrap();
            assert_eq!(x.amplitudes()[flipped], c(1.0, 0.0));
            let y_expected = if bit == 0 { c(0.0, 1.0) } else { c(0.0, -1.0) };
            assert_eq!(y.amplitudes()[flipped], y_expected);
            let z_expected = if bit == 0 { 1.0 } else { -1.0 };
            assert_eq!(z.amplitudes()[k], c(z_expected, 0.0));
            for (i, a) in x.amplitudes().iter().enumerate() {
                if i != flipped {
                    assert_eq!(*a, c(0.0, 0.0));
                }
            }
        }
    }

    #[test]
    fn axis_is_linear_combination_of_components() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let s = StateVector::random(4, &mut rng).unwrap();
        let axis = PauliAxis::from_direction([0.3, -0.5, 0.8]).unwrap();
        let v = apply_pauli(&s, 2, &axis).unwrap();
        let mut acc = vec![c(0.0, 0.0); s.dim()];
        let mut tmp = vec![c(0.0, 0.0); s.dim()];
        for p in Pauli::ALL {
            apply_pauli_component(s.amplitudes(), 2, p, &mut tmp);
            let w = axis.components()[p.index()];
            acc.iter_mut().zip(&tmp).for_each(|(a, t)| *a += w * t);
        }
        let diff: f64 = acc.iter().zip(v.amplitudes()).map(|(a, b)| (a - b).norm()).sum();
        assert!(diff < 1e-13);
    }

    #[test]
    fn site_out_of_range() {
        let s = StateVector::plus(2).unwrap();
        assert_eq!(
            apply_pauli(&s, 2, &PauliAxis::x()).unwrap_err(),
            Error::SiteOutOfRange { site: 2, n_sites: 2 }
        );
    }

    proptest! {
        #[test]
        fn involutive_and_norm_preserving(
            seed in any::<u64>(),
            n in 1usize..6,
            site_frac in 0.0f64..1.0,
            theta in 0.0f64..std::f64::consts::PI,
            phi in 0.0f64..std::f64::consts::TAU,
        ) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let s = StateVector::random(n, &mut rng).unwrap();
            let site = ((site_frac * n as f64) as usize).min(n - 1);
            let axis = PauliAxis::from_direction([
                theta.sin() * phi.cos(),
                theta.sin() * phi.sin(),
                theta.cos(),
            ]).unwrap();
            let once = apply_pauli(&s, site, &axis).unwrap();
            prop_assert!((once.norm() - 1.0).abs() < 1e-12);
            let twice = apply_pauli(&once, site, &axis).unwrap();
            prop_assert!(twice.distance(&s) < 1e-12);
        }
    }
}
