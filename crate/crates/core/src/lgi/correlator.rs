use serde::{Deserialize, Serialize};

use crate::dynamics::Propagator;
use crate::error::{Error, Result};
use crate::spin::{PauliAxis, StateVector};
use crate::C64;

/// One projective measurement of `sigma^axis` at a 1-based site and time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasurementEvent {
    pub site: usize,
    pub axis: PauliAxis,
    pub time: f64,
}

impl MeasurementEvent {
    pub fn new(site: usize, axis: PauliAxis, time: f64) -> Result<Self> {
        if site == 0 {
            return Err(Error::InvalidArgument("sites are 1-based".into()));
        }
        if !(time >= 0.0) || !time.is_finite() {
            return Err(Error::InvalidArgument(format!("measurement time must be >= 0, got {time}")));
        }
        Ok(MeasurementEvent { site, axis, time })
    }

    pub(crate) fn site0(&self, n_sites: usize) -> Result<usize> {
        if self.site == 0 || self.site > n_sites {
            return Err(Error::SiteOutOfRange {
                site: self.site,
                n_sites,
            });
        }
        Ok(self.site - 1)
    }
}

/// The symmetric three-party protocol: sites `(1, n, 2n-1)` at times
/// `(0, t, 2t)` on a chain of `2n - 1` sites.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LgiProtocol {
    pub distance_n: usize,
    pub base_time: f64,
    pub axis: PauliAxis,
}

impl LgiProtocol {
    pub fn new(distance_n: usize, base_time: f64, axis: PauliAxis) -> Result<Self> {
        if distance_n == 0 {
            return Err(Error::InvalidArgument("distance n must be >= 1".into()));
        }
        if !(base_time >= 0.0) || !base_time.is_finite() {
            return Err(Error::InvalidArgument(format!("base time must be >= 0, got {base_time}")));
        }
        Ok(LgiProtocol {
            distance_n,
            base_time,
            axis,
        })
    }

    pub fn chain_len(&self) -> usize {
        2 * self.distance_n - 1
    }

    /// 1-based sites of the three parties.
    pub fn sites(&self) -> [usize; 3] {
        [1, self.distance_n, self.chain_len()]
    }

    pub fn times(&self) -> [f64; 3] {
        [0.0, self.base_time, 2.0 * self.base_time]
    }

    pub fn events(&self) -> [MeasurementEvent; 3] {
        let s = self.sites();
        let t = self.times();
        [0, 1, 2].map(|i| MeasurementEvent {
            site: s[i],
            axis: self.axis,
            time: t[i],
        })
    }

    pub(crate) fn check_chain(&self, prop: &Propagator) -> Result<()> {
        check_chain(self.distance_n, prop.n_sites())
    }
}

pub(crate) fn check_chain(n: usize, n_sites: usize) -> Result<()> {
    if n == 0 || 2 * n - 1 != n_sites {
        return Err(Error::ChainMismatch {
            n,
            expected: (2 * n).saturating_sub(1),
            actual: n_sites,
        });
    }
    Ok(())
}

pub(crate) fn check_state(prop: &Propagator, psi0: &StateVector) -> Result<()> {
    if psi0.n_sites() != prop.n_sites() {
        return Err(Error::InvalidArgument(format!(
            "state has {} sites, propagator {}",
            psi0.n_sites(),
            prop.n_sites()
        )));
    }
    Ok(())
}

pub(crate) fn re_inner(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x.re * y.re + x.im * y.im).sum()
}

/// `Re <psi| Q_X(t_X) Q_Y(t_Y) |psi>` with `Q(t) = exp(iHt) Q exp(-iHt)`.
///
/// Only forward evolution is used:
/// `u = exp(-iH(t_Y - t_X)) Q_X exp(-iH t_X) psi`,
/// `v = Q_Y exp(-iH t_Y) psi`, result `Re <u|v>`.
pub fn sequential_correlator(
    prop: &Propagator,
    psi0: &StateVector,
    first: &MeasurementEvent,
    second: &MeasurementEvent,
) -> Result<f64> {
    check_state(prop, psi0)?;
    if first.time > second.time {
        return Err(Error::Ordering {
            first: first.time,
            second: second.time,
        });
    }
    let n_sites = prop.n_sites();
    let (sx, sy) = (first.site0(n_sites)?, second.site0(n_sites)?);
    let mut scratch = vec![C64::new(0.0, 0.0); psi0.dim()];

    let psi_x = prop.evolve_raw(psi0.amplitudes(), first.time)?;
    crate::spin::apply_axis_raw(&psi_x, sx, &first.axis, &mut scratch);
    let u = prop.evolve_raw(&scratch, second.time - first.time)?;

    let psi_y = prop.evolve_raw(&psi_x, second.time - first.time)?;
    crate::spin::apply_axis_raw(&psi_y, sy, &second.axis, &mut scratch);
    Ok(re_inner(&u, &scratch))
}

/// `K_n = C(1,n) + C(n,2n-1) - C(1,2n-1)` for the symmetric protocol.
pub fn k_correlator(prop: &Propagator, psi0: &StateVector, protocol: &LgiProtocol) -> Result<f64> {
    protocol.check_chain(prop)?;
    let [a, b, c] = protocol.events();
    let c_ab = sequential_correlator(prop, psi0, &a, &b)?;
    let c_bc = sequential_correlator(prop, psi0, &b, &c)?;
    let c_ac = sequential_correlator(prop, psi0, &a, &c)?;
    Ok(c_ab + c_bc - c_ac)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::Engine;
    use crate::lgi::{noninteracting_k, single_spin_k};
    use crate::spin::{ChainSpec, Hamiltonian, InteractionRange};
    use rand::{Rng, SeedableRng};

    fn prop(n_sites: usize, j: f64, h: f64, range: InteractionRange) -> Propagator {
        let spec = ChainSpec::new(n_sites, j, h, range);
        Propagator::new(Hamiltonian::new(spec).unwrap(), Engine::Auto).unwrap()
    }

    fn ev(site: usize, time: f64) -> MeasurementEvent {
        MeasurementEvent::new(site, PauliAxis::x(), time).unwrap()
    }

    #[test]
    fn equal_time_on_plus_state() {
        let p = prop(5, 1.0, 1.0, InteractionRange::Nn);
        let psi = StateVector::plus(5).unwrap();
        for (a, b) in [(1, 1), (1, 3), (2, 5)] {
            let c = sequential_correlator(&p, &psi, &ev(a, 0.0), &ev(b, 0.0)).unwrap();
            assert!((c - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn noninteracting_pair_correlators() {
        // J = 0: C(1,n) = cos(ht), C(n,2n-1) = cos(ht)cos(2ht), C(1,2n-1) = cos(2ht)
        let n = 3;
        let p = prop(5, 0.0, 1.0, InteractionRange::Nn);
        let psi = StateVector::plus(5).unwrap();
        for t in [0.3, 1.0, 2.2] {
            let c1 = sequential_correlator(&p, &psi, &ev(1, 0.0), &ev(n, t)).unwrap();
            let c2 = sequential_correlator(&p, &psi, &ev(n, t), &ev(5, 2.0 * t)).unwrap();
            let c3 = sequential_correlator(&p, &psi, &ev(1, 0.0), &ev(5, 2.0 * t)).unwrap();
            assert!((c1 - t.cos()).abs() < 1e-12);
            assert!((c2 - t.cos() * (2.0 * t).cos()).abs() < 1e-12);
            assert!((c3 - (2.0 * t).cos()).abs() < 1e-12);
        }
    }

    #[test]
    fn ordering_error() {
        let p = prop(3, 1.0, 1.0, InteractionRange::Nn);
        let psi = StateVector::plus(3).unwrap();
        let err = sequential_correlator(&p, &psi, &ev(1, 1.0), &ev(2, 0.5)).unwrap_err();
        assert_eq!(err, Error::Ordering { first: 1.0, second: 0.5 });
        assert!(matches!(
            sequential_correlator(&p, &psi, &ev(1, 0.0), &ev(4, 0.5)),
            Err(Error::SiteOutOfRange { site: 4, n_sites: 3 })
        ));
        assert!(MeasurementEvent::new(0, PauliAxis::x(), 0.0).is_err());
        assert!(MeasurementEvent::new(1, PauliAxis::x(), -0.1).is_err());
    }

    #[test]
    fn single_spin_k_matches_closed_form() {
        let p = prop(1, 0.0, 1.0, InteractionRange::Nn);
        let psi = StateVector::plus(1).unwrap();
        for t in [0.0, 0.5, std::f64::consts::FRAC_PI_3, 2.0, 4.0] {
            let proto = LgiProtocol::new(1, t, PauliAxis::x()).unwrap();
            let k = k_correlator(&p, &psi, &proto).unwrap();
            assert!((k - single_spin_k(t)).abs() < 1e-12);
        }
    }

    #[test]
    fn noninteracting_k_any_distance() {
        for n in 2..=4 {
            let p = prop(2 * n - 1, 0.0, 1.0, InteractionRange::Nn);
            let psi = StateVector::plus(2 * n - 1).unwrap();
            for t in [0.2, 1.3, 3.0] {
                let proto = LgiProtocol::new(n, t, PauliAxis::x()).unwrap();
                let k = k_correlator(&p, &psi, &proto).unwrap();
                assert!((k - noninteracting_k(t)).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn k_is_one_at_time_zero() {
        for range in [InteractionRange::Nn, InteractionRange::Nnn] {
            let p = prop(5, 1.0, 1.0, range);
            let psi = StateVector::plus(5).unwrap();
            let proto = LgiProtocol::new(3, 0.0, PauliAxis::x()).unwrap();
            assert!((k_correlator(&p, &psi, &proto).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn chain_mismatch() {
        let p = prop(4, 1.0, 1.0, InteractionRange::Nn);
        let psi = StateVector::plus(4).unwrap();
        let proto = LgiProtocol::new(2, 0.1, PauliAxis::x()).unwrap();
        assert_eq!(
            k_correlator(&p, &psi, &proto).unwrap_err(),
            Error::ChainMismatch { n: 2, expected: 3, actual: 4 }
        );
    }

    #[test]
    fn correlators_bounded() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(44);
        let p = prop(6, 1.0, 0.7, InteractionRange::Nnn);
        for _ in 0..30 {
            let psi = StateVector::random(6, &mut rng).unwrap();
            let axis = |r: &mut rand_chacha::ChaCha8Rng| {
                PauliAxis::from_direction([r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0)]).unwrap()
            };
            let t1 = rng.gen_range(0.0..3.0);
            let t2 = t1 + rng.gen_range(0.0..3.0);
            let a = MeasurementEvent::new(rng.gen_range(1..=6), axis(&mut rng), t1).unwrap();
            let b = MeasurementEvent::new(rng.gen_range(1..=6), axis(&mut rng), t2).unwrap();
            let c = sequential_correlator(&p, &psi, &a, &b).unwrap();
            assert!(c.abs() <= 1.0 + 1e-9);
        }
    }
}
