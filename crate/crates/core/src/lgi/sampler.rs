use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::correlator::{check_state, re_inner, MeasurementEvent};
use crate::dynamics::Propagator;
use crate::error::{Error, Result};
use crate::spin::{apply_axis_raw, StateVector};
use crate::C64;

/// Branches with probability below this are never sampled.
const ZERO_BRANCH: f64 = 1e-14;

/// Outcome table indexed `[first][second]`, index 0 for `+1` and 1 for `-1`.
pub type JointCounts = [[u64; 2]; 2];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleOutcome {
    /// Shot average of `q_X q_Y`.
    pub estimate: f64,
    pub counts: JointCounts,
    /// Exact joint probabilities `P(q_X, q_Y)`, same layout as `counts`.
    pub probabilities: [[f64; 2]; 2],
    /// `sum q_X q_Y P(q_X, q_Y)`.
    pub exact: f64,
    pub shots: u64,
    pub seed: u64,
}

const OUTCOMES: [f64; 2] = [1.0, -1.0];

/// Exact joint distribution of two sequential projective measurements with
/// projectors `P_q = (1 + q sigma^v) / 2`.
pub fn joint_distribution(
    prop: &Propagator,
    psi0: &StateVector,
    first: &MeasurementEvent,
    second: &MeasurementEvent,
) -> Result<[[f64; 2]; 2]> {
    check_state(prop, psi0)?;
    if first.time > second.time {
        return Err(Error::Ordering {
            first: first.time,
            second: second.time,
        });
    }
    let n_sites = prop.n_sites();
    let (sx, sy) = (first.site0(n_sites)?, second.site0(n_sites)?);
    let dim = psi0.dim();
    let psi_x = prop.evolve_raw(psi0.amplitudes(), first.time)?;
    let mut flipped = vec![C64::new(0.0, 0.0); dim];
    apply_axis_raw(&psi_x, sx, &first.axis, &mut flipped);

    let mut probs = [[0.0; 2]; 2];
    for (i, q) in OUTCOMES.iter().enumerate() {
        let branch: Vec<C64> = psi_x.iter().zip(&flipped).map(|(a, b)| 0.5 * (a + q * b)).collect();
        let p_first: f64 = branch.iter().map(|a| a.norm_sqr()).sum();
        if p_first < ZERO_BRANCH {
            continue;
        }
        let inv = p_first.sqrt().recip();
        let collapsed: Vec<C64> = branch.iter().map(|a| a * inv).collect();
        let later = prop.evolve_raw(&collapsed, second.time - first.time)?;
        let mut image = vec![C64::new(0.0, 0.0); dim];
        apply_axis_raw(&later, sy, &second.axis, &mut image);
        // <phi| P_q' |phi> = (1 + q' <phi|sigma^w|phi>) / 2
        let mean = re_inner(&later, &image).clamp(-1.0, 1.0);
        for (j, q2) in OUTCOMES.iter().enumerate() {
            probs[i][j] = p_first * 0.5 * (1.0 + q2 * mean);
        }
    }
    Ok(probs)
}

/// Finite-shot estimate of the sequential correlator. Every shot collapses
/// onto the observed first outcome before the second measurement;
/// equivalently each shot is drawn from the exact sequential joint
/// distribution. Deterministic in `seed`.
pub fn sample_sequential(
    prop: &Propagator,
    psi0: &StateVector,
    first: &MeasurementEvent,
    second: &MeasurementEvent,
    shots: u64,
    seed: u64,
) -> Result<SampleOutcome> {
    if shots == 0 {
        return Err(Error::InvalidArgument("shots must be >= 1".into()));
    }
    let probs = joint_distribution(prop, psi0, first, second)?;
    let marginal = [probs[0][0] + probs[0][1], probs[1][0] + probs[1][1]];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = [[0u64; 2]; 2];
    for _ in 0..shots {
        let i = draw(&mut rng, marginal[0] / (marginal[0] + marginal[1]), marginal)?;
        let conditional = [probs[i][0] / marginal[i], probs[i][1] / marginal[i]];
        let j = draw(&mut rng, conditional[0], conditional)?;
        counts[i][j] += 1;
    }
    let total: i64 = (0..2)
        .flat_map(|i| (0..2).map(move |j| (i, j)))
        .map(|(i, j)| (OUTCOMES[i] * OUTCOMES[j]) as i64 * counts[i][j] as i64)
        .sum();
    let exact = (0..2)
        .flat_map(|i| (0..2).map(move |j| (i, j)))
        .map(|(i, j)| OUTCOMES[i] * OUTCOMES[j] * probs[i][j])
        .sum();
    Ok(SampleOutcome {
        estimate: total as f64 / shots as f64,
        counts,
        probabilities: probs,
        exact,
        shots,
        seed,
    })
}

fn draw(rng: &mut ChaCha8Rng, p_plus: f64, weights: [f64; 2]) -> Result<usize> {
    let u: f64 = rng.gen();
    let k = if u < p_plus { 0 } else { 1 };
    if weights[k] < ZERO_BRANCH {
        return Err(Error::Degenerate(format!(
            "sampled a zero-probability branch (p = {:e})",
            weights[k]
        )));
    }
    Ok(k)
}
