//! Gillespie-style stochastic simulation with pluggable waiting times,
//! continuous-time random walks on graph Laplacians, and the bundled
//! Schlogl reaction network.
//!
//! The only change relative to the classical algorithm is how the waiting
//! time is drawn: exponential, Mittag-Leffler, or the `W_+` mixture, all
//! parametrised by the current total propensity. Reaction selection and
//! state updates are untouched.

use crate::matrix::GraphLaplacian;
use crate::samplers::{
    sample_exponential, sample_mlf_waiting, sample_wplus_waiting, RngStream,
};
use crate::special::MlfParams;
use crate::{Error, Result};
use rayon::prelude::*;
use std::sync::Arc;

/// Reaction of a one-species network: an integer stoichiometric change
/// and a propensity as a function of the current copy number.
#[derive(Clone)]
pub struct Reaction {
    pub delta: i64,
    pub propensity: Arc<dyn Fn(u64) -> f64 + Send + Sync>,
}

/// One dynamic species plus a list of reactions. Buffered species are
/// folded into the rate constants.
#[derive(Clone)]
pub struct ReactionNetwork {
    reactions: Vec<Reaction>,
}

impl ReactionNetwork {
    pub fn new(reactions: Vec<Reaction>) -> Self {
        Self { reactions }
    }

    pub fn reactions(&self) -> &[Reaction] {
        &self.reactions
    }

    /// Propensities at state `x`, asserting nonnegativity.
    pub fn propensities(&self, x: u64) -> Vec<f64> {
        self.reactions
            .iter()
            .map(|r| {
                let a = (r.propensity)(x);
                debug_assert!(a >= 0.0, "negative propensity {a} at x = {x}");
                a
            })
            .collect()
    }
}

/// Schlogl model constants. Buffer species B1, B2 are held fixed; the
/// single dynamic species starts at `x0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchloglParams {
    pub k1: f64,
    pub k2: f64,
    pub k3: f64,
    pub k4: f64,
    pub b1: f64,
    pub b2: f64,
    pub x0: u64,
}

impl Default for SchloglParams {
    fn default() -> Self {
        Self {
            k1: 3e-7,
            k2: 1e-4,
            k3: 1e-3,
            k4: 3.5,
            b1: 1e5,
            b2: 2e5,
            x0: 247,
        }
    }
}

/// Combinatorial mass-action propensities of the four Schlogl reactions:
/// `a1 = k1 B1 x(x-1)/2`, `a2 = k2 x(x-1)(x-2)/6`, `a3 = k3 B2`,
/// `a4 = k4 x`.
pub fn schlogl_propensities(x: u64, params: &SchloglParams) -> [f64; 4] {
    let xf = x as f64;
    [
        params.k1 * params.b1 * xf * (xf - 1.0).max(0.0) / 2.0,
        params.k2 * xf * (xf - 1.0).max(0.0) * (xf - 2.0).max(0.0) / 6.0,
        params.k3 * params.b2,
        params.k4 * xf,
    ]
}

/// The Schlogl model as a [`ReactionNetwork`]: reactions 1 and 3 produce
/// one X, reactions 2 and 4 consume one.
pub fn schlogl_network(params: SchloglParams) -> ReactionNetwork {
    let deltas = [1i64, -1, 1, -1];
    let reactions = deltas
        .iter()
        .enumerate()
        .map(|(i, &delta)| Reaction {
            delta,
            propensity: Arc::new(move |x| schlogl_propensities(x, &params)[i]),
        })
        .collect();
    ReactionNetwork::new(reactions)
}

/// Real roots of the deterministic (mean-field) rate equation
/// `dx/dt = k1 B1 x^2/2 - k2 x^3/6 + k3 B2 - k4 x`, found by a sign-change
/// scan and bisection on `[0, 1000]`. Sorted ascending; the middle root is
/// the unstable one for the bundled constants.
pub fn deterministic_steady_states(params: &SchloglParams) -> Vec<f64> {
    let f = |x: f64| {
        params.k1 * params.b1 * x * x / 2.0 - params.k2 * x * x * x / 6.0
            + params.k3 * params.b2
            - params.k4 * x
    };
    let mut roots = Vec::new();
    let steps = 10_000;
    let width = 1000.0 / steps as f64;
    for i in 0..steps {
        let (mut lo, mut hi) = (i as f64 * width, (i + 1) as f64 * width);
        let (flo, fhi) = (f(lo), f(hi));
        if flo == 0.0 {
            roots.push(lo);
            continue;
        }
        if flo * fhi >= 0.0 {
            continue;
        }
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if f(lo) * f(mid) <= 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        roots.push(0.5 * (lo + hi));
    }
    roots
}

/// Waiting-time family used between reactions; the rate parameter is
/// always the current total propensity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WaitingTime {
    Exponential,
    MittagLeffler { alpha: f64 },
    WPlusMixture { alpha: f64 },
}

impl WaitingTime {
    pub fn mittag_leffler(alpha: f64) -> Result<Self> {
        MlfParams::new(alpha, 1.0)?;
        Ok(Self::MittagLeffler { alpha })
    }

    pub fn wplus(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "W_+ waiting requires 0 < alpha < 1, got {alpha}"
            )));
        }
        Ok(Self::WPlusMixture { alpha })
    }

    /// Draw a waiting time at total rate `rate > 0`.
    pub fn sample(&self, rate: f64, rng: &mut RngStream) -> f64 {
        match *self {
            Self::Exponential => sample_exponential(rate, rng),
            Self::MittagLeffler { alpha } => {
                sample_mlf_waiting(MlfParams::new(alpha, rate).unwrap(), rng)
            }
            Self::WPlusMixture { alpha } => {
                sample_wplus_waiting(MlfParams::new(alpha, rate).unwrap(), rng)
            }
        }
    }
}

/// One SSA event: waiting time, index of the fired reaction, new state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SsaEvent {
    pub tau: f64,
    pub reaction: usize,
    pub next_state: u64,
}

/// Single step of the (generalised) Gillespie algorithm. Returns `None`
/// at an absorbing state (zero total propensity).
pub fn ssa_step(
    state: u64,
    network: &ReactionNetwork,
    waiting: WaitingTime,
    rng: &mut RngStream,
) -> Option<SsaEvent> {
    let propensities = network.propensities(state);
    let total: f64 = propensities.iter().sum();
    if total <= 0.0 {
        return None;
    }
    let tau = waiting.sample(total, rng);
    let target = rng.uniform_open() * total;
    let mut acc = 0.0;
    let mut reaction = propensities.len() - 1;
    for (i, &a) in propensities.iter().enumerate() {
        acc += a;
        if target < acc {
            reaction = i;
            break;
        }
    }
    let delta = network.reactions[reaction].delta;
    let next_state = if delta < 0 {
        state.saturating_sub((-delta) as u64)
    } else {
        state + delta as u64
    };
    Some(SsaEvent {
        tau,
        reaction,
        next_state,
    })
}

/// Event record of one run: times are reaction instants, states the
/// post-event copy numbers; the state is held constant between events.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub initial_state: u64,
    pub times: Vec<f64>,
    pub states: Vec<u64>,
    pub seed: u64,
    pub stream_id: u64,
}

impl Trajectory {
    /// Last state strictly before time `t` (right-continuous step
    /// process).
    pub fn state_at(&self, t: f64) -> u64 {
        match self.times.partition_point(|&s| s < t) {
            0 => self.initial_state,
            k => self.states[k - 1],
        }
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

/// Runaway guard for a single trajectory.
pub const EVENT_CAP: u64 = 100_000_000;

fn simulate_with_cap(
    network: &ReactionNetwork,
    waiting: WaitingTime,
    x0: u64,
    t_end: f64,
    rng: &mut RngStream,
    cap: u64,
) -> Result<Trajectory> {
    if !(t_end > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "t_end must be positive, got {t_end}"
        )));
    }
    let mut t = 0.0;
    let mut state = x0;
    let mut times = Vec::new();
    let mut states = Vec::new();
    let mut events = 0u64;
    while let Some(event) = ssa_step(state, network, waiting, rng) {
        t += event.tau;
        if t > t_end {
            break;
        }
        events += 1;
        if events > cap {
            return Err(Error::EventCap(cap));
        }
        state = event.next_state;
        times.push(t);
        states.push(state);
    }
    Ok(Trajectory {
        initial_state: x0,
        times,
        states,
        seed: rng.seed(),
        stream_id: rng.stream_id(),
    })
}

/// Run the event loop until the next event would pass `t_end`.
pub fn simulate_trajectory(
    network: &ReactionNetwork,
    waiting: WaitingTime,
    x0: u64,
    t_end: f64,
    rng: &mut RngStream,
) -> Result<Trajectory> {
    simulate_with_cap(network, waiting, x0, t_end, rng, EVENT_CAP)
}

/// Streaming run that records only the state at each snapshot time
/// (ascending); used by the ensemble driver so long runs don't retain
/// full event lists.
fn simulate_snapshots(
    network: &ReactionNetwork,
    waiting: WaitingTime,
    x0: u64,
    snapshots: &[f64],
    rng: &mut RngStream,
) -> Result<Vec<u64>> {
    let t_end = *snapshots.last().expect("at least one snapshot");
    let mut out = Vec::with_capacity(snapshots.len());
    let mut t = 0.0;
    let mut state = x0;
    let mut next = 0usize;
    let mut events = 0u64;
    loop {
        let step = ssa_step(state, network, waiting, rng);
        let t_next = match &step {
            Some(e) => t + e.tau,
            None => f64::INFINITY,
        };
        while next < snapshots.len() && snapshots[next] <= t_next {
            out.push(state);
            next += 1;
        }
        if next == snapshots.len() || t_next > t_end {
            break;
        }
        events += 1;
        if events > EVENT_CAP {
            return Err(Error::EventCap(EVENT_CAP));
        }
        t = t_next;
        state = step.unwrap().next_state;
    }
    while next < snapshots.len() {
        out.push(state);
        next += 1;
    }
    Ok(out)
}

/// Continuous-time random walk on a graph Laplacian: wait at state `j`
/// with rate `|a_jj|`, then jump to `i` with probability `a_ij / |a_jj|`.
pub fn ctrw_on_graph(
    a: &GraphLaplacian,
    waiting: WaitingTime,
    j0: usize,
    t_end: f64,
    rng: &mut RngStream,
) -> Result<Trajectory> {
    if j0 >= a.dim() {
        return Err(Error::InvalidParameter(format!(
            "start state {j0} out of range for dimension {}",
            a.dim()
        )));
    }
    if !(t_end > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "t_end must be positive, got {t_end}"
        )));
    }
    let n = a.dim();
    let mut t = 0.0;
    let mut state = j0;
    let mut times = Vec::new();
    let mut states = Vec::new();
    let mut events = 0u64;
    loop {
        let rate = a.exit_rate(state);
        if rate <= 0.0 {
            break; // absorbing
        }
        t += waiting.sample(rate, rng);
        if t > t_end {
            break;
        }
        events += 1;
        if events > EVENT_CAP {
            return Err(Error::EventCap(EVENT_CAP));
        }
        let target = rng.uniform_open();
        let mut acc = 0.0;
        let mut dest = state;
        for i in 0..n {
            if i == state {
                continue;
            }
            acc += a.jump_probability(i, state);
            if target < acc {
                dest = i;
                break;
            }
        }
        if dest == state {
            // target fell in rounding slack past the last jump mass
            dest = (0..n).rev().find(|&i| i != state).unwrap();
        }
        state = dest;
        times.push(t);
        states.push(state as u64);
    }
    Ok(Trajectory {
        initial_state: j0 as u64,
        times,
        states,
        seed: rng.seed(),
        stream_id: rng.stream_id(),
    })
}

/// States binned at one snapshot time over an ensemble of `n` runs.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleHistogram {
    pub time: f64,
    /// `counts[x]` = number of trajectories at state `x`; indexed densely
    /// from zero up to the largest observed state.
    pub counts: Vec<u64>,
    pub n: u64,
}

impl EnsembleHistogram {
    pub fn count(&self, x: u64) -> u64 {
        self.counts.get(x as usize).copied().unwrap_or(0)
    }

    /// Local modes after smoothing with a centered moving-average window.
    pub fn smoothed_modes(&self, window: usize) -> Vec<usize> {
        let half = window / 2;
        let m = self.counts.len();
        let smooth: Vec<f64> = (0..m)
            .map(|i| {
                let lo = i.saturating_sub(half);
                let hi = (i + half + 1).min(m);
                self.counts[lo..hi].iter().sum::<u64>() as f64 / (hi - lo) as f64
            })
            .collect();
        let mut modes = Vec::new();
        let mut i = 0;
        while i < m {
            // treat plateaus as a single candidate
            let mut j = i;
            while j + 1 < m && smooth[j + 1] == smooth[i] {
                j += 1;
            }
            let left_ok = i == 0 || smooth[i - 1] < smooth[i];
            let right_ok = j + 1 == m || smooth[j + 1] < smooth[i];
            if left_ok && right_ok && smooth[i] > 0.0 {
                modes.push((i + j) / 2);
            }
            i = j + 1;
        }
        modes
    }
}

/// `n` independent trajectories on streams `0..n` of `base_seed`, binned
/// at each snapshot time. The per-trajectory work is parallel; the
/// reduction is a plain elementwise sum, so results do not depend on the
/// worker count.
pub fn ensemble_histogram(
    network: &ReactionNetwork,
    waiting: WaitingTime,
    x0: u64,
    snapshots: &[f64],
    n: u64,
    base_seed: u64,
) -> Result<Vec<EnsembleHistogram>> {
    if n < 1 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    if snapshots.is_empty() || snapshots.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter(
            "snapshots must be nonempty and strictly increasing".into(),
        ));
    }
    let per_run: Vec<Vec<u64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut rng = RngStream::new(base_seed, i);
            simulate_snapshots(network, waiting, x0, snapshots, &mut rng)
        })
        .collect::<Result<_>>()?;
    let mut out = Vec::with_capacity(snapshots.len());
    for (k, &time) in snapshots.iter().enumerate() {
        let max_state = per_run.iter().map(|r| r[k]).max().unwrap() as usize;
        let mut counts = vec![0u64; max_state + 1];
        for r in &per_run {
            counts[r[k] as usize] += 1;
        }
        out.push(EnsembleHistogram { time, counts, n });
    }
    Ok(out)
}
