use serde::Serialize;

use super::{ReductionConfig, ReductionError, TrialLog, Variant};
use crate::instance::Instance;
use crate::objective::{greedy_run, greedy_scan, WeightVector};
use crate::online::{LinearFactory, OnlineAlgorithm, PartialMsp, StreamSetup};
use crate::tape::{Coins, RandomTape, Stream};

/// Which form of the reduction to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    Online,
    Simulated,
    CoupledOnline,
    CoupledSimulated,
}

impl std::str::FromStr for Algorithm {
    type Err = ReductionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "online" => Ok(Algorithm::Online),
            "simulated" => Ok(Algorithm::Simulated),
            other => Err(ReductionError::InvalidConfig(format!("unknown algorithm {other:?}"))),
        }
    }
}

/// Dispatches on the algorithm form and the configured variant.
pub fn run(
    algorithm: Algorithm,
    cfg: &ReductionConfig,
    inst: &Instance,
    linear: &dyn LinearFactory,
    tape: &RandomTape,
) -> Result<TrialLog, ReductionError> {
    match (algorithm, cfg.variant) {
        (Algorithm::Online, Variant::Nonmonotone) => smsp_online(cfg, inst, linear, tape),
        (Algorithm::Simulated, Variant::Nonmonotone) => smsp_simulated(cfg, inst, linear, tape),
        (Algorithm::Online, Variant::Monotone) => msmsp_online(cfg, inst, linear, tape),
        (Algorithm::Simulated, Variant::Monotone) => msmsp_simulated(cfg, inst, linear, tape),
        (other, _) => Err(ReductionError::InvalidConfig(format!("{other:?} needs explicit coupling sets"))),
    }
}

fn require(cfg: &ReductionConfig, inst: &Instance, variant: Variant) -> Result<(), ReductionError> {
    if cfg.variant != variant {
        return Err(ReductionError::VariantMismatch(format!("configuration is {}, algorithm is {variant}", cfg.variant)));
    }
    if variant == Variant::Monotone && !inst.objective.is_monotone() {
        return Err(ReductionError::VariantMismatch("objective is not declared monotone".into()));
    }
    Ok(())
}

/// Runs `Greedy` on `M + u` where `M` is a greedy solution, and reports the
/// marginal `f(u | M_u)` if `u` gets added.
fn greedy_gain_for(inst: &Instance, greedy: &[usize], u: usize) -> Option<f64> {
    let mut set = greedy.to_vec();
    set.push(u);
    let mut gain = None;
    greedy_scan(&inst.objective, &inst.matroid, &set, |step, _| {
        let take = step.independent && step.gain >= 0.0;
        if take && step.element == u {
            gain = Some(step.gain);
        }
        take
    });
    gain
}

/// Feeds `arrivals` (with weights `w`) to a fresh linear algorithm wrapped
/// for the known set `known`, and returns its output.
fn run_linear(
    inst: &Instance,
    linear: &dyn LinearFactory,
    tape: &RandomTape,
    known: &[usize],
    arrivals: &[usize],
    w: &WeightVector,
) -> Result<Vec<usize>, ReductionError> {
    let setup = StreamSetup { len: inst.n(), matroid: &inst.matroid };
    let inner = linear.start(setup, tape.coins(Stream::Linear))?;
    let mut alg: Box<dyn OnlineAlgorithm + '_> =
        Box::new(PartialMsp::new(inner, known, arrivals.len(), tape.coins(Stream::Interleave)));
    for &u in arrivals {
        alg.on_arrival(u, w.get(u));
    }
    Ok(alg.finish())
}

fn sorted(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v
}

struct Parts {
    learning_len: usize,
    learning: Vec<usize>,
    greedy: Vec<usize>,
    candidates: Vec<usize>,
    zero_candidates: Vec<usize>,
    linear_order: Vec<usize>,
    weights: WeightVector,
    linear_output: Vec<usize>,
}

fn finalize(inst: &Instance, algorithm: Algorithm, variant: Variant, parts: Parts) -> TrialLog {
    let f = &inst.objective;
    let candidates = sorted(parts.candidates);
    let linear_output = sorted(parts.linear_output);
    let output: Vec<usize> = linear_output.iter().copied().filter(|u| candidates.binary_search(u).is_ok()).collect();
    TrialLog {
        algorithm,
        variant,
        learning_len: parts.learning_len,
        learning: sorted(parts.learning),
        f_empty: f.value(&[]),
        f_greedy: f.value(&parts.greedy),
        w_greedy: parts.weights.sum(&parts.greedy),
        w_candidates: parts.weights.sum(&candidates),
        f_output: f.value(&output),
        greedy: parts.greedy,
        candidates,
        zero_candidates: sorted(parts.zero_candidates),
        linear_order: parts.linear_order,
        weights: parts.weights,
        linear_output,
        output,
    }
}

/// Shared body of the online forms: the first `learning_len` elements of
/// `order` are observed, and `keep` decides whether a greedy-accepted
/// arrival joins `N`.
#[allow(clippy::too_many_arguments)]
fn online_core(
    inst: &Instance,
    linear: &dyn LinearFactory,
    tape: &RandomTape,
    algorithm: Algorithm,
    variant: Variant,
    learning_len: usize,
    order: &[usize],
    mut keep: impl FnMut(usize) -> bool,
) -> Result<TrialLog, ReductionError> {
    let learning = order[..learning_len].to_vec();
    let arrivals = order[learning_len..].to_vec();
    let run = greedy_run(&inst.objective, &inst.matroid, &learning);
    let mut weights = WeightVector::zeros(inst.matroid.ground().id_bound());
    for (&u, &g) in run.chosen.iter().zip(&run.gains) {
        weights.set(u, g);
    }
    let mut candidates = Vec::new();
    let mut zero_candidates = Vec::new();
    // weights of later arrivals only depend on M, so they can be fixed
    // before the stream is replayed into the linear algorithm
    for &u in &arrivals {
        match greedy_gain_for(inst, &run.chosen, u) {
            Some(gain) if keep(u) => {
                candidates.push(u);
                weights.set(u, gain);
            }
            _ => zero_candidates.push(u),
        }
    }
    let linear_output = run_linear(inst, linear, tape, &learning, &arrivals, &weights)?;
    Ok(finalize(
        inst,
        algorithm,
        variant,
        Parts {
            learning_len,
            learning,
            greedy: run.chosen,
            candidates,
            zero_candidates,
            linear_order: arrivals,
            weights,
            linear_output,
        },
    ))
}

/// The online reduction for non-negative submodular objectives.
pub fn smsp_online(
    cfg: &ReductionConfig,
    inst: &Instance,
    linear: &dyn LinearFactory,
    tape: &RandomTape,
) -> Result<TrialLog, ReductionError> {
    require(cfg, inst, Variant::Nonmonotone)?;
    let order = tape.arrival_order(inst.elements());
    let x = tape.coins(Stream::Learning).binomial(order.len(), 0.5);
    let mut coins = tape.coins(Stream::Membership);
    online_core(inst, linear, tape, Algorithm::Online, Variant::Nonmonotone, x, &order, |_| coins.bernoulli(cfg.p))
}

/// The online reduction for monotone objectives.
pub fn msmsp_online(
    cfg: &ReductionConfig,
    inst: &Instance,
    linear: &dyn LinearFactory,
    tape: &RandomTape,
) -> Result<TrialLog, ReductionError> {
    require(cfg, inst, Variant::Monotone)?;
    let order = tape.arrival_order(inst.elements());
    let x = tape.coins(Stream::Learning).binomial(order.len(), cfg.p);
    online_core(inst, linear, tape, Algorithm::Online, Variant::Monotone, x, &order, |_| true)
}

/// Where the simulated greedy loop sends an element.
enum Route {
    Greedy,
    Candidate,
    Zero,
    Drop,
}

fn simulated_core(
    inst: &Instance,
    linear: &dyn LinearFactory,
    tape: &RandomTape,
    algorithm: Algorithm,
    variant: Variant,
    order: Option<&[usize]>,
    mut route: impl FnMut(usize, bool, f64) -> Route,
) -> Result<TrialLog, ReductionError> {
    let mut weights = WeightVector::zeros(inst.matroid.ground().id_bound());
    let mut candidates = Vec::new();
    let mut zero_candidates = Vec::new();
    let mut learning = Vec::new();
    let run = greedy_scan(&inst.objective, &inst.matroid, inst.elements(), |step, _| {
        let u = step.element;
        match route(u, step.independent, step.gain) {
            Route::Greedy => {
                weights.set(u, step.gain);
                learning.push(u);
                return true;
            }
            Route::Candidate => {
                weights.set(u, step.gain);
                candidates.push(u);
            }
            Route::Zero => zero_candidates.push(u),
            Route::Drop => learning.push(u),
        }
        false
    });
    let arrivals = match order {
        Some(o) => o.to_vec(),
        None => {
            let mut a = sorted([candidates.clone(), zero_candidates.clone()].concat());
            tape.coins(Stream::Order).shuffle(&mut a);
            a
        }
    };
    let learning = sorted(learning);
    let linear_output = run_linear(inst, linear, tape, &learning, &arrivals, &weights)?;
    Ok(finalize(
        inst,
        algorithm,
        variant,
        Parts {
            learning_len: learning.len(),
            learning,
            greedy: run.chosen,
            candidates,
            zero_candidates,
            linear_order: arrivals,
            weights,
            linear_output,
        },
    ))
}

/// The offline simulation of [`smsp_online`] used in the analysis.
pub fn smsp_simulated(
    cfg: &ReductionConfig,
    inst: &Instance,
    linear: &dyn LinearFactory,
    tape: &RandomTape,
) -> Result<TrialLog, ReductionError> {
    require(cfg, inst, Variant::Nonmonotone)?;
    let mut coins = tape.coins(Stream::Membership);
    simulated_core(inst, linear, tape, Algorithm::Simulated, Variant::Nonmonotone, None, |_, independent, gain| {
        if independent && gain >= 0.0 {
            if coins.bernoulli(0.5) {
                Route::Greedy
            } else if coins.bernoulli(cfg.p) {
                Route::Candidate
            } else {
                Route::Zero
            }
        } else if coins.bernoulli(0.5) {
            Route::Zero
        } else {
            Route::Drop
        }
    })
}

/// The offline simulation of [`msmsp_online`].
pub fn msmsp_simulated(
    cfg: &ReductionConfig,
    inst: &Instance,
    linear: &dyn LinearFactory,
    tape: &RandomTape,
) -> Result<TrialLog, ReductionError> {
    require(cfg, inst, Variant::Monotone)?;
    let mut coins = tape.coins(Stream::Membership);
    simulated_core(inst, linear, tape, Algorithm::Simulated, Variant::Monotone, None, |_, independent, _| {
        if independent {
            if coins.bernoulli(cfg.p) {
                Route::Greedy
            } else {
                Route::Candidate
            }
        } else if coins.bernoulli(1.0 - cfg.p) {
            Route::Zero
        } else {
            Route::Drop
        }
    })
}

/// Runs the online and simulated forms with their coins replaced by the
/// sets `learning` (`L`) and `selected` (`F`). The online form sees `L`
/// first and then `order`; the simulated form feeds the linear algorithm
/// in `order`. Both linear runs draw from `linear_tape`.
///
/// `order` must be a permutation of the elements outside `learning`.
pub fn coupled_pair(
    learning: &[usize],
    selected: &[usize],
    order: &[usize],
    cfg: &ReductionConfig,
    inst: &Instance,
    linear: &dyn LinearFactory,
    linear_tape: &RandomTape,
) -> Result<(TrialLog, TrialLog), ReductionError> {
    require(cfg, inst, Variant::Nonmonotone)?;
    let id_bound = inst.matroid.ground().id_bound();
    let mut in_l = vec![false; id_bound];
    let mut in_f = vec![false; id_bound];
    for &u in learning {
        in_l[u] = true;
    }
    for &u in selected {
        in_f[u] = true;
    }
    let mut rest: Vec<usize> = inst.elements().iter().copied().filter(|&u| !in_l[u]).collect();
    let mut check = order.to_vec();
    check.sort_unstable();
    rest.sort_unstable();
    if check != rest {
        return Err(ReductionError::InvalidConfig("order must be a permutation of the non-learning elements".into()));
    }

    let mut full_order: Vec<usize> = inst.elements().iter().copied().filter(|&u| in_l[u]).collect();
    full_order.extend_from_slice(order);
    let online = online_core(
        inst,
        linear,
        linear_tape,
        Algorithm::CoupledOnline,
        Variant::Nonmonotone,
        full_order.len() - order.len(),
        &full_order,
        |u| in_f[u],
    )?;
    let simulated = simulated_core(
        inst,
        linear,
        linear_tape,
        Algorithm::CoupledSimulated,
        Variant::Nonmonotone,
        Some(order),
        |u, independent, gain| {
            if independent && gain >= 0.0 {
                if in_l[u] {
                    Route::Greedy
                } else if in_f[u] {
                    Route::Candidate
                } else {
                    Route::Zero
                }
            } else if in_l[u] {
                Route::Drop
            } else {
                Route::Zero
            }
        },
    )?;
    Ok((online, simulated))
}
