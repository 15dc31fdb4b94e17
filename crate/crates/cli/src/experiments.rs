//! Single protocol runs with their oracles, Monte Carlo sweeps over
//! `(k, adversary)` grids, and the measurement-ordering experiment.

use std::collections::BTreeMap;
use std::time::Instant;

use anyhow::{bail, Result};
use rand::RngCore;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use vqss_core::backend::Backend;
use vqss_core::circuit::{Circuit, GateOp};
use vqss_core::css::{cb_check_spec, ideal_interpolation, CssCode};
use vqss_core::engine::{adversary_by_name, Adversary, PlayerSet, Transcript};
use vqss_core::pauli::PauliOp;
use vqss_core::protocols::ideal::{iss_ideal, mpqc_ideal_values};
use vqss_core::protocols::mpqc::mpqc_run;
use vqss_core::protocols::subspace::{in_neighborhood, sp_deal};
use vqss_core::protocols::toplevel::top_level_share;
use vqss_core::protocols::vqss::{vqss_reconstruct, vqss_share_and_verify, Claim, Ctx, QTree, TopInput};
use vqss_core::protocols::{classical_vss, dual_subspace_projection, is_two_good, subspace_projection, ShareTree};
use vqss_core::rng::{trial_rng, uniform};
use vqss_core::rs::RsCode;
use vqss_core::share::ShareState;
use vqss_core::stabilizer::StabState;
use vqss_core::{Fe, FieldParams, Gf};

use crate::config::{BackendKind, ExperimentConfig, InputKind, Protocol};
use crate::statevector::StateVector;
use crate::stats::{chi2_homogeneity, wilson, ChiSquareTest, Interval, CONFIDENCE};

/// What one trial produced, kept raw in reports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialOutcome {
    pub trial: u64,
    pub accepted: bool,
    /// Accepted although the dealt data lies outside the verified space.
    pub bad: bool,
    /// Whether the honest outputs equal the ideal model's; `None` if the
    /// configuration has no exact oracle.
    pub exact: Option<bool>,
    pub accused: Vec<usize>,
    pub cheaters: Vec<usize>,
    pub events: usize,
}

/// One point of a grid.
#[derive(Clone, Copy)]
pub struct TrialSpec<'a> {
    pub cfg: &'a ExperimentConfig,
    pub k: usize,
    pub adversary: &'a str,
    pub circuit: Option<&'a Circuit>,
}

enum Sim {
    Stab(StabState),
    Share(ShareState),
    Sv(StateVector),
}

impl Sim {
    fn new(kind: BackendKind, gf: Gf) -> Result<Self> {
        Ok(match kind {
            BackendKind::Stabilizer => Sim::Stab(StabState::new(gf, 0)?),
            BackendKind::Share => Sim::Share(ShareState::new(gf, 0)),
            BackendKind::Statevector => Sim::Sv(StateVector::new(gf, 0)?),
        })
    }

    fn backend(&mut self) -> &mut dyn Backend {
        match self {
            Sim::Stab(s) => s,
            Sim::Share(s) => s,
            Sim::Sv(s) => s,
        }
    }
}

fn adversary_seed(seed: u64, trial: u64) -> u64 {
    seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ trial
}

fn input_value(kind: InputKind, gf: &Gf, rng: &mut dyn RngCore) -> Fe {
    match kind {
        InputKind::One => Fe::ONE,
        InputKind::Random => uniform(gf, rng),
        InputKind::Zero | InputKind::Plus => Fe::ZERO,
    }
}

/// Prepares the input qupit on a fresh wire.
fn prep_input(b: &mut dyn Backend, kind: InputKind, v: Fe, rng: &mut dyn RngCore) -> Result<usize> {
    let w = b.alloc()?;
    b.apply(&GateOp::XShift { c: v, w }, rng)?;
    if kind == InputKind::Plus {
        b.apply(&GateOp::Fourier { r: Fe::ONE, w }, rng)?;
    }
    Ok(w)
}

fn reference(gf: Gf, kind: InputKind, v: Fe) -> Result<StabState> {
    let mut st = StabState::new(gf, 0)?;
    prep_input(&mut st, kind, v, &mut trial_rng(0, 0))?;
    Ok(st)
}

/// Measures every leaf of a tree in the computational basis.
fn measure_tree(b: &mut dyn Backend, tree: &QTree, acc: &vqss_core::engine::AccusationState, rng: &mut dyn RngCore) -> Result<ShareTree> {
    let n = tree.n;
    let mut leaves = vec![vec![Fe::ZERO; n]; n];
    for (i, row) in leaves.iter_mut().enumerate() {
        for (j, x) in row.iter_mut().enumerate() {
            *x = b.apply(&GateOp::Measure { w: tree.at(i, j) }, rng)?.unwrap_or(Fe::ZERO);
        }
    }
    Ok(ShareTree {
        leaves,
        acc: acc.clone(),
    })
}

pub fn run_trial(spec: TrialSpec, trial: u64, log: &mut Transcript) -> Result<TrialOutcome> {
    let cfg = spec.cfg;
    let params = FieldParams::new(cfg.p, cfg.n)?;
    let gf = params.gf();
    let mut rng = trial_rng(cfg.seed, trial);
    let mut adv = adversary_by_name(spec.adversary, adversary_seed(cfg.seed, trial))
        .ok_or_else(|| anyhow::anyhow!("unknown adversary {}", spec.adversary))?;
    let dealer = 0;
    let corrupt = match cfg.protocol {
        Protocol::Mpqc => adv.choose_corrupt(cfg.n, cfg.t, None),
        _ => adv.choose_corrupt(cfg.n, cfg.t, Some(dealer)),
    };
    let players = PlayerSet::new(cfg.n, cfg.t, corrupt)?;
    let mut out = TrialOutcome {
        trial,
        accepted: false,
        bad: false,
        exact: None,
        accused: Vec::new(),
        cheaters: players.cheaters.to_vec(),
        events: 0,
    };
    let dealer_honest = !players.is_cheater(dealer);
    let coins = cfg.coin_source();

    match cfg.protocol {
        Protocol::ClassicalVss => {
            let code = RsCode::new(params, cfg.delta, false)?;
            let secret = input_value(cfg.input, &gf, &mut rng);
            let run = classical_vss(&code, secret, &players, dealer, adv.as_mut(), spec.k, coins, &mut rng)?;
            out.accepted = run.accepted;
            out.bad = run.accepted && !is_two_good(&code, &run.tree, &players);
            out.accused = run.tree.acc.b_global.to_vec();
            if dealer_honest {
                out.exact = Some(run.output == Some(secret));
            }
            log.events.extend(run.transcript.events);
        }
        Protocol::Subspace | Protocol::DualSubspace => {
            let dual = cfg.protocol == Protocol::DualSubspace;
            let code = RsCode::new(params, cfg.delta, false)?;
            let mut sim = Sim::new(cfg.backend, gf)?;
            let b = sim.backend();
            let (h0, anc) = sp_deal(b, &code, &players, dealer, adv.as_mut(), spec.k, dual, &mut rng)?;
            let f = if dual { dual_subspace_projection } else { subspace_projection };
            let r = f(b, &code, &h0, &anc, &players, dealer, adv.as_mut(), coins, &mut rng)?;
            out.accepted = r.accepted;
            out.accused = r.b.to_vec();
            if r.accepted {
                out.bad = !in_neighborhood(b, &code, &h0, r.b.union(players.cheaters), dual, &mut rng)?;
            }
            if dealer_honest {
                out.exact = Some(r.accepted && r.b.is_subset(players.cheaters));
            }
            log.events.extend(r.transcript.events);
        }
        Protocol::Vqss => {
            let code = CssCode::new(params, cfg.delta)?;
            let v = input_value(cfg.input, &gf, &mut rng);
            let mut sim = Sim::new(cfg.backend, gf)?;
            let w = prep_input(sim.backend(), cfg.input, v, &mut rng)?;
            let receiver = players.honest().iter().find(|&i| i != dealer).unwrap_or(1);
            let mut ctx = Ctx {
                backend: sim.backend(),
                players: &players,
                adversary: adv.as_mut(),
                coins,
                rng: &mut rng,
                log,
            };
            let s = vqss_share_and_verify(&mut ctx, &code, dealer, TopInput::Wire(w), spec.k)?;
            out.accepted = s.accepted;
            out.accused = s.acc.b_global.to_vec();
            if dealer_honest && s.accepted {
                let mut acc = s.acc.clone();
                let o = vqss_reconstruct(&mut ctx, &code, &s.tree, &mut acc, receiver)?;
                out.exact = Some(match &mut sim {
                    Sim::Stab(st) => st.reduced_stabilizers(&[o]) == reference(gf, cfg.input, v)?.reduced_stabilizers(&[0]),
                    Sim::Share(st) => st.values[o] == v,
                    Sim::Sv(_) => unreachable!("validated"),
                });
            } else if dealer_honest {
                out.exact = Some(false);
            } else if s.accepted {
                let tree = measure_tree(ctx.backend, &s.tree, &s.acc, ctx.rng)?;
                out.bad = !is_two_good(&code.v_code, &tree, &players);
            }
        }
        Protocol::TopLevel => {
            let code = CssCode::new(params, cfg.delta)?;
            let v = input_value(cfg.input, &gf, &mut rng);
            let mut sim = Sim::new(cfg.backend, gf)?;
            let w = prep_input(sim.backend(), cfg.input, v, &mut rng)?;
            let mut ctx = Ctx {
                backend: sim.backend(),
                players: &players,
                adversary: adv.as_mut(),
                coins,
                rng: &mut rng,
                log,
            };
            let s = top_level_share(&mut ctx, &code, dealer, TopInput::Wire(w), Claim::Generic, spec.k)?;
            out.accepted = s.accepted;
            out.accused = s.acc.b_global.to_vec();
            if s.accepted {
                let (exact, bad) = iss_compare(&mut sim, &code, &players, &s.wires, dealer_honest.then_some((cfg.input, v)), &mut rng)?;
                out.exact = Some(exact);
                out.bad = bad;
            } else if dealer_honest {
                out.exact = Some(false);
            }
        }
        Protocol::Mpqc => {
            let code = CssCode::new(params, cfg.delta)?;
            let default;
            let circ = match spec.circuit {
                Some(c) => c,
                None => {
                    default = toffoli_circuit(&gf, cfg.n);
                    &default
                }
            };
            let mut sim = Sim::new(cfg.backend, gf)?;
            let vals: Vec<Fe> = (0..cfg.n).map(|_| input_value(cfg.input, &gf, &mut rng)).collect();
            let mut inputs = Vec::with_capacity(cfg.n);
            for &x in &vals {
                inputs.push(prep_input(sim.backend(), cfg.input, x, &mut rng)?);
            }
            let mut ctx = Ctx {
                backend: sim.backend(),
                players: &players,
                adversary: adv.as_mut(),
                coins,
                rng: &mut rng,
                log,
            };
            let r = mpqc_run(&mut ctx, &code, circ, &inputs, spec.k)?;
            out.accepted = r.caught.is_empty();
            out.accused = r.caught.to_vec();
            let Sim::Share(st) = &sim else {
                bail!("mpqc experiments compare basis values and need the share backend");
            };
            let extracted = r.extracted.clone().unwrap_or_default();
            let ideal_in: Vec<Option<Fe>> = extracted.iter().map(|&x| Some(x)).collect();
            let ideal = mpqc_ideal_values(circ, &ideal_in)?;
            let inputs_kept = players
                .honest()
                .iter()
                .all(|i| r.caught.contains(i) || extracted[i] == vals[i]);
            let outputs_match = players.honest().iter().all(|i| st.values[r.outputs[i]] == ideal[i]);
            out.exact = Some(inputs_kept && outputs_match && r.caught.is_subset(players.cheaters));
            out.bad = out.exact == Some(false);
        }
    }
    out.events = log.len();
    Ok(out)
}

/// `TOFF 0 1 2` on `n` wires.
pub fn toffoli_circuit(gf: &Gf, n: usize) -> Circuit {
    let mut c = Circuit::new(gf, n);
    c.push(GateOp::Toffoli { a: 0, b: 1, c: 2 }).expect("n >= 3");
    c
}

/// Compares honest components of an accepted top-level sharing with the
/// ideal encoding. With `known` the ideal input is the dealer's actual
/// input; otherwise it is extracted from the honest components (the
/// simulator's view). Returns `(exact, bad)` where `bad` means the honest
/// components fail the `C_C` membership checks.
fn iss_compare(
    sim: &mut Sim,
    code: &CssCode,
    players: &PlayerSet,
    wires: &[usize],
    known: Option<(InputKind, Fe)>,
    rng: &mut dyn RngCore,
) -> Result<(bool, bool)> {
    let honest = players.honest();
    let hw: Vec<usize> = honest.iter().map(|i| wires[i]).collect();
    let gf = code.gf();
    match sim {
        Sim::Stab(st) => {
            let real = st.reduced_stabilizers(&hw);
            // Membership: every check outside C has a definite zero outcome.
            let mut probe = st.clone();
            let mut bad = false;
            for m in cb_check_spec(code, players.cheaters) {
                let p = m.as_pauli(wires);
                if probe.peek_pauli(&p) != Some(Fe::ZERO) {
                    bad = true;
                }
            }
            let ideal = match known {
                Some((kind, v)) => {
                    let mut r = reference(gf, kind, v)?;
                    let e = iss_ideal(&mut r, code, Some(0), rng)?.expect("input given");
                    let ehw: Vec<usize> = honest.iter().map(|i| e[i]).collect();
                    r.reduced_stabilizers(&ehw)
                }
                None => {
                    let anc = ideal_interpolation(&mut probe, code, wires, honest, rng)?;
                    let e = iss_ideal(&mut probe, code, Some(anc), rng)?.expect("input given");
                    let ehw: Vec<usize> = honest.iter().map(|i| e[i]).collect();
                    probe.reduced_stabilizers(&ehw)
                }
            };
            Ok((real == ideal, bad))
        }
        Sim::Share(st) => {
            let mut word = vec![Fe::ZERO; code.n()];
            for i in honest.iter() {
                word[i] = st.values[wires[i]];
            }
            let pos = honest.to_vec();
            let fit = code.v_code.fit(&word, &pos);
            let bad = fit.is_none();
            let exact = match (fit, known) {
                (Some(q), Some((_, v))) => q.coeff(0) == v,
                (Some(_), None) => true,
                (None, _) => false,
            };
            Ok((exact, bad))
        }
        Sim::Sv(_) => bail!("top-level experiments run on the stabilizer or share backend"),
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CellReport {
    pub k: usize,
    pub adversary: String,
    pub trials: u64,
    pub accepted: u64,
    pub bad: u64,
    pub exact_checked: u64,
    pub exact_failures: u64,
    pub accept_rate: f64,
    pub accept_ci: Interval,
    pub bad_rate: f64,
    pub bad_ci: Interval,
    /// `2^(n-k)`, the generic bound on accepting bad data.
    pub bound: f64,
    /// Exact bad-acceptance rate of the strategy, when known.
    pub strategy_rate: Option<f64>,
    pub violation: bool,
    pub wall_ms: u128,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Report {
    pub config: ExperimentConfig,
    pub cells: Vec<CellReport>,
    /// Raw outcomes, one vector per cell.
    pub raw: Vec<Vec<TrialOutcome>>,
}

/// Exact bad-acceptance rate of the canned dealer strategies against the
/// protocols whose checks are single-coin cut-and-choose.
pub fn strategy_rate(protocol: Protocol, adversary: &str, p: u64, k: usize) -> Option<f64> {
    let simple = matches!(protocol, Protocol::ClassicalVss | Protocol::Subspace | Protocol::DualSubspace);
    match adversary {
        "guess-ahead" | "guess-ahead-d1" if simple => Some((p as f64).powi(-(k as i32))),
        "none" | "identity" | "inconsistent-dealer" if simple => Some(0.0),
        _ => None,
    }
}

pub fn aggregate(cfg: &ExperimentConfig, k: usize, adversary: &str, outcomes: &[TrialOutcome], wall_ms: u128) -> CellReport {
    let trials = outcomes.len() as u64;
    let accepted = outcomes.iter().filter(|o| o.accepted).count() as u64;
    let bad = outcomes.iter().filter(|o| o.bad).count() as u64;
    let exact_checked = outcomes.iter().filter(|o| o.exact.is_some()).count() as u64;
    let exact_failures = outcomes.iter().filter(|o| o.exact == Some(false)).count() as u64;
    let rate = |x: u64| if trials == 0 { 0.0 } else { x as f64 / trials as f64 };
    let bad_ci = wilson(bad, trials, CONFIDENCE);
    let bound = 2f64.powi(cfg.n as i32 - k as i32);
    let srate = strategy_rate(cfg.protocol, adversary, cfg.p, k);
    let violation = bad_ci.lo > bound
        || srate.is_some_and(|r| !bad_ci.contains(r))
        || exact_failures > 0;
    CellReport {
        k,
        adversary: adversary.to_string(),
        trials,
        accepted,
        bad,
        exact_checked,
        exact_failures,
        accept_rate: rate(accepted),
        accept_ci: wilson(accepted, trials, CONFIDENCE),
        bad_rate: rate(bad),
        bad_ci,
        bound,
        strategy_rate: srate,
        violation,
        wall_ms,
    }
}

/// Runs `trials` independent trials of every `(k, adversary)` cell. Trial
/// `i` uses the stream `(seed, i)`, so results do not depend on threading.
pub fn soundness_sweep(cfg: &ExperimentConfig, circuit: Option<&Circuit>) -> Result<Report> {
    let mut cells = Vec::new();
    let mut raw = Vec::new();
    for &k in &cfg.k {
        for adversary in &cfg.adversary {
            let spec = TrialSpec {
                cfg,
                k,
                adversary,
                circuit,
            };
            let start = Instant::now();
            let outcomes: Vec<TrialOutcome> = (0..cfg.trials)
                .into_par_iter()
                .map(|i| run_trial(spec, i, &mut Transcript::new()))
                .collect::<Result<_>>()?;
            cells.push(aggregate(cfg, k, adversary, &outcomes, start.elapsed().as_millis()));
            raw.push(outcomes);
        }
    }
    Ok(Report {
        config: cfg.clone(),
        cells,
        raw,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Q2cReport {
    pub trials: u64,
    pub k: usize,
    pub adversary: String,
    pub early: BTreeMap<String, u64>,
    pub late: BTreeMap<String, u64>,
    pub test: ChiSquareTest,
    pub passes: bool,
    /// The same comparison with an X inserted on an honest share between
    /// dealing and verification in the early arm.
    pub control: Option<ChiSquareTest>,
    pub control_passes: Option<bool>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Arm {
    /// Honest shares measured after the whole protocol.
    Late,
    /// Honest shares of `H_0` and the ancillas measured before verification.
    Early,
    /// `Early` plus an X on one honest share of `H_0`.
    Broken,
}

/// Classical outcome of one subspace-projection run: verdict, `B`, and
/// the value the honest `H_0` shares fix (or `-` when they do not fit).
fn q2c_trial(cfg: &ExperimentConfig, k: usize, adversary: &str, arm: Arm, trial: u64) -> Result<String> {
    let params = FieldParams::new(cfg.p, cfg.n)?;
    let gf = params.gf();
    let code = RsCode::new(params, cfg.delta, false)?;
    let stream = trial * 3 + arm as u64;
    let mut rng = trial_rng(cfg.seed, stream);
    let mut adv: Box<dyn Adversary> = adversary_by_name(adversary, adversary_seed(cfg.seed, stream))
        .ok_or_else(|| anyhow::anyhow!("unknown adversary {adversary}"))?;
    let players = PlayerSet::new(cfg.n, cfg.t, adv.choose_corrupt(cfg.n, cfg.t, Some(0)))?;
    let honest = players.honest();
    let mut st = StabState::new(gf, 0)?;
    let (h0, anc) = sp_deal(&mut st, &code, &players, 0, adv.as_mut(), k, false, &mut rng)?;
    if arm != Arm::Late {
        for sys in std::iter::once(&h0).chain(anc.iter()) {
            for i in honest.iter() {
                st.apply(&GateOp::Measure { w: sys[i] }, &mut rng)?;
            }
        }
    }
    if arm == Arm::Broken {
        let j = honest.iter().next().expect("an honest player");
        let mut e = PauliOp::identity(cfg.n);
        e.x[j] = Fe::ONE;
        st.apply_pauli(&h0, &e, &mut rng)?;
    }
    let r = subspace_projection(&mut st, &code, &h0, &anc, &players, 0, adv.as_mut(), cfg.coin_source(), &mut rng)?;
    let mut word = vec![Fe::ZERO; cfg.n];
    for i in honest.iter() {
        word[i] = st.apply(&GateOp::Measure { w: h0[i] }, &mut rng)?.unwrap_or(Fe::ZERO);
    }
    let value = code
        .fit(&word, &honest.to_vec())
        .map_or_else(|| "-".to_string(), |q| q.coeff(0).value().to_string());
    Ok(format!("{}|{:?}|{value}", r.accepted, r.b.to_vec()))
}

fn q2c_histogram(cfg: &ExperimentConfig, k: usize, adversary: &str, arm: Arm) -> Result<BTreeMap<String, u64>> {
    let keys: Vec<String> = (0..cfg.trials)
        .into_par_iter()
        .map(|i| q2c_trial(cfg, k, adversary, arm, i))
        .collect::<Result<_>>()?;
    let mut h = BTreeMap::new();
    for key in keys {
        *h.entry(key).or_insert(0) += 1;
    }
    Ok(h)
}

/// Compares the classical outcomes of subspace projection when honest
/// players measure their shares before versus after verification.
pub fn q2c_experiment(cfg: &ExperimentConfig, k: usize, adversary: &str, with_control: bool) -> Result<Q2cReport> {
    let late = q2c_histogram(cfg, k, adversary, Arm::Late)?;
    let early = q2c_histogram(cfg, k, adversary, Arm::Early)?;
    let test = chi2_homogeneity(&early, &late);
    let control = if with_control {
        let broken = q2c_histogram(cfg, k, adversary, Arm::Broken)?;
        Some(chi2_homogeneity(&broken, &late))
    } else {
        None
    };
    Ok(Q2cReport {
        trials: cfg.trials,
        k,
        adversary: adversary.to_string(),
        early,
        late,
        passes: test.passes(CONFIDENCE),
        test,
        control_passes: control.map(|c| c.passes(CONFIDENCE)),
        control,
    })
}
