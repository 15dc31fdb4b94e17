//! One-level subspace projection: forces a dealer's shared system into a
//! neighborhood of `W^(q)` (or of its Fourier image) by random
//! controlled additions into sacrificial ancillas.

use alloc::vec::Vec;

use rand::RngCore;
use serde::Serialize;

use super::classical::honest_targets;
use crate::backend::Backend;
use crate::circuit::GateOp;
use crate::css::{checks_outside, prepare_code_state};
use crate::engine::{
    draw_coins, Adversary, CoinSource, DealerPlan, Event, PlayerSet, Transcript, WireView,
};
use crate::error::Result;
use crate::field::Fe;
use crate::pauli::PauliOp;
use crate::rs::{dual_code, parity_checks, rs_decode_within, DecodeStatus, RsCode};
use crate::stabilizer::SparsePauli;
use crate::support::SupportSet;

#[derive(Clone, Debug, Serialize)]
pub struct SpOutcome {
    pub accepted: bool,
    /// Union of the error supports found in the broadcast words.
    pub b: SupportSet,
    pub transcript: Transcript,
}

/// Wires of `systems` held by cheaters; position `i` belongs to player `i`.
fn cheater_wires(players: &PlayerSet, systems: &[&[usize]]) -> Vec<usize> {
    systems
        .iter()
        .flat_map(|s| players.cheaters.iter().map(move |i| s[i]))
        .collect()
}

fn fourier_all(backend: &mut dyn Backend, wires: &[usize], inverse: bool, rng: &mut dyn RngCore) -> Result<()> {
    for &w in wires {
        let g = if inverse {
            GateOp::FourierInv { r: Fe::ONE, w }
        } else {
            GateOp::Fourier { r: Fe::ONE, w }
        };
        backend.apply(&g, rng)?;
    }
    Ok(())
}

/// The dealer's systems: `H_0` and `k` ancillas, honest or following the
/// adversary's plan. In the dual variant the states are the Fourier
/// preimages (`sum over W^⊥`) and planted errors are phase errors.
pub fn sp_deal(
    backend: &mut dyn Backend,
    code: &RsCode,
    players: &PlayerSet,
    dealer: usize,
    adversary: &mut dyn Adversary,
    k: usize,
    dual: bool,
    rng: &mut dyn RngCore,
) -> Result<(Vec<usize>, Vec<Vec<usize>>)> {
    let n = code.n();
    let gf = code.params.gf();
    let base = if dual { dual_code(code) } else { code.clone() };
    let plan = if players.is_cheater(dealer) {
        adversary.dealer_plan()
    } else {
        DealerPlan::Honest
    };
    let error = |c: Fe, targets: &[usize]| {
        let mut e = PauliOp::identity(n);
        for &i in targets {
            if dual {
                e.z[i] = c;
            } else {
                e.x[i] = c;
            }
        }
        e
    };
    let h0 = backend.alloc_n(n)?;
    prepare_code_state(backend, &base, &h0, rng)?;
    let mut plant = None;
    if let DealerPlan::Inconsistent {
        distance,
        guess_ahead,
    } = plan
    {
        let targets = honest_targets(players, distance);
        backend.apply_pauli(&h0, &error(Fe::ONE, &targets), rng)?;
        if guess_ahead {
            plant = Some(targets);
        }
    }
    let mut anc = Vec::with_capacity(k);
    for _ in 0..k {
        let a = backend.alloc_n(n)?;
        prepare_code_state(backend, &base, &a, rng)?;
        if let Some(targets) = &plant {
            let g = adversary.guess_coin(&gf);
            backend.apply_pauli(&a, &error(gf.neg(g), targets), rng)?;
        }
        anc.push(a);
    }
    Ok((h0, anc))
}

fn verify(
    backend: &mut dyn Backend,
    code: &RsCode,
    h0: &[usize],
    ancillas: &[Vec<usize>],
    players: &PlayerSet,
    dealer: usize,
    adversary: &mut dyn Adversary,
    coins: CoinSource,
    rng: &mut dyn RngCore,
    log: &mut Transcript,
) -> Result<(bool, SupportSet)> {
    let gf = code.params.gf();
    let n = code.n();
    let t = players.t;
    let b = draw_coins(coins, &gf, players, ancillas.len(), "challenge", adversary, rng, log);
    for (a, &c) in ancillas.iter().zip(&b) {
        for i in 0..n {
            backend.apply(
                &GateOp::CAdd {
                    scale: c,
                    src: h0[i],
                    dst: a[i],
                },
                rng,
            )?;
        }
    }
    let mut systems: Vec<&[usize]> = ancillas.iter().map(Vec::as_slice).collect();
    systems.push(h0);
    let owned = cheater_wires(players, &systems);
    adversary.on_challenge(&b, &mut WireView::new(backend, &owned))?;

    let mut bset = SupportSet::EMPTY;
    let mut ok = true;
    for a in ancillas {
        let mut word = Vec::with_capacity(n);
        for i in 0..n {
            let honest = backend.measure_and_free(a[i], rng)?;
            let v = if players.is_cheater(i) {
                adversary.on_broadcast(i, "check", honest, &gf)
            } else {
                honest
            };
            log.push(Event::Broadcast {
                from: i,
                label: "check",
                values: alloc::vec![v],
            });
            word.push(v);
        }
        let r = rs_decode_within(code, &word, SupportSet::EMPTY, t)?;
        match r.status {
            DecodeStatus::Decoded => bset = bset.union(r.error_support),
            DecodeStatus::Detected => ok = false,
        }
    }
    if !bset.is_empty() {
        log.push(Event::Accuse {
            scope: crate::engine::AccuseScope::Global,
            added: bset,
        });
    }
    let accepted = ok && bset.len() <= t;
    if !accepted {
        log.push(Event::Disqualify { player: dealer });
    }
    log.push(Event::Verdict {
        label: "subspace",
        accepted,
    });
    Ok((accepted, bset))
}

/// Verification of a dealt `H_0` against `W = code`, consuming the ancillas.
pub fn subspace_projection(
    backend: &mut dyn Backend,
    code: &RsCode,
    h0: &[usize],
    ancillas: &[Vec<usize>],
    players: &PlayerSet,
    dealer: usize,
    adversary: &mut dyn Adversary,
    coins: CoinSource,
    rng: &mut dyn RngCore,
) -> Result<SpOutcome> {
    let mut log = Transcript::new();
    let mut systems: Vec<&[usize]> = ancillas.iter().map(Vec::as_slice).collect();
    systems.push(h0);
    let owned = cheater_wires(players, &systems);
    adversary.on_deal("shares", &mut WireView::new(backend, &owned))?;
    let (accepted, b) = verify(backend, code, h0, ancillas, players, dealer, adversary, coins, rng, &mut log)?;
    Ok(SpOutcome {
        accepted,
        b,
        transcript: log,
    })
}

/// The Fourier-basis variant: all shares are rotated first, checked
/// against `W`, and `H_0` is rotated back.
pub fn dual_subspace_projection(
    backend: &mut dyn Backend,
    code: &RsCode,
    h0: &[usize],
    ancillas: &[Vec<usize>],
    players: &PlayerSet,
    dealer: usize,
    adversary: &mut dyn Adversary,
    coins: CoinSource,
    rng: &mut dyn RngCore,
) -> Result<SpOutcome> {
    let mut log = Transcript::new();
    let mut systems: Vec<&[usize]> = ancillas.iter().map(Vec::as_slice).collect();
    systems.push(h0);
    let owned = cheater_wires(players, &systems);
    adversary.on_deal("shares", &mut WireView::new(backend, &owned))?;
    fourier_all(backend, h0, false, rng)?;
    for a in ancillas {
        fourier_all(backend, a, false, rng)?;
    }
    let (accepted, b) = verify(backend, code, h0, ancillas, players, dealer, adversary, coins, rng, &mut log)?;
    fourier_all(backend, h0, true, rng)?;
    Ok(SpOutcome {
        accepted,
        b,
        transcript: log,
    })
}

/// Whether `h0` lies in `W_set^(q)` (or, for `dual`, whether its Fourier
/// image does), by measuring every check of `W` supported outside `set`.
/// Exact for states on which those checks are deterministic; consumes the
/// state's coherence in general.
pub fn in_neighborhood(
    backend: &mut dyn Backend,
    code: &RsCode,
    h0: &[usize],
    set: SupportSet,
    dual: bool,
    rng: &mut dyn RngCore,
) -> Result<bool> {
    let gf = code.params.gf();
    if dual {
        fourier_all(backend, h0, false, rng)?;
    }
    let mut inside = true;
    for h in checks_outside(&gf, &parity_checks(code), set) {
        if !backend.measure(&SparsePauli::z_type(h0, &h), rng)?.is_zero() {
            inside = false;
        }
    }
    if dual {
        fourier_all(backend, h0, true, rng)?;
    }
    Ok(inside)
}
