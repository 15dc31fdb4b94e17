//! Multiparty quantum computation: every player shares its input with
//! top-level sharing, the circuit runs on the encoded blocks gate by gate,
//! and block `i` is decoded by player `i`.

use alloc::vec::Vec;

use serde::Serialize;

use super::gadgets::{fourier_gadget, toffoli_gadget, transversal};
use super::toplevel::top_level_share;
use super::vqss::{Claim, Ctx, TopInput};
use crate::circuit::{Circuit, GateOp};
use crate::css::{correct_and_decode, CssCode};
use crate::engine::{Event, Regime, WireView};
use crate::error::{Error, Result};
use crate::field::Fe;
use crate::support::SupportSet;

#[derive(Clone, Debug, Serialize)]
pub struct MpqcOutcome {
    /// Output qupit of player `i` (`|0>` when decoding failed).
    pub outputs: Vec<usize>,
    /// Players whose input sharing was rejected; their input is `|0>`.
    pub caught: SupportSet,
    /// Players whose output block could not be decoded.
    pub decode_failed: SupportSet,
    /// On basis-only backends, the logical input values as fixed by the
    /// honest components after the input phase.
    pub extracted: Option<Vec<Fe>>,
}

fn cheater_components(ctx: &Ctx, blocks: &[Vec<usize>]) -> Vec<usize> {
    blocks
        .iter()
        .flat_map(|b| ctx.players.cheaters.iter().map(move |i| b[i]))
        .collect()
}

/// A verified `|0>` block dealt by the first player not yet caught.
fn zero_block(ctx: &mut Ctx, code: &CssCode, caught: &mut SupportSet, k: usize) -> Result<Vec<usize>> {
    for j in 0..code.n() {
        if caught.contains(j) {
            continue;
        }
        let s = top_level_share(ctx, code, j, TopInput::Zero, Claim::Zero, k)?;
        if s.accepted {
            return Ok(s.wires);
        }
        caught.insert(j);
    }
    Err(Error::InvalidParams("every player was caught cheating".into()))
}

/// Logical value fixed by the honest components of a basis-state block.
fn honest_value(ctx: &mut Ctx, code: &CssCode, block: &[usize]) -> Result<Fe> {
    let pos: Vec<usize> = ctx.players.honest().iter().collect();
    let mut word = alloc::vec![Fe::ZERO; code.n()];
    for &i in &pos {
        word[i] = ctx
            .backend
            .apply(&GateOp::Measure { w: block[i] }, ctx.rng)?
            .unwrap_or(Fe::ZERO);
    }
    code.v_code
        .fit(&word, &pos)
        .map(|q| q.coeff(0))
        .ok_or(Error::RecoveryFailed { need: code.delta() + 1 })
}

/// Runs `circuit` on `inputs[i]` (player `i`'s qupit) followed by `|0>`
/// ancillas. `code` must be `C^(2t)` on `n > 6t` players.
pub fn mpqc_run(
    ctx: &mut Ctx,
    code: &CssCode,
    circuit: &Circuit,
    inputs: &[usize],
    k: usize,
) -> Result<MpqcOutcome> {
    let n = code.n();
    let t = ctx.players.t;
    ctx.players.require(Regime::Sixth)?;
    if code.delta() != 2 * t || inputs.len() != n || circuit.num_qupits < n {
        return Err(Error::InvalidParams(alloc::format!(
            "computation needs delta = 2t, one input per player and at least n wires (delta={}, inputs={}, wires={})",
            code.delta(),
            inputs.len(),
            circuit.num_qupits
        )));
    }
    circuit.validate()?;

    // Input phase.
    let mut caught = SupportSet::EMPTY;
    let mut blocks: Vec<Vec<usize>> = Vec::with_capacity(circuit.num_qupits);
    for (i, &w) in inputs.iter().enumerate() {
        let s = top_level_share(ctx, code, i, TopInput::Wire(w), Claim::Generic, k)?;
        if s.accepted {
            blocks.push(s.wires);
        } else {
            caught.insert(i);
            blocks.push(zero_block(ctx, code, &mut caught, k)?);
        }
    }
    while blocks.len() < circuit.num_qupits {
        blocks.push(zero_block(ctx, code, &mut caught, k)?);
    }
    let extracted = if ctx.backend.basis_only() {
        let mut v = Vec::with_capacity(n);
        for b in &blocks[..n] {
            v.push(honest_value(ctx, code, b)?);
        }
        Some(v)
    } else {
        None
    };

    // Computation phase.
    let gf = code.gf();
    for g in &circuit.gates {
        match *g {
            GateOp::XShift { .. }
            | GateOp::ZPhase { .. }
            | GateOp::CAdd { .. }
            | GateOp::Mul { .. }
            | GateOp::Swap { .. } => {
                let refs: Vec<&[usize]> = blocks.iter().map(Vec::as_slice).collect();
                transversal(ctx, code, g, &refs)?;
            }
            GateOp::Fourier { r, w } => {
                // F_r = F . Mul(r)
                let refs: Vec<&[usize]> = blocks.iter().map(Vec::as_slice).collect();
                transversal(ctx, code, &GateOp::Mul { c: r, w }, &refs)?;
                blocks[w] = fourier_gadget(ctx, code, &blocks[w], false)?;
            }
            GateOp::FourierInv { r, w } => {
                blocks[w] = fourier_gadget(ctx, code, &blocks[w], true)?;
                let refs: Vec<&[usize]> = blocks.iter().map(Vec::as_slice).collect();
                transversal(ctx, code, &GateOp::Mul { c: gf.inv(r)?, w }, &refs)?;
            }
            GateOp::Toffoli { a, b, c } => {
                blocks[c] = toffoli_gadget(ctx, code, &blocks[a], &blocks[b], &blocks[c])?;
            }
            _ => {
                return Err(Error::UnsupportedGate {
                    backend: "mpqc",
                    gate: g.name(),
                })
            }
        }
        let owned = cheater_components(ctx, &blocks);
        ctx.adversary
            .on_deal("compute", &mut WireView::new(&mut *ctx.backend, &owned))?;
    }

    // Output phase: block i goes to player i; ancilla blocks are discarded.
    for b in &blocks[n..] {
        ctx.backend.free_all(b, ctx.rng)?;
    }
    let mut outputs = Vec::with_capacity(n);
    let mut decode_failed = SupportSet::EMPTY;
    for (i, b) in blocks[..n].iter().enumerate() {
        let owned: Vec<usize> = ctx.players.cheaters.iter().map(|j| b[j]).collect();
        ctx.adversary
            .on_reconstruct(&mut WireView::new(&mut *ctx.backend, &owned))?;
        for j in 0..n {
            ctx.log.push(Event::Send {
                from: j,
                to: i,
                label: "output",
                qupits: 1,
            });
        }
        match correct_and_decode(ctx.backend, code, b, SupportSet::EMPTY, t, ctx.rng)? {
            Some((w, _)) => outputs.push(w),
            None => {
                decode_failed.insert(i);
                ctx.backend.free_all(b, ctx.rng)?;
                outputs.push(ctx.backend.alloc()?);
            }
        }
    }
    Ok(MpqcOutcome {
        outputs,
        caught,
        decode_failed,
        extracted,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::backend::Backend;
    use crate::engine::{adversary_by_name, CoinSource, PlayerSet, Transcript};
    use crate::protocols::ideal::mpqc_ideal_values;
    use crate::rng::trial_rng;
    use crate::share::ShareState;
    use crate::FieldParams;

    fn circuit(gf: &crate::Gf) -> Circuit {
        let mut c = Circuit::new(gf, 8);
        c.push(GateOp::CAdd { scale: gf.elem(2), src: 0, dst: 1 }).unwrap();
        c.push(GateOp::Toffoli { a: 0, b: 1, c: 7 }).unwrap();
        c.push(GateOp::Swap { a: 7, b: 2 }).unwrap();
        c.push(GateOp::XShift { c: gf.elem(5), w: 3 }).unwrap();
        c.push(GateOp::Mul { c: gf.elem(3), w: 6 }).unwrap();
        c
    }

    #[test]
    fn share_backend_matches_ideal_for_canned_adversaries() {
        let params = FieldParams::new(11, 7).unwrap();
        let code = CssCode::new(params, 2).unwrap();
        let gf = params.gf();
        let circ = circuit(&gf);
        for name in ["none", "pauli-injector", "inconsistent-dealer", "broadcast-liar", "reconstruction-garbage"] {
            for seed in 0..3 {
                let mut adv = adversary_by_name(name, seed).unwrap();
                let players = PlayerSet::new(7, 1, adv.choose_corrupt(7, 1, None)).unwrap();
                let mut st = ShareState::new(gf, 0);
                let mut rng = trial_rng(seed, 1);
                let vals: Vec<i64> = (0..7).map(|i| (3 * i + seed as i64 + 1) % 11).collect();
                let inputs: Vec<usize> = vals
                    .iter()
                    .map(|&v| {
                        let w = st.alloc().unwrap();
                        st.apply(&GateOp::XShift { c: gf.elem(v), w }, &mut rng).unwrap();
                        w
                    })
                    .collect();
                let mut log = Transcript::new();
                let mut ctx = Ctx {
                    backend: &mut st,
                    players: &players,
                    adversary: adv.as_mut(),
                    coins: CoinSource::IDEAL,
                    rng: &mut rng,
                    log: &mut log,
                };
                let out = mpqc_run(&mut ctx, &code, &circ, &inputs, 1).unwrap();
                assert!(out.caught.is_subset(players.cheaters), "{name}");
                let ideal_in: Vec<Option<Fe>> = out.extracted.clone().unwrap().into_iter().map(Some).collect();
                for i in players.honest().iter() {
                    if !out.caught.contains(i) {
                        assert_eq!(ideal_in[i], Some(gf.elem(vals[i])), "{name}");
                    }
                }
                let ideal = mpqc_ideal_values(&circ, &ideal_in).unwrap();
                for i in players.honest().iter() {
                    assert_eq!(st.values[out.outputs[i]], ideal[i], "{name} seed {seed} player {i}");
                }
            }
        }
    }
}
