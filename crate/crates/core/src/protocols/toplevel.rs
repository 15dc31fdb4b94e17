//! Top-level sharing: the dealer shares its qupit plus encoding ancillas
//! as two-level trees, the players apply the encoder leafwise, and tree
//! `s` is rolled back to player `s` as a single qupit.

use alloc::vec::Vec;

use serde::Serialize;

use super::vqss::{vqss_reconstruct, vqss_share_batched, Claim, Ctx, QTree, TopInput};
use crate::circuit::linear_map_circuit;
use crate::css::CssCode;
use crate::engine::{AccusationState, Event, WireView};
use crate::error::Result;
use crate::field::vandermonde;

#[derive(Clone, Debug, Serialize)]
pub struct TopLevelSharing {
    /// `wires[i]` is player `i`'s component; empty when rejected.
    pub wires: Vec<usize>,
    pub accepted: bool,
    pub acc: AccusationState,
    pub provenance: Claim,
}

/// Shares `input` so that player `i` ends up with component `i` of its
/// encoding. With `claim = Zero` the dealer also proves the input is `|0>`.
pub fn top_level_share(
    ctx: &mut Ctx,
    code: &CssCode,
    dealer: usize,
    input: TopInput,
    claim: Claim,
    k: usize,
) -> Result<TopLevelSharing> {
    let n = code.n();
    let delta = code.delta();
    let mut acc = AccusationState::new(n);
    let mut trees: Vec<QTree> = Vec::with_capacity(n);
    let batches = [
        (alloc::vec![input], claim),
        (alloc::vec![TopInput::Plus; delta], Claim::Plus),
        (alloc::vec![TopInput::Zero; n - delta - 1], Claim::Zero),
    ];
    for (inputs, c) in batches {
        if acc.disqualified {
            if let TopInput::Wire(w) = inputs[0] {
                ctx.backend.free(w, ctx.rng)?;
            }
            continue;
        }
        trees.extend(vqss_share_batched(ctx, code, dealer, &inputs, c, k, &mut acc)?);
    }
    if acc.disqualified {
        for t in &trees {
            ctx.backend.free_all(&t.wires, ctx.rng)?;
        }
        ctx.log.push(Event::Verdict {
            label: "top-level",
            accepted: false,
        });
        return Ok(TopLevelSharing {
            wires: Vec::new(),
            accepted: false,
            acc,
            provenance: claim,
        });
    }

    // Leafwise encoder: every player applies it to its leaves of S_1..S_n.
    let enc = linear_map_circuit(&code.gf(), &vandermonde(&code.params(), n)?)?;
    for pos in 0..n * n {
        let column: Vec<usize> = trees.iter().map(|t| t.wires[pos]).collect();
        ctx.backend.run(&enc, &column, ctx.rng)?;
    }

    let mut wires = Vec::with_capacity(n);
    for (s, tree) in trees.iter().enumerate() {
        let mut a = acc.clone();
        let w = vqss_reconstruct(ctx, code, tree, &mut a, s)?;
        if ctx.players.is_cheater(s) {
            let owned = [w];
            ctx.adversary
                .on_deal("component", &mut WireView::new(&mut *ctx.backend, &owned))?;
        }
        wires.push(w);
    }
    ctx.log.push(Event::Verdict {
        label: "top-level",
        accepted: true,
    });
    Ok(TopLevelSharing {
        wires,
        accepted: true,
        acc,
        provenance: claim,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::backend::Backend;
    use crate::circuit::GateOp;
    use crate::css::{decode_clean, encode_on};
    use crate::engine::{adversary_by_name, CoinSource, PlayerSet, Transcript};
    use crate::field::Fe;
    use crate::rng::trial_rng;
    use crate::stabilizer::StabState;
    use crate::FieldParams;

    #[test]
    fn honest_components_match_direct_encoding() {
        let params = FieldParams::new(7, 5).unwrap();
        let code = CssCode::new(params, 2).unwrap();
        for adv in ["none", "pauli-injector", "reconstruction-garbage"] {
            let mut adversary = adversary_by_name(adv, 3).unwrap();
            let c = adversary.choose_corrupt(5, 1, Some(0));
            let players = PlayerSet::new(5, 1, c).unwrap();
            let honest: Vec<usize> = players.honest().iter().collect();
            let mut st = StabState::new(params.gf(), 0).unwrap();
            let mut rng = trial_rng(11, 0);
            let w = st.alloc().unwrap();
            st.apply(&GateOp::Fourier { r: Fe::ONE, w }, &mut rng).unwrap();
            st.apply(&GateOp::XShift { c: Fe::ONE, w }, &mut rng).unwrap();
            let mut log = Transcript::new();
            let mut ctx = Ctx {
                backend: &mut st,
                players: &players,
                adversary: adversary.as_mut(),
                coins: CoinSource::IDEAL,
                rng: &mut rng,
                log: &mut log,
            };
            let s = top_level_share(&mut ctx, &code, 0, TopInput::Wire(w), Claim::Generic, 2).unwrap();
            assert!(s.accepted);
            let real: Vec<usize> = honest.iter().map(|&i| s.wires[i]).collect();

            let mut ideal = StabState::new(params.gf(), 0).unwrap();
            let mut r2 = trial_rng(0, 0);
            let e = ideal.alloc_n(5).unwrap();
            ideal.apply(&GateOp::Fourier { r: Fe::ONE, w: e[0] }, &mut r2).unwrap();
            ideal.apply(&GateOp::XShift { c: Fe::ONE, w: e[0] }, &mut r2).unwrap();
            encode_on(&mut ideal, &code, &e, &mut r2).unwrap();
            let ideal_w: Vec<usize> = honest.iter().map(|&i| e[i]).collect();
            assert_eq!(st.reduced_stabilizers(&real), ideal.reduced_stabilizers(&ideal_w), "{adv}");
            if adv == "none" {
                let out = decode_clean(&mut st, &code, &s.wires, &mut rng).unwrap();
                let d = decode_clean(&mut ideal, &code, &e, &mut r2).unwrap();
                assert_eq!(st.reduced_stabilizers(&[out]), ideal.reduced_stabilizers(&[d]));
            }
        }
    }
}
