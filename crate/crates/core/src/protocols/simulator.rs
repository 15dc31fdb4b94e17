//! Simulator for VQSS: runs the real adversary against simulated honest
//! players and talks to the trusted party, extracting or swapping in the
//! dealer's qupit through honest leaves only.

use alloc::vec::Vec;

use serde::Serialize;

use super::vqss::{vqss_reconstruct, vqss_share_and_verify, Ctx, QTree, TopInput};
use crate::circuit::{Circuit, GateOp};
use crate::css::{interpolation_circuit, CssCode};
use crate::engine::AccusationState;
use crate::error::Result;
use crate::support::SupportSet;

/// Two-level interpolation of a tree into one ancilla, touching only the
/// leaves held by `honest` players. Undo with [`TreeExtraction::undo`].
pub struct TreeExtraction {
    pub anc: usize,
    branch_anc: Vec<usize>,
    branch_circ: Vec<(Circuit, Vec<usize>)>,
    top_circ: (Circuit, Vec<usize>),
}

impl TreeExtraction {
    /// Runs the interpolation backwards, restoring the tree with whatever
    /// `anc` now holds as its root, and frees the internal ancillas.
    pub fn undo(self, ctx: &mut Ctx) -> Result<()> {
        let (c, w) = &self.top_circ;
        ctx.backend.run(&c.inverse()?, w, ctx.rng)?;
        for (c, w) in self.branch_circ.iter().rev() {
            ctx.backend.run(&c.inverse()?, w, ctx.rng)?;
        }
        ctx.backend.free_all(&self.branch_anc, ctx.rng)?;
        ctx.backend.free(self.anc, ctx.rng)
    }
}

/// Extracts the root of `tree`. Branches in `acc.b_global` are left out of
/// the top-level interpolation.
pub fn tree_extract(ctx: &mut Ctx, code: &CssCode, tree: &QTree, acc: &AccusationState) -> Result<TreeExtraction> {
    let n = code.n();
    let honest = ctx.players.honest();
    let mut branch_anc = Vec::with_capacity(n);
    let mut branch_circ = Vec::with_capacity(n);
    for i in 0..n {
        let c = interpolation_circuit(code, honest)?;
        let anc = ctx.backend.alloc()?;
        let mut w = tree.branch(i).to_vec();
        w.push(anc);
        ctx.backend.run(&c, &w, ctx.rng)?;
        branch_anc.push(anc);
        branch_circ.push((c, w));
    }
    let usable: SupportSet = honest.intersection(acc.b_global.complement(n));
    let c = interpolation_circuit(code, usable)?;
    let anc = ctx.backend.alloc()?;
    let mut w = branch_anc.clone();
    w.push(anc);
    ctx.backend.run(&c, &w, ctx.rng)?;
    Ok(TreeExtraction {
        anc,
        branch_anc,
        branch_circ,
        top_circ: (c, w),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SimRun {
    pub accepted: bool,
    /// The receiver's qupit; `None` when the dealer was rejected.
    pub output: Option<usize>,
}

/// Ideal-model execution of share-then-reconstruct.
///
/// With an honest dealer `input` is the qupit the trusted party holds: the
/// simulator shares a dummy `|0>` with the adversary and swaps `input` into
/// the tree before reconstruction. With a cheating dealer `input` is the
/// adversary's own qupit: the real sharing runs, and if it passes the
/// simulator extracts the root and hands it to the trusted party, which
/// delivers it to an honest receiver; a cheating receiver gets the tree
/// back with the root swapped in and reconstructs with the adversary.
pub fn vqss_simulator(ctx: &mut Ctx, code: &CssCode, dealer: usize, receiver: usize, input: usize, k: usize) -> Result<SimRun> {
    if !ctx.players.is_cheater(dealer) {
        let dummy = ctx.backend.alloc()?;
        let s = vqss_share_and_verify(ctx, code, dealer, TopInput::Wire(dummy), k)?;
        let ext = tree_extract(ctx, code, &s.tree, &s.acc)?;
        ctx.backend.apply(&GateOp::Swap { a: ext.anc, b: input }, ctx.rng)?;
        let spent_dummy = input;
        ext.undo(ctx)?;
        ctx.backend.free(spent_dummy, ctx.rng)?;
        let mut acc = s.acc.clone();
        let out = vqss_reconstruct(ctx, code, &s.tree, &mut acc, receiver)?;
        return Ok(SimRun {
            accepted: s.accepted,
            output: Some(out),
        });
    }
    let s = vqss_share_and_verify(ctx, code, dealer, TopInput::Wire(input), k)?;
    if !s.accepted {
        ctx.backend.free_all(&s.tree.wires, ctx.rng)?;
        return Ok(SimRun {
            accepted: false,
            output: None,
        });
    }
    let ext = tree_extract(ctx, code, &s.tree, &s.acc)?;
    // The trusted party now holds the extracted root.
    let held = ctx.backend.alloc()?;
    ctx.backend.apply(&GateOp::Swap { a: ext.anc, b: held }, ctx.rng)?;
    if ctx.players.is_cheater(receiver) {
        ctx.backend.apply(&GateOp::Swap { a: ext.anc, b: held }, ctx.rng)?;
        ctx.backend.free(held, ctx.rng)?;
        ext.undo(ctx)?;
        let mut acc = s.acc.clone();
        let out = vqss_reconstruct(ctx, code, &s.tree, &mut acc, receiver)?;
        return Ok(SimRun {
            accepted: true,
            output: Some(out),
        });
    }
    ext.undo(ctx)?;
    ctx.backend.free_all(&s.tree.wires, ctx.rng)?;
    Ok(SimRun {
        accepted: true,
        output: Some(held),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::backend::Backend;
    use crate::engine::{adversary_by_name, CoinSource, PlayerSet, Transcript};
    use crate::field::Fe;
    use crate::rng::trial_rng;
    use crate::stabilizer::StabState;
    use crate::FieldParams;

    fn prep(st: &mut StabState, rng: &mut dyn rand::RngCore) -> usize {
        let w = st.alloc().unwrap();
        st.apply(&GateOp::Fourier { r: Fe::ONE, w }, rng).unwrap();
        st.apply(&GateOp::XShift { c: Fe::ONE, w }, rng).unwrap();
        w
    }

    #[test]
    fn simulated_output_matches_input() {
        let params = FieldParams::new(7, 5).unwrap();
        let code = CssCode::new(params, 2).unwrap();
        let mut reference = StabState::new(params.gf(), 0).unwrap();
        let r = prep(&mut reference, &mut trial_rng(0, 0));
        let expect = reference.reduced_stabilizers(&[r]);
        for (adv, dealer, receiver) in [
            ("none", 0, 1),
            ("pauli-injector", 0, 1),
            ("pauli-injector", 0, 4),
            ("inconsistent-dealer", 0, 2),
            ("inconsistent-dealer", 0, 0),
        ] {
            let mut adversary = adversary_by_name(adv, 5).unwrap();
            let players = PlayerSet::new(5, 1, adversary.choose_corrupt(5, 1, Some(dealer))).unwrap();
            let mut st = StabState::new(params.gf(), 0).unwrap();
            let mut rng = trial_rng(8, 0);
            let w = prep(&mut st, &mut rng);
            let mut log = Transcript::new();
            let mut ctx = Ctx {
                backend: &mut st,
                players: &players,
                adversary: adversary.as_mut(),
                coins: CoinSource::IDEAL,
                rng: &mut rng,
                log: &mut log,
            };
            let run = vqss_simulator(&mut ctx, &code, dealer, receiver, w, 2).unwrap();
            if !run.accepted {
                continue;
            }
            let out = run.output.unwrap();
            if adv == "pauli-injector" && players.is_cheater(receiver) {
                continue;
            }
            assert_eq!(st.reduced_stabilizers(&[out]), expect, "{adv} R={receiver}");
        }
    }
}
