//! Sharing, verification, reconstruction and computation protocols, with
//! their trusted-party references.

use alloc::vec;
use alloc::vec::Vec;

use crate::engine::{update_accusations, AccusationState, Event, Transcript};
use crate::error::Result;
use crate::field::Fe;
use crate::rs::{rs_decode_within, DecodeOutcome, DecodeStatus, RsCode};

pub mod classical;
pub mod gadgets;
pub mod ideal;
pub mod mpqc;
pub mod simulator;
pub mod subspace;
pub mod toplevel;
pub mod vqss;

pub use classical::{classical_vss, is_two_good, recover, ClassicalVssRun, ShareTree};
pub use subspace::{dual_subspace_projection, subspace_projection, SpOutcome};

/// Outcome of checking one broadcast tree: the branch values that decoded
/// and the top-level decode, if it ran.
#[derive(Clone, Debug)]
pub struct TreeCheck {
    pub top: Option<DecodeOutcome>,
}

/// Decodes a broadcast tree `word[i][j]` (branch `i`, player `j`) with
/// `code` at both levels and merges the result into `acc`.
///
/// Branch `i` is decoded with `B_i` as erasures, the vector of branch
/// values with `B` as erasures, both at radius `t`. With `require_zero` a
/// top-level value other than 0 disqualifies the dealer.
pub fn verify_tree_word(
    code: &RsCode,
    word: &[Vec<Fe>],
    acc: &mut AccusationState,
    t: usize,
    require_zero: bool,
    dealer: usize,
    log: &mut Transcript,
) -> Result<TreeCheck> {
    let n = code.n();
    let was = acc.disqualified;
    let mut branches: Vec<Option<DecodeOutcome>> = vec![None; n];
    for (i, slot) in branches.iter_mut().enumerate() {
        if acc.b_global.contains(i) || acc.b_branch[i].len() > t {
            continue;
        }
        *slot = Some(rs_decode_within(code, &word[i], acc.b_branch[i], t)?);
    }
    update_accusations(acc, t, &branches, None, log);
    let mut out = TreeCheck { top: None };
    if !acc.disqualified {
        let values: Vec<Fe> = (0..n)
            .map(|i| match &branches[i] {
                Some(r) if !acc.b_global.contains(i) => r.secret.unwrap_or(Fe::ZERO),
                _ => Fe::ZERO,
            })
            .collect();
        let top = rs_decode_within(code, &values, acc.b_global, t)?;
        update_accusations(acc, t, &[], Some(&top), log);
        if require_zero && top.status == DecodeStatus::Decoded && top.secret != Some(Fe::ZERO) {
            acc.disqualified = true;
        }
        out.top = Some(top);
    }
    if acc.disqualified && !was {
        log.push(Event::Disqualify { player: dealer });
    }
    Ok(out)
}
