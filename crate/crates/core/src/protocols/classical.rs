//! Classical two-level verifiable secret sharing with cut-and-choose
//! verification, and the `Recover` procedure for 2-good trees.

use alloc::vec;
use alloc::vec::Vec;

use rand::RngCore;
use serde::Serialize;

use super::verify_tree_word;
use crate::engine::{
    draw_coins, AccusationState, Adversary, CoinSource, DealerPlan, Event, PlayerSet, Transcript,
};
use crate::error::{Error, Result};
use crate::field::{Fe, FieldPoly};
use crate::rs::{rs_decode_within, rs_share, Codeword, RsCode};
use crate::support::SupportSet;

/// `leaves[i][j]`: the share of branch `i` held by player `j`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct ShareTree {
    pub leaves: Vec<Vec<Fe>>,
    pub acc: AccusationState,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassicalVssRun {
    /// The data tree as honest players hold it after sharing.
    pub tree: ShareTree,
    pub accepted: bool,
    /// Reconstructed value, when the dealer passed.
    pub output: Option<Fe>,
    pub transcript: Transcript,
}

/// Honest positions a cheating dealer corrupts: the last `distance`
/// players outside `C`.
pub(crate) fn honest_targets(players: &PlayerSet, distance: usize) -> Vec<usize> {
    let mut v: Vec<usize> = players.honest().iter().collect();
    let keep = v.len().saturating_sub(distance);
    v.split_off(keep)
}

/// Codeword plus a unit error at each target position.
fn off_code(code: &RsCode, secret: Fe, targets: &[usize], rng: &mut dyn RngCore) -> Result<Codeword> {
    let (mut w, _) = rs_share(code, secret, rng)?;
    for &i in targets {
        w[i] = code.params.add(w[i], Fe::ONE);
    }
    Ok(w)
}

/// Sharing, verification and (if the dealer passes) reconstruction.
///
/// `code` is `V^delta` with `n = 4t + 1`. Every cheating player's branch
/// words go through [`Adversary::on_reshare`], and every announced value
/// through [`Adversary::on_broadcast`].
pub fn classical_vss(
    code: &RsCode,
    secret: Fe,
    players: &PlayerSet,
    dealer: usize,
    adversary: &mut dyn Adversary,
    k: usize,
    coins: CoinSource,
    rng: &mut dyn RngCore,
) -> Result<ClassicalVssRun> {
    let gf = code.params.gf();
    let n = code.n();
    let t = players.t;
    let mut log = Transcript::new();

    // Dealer: v_0 shares the secret, v_1..v_k are masks.
    let plan = if players.is_cheater(dealer) {
        adversary.dealer_plan()
    } else {
        DealerPlan::Honest
    };
    let mut top: Vec<Codeword> = Vec::with_capacity(k + 1);
    match plan {
        DealerPlan::Honest => {
            for l in 0..=k {
                let s = if l == 0 { secret } else { crate::rng::uniform(&gf, rng) };
                top.push(rs_share(code, s, rng)?.0);
            }
        }
        DealerPlan::Inconsistent {
            distance,
            guess_ahead,
        } => {
            let targets = honest_targets(players, distance);
            let v0 = off_code(code, secret, &targets, rng)?;
            top.push(v0.clone());
            for _ in 1..=k {
                let (c, _) = rs_share(code, crate::rng::uniform(&gf, rng), rng)?;
                if guess_ahead {
                    // v_l = c - g v_0 turns v_l + b v_0 into a codeword iff b = g.
                    let g = adversary.guess_coin(&gf);
                    top.push(
                        c.iter()
                            .zip(&v0)
                            .map(|(&ci, &vi)| gf.sub(ci, gf.mul(g, vi)))
                            .collect(),
                    );
                } else {
                    top.push(c);
                }
            }
        }
    }
    for j in 0..n {
        log.push(Event::Send {
            from: dealer,
            to: j,
            label: "top",
            qupits: 0,
        });
    }

    // Resharing: trees[l][i][j] is player j's share of player i's word.
    let mut trees: Vec<Vec<Vec<Fe>>> = Vec::with_capacity(k + 1);
    for vl in &top {
        let mut branches = Vec::with_capacity(n);
        for (i, &value) in vl.iter().enumerate() {
            let (mut word, _) = rs_share(code, value, rng)?;
            if players.is_cheater(i) {
                adversary.on_reshare(i, value, &mut word, &gf);
            }
            branches.push(word);
        }
        trees.push(branches);
    }
    for i in 0..n {
        for j in 0..n {
            log.push(Event::Send {
                from: i,
                to: j,
                label: "reshare",
                qupits: 0,
            });
        }
    }

    // Verification.
    let mut acc = AccusationState::new(n);
    let b = draw_coins(coins, &gf, players, k, "challenge", adversary, rng, &mut log);
    for l in 1..=k {
        let mut word = vec![vec![Fe::ZERO; n]; n];
        for j in 0..n {
            let mut announced = Vec::with_capacity(n);
            for i in 0..n {
                let honest = gf.add(trees[l][i][j], gf.mul(b[l - 1], trees[0][i][j]));
                let v = if players.is_cheater(j) {
                    adversary.on_broadcast(j, "check", honest, &gf)
                } else {
                    honest
                };
                word[i][j] = v;
                announced.push(v);
            }
            log.push(Event::Broadcast {
                from: j,
                label: "check",
                values: announced,
            });
        }
        verify_tree_word(code, &word, &mut acc, t, false, dealer, &mut log)?;
        if acc.disqualified {
            break;
        }
    }
    let accepted = !acc.disqualified;
    log.push(Event::Verdict {
        label: "share",
        accepted,
    });
    let tree = ShareTree {
        leaves: trees.swap_remove(0),
        acc,
    };

    let output = if accepted {
        Some(reconstruct(code, &tree, players, adversary, &mut log)?)
    } else {
        None
    };
    Ok(ClassicalVssRun {
        tree,
        accepted,
        output,
        transcript: log,
    })
}

/// Reconstruction: every player announces its leaves, then [`recover`].
pub fn reconstruct(
    code: &RsCode,
    tree: &ShareTree,
    players: &PlayerSet,
    adversary: &mut dyn Adversary,
    log: &mut Transcript,
) -> Result<Fe> {
    let gf = code.params.gf();
    let n = code.n();
    let mut word = tree.leaves.clone();
    for j in 0..n {
        let mut announced = Vec::with_capacity(n);
        for (i, branch) in word.iter_mut().enumerate() {
            if players.is_cheater(j) {
                branch[j] = adversary.on_broadcast(j, "reveal", tree.leaves[i][j], &gf);
            }
            announced.push(branch[j]);
        }
        log.push(Event::Broadcast {
            from: j,
            label: "reveal",
            values: announced,
        });
    }
    recover(code, &word, &tree.acc, players.t)
}

/// Reconstructs the root of a broadcast tree `word[i][j]`.
///
/// Each branch `i` outside `B` is corrected within `t - |B_i|` errors on
/// the positions outside `B_i`; branches that fail are skipped. The first
/// `delta + 1` surviving branch values are interpolated at 0.
pub fn recover(code: &RsCode, word: &[Vec<Fe>], acc: &AccusationState, t: usize) -> Result<Fe> {
    let gf = code.params.gf();
    let params = code.params;
    let need = code.delta + 1;
    let mut pts: Vec<(Fe, Fe)> = Vec::with_capacity(need);
    for (i, branch) in word.iter().enumerate() {
        if pts.len() == need {
            break;
        }
        if acc.b_global.contains(i) || acc.b_branch[i].len() > t {
            continue;
        }
        let r = rs_decode_within(code, branch, acc.b_branch[i], t)?;
        if let Some(a) = r.secret {
            pts.push((params.point(i), a));
        }
    }
    if pts.len() < need {
        return Err(Error::RecoveryFailed { need });
    }
    crate::field::interpolate_at(&gf, &pts, Fe::ZERO)
}

/// Branch value fixed by the honest, unaccused leaves of branch `i`.
fn branch_value(code: &RsCode, tree: &ShareTree, i: usize, cheaters: SupportSet) -> Option<Fe> {
    let n = code.n();
    let pos: Vec<usize> = tree.acc.b_branch[i].union(cheaters).complement(n).to_vec();
    code.fit(&tree.leaves[i], &pos).map(|q: FieldPoly| q.coeff(0))
}

/// The 2-good predicate for `tree` with cheater set `players.cheaters`.
pub fn is_two_good(code: &RsCode, tree: &ShareTree, players: &PlayerSet) -> bool {
    let n = code.n();
    let c = players.cheaters;
    let acc = &tree.acc;
    if !players
        .honest()
        .iter()
        .all(|i| acc.b_branch[i].is_subset(c))
    {
        return false;
    }
    let mut values = vec![Fe::ZERO; n];
    for i in acc.b_global.complement(n).iter() {
        match branch_value(code, tree, i, c) {
            Some(a) => values[i] = a,
            None => return false,
        }
    }
    code.fit(&values, &acc.b_global.complement(n).to_vec()).is_some()
}

/// Root value of a 2-good tree, from the honest unaccused leaves.
pub fn tree_value(code: &RsCode, tree: &ShareTree, players: &PlayerSet) -> Option<Fe> {
    let n = code.n();
    let mut values = vec![Fe::ZERO; n];
    for i in tree.acc.b_global.complement(n).iter() {
        values[i] = branch_value(code, tree, i, players.cheaters)?;
    }
    code.fit(&values, &tree.acc.b_global.complement(n).to_vec())
        .map(|q| q.coeff(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::adversary_by_name;
    use crate::rng::trial_rng;
    use crate::FieldParams;

    fn setup() -> (RsCode, PlayerSet) {
        let code = RsCode::new(FieldParams::new(7, 5).unwrap(), 2, false).unwrap();
        (code, PlayerSet::new(5, 1, SupportSet::EMPTY).unwrap())
    }

    #[test]
    fn honest_run_reconstructs() {
        let (code, players) = setup();
        let mut adv = adversary_by_name("none", 0).unwrap();
        for s in 0..7 {
            let mut rng = trial_rng(3, s);
            let r = classical_vss(
                &code,
                code.params.elem(s as i64),
                &players,
                0,
                adv.as_mut(),
                4,
                CoinSource::IDEAL,
                &mut rng,
            )
            .unwrap();
            assert!(r.accepted);
            assert_eq!(r.output, Some(code.params.elem(s as i64)));
            assert!(is_two_good(&code, &r.tree, &players));
            assert_eq!(r.tree.acc, AccusationState::new(5));
        }
    }

    #[test]
    fn liar_only_lands_in_its_own_sets() {
        let (code, _) = setup();
        let players = PlayerSet::new(5, 1, SupportSet::EMPTY.with(4)).unwrap();
        let mut adv = adversary_by_name("broadcast-liar", 9).unwrap();
        for s in 0..20 {
            let mut rng = trial_rng(4, s);
            let r = classical_vss(&code, code.params.elem(2), &players, 0, adv.as_mut(), 3, CoinSource::IDEAL, &mut rng)
                .unwrap();
            assert!(r.accepted);
            assert_eq!(r.output, Some(code.params.elem(2)));
            assert!(r.tree.acc.only_cheaters_accused(&players));
            assert!(r.tree.acc.b_branch[0].contains(4));
        }
    }
}
