//! Two-level verifiable quantum secret sharing: the dealer encodes, every
//! player re-encodes its component, and random public controlled
//! additions into sacrificial trees check both bases.

use alloc::vec;
use alloc::vec::Vec;

use rand::RngCore;
use serde::Serialize;

use super::classical::honest_targets;
use super::verify_tree_word;
use crate::backend::Backend;
use crate::circuit::GateOp;
use crate::css::{
    decode_clean, encode_on, find_correction, ideal_interpolation, interpolation_need,
    measure_syndrome, prepare_code_state, CssCode,
};
use crate::engine::{
    draw_coins, AccuseScope, AccusationState, Adversary, CoinSource, DealerPlan, Event, PlayerSet,
    Transcript, WireView,
};
use crate::error::{Error, Result};
use crate::field::Fe;
use crate::rs::RsCode;
use crate::support::SupportSet;

/// Everything a protocol run touches besides its own arguments.
pub struct Ctx<'a> {
    pub backend: &'a mut dyn Backend,
    pub players: &'a PlayerSet,
    pub adversary: &'a mut dyn Adversary,
    pub coins: CoinSource,
    pub rng: &'a mut dyn RngCore,
    pub log: &'a mut Transcript,
}

/// `n^2` wires; wire `i * n + j` is leaf `j` of branch `i`, held by player `j`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct QTree {
    pub n: usize,
    pub wires: Vec<usize>,
}

impl QTree {
    pub fn at(&self, i: usize, j: usize) -> usize {
        self.wires[i * self.n + j]
    }

    pub fn branch(&self, i: usize) -> &[usize] {
        &self.wires[i * self.n..(i + 1) * self.n]
    }

    /// Leaves held by the players in `set`.
    pub fn held_by(&self, set: SupportSet) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).flat_map(move |i| set.iter().map(move |j| self.at(i, j)))
    }
}

/// What the dealer puts at the top of a tree.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum TopInput {
    /// The qupit on this wire (consumed).
    Wire(usize),
    /// `|0>`.
    Zero,
    /// `sum_a |a>`.
    Plus,
}

/// What the dealer publicly claims about the shared data.
#[derive(Copy, Clone, PartialEq, Eq, Debug, Serialize)]
pub enum Claim {
    Generic,
    /// Every data tree holds `|0>`.
    Zero,
    /// Every data tree holds `sum_a |a>`.
    Plus,
}

#[derive(Clone, Debug, Serialize)]
pub struct VqssSharing {
    pub tree: QTree,
    pub acc: AccusationState,
    pub accepted: bool,
}

/// Planted error of a cheating dealer: top positions and a per-tree shift.
struct Plant {
    targets: Vec<usize>,
    guess_ahead: bool,
}

fn dealer_plant(ctx: &mut Ctx, dealer: usize) -> Option<Plant> {
    if !ctx.players.is_cheater(dealer) {
        return None;
    }
    match ctx.adversary.dealer_plan() {
        DealerPlan::Honest => None,
        DealerPlan::Inconsistent {
            distance,
            guess_ahead,
        } => Some(Plant {
            targets: honest_targets(ctx.players, distance),
            guess_ahead,
        }),
    }
}

/// Deals one tree: top-level encoding by the dealer (shifted by `shift` at
/// the planted positions), then a second-level encoding by every player.
pub fn deal_tree(
    ctx: &mut Ctx,
    code: &CssCode,
    dealer: usize,
    input: TopInput,
    shift: Option<(&[usize], Fe)>,
) -> Result<QTree> {
    let n = code.n();
    let top = match input {
        TopInput::Wire(w) => {
            let mut top = vec![w];
            top.extend(ctx.backend.alloc_n(n - 1)?);
            encode_on(ctx.backend, code, &top, ctx.rng)?;
            top
        }
        TopInput::Zero => {
            let top = ctx.backend.alloc_n(n)?;
            encode_on(ctx.backend, code, &top, ctx.rng)?;
            top
        }
        TopInput::Plus => {
            let top = ctx.backend.alloc_n(n)?;
            prepare_code_state(ctx.backend, &code.v_code, &top, ctx.rng)?;
            top
        }
    };
    if let Some((targets, c)) = shift {
        for &i in targets {
            if !c.is_zero() {
                ctx.backend.apply(&GateOp::XShift { c, w: top[i] }, ctx.rng)?;
            }
        }
    }
    for i in 0..n {
        ctx.log.push(Event::Send {
            from: dealer,
            to: i,
            label: "component",
            qupits: 1,
        });
    }
    let cheaters = ctx.players.cheaters;
    let owned: Vec<usize> = cheaters.iter().map(|i| top[i]).collect();
    ctx.adversary.on_deal("branch", &mut WireView::new(&mut *ctx.backend, &owned))?;

    let mut wires = vec![0usize; n * n];
    for i in 0..n {
        let mut b = vec![top[i]];
        b.extend(ctx.backend.alloc_n(n - 1)?);
        encode_on(ctx.backend, code, &b, ctx.rng)?;
        wires[i * n..(i + 1) * n].copy_from_slice(&b);
    }
    let tree = QTree { n, wires };
    let owned: Vec<usize> = cheaters.iter().flat_map(|i| tree.branch(i).to_vec()).collect();
    ctx.adversary.on_deal("reshare", &mut WireView::new(&mut *ctx.backend, &owned))?;
    for i in 0..n {
        for j in 0..n {
            ctx.log.push(Event::Send {
                from: i,
                to: j,
                label: "leaf",
                qupits: 1,
            });
        }
    }
    let owned: Vec<usize> = tree.held_by(cheaters).collect();
    ctx.adversary.on_deal("leaves", &mut WireView::new(&mut *ctx.backend, &owned))?;
    Ok(tree)
}

/// One challenge: `anc += sum c * target` leafwise, then every player
/// measures and announces its leaves of `anc`, and the announced tree is
/// decoded with `check` at both levels. `live` lists every tree still in
/// play, for the adversary's view.
#[allow(clippy::too_many_arguments)]
pub fn check_round(
    ctx: &mut Ctx,
    check: &RsCode,
    targets: &[(&QTree, Fe)],
    anc: &QTree,
    live: &[&QTree],
    coins: &[Fe],
    acc: &mut AccusationState,
    require_zero: bool,
    dealer: usize,
) -> Result<()> {
    let n = anc.n;
    let gf = ctx.backend.gf();
    for &(tree, c) in targets {
        if c.is_zero() {
            continue;
        }
        for (&src, &dst) in tree.wires.iter().zip(&anc.wires) {
            ctx.backend.apply(&GateOp::CAdd { scale: c, src, dst }, ctx.rng)?;
        }
    }
    let cheaters = ctx.players.cheaters;
    let owned: Vec<usize> = live
        .iter()
        .chain(core::iter::once(&anc))
        .flat_map(|t| t.held_by(cheaters).collect::<Vec<_>>())
        .collect();
    ctx.adversary.on_challenge(coins, &mut WireView::new(&mut *ctx.backend, &owned))?;

    let mut word = vec![vec![Fe::ZERO; n]; n];
    for j in 0..n {
        let mut announced = Vec::with_capacity(n);
        for (i, row) in word.iter_mut().enumerate() {
            let honest = ctx.backend.measure_and_free(anc.at(i, j), ctx.rng)?;
            let v = if cheaters.contains(j) {
                ctx.adversary.on_broadcast(j, "check", honest, &gf)
            } else {
                honest
            };
            row[j] = v;
            announced.push(v);
        }
        ctx.log.push(Event::Broadcast {
            from: j,
            label: "check",
            values: announced,
        });
    }
    verify_tree_word(check, &word, acc, ctx.players.t, require_zero, dealer, ctx.log)?;
    Ok(())
}

fn rotate(ctx: &mut Ctx, trees: &[&QTree], inverse: bool) -> Result<()> {
    for t in trees {
        for &w in &t.wires {
            let g = if inverse {
                GateOp::FourierInv { r: Fe::ONE, w }
            } else {
                GateOp::Fourier { r: Fe::ONE, w }
            };
            ctx.backend.apply(&g, ctx.rng)?;
        }
    }
    Ok(())
}

fn free_tree(ctx: &mut Ctx, t: &QTree) -> Result<()> {
    ctx.backend.free_all(&t.wires, ctx.rng)
}

/// Sharing phase with `(k+1)^2` trees. `S_{0,0}` holds the data, `S_{0,m}`
/// hold `sum_a |a>` and the other `S_{l,m}` hold `|0>`. Every `S_{l,0}` is
/// checked in the computational basis against the `S_{l,m}`, then all
/// shares are rotated and `S_{0,0}` is checked in the Fourier basis
/// against the `S_{l,0}`. Basis-only backends skip the Fourier half.
pub fn vqss_share_and_verify(
    ctx: &mut Ctx,
    code: &CssCode,
    dealer: usize,
    input: TopInput,
    k: usize,
) -> Result<VqssSharing> {
    let n = code.n();
    let gf = code.gf();
    let plant = dealer_plant(ctx, dealer);
    let mut trees: Vec<Vec<QTree>> = Vec::with_capacity(k + 1);
    for l in 0..=k {
        let mut row = Vec::with_capacity(k + 1);
        for m in 0..=k {
            let what = match (l, m) {
                (0, 0) => input,
                (0, _) => TopInput::Plus,
                _ => TopInput::Zero,
            };
            let shift = match &plant {
                Some(p) if l == 0 && m == 0 => Some((p.targets.as_slice(), Fe::ONE)),
                Some(p) if l == 0 && p.guess_ahead => {
                    let g = ctx.adversary.guess_coin(&gf);
                    Some((p.targets.as_slice(), gf.neg(g)))
                }
                _ => None,
            };
            row.push(deal_tree(ctx, code, dealer, what, shift)?);
        }
        trees.push(row);
    }

    let mut consumed = vec![vec![false; k + 1]; k + 1];
    let mut acc = AccusationState::new(n);
    let b = draw_coins(ctx.coins, &gf, ctx.players, k, "computational", ctx.adversary, ctx.rng, ctx.log);
    'comp: for l in 0..=k {
        for m in 1..=k {
            let live: Vec<&QTree> = trees
                .iter()
                .enumerate()
                .flat_map(|(ll, row)| {
                    row.iter()
                        .enumerate()
                        .filter(move |&(mm, _)| mm == 0 || ll > l || (ll == l && mm > m))
                        .map(|(_, t)| t)
                })
                .collect();
            check_round(
                ctx,
                &code.v_code,
                &[(&trees[l][0], b[m - 1])],
                &trees[l][m],
                &live,
                &b,
                &mut acc,
                false,
                dealer,
            )?;
            consumed[l][m] = true;
            if acc.disqualified {
                break 'comp;
            }
        }
    }
    if !acc.disqualified && !ctx.backend.basis_only() {
        let firsts: Vec<&QTree> = trees.iter().map(|row| &row[0]).collect();
        rotate(ctx, &firsts, false)?;
        let b2 = draw_coins(ctx.coins, &gf, ctx.players, k, "fourier", ctx.adversary, ctx.rng, ctx.log);
        for l in 1..=k {
            let live: Vec<&QTree> = core::iter::once(&trees[0][0])
                .chain(trees[l + 1..].iter().map(|row| &row[0]))
                .collect();
            check_round(
                ctx,
                &code.w_code,
                &[(&trees[0][0], b2[l - 1])],
                &trees[l][0],
                &live,
                &b2,
                &mut acc,
                false,
                dealer,
            )?;
            consumed[l][0] = true;
            if acc.disqualified {
                break;
            }
        }
        rotate(ctx, &[&trees[0][0]], true)?;
    }
    let accepted = !acc.disqualified;
    ctx.log.push(Event::Verdict {
        label: "vqss-share",
        accepted,
    });
    for (l, row) in trees.iter().enumerate() {
        for (m, t) in row.iter().enumerate() {
            if (l, m) != (0, 0) && !consumed[l][m] {
                free_tree(ctx, t)?;
            }
        }
    }
    let data = trees.swap_remove(0).swap_remove(0);
    Ok(VqssSharing {
        tree: data,
        acc,
        accepted,
    })
}

/// Shares several trees from one dealer and verifies them together with
/// `2k` ancilla trees: `A_m` (`|0>`, or `sum_a |a>` for plus claims) take
/// the Fourier-basis challenges, `B_m` (`sum_a |a>`, or `|0>` for zero
/// claims) the computational ones. Accusations accumulate in `acc`.
pub fn vqss_share_batched(
    ctx: &mut Ctx,
    code: &CssCode,
    dealer: usize,
    inputs: &[TopInput],
    claim: Claim,
    k: usize,
    acc: &mut AccusationState,
) -> Result<Vec<QTree>> {
    let gf = code.gf();
    let plant = dealer_plant(ctx, dealer);
    let mut data = Vec::with_capacity(inputs.len());
    for (x, &inp) in inputs.iter().enumerate() {
        let shift = match &plant {
            Some(p) if x == 0 => Some((p.targets.as_slice(), Fe::ONE)),
            _ => None,
        };
        data.push(deal_tree(ctx, code, dealer, inp, shift)?);
    }
    let a_kind = if claim == Claim::Plus { TopInput::Plus } else { TopInput::Zero };
    let b_kind = if claim == Claim::Zero { TopInput::Zero } else { TopInput::Plus };
    let mut a_trees = Vec::with_capacity(k);
    for _ in 0..k {
        a_trees.push(deal_tree(ctx, code, dealer, a_kind, None)?);
    }
    let mut b_trees = Vec::with_capacity(k);
    for _ in 0..k {
        let shift = match &plant {
            Some(p) if p.guess_ahead => {
                let g = ctx.adversary.guess_coin(&gf);
                Some((p.targets.as_slice(), gf.neg(g)))
            }
            _ => None,
        };
        b_trees.push(deal_tree(ctx, code, dealer, b_kind, shift)?);
    }

    // Computational basis: B_m += sum of coins times (data and A trees).
    let width = data.len() + k;
    let b = draw_coins(ctx.coins, &gf, ctx.players, k * width, "computational", ctx.adversary, ctx.rng, ctx.log);
    let mut done = 0;
    for m in 0..k {
        if acc.disqualified {
            break;
        }
        let coeffs = &b[m * width..(m + 1) * width];
        let targets: Vec<(&QTree, Fe)> = data
            .iter()
            .chain(&a_trees)
            .zip(coeffs.iter().copied())
            .collect();
        let live: Vec<&QTree> = data.iter().chain(&a_trees).chain(&b_trees[m + 1..]).collect();
        check_round(ctx, &code.v_code, &targets, &b_trees[m], &live, coeffs, acc, claim == Claim::Zero, dealer)?;
        done = m + 1;
    }
    let mut a_done = 0;
    if !acc.disqualified && !ctx.backend.basis_only() {
        let all: Vec<&QTree> = data.iter().chain(&a_trees).collect();
        rotate(ctx, &all, false)?;
        let w = data.len();
        let b2 = draw_coins(ctx.coins, &gf, ctx.players, k * w, "fourier", ctx.adversary, ctx.rng, ctx.log);
        for m in 0..k {
            if acc.disqualified {
                break;
            }
            let coeffs = &b2[m * w..(m + 1) * w];
            let targets: Vec<(&QTree, Fe)> = data.iter().zip(coeffs.iter().copied()).collect();
            let live: Vec<&QTree> = data.iter().chain(&a_trees[m + 1..]).collect();
            check_round(ctx, &code.w_code, &targets, &a_trees[m], &live, coeffs, acc, claim == Claim::Plus, dealer)?;
            a_done = m + 1;
        }
        let d: Vec<&QTree> = data.iter().collect();
        rotate(ctx, &d, true)?;
        // Unused A trees are still rotated; discard them.
        for t in &a_trees[a_done..] {
            free_tree(ctx, t)?;
        }
    } else {
        for t in &a_trees {
            free_tree(ctx, t)?;
        }
    }
    for t in &b_trees[done..] {
        free_tree(ctx, t)?;
    }
    ctx.log.push(Event::Verdict {
        label: "vqss-batch",
        accepted: !acc.disqualified,
    });
    Ok(data)
}

/// Known-state sharing: one tree holding `|0>` or `sum_a |a>`, with the
/// public check that the top-level value is 0 in the matching basis.
pub fn share_known_state(
    ctx: &mut Ctx,
    code: &CssCode,
    dealer: usize,
    which: Claim,
    k: usize,
) -> Result<VqssSharing> {
    let input = match which {
        Claim::Plus => TopInput::Plus,
        _ => TopInput::Zero,
    };
    share_known_with(ctx, code, dealer, input, which, k)
}

/// As [`share_known_state`] but with an arbitrary actual input, so a
/// lying dealer can be modelled.
pub fn share_known_with(
    ctx: &mut Ctx,
    code: &CssCode,
    dealer: usize,
    input: TopInput,
    claim: Claim,
    k: usize,
) -> Result<VqssSharing> {
    let mut acc = AccusationState::new(code.n());
    let mut trees = vqss_share_batched(ctx, code, dealer, &[input], claim, k, &mut acc)?;
    let accepted = !acc.disqualified;
    Ok(VqssSharing {
        tree: trees.remove(0),
        acc,
        accepted,
    })
}

/// Reconstruction towards `receiver`: each branch outside `B` is corrected
/// against the smallest `B~_i ⊇ B_i` with `|B~_i| <= t` that explains its
/// syndrome (or joins `B`), decoded, and the branch values are
/// interpolated from positions outside `B`. Returns the output wire.
pub fn vqss_reconstruct(
    ctx: &mut Ctx,
    code: &CssCode,
    tree: &QTree,
    acc: &mut AccusationState,
    receiver: usize,
) -> Result<usize> {
    let n = code.n();
    let t = ctx.players.t;
    let owned: Vec<usize> = tree.held_by(ctx.players.cheaters).collect();
    ctx.adversary.on_reconstruct(&mut WireView::new(&mut *ctx.backend, &owned))?;
    for j in 0..n {
        ctx.log.push(Event::Send {
            from: j,
            to: receiver,
            label: "reconstruct",
            qupits: n,
        });
    }
    let mut top = vec![0usize; n];
    let mut spent: Vec<usize> = Vec::new();
    for (i, slot) in top.iter_mut().enumerate() {
        let wires = tree.branch(i);
        if acc.b_global.contains(i) {
            *slot = wires[0];
            spent.extend_from_slice(&wires[1..]);
            continue;
        }
        let syn = measure_syndrome(ctx.backend, code, wires, ctx.rng)?;
        match find_correction(code, &syn, acc.b_branch[i], t) {
            Some((_, e)) => {
                ctx.backend.apply_pauli(wires, &e.inverse(&code.gf()), ctx.rng)?;
                *slot = decode_clean(ctx.backend, code, wires, ctx.rng)?;
            }
            None => {
                acc.b_global.insert(i);
                ctx.log.push(Event::Accuse {
                    scope: AccuseScope::Global,
                    added: SupportSet::EMPTY.with(i),
                });
                *slot = wires[0];
                spent.extend_from_slice(&wires[1..]);
            }
        }
    }
    let usable = acc.b_global.complement(n);
    if usable.len() < interpolation_need(code) {
        return Err(Error::InsufficientShares {
            need: interpolation_need(code),
            have: usable.len(),
        });
    }
    let out = ideal_interpolation(ctx.backend, code, &top, usable, ctx.rng)?;
    spent.extend_from_slice(&top);
    ctx.backend.free_all(&spent, ctx.rng)?;
    Ok(out)
}
