//! Round-based execution substrate shared by all protocols: player sets,
//! transcripts, accusation bookkeeping, public coins and the adversary
//! plug-in with enforced wire ownership.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, RngCore, SeedableRng};
use serde::Serialize;

use crate::backend::Backend;
use crate::circuit::GateOp;
use crate::error::{Error, Result};
use crate::field::{Fe, Gf};
use crate::pauli::PauliOp;
use crate::rng::{uniform, uniform_nonzero, TrialRng};
use crate::rs::{DecodeOutcome, DecodeStatus};
use crate::support::SupportSet;

/// Threshold regimes, tightest first.
#[derive(Copy, Clone, PartialEq, Eq, Debug, Serialize)]
pub enum Regime {
    /// `t < n/8`
    Eighth,
    /// `t < n/6`, needed for the computation protocol.
    Sixth,
    /// `t < n/4`, needed for sharing.
    Quarter,
}

impl Regime {
    pub fn holds(self, n: usize, t: usize) -> bool {
        let k = match self {
            Regime::Eighth => 8,
            Regime::Sixth => 6,
            Regime::Quarter => 4,
        };
        k * t < n
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct PlayerSet {
    pub n: usize,
    pub t: usize,
    pub cheaters: SupportSet,
}

impl PlayerSet {
    pub fn new(n: usize, t: usize, cheaters: SupportSet) -> Result<Self> {
        if n == 0 || n > 64 {
            return Err(Error::InvalidParams(alloc::format!("n={n} outside 1..=64")));
        }
        if cheaters.len() > t {
            return Err(Error::InvalidParams(alloc::format!(
                "{} cheaters exceed t={t}",
                cheaters.len()
            )));
        }
        if !cheaters.is_subset(SupportSet::full(n)) {
            return Err(Error::InvalidParams("cheater index out of range".into()));
        }
        Ok(PlayerSet { n, t, cheaters })
    }

    pub fn honest(&self) -> SupportSet {
        self.cheaters.complement(self.n)
    }

    pub fn is_cheater(&self, i: usize) -> bool {
        self.cheaters.contains(i)
    }

    /// Tightest regime `(n, t)` satisfies.
    pub fn regime(&self) -> Option<Regime> {
        [Regime::Eighth, Regime::Sixth, Regime::Quarter]
            .into_iter()
            .find(|r| r.holds(self.n, self.t))
    }

    pub fn require(&self, r: Regime) -> Result<()> {
        if r.holds(self.n, self.t) {
            Ok(())
        } else {
            Err(Error::InvalidParams(alloc::format!(
                "n={} t={} violates {r:?}",
                self.n,
                self.t
            )))
        }
    }
}

/// Which accusation set an update touched.
#[derive(Copy, Clone, PartialEq, Eq, Debug, Serialize)]
pub enum AccuseScope {
    Global,
    Branch(usize),
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum Event {
    Send {
        from: usize,
        to: usize,
        label: &'static str,
        qupits: usize,
    },
    Broadcast {
        from: usize,
        label: &'static str,
        values: Vec<Fe>,
    },
    Coin {
        label: &'static str,
        value: Fe,
        honest: bool,
    },
    Measure {
        player: usize,
        label: &'static str,
        outcome: Fe,
    },
    Accuse {
        scope: AccuseScope,
        added: SupportSet,
    },
    Disqualify {
        player: usize,
    },
    Verdict {
        label: &'static str,
        accepted: bool,
    },
    Note {
        label: &'static str,
        detail: String,
    },
}

/// Append-only log of one run.
#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize)]
pub struct Transcript {
    pub events: Vec<Event>,
}

impl Transcript {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, e: Event) {
        self.events.push(e);
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn count(&self, pred: impl Fn(&Event) -> bool) -> usize {
        self.events.iter().filter(|e| pred(e)).count()
    }
}

/// Cumulative apparent-cheater sets: `B` for the dealer and `B_i` per branch.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct AccusationState {
    pub b_global: SupportSet,
    pub b_branch: Vec<SupportSet>,
    pub disqualified: bool,
}

impl AccusationState {
    pub fn new(n: usize) -> Self {
        AccusationState {
            b_global: SupportSet::EMPTY,
            b_branch: vec![SupportSet::EMPTY; n],
            disqualified: false,
        }
    }

    /// Every set of `self` contains the matching set of `earlier`.
    pub fn extends(&self, earlier: &AccusationState) -> bool {
        earlier.b_global.is_subset(self.b_global)
            && earlier
                .b_branch
                .iter()
                .zip(&self.b_branch)
                .all(|(a, b)| a.is_subset(*b))
            && (!earlier.disqualified || self.disqualified)
    }

    /// `B ⊆ C` and `B_i ⊆ C` for honest `i`.
    pub fn only_cheaters_accused(&self, players: &PlayerSet) -> bool {
        self.b_global.is_subset(players.cheaters)
            && players
                .honest()
                .iter()
                .all(|i| self.b_branch[i].is_subset(players.cheaters))
    }

    fn add_global(&mut self, s: SupportSet, t: usize, log: &mut Transcript) {
        let added = s.difference(self.b_global);
        if !added.is_empty() {
            self.b_global = self.b_global.union(added);
            log.push(Event::Accuse {
                scope: AccuseScope::Global,
                added,
            });
        }
        if self.b_global.len() > t && !self.disqualified {
            self.disqualified = true;
        }
    }
}

/// Merges one verification round, branches in order `0..n`.
///
/// `branches[i]` is the decode of branch `i`'s broadcast word (with `B_i` as
/// erasures), `None` for branches already in `B`. `top` is the decode of the
/// branch values (with `B` as erasures), if the round has a top level.
pub fn update_accusations(
    state: &mut AccusationState,
    t: usize,
    branches: &[Option<DecodeOutcome>],
    top: Option<&DecodeOutcome>,
    log: &mut Transcript,
) {
    for (i, r) in branches.iter().enumerate() {
        let Some(r) = r else { continue };
        if state.b_global.contains(i) {
            continue;
        }
        match r.status {
            DecodeStatus::Decoded => {
                let added = r.error_support.difference(state.b_branch[i]);
                if !added.is_empty() {
                    state.b_branch[i] = state.b_branch[i].union(added);
                    log.push(Event::Accuse {
                        scope: AccuseScope::Branch(i),
                        added,
                    });
                }
                if state.b_branch[i].len() > t {
                    state.add_global(SupportSet::EMPTY.with(i), t, log);
                }
            }
            DecodeStatus::Detected => state.add_global(SupportSet::EMPTY.with(i), t, log),
        }
    }
    if let Some(top) = top {
        match top.status {
            DecodeStatus::Decoded => state.add_global(top.error_support, t, log),
            DecodeStatus::Detected => state.disqualified = true,
        }
    }
}

#[derive(Copy, Clone, PartialEq, Eq, Debug, Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoinMode {
    /// Uniform coins from an ideal classical VSS.
    IdealVss,
    /// Players take turns; cheaters choose their own blocks.
    TurnBased,
}

#[derive(Copy, Clone, PartialEq, Eq, Debug, Serialize)]
pub struct CoinSource {
    pub mode: CoinMode,
}

impl CoinSource {
    pub const IDEAL: CoinSource = CoinSource {
        mode: CoinMode::IdealVss,
    };
}

#[derive(Copy, Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Coin {
    pub value: Fe,
    pub honest: bool,
}

/// `count` public challenges. Turn-based coins are dealt in blocks of
/// `ceil(count / n)` per player in index order, so at most
/// `t * ceil(count / n)` come from cheaters.
pub fn public_coins(
    source: CoinSource,
    gf: &Gf,
    players: &PlayerSet,
    count: usize,
    adversary: &mut dyn Adversary,
    rng: &mut dyn RngCore,
) -> Vec<Coin> {
    match source.mode {
        CoinMode::IdealVss => (0..count)
            .map(|_| Coin {
                value: uniform(gf, rng),
                honest: true,
            })
            .collect(),
        CoinMode::TurnBased => {
            let block = count.div_ceil(players.n).max(1);
            let mut out = Vec::with_capacity(count);
            for player in 0..players.n {
                let want = block.min(count - out.len());
                if want == 0 {
                    break;
                }
                if players.is_cheater(player) {
                    let mut vals = adversary.coin_block(player, want, gf);
                    vals.resize(want, Fe::ZERO);
                    out.extend(vals.into_iter().map(|value| Coin {
                        value,
                        honest: false,
                    }));
                } else {
                    out.extend((0..want).map(|_| Coin {
                        value: uniform(gf, rng),
                        honest: true,
                    }));
                }
            }
            out
        }
    }
}

/// Draws coins and logs them.
pub fn draw_coins(
    source: CoinSource,
    gf: &Gf,
    players: &PlayerSet,
    count: usize,
    label: &'static str,
    adversary: &mut dyn Adversary,
    rng: &mut dyn RngCore,
    log: &mut Transcript,
) -> Vec<Fe> {
    public_coins(source, gf, players, count, adversary, rng)
        .into_iter()
        .map(|c| {
            log.push(Event::Coin {
                label,
                value: c.value,
                honest: c.honest,
            });
            c.value
        })
        .collect()
}

/// A backend restricted to the wires held by corrupted players.
pub struct WireView<'a> {
    backend: &'a mut dyn Backend,
    owned: &'a [usize],
}

impl<'a> WireView<'a> {
    pub fn new(backend: &'a mut dyn Backend, owned: &'a [usize]) -> Self {
        WireView { backend, owned }
    }

    pub fn owned(&self) -> &[usize] {
        self.owned
    }

    pub fn gf(&self) -> Gf {
        self.backend.gf()
    }

    pub fn basis_only(&self) -> bool {
        self.backend.basis_only()
    }

    fn check(&self, wires: &[usize]) -> Result<()> {
        match wires.iter().find(|w| !self.owned.contains(w)) {
            Some(&wire) => Err(Error::ContractViolation { wire }),
            None => Ok(()),
        }
    }

    pub fn apply(&mut self, g: &GateOp, rng: &mut dyn RngCore) -> Result<Option<Fe>> {
        self.check(&g.wires())?;
        self.backend.apply(g, rng)
    }

    pub fn apply_pauli(&mut self, wires: &[usize], e: &PauliOp, rng: &mut dyn RngCore) -> Result<()> {
        self.check(wires)?;
        self.backend.apply_pauli(wires, e, rng)
    }
}

/// How a corrupted dealer prepares its data.
#[derive(Copy, Clone, PartialEq, Eq, Debug, Serialize)]
pub enum DealerPlan {
    Honest,
    /// The data block is off the code at `distance` honest positions; with
    /// `guess_ahead` the ancillas are shifted so that the check passes
    /// exactly when the dealer's guessed coin comes up.
    Inconsistent { distance: usize, guess_ahead: bool },
}

/// Static adversary: corrupts a fixed set before the run and is consulted
/// at declared points only. Every quantum callback receives a [`WireView`]
/// limited to wires its players hold.
pub trait Adversary {
    fn name(&self) -> &str;

    fn choose_corrupt(&mut self, n: usize, t: usize, dealer: Option<usize>) -> SupportSet;

    fn dealer_plan(&mut self) -> DealerPlan {
        DealerPlan::Honest
    }

    /// The coin a guess-ahead dealer bets on.
    fn guess_coin(&mut self, gf: &Gf) -> Fe {
        let _ = gf;
        Fe::ZERO
    }

    /// After shares of some system reach corrupted players.
    fn on_deal(&mut self, stage: &'static str, view: &mut WireView) -> Result<()> {
        let _ = (stage, view);
        Ok(())
    }

    /// A corrupted player re-sharing `value` may replace the branch word.
    fn on_reshare(&mut self, player: usize, value: Fe, word: &mut [Fe], gf: &Gf) {
        let _ = (player, value, word, gf);
    }

    /// After a challenge was announced and applied.
    fn on_challenge(&mut self, coins: &[Fe], view: &mut WireView) -> Result<()> {
        let _ = (coins, view);
        Ok(())
    }

    /// The value a corrupted player announces instead of `expected`.
    fn on_broadcast(&mut self, player: usize, label: &'static str, expected: Fe, gf: &Gf) -> Fe {
        let _ = (player, label, gf);
        expected
    }

    /// Before corrupted players hand their shares to a receiver.
    fn on_reconstruct(&mut self, view: &mut WireView) -> Result<()> {
        let _ = view;
        Ok(())
    }

    /// Challenges a corrupted player contributes to turn-based coins.
    fn coin_block(&mut self, player: usize, count: usize, gf: &Gf) -> Vec<Fe> {
        let _ = (player, gf);
        vec![Fe::ZERO; count]
    }
}

/// Canned strategy names accepted by [`adversary_by_name`].
pub const CANNED: &[&str] = &[
    "none",
    "identity",
    "pauli-injector",
    "inconsistent-dealer",
    "guess-ahead",
    "guess-ahead-d1",
    "broadcast-liar",
    "reconstruction-garbage",
];

#[derive(Copy, Clone, PartialEq, Eq, Debug)]
enum Kind {
    None,
    Identity,
    PauliInjector,
    Inconsistent,
    GuessAhead(usize),
    Liar,
    Garbage,
}

/// One of the canned strategies with its own randomness.
pub struct Canned {
    kind: Kind,
    name: &'static str,
    rng: TrialRng,
}

/// Last `t` players other than the dealer.
fn tail_players(n: usize, t: usize, dealer: Option<usize>) -> SupportSet {
    (0..n).rev().filter(|&i| Some(i) != dealer).take(t).collect()
}

impl Adversary for Canned {
    fn name(&self) -> &str {
        self.name
    }

    fn choose_corrupt(&mut self, n: usize, t: usize, dealer: Option<usize>) -> SupportSet {
        match self.kind {
            Kind::None => SupportSet::EMPTY,
            Kind::Inconsistent | Kind::GuessAhead(_) => match dealer {
                Some(d) if t > 0 => SupportSet::EMPTY.with(d),
                // No designated dealer: the corrupted players cheat whenever they deal.
                _ => tail_players(n, t, None),
            },
            _ => tail_players(n, t, dealer),
        }
    }

    fn dealer_plan(&mut self) -> DealerPlan {
        match self.kind {
            Kind::Inconsistent => DealerPlan::Inconsistent {
                distance: 1,
                guess_ahead: false,
            },
            Kind::GuessAhead(distance) => DealerPlan::Inconsistent {
                distance,
                guess_ahead: true,
            },
            _ => DealerPlan::Honest,
        }
    }

    fn guess_coin(&mut self, gf: &Gf) -> Fe {
        uniform(gf, &mut self.rng)
    }

    fn on_deal(&mut self, _stage: &'static str, view: &mut WireView) -> Result<()> {
        if self.kind == Kind::PauliInjector {
            inject(view, &mut self.rng)?;
        }
        Ok(())
    }

    fn on_challenge(&mut self, _coins: &[Fe], view: &mut WireView) -> Result<()> {
        if self.kind == Kind::PauliInjector {
            inject(view, &mut self.rng)?;
        }
        Ok(())
    }

    fn on_broadcast(&mut self, _player: usize, label: &'static str, expected: Fe, gf: &Gf) -> Fe {
        let lie = match self.kind {
            Kind::Liar => true,
            Kind::PauliInjector => self.rng.gen_bool(0.5),
            Kind::Garbage => label == "reveal",
            _ => false,
        };
        if lie {
            gf.add(expected, uniform_nonzero(gf, &mut self.rng))
        } else {
            expected
        }
    }

    fn on_reconstruct(&mut self, view: &mut WireView) -> Result<()> {
        if self.kind != Kind::Garbage {
            return Ok(());
        }
        let gf = view.gf();
        let owned = view.owned().to_vec();
        for w in owned {
            view.apply(&GateOp::PrepZero { w }, &mut self.rng)?;
            let c = uniform(&gf, &mut self.rng);
            view.apply(&GateOp::XShift { c, w }, &mut self.rng)?;
            if !view.basis_only() && self.rng.gen_bool(0.5) {
                let r = uniform_nonzero(&gf, &mut self.rng);
                view.apply(&GateOp::Fourier { r, w }, &mut self.rng)?;
            }
        }
        Ok(())
    }

    fn coin_block(&mut self, _player: usize, count: usize, gf: &Gf) -> Vec<Fe> {
        (0..count).map(|_| uniform(gf, &mut self.rng)).collect()
    }
}

/// Uniformly random Pauli on every owned wire.
fn inject(view: &mut WireView, rng: &mut TrialRng) -> Result<()> {
    let gf = view.gf();
    let owned = view.owned().to_vec();
    let e = PauliOp::random(&gf, owned.len(), rng);
    view.apply_pauli(&owned, &e, rng)
}

/// Canned strategy by name, seeded independently of the protocol's stream.
pub fn adversary_by_name(name: &str, seed: u64) -> Option<Box<dyn Adversary>> {
    let (kind, name) = match name {
        "none" => (Kind::None, "none"),
        "identity" => (Kind::Identity, "identity"),
        "pauli-injector" => (Kind::PauliInjector, "pauli-injector"),
        "inconsistent-dealer" => (Kind::Inconsistent, "inconsistent-dealer"),
        "guess-ahead" => (Kind::GuessAhead(2), "guess-ahead"),
        "guess-ahead-d1" => (Kind::GuessAhead(1), "guess-ahead-d1"),
        "broadcast-liar" => (Kind::Liar, "broadcast-liar"),
        "reconstruction-garbage" => (Kind::Garbage, "reconstruction-garbage"),
        _ => return None,
    };
    Some(Box::new(Canned {
        kind,
        name,
        rng: TrialRng::seed_from_u64(seed ^ 0x5eed_adf0_0000_0000),
    }))
}
