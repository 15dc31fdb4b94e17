//! Logical gates on blocks of `C^delta`, one component per player.

use alloc::vec::Vec;

use super::vqss::Ctx;
use crate::circuit::GateOp;
use crate::css::{encode_on, CssCode};
use crate::engine::Event;
use crate::error::{Error, Result};
use crate::field::Fe;
use crate::rs::rs_decode_within;
use crate::support::SupportSet;

/// Measures every component and collects the announced word; cheaters'
/// announcements go through [`crate::engine::Adversary::on_broadcast`].
fn measure_announce(ctx: &mut Ctx, wires: &[usize], label: &'static str) -> Result<Vec<Fe>> {
    let gf = ctx.backend.gf();
    let mut word = Vec::with_capacity(wires.len());
    for (i, &w) in wires.iter().enumerate() {
        let honest = ctx.backend.measure_and_free(w, ctx.rng)?;
        let v = if ctx.players.is_cheater(i) {
            ctx.adversary.on_broadcast(i, label, honest, &gf)
        } else {
            honest
        };
        ctx.log.push(Event::Broadcast {
            from: i,
            label,
            values: alloc::vec![v],
        });
        word.push(v);
    }
    Ok(word)
}

fn each(ctx: &mut Ctx, wires: &[usize], f: impl Fn(usize, usize) -> GateOp) -> Result<()> {
    for (i, &w) in wires.iter().enumerate() {
        ctx.backend.apply(&f(i, w), ctx.rng)?;
    }
    Ok(())
}

/// Transversal logical gates. `blocks[k]` is the block for logical wire `k`
/// of `gate`, which must be one of XShift, ZPhase, CAdd, Mul or Swap.
/// Logical `Z^c` is `Z^(c d_i)` on component `i`; it is a no-op on
/// basis-only backends.
pub fn transversal(ctx: &mut Ctx, code: &CssCode, gate: &GateOp, blocks: &[&[usize]]) -> Result<()> {
    let gf = code.gf();
    let d = code.scaling().to_vec();
    match *gate {
        GateOp::XShift { c, w } => each(ctx, blocks[w], |_, w| GateOp::XShift { c, w }),
        GateOp::ZPhase { c, w } => {
            if ctx.backend.basis_only() {
                return Ok(());
            }
            each(ctx, blocks[w], |i, w| GateOp::ZPhase { c: gf.mul(c, d[i]), w })
        }
        GateOp::Mul { c, w } => each(ctx, blocks[w], |_, w| GateOp::Mul { c, w }),
        GateOp::CAdd { scale, src, dst } => {
            let (s, t) = (blocks[src], blocks[dst]);
            each(ctx, s, |i, w| GateOp::CAdd { scale, src: w, dst: t[i] })
        }
        GateOp::Swap { a, b } => {
            let (x, y) = (blocks[a], blocks[b]);
            each(ctx, x, |i, w| GateOp::Swap { a: w, b: y[i] })
        }
        _ => Err(Error::UnsupportedGate {
            backend: "transversal",
            gate: gate.name(),
        }),
    }
}

/// Componentwise `F_(d_i)` (or its inverse): maps `E_delta(psi)` to
/// `E_delta'(F psi)` (inverse: `E_delta'(phi)` to `E_delta(F^-1 phi)`).
pub fn scaled_fourier(ctx: &mut Ctx, code: &CssCode, wires: &[usize], inverse: bool) -> Result<()> {
    let d = code.scaling().to_vec();
    each(ctx, wires, |i, w| {
        if inverse {
            GateOp::FourierInv { r: d[i], w }
        } else {
            GateOp::Fourier { r: d[i], w }
        }
    })
}

/// `C^delta -> C^delta'` on the same logical state. Returns the new block;
/// `wires` are consumed. A no-op on basis-only backends, where the two
/// codes share their basis-state support for the values we track.
pub fn degree_increase(ctx: &mut Ctx, code: &CssCode, wires: &[usize]) -> Result<Vec<usize>> {
    if ctx.backend.basis_only() {
        return Ok(wires.to_vec());
    }
    let n = code.n();
    let gf = code.gf();
    let dual = code.dual();
    let h2 = ctx.backend.alloc_n(n)?;
    encode_on(ctx.backend, &dual, &h2, ctx.rng)?;
    each(ctx, wires, |i, w| GateOp::CAdd {
        scale: Fe::ONE,
        src: w,
        dst: h2[i],
    })?;
    each(ctx, wires, |_, w| GateOp::Fourier { r: Fe::ONE, w })?;
    let word = measure_announce(ctx, wires, "degree")?;
    let r = rs_decode_within(&code.w_code, &word, SupportSet::EMPTY, ctx.players.t)?;
    let b = r.secret.ok_or(Error::RecoveryFailed { need: code.n() - ctx.players.t })?;
    let d = code.scaling().to_vec();
    each(ctx, &h2, |i, w| GateOp::ZPhase {
        c: gf.neg(gf.mul(b, d[i])),
        w,
    })?;
    Ok(h2)
}

/// `C^delta' -> C^delta` on the same logical state. Returns the new block.
///
/// Quantum backends conjugate [`degree_increase`] by componentwise Fourier
/// transforms. Basis-only backends teleport through a fresh `delta`-codeword.
pub fn degree_reduction(ctx: &mut Ctx, code: &CssCode, wires: &[usize]) -> Result<Vec<usize>> {
    if ctx.backend.basis_only() {
        let gf = code.gf();
        let n = code.n();
        let anc = ctx.backend.alloc_n(n)?;
        encode_on(ctx.backend, code, &anc, ctx.rng)?;
        let minus = gf.neg(Fe::ONE);
        each(ctx, &anc, |i, w| GateOp::CAdd {
            scale: minus,
            src: w,
            dst: wires[i],
        })?;
        let word = measure_announce(ctx, wires, "degree")?;
        let r = rs_decode_within(&code.dual().v_code, &word, SupportSet::EMPTY, ctx.players.t)?;
        let m = r.secret.ok_or(Error::RecoveryFailed { need: n - ctx.players.t })?;
        each(ctx, &anc, |_, w| GateOp::XShift { c: m, w })?;
        return Ok(anc);
    }
    scaled_fourier(ctx, code, wires, false)?;
    let out = degree_increase(ctx, code, wires)?;
    scaled_fourier(ctx, code, &out, true)?;
    Ok(out)
}

/// Logical Fourier transform (`inverse` for `F^-1`). Returns the new block.
pub fn fourier_gadget(ctx: &mut Ctx, code: &CssCode, wires: &[usize], inverse: bool) -> Result<Vec<usize>> {
    if inverse {
        // F^-1 = F^3 would cost three reductions; go through C^delta' instead.
        let up = degree_increase(ctx, code, wires)?;
        scaled_fourier(ctx, code, &up, true)?;
        return Ok(up);
    }
    scaled_fourier(ctx, code, wires, false)?;
    if code.delta() == code.delta_dual() {
        return Ok(wires.to_vec());
    }
    degree_reduction(ctx, code, wires)
}

/// Logical Toffoli `|a,b,c> -> |a,b,c+ab>`: the target is raised to
/// `C^delta'`, the gate is applied componentwise and the target is reduced.
/// Returns the new target block.
pub fn toffoli_gadget(ctx: &mut Ctx, code: &CssCode, a: &[usize], b: &[usize], c: &[usize]) -> Result<Vec<usize>> {
    let up = degree_increase(ctx, code, c)?;
    for i in 0..code.n() {
        ctx.backend.apply(
            &GateOp::Toffoli {
                a: a[i],
                b: b[i],
                c: up[i],
            },
            ctx.rng,
        )?;
    }
    degree_reduction(ctx, code, &up)
}

/// Logical computational-basis measurement: every component is measured
/// and broadcast, and the word is decoded in `V`. `None` when decoding
/// fails.
pub fn logical_measure(ctx: &mut Ctx, code: &CssCode, wires: &[usize]) -> Result<Option<Fe>> {
    let word = measure_announce(ctx, wires, "measure")?;
    Ok(rs_decode_within(&code.v_code, &word, SupportSet::EMPTY, ctx.players.t)?.secret)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::backend::Backend;
    use crate::css::decode_clean;
    use crate::engine::{adversary_by_name, CoinSource, PlayerSet, Transcript};
    use crate::rng::trial_rng;
    use crate::share::ShareState;
    use crate::stabilizer::StabState;
    use crate::FieldParams;

    /// Prepares `F^f X^x |0>` on a fresh wire, encodes it and returns the block.
    fn encoded(st: &mut dyn Backend, code: &CssCode, x: i64, f: bool, rng: &mut dyn rand::RngCore) -> Vec<usize> {
        let gf = code.gf();
        let w = st.alloc_n(code.n()).unwrap();
        st.apply(&GateOp::XShift { c: gf.elem(x), w: w[0] }, rng).unwrap();
        if f {
            st.apply(&GateOp::Fourier { r: Fe::ONE, w: w[0] }, rng).unwrap();
        }
        encode_on(st, code, &w, rng).unwrap();
        w
    }

    fn reference(gf: crate::field::Gf, gates: &[GateOp]) -> StabState {
        let mut st = StabState::new(gf, 1).unwrap();
        let mut rng = trial_rng(0, 0);
        for g in gates {
            st.apply(g, &mut rng).unwrap();
        }
        st
    }

    #[test]
    fn degree_change_and_fourier_preserve_logical_state() {
        let code = CssCode::new(FieldParams::new(11, 7).unwrap(), 2).unwrap();
        let gf = code.gf();
        let players = PlayerSet::new(7, 1, SupportSet::EMPTY).unwrap();
        let mut adv = adversary_by_name("none", 0).unwrap();
        for (x, f) in [(3, false), (2, true)] {
            let prep = {
                let mut v = alloc::vec![GateOp::XShift { c: gf.elem(x), w: 0 }];
                if f {
                    v.push(GateOp::Fourier { r: Fe::ONE, w: 0 });
                }
                v
            };
            for op in 0..3 {
                let mut st = StabState::new(gf, 0).unwrap();
                let mut rng = trial_rng(5, op);
                let mut log = Transcript::new();
                let mut ctx = Ctx {
                    backend: &mut st,
                    players: &players,
                    adversary: adv.as_mut(),
                    coins: CoinSource::IDEAL,
                    rng: &mut rng,
                    log: &mut log,
                };
                let w = encoded(ctx.backend, &code, x, f, ctx.rng);
                let mut expect = prep.clone();
                let (out, dec) = match op {
                    0 => (degree_increase(&mut ctx, &code, &w).unwrap(), code.dual()),
                    1 => {
                        let up = degree_increase(&mut ctx, &code, &w).unwrap();
                        (degree_reduction(&mut ctx, &code, &up).unwrap(), code.clone())
                    }
                    _ => {
                        expect.push(GateOp::Fourier { r: Fe::ONE, w: 0 });
                        (fourier_gadget(&mut ctx, &code, &w, false).unwrap(), code.clone())
                    }
                };
                let o = decode_clean(ctx.backend, &dec, &out, ctx.rng).unwrap();
                assert_eq!(
                    st.reduced_stabilizers(&[o]),
                    reference(gf, &expect).reduced_stabilizers(&[0]),
                    "x={x} f={f} op={op}"
                );
            }
        }
    }

    #[test]
    fn fourier_inverse_undoes_fourier() {
        let code = CssCode::new(FieldParams::new(11, 7).unwrap(), 2).unwrap();
        let gf = code.gf();
        let players = PlayerSet::new(7, 1, SupportSet::EMPTY).unwrap();
        let mut adv = adversary_by_name("none", 0).unwrap();
        let mut st = StabState::new(gf, 0).unwrap();
        let mut rng = trial_rng(6, 0);
        let mut log = Transcript::new();
        let mut ctx = Ctx {
            backend: &mut st,
            players: &players,
            adversary: adv.as_mut(),
            coins: CoinSource::IDEAL,
            rng: &mut rng,
            log: &mut log,
        };
        let w = encoded(ctx.backend, &code, 4, true, ctx.rng);
        let a = fourier_gadget(&mut ctx, &code, &w, false).unwrap();
        let b = fourier_gadget(&mut ctx, &code, &a, true).unwrap();
        let o = decode_clean(ctx.backend, &code, &b, ctx.rng).unwrap();
        let expect = [GateOp::XShift { c: gf.elem(4), w: 0 }, GateOp::Fourier { r: Fe::ONE, w: 0 }];
        assert_eq!(st.reduced_stabilizers(&[o]), reference(gf, &expect).reduced_stabilizers(&[0]));
    }

    #[test]
    fn toffoli_on_share_backend_with_liar() {
        let code = CssCode::new(FieldParams::new(11, 7).unwrap(), 2).unwrap();
        let gf = code.gf();
        let players = PlayerSet::new(7, 1, SupportSet::EMPTY.with(6)).unwrap();
        let mut adv = adversary_by_name("broadcast-liar", 1).unwrap();
        for (a, b, c) in [(0, 0, 0), (1, 1, 0), (3, 4, 5), (10, 10, 10), (7, 0, 2)] {
            let mut st = ShareState::new(gf, 0);
            let mut rng = trial_rng(7, a as u64);
            let mut log = Transcript::new();
            let mut ctx = Ctx {
                backend: &mut st,
                players: &players,
                adversary: adv.as_mut(),
                coins: CoinSource::IDEAL,
                rng: &mut rng,
                log: &mut log,
            };
            let wa = encoded(ctx.backend, &code, a, false, ctx.rng);
            let wb = encoded(ctx.backend, &code, b, false, ctx.rng);
            let wc = encoded(ctx.backend, &code, c, false, ctx.rng);
            let out = toffoli_gadget(&mut ctx, &code, &wa, &wb, &wc).unwrap();
            let m = logical_measure(&mut ctx, &code, &out).unwrap();
            assert_eq!(m, Some(gf.elem(c + a * b)));
        }
    }
}
