//! End-to-end acceptance run: one PASS/FAIL line per criterion.
//!
//! `cargo test -p vqss --test acceptance -- --nocapture` shows the lines.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vqss::config::{ExperimentConfig, Settings};
use vqss::experiments::{q2c_experiment, soundness_sweep, toffoli_circuit};
use vqss::xval::cross_validate;
use vqss_core::backend::Backend;
use vqss_core::circuit::GateOp;
use vqss_core::css::{decode_clean, encode_on, CssCode};
use vqss_core::engine::{adversary_by_name, AccusationState, CoinSource, PlayerSet, Transcript};
use vqss_core::pauli::PauliOp;
use vqss_core::protocols::classical::tree_value;
use vqss_core::protocols::gadgets::{degree_reduction, logical_measure, scaled_fourier, toffoli_gadget, transversal};
use vqss_core::protocols::mpqc::mpqc_run;
use vqss_core::protocols::vqss::{vqss_reconstruct, vqss_share_and_verify, Ctx, TopInput};
use vqss_core::protocols::{is_two_good, recover, ShareTree};
use vqss_core::rng::trial_rng;
use vqss_core::rs::{rs_decode, rs_detect, rs_share, DecodeStatus, RsCode};
use vqss_core::share::ShareState;
use vqss_core::stabilizer::StabState;
use vqss_core::{Fe, FieldParams, FieldPoly, Gf, SupportSet};

struct Verdict {
    ok: bool,
    detail: String,
}

fn verdict(ok: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        ok,
        detail: detail.into(),
    }
}

fn config(pairs: &[(&str, &str)]) -> ExperimentConfig {
    let mut s = Settings::default();
    for (k, v) in pairs {
        s.set(k, *v);
    }
    ExperimentConfig::from_settings(&s).unwrap()
}

/// All `p^3` codewords of the degree-2 code at n=5, p=7 with their secrets.
fn all_codewords(code: &RsCode) -> Vec<(Vec<Fe>, Fe)> {
    let fp = code.params;
    (0..343u32)
        .map(|c| {
            let q = FieldPoly::from_u32(&fp, &[c % 7, c / 7 % 7, c / 49]);
            (code.encode_poly(&q), q.coeff(0))
        })
        .collect()
}

fn codec_oracle() -> Verdict {
    let fp = FieldParams::new(7, 5).unwrap();
    let code = RsCode::new(fp, 2, false).unwrap();
    let mut single_bad = 0;
    let mut single = 0;
    let (mut pairs, mut flagged, mut miscorrected) = (0, 0, 0);
    for (cw, s) in all_codewords(&code) {
        for i in 0..5 {
            for e in 1..7 {
                let mut w = cw.clone();
                w[i] = fp.add(w[i], fp.elem(e));
                let r = rs_decode(&code, &w, SupportSet::EMPTY).unwrap();
                single += 1;
                if r.codeword.as_ref() != Some(&cw) || r.secret != Some(s) || r.error_support.to_vec() != vec![i] {
                    single_bad += 1;
                }
                for j in i + 1..5 {
                    for f in 1..7 {
                        let mut w2 = w.clone();
                        w2[j] = fp.add(w2[j], fp.elem(f));
                        pairs += 1;
                        if !rs_detect(&code, &w2) {
                            flagged += 1;
                        }
                        let r = rs_decode(&code, &w2, SupportSet::EMPTY).unwrap();
                        if r.status == DecodeStatus::Decoded {
                            miscorrected += 1;
                        }
                    }
                }
            }
        }
    }
    verdict(
        single_bad == 0 && flagged == pairs,
        format!(
            "{single} weight-1 errors corrected ({single_bad} wrong); {flagged}/{pairs} weight-2 errors detected by the syndrome \
             (the correcting decoder maps {miscorrected} of them to a neighbouring codeword)"
        ),
    )
}

fn erasures() -> Verdict {
    let fp = FieldParams::new(7, 5).unwrap();
    let code = RsCode::new(fp, 2, false).unwrap();
    let (mut runs, mut bad) = (0, 0);
    for (cw, s) in all_codewords(&code) {
        for i in 0..5 {
            for j in i + 1..5 {
                let er: SupportSet = [i, j].into_iter().collect();
                for g in 0..49 {
                    let mut w = cw.clone();
                    w[i] = fp.elem(g % 7);
                    w[j] = fp.elem(g / 7);
                    runs += 1;
                    match rs_decode(&code, &w, er) {
                        Ok(r) if r.secret == Some(s) && r.codeword.as_ref() == Some(&cw) => {}
                        _ => bad += 1,
                    }
                }
            }
        }
    }
    verdict(bad == 0, format!("{runs} erased words over 10 patterns, {bad} wrong"))
}

fn backends_agree() -> Verdict {
    let r = cross_validate(100, 100_000, 1).unwrap();
    verdict(
        r.passed,
        format!("100 circuits: min fidelity {:.12}, max TV {:.4}", r.min_fidelity, r.max_tv),
    )
}

/// Encodes `F^f X^x |0>` on a fresh block.
fn encoded(b: &mut dyn Backend, code: &CssCode, x: i64, f: bool, rng: &mut dyn rand::RngCore) -> Vec<usize> {
    let gf = code.gf();
    let w = b.alloc_n(code.n()).unwrap();
    b.apply(&GateOp::XShift { c: gf.elem(x), w: w[0] }, rng).unwrap();
    if f {
        b.apply(&GateOp::Fourier { r: Fe::ONE, w: w[0] }, rng).unwrap();
    }
    encode_on(b, code, &w, rng).unwrap();
    w
}

fn prep_gates(inputs: &[(i64, bool)], gf: &Gf) -> Vec<GateOp> {
    let mut g = Vec::new();
    for (w, &(x, f)) in inputs.iter().enumerate() {
        g.push(GateOp::XShift { c: gf.elem(x), w });
        if f {
            g.push(GateOp::Fourier { r: Fe::ONE, w });
        }
    }
    g
}

#[derive(Clone, Copy, Debug)]
enum Gadget {
    X,
    Z,
    Mul,
    CAdd,
    Swap,
    ScaledFourier,
    DegreeReduction,
}

/// Runs one gadget on encoded inputs and compares the decoded logical
/// state with the bare gate applied to the bare inputs.
fn gadget_matches(code: &CssCode, g: Gadget, input: (i64, bool), seed: u64) -> bool {
    let gf = code.gf();
    let n = code.n();
    let players = PlayerSet::new(n, 1, SupportSet::EMPTY).unwrap();
    let mut adv = adversary_by_name("none", 0).unwrap();
    let two = matches!(g, Gadget::CAdd | Gadget::Swap);
    let inputs: Vec<(i64, bool)> = if two { vec![input, (1, false)] } else { vec![input] };
    let (enc, dec) = match g {
        Gadget::ScaledFourier => (code.clone(), code.dual()),
        Gadget::DegreeReduction => (code.dual(), code.clone()),
        _ => (code.clone(), code.clone()),
    };
    let c = gf.elem(3);
    let gate = match g {
        Gadget::X => Some(GateOp::XShift { c, w: 0 }),
        Gadget::Z => Some(GateOp::ZPhase { c, w: 0 }),
        Gadget::Mul => Some(GateOp::Mul { c, w: 0 }),
        Gadget::CAdd => Some(GateOp::CAdd { scale: c, src: 0, dst: 1 }),
        Gadget::Swap => Some(GateOp::Swap { a: 0, b: 1 }),
        Gadget::ScaledFourier => Some(GateOp::Fourier { r: Fe::ONE, w: 0 }),
        Gadget::DegreeReduction => None,
    };

    let mut st = StabState::new(gf, 0).unwrap();
    let mut rng = trial_rng(seed, 0);
    let mut log = Transcript::new();
    let mut ctx = Ctx {
        backend: &mut st,
        players: &players,
        adversary: adv.as_mut(),
        coins: CoinSource::IDEAL,
        rng: &mut rng,
        log: &mut log,
    };
    let mut blocks: Vec<Vec<usize>> = inputs.iter().map(|&(x, f)| encoded(ctx.backend, &enc, x, f, ctx.rng)).collect();
    match g {
        Gadget::ScaledFourier => scaled_fourier(&mut ctx, code, &blocks[0], false).unwrap(),
        Gadget::DegreeReduction => blocks[0] = degree_reduction(&mut ctx, code, &blocks[0]).unwrap(),
        _ => {
            let refs: Vec<&[usize]> = blocks.iter().map(Vec::as_slice).collect();
            transversal(&mut ctx, code, gate.as_ref().unwrap(), &refs).unwrap();
        }
    }
    let out: Vec<usize> = blocks
        .iter()
        .map(|b| decode_clean(ctx.backend, &dec, b, ctx.rng).unwrap())
        .collect();

    let mut reference = StabState::new(gf, inputs.len()).unwrap();
    let mut rr = trial_rng(0, 0);
    for op in prep_gates(&inputs, &gf).iter().chain(gate.iter()) {
        reference.apply(op, &mut rr).unwrap();
    }
    let wires: Vec<usize> = (0..inputs.len()).collect();
    st.reduced_stabilizers(&out) == reference.reduced_stabilizers(&wires)
}

fn toffoli_share(code: &CssCode, (a, b, c): (i64, i64, i64), seed: u64) -> bool {
    let gf = code.gf();
    let players = PlayerSet::new(code.n(), 1, SupportSet::EMPTY).unwrap();
    let mut adv = adversary_by_name("none", 0).unwrap();
    let mut st = ShareState::new(gf, 0);
    let mut rng = trial_rng(seed, 1);
    let mut log = Transcript::new();
    let mut ctx = Ctx {
        backend: &mut st,
        players: &players,
        adversary: adv.as_mut(),
        coins: CoinSource::IDEAL,
        rng: &mut rng,
        log: &mut log,
    };
    let wa = encoded(ctx.backend, code, a, false, ctx.rng);
    let wb = encoded(ctx.backend, code, b, false, ctx.rng);
    let wc = encoded(ctx.backend, code, c, false, ctx.rng);
    let out = toffoli_gadget(&mut ctx, code, &wa, &wb, &wc).unwrap();
    let ma = logical_measure(&mut ctx, code, &wa).unwrap();
    let mb = logical_measure(&mut ctx, code, &wb).unwrap();
    let mc = logical_measure(&mut ctx, code, &out).unwrap();
    (ma, mb, mc) == (Some(gf.elem(a)), Some(gf.elem(b)), Some(gf.elem(c + a * b)))
}

fn gadgets() -> Verdict {
    let all = [
        Gadget::X,
        Gadget::Z,
        Gadget::Mul,
        Gadget::CAdd,
        Gadget::Swap,
        Gadget::ScaledFourier,
        Gadget::DegreeReduction,
    ];
    let mut cases = 0;
    let mut failures = Vec::new();
    for (n, p) in [(5usize, 7u64), (7, 11)] {
        let code = CssCode::new(FieldParams::new(p, n).unwrap(), (n - 1) / 2).unwrap();
        let inputs = (0..p as i64).map(|x| (x, false)).chain([(0, true)]);
        for (s, input) in inputs.enumerate() {
            for g in all {
                cases += 1;
                if !gadget_matches(&code, g, input, s as u64) {
                    failures.push(format!("{g:?} n={n} input={input:?}"));
                }
            }
        }
    }
    let code = CssCode::new(FieldParams::new(11, 7).unwrap(), 2).unwrap();
    let mut triples: Vec<(i64, i64, i64)> = (0..125).map(|i| (i / 25, i / 5 % 5, i % 5)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    triples.extend((0..100).map(|_| (rng.gen_range(0..11), rng.gen_range(0..11), rng.gen_range(0..11))));
    let mut toff_bad = 0;
    for (s, &tr) in triples.iter().enumerate() {
        if !toffoli_share(&code, tr, s as u64) {
            toff_bad += 1;
        }
    }
    verdict(
        failures.is_empty() && toff_bad == 0,
        format!(
            "{cases} stabilizer gadget cases, {} mismatches {failures:?}; Toffoli on {} triples, {toff_bad} wrong",
            failures.len(),
            triples.len()
        ),
    )
}

fn classical_soundness() -> Verdict {
    let base = [("protocol", "classical-vss"), ("n", "5"), ("p", "7"), ("adversary", "guess-ahead")];
    let mut a = base.to_vec();
    a.extend([("k", "1"), ("trials", "10000")]);
    let r1 = soundness_sweep(&config(&a), None).unwrap();
    let c1 = &r1.cells[0];
    let mut b = base.to_vec();
    b.extend([("k", "20"), ("trials", "100000")]);
    let r20 = soundness_sweep(&config(&b), None).unwrap();
    let c20 = &r20.cells[0];
    let ok = c1.accept_ci.contains(1.0 / 7.0) && c1.bad_ci.contains(1.0 / 7.0) && c20.accepted == 0;
    verdict(
        ok,
        format!(
            "k=1: {}/{} accepted, 99% CI [{:.4},{:.4}] vs 1/7; k=20: {}/{} accepted",
            c1.accepted, c1.trials, c1.accept_ci.lo, c1.accept_ci.hi, c20.accepted, c20.trials
        ),
    )
}

/// A 2-good tree at n=5 for `secret` in which `cheater` dealt its own
/// branch with value `branch_value`; that branch is in `B` whenever the
/// value disagrees with the top polynomial.
fn two_good_tree(code: &RsCode, secret: Fe, cheater: usize, branch_value: Option<Fe>, accuse_leaves: bool, rng: &mut ChaCha8Rng) -> ShareTree {
    let n = code.n();
    let (top, _) = rs_share(code, secret, rng).unwrap();
    let mut acc = AccusationState::new(n);
    let mut leaves = Vec::with_capacity(n);
    for (i, &v) in top.iter().enumerate() {
        let v = match branch_value {
            Some(b) if i == cheater => {
                acc.b_global.insert(i);
                b
            }
            _ => v,
        };
        let (mut row, _) = rs_share(code, v, rng).unwrap();
        if accuse_leaves && i != cheater {
            acc.b_branch[i].insert(cheater);
            row[cheater] = code.params.gf().add(row[cheater], Fe::ONE);
        }
        leaves.push(row);
    }
    ShareTree { leaves, acc }
}

fn recover_invariance() -> Verdict {
    let fp = FieldParams::new(7, 5).unwrap();
    let gf = fp.gf();
    let code = RsCode::new(fp, 2, false).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut trees, mut assignments, mut bad) = (0u64, 0u64, 0u64);
    for cheater in 0..5 {
        let players = PlayerSet::new(5, 1, [cheater].into_iter().collect()).unwrap();
        let secret = gf.elem(cheater as i64 + 2);
        // Branch values for the cheater's own branch: honest, or any of the
        // p values with that branch disqualified.
        let shapes = std::iter::once(None).chain((0..7).map(|v| Some(gf.elem(v))));
        for branch in shapes {
            for accuse_leaves in [false, true] {
                let tree = two_good_tree(&code, secret, cheater, branch, accuse_leaves, &mut rng);
                trees += 1;
                if !is_two_good(&code, &tree, &players) || tree_value(&code, &tree, &players) != Some(secret) {
                    bad += 1;
                    continue;
                }
                let mut word = tree.leaves.clone();
                for col in 0..7u32.pow(5) {
                    let mut c = col;
                    for row in word.iter_mut() {
                        row[cheater] = gf.elem((c % 7) as i64);
                        c /= 7;
                    }
                    assignments += 1;
                    if recover(&code, &word, &tree.acc, 1).ok() != Some(secret) {
                        bad += 1;
                    }
                }
            }
        }
    }
    verdict(
        bad == 0,
        format!("p=7: {trees} 2-good trees x 7^5 cheater columns ({assignments} broadcasts, branch value over all 7), {bad} changed the output"),
    )
}

fn vqss_completeness() -> Verdict {
    let mut checked = 0;
    let mut failures = 0;
    let mut rejected = 0;
    for input in ["zero", "one", "plus"] {
        for adv in ["none", "pauli-injector", "reconstruction-garbage"] {
            let cfg = config(&[
                ("protocol", "vqss"),
                ("n", "5"),
                ("k", "10"),
                ("adversary", adv),
                ("input", input),
                ("trials", "112"),
            ]);
            let c = &soundness_sweep(&cfg, None).unwrap().cells[0];
            checked += c.exact_checked;
            failures += c.exact_failures;
            rejected += c.trials - c.accepted;
        }
    }
    verdict(
        failures == 0 && rejected == 0 && checked == 9 * 112,
        format!("{checked} runs over 3 inputs x 3 adversaries at k=10: {rejected} rejected, {failures} outputs differ from the input"),
    )
}

fn reconstruction_invariance() -> Verdict {
    let params = FieldParams::new(7, 5).unwrap();
    let gf = params.gf();
    let code = CssCode::new(params, 2).unwrap();
    let cheaters: SupportSet = [4].into_iter().collect();
    let players = PlayerSet::new(5, 1, cheaters).unwrap();
    let mut attacks = 0;
    let mut differ = 0;
    let mut accepted = true;
    for (s, (x, f)) in [(0i64, false), (3, false), (0, true), (2, true)].into_iter().enumerate() {
        let mut adv = adversary_by_name("identity", s as u64).unwrap();
        let mut st = StabState::new(gf, 0).unwrap();
        let mut rng = trial_rng(8, s as u64);
        // Input entangled with a reference qupit so the comparison sees the
        // whole channel, not one output state.
        let w = st.alloc_n(2).unwrap();
        st.apply(&GateOp::XShift { c: gf.elem(x), w: w[1] }, &mut rng).unwrap();
        if f {
            st.apply(&GateOp::Fourier { r: Fe::ONE, w: w[1] }, &mut rng).unwrap();
        }
        st.apply(&GateOp::Fourier { r: Fe::ONE, w: w[0] }, &mut rng).unwrap();
        st.apply(&GateOp::CAdd { scale: Fe::ONE, src: w[0], dst: w[1] }, &mut rng).unwrap();
        let mut log = Transcript::new();
        let mut ctx = Ctx {
            backend: &mut st,
            players: &players,
            adversary: adv.as_mut(),
            coins: CoinSource::IDEAL,
            rng: &mut rng,
            log: &mut log,
        };
        let sharing = vqss_share_and_verify(&mut ctx, &code, 0, TopInput::Wire(w[1]), 10).unwrap();
        accepted &= sharing.accepted;
        let owned: Vec<usize> = sharing.tree.held_by(cheaters).collect();

        let run = |mut st: StabState, e: Option<&PauliOp>, trial: u64| {
            let mut rng = trial_rng(80 + s as u64, trial);
            if let Some(e) = e {
                st.apply_pauli(&owned, e, &mut rng).unwrap();
            }
            let mut adv = adversary_by_name("identity", 0).unwrap();
            let mut log = Transcript::new();
            let mut acc = sharing.acc.clone();
            let mut ctx = Ctx {
                backend: &mut st,
                players: &players,
                adversary: adv.as_mut(),
                coins: CoinSource::IDEAL,
                rng: &mut rng,
                log: &mut log,
            };
            let o = vqss_reconstruct(&mut ctx, &code, &sharing.tree, &mut acc, 1).unwrap();
            st.reduced_stabilizers(&[w[0], o])
        };
        let clean = run(st.clone(), None, 0);
        let mut prng = ChaCha8Rng::seed_from_u64(800 + s as u64);
        for a in 0..25 {
            let mut e = PauliOp::identity(owned.len());
            for i in 0..owned.len() {
                e.x[i] = gf.elem(prng.gen_range(0..7));
                e.z[i] = gf.elem(prng.gen_range(0..7));
            }
            attacks += 1;
            if run(st.clone(), Some(&e), a + 1) != clean {
                differ += 1;
            }
        }
    }
    verdict(
        accepted && differ == 0,
        format!("{attacks} random Paulis on the cheater's wires after acceptance, {differ} changed the reconstructed state"),
    )
}

fn measurement_order() -> Verdict {
    let cfg = config(&[("protocol", "subspace"), ("n", "5"), ("trials", "10000")]);
    let mut lines = Vec::new();
    let mut ok = true;
    for adv in ["none", "guess-ahead", "pauli-injector"] {
        let r = q2c_experiment(&cfg, 2, adv, true).unwrap();
        ok &= r.passes && r.control_passes == Some(false);
        lines.push(format!(
            "{adv}: p={:.3} {}, control {}",
            r.test.p_value,
            if r.passes { "equivalent" } else { "differs" },
            if r.control_passes == Some(false) { "detected" } else { "missed" }
        ));
    }
    verdict(ok, format!("k=2, 10^4 runs per arm; {}", lines.join("; ")))
}

const ADVERSARIES: [&str; 8] = [
    "none",
    "identity",
    "pauli-injector",
    "inconsistent-dealer",
    "guess-ahead",
    "guess-ahead-d1",
    "broadcast-liar",
    "reconstruction-garbage",
];

fn mpqc_toffoli_triple(code: &CssCode, (a, b, c): (i64, i64, i64), seed: u64) -> bool {
    let gf = code.gf();
    let n = code.n();
    let players = PlayerSet::new(n, 1, SupportSet::EMPTY).unwrap();
    let mut adv = adversary_by_name("none", 0).unwrap();
    let mut st = ShareState::new(gf, 0);
    let mut rng = trial_rng(10, seed);
    let vals = [a, b, c, 0, 0, 0, 0];
    let mut inputs = Vec::new();
    for &v in &vals {
        let w = st.alloc().unwrap();
        st.apply(&GateOp::XShift { c: gf.elem(v), w }, &mut rng).unwrap();
        inputs.push(w);
    }
    let mut log = Transcript::new();
    let mut ctx = Ctx {
        backend: &mut st,
        players: &players,
        adversary: adv.as_mut(),
        coins: CoinSource::IDEAL,
        rng: &mut rng,
        log: &mut log,
    };
    let r = mpqc_run(&mut ctx, code, &toffoli_circuit(&gf, n), &inputs, 2).unwrap();
    let want = [a, b, c + a * b, 0, 0, 0, 0];
    r.caught.is_empty() && (0..n).all(|i| st.values[r.outputs[i]] == gf.elem(want[i]))
}

fn real_vs_ideal() -> Verdict {
    let mut notes = Vec::new();
    let mut ok = true;
    for adv in ADVERSARIES {
        let (mut checked, mut failures, mut trials) = (0, 0, 0);
        for input in ["zero", "one", "plus"] {
            let cfg = config(&[
                ("protocol", "top-level"),
                ("n", "5"),
                ("k", "1"),
                ("adversary", adv),
                ("input", input),
                ("trials", "334"),
            ]);
            let c = &soundness_sweep(&cfg, None).unwrap().cells[0];
            trials += c.trials;
            checked += c.exact_checked;
            failures += c.exact_failures;
        }
        let cfg = config(&[
            ("protocol", "mpqc"),
            ("n", "7"),
            ("p", "11"),
            ("backend", "share"),
            ("k", "2"),
            ("adversary", adv),
            ("input", "random"),
            ("trials", "1000"),
        ]);
        let m = &soundness_sweep(&cfg, None).unwrap().cells[0];
        ok &= failures == 0 && m.exact_failures == 0 && m.exact_checked == m.trials;
        notes.push(format!(
            "{adv}: sharing {failures}/{checked} of {trials}, mpqc {}/{}",
            m.exact_failures, m.exact_checked
        ));
    }
    let code = CssCode::new(FieldParams::new(11, 7).unwrap(), 2).unwrap();
    let toff_bad = (0..125)
        .filter(|&i| !mpqc_toffoli_triple(&code, (i / 25, i / 5 % 5, i % 5), i as u64))
        .count();
    ok &= toff_bad == 0;
    verdict(
        ok,
        format!("mismatches per adversary ({}); Toffoli computation on 125 basis triples: {toff_bad} wrong", notes.join(", ")),
    )
}

#[test]
fn acceptance() {
    let criteria: [(u32, &str, fn() -> Verdict); 10] = [
        (1, "codec oracle equivalence", codec_oracle),
        (2, "erasures on any two positions", erasures),
        (3, "backend cross-validation", backends_agree),
        (4, "gadget homomorphism", gadgets),
        (5, "classical VSS soundness", classical_soundness),
        (6, "recover invariance", recover_invariance),
        (7, "VQSS completeness", vqss_completeness),
        (8, "VQSS reconstruction invariance", reconstruction_invariance),
        (9, "measurement order", measurement_order),
        (10, "real vs ideal", real_vs_ideal),
    ];
    let mut failed = Vec::new();
    for (id, name, f) in criteria {
        let start = Instant::now();
        let v = f();
        let tag = if v.ok { "PASS" } else { "FAIL" };
        println!("{tag} criterion {id} ({name}, {:.1}s): {}", start.elapsed().as_secs_f64(), v.detail);
        if !v.ok {
            failed.push(id);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
