use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vqss::statevector::{fidelity, partial_trace, stab_to_statevector, StateVector};
use vqss_core::backend::Backend;
use vqss_core::circuit::{Circuit, GateOp};
use vqss_core::css::{encode_on, encoding_circuit, interpolation_circuit, CssCode};
use vqss_core::engine::{adversary_by_name, CoinMode, CoinSource, PlayerSet};
use vqss_core::pauli::PauliOp;
use vqss_core::protocols::subspace::{dual_subspace_projection, sp_deal, subspace_projection};
use vqss_core::rs::RsCode;
use vqss_core::stabilizer::StabState;
use vqss_core::{Fe, FieldMatrix, FieldParams, Gf, SupportSet};

const TOL: f64 = 1e-9;

fn random_state(gf: Gf, m: usize, rng: &mut ChaCha8Rng) -> StateVector {
    let d = (gf.p() as usize).pow(m as u32);
    let amps = (0..d)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let mut s = StateVector::from_amps(gf, m, amps).unwrap();
    s.normalize();
    s
}

/// `s` on wire 0 followed by `m - 1` wires in |0>.
fn embed(s: &StateVector, m: usize) -> StateVector {
    let gf = s.gf();
    let out = StateVector::new(gf, m).unwrap();
    let amps: Vec<Complex64> = (0..out.amps().len())
        .map(|i| {
            let digits = out.digits(i);
            if digits[1..].iter().all(|x| x.is_zero()) {
                s.amps()[s.index_of(&digits[..s.num_qupits()])]
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .collect();
    StateVector::from_amps(gf, m, amps).unwrap()
}

#[test]
fn encoder_spreads_zero_over_the_line_through_origin() {
    let fp = FieldParams::new(5, 3).unwrap();
    let code = CssCode::new(fp, 1).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut sv = StateVector::new(fp.gf(), 3).unwrap();
    sv.run(&encoding_circuit(&code).unwrap(), &[0, 1, 2], &mut rng).unwrap();
    assert!((sv.norm_sqr() - 1.0).abs() < 1e-12);
    // q(x) = c x for c in GF(5), evaluated at 1, 2, 3.
    let amp = 1.0 / 5f64.sqrt();
    for i in 0..125 {
        let w = sv.digits(i);
        let c = w[0];
        let on_line = (0..3).all(|j| w[j] == fp.mul(c, fp.point(j)));
        let expect = if on_line { amp } else { 0.0 };
        assert!((sv.amps()[i] - Complex64::new(expect, 0.0)).norm() < TOL, "{w:?}");
    }
    let mut st = StabState::new(fp.gf(), 3).unwrap();
    st.run(&encoding_circuit(&code).unwrap(), &[0, 1, 2], &mut rng).unwrap();
    assert!((fidelity(&stab_to_statevector(&st).unwrap(), &sv).unwrap() - 1.0).abs() < TOL);
}

#[test]
fn measuring_an_encoded_basis_state_yields_its_coset() {
    let fp = FieldParams::new(5, 3).unwrap();
    let code = CssCode::new(fp, 1).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for s in 0..5 {
        for _ in 0..20 {
            let mut sv = StateVector::basis(fp.gf(), &[fp.elem(s), Fe::ZERO, Fe::ZERO]).unwrap();
            encode_on(&mut sv, &code, &[0, 1, 2], &mut rng).unwrap();
            let w: Vec<Fe> = (0..3)
                .map(|j| sv.apply(&GateOp::Measure { w: j }, &mut rng).unwrap().unwrap())
                .collect();
            let q = code.v_code.polynomial_of(&w).expect("a codeword");
            assert_eq!(q.coeff(0), fp.elem(s));
        }
    }
}

/// Sharing |0>, extracting, swapping in S and re-inserting equals sharing
/// S directly. Checked on S maximally entangled with a reference, which
/// makes it an operator identity.
#[test]
fn share_zero_then_swap_equals_share_directly() {
    let fp = FieldParams::new(5, 3).unwrap();
    let gf = fp.gf();
    let code = CssCode::new(fp, 1).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    // wires: 0..3 block, 3 extraction ancilla, 4 = S, 5 = reference.
    let bell = |sv: &mut StateVector, rng: &mut ChaCha8Rng| {
        sv.apply(&GateOp::Fourier { r: Fe::ONE, w: 4 }, rng).unwrap();
        sv.apply(&GateOp::CAdd { scale: Fe::ONE, src: 4, dst: 5 }, rng).unwrap();
    };
    for honest in [SupportSet::full(3), [0, 2].into_iter().collect(), [1, 2].into_iter().collect()] {
        let interp = interpolation_circuit(&code, honest).unwrap();
        let mut left = StateVector::new(gf, 6).unwrap();
        bell(&mut left, &mut rng);
        left.run(&encoding_circuit(&code).unwrap(), &[0, 1, 2], &mut rng).unwrap();
        left.run(&interp, &[0, 1, 2, 3], &mut rng).unwrap();
        left.apply(&GateOp::Swap { a: 3, b: 4 }, &mut rng).unwrap();
        left.run(&interp.inverse().unwrap(), &[0, 1, 2, 3], &mut rng).unwrap();

        let mut right = StateVector::new(gf, 6).unwrap();
        bell(&mut right, &mut rng);
        right.apply(&GateOp::Swap { a: 0, b: 4 }, &mut rng).unwrap();
        right.run(&encoding_circuit(&code).unwrap(), &[0, 1, 2], &mut rng).unwrap();
        assert!((fidelity(&left, &right).unwrap() - 1.0).abs() < TOL, "{honest:?}");
    }
}

#[test]
fn small_sets_reveal_nothing() {
    // Sets of size min(delta, n - delta - 1) are hidden in both bases.
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for (p, n, delta) in [(5u64, 3usize, 1usize), (5, 4, 1), (7, 5, 2)] {
        let fp = FieldParams::new(p, n).unwrap();
        let code = CssCode::new(fp, delta).unwrap();
        let wires: Vec<usize> = (0..n).collect();
        let mut reference = StateVector::new(fp.gf(), n).unwrap();
        encode_on(&mut reference, &code, &wires, &mut rng).unwrap();
        for set in SupportSet::full(n).subsets_of_size(delta) {
            let base = partial_trace(&reference, set).unwrap();
            assert!((base.trace().re - 1.0).abs() < TOL);
            for _ in 0..5 {
                let psi = random_state(fp.gf(), 1, &mut rng);
                let mut sv = embed(&psi, n);
                encode_on(&mut sv, &code, &wires, &mut rng).unwrap();
                let rho = partial_trace(&sv, set).unwrap();
                assert!(rho.max_abs_diff(&base) < TOL, "p={p} n={n} set={set:?}");
            }
        }
    }
}

/// Two-level encodings with syndrome representatives at both levels form
/// an orthonormal family of size p^{n^2}; a pool of labels at n=3, p=5 is
/// compared pairwise.
#[test]
fn two_level_error_basis_is_orthonormal() {
    let fp = FieldParams::new(5, 3).unwrap();
    let gf = fp.gf();
    let code = CssCode::new(fp, 1).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    // Label: (a, E_0, E_1, E_2, E_3), each E = X^x Z^z on the block's first position.
    type Label = [u32; 9];
    let build = |l: &Label, rng: &mut ChaCha8Rng| {
        let mut sv = StateVector::new(gf, 9).unwrap();
        sv.apply(&GateOp::XShift { c: gf.elem(l[0] as i64), w: 0 }, rng).unwrap();
        encode_on(&mut sv, &code, &[0, 3, 6], rng).unwrap();
        let e = |x: u32, z: u32| PauliOp::from_parts(vec![gf.elem(x as i64)], vec![gf.elem(z as i64)]);
        sv.apply_pauli_op(&[0], &e(l[1], l[2]));
        for b in 0..3 {
            encode_on(&mut sv, &code, &[3 * b, 3 * b + 1, 3 * b + 2], rng).unwrap();
            sv.apply_pauli_op(&[3 * b], &e(l[3 + 2 * b], l[4 + 2 * b]));
        }
        sv
    };
    let first: Label = core::array::from_fn(|_| rng.gen_range(0..5));
    let mut labels = vec![first];
    // Neighbours differing in one coordinate each, plus independent labels.
    for i in 0..9 {
        let mut l = first;
        l[i] = (l[i] + rng.gen_range(1..5)) % 5;
        labels.push(l);
    }
    labels.push(core::array::from_fn(|_| rng.gen_range(0..5)));
    labels.push(core::array::from_fn(|_| rng.gen_range(0..5)));
    let states: Vec<StateVector> = labels.iter().map(|l| build(l, &mut rng)).collect();
    for (i, a) in states.iter().enumerate() {
        for (j, b) in states.iter().enumerate().skip(i) {
            let ip = a.inner(b).unwrap().norm();
            let expect = if labels[i] == labels[j] { 1.0 } else { 0.0 };
            assert!((ip - expect).abs() < TOL, "{:?} {:?}: {ip}", labels[i], labels[j]);
        }
    }
}

/// Dual subspace projection equals the computational one conjugated by
/// Fourier on every share.
#[test]
fn dual_projection_is_fourier_conjugate() {
    let fp = FieldParams::new(5, 3).unwrap();
    let gf = fp.gf();
    let code = RsCode::new(fp, 1, false).unwrap();
    let players = PlayerSet::new(3, 0, SupportSet::EMPTY).unwrap();
    let coins = CoinSource { mode: CoinMode::IdealVss };
    let mut rejected = 0;
    for seed in 0..6u64 {
        let run = |dual_route: bool| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut adv = adversary_by_name("none", 0).unwrap();
            let mut sv = StateVector::new(gf, 0).unwrap();
            let (h0, anc) = sp_deal(&mut sv, &code, &players, 0, adv.as_mut(), 1, true, &mut rng).unwrap();
            if seed % 2 == 1 {
                let e = PauliOp::from_parts(vec![Fe::ZERO], vec![Fe::ONE]);
                sv.apply_pauli_op(&[h0[seed as usize % 3]], &e);
            }
            let out = if dual_route {
                dual_subspace_projection(&mut sv, &code, &h0, &anc, &players, 0, adv.as_mut(), coins, &mut rng)
            } else {
                let all: Vec<usize> = h0.iter().chain(anc.iter().flatten()).copied().collect();
                for &w in &all {
                    sv.apply(&GateOp::Fourier { r: Fe::ONE, w }, &mut rng).unwrap();
                }
                let out = subspace_projection(&mut sv, &code, &h0, &anc, &players, 0, adv.as_mut(), coins, &mut rng);
                for &w in &h0 {
                    sv.apply(&GateOp::FourierInv { r: Fe::ONE, w }, &mut rng).unwrap();
                }
                out
            }
            .unwrap();
            let keep: SupportSet = h0.iter().copied().collect();
            (out.accepted, out.b, partial_trace(&sv, keep).unwrap())
        };
        let (acc_a, b_a, rho_a) = run(true);
        let (acc_b, b_b, rho_b) = run(false);
        assert_eq!((acc_a, b_a), (acc_b, b_b), "seed {seed}");
        assert!(rho_a.max_abs_diff(&rho_b) < TOL, "seed {seed}");
        if seed % 2 == 0 {
            assert!(acc_a, "seed {seed}");
        } else {
            rejected += usize::from(!acc_a);
        }
    }
    // One ancilla catches a planted error with probability 1 - 1/p.
    assert!(rejected > 0);
}

#[test]
fn fourier_round_trip_and_conjugated_cadd() {
    let gf = Gf::new(3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let psi = random_state(gf, 2, &mut rng);
    let mut s = psi.clone();
    s.apply(&GateOp::Fourier { r: Fe::ONE, w: 0 }, &mut rng).unwrap();
    s.apply(&GateOp::FourierInv { r: Fe::ONE, w: 0 }, &mut rng).unwrap();
    assert!((fidelity(&s, &psi).unwrap() - 1.0).abs() < TOL);

    // F⊗F · CAdd(0→1) · F^-1⊗F^-1 adds −1 times wire 1 into wire 0.
    for c in 1..3 {
        let c = gf.elem(c);
        let mut lhs = psi.clone();
        for w in 0..2 {
            lhs.apply(&GateOp::FourierInv { r: Fe::ONE, w }, &mut rng).unwrap();
        }
        lhs.apply(&GateOp::CAdd { scale: c, src: 0, dst: 1 }, &mut rng).unwrap();
        for w in 0..2 {
            lhs.apply(&GateOp::Fourier { r: Fe::ONE, w }, &mut rng).unwrap();
        }
        let mut rhs = psi.clone();
        rhs.apply(&GateOp::CAdd { scale: gf.neg(c), src: 1, dst: 0 }, &mut rng).unwrap();
        assert!((lhs.inner(&rhs).unwrap() - Complex64::new(1.0, 0.0)).norm() < TOL);
    }
}

#[test]
fn fourier_conjugates_basis_maps_to_inverse_transpose() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for p in [3u64, 5] {
        let gf = Gf::new(p).unwrap();
        let mut tried = 0;
        while tried < 10 {
            let m = FieldMatrix::from_rows(&[
                vec![gf.elem(rng.gen_range(0..p as i64)), gf.elem(rng.gen_range(0..p as i64))],
                vec![gf.elem(rng.gen_range(0..p as i64)), gf.elem(rng.gen_range(0..p as i64))],
            ])
            .unwrap();
            let Ok(inv) = m.inverse(&gf) else { continue };
            tried += 1;
            let map = vqss_core::circuit::linear_map_circuit(&gf, &m).unwrap();
            let dual = vqss_core::circuit::linear_map_circuit(&gf, &inv.transpose()).unwrap();
            let mut conj = Circuit::new(&gf, 2);
            for w in 0..2 {
                conj.push(GateOp::FourierInv { r: Fe::ONE, w }).unwrap();
            }
            conj.extend(&map).unwrap();
            for w in 0..2 {
                conj.push(GateOp::Fourier { r: Fe::ONE, w }).unwrap();
            }
            let psi = random_state(gf, 2, &mut rng);
            let (mut a, mut b) = (psi.clone(), psi);
            a.run(&conj, &[0, 1], &mut rng).unwrap();
            b.run(&dual, &[0, 1], &mut rng).unwrap();
            assert!((a.inner(&b).unwrap() - Complex64::new(1.0, 0.0)).norm() < TOL, "p={p}");
        }
    }
}

#[test]
fn pauli_times_inverse_is_exactly_identity() {
    let gf = Gf::new(3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let psi = random_state(gf, 2, &mut rng);
    for _ in 0..20 {
        let e = PauliOp::from_parts(
            (0..2).map(|_| gf.elem(rng.gen_range(0..3))).collect(),
            (0..2).map(|_| gf.elem(rng.gen_range(0..3))).collect(),
        );
        let mut s = psi.clone();
        s.apply_pauli_op(&[0, 1], &e.compose(&gf, &e.inverse(&gf)));
        assert!((s.inner(&psi).unwrap() - Complex64::new(1.0, 0.0)).norm() < TOL);
    }
}
