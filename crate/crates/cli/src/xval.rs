//! Stabilizer-versus-statevector cross-validation on random Clifford circuits.

use anyhow::Result;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use vqss_core::backend::Backend;
use vqss_core::circuit::{Circuit, GateOp};
use vqss_core::stabilizer::{SparsePauli, StabState};
use vqss_core::{Fe, Gf};

use crate::statevector::{fidelity, stab_to_statevector, StateVector};
use crate::stats::total_variation;

/// Random Clifford circuit of `len` gates on `m` wires.
pub fn random_clifford<R: Rng>(gf: &Gf, m: usize, len: usize, rng: &mut R) -> Circuit {
    let mut c = Circuit::new(gf, m);
    let p = gf.p() as i64;
    for _ in 0..len {
        let w = rng.gen_range(0..m);
        let nz = gf.elem(rng.gen_range(1..p));
        let any = gf.elem(rng.gen_range(0..p));
        let g = match rng.gen_range(0..7) {
            0 => GateOp::XShift { c: any, w },
            1 => GateOp::ZPhase { c: any, w },
            2 => GateOp::Mul { c: nz, w },
            3 => GateOp::Fourier { r: nz, w },
            4 => GateOp::FourierInv { r: nz, w },
            k if m > 1 => {
                let mut b = rng.gen_range(0..m - 1);
                if b >= w {
                    b += 1;
                }
                if k == 5 {
                    GateOp::CAdd { scale: any, src: w, dst: b }
                } else {
                    GateOp::Swap { a: w, b }
                }
            }
            _ => GateOp::Fourier { r: nz, w },
        };
        c.push(g).expect("generated gates are valid");
    }
    c
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct XvalCase {
    pub p: u32,
    pub qupits: usize,
    pub gates: usize,
    pub fidelity: f64,
    /// Largest per-wire total-variation distance between sampled
    /// stabilizer measurements and the exact statevector marginal.
    pub max_tv: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct XvalReport {
    pub shots: u64,
    pub cases: Vec<XvalCase>,
    pub min_fidelity: f64,
    pub max_tv: f64,
    pub passed: bool,
}

pub const FIDELITY_TOL: f64 = 1e-9;
pub const TV_TOL: f64 = 0.02;

fn one_case(seed: u64, idx: u64, shots: u64) -> Result<XvalCase> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ idx.wrapping_mul(0x2545_f491_4f6c_dd1d));
    let p = [3u64, 5][rng.gen_range(0..2)];
    let gf = Gf::new(p)?;
    let m = rng.gen_range(1..=4);
    let len = rng.gen_range(1..=30);
    let c = random_clifford(&gf, m, len, &mut rng);
    let wires: Vec<usize> = (0..m).collect();
    let mut st = StabState::new(gf, m)?;
    let mut sv = StateVector::new(gf, m)?;
    st.run(&c, &wires, &mut rng)?;
    sv.run(&c, &wires, &mut rng)?;
    let f = fidelity(&stab_to_statevector(&st)?, &sv)?;
    let mut max_tv: f64 = 0.0;
    for w in 0..m {
        let exact = sv.wire_distribution(w);
        let mut counts = vec![0u64; p as usize];
        let z = SparsePauli::z(w, Fe::ONE);
        for _ in 0..shots {
            let mut s = st.clone();
            counts[s.measure_pauli(&z, &mut rng).value() as usize] += 1;
        }
        let emp: Vec<f64> = counts.iter().map(|&x| x as f64 / shots as f64).collect();
        max_tv = max_tv.max(total_variation(&emp, &exact));
    }
    Ok(XvalCase {
        p: p as u32,
        qupits: m,
        gates: len,
        fidelity: f,
        max_tv,
    })
}

pub fn cross_validate(count: u64, shots: u64, seed: u64) -> Result<XvalReport> {
    let cases: Vec<XvalCase> = (0..count)
        .into_par_iter()
        .map(|i| one_case(seed, i, shots))
        .collect::<Result<_>>()?;
    let min_fidelity = cases.iter().map(|c| c.fidelity).fold(1.0, f64::min);
    let max_tv = cases.iter().map(|c| c.max_tv).fold(0.0, f64::max);
    Ok(XvalReport {
        shots,
        passed: (1.0 - min_fidelity).abs() < FIDELITY_TOL && max_tv <= TV_TOL,
        min_fidelity,
        max_tv,
        cases,
    })
}
