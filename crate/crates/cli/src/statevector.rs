//! Dense statevector backend and the bridges to the stabilizer backend.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use vqss_core::backend::Backend;
use vqss_core::circuit::GateOp;
use vqss_core::error::{Error, Result};
use vqss_core::pauli::PauliOp;
use vqss_core::stabilizer::{SparsePauli, StabState};
use vqss_core::{Fe, Gf, SupportSet};

pub const MAX_AMPLITUDES: u64 = 1 << 24;
pub const MAX_BRIDGE_AMPLITUDES: u64 = 1 << 20;
pub const MAX_REDUCED_DIM: u64 = 1 << 12;
pub const TOL: f64 = 1e-9;

#[derive(Clone, Debug)]
pub struct StateVector {
    gf: Gf,
    m: usize,
    pub amps: Vec<Complex64>,
    free: Vec<usize>,
}

fn dim(p: u32, m: usize) -> Result<usize> {
    let mut d: u64 = 1;
    for _ in 0..m {
        d = d.saturating_mul(p as u64);
        if d > MAX_AMPLITUDES {
            return Err(Error::SizeLimit(d));
        }
    }
    Ok(d as usize)
}

impl StateVector {
    /// `m` qupits in |0...0>.
    pub fn new(gf: Gf, m: usize) -> Result<Self> {
        let d = dim(gf.p(), m)?;
        let mut amps = vec![Complex64::new(0.0, 0.0); d];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(StateVector {
            gf,
            m,
            amps,
            free: Vec::new(),
        })
    }

    /// Basis state with the given digits.
    pub fn basis(gf: Gf, digits: &[Fe]) -> Result<Self> {
        let mut s = Self::new(gf, digits.len())?;
        s.amps[0] = Complex64::new(0.0, 0.0);
        let idx = s.index_of(digits);
        s.amps[idx] = Complex64::new(1.0, 0.0);
        Ok(s)
    }

    pub fn from_amps(gf: Gf, m: usize, amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != dim(gf.p(), m)? {
            return Err(Error::DimensionMismatch("amplitude count".into()));
        }
        Ok(StateVector {
            gf,
            m,
            amps,
            free: Vec::new(),
        })
    }

    pub fn num_qupits(&self) -> usize {
        self.m
    }

    pub fn p(&self) -> u32 {
        self.gf.p()
    }

    pub fn gf(&self) -> Gf {
        self.gf
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    /// Wire 0 is the least significant base-p digit.
    pub fn index_of(&self, digits: &[Fe]) -> usize {
        let p = self.p() as usize;
        digits
            .iter()
            .rev()
            .fold(0usize, |acc, d| acc * p + d.value() as usize)
    }

    pub fn digits(&self, mut idx: usize) -> Vec<Fe> {
        let p = self.p() as usize;
        (0..self.m)
            .map(|_| {
                let d = idx % p;
                idx /= p;
                self.gf.elem(d as i64)
            })
            .collect()
    }

    fn stride(&self, w: usize) -> usize {
        (self.p() as usize).pow(w as u32)
    }

    #[inline]
    fn digit(&self, idx: usize, w: usize) -> u32 {
        ((idx / self.stride(w)) % self.p() as usize) as u32
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn normalize(&mut self) {
        let n = self.norm_sqr().sqrt();
        if n > 0.0 {
            self.amps.iter_mut().for_each(|a| *a /= n);
        }
    }

    fn omega(&self, k: u64) -> Complex64 {
        let p = self.p() as u64;
        Complex64::from_polar(1.0, 2.0 * PI * (k % p) as f64 / p as f64)
    }

    /// Applies a basis permutation `idx -> f(idx)`.
    fn permute(&mut self, f: impl Fn(&Self, usize) -> usize) {
        let mut out = vec![Complex64::new(0.0, 0.0); self.amps.len()];
        for (i, a) in self.amps.iter().enumerate() {
            if a.norm_sqr() != 0.0 {
                out[f(self, i)] = *a;
            }
        }
        self.amps = out;
    }

    fn set_digit(&self, idx: usize, w: usize, v: u32) -> usize {
        let s = self.stride(w);
        let old = self.digit(idx, w) as usize;
        idx - old * s + v as usize * s
    }

    fn fourier(&mut self, w: usize, r: u64, inverse: bool) {
        let p = self.p() as usize;
        let s = self.stride(w);
        let scale = 1.0 / (p as f64).sqrt();
        let table: Vec<Complex64> = (0..p as u64)
            .map(|k| {
                let e = if inverse { (p as u64 - k) % p as u64 } else { k };
                self.omega(e)
            })
            .collect();
        let mut buf = vec![Complex64::new(0.0, 0.0); p];
        for base in 0..self.amps.len() {
            if self.digit(base, w) != 0 {
                continue;
            }
            for (b, slot) in buf.iter_mut().enumerate() {
                let mut acc = Complex64::new(0.0, 0.0);
                for a in 0..p {
                    let k = (r as usize * a % p) * b % p;
                    acc += table[k] * self.amps[base + a * s];
                }
                *slot = acc * scale;
            }
            for (b, v) in buf.iter().enumerate() {
                self.amps[base + b * s] = *v;
            }
        }
    }

    /// Applies `X^x Z^z` (Z first) on `wires`, times omega^phase.
    pub fn apply_pauli_op(&mut self, wires: &[usize], e: &PauliOp) {
        let mut out = vec![Complex64::new(0.0, 0.0); self.amps.len()];
        let p = self.p() as u64;
        for (i, a) in self.amps.iter().enumerate() {
            if a.norm_sqr() == 0.0 {
                continue;
            }
            let mut j = i;
            let mut ph = e.phase.value() as u64;
            for (k, &w) in wires.iter().enumerate() {
                let d = self.digit(i, w) as u64;
                ph += e.z[k].value() as u64 * d % p;
                j = self.set_digit(j, w, ((d + e.x[k].value() as u64) % p) as u32);
            }
            out[j] = *a * self.omega(ph);
        }
        self.amps = out;
    }

    fn apply_sparse(&mut self, p: &SparsePauli) {
        let wires: Vec<usize> = p.terms.iter().map(|t| t.0).collect();
        let e = PauliOp::from_parts(
            p.terms.iter().map(|t| t.1).collect(),
            p.terms.iter().map(|t| t.2).collect(),
        );
        self.apply_pauli_op(&wires, &e);
    }

    /// Projects onto outcome `a` of a Pauli measurement (unnormalized).
    fn project(&self, p: &SparsePauli, a: u64) -> Vec<Complex64> {
        let pp = self.p() as u64;
        let mut acc = vec![Complex64::new(0.0, 0.0); self.amps.len()];
        let mut cur = self.clone();
        for k in 0..pp {
            let c = self.omega((pp - a * k % pp) % pp) / pp as f64;
            for (o, v) in acc.iter_mut().zip(&cur.amps) {
                *o += c * v;
            }
            cur.apply_sparse(p);
        }
        acc
    }

    /// Born-rule probabilities of a Pauli measurement's outcomes.
    pub fn pauli_distribution(&self, p: &SparsePauli) -> Vec<f64> {
        (0..self.p() as u64)
            .map(|a| self.project(p, a).iter().map(|v| v.norm_sqr()).sum())
            .collect()
    }

    /// Projects onto outcome `a` of measuring `p` and renormalizes.
    pub fn collapse(&mut self, p: &SparsePauli, a: Fe) {
        self.amps = self.project(p, a.value() as u64);
        self.normalize();
    }

    /// Probabilities of each value of wire `w`.
    pub fn wire_distribution(&self, w: usize) -> Vec<f64> {
        let mut probs = vec![0.0; self.p() as usize];
        for (i, a) in self.amps.iter().enumerate() {
            probs[self.digit(i, w) as usize] += a.norm_sqr();
        }
        probs
    }

    /// Probabilities of the joint values of `wires`, indexed little-endian.
    pub fn joint_distribution(&self, wires: &[usize]) -> Vec<f64> {
        let p = self.p() as usize;
        let mut probs = vec![0.0; p.pow(wires.len() as u32)];
        for (i, a) in self.amps.iter().enumerate() {
            let k = wires
                .iter()
                .rev()
                .fold(0, |acc, &w| acc * p + self.digit(i, w) as usize);
            probs[k] += a.norm_sqr();
        }
        probs
    }

    fn sample(probs: &[f64], rng: &mut dyn RngCore) -> usize {
        let total: f64 = probs.iter().sum();
        let mut u = rng.gen::<f64>() * total;
        for (i, &q) in probs.iter().enumerate() {
            if u < q {
                return i;
            }
            u -= q;
        }
        probs.iter().rposition(|&q| q > 0.0).unwrap_or(0)
    }

    fn measure_wire(&mut self, w: usize, rng: &mut dyn RngCore) -> u32 {
        let probs = self.wire_distribution(w);
        let a = Self::sample(&probs, rng) as u32;
        for i in 0..self.amps.len() {
            if self.digit(i, w) != a {
                self.amps[i] = Complex64::new(0.0, 0.0);
            }
        }
        self.normalize();
        a
    }

    fn reset(&mut self, w: usize, rng: &mut dyn RngCore) {
        let a = self.measure_wire(w, rng);
        if a != 0 {
            let p = self.p();
            self.permute(|s, i| s.set_digit(i, w, (s.digit(i, w) + p - a) % p));
        }
    }

    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        if self.amps.len() != other.amps.len() || self.p() != other.p() {
            return Err(Error::DimensionMismatch("inner product".into()));
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }
}

/// `|<a|b>|^2`.
pub fn fidelity(a: &StateVector, b: &StateVector) -> Result<f64> {
    Ok(a.inner(b)?.norm_sqr())
}

/// Square density matrix, row-major.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    pub dim: usize,
    pub entries: Vec<Complex64>,
}

impl DensityMatrix {
    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.entries[r * self.dim + c]
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn max_abs_diff(&self, other: &DensityMatrix) -> f64 {
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Reduced density matrix on `keep`, basis indexed little-endian over kept wires.
pub fn partial_trace(s: &StateVector, keep: SupportSet) -> Result<DensityMatrix> {
    let p = s.p() as usize;
    let kept: Vec<usize> = keep.iter().filter(|&w| w < s.m).collect();
    let d = (p as u64).pow(kept.len() as u32);
    if d > MAX_REDUCED_DIM {
        return Err(Error::SizeLimit(d));
    }
    let d = d as usize;
    let traced: Vec<usize> = (0..s.m).filter(|w| !keep.contains(*w)).collect();
    let mut rho = vec![Complex64::new(0.0, 0.0); d * d];
    // Group amplitudes by the traced-out configuration.
    let te = p.pow(traced.len() as u32);
    let mut blocks = vec![vec![Complex64::new(0.0, 0.0); d]; te];
    for (i, a) in s.amps.iter().enumerate() {
        let k = kept.iter().rev().fold(0, |acc, &w| acc * p + s.digit(i, w) as usize);
        let t = traced.iter().rev().fold(0, |acc, &w| acc * p + s.digit(i, w) as usize);
        blocks[t][k] = *a;
    }
    for b in &blocks {
        for r in 0..d {
            if b[r].norm_sqr() == 0.0 {
                continue;
            }
            for c in 0..d {
                rho[r * d + c] += b[r] * b[c].conj();
            }
        }
    }
    Ok(DensityMatrix { dim: d, entries: rho })
}

/// The pure state stabilized by the tableau, up to global phase.
pub fn stab_to_statevector(t: &StabState) -> Result<StateVector> {
    let gf = Backend::gf(t);
    let m = t.num_wires();
    let d = (gf.p() as u64).checked_pow(m as u32).unwrap_or(u64::MAX);
    if d > MAX_BRIDGE_AMPLITUDES {
        return Err(Error::SizeLimit(d));
    }
    let mut rng = ChaCha20Rng::seed_from_u64(0x5eed);
    let amps = (0..d)
        .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
        .collect();
    let mut sv = StateVector::from_amps(gf, m, amps)?;
    let wires: Vec<usize> = (0..m).collect();
    let p = gf.p();
    for g in t.stabilizers() {
        // (1/p) sum_k g^k
        let mut acc = vec![Complex64::new(0.0, 0.0); sv.amps.len()];
        let mut cur = sv.clone();
        for _ in 0..p {
            for (o, v) in acc.iter_mut().zip(&cur.amps) {
                *o += v / p as f64;
            }
            cur.apply_pauli_op(&wires, &g);
        }
        sv.amps = acc;
    }
    sv.normalize();
    Ok(sv)
}

impl Backend for StateVector {
    fn gf(&self) -> Gf {
        self.gf
    }

    fn name(&self) -> &'static str {
        "statevector"
    }

    fn num_wires(&self) -> usize {
        self.m
    }

    /// Wires come from the pool of freed ones or by growing the register.
    fn alloc(&mut self) -> Result<usize> {
        if let Some(w) = self.free.pop() {
            return Ok(w);
        }
        let d = dim(self.p(), self.m + 1)?;
        let mut amps = vec![Complex64::new(0.0, 0.0); d];
        amps[..self.amps.len()].copy_from_slice(&self.amps);
        self.amps = amps;
        self.m += 1;
        Ok(self.m - 1)
    }

    fn free(&mut self, w: usize, rng: &mut dyn RngCore) -> Result<()> {
        self.reset(w, rng);
        self.free.push(w);
        Ok(())
    }

    fn apply(&mut self, g: &GateOp, rng: &mut dyn RngCore) -> Result<Option<Fe>> {
        let p = self.p();
        match *g {
            GateOp::XShift { c, w } => {
                self.permute(|s, i| s.set_digit(i, w, (s.digit(i, w) + c.value()) % p))
            }
            GateOp::ZPhase { c, w } => {
                for i in 0..self.amps.len() {
                    let ph = self.omega(c.value() as u64 * self.digit(i, w) as u64);
                    self.amps[i] *= ph;
                }
            }
            GateOp::CAdd { scale, src, dst } => self.permute(|s, i| {
                let v = (s.digit(i, dst) as u64 + scale.value() as u64 * s.digit(i, src) as u64)
                    % p as u64;
                s.set_digit(i, dst, v as u32)
            }),
            GateOp::Mul { c, w } => {
                if c.is_zero() {
                    return Err(Error::DivByZero);
                }
                self.permute(|s, i| {
                    s.set_digit(i, w, ((s.digit(i, w) as u64 * c.value() as u64) % p as u64) as u32)
                })
            }
            GateOp::Swap { a, b } => self.permute(|s, i| {
                let (da, db) = (s.digit(i, a), s.digit(i, b));
                s.set_digit(s.set_digit(i, a, db), b, da)
            }),
            GateOp::Toffoli { a, b, c } => self.permute(|s, i| {
                let v = (s.digit(i, c) as u64 + s.digit(i, a) as u64 * s.digit(i, b) as u64)
                    % p as u64;
                s.set_digit(i, c, v as u32)
            }),
            GateOp::Fourier { r, w } => self.fourier(w, r.value() as u64, false),
            GateOp::FourierInv { r, w } => self.fourier(w, r.value() as u64, true),
            GateOp::Measure { w } => {
                let a = self.measure_wire(w, rng);
                return Ok(Some(self.gf.elem(a as i64)));
            }
            GateOp::PrepZero { w } | GateOp::Discard { w } => self.reset(w, rng),
            GateOp::PrepPlus { w } => {
                self.reset(w, rng);
                self.fourier(w, 1, false);
            }
        }
        Ok(None)
    }

    fn measure(&mut self, p: &SparsePauli, rng: &mut dyn RngCore) -> Result<Fe> {
        let probs = self.pauli_distribution(p);
        let a = Self::sample(&probs, rng);
        self.amps = self.project(p, a as u64);
        self.normalize();
        Ok(self.gf.elem(a as i64))
    }
}
