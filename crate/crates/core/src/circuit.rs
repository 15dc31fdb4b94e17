//! Gate set and circuits shared by every backend.

use alloc::format;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Fe, Gf};

#[derive(Copy, Clone, PartialEq, Eq, Debug, Hash, Serialize, Deserialize)]
pub enum GateOp {
    /// `|a> -> |a + c>`.
    XShift { c: Fe, w: usize },
    /// `|a> -> omega^(c a) |a>`.
    ZPhase { c: Fe, w: usize },
    /// `|a, b> -> |a, b + scale a>` with `a` on `src`.
    CAdd { scale: Fe, src: usize, dst: usize },
    /// `|a> -> |c a>`, `c != 0`.
    Mul { c: Fe, w: usize },
    Swap { a: usize, b: usize },
    /// `|a> -> p^(-1/2) sum_b omega^(r a b) |b>`.
    Fourier { r: Fe, w: usize },
    FourierInv { r: Fe, w: usize },
    /// `|a, b, c> -> |a, b, c + a b>`.
    Toffoli { a: usize, b: usize, c: usize },
    Measure { w: usize },
    PrepZero { w: usize },
    /// Prepares `sum_a |a>` (normalized).
    PrepPlus { w: usize },
    Discard { w: usize },
}

impl GateOp {
    pub fn name(&self) -> &'static str {
        match self {
            GateOp::XShift { .. } => "X",
            GateOp::ZPhase { .. } => "Z",
            GateOp::CAdd { .. } => "CADD",
            GateOp::Mul { .. } => "MUL",
            GateOp::Swap { .. } => "SWAP",
            GateOp::Fourier { .. } => "FOUR",
            GateOp::FourierInv { .. } => "FOURINV",
            GateOp::Toffoli { .. } => "TOFF",
            GateOp::Measure { .. } => "MEAS",
            GateOp::PrepZero { .. } => "PREP0",
            GateOp::PrepPlus { .. } => "PREPPLUS",
            GateOp::Discard { .. } => "DISCARD",
        }
    }

    pub fn wires(&self) -> Vec<usize> {
        match *self {
            GateOp::XShift { w, .. }
            | GateOp::ZPhase { w, .. }
            | GateOp::Mul { w, .. }
            | GateOp::Fourier { w, .. }
            | GateOp::FourierInv { w, .. }
            | GateOp::Measure { w }
            | GateOp::PrepZero { w }
            | GateOp::PrepPlus { w }
            | GateOp::Discard { w } => alloc::vec![w],
            GateOp::CAdd { src, dst, .. } => alloc::vec![src, dst],
            GateOp::Swap { a, b } => alloc::vec![a, b],
            GateOp::Toffoli { a, b, c } => alloc::vec![a, b, c],
        }
    }

    /// True for gates that permute computational basis states.
    pub fn is_basis_permuting(&self) -> bool {
        matches!(
            self,
            GateOp::XShift { .. }
                | GateOp::CAdd { .. }
                | GateOp::Mul { .. }
                | GateOp::Swap { .. }
                | GateOp::Toffoli { .. }
        )
    }

    pub fn is_clifford(&self) -> bool {
        !matches!(self, GateOp::Toffoli { .. })
    }

    /// Inverse of a unitary gate, `None` for non-unitary ones.
    pub fn inverse(&self, gf: &Gf) -> Option<GateOp> {
        Some(match *self {
            GateOp::XShift { c, w } => GateOp::XShift { c: gf.neg(c), w },
            GateOp::ZPhase { c, w } => GateOp::ZPhase { c: gf.neg(c), w },
            GateOp::CAdd { scale, src, dst } => GateOp::CAdd {
                scale: gf.neg(scale),
                src,
                dst,
            },
            GateOp::Mul { c, w } => GateOp::Mul {
                c: gf.inv(c).ok()?,
                w,
            },
            GateOp::Swap { a, b } => GateOp::Swap { a, b },
            GateOp::Fourier { r, w } => GateOp::FourierInv { r, w },
            GateOp::FourierInv { r, w } => GateOp::Fourier { r, w },
            _ => return None,
        })
    }

    fn validate(&self, gf: &Gf, m: usize) -> Result<()> {
        let wires = self.wires();
        if let Some(&w) = wires.iter().find(|&&w| w >= m) {
            return Err(Error::InvalidParams(format!(
                "{} uses wire {w} of {m}",
                self.name()
            )));
        }
        for (i, a) in wires.iter().enumerate() {
            if wires[..i].contains(a) {
                return Err(Error::InvalidParams(format!(
                    "{} repeats wire {a}",
                    self.name()
                )));
            }
        }
        let in_field = |c: Fe| c.value() < gf.p();
        let ok = match *self {
            GateOp::XShift { c, .. } | GateOp::ZPhase { c, .. } => in_field(c),
            GateOp::CAdd { scale, .. } => in_field(scale),
            GateOp::Mul { c, .. } | GateOp::Fourier { r: c, .. } | GateOp::FourierInv { r: c, .. } => {
                in_field(c) && !c.is_zero()
            }
            _ => true,
        };
        if !ok {
            return Err(Error::InvalidParams(format!(
                "{} parameter out of range",
                self.name()
            )));
        }
        Ok(())
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Circuit {
    pub p: u32,
    pub num_qupits: usize,
    pub gates: Vec<GateOp>,
}

impl Circuit {
    pub fn new(gf: &Gf, num_qupits: usize) -> Self {
        Circuit {
            p: gf.p(),
            num_qupits,
            gates: Vec::new(),
        }
    }

    pub fn gf(&self) -> Gf {
        Gf::new(self.p as u64).expect("circuit prime validated at construction")
    }

    pub fn push(&mut self, g: GateOp) -> Result<()> {
        g.validate(&self.gf(), self.num_qupits)?;
        self.gates.push(g);
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let gf = Gf::new(self.p as u64)?;
        self.gates
            .iter()
            .try_for_each(|g| g.validate(&gf, self.num_qupits))
    }

    pub fn is_clifford(&self) -> bool {
        self.gates.iter().all(GateOp::is_clifford)
    }

    pub fn extend(&mut self, other: &Circuit) -> Result<()> {
        for &g in &other.gates {
            self.push(g)?;
        }
        Ok(())
    }

    /// Inverse circuit; fails on non-unitary gates or Toffoli.
    pub fn inverse(&self) -> Result<Circuit> {
        let gf = self.gf();
        let mut out = Circuit::new(&gf, self.num_qupits);
        for g in self.gates.iter().rev() {
            let inv = g.inverse(&gf).ok_or(Error::UnsupportedGate {
                backend: "inverse",
                gate: g.name(),
            })?;
            out.gates.push(inv);
        }
        Ok(out)
    }

    /// Same circuit acting on `wires[k]` in place of wire `k`.
    pub fn remap(&self, wires: &[usize], num_qupits: usize) -> Circuit {
        let f = |w: usize| wires[w];
        let gates = self
            .gates
            .iter()
            .map(|g| match *g {
                GateOp::XShift { c, w } => GateOp::XShift { c, w: f(w) },
                GateOp::ZPhase { c, w } => GateOp::ZPhase { c, w: f(w) },
                GateOp::CAdd { scale, src, dst } => GateOp::CAdd {
                    scale,
                    src: f(src),
                    dst: f(dst),
                },
                GateOp::Mul { c, w } => GateOp::Mul { c, w: f(w) },
                GateOp::Swap { a, b } => GateOp::Swap { a: f(a), b: f(b) },
                GateOp::Fourier { r, w } => GateOp::Fourier { r, w: f(w) },
                GateOp::FourierInv { r, w } => GateOp::FourierInv { r, w: f(w) },
                GateOp::Toffoli { a, b, c } => GateOp::Toffoli {
                    a: f(a),
                    b: f(b),
                    c: f(c),
                },
                GateOp::Measure { w } => GateOp::Measure { w: f(w) },
                GateOp::PrepZero { w } => GateOp::PrepZero { w: f(w) },
                GateOp::PrepPlus { w } => GateOp::PrepPlus { w: f(w) },
                GateOp::Discard { w } => GateOp::Discard { w: f(w) },
            })
            .collect();
        Circuit {
            p: self.p,
            num_qupits,
            gates,
        }
    }
}

/// Circuit of CAdd/Mul/Swap gates realizing `|c> -> |M c>` for invertible `M`.
pub fn linear_map_circuit(gf: &Gf, m: &crate::field::FieldMatrix) -> Result<Circuit> {
    let n = m.rows();
    if m.cols() != n {
        return Err(Error::DimensionMismatch("linear map must be square".into()));
    }
    // Reduce M to I with row operations E_k..E_1; then M = E_1^-1 .. E_k^-1,
    // so the circuit applies E_k^-1 first.
    let mut a = m.clone();
    let mut ops: Vec<GateOp> = Vec::new();
    for col in 0..n {
        let piv = (col..n)
            .find(|&r| !a.get(r, col).is_zero())
            .ok_or(Error::SingularMatrix)?;
        if piv != col {
            for k in 0..n {
                let (x, y) = (a.get(piv, k), a.get(col, k));
                a.set(piv, k, y);
                a.set(col, k, x);
            }
            ops.push(GateOp::Swap { a: piv, b: col });
        }
        let pv = a.get(col, col);
        if pv != Fe::ONE {
            let inv = gf.inv(pv)?;
            for k in 0..n {
                a.set(col, k, gf.mul(a.get(col, k), inv));
            }
            // inverse of scaling by inv is scaling by pv
            ops.push(GateOp::Mul { c: pv, w: col });
        }
        for r in 0..n {
            let f = a.get(r, col);
            if r != col && !f.is_zero() {
                for k in 0..n {
                    let v = gf.sub(a.get(r, k), gf.mul(f, a.get(col, k)));
                    a.set(r, k, v);
                }
                // row_r -= f row_col; inverse adds f c_col into c_r
                ops.push(GateOp::CAdd {
                    scale: f,
                    src: col,
                    dst: r,
                });
            }
        }
    }
    let mut c = Circuit::new(gf, n);
    for g in ops.into_iter().rev() {
        c.push(g)?;
    }
    Ok(c)
}
