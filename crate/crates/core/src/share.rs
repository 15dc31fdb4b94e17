//! Classical share backend: one field value per wire, basis-permuting gates only.

use alloc::vec;
use alloc::vec::Vec;

use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::backend::Backend;
use crate::circuit::GateOp;
use crate::error::{Error, Result};
use crate::field::{Fe, Gf};
use crate::stabilizer::SparsePauli;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShareState {
    pub gf: Gf,
    pub values: Vec<Fe>,
    #[serde(skip)]
    free: Vec<usize>,
}

impl ShareState {
    pub fn new(gf: Gf, m: usize) -> Self {
        ShareState {
            gf,
            values: vec![Fe::ZERO; m],
            free: Vec::new(),
        }
    }

    pub fn from_values(gf: Gf, values: Vec<Fe>) -> Self {
        ShareState {
            gf,
            values,
            free: Vec::new(),
        }
    }
}

/// Pointwise update of a basis state.
pub fn share_apply(state: &mut ShareState, g: &GateOp) -> Result<Option<Fe>> {
    let gf = state.gf;
    let v = &mut state.values;
    match *g {
        GateOp::XShift { c, w } => v[w] = gf.add(v[w], c),
        GateOp::CAdd { scale, src, dst } => v[dst] = gf.add(v[dst], gf.mul(scale, v[src])),
        GateOp::Mul { c, w } => {
            if c.is_zero() {
                return Err(Error::DivByZero);
            }
            v[w] = gf.mul(v[w], c)
        }
        GateOp::Swap { a, b } => v.swap(a, b),
        GateOp::Toffoli { a, b, c } => v[c] = gf.add(v[c], gf.mul(v[a], v[b])),
        GateOp::Measure { w } => return Ok(Some(v[w])),
        GateOp::PrepZero { w } | GateOp::Discard { w } => v[w] = Fe::ZERO,
        GateOp::ZPhase { .. }
        | GateOp::Fourier { .. } | GateOp::FourierInv { .. } | GateOp::PrepPlus { .. } => {
            return Err(Error::UnsupportedGate {
                backend: "share",
                gate: g.name(),
            })
        }
    }
    Ok(None)
}

impl Backend for ShareState {
    fn gf(&self) -> Gf {
        self.gf
    }

    fn name(&self) -> &'static str {
        "share"
    }

    fn num_wires(&self) -> usize {
        self.values.len()
    }

    fn basis_only(&self) -> bool {
        true
    }

    fn alloc(&mut self) -> Result<usize> {
        Ok(self.free.pop().unwrap_or_else(|| {
            self.values.push(Fe::ZERO);
            self.values.len() - 1
        }))
    }

    fn free(&mut self, w: usize, _rng: &mut dyn RngCore) -> Result<()> {
        self.values[w] = Fe::ZERO;
        self.free.push(w);
        Ok(())
    }

    fn apply(&mut self, g: &GateOp, _rng: &mut dyn RngCore) -> Result<Option<Fe>> {
        share_apply(self, g)
    }

    fn measure(&mut self, p: &SparsePauli, _rng: &mut dyn RngCore) -> Result<Fe> {
        let gf = self.gf;
        let mut acc = Fe::ZERO;
        for &(w, x, z) in &p.terms {
            if !x.is_zero() {
                return Err(Error::UnsupportedGate {
                    backend: "share",
                    gate: "X-type measurement",
                });
            }
            acc = gf.add(acc, gf.mul(z, self.values[w]));
        }
        Ok(acc)
    }
}
