//! The interface every simulation backend implements.

use alloc::vec::Vec;

use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, GateOp};
use crate::error::Result;
use crate::field::{Fe, Gf};
use crate::pauli::PauliOp;
use crate::stabilizer::SparsePauli;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeasurementRecord {
    pub wire: usize,
    pub outcome: Fe,
    pub round: u32,
}

pub trait Backend {
    fn gf(&self) -> Gf;
    fn name(&self) -> &'static str;
    fn num_wires(&self) -> usize;
    /// A wire in |0>, reusing freed wires first.
    fn alloc(&mut self) -> Result<usize>;
    /// Discards the wire's content and returns it to the pool.
    fn free(&mut self, w: usize, rng: &mut dyn RngCore) -> Result<()>;
    /// Applies a gate; measurement gates return their outcome.
    fn apply(&mut self, g: &GateOp, rng: &mut dyn RngCore) -> Result<Option<Fe>>;
    /// Measures a Pauli product; outcome `a` means eigenvalue omega^a.
    fn measure(&mut self, p: &SparsePauli, rng: &mut dyn RngCore) -> Result<Fe>;

    /// True when the backend only tracks computational-basis values.
    fn basis_only(&self) -> bool {
        false
    }

    /// Computational-basis measurement followed by [`Backend::free`].
    fn measure_and_free(&mut self, w: usize, rng: &mut dyn RngCore) -> Result<Fe> {
        let a = self
            .apply(&GateOp::Measure { w }, rng)?
            .expect("measure yields an outcome");
        self.free(w, rng)?;
        Ok(a)
    }

    fn alloc_n(&mut self, k: usize) -> Result<Vec<usize>> {
        (0..k).map(|_| self.alloc()).collect()
    }

    fn free_all(&mut self, ws: &[usize], rng: &mut dyn RngCore) -> Result<()> {
        ws.iter().try_for_each(|&w| self.free(w, rng))
    }

    /// Applies `e` (ignoring its global phase) to `wires`. Basis-only
    /// backends drop the phase part, which cannot change their values.
    fn apply_pauli(&mut self, wires: &[usize], e: &PauliOp, rng: &mut dyn RngCore) -> Result<()> {
        let phases = !self.basis_only();
        for (i, &w) in wires.iter().enumerate() {
            if phases && !e.z[i].is_zero() {
                self.apply(&GateOp::ZPhase { c: e.z[i], w }, rng)?;
            }
            if !e.x[i].is_zero() {
                self.apply(&GateOp::XShift { c: e.x[i], w }, rng)?;
            }
        }
        Ok(())
    }

    /// Computational-basis measurement of each wire in order.
    fn measure_all(&mut self, wires: &[usize], rng: &mut dyn RngCore) -> Result<Vec<Fe>> {
        wires
            .iter()
            .map(|&w| {
                self.apply(&GateOp::Measure { w }, rng)
                    .map(|o| o.expect("measure yields an outcome"))
            })
            .collect()
    }

    /// Runs a circuit on the given wires, `wires[k]` standing for circuit wire k.
    fn run(
        &mut self,
        c: &Circuit,
        wires: &[usize],
        rng: &mut dyn RngCore,
    ) -> Result<Vec<MeasurementRecord>> {
        let c = c.remap(wires, self.num_wires());
        let mut out = Vec::new();
        for g in &c.gates {
            if let Some(outcome) = self.apply(g, rng)? {
                let wire = g.wires()[0];
                out.push(MeasurementRecord {
                    wire,
                    outcome,
                    round: 0,
                });
            }
        }
        Ok(out)
    }
}
