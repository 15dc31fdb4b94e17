//! Qupit Pauli operators `omega^s X^x Z^z`.
//!
//! With `X|a> = |a+1>` and `Z|a> = omega^a |a>` one has `Z X = omega X Z`,
//! so moving `Z^z1` past `X^x2` costs `omega^(z1 . x2)`.

use alloc::vec;
use alloc::vec::Vec;

use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::field::{Fe, Gf};
use crate::rng::uniform;
use crate::support::SupportSet;

#[derive(Clone, PartialEq, Eq, Debug, Hash, Serialize, Deserialize)]
pub struct PauliOp {
    pub x: Vec<Fe>,
    pub z: Vec<Fe>,
    /// Exponent of omega.
    pub phase: Fe,
}

impl PauliOp {
    pub fn identity(n: usize) -> Self {
        PauliOp {
            x: vec![Fe::ZERO; n],
            z: vec![Fe::ZERO; n],
            phase: Fe::ZERO,
        }
    }

    pub fn from_parts(x: Vec<Fe>, z: Vec<Fe>) -> Self {
        assert_eq!(x.len(), z.len());
        PauliOp {
            x,
            z,
            phase: Fe::ZERO,
        }
    }

    /// `X^c` on position `i`.
    pub fn x_at(n: usize, i: usize, c: Fe) -> Self {
        let mut e = Self::identity(n);
        e.x[i] = c;
        e
    }

    /// `Z^c` on position `i`.
    pub fn z_at(n: usize, i: usize, c: Fe) -> Self {
        let mut e = Self::identity(n);
        e.z[i] = c;
        e
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn support(&self) -> SupportSet {
        (0..self.len())
            .filter(|&i| !self.x[i].is_zero() || !self.z[i].is_zero())
            .collect()
    }

    pub fn weight(&self) -> usize {
        self.support().len()
    }

    pub fn is_identity(&self) -> bool {
        self.support().is_empty() && self.phase.is_zero()
    }

    /// `self * other`: `other` acts first.
    pub fn compose(&self, gf: &Gf, other: &PauliOp) -> PauliOp {
        assert_eq!(self.len(), other.len());
        let twist = gf.dot(&self.z, &other.x);
        PauliOp {
            x: self.x.iter().zip(&other.x).map(|(&a, &b)| gf.add(a, b)).collect(),
            z: self.z.iter().zip(&other.z).map(|(&a, &b)| gf.add(a, b)).collect(),
            phase: gf.add(gf.add(self.phase, other.phase), twist),
        }
    }

    pub fn inverse(&self, gf: &Gf) -> PauliOp {
        // (w^s X^x Z^z)^-1 = w^-s Z^-z X^-x = w^(x.z - s) X^-x Z^-z
        let xz = gf.dot(&self.x, &self.z);
        PauliOp {
            x: self.x.iter().map(|&a| gf.neg(a)).collect(),
            z: self.z.iter().map(|&a| gf.neg(a)).collect(),
            phase: gf.sub(xz, self.phase),
        }
    }

    /// `self^c`, using `(X^x Z^z)^c = omega^(x.z c(c-1)/2) X^(cx) Z^(cz)`.
    pub fn pow(&self, gf: &Gf, c: Fe) -> PauliOp {
        let xz = gf.dot(&self.x, &self.z);
        let cu = c.value() as u64;
        let tri = gf.elem(((cu * cu.saturating_sub(1) / 2) % gf.p() as u64) as i64);
        PauliOp {
            x: self.x.iter().map(|&a| gf.mul(a, c)).collect(),
            z: self.z.iter().map(|&a| gf.mul(a, c)).collect(),
            phase: gf.add(gf.mul(c, self.phase), gf.mul(xz, tri)),
        }
    }

    /// `lambda` with `self * other = omega^lambda * other * self`.
    pub fn commutator(&self, gf: &Gf, other: &PauliOp) -> Fe {
        gf.sub(gf.dot(&self.z, &other.x), gf.dot(&other.z, &self.x))
    }

    /// Uniformly random Pauli (phase 0) on all `n` positions.
    pub fn random<R: RngCore + ?Sized>(gf: &Gf, n: usize, rng: &mut R) -> PauliOp {
        let mut e = Self::identity(n);
        for i in 0..n {
            e.x[i] = uniform(gf, rng);
            e.z[i] = uniform(gf, rng);
        }
        e
    }

    /// Uniformly random Pauli (phase 0) supported inside `support`.
    pub fn random_on<R: RngCore + ?Sized>(
        gf: &Gf,
        n: usize,
        support: SupportSet,
        rng: &mut R,
    ) -> PauliOp {
        let mut e = Self::identity(n);
        for i in support.iter() {
            e.x[i] = uniform(gf, rng);
            e.z[i] = uniform(gf, rng);
        }
        e
    }

    /// Same operator on a larger register, placed at `wires`.
    pub fn embed(&self, total: usize, wires: &[usize]) -> PauliOp {
        let mut e = Self::identity(total);
        for (k, &w) in wires.iter().enumerate() {
            e.x[w] = self.x[k];
            e.z[w] = self.z[k];
        }
        e.phase = self.phase;
        e
    }
}
