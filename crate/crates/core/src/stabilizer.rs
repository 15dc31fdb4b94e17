//! Qupit stabilizer simulation over Z_p for odd prime p.
//!
//! Each entangled group of wires carries a tableau of `m` stabilizers and `m`
//! destabilizers with `mu(h_i, g_j) = delta_ij`, where
//! `mu(A, B) = x_A . z_B - z_A . x_B`. Stabilizer phases are exact exponents
//! of omega. Groups merge when a gate or measurement spans them and a wire
//! splits off again when it is reset, so cost scales with group size rather
//! than total register size.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, RngCore};

use crate::backend::Backend;
use crate::circuit::GateOp;
use crate::error::{Error, Result};
use crate::field::{Fe, FieldMatrix, Gf};
use crate::pauli::PauliOp;

#[derive(Copy, Clone)]
struct Zp(u64);

impl Zp {
    #[inline]
    fn add(self, a: u32, b: u32) -> u32 {
        ((a as u64 + b as u64) % self.0) as u32
    }
    #[inline]
    fn sub(self, a: u32, b: u32) -> u32 {
        ((a as u64 + self.0 - b as u64) % self.0) as u32
    }
    #[inline]
    fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.0) as u32
    }
    #[inline]
    fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.0 as u32 - a
        }
    }
    fn inv(self, a: u32) -> u32 {
        let mut e = self.0 - 2;
        let mut b = a as u64;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * b % self.0;
            }
            b = b * b % self.0;
            e >>= 1;
        }
        acc as u32
    }
    /// Adds a product below 2^62 to a running sum, reducing before overflow.
    #[inline]
    fn acc(self, sum: u64, term: u64) -> u64 {
        let s = sum + term;
        if s >= 1 << 63 {
            s % self.0
        } else {
            s
        }
    }
    /// c (c - 1) / 2 mod p for 0 <= c < p.
    #[inline]
    fn tri(self, c: u32) -> u32 {
        let c = c as u64;
        ((c * c.saturating_sub(1) / 2) % self.0) as u32
    }
}

/// Tableau of one group: rows `0..m` stabilizers, `m..2m` destabilizers.
#[derive(Clone, Debug)]
struct Tableau {
    m: usize,
    x: Vec<u32>,
    z: Vec<u32>,
    /// Phase exponents of the stabilizer rows.
    s: Vec<u32>,
}

impl Tableau {
    fn zero_state(m: usize) -> Self {
        let mut t = Tableau {
            m,
            x: vec![0; 2 * m * m],
            z: vec![0; 2 * m * m],
            s: vec![0; m],
        };
        for i in 0..m {
            t.z[i * m + i] = 1;
            t.x[(m + i) * m + i] = 1;
        }
        t
    }

    #[inline]
    fn xr(&self, r: usize) -> &[u32] {
        &self.x[r * self.m..(r + 1) * self.m]
    }

    #[inline]
    fn zr(&self, r: usize) -> &[u32] {
        &self.z[r * self.m..(r + 1) * self.m]
    }

    /// mu(row r, P) for P given on local columns.
    fn mu_row(&self, f: Zp, r: usize, px: &[(usize, u32)], pz: &[(usize, u32)]) -> u32 {
        let m = self.m;
        let mut acc = 0u64;
        for &(c, v) in pz {
            acc = f.acc(acc, self.x[r * m + c] as u64 * v as u64);
        }
        for &(c, v) in px {
            acc = f.acc(acc, (f.0 - self.z[r * m + c] as u64) % f.0 * v as u64);
        }
        (acc % f.0) as u32
    }

    /// row i <- row i * (row k)^c; phases tracked when `i` is a stabilizer.
    fn row_mul(&mut self, f: Zp, i: usize, k: usize, c: u32) {
        if c == 0 {
            return;
        }
        let m = self.m;
        let track = i < m;
        if track {
            debug_assert!(k < m);
            let mut xz = 0u64;
            let mut twist = 0u64;
            for col in 0..m {
                let xk = self.x[k * m + col] as u64;
                xz = f.acc(xz, xk * self.z[k * m + col] as u64);
                twist = f.acc(twist, self.z[i * m + col] as u64 * xk);
            }
            let xz = (xz % f.0) as u32;
            let twist = f.mul((twist % f.0) as u32, c);
            // (g_k)^c = omega^(c s_k + x.z c(c-1)/2) X^(c x) Z^(c z)
            let sh = f.add(f.mul(c, self.s[k]), f.mul(xz, f.tri(c)));
            self.s[i] = f.add(f.add(self.s[i], sh), twist);
        }
        for col in 0..m {
            let xk = self.x[k * m + col];
            let zk = self.z[k * m + col];
            self.x[i * m + col] = f.add(self.x[i * m + col], f.mul(c, xk));
            self.z[i * m + col] = f.add(self.z[i * m + col], f.mul(c, zk));
        }
    }

    fn conj_gate(&mut self, f: Zp, g: &LocalGate) {
        let m = self.m;
        for r in 0..2 * m {
            let base = r * m;
            match *g {
                LocalGate::X(c, w) => {
                    if r < m {
                        let zw = self.z[base + w];
                        self.s[r] = f.sub(self.s[r], f.mul(c, zw));
                    }
                }
                LocalGate::Z(c, w) => {
                    if r < m {
                        let xw = self.x[base + w];
                        self.s[r] = f.add(self.s[r], f.mul(c, xw));
                    }
                }
                LocalGate::Mul(c, cinv, w) => {
                    self.x[base + w] = f.mul(self.x[base + w], c);
                    self.z[base + w] = f.mul(self.z[base + w], cinv);
                }
                LocalGate::CAdd(sc, a, b) => {
                    let xa = self.x[base + a];
                    let zb = self.z[base + b];
                    self.x[base + b] = f.add(self.x[base + b], f.mul(sc, xa));
                    self.z[base + a] = f.sub(self.z[base + a], f.mul(sc, zb));
                }
                LocalGate::Swap(a, b) => {
                    self.x.swap(base + a, base + b);
                    self.z.swap(base + a, base + b);
                }
                LocalGate::Four(r_, rinv, w) => {
                    let (xw, zw) = (self.x[base + w], self.z[base + w]);
                    self.x[base + w] = f.neg(f.mul(zw, rinv));
                    self.z[base + w] = f.mul(xw, r_);
                    if r < m {
                        self.s[r] = f.sub(self.s[r], f.mul(xw, zw));
                    }
                }
                LocalGate::FourInv(r_, rinv, w) => {
                    let (xw, zw) = (self.x[base + w], self.z[base + w]);
                    self.x[base + w] = f.mul(zw, rinv);
                    self.z[base + w] = f.neg(f.mul(xw, r_));
                    if r < m {
                        self.s[r] = f.sub(self.s[r], f.mul(xw, zw));
                    }
                }
            }
        }
    }

    /// Outcome if measuring P is deterministic, without changing the state.
    fn peek(&self, f: Zp, px: &[(usize, u32)], pz: &[(usize, u32)]) -> Option<u32> {
        let m = self.m;
        if (0..m).any(|r| self.mu_row(f, r, px, pz) != 0) {
            return None;
        }
        // P ~ prod_j g_j^(c_j), c_j = mu(h_j, P).
        let mut acc = Tableau {
            m,
            x: vec![0; m],
            z: vec![0; m],
            s: vec![0],
        };
        let mut s = 0u32;
        for j in 0..m {
            let c = self.mu_row(f, m + j, px, pz);
            if c == 0 {
                continue;
            }
            let mut xz = 0u64;
            let mut twist = 0u64;
            for col in 0..m {
                let xj = self.x[j * m + col] as u64;
                xz = f.acc(xz, xj * self.z[j * m + col] as u64);
                twist = f.acc(twist, acc.z[col] as u64 * xj);
            }
            let sh = f.add(
                f.mul(c, self.s[j]),
                f.mul((xz % f.0) as u32, f.tri(c)),
            );
            s = f.add(f.add(s, sh), f.mul((twist % f.0) as u32, c));
            for col in 0..m {
                acc.x[col] = f.add(acc.x[col], f.mul(c, self.x[j * m + col]));
                acc.z[col] = f.add(acc.z[col], f.mul(c, self.z[j * m + col]));
            }
        }
        debug_assert!(px.iter().all(|&(c, v)| acc.x[c] == v));
        debug_assert!(pz.iter().all(|&(c, v)| acc.z[c] == v));
        Some(f.neg(s))
    }

    fn measure(
        &mut self,
        f: Zp,
        px: &[(usize, u32)],
        pz: &[(usize, u32)],
        rng: &mut dyn RngCore,
    ) -> u32 {
        let m = self.m;
        let mus: Vec<u32> = (0..m).map(|r| self.mu_row(f, r, px, pz)).collect();
        let Some(k) = mus.iter().position(|&v| v != 0) else {
            return self.peek(f, px, pz).expect("commuting Pauli lies in the group");
        };
        let ak = mus[k];
        let akinv = f.inv(ak);
        for j in 0..m {
            if j != k && mus[j] != 0 {
                let alpha = f.neg(f.mul(mus[j], akinv));
                self.row_mul(f, j, k, alpha);
                self.row_mul(f, m + k, m + j, alpha);
            }
        }
        for i in 0..m {
            if i == k {
                continue;
            }
            let c = self.mu_row(f, m + i, px, pz);
            if c != 0 {
                self.row_mul(f, m + i, k, f.neg(f.mul(c, akinv)));
            }
        }
        // h_k <- g_k^(1/a_k); g_k <- omega^-a P.
        for col in 0..m {
            self.x[(m + k) * m + col] = f.mul(self.x[k * m + col], akinv);
            self.z[(m + k) * m + col] = f.mul(self.z[k * m + col], akinv);
            self.x[k * m + col] = 0;
            self.z[k * m + col] = 0;
        }
        for &(c, v) in px {
            self.x[k * m + c] = v;
        }
        for &(c, v) in pz {
            self.z[k * m + c] = v;
        }
        let a = rng.gen_range(0..f.0 as u32);
        self.s[k] = f.neg(a);
        a
    }

    /// Given that Z on column `w` has a definite value, brings the tableau to
    /// block form and removes column `w`.
    fn split_off(&mut self, f: Zp, w: usize) {
        let m = self.m;
        // c_j = mu(h_j, Z_w); Z_w ~ prod g_j^(c_j).
        let cs: Vec<u32> = (0..m).map(|j| self.x[(m + j) * m + w]).collect();
        let k = cs.iter().position(|&c| c != 0).expect("Z_w lies in the group");
        self.pow_row(f, k, cs[k]);
        for j in 0..m {
            if j != k && cs[j] != 0 {
                self.row_mul(f, k, j, cs[j]);
            }
        }
        debug_assert!(self.xr(k).iter().all(|&v| v == 0));
        debug_assert!(self.zr(k).iter().enumerate().all(|(c, &v)| v == u32::from(c == w)));
        let ckinv = f.inv(cs[k]);
        for i in 0..m {
            if i != k && cs[i] != 0 {
                self.row_mul(f, m + i, m + k, f.neg(f.mul(cs[i], ckinv)));
            }
        }
        // Rows k and m+k are dropped, so their pairing need not be kept.
        for j in 0..2 * m {
            if j == k || j == m + k {
                continue;
            }
            debug_assert_eq!(self.x[j * m + w], 0);
            let zw = self.z[j * m + w];
            if zw != 0 {
                if j < m {
                    self.row_mul(f, j, k, f.neg(zw));
                } else {
                    self.row_mul_dest_by_stab(f, j, k, f.neg(zw));
                }
            }
        }
        self.remove(k, w);
    }

    fn pow_row(&mut self, f: Zp, k: usize, c: u32) {
        let m = self.m;
        let mut xz = 0u64;
        for col in 0..m {
            xz = f.acc(xz, self.x[k * m + col] as u64 * self.z[k * m + col] as u64);
        }
        self.s[k] = f.add(f.mul(c, self.s[k]), f.mul((xz % f.0) as u32, f.tri(c)));
        for col in 0..m {
            self.x[k * m + col] = f.mul(self.x[k * m + col], c);
            self.z[k * m + col] = f.mul(self.z[k * m + col], c);
        }
    }

    fn row_mul_dest_by_stab(&mut self, f: Zp, i: usize, k: usize, c: u32) {
        let m = self.m;
        for col in 0..m {
            let xk = self.x[k * m + col];
            let zk = self.z[k * m + col];
            self.x[i * m + col] = f.add(self.x[i * m + col], f.mul(c, xk));
            self.z[i * m + col] = f.add(self.z[i * m + col], f.mul(c, zk));
        }
    }

    fn remove(&mut self, k: usize, w: usize) {
        let m = self.m;
        let nm = m - 1;
        let mut x = Vec::with_capacity(2 * nm * nm);
        let mut z = Vec::with_capacity(2 * nm * nm);
        let mut s = Vec::with_capacity(nm);
        for r in 0..2 * m {
            if r == k || r == m + k {
                continue;
            }
            for c in 0..m {
                if c != w {
                    x.push(self.x[r * m + c]);
                    z.push(self.z[r * m + c]);
                }
            }
            if r < m {
                s.push(self.s[r]);
            }
        }
        *self = Tableau { m: nm, x, z, s };
    }

    fn tensor(a: &Tableau, b: &Tableau) -> Tableau {
        let m = a.m + b.m;
        let mut t = Tableau {
            m,
            x: vec![0; 2 * m * m],
            z: vec![0; 2 * m * m],
            s: Vec::with_capacity(m),
        };
        let place = |t: &mut Tableau, src: &Tableau, src_row: usize, dst_row: usize, off: usize| {
            for c in 0..src.m {
                t.x[dst_row * m + off + c] = src.x[src_row * src.m + c];
                t.z[dst_row * m + off + c] = src.z[src_row * src.m + c];
            }
        };
        for r in 0..a.m {
            place(&mut t, a, r, r, 0);
            place(&mut t, a, a.m + r, m + r, 0);
        }
        for r in 0..b.m {
            place(&mut t, b, r, a.m + r, a.m);
            place(&mut t, b, b.m + r, m + a.m + r, a.m);
        }
        t.s.extend_from_slice(&a.s);
        t.s.extend_from_slice(&b.s);
        t
    }
}

#[derive(Copy, Clone, Debug)]
enum LocalGate {
    X(u32, usize),
    Z(u32, usize),
    Mul(u32, u32, usize),
    CAdd(u32, usize, usize),
    Swap(usize, usize),
    Four(u32, u32, usize),
    FourInv(u32, u32, usize),
}

#[derive(Clone, Debug)]
struct Group {
    wires: Vec<usize>,
    tab: Tableau,
}

/// Stabilizer state of a growable register of qupits.
#[derive(Clone, Debug)]
pub struct StabState {
    gf: Gf,
    loc: Vec<(usize, usize)>,
    groups: Vec<Group>,
    free: Vec<usize>,
}

impl StabState {
    /// `m` wires, all in |0>.
    pub fn new(gf: Gf, m: usize) -> Result<Self> {
        if gf.p() == 2 {
            return Err(Error::InvalidParams(
                "stabilizer phases mod p need odd p".into(),
            ));
        }
        let mut s = StabState {
            gf,
            loc: Vec::new(),
            groups: Vec::new(),
            free: Vec::new(),
        };
        for _ in 0..m {
            s.push_wire();
        }
        Ok(s)
    }

    fn f(&self) -> Zp {
        Zp(self.gf.p() as u64)
    }

    fn push_wire(&mut self) -> usize {
        let w = self.loc.len();
        self.loc.push((self.groups.len(), 0));
        self.groups.push(Group {
            wires: vec![w],
            tab: Tableau::zero_state(1),
        });
        w
    }

    pub fn num_wires(&self) -> usize {
        self.loc.len()
    }

    /// Size of the largest entangled group (diagnostic).
    pub fn max_group(&self) -> usize {
        self.groups.iter().map(|g| g.wires.len()).max().unwrap_or(0)
    }

    /// Merges the groups of `wires` and returns the group index.
    fn merge(&mut self, wires: &[usize]) -> usize {
        let mut gids: Vec<usize> = wires.iter().map(|&w| self.loc[w].0).collect();
        gids.sort_unstable();
        gids.dedup();
        while gids.len() > 1 {
            let b = gids.pop().expect("len > 1");
            let a = gids[0];
            let gb = self.remove_group(b);
            let ga = &mut self.groups[a];
            let off = ga.wires.len();
            ga.tab = Tableau::tensor(&ga.tab, &gb.tab);
            for (i, &w) in gb.wires.iter().enumerate() {
                ga.wires.push(w);
                self.loc[w] = (a, off + i);
            }
        }
        self.loc[wires[0]].0
    }

    fn remove_group(&mut self, g: usize) -> Group {
        let last = self.groups.len() - 1;
        let out = self.groups.swap_remove(g);
        if g != last {
            for &w in &self.groups[g].wires {
                self.loc[w].0 = g;
            }
        }
        out
    }

    fn local(&self, w: usize) -> usize {
        self.loc[w].1
    }

    /// Applies a Clifford gate by conjugation.
    fn conj(&mut self, g: &GateOp) -> Result<()> {
        let f = self.f();
        let gf = self.gf;
        let wires = g.wires();
        let gid = self.merge(&wires);
        let l = |s: &Self, w: usize| s.local(w);
        let lg = match *g {
            GateOp::XShift { c, w } => LocalGate::X(c.value(), l(self, w)),
            GateOp::ZPhase { c, w } => LocalGate::Z(c.value(), l(self, w)),
            GateOp::Mul { c, w } => LocalGate::Mul(c.value(), gf.inv(c)?.value(), l(self, w)),
            GateOp::CAdd { scale, src, dst } => {
                LocalGate::CAdd(scale.value(), l(self, src), l(self, dst))
            }
            GateOp::Swap { a, b } => LocalGate::Swap(l(self, a), l(self, b)),
            GateOp::Fourier { r, w } => LocalGate::Four(r.value(), gf.inv(r)?.value(), l(self, w)),
            GateOp::FourierInv { r, w } => {
                LocalGate::FourInv(r.value(), gf.inv(r)?.value(), l(self, w))
            }
            _ => unreachable!("non-Clifford gates handled by the caller"),
        };
        self.groups[gid].tab.conj_gate(f, &lg);
        Ok(())
    }

    fn split_pauli(&self, gid: usize, p: &SparsePauli) -> (Vec<(usize, u32)>, Vec<(usize, u32)>) {
        let mut px = Vec::new();
        let mut pz = Vec::new();
        for &(w, x, z) in &p.terms {
            debug_assert_eq!(self.loc[w].0, gid);
            let c = self.local(w);
            if !x.is_zero() {
                px.push((c, x.value()));
            }
            if !z.is_zero() {
                pz.push((c, z.value()));
            }
        }
        (px, pz)
    }

    /// Measures `X^x Z^z` (phase 0); the outcome `a` means eigenvalue omega^a.
    pub fn measure_pauli(&mut self, p: &SparsePauli, rng: &mut dyn RngCore) -> Fe {
        if p.terms.is_empty() {
            return Fe::ZERO;
        }
        let wires: Vec<usize> = p.terms.iter().map(|t| t.0).collect();
        let gid = self.merge(&wires);
        let (px, pz) = self.split_pauli(gid, p);
        let f = self.f();
        let a = self.groups[gid].tab.measure(f, &px, &pz, rng);
        self.gf.elem(a as i64)
    }

    /// Deterministic outcome of measuring `p`, if any, without disturbing the state.
    pub fn peek_pauli(&self, p: &SparsePauli) -> Option<Fe> {
        let f = self.f();
        let mut by_group: Vec<(usize, SparsePauli)> = Vec::new();
        for &t in &p.terms {
            let g = self.loc[t.0].0;
            match by_group.iter_mut().find(|(gg, _)| *gg == g) {
                Some((_, sp)) => sp.terms.push(t),
                None => by_group.push((g, SparsePauli { terms: vec![t] })),
            }
        }
        let mut total = 0u32;
        for (g, sp) in &by_group {
            let (px, pz) = self.split_pauli(*g, sp);
            total = f.add(total, self.groups[*g].tab.peek(f, &px, &pz)?);
        }
        Some(self.gf.elem(total as i64))
    }

    /// Measures wire `w` in the computational basis and detaches it in |0>.
    fn reset(&mut self, w: usize, rng: &mut dyn RngCore) -> Fe {
        let a = self.measure_pauli(&SparsePauli::z(w, Fe::ONE), rng);
        let (gid, lw) = self.loc[w];
        if self.groups[gid].wires.len() > 1 {
            let f = self.f();
            self.groups[gid].tab.split_off(f, lw);
            let g = &mut self.groups[gid];
            g.wires.remove(lw);
            for (i, &v) in g.wires.iter().enumerate() {
                self.loc[v] = (gid, i);
            }
            self.loc[w] = (self.groups.len(), 0);
            self.groups.push(Group {
                wires: vec![w],
                tab: Tableau::zero_state(1),
            });
        } else {
            self.groups[gid].tab = Tableau::zero_state(1);
        }
        a
    }

    /// All stabilizer generators as Paulis on the whole register.
    pub fn stabilizers(&self) -> Vec<PauliOp> {
        let n = self.num_wires();
        let mut out = Vec::with_capacity(n);
        for g in &self.groups {
            let m = g.tab.m;
            for r in 0..m {
                let mut e = PauliOp::identity(n);
                for (c, &w) in g.wires.iter().enumerate() {
                    e.x[w] = self.gf.elem(g.tab.x[r * m + c] as i64);
                    e.z[w] = self.gf.elem(g.tab.z[r * m + c] as i64);
                }
                e.phase = self.gf.elem(g.tab.s[r] as i64);
                out.push(e);
            }
        }
        out
    }

    /// Canonical generators of the stabilizer subgroup supported on `wires`,
    /// as Paulis on `wires.len()` positions in the given order.
    ///
    /// Two states have the same reduced density matrix on `wires` exactly
    /// when these lists are equal.
    pub fn reduced_stabilizers(&self, wires: &[usize]) -> Vec<PauliOp> {
        let gf = self.gf;
        let k = wires.len();
        let pos = |w: usize| wires.iter().position(|&v| v == w);
        let mut gens: Vec<PauliOp> = Vec::new();
        let mut seen: Vec<usize> = Vec::new();
        for &w in wires {
            let gid = self.loc[w].0;
            if seen.contains(&gid) {
                continue;
            }
            seen.push(gid);
            let g = &self.groups[gid];
            let m = g.tab.m;
            let row = |r: usize| {
                let mut e = PauliOp::identity(m);
                for c in 0..m {
                    e.x[c] = gf.elem(g.tab.x[r * m + c] as i64);
                    e.z[c] = gf.elem(g.tab.z[r * m + c] as i64);
                }
                e.phase = gf.elem(g.tab.s[r] as i64);
                e
            };
            let rows: Vec<PauliOp> = (0..m).map(row).collect();
            let outside: Vec<usize> = (0..m).filter(|&c| pos(g.wires[c]).is_none()).collect();
            let combos: Vec<Vec<Fe>> = if outside.is_empty() {
                (0..m)
                    .map(|r| (0..m).map(|j| if j == r { Fe::ONE } else { Fe::ZERO }).collect())
                    .collect()
            } else {
                let mut cons = FieldMatrix::zeros(2 * outside.len(), m);
                for (i, &c) in outside.iter().enumerate() {
                    for (r, e) in rows.iter().enumerate() {
                        cons.set(2 * i, r, e.x[c]);
                        cons.set(2 * i + 1, r, e.z[c]);
                    }
                }
                cons.null_space(&gf)
            };
            for c in combos {
                let mut prod = PauliOp::identity(m);
                for (r, &cr) in c.iter().enumerate() {
                    if !cr.is_zero() {
                        prod = prod.compose(&gf, &rows[r].pow(&gf, cr));
                    }
                }
                let mut e = PauliOp::identity(k);
                for (col, &gw) in g.wires.iter().enumerate() {
                    if let Some(i) = pos(gw) {
                        e.x[i] = prod.x[col];
                        e.z[i] = prod.z[col];
                    }
                }
                e.phase = prod.phase;
                gens.push(e);
            }
        }
        canonical_group(&gf, gens, k)
    }

    /// Checks the tableau invariants: commuting stabilizers, dual destabilizers.
    pub fn check_invariants(&self) -> bool {
        let f = self.f();
        self.groups.iter().all(|g| {
            let m = g.tab.m;
            (0..m).all(|i| {
                (0..m).all(|j| {
                    let zj: Vec<(usize, u32)> = g.tab.zr(j).iter().copied().enumerate().collect();
                    let xj: Vec<(usize, u32)> = g.tab.xr(j).iter().copied().enumerate().collect();
                    g.tab.mu_row(f, i, &xj, &zj) == 0
                        && g.tab.mu_row(f, m + i, &xj, &zj) == u32::from(i == j)
                })
            })
        })
    }
}

/// Reduced row echelon form of a commuting set of Paulis on `k` positions,
/// columns ordered `x_0..x_k, z_0..z_k`; phases follow the row operations.
pub fn canonical_group(gf: &Gf, mut rows: Vec<PauliOp>, k: usize) -> Vec<PauliOp> {
    let entry = |e: &PauliOp, col: usize| if col < k { e.x[col] } else { e.z[col - k] };
    let mut r = 0;
    for col in 0..2 * k {
        let Some(piv) = (r..rows.len()).find(|&i| !entry(&rows[i], col).is_zero()) else {
            continue;
        };
        rows.swap(r, piv);
        let inv = gf.inv(entry(&rows[r], col)).expect("nonzero pivot");
        rows[r] = rows[r].pow(gf, inv);
        for i in 0..rows.len() {
            let f = entry(&rows[i], col);
            if i != r && !f.is_zero() {
                let fix = rows[r].pow(gf, gf.neg(f));
                rows[i] = rows[i].compose(gf, &fix);
            }
        }
        r += 1;
    }
    rows.truncate(r);
    rows
}

/// Pauli given as (wire, x exponent, z exponent) terms, phase 0.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SparsePauli {
    pub terms: Vec<(usize, Fe, Fe)>,
}

impl SparsePauli {
    pub fn z(w: usize, c: Fe) -> Self {
        SparsePauli {
            terms: vec![(w, Fe::ZERO, c)],
        }
    }

    pub fn x(w: usize, c: Fe) -> Self {
        SparsePauli {
            terms: vec![(w, c, Fe::ZERO)],
        }
    }

    /// `Z^u` on `wires` (a computational-basis linear functional).
    pub fn z_type(wires: &[usize], u: &[Fe]) -> Self {
        SparsePauli {
            terms: wires
                .iter()
                .zip(u)
                .filter(|(_, c)| !c.is_zero())
                .map(|(&w, &c)| (w, Fe::ZERO, c))
                .collect(),
        }
    }

    /// `X^u` on `wires`: measuring it equals applying F then measuring `Z^u`.
    pub fn x_type(wires: &[usize], u: &[Fe]) -> Self {
        SparsePauli {
            terms: wires
                .iter()
                .zip(u)
                .filter(|(_, c)| !c.is_zero())
                .map(|(&w, &c)| (w, c, Fe::ZERO))
                .collect(),
        }
    }

    pub fn from_pauli(e: &PauliOp, wires: &[usize]) -> Self {
        SparsePauli {
            terms: wires
                .iter()
                .enumerate()
                .filter(|&(i, _)| !e.x[i].is_zero() || !e.z[i].is_zero())
                .map(|(i, &w)| (w, e.x[i], e.z[i]))
                .collect(),
        }
    }
}

impl Backend for StabState {
    fn gf(&self) -> Gf {
        self.gf
    }

    fn name(&self) -> &'static str {
        "stabilizer"
    }

    fn num_wires(&self) -> usize {
        self.loc.len()
    }

    fn alloc(&mut self) -> Result<usize> {
        Ok(match self.free.pop() {
            Some(w) => w,
            None => self.push_wire(),
        })
    }

    fn free(&mut self, w: usize, rng: &mut dyn RngCore) -> Result<()> {
        self.reset(w, rng);
        self.free.push(w);
        Ok(())
    }

    fn measure_and_free(&mut self, w: usize, rng: &mut dyn RngCore) -> Result<Fe> {
        let a = self.reset(w, rng);
        self.free.push(w);
        Ok(a)
    }

    fn apply(&mut self, g: &GateOp, rng: &mut dyn RngCore) -> Result<Option<Fe>> {
        match *g {
            GateOp::Toffoli { .. } => Err(Error::UnsupportedGate {
                backend: "stabilizer",
                gate: g.name(),
            }),
            GateOp::Measure { w } => Ok(Some(self.measure_pauli(&SparsePauli::z(w, Fe::ONE), rng))),
            GateOp::PrepZero { w } | GateOp::Discard { w } => {
                self.reset(w, rng);
                Ok(None)
            }
            GateOp::PrepPlus { w } => {
                self.reset(w, rng);
                self.conj(&GateOp::Fourier { r: Fe::ONE, w })?;
                Ok(None)
            }
            _ => {
                self.conj(g)?;
                Ok(None)
            }
        }
    }

    fn measure(&mut self, p: &SparsePauli, rng: &mut dyn RngCore) -> Result<Fe> {
        Ok(self.measure_pauli(p, rng))
    }
}
