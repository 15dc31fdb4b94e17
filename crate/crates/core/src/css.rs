//! Quantum polynomial codes `C^delta = V^(q) ∩ F^{⊗n} W^(q)`.
//!
//! `V = V^delta` and `W = W^{delta'}` (scaled), `delta' = n - delta - 1`, so
//! `V_0 = W^⊥` and `W_0 = V^⊥`. A logical basis state is
//! `E|a> = sum over q in V_0 of |q + a·1>`, logical `X` is `X^{1}` on every
//! position and logical `Z` is `Z^{d}` with `d` the scaling vector.

use alloc::vec;
use alloc::vec::Vec;

use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::backend::Backend;
use crate::circuit::{linear_map_circuit, Circuit, GateOp};
use crate::error::{Error, Result};
use crate::field::{interpolate, solve_any, vandermonde, Fe, FieldMatrix, FieldParams, Gf};
use crate::pauli::PauliOp;
use crate::rng::uniform;
use crate::rs::{dual_code, parity_checks, rs_syndrome, ClassicalSyndrome, Codeword, RsCode};
use crate::stabilizer::SparsePauli;
use crate::support::SupportSet;

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct CssCode {
    pub v_code: RsCode,
    pub w_code: RsCode,
    v0: RsCode,
    w0: RsCode,
    d: Vec<Fe>,
}

impl CssCode {
    /// `C^delta` on `params.n()` positions.
    pub fn new(params: FieldParams, delta: usize) -> Result<Self> {
        let n = params.n();
        if delta == 0 || delta + 1 >= n {
            return Err(Error::InvalidParams(alloc::format!(
                "delta={delta} needs 0 < delta < n-1 for n={n}"
            )));
        }
        let v_code = RsCode::new(params, delta, false)?;
        let v0 = RsCode::new(params, delta, true)?;
        let w_code = dual_code(&v0);
        let w0 = dual_code(&v_code);
        let d = crate::rs::scaling_vector(&params);
        Ok(CssCode {
            v_code,
            w_code,
            v0,
            w0,
            d,
        })
    }

    /// `C^{delta'}`: the code the d-scaled Fourier transform maps onto.
    pub fn dual(&self) -> CssCode {
        CssCode::new(self.v_code.params, self.delta_dual()).expect("delta' is valid when delta is")
    }

    pub fn n(&self) -> usize {
        self.v_code.n()
    }

    pub fn delta(&self) -> usize {
        self.v_code.delta
    }

    pub fn delta_dual(&self) -> usize {
        self.n() - self.delta() - 1
    }

    pub fn params(&self) -> FieldParams {
        self.v_code.params
    }

    pub fn gf(&self) -> Gf {
        self.v_code.params.gf()
    }

    pub fn v0(&self) -> &RsCode {
        &self.v0
    }

    pub fn w0(&self) -> &RsCode {
        &self.w0
    }

    pub fn scaling(&self) -> &[Fe] {
        &self.d
    }

    /// `V^⊥ ⊆ W`, checked on basis vectors: every parity check of `V` is
    /// orthogonal to every parity check of `W`.
    pub fn dual_containment_holds(&self) -> bool {
        let gf = self.gf();
        let hv = parity_checks(&self.v_code);
        let hw = parity_checks(&self.w_code);
        hv.iter().all(|a| hw.iter().all(|b| gf.dot(a, b).is_zero()))
    }

    pub fn encoded_dim(&self) -> usize {
        self.v_code.dim() - self.v0.dim()
    }

    /// `min(dist V, dist W)`, a lower bound on the quantum distance.
    pub fn distance_bound(&self) -> usize {
        self.v_code.distance().min(self.w_code.distance())
    }

    pub fn logical_x(&self, c: Fe) -> PauliOp {
        PauliOp::from_parts(vec![c; self.n()], vec![Fe::ZERO; self.n()])
    }

    pub fn logical_z(&self, c: Fe) -> PauliOp {
        let gf = self.gf();
        let z = self.d.iter().map(|&di| gf.mul(di, c)).collect();
        PauliOp::from_parts(vec![Fe::ZERO; self.n()], z)
    }

    /// Whether `e` acts as a stabilizer (up to phase) on the code space.
    pub fn is_stabilizer(&self, e: &PauliOp) -> bool {
        self.v0.contains(&e.x) && self.w0.contains(&e.z)
    }

    /// Whether `e` either has a nonzero syndrome or acts trivially.
    pub fn is_detectable(&self, e: &PauliOp) -> bool {
        !quantum_syndrome(self, e).is_zero() || self.is_stabilizer(e)
    }

    /// Logical `(X power, Z power)` of a Pauli with zero syndrome.
    pub fn logical_class(&self, e: &PauliOp) -> Option<(Fe, Fe)> {
        let qx = self.v_code.polynomial_of(&e.x)?;
        let qz = self.w_code.polynomial_of(&e.z)?;
        Some((qx.coeff(0), qz.coeff(0)))
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct QuantumSyndrome {
    /// `V`-syndrome of the shift part (computational basis).
    pub v_part: ClassicalSyndrome,
    /// `W`-syndrome of the phase part (Fourier basis).
    pub w_part: ClassicalSyndrome,
}

impl QuantumSyndrome {
    pub fn is_zero(&self) -> bool {
        self.v_part.iter().chain(&self.w_part).all(|s| s.is_zero())
    }

    pub fn len(&self) -> usize {
        self.v_part.len() + self.w_part.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

pub fn quantum_syndrome(code: &CssCode, e: &PauliOp) -> QuantumSyndrome {
    QuantumSyndrome {
        v_part: rs_syndrome(&code.v_code, &e.x),
        w_part: rs_syndrome(&code.w_code, &e.z),
    }
}

/// Same action on the code space up to a global phase: the shift parts
/// differ by an element of `V_0` and the phase parts by one of `W_0`.
pub fn code_equivalent(code: &CssCode, e1: &PauliOp, e2: &PauliOp) -> bool {
    let gf = code.gf();
    let dx: Vec<Fe> = e1.x.iter().zip(&e2.x).map(|(&a, &b)| gf.sub(a, b)).collect();
    let dz: Vec<Fe> = e1.z.iter().zip(&e2.z).map(|(&a, &b)| gf.sub(a, b)).collect();
    code.v0.contains(&dx) && code.w0.contains(&dz)
}

/// Unitary encoder on `n` wires, all starting in |0> except the input on
/// wire 0: Fourier on wires `1..=delta`, then the Vandermonde map from
/// coefficients to evaluations.
pub fn encoding_circuit(code: &CssCode) -> Result<Circuit> {
    let gf = code.gf();
    let n = code.n();
    let mut c = Circuit::new(&gf, n);
    for w in 1..=code.delta() {
        c.push(GateOp::Fourier { r: Fe::ONE, w })?;
    }
    c.extend(&linear_map_circuit(&gf, &vandermonde(&code.params(), n)?)?)?;
    Ok(c)
}

/// Inverse of [`encoding_circuit`]: `E|a>` becomes `|a>|0...0>`.
pub fn decoding_circuit(code: &CssCode) -> Result<Circuit> {
    encoding_circuit(code)?.inverse()
}

/// Encodes the content of `wires[0]` into all of `wires` (the others must
/// be in |0>). Basis-only backends get a uniformly sampled codeword instead
/// of the superposition.
pub fn encode_on(
    backend: &mut dyn Backend,
    code: &CssCode,
    wires: &[usize],
    rng: &mut dyn RngCore,
) -> Result<()> {
    if backend.basis_only() {
        let gf = code.gf();
        for &w in &wires[1..=code.delta()] {
            let c = uniform(&gf, rng);
            backend.apply(&GateOp::XShift { c, w }, rng)?;
        }
        let lin = linear_map_circuit(&gf, &vandermonde(&code.params(), code.n())?)?;
        backend.run(&lin, wires, rng)?;
    } else {
        backend.run(&encoding_circuit(code)?, wires, rng)?;
    }
    Ok(())
}

/// Undoes [`encode_on`] on an error-free codeword, frees wires `1..n` and
/// returns the wire holding the logical qupit.
pub fn decode_clean(
    backend: &mut dyn Backend,
    code: &CssCode,
    wires: &[usize],
    rng: &mut dyn RngCore,
) -> Result<usize> {
    let gf = code.gf();
    let inv = linear_map_circuit(&gf, &vandermonde(&code.params(), code.n())?)?.inverse()?;
    backend.run(&inv, wires, rng)?;
    if !backend.basis_only() {
        for &w in &wires[1..=code.delta()] {
            backend.apply(&GateOp::FourierInv { r: Fe::ONE, w }, rng)?;
        }
    }
    backend.free_all(&wires[1..], rng)?;
    Ok(wires[0])
}

/// Prepares `sum over w in code of |w>` on wires that start in |0>.
pub fn prepare_code_state(
    backend: &mut dyn Backend,
    code: &RsCode,
    wires: &[usize],
    rng: &mut dyn RngCore,
) -> Result<()> {
    let gf = code.params.gf();
    let n = code.n();
    let basis = code.generator_basis();
    // Columns: the code basis, completed to an invertible matrix by unit vectors.
    let mut cols: Vec<Codeword> = basis.clone();
    for i in 0..n {
        if cols.len() == n {
            break;
        }
        let mut e = vec![Fe::ZERO; n];
        e[i] = Fe::ONE;
        cols.push(e);
        let m = FieldMatrix::from_rows(&cols)?;
        if m.rank(&gf) < cols.len() {
            cols.pop();
        }
    }
    let m = FieldMatrix::from_rows(&cols)?.transpose();
    for &w in &wires[..basis.len()] {
        if backend.basis_only() {
            let c = uniform(&gf, rng);
            backend.apply(&GateOp::XShift { c, w }, rng)?;
        } else {
            backend.apply(&GateOp::Fourier { r: Fe::ONE, w }, rng)?;
        }
    }
    backend.run(&linear_map_circuit(&gf, &m)?, wires, rng)?;
    Ok(())
}

#[derive(Copy, Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum CheckBasis {
    /// Measure `Z^u`, i.e. the functional `u` of the computational word.
    Computational,
    /// Measure `X^u`, i.e. `u` applied to the word after `F^{⊗n}`.
    Fourier,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct CheckMeasurement {
    pub basis: CheckBasis,
    pub functional: Vec<Fe>,
}

impl CheckMeasurement {
    pub fn as_pauli(&self, wires: &[usize]) -> SparsePauli {
        match self.basis {
            CheckBasis::Computational => SparsePauli::z_type(wires, &self.functional),
            CheckBasis::Fourier => SparsePauli::x_type(wires, &self.functional),
        }
    }
}

/// Combinations of `checks` vanishing on `b`, in a fixed order.
pub fn checks_outside(gf: &Gf, checks: &[Codeword], b: SupportSet) -> Vec<Codeword> {
    if b.is_empty() {
        return checks.to_vec();
    }
    let n = checks.first().map_or(0, Vec::len);
    let bs = b.to_vec();
    let mut m = FieldMatrix::zeros(bs.len(), checks.len());
    for (r, &i) in bs.iter().enumerate() {
        for (j, h) in checks.iter().enumerate() {
            m.set(r, j, h[i]);
        }
    }
    m.null_space(gf)
        .into_iter()
        .map(|c| {
            let mut u = vec![Fe::ZERO; n];
            for (j, h) in checks.iter().enumerate() {
                for k in 0..n {
                    u[k] = gf.add(u[k], gf.mul(c[j], h[k]));
                }
            }
            u
        })
        .collect()
}

/// Measurements, supported outside `b`, whose all-zero outcome certifies
/// membership in the neighborhood `C_b`.
pub fn cb_check_spec(code: &CssCode, b: SupportSet) -> Vec<CheckMeasurement> {
    let gf = code.gf();
    let comp = checks_outside(&gf, &parity_checks(&code.v_code), b);
    let four = checks_outside(&gf, &parity_checks(&code.w_code), b);
    comp.into_iter()
        .map(|functional| CheckMeasurement {
            basis: CheckBasis::Computational,
            functional,
        })
        .chain(four.into_iter().map(|functional| CheckMeasurement {
            basis: CheckBasis::Fourier,
            functional,
        }))
        .collect()
}

/// Measures the quantum syndrome directly with Pauli measurements: `Z^h` for
/// the parity checks `h` of `V` and `X^u` for those of `W`. The latter
/// return `-u.z` for a phase error `Z^z`, so they are negated. On basis-only
/// backends the phase part is reported as zero.
pub fn measure_syndrome(
    backend: &mut dyn Backend,
    code: &CssCode,
    wires: &[usize],
    rng: &mut dyn RngCore,
) -> Result<QuantumSyndrome> {
    let gf = code.gf();
    let v_part = parity_checks(&code.v_code)
        .iter()
        .map(|h| backend.measure(&SparsePauli::z_type(wires, h), rng))
        .collect::<Result<Vec<_>>>()?;
    let hw = parity_checks(&code.w_code);
    let w_part = if backend.basis_only() {
        vec![Fe::ZERO; hw.len()]
    } else {
        hw.iter()
            .map(|u| {
                backend
                    .measure(&SparsePauli::x_type(wires, u), rng)
                    .map(|a| gf.neg(a))
            })
            .collect::<Result<Vec<_>>>()?
    };
    Ok(QuantumSyndrome { v_part, w_part })
}

/// Exponents on `cols` reproducing `syndrome` under `checks`, if any.
fn solve_on(gf: &Gf, checks: &[Codeword], syndrome: &[Fe], cols: &[usize], n: usize) -> Option<Vec<Fe>> {
    let mut m = FieldMatrix::zeros(checks.len(), cols.len());
    for (r, h) in checks.iter().enumerate() {
        for (c, &i) in cols.iter().enumerate() {
            m.set(r, c, h[i]);
        }
    }
    let sol = solve_any(gf, &m, syndrome)?;
    let mut full = vec![Fe::ZERO; n];
    for (c, &i) in cols.iter().enumerate() {
        full[i] = sol[c];
    }
    Some(full)
}

/// Smallest `B~ ⊇ erasures` with `|B~| <= t` admitting a Pauli on `B~` with
/// this syndrome, together with that Pauli. Any two such Paulis differ by a
/// stabilizer when `2t` is below the distance.
pub fn find_correction(
    code: &CssCode,
    syndrome: &QuantumSyndrome,
    erasures: SupportSet,
    t: usize,
) -> Option<(SupportSet, PauliOp)> {
    let gf = code.gf();
    let n = code.n();
    if erasures.len() > t {
        return None;
    }
    let hv = parity_checks(&code.v_code);
    let hw = parity_checks(&code.w_code);
    let rest = erasures.complement(n);
    for extra in 0..=t - erasures.len() {
        for add in rest.subsets_of_size(extra) {
            let bt = erasures.union(add);
            let cols = bt.to_vec();
            let Some(x) = solve_on(&gf, &hv, &syndrome.v_part, &cols, n) else {
                continue;
            };
            let Some(z) = solve_on(&gf, &hw, &syndrome.w_part, &cols, n) else {
                continue;
            };
            return Some((bt, PauliOp::from_parts(x, z)));
        }
    }
    None
}

/// Syndrome measurement, correction within radius `t`, and decoding of one
/// code block. Returns the logical wire, or `None` when no correction of
/// weight at most `t` outside `erasures` fits (the wires are then untouched
/// apart from the syndrome measurement).
pub fn correct_and_decode(
    backend: &mut dyn Backend,
    code: &CssCode,
    wires: &[usize],
    erasures: SupportSet,
    t: usize,
    rng: &mut dyn RngCore,
) -> Result<Option<(usize, SupportSet)>> {
    let syn = measure_syndrome(backend, code, wires, rng)?;
    let Some((bt, e)) = find_correction(code, &syn, erasures, t) else {
        return Ok(None);
    };
    backend.apply_pauli(wires, &e.inverse(&code.gf()), rng)?;
    Ok(Some((decode_clean(backend, code, wires, rng)?, bt)))
}

/// Number of positions the interpolation circuit needs.
pub fn interpolation_need(code: &CssCode) -> usize {
    (code.delta() + 1).max(code.n() - code.delta())
}

/// Circuit on `n + 1` wires (ancilla last) mapping `E|a> ⊗ |0>` to
/// `E|0> ⊗ |a>` while touching only the positions in `honest` plus the
/// ancilla. Uses the first [`interpolation_need`] positions of `honest`.
pub fn interpolation_circuit(code: &CssCode, honest: SupportSet) -> Result<Circuit> {
    let gf = code.gf();
    let params = code.params();
    let n = code.n();
    let need = interpolation_need(code);
    if honest.len() < need {
        return Err(Error::InsufficientShares {
            need,
            have: honest.len(),
        });
    }
    let a: Vec<usize> = honest.iter().take(need).collect();
    let a_set: SupportSet = a.iter().copied().collect();
    let anc = n;
    let mut c = Circuit::new(&gf, n + 1);
    // anc += q(0) via Lagrange weights at 0 over delta + 1 points.
    let base = &a[..=code.delta()];
    for &i in base {
        let xi = params.point(i);
        let mut lam = Fe::ONE;
        for &j in base {
            if j != i {
                let xj = params.point(j);
                lam = gf.mul(lam, gf.div(gf.neg(xj), gf.sub(xi, xj))?);
            }
        }
        if !lam.is_zero() {
            c.push(GateOp::CAdd {
                scale: lam,
                src: i,
                dst: anc,
            })?;
        }
    }
    // q -= anc * L with L(0) = 1 and L = 0 off the chosen positions.
    let mut pts = vec![(Fe::ZERO, Fe::ONE)];
    pts.extend(a_set.complement(n).iter().map(|j| (params.point(j), Fe::ZERO)));
    let l = interpolate(&gf, &pts)?;
    for &i in &a {
        let li = l.eval(&gf, params.point(i));
        if !li.is_zero() {
            c.push(GateOp::CAdd {
                scale: gf.neg(li),
                src: anc,
                dst: i,
            })?;
        }
    }
    Ok(c)
}

/// Extracts the logical qupit from `wires` into a fresh ancilla using only
/// the positions in `honest`; returns the ancilla. The block is left in
/// `E|0>` up to whatever errors sat outside the chosen positions.
pub fn ideal_interpolation(
    backend: &mut dyn Backend,
    code: &CssCode,
    wires: &[usize],
    honest: SupportSet,
    rng: &mut dyn RngCore,
) -> Result<usize> {
    let circ = interpolation_circuit(code, honest)?;
    let anc = backend.alloc()?;
    let mut all = wires.to_vec();
    all.push(anc);
    backend.run(&circ, &all, rng)?;
    Ok(anc)
}
