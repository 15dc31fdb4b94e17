//! Reed-Solomon evaluation codes, their scaled duals, syndromes and decoding.
//!
//! A code is the set of vectors `(s_1 q(1), ..., s_n q(n))` with `deg q <= delta`,
//! optionally restricted to `q(0) = 0`, where `s` is either all ones or the
//! scaling vector `d` from [`scaling_vector`]. With `delta' = n - delta - 1`,
//! the dual of `V^delta` is `W_0^{delta'}` and the dual of `V_0^delta` is
//! `W^{delta'}`; [`dual_code`] implements that map and is an involution.

use alloc::vec;
use alloc::vec::Vec;

use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{interpolate, solve_linear, vandermonde, Fe, FieldParams, FieldPoly};
use crate::rng::uniform;
use crate::support::SupportSet;

pub type Codeword = Vec<Fe>;
pub type ClassicalSyndrome = Vec<Fe>;

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct RsCode {
    pub params: FieldParams,
    pub delta: usize,
    pub through_zero: bool,
    pub scaling: Option<Vec<Fe>>,
}

/// `d` with `sum_i d_i f(i) = f(0)` for every `f` of degree below n.
pub fn scaling_vector(params: &FieldParams) -> Vec<Fe> {
    let n = params.n();
    let vt = vandermonde(params, n).expect("square").transpose();
    let mut e0 = vec![Fe::ZERO; n];
    e0[0] = Fe::ONE;
    solve_linear(params, &vt, &e0).expect("vandermonde with distinct points is invertible")
}

impl RsCode {
    /// `V^delta`, or `V_0^delta` when `through_zero`.
    pub fn new(params: FieldParams, delta: usize, through_zero: bool) -> Result<Self> {
        if delta >= params.n() {
            return Err(Error::InvalidParams(alloc::format!(
                "delta={delta} must be below n={}",
                params.n()
            )));
        }
        if through_zero && delta == 0 {
            return Err(Error::InvalidParams("V_0^0 is the zero code".into()));
        }
        Ok(RsCode {
            params,
            delta,
            through_zero,
            scaling: None,
        })
    }

    pub fn n(&self) -> usize {
        self.params.n()
    }

    pub fn is_scaled(&self) -> bool {
        self.scaling.is_some()
    }

    pub fn dim(&self) -> usize {
        if self.through_zero {
            self.delta
        } else {
            self.delta + 1
        }
    }

    /// Minimum Hamming distance.
    pub fn distance(&self) -> usize {
        let n = self.n();
        if self.through_zero {
            n - self.delta + 1
        } else {
            n - self.delta
        }
    }

    /// Error-correction radius `t`; up to `2t` erasures are recoverable.
    pub fn t(&self) -> usize {
        (self.distance() - 1) / 2
    }

    fn scale_at(&self, i: usize) -> Fe {
        self.scaling.as_ref().map_or(Fe::ONE, |d| d[i])
    }

    /// Codeword of a polynomial; the caller guarantees the degree bound.
    pub fn encode_poly(&self, q: &FieldPoly) -> Codeword {
        (0..self.n())
            .map(|i| {
                let v = q.eval(&self.params, self.params.point(i));
                self.params.mul(v, self.scale_at(i))
            })
            .collect()
    }

    /// Basis vectors: the (scaled) evaluations of the monomials the code allows.
    pub fn generator_basis(&self) -> Vec<Codeword> {
        let first = usize::from(self.through_zero);
        (first..=self.delta)
            .map(|j| {
                let mut c = vec![Fe::ZERO; j + 1];
                c[j] = Fe::ONE;
                self.encode_poly(&FieldPoly::new(c))
            })
            .collect()
    }

    /// Polynomial behind `word` if it is a codeword.
    pub fn polynomial_of(&self, word: &[Fe]) -> Option<FieldPoly> {
        let all: Vec<usize> = (0..self.n()).collect();
        self.fit(word, &all)
    }

    pub fn contains(&self, word: &[Fe]) -> bool {
        self.polynomial_of(word).is_some()
    }

    /// Unscaled value at position `i`.
    fn unscaled(&self, word: &[Fe], i: usize) -> Fe {
        match &self.scaling {
            None => word[i],
            Some(d) => self.params.div(word[i], d[i]).expect("scaling entries are nonzero"),
        }
    }

    /// Polynomial of allowed degree matching `word` on `positions`, if any.
    pub fn fit(&self, word: &[Fe], positions: &[usize]) -> Option<FieldPoly> {
        let free = self.dim();
        let mut pts: Vec<(Fe, Fe)> = Vec::with_capacity(free + 1);
        if self.through_zero {
            pts.push((Fe::ZERO, Fe::ZERO));
        }
        if positions.len() < free {
            return None;
        }
        for &i in &positions[..free] {
            pts.push((self.params.point(i), self.unscaled(word, i)));
        }
        let q = interpolate(&self.params, &pts).ok()?;
        let ok = positions[free..]
            .iter()
            .all(|&i| q.eval(&self.params, self.params.point(i)) == self.unscaled(word, i));
        ok.then_some(q)
    }
}

/// The dual code under the standard dot product.
pub fn dual_code(code: &RsCode) -> RsCode {
    let params = code.params;
    RsCode {
        params,
        delta: code.n() - code.delta - 1,
        through_zero: !code.through_zero,
        scaling: if code.is_scaled() {
            None
        } else {
            Some(scaling_vector(&params))
        },
    }
}

/// Fixed basis of the dual used for syndromes.
pub fn parity_checks(code: &RsCode) -> Vec<Codeword> {
    dual_code(code).generator_basis()
}

pub fn rs_syndrome(code: &RsCode, word: &[Fe]) -> ClassicalSyndrome {
    parity_checks(code)
        .iter()
        .map(|h| code.params.dot(h, word))
        .collect()
}

pub fn rs_detect(code: &RsCode, word: &[Fe]) -> bool {
    rs_syndrome(code, word).iter().all(|s| s.is_zero())
}

/// Random codeword whose polynomial has constant term `secret`.
pub fn rs_share<R: RngCore + ?Sized>(
    code: &RsCode,
    secret: Fe,
    rng: &mut R,
) -> Result<(Codeword, FieldPoly)> {
    if code.through_zero && !secret.is_zero() {
        return Err(Error::InvalidParams("code forces q(0)=0".into()));
    }
    let mut coeffs = vec![secret];
    coeffs.extend((1..=code.delta).map(|_| uniform(&code.params, rng)));
    let q = FieldPoly::new(coeffs);
    Ok((code.encode_poly(&q), q))
}

#[derive(Copy, Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum DecodeStatus {
    Decoded,
    Detected,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct DecodeOutcome {
    pub status: DecodeStatus,
    pub codeword: Option<Codeword>,
    /// Corrected positions outside the erasure set.
    pub error_support: SupportSet,
    /// Constant term of the decoded polynomial.
    pub secret: Option<Fe>,
}

impl DecodeOutcome {
    pub fn is_decoded(&self) -> bool {
        self.status == DecodeStatus::Decoded
    }

    fn detected() -> Self {
        DecodeOutcome {
            status: DecodeStatus::Detected,
            codeword: None,
            error_support: SupportSet::EMPTY,
            secret: None,
        }
    }
}

/// Decodes with up to `t - b` errors outside `b` erasures.
pub fn rs_decode(code: &RsCode, word: &[Fe], erasures: SupportSet) -> Result<DecodeOutcome> {
    rs_decode_within(code, word, erasures, code.t())
}

/// Like [`rs_decode`] but with an explicit radius `t` (at most the code's).
///
/// Exhaustive search over candidate error supports among the non-erased
/// positions, smallest first.
pub fn rs_decode_within(
    code: &RsCode,
    word: &[Fe],
    erasures: SupportSet,
    t: usize,
) -> Result<DecodeOutcome> {
    let n = code.n();
    if word.len() != n {
        return Err(Error::DimensionMismatch(alloc::format!(
            "word of length {} for n={n}",
            word.len()
        )));
    }
    let b = erasures.len();
    if t > code.t() {
        return Err(Error::InvalidParams("radius beyond the code's".into()));
    }
    if b > 2 * t {
        return Err(Error::TooManyErasures {
            erasures: b,
            limit: 2 * t,
        });
    }
    if b > t {
        // Only pure erasure recovery is possible.
        return Ok(decode_fixed(code, word, erasures, SupportSet::EMPTY).unwrap_or_else(DecodeOutcome::detected));
    }
    let live = erasures.complement(n);
    let mut found: Option<(FieldPoly, DecodeOutcome)> = None;
    for e in 0..=t - b {
        for support in live.subsets_of_size(e) {
            let kept: Vec<usize> = live.difference(support).to_vec();
            let Some(q) = code.fit(word, &kept) else {
                continue;
            };
            match &found {
                None => {
                    let cw = code.encode_poly(&q);
                    let error_support = live.iter().filter(|&i| cw[i] != word[i]).collect();
                    let outcome = DecodeOutcome {
                        status: DecodeStatus::Decoded,
                        secret: Some(q.coeff(0)),
                        codeword: Some(cw),
                        error_support,
                    };
                    if e == 0 {
                        return Ok(outcome);
                    }
                    found = Some((q, outcome));
                }
                Some((q0, _)) if *q0 != q => return Err(Error::AmbiguousDecoding),
                Some(_) => {}
            }
        }
    }
    Ok(found.map_or_else(DecodeOutcome::detected, |(_, o)| o))
}

fn decode_fixed(
    code: &RsCode,
    word: &[Fe],
    erasures: SupportSet,
    errors: SupportSet,
) -> Option<DecodeOutcome> {
    let kept: Vec<usize> = erasures.union(errors).complement(code.n()).to_vec();
    let q = code.fit(word, &kept)?;
    Some(DecodeOutcome {
        status: DecodeStatus::Decoded,
        secret: Some(q.coeff(0)),
        codeword: Some(code.encode_poly(&q)),
        error_support: errors,
    })
}
