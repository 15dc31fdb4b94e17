//! Trusted-party references for sharing and computation.

use alloc::vec::Vec;

use rand::RngCore;

use crate::backend::Backend;
use crate::circuit::Circuit;
use crate::css::{encode_on, CssCode};
use crate::error::Result;
use crate::field::Fe;
use crate::share::ShareState;
use crate::support::SupportSet;

/// Ideal VQSS: the receiver gets the dealer's qupit, or `None` ("D is
/// cheating") when the dealer does not hand it over.
pub fn vqss_ideal(input: Option<usize>) -> Option<usize> {
    input
}

/// Ideal secret sharing: the party encodes the dealer's qupit and hands
/// component `i` to player `i`; `None` when the dealer refuses.
pub fn iss_ideal(
    backend: &mut dyn Backend,
    code: &CssCode,
    input: Option<usize>,
    rng: &mut dyn RngCore,
) -> Result<Option<Vec<usize>>> {
    let Some(w) = input else { return Ok(None) };
    let mut wires = alloc::vec![w];
    wires.extend(backend.alloc_n(code.n() - 1)?);
    encode_on(backend, code, &wires, rng)?;
    Ok(Some(wires))
}

/// Ideal computation: refused inputs (`None`) become `|0>` and are
/// reported in the returned set; the circuit runs on the inputs followed
/// by fresh `|0>` ancillas. Returns every circuit wire.
pub fn mpqc_ideal(
    backend: &mut dyn Backend,
    circuit: &Circuit,
    inputs: &[Option<usize>],
    rng: &mut dyn RngCore,
) -> Result<(Vec<usize>, SupportSet)> {
    let mut refused = SupportSet::EMPTY;
    let mut wires = Vec::with_capacity(circuit.num_qupits);
    for (i, inp) in inputs.iter().enumerate() {
        match inp {
            Some(w) => wires.push(*w),
            None => {
                refused.insert(i);
                wires.push(backend.alloc()?);
            }
        }
    }
    while wires.len() < circuit.num_qupits {
        wires.push(backend.alloc()?);
    }
    backend.run(circuit, &wires, rng)?;
    Ok((wires, refused))
}

/// [`mpqc_ideal`] on basis values.
pub fn mpqc_ideal_values(circuit: &Circuit, inputs: &[Option<Fe>]) -> Result<Vec<Fe>> {
    let gf = circuit.gf();
    let mut values: Vec<Fe> = inputs.iter().map(|v| v.unwrap_or(Fe::ZERO)).collect();
    values.resize(circuit.num_qupits, Fe::ZERO);
    let mut st = ShareState::from_values(gf, values);
    let mut rng = crate::rng::trial_rng(0, 0);
    let wires: Vec<usize> = (0..circuit.num_qupits).collect();
    st.run(circuit, &wires, &mut rng)?;
    Ok(st.values[..circuit.num_qupits].to_vec())
}
