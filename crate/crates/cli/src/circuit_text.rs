//! Plain-text circuits: a `qupits <m> p <p>` header, then one gate per line.
//! Blank lines and `#` comments are ignored.

use anyhow::{bail, Context, Result};
use vqss_core::circuit::{Circuit, GateOp};
use vqss_core::{Fe, Gf};

pub fn parse_circuit(text: &str) -> Result<Circuit> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let (ln, header) = lines.next().context("empty circuit file")?;
    let h: Vec<&str> = header.split_whitespace().collect();
    let (m, p) = match h.as_slice() {
        ["qupits", m, "p", p] => (m.parse::<usize>()?, p.parse::<u64>()?),
        _ => bail!("line {ln}: expected `qupits <m> p <p>`"),
    };
    let gf = Gf::new(p)?;
    let mut c = Circuit::new(&gf, m);
    for (ln, line) in lines {
        let g = parse_gate(&gf, line).with_context(|| format!("line {ln}: `{line}`"))?;
        c.push(g).with_context(|| format!("line {ln}"))?;
    }
    Ok(c)
}

fn parse_gate(gf: &Gf, line: &str) -> Result<GateOp> {
    let mut it = line.split_whitespace();
    let op = it.next().unwrap_or_default();
    let args: Vec<i64> = it.map(|s| s.parse::<i64>()).collect::<Result<_, _>>()?;
    let want = |k: usize| -> Result<()> {
        if args.len() != k {
            bail!("{op} takes {k} arguments, got {}", args.len());
        }
        Ok(())
    };
    let w = |i: usize| -> Result<usize> { usize::try_from(args[i]).context("negative wire index") };
    let f = |i: usize| gf.elem(args[i]);
    Ok(match op {
        "X" => {
            want(2)?;
            GateOp::XShift { c: f(0), w: w(1)? }
        }
        "Z" => {
            want(2)?;
            GateOp::ZPhase { c: f(0), w: w(1)? }
        }
        "CADD" => {
            want(3)?;
            GateOp::CAdd { scale: f(0), src: w(1)?, dst: w(2)? }
        }
        "MUL" => {
            want(2)?;
            GateOp::Mul { c: f(0), w: w(1)? }
        }
        "SWAP" => {
            want(2)?;
            GateOp::Swap { a: w(0)?, b: w(1)? }
        }
        "FOUR" => {
            want(2)?;
            GateOp::Fourier { r: f(0), w: w(1)? }
        }
        "FOURINV" => {
            want(2)?;
            GateOp::FourierInv { r: f(0), w: w(1)? }
        }
        "TOFF" => {
            want(3)?;
            GateOp::Toffoli { a: w(0)?, b: w(1)?, c: w(2)? }
        }
        "MEAS" => {
            want(1)?;
            GateOp::Measure { w: w(0)? }
        }
        "PREP0" => {
            want(1)?;
            GateOp::PrepZero { w: w(0)? }
        }
        "PREPPLUS" => {
            want(1)?;
            GateOp::PrepPlus { w: w(0)? }
        }
        "DISCARD" => {
            want(1)?;
            GateOp::Discard { w: w(0)? }
        }
        _ => bail!("unknown gate `{op}`"),
    })
}

pub fn format_circuit(c: &Circuit) -> String {
    let v = |x: Fe| x.value();
    let mut out = format!("qupits {} p {}\n", c.num_qupits, c.p);
    for g in &c.gates {
        let line = match *g {
            GateOp::XShift { c, w } => format!("X {} {w}", v(c)),
            GateOp::ZPhase { c, w } => format!("Z {} {w}", v(c)),
            GateOp::CAdd { scale, src, dst } => format!("CADD {} {src} {dst}", v(scale)),
            GateOp::Mul { c, w } => format!("MUL {} {w}", v(c)),
            GateOp::Swap { a, b } => format!("SWAP {a} {b}"),
            GateOp::Fourier { r, w } => format!("FOUR {} {w}", v(r)),
            GateOp::FourierInv { r, w } => format!("FOURINV {} {w}", v(r)),
            GateOp::Toffoli { a, b, c } => format!("TOFF {a} {b} {c}"),
            GateOp::Measure { w } => format!("MEAS {w}"),
            GateOp::PrepZero { w } => format!("PREP0 {w}"),
            GateOp::PrepPlus { w } => format!("PREPPLUS {w}"),
            GateOp::Discard { w } => format!("DISCARD {w}"),
        };
        out.push_str(&line);
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let text = "# toffoli\nqupits 3 p 11\nX 3 0\nCADD 2 0 1\nTOFF 0 1 2\nFOUR 1 2\nMEAS 2\n";
        let c = parse_circuit(text).unwrap();
        assert_eq!(c.gates.len(), 5);
        assert_eq!(parse_circuit(&format_circuit(&c)).unwrap(), c);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(parse_circuit("").is_err());
        assert!(parse_circuit("qupits 2 p 4\n").is_err());
        assert!(parse_circuit("qupits 2 p 5\nX 1\n").is_err());
        assert!(parse_circuit("qupits 2 p 5\nX 1 2\n").is_err());
        assert!(parse_circuit("qupits 2 p 5\nFROB 1 1\n").is_err());
    }
}
