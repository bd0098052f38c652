//! Line-oriented circuit format.
//!
//! ```text
//! # comment
//! qubits 3
//! clbits 1
//! name demo
//! h 0
//! cx 0 1
//! rzz 1 2 1.5707963267948966
//! measure 2 0
//! condx 0 0
//! ```
//!
//! Mnemonics are case-insensitive. Angles are decimal radians and are
//! written with Rust's shortest round-trip float formatting, so
//! `parse_circuit(&emit_circuit(c)) == c` holds bit for bit.

use super::{Circuit, Gate};
use crate::error::{Error, Result};

pub fn emit_circuit(c: &Circuit) -> String {
    let mut out = format!("qubits {}\n", c.n_qubits());
    if c.n_clbits() > 0 {
        out.push_str(&format!("clbits {}\n", c.n_clbits()));
    }
    if let Some(name) = &c.name {
        out.push_str(&format!("name {name}\n"));
    }
    for g in c.gates() {
        out.push_str(g.mnemonic());
        for q in g.qubits() {
            out.push_str(&format!(" {q}"));
        }
        if let Some(b) = g.clbit() {
            out.push_str(&format!(" {b}"));
        }
        if let Some(theta) = g.angle() {
            out.push_str(&format!(" {theta:?}"));
        }
        out.push('\n');
    }
    out
}

pub fn parse_circuit(text: &str) -> Result<Circuit> {
    let mut circuit: Option<Circuit> = None;
    let mut header_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let head = parts.next().unwrap_or("").to_ascii_lowercase();
        let args: Vec<&str> = parts.collect();

        let Some(c) = circuit.as_mut() else {
            if head != "qubits" || args.len() != 1 {
                return Err(Error::format(lineno, "expected header `qubits N`"));
            }
            circuit = Some(Circuit::new(int(lineno, args[0])?));
            header_line = lineno;
            continue;
        };

        match head.as_str() {
            "clbits" => {
                if lineno != header_line + 1 || !c.is_empty() || args.len() != 1 {
                    return Err(Error::format(lineno, "`clbits M` must directly follow `qubits N`"));
                }
                let name = c.name.take();
                *c = Circuit::with_clbits(c.n_qubits(), int(lineno, args[0])?);
                c.name = name;
            }
            "name" => {
                if args.is_empty() {
                    return Err(Error::format(lineno, "`name` needs a value"));
                }
                c.name = Some(args.join(" "));
            }
            _ => {
                let gate = parse_gate(lineno, &head, &args)?;
                c.push(gate).map_err(|e| Error::format(lineno, e.to_string()))?;
            }
        }
    }
    circuit.ok_or_else(|| Error::format(1, "empty input: expected header `qubits N`"))
}

fn parse_gate(lineno: usize, head: &str, args: &[&str]) -> Result<Gate> {
    let arity = |n: usize| -> Result<()> {
        if args.len() != n {
            return Err(Error::format(
                lineno,
                format!("`{head}` takes {n} arguments, got {}", args.len()),
            ));
        }
        Ok(())
    };
    let q = |i: usize| int(lineno, args[i]);
    let angle = |i: usize| -> Result<f64> {
        let v: f64 = args[i]
            .parse()
            .map_err(|_| Error::format(lineno, format!("not an angle: {:?}", args[i])))?;
        if !v.is_finite() {
            return Err(Error::format(lineno, "angle must be finite"));
        }
        Ok(v)
    };
    let gate = match head {
        "rx" => {
            arity(2)?;
            Gate::Rx { q: q(0)?, theta: angle(1)? }
        }
        "rz" => {
            arity(2)?;
            Gate::Rz { q: q(0)?, theta: angle(1)? }
        }
        "h" => {
            arity(1)?;
            Gate::H { q: q(0)? }
        }
        "x" => {
            arity(1)?;
            Gate::X { q: q(0)? }
        }
        "sx" => {
            arity(1)?;
            Gate::Sx { q: q(0)? }
        }
        "rzz" => {
            arity(3)?;
            Gate::Rzz { a: q(0)?, b: q(1)?, theta: angle(2)? }
        }
        "cx" => {
            arity(2)?;
            Gate::Cx { control: q(0)?, target: q(1)? }
        }
        "cz" => {
            arity(2)?;
            Gate::Cz { a: q(0)?, b: q(1)? }
        }
        "swap" => {
            arity(2)?;
            Gate::Swap { a: q(0)?, b: q(1)? }
        }
        "measure" => {
            arity(2)?;
            Gate::Measure { q: q(0)?, clbit: q(1)? }
        }
        "condx" => {
            arity(2)?;
            Gate::CondX { q: q(0)?, clbit: q(1)? }
        }
        other => return Err(Error::format(lineno, format!("unknown mnemonic `{other}`"))),
    };
    Ok(gate)
}

fn int(lineno: usize, s: &str) -> Result<usize> {
    s.parse()
        .map_err(|_| Error::format(lineno, format!("not a non-negative integer: {s:?}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_single_cx() {
        let c = parse_circuit("qubits 2\ncx 0 1\n").unwrap();
        assert_eq!(c.n_qubits(), 2);
        assert_eq!(c.gates(), &[Gate::Cx { control: 0, target: 1 }]);
    }

    #[test]
    fn parses_rzz_angle_exactly() {
        let c = parse_circuit("qubits 2\nrzz 0 1 1.5707963267948966\n").unwrap();
        assert_eq!(
            c.gates(),
            &[Gate::Rzz { a: 0, b: 1, theta: std::f64::consts::FRAC_PI_2 }]
        );
    }

    #[test]
    fn index_error_reports_line() {
        let err = parse_circuit("qubits 1\ncx 0 1\n").unwrap_err();
        assert!(matches!(err, Error::Format { line: 2, .. }), "{err}");
    }

    #[test]
    fn other_errors() {
        assert!(matches!(parse_circuit("qubits 2\nfoo 0\n"), Err(Error::Format { line: 2, .. })));
        assert!(matches!(parse_circuit("qubits 2\nh 0 1\n"), Err(Error::Format { line: 2, .. })));
        assert!(matches!(parse_circuit("cx 0 1\n"), Err(Error::Format { line: 1, .. })));
        assert!(matches!(
            parse_circuit("qubits 2\nclbits 1\ncondx 0 0\n"),
            Err(Error::Format { line: 3, .. })
        ));
        assert!(parse_circuit("").is_err());
    }

    #[test]
    fn comments_case_and_name() {
        let c = parse_circuit("# hi\nQUBITS 2\nclbits 1\nname bell pair\nH 0 # x\nCX 0 1\nmeasure 1 0\n")
            .unwrap();
        assert_eq!(c.name.as_deref(), Some("bell pair"));
        assert_eq!(c.len(), 3);
        assert_eq!(c.n_clbits(), 1);
    }

    fn arb_circuit() -> impl Strategy<Value = Circuit> {
        let gate = (0usize..11, 0usize..4, 1usize..4, any::<f64>().prop_filter("finite", |x| x.is_finite()));
        (proptest::collection::vec(gate, 0..30), any::<bool>()).prop_map(|(specs, named)| {
            let mut c = Circuit::with_clbits(4, 2);
            if named {
                c.name = Some("prop".into());
            }
            let mut measured = [false; 2];
            for (kind, a, off, theta) in specs {
                let b = (a + off) % 4;
                let cb = a % 2;
                let g = match kind {
                    0 => Gate::Rx { q: a, theta },
                    1 => Gate::Rz { q: a, theta },
                    2 => Gate::H { q: a },
                    3 => Gate::X { q: a },
                    4 => Gate::Sx { q: a },
                    5 => Gate::Rzz { a, b, theta },
                    6 => Gate::Cx { control: a, target: b },
                    7 => Gate::Cz { a, b },
                    8 => Gate::Swap { a, b },
                    9 => {
                        measured[cb] = true;
                        Gate::Measure { q: a, clbit: cb }
                    }
                    _ if measured[cb] => Gate::CondX { q: a, clbit: cb },
                    _ => Gate::H { q: a },
                };
                c.push(g).unwrap();
            }
            c
        })
    }

    proptest! {
        #[test]
        fn parse_emit_round_trip(c in arb_circuit()) {
            let text = emit_circuit(&c);
            let back = parse_circuit(&text).unwrap();
            prop_assert_eq!(&back, &c);
            prop_assert_eq!(emit_circuit(&back), text);
        }
    }
}
