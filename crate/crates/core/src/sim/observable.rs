//! Real linear combinations of Pauli strings.
//!
//! Text form is one term per line, `coef PAULISTRING`, e.g. `1.0 ZZIIIIII`.
//! Character `i` of the string acts on qubit `i`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    fn from_char(c: char) -> Option<Pauli> {
        match c.to_ascii_uppercase() {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }

    fn as_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PauliTerm {
    pub coeff: f64,
    pub paulis: Vec<Pauli>,
}

impl PauliTerm {
    /// Bit masks `(x, z, n_y)` with Y contributing to both masks.
    #[cfg_attr(not(test), allow(dead_code))]
    pub(crate) fn masks(&self) -> (usize, usize, usize) {
        let (mut x, mut z, mut ny) = (0, 0, 0);
        for (q, p) in self.paulis.iter().enumerate() {
            match p {
                Pauli::I => {}
                Pauli::X => x |= 1 << q,
                Pauli::Z => z |= 1 << q,
                Pauli::Y => {
                    x |= 1 << q;
                    z |= 1 << q;
                    ny += 1;
                }
            }
        }
        (x, z, ny)
    }

    /// Qubits with a non-identity factor.
    pub(crate) fn support(&self) -> usize {
        self.paulis
            .iter()
            .enumerate()
            .filter(|(_, p)| **p != Pauli::I)
            .fold(0, |m, (q, _)| m | 1 << q)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Observable {
    n_qubits: usize,
    terms: Vec<PauliTerm>,
}

impl Observable {
    pub fn new(n_qubits: usize) -> Self {
        Observable {
            n_qubits,
            terms: Vec::new(),
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn terms(&self) -> &[PauliTerm] {
        &self.terms
    }

    pub fn push(&mut self, coeff: f64, paulis: Vec<Pauli>) -> Result<()> {
        if paulis.len() != self.n_qubits {
            return Err(Error::param(
                "observable",
                format!("Pauli string has {} factors, expected {}", paulis.len(), self.n_qubits),
            ));
        }
        if !coeff.is_finite() {
            return Err(Error::param("observable", "coefficient must be finite"));
        }
        self.terms.push(PauliTerm { coeff, paulis });
        Ok(())
    }

    /// Single term, e.g. `Observable::pauli("ZIZ")`.
    pub fn pauli(s: &str) -> Result<Self> {
        Observable::parse(&format!("1.0 {s}"))
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut obs: Option<Observable> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let lineno = idx + 1;
            let mut parts = line.split_whitespace();
            let (Some(c), Some(s), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(Error::format(lineno, "expected `coefficient PAULISTRING`"));
            };
            let coeff: f64 = c
                .parse()
                .map_err(|_| Error::format(lineno, format!("bad coefficient {c:?}")))?;
            let paulis = s
                .chars()
                .map(Pauli::from_char)
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| Error::format(lineno, format!("bad Pauli string {s:?}")))?;
            let o = obs.get_or_insert_with(|| Observable::new(paulis.len()));
            o.push(coeff, paulis)
                .map_err(|e| Error::format(lineno, e.to_string()))?;
        }
        obs.ok_or_else(|| Error::format(1, "observable has no terms"))
    }

    pub fn emit(&self) -> String {
        self.terms
            .iter()
            .map(|t| {
                let s: String = t.paulis.iter().map(|p| p.as_char()).collect();
                format!("{:?} {}\n", t.coeff, s)
            })
            .collect()
    }

    /// Moves the factor on qubit `q` to `map[q]` in an `n_new`-qubit
    /// observable.
    pub fn remap(&self, map: &[usize], n_new: usize) -> Result<Observable> {
        if map.len() != self.n_qubits || map.iter().any(|&m| m >= n_new) {
            return Err(Error::param("layout", "does not cover the observable's qubits"));
        }
        let mut out = Observable::new(n_new);
        for t in &self.terms {
            let mut p = vec![Pauli::I; n_new];
            for (q, &f) in t.paulis.iter().enumerate() {
                p[map[q]] = f;
            }
            out.push(t.coeff, p)?;
        }
        Ok(out)
    }

    /// Greedy qubit-wise commuting groups in term order. Each group carries
    /// its joint measurement basis and the indices of its terms.
    pub(crate) fn groups(&self) -> Vec<Group> {
        let mut groups: Vec<Group> = Vec::new();
        for (i, t) in self.terms.iter().enumerate() {
            let fits = |g: &Group| {
                t.paulis
                    .iter()
                    .zip(&g.basis)
                    .all(|(a, b)| *a == Pauli::I || *b == Pauli::I || a == b)
            };
            match groups.iter_mut().find(|g| fits(g)) {
                Some(g) => {
                    for (b, a) in g.basis.iter_mut().zip(&t.paulis) {
                        if *a != Pauli::I {
                            *b = *a;
                        }
                    }
                    g.terms.push(i);
                }
                None => groups.push(Group {
                    basis: t.paulis.clone(),
                    terms: vec![i],
                }),
            }
        }
        groups
    }
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Group {
    pub basis: Vec<Pauli>,
    pub terms: Vec<usize>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_emit() {
        let o = Observable::parse("# energy\n1.0 ZZII\n-0.5 IXIY\n\n2 iiiz\n").unwrap();
        assert_eq!(o.n_qubits(), 4);
        assert_eq!(o.terms().len(), 3);
        assert_eq!(o.terms()[2].paulis, vec![Pauli::I, Pauli::I, Pauli::I, Pauli::Z]);
        assert_eq!(Observable::parse(&o.emit()).unwrap(), o);
        assert!(Observable::parse("1.0 ZZ\n1.0 Z\n").is_err());
        assert!(Observable::parse("1.0 ZQ\n").is_err());
        assert!(Observable::parse("").is_err());
    }

    #[test]
    fn masks_and_support() {
        let o = Observable::pauli("XYZI").unwrap();
        let t = &o.terms()[0];
        assert_eq!(t.masks(), (0b011, 0b110, 1));
        assert_eq!(t.support(), 0b111);
    }

    #[test]
    fn grouping() {
        let o = Observable::parse("1 ZZI\n1 IZZ\n1 XII\n1 IXI\n1 ZIZ\n").unwrap();
        let g = o.groups();
        assert_eq!(g.len(), 2);
        assert_eq!(g[0].terms, vec![0, 1, 4]);
        assert_eq!(g[0].basis, vec![Pauli::Z; 3]);
        assert_eq!(g[1].terms, vec![2, 3]);
    }

    #[test]
    fn remap_moves_factors() {
        let o = Observable::pauli("XZ").unwrap();
        let r = o.remap(&[3, 1], 4).unwrap();
        assert_eq!(r.terms()[0].paulis, vec![Pauli::I, Pauli::Z, Pauli::I, Pauli::X]);
        assert!(o.remap(&[0], 4).is_err());
    }
}
