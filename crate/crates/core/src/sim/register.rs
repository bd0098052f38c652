//! Amplitude kernels shared by the pure and mixed representations.
//!
//! A density matrix on `n` qubits is stored as a vector over `2n` bits:
//! element `rho[r][c]` lives at index `r | c << n`. Conjugating by `U` on
//! qubit `q` is then `U` on bit `q` and `conj(U)` on bit `q + n`.

use num_complex::Complex64 as C;

pub(crate) type Mat2 = [[C; 2]; 2];

const ZERO: C = C::new(0.0, 0.0);
const ONE: C = C::new(1.0, 0.0);

pub(crate) fn conj2(m: &Mat2) -> Mat2 {
    [
        [m[0][0].conj(), m[0][1].conj()],
        [m[1][0].conj(), m[1][1].conj()],
    ]
}

fn apply_1q(v: &mut [C], bit: usize, m: &Mat2) {
    let stride = 1usize << bit;
    for base in 0..v.len() {
        if base & stride != 0 {
            continue;
        }
        let (a, b) = (v[base], v[base | stride]);
        v[base] = m[0][0] * a + m[0][1] * b;
        v[base | stride] = m[1][0] * a + m[1][1] * b;
    }
}

/// Diagonal two-qubit gate; `d` is indexed by `bit_a | bit_b << 1`.
fn apply_diag2(v: &mut [C], a: usize, b: usize, d: &[C; 4]) {
    for (i, x) in v.iter_mut().enumerate() {
        let k = (i >> a & 1) | (i >> b & 1) << 1;
        *x *= d[k];
    }
}

fn apply_cx(v: &mut [C], control: usize, target: usize) {
    let (cm, tm) = (1usize << control, 1usize << target);
    for i in 0..v.len() {
        if i & cm != 0 && i & tm == 0 {
            v.swap(i, i | tm);
        }
    }
}

fn apply_swap(v: &mut [C], a: usize, b: usize) {
    let (am, bm) = (1usize << a, 1usize << b);
    for i in 0..v.len() {
        if i & am != 0 && i & bm == 0 {
            v.swap(i, (i & !am) | bm);
        }
    }
}

/// Unnormalized quantum register; `weight` is the probability mass.
pub(crate) trait Register: Clone + Send + Sync {
    fn zero(n: usize) -> Self;
    fn gate1(&mut self, q: usize, m: &Mat2);
    fn diag2(&mut self, a: usize, b: usize, d: &[C; 4]);
    fn cx(&mut self, control: usize, target: usize);
    fn swap(&mut self, a: usize, b: usize);
    /// Keeps only the component with qubit `q` equal to `outcome`.
    fn project(&mut self, q: usize, outcome: usize);
    fn weight(&self) -> f64;
    /// Multiplies the probability mass by `w`.
    fn scale(&mut self, w: f64);
    /// Merges a register with the same classical record; pure states
    /// cannot be merged.
    fn try_merge(&mut self, other: &Self) -> bool;
    fn depolarize2(&mut self, a: usize, b: usize, p: f64) -> bool;
    /// Diagonal in the computational basis (unnormalized).
    fn probabilities(&self) -> Vec<f64>;
    /// `Tr(P rho)` or `<psi|P|psi>` for a Pauli given as X/Z bit masks and
    /// the number of Y factors.
    #[cfg_attr(not(test), allow(dead_code))]
    fn pauli(&self, x_mask: usize, z_mask: usize, n_y: usize) -> C;
}

#[cfg_attr(not(test), allow(dead_code))]
fn pauli_phase(c: usize, z_mask: usize, n_y: usize) -> C {
    let iy = [ONE, C::new(0.0, 1.0), C::new(-1.0, 0.0), C::new(0.0, -1.0)][n_y % 4];
    if (c & z_mask).count_ones() % 2 == 1 {
        -iy
    } else {
        iy
    }
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct StateVector {
    pub n: usize,
    pub amps: Vec<C>,
}

impl Register for StateVector {
    fn zero(n: usize) -> Self {
        let mut amps = vec![ZERO; 1 << n];
        amps[0] = ONE;
        StateVector { n, amps }
    }

    fn gate1(&mut self, q: usize, m: &Mat2) {
        apply_1q(&mut self.amps, q, m);
    }

    fn diag2(&mut self, a: usize, b: usize, d: &[C; 4]) {
        apply_diag2(&mut self.amps, a, b, d);
    }

    fn cx(&mut self, control: usize, target: usize) {
        apply_cx(&mut self.amps, control, target);
    }

    fn swap(&mut self, a: usize, b: usize) {
        apply_swap(&mut self.amps, a, b);
    }

    fn project(&mut self, q: usize, outcome: usize) {
        for (i, x) in self.amps.iter_mut().enumerate() {
            if i >> q & 1 != outcome {
                *x = ZERO;
            }
        }
    }

    fn weight(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    fn scale(&mut self, w: f64) {
        let s = w.sqrt();
        for a in &mut self.amps {
            *a *= s;
        }
    }

    fn try_merge(&mut self, _: &Self) -> bool {
        false
    }

    fn depolarize2(&mut self, _: usize, _: usize, p: f64) -> bool {
        p == 0.0
    }

    fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    fn pauli(&self, x_mask: usize, z_mask: usize, n_y: usize) -> C {
        // <psi|P|psi> with P|c> = phase(c)|c ^ x>
        self.amps
            .iter()
            .enumerate()
            .map(|(c, a)| self.amps[c ^ x_mask].conj() * pauli_phase(c, z_mask, n_y) * a)
            .sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct DensityMatrix {
    pub n: usize,
    pub elems: Vec<C>,
}

impl DensityMatrix {
    #[cfg_attr(not(test), allow(dead_code))]
    pub fn from_state(sv: &StateVector) -> Self {
        let n = sv.n;
        let dim = 1usize << n;
        let mut elems = vec![ZERO; dim * dim];
        for r in 0..dim {
            for c in 0..dim {
                elems[r | c << n] = sv.amps[r] * sv.amps[c].conj();
            }
        }
        DensityMatrix { n, elems }
    }

    pub fn get(&self, r: usize, c: usize) -> C {
        self.elems[r | c << self.n]
    }
}

impl Register for DensityMatrix {
    fn zero(n: usize) -> Self {
        let mut elems = vec![ZERO; 1 << (2 * n)];
        elems[0] = ONE;
        DensityMatrix { n, elems }
    }

    fn gate1(&mut self, q: usize, m: &Mat2) {
        apply_1q(&mut self.elems, q, m);
        apply_1q(&mut self.elems, q + self.n, &conj2(m));
    }

    fn diag2(&mut self, a: usize, b: usize, d: &[C; 4]) {
        apply_diag2(&mut self.elems, a, b, d);
        let dc = [d[0].conj(), d[1].conj(), d[2].conj(), d[3].conj()];
        apply_diag2(&mut self.elems, a + self.n, b + self.n, &dc);
    }

    fn cx(&mut self, control: usize, target: usize) {
        apply_cx(&mut self.elems, control, target);
        apply_cx(&mut self.elems, control + self.n, target + self.n);
    }

    fn swap(&mut self, a: usize, b: usize) {
        apply_swap(&mut self.elems, a, b);
        apply_swap(&mut self.elems, a + self.n, b + self.n);
    }

    fn project(&mut self, q: usize, outcome: usize) {
        let n = self.n;
        for (i, x) in self.elems.iter_mut().enumerate() {
            if i >> q & 1 != outcome || i >> (q + n) & 1 != outcome {
                *x = ZERO;
            }
        }
    }

    fn weight(&self) -> f64 {
        let dim = 1usize << self.n;
        (0..dim).map(|r| self.elems[r | r << self.n].re).sum()
    }

    fn scale(&mut self, w: f64) {
        for x in &mut self.elems {
            *x *= w;
        }
    }

    fn try_merge(&mut self, other: &Self) -> bool {
        for (a, b) in self.elems.iter_mut().zip(&other.elems) {
            *a += b;
        }
        true
    }

    /// `rho -> (1-p) rho + p Tr_ab(rho) ⊗ I/4`.
    fn depolarize2(&mut self, a: usize, b: usize, p: f64) -> bool {
        if p == 0.0 {
            return true;
        }
        let n = self.n;
        let bits = [a, b, a + n, b + n];
        let mask: usize = bits.iter().map(|&x| 1usize << x).sum();
        let spread = |k: usize| -> usize {
            // k in 0..16 -> index offset; low two bits are the row pair
            bits.iter()
                .enumerate()
                .map(|(j, &bit)| (k >> j & 1) << bit)
                .sum()
        };
        let offsets: Vec<usize> = (0..16).map(spread).collect();
        // row pair == column pair along the diagonal of the traced block
        let diag = [0usize, 5, 10, 15];
        for base in 0..self.elems.len() {
            if base & mask != 0 {
                continue;
            }
            let trace: C = diag.iter().map(|&k| self.elems[base | offsets[k]]).sum();
            for (k, &off) in offsets.iter().enumerate() {
                let x = &mut self.elems[base | off];
                *x *= 1.0 - p;
                if diag.contains(&k) {
                    *x += trace * (p / 4.0);
                }
            }
        }
        true
    }

    fn probabilities(&self) -> Vec<f64> {
        let dim = 1usize << self.n;
        (0..dim).map(|r| self.elems[r | r << self.n].re).collect()
    }

    fn pauli(&self, x_mask: usize, z_mask: usize, n_y: usize) -> C {
        // Tr(P rho) = sum_c phase(c) rho[c][c ^ x]
        let dim = 1usize << self.n;
        (0..dim)
            .map(|c| pauli_phase(c, z_mask, n_y) * self.get(c, c ^ x_mask))
            .sum()
    }
}
