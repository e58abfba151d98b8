//! Test-only helpers: a tiny qubit-space ket algebra for writing expected
//! states by hand, and a dense-matrix stabilizer oracle that shares no code
//! with the library's own routines.

#![allow(dead_code)]

use ion_cluster::RegisterState;
use num_complex::Complex64;

pub type Vector = Vec<f64>;

pub const H: f64 = std::f64::consts::FRAC_1_SQRT_2;

pub fn g() -> Vector {
    vec![1.0, 0.0]
}
pub fn e() -> Vector {
    vec![0.0, 1.0]
}
/// |g⟩ + |e⟩ (unnormalized)
pub fn gp() -> Vector {
    vec![1.0, 1.0]
}
/// |g⟩ − |e⟩ (unnormalized)
pub fn gm() -> Vector {
    vec![1.0, -1.0]
}

pub fn neg(v: Vector) -> Vector {
    v.into_iter().map(|x| -x).collect()
}

pub fn kron(a: &[f64], b: &[f64]) -> Vector {
    a.iter()
        .flat_map(|x| b.iter().map(move |y| x * y))
        .collect()
}

pub fn product(factors: &[Vector]) -> Vector {
    factors.iter().fold(vec![1.0], |acc, f| kron(&acc, f))
}

pub fn lin(terms: &[(f64, Vector)]) -> Vector {
    let n = terms[0].1.len();
    (0..n)
        .map(|i| terms.iter().map(|(c, v)| c * v[i]).sum())
        .collect()
}

/// Embeds `Σ_n ions_n ⊗ |n⟩` (each `ions_n` a 2^N qubit vector, g ↔ 0,
/// ion 1 most significant) into the three-level register space.
pub fn embed(parts: &[(Vector, usize)], n_max: usize) -> RegisterState {
    let n_ions = parts[0].0.len().trailing_zeros() as usize;
    let fock = n_max + 1;
    let mut amps = vec![Complex64::new(0.0, 0.0); 3usize.pow(n_ions as u32) * fock];
    for (ions, n) in parts {
        assert_eq!(ions.len(), 1 << n_ions);
        for (bits, a) in ions.iter().enumerate() {
            let ternary = (0..n_ions).fold(0, |acc, k| acc * 3 + ((bits >> (n_ions - 1 - k)) & 1));
            amps[ternary * fock + n] += Complex64::new(*a, 0.0);
        }
    }
    RegisterState::from_amplitudes(n_ions, n_max, amps).expect("fixture must be normalized")
}

/// Restricts a leakage-free register state to the qubit space of its ions
/// (mode in |0⟩ only).
pub fn qubit_part(state: &RegisterState) -> Vec<Complex64> {
    let n = state.n_ions();
    let fock = state.n_max() + 1;
    (0..1usize << n)
        .map(|bits| {
            let ternary = (0..n).fold(0, |acc, k| acc * 3 + ((bits >> (n - 1 - k)) & 1));
            state.amplitudes()[ternary * fock]
        })
        .collect()
}

/// Cluster reference built by literally distributing the operator-valued
/// product `⊗_α (|0⟩_α Z_{α+1} + |1⟩_α)` from the right.
pub fn oracle_cluster(n: usize) -> Vec<Complex64> {
    // tail = state of qubits α..N
    let mut tail = lin(&[(1.0, g()), (1.0, e())]);
    for _ in 1..n {
        let z_tail: Vector = {
            let half = tail.len() / 2;
            tail.iter()
                .enumerate()
                .map(|(i, a)| if i < half { *a } else { -a })
                .collect()
        };
        let mut next = kron(&g(), &z_tail);
        let with_e = kron(&e(), &tail);
        for (x, y) in next.iter_mut().zip(with_e) {
            *x += y;
        }
        tail = next;
    }
    let scale = 2f64.powf(-(n as f64) / 2.0);
    tail.into_iter()
        .map(|a| Complex64::new(a * scale, 0.0))
        .collect()
}

type Matrix = Vec<Vec<Complex64>>;

fn mat_kron(a: &Matrix, b: &Matrix) -> Matrix {
    let (ra, rb) = (a.len(), b.len());
    let mut out = vec![vec![Complex64::new(0.0, 0.0); ra * rb]; ra * rb];
    for i in 0..ra {
        for j in 0..ra {
            for k in 0..rb {
                for l in 0..rb {
                    out[i * rb + k][j * rb + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

fn pauli(name: char) -> Matrix {
    let c = |x: f64| Complex64::new(x, 0.0);
    match name {
        'I' => vec![vec![c(1.0), c(0.0)], vec![c(0.0), c(1.0)]],
        'X' => vec![vec![c(0.0), c(1.0)], vec![c(1.0), c(0.0)]],
        'Z' => vec![vec![c(1.0), c(0.0)], vec![c(0.0), c(-1.0)]],
        _ => unreachable!(),
    }
}

/// Dense `Z_{a-1} X_a Z_{a+1}` on N qubits (1-based `a`).
pub fn stabilizer_matrix(n: usize, a: usize) -> Matrix {
    let factors: String = (1..=n)
        .map(|k| {
            if k == a {
                'X'
            } else if k + 1 == a || k == a + 1 {
                'Z'
            } else {
                'I'
            }
        })
        .collect();
    factors
        .chars()
        .map(pauli)
        .reduce(|acc, m| mat_kron(&acc, &m))
        .unwrap()
}

pub fn expectation(m: &Matrix, psi: &[Complex64]) -> Complex64 {
    let mut total = Complex64::new(0.0, 0.0);
    for (i, row) in m.iter().enumerate() {
        let mv: Complex64 = row.iter().zip(psi).map(|(x, y)| x * y).sum();
        total += psi[i].conj() * mv;
    }
    total
}

/// `⟨K_a⟩` for every `a`, by dense matrices.
pub fn oracle_stabilizers(psi: &[Complex64]) -> Vec<f64> {
    let n = psi.len().trailing_zeros() as usize;
    (1..=n)
        .map(|a| {
            let v = expectation(&stabilizer_matrix(n, a), psi);
            assert!(v.im.abs() < 1e-12);
            v.re
        })
        .collect()
}

// ---------------------------------------------------------------------------
// The six-ion schedule's intermediate states, written out by hand. Ions not
// yet touched by a pulse sit in their initial preps.

fn ions(factors: &[Vector]) -> Vector {
    product(factors)
}

/// Ions 1–3 after the carrier step: (g+e) g (g−e) − (g−e) e (e+g).
fn block_a() -> Vector {
    lin(&[
        (1.0, ions(&[gp(), g(), gm()])),
        (-1.0, ions(&[gm(), e(), gp()])),
    ])
}

/// Ions 1–3 in the one-phonon branch after ion 3's second phase gate:
/// (g+e) g (−g−e) − (g−e) e (e−g).
fn block_b() -> Vector {
    lin(&[
        (1.0, ions(&[gp(), g(), neg(gp())])),
        (-1.0, ions(&[gm(), e(), neg(gm())])),
    ])
}

/// Expected state after each of the eleven steps of the six-ion schedule.
pub fn cluster6_fixtures(n_max: usize) -> Vec<RegisterState> {
    let p = H;
    let mut out = Vec::new();

    // step 1: (e1|0⟩ + g1|1⟩)/√2
    let tail = [gm(), gm(), gm(), gp()];
    let s = p * p.powi(4);
    out.push(embed(
        &[
            (lin(&[(s, ions(&[&[e(), g()][..], &tail].concat()))]), 0),
            (lin(&[(s, ions(&[&[g(), g()][..], &tail].concat()))]), 1),
        ],
        n_max,
    ));

    // step 2: ½[e1(g3−e3)|0⟩ − g1(g3+e3)|1⟩]
    let s = 0.5 * p.powi(3);
    out.push(embed(
        &[
            (lin(&[(s, ions(&[e(), g(), gm(), gm(), gm(), gp()]))]), 0),
            (lin(&[(-s, ions(&[g(), g(), gp(), gm(), gm(), gp()]))]), 1),
        ],
        n_max,
    ));

    // step 3: ½[e1 g2 (g3−e3) − g1 e2 (e3+g3)]|0⟩
    out.push(embed(
        &[(
            lin(&[
                (s, ions(&[e(), g(), gm(), gm(), gm(), gp()])),
                (-s, ions(&[g(), e(), gp(), gm(), gm(), gp()])),
            ]),
            0,
        )],
        n_max,
    ));

    // step 4: 1/(2√2) [(g1+e1) g2 (g3−e3) − (g1−e1) e2 (e3+g3)]|0⟩
    let s = 0.5 * p * p.powi(3);
    out.push(embed(
        &[(lin(&[(s, product(&[block_a(), gm(), gm(), gp()]))]), 0)],
        n_max,
    ));

    // step 5: ¼ [A] g4 (|0⟩ − |1⟩)
    let s = 0.25 * p.powi(2);
    out.push(embed(
        &[
            (lin(&[(s, product(&[block_a(), g(), gm(), gp()]))]), 0),
            (lin(&[(-s, product(&[block_a(), g(), gm(), gp()]))]), 1),
        ],
        n_max,
    ));

    // step 6: ¼ {[A]|0⟩ − [B]|1⟩} g4
    out.push(embed(
        &[
            (lin(&[(s, product(&[block_a(), g(), gm(), gp()]))]), 0),
            (lin(&[(-s, product(&[block_b(), g(), gm(), gp()]))]), 1),
        ],
        n_max,
    ));

    // step 7: 1/(4√2) {[A](g5−e5)|0⟩ + [B](g5+e5)|1⟩} g4
    let s = 0.25 * p * p;
    out.push(embed(
        &[
            (lin(&[(s, product(&[block_a(), g(), gm(), gp()]))]), 0),
            (lin(&[(s, product(&[block_b(), g(), gp(), gp()]))]), 1),
        ],
        n_max,
    ));

    // step 8: 1/(4√2) {[A] g4 (g5−e5) + [B] e4 (g5+e5)}|0⟩
    let upper = |last: Vector| {
        lin(&[
            (1.0, product(&[block_a(), g(), gm(), last.clone()])),
            (1.0, product(&[block_b(), e(), gp(), last])),
        ])
    };
    out.push(embed(&[(lin(&[(s, upper(gp()))]), 0)], n_max));

    // step 9: ⅛ {…} g6 (|0⟩ + |1⟩)
    let s = 0.125;
    out.push(embed(
        &[(lin(&[(s, upper(g()))]), 0), (lin(&[(s, upper(g()))]), 1)],
        n_max,
    ));

    // step 10: ⅛ ({…}|0⟩ + {[A] g4 (−g5−e5) + [B] e4 (−g5+e5)}|1⟩) g6
    let lower = |last: Vector| {
        lin(&[
            (1.0, product(&[block_a(), g(), neg(gp()), last.clone()])),
            (1.0, product(&[block_b(), e(), neg(gm()), last])),
        ])
    };
    out.push(embed(
        &[(lin(&[(s, upper(g()))]), 0), (lin(&[(s, lower(g()))]), 1)],
        n_max,
    ));

    // step 11: ⅛ ({…} g6 + {…} e6)|0⟩
    out.push(embed(
        &[(lin(&[(s, upper(g())), (s, lower(e()))]), 0)],
        n_max,
    ));

    out
}
