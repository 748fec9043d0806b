//! Seeded random instances for property sweeps and self-tests.

use num_complex::Complex64 as C64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::gaussian::GaussianSpec;
use crate::kernel::{ComplexMatrix, I, ONE, ZERO};
use crate::targets::GroupTarget;
use crate::words::{Alphabet, Element, Word};

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn complex(rng: &mut impl Rng) -> C64 {
    C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

pub fn matrix(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |_, _| complex(rng))
}

pub fn real_matrix(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |_, _| C64::new(rng.gen_range(-1.0..1.0), 0.0))
}

pub fn anti_hermitian(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    let a = matrix(rng, n);
    (&a - a.adjoint()).scale(0.5)
}

pub fn hermitian(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    let a = matrix(rng, n);
    (&a + a.adjoint()).scale(0.5)
}

/// Haar-ish unitary from the QR factorization of a random matrix.
pub fn unitary(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    if n == 0 {
        return ComplexMatrix::zeros(0, 0);
    }
    matrix(rng, n).qr().q()
}

/// `L'_r = Σ_s U_rs L_s`; leaves `Σ L_r ⊗ L_r*` unchanged.
pub fn unitary_mix(rng: &mut impl Rng, l: &[ComplexMatrix]) -> Vec<ComplexMatrix> {
    let d = l.len();
    let u = unitary(rng, d);
    (0..d)
        .map(|r| {
            l.iter()
                .enumerate()
                .fold(ComplexMatrix::zeros(l[0].nrows(), l[0].ncols()), |acc, (s, ls)| acc + ls * u[(r, s)])
        })
        .collect()
}

fn normal(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    let v = unitary(rng, n);
    let d = ComplexMatrix::from_fn(n, n, |i, j| if i == j { complex(rng) } else { ZERO });
    &v * d * v.adjoint()
}

fn pad_atoms(rng: &mut impl Rng, d: usize, mut atoms: Vec<ComplexMatrix>) -> Vec<ComplexMatrix> {
    atoms.truncate(d);
    if atoms.is_empty() {
        return atoms;
    }
    unitary_mix(rng, &atoms)
}

/// Random spec satisfying `Σ L*L = Σ LL*` for a matrix of size `m`, built
/// from normal matrices and `{A, A*}` pairs and then unitarily mixed.
pub fn base_valid(rng: &mut impl Rng, target: GroupTarget, d: usize) -> GaussianSpec {
    let m = target.matrix_size();
    let mut atoms = Vec::with_capacity(d);
    while atoms.len() < d {
        if d - atoms.len() >= 2 && rng.gen_bool(0.5) {
            let a = matrix(rng, m).scale(std::f64::consts::FRAC_1_SQRT_2);
            atoms.push(a.adjoint());
            atoms.push(a);
        } else {
            atoms.push(normal(rng, m));
        }
    }
    let l = pad_atoms(rng, d, atoms);
    GaussianSpec::new(target, l, anti_hermitian(rng, m)).expect("shapes agree")
}

/// Random spec satisfying the matrix conditions of `target` (and the base
/// conditions).
pub fn target_valid(rng: &mut impl Rng, target: GroupTarget, d: usize) -> GaussianSpec {
    let m = target.matrix_size();
    let (atoms, h): (Vec<ComplexMatrix>, ComplexMatrix) = match target {
        GroupTarget::UPlus(_) => return base_valid(rng, target, d),
        GroupTarget::OPlus(_) => {
            ((0..d).map(|_| real_antisymmetric(rng, m)).collect(), real_antisymmetric(rng, m))
        }
        GroupTarget::SpPlus(n) => ((0..d).map(|_| sp_anti_hermitian(rng, n)).collect(), sp_anti_hermitian(rng, n)),
        GroupTarget::ClassicalU(_) => {
            let mut atoms = Vec::with_capacity(d);
            while atoms.len() < d {
                if d - atoms.len() >= 2 && rng.gen_bool(0.5) {
                    let a = matrix(rng, m).scale(std::f64::consts::FRAC_1_SQRT_2);
                    atoms.push(a.adjoint());
                    atoms.push(a);
                } else {
                    atoms.push(hermitian(rng, m));
                }
            }
            (atoms, anti_hermitian(rng, m))
        }
        GroupTarget::Torus(_) => {
            let id = ComplexMatrix::identity(m, m);
            let atoms = (0..d).map(|_| &id * complex(rng)).collect();
            (atoms, id * (I * rng.gen_range(-1.0..1.0)))
        }
        GroupTarget::FreeGroupDual(_) => {
            let atoms = (0..d).map(|_| diagonal(rng, m, false)).collect();
            (atoms, diagonal(rng, m, true))
        }
    };
    let l = pad_atoms(rng, d, atoms);
    GaussianSpec::new(target, l, h).expect("shapes agree")
}

fn real_antisymmetric(rng: &mut impl Rng, m: usize) -> ComplexMatrix {
    let a = real_matrix(rng, m);
    &a - a.transpose()
}

fn diagonal(rng: &mut impl Rng, m: usize, imaginary: bool) -> ComplexMatrix {
    ComplexMatrix::from_fn(m, m, |i, j| match (i == j, imaginary) {
        (false, _) => ZERO,
        (true, false) => complex(rng),
        (true, true) => I * rng.gen_range(-1.0..1.0),
    })
}

/// Anti-hermitian element of `sp(n)`: `[[a, b], [-conj(b), conj(a)]]` with
/// `a* = -a` and `b` symmetric.
pub fn sp_anti_hermitian(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    let a = {
        let x = ComplexMatrix::from_fn(n, n, |_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        (&x - x.adjoint()).scale(0.5)
    };
    let b = {
        let x = ComplexMatrix::from_fn(n, n, |_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        (&x + x.transpose()).scale(0.5)
    };
    ComplexMatrix::from_fn(2 * n, 2 * n, |i, j| match (i < n, j < n) {
        (true, true) => a[(i, j)],
        (true, false) => b[(i, j - n)],
        (false, true) => -b[(i - n, j)].conj(),
        (false, false) => a[(i - n, j - n)].conj(),
    })
}

/// Breaks a target-valid spec while keeping it base-valid: either shifts `H`
/// or appends a random normal generator. The classical target constrains
/// only `W`, so there the generator is always appended.
pub fn perturbed(rng: &mut impl Rng, spec: &GaussianSpec, eps: f64) -> GaussianSpec {
    let m = spec.size();
    let mut out = spec.clone();
    let shift_h = rng.gen_bool(0.5) && !matches!(spec.target, GroupTarget::ClassicalU(_));
    if shift_h {
        out.h += anti_hermitian(rng, m).scale(eps);
    } else {
        out.l.push(normal(rng, m).scale(eps));
    }
    out
}

/// Random element with at most `max_terms` words of length `1..=max_len`.
/// Coefficients are a mix of `1`, signed reals and complex numbers.
pub fn element(rng: &mut impl Rng, alphabet: Alphabet, max_len: usize, max_terms: usize) -> Element {
    let letters = alphabet.letters();
    let mut x = Element::zero();
    for _ in 0..rng.gen_range(0..=max_terms) {
        let len = rng.gen_range(1..=max_len);
        let w: Word = (0..len).map(|_| *letters.choose(rng).expect("nonempty alphabet")).collect();
        let c = match rng.gen_range(0..4) {
            0 => ONE,
            1 => C64::new(rng.gen_range(-3.0..3.0), 0.0),
            2 => complex(rng),
            _ => C64::new(-(rng.gen_range(1..5) as f64), 0.0),
        };
        x.add_term(w, c);
    }
    if rng.gen_bool(0.1) {
        x.add_term(Word::unit(), complex(rng));
    }
    x
}

/// Random element with `ε(x) = 0`.
pub fn centered_element(rng: &mut impl Rng, alphabet: Alphabet, max_len: usize, max_terms: usize) -> Element {
    let x = element(rng, alphabet, max_len, max_terms.max(1));
    crate::gaussian::centered(&x)
}
