//! Convolution `(f ∗ g)(x) = (f ⊗ g)(Δx)` of functionals on words.

use num_complex::Complex64 as C64;
use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::gaussian::{cook, eval_phi_word, CookedFunctional, GaussianSpec};
use crate::kernel::{anti_hermitian_residual, ComplexMatrix, ONE, ZERO};
use crate::targets::GroupTarget;
use crate::words::{Element, Letter, Word};

/// A linear functional that can be evaluated on words.
#[derive(Clone, Debug)]
pub enum WordFunctional<'a> {
    Gaussian(&'a CookedFunctional),
    Counit,
    /// `δ_v`: 1 on the word `v`, 0 on every other word.
    Coordinate(Word),
    Combination(Vec<(C64, WordFunctional<'a>)>),
}

impl WordFunctional<'_> {
    pub fn eval_word(&self, w: &Word) -> Result<C64> {
        match self {
            WordFunctional::Gaussian(f) => eval_phi_word(f, w),
            WordFunctional::Counit => Ok(w.counit()),
            WordFunctional::Coordinate(v) => Ok(if v == w { ONE } else { ZERO }),
            WordFunctional::Combination(parts) => {
                let mut s = ZERO;
                for (c, f) in parts {
                    s += c * f.eval_word(w)?;
                }
                Ok(s)
            }
        }
    }

    pub fn eval(&self, x: &Element) -> Result<C64> {
        let mut s = ZERO;
        for (w, c) in x.iter() {
            s += c * self.eval_word(w)?;
        }
        Ok(s)
    }
}

/// `(f ∗ g)(x)`; `n` is the range of the coproduct summation index.
pub fn convolve(f: &WordFunctional, g: &WordFunctional, x: &Element, n: usize, guard: usize) -> Result<C64> {
    let mut s = ZERO;
    for (l, r, c) in x.coproduct(n, guard)? {
        let fl = f.eval_word(&l)?;
        if fl != ZERO {
            s += c * fl * g.eval_word(&r)?;
        }
    }
    Ok(s)
}

/// Matrix of `D_H ∗ D_K - D_K ∗ D_H` on the generators `u_ij`.
pub fn drift_bracket(h: &ComplexMatrix, k: &ComplexMatrix, tol: f64, guard: usize) -> Result<ComplexMatrix> {
    let n = h.nrows();
    if h.shape() != (n, n) || k.shape() != (n, n) {
        return Err(Error::shape("drift pair", format!("two {n}x{n} matrices"), format!("{}x{}", k.nrows(), k.ncols())));
    }
    for m in [h, k] {
        let residual = anti_hermitian_residual(m);
        if residual > tol {
            return Err(Error::NotAntiHermitian { residual });
        }
    }
    let drift = |m: &ComplexMatrix| cook(&GaussianSpec::new(GroupTarget::UPlus(n), vec![], m.clone())?, tol);
    let (dh, dk) = (drift(h)?, drift(k)?);
    let (fh, fk) = (WordFunctional::Gaussian(&dh), WordFunctional::Gaussian(&dk));
    let mut out = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let x = Element::from(Letter::u(i as u32 + 1, j as u32 + 1));
            out[(i, j)] = convolve(&fh, &fk, &x, n, guard)? - convolve(&fk, &fh, &x, n, guard)?;
        }
    }
    Ok(out)
}

/// Evaluates convolution powers `f^{∗m}` by peeling one tensor factor at a
/// time off the coproduct, memoizing on `(m, word)`.
struct Powers<'a> {
    f: &'a WordFunctional<'a>,
    n: usize,
    guard: usize,
    expanded: usize,
    memo: HashMap<(usize, Word), C64>,
}

impl Powers<'_> {
    fn eval(&mut self, m: usize, w: &Word) -> Result<C64> {
        match m {
            0 => return Ok(w.counit()),
            1 => return self.f.eval_word(w),
            _ => {}
        }
        if let Some(v) = self.memo.get(&(m, w.clone())) {
            return Ok(*v);
        }
        let parts = w.coproduct(self.n, self.guard)?;
        self.expanded += parts.len();
        if self.expanded > self.guard {
            return Err(Error::GuardExceeded {
                terms: self.expanded as u128,
                limit: self.guard,
            });
        }
        let mut s = ZERO;
        for (l, r, c) in parts {
            let fl = self.f.eval_word(&l)?;
            if fl != ZERO {
                s += c * fl * self.eval(m - 1, &r)?;
            }
        }
        self.memo.insert((m, w.clone()), s);
        Ok(s)
    }
}

/// `Σ_{m=0..k} t^m/m! · f^{∗m}(x)` with `f^{∗0} = ε`.
///
/// This is a truncation of the convolution exponential; no error bound is
/// claimed.
pub fn conv_exp(f: &CookedFunctional, x: &Element, t: f64, order: usize, guard: usize) -> Result<C64> {
    if !t.is_finite() {
        return Err(Error::Invalid(format!("time parameter must be finite, got {t}")));
    }
    let wf = WordFunctional::Gaussian(f);
    let mut powers = Powers {
        f: &wf,
        n: f.coproduct_size(),
        guard,
        expanded: 0,
        memo: HashMap::new(),
    };
    let mut total = ZERO;
    for (w, c) in x.iter() {
        let mut coeff = 1.0;
        for m in 0..=order {
            if m > 0 {
                coeff *= t / m as f64;
            }
            total += c * coeff * powers.eval(m, w)?;
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::DEFAULT_TOL;
    use crate::kernel::{max_abs_diff, I};
    use crate::wordlang::parse;
    use crate::words::{Alphabet, DEFAULT_GUARD};

    fn rot() -> ComplexMatrix {
        ComplexMatrix::from_row_slice(2, 2, &[ZERO, ONE, -ONE, ZERO])
    }

    fn running() -> CookedFunctional {
        cook(
            &GaussianSpec::new(GroupTarget::UPlus(2), vec![rot()], ComplexMatrix::zeros(2, 2)).unwrap(),
            DEFAULT_TOL,
        )
        .unwrap()
    }

    #[test]
    fn counit_is_a_unit() {
        let f = running();
        let wf = WordFunctional::Gaussian(&f);
        for w in Alphabet::Matrix(2).words_up_to(2) {
            let x = Element::from(w);
            let v = wf.eval(&x).unwrap();
            let left = convolve(&WordFunctional::Counit, &wf, &x, 2, DEFAULT_GUARD).unwrap();
            let right = convolve(&wf, &WordFunctional::Counit, &x, 2, DEFAULT_GUARD).unwrap();
            assert!((left - v).norm() < 1e-15 && (right - v).norm() < 1e-15);
        }
    }

    #[test]
    fn drift_products() {
        let h = ComplexMatrix::from_row_slice(2, 2, &[I, ONE, -ONE, ZERO]);
        let k = ComplexMatrix::from_row_slice(2, 2, &[ZERO, I, I, I * 2.0]);
        let dh = cook(&GaussianSpec::new(GroupTarget::UPlus(2), vec![], h.clone()).unwrap(), DEFAULT_TOL).unwrap();
        let dk = cook(&GaussianSpec::new(GroupTarget::UPlus(2), vec![], k.clone()).unwrap(), DEFAULT_TOL).unwrap();
        let hk = &h * &k;
        for i in 1..=2u32 {
            for j in 1..=2u32 {
                let x = Element::from(Letter::u(i, j));
                let v = convolve(&WordFunctional::Gaussian(&dh), &WordFunctional::Gaussian(&dk), &x, 2, DEFAULT_GUARD)
                    .unwrap();
                assert!((v - hk[(i as usize - 1, j as usize - 1)]).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn group_coordinates() {
        let g = Word::from(Letter::g(1));
        let d = WordFunctional::Coordinate(g.clone());
        assert_eq!(convolve(&d, &d, &Element::from(g), 1, DEFAULT_GUARD).unwrap(), ONE);
    }

    #[test]
    fn bracket_examples() {
        let h = ComplexMatrix::from_row_slice(2, 2, &[I, ZERO, ZERO, ZERO]);
        let k = rot();
        let b = drift_bracket(&h, &k, DEFAULT_TOL, DEFAULT_GUARD).unwrap();
        let want = ComplexMatrix::from_row_slice(2, 2, &[ZERO, I, I, ZERO]);
        assert!(max_abs_diff(&b, &want) < 1e-15);
        assert!(drift_bracket(&k, &k, DEFAULT_TOL, DEFAULT_GUARD).unwrap().iter().all(|x| *x == ZERO));
        let d2 = ComplexMatrix::from_row_slice(2, 2, &[I * 3.0, ZERO, ZERO, -I]);
        assert!(drift_bracket(&h, &d2, DEFAULT_TOL, DEFAULT_GUARD).unwrap().iter().all(|x| *x == ZERO));
        assert!(matches!(
            drift_bracket(&ComplexMatrix::identity(2, 2), &k, DEFAULT_TOL, DEFAULT_GUARD),
            Err(Error::NotAntiHermitian { .. })
        ));
    }

    #[test]
    fn truncated_exponential() {
        let f = running();
        let x = parse("u(1,1)", Alphabet::Matrix(2)).unwrap();
        assert_eq!(conv_exp(&f, &x, 1.0, 0, DEFAULT_GUARD).unwrap(), ONE);
        assert!((conv_exp(&f, &x, 1.0, 1, DEFAULT_GUARD).unwrap() - C64::new(0.5, 0.0)).norm() < 1e-15);
        assert!((conv_exp(&f, &x, 1.0, 2, DEFAULT_GUARD).unwrap() - C64::new(0.625, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn guard_is_enforced() {
        let f = running();
        let x = parse("u(1,1) u(1,1) u(1,1) u(1,1)", Alphabet::Matrix(2)).unwrap();
        assert!(matches!(conv_exp(&f, &x, 1.0, 6, 100), Err(Error::GuardExceeded { .. })));
    }
}
