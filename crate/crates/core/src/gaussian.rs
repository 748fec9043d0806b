//! Gaussian generating functionals: the data `(L_1..L_d, H)`, its validation,
//! the equivalent `(W, H)` description, and evaluation of `φ`, `η` and `∂φ`.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::kernel::{
    anti_hermitian_residual, choi_form, flip, kraus_extract, max_abs_diff, mult_map, psd_check,
    ComplexMatrix, TensorOperator, ZERO,
};
use crate::targets::{matrix_conditions, GroupTarget};
use crate::words::{Alphabet, Element, Letter, Word};

pub const DEFAULT_TOL: f64 = 1e-9;

/// `(L_1..L_d, H)` together with the quantum group it is meant for.
///
/// Matrices are `n×n`, or `2n×2n` for the symplectic target.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussianSpec {
    pub target: GroupTarget,
    pub l: Vec<ComplexMatrix>,
    pub h: ComplexMatrix,
}

impl GaussianSpec {
    pub fn new(target: GroupTarget, l: Vec<ComplexMatrix>, h: ComplexMatrix) -> Result<Self> {
        let m = target.matrix_size();
        let want = format!("{m}x{m}");
        if h.shape() != (m, m) {
            return Err(Error::shape("H", &want, format!("{}x{}", h.nrows(), h.ncols())));
        }
        for (r, lr) in l.iter().enumerate() {
            if lr.shape() != (m, m) {
                return Err(Error::shape(format!("L[{r}]"), &want, format!("{}x{}", lr.nrows(), lr.ncols())));
            }
        }
        Ok(GaussianSpec { target, l, h })
    }

    /// Size of the fundamental matrix.
    pub fn size(&self) -> usize {
        self.target.matrix_size()
    }

    pub fn dim(&self) -> usize {
        self.l.len()
    }

    /// `W = Σ L_r ⊗ L_r*`.
    pub fn w(&self) -> TensorOperator {
        TensorOperator::kraus_sum(self.size(), &self.l)
    }

    /// `Σ L_r* L_r`.
    pub fn gamma_matrix(&self) -> ComplexMatrix {
        let m = self.size();
        self.l
            .iter()
            .fold(ComplexMatrix::zeros(m, m), |acc, lr| acc + lr.adjoint() * lr)
    }

    /// `Σ L_r L_r*`, which equals `M(W)`.
    pub fn m_matrix(&self) -> ComplexMatrix {
        let m = self.size();
        self.l
            .iter()
            .fold(ComplexMatrix::zeros(m, m), |acc, lr| acc + lr * lr.adjoint())
    }

    /// The anti-hermitian part `(H - H*)/2`.
    pub fn h_anti(&self) -> ComplexMatrix {
        (&self.h - self.h.adjoint()).scale(0.5)
    }
}

/// One named pass/fail condition with its residual.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub residual: f64,
}

impl Check {
    pub fn new(name: impl Into<String>, residual: f64, tol: f64) -> Self {
        Check {
            name: name.into(),
            pass: residual <= tol,
            residual,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub(crate) fn into_result(self) -> Result<()> {
        if self.passed() {
            return Ok(());
        }
        let detail: Vec<String> = self
            .failures()
            .map(|c| format!("{} (residual {:.3e})", c.name, c.residual))
            .collect();
        Err(Error::Validation(detail.join(", ")))
    }
}

/// Base conditions (`H` anti-hermitian, `Σ L*L = Σ LL*`) followed by the
/// conditions of the spec's own target.
pub fn validate(spec: &GaussianSpec, tol: f64) -> ValidationReport {
    let mut checks = vec![
        Check::new("h_anti_hermitian", anti_hermitian_residual(&spec.h), tol),
        Check::new("l_condition", max_abs_diff(&spec.gamma_matrix(), &spec.m_matrix()), tol),
    ];
    checks.extend(matrix_conditions(spec, spec.target, tol).checks);
    ValidationReport { checks }
}

/// Evaluation tables of a Gaussian functional over a fixed alphabet.
///
/// Every table is indexed by [`Alphabet::index`]. The pair table is stored
/// row-major: `pair[a * len + b] = ∂φ(a ⊗ b)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CookedFunctional {
    target: GroupTarget,
    alphabet: Alphabet,
    dim: usize,
    first_order: Vec<C64>,
    eta: Vec<Vec<C64>>,
    pair: Vec<C64>,
}

impl CookedFunctional {
    pub fn target(&self) -> GroupTarget {
        self.target
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    /// Dimension `d` of the cocycle's range space.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Size used for the coproduct summation index.
    pub fn coproduct_size(&self) -> usize {
        self.alphabet.size()
    }

    fn slot(&self, l: Letter) -> Result<usize> {
        self.alphabet
            .index(l)
            .ok_or_else(|| Error::ForeignLetter { letter: l.to_string() })
    }

    pub fn phi_letter(&self, l: Letter) -> Result<C64> {
        Ok(self.first_order[self.slot(l)?])
    }

    pub fn eta_letter(&self, l: Letter) -> Result<&[C64]> {
        Ok(&self.eta[self.slot(l)?])
    }

    pub fn pair_letters(&self, a: Letter, b: Letter) -> Result<C64> {
        let (i, j) = (self.slot(a)?, self.slot(b)?);
        Ok(self.pair[i * self.alphabet.len() + j])
    }

    /// The zero functional on `alphabet`.
    pub fn zero(target: GroupTarget, alphabet: Alphabet) -> Self {
        let len = alphabet.len();
        CookedFunctional {
            target,
            alphabet,
            dim: 0,
            first_order: vec![ZERO; len],
            eta: vec![vec![]; len],
            pair: vec![ZERO; len * len],
        }
    }
}

/// Validates and cooks on the target's own alphabet: the free-group letters
/// for [`GroupTarget::FreeGroupDual`], the matrix coefficients otherwise.
pub fn cook(spec: &GaussianSpec, tol: f64) -> Result<CookedFunctional> {
    validate(spec, tol).into_result()?;
    Ok(match spec.target {
        GroupTarget::FreeGroupDual(n) => cook_group(spec, n),
        _ => cook_matrix_unchecked(spec),
    })
}

/// Cooks on the matrix-coefficient alphabet, whatever the target. Only the
/// base conditions are required.
pub fn cook_matrix(spec: &GaussianSpec, tol: f64) -> Result<CookedFunctional> {
    let report = validate(spec, tol);
    ValidationReport {
        checks: report.checks.into_iter().take(2).collect(),
    }
    .into_result()?;
    Ok(cook_matrix_unchecked(spec))
}

fn cook_matrix_unchecked(spec: &GaussianSpec) -> CookedFunctional {
    let m = spec.size();
    let alphabet = Alphabet::Matrix(m);
    let letters = alphabet.letters();
    let gamma = spec.gamma_matrix();
    let h = spec.h_anti();

    let first_order = letters
        .iter()
        .map(|&l| match l {
            Letter::U { i, j, star } => {
                let (i, j) = (i as usize - 1, j as usize - 1);
                let v = gamma[(i, j)] * -0.5 + h[(i, j)];
                if star {
                    v.conj()
                } else {
                    v
                }
            }
            Letter::G { .. } => unreachable!(),
        })
        .collect();

    let eta = letters
        .iter()
        .map(|&l| match l {
            Letter::U { i, j, star: false } => spec.l.iter().map(|lr| lr[(i as usize - 1, j as usize - 1)]).collect(),
            Letter::U { i, j, star: true } => spec.l.iter().map(|lr| -lr[(j as usize - 1, i as usize - 1)]).collect(),
            Letter::G { .. } => unreachable!(),
        })
        .collect();

    let mut pair = Vec::with_capacity(letters.len() * letters.len());
    for &a in &letters {
        for &b in &letters {
            pair.push(pair_entry(&spec.l, a, b));
        }
    }

    CookedFunctional {
        target: spec.target,
        alphabet,
        dim: spec.dim(),
        first_order,
        eta,
        pair,
    }
}

fn pair_entry(l: &[ComplexMatrix], a: Letter, b: Letter) -> C64 {
    let (Letter::U { i, j, star: sa }, Letter::U { i: k, j: m, star: sb }) = (a, b) else {
        unreachable!()
    };
    let (i, j, k, m) = (i as usize - 1, j as usize - 1, k as usize - 1, m as usize - 1);
    let mut s = ZERO;
    for lr in l {
        s += match (sa, sb) {
            (false, false) => -lr[(j, i)].conj() * lr[(k, m)],
            (true, false) => lr[(i, j)].conj() * lr[(k, m)],
            (false, true) => lr[(j, i)].conj() * lr[(m, k)],
            (true, true) => -lr[(i, j)].conj() * lr[(m, k)],
        };
    }
    s
}

/// Native tables on the free-group letters, read off the diagonals:
/// `η(g_i) = v_i`, `φ(g_i) = α_i - ½‖v_i‖²`, `∂φ(g_i ⊗ g_j) = -⟨v_i, v_j⟩`.
fn cook_group(spec: &GaussianSpec, n: usize) -> CookedFunctional {
    let alphabet = Alphabet::Group(n);
    let letters = alphabet.letters();
    let h = spec.h_anti();
    let v: Vec<Vec<C64>> = (0..n).map(|i| spec.l.iter().map(|lr| lr[(i, i)]).collect()).collect();
    let sign = |inv: bool| if inv { -1.0 } else { 1.0 };

    let first_order = letters
        .iter()
        .map(|&l| {
            let Letter::G { i, inv } = l else { unreachable!() };
            let vi = &v[i as usize - 1];
            let norm2: f64 = vi.iter().map(|x| x.norm_sqr()).sum();
            let val = h[(i as usize - 1, i as usize - 1)] - 0.5 * norm2;
            if inv {
                val.conj()
            } else {
                val
            }
        })
        .collect();
    let eta = letters
        .iter()
        .map(|&l| {
            let Letter::G { i, inv } = l else { unreachable!() };
            v[i as usize - 1].iter().map(|x| x * sign(inv)).collect()
        })
        .collect();
    let mut pair = Vec::with_capacity(letters.len() * letters.len());
    for &a in &letters {
        for &b in &letters {
            let (Letter::G { i, inv: ia }, Letter::G { i: j, inv: ib }) = (a, b) else {
                unreachable!()
            };
            let ip: C64 = v[i as usize - 1]
                .iter()
                .zip(&v[j as usize - 1])
                .map(|(x, y)| x.conj() * y)
                .sum();
            // ⟨η(a*), η(b)⟩ with η(a*) = -η(a).
            pair.push(-ip * sign(ia) * sign(ib));
        }
    }
    CookedFunctional {
        target: spec.target,
        alphabet,
        dim: spec.dim(),
        first_order,
        eta,
        pair,
    }
}

fn word_counit_zeros(f: &CookedFunctional, w: &Word) -> Result<Vec<usize>> {
    let mut zeros = Vec::new();
    for (pos, &l) in w.letters().iter().enumerate() {
        f.slot(l)?;
        if l.counit() == ZERO {
            zeros.push(pos);
        }
    }
    Ok(zeros)
}

/// `φ` on a single word via the closed pair formula.
pub fn eval_phi_word(f: &CookedFunctional, w: &Word) -> Result<C64> {
    let zeros = word_counit_zeros(f, w)?;
    let ls = w.letters();
    let pair = |a: usize, b: usize| f.pair_letters(ls[a], ls[b]);
    Ok(match zeros.as_slice() {
        [] => {
            let mut s = ZERO;
            for a in 0..ls.len() {
                s += f.phi_letter(ls[a])?;
                for b in a + 1..ls.len() {
                    s += pair(a, b)?;
                }
            }
            s
        }
        [p] => {
            let p = *p;
            let mut s = f.phi_letter(ls[p])?;
            for b in 0..ls.len() {
                if b < p {
                    s += pair(b, p)?;
                } else if b > p {
                    s += pair(p, b)?;
                }
            }
            s
        }
        [p, q] => pair(*p, *q)?,
        _ => ZERO,
    })
}

pub fn eval_phi(f: &CookedFunctional, x: &Element) -> Result<C64> {
    let mut s = ZERO;
    for (w, c) in x.iter() {
        s += c * eval_phi_word(f, w)?;
    }
    Ok(s)
}

pub fn eval_eta_word(f: &CookedFunctional, w: &Word) -> Result<Vec<C64>> {
    let zeros = word_counit_zeros(f, w)?;
    let mut out = vec![ZERO; f.dim];
    let ls = w.letters();
    let mut add = |l: Letter| -> Result<()> {
        for (o, e) in out.iter_mut().zip(f.eta_letter(l)?) {
            *o += e;
        }
        Ok(())
    };
    match zeros.as_slice() {
        [] => {
            for &l in ls {
                add(l)?;
            }
        }
        [p] => add(ls[*p])?,
        _ => {}
    }
    Ok(out)
}

pub fn eval_eta(f: &CookedFunctional, x: &Element) -> Result<Vec<C64>> {
    let mut out = vec![ZERO; f.dim];
    for (w, c) in x.iter() {
        for (o, e) in out.iter_mut().zip(eval_eta_word(f, w)?) {
            *o += c * e;
        }
    }
    Ok(out)
}

/// `∂φ(a ⊗ b) = φ(ab) - ε(a)φ(b) - φ(a)ε(b)`.
pub fn coboundary(f: &CookedFunctional, a: &Element, b: &Element) -> Result<C64> {
    let ab = a * b;
    Ok(eval_phi(f, &ab)? - a.counit() * eval_phi(f, b)? - eval_phi(f, a)? * b.counit())
}

/// `G[m][n] = φ(e_m* e_n)` for centered `e_m`.
pub fn gram(f: &CookedFunctional, elems: &[Element], tol: f64) -> Result<ComplexMatrix> {
    for (index, e) in elems.iter().enumerate() {
        let c = e.counit();
        if c.norm() > tol {
            return Err(Error::NotCentered { index, re: c.re, im: c.im });
        }
    }
    let stars: Vec<Element> = elems.iter().map(Element::star).collect();
    let k = elems.len();
    let mut g = ComplexMatrix::zeros(k, k);
    for m in 0..k {
        for n in 0..k {
            g[(m, n)] = eval_phi(f, &(&stars[m] * &elems[n]))?;
        }
    }
    Ok(g)
}

/// `(W, H)` with `H_ij = ½(φ(u_ij) - φ(u_ji*))`.
pub fn to_wh(spec: &GaussianSpec) -> (TensorOperator, ComplexMatrix) {
    let f = cook_matrix_unchecked(spec);
    let m = spec.size();
    let h = ComplexMatrix::from_fn(m, m, |i, j| {
        let (i, j) = (i as u32 + 1, j as u32 + 1);
        let a = f.phi_letter(Letter::u(i, j)).unwrap_or(ZERO);
        let b = f.phi_letter(Letter::u_star(j, i)).unwrap_or(ZERO);
        (a - b) * 0.5
    });
    (spec.w(), h)
}

/// Inverse of [`to_wh`]: checks `H`, `M(W) = M(flip W)` and positivity of the
/// Choi form, then extracts a linearly independent `L_1..L_d`.
pub fn from_wh(w: &TensorOperator, h: &ComplexMatrix, target: GroupTarget, tol: f64) -> Result<GaussianSpec> {
    let m = target.matrix_size();
    if w.n() != m {
        return Err(Error::shape("W", format!("{m}^4 coefficients"), format!("{}^4", w.n())));
    }
    if h.shape() != (m, m) {
        return Err(Error::shape("H", format!("{m}x{m}"), format!("{}x{}", h.nrows(), h.ncols())));
    }
    let residual = anti_hermitian_residual(h);
    if residual > tol {
        return Err(Error::NotAntiHermitian { residual });
    }
    let residual = max_abs_diff(&mult_map(w), &mult_map(&flip(w)));
    if residual > tol {
        return Err(Error::MultiplicationMismatch { residual });
    }
    let psd = psd_check(&choi_form(w), tol)?;
    if !psd.is_psd {
        return Err(Error::NotPsd { min_eig: psd.min_eig });
    }
    let l = kraus_extract(w, tol)?;
    let spec = GaussianSpec::new(target, l, h.clone())?;
    validate(&spec, tol).into_result()?;
    Ok(spec)
}

/// Replaces the `L` list by the canonical one extracted from `W`.
pub fn canonicalize(spec: &GaussianSpec, tol: f64) -> Result<GaussianSpec> {
    let (w, h) = to_wh(spec);
    from_wh(&w, &h, spec.target, tol)
}

/// True iff `φ` vanishes on every `u_jk - u_kj*`, i.e. the drift part is zero.
pub fn is_driftless(spec: &GaussianSpec, tol: f64) -> bool {
    let f = cook_matrix_unchecked(spec);
    let m = spec.size() as u32;
    (1..=m).all(|j| {
        (1..=m).all(|k| {
            let a = f.phi_letter(Letter::u(j, k)).unwrap_or(ZERO);
            let b = f.phi_letter(Letter::u_star(k, j)).unwrap_or(ZERO);
            (a - b).norm() <= tol
        })
    })
}

/// Diagonal spec on the dual of the free group with `η(g_i) = v_i` and drift
/// `α_i`.
pub fn from_free_group_data(n: usize, v: &[Vec<C64>], alpha: &[C64], tol: f64) -> Result<GaussianSpec> {
    if v.len() != n {
        return Err(Error::shape("v", n, v.len()));
    }
    if alpha.len() != n {
        return Err(Error::shape("alpha", n, alpha.len()));
    }
    let d = v.first().map_or(0, Vec::len);
    if let Some(bad) = v.iter().find(|vi| vi.len() != d) {
        return Err(Error::shape("cocycle vector", d, bad.len()));
    }
    for (index, a) in alpha.iter().enumerate() {
        if a.re.abs() > tol {
            return Err(Error::NonImaginaryAlpha { index, re: a.re, im: a.im });
        }
    }
    let l = (0..d)
        .map(|r| ComplexMatrix::from_fn(n, n, |i, j| if i == j { v[i][r] } else { ZERO }))
        .collect();
    let h = ComplexMatrix::from_fn(n, n, |i, j| if i == j { C64::new(0.0, alpha[i].im) } else { ZERO });
    GaussianSpec::new(GroupTarget::FreeGroupDual(n), l, h)
}

/// `x - ε(x)·1`.
pub fn centered(x: &Element) -> Element {
    x - &Element::term(x.counit(), Word::unit())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::ONE;
    use crate::wordlang::parse;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn rot() -> ComplexMatrix {
        ComplexMatrix::from_row_slice(2, 2, &[ZERO, ONE, -ONE, ZERO])
    }

    fn running() -> GaussianSpec {
        GaussianSpec::new(GroupTarget::UPlus(2), vec![rot()], ComplexMatrix::zeros(2, 2)).unwrap()
    }

    fn el(s: &str, n: usize) -> Element {
        parse(s, Alphabet::Matrix(n)).unwrap()
    }

    /// The three-factor recursion, used as an independent evaluator.
    fn phi_recursive(f: &CookedFunctional, w: &Word) -> C64 {
        let ls = w.letters();
        match ls.len() {
            0 => ZERO,
            1 => f.phi_letter(ls[0]).unwrap(),
            2 => {
                let (a, b) = (ls[0], ls[1]);
                f.pair_letters(a, b).unwrap()
                    + a.counit() * f.phi_letter(b).unwrap()
                    + f.phi_letter(a).unwrap() * b.counit()
            }
            n => {
                let a = Word::new(ls[..n - 2].to_vec());
                let (b, c) = (Word::from(ls[n - 2]), Word::from(ls[n - 1]));
                let (ea, eb, ec) = (a.counit(), b.counit(), c.counit());
                phi_recursive(f, &a.concat(&b)) * ec + phi_recursive(f, &a.concat(&c)) * eb
                    + phi_recursive(f, &b.concat(&c)) * ea
                    - phi_recursive(f, &a) * eb * ec
                    - phi_recursive(f, &b) * ea * ec
                    - phi_recursive(f, &c) * ea * eb
            }
        }
    }

    #[test]
    fn validate_examples() {
        assert!(validate(&running(), DEFAULT_TOL).passed());

        let e12 = crate::kernel::matrix_unit(2, 0, 1);
        let s = GaussianSpec::new(GroupTarget::UPlus(2), vec![e12.clone()], ComplexMatrix::zeros(2, 2)).unwrap();
        let r = validate(&s, DEFAULT_TOL);
        assert!(!r.passed());
        assert_eq!(r.failures().next().unwrap().name, "l_condition");

        let s = GaussianSpec::new(GroupTarget::UPlus(2), vec![ComplexMatrix::identity(2, 2)], e12).unwrap();
        let r = validate(&s, DEFAULT_TOL);
        assert_eq!(r.failures().map(|c| c.name.as_str()).collect::<Vec<_>>(), ["h_anti_hermitian"]);
        assert!(cook(&s, DEFAULT_TOL).is_err());
    }

    #[test]
    fn shape_mismatch_rejected() {
        assert!(GaussianSpec::new(GroupTarget::UPlus(3), vec![rot()], ComplexMatrix::zeros(3, 3)).is_err());
        assert!(GaussianSpec::new(GroupTarget::SpPlus(1), vec![], ComplexMatrix::zeros(1, 1)).is_err());
    }

    #[test]
    fn cook_examples() {
        let f = cook(&running(), DEFAULT_TOL).unwrap();
        assert_eq!(f.phi_letter(Letter::u(1, 1)).unwrap(), c(-0.5, 0.0));
        assert_eq!(f.pair_letters(Letter::u_star(1, 2), Letter::u(1, 2)).unwrap(), ONE);
        assert_eq!(f.pair_letters(Letter::u(1, 1), Letter::u(2, 2)).unwrap(), ZERO);

        let h = ComplexMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(0.0, 1.0), c(0.0, -1.0)]));
        let f = cook(&GaussianSpec::new(GroupTarget::UPlus(2), vec![], h.clone()).unwrap(), DEFAULT_TOL).unwrap();
        for j in 1..=2u32 {
            for k in 1..=2u32 {
                assert_eq!(f.phi_letter(Letter::u(j, k)).unwrap(), h[(j as usize - 1, k as usize - 1)]);
            }
        }
        assert!(f.pair.iter().all(|x| *x == ZERO));
    }

    #[test]
    fn pair_table_is_gram_of_eta() {
        let l2 = ComplexMatrix::from_row_slice(2, 2, &[c(0.3, 0.1), c(-0.2, 0.4), c(0.5, 0.0), c(0.1, -0.7)]);
        let s = GaussianSpec::new(GroupTarget::UPlus(2), vec![rot(), l2], ComplexMatrix::zeros(2, 2)).unwrap();
        let f = cook_matrix_unchecked(&s);
        for a in f.alphabet.letters() {
            for b in f.alphabet.letters() {
                let ip: C64 = f
                    .eta_letter(a.star())
                    .unwrap()
                    .iter()
                    .zip(f.eta_letter(b).unwrap())
                    .map(|(x, y)| x.conj() * y)
                    .sum();
                assert!((ip - f.pair_letters(a, b).unwrap()).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn eval_phi_examples() {
        let f = cook(&running(), DEFAULT_TOL).unwrap();
        assert_eq!(eval_phi(&f, &Element::unit()).unwrap(), ZERO);
        assert_eq!(eval_phi(&f, &el("u(1,1) u(2,2)", 2)).unwrap(), c(-1.0, 0.0));
        let w = el("u(1,2) u(2,1) u(1,2)", 2);
        assert!(eval_phi(&f, &w).unwrap().norm() < 1e-12);
        assert!(matches!(
            eval_phi(&f, &parse("g(1)", Alphabet::Group(1)).unwrap()),
            Err(Error::ForeignLetter { .. })
        ));
    }

    #[test]
    fn closed_formula_matches_recursion() {
        let l2 = ComplexMatrix::from_row_slice(2, 2, &[c(0.3, 0.1), c(-0.2, 0.4), c(0.5, 0.0), c(0.1, -0.7)]);
        let l = vec![l2.clone(), l2.adjoint()];
        let h = ComplexMatrix::from_row_slice(2, 2, &[c(0.0, 0.3), c(0.2, 0.1), c(-0.2, 0.1), c(0.0, -1.0)]);
        let s = GaussianSpec::new(GroupTarget::UPlus(2), l, h).unwrap();
        let f = cook(&s, DEFAULT_TOL).unwrap();
        for w in Alphabet::Matrix(2).words_up_to(3) {
            let a = eval_phi_word(&f, &w).unwrap();
            let b = phi_recursive(&f, &w);
            assert!((a - b).norm() < 1e-12, "{w}: {a} vs {b}");
        }
    }

    #[test]
    fn eval_eta_examples() {
        let f = cook(&running(), DEFAULT_TOL).unwrap();
        assert_eq!(eval_eta(&f, &el("u(1,2)", 2)).unwrap(), vec![ONE]);
        assert_eq!(eval_eta(&f, &el("u(1,1) u(1,2)", 2)).unwrap(), eval_eta(&f, &el("u(1,2)", 2)).unwrap());
        assert_eq!(eval_eta(&f, &el("u(1,2) u(2,1)", 2)).unwrap(), vec![ZERO]);
    }

    #[test]
    fn coboundary_examples() {
        let f = cook(&running(), DEFAULT_TOL).unwrap();
        assert_eq!(coboundary(&f, &Element::unit(), &el("u(1,2) u(2,2)", 2)).unwrap(), ZERO);
        assert_eq!(coboundary(&f, &el("u*(1,2)", 2), &el("u(1,2)", 2)).unwrap(), ONE);
    }

    #[test]
    fn gram_examples() {
        let f = cook(&running(), DEFAULT_TOL).unwrap();
        let g = gram(&f, &[el("u(1,1) - 1", 2), el("u(1,2)", 2)], DEFAULT_TOL).unwrap();
        let want = ComplexMatrix::from_row_slice(2, 2, &[ZERO, ZERO, ZERO, ONE]);
        assert!(max_abs_diff(&g, &want) < 1e-15);
        assert_eq!(gram(&f, &[], DEFAULT_TOL).unwrap().shape(), (0, 0));
        assert!(matches!(gram(&f, &[el("u(1,1)", 2)], DEFAULT_TOL), Err(Error::NotCentered { index: 0, .. })));
    }

    #[test]
    fn wh_examples() {
        let (w, h) = to_wh(&running());
        assert_eq!(h, ComplexMatrix::zeros(2, 2));
        assert_eq!(w, TensorOperator::kraus_sum(2, &[rot()]));
        let back = from_wh(&w, &h, GroupTarget::UPlus(2), DEFAULT_TOL).unwrap();
        assert_eq!(back.l.len(), 1);
        assert!(to_wh(&back).0.max_abs_diff(&w) < 1e-12);

        let hd = ComplexMatrix::from_row_slice(2, 2, &[c(0.0, 0.5), c(1.0, 2.0), c(-1.0, 2.0), ZERO]);
        let (w0, h0) = to_wh(&GaussianSpec::new(GroupTarget::UPlus(2), vec![], hd.clone()).unwrap());
        assert!(w0.is_zero());
        assert_eq!(h0, hd);
    }

    #[test]
    fn from_wh_rejections() {
        let e12 = crate::kernel::matrix_unit(2, 0, 1);
        let e21 = crate::kernel::matrix_unit(2, 1, 0);
        let e11 = crate::kernel::matrix_unit(2, 0, 0);
        let z = ComplexMatrix::zeros(2, 2);
        let w = TensorOperator::kron(&e12, &e21);
        assert!(matches!(from_wh(&w, &z, GroupTarget::UPlus(2), DEFAULT_TOL), Err(Error::MultiplicationMismatch { .. })));
        let w = TensorOperator::kron(&(-&e11), &e11);
        assert!(matches!(from_wh(&w, &z, GroupTarget::UPlus(2), DEFAULT_TOL), Err(Error::NotPsd { .. })));
        let w = TensorOperator::zeros(2);
        assert!(matches!(from_wh(&w, &e12, GroupTarget::UPlus(2), DEFAULT_TOL), Err(Error::NotAntiHermitian { .. })));
    }

    #[test]
    fn driftless_examples() {
        assert!(is_driftless(&running(), DEFAULT_TOL));
        let h = ComplexMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(0.0, 1.0), c(0.0, -1.0)]));
        let s = GaussianSpec::new(GroupTarget::UPlus(2), vec![], h).unwrap();
        assert!(!is_driftless(&s, DEFAULT_TOL));
        let z = GaussianSpec::new(GroupTarget::UPlus(3), vec![], ComplexMatrix::zeros(3, 3)).unwrap();
        assert!(is_driftless(&z, DEFAULT_TOL));
    }

    #[test]
    fn free_group_examples() {
        let s = from_free_group_data(1, &[vec![ONE]], &[c(0.0, 1.0)], DEFAULT_TOL).unwrap();
        let f = cook(&s, DEFAULT_TOL).unwrap();
        let g = parse("g(1)", Alphabet::Group(1)).unwrap();
        assert_eq!(eval_phi(&f, &g).unwrap(), c(-0.5, 1.0));
        let g2 = parse("g(1) g(1)", Alphabet::Group(1)).unwrap();
        assert_eq!(eval_phi(&f, &g2).unwrap(), c(-2.0, 2.0));
        let fm = cook_matrix(&s, DEFAULT_TOL).unwrap();
        let lifted = crate::words::lift_group_element(&g2);
        assert_eq!(eval_phi(&fm, &lifted).unwrap(), c(-2.0, 2.0));

        let z = from_free_group_data(2, &[vec![ZERO], vec![ZERO]], &[ZERO, ZERO], DEFAULT_TOL).unwrap();
        let fz = cook(&z, DEFAULT_TOL).unwrap();
        for w in Alphabet::Group(2).words_up_to(3) {
            assert_eq!(eval_phi_word(&fz, &w).unwrap(), ZERO);
        }
        assert!(matches!(
            from_free_group_data(1, &[vec![ONE]], &[c(0.5, 1.0)], DEFAULT_TOL),
            Err(Error::NonImaginaryAlpha { index: 0, .. })
        ));
    }
}
