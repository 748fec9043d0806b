//! Central functionals, character moments and their centralization tables.

use num_complex::Complex64 as C64;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::gaussian::{eval_phi_word, CookedFunctional, GaussianSpec};
use crate::convolution::WordFunctional;
use crate::kernel::{ComplexMatrix, I, ZERO};
use crate::targets::{matrix_conditions, GroupTarget};
use crate::words::{Alphabet, Letter, Word};

#[derive(Clone, Debug, PartialEq)]
pub struct CentralReport {
    pub central: bool,
    /// `None` when the alphabet has no matrix coefficients to test.
    pub scalar_first_order: Option<bool>,
    pub max_commutator: f64,
    /// Shortest word on which `f ∗ δ_v ≠ δ_v ∗ f`, with that `v`.
    pub witness: Option<(Word, Word)>,
}

/// Decides centrality by (a) a scalar first-order matrix and (b) vanishing
/// of `f ∗ δ_v - δ_v ∗ f` on all words of length at most `cutoff`.
pub fn central_check(f: &WordFunctional, alphabet: Alphabet, cutoff: usize, tol: f64, guard: usize) -> Result<CentralReport> {
    let scalar_first_order = match alphabet {
        Alphabet::Matrix(n) => {
            let mut ok = true;
            let diag0 = f.eval_word(&Word::from(Letter::u(1, 1)))?;
            for i in 1..=n as u32 {
                for j in 1..=n as u32 {
                    let v = f.eval_word(&Word::from(Letter::u(i, j)))?;
                    let want = if i == j { diag0 } else { ZERO };
                    ok &= (v - want).norm() <= tol;
                }
            }
            Some(ok)
        }
        Alphabet::Group(_) => None,
    };

    let n = alphabet.size();
    let mut max_commutator: f64 = 0.0;
    let mut witness = None;
    for w in alphabet.words_up_to(cutoff) {
        // (f ∗ δ_v)(w) collects f(left) over terms with right = v, and
        // (δ_v ∗ f)(w) collects f(right) over terms with left = v.
        let mut diff: BTreeMap<Word, C64> = BTreeMap::new();
        for (l, r, c) in w.coproduct(n, guard)? {
            *diff.entry(r.clone()).or_insert(ZERO) += c * f.eval_word(&l)?;
            *diff.entry(l).or_insert(ZERO) -= c * f.eval_word(&r)?;
        }
        for (v, d) in diff {
            if d.norm() > max_commutator {
                max_commutator = d.norm();
                if max_commutator > tol && witness.is_none() {
                    witness = Some((w.clone(), v));
                }
            }
        }
    }
    Ok(CentralReport {
        central: scalar_first_order.unwrap_or(true) && max_commutator <= tol,
        scalar_first_order,
        max_commutator,
        witness,
    })
}

/// Sequence of plain (`false`) and conjugate (`true`) tensor factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacterPattern(pub Vec<bool>);

impl CharacterPattern {
    pub fn plain(p: usize) -> Self {
        CharacterPattern(vec![false; p])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// All patterns of length `p`, in lexicographic order with plain first.
    pub fn all(p: usize) -> Vec<Self> {
        (0..1usize << p)
            .map(|bits| CharacterPattern((0..p).map(|a| bits >> (p - 1 - a) & 1 == 1).collect()))
            .collect()
    }
}

impl fmt::Display for CharacterPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &c in &self.0 {
            f.write_str(if c { "u*" } else { "u" })?;
        }
        Ok(())
    }
}

impl FromStr for CharacterPattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut out = Vec::new();
        let mut chars = s.chars().peekable();
        while let Some(c) = chars.next() {
            if c != 'u' {
                return Err(Error::Invalid(format!("bad character pattern '{s}'")));
            }
            let star = chars.peek() == Some(&'*');
            if star {
                chars.next();
            }
            out.push(star);
        }
        if out.is_empty() {
            return Err(Error::Invalid("empty character pattern".into()));
        }
        Ok(CharacterPattern(out))
    }
}

fn diagonal_letter(alphabet: Alphabet, j: u32, conj: bool) -> Letter {
    match alphabet {
        Alphabet::Matrix(_) => Letter::U { i: j, j, star: conj },
        Alphabet::Group(_) => Letter::G { i: j, inv: conj },
    }
}

/// `φ(χ)` as the sum of `φ` over all diagonal coefficient words.
pub fn character_moment_direct(f: &CookedFunctional, pattern: &CharacterPattern, guard: usize) -> Result<C64> {
    if pattern.is_empty() {
        return Err(Error::Invalid("empty character pattern".into()));
    }
    let alphabet = f.alphabet();
    let n = alphabet.size();
    let p = pattern.len();
    let count = (n as u128).checked_pow(p as u32).unwrap_or(u128::MAX);
    if count > guard as u128 {
        return Err(Error::GuardExceeded { terms: count, limit: guard });
    }
    let mut idx = vec![1u32; p];
    let mut s = ZERO;
    loop {
        let w: Word = idx
            .iter()
            .zip(&pattern.0)
            .map(|(&j, &conj)| diagonal_letter(alphabet, j, conj))
            .collect();
        s += eval_phi_word(f, &w)?;
        let mut a = p;
        loop {
            if a == 0 {
                return Ok(s);
            }
            a -= 1;
            if (idx[a] as usize) < n {
                idx[a] += 1;
                break;
            }
            idx[a] = 1;
        }
    }
}

/// `Tr H`, `Tr M(W)` and `(Tr ⊗ Tr)(W) = Σ_r |Tr L_r|²`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CentralParams {
    pub tr_h: C64,
    pub tr_mw: f64,
    pub trtr_w: f64,
}

impl CentralParams {
    pub fn from_spec(spec: &GaussianSpec) -> Self {
        CentralParams {
            tr_h: spec.h_anti().trace(),
            tr_mw: spec.l.iter().map(|l| l.iter().map(|x| x.norm_sqr()).sum::<f64>()).sum(),
            trtr_w: spec.l.iter().map(|l| l.trace().norm_sqr()).sum(),
        }
    }

    /// Reads the parameters off the evaluation tables.
    pub fn from_cooked(f: &CookedFunctional) -> Result<Self> {
        let alphabet = f.alphabet();
        let n = alphabet.size() as u32;
        let mut phi1 = ZERO;
        let mut trtr = ZERO;
        for j in 1..=n {
            phi1 += f.phi_letter(diagonal_letter(alphabet, j, false))?;
            for k in 1..=n {
                trtr -= f.pair_letters(diagonal_letter(alphabet, j, false), diagonal_letter(alphabet, k, false))?;
            }
        }
        let mut tr_mw = ZERO;
        for a in alphabet.letters().into_iter().filter(|l| matches!(l, Letter::U { star: false, .. } | Letter::G { inv: false, .. })) {
            tr_mw += f.pair_letters(a.star(), a)?;
        }
        Ok(CentralParams {
            tr_h: phi1 + tr_mw * 0.5,
            tr_mw: tr_mw.re,
            trtr_w: trtr.re,
        })
    }

    /// `φ(u_11 + … + u_nn)`.
    pub fn phi1(&self) -> C64 {
        self.tr_h - 0.5 * self.tr_mw
    }
}

/// Closed form of the character moment for a size-`n` fundamental matrix:
/// `n^{p-1} Σ_a φ₁^{(ε_a)} + n^{p-2} Σ_{a<b} S(ε_a, ε_b)`, with
/// `S = -(Tr⊗Tr)(W)` for equal factors and `+(Tr⊗Tr)(W)` otherwise.
pub fn character_moment_closed(params: &CentralParams, n: usize, pattern: &CharacterPattern) -> C64 {
    let p = pattern.len() as i32;
    let nf = n as f64;
    let phi1 = params.phi1();
    let first: C64 = pattern.0.iter().map(|&c| if c { phi1.conj() } else { phi1 }).sum();
    let mut second = 0.0;
    for a in 0..pattern.len() {
        for b in a + 1..pattern.len() {
            second += if pattern.0[a] == pattern.0[b] { -params.trtr_w } else { params.trtr_w };
        }
    }
    first * nf.powi(p - 1) + second * nf.powi(p - 2)
}

#[derive(Clone, Debug, PartialEq)]
pub struct MomentRow {
    pub pattern: CharacterPattern,
    pub value: C64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MomentTable {
    pub rows: Vec<MomentRow>,
    /// Constant `c` with `value(p) = c · p · M^{p-1}`.
    pub c: Option<C64>,
    pub reference: Option<String>,
    /// Largest `|value - c·p·M^{p-1}| / |c·p·M^{p-1}|` over the rows.
    pub max_relative_deviation: Option<f64>,
}

/// Character moments `p = 1..=pmax` of a spec on `O_N⁺` or its symplectic
/// analogue, with the proportionality constant to `p·M^{p-1}`.
pub fn centralize_table(spec: &GaussianSpec, target: GroupTarget, pmax: usize, tol: f64) -> Result<MomentTable> {
    if !matches!(target, GroupTarget::OPlus(_) | GroupTarget::SpPlus(_)) {
        return Err(Error::Invalid(format!("centralization tables need o_plus or sp_plus, not {}", target.name())));
    }
    let report = matrix_conditions(spec, target, tol);
    if !report.passed() {
        let detail: Vec<String> = report
            .checks
            .iter()
            .filter(|c| !c.pass)
            .map(|c| format!("{} (residual {:.3e})", c.name, c.residual))
            .collect();
        return Err(Error::TargetConditions {
            target: target.to_string(),
            detail: detail.join(", "),
        });
    }
    let params = CentralParams::from_spec(spec);
    let m = target.matrix_size();
    let c = C64::new(-params.tr_mw / 2.0, 0.0);
    let mut rows = Vec::with_capacity(pmax);
    let mut dev: f64 = 0.0;
    for p in 1..=pmax {
        let pattern = CharacterPattern::plain(p);
        let value = character_moment_closed(&params, m, &pattern);
        let reference = c * (p as f64) * (m as f64).powi(p as i32 - 1);
        let scale = reference.norm();
        let err = (value - reference).norm();
        dev = dev.max(if scale > 0.0 { err / scale } else { err });
        rows.push(MomentRow { pattern, value });
    }
    Ok(MomentTable {
        rows,
        c: Some(c),
        reference: Some("p*M^(p-1)".into()),
        max_relative_deviation: Some(dev),
    })
}

/// Gaussian on the diagonal torus with `L = √μ·I` and `H = iν·I`.
pub fn torus_gaussian(n: usize, nu: f64, mu: f64) -> Result<GaussianSpec> {
    if !(mu >= 0.0) {
        return Err(Error::NegativeVariance(mu));
    }
    let id = ComplexMatrix::identity(n, n);
    let l = if mu == 0.0 { vec![] } else { vec![id.scale(mu.sqrt())] };
    GaussianSpec::new(GroupTarget::Torus(n), l, id * (I * nu))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::{cook, DEFAULT_TOL};
    use crate::kernel::ONE;
    use crate::targets::matrix_conditions;
    use crate::words::DEFAULT_GUARD;
    use nalgebra::DVector;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn running() -> GaussianSpec {
        let rot = ComplexMatrix::from_row_slice(2, 2, &[ZERO, ONE, -ONE, ZERO]);
        GaussianSpec::new(GroupTarget::OPlus(2), vec![rot], ComplexMatrix::zeros(2, 2)).unwrap()
    }

    fn check(f: &CookedFunctional) -> CentralReport {
        central_check(&WordFunctional::Gaussian(f), f.alphabet(), 2, DEFAULT_TOL, DEFAULT_GUARD).unwrap()
    }

    #[test]
    fn torus_is_central() {
        let s = torus_gaussian(2, 1.0, 1.0).unwrap();
        assert!(check(&cook(&s, DEFAULT_TOL).unwrap()).central);
        let classical = GaussianSpec::new(GroupTarget::ClassicalU(2), s.l.clone(), s.h.clone()).unwrap();
        assert!(matrix_conditions(&classical, GroupTarget::ClassicalU(2), DEFAULT_TOL).passed());
    }

    #[test]
    fn running_spec_is_not_central() {
        let s = GaussianSpec::new(GroupTarget::UPlus(2), running().l, running().h).unwrap();
        let r = check(&cook(&s, DEFAULT_TOL).unwrap());
        assert_eq!(r.scalar_first_order, Some(true));
        assert!(!r.central);
        assert_eq!(r.witness.unwrap().0.len(), 2);
    }

    #[test]
    fn counit_is_central() {
        let r = central_check(&WordFunctional::Counit, Alphabet::Matrix(2), 2, DEFAULT_TOL, DEFAULT_GUARD).unwrap();
        assert!(r.central);
    }

    #[test]
    fn moments_of_running_spec() {
        let f = cook(&running(), DEFAULT_TOL).unwrap();
        let params = CentralParams::from_spec(&running());
        assert_eq!(params, CentralParams { tr_h: ZERO, tr_mw: 2.0, trtr_w: 0.0 });
        assert_eq!(CentralParams::from_cooked(&f).unwrap(), params);
        for (p, want) in [(2, -4.0), (3, -12.0)] {
            let pat = CharacterPattern::plain(p);
            assert_eq!(character_moment_direct(&f, &pat, DEFAULT_GUARD).unwrap(), c(want, 0.0));
            assert_eq!(character_moment_closed(&params, 2, &pat), c(want, 0.0));
        }
    }

    #[test]
    fn pure_drift_moment() {
        let h = ComplexMatrix::from_diagonal(&DVector::from_vec(vec![c(0.0, 1.0), c(0.0, 2.5)]));
        let s = GaussianSpec::new(GroupTarget::UPlus(2), vec![], h.clone()).unwrap();
        let f = cook(&s, DEFAULT_TOL).unwrap();
        assert_eq!(character_moment_direct(&f, &CharacterPattern::plain(1), DEFAULT_GUARD).unwrap(), h.trace());
        let params = CentralParams::from_spec(&s);
        for p in 1..=4 {
            let want = h.trace() * p as f64 * 2f64.powi(p - 1);
            assert!((character_moment_closed(&params, 2, &CharacterPattern::plain(p as usize)) - want).norm() < 1e-12);
        }
    }

    #[test]
    fn torus_moments() {
        for n in 1..=3 {
            let s = torus_gaussian(n, 0.7, 1.3).unwrap();
            let f = cook(&s, DEFAULT_TOL).unwrap();
            let mixed: CharacterPattern = "uu*".parse().unwrap();
            assert!(character_moment_direct(&f, &mixed, DEFAULT_GUARD).unwrap().norm() < 1e-12);
            let params = CentralParams::from_spec(&s);
            let nf = n as f64;
            assert!((params.tr_h - c(0.0, 0.7 * nf)).norm() < 1e-12);
            assert!((params.tr_mw - 1.3 * nf).abs() < 1e-12);
            assert!((params.trtr_w - 1.3 * nf * nf).abs() < 1e-12);
        }
        let z = GaussianSpec::new(GroupTarget::UPlus(3), vec![], ComplexMatrix::zeros(3, 3)).unwrap();
        assert_eq!(CentralParams::from_spec(&z), CentralParams { tr_h: ZERO, tr_mw: 0.0, trtr_w: 0.0 });
    }

    #[test]
    fn torus_first_order() {
        let f = cook(&torus_gaussian(2, 0.0, 1.0).unwrap(), DEFAULT_TOL).unwrap();
        for j in 1..=2 {
            for k in 1..=2 {
                let want = if j == k { c(-0.5, 0.0) } else { ZERO };
                assert_eq!(f.phi_letter(Letter::u(j, k)).unwrap(), want);
            }
        }
        let d = torus_gaussian(3, 2.0, 0.0).unwrap();
        assert!(d.l.is_empty());
        assert_eq!(d.h, ComplexMatrix::identity(3, 3) * c(0.0, 2.0));
        assert!(matches!(torus_gaussian(2, 0.0, -1.0), Err(Error::NegativeVariance(_))));
    }

    #[test]
    fn centralize_examples() {
        let t = centralize_table(&running(), GroupTarget::OPlus(2), 3, DEFAULT_TOL).unwrap();
        let values: Vec<C64> = t.rows.iter().map(|r| r.value).collect();
        assert_eq!(values, [c(-1.0, 0.0), c(-4.0, 0.0), c(-12.0, 0.0)]);
        assert_eq!(t.c, Some(c(-1.0, 0.0)));
        assert_eq!(t.max_relative_deviation, Some(0.0));

        let drift = GaussianSpec::new(GroupTarget::OPlus(3), vec![], ComplexMatrix::zeros(3, 3)).unwrap();
        let t = centralize_table(&drift, GroupTarget::OPlus(3), 4, DEFAULT_TOL).unwrap();
        assert!(t.rows.iter().all(|r| r.value == ZERO));

        let l = ComplexMatrix::from_diagonal(&DVector::from_vec(vec![ONE, -ONE]));
        let h = ComplexMatrix::from_diagonal(&DVector::from_vec(vec![c(0.0, 1.0), c(0.0, -1.0)]));
        let sp = GaussianSpec::new(GroupTarget::SpPlus(1), vec![l], h).unwrap();
        let t = centralize_table(&sp, GroupTarget::SpPlus(1), 2, DEFAULT_TOL).unwrap();
        assert_eq!(t.rows[1].value, c(-4.0, 0.0));
        assert_eq!(t.c, Some(c(-1.0, 0.0)));
        let f = cook(&sp, DEFAULT_TOL).unwrap();
        assert_eq!(character_moment_direct(&f, &CharacterPattern::plain(2), DEFAULT_GUARD).unwrap(), c(-4.0, 0.0));

        let bad = GaussianSpec::new(GroupTarget::UPlus(2), vec![ComplexMatrix::identity(2, 2)], ComplexMatrix::zeros(2, 2)).unwrap();
        assert!(matches!(
            centralize_table(&bad, GroupTarget::OPlus(2), 3, DEFAULT_TOL),
            Err(Error::TargetConditions { .. })
        ));
    }

    #[test]
    fn pattern_text() {
        let p: CharacterPattern = "uu*u".parse().unwrap();
        assert_eq!(p.0, [false, true, false]);
        assert_eq!(p.to_string(), "uu*u");
        assert!("".parse::<CharacterPattern>().is_err());
        assert!("ux".parse::<CharacterPattern>().is_err());
        assert_eq!(CharacterPattern::all(2).len(), 4);
    }
}
