//! Quantum subgroups of `U_N⁺` and the two ways of deciding whether a Gaussian
//! functional descends to one: closed-form matrix conditions on `(L, H)`, and
//! direct vanishing on a finite generating set of the defining ideal.

use std::fmt;

use crate::error::{Error, Result};
use crate::gaussian::{eval_phi, Check, CookedFunctional, GaussianSpec};
use crate::kernel::{flip, max_abs, max_abs_diff, symplectic_form, ComplexMatrix, ONE};
use crate::words::{Alphabet, Element, Letter, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GroupTarget {
    UPlus(usize),
    OPlus(usize),
    /// Free symplectic group; the fundamental matrix is `2n×2n`.
    SpPlus(usize),
    ClassicalU(usize),
    Torus(usize),
    FreeGroupDual(usize),
}

impl GroupTarget {
    pub const NAMES: [&'static str; 6] = ["u_plus", "o_plus", "sp_plus", "u_classical", "torus", "free_group"];

    pub fn name(self) -> &'static str {
        match self {
            GroupTarget::UPlus(_) => "u_plus",
            GroupTarget::OPlus(_) => "o_plus",
            GroupTarget::SpPlus(_) => "sp_plus",
            GroupTarget::ClassicalU(_) => "u_classical",
            GroupTarget::Torus(_) => "torus",
            GroupTarget::FreeGroupDual(_) => "free_group",
        }
    }

    pub fn from_name(name: &str, n: usize) -> Result<Self> {
        Ok(match name {
            "u_plus" => GroupTarget::UPlus(n),
            "o_plus" => GroupTarget::OPlus(n),
            "sp_plus" => GroupTarget::SpPlus(n),
            "u_classical" => GroupTarget::ClassicalU(n),
            "torus" => GroupTarget::Torus(n),
            "free_group" => GroupTarget::FreeGroupDual(n),
            other => return Err(Error::Invalid(format!("unknown target '{other}'"))),
        })
    }

    /// The `n` the target was built with.
    pub fn n(self) -> usize {
        match self {
            GroupTarget::UPlus(n)
            | GroupTarget::OPlus(n)
            | GroupTarget::SpPlus(n)
            | GroupTarget::ClassicalU(n)
            | GroupTarget::Torus(n)
            | GroupTarget::FreeGroupDual(n) => n,
        }
    }

    pub fn matrix_size(self) -> usize {
        match self {
            GroupTarget::SpPlus(n) => 2 * n,
            other => other.n(),
        }
    }

    /// Letters a functional on this target is naturally evaluated on.
    pub fn alphabet(self) -> Alphabet {
        match self {
            GroupTarget::FreeGroupDual(n) => Alphabet::Group(n),
            other => Alphabet::Matrix(other.matrix_size()),
        }
    }

    /// Same kind of target with a different `n`.
    pub fn with_n(self, n: usize) -> Self {
        Self::from_name(self.name(), n).expect("known name")
    }
}

impl fmt::Display for GroupTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.name(), self.n())
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct TargetReport {
    pub checks: Vec<Check>,
}

impl TargetReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

fn max_over(l: &[ComplexMatrix], f: impl Fn(&ComplexMatrix) -> f64) -> f64 {
    l.iter().map(f).fold(0.0, f64::max)
}

fn imag_part(a: &ComplexMatrix) -> f64 {
    a.iter().map(|x| x.im.abs()).fold(0.0, f64::max)
}

fn off_diagonal(a: &ComplexMatrix) -> f64 {
    let mut m: f64 = 0.0;
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            if i != j {
                m = m.max(a[(i, j)].norm());
            }
        }
    }
    m
}

fn scalar_residual(a: &ComplexMatrix) -> f64 {
    let n = a.nrows();
    if n == 0 {
        return 0.0;
    }
    let mean = a.trace() / n as f64;
    max_abs_diff(a, &(ComplexMatrix::identity(n, n) * mean))
}

/// The closed-form conditions on `(L, H)` for `target`. The spec's matrices
/// must have the target's size.
pub fn matrix_conditions(spec: &GaussianSpec, target: GroupTarget, tol: f64) -> TargetReport {
    let m = target.matrix_size();
    if spec.size() != m {
        return TargetReport {
            checks: vec![Check {
                name: "target_size".into(),
                pass: false,
                residual: f64::INFINITY,
            }],
        };
    }
    let l = &spec.l;
    let h = &spec.h;
    let checks = match target {
        GroupTarget::UPlus(_) => vec![],
        GroupTarget::OPlus(_) => {
            let conj_sum = l
                .iter()
                .fold(ComplexMatrix::zeros(m, m), |acc, lr| acc + lr.conjugate() * lr);
            vec![
                Check::new("l_antisymmetric", max_over(l, |lr| max_abs(&(lr + lr.transpose()))), tol),
                Check::new("conj_l_l_real", imag_part(&conj_sum), tol),
                Check::new("h_real", imag_part(h), tol),
                Check::new("h_antisymmetric", max_abs(&(h + h.transpose())), tol),
            ]
        }
        GroupTarget::SpPlus(n) => {
            let j = symplectic_form(n);
            let mw = spec.m_matrix();
            vec![
                Check::new("l_transpose_jlj", max_over(l, |lr| max_abs_diff(&lr.transpose(), &(&j * lr * &j))), tol),
                Check::new("jmj_minus_mt", max_abs_diff(&(&j * &mw * &j), &(-mw.transpose())), tol),
                Check::new("jhj_ht", max_abs_diff(&(&j * h * &j), &h.transpose()), tol),
            ]
        }
        GroupTarget::ClassicalU(_) => {
            let w = spec.w();
            vec![Check::new("w_flip_symmetric", w.max_abs_diff(&flip(&w)), tol)]
        }
        GroupTarget::Torus(_) => vec![
            Check::new("l_scalar", max_over(l, scalar_residual), tol),
            Check::new("h_scalar", scalar_residual(h), tol),
        ],
        GroupTarget::FreeGroupDual(_) => vec![
            Check::new("l_diagonal", max_over(l, off_diagonal), tol),
            Check::new("h_diagonal", off_diagonal(h), tol),
        ],
    };
    TargetReport { checks }
}

/// Generators `X` and a finite set `Y ⊂ ker ε` generating the kernel of the
/// quotient map as an ideal.
#[derive(Clone, Debug, PartialEq)]
pub struct RelationSet {
    pub x: Vec<Letter>,
    pub y: Vec<Element>,
}

fn u(i: usize, j: usize, star: bool) -> Element {
    Element::from(Letter::U {
        i: i as u32,
        j: j as u32,
        star,
    })
}

pub fn relation_set(target: GroupTarget) -> RelationSet {
    let m = target.matrix_size();
    let x = Alphabet::Matrix(m).letters();
    let mut y = Vec::new();
    let idx = || (1..=m).flat_map(move |i| (1..=m).map(move |j| (i, j)));
    match target {
        GroupTarget::UPlus(_) => {}
        GroupTarget::OPlus(_) => {
            for (i, j) in idx() {
                y.push(&u(i, j, false) - &u(i, j, true));
            }
        }
        GroupTarget::SpPlus(n) => {
            for i in 1..=n {
                for j in 1..=n {
                    y.push(&u(i, j, true) - &u(i + n, j + n, false));
                    y.push(&u(i + n, j, true) + &u(i, j + n, false));
                }
            }
        }
        GroupTarget::ClassicalU(_) => {
            for (i, j) in idx() {
                for (k, l) in idx() {
                    let a = u(i, j, false);
                    for b in [u(k, l, false), u(k, l, true)] {
                        let c = &(&a * &b) - &(&b * &a);
                        if !c.is_zero() {
                            y.push(c);
                        }
                    }
                }
            }
        }
        GroupTarget::Torus(_) => {
            for (i, j) in idx() {
                if i == j {
                    continue;
                }
                y.push(&u(i, i, false) - &u(j, j, false));
                y.push(&u(i, i, true) - &u(j, j, true));
                y.push(u(i, j, false));
                y.push(u(i, j, true));
            }
        }
        GroupTarget::FreeGroupDual(_) => {
            for (i, j) in idx() {
                if i != j {
                    y.push(u(i, j, false));
                }
            }
            for (i, j) in idx() {
                if i != j {
                    y.push(u(i, j, true));
                }
            }
        }
    }
    RelationSet { x, y }
}

#[derive(Clone, Debug, PartialEq)]
pub struct IdealReport {
    pub pass: bool,
    pub evaluations: usize,
    pub max_residual: f64,
    /// The element with the largest `|φ|`, when that exceeds the tolerance.
    pub worst: Option<Element>,
}

/// Checks `φ(y) = φ(xy) = φ(yx) = 0` for all `x ∈ X`, `y ∈ Y`. The functional
/// must be cooked on the target's matrix-coefficient alphabet.
pub fn ideal_vanishing_check(f: &CookedFunctional, target: GroupTarget, tol: f64) -> Result<IdealReport> {
    let want = Alphabet::Matrix(target.matrix_size());
    if f.alphabet() != want {
        return Err(Error::Invalid(format!(
            "ideal check for {target} needs a functional on {} matrix coefficients",
            want.size()
        )));
    }
    let rel = relation_set(target);
    let mut max_residual: f64 = 0.0;
    let mut worst = None;
    let mut evaluations = 0;
    let mut visit = |e: Element| -> Result<()> {
        let v = eval_phi(f, &e)?.norm();
        evaluations += 1;
        if v > max_residual {
            max_residual = v;
            worst = Some(e);
        }
        Ok(())
    };
    for y in &rel.y {
        visit(y.clone())?;
        for &x in &rel.x {
            let xe = Element::term(ONE, Word::from(x));
            visit(&xe * y)?;
            visit(y * &xe)?;
        }
    }
    let pass = max_residual <= tol;
    Ok(IdealReport {
        pass,
        evaluations,
        max_residual,
        worst: if pass { None } else { worst },
    })
}
