//! t-spreads of `F_q^N`: Desarguesian construction, extraction from
//! 2-dimensional ATW codes, verification, direct-sum splitting and
//! projection onto subspaces.

use std::fmt;

use rayon::prelude::*;

use crate::atw::analyze_atw;
use crate::error::{Error, Result};
use crate::field::{prime_power, Elem, Extension, Field};
use crate::linalg::{expand_vector, kernel, projective_point, Mat, Subspace};
use crate::rank::RankCode;

#[derive(Clone, Debug)]
pub struct Spread {
    field: Field,
    ambient: usize,
    t: usize,
    elements: Vec<Subspace>,
}

impl Spread {
    /// Wraps a candidate family; only `t | N` and the ambient dimension of
    /// each element are enforced here, the spread axioms are checked by
    /// [`verify_spread`].
    pub fn new(field: &Field, ambient: usize, t: usize, elements: Vec<Subspace>) -> Result<Spread> {
        if t == 0 || ambient % t != 0 {
            return Err(Error::InvalidParameters(format!("t = {t} does not divide N = {ambient}")));
        }
        if let Some(e) = elements.iter().find(|e| e.ambient() != ambient || e.field() != field) {
            return Err(Error::DimensionMismatch(format!(
                "element lives in F^{}, spread ambient is F^{ambient}",
                e.ambient()
            )));
        }
        Ok(Spread { field: field.clone(), ambient, t, elements })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn elements(&self) -> &[Subspace] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// `(q^N - 1)/(q^t - 1)`.
    pub fn expected_count(&self) -> u128 {
        spread_size(self.field.order(), self.ambient, self.t)
    }
}

pub fn spread_size(q: u64, ambient: usize, t: usize) -> u128 {
    let q = q as u128;
    (q.pow(ambient as u32) - 1) / (q.pow(t as u32) - 1)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpreadViolation {
    ElementDimension { index: usize, dim: usize },
    NonTrivialIntersection { i: usize, j: usize },
    WrongCount { expected: u128, found: usize },
}

impl fmt::Display for SpreadViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpreadViolation::ElementDimension { index, dim } => {
                write!(f, "equidimensionality: element {index} has dimension {dim}")
            }
            SpreadViolation::NonTrivialIntersection { i, j } => {
                write!(f, "trivial intersection: elements {i} and {j} share a nonzero vector")
            }
            SpreadViolation::WrongCount { expected, found } => {
                write!(f, "cover: {found} elements, a spread needs {expected}")
            }
        }
    }
}

pub fn verify_spread(s: &Spread) -> std::result::Result<(), SpreadViolation> {
    let t = s.t;
    if let Some((index, e)) = s.elements.iter().enumerate().find(|(_, e)| e.dim() != t) {
        return Err(SpreadViolation::ElementDimension { index, dim: e.dim() });
    }
    let n = s.elements.len();
    let bad = (0..n).into_par_iter().find_map_first(|i| {
        (i + 1..n)
            .find(|&j| s.elements[i].sum_dim(&s.elements[j]).expect("same ambient") != 2 * t)
            .map(|j| (i, j))
    });
    if let Some((i, j)) = bad {
        return Err(SpreadViolation::NonTrivialIntersection { i, j });
    }
    let expected = s.expected_count();
    if n as u128 != expected {
        return Err(SpreadViolation::WrongCount { expected, found: n });
    }
    Ok(())
}

/// Multiplication by a generator of `F_{q^t}` on an `F_q`-space, as the
/// matrix `A` of `v -> vA`.
#[derive(Clone, Debug)]
pub struct ScalarAction {
    matrix: Mat,
    t: usize,
    scalars: Field,
}

impl ScalarAction {
    /// `scalars` is `F_{q^t}`; `matrix` must satisfy the minimal polynomial
    /// of the generator of `scalars`, so that it defines a module structure.
    pub fn new(matrix: Mat, t: usize, scalars: Field) -> Result<ScalarAction> {
        if matrix.rows() != matrix.cols() {
            return Err(Error::DimensionMismatch("scalar action must be square".into()));
        }
        if t == 0 || matrix.rows() % t != 0 {
            return Err(Error::InvalidParameters(format!(
                "t = {t} does not divide the dimension {}",
                matrix.rows()
            )));
        }
        let field = matrix.field().clone();
        let n = matrix.rows();
        // Horner evaluation of the prime-field modulus at the matrix
        let mut acc = Mat::zeros(&field, n, n);
        for &c in scalars.modulus().iter().rev() {
            acc = acc.mul(&matrix)?;
            for i in 0..n {
                acc.set(i, i, field.add(acc.get(i, i), c));
            }
        }
        if !acc.is_zero() {
            return Err(Error::InvalidParameters("matrix does not satisfy the minimal polynomial".into()));
        }
        Ok(ScalarAction { matrix, t, scalars })
    }

    pub fn matrix(&self) -> &Mat {
        &self.matrix
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn scalars(&self) -> &Field {
        &self.scalars
    }
}

/// The 1-dimensional `F_{q^t}`-subspaces of `F_{q^t}^l` written over
/// `F_q`, in projective order, together with the defining scalar action.
pub fn spread_in_extension(ext: &Extension, l: usize) -> Result<(Spread, ScalarAction)> {
    if l == 0 {
        return Err(Error::InvalidParameters("l must be positive".into()));
    }
    let sup = ext.sup();
    let t = ext.degree();
    let count = spread_size(sup.order(), l, 1);
    let elements = (0..count)
        .into_par_iter()
        .map(|i| {
            let v = projective_point(sup, l, i);
            let gens: Vec<Vec<Elem>> = ext
                .basis()
                .iter()
                .map(|&b| expand_vector(&v.iter().map(|&c| sup.mul(b, c)).collect::<Vec<_>>(), ext))
                .collect();
            Subspace::span(ext.base(), l * t, &gens).expect("length l t")
        })
        .collect();
    let spread = Spread::new(ext.base(), l * t, t, elements)?;

    let g = sup.generator();
    let mut a = Mat::zeros(ext.base(), l * t, l * t);
    for block in 0..l {
        for (i, &b) in ext.basis().iter().enumerate() {
            for (j, c) in ext.coords(sup.mul(g, b)).into_iter().enumerate() {
                a.set(block * t + i, block * t + j, c);
            }
        }
    }
    let action = ScalarAction::new(a, t, sup.clone())?;
    Ok((spread, action))
}

/// `D_{l,t,q}`: the Desarguesian t-spread of `F_q^{lt}`.
pub fn desarguesian_spread(l: usize, t: usize, q: u64) -> Result<Spread> {
    Ok(desarguesian_with_action(l, t, q)?.0)
}

pub fn desarguesian_with_action(l: usize, t: usize, q: u64) -> Result<(Spread, ScalarAction)> {
    let (p, s) = prime_power(q).ok_or_else(|| Error::InvalidParameters(format!("{q} is not a prime power")))?;
    if t == 0 {
        return Err(Error::InvalidParameters("t must be positive".into()));
    }
    let ext = Extension::canonical(p, s, t as u32)?;
    spread_in_extension(&ext, l)
}

/// A spread extracted from an ATW code, with the covector of the
/// hyperplane each element came from.
#[derive(Clone, Debug)]
pub struct AtwSpread {
    pub spread: Spread,
    pub covectors: Vec<Vec<Elem>>,
}

/// Kernel of `lambda -> x . (sum_i lambda_i g_i)` over `F_q`, `g_i` the
/// generator columns.
pub fn hyperplane_section(code: &RankCode, x: &[Elem]) -> Subspace {
    let c = code.codeword(x);
    let cols: Vec<Vec<Elem>> = c.iter().map(|&v| code.ext().coords(v)).collect();
    let m = Mat::from_columns(code.base(), code.m(), &cols).expect("m coordinates");
    kernel(&m)
}

/// The `(n-d)`-spread of `F_q^n` cut out by the hyperplanes of
/// `F_{q^m}^2` on the q-system of a 2-dimensional ATW code.
pub fn spread_from_atw(code: &RankCode, budget: u64) -> Result<AtwSpread> {
    if code.k() != 2 {
        return Err(Error::InvalidParameters(format!("need k = 2, got k = {}", code.k())));
    }
    let dim = code.qsystem().dim();
    if dim != code.n() {
        return Err(Error::Degenerate { length: code.n(), qsystem_dim: dim });
    }
    let classes = code.check_budget(budget)?;
    let sections: Vec<(Vec<Elem>, Subspace)> = (0..classes)
        .into_par_iter()
        .map(|i| {
            let x = projective_point(code.sup(), 2, i);
            let s = hyperplane_section(code, &x);
            (x, s)
        })
        .collect();
    let mut dims: Vec<usize> = sections.iter().map(|(_, s)| s.dim()).filter(|&d| d > 0).collect();
    dims.sort_unstable();
    dims.dedup();
    if dims.len() != 1 {
        return Err(Error::NotAtw(format!("hyperplane sections of dimensions {dims:?}")));
    }
    let t = dims[0];
    if t == code.n() || code.n() % t != 0 {
        return Err(Error::NotAtw(format!("sections of dimension {t} in a q-system of dimension {}", code.n())));
    }
    let (covectors, elements): (Vec<_>, Vec<_>) = sections.into_iter().filter(|(_, s)| s.dim() > 0).unzip();
    let spread = Spread::new(code.base(), code.n(), t, elements)?;
    verify_spread(&spread).map_err(|v| Error::Inconsistency(format!("extracted family is not a spread ({v})")))?;
    Ok(AtwSpread { spread, covectors })
}

/// Greedily picks elements, in order, that extend the current direct sum
/// until it fills the ambient space. Returns the chosen indices.
pub fn direct_sum_split(s: &Spread) -> Result<Vec<usize>> {
    verify_spread(s).map_err(|v| Error::InvalidParameters(format!("not a spread: {v}")))?;
    let mut acc = Subspace::zero(&s.field, s.ambient);
    let mut chosen = Vec::new();
    for (i, e) in s.elements.iter().enumerate() {
        if acc.dim() == s.ambient {
            break;
        }
        let sum = acc.sum(e)?;
        if sum.dim() == acc.dim() + s.t {
            acc = sum;
            chosen.push(i);
        }
    }
    if acc.dim() != s.ambient {
        return Err(Error::Inconsistency("greedy direct-sum split got stuck".into()));
    }
    Ok(chosen)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubspreadReport {
    /// Common dimension of the nonzero sections, `None` when mixed.
    pub t_prime: Option<usize>,
    pub is_subspread: bool,
    pub count: usize,
    pub dims: Vec<usize>,
}

/// `{S ∩ W : S in spread} \ {0}` and whether it is a t'-spread of `W`.
pub fn project_spread(s: &Spread, w: &Subspace) -> Result<(Vec<Subspace>, SubspreadReport)> {
    if w.ambient() != s.ambient || w.field() != &s.field {
        return Err(Error::DimensionMismatch(format!(
            "W lives in F^{}, spread ambient is F^{}",
            w.ambient(),
            s.ambient
        )));
    }
    let sections: Vec<Subspace> = s
        .elements
        .par_iter()
        .map(|e| e.intersect(w).expect("same ambient"))
        .filter(|x| x.dim() > 0)
        .collect();
    let mut dims: Vec<usize> = sections.iter().map(Subspace::dim).collect();
    dims.sort_unstable();
    dims.dedup();
    let t_prime = (dims.len() == 1).then(|| dims[0]);
    let is_subspread = match t_prime {
        Some(tp) => w.dim() % tp == 0 && sections.len() as u128 == spread_size(s.field.order(), w.dim(), tp),
        None => false,
    };
    let report = SubspreadReport { t_prime, is_subspread, count: sections.len(), dims };
    Ok((sections, report))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Theorem6Check {
    pub atw: bool,
    pub induces_subspread: bool,
    pub t_prime: Option<usize>,
    pub agree: bool,
}

/// Compares antipodality from the weight distribution with the
/// subspread induced on the q-system by the Desarguesian m-spread of
/// `F_{q^m}^2`. The two agree whenever `n <= m`; the Hadamard code
/// `H_1(q, m, 2)` (`n = 2m`) has constant weight yet every line meets its
/// q-system in dimension `m = n - d`.
pub fn verify_theorem6(code: &RankCode, budget: u64) -> Result<Theorem6Check> {
    if code.k() != 2 {
        return Err(Error::InvalidParameters(format!("need k = 2, got k = {}", code.k())));
    }
    let dim = code.qsystem().dim();
    if dim != code.n() {
        return Err(Error::Degenerate { length: code.n(), qsystem_dim: dim });
    }
    let report = analyze_atw(code, budget)?;
    let (lines, _) = spread_in_extension(code.ext(), 2)?;
    let (_, proj) = project_spread(&lines, code.qsystem().space())?;
    let t = code.n() - report.d;
    let induces_subspread = proj.is_subspread && proj.t_prime == Some(t);
    Ok(Theorem6Check {
        atw: report.is_antipodal,
        induces_subspread,
        t_prime: proj.t_prime,
        agree: report.is_antipodal == induces_subspread,
    })
}

/// Whether every element is closed under the scalar action.
pub fn is_fieldlinear_spread(s: &Spread, action: &ScalarAction) -> Result<bool> {
    if action.matrix.rows() != s.ambient || action.matrix.field() != &s.field {
        return Err(Error::DimensionMismatch("scalar action does not act on the spread ambient".into()));
    }
    Ok(s.elements.par_iter().all(|e| e.image(&action.matrix).map(|img| img.is_subspace_of(e)).unwrap_or(false)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lines_of_plane() {
        let s = desarguesian_spread(2, 1, 2).unwrap();
        assert_eq!(s.len(), 3);
        assert!(verify_spread(&s).is_ok());
        let f = s.field().clone();
        let short = Spread::new(&f, 2, 1, s.elements()[..2].to_vec()).unwrap();
        assert_eq!(verify_spread(&short), Err(SpreadViolation::WrongCount { expected: 3, found: 2 }));
    }

    #[test]
    fn desarguesian_counts() {
        assert_eq!(desarguesian_spread(2, 2, 2).unwrap().len(), 5);
        let d322 = desarguesian_spread(3, 2, 2).unwrap();
        assert_eq!(d322.len(), 21);
        assert!(verify_spread(&d322).is_ok());
        assert_eq!(direct_sum_split(&d322).unwrap().len(), 3);
    }

    #[test]
    fn rejects_bad_t() {
        let f = Field::canonical(2, 1).unwrap();
        assert!(Spread::new(&f, 5, 2, vec![]).is_err());
    }

    #[test]
    fn field_linearity() {
        let (s, a) = desarguesian_with_action(2, 2, 2).unwrap();
        assert!(is_fieldlinear_spread(&s, &a).unwrap());
        let f = s.field().clone();
        let mut els = s.elements().to_vec();
        els[0] = Subspace::span(&f, 4, &[vec![1, 0, 0, 0], vec![0, 0, 1, 0]]).unwrap();
        let bad = Spread::new(&f, 4, 2, els).unwrap();
        assert!(!is_fieldlinear_spread(&bad, &a).unwrap());
        assert!(verify_spread(&bad).is_err());
    }

    #[test]
    fn projection_onto_ambient_and_element() {
        let s = desarguesian_spread(2, 2, 2).unwrap();
        let f = s.field().clone();
        let (els, r) = project_spread(&s, &Subspace::full(&f, 4)).unwrap();
        assert_eq!(els.len(), 5);
        assert_eq!(r.t_prime, Some(2));
        assert!(r.is_subspread);
        let (els, r) = project_spread(&s, &s.elements()[3]).unwrap();
        assert_eq!(els.len(), 1);
        assert!(r.is_subspread);
    }
}
