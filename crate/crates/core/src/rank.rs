//! Rank-metric codes given by a generator matrix over `F_{q^m}` with a
//! designated base field `F_q`, their q-systems and exact weight
//! distributions.

use std::collections::BTreeMap;
use std::ops::ControlFlow;
use std::sync::Arc;

use rayon::prelude::*;
use serde::ser::{SerializeMap, SerializeStruct};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::field::{Elem, Extension, Field};
use crate::linalg::{
    self, collapse_vector, expand_vector, for_each_invertible, general_linear_order, kernel,
    projective_count, projective_point, rref, Mat, Subspace,
};

/// Default cap on the number of enumerated objects.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Clone, Debug)]
pub struct RankCode {
    ext: Arc<Extension>,
    generator: Mat,
}

impl RankCode {
    /// Validates that `generator` is a full-row-rank matrix over `ext.sup()`.
    pub fn from_generator(generator: Mat, ext: Arc<Extension>) -> Result<RankCode> {
        if generator.field() != ext.sup() {
            return Err(Error::FieldMismatch);
        }
        if generator.rows() == 0 || generator.cols() < generator.rows() {
            return Err(Error::InvalidParameters(format!(
                "need n >= k >= 1, got k = {}, n = {}",
                generator.rows(),
                generator.cols()
            )));
        }
        if generator.rank() != generator.rows() {
            return Err(Error::RankDeficient);
        }
        Ok(RankCode { ext, generator })
    }

    pub fn from_rows(rows: &[Vec<Elem>], ext: Arc<Extension>) -> Result<RankCode> {
        let g = Mat::from_rows(ext.sup(), rows)?;
        RankCode::from_generator(g, ext)
    }

    pub fn ext(&self) -> &Arc<Extension> {
        &self.ext
    }

    pub fn sup(&self) -> &Field {
        self.ext.sup()
    }

    pub fn base(&self) -> &Field {
        self.ext.base()
    }

    pub fn generator(&self) -> &Mat {
        &self.generator
    }

    pub fn k(&self) -> usize {
        self.generator.rows()
    }

    pub fn n(&self) -> usize {
        self.generator.cols()
    }

    /// `[F_{q^m} : F_q]`.
    pub fn m(&self) -> usize {
        self.ext.degree()
    }

    /// Order of the base field.
    pub fn q(&self) -> u64 {
        self.ext.q()
    }

    pub fn codeword(&self, x: &[Elem]) -> Vec<Elem> {
        self.generator.left_mul_vec(x)
    }

    /// Rank weight of `x G`.
    pub fn codeword_rank(&self, x: &[Elem]) -> usize {
        self.ext.rank(&self.codeword(x))
    }

    /// Number of codewords up to `F_{q^m}^*` scaling.
    pub fn projective_classes(&self) -> u128 {
        projective_count(self.sup().order(), self.k())
    }

    pub fn check_budget(&self, budget: u64) -> Result<u128> {
        let classes = self.projective_classes();
        if classes > budget as u128 {
            Err(Error::BudgetExceeded { needed: classes, budget })
        } else {
            Ok(classes)
        }
    }

    pub fn qsystem(&self) -> QSystem {
        let cols: Vec<Vec<Elem>> = self
            .generator
            .columns()
            .iter()
            .map(|c| expand_vector(c, &self.ext))
            .collect();
        let space = Subspace::span(self.base(), self.k() * self.m(), &cols)
            .expect("expanded columns have length mk");
        QSystem { ext: self.ext.clone(), k: self.k(), space }
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.qsystem().dim() == self.n()
    }

    /// `alpha * G * M` for `alpha` in `F_{q^m}^*` and `M` invertible over `F_q`.
    pub fn transform(&self, alpha: Elem, m: &Mat) -> Result<RankCode> {
        if m.field() != self.base() || m.rows() != self.n() || m.cols() != self.n() {
            return Err(Error::DimensionMismatch("transform must be n x n over the base field".into()));
        }
        if alpha == 0 || m.rank() != self.n() {
            return Err(Error::InvalidParameters("transform is not invertible".into()));
        }
        let lifted = self.lift(m);
        let mut g = self.generator.mul(&lifted)?;
        let sup = self.sup();
        for r in 0..g.rows() {
            for c in 0..g.cols() {
                g.set(r, c, sup.mul(alpha, g.get(r, c)));
            }
        }
        RankCode::from_generator(g, self.ext.clone())
    }

    /// Embeds a base-field matrix into `F_{q^m}`.
    pub fn lift(&self, m: &Mat) -> Mat {
        let mut out = Mat::zeros(self.sup(), m.rows(), m.cols());
        for r in 0..m.rows() {
            for c in 0..m.cols() {
                out.set(r, c, self.ext.embed(m.get(r, c)));
            }
        }
        out
    }

    /// Same code (row space) test.
    pub fn same_code(&self, other: &RankCode) -> bool {
        self.sup() == other.sup() && rref(&self.generator).matrix == rref(&other.generator).matrix
    }
}

/// The `F_q`-span of the generator columns, stored in the expanded
/// ambient `F_q^{mk}`.
#[derive(Clone, Debug)]
pub struct QSystem {
    ext: Arc<Extension>,
    k: usize,
    space: Subspace,
}

impl QSystem {
    pub fn new(ext: Arc<Extension>, k: usize, space: Subspace) -> Result<QSystem> {
        if space.ambient() != k * ext.degree() || space.field() != ext.base() {
            return Err(Error::DimensionMismatch("q-system ambient must be F_q^{mk}".into()));
        }
        Ok(QSystem { ext, k, space })
    }

    pub fn ext(&self) -> &Arc<Extension> {
        &self.ext
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn space(&self) -> &Subspace {
        &self.space
    }

    /// The RREF basis as vectors of `F_{q^m}^k`.
    pub fn basis_vectors(&self) -> Vec<Vec<Elem>> {
        self.space.basis_rows().map(|r| collapse_vector(r, &self.ext)).collect()
    }

    /// Whether the system spans `F_{q^m}^k` over `F_{q^m}`, i.e. is the
    /// q-system of a `k`-dimensional code.
    pub fn spans(&self) -> bool {
        let cols = self.basis_vectors();
        if cols.len() < self.k {
            return false;
        }
        Mat::from_columns(self.ext.sup(), self.k, &cols).expect("k rows").rank() == self.k
    }

    /// The code whose generator columns are the RREF basis vectors.
    pub fn to_code(&self) -> Result<RankCode> {
        let cols = self.basis_vectors();
        let g = Mat::from_columns(self.ext.sup(), self.k, &cols)?;
        RankCode::from_generator(g, self.ext.clone())
    }
}

/// Expresses the F_q-dependencies among generator columns: returns the
/// shortened non-degenerate code and an invertible `M` over `F_q` with
/// `G M = (G' | 0)`.
pub fn compress_degenerate(code: &RankCode) -> Result<(RankCode, Mat)> {
    let n = code.n();
    let base = code.base();
    let expanded = Mat::from_columns(
        base,
        code.k() * code.m(),
        &code
            .generator
            .columns()
            .iter()
            .map(|c| expand_vector(c, code.ext()))
            .collect::<Vec<_>>(),
    )?;
    let deps = kernel(&expanded);
    let mut m = Mat::zeros(base, n, n);
    let complement: Vec<usize> = (0..n).filter(|c| !deps.pivots().contains(c)).collect();
    for (j, &c) in complement.iter().enumerate() {
        m.set(c, j, 1);
    }
    for (j, v) in deps.basis_rows().enumerate() {
        for (r, &x) in v.iter().enumerate() {
            m.set(r, complement.len() + j, x);
        }
    }
    let gm = code.generator.mul(&code.lift(&m))?;
    let mut rows = Vec::with_capacity(code.k());
    for r in 0..code.k() {
        debug_assert!(gm.row(r)[complement.len()..].iter().all(|&v| v == 0));
        rows.push(gm.row(r)[..complement.len()].to_vec());
    }
    let short = RankCode::from_rows(&rows, code.ext().clone())?;
    Ok((short, m))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Rank,
    Hamming,
}

/// Exact number of codewords of each weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightDistribution {
    pub metric: Metric,
    pub length: usize,
    pub counts: BTreeMap<usize, u64>,
}

impl WeightDistribution {
    /// Builds a distribution from per-class counts: weight 0 gets one
    /// codeword, every projective class contributes `|F| - 1`.
    pub fn from_classes(metric: Metric, length: usize, per_class: &[u64], scalars: u64) -> Self {
        let mut counts = BTreeMap::new();
        counts.insert(0, 1);
        for (w, &c) in per_class.iter().enumerate() {
            if c > 0 {
                *counts.entry(w).or_insert(0) += c * scalars;
            }
        }
        WeightDistribution { metric, length, counts }
    }

    pub fn count(&self, weight: usize) -> u64 {
        self.counts.get(&weight).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u128 {
        self.counts.values().map(|&c| c as u128).sum()
    }

    /// Nonzero weights that occur.
    pub fn support(&self) -> Vec<usize> {
        self.counts.keys().copied().filter(|&w| w > 0).collect()
    }

    pub fn min_distance(&self) -> Option<usize> {
        self.support().first().copied()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serialisable")
    }
}

struct Counts<'a>(&'a BTreeMap<usize, u64>);

impl Serialize for Counts<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (w, c) in self.0 {
            map.serialize_entry(&w.to_string(), c)?;
        }
        map.end()
    }
}

impl Serialize for WeightDistribution {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("WeightDistribution", 3)?;
        st.serialize_field("metric", &self.metric)?;
        st.serialize_field("n", &self.length)?;
        st.serialize_field("counts", &Counts(&self.counts))?;
        st.end()
    }
}

/// Sums `weight(point)` histograms over all projective points of `F^k`.
pub(crate) fn projective_histogram(
    field: &Field,
    k: usize,
    classes: u128,
    max_weight: usize,
    weight: impl Fn(&[Elem]) -> usize + Sync,
) -> Vec<u64> {
    (0..classes as u64)
        .into_par_iter()
        .fold(
            || vec![0u64; max_weight + 1],
            |mut acc, i| {
                let x = projective_point(field, k, i as u128);
                acc[weight(&x)] += 1;
                acc
            },
        )
        .reduce(
            || vec![0u64; max_weight + 1],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        )
}

/// Rank weight distribution by enumerating one codeword per scalar class.
pub fn rank_weight_distribution(code: &RankCode, budget: u64) -> Result<WeightDistribution> {
    let classes = code.check_budget(budget)?;
    let hist = projective_histogram(code.sup(), code.k(), classes, code.n(), |x| {
        code.codeword_rank(x)
    });
    Ok(WeightDistribution::from_classes(Metric::Rank, code.n(), &hist, code.sup().order() - 1))
}

/// `H_x = ker(e -> x . e)` as an `F_q`-subspace of `F_q^{mk}`.
pub fn hyperplane(ext: &Extension, x: &[Elem]) -> Subspace {
    let sup = ext.sup();
    let k = x.len();
    let lead = x.iter().position(|&v| v != 0).expect("nonzero covector");
    let inv = sup.inv(x[lead]).expect("nonzero");
    let mut gens = Vec::with_capacity((k - 1) * ext.degree());
    for i in (0..k).filter(|&i| i != lead) {
        // e_i - (x_i / x_lead) e_lead
        let mut v = vec![0; k];
        v[i] = 1;
        v[lead] = sup.neg(sup.mul(x[i], inv));
        for &b in ext.basis() {
            let scaled: Vec<Elem> = v.iter().map(|&c| sup.mul(b, c)).collect();
            gens.push(expand_vector(&scaled, ext));
        }
    }
    Subspace::span(ext.base(), k * ext.degree(), &gens).expect("expanded length")
}

/// Rank weight distribution through hyperplane sections of the q-system:
/// `rank(xG) = dim X - dim(X ∩ H_x)`.
pub fn hyperplane_weight_distribution(code: &RankCode, budget: u64) -> Result<WeightDistribution> {
    let classes = code.check_budget(budget)?;
    let qsys = code.qsystem();
    let x_space = qsys.space();
    let hist = projective_histogram(code.sup(), code.k(), classes, code.n(), |x| {
        let h = hyperplane(code.ext(), x);
        x_space.dim() - x_space.intersect(&h).expect("same ambient").dim()
    });
    Ok(WeightDistribution::from_classes(Metric::Rank, code.n(), &hist, code.sup().order() - 1))
}

pub fn min_distance(code: &RankCode, budget: u64) -> Result<usize> {
    let dist = rank_weight_distribution(code, budget)?;
    Ok(dist.min_distance().expect("a code of dimension >= 1 has nonzero codewords"))
}

/// Singleton bound `d = n - k + 1`, for `n <= m`.
pub fn is_mrd(code: &RankCode, budget: u64) -> Result<bool> {
    if code.n() > code.m() {
        return Err(Error::InvalidParameters(format!(
            "MRD test needs n <= m, got n = {}, m = {}",
            code.n(),
            code.m()
        )));
    }
    Ok(min_distance(code, budget)? == code.n() - code.k() + 1)
}

/// Gabidulin code over `ext.sup() / ext.base()`: row `i` is the `Q^i`-th
/// Frobenius image of the evaluation vector, `Q = |base|`. The default
/// evaluation vector is `1, x, ..., x^{l-1}`.
pub fn gabidulin(ext: Arc<Extension>, l: usize, k: usize, points: Option<Vec<Elem>>) -> Result<RankCode> {
    if k == 0 || k > l || l > ext.degree() {
        return Err(Error::InvalidParameters(format!(
            "Gabidulin code needs 1 <= k <= l <= m, got k = {k}, l = {l}, m = {}",
            ext.degree()
        )));
    }
    let g = points.unwrap_or_else(|| ext.basis()[..l].to_vec());
    if g.len() != l {
        return Err(Error::InvalidParameters(format!("{} evaluation points for length {l}", g.len())));
    }
    if g.iter().any(|&v| !ext.sup().contains(v)) || ext.rank(&g) != l {
        return Err(Error::LinearlyDependent);
    }
    let sup = ext.sup();
    let q = ext.q();
    let mut rows = Vec::with_capacity(k);
    let mut row = g;
    for _ in 0..k {
        rows.push(row.clone());
        row = row.iter().map(|&v| sup.frobenius(v, q).expect("q is a power of p")).collect();
    }
    RankCode::from_rows(&rows, ext)
}

/// `H_1(q, m, k)`: the `[mk, k, m]` code whose columns are an `F_q`-basis
/// of `F_{q^m}^k`.
pub fn hadamard_code(q: u64, m: u32, k: usize) -> Result<RankCode> {
    let (p, s) = crate::field::prime_power(q)
        .ok_or_else(|| Error::InvalidParameters(format!("{q} is not a prime power")))?;
    if k == 0 || m == 0 {
        return Err(Error::InvalidParameters("need m, k >= 1".into()));
    }
    let ext = Arc::new(Extension::canonical(p, s, m)?);
    let m = m as usize;
    let mut rows = vec![vec![0; m * k]; k];
    for (i, row) in rows.iter_mut().enumerate() {
        row[i * m..(i + 1) * m].copy_from_slice(ext.basis());
    }
    RankCode::from_rows(&rows, ext)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum ConstantWeightClass {
    NotConstant,
    /// One-dimensional code spanned by a vector of full rank `n`.
    DimOne { d: usize },
    /// `H_1(q, m, k)`.
    Hadamard { m: usize, k: usize },
}

/// Sorts a non-degenerate code into the constant-weight classification.
pub fn classify_constant_weight(code: &RankCode, budget: u64) -> Result<ConstantWeightClass> {
    let dim = code.qsystem().dim();
    if dim != code.n() {
        return Err(Error::Degenerate { length: code.n(), qsystem_dim: dim });
    }
    let dist = rank_weight_distribution(code, budget)?;
    let support = dist.support();
    if support.len() != 1 {
        return Ok(ConstantWeightClass::NotConstant);
    }
    let d = support[0];
    let (n, k, m) = (code.n(), code.k(), code.m());
    if k == 1 {
        if d != n {
            return Err(Error::Inconsistency(format!("one-dimensional constant weight code with d = {d} < n = {n}")));
        }
        return Ok(ConstantWeightClass::DimOne { d });
    }
    if n != m * k || d != m || dim != m * k {
        return Err(Error::Inconsistency(format!(
            "constant weight code of dimension {k} is not Hadamard: n = {n}, d = {d}, m = {m}"
        )));
    }
    Ok(ConstantWeightClass::Hadamard { m, k })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Equivalence {
    /// `rowspace(G1) = rowspace(alpha * G2 * M)`.
    Yes { alpha: Elem, m: Mat },
    No,
    BudgetExceeded { needed: u128 },
}

/// Exhaustive search for `alpha`, `M` with `C1 = alpha C2 M`.
///
/// The search cost is counted as `|GL(n,q)| (q^m - 1)/(q - 1)`. Scalars act
/// trivially on row spaces, so only `alpha = 1` is ever needed and the
/// search runs over `M` in row-by-row construction order.
pub fn codes_equivalent(c1: &RankCode, c2: &RankCode, budget: u64) -> Result<Equivalence> {
    if c1.sup() != c2.sup() || c1.base() != c2.base() {
        return Err(Error::FieldMismatch);
    }
    if c1.n() != c2.n() || c1.k() != c2.k() {
        return Err(Error::InvalidParameters("codes have different parameters".into()));
    }
    let n = c1.n();
    let q = c1.q();
    let scalar_classes = (c1.sup().order() as u128 - 1) / (q as u128 - 1);
    let needed = general_linear_order(n, q).saturating_mul(scalar_classes);
    if needed > budget as u128 {
        return Ok(Equivalence::BudgetExceeded { needed });
    }
    if c1.projective_classes() <= budget as u128
        && rank_weight_distribution(c1, budget)? != rank_weight_distribution(c2, budget)?
    {
        return Ok(Equivalence::No);
    }
    let target = rref(c1.generator()).matrix;
    let base = c1.base().clone();
    let found = for_each_invertible(&base, n, |rows| {
        let m = Mat::from_rows(&base, rows).expect("square");
        let gm = c2.generator().mul(&c2.lift(&m)).expect("n x n");
        if rref(&gm).matrix == target {
            ControlFlow::Break(m)
        } else {
            ControlFlow::Continue(())
        }
    });
    Ok(match found {
        Some(m) => Equivalence::Yes { alpha: 1, m },
        None => Equivalence::No,
    })
}

/// Convenience wrapper around [`linalg::rank_over_subfield`].
pub fn vector_rank(v: &[Elem], ext: &Extension) -> usize {
    linalg::rank_over_subfield(v, ext)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f16_over_f2() -> Arc<Extension> {
        Arc::new(Extension::canonical(2, 1, 4).unwrap())
    }

    #[test]
    fn rejects_rank_deficient_generators() {
        let ext = f16_over_f2();
        assert_eq!(
            RankCode::from_rows(&[vec![1, 2], vec![1, 2]], ext.clone()).unwrap_err(),
            Error::RankDeficient
        );
        assert!(RankCode::from_rows(&[vec![1, 0], vec![0, 1]], ext).is_ok());
    }

    #[test]
    fn nondegeneracy() {
        let ext = f16_over_f2();
        let c = RankCode::from_rows(&[vec![1, 2]], ext.clone()).unwrap();
        assert!(c.is_nondegenerate());
        let c = RankCode::from_rows(&[vec![1, 1]], ext.clone()).unwrap();
        assert!(!c.is_nondegenerate());
        let (short, m) = compress_degenerate(&c).unwrap();
        assert_eq!(short.n(), 1);
        assert_eq!(m.rank(), 2);
        let ok = RankCode::from_rows(&[vec![1, 2]], ext).unwrap();
        let (same, id) = compress_degenerate(&ok).unwrap();
        assert!(same.same_code(&ok));
        assert_eq!(id, Mat::identity(ok.base(), 2));
    }

    #[test]
    fn full_space_distance_one() {
        let ext = f16_over_f2();
        let c = RankCode::from_rows(&[vec![1, 0], vec![0, 1]], ext).unwrap();
        assert_eq!(min_distance(&c, DEFAULT_BUDGET).unwrap(), 1);
        assert!(is_mrd(&c, DEFAULT_BUDGET).unwrap());
    }

    #[test]
    fn gabidulin_parameter_checks() {
        let ext = f16_over_f2();
        assert!(gabidulin(ext.clone(), 5, 2, None).is_err());
        assert!(gabidulin(ext.clone(), 2, 3, None).is_err());
        assert_eq!(gabidulin(ext.clone(), 2, 1, Some(vec![1, 1])).unwrap_err(), Error::LinearlyDependent);
        let sq = gabidulin(ext, 3, 3, None).unwrap();
        assert_eq!(min_distance(&sq, DEFAULT_BUDGET).unwrap(), 1);
    }

    #[test]
    fn budget_is_reported() {
        let c = hadamard_code(2, 4, 3).unwrap();
        assert_eq!(
            rank_weight_distribution(&c, 100).unwrap_err(),
            Error::BudgetExceeded { needed: 273, budget: 100 }
        );
    }

    #[test]
    fn distribution_json_orders_weights_numerically() {
        let mut counts = BTreeMap::new();
        counts.insert(0, 1);
        counts.insert(2, 75);
        counts.insert(12, 3);
        let d = WeightDistribution { metric: Metric::Rank, length: 12, counts };
        assert_eq!(d.to_json(), r#"{"metric":"rank","n":12,"counts":{"0":1,"2":75,"12":3}}"#);
    }
}
