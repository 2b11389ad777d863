//! Antipodal two-weight (ATW) rank-metric codes: detection with the
//! closed-form weight counts, the standard constructions, the normal form
//! with a full-rank first row, expansion of 2-dimensional MRD codes, and
//! the classification at `d = n/2`.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::field::{prime_power, Elem, Embedding, Extension, Field};
use crate::linalg::{expand_vector, projective_point, rref, solve, Mat};
use crate::rank::{
    classify_constant_weight, compress_degenerate, is_mrd, rank_weight_distribution,
    ConstantWeightClass, RankCode, WeightDistribution,
};
use crate::spreads::{spread_from_atw, ScalarAction};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AtwReport {
    pub n: usize,
    pub k: usize,
    pub is_two_weight: bool,
    pub is_antipodal: bool,
    /// Minimum distance.
    pub d: usize,
    /// The larger weight of a two-weight code.
    pub second_weight: Option<usize>,
    pub distribution: WeightDistribution,
    /// Counts `(1, #weight d, #weight n)` predicted for a 2-dimensional
    /// antipodal code.
    pub formula_counts: Option<[u64; 3]>,
}

impl AtwReport {
    pub fn to_json(&self) -> serde_json::Value {
        let predicted = self.formula_counts.map(|[z, a, b]| {
            let mut m = serde_json::Map::new();
            m.insert("0".into(), json!(z));
            m.insert(self.d.to_string(), json!(a));
            m.insert(self.n.to_string(), json!(b));
            serde_json::Value::Object(m)
        });
        json!({
            "atw": self.is_antipodal,
            "two_weight": self.is_two_weight,
            "d": self.d,
            "d2": self.second_weight,
            "n": self.n,
            "k": self.k,
            "counts": serde_json::to_value(&self.distribution).expect("serialisable")["counts"],
            "predicted": predicted,
        })
    }
}

/// `(q^m - 1)(q^n - 1)/(q^{n-d} - 1)` codewords of weight `d` and the rest
/// of weight `n`, for an `[n, 2, d]` ATW code over `F_{q^m}/F_q`.
/// `None` when `(q^{n-d} - 1)` does not divide `(q^n - 1)`.
pub fn atw_formula_counts(q: u64, m: usize, n: usize, d: usize) -> Option<[u64; 3]> {
    let q = q as u128;
    let qm = q.checked_pow(m as u32)?;
    let qn = q.checked_pow(n as u32)?;
    let qt = q.checked_pow((n - d) as u32)?;
    if (qn - 1) % (qt - 1) != 0 {
        return None;
    }
    let weight_d = (qm - 1).checked_mul((qn - 1) / (qt - 1))?;
    let total = qm.checked_mul(qm)? - 1;
    let weight_n = total.checked_sub(weight_d)?;
    Some([1, u64::try_from(weight_d).ok()?, u64::try_from(weight_n).ok()?])
}

/// Reads the two-weight and antipodal properties off an exact distribution.
pub fn report_from_distribution(code: &RankCode, dist: WeightDistribution) -> Result<AtwReport> {
    let (n, k) = (code.n(), code.k());
    let support = dist.support();
    let d = support[0];
    let is_two_weight = support.len() == 2;
    let is_antipodal = is_two_weight && support[1] == n && d < n && dist.count(n) >= 1;
    let mut formula_counts = None;
    if is_antipodal && k == 2 {
        let predicted = atw_formula_counts(code.q(), code.m(), n, d).ok_or_else(|| {
            Error::Inconsistency(format!("ATW code with n - d = {} not dividing n = {n}", n - d))
        })?;
        let measured = [dist.count(0), dist.count(d), dist.count(n)];
        if measured != predicted {
            return Err(Error::Inconsistency(format!(
                "ATW weight counts {measured:?} differ from the closed form {predicted:?}"
            )));
        }
        formula_counts = Some(predicted);
    }
    Ok(AtwReport {
        n,
        k,
        is_two_weight,
        is_antipodal,
        d,
        second_weight: is_two_weight.then(|| support[1]),
        distribution: dist,
        formula_counts,
    })
}

pub fn analyze_atw(code: &RankCode, budget: u64) -> Result<AtwReport> {
    let dist = rank_weight_distribution(code, budget)?;
    report_from_distribution(code, dist)
}

fn split_q(q: u64) -> Result<(u64, u32)> {
    prime_power(q).ok_or_else(|| Error::InvalidParameters(format!("{q} is not a prime power")))
}

/// `F_q`-basis of `F_{q^d}` (monomial basis), embedded into `F_{q^m}`.
fn embedded_subfield_basis(p: u64, s: u32, d: u32, sup: &Field) -> Result<Vec<Elem>> {
    let sub = Extension::canonical(p, s, d)?;
    let emb = Embedding::new(sub.sup(), sup)?;
    Ok(sub.basis().iter().map(|&b| emb.apply(b)).collect())
}

/// The `[2d, 2, d]` code with rows `(0 | b)` and `(b | 0)`, `b` an
/// `F_q`-basis of `F_{q^d}`, over `F_{q^m}/F_q` with `d | m`, `d < m`.
pub fn example1_code(q: u64, d: u32, m: u32) -> Result<RankCode> {
    let (p, s) = split_q(q)?;
    if d == 0 || m % d != 0 {
        return Err(Error::InvalidParameters(format!("need d | m, got d = {d}, m = {m}")));
    }
    if d == m {
        return Err(Error::InvalidParameters(format!(
            "F_(q^{m}) must properly extend F_(q^{d}); with d = m no codeword has full rank"
        )));
    }
    let ext = Arc::new(Extension::canonical(p, s, m)?);
    let b = embedded_subfield_basis(p, s, d, ext.sup())?;
    let d = d as usize;
    let mut top = vec![0; 2 * d];
    let mut bottom = vec![0; 2 * d];
    top[d..].copy_from_slice(&b);
    bottom[..d].copy_from_slice(&b);
    RankCode::from_rows(&[top, bottom], ext)
}

/// The `[kd, k, d]` block-diagonal code over `F_{q^{2d}}/F_q`, `k > 2`,
/// with weights `{0, d, 2d}`.
pub fn example2_code(q: u64, d: u32, k: usize) -> Result<RankCode> {
    let (p, s) = split_q(q)?;
    if k <= 2 {
        return Err(Error::InvalidParameters(format!("need k > 2, got k = {k}")));
    }
    if d == 0 {
        return Err(Error::InvalidParameters("need d >= 1".into()));
    }
    let ext = Arc::new(Extension::canonical(p, s, 2 * d)?);
    let b = embedded_subfield_basis(p, s, d, ext.sup())?;
    let d = d as usize;
    let rows: Vec<Vec<Elem>> = (0..k)
        .map(|i| {
            let mut row = vec![0; k * d];
            row[i * d..(i + 1) * d].copy_from_slice(&b);
            row
        })
        .collect();
    RankCode::from_rows(&rows, ext)
}

/// An equivalent generator `[[c1, c2], [A, 0]]` with a full-rank first row
/// and `A` generating a non-degenerate constant-weight code of length `n - r`.
#[derive(Clone, Debug)]
pub struct NormalForm {
    pub generator: Mat,
    pub r: usize,
    /// `A`, the lower-left block.
    pub lower: RankCode,
    /// Invertible `S` over `F_{q^m}` with `generator = S G M`.
    pub row_transform: Mat,
    /// Invertible `M` over `F_q`.
    pub column_transform: Mat,
}

pub fn lemma3_normal_form(code: &RankCode, budget: u64) -> Result<NormalForm> {
    let report = analyze_atw(code, budget)?;
    if !report.is_antipodal {
        return Err(Error::NotAtw(format!("nonzero weights {:?}", report.distribution.support())));
    }
    let dim = code.qsystem().dim();
    if dim != code.n() {
        return Err(Error::Degenerate { length: code.n(), qsystem_dim: dim });
    }
    let (n, k) = (code.n(), code.k());
    let sup = code.sup().clone();
    let base = code.base().clone();

    let x = (0..code.projective_classes())
        .map(|i| projective_point(&sup, k, i))
        .find(|x| code.codeword_rank(x) == n)
        .expect("antipodal codes have a full-rank codeword");
    let lead = x.iter().position(|&v| v != 0).expect("nonzero");
    let mut s_rows = vec![x];
    for i in (0..k).filter(|&i| i != lead) {
        let mut e = vec![0; k];
        e[i] = 1;
        s_rows.push(e);
    }

    // move a nonzero entry of the full-rank row to the last column
    let top = code.codeword(&s_rows[0]);
    let j = top.iter().position(|&v| v != 0).expect("full-rank row is nonzero");
    let mut perm = Mat::identity(&base, n);
    perm.set(j, j, 0);
    perm.set(n - 1, n - 1, 0);
    perm.set(j, n - 1, 1);
    perm.set(n - 1, j, 1);

    let alpha = top[j];
    let mut s = Mat::from_rows(&sup, &s_rows)?;
    let g1 = s.mul(code.generator())?;
    for i in 1..k {
        let factor = sup.neg(sup.div(g1.get(i, j), alpha)?);
        for c in 0..k {
            let v = sup.add(s.get(i, c), sup.mul(factor, s.get(0, c)));
            s.set(i, c, v);
        }
    }
    let g2 = s.mul(code.generator())?.mul(&code.lift(&perm))?;

    let lower_rows: Vec<Vec<Elem>> = (1..k).map(|i| g2.row(i)[..n - 1].to_vec()).collect();
    let lower_full = RankCode::from_rows(&lower_rows, code.ext().clone())?;
    let (lower, m_short) = compress_degenerate(&lower_full)?;
    let mut m_ext = Mat::identity(&base, n);
    for r in 0..n - 1 {
        for c in 0..n - 1 {
            m_ext.set(r, c, m_short.get(r, c));
        }
    }
    let column_transform = perm.mul(&m_ext)?;
    let generator = s.mul(code.generator())?.mul(&code.lift(&column_transform))?;
    let r = n - lower.n();

    if code.ext().rank(generator.row(0)) != n {
        return Err(Error::Inconsistency("normal form lost the full-rank row".into()));
    }
    if k > 1 && classify_constant_weight(&lower, budget)? == ConstantWeightClass::NotConstant {
        return Err(Error::Inconsistency("lower block of an ATW normal form is not constant weight".into()));
    }
    Ok(NormalForm { generator, r, lower, row_transform: s, column_transform })
}

/// Replaces each column `G_i` of an `[l, 2, l-1]` MRD code over
/// `F_{q^m}/F_{q^t}` by the `t` columns `a_j G_i`, `a_j` the monomial
/// `F_q`-basis of `F_{q^t}`. The result is an `[lt, 2, (l-1)t]` ATW code
/// over `F_{q^m}/F_q`.
pub fn expand_mrd_to_atw(mrd: &RankCode, base: &Field, budget: u64) -> Result<RankCode> {
    if mrd.k() != 2 {
        return Err(Error::InvalidParameters(format!("MRD code must have dimension 2, got {}", mrd.k())));
    }
    if !mrd.is_nondegenerate() {
        let dim = mrd.qsystem().dim();
        return Err(Error::Degenerate { length: mrd.n(), qsystem_dim: dim });
    }
    if !is_mrd(mrd, budget)? {
        return Err(Error::InvalidParameters("input code is not MRD".into()));
    }
    let mid = Extension::new(mrd.base(), base)?;
    let a: Vec<Elem> = mid.basis().iter().map(|&b| mrd.ext().embed(b)).collect();
    let ext = Arc::new(Extension::new(mrd.sup(), base)?);
    let sup = mrd.sup();
    let g = mrd.generator();
    let rows: Vec<Vec<Elem>> = (0..2)
        .map(|r| {
            (0..mrd.n())
                .flat_map(|i| a.iter().map(move |&aj| sup.mul(aj, g.get(r, i))))
                .collect()
        })
        .collect();
    RankCode::from_rows(&rows, ext)
}

/// Per-codeword rank comparison between an MRD code and its expansion:
/// every `x` must satisfy `rank_q(x G~) = t * rank_Q(x G)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankCorrespondence {
    pub holds: bool,
    pub checked: u64,
    /// `(mrd rank, expanded rank)` -> number of projective classes.
    pub pairs: BTreeMap<String, u64>,
}

pub fn verify_expansion_ranks(mrd: &RankCode, expanded: &RankCode, budget: u64) -> Result<RankCorrespondence> {
    let classes = mrd.check_budget(budget)?;
    let t = mrd.base().degree() / expanded.base().degree();
    let mut pairs = BTreeMap::new();
    let mut holds = true;
    for i in 0..classes {
        let x = projective_point(mrd.sup(), 2, i);
        let (r, rt) = (mrd.codeword_rank(&x), expanded.codeword_rank(&x));
        holds &= rt == t as usize * r;
        *pairs.entry(format!("{r}->{rt}")).or_insert(0) += 1;
    }
    Ok(RankCorrespondence { holds, checked: classes as u64, pairs })
}

/// The action of multiplication by the generator of the embedded
/// `F_{q^t}` on the q-system, in coordinates relative to the generator
/// columns. `None` when the q-system is not closed under it.
pub fn qsystem_scalar_action(code: &RankCode, t: usize) -> Result<Option<ScalarAction>> {
    let (p, s) = (code.base().characteristic(), code.base().degree());
    if t == 0 || code.m() % t != 0 {
        return Err(Error::InvalidParameters(format!("t = {t} does not divide m = {}", code.m())));
    }
    let sub = Field::canonical(p, s * t as u32)?;
    let emb = Embedding::new(&sub, code.sup())?;
    let gen = emb.image_of_generator();
    let sup = code.sup();
    let cols = code.generator().columns();
    let expanded: Vec<Vec<Elem>> = cols.iter().map(|c| expand_vector(c, code.ext())).collect();
    let e = Mat::from_columns(code.base(), code.k() * code.m(), &expanded)?;
    let mut action = Mat::zeros(code.base(), code.n(), code.n());
    for (i, col) in cols.iter().enumerate() {
        let scaled: Vec<Elem> = col.iter().map(|&v| sup.mul(gen, v)).collect();
        let Some(lambda) = solve(&e, &expand_vector(&scaled, code.ext())) else {
            return Ok(None);
        };
        for (j, &l) in lambda.iter().enumerate() {
            action.set(i, j, l);
        }
    }
    Ok(Some(ScalarAction::new(action, t, sub)?))
}

/// Whether the q-system of an ATW code is closed under multiplication by
/// `F_{q^{n-d}}`, i.e. the code is induced by an MRD code.
pub fn is_induced_by_mrd(code: &RankCode, budget: u64) -> Result<bool> {
    let report = analyze_atw(code, budget)?;
    if !report.is_antipodal {
        return Err(Error::NotAtw(format!("nonzero weights {:?}", report.distribution.support())));
    }
    let t = code.n() - report.d;
    if code.m() % t != 0 {
        return Err(Error::InvalidParameters(format!("n - d = {t} does not divide m = {}", code.m())));
    }
    Ok(qsystem_scalar_action(code, t)?.is_some())
}

#[derive(Clone, Debug)]
pub struct HalfDistanceForm {
    /// `[[0, e], [e, 0]]` with `e = (1, alpha_2, ..., alpha_d)`.
    pub generator: Mat,
    /// `e`, an `F_q`-basis of the embedded `F_{q^d}`.
    pub subfield_basis: Vec<Elem>,
    pub subfield_degree: usize,
    /// `generator = S G M`.
    pub row_transform: Mat,
    pub column_transform: Mat,
}

#[derive(Clone, Debug)]
pub enum HalfDistanceClass {
    NotAtw,
    Canonical(Box<HalfDistanceForm>),
}

/// Brings an `[n, 2, n/2]` ATW code to the form `[[0, e], [e, 0]]`: the
/// first two extracted spread blocks become the coordinate blocks, their
/// hyperplane covectors become the rows, leading entries are scaled to 1
/// and the second block is re-expressed over the first.
pub fn classify_half_distance(code: &RankCode, budget: u64) -> Result<HalfDistanceClass> {
    let n = code.n();
    if code.k() != 2 || n % 2 != 0 {
        return Err(Error::InvalidParameters(format!(
            "need an [n, 2, n/2] code with n even, got k = {}, n = {n}",
            code.k()
        )));
    }
    let report = analyze_atw(code, budget)?;
    let d = n / 2;
    if report.d != d {
        return Err(Error::InvalidParameters(format!("minimum distance {} is not n/2 = {d}", report.d)));
    }
    if !report.is_antipodal {
        return Ok(HalfDistanceClass::NotAtw);
    }
    if code.m() % d != 0 {
        return Err(Error::Inconsistency(format!("[{n}, 2, {d}] ATW code with d not dividing m = {}", code.m())));
    }
    let extracted = spread_from_atw(code, budget)?;
    let sup = code.sup().clone();
    let base = code.base().clone();
    let blocks = &extracted.spread.elements()[..2];

    // columns of B: the RREF bases of the first two blocks
    let mut b = Mat::zeros(&base, n, n);
    for (c, v) in blocks.iter().flat_map(|s| s.basis_vecs()).enumerate() {
        for (r, &x) in v.iter().enumerate() {
            b.set(r, c, x);
        }
    }
    let mut s = Mat::from_rows(&sup, &extracted.covectors[..2])?;
    let gb = s.mul(code.generator())?.mul(&code.lift(&b))?;
    if gb.row(0)[..d].iter().any(|&v| v != 0) || gb.row(1)[d..].iter().any(|&v| v != 0) {
        return Err(Error::Inconsistency("spread block is not inside its hyperplane".into()));
    }
    for (r, offset) in [(0, d), (1, 0)] {
        let inv = sup.inv(gb.get(r, offset))?;
        for c in 0..2 {
            s.set(r, c, sup.mul(inv, s.get(r, c)));
        }
    }
    let gb = s.mul(code.generator())?.mul(&code.lift(&b))?;
    let e1 = gb.row(0)[d..].to_vec();
    let e2 = gb.row(1)[..d].to_vec();

    // T with e2 T = e1
    let ext = code.ext();
    let e2_cols: Vec<Vec<Elem>> = e2.iter().map(|&v| ext.coords(v)).collect();
    let e2_mat = Mat::from_columns(&base, code.m(), &e2_cols)?;
    let mut t = Mat::zeros(&base, d, d);
    for (j, &target) in e1.iter().enumerate() {
        let coeffs = solve(&e2_mat, &ext.coords(target)).ok_or_else(|| {
            Error::Inconsistency("blocks of a half-distance ATW code span different F_q-spaces".into())
        })?;
        for (i, &c) in coeffs.iter().enumerate() {
            t.set(i, j, c);
        }
    }
    let mut diag = Mat::identity(&base, n);
    for i in 0..d {
        for j in 0..d {
            diag.set(i, j, t.get(i, j));
        }
    }
    let column_transform = b.mul(&diag)?;
    let generator = s.mul(code.generator())?.mul(&code.lift(&column_transform))?;
    let mut expected = Mat::zeros(&sup, 2, n);
    for j in 0..d {
        expected.set(0, d + j, e1[j]);
        expected.set(1, j, e1[j]);
    }
    if generator != expected || rref(&generator).rank != 2 {
        return Err(Error::Inconsistency("canonical form does not match".into()));
    }

    // the span of e must be the subfield of order q^d
    for &a in &e1 {
        for &c in &e1 {
            let mut vals = e1.clone();
            vals.push(sup.mul(a, c));
            if ext.rank(&vals) != d {
                return Err(Error::Inconsistency("span of (1, alpha_i) is not closed under products".into()));
            }
        }
    }
    let (p, s_deg) = (base.characteristic(), base.degree());
    for v in embedded_subfield_basis(p, s_deg, d as u32, &sup)? {
        let mut vals = e1.clone();
        vals.push(v);
        if ext.rank(&vals) != d {
            return Err(Error::Inconsistency("span of (1, alpha_i) differs from the subfield".into()));
        }
    }
    Ok(HalfDistanceClass::Canonical(Box::new(HalfDistanceForm {
        generator,
        subfield_basis: e1,
        subfield_degree: d,
        row_transform: s,
        column_transform,
    })))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rank::DEFAULT_BUDGET;

    #[test]
    fn closed_form_counts() {
        assert_eq!(atw_formula_counts(2, 4, 4, 2), Some([1, 75, 180]));
        assert_eq!(atw_formula_counts(2, 6, 6, 4), Some([1, 1323, 2772]));
        assert_eq!(atw_formula_counts(2, 5, 5, 3), None);
    }

    #[test]
    fn example_parameter_checks() {
        assert!(example1_code(2, 2, 2).is_err());
        assert!(example1_code(2, 3, 4).is_err());
        assert!(example1_code(6, 1, 2).is_err());
        assert!(example2_code(2, 1, 2).is_err());
    }

    #[test]
    fn example1_small() {
        let c = example1_code(2, 1, 2).unwrap();
        let r = analyze_atw(&c, DEFAULT_BUDGET).unwrap();
        assert!(r.is_antipodal);
        assert_eq!(r.distribution.support(), vec![1, 2]);
    }

    #[test]
    fn normal_form_rejects_non_atw() {
        let c = crate::rank::hadamard_code(2, 2, 2).unwrap();
        assert!(matches!(lemma3_normal_form(&c, DEFAULT_BUDGET), Err(Error::NotAtw(_))));
    }

    #[test]
    fn half_distance_preconditions() {
        let ext = Arc::new(Extension::canonical(2, 1, 4).unwrap());
        let gab = crate::rank::gabidulin(ext, 4, 2, None).unwrap();
        assert!(matches!(classify_half_distance(&gab, DEFAULT_BUDGET), Err(Error::InvalidParameters(_))));
    }
}
