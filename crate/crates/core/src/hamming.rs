//! Hamming-metric codes from q-systems: the projective system of a
//! q-system, the associated Hamming code and the rank-to-Hamming weight
//! correspondence.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::Elem;
use crate::linalg::{projective_point, Mat};
use crate::rank::{projective_histogram, rank_weight_distribution, Metric, QSystem, RankCode, WeightDistribution};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectiveSystem {
    pub k: usize,
    /// Orbit representatives in `F_{q^m}^k`, sorted.
    pub points: Vec<Vec<Elem>>,
    pub multiplicities: Vec<u32>,
}

impl ProjectiveSystem {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// `(q^n - 1)/(q - 1)`, or `None` past `u64`.
pub fn projective_length(q: u64, n: usize) -> Option<u64> {
    let qn = (q as u128).checked_pow(n as u32)?;
    u64::try_from((qn - 1) / (q as u128 - 1)).ok()
}

/// One point per `F_q^*`-orbit of `X \ {0}`, each the smallest coordinate
/// tuple in its orbit.
pub fn projective_system(x: &QSystem, budget: u64) -> Result<ProjectiveSystem> {
    let ext = x.ext();
    let n = x.dim();
    if n == 0 {
        return Err(Error::InvalidParameters("the zero q-system has no points".into()));
    }
    let q = ext.q();
    let count = projective_length(q, n).filter(|&c| c <= budget).ok_or_else(|| Error::BudgetExceeded {
        needed: ((q as u128).saturating_pow(n as u32) - 1) / (q as u128 - 1),
        budget,
    })?;
    let basis = x.basis_vectors();
    let base = ext.base();
    let sup = ext.sup();
    let scalars: Vec<Elem> = (1..base.order()).map(|a| ext.embed(a)).collect();
    let mut points: Vec<Vec<Elem>> = (0..count)
        .into_par_iter()
        .map(|i| {
            let lambda = projective_point(base, n, i as u128);
            let mut w = vec![0; x.k()];
            for (&l, b) in lambda.iter().zip(&basis) {
                if l != 0 {
                    let l = ext.embed(l);
                    for (wi, &bi) in w.iter_mut().zip(b) {
                        *wi = sup.add(*wi, sup.mul(l, bi));
                    }
                }
            }
            scalars
                .iter()
                .map(|&a| w.iter().map(|&c| sup.mul(a, c)).collect::<Vec<_>>())
                .min()
                .expect("F_q^* is nonempty")
        })
        .collect();
    points.sort_unstable();
    let multiplicities = vec![1; points.len()];
    Ok(ProjectiveSystem { k: x.k(), points, multiplicities })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HammingCode {
    pub generator: Mat,
}

impl HammingCode {
    pub fn k(&self) -> usize {
        self.generator.rows()
    }

    pub fn length(&self) -> usize {
        self.generator.cols()
    }

    pub fn weight(&self, x: &[Elem]) -> usize {
        self.generator.left_mul_vec(x).iter().filter(|&&c| c != 0).count()
    }
}

pub fn hamming_expansion(code: &RankCode, budget: u64) -> Result<HammingCode> {
    let x = code.qsystem();
    if x.dim() != code.n() {
        return Err(Error::Degenerate { length: code.n(), qsystem_dim: x.dim() });
    }
    let ps = projective_system(&x, budget)?;
    let generator = Mat::from_columns(code.sup(), code.k(), &ps.points)?;
    Ok(HammingCode { generator })
}

pub fn hamming_weight_distribution(h: &HammingCode, budget: u64) -> Result<WeightDistribution> {
    let f = h.generator.field();
    let classes = crate::linalg::projective_count(f.order(), h.k());
    if classes > budget as u128 {
        return Err(Error::BudgetExceeded { needed: classes, budget });
    }
    let hist = projective_histogram(f, h.k(), classes, h.length(), |x| h.weight(x));
    Ok(WeightDistribution::from_classes(Metric::Hamming, h.length(), &hist, f.order() - 1))
}

/// `(q^n - q^{n-t})/(q - 1)`.
pub fn hamming_weight_for_rank(q: u64, n: usize, t: usize) -> u64 {
    let q = q as u128;
    ((q.pow(n as u32) - q.pow((n - t) as u32)) / (q - 1)) as u64
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightCorrespondence {
    pub holds: bool,
    pub checked: u64,
    /// A projective representative `x` where the weights disagree.
    pub counterexample: Option<Vec<Elem>>,
}

/// Checks `w_H(x G') = (q^n - q^{n - rank(x G)})/(q - 1)` for every
/// projective `x`.
pub fn verify_weight_correspondence(code: &RankCode, budget: u64) -> Result<WeightCorrespondence> {
    let classes = code.check_budget(budget)?;
    let h = hamming_expansion(code, budget)?;
    let (q, n) = (code.q(), code.n());
    let bad = (0..classes as u64).into_par_iter().find_first(|&i| {
        let x = projective_point(code.sup(), code.k(), i as u128);
        h.weight(&x) as u64 != hamming_weight_for_rank(q, n, code.codeword_rank(&x))
    });
    Ok(WeightCorrespondence {
        holds: bad.is_none(),
        checked: classes as u64,
        counterexample: bad.map(|i| projective_point(code.sup(), code.k(), i as u128)),
    })
}

/// Maps a rank distribution of an `n`-dimensional q-system to the
/// Hamming distribution of its expansion.
pub fn predicted_hamming_distribution(rank: &WeightDistribution, q: u64) -> Result<WeightDistribution> {
    let n = rank.length;
    let length = projective_length(q, n)
        .ok_or_else(|| Error::InvalidParameters(format!("expansion length overflows for q = {q}, n = {n}")))?;
    let counts = rank.counts.iter().map(|(&t, &c)| (hamming_weight_for_rank(q, n, t) as usize, c)).collect();
    Ok(WeightDistribution { metric: Metric::Hamming, length: length as usize, counts })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HammingReport {
    pub length: usize,
    pub k: usize,
    pub distribution: WeightDistribution,
    pub two_weight: bool,
    pub antipodal: bool,
    pub weights: Vec<usize>,
    /// Agreement with the distribution predicted from the source rank code.
    pub prediction_matches: Option<bool>,
}

impl HammingReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "metric": "hamming",
            "n": self.length,
            "k": self.k,
            "two_weight": self.two_weight,
            "antipodal": self.antipodal,
            "weights": self.weights,
            "counts": serde_json::to_value(&self.distribution).expect("serialisable")["counts"],
            "prediction_matches": self.prediction_matches,
        })
    }
}

pub fn analyze_hamming_two_weight(h: &HammingCode, budget: u64, source: Option<&RankCode>) -> Result<HammingReport> {
    let distribution = hamming_weight_distribution(h, budget)?;
    let weights = distribution.support();
    let two_weight = weights.len() == 2;
    let antipodal = two_weight && weights[1] == h.length();
    let prediction_matches = match source {
        Some(code) => {
            let rank = rank_weight_distribution(code, budget)?;
            Some(predicted_hamming_distribution(&rank, code.q())? == distribution)
        }
        None => None,
    };
    Ok(HammingReport { length: h.length(), k: h.k(), distribution, two_weight, antipodal, weights, prediction_matches })
}
