use std::sync::Arc;

use atwkit::atw::*;
use atwkit::rank::{gabidulin, hadamard_code, rank_weight_distribution, DEFAULT_BUDGET};
use atwkit::spreads::*;
use atwkit::{Extension, Field};

const B: u64 = DEFAULT_BUDGET;

fn counts(r: &AtwReport) -> Vec<(usize, u64)> {
    r.distribution.support().iter().map(|&w| (w, r.distribution.count(w))).chain([(0, r.distribution.count(0))]).collect()
}

#[test]
fn example1_weights_and_spread() {
    let c = example1_code(2, 2, 4).unwrap();
    let r = analyze_atw(&c, B).unwrap();
    assert!(r.is_antipodal);
    assert_eq!(counts(&r), vec![(2, 75), (4, 180), (0, 1)]);
    assert_eq!(r.formula_counts, Some([1, 75, 180]));
    let s = spread_from_atw(&c, B).unwrap();
    assert_eq!(s.spread.len(), 5);
    assert_eq!(s.spread.t(), 2);
    assert_eq!(direct_sum_split(&s.spread).unwrap().len(), 2);
    let th = verify_theorem6(&c, B).unwrap();
    assert!(th.atw && th.induces_subspread && th.agree);
    assert!(is_induced_by_mrd(&c, B).unwrap());
    let action = qsystem_scalar_action(&c, 2).unwrap().unwrap();
    assert!(is_fieldlinear_spread(&s.spread, &action).unwrap());
    match classify_half_distance(&c, B).unwrap() {
        HalfDistanceClass::Canonical(f) => assert_eq!(f.subfield_degree, 2),
        HalfDistanceClass::NotAtw => panic!(),
    }
    let nf = lemma3_normal_form(&c, B).unwrap();
    assert_eq!(nf.r, 2);
}

#[test]
fn mrd_expansion() {
    let ext = Arc::new(Extension::canonical(2, 2, 3).unwrap());
    let mrd = gabidulin(ext, 3, 2, None).unwrap();
    let f2 = Field::canonical(2, 1).unwrap();
    let c = expand_mrd_to_atw(&mrd, &f2, B).unwrap();
    assert_eq!(c.n(), 6);
    let r = analyze_atw(&c, B).unwrap();
    assert_eq!(counts(&r), vec![(4, 1323), (6, 2772), (0, 1)]);
    let corr = verify_expansion_ranks(&mrd, &c, B).unwrap();
    assert!(corr.holds);
    let s = spread_from_atw(&c, B).unwrap();
    assert_eq!(s.spread.len(), 21);
    assert_eq!(direct_sum_split(&s.spread).unwrap().len(), 3);
    assert!(verify_theorem6(&c, B).unwrap().agree);
    assert!(is_induced_by_mrd(&c, B).unwrap());
}

#[test]
fn gabidulin_423() {
    let ext = Arc::new(Extension::canonical(2, 1, 4).unwrap());
    let g = gabidulin(ext, 4, 2, None).unwrap();
    let r = analyze_atw(&g, B).unwrap();
    assert!(r.is_antipodal);
    assert_eq!(counts(&r), vec![(3, 225), (4, 30), (0, 1)]);
    let th = verify_theorem6(&g, B).unwrap();
    assert!(th.agree && th.atw);
    let nf = lemma3_normal_form(&g, B).unwrap();
    assert_eq!(nf.r, 1);
    assert_eq!(nf.lower.n(), 3);
}

#[test]
fn hadamard_outside_equivalence_range() {
    let h = hadamard_code(2, 2, 2).unwrap();
    let th = verify_theorem6(&h, B).unwrap();
    assert!(!th.atw);
    assert!(th.induces_subspread);
    assert!(!th.agree);
}

#[test]
fn example2_two_weight_not_antipodal() {
    let c = example2_code(2, 1, 3).unwrap();
    let r = analyze_atw(&c, B).unwrap();
    assert!(r.is_two_weight && !r.is_antipodal);
    assert_eq!(rank_weight_distribution(&c, B).unwrap().support(), vec![1, 2]);
}
