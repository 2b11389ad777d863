mod common;

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use atwkit::atw::{analyze_atw, example1_code, example2_code, qsystem_scalar_action};
use atwkit::format::{parse_spread, write_spread};
use atwkit::hamming::*;
use atwkit::linalg::enumerate_subspaces;
use atwkit::rank::{gabidulin, hadamard_code, rank_weight_distribution, DEFAULT_BUDGET};
use atwkit::spreads::*;
use atwkit::{Extension, Field, RankCode, Subspace};

const B: u64 = DEFAULT_BUDGET;

#[test]
fn desarguesian_spreads_are_spreads() {
    for q in [2u64, 3] {
        for t in 1..=8usize {
            for l in 1..=8 / t {
                if q == 3 && t * l > 6 {
                    continue;
                }
                let (s, action) = desarguesian_with_action(l, t, q).unwrap();
                assert_eq!(verify_spread(&s), Ok(()), "D({l},{t},{q})");
                assert!(is_fieldlinear_spread(&s, &action).unwrap());
                assert_eq!(direct_sum_split(&s).unwrap().len(), l);
            }
        }
    }
}

#[test]
fn projections_of_d222_onto_hyperplanes() {
    let s = desarguesian_spread(2, 2, 2).unwrap();
    let f = s.field().clone();
    let ws: Vec<Subspace> = enumerate_subspaces(&f, 4, 3, 100).unwrap().collect();
    assert_eq!(ws.len(), 15);
    for w in &ws {
        let (els, r) = project_spread(&s, w).unwrap();
        // a 3-space contains exactly one spread plane and meets the others in lines
        assert_eq!(r.dims, vec![1, 2]);
        assert_eq!(r.t_prime, None);
        assert!(!r.is_subspread);
        assert_eq!(els.len(), 5);
    }
    let g = Field::canonical(2, 2).unwrap();
    assert!(project_spread(&s, &Subspace::full(&g, 4)).is_err());
}

#[test]
fn truncated_dump_names_the_cover_axiom() {
    let s = spread_from_atw(&example1_code(2, 2, 4).unwrap(), B).unwrap().spread;
    let text = write_spread(&s);
    let cut: String = text.lines().take(4).map(|l| format!("{l}\n")).collect();
    let back = parse_spread(&cut).unwrap();
    let v = verify_spread(&back).unwrap_err();
    assert!(v.to_string().starts_with("cover"));
}

#[test]
fn hyperplane_section_dimension() {
    let c = example1_code(2, 2, 4).unwrap();
    assert_eq!(hyperplane_section(&c, &[1, 0]).dim(), 2);
}

#[test]
fn example1_spread_is_field_linear() {
    let c = example1_code(2, 2, 4).unwrap();
    let s = spread_from_atw(&c, B).unwrap();
    let a = qsystem_scalar_action(&c, 2).unwrap().unwrap();
    assert!(is_fieldlinear_spread(&s.spread, &a).unwrap());
}

#[test]
fn non_atw_rejected_by_extraction() {
    let ext = Arc::new(Extension::canonical(2, 1, 4).unwrap());
    let c = RankCode::from_rows(&[vec![1, 2, 4, 8], vec![0, 1, 3, 5]], ext).unwrap();
    let r = analyze_atw(&c, B).unwrap();
    if !r.is_antipodal {
        assert!(spread_from_atw(&c, B).is_err());
    }
}

#[test]
fn subspread_agrees_with_antipodality_on_random_codes() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut seen_false = 0;
    for _ in 0..60 {
        let m = rng.gen_range(2..=5u32);
        let n = rng.gen_range(2..=m as usize);
        let ext = Arc::new(Extension::canonical(2, 1, m).unwrap());
        let rows: Vec<Vec<u64>> = (0..2).map(|_| (0..n).map(|_| rng.gen_range(0..1u64 << m)).collect()).collect();
        let Ok(c) = RankCode::from_rows(&rows, ext) else { continue };
        if !c.is_nondegenerate() {
            continue;
        }
        let th = verify_theorem6(&c, B).unwrap();
        assert!(th.agree, "{th:?}");
        seen_false += (!th.atw) as usize;
    }
    assert!(seen_false > 0);
}

#[test]
fn hamming_expansion_of_example2() {
    let c = example2_code(2, 1, 3).unwrap();
    let h = hamming_expansion(&c, B).unwrap();
    assert_eq!((h.k(), h.length()), (3, 7));
    let r = analyze_hamming_two_weight(&h, B, Some(&c)).unwrap();
    assert_eq!(r.weights, vec![4, 6]);
    assert!(r.two_weight && !r.antipodal);
    assert_eq!(r.prediction_matches, Some(true));
    let brute = common::brute_hamming_distribution(&h.generator);
    assert_eq!(brute, r.distribution.counts);
}

#[test]
fn hadamard_expansion_has_constant_weight() {
    for (q, m, k) in [(2u64, 2u32, 2usize), (2, 3, 2), (3, 2, 2)] {
        let c = hadamard_code(q, m, k).unwrap();
        let h = hamming_expansion(&c, B).unwrap();
        let r = analyze_hamming_two_weight(&h, B, Some(&c)).unwrap();
        let n = m as usize * k;
        assert_eq!(r.weights, vec![hamming_weight_for_rank(q, n, m as usize) as usize]);
        assert!(!r.two_weight);
    }
}

#[test]
fn gabidulin_weight_correspondence() {
    let ext = Arc::new(Extension::canonical(2, 1, 4).unwrap());
    let g = gabidulin(ext, 4, 2, None).unwrap();
    let corr = verify_weight_correspondence(&g, B).unwrap();
    assert!(corr.holds);
    assert_eq!(corr.checked, 17);
    let h = hamming_expansion(&g, B).unwrap();
    let r = analyze_hamming_two_weight(&h, B, None).unwrap();
    assert_eq!(r.weights, vec![14, 15]);
    assert_eq!(r.length, 15);
    assert!(r.antipodal);
}

#[test]
fn projective_system_sizes() {
    let c = example1_code(2, 2, 4).unwrap();
    let ps = projective_system(&c.qsystem(), B).unwrap();
    assert_eq!(ps.len(), 15);
    assert!(ps.points.windows(2).all(|w| w[0] < w[1]));
    let ext = Arc::new(Extension::canonical(2, 2, 3).unwrap());
    let mrd = gabidulin(ext, 3, 2, None).unwrap();
    let big = atwkit::atw::expand_mrd_to_atw(&mrd, &Field::canonical(2, 1).unwrap(), B).unwrap();
    assert_eq!(hamming_expansion(&big, B).unwrap().length(), 63);
}

#[test]
fn two_weight_transfers_to_expansion() {
    for c in [example1_code(2, 2, 4).unwrap(), example2_code(2, 1, 3).unwrap(), example1_code(3, 1, 2).unwrap()] {
        let rank = rank_weight_distribution(&c, B).unwrap();
        let h = analyze_hamming_two_weight(&hamming_expansion(&c, B).unwrap(), B, Some(&c)).unwrap();
        assert_eq!(rank.support().len() == 2, h.two_weight);
        let antipodal = rank.support().len() == 2 && rank.support()[1] == c.n();
        assert!(!antipodal || h.antipodal);
    }
}
