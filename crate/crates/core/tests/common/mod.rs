#![allow(dead_code)]

use std::collections::{BTreeMap, HashSet};

use atwkit::linalg::vector_from_index;
use atwkit::{Elem, Extension, Field, RankCode};

/// Schoolbook product of digit polynomials reduced by the modulus.
pub fn naive_mul(f: &Field, a: Elem, b: Elem) -> Elem {
    let p = f.characteristic();
    let (da, db) = (f.digits(a), f.digits(b));
    let mut prod = vec![0u64; da.len() + db.len()];
    for (i, &x) in da.iter().enumerate() {
        for (j, &y) in db.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    let m = f.modulus();
    let deg = m.len() - 1;
    for top in (deg..prod.len()).rev() {
        let c = prod[top];
        if c != 0 {
            for (i, &mi) in m.iter().enumerate() {
                let idx = top - deg + i;
                prod[idx] = (prod[idx] + p * p - c * mi % p) % p;
            }
        }
    }
    f.from_digits(&prod[..deg])
}

pub fn naive_add(f: &Field, a: Elem, b: Elem) -> Elem {
    let p = f.characteristic();
    let s: Vec<u64> = f.digits(a).iter().zip(f.digits(b)).map(|(x, y)| (x + y) % p).collect();
    f.from_digits(&s)
}

/// `log_q` of the size of the `F_q`-span, by listing every combination.
pub fn brute_rank(v: &[Elem], ext: &Extension) -> usize {
    let sup = ext.sup();
    let base = ext.base();
    let q = base.order();
    let mut span = HashSet::new();
    let combos = (q as u128).pow(v.len() as u32);
    for idx in 0..combos {
        let lambda = vector_from_index(base, v.len(), idx);
        let mut acc = 0;
        for (&l, &x) in lambda.iter().zip(v) {
            acc = naive_add(sup, acc, naive_mul(sup, ext.embed(l), x));
        }
        span.insert(acc);
    }
    let mut size = span.len() as u64;
    let mut r = 0;
    while size > 1 {
        assert_eq!(size % q, 0, "span size is not a power of q");
        size /= q;
        r += 1;
    }
    r
}

/// Every codeword `xG`, `x` ranging over all of `F_{q^m}^k`.
pub fn brute_rank_distribution(code: &RankCode) -> BTreeMap<usize, u64> {
    let sup = code.sup();
    let total = (sup.order() as u128).pow(code.k() as u32);
    let mut counts = BTreeMap::new();
    for idx in 0..total {
        let x = vector_from_index(sup, code.k(), idx);
        let c: Vec<Elem> = (0..code.n())
            .map(|j| {
                (0..code.k()).fold(0, |acc, i| naive_add(sup, acc, naive_mul(sup, x[i], code.generator().get(i, j))))
            })
            .collect();
        *counts.entry(brute_rank(&c, code.ext())).or_insert(0) += 1;
    }
    counts
}

/// Hamming weights of every codeword of a Hamming generator.
pub fn brute_hamming_distribution(g: &atwkit::Mat) -> BTreeMap<usize, u64> {
    let f = g.field();
    let total = (f.order() as u128).pow(g.rows() as u32);
    let mut counts = BTreeMap::new();
    for idx in 0..total {
        let x = vector_from_index(f, g.rows(), idx);
        let w = (0..g.cols())
            .filter(|&j| (0..g.rows()).fold(0, |acc, i| naive_add(f, acc, naive_mul(f, x[i], g.get(i, j)))) != 0)
            .count();
        *counts.entry(w).or_insert(0) += 1;
    }
    counts
}
