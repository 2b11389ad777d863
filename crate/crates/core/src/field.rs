//! Prime-power finite fields `F_{p^D}` with deterministic moduli, and
//! embeddings between fields of a common tower.
//!
//! Elements are plain integers in `[0, p^D)`: base-`p` digit `i` is the
//! coefficient of `x^i` in the polynomial representative. All arithmetic
//! goes through the owning [`Field`]; [`FieldElement`] pairs a value with
//! its owner when ownership must be checked.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Integer encoding of a field element.
pub type Elem = u64;

const MAX_ORDER_LOG2: u32 = 62;
const TABLE_LIMIT: u64 = 1 << 16;

/// An immutable finite field `F_p[x] / (modulus)`. Cloning is cheap.
#[derive(Clone)]
pub struct Field(Arc<Inner>);

struct Inner {
    p: u64,
    degree: u32,
    order: u64,
    /// Monic, low degree first, `degree + 1` entries.
    modulus: Vec<u64>,
    modulus_int: u64,
    /// `pow_p[i] = p^i` for `i <= degree`.
    pow_p: Vec<u64>,
    tables: Option<LogTables>,
}

struct LogTables {
    log: Vec<u32>,
    /// Twice the group order so that `exp[log a + log b]` needs no reduction.
    exp: Vec<u32>,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

fn checked_order(p: u64, degree: u32) -> Result<u64> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if degree == 0 {
        return Err(Error::ZeroDegree);
    }
    if p >= 1 << 31 {
        return Err(Error::FieldTooLarge { p, degree });
    }
    let mut order: u64 = 1;
    for _ in 0..degree {
        order = order
            .checked_mul(p)
            .filter(|o| *o <= 1 << MAX_ORDER_LOG2)
            .ok_or(Error::FieldTooLarge { p, degree })?;
    }
    Ok(order)
}

/// If `q` is a prime power `p^s` (s >= 1) returns `(p, s)`.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q && q % p != 0 {
        p += 1;
    }
    if q % p != 0 {
        p = q;
    }
    let mut rest = q;
    let mut s = 0;
    while rest % p == 0 {
        rest /= p;
        s += 1;
    }
    (rest == 1).then_some((p, s))
}

mod poly {
    //! Dense polynomials over `F_p`, low degree first, no trailing zeros.

    pub fn trim(mut a: Vec<u64>) -> Vec<u64> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    fn inv_mod(a: u64, p: u64) -> u64 {
        let mut r = 1u64;
        let mut b = a % p;
        let mut e = p - 2;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        r
    }

    pub fn rem(mut a: Vec<u64>, m: &[u64], p: u64) -> Vec<u64> {
        let dm = m.len() - 1;
        let lead_inv = inv_mod(m[dm], p);
        a = trim(a);
        while a.len() > dm {
            let top = a.len() - 1;
            let c = a[top] * lead_inv % p;
            if c != 0 {
                let shift = top - dm;
                for (j, &mj) in m.iter().enumerate() {
                    let sub = c * mj % p;
                    a[shift + j] = (a[shift + j] + p - sub) % p;
                }
            }
            a = trim(a);
        }
        a
    }

    pub fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % p;
            }
        }
        trim(out)
    }

    pub fn mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        rem(mul(a, b, p), m, p)
    }

    pub fn powmod(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
        let mut result = vec![1u64];
        let mut b = rem(base.to_vec(), m, p);
        while e > 0 {
            if e & 1 == 1 {
                result = mulmod(&result, &b, m, p);
            }
            b = mulmod(&b, &b, m, p);
            e >>= 1;
        }
        result
    }

    pub fn gcd(mut a: Vec<u64>, mut b: Vec<u64>, p: u64) -> Vec<u64> {
        a = trim(a);
        b = trim(b);
        while !b.is_empty() {
            let r = rem(a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    /// Ben-Or: `f` of degree D is irreducible iff `gcd(x^{p^i} - x, f) = 1`
    /// for every `i <= D/2`.
    pub fn is_irreducible(f: &[u64], p: u64) -> bool {
        let d = f.len() - 1;
        if d == 0 {
            return false;
        }
        if d == 1 {
            return true;
        }
        let x = vec![0u64, 1];
        let mut h = x.clone();
        for _ in 0..d / 2 {
            h = powmod(&h, p, f, p);
            let mut diff = h.clone();
            diff.resize(diff.len().max(2), 0);
            diff[1] = (diff[1] + p - 1) % p;
            let g = gcd(f.to_vec(), trim(diff), p);
            if g.len() > 1 {
                return false;
            }
        }
        true
    }
}

impl Field {
    /// The canonical field of order `p^degree`: its modulus is the monic
    /// irreducible polynomial with the smallest base-`p` integer encoding.
    pub fn canonical(p: u64, degree: u32) -> Result<Field> {
        let order = checked_order(p, degree)?;
        for low in 0..order {
            let mut coeffs = digits_of(low, p, degree as usize);
            coeffs.push(1);
            if poly::is_irreducible(&coeffs, p) {
                return Ok(Self::build(p, degree, order, coeffs));
            }
        }
        unreachable!("an irreducible polynomial of every degree exists over F_p")
    }

    /// The field with an explicitly chosen modulus, given by its integer encoding.
    pub fn with_modulus(p: u64, degree: u32, modulus_int: u64) -> Result<Field> {
        let order = checked_order(p, degree)?;
        let coeffs = digits_of(modulus_int, p, degree as usize + 1);
        if coeffs[degree as usize] != 1 || modulus_int >= order * p {
            return Err(Error::BadModulus(format!(
                "{modulus_int} does not encode a monic polynomial of degree {degree} over F_{p}"
            )));
        }
        if !poly::is_irreducible(&coeffs, p) {
            return Err(Error::BadModulus(format!(
                "{modulus_int} encodes a reducible polynomial over F_{p}"
            )));
        }
        Ok(Self::build(p, degree, order, coeffs))
    }

    fn build(p: u64, degree: u32, order: u64, modulus: Vec<u64>) -> Field {
        let pow_p: Vec<u64> = (0..=degree)
            .map(|i| (0..i).fold(1u64, |acc, _| acc.saturating_mul(p)))
            .collect();
        let modulus_int = modulus
            .iter()
            .zip(&pow_p)
            .fold(0u64, |acc, (c, pw)| acc + c * pw);
        let mut field = Field(Arc::new(Inner {
            p,
            degree,
            order,
            modulus,
            modulus_int,
            pow_p,
            tables: None,
        }));
        if order <= TABLE_LIMIT {
            let tables = field.log_tables();
            Arc::get_mut(&mut field.0).expect("fresh Arc").tables = Some(tables);
        }
        field
    }

    fn log_tables(&self) -> LogTables {
        let g = self.primitive_element();
        let n = (self.order() - 1) as usize;
        let mut exp = vec![0u32; 2 * n.max(1)];
        let mut log = vec![0u32; self.order() as usize];
        let mut cur: Elem = 1;
        for i in 0..n {
            exp[i] = cur as u32;
            exp[i + n] = cur as u32;
            log[cur as usize] = i as u32;
            cur = self.mul_generic(cur, g);
        }
        LogTables { log, exp }
    }

    pub fn characteristic(&self) -> u64 {
        self.0.p
    }

    pub fn degree(&self) -> u32 {
        self.0.degree
    }

    pub fn order(&self) -> u64 {
        self.0.order
    }

    pub fn modulus(&self) -> &[u64] {
        &self.0.modulus
    }

    pub fn modulus_int(&self) -> u64 {
        self.0.modulus_int
    }

    pub fn is_prime_field(&self) -> bool {
        self.0.degree == 1
    }

    pub fn zero(&self) -> Elem {
        0
    }

    pub fn one(&self) -> Elem {
        1
    }

    /// The class of `x`.
    pub fn generator(&self) -> Elem {
        if self.0.degree > 1 {
            self.0.p
        } else {
            (self.0.p - self.0.modulus[0]) % self.0.p
        }
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.0.order
    }

    pub fn contains(&self, a: Elem) -> bool {
        a < self.0.order
    }

    pub fn element(&self, value: Elem) -> Result<FieldElement> {
        FieldElement::new(self, value)
    }

    /// Base-`p` digits of `a`, `degree` entries, low degree first.
    pub fn digits(&self, a: Elem) -> Vec<u64> {
        digits_of(a, self.0.p, self.0.degree as usize)
    }

    pub fn from_digits(&self, digits: &[u64]) -> Elem {
        debug_assert!(digits.len() <= self.0.degree as usize);
        digits
            .iter()
            .zip(&self.0.pow_p)
            .fold(0, |acc, (d, pw)| acc + (d % self.0.p) * pw)
    }

    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        let p = self.0.p;
        if p == 2 {
            return a ^ b;
        }
        if self.0.degree == 1 {
            return (a + b) % p;
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        for pw in &self.0.pow_p[..self.0.degree as usize] {
            out += ((a % p + b % p) % p) * pw;
            a /= p;
            b /= p;
        }
        out
    }

    pub fn neg(&self, a: Elem) -> Elem {
        let p = self.0.p;
        if p == 2 {
            return a;
        }
        if self.0.degree == 1 {
            return (p - a % p) % p;
        }
        let mut a = a;
        let mut out = 0;
        for pw in &self.0.pow_p[..self.0.degree as usize] {
            out += ((p - a % p) % p) * pw;
            a /= p;
        }
        out
    }

    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    /// Multiplies by an element of the prime field.
    pub fn scale(&self, c: u64, a: Elem) -> Elem {
        let p = self.0.p;
        let c = c % p;
        match c {
            0 => 0,
            1 => a,
            _ => {
                let mut a = a;
                let mut out = 0;
                for pw in &self.0.pow_p[..self.0.degree as usize] {
                    out += (a % p * c % p) * pw;
                    a /= p;
                }
                out
            }
        }
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a == 0 || b == 0 {
            return 0;
        }
        match &self.0.tables {
            Some(t) => t.exp[(t.log[a as usize] + t.log[b as usize]) as usize] as Elem,
            None => self.mul_generic(a, b),
        }
    }

    /// Multiplication by polynomial product and reduction; independent of
    /// the log tables.
    pub fn mul_generic(&self, a: Elem, b: Elem) -> Elem {
        let inner = &*self.0;
        if inner.p == 2 {
            let d = inner.degree;
            let (mut a, mut b, mut r) = (a, b, 0u64);
            while b != 0 {
                if b & 1 == 1 {
                    r ^= a;
                }
                b >>= 1;
                a <<= 1;
                if (a >> d) & 1 == 1 {
                    a ^= inner.modulus_int;
                }
            }
            return r;
        }
        let da = self.digits(a);
        let db = self.digits(b);
        let prod = poly::mulmod(&da, &db, &inner.modulus, inner.p);
        self.from_digits(&prod)
    }

    pub fn pow(&self, a: Elem, e: u128) -> Elem {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let group = (self.0.order - 1) as u128;
        let mut e = e % group;
        if let Some(t) = &self.0.tables {
            let l = (t.log[a as usize] as u128 * e) % group;
            return t.exp[l as usize] as Elem;
        }
        let mut base = a;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a == 0 {
            return Err(Error::ZeroInverse);
        }
        Ok(match &self.0.tables {
            Some(t) => {
                let n = self.0.order as u32 - 1;
                t.exp[((n - t.log[a as usize]) % n.max(1)) as usize] as Elem
            }
            None => self.pow(a, self.0.order as u128 - 2),
        })
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^q` for `q` a positive power of the characteristic.
    pub fn frobenius(&self, a: Elem, q: u64) -> Result<Elem> {
        match prime_power(q) {
            Some((p, _)) if p == self.0.p => Ok(self.pow(a, q as u128)),
            _ => Err(Error::NotCharacteristicPower(q)),
        }
    }

    /// Smallest element generating the multiplicative group.
    pub fn primitive_element(&self) -> Elem {
        let n = self.0.order - 1;
        if n == 1 {
            return 1;
        }
        let factors = prime_factors(n);
        (2..self.0.order)
            .find(|&g| {
                factors
                    .iter()
                    .all(|&r| self.pow_generic(g, n / r) != 1)
            })
            .expect("multiplicative group of a finite field is cyclic")
    }

    fn pow_generic(&self, a: Elem, mut e: u64) -> Elem {
        let mut base = a;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_generic(acc, base);
            }
            base = self.mul_generic(base, base);
            e >>= 1;
        }
        acc
    }

    /// Evaluates a polynomial with `F_p` coefficients (low degree first) at `z`.
    pub fn eval_prime_poly(&self, coeffs: &[u64], z: Elem) -> Elem {
        coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| self.add(self.mul(acc, z), c % self.0.p))
    }

    /// Text form `p^D:modulus`.
    pub fn spec(&self) -> String {
        format!("{}^{}:{}", self.0.p, self.0.degree, self.0.modulus_int)
    }
}

fn digits_of(mut a: u64, p: u64, len: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push(a % p);
        a /= p;
    }
    out
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.modulus == other.0.modulus)
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.spec())
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.spec())
    }
}

/// Parses `p^D:modulus` or `p^D` (canonical modulus).
impl FromStr for Field {
    type Err = Error;

    fn from_str(s: &str) -> Result<Field> {
        let bad = || Error::Parse(format!("bad field spec {s:?}, expected p^D or p^D:modulus"));
        let (head, modulus) = match s.trim().split_once(':') {
            Some((h, m)) => (h, Some(m.parse::<u64>().map_err(|_| bad())?)),
            None => (s.trim(), None),
        };
        let (p, d) = head.split_once('^').ok_or_else(bad)?;
        let p: u64 = p.parse().map_err(|_| bad())?;
        let d: u32 = d.parse().map_err(|_| bad())?;
        match modulus {
            Some(m) => Field::with_modulus(p, d, m),
            None => Field::canonical(p, d),
        }
    }
}

/// A value together with its owning field; operations check ownership.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElement {
    field: Field,
    value: Elem,
}

impl FieldElement {
    pub fn new(field: &Field, value: Elem) -> Result<Self> {
        if !field.contains(value) {
            return Err(Error::InvalidParameters(format!(
                "{value} is not an element of {field}"
            )));
        }
        Ok(FieldElement { field: field.clone(), value })
    }

    pub fn value(&self) -> Elem {
        self.value
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    fn same_owner(&self, other: &Self) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    fn with(&self, value: Elem) -> Self {
        FieldElement { field: self.field.clone(), value }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_owner(other)?;
        Ok(self.with(self.field.add(self.value, other.value)))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_owner(other)?;
        Ok(self.with(self.field.sub(self.value, other.value)))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_owner(other)?;
        Ok(self.with(self.field.mul(self.value, other.value)))
    }

    pub fn neg(&self) -> Self {
        self.with(self.field.neg(self.value))
    }

    pub fn inv(&self) -> Result<Self> {
        Ok(self.with(self.field.inv(self.value)?))
    }

    pub fn pow(&self, e: u128) -> Self {
        self.with(self.field.pow(self.value, e))
    }

    pub fn frobenius(&self, q: u64) -> Result<Self> {
        Ok(self.with(self.field.frobenius(self.value, q)?))
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.value, self.field.spec())
    }
}

/// Field homomorphism `sub -> sup` sending `x` to a root of `sub`'s modulus.
#[derive(Clone, Debug)]
pub struct Embedding {
    sub: Field,
    sup: Field,
    image_of_generator: Elem,
    /// `image_of_generator^i` for `i < deg(sub)`.
    powers: Vec<Elem>,
    table: Option<Vec<Elem>>,
}

impl Embedding {
    /// Picks the root of `sub`'s modulus in `sup` with the smallest integer
    /// encoding. The root search is a linear scan of `sup`.
    pub fn new(sub: &Field, sup: &Field) -> Result<Embedding> {
        if sub.characteristic() != sup.characteristic() {
            return Err(Error::FieldMismatch);
        }
        if sup.degree() % sub.degree() != 0 {
            return Err(Error::DegreeNotDividing { sub: sub.degree(), sup: sup.degree() });
        }
        let root = if sub == sup {
            sup.generator()
        } else {
            sup.elements()
                .find(|&z| sup.eval_prime_poly(sub.modulus(), z) == 0)
                .ok_or_else(|| {
                    Error::Inconsistency(format!("no root of {sub}'s modulus in {sup}"))
                })?
        };
        let mut powers = Vec::with_capacity(sub.degree() as usize);
        let mut cur = 1;
        for _ in 0..sub.degree() {
            powers.push(cur);
            cur = sup.mul(cur, root);
        }
        let mut emb = Embedding {
            sub: sub.clone(),
            sup: sup.clone(),
            image_of_generator: root,
            powers,
            table: None,
        };
        if sub.order() <= TABLE_LIMIT {
            emb.table = Some(sub.elements().map(|a| emb.apply_direct(a)).collect());
        }
        Ok(emb)
    }

    pub fn sub(&self) -> &Field {
        &self.sub
    }

    pub fn sup(&self) -> &Field {
        &self.sup
    }

    pub fn image_of_generator(&self) -> Elem {
        self.image_of_generator
    }

    fn apply_direct(&self, a: Elem) -> Elem {
        self.sub
            .digits(a)
            .iter()
            .zip(&self.powers)
            .fold(0, |acc, (&c, &z)| self.sup.add(acc, self.sup.scale(c, z)))
    }

    pub fn apply(&self, a: Elem) -> Elem {
        match &self.table {
            Some(t) => t[a as usize],
            None => self.apply_direct(a),
        }
    }
}

/// A relative extension `sup / base` with the monomial basis
/// `1, x, ..., x^{m-1}` of `sup` over the embedded `base`.
#[derive(Clone, Debug)]
pub struct Extension {
    embedding: Embedding,
    degree: usize,
    basis: Vec<Elem>,
    /// Images of `y^j` (`y` the generator of `base`), `j < deg(base)`.
    base_powers: Vec<Elem>,
    /// Row `i*s + j` expresses the `F_p` digits of `sup` elements in the
    /// `F_p`-basis `{ y^j x^i }`; `None` when `base` is the prime field.
    solver: Option<Vec<Vec<u64>>>,
    coord_table: Option<Vec<Elem>>,
}

impl Extension {
    pub fn new(sup: &Field, base: &Field) -> Result<Extension> {
        let embedding = Embedding::new(base, sup)?;
        let s = base.degree() as usize;
        let degree = (sup.degree() / base.degree()) as usize;
        let x = sup.generator();
        let mut basis = Vec::with_capacity(degree);
        let mut cur = 1;
        for _ in 0..degree {
            basis.push(cur);
            cur = sup.mul(cur, x);
        }
        let base_powers: Vec<Elem> = (0..s)
            .map(|j| embedding.apply(base.pow(base.generator(), j as u128)))
            .collect();
        let solver = if s == 1 {
            None
        } else {
            Some(Self::build_solver(sup, &basis, &base_powers)?)
        };
        let mut ext = Extension {
            embedding,
            degree,
            basis,
            base_powers,
            solver,
            coord_table: None,
        };
        if ext.solver.is_some() && sup.order() <= TABLE_LIMIT {
            let mut table = Vec::with_capacity(sup.order() as usize * degree);
            for a in sup.elements() {
                table.extend(ext.coords_direct(a));
            }
            ext.coord_table = Some(table);
        }
        Ok(ext)
    }

    /// Canonical `F_{q^m} / F_q` for `q = p^s`.
    pub fn canonical(p: u64, s: u32, m: u32) -> Result<Extension> {
        let d = s.checked_mul(m).ok_or(Error::FieldTooLarge { p, degree: u32::MAX })?;
        Extension::new(&Field::canonical(p, d)?, &Field::canonical(p, s)?)
    }

    /// Inverse over `F_p` of the matrix whose columns are the digit vectors
    /// of `y^j x^i`.
    fn build_solver(sup: &Field, basis: &[Elem], base_powers: &[Elem]) -> Result<Vec<Vec<u64>>> {
        let p = sup.characteristic();
        let dim = sup.degree() as usize;
        let mut cols = Vec::with_capacity(dim);
        for &b in basis {
            for &w in base_powers {
                cols.push(sup.digits(sup.mul(w, b)));
            }
        }
        // augmented [A | I] with A[r][c] = cols[c][r]
        let mut aug: Vec<Vec<u64>> = (0..dim)
            .map(|r| {
                let mut row: Vec<u64> = cols.iter().map(|c| c[r]).collect();
                row.extend((0..dim).map(|c| u64::from(c == r)));
                row
            })
            .collect();
        for col in 0..dim {
            let piv = (col..dim).find(|&r| aug[r][col] != 0).ok_or(Error::LinearlyDependent)?;
            aug.swap(col, piv);
            let inv = mod_inv(aug[col][col], p);
            for v in aug[col].iter_mut() {
                *v = *v * inv % p;
            }
            for r in 0..dim {
                if r != col && aug[r][col] != 0 {
                    let f = aug[r][col];
                    for c in 0..2 * dim {
                        let sub = f * aug[col][c] % p;
                        aug[r][c] = (aug[r][c] + p - sub) % p;
                    }
                }
            }
        }
        Ok(aug.into_iter().map(|row| row[dim..].to_vec()).collect())
    }

    pub fn sup(&self) -> &Field {
        &self.embedding.sup
    }

    pub fn base(&self) -> &Field {
        &self.embedding.sub
    }

    pub fn embedding(&self) -> &Embedding {
        &self.embedding
    }

    /// `[sup : base]`.
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// `|base|`.
    pub fn q(&self) -> u64 {
        self.base().order()
    }

    pub fn basis(&self) -> &[Elem] {
        &self.basis
    }

    pub fn embed(&self, b: Elem) -> Elem {
        self.embedding.apply(b)
    }

    fn coords_direct(&self, a: Elem) -> Vec<Elem> {
        let sup = self.sup();
        let Some(solver) = &self.solver else {
            return sup.digits(a);
        };
        let p = sup.characteristic();
        let s = self.base_powers.len();
        let digits = sup.digits(a);
        let flat: Vec<u64> = solver
            .iter()
            .map(|row| row.iter().zip(&digits).fold(0, |acc, (r, d)| (acc + r * d) % p))
            .collect();
        let base = self.base();
        flat.chunks(s).map(|c| base.from_digits(c)).collect()
    }

    /// Coordinates of `a` over `base` in the monomial basis.
    pub fn coords(&self, a: Elem) -> Vec<Elem> {
        match &self.coord_table {
            Some(t) => t[a as usize * self.degree..(a as usize + 1) * self.degree].to_vec(),
            None => self.coords_direct(a),
        }
    }

    /// Appends the coordinates of `a` to `out`.
    pub fn push_coords(&self, a: Elem, out: &mut Vec<Elem>) {
        match &self.coord_table {
            Some(t) => out.extend_from_slice(
                &t[a as usize * self.degree..(a as usize + 1) * self.degree],
            ),
            None if self.solver.is_none() => {
                let p = self.sup().characteristic();
                let mut a = a;
                for _ in 0..self.degree {
                    out.push(a % p);
                    a /= p;
                }
            }
            None => out.extend(self.coords_direct(a)),
        }
    }

    pub fn from_coords(&self, coords: &[Elem]) -> Elem {
        let sup = self.sup();
        coords
            .iter()
            .zip(&self.basis)
            .fold(0, |acc, (&c, &b)| sup.add(acc, sup.mul(self.embed(c), b)))
    }

    /// Whether `a` lies in the embedded base field.
    pub fn in_base(&self, a: Elem) -> bool {
        self.coords(a).iter().skip(1).all(|&c| c == 0)
    }

    /// Rank over `base` of the span of `values`.
    pub fn rank(&self, values: &[Elem]) -> usize {
        let sup = self.sup();
        if self.solver.is_none() && sup.characteristic() == 2 {
            return xor_rank(values);
        }
        let mut rows: Vec<Vec<Elem>> = values
            .iter()
            .filter(|&&v| v != 0)
            .map(|&v| self.coords(v))
            .collect();
        crate::linalg::rank_in_place(self.base(), &mut rows)
    }
}

fn mod_inv(a: u64, p: u64) -> u64 {
    let mut r = 1u64;
    let mut b = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// Rank over `F_2` of bit vectors.
pub fn xor_rank(values: &[u64]) -> usize {
    let mut basis = [0u64; 64];
    let mut rank = 0;
    for &v in values {
        let mut v = v;
        while v != 0 {
            let top = 63 - v.leading_zeros() as usize;
            if basis[top] == 0 {
                basis[top] = v;
                rank += 1;
                break;
            }
            v ^= basis[top];
        }
    }
    rank
}
