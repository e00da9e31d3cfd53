//! `SL2` over the residue field and over `GF(q)((t))`.
//!
//! [`Sl2`] carries the field and the working precision and builds the
//! standard elements `u(x)`, `ū(x)`, `t(d)`, `α₀ = diag(t⁻¹, t)`,
//! `w₀ = (0 −1; 1 0)` and `β₀ = α₀w₀`.

use rand::Rng;

use crate::error::{Error, Result};
use crate::fields::{lift_a, GfElem, GfField, LSeries};
use crate::linalg::Field;

/// 2×2 matrix over the residue field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mat2k {
    pub a: GfElem,
    pub b: GfElem,
    pub c: GfElem,
    pub d: GfElem,
}

impl Mat2k {
    pub fn new(a: GfElem, b: GfElem, c: GfElem, d: GfElem) -> Self {
        Mat2k { a, b, c, d }
    }

    pub fn identity() -> Self {
        Mat2k::new(GfElem::ONE, GfElem::ZERO, GfElem::ZERO, GfElem::ONE)
    }

    pub fn u(x: GfElem) -> Self {
        Mat2k::new(GfElem::ONE, x, GfElem::ZERO, GfElem::ONE)
    }

    pub fn ubar(x: GfElem) -> Self {
        Mat2k::new(GfElem::ONE, GfElem::ZERO, x, GfElem::ONE)
    }

    /// `diag(s, s⁻¹)`.
    pub fn torus(s: GfElem, k: &GfField) -> Self {
        Mat2k::new(s, GfElem::ZERO, GfElem::ZERO, k.inv(s).expect("torus entry must be a unit"))
    }

    pub fn w0(k: &GfField) -> Self {
        Mat2k::new(GfElem::ZERO, k.neg(GfElem::ONE), GfElem::ONE, GfElem::ZERO)
    }

    pub fn mul(&self, o: &Self, k: &GfField) -> Self {
        let dot = |x: GfElem, y: GfElem, z: GfElem, w: GfElem| k.add(k.mul(x, y), k.mul(z, w));
        Mat2k::new(
            dot(self.a, o.a, self.b, o.c),
            dot(self.a, o.b, self.b, o.d),
            dot(self.c, o.a, self.d, o.c),
            dot(self.c, o.b, self.d, o.d),
        )
    }

    /// Inverse of a determinant-one matrix.
    pub fn inv(&self, k: &GfField) -> Self {
        Mat2k::new(self.d, k.neg(self.b), k.neg(self.c), self.a)
    }

    pub fn det(&self, k: &GfField) -> GfElem {
        k.sub(k.mul(self.a, self.d), k.mul(self.b, self.c))
    }

    /// All `q(q²−1)` elements of `SL2(GF(q))` in a fixed order.
    pub fn all(k: &GfField) -> Vec<Mat2k> {
        let mut out = Vec::new();
        for a in k.elements() {
            for b in k.elements() {
                for c in k.elements() {
                    for d in k.elements() {
                        let m = Mat2k::new(a, b, c, d);
                        if m.det(k) == GfElem::ONE {
                            out.push(m);
                        }
                    }
                }
            }
        }
        out
    }
}

/// 2×2 matrix over the local field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mat2 {
    pub a: LSeries,
    pub b: LSeries,
    pub c: LSeries,
    pub d: LSeries,
}

impl Mat2 {
    pub fn new(a: LSeries, b: LSeries, c: LSeries, d: LSeries) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn entries(&self) -> [&LSeries; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn mul(&self, o: &Mat2, k: &GfField) -> Mat2 {
        let dot = |x: &LSeries, y: &LSeries, z: &LSeries, w: &LSeries| {
            x.mul(y, k).add(&z.mul(w, k), k)
        };
        Mat2::new(
            dot(&self.a, &o.a, &self.b, &o.c),
            dot(&self.a, &o.b, &self.b, &o.d),
            dot(&self.c, &o.a, &self.d, &o.c),
            dot(&self.c, &o.b, &self.d, &o.d),
        )
    }

    /// Adjugate, which is the inverse for determinant one.
    pub fn inv(&self, k: &GfField) -> Mat2 {
        Mat2::new(self.d.clone(), self.b.neg(k), self.c.neg(k), self.a.clone())
    }

    pub fn det(&self, k: &GfField) -> LSeries {
        self.a.mul(&self.d, k).sub(&self.b.mul(&self.c, k), k)
    }

    /// Least valuation among the entries.
    pub fn min_val(&self) -> i64 {
        self.entries().iter().map(|e| e.val_bound()).min().unwrap()
    }

    /// `|n|` of the Cartan decomposition `K₀ α₀^{−n} K₀`.
    pub fn cartan(&self) -> i64 {
        (-self.min_val()).max(0)
    }

    pub fn precision(&self) -> i64 {
        self.entries().iter().map(|e| e.precision()).min().unwrap()
    }

    pub fn truncate(&self, prec: i64) -> Mat2 {
        Mat2::new(self.a.truncate(prec), self.b.truncate(prec), self.c.truncate(prec), self.d.truncate(prec))
    }

    pub fn approx_eq(&self, o: &Mat2, k: &GfField) -> bool {
        self.entries().iter().zip(o.entries()).all(|(x, y)| x.approx_eq(y, k))
    }

    /// Reduction modulo `t` of an element of `K₀`.
    pub fn reduce(&self) -> Result<Mat2k> {
        if self.min_val() < 0 {
            return Err(Error::NotInSubgroup("K0"));
        }
        Ok(Mat2k::new(self.a.coeff(0), self.b.coeff(0), self.c.coeff(0), self.d.coeff(0)))
    }

    pub fn format(&self, k: &GfField) -> String {
        format!(
            "[[{}, {}], [{}, {}]]",
            self.a.format(k),
            self.b.format(k),
            self.c.format(k),
            self.d.format(k)
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SubgroupId {
    K0,
    K1,
    IS,
    IS1,
    BS,
    TSUnits,
    TS1p,
    /// `U_S(p^n)`.
    US(i64),
    /// `Ū_S(p^n)`.
    UbarS(i64),
    /// Principal congruence subgroup `K₀(m)`.
    K0m(i64),
}

/// `g = k·α₀^{−n}·i` with `k ∈ K₀`, `i ∈ I_S(1)`.
#[derive(Clone, Debug)]
pub struct CosetClass {
    pub n: i64,
    pub k: Mat2,
    pub i: Mat2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BorelSide {
    Plain,
    Beta0,
}

/// `g = b·j` or `g = b·β₀·j` with `b ∈ B_S`, `j ∈ I_S(1)`.
#[derive(Clone, Debug)]
pub struct BorelClass {
    pub side: BorelSide,
    pub b: Mat2,
    pub j: Mat2,
}

/// `g = u(x)·t(delta)·ū(z)`.
#[derive(Clone, Debug)]
pub struct IwahoriFactor {
    pub x: LSeries,
    pub delta: LSeries,
    pub z: LSeries,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum HeckeOp {
    W0,
    W0InvAlpha0Inv,
    Alpha0,
    Alpha0Inv,
}

impl HeckeOp {
    pub const ALL: [HeckeOp; 4] =
        [HeckeOp::W0, HeckeOp::W0InvAlpha0Inv, HeckeOp::Alpha0, HeckeOp::Alpha0Inv];

    pub fn name(self) -> &'static str {
        match self {
            HeckeOp::W0 => "T_w0",
            HeckeOp::W0InvAlpha0Inv => "T_w0^-1alpha0^-1",
            HeckeOp::Alpha0 => "T_alpha0",
            HeckeOp::Alpha0Inv => "T_alpha0^-1",
        }
    }
}

fn val_at_least(x: &LSeries, n: i64) -> Result<bool> {
    match x.valuation() {
        Some(v) => Ok(v >= n),
        None if x.precision() >= n => Ok(true),
        None => Err(Error::PrecisionExhausted("membership test")),
    }
}

/// Working context: the residue field and the absolute precision.
#[derive(Clone, Debug)]
pub struct Sl2 {
    pub k: GfField,
    pub prec: i64,
}

impl Sl2 {
    pub fn new(k: GfField, prec: i64) -> Self {
        Sl2 { k, prec }
    }

    pub fn field(&self) -> &GfField {
        &self.k
    }

    pub fn q(&self) -> u32 {
        self.k.q()
    }

    pub fn cst(&self, c: GfElem) -> LSeries {
        LSeries::constant(c, self.prec)
    }

    /// `c·t^v`.
    pub fn mono(&self, c: GfElem, v: i64) -> LSeries {
        LSeries::monomial(c, v, self.prec)
    }

    pub fn zero(&self) -> LSeries {
        LSeries::zero(self.prec)
    }

    pub fn one(&self) -> LSeries {
        LSeries::one(self.prec)
    }

    pub fn identity(&self) -> Mat2 {
        Mat2::new(self.one(), self.zero(), self.zero(), self.one())
    }

    pub fn u(&self, x: &LSeries) -> Mat2 {
        Mat2::new(self.one(), x.clone(), self.zero(), self.one())
    }

    pub fn ubar(&self, x: &LSeries) -> Mat2 {
        Mat2::new(self.one(), self.zero(), x.clone(), self.one())
    }

    /// `diag(d, d⁻¹)`.
    pub fn torus(&self, d: &LSeries) -> Result<Mat2> {
        Ok(Mat2::new(d.clone(), self.zero(), self.zero(), d.inv(&self.k)?))
    }

    pub fn alpha0(&self) -> Mat2 {
        self.alpha0_pow(1)
    }

    /// `α₀^n = diag(t^{−n}, t^n)`.
    pub fn alpha0_pow(&self, n: i64) -> Mat2 {
        Mat2::new(self.mono(GfElem::ONE, -n), self.zero(), self.zero(), self.mono(GfElem::ONE, n))
    }

    pub fn w0(&self) -> Mat2 {
        Mat2::new(self.zero(), self.cst(self.k.neg(GfElem::ONE)), self.one(), self.zero())
    }

    pub fn w0_inv(&self) -> Mat2 {
        self.w0().inv(&self.k)
    }

    pub fn beta0(&self) -> Mat2 {
        self.alpha0().mul(&self.w0(), &self.k)
    }

    pub fn lift(&self, g: &Mat2k) -> Mat2 {
        Mat2::new(self.cst(g.a), self.cst(g.b), self.cst(g.c), self.cst(g.d))
    }

    pub fn mul(&self, g: &Mat2, h: &Mat2) -> Mat2 {
        g.mul(h, &self.k)
    }

    /// Left-to-right product.
    pub fn prod(&self, gs: &[&Mat2]) -> Mat2 {
        gs.iter().fold(self.identity(), |acc, g| acc.mul(g, &self.k))
    }

    pub fn inv(&self, g: &Mat2) -> Mat2 {
        g.inv(&self.k)
    }

    pub fn member(&self, g: &Mat2, h: SubgroupId) -> Result<bool> {
        let k = &self.k;
        let one = self.one();
        let in_o = |x: &LSeries| val_at_least(x, 0);
        let in_p = |x: &LSeries, n: i64| val_at_least(x, n);
        let near_one = |x: &LSeries, n: i64| val_at_least(&x.sub(&one, k), n);
        let is_one = |x: &LSeries| x.sub(&one, k).is_zero();
        let k0 = || -> Result<bool> {
            Ok(in_o(&g.a)? && in_o(&g.b)? && in_o(&g.c)? && in_o(&g.d)?)
        };
        Ok(match h {
            SubgroupId::K0 => k0()?,
            SubgroupId::K1 => in_o(&g.a)? && in_p(&g.b, -1)? && in_p(&g.c, 1)? && in_o(&g.d)?,
            SubgroupId::IS => k0()? && in_p(&g.c, 1)?,
            SubgroupId::IS1 => {
                k0()? && in_p(&g.c, 1)? && near_one(&g.a, 1)? && near_one(&g.d, 1)?
            }
            SubgroupId::BS => g.c.is_zero(),
            SubgroupId::TSUnits => {
                g.b.is_zero() && g.c.is_zero() && g.a.valuation() == Some(0)
            }
            SubgroupId::TS1p => {
                g.b.is_zero() && g.c.is_zero() && g.a.valuation() == Some(0) && near_one(&g.a, 1)?
            }
            SubgroupId::US(n) => {
                g.c.is_zero() && is_one(&g.a) && is_one(&g.d) && in_p(&g.b, n)?
            }
            SubgroupId::UbarS(n) => {
                g.b.is_zero() && is_one(&g.a) && is_one(&g.d) && in_p(&g.c, n)?
            }
            SubgroupId::K0m(m) => {
                k0()? && in_p(&g.b, m)? && in_p(&g.c, m)? && near_one(&g.a, m)? && near_one(&g.d, m)?
            }
        })
    }

    pub fn iwahori_factor(&self, g: &Mat2) -> Result<IwahoriFactor> {
        if !self.member(g, SubgroupId::IS1)? {
            return Err(Error::NotInSubgroup("I_S(1)"));
        }
        let k = &self.k;
        let dinv = g.d.inv(k)?;
        Ok(IwahoriFactor { x: g.b.mul(&dinv, k), delta: dinv.clone(), z: g.c.mul(&dinv, k) })
    }

    pub fn iwahori_product(&self, f: &IwahoriFactor) -> Result<Mat2> {
        Ok(self.prod(&[&self.u(&f.x), &self.torus(&f.delta)?, &self.ubar(&f.z)]))
    }

    /// The class `n` with `g ∈ K₀α₀^{−n}I_S(1)` and a verified witness.
    pub fn kgi_class(&self, g: &Mat2) -> Result<CosetClass> {
        let k = &self.k;
        // Left K₀ reduction of the first column.
        let l = if g.c.is_zero() {
            self.identity()
        } else if !g.a.is_zero() && g.a.val_bound() <= g.c.val_bound() {
            self.ubar(&g.c.div(&g.a, k)?.neg(k))
        } else {
            self.ubar(&g.a.div(&g.c, k)?).mul(&self.w0(), k)
        };
        let h = l.mul(g, k);
        let s = &h.a;
        let u = s.valuation().ok_or(Error::PrecisionExhausted("kgi_class pivot"))?;
        let eps = s.shift(-u);
        let eps_inv = eps.inv(k)?;
        let diag = Mat2::new(eps_inv.clone(), self.zero(), self.zero(), eps.clone());
        let l = diag.mul(&l, k);
        let l_inv = l.inv(k);
        let x = eps_inv.mul(&h.b, k);

        let (n, kk, i) = match x.valuation() {
            Some(v) if v < -u.abs() => {
                let eps2 = x.shift(-v);
                let eps2_inv = eps2.inv(k)?;
                let s2 = self.mono(k.neg(GfElem::ONE), -u).div(&x, k)?;
                let d2 = Mat2::new(eps2_inv.neg(k), self.zero(), self.zero(), eps2.neg(k));
                let kk = self.prod(&[&l_inv, &self.ubar(&s2.neg(k)), &self.w0(), &d2]);
                (-v, kk, self.ubar(&eps2_inv.shift(u - v)))
            }
            _ if u >= 0 => (u, l_inv.mul(&self.u(&x.shift(u)), k), self.identity()),
            _ => (u, l_inv, self.u(&x.shift(-u))),
        };
        let back = self.prod(&[&kk, &self.alpha0_pow(-n), &i]);
        if !back.approx_eq(g, k)
            || !self.member(&kk, SubgroupId::K0)?
            || !self.member(&i, SubgroupId::IS1)?
        {
            return Err(Error::PrecisionExhausted("kgi_class witness"));
        }
        Ok(CosetClass { n, k: kk, i })
    }

    pub fn borel_class(&self, g: &Mat2) -> Result<BorelClass> {
        let k = &self.k;
        let plain = match (g.c.valuation(), g.d.valuation()) {
            (None, _) => true,
            (Some(_), None) => false,
            (Some(vc), Some(vd)) => vc > vd,
        };
        let out = if plain {
            let z = g.c.div(&g.d, k)?;
            let b = g.mul(&self.ubar(&z.neg(k)), k);
            BorelClass { side: BorelSide::Plain, b, j: self.ubar(&z) }
        } else {
            let y = g.d.div(&g.c, k)?;
            let b = self.prod(&[g, &self.u(&y.neg(k)), &self.beta0().inv(k)]);
            BorelClass { side: BorelSide::Beta0, b, j: self.u(&y) }
        };
        let mut b = out.b.clone();
        b.c = self.zero();
        let back = match out.side {
            BorelSide::Plain => self.prod(&[&b, &out.j]),
            BorelSide::Beta0 => self.prod(&[&b, &self.beta0(), &out.j]),
        };
        if !back.approx_eq(g, k) || !self.member(&out.j, SubgroupId::IS1)? {
            return Err(Error::PrecisionExhausted("borel_class witness"));
        }
        Ok(BorelClass { b, ..out })
    }

    /// `A(λ)` for `λ ∈ k²` enumerated as `λ₀ + q·λ₁`.
    pub fn lifts2(&self) -> Vec<LSeries> {
        let mut out = Vec::new();
        for l1 in self.k.elements() {
            for l0 in self.k.elements() {
                out.push(lift_a(&[l0, l1], self.prec));
            }
        }
        out
    }

    /// `(g, reps)` with `reps` a set of representatives of
    /// `I_S(1)/(I_S(1) ∩ g⁻¹I_S(1)g)`.
    pub fn hecke_cosets(&self, op: HeckeOp) -> (Mat2, Vec<Mat2>) {
        let k = &self.k;
        match op {
            HeckeOp::W0 => (self.w0(), k.elements().map(|l| self.u(&self.cst(l))).collect()),
            HeckeOp::W0InvAlpha0Inv => (
                self.w0_inv().mul(&self.alpha0().inv(k), k),
                k.elements().map(|m| self.ubar(&self.mono(k.neg(m), 1))).collect(),
            ),
            HeckeOp::Alpha0 => (self.alpha0(), self.lifts2().iter().map(|a| self.u(a)).collect()),
            HeckeOp::Alpha0Inv => (
                self.alpha0().inv(k),
                self.lifts2().iter().map(|a| self.ubar(&a.shift(1))).collect(),
            ),
        }
    }

    /// The summands `i·g⁻¹` of the right Hecke action.
    pub fn hecke_summands(&self, op: HeckeOp) -> Vec<Mat2> {
        let k = &self.k;
        match op {
            HeckeOp::W0 => k.elements().map(|l| self.u(&self.cst(l)).mul(&self.w0_inv(), k)).collect(),
            HeckeOp::W0InvAlpha0Inv => {
                let a_inv = self.alpha0().inv(k);
                k.elements()
                    .map(|m| self.prod(&[&self.w0(), &self.u(&self.mono(m, 1)), &a_inv]))
                    .collect()
            }
            HeckeOp::Alpha0 => {
                let a_inv = self.alpha0().inv(k);
                self.lifts2().iter().map(|a| self.u(a).mul(&a_inv, k)).collect()
            }
            HeckeOp::Alpha0Inv => self
                .lifts2()
                .iter()
                .map(|a| self.ubar(&a.shift(1)).mul(&self.alpha0(), k))
                .collect(),
        }
    }

    /// `α g α⁻¹` for `α = diag(1, t)`.
    pub fn alpha_conjugate(&self, g: &Mat2) -> Mat2 {
        Mat2::new(g.a.clone(), g.b.shift(-1), g.c.shift(1), g.d.clone())
    }

    fn random_unit<R: Rng>(&self, rng: &mut R) -> GfElem {
        GfElem(rng.gen_range(1..self.q()))
    }

    fn random_elem<R: Rng>(&self, rng: &mut R) -> GfElem {
        GfElem(rng.gen_range(0..self.q()))
    }

    /// A word of length `1..=max_len` in `u(λt^j)`, `ū(λt^j)` (`−1 ≤ j ≤ 2`),
    /// `α₀^{±1}` and `w₀`.
    pub fn sample_word<R: Rng>(&self, rng: &mut R, max_len: usize) -> Mat2 {
        let len = rng.gen_range(1..=max_len);
        let mut g = self.identity();
        for _ in 0..len {
            let letter = match rng.gen_range(0..5) {
                0 => self.u(&self.mono(self.random_unit(rng), rng.gen_range(-1..=2))),
                1 => self.ubar(&self.mono(self.random_unit(rng), rng.gen_range(-1..=2))),
                2 => self.alpha0(),
                3 => self.alpha0().inv(&self.k),
                _ => self.w0(),
            };
            g = g.mul(&letter, &self.k);
        }
        g
    }

    fn small_poly<R: Rng>(&self, rng: &mut R, lo: i64, terms: i64) -> LSeries {
        let c: Vec<GfElem> = (0..terms).map(|_| self.random_elem(rng)).collect();
        LSeries::from_coeffs(lo, &c, self.prec)
    }

    /// A random element of `I_S(1)` built from its Iwahori factors.
    pub fn sample_i1<R: Rng>(&self, rng: &mut R) -> Mat2 {
        let x = self.small_poly(rng, 0, 3);
        let delta = self.one().add(&self.small_poly(rng, 1, 2), &self.k);
        let z = self.small_poly(rng, 1, 3);
        let f = IwahoriFactor { x, delta, z };
        self.iwahori_product(&f).expect("1 + p is a unit")
    }

    /// A random element of `I_S`.
    pub fn sample_is<R: Rng>(&self, rng: &mut R) -> Mat2 {
        let s = self.torus(&self.cst(self.random_unit(rng))).expect("unit");
        s.mul(&self.sample_i1(rng), &self.k)
    }

    /// A random element of `K₀`.
    pub fn sample_k0<R: Rng>(&self, rng: &mut R) -> Mat2 {
        let mut g = self.sample_is(rng);
        for _ in 0..rng.gen_range(1..=3) {
            let letter = match rng.gen_range(0..3) {
                0 => self.w0(),
                1 => self.u(&self.small_poly(rng, 0, 2)),
                _ => self.ubar(&self.small_poly(rng, 0, 2)),
            };
            g = g.mul(&letter, &self.k);
        }
        g
    }

    /// A random upper-triangular element of `B_S`.
    pub fn sample_borel<R: Rng>(&self, rng: &mut R) -> Mat2 {
        let v = rng.gen_range(-2..=2);
        let s = self.mono(self.random_unit(rng), v).add(&self.small_poly(rng, v + 1, 2), &self.k);
        let d = self.torus(&s).expect("nonzero");
        d.mul(&self.u(&self.small_poly(rng, -2, 4)), &self.k)
    }
}
