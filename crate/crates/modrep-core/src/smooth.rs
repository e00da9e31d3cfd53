//! Smooth representations through finite truncations: the principal series
//! `Ind_B^G(η)` at finite level, its Steinberg quotient, and the operators
//! `𝒮`, `𝒮₁`, `𝒮₂` over any model implementing [`SmoothRep`].

use std::collections::BTreeSet;

use crate::cind::{CIndVec, Ind, Vertex, Weight};
use crate::error::{Error, Result};
use crate::fields::{GfElem, GfField, LSeries};
use crate::finrep::{find_iso, serre_weights, FinRep, WeightLabel};
use crate::linalg::{kernel, rank, solve, vec_add, Echelon, Field, Matrix};
use crate::sl2::{HeckeOp, Mat2, Mat2k, Sl2};

/// A model of a smooth representation with computable vectors.
pub trait SmoothRep {
    type Vector: Clone + PartialEq + std::fmt::Debug;

    fn sl2(&self) -> &Sl2;
    fn act(&self, g: &Mat2, v: &Self::Vector) -> Result<Self::Vector>;
    fn add(&self, a: &Self::Vector, b: &Self::Vector) -> Self::Vector;
    fn scale(&self, c: GfElem, a: &Self::Vector) -> Self::Vector;
    fn zero(&self) -> Self::Vector;
    fn is_zero(&self, v: &Self::Vector) -> bool;
    /// `d` such that `u(x)`, `ū(x)`, `t(1+x)` with `val x > d` fix `v`.
    fn depth(&self, v: &Self::Vector) -> i64;
    /// Coordinates of the vectors in one common frame.
    fn flatten(&self, vs: &[Self::Vector]) -> Vec<Vec<GfElem>>;

    fn field(&self) -> &GfField {
        &self.sl2().k
    }

    fn same(&self, a: &Self::Vector, b: &Self::Vector) -> bool {
        let f = self.flatten(&[a.clone(), b.clone()]);
        f[0] == f[1]
    }
}

/// The three averaging operators.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SOp {
    S,
    S1,
    S2,
}

impl SOp {
    pub fn summands(self, s: &Sl2) -> Vec<Mat2> {
        s.hecke_summands(match self {
            SOp::S => HeckeOp::Alpha0,
            SOp::S1 => HeckeOp::W0,
            SOp::S2 => HeckeOp::W0InvAlpha0Inv,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            SOp::S => "S",
            SOp::S1 => "S1",
            SOp::S2 => "S2",
        }
    }
}

pub fn act_sum<R: SmoothRep>(rep: &R, gs: &[Mat2], v: &R::Vector) -> Result<R::Vector> {
    let mut acc = rep.zero();
    for g in gs {
        acc = rep.add(&acc, &rep.act(g, v)?);
    }
    Ok(acc)
}

pub fn s_operator<R: SmoothRep>(rep: &R, which: SOp, v: &R::Vector) -> Result<R::Vector> {
    act_sum(rep, &which.summands(rep.sl2()), v)
}

/// Generators of `I_S(1)` down to depth `d`.
pub fn i1_generators(s: &Sl2, d: i64) -> Vec<Mat2> {
    let k = &s.k;
    let mut out = Vec::new();
    for z in k.basis() {
        for j in 0..=d.max(0) {
            out.push(s.u(&s.mono(z, j)));
            out.push(s.ubar(&s.mono(z, j + 1)));
            out.push(s.torus(&s.one().add(&s.mono(z, j + 1), k)).expect("unit"));
        }
    }
    out
}

pub fn is_i1_fixed<R: SmoothRep>(rep: &R, v: &R::Vector) -> Result<bool> {
    for g in i1_generators(rep.sl2(), rep.depth(v)) {
        if !rep.same(&rep.act(&g, v)?, v) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Scalar `c` with `w = c·v`, if any.
pub fn proportion<R: SmoothRep>(rep: &R, w: &R::Vector, v: &R::Vector) -> Option<GfElem> {
    let k = rep.field();
    let f = rep.flatten(&[v.clone(), w.clone()]);
    let i = f[0].iter().position(|x| !x.is_zero())?;
    let c = k.mul(f[1][i], k.inv(f[0][i]).unwrap());
    f[0].iter().zip(&f[1]).all(|(&a, &b)| k.mul(c, a) == b).then_some(c)
}

/// The exponent `s` with `t(a)·v = a^s v` on `I_S`, when `v` is
/// `I_S(1)`-fixed and an eigenvector of the torus.
pub fn isotypic_check<R: SmoothRep>(rep: &R, v: &R::Vector) -> Result<Option<u32>> {
    if rep.is_zero(v) || !is_i1_fixed(rep, v)? {
        return Ok(None);
    }
    let s = rep.sl2();
    let t = s.torus(&s.cst(s.k.generator()))?;
    Ok(proportion(rep, &rep.act(&t, v)?, v).map(|c| s.k.log(c).expect("unit")))
}

/// What the `K₀`-span of a vector is.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WeightOf {
    Weight(WeightLabel),
    Reducible,
    Zero,
}

/// `K₀`-span of `v` as a representation of `SL2(GF(q))`, if `K₀(1)` acts
/// trivially on it, with the span basis.
pub fn k0_span<R: SmoothRep>(rep: &R, v: &R::Vector) -> Result<Option<(FinRep, Vec<R::Vector>)>> {
    let s = rep.sl2();
    let k = rep.field();
    let gamma: Vec<Mat2> = [
        k.basis().into_iter().map(Mat2k::u).collect::<Vec<_>>(),
        k.basis().into_iter().map(Mat2k::ubar).collect(),
        vec![Mat2k::torus(k.generator(), k), Mat2k::w0(k)],
    ]
    .concat()
    .iter()
    .map(|g| s.lift(g))
    .collect();
    let mut basis: Vec<R::Vector> = Vec::new();
    let mut queue = vec![v.clone()];
    while let Some(x) = queue.pop() {
        let mut cand = basis.clone();
        cand.push(x.clone());
        let flat = rep.flatten(&cand);
        if rank(k, &Matrix::from_cols(&flat, flat[0].len(), GfElem::ZERO)) < cand.len() {
            continue;
        }
        basis.push(x.clone());
        for g in &gamma {
            queue.push(rep.act(g, &x)?);
        }
    }
    let mut deep = Vec::new();
    for z in k.basis() {
        deep.push(s.u(&s.mono(z, 1)));
        deep.push(s.ubar(&s.mono(z, 1)));
        deep.push(s.torus(&s.one().add(&s.mono(z, 1), k))?);
    }
    for g in &deep {
        for b in &basis {
            if !rep.same(&rep.act(g, b)?, b) {
                return Ok(None);
            }
        }
    }
    let dim = basis.len();
    let err = std::cell::RefCell::new(None);
    let fin = FinRep::from_action(k, dim, |g| {
        let moved: Vec<R::Vector> = match basis.iter().map(|b| rep.act(&s.lift(g), b)).collect() {
            Ok(m) => m,
            Err(e) => {
                *err.borrow_mut() = Some(e);
                return Matrix::filled(dim, dim, GfElem::ZERO);
            }
        };
        let mut all = basis.clone();
        all.extend(moved);
        let flat = rep.flatten(&all);
        let b = Matrix::from_cols(&flat[..dim], flat[0].len(), GfElem::ZERO);
        let cols: Vec<Vec<GfElem>> =
            flat[dim..].iter().map(|w| solve(k, &b, w).expect("span is stable")).collect();
        Matrix::from_cols(&cols, dim, GfElem::ZERO)
    });
    if let Some(e) = err.into_inner() {
        return Err(e);
    }
    Ok(Some((fin, basis)))
}

/// Identifies the `K₀`-module generated by `v` among the Serre weights.
pub fn k0_weight_of<R: SmoothRep>(rep: &R, v: &R::Vector) -> Result<WeightOf> {
    if rep.is_zero(v) {
        return Ok(WeightOf::Zero);
    }
    let Some((fin, _)) = k0_span(rep, v)? else {
        return Ok(WeightOf::Reducible);
    };
    if !fin.is_irreducible()? {
        return Ok(WeightOf::Reducible);
    }
    for w in serre_weights(rep.field()) {
        if w.dim() == fin.dim() && find_iso(&w, &fin).is_some() {
            return Ok(WeightOf::Weight(w.label.expect("labelled")));
        }
    }
    Ok(WeightOf::Reducible)
}

/// The `G`-map `ind(σ) → π` with `[1, v_σ] ↦ w`.
#[derive(Clone, Debug)]
pub struct Transport<V> {
    /// Images of `[1, e_i]`.
    pub images: Vec<V>,
}

/// Builds the transport after checking `K₀`-equivariance of `v_σ ↦ w`.
pub fn frob_transport<R: SmoothRep>(sigma: &Weight, target: &R, w: &R::Vector) -> Result<Transport<R::Vector>> {
    let s = target.sl2();
    let k = target.field();
    let d = sigma.dim();
    let moved: Vec<R::Vector> =
        sigma.translates().iter().map(|g| target.act(&s.lift(g), w)).collect::<Result<_>>()?;
    let image_of = |x: &[GfElem]| -> R::Vector {
        let c = sigma.translate_coords(x);
        let mut acc = target.zero();
        for (cj, m) in c.iter().zip(&moved) {
            acc = target.add(&acc, &target.scale(*cj, m));
        }
        acc
    };
    let unit = |i: usize| {
        let mut e = vec![GfElem::ZERO; d];
        e[i] = GfElem::ONE;
        e
    };
    let images: Vec<R::Vector> = (0..d).map(|i| image_of(&unit(i))).collect();
    let mut gens: Vec<Mat2> = sigma.rep.generators().iter().map(|g| s.lift(g)).collect();
    for z in k.basis() {
        gens.push(s.u(&s.mono(z, 1)));
        gens.push(s.ubar(&s.mono(z, 1)));
        gens.push(s.torus(&s.one().add(&s.mono(z, 1), k))?);
    }
    for g in &gens {
        let gb = g.reduce()?;
        for i in 0..d {
            if !target.same(&image_of(&sigma.rep.act(&gb, &unit(i))), &target.act(g, &images[i])?) {
                return Err(Error::NotEquivariant);
            }
        }
    }
    Ok(Transport { images })
}

impl<V: Clone> Transport<V> {
    /// `Ψ(f) = Σ_V R_V·ι(f_V)`.
    pub fn apply<R: SmoothRep<Vector = V>>(&self, ind: &Ind, target: &R, f: &CIndVec) -> Result<V> {
        let mut acc = target.zero();
        for (v, x) in f.terms() {
            let mut local = target.zero();
            for (c, img) in x.iter().zip(&self.images) {
                local = target.add(&local, &target.scale(*c, img));
            }
            acc = target.add(&acc, &target.act(&ind.vertex_rep(v), &local)?);
        }
        Ok(acc)
    }
}

/// Tame character `η` of `B_S` through the torus: `η(diag(a, a⁻¹)) =
/// η(ω)^{val a}·ā₀^r`, `ā₀` the leading coefficient.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SmoothChar {
    pub r: u32,
    pub at_uniformizer: GfElem,
}

impl SmoothChar {
    pub fn trivial() -> SmoothChar {
        SmoothChar { r: 0, at_uniformizer: GfElem::ONE }
    }

    pub fn is_trivial(&self) -> bool {
        self.r == 0 && self.at_uniformizer == GfElem::ONE
    }

    /// All `(r, η(ω))` with `0 ≤ r < q−1`.
    pub fn all(k: &GfField) -> Vec<SmoothChar> {
        let mut out = Vec::new();
        for r in 0..k.q() - 1 {
            for u in k.units() {
                out.push(SmoothChar { r, at_uniformizer: u });
            }
        }
        out
    }

    pub fn eval(&self, k: &GfField, a: &LSeries) -> Result<GfElem> {
        let v = a.valuation().ok_or(Error::ZeroInverse)?;
        Ok(k.mul(k.pow(self.at_uniformizer, v), k.pow(a.lead(), self.r as i64)))
    }

    /// `η(α₀) = η(ω)^{−1}`.
    pub fn at_alpha0(&self, k: &GfField) -> GfElem {
        k.inv(self.at_uniformizer).expect("unit")
    }

    /// Exponent of `η₊ = η|_{T(O^×)}`.
    pub fn plus(&self, k: &GfField) -> u32 {
        self.r % (k.q() - 1)
    }

    /// Exponent of `η₋ = η₊^{w₀}`.
    pub fn minus(&self, k: &GfField) -> u32 {
        let m = k.q() - 1;
        (m - self.r % m) % m
    }
}

/// A vector of `Ind_B^G(η)` fixed by `K₀(level)`: its values on the
/// representatives of `(B ∩ K₀)\K₀/K₀(level)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PSVec {
    pub level: u32,
    pub vals: Vec<GfElem>,
}

/// `Ind_B^G(η)` truncated at level `cap`.
///
/// Level-`m` points are `ū(c)`, `c ∈ O/t^m`, followed by `w₀u(d)`,
/// `d ∈ p/t^m`, in digit order.
#[derive(Clone, Debug)]
pub struct PsModel {
    pub s: Sl2,
    pub eta: SmoothChar,
    pub cap: u32,
}

impl PsModel {
    pub fn new(s: Sl2, eta: SmoothChar, cap: u32) -> PsModel {
        PsModel { s, eta, cap }
    }

    pub fn points(&self, m: u32) -> usize {
        let q = self.s.q() as usize;
        q.pow(m - 1) * (q + 1)
    }

    fn digits(&self, mut i: usize, len: u32) -> Vec<GfElem> {
        let q = self.s.q() as usize;
        (0..len)
            .map(|_| {
                let d = GfElem((i % q) as u32);
                i /= q;
                d
            })
            .collect()
    }

    pub fn point_rep(&self, m: u32, idx: usize) -> Mat2 {
        let s = &self.s;
        let head = (s.q() as usize).pow(m);
        if idx < head {
            s.ubar(&LSeries::from_coeffs(0, &self.digits(idx, m), s.prec))
        } else {
            let d = LSeries::from_coeffs(1, &self.digits(idx - head, m - 1), s.prec);
            s.w0().mul(&s.u(&d), &s.k)
        }
    }

    fn index_of(&self, y: &LSeries, lo: i64, m: u32) -> usize {
        let q = self.s.q() as usize;
        (lo..m as i64).rev().fold(0, |acc, i| acc * q + y.coeff(i).0 as usize)
    }

    /// `(i, c)` with `f(g) = c·f[i]` at level `m`.
    pub fn locate(&self, g: &Mat2, m: u32) -> Result<(usize, GfElem)> {
        let k = &self.s.k;
        let d_piv = match (g.c.valuation(), g.d.valuation()) {
            (None, None) => return Err(Error::PrecisionExhausted("principal series: zero row")),
            (None, Some(_)) => true,
            (Some(_), None) => false,
            (Some(vc), Some(vd)) => vd <= vc,
        };
        let (s, other) = if d_piv { (&g.d, &g.c) } else { (&g.c, &g.d) };
        let y = other.div(s, k)?;
        if y.precision() < m as i64 {
            return Err(Error::PrecisionExhausted("principal series: coordinate"));
        }
        let c = k.inv(self.eta.eval(k, s)?).expect("unit");
        let idx = if d_piv {
            self.index_of(&y, 0, m)
        } else {
            (self.s.q() as usize).pow(m) + self.index_of(&y, 1, m)
        };
        Ok((idx, c))
    }

    pub fn eval(&self, f: &PSVec, g: &Mat2) -> Result<GfElem> {
        let (i, c) = self.locate(g, f.level)?;
        Ok(self.s.k.mul(c, f.vals[i]))
    }

    /// `(ℓ₁, ℓ₂)` at level 1.
    pub fn ps_basics(&self) -> (PSVec, PSVec) {
        let k = &self.s.k;
        let n = self.points(1);
        let mut l1 = vec![GfElem::ZERO; n];
        let mut l2 = vec![GfElem::ZERO; n];
        l1[0] = GfElem::ONE;
        // ℓ₂(w₀) = η(α₀)^{−1}ℓ₂(β₀); ℓ₂(ū(c)) = η(c)^{−1}ℓ₂(w₀) for c ≠ 0.
        let at_w0 = self.eta.at_uniformizer;
        for c in k.units() {
            let e = k.inv(k.pow(c, self.eta.r as i64)).unwrap();
            l2[c.0 as usize] = k.mul(e, at_w0);
        }
        l2[n - 1] = at_w0;
        (PSVec { level: 1, vals: l1 }, PSVec { level: 1, vals: l2 })
    }

    /// The constant function (only for `η = 1`).
    pub fn constant(&self, level: u32) -> PSVec {
        PSVec { level, vals: vec![GfElem::ONE; self.points(level)] }
    }

    pub fn lift_to(&self, f: &PSVec, m: u32) -> Result<PSVec> {
        if m == f.level {
            return Ok(f.clone());
        }
        let vals = (0..self.points(m)).map(|i| self.eval(f, &self.point_rep(m, i))).collect::<Result<_>>()?;
        Ok(PSVec { level: m, vals })
    }

    /// The same vector at the smallest level it is defined at.
    pub fn normalize(&self, f: &PSVec) -> Result<PSVec> {
        for m in 1..f.level {
            let cand = self.lift_to(f, m)?;
            if self.lift_to(&cand, f.level)? == *f {
                return Ok(cand);
            }
        }
        Ok(f.clone())
    }

    /// Values of `Σ c_i g_i·f` at all level-`m` points, `m` the smallest
    /// level where the combination is guaranteed to live.
    pub fn combo_values(&self, terms: &[(GfElem, Mat2)], f: &PSVec) -> Result<PSVec> {
        let k = &self.s.k;
        let m = f.level + 2 * terms.iter().map(|(_, g)| g.cartan() as u32).max().unwrap_or(0);
        let mut vals = vec![GfElem::ZERO; self.points(m)];
        for (i, v) in vals.iter_mut().enumerate() {
            let x = self.point_rep(m, i);
            for (c, g) in terms {
                *v = k.add(*v, k.mul(*c, self.eval(f, &x.mul(g, k))?));
            }
        }
        Ok(PSVec { level: m, vals })
    }

    /// Whether two combinations of translates agree, by pointwise evaluation.
    pub fn combos_agree(&self, lhs: &[(GfElem, Mat2)], rhs: &[(GfElem, Mat2)], f: &PSVec) -> Result<bool> {
        let a = self.combo_values(lhs, f)?;
        let b = self.combo_values(rhs, f)?;
        let m = a.level.max(b.level);
        Ok(self.lift_to(&a, m)? == self.lift_to(&b, m)?)
    }

    /// `g·f` at level `level(f) + 2·cartan(g)`, not normalized.
    pub fn act_raw(&self, g: &Mat2, f: &PSVec) -> Result<PSVec> {
        let m = f.level + 2 * g.cartan() as u32;
        if m > self.cap {
            return Err(Error::LevelCap { level: m, cap: self.cap });
        }
        let k = &self.s.k;
        let vals = (0..self.points(m))
            .map(|i| self.eval(f, &self.point_rep(m, i).mul(g, k)))
            .collect::<Result<_>>()?;
        Ok(PSVec { level: m, vals })
    }

    /// `f(I₂) = 0`.
    pub fn v_eta_membership(&self, f: &PSVec) -> bool {
        f.vals[0].is_zero()
    }

    /// Basis of the `I_S(1)`-fixed vectors of level `m`.
    pub fn i1_fixed_basis(&self, m: u32) -> Result<Vec<PSVec>> {
        if m > self.cap {
            return Err(Error::LevelCap { level: m, cap: self.cap });
        }
        let k = &self.s.k;
        let n = self.points(m);
        let mut rows = Vec::new();
        for g in i1_generators(&self.s, m as i64 - 1) {
            for x in 0..n {
                let (j, c) = self.locate(&self.point_rep(m, x).mul(&g, k), m)?;
                let mut row = vec![GfElem::ZERO; n];
                row[j] = k.add(row[j], c);
                row[x] = k.sub(row[x], GfElem::ONE);
                rows.push(row);
            }
        }
        Ok(kernel(k, &Matrix::from_rows(&rows, n)).into_iter().map(|vals| PSVec { level: m, vals }).collect())
    }

    /// Basis of the kernel of `op` on the level-`m` `I_S(1)`-fixed vectors.
    pub fn operator_kernel(&self, op: SOp, m: u32) -> Result<Vec<PSVec>> {
        let k = &self.s.k;
        let basis = self.i1_fixed_basis(m)?;
        let images: Vec<PSVec> = basis.iter().map(|b| s_operator(self, op, b)).collect::<Result<_>>()?;
        let flat = self.flatten(&images);
        let rel = kernel(k, &Matrix::from_cols(&flat, flat[0].len(), GfElem::ZERO));
        Ok(rel
            .iter()
            .map(|c| {
                let mut acc = self.zero();
                for (ci, b) in c.iter().zip(&basis) {
                    acc = self.add(&acc, &self.scale(*ci, b));
                }
                acc
            })
            .collect())
    }
}

impl SmoothRep for PsModel {
    type Vector = PSVec;

    fn sl2(&self) -> &Sl2 {
        &self.s
    }

    fn act(&self, g: &Mat2, f: &PSVec) -> Result<PSVec> {
        self.normalize(&self.act_raw(g, f)?)
    }

    fn add(&self, a: &PSVec, b: &PSVec) -> PSVec {
        let m = a.level.max(b.level);
        let a = self.lift_to(a, m).expect("lifting stays in precision");
        let b = self.lift_to(b, m).expect("lifting stays in precision");
        PSVec { level: m, vals: vec_add(&self.s.k, &a.vals, &b.vals) }
    }

    fn scale(&self, c: GfElem, a: &PSVec) -> PSVec {
        PSVec { level: a.level, vals: a.vals.iter().map(|&x| self.s.k.mul(c, x)).collect() }
    }

    fn zero(&self) -> PSVec {
        PSVec { level: 1, vals: vec![GfElem::ZERO; self.points(1)] }
    }

    fn is_zero(&self, v: &PSVec) -> bool {
        v.vals.iter().all(|x| x.is_zero())
    }

    fn depth(&self, v: &PSVec) -> i64 {
        v.level as i64 - 1
    }

    fn flatten(&self, vs: &[PSVec]) -> Vec<Vec<GfElem>> {
        let m = vs.iter().map(|v| v.level).max().unwrap_or(1);
        vs.iter().map(|v| self.lift_to(v, m).expect("lifting stays in precision").vals).collect()
    }
}

/// `St = Ind_B^G(1)/1`; vectors are stored with value `0` at `I₂`.
#[derive(Clone, Debug)]
pub struct StModel {
    pub ps: PsModel,
}

impl StModel {
    pub fn new(s: Sl2, cap: u32) -> StModel {
        StModel { ps: PsModel::new(s, SmoothChar::trivial(), cap) }
    }

    /// The representative vanishing at `I₂`; it lies in `V₁`.
    pub fn canonical(&self, f: &PSVec) -> PSVec {
        let k = &self.ps.s.k;
        let c = f.vals[0];
        PSVec { level: f.level, vals: f.vals.iter().map(|&x| k.sub(x, c)).collect() }
    }

    /// The unique lift to `V₁` (the stored representative itself).
    pub fn lift_to_v1(&self, f: &PSVec) -> PSVec {
        self.canonical(f)
    }
}

impl SmoothRep for StModel {
    type Vector = PSVec;

    fn sl2(&self) -> &Sl2 {
        &self.ps.s
    }

    fn act(&self, g: &Mat2, f: &PSVec) -> Result<PSVec> {
        Ok(self.canonical(&self.ps.act(g, f)?))
    }

    fn add(&self, a: &PSVec, b: &PSVec) -> PSVec {
        self.ps.add(a, b)
    }

    fn scale(&self, c: GfElem, a: &PSVec) -> PSVec {
        self.ps.scale(c, a)
    }

    fn zero(&self) -> PSVec {
        self.ps.zero()
    }

    fn is_zero(&self, v: &PSVec) -> bool {
        self.ps.is_zero(&self.canonical(v))
    }

    fn depth(&self, v: &PSVec) -> i64 {
        self.ps.depth(v)
    }

    fn flatten(&self, vs: &[PSVec]) -> Vec<Vec<GfElem>> {
        let canon: Vec<PSVec> = vs.iter().map(|v| self.canonical(v)).collect();
        self.ps.flatten(&canon)
    }
}

impl SmoothRep for Ind {
    type Vector = CIndVec;

    fn sl2(&self) -> &Sl2 {
        &self.s
    }

    fn act(&self, g: &Mat2, v: &CIndVec) -> Result<CIndVec> {
        Ind::act(self, g, v)
    }

    fn add(&self, a: &CIndVec, b: &CIndVec) -> CIndVec {
        a.add(b, &self.s.k)
    }

    fn scale(&self, c: GfElem, a: &CIndVec) -> CIndVec {
        a.scale(c, &self.s.k)
    }

    fn zero(&self) -> CIndVec {
        CIndVec::zero()
    }

    fn is_zero(&self, v: &CIndVec) -> bool {
        v.is_zero()
    }

    fn depth(&self, v: &CIndVec) -> i64 {
        2 * v.radius().max(0) + 1
    }

    fn flatten(&self, vs: &[CIndVec]) -> Vec<Vec<GfElem>> {
        let verts: BTreeSet<&Vertex> = vs.iter().flat_map(|v| v.terms().map(|(x, _)| x)).collect();
        let d = self.dim();
        vs.iter()
            .map(|v| {
                verts
                    .iter()
                    .flat_map(|x| v.get(x).cloned().unwrap_or_else(|| vec![GfElem::ZERO; d]))
                    .collect::<Vec<_>>()
            })
            .map(|mut c| {
                if c.is_empty() {
                    c.push(GfElem::ZERO);
                }
                c
            })
            .collect()
    }
}

/// Terms `−B_λ`, `λ ≠ 0`, of `w₀v = −Σ_{λ≠0} B_λ v`, with
/// `B_λ = (ω²A(λ)⁻¹, −1; 0, ω⁻²A(λ))`.
pub fn w0_relation_terms(s: &Sl2) -> Result<Vec<(GfElem, Mat2)>> {
    let k = &s.k;
    let minus = k.neg(GfElem::ONE);
    let mut out = Vec::new();
    for a in s.lifts2().iter().filter(|a| !a.is_zero()) {
        let m = Mat2::new(a.inv(k)?.shift(2), s.cst(minus), s.zero(), a.shift(-2));
        out.push((minus, m));
    }
    Ok(out)
}

/// Right side of `𝒮₂v = −Σ_{λ≠0} χ(t[λ]) u(−[λ]) Σ_μ u([μ]ω) α₀⁻¹ v`, for
/// `χ(t(a)) = a^r`.
pub fn s2_terms(s: &Sl2, r: u32) -> Vec<(GfElem, Mat2)> {
    let k = &s.k;
    let a_inv = s.alpha0().inv(k);
    let mut out = Vec::new();
    for l in k.units() {
        let c = k.neg(k.pow(l, r as i64));
        for m in k.elements() {
            let g = s.prod(&[&s.u(&s.cst(k.neg(l))), &s.u(&s.mono(m, 1)), &a_inv]);
            out.push((c, g));
        }
    }
    out
}

/// Right side of `w₀v = −Σ_{μ≠0} χ(t[μ]) u(−[μ]ω) α₀⁻¹ v` (when `𝒮₂v = 0`).
pub fn w0_terms_for_s2_kernel(s: &Sl2, r: u32) -> Vec<(GfElem, Mat2)> {
    let k = &s.k;
    let a_inv = s.alpha0().inv(k);
    k.units()
        .map(|m| (k.neg(k.pow(m, r as i64)), s.u(&s.mono(k.neg(m), 1)).mul(&a_inv, k)))
        .collect()
}

/// Evaluates `Σ c_i g_i·v` in any model.
pub fn combo<R: SmoothRep>(rep: &R, terms: &[(GfElem, Mat2)], v: &R::Vector) -> Result<R::Vector> {
    let mut acc = rep.zero();
    for (c, g) in terms {
        acc = rep.add(&acc, &rep.scale(*c, &rep.act(g, v)?));
    }
    Ok(acc)
}

/// Span of `vs` as an echelon basis in the common frame.
pub fn span_rank<R: SmoothRep>(rep: &R, vs: &[R::Vector]) -> usize {
    let flat = rep.flatten(vs);
    let mut e = Echelon::new(flat.first().map_or(0, |f| f.len()));
    for f in &flat {
        e.insert(rep.field(), f);
    }
    e.rank()
}

/// `σ = K₀·ℓ₂` inside `Ind_B^G(η)`, `ind(σ)` and the transport
/// `[1, v_σ] ↦ ι(v_σ)`.
pub fn ps_transport(ps: &PsModel) -> Result<(Ind, Transport<PSVec>)> {
    let (_, l2) = ps.ps_basics();
    let (fin, basis) = k0_span(ps, &l2)?.ok_or(Error::NotEquivariant)?;
    let sigma = Weight::new(fin)?;
    let mut w = ps.zero();
    for (c, b) in sigma.v.iter().zip(&basis) {
        w = ps.add(&w, &ps.scale(*c, b));
    }
    let tr = frob_transport(&sigma, ps, &w)?;
    Ok((Ind::new(ps.s.clone(), sigma)?, tr))
}

/// `Ψ(f)(x)`, evaluated pointwise so no level cap applies.
pub fn transport_eval(ps: &PsModel, ind: &Ind, tr: &Transport<PSVec>, f: &CIndVec, x: &Mat2) -> Result<GfElem> {
    let k = &ps.s.k;
    let mut acc = GfElem::ZERO;
    for (v, c) in f.terms() {
        let y = x.mul(&ind.vertex_rep(v), k);
        for (ci, img) in c.iter().zip(&tr.images) {
            if !ci.is_zero() {
                acc = k.add(acc, k.mul(*ci, ps.eval(img, &y)?));
            }
        }
    }
    Ok(acc)
}

fn spin(ps: &PsModel, seed: &[PSVec], gens: &[Mat2], level: u32) -> Result<Vec<PSVec>> {
    let k = &ps.s.k;
    let mut ech = Echelon::new(ps.points(level));
    let mut out = Vec::new();
    let mut queue: Vec<PSVec> = seed.to_vec();
    while let Some(x) = queue.pop() {
        let x = ps.lift_to(&x, level)?;
        if !ech.insert(k, &x.vals) {
            continue;
        }
        for g in gens {
            match ps.act(g, &x) {
                Ok(y) if y.level <= level => queue.push(y),
                Ok(_) | Err(Error::LevelCap { .. }) => {}
                Err(e) => return Err(e),
            }
        }
        out.push(x);
    }
    Ok(out)
}

fn borel_i1_generators(s: &Sl2, d: i64) -> Vec<Mat2> {
    let k = &s.k;
    let mut out = Vec::new();
    for z in k.basis() {
        for j in 0..=d.max(0) {
            out.push(s.u(&s.mono(z, j)));
            out.push(s.torus(&s.one().add(&s.mono(z, j + 1), k)).expect("unit"));
        }
    }
    out
}

/// Whether the `(B ∩ I(1))`-span of `α₀^{−k}w` meets the `I(1)`-fixed
/// vectors, `k` least with `Ū(p^{2k+1})` fixing `w`.
pub fn borel_generation(ps: &PsModel, w: &PSVec) -> Result<bool> {
    let w = ps.normalize(w)?;
    let kk = w.level.saturating_sub(1).div_ceil(2);
    let a = ps.s.alpha0_pow(-(kk as i64));
    let w1 = ps.act(&a, &w)?;
    let level = w1.level;
    let k = &ps.s.k;
    let gens = borel_i1_generators(&ps.s, level as i64 - 1);
    let mut orbit = Echelon::new(ps.points(level));
    let mut both = Echelon::new(ps.points(level));
    let fixed = ps.i1_fixed_basis(level)?;
    for f in &fixed {
        both.insert(k, &f.vals);
    }
    let mut queue = vec![w1];
    while let Some(x) = queue.pop() {
        let x = ps.lift_to(&x, level)?;
        if !orbit.insert(k, &x.vals) {
            continue;
        }
        both.insert(k, &x.vals);
        if orbit.rank() + fixed.len() > both.rank() {
            return Ok(true);
        }
        for g in &gens {
            queue.push(ps.act_raw(g, &x)?);
        }
    }
    Ok(false)
}

/// Lines of level-`m` `I(1)`-fixed vectors scaled by the sampled `B`
/// generators; returns how many there are and whether each is fixed by
/// `w₀` and `ū(O)`.
pub fn stable_lines(ps: &PsModel, m: u32) -> Result<(usize, bool)> {
    let s = &ps.s;
    let k = &s.k;
    let basis = ps.i1_fixed_basis(m)?;
    let mut b_gens = vec![s.torus(&s.cst(k.generator()))?, s.alpha0(), s.alpha0().inv(k)];
    let mut g_gens = vec![s.w0()];
    for z in k.basis() {
        b_gens.push(s.u(&s.mono(z, -1)));
        g_gens.push(s.ubar(&s.cst(z)));
    }
    let mut found = 0;
    let mut fixed = true;
    for c in crate::cind::digit_vectors(k, basis.len()) {
        // One representative per line: first non-zero coordinate is 1.
        if c.iter().find(|x| !x.is_zero()) != Some(&GfElem::ONE) {
            continue;
        }
        let mut v = ps.zero();
        for (ci, b) in c.iter().zip(&basis) {
            v = ps.add(&v, &ps.scale(*ci, b));
        }
        let mut scaled = true;
        for g in &b_gens {
            if proportion(ps, &ps.act(g, &v)?, &v).is_none() {
                scaled = false;
                break;
            }
        }
        if scaled {
            found += 1;
            for g in &g_gens {
                fixed &= ps.same(&ps.act(g, &v)?, &v);
            }
        }
    }
    Ok((found, fixed))
}

/// Dimension of the `B`-span of `ℓ₂` at level `m`, against `dim V_η = #points − 1`.
pub fn v_eta_spin(ps: &PsModel, m: u32) -> Result<(usize, usize)> {
    let s = &ps.s;
    let k = &s.k;
    let mut gens = vec![s.torus(&s.cst(k.generator()))?, s.alpha0(), s.alpha0().inv(k)];
    for z in k.basis() {
        for j in -1..m as i64 {
            gens.push(s.u(&s.mono(z, j)));
        }
    }
    let (_, l2) = ps.ps_basics();
    Ok((spin(ps, &[l2], &gens, m)?.len(), ps.points(m) - 1))
}

/// `π^α`: the same space with `g` acting through `αgα⁻¹`.
#[derive(Clone, Debug)]
pub struct Twisted<R>(pub R);

impl<R: SmoothRep> SmoothRep for Twisted<R> {
    type Vector = R::Vector;

    fn sl2(&self) -> &Sl2 {
        self.0.sl2()
    }

    fn act(&self, g: &Mat2, v: &R::Vector) -> Result<R::Vector> {
        self.0.act(&self.0.sl2().alpha_conjugate(g), v)
    }

    fn add(&self, a: &R::Vector, b: &R::Vector) -> R::Vector {
        self.0.add(a, b)
    }

    fn scale(&self, c: GfElem, a: &R::Vector) -> R::Vector {
        self.0.scale(c, a)
    }

    fn zero(&self) -> R::Vector {
        self.0.zero()
    }

    fn is_zero(&self, v: &R::Vector) -> bool {
        self.0.is_zero(v)
    }

    fn depth(&self, v: &R::Vector) -> i64 {
        self.0.depth(v) + 2
    }

    fn flatten(&self, vs: &[R::Vector]) -> Vec<Vec<GfElem>> {
        self.0.flatten(vs)
    }

    fn same(&self, a: &R::Vector, b: &R::Vector) -> bool {
        self.0.same(a, b)
    }
}
