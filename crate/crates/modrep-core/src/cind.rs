//! Compact induction `ind_{K₀}^{G}(σ)` of a weight, with finite support.
//!
//! Functions are stored as sums of standard functions `[R_V, v]` where `R_V`
//! is the normal form `u(x)·diag(t^c, t^{−c})` of a vertex of the tree,
//! `x` reduced mod `t^{2c}`.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::fields::{GfElem, GfField, LSeries};
use crate::finrep::{FinRep, WeightLabel};
use crate::linalg::{inverse, kernel, mat_mul, mat_sub, mat_vec, rank, solve, Field, Matrix};
use crate::sl2::{HeckeOp, Mat2, Mat2k, Sl2};
use crate::Mat;

/// A weight of `K₀`, inflated from `SL2(GF(q))`.
#[derive(Clone, Debug)]
pub struct Weight {
    pub rep: FinRep,
    /// Generator of the `U`-fixed line.
    pub v: Vec<GfElem>,
    pub w0v: Vec<GfElem>,
    /// `χ_σ(t(s)) = s^r`.
    pub r: u32,
    pub label: WeightLabel,
    translates: Vec<Mat2k>,
    coords: Mat,
}

impl Weight {
    pub fn new(rep: FinRep) -> Result<Weight> {
        let k = rep.field().clone();
        let (v, r) = rep.weight_data()?;
        let label = rep.label.unwrap_or(if rep.dim() == 1 {
            WeightLabel { r: 0, j: true }
        } else if rep.dim() == k.q() as usize {
            WeightLabel { r: 0, j: false }
        } else {
            WeightLabel { r, j: false }
        });
        let w0v = rep.act(&Mat2k::w0(&k), &v);
        // Spin up from v recording the group element behind each new vector.
        let gens = rep.generators();
        let mut span = crate::linalg::Echelon::new(rep.dim());
        span.insert(&k, &v);
        let mut translates = vec![Mat2k::identity()];
        let mut cols = vec![v.clone()];
        let mut i = 0;
        while i < translates.len() {
            for g in &gens {
                let h = g.mul(&translates[i], &k);
                let w = rep.act(&h, &v);
                if span.insert(&k, &w) {
                    translates.push(h);
                    cols.push(w);
                }
            }
            i += 1;
        }
        let basis = Matrix::from_cols(&cols, rep.dim(), GfElem::ZERO);
        let coords = inverse(&k, &basis).ok_or(Error::Reducible)?;
        Ok(Weight { rep, v, w0v, r, label, translates, coords })
    }

    /// The symmetric-power weight with exponent digits of `r`, `0 ≤ r ≤ q−1`.
    pub fn serre(k: &GfField, r: u32) -> Result<Weight> {
        let mut rep = crate::finrep::sym_model(k, &crate::finrep::digits_of(k, r))?;
        rep.label = Some(crate::finrep::sym_label(k, r));
        Weight::new(rep)
    }

    pub fn field(&self) -> &GfField {
        self.rep.field()
    }

    pub fn dim(&self) -> usize {
        self.rep.dim()
    }

    pub fn is_trivial(&self) -> bool {
        self.dim() == 1
    }

    pub fn is_degenerate(&self) -> bool {
        crate::finrep::is_degenerate(self.field(), self.r)
    }

    /// `γ_j` with `ρ(γ_j)v` a basis of `σ`.
    pub fn translates(&self) -> &[Mat2k] {
        &self.translates
    }

    /// Coefficients `c_j` with `x = Σ c_j ρ(γ_j)v`.
    pub fn translate_coords(&self, x: &[GfElem]) -> Vec<GfElem> {
        mat_vec(self.field(), &self.coords, x)
    }

    /// Exponent `s` of the character `t(a) ↦ a^s` of `I_S` on `f_n`.
    pub fn exponent_for(&self, n: i64) -> u32 {
        let m = self.field().q() - 1;
        if n <= 0 {
            self.r % m
        } else {
            (m - self.r % m) % m
        }
    }
}

/// A vertex `u(x)·diag(t^c, t^{−c})·K₀`; `x = Σ x[i] t^{lo+i}` with all
/// degrees below `2c`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vertex {
    pub c: i64,
    pub lo: i64,
    pub x: Vec<GfElem>,
}

impl Vertex {
    pub fn origin() -> Vertex {
        Vertex { c: 0, lo: 0, x: Vec::new() }
    }

    fn from_series(c: i64, x: &LSeries) -> Vertex {
        let (lo, xs) = x.raw();
        if xs.is_empty() {
            Vertex { c, lo: 0, x: Vec::new() }
        } else {
            Vertex { c, lo, x: xs.to_vec() }
        }
    }

    /// Distance from the origin.
    pub fn radius(&self) -> i64 {
        if self.x.is_empty() {
            self.c.abs()
        } else {
            self.c.abs().max(self.c - self.lo)
        }
    }

    pub fn x_series(&self, prec: i64) -> LSeries {
        LSeries::from_coeffs(self.lo, &self.x, prec)
    }
}

/// A finitely supported function in `ind_{K₀}^{G}(σ)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CIndVec {
    terms: BTreeMap<Vertex, Vec<GfElem>>,
}

impl CIndVec {
    pub fn zero() -> CIndVec {
        CIndVec::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vertex, &Vec<GfElem>)> {
        self.terms.iter()
    }

    pub fn get(&self, v: &Vertex) -> Option<&Vec<GfElem>> {
        self.terms.get(v)
    }

    /// Adds `[R_v, x]`, dropping the entry if it cancels.
    pub fn add_term(&mut self, k: &GfField, v: Vertex, x: &[GfElem]) {
        if x.iter().all(|c| c.is_zero()) {
            return;
        }
        match self.terms.entry(v) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(x.to_vec());
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                for (a, &b) in e.get_mut().iter_mut().zip(x) {
                    *a = k.add(*a, b);
                }
                if e.get().iter().all(|c| c.is_zero()) {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, o: &CIndVec, k: &GfField) -> CIndVec {
        let mut out = self.clone();
        for (v, x) in &o.terms {
            out.add_term(k, v.clone(), x);
        }
        out
    }

    pub fn scale(&self, c: GfElem, k: &GfField) -> CIndVec {
        if c.is_zero() {
            return CIndVec::zero();
        }
        let terms = self
            .terms
            .iter()
            .map(|(v, x)| (v.clone(), x.iter().map(|&a| k.mul(c, a)).collect()))
            .collect();
        CIndVec { terms }
    }

    pub fn sub(&self, o: &CIndVec, k: &GfField) -> CIndVec {
        self.add(&o.scale(k.neg(GfElem::ONE), k), k)
    }

    /// Largest vertex radius in the support; `−1` for zero.
    pub fn radius(&self) -> i64 {
        self.terms.keys().map(Vertex::radius).max().unwrap_or(-1)
    }

    /// The part supported on vertices of radius exactly `l`.
    pub fn layer(&self, l: i64) -> CIndVec {
        let terms =
            self.terms.iter().filter(|(v, _)| v.radius() == l).map(|(v, x)| (v.clone(), x.clone())).collect();
        CIndVec { terms }
    }
}

/// Coefficients on the `f_n` basis of the `I_S(1)`-fixed vectors.
pub type IwVec = BTreeMap<i64, GfElem>;

/// Outcome of an equality test in `ind/τ_σ(ind)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SsqOutcome {
    /// `f1 − f2 = τ_σ(h)` for the witness `h`.
    Equal(CIndVec),
    NotEqual,
}

impl SsqOutcome {
    pub fn is_equal(&self) -> bool {
        matches!(self, SsqOutcome::Equal(_))
    }
}

/// `ind_{K₀}^{G}(σ)` over a fixed working precision.
#[derive(Clone, Debug)]
pub struct Ind {
    pub s: Sl2,
    pub w: Weight,
    /// Largest `|n|` accepted by [`Ind::f_basis`].
    pub radius_cap: i64,
    tau_gen: Vec<CIndVec>,
}

impl Ind {
    pub fn new(s: Sl2, w: Weight) -> Result<Ind> {
        let mut ind = Ind { s, w, radius_cap: 6, tau_gen: Vec::new() };
        let phi_img = ind.tau_phi()?;
        let d = ind.dim();
        let k = ind.s.k.clone();
        let moved: Vec<CIndVec> = ind
            .w
            .translates
            .iter()
            .map(|g| ind.act(&ind.s.lift(g), &phi_img))
            .collect::<Result<_>>()?;
        let mut gens = Vec::with_capacity(d);
        for i in 0..d {
            let mut e = vec![GfElem::ZERO; d];
            e[i] = GfElem::ONE;
            let c = ind.w.translate_coords(&e);
            let mut acc = CIndVec::zero();
            for (cj, m) in c.iter().zip(&moved) {
                acc = acc.add(&m.scale(*cj, &k), &k);
            }
            gens.push(acc);
        }
        ind.tau_gen = gens;
        Ok(ind)
    }

    pub fn field(&self) -> &GfField {
        &self.s.k
    }

    pub fn dim(&self) -> usize {
        self.w.dim()
    }

    pub fn vertex_rep(&self, v: &Vertex) -> Mat2 {
        let s = &self.s;
        Mat2::new(
            s.mono(GfElem::ONE, v.c),
            v.x_series(s.prec).shift(-v.c),
            s.zero(),
            s.mono(GfElem::ONE, -v.c),
        )
    }

    /// `(V, k̄)` with `g = R_V·k`, `k ∈ K₀` reducing to `k̄`.
    pub fn canonical(&self, g: &Mat2) -> Result<(Vertex, Mat2k)> {
        let k = &self.s.k;
        let (top, bot) = match (g.c.valuation(), g.d.valuation()) {
            (None, None) => return Err(Error::PrecisionExhausted("canonical: zero row")),
            (Some(a), Some(b)) if a < b => (&g.a, &g.c),
            (Some(_), None) => (&g.a, &g.c),
            _ => (&g.b, &g.d),
        };
        let c = -bot.val_bound();
        let x = match top.valuation() {
            Some(v1) if v1 < c => {
                let inv = bot.truncate(-v1).inv(k)?;
                let full = top.truncate(c).mul(&inv, k);
                if full.precision() < 2 * c {
                    return Err(Error::PrecisionExhausted("canonical: vertex coordinate"));
                }
                full.poly_part(2 * c, self.s.prec)
            }
            _ => LSeries::zero(self.s.prec),
        };
        let entry = |m: &LSeries, n: &LSeries| -> Result<GfElem> {
            let r = m.sub(&x.mul(n, k), k);
            if r.precision() <= c {
                return Err(Error::PrecisionExhausted("canonical: stabilizer"));
            }
            Ok(r.coeff(c))
        };
        let kb = Mat2k::new(entry(&g.a, &g.c)?, entry(&g.b, &g.d)?, g.c.coeff(-c), g.d.coeff(-c));
        debug_assert_eq!(kb.det(k), GfElem::ONE);
        Ok((Vertex::from_series(c, &x), kb))
    }

    /// `[g, v]`.
    pub fn std_fn(&self, g: &Mat2, v: &[GfElem]) -> Result<CIndVec> {
        let (vert, kb) = self.canonical(g)?;
        let mut out = CIndVec::zero();
        out.add_term(self.field(), vert, &self.w.rep.act(&kb, v));
        Ok(out)
    }

    /// `φ = [1, v_σ]`.
    pub fn phi(&self) -> CIndVec {
        let mut out = CIndVec::zero();
        out.add_term(self.field(), Vertex::origin(), &self.w.v);
        out
    }

    /// Left action `h·f`.
    pub fn act(&self, h: &Mat2, f: &CIndVec) -> Result<CIndVec> {
        let k = self.field();
        let mut out = CIndVec::zero();
        for (v, x) in f.terms() {
            let g = h.mul(&self.vertex_rep(v), k);
            let (nv, kb) = self.canonical(&g)?;
            out.add_term(k, nv, &self.w.rep.act(&kb, x));
        }
        Ok(out)
    }

    /// `Σ_g g·f`.
    pub fn act_sum(&self, gs: &[Mat2], f: &CIndVec) -> Result<CIndVec> {
        let k = self.field();
        let mut out = CIndVec::zero();
        for g in gs {
            for (v, x) in self.act(g, f)?.terms {
                out.add_term(k, v, &x);
            }
        }
        Ok(out)
    }

    /// `f(x)`.
    pub fn evaluate(&self, f: &CIndVec, x: &Mat2) -> Result<Vec<GfElem>> {
        let (v, kb) = self.canonical(&x.inv(self.field()))?;
        Ok(match f.get(&v) {
            Some(val) => self.w.rep.act(&kb.inv(self.field()), val),
            None => vec![GfElem::ZERO; self.dim()],
        })
    }

    /// Classes `n` with `R_V^{−1} ∈ K₀α₀^{−n}I_S(1)` over the support.
    pub fn support_classes(&self, f: &CIndVec) -> Result<BTreeSet<i64>> {
        let mut out = BTreeSet::new();
        for (v, _) in f.terms() {
            let g = self.vertex_rep(v).inv(self.field());
            out.insert(self.s.kgi_class(&g)?.n);
        }
        Ok(out)
    }

    /// Value of `f_n` at `α₀^{−n}`.
    pub fn base_value(&self, n: i64) -> &[GfElem] {
        if n > 0 {
            &self.w.w0v
        } else {
            &self.w.v
        }
    }

    /// `f_n`: supported on `K₀α₀^{−n}I_S(1)`, `I_S(1)`-invariant.
    pub fn f_basis(&self, n: i64) -> Result<CIndVec> {
        if n.abs() > self.radius_cap {
            return Err(Error::RadiusExceeded { radius: n.unsigned_abs() as u32, limit: self.radius_cap as u32 });
        }
        let s = &self.s;
        let k = self.field();
        let a = s.alpha0_pow(n);
        let (lo, slots) = if n > 0 { (1, 2 * n - 1) } else { (0, -2 * n) };
        let mut out = CIndVec::zero();
        for coeffs in digit_vectors(k, slots as usize) {
            let y = LSeries::from_coeffs(lo, &coeffs, s.prec);
            let rep = if n > 0 { s.ubar(&y) } else { s.u(&y) };
            let g = rep.mul(&a, k);
            for (v, x) in self.std_fn(&g, self.base_value(n))?.terms {
                out.add_term(k, v, &x);
            }
        }
        Ok(out)
    }

    /// `f|T` for the pro-`p` Iwahori–Hecke operator `T`.
    pub fn right_hecke(&self, f: &CIndVec, op: HeckeOp) -> Result<CIndVec> {
        self.act_sum(&self.s.hecke_summands(op), f)
    }

    /// `τ(φ)` from the explicit coset sums.
    pub fn tau_phi(&self) -> Result<CIndVec> {
        let s = &self.s;
        let k = self.field();
        let a_inv = s.alpha0().inv(k);
        let mut gs: Vec<Mat2> = s.lifts2().iter().map(|a| s.u(a).mul(&a_inv, k)).collect();
        if self.w.is_trivial() {
            let a = s.alpha0();
            gs.extend(k.elements().map(|m| s.ubar(&s.mono(m, 1)).mul(&a, k)));
        }
        let mut out = CIndVec::zero();
        for g in &gs {
            for (v, x) in self.std_fn(g, &self.w.v)?.terms {
                out.add_term(k, v, &x);
            }
        }
        Ok(out)
    }

    /// `τ([1, e_i])` for the standard basis of `σ`.
    pub fn tau_generators(&self) -> &[CIndVec] {
        &self.tau_gen
    }

    fn tau_at(&self, v: &Vertex, x: &[GfElem]) -> Result<CIndVec> {
        let k = self.field();
        let mut local = CIndVec::zero();
        for (c, e) in x.iter().zip(&self.tau_gen) {
            if !c.is_zero() {
                local = local.add(&e.scale(*c, k), k);
            }
        }
        self.act(&self.vertex_rep(v), &local)
    }

    /// `τ(f)`, extended from `τ(φ)` by equivariance.
    pub fn tau_apply(&self, f: &CIndVec) -> Result<CIndVec> {
        let k = self.field();
        let mut out = CIndVec::zero();
        for (v, x) in f.terms() {
            for (nv, y) in self.tau_at(v, x)?.terms {
                out.add_term(k, nv, &y);
            }
        }
        Ok(out)
    }

    /// `τ_σ = τ` for nontrivial `σ` and `τ + Id` for the trivial weight.
    pub fn tau_sigma(&self, f: &CIndVec) -> Result<CIndVec> {
        let t = self.tau_apply(f)?;
        Ok(if self.w.is_trivial() { t.add(f, self.field()) } else { t })
    }

    /// Checks `τ(s·[1,e_i]) = s·τ([1,e_i])` for the generators of `K₀`.
    pub fn check_tau_well_defined(&self) -> Result<bool> {
        for g in self.k0_generators() {
            let gb = g.reduce()?;
            for i in 0..self.dim() {
                let mut e = vec![GfElem::ZERO; self.dim()];
                e[i] = GfElem::ONE;
                let lhs = self.tau_at(&Vertex::origin(), &self.w.rep.act(&gb, &e))?;
                let rhs = self.act(&g, &self.tau_gen[i])?;
                if lhs != rhs {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Generators of `K₀`: lifts of the `Γ` generators and of `K₀(1)`.
    pub fn k0_generators(&self) -> Vec<Mat2> {
        let s = &self.s;
        let k = self.field();
        let mut out: Vec<Mat2> = self.w.rep.generators().iter().map(|g| s.lift(g)).collect();
        for z in k.basis() {
            out.push(s.u(&s.mono(z, 1)));
            out.push(s.ubar(&s.mono(z, 1)));
            out.push(s.torus(&s.one().add(&s.mono(z, 1), k)).expect("unit"));
        }
        out
    }

    /// Generators of `I_S(1)` that matter on functions of radius `≤ depth/2`.
    pub fn i1_generators(&self, depth: i64) -> Vec<Mat2> {
        let s = &self.s;
        let k = self.field();
        let mut out = Vec::new();
        for z in k.basis() {
            for j in 0..=depth {
                out.push(s.u(&s.mono(z, j)));
                if j >= 1 {
                    out.push(s.ubar(&s.mono(z, j)));
                    out.push(s.torus(&s.one().add(&s.mono(z, j), k)).expect("unit"));
                }
            }
        }
        out
    }

    /// Whether every generator of `I_S(1)` fixes `f`.
    pub fn is_i1_fixed(&self, f: &CIndVec) -> Result<bool> {
        let depth = 2 * f.radius().max(0) + 1;
        for g in self.i1_generators(depth) {
            if &self.act(&g, f)? != f {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `c` with `t([g])·f = c·f`, `g` the field generator, if `f` is an eigenvector.
    pub fn torus_eigenvalue(&self, f: &CIndVec) -> Result<Option<GfElem>> {
        let k = self.field();
        let t = self.s.torus(&self.s.cst(k.generator()))?;
        let tf = self.act(&t, f)?;
        let Some((v, x)) = f.terms().next() else {
            return Ok(None);
        };
        let Some(y) = tf.get(v) else {
            return Ok(None);
        };
        let i = x.iter().position(|c| !c.is_zero()).expect("stored values are nonzero");
        let c = k.mul(y[i], k.inv(x[i]).unwrap());
        Ok((f.scale(c, k) == tf).then_some(c))
    }

    /// All vertices at distance at most `radius`, in a fixed order.
    pub fn ball(&self, radius: i64) -> Vec<Vertex> {
        let k = self.field();
        let mut out = Vec::new();
        for c in -radius..=radius {
            let lo = c - radius;
            let slots = (2 * c - lo).max(0) as usize;
            for digits in digit_vectors(k, slots) {
                let x = LSeries::from_coeffs(lo, &digits, self.s.prec);
                out.push(Vertex::from_series(c, &x));
            }
        }
        out
    }

    /// Dimension of the `I_S(1)`-fixed functions supported in the ball of
    /// the given radius, by propagating along `I_S(1)`-orbits of vertices.
    pub fn i1_fixed_dim(&self, radius: i64) -> Result<usize> {
        let k = self.field();
        let d = self.dim();
        let verts = self.ball(radius);
        let index: HashMap<&Vertex, usize> = verts.iter().enumerate().map(|(i, v)| (v, i)).collect();
        let gens = self.i1_generators(2 * radius + 1);
        let mut frame: Vec<Option<Mat>> = vec![None; verts.len()];
        let mut total = 0;
        for root in 0..verts.len() {
            if frame[root].is_some() {
                continue;
            }
            frame[root] = Some(crate::linalg::identity(k, d));
            let mut queue = vec![root];
            let mut rows: Vec<Vec<GfElem>> = Vec::new();
            while let Some(i) = queue.pop() {
                let rep = self.vertex_rep(&verts[i]);
                let mi = frame[i].clone().expect("visited");
                for g in &gens {
                    let (nv, kb) = self.canonical(&g.mul(&rep, k))?;
                    let j = *index.get(&nv).ok_or(Error::RadiusExceeded {
                        radius: nv.radius() as u32,
                        limit: radius as u32,
                    })?;
                    let moved = mat_mul(k, &self.w.rep.rho(&kb), &mi);
                    match &frame[j] {
                        None => {
                            frame[j] = Some(moved);
                            queue.push(j);
                        }
                        Some(mj) => {
                            let diff = mat_sub(k, &moved, mj);
                            rows.extend((0..d).map(|r| diff.row(r).to_vec()));
                        }
                    }
                }
            }
            total += if rows.is_empty() { d } else { d - rank(k, &Matrix::from_rows(&rows, d)) };
        }
        Ok(total)
    }

    /// The parent vertex of `v` (radius `≥ 1`) on its geodesic to the origin.
    pub fn parent(&self, v: &Vertex) -> Result<Vertex> {
        let s = &self.s;
        let cls = s.kgi_class(&self.vertex_rep(v))?;
        let step = cls.n - cls.n.signum();
        Ok(self.canonical(&cls.k.mul(&s.alpha0_pow(-step), &s.k))?.0)
    }

    /// Decides `f1 = f2` in `ind/τ_σ(ind)` by peeling the outermost layer.
    ///
    /// `τ_σ` raises the radius by exactly one and is injective on each
    /// layer, so a preimage of `f1 − f2` has radius `radius(f1 − f2) − 1`.
    pub fn ssq_equal(&self, f1: &CIndVec, f2: &CIndVec, search_radius: Option<i64>) -> Result<SsqOutcome> {
        let k = self.field();
        let mut residual = f1.sub(f2, k);
        if residual.is_zero() {
            return Ok(SsqOutcome::Equal(CIndVec::zero()));
        }
        let top = residual.radius();
        let search = search_radius.unwrap_or(top);
        if top - 1 > search {
            return Err(Error::RadiusTooSmall { needed: (top - 1) as u32, given: search.max(0) as u32 });
        }
        let d = self.dim();
        let mut witness = CIndVec::zero();
        for l in (1..=top).rev() {
            let layer = residual.layer(l);
            let mut parents: BTreeMap<Vertex, Vec<Vertex>> = BTreeMap::new();
            for (v, _) in layer.terms() {
                parents.entry(self.parent(v)?).or_default().push(v.clone());
            }
            for (x, _) in parents {
                let images: Vec<CIndVec> = (0..d)
                    .map(|i| {
                        let mut e = vec![GfElem::ZERO; d];
                        e[i] = GfElem::ONE;
                        self.tau_at(&x, &e).map(|t| t.layer(l))
                    })
                    .collect::<Result<_>>()?;
                let rows: BTreeSet<Vertex> =
                    images.iter().flat_map(|t| t.terms().map(|(v, _)| v.clone())).collect();
                let target: Vec<GfElem> = rows
                    .iter()
                    .flat_map(|v| residual.get(v).cloned().unwrap_or_else(|| vec![GfElem::ZERO; d]))
                    .collect();
                let cols: Vec<Vec<GfElem>> = images
                    .iter()
                    .map(|t| {
                        rows.iter()
                            .flat_map(|v| t.get(v).cloned().unwrap_or_else(|| vec![GfElem::ZERO; d]))
                            .collect()
                    })
                    .collect();
                let a = Matrix::from_cols(&cols, target.len(), GfElem::ZERO);
                if rank(k, &a) < d {
                    return Err(Error::NonInjective);
                }
                let Some(h) = solve(k, &a, &target) else {
                    return Ok(SsqOutcome::NotEqual);
                };
                let mut hx = CIndVec::zero();
                hx.add_term(k, x.clone(), &h);
                residual = residual.sub(&self.tau_sigma(&hx)?, k);
                witness = witness.add(&hx, k);
            }
            if !residual.layer(l).is_zero() {
                return Ok(SsqOutcome::NotEqual);
            }
        }
        Ok(if residual.is_zero() { SsqOutcome::Equal(witness) } else { SsqOutcome::NotEqual })
    }

    /// `f(α₀^{−n})` coefficient on the `f_n` base value.
    fn base_coefficient(&self, n: i64, val: &[GfElem]) -> Result<GfElem> {
        let k = self.field();
        let b = self.base_value(n);
        let i = b.iter().position(|c| !c.is_zero()).expect("nonzero base value");
        let c = k.mul(val[i], k.inv(b[i]).unwrap());
        if b.iter().zip(val).all(|(&x, &y)| k.mul(c, x) == y) {
            Ok(c)
        } else {
            Err(Error::NotFixed("value off the base line"))
        }
    }

    /// Value at `x` of `Σ c_n f_n`.
    pub fn iw_eval(&self, f: &IwVec, x: &Mat2) -> Result<Vec<GfElem>> {
        let cls = self.s.kgi_class(x)?;
        let Some(&c) = f.get(&cls.n) else {
            return Ok(vec![GfElem::ZERO; self.dim()]);
        };
        let base: Vec<GfElem> = self.base_value(cls.n).iter().map(|&b| self.field().mul(c, b)).collect();
        Ok(self.w.rep.act(&cls.k.reduce()?, &base))
    }

    /// `f|T` on coefficient vectors, read off at `α₀^{−m}` for each `m`
    /// the operator can reach.
    pub fn right_hecke_iw(&self, f: &IwVec, op: HeckeOp) -> Result<IwVec> {
        let k = self.field();
        let summands = self.s.hecke_summands(op);
        let mut reach = BTreeSet::new();
        for &n in f.keys() {
            for m in [n.abs() - 1, n.abs(), n.abs() + 1] {
                if m >= 0 {
                    reach.insert(m);
                    reach.insert(-m);
                }
            }
        }
        let mut out = IwVec::new();
        for m in reach {
            let a = self.s.alpha0_pow(-m);
            let mut val = vec![GfElem::ZERO; self.dim()];
            for g in &summands {
                let y = self.iw_eval(f, &a.mul(g, k))?;
                val = crate::linalg::vec_add(k, &val, &y);
            }
            if val.iter().any(|c| !c.is_zero()) {
                out.insert(m, self.base_coefficient(m, &val)?);
            }
        }
        Ok(out)
    }

    pub fn iw_to_cind(&self, f: &IwVec) -> Result<CIndVec> {
        let k = self.field();
        let mut out = CIndVec::zero();
        for (&n, &c) in f {
            out = out.add(&self.f_basis(n)?.scale(c, k), k);
        }
        Ok(out)
    }

    /// Coordinates of an `I_S(1)`-fixed `f` on the `f_n`; `verify` rebuilds
    /// `f` from them.
    pub fn cind_to_iw(&self, f: &CIndVec, verify: bool) -> Result<IwVec> {
        let r = f.radius();
        let mut out = IwVec::new();
        for n in -r..=r {
            let val = self.evaluate(f, &self.s.alpha0_pow(-n))?;
            if val.iter().any(|c| !c.is_zero()) {
                out.insert(n, self.base_coefficient(n, &val)?);
            }
        }
        if verify && &self.iw_to_cind(&out)? != f {
            return Err(Error::NotFixed("not in the span of the f_n"));
        }
        Ok(out)
    }
}

/// All vectors in `k^len`, in lexicographic order of indices.
pub fn digit_vectors(k: &GfField, len: usize) -> Vec<Vec<GfElem>> {
    let q = k.q() as u64;
    let total = q.pow(len as u32);
    (0..total)
        .map(|mut i| {
            (0..len)
                .map(|_| {
                    let d = GfElem((i % q) as u32);
                    i /= q;
                    d
                })
                .collect()
        })
        .collect()
}

/// Kernel of `x ↦ Σ_i x_i a_i` for vectors `a_i` of equal length.
pub fn relations(k: &GfField, vs: &[Vec<GfElem>]) -> Vec<Vec<GfElem>> {
    if vs.is_empty() {
        return Vec::new();
    }
    kernel(k, &Matrix::from_cols(vs, vs[0].len(), GfElem::ZERO))
}
