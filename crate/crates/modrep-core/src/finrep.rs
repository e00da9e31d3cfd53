//! Representations of `Γ = SL2(GF(q))`: principal series, the intertwiner
//! `T_{w₀}`, its images, symmetric-power models, irreducibility and
//! isomorphism testing.

use std::fmt;

use crate::error::{Error, Result};
use crate::fields::{GfElem, GfField};
use crate::linalg::{
    identity, inverse, is_zero_vec, kernel, mat_add, mat_mul, mat_sub, mat_vec, solve, Echelon,
    Field, Matrix,
};
use crate::sl2::Mat2k;
use crate::Mat;

/// Label `(r, J)` of an irreducible: `J = {1}` only for the trivial module.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeightLabel {
    pub r: u32,
    pub j: bool,
}

impl fmt::Display for WeightLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.j {
            write!(f, "({},{{1}})", self.r)
        } else {
            write!(f, "({},{{}})", self.r)
        }
    }
}

/// A finite-dimensional `Γ`-module stored through its Bruhat generators.
#[derive(Clone, Debug)]
pub struct FinRep {
    k: GfField,
    dim: usize,
    u: Vec<Mat>,
    t: Vec<Mat>,
    w0: Mat,
    pub label: Option<WeightLabel>,
}

impl FinRep {
    pub fn from_action(k: &GfField, dim: usize, act: impl Fn(&Mat2k) -> Mat) -> Self {
        let u = k.elements().map(|x| act(&Mat2k::u(x))).collect();
        let t = (0..k.q() - 1).map(|i| act(&Mat2k::torus(k.gen_pow(i as i64), k))).collect();
        FinRep { k: k.clone(), dim, u, t, w0: act(&Mat2k::w0(k)), label: None }
    }

    pub fn field(&self) -> &GfField {
        &self.k
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn torus_mat(&self, s: GfElem) -> &Mat {
        &self.t[self.k.log(s).expect("unit") as usize]
    }

    /// `ρ(g)` through `g = t(a)u(b/a)` or `g = u(a/c)t(1/c)w₀u(d/c)`.
    pub fn rho(&self, g: &Mat2k) -> Mat {
        let k = &self.k;
        if g.c.is_zero() {
            let y = k.mul(g.b, k.inv(g.a).unwrap());
            return mat_mul(k, self.torus_mat(g.a), &self.u[y.0 as usize]);
        }
        let ci = k.inv(g.c).unwrap();
        let x = k.mul(g.a, ci);
        let y = k.mul(g.d, ci);
        let left = mat_mul(k, &self.u[x.0 as usize], self.torus_mat(ci));
        let right = mat_mul(k, &self.w0, &self.u[y.0 as usize]);
        mat_mul(k, &left, &right)
    }

    pub fn act(&self, g: &Mat2k, v: &[GfElem]) -> Vec<GfElem> {
        mat_vec(&self.k, &self.rho(g), v)
    }

    /// Generators used for spin-up and intertwiner equations.
    pub fn generators(&self) -> Vec<Mat2k> {
        let k = &self.k;
        let mut gens: Vec<Mat2k> = k.basis().into_iter().map(Mat2k::u).collect();
        gens.extend(k.basis().into_iter().map(Mat2k::ubar));
        gens.push(Mat2k::torus(k.generator(), k));
        gens.push(Mat2k::w0(k));
        gens
    }

    /// The smallest submodule containing `vs`.
    pub fn spin(&self, vs: &[Vec<GfElem>]) -> Echelon<GfElem> {
        let mats: Vec<Mat> = self.generators().iter().map(|g| self.rho(g)).collect();
        let mut span = Echelon::new(self.dim);
        let mut queue: Vec<Vec<GfElem>> = Vec::new();
        for v in vs {
            if span.insert(&self.k, v) {
                queue.push(v.clone());
            }
        }
        while let Some(v) = queue.pop() {
            for m in &mats {
                let w = mat_vec(&self.k, m, &v);
                if span.insert(&self.k, &w) {
                    queue.push(w);
                }
            }
        }
        span
    }

    /// Restriction to the submodule with the given basis.
    pub fn restrict(&self, basis: &[Vec<GfElem>]) -> Result<FinRep> {
        let k = &self.k;
        let b = Matrix::from_cols(basis, self.dim, GfElem::ZERO);
        let coords = |m: &Mat| -> Result<Mat> {
            let cols: Vec<Vec<GfElem>> = basis
                .iter()
                .map(|v| {
                    solve(k, &b, &mat_vec(k, m, v)).ok_or(Error::NotEquivariant)
                })
                .collect::<Result<_>>()?;
            Ok(Matrix::from_cols(&cols, basis.len(), GfElem::ZERO))
        };
        Ok(FinRep {
            k: k.clone(),
            dim: basis.len(),
            u: self.u.iter().map(coords).collect::<Result<_>>()?,
            t: self.t.iter().map(coords).collect::<Result<_>>()?,
            w0: coords(&self.w0)?,
            label: None,
        })
    }

    pub fn u_invariants(&self) -> Vec<Vec<GfElem>> {
        let k = &self.k;
        let id = identity(k, self.dim);
        let mut rows = Vec::new();
        for z in k.basis() {
            let m = mat_sub(k, &self.u[z.0 as usize], &id);
            for i in 0..self.dim {
                rows.push(m.row(i).to_vec());
            }
        }
        if rows.is_empty() {
            return Vec::new();
        }
        kernel(k, &Matrix::from_rows(&rows, self.dim))
    }

    /// Every nonzero submodule meets the `U`-fixed space, so the module is
    /// irreducible iff each `U`-fixed line generates everything.
    pub fn is_irreducible(&self) -> Result<bool> {
        if self.dim == 0 {
            return Err(Error::ZeroModule);
        }
        let fixed = self.u_invariants();
        let q = self.k.q() as u64;
        let m = fixed.len() as u32;
        let count = q.pow(m);
        for idx in 1..count {
            let mut digits = Vec::with_capacity(m as usize);
            let mut x = idx;
            for _ in 0..m {
                digits.push(GfElem((x % q) as u32));
                x /= q;
            }
            // One representative per projective point: leading digit 1.
            if digits.iter().rev().find(|d| !d.is_zero()) != Some(&GfElem::ONE) {
                continue;
            }
            let mut v = vec![GfElem::ZERO; self.dim];
            for (c, f) in digits.iter().zip(&fixed) {
                for (x, &y) in v.iter_mut().zip(f) {
                    *x = self.k.add(*x, self.k.mul(*c, y));
                }
            }
            if self.spin(&[v]).rank() < self.dim {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Generator of the `U`-fixed line and the torus exponent on it.
    pub fn weight_data(&self) -> Result<(Vec<GfElem>, u32)> {
        if !self.is_irreducible()? {
            return Err(Error::Reducible);
        }
        let v = self.u_invariants().remove(0);
        let tv = self.act(&Mat2k::torus(self.k.generator(), &self.k), &v);
        let i = v.iter().position(|x| !x.is_zero()).unwrap();
        let c = self.k.mul(tv[i], self.k.inv(v[i]).unwrap());
        Ok((v, self.k.log(c).expect("eigenvalue is a unit")))
    }
}

/// A nonzero `Γ`-equivariant isomorphism `a → b`, if one exists.
pub fn find_iso(a: &FinRep, b: &FinRep) -> Option<Mat> {
    let k = a.field();
    let (da, db) = (a.dim, b.dim);
    if da != db {
        return None;
    }
    // Unknown X (db × da), vectorized row-major: X[i][j] ↦ i*da + j.
    let n = da * db;
    let mut rows = Vec::new();
    for g in a.generators() {
        let ra = a.rho(&g);
        let rb = b.rho(&g);
        for i in 0..db {
            for j in 0..da {
                // (X ρa − ρb X)[i][j]
                let mut row = vec![GfElem::ZERO; n];
                for l in 0..da {
                    let idx = i * da + l;
                    row[idx] = k.add(row[idx], ra.get(l, j));
                }
                for l in 0..db {
                    let idx = l * da + j;
                    row[idx] = k.sub(row[idx], rb.get(i, l));
                }
                rows.push(row);
            }
        }
    }
    let sols = kernel(k, &Matrix::from_rows(&rows, n));
    sols.into_iter().find_map(|s| {
        let x = Matrix::from_rows(&s.chunks(da).map(|c| c.to_vec()).collect::<Vec<_>>(), da);
        inverse(k, &x).map(|_| x)
    })
}

/// `Ind_U^Γ(1)` as functions on `k² ∖ 0` with `(g·f)(v) = f(vg)`.
#[derive(Clone, Debug)]
pub struct IndU {
    k: GfField,
}

impl IndU {
    pub fn new(k: &GfField) -> Self {
        IndU { k: k.clone() }
    }

    pub fn dim(&self) -> usize {
        (self.k.q() * self.k.q() - 1) as usize
    }

    pub fn index(&self, v: (GfElem, GfElem)) -> usize {
        (v.0 .0 * self.k.q() + v.1 .0 - 1) as usize
    }

    pub fn point(&self, idx: usize) -> (GfElem, GfElem) {
        let n = idx as u32 + 1;
        (GfElem(n / self.k.q()), GfElem(n % self.k.q()))
    }

    fn row_times(&self, v: (GfElem, GfElem), g: &Mat2k) -> (GfElem, GfElem) {
        let k = &self.k;
        (k.add(k.mul(v.0, g.a), k.mul(v.1, g.c)), k.add(k.mul(v.0, g.b), k.mul(v.1, g.d)))
    }

    pub fn rep(&self) -> FinRep {
        let d = self.dim();
        FinRep::from_action(&self.k, d, |g| {
            let mut m = Matrix::filled(d, d, GfElem::ZERO);
            for i in 0..d {
                m.set(i, self.index(self.row_times(self.point(i), g)), GfElem::ONE);
            }
            m
        })
    }

    /// `T_{w₀} f(v) = Σ_λ f(−r₁ − λv)` where `det(r₁; v) = 1`.
    pub fn t_w0(&self, f: &[GfElem]) -> Vec<GfElem> {
        let k = &self.k;
        (0..self.dim())
            .map(|i| {
                let v = self.point(i);
                let r1 = if v.0.is_zero() {
                    (k.inv(v.1).unwrap(), GfElem::ZERO)
                } else {
                    (GfElem::ZERO, k.neg(k.inv(v.0).unwrap()))
                };
                k.elements().fold(GfElem::ZERO, |acc, l| {
                    let w = (
                        k.sub(k.neg(r1.0), k.mul(l, v.0)),
                        k.sub(k.neg(r1.1), k.mul(l, v.1)),
                    );
                    k.add(acc, f[self.index(w)])
                })
            })
            .collect()
    }
}

/// `Ind_B^Γ(χ_r)` on the points `(0,1)` and `(1,λ)`, with `f(sv) = s^{−r}f(v)`.
#[derive(Clone, Debug)]
pub struct IndB {
    k: GfField,
    pub r: u32,
    pub rep: FinRep,
}

impl IndB {
    pub fn new(k: &GfField, r: u32) -> Result<Self> {
        if r > k.q() - 2 {
            return Err(Error::InvalidExponent(r));
        }
        let d = k.q() as usize + 1;
        let mut ind = IndB { k: k.clone(), r, rep: FinRep::from_action(k, 1, |_| identity(k, 1)) };
        let rep = FinRep::from_action(k, d, |g| {
            let mut m = Matrix::filled(d, d, GfElem::ZERO);
            for i in 0..d {
                let (x, y) = ind.point(i);
                let w = (k.add(k.mul(x, g.a), k.mul(y, g.c)), k.add(k.mul(x, g.b), k.mul(y, g.d)));
                let (j, s) = ind.locate(w);
                m.set(i, j, k.pow(s, -(r as i64)));
            }
            m
        });
        ind.rep = rep;
        Ok(ind)
    }

    pub fn dim(&self) -> usize {
        self.k.q() as usize + 1
    }

    pub fn point(&self, i: usize) -> (GfElem, GfElem) {
        if i == 0 {
            (GfElem::ZERO, GfElem::ONE)
        } else {
            (GfElem::ONE, GfElem(i as u32 - 1))
        }
    }

    /// `v = s·P` for a basis point `P`; returns `(index of P, s)`.
    pub fn locate(&self, v: (GfElem, GfElem)) -> (usize, GfElem) {
        let k = &self.k;
        if v.0.is_zero() {
            (0, v.1)
        } else {
            (1 + k.mul(v.1, k.inv(v.0).unwrap()).0 as usize, v.0)
        }
    }

    /// `φ_χ`: supported on `B`, value 1 at the identity.
    pub fn phi(&self) -> Vec<GfElem> {
        let mut v = vec![GfElem::ZERO; self.dim()];
        v[0] = GfElem::ONE;
        v
    }

    pub fn embed(&self, f: &[GfElem], amb: &IndU) -> Vec<GfElem> {
        (0..amb.dim())
            .map(|i| {
                let (j, s) = self.locate(amb.point(i));
                self.k.mul(self.k.pow(s, -(self.r as i64)), f[j])
            })
            .collect()
    }

    /// Restriction of an ambient function to the basis points; `None` if it
    /// does not lie in this module.
    pub fn project(&self, g: &[GfElem], amb: &IndU) -> Option<Vec<GfElem>> {
        let f: Vec<GfElem> = (0..self.dim()).map(|i| g[amb.index(self.point(i))]).collect();
        (self.embed(&f, amb) == g).then_some(f)
    }
}

fn w0_exponent(k: &GfField, r: u32) -> u32 {
    let n = k.q() - 1;
    (n - r % n) % n
}

/// `T_{w₀} : Ind(χ_r) → Ind(χ_r^{w₀})` as a matrix.
pub fn t_w0_matrix(k: &GfField, r: u32) -> Result<Mat> {
    let src = IndB::new(k, r)?;
    let dst = IndB::new(k, w0_exponent(k, r))?;
    let amb = IndU::new(k);
    let d = src.dim();
    let mut cols = Vec::with_capacity(d);
    for i in 0..d {
        let mut e = vec![GfElem::ZERO; d];
        e[i] = GfElem::ONE;
        let img = amb.t_w0(&src.embed(&e, &amb));
        cols.push(dst.project(&img, &amb).ok_or(Error::NotEquivariant)?);
    }
    Ok(Matrix::from_cols(&cols, d, GfElem::ZERO))
}

/// `Θ^J(Ind χ_r)` inside `Ind χ_r^{w₀}` with its generator `f_χ^J`.
#[derive(Clone, Debug)]
pub struct ThetaImage {
    pub r: u32,
    pub j: bool,
    pub rep: FinRep,
    /// `f_χ^J` in the coordinates of `rep`.
    pub f: Vec<GfElem>,
    /// `f_χ^J` in the ambient `Ind χ_r^{w₀}`.
    pub f_ambient: Vec<GfElem>,
    pub basis: Vec<Vec<GfElem>>,
}

pub fn theta_image(k: &GfField, r: u32, j: bool) -> Result<ThetaImage> {
    if j && r != 0 {
        return Err(Error::IllegalJ);
    }
    let t = t_w0_matrix(k, r)?;
    let theta = if j { mat_add(k, &identity(k, t.rows()), &t) } else { t };
    let src = IndB::new(k, r)?;
    let dst = IndB::new(k, w0_exponent(k, r))?;
    let f_amb = mat_vec(k, &theta, &src.phi());
    let span = dst.rep.spin(std::slice::from_ref(&f_amb));
    let basis = span.basis().to_vec();
    let mut rep = dst.rep.restrict(&basis)?;
    rep.label = Some(WeightLabel { r, j });
    let b = Matrix::from_cols(&basis, dst.dim(), GfElem::ZERO);
    let f = solve(k, &b, &f_amb).expect("generator lies in its span");
    Ok(ThetaImage { r, j, rep, f, f_ambient: f_amb, basis })
}

/// `c` with `T_{w₀} f = c·f`, both viewed in `Ind_U^Γ(1)`.
pub fn t_w0_eigenvalue(k: &GfField, img: &ThetaImage) -> Option<GfElem> {
    let amb = IndU::new(k);
    let dst = IndB::new(k, w0_exponent(k, img.r)).ok()?;
    let f = dst.embed(&img.f_ambient, &amb);
    let tf = amb.t_w0(&f);
    let i = f.iter().position(|x| !x.is_zero())?;
    let c = k.mul(tf[i], k.inv(f[i]).unwrap());
    let scaled: Vec<GfElem> = f.iter().map(|&x| k.mul(c, x)).collect();
    (scaled == tf).then_some(c)
}

/// Base-`p` digits of `r`, length `e`.
pub fn digits_of(k: &GfField, r: u32) -> Vec<u32> {
    let mut x = r;
    (0..k.e())
        .map(|_| {
            let d = x % k.p();
            x /= k.p();
            d
        })
        .collect()
}

/// Coefficients of `(αX + γY)^{r−i}(βX + δY)^i` by `Y`-degree.
fn sym_column(k: &GfField, g: [GfElem; 4], r: u32, i: u32) -> Vec<GfElem> {
    let [a, b, c, d] = g;
    let mut poly = vec![GfElem::ONE];
    let mut mul_linear = |x: GfElem, y: GfElem| {
        let mut out = vec![GfElem::ZERO; poly.len() + 1];
        for (j, &p) in poly.iter().enumerate() {
            out[j] = k.add(out[j], k.mul(p, x));
            out[j + 1] = k.add(out[j + 1], k.mul(p, y));
        }
        poly = out;
    };
    for _ in 0..r - i {
        mul_linear(a, c);
    }
    for _ in 0..i {
        mul_linear(b, d);
    }
    poly
}

fn kron(k: &GfField, a: &Mat, b: &Mat) -> Mat {
    let mut m = Matrix::filled(a.rows() * b.rows(), a.cols() * b.cols(), GfElem::ZERO);
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            let x = a.get(i, j);
            for s in 0..b.rows() {
                for t in 0..b.cols() {
                    m.set(i * b.rows() + s, j * b.cols() + t, k.mul(x, b.get(s, t)));
                }
            }
        }
    }
    m
}

/// `⊗_l (Sym^{r_l})^{Fr^l}` acting by `(X, Y) ↦ (X, Y)·g` on each factor.
pub fn sym_model(k: &GfField, digits: &[u32]) -> Result<FinRep> {
    if digits.len() != k.e() as usize || digits.iter().any(|&d| d >= k.p()) {
        return Err(Error::DigitOutOfRange);
    }
    let dim: usize = digits.iter().map(|&d| d as usize + 1).product();
    let rep = FinRep::from_action(k, dim, |g| {
        // Factor 0 is the slowest-varying index.
        let mut m = identity(k, 1);
        for (l, &r) in digits.iter().enumerate() {
            let fr = |x: GfElem| k.frobenius_pow(x, l as u32);
            let gl = [fr(g.a), fr(g.b), fr(g.c), fr(g.d)];
            let cols: Vec<Vec<GfElem>> = (0..=r).map(|i| sym_column(k, gl, r, i)).collect();
            let factor = Matrix::from_cols(&cols, r as usize + 1, GfElem::ZERO);
            m = kron(k, &m, &factor);
        }
        m
    });
    Ok(rep)
}

/// Torus exponent of the weight with `Sym` digits of `r`, and its label.
pub fn sym_label(k: &GfField, r: u32) -> WeightLabel {
    let n = k.q() - 1;
    if r == 0 {
        WeightLabel { r: 0, j: true }
    } else {
        WeightLabel { r: r % n, j: false }
    }
}

/// The `q` irreducibles as symmetric-power models, `r = 0, …, q−1`.
pub fn serre_weights(k: &GfField) -> Vec<FinRep> {
    (0..k.q())
        .map(|r| {
            let mut rep = sym_model(k, &digits_of(k, r)).expect("digits in range");
            rep.label = Some(sym_label(k, r));
            rep
        })
        .collect()
}

/// Whether `χ_r = χ_r^{w₀}`.
pub fn is_degenerate(k: &GfField, r: u32) -> bool {
    (2 * r).is_multiple_of(k.q() - 1)
}

#[derive(Clone, Debug)]
pub struct Classified {
    pub label: WeightLabel,
    pub image: ThetaImage,
}

/// All `Θ^J(Ind χ)`: `(r, ∅)` for `0 ≤ r ≤ q−2` and `(0, {1})`.
pub fn classify_all(k: &GfField) -> Result<Vec<Classified>> {
    let mut out = Vec::new();
    for r in 0..k.q() - 1 {
        out.push(Classified { label: WeightLabel { r, j: false }, image: theta_image(k, r, false)? });
    }
    out.push(Classified { label: WeightLabel { r: 0, j: true }, image: theta_image(k, 0, true)? });
    Ok(out)
}

/// Checks `ρ(g)ρ(h) = ρ(gh)`.
pub fn is_multiplicative(rep: &FinRep, g: &Mat2k, h: &Mat2k) -> bool {
    let k = rep.field();
    mat_mul(k, &rep.rho(g), &rep.rho(h)) == rep.rho(&g.mul(h, k))
}

/// `Σ_λ u(λ)w₀⁻¹·φ_{χ^{w₀}}` in `Ind χ^{w₀}`.
pub fn t_w0_phi_by_sum(k: &GfField, r: u32) -> Result<Vec<GfElem>> {
    let dst = IndB::new(k, w0_exponent(k, r))?;
    let phi = dst.phi();
    let w0i = Mat2k::w0(k).inv(k);
    let mut acc = vec![GfElem::ZERO; dst.dim()];
    for l in k.elements() {
        let v = dst.rep.act(&Mat2k::u(l).mul(&w0i, k), &phi);
        for (a, b) in acc.iter_mut().zip(v) {
            *a = k.add(*a, b);
        }
    }
    Ok(acc)
}

pub fn is_zero(k: &GfField, v: &[GfElem]) -> bool {
    is_zero_vec(k, v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bruhat_rho_matches_direct_action() {
        let k = GfField::new(3, 1).unwrap();
        let amb = IndU::new(&k);
        let rep = amb.rep();
        for g in Mat2k::all(&k) {
            let direct = {
                let d = amb.dim();
                let mut m = Matrix::filled(d, d, GfElem::ZERO);
                for i in 0..d {
                    let v = amb.point(i);
                    let w = (k.add(k.mul(v.0, g.a), k.mul(v.1, g.c)), k.add(k.mul(v.0, g.b), k.mul(v.1, g.d)));
                    m.set(i, amb.index(w), GfElem::ONE);
                }
                m
            };
            assert_eq!(rep.rho(&g), direct);
        }
    }

    #[test]
    fn theta_dims_q3() {
        let k = GfField::new(3, 1).unwrap();
        assert_eq!(theta_image(&k, 0, false).unwrap().rep.dim(), 3);
        assert_eq!(theta_image(&k, 0, true).unwrap().rep.dim(), 1);
        assert_eq!(theta_image(&k, 1, false).unwrap().rep.dim(), 2);
        assert_eq!(theta_image(&k, 1, true).unwrap_err(), Error::IllegalJ);
    }

    #[test]
    fn sym_dims() {
        let k = GfField::new(2, 2).unwrap();
        assert_eq!(sym_model(&k, &[1, 1]).unwrap().dim(), 4);
        let k3 = GfField::new(3, 1).unwrap();
        assert_eq!(sym_model(&k3, &[2]).unwrap().dim(), 3);
        assert_eq!(sym_model(&k3, &[3]).unwrap_err(), Error::DigitOutOfRange);
    }
}
