use modrep_core::finrep::{
    classify_all, digits_of, find_iso, sym_model, t_w0_eigenvalue, t_w0_matrix, t_w0_phi_by_sum, theta_image, IndB,
};
use modrep_core::linalg::{is_zero_matrix, mat_add, mat_mul, mat_vec, rank, Field};
use modrep_core::GfElem;

use super::{field, join, Cases};
use crate::SuiteConfig;

pub(super) fn run(cfg: &SuiteConfig, out: &mut Cases) {
    let k = field(cfg);
    let q = k.q();

    out.check("classification", "§3", || {
        let all = classify_all(&k)?;
        let mut ok = all.len() == q as usize;
        for c in &all {
            ok &= c.image.rep.is_irreducible()?;
        }
        for (i, a) in all.iter().enumerate() {
            for b in &all[i + 1..] {
                ok &= find_iso(&a.image.rep, &b.image.rep).is_none();
            }
        }
        let mut dims: Vec<usize> = all.iter().map(|c| c.image.rep.dim()).collect();
        dims.sort();
        Ok((ok, format!("{} irreducibles, pairwise non-isomorphic, dims [{}]", all.len(), join(dims))))
    });

    out.check("u-fixed-lines", "§3", || {
        let all = classify_all(&k)?;
        let dims: Vec<usize> = all.iter().map(|c| c.image.rep.u_invariants().len()).collect();
        Ok((dims.iter().all(|&d| d == 1), format!("dim V^U per weight [{}]", join(dims))))
    });

    out.check("tw0-square", "§3", || {
        let mut ok = true;
        for r in 0..q - 1 {
            let t = t_w0_matrix(&k, r)?;
            let back = t_w0_matrix(&k, (q - 1 - r) % (q - 1))?;
            let sq = mat_mul(&k, &back, &t);
            ok &= if r == 0 { is_zero_matrix(&k, &mat_add(&k, &sq, &t)) } else { is_zero_matrix(&k, &sq) };
        }
        Ok((ok, format!("T_w0^2 = -T_w0 at r=0 and 0 for r=1..{}", q - 2)))
    });

    out.check("tw0-coset-sum", "§3", || {
        let mut ok = true;
        for r in 0..q - 1 {
            let ind = IndB::new(&k, r)?;
            ok &= mat_vec(&k, &t_w0_matrix(&k, r)?, &ind.phi()) == t_w0_phi_by_sum(&k, r)?;
        }
        Ok((ok, format!("matrix and coset sum agree on phi for {} characters", q - 1)))
    });

    out.check("steinberg-is-twisted-sym", "§3", || {
        let st = theta_image(&k, 0, false)?;
        let sym = sym_model(&k, &vec![k.p() - 1; k.e() as usize])?;
        let Some(x) = find_iso(&st.rep, &sym) else {
            return Ok((false, "no intertwiner found".into()));
        };
        let mut ok = rank(&k, &x) == st.rep.dim();
        for g in st.rep.generators() {
            ok &= mat_mul(&k, &x, &st.rep.rho(&g)) == mat_mul(&k, &sym.rho(&g), &x);
        }
        Ok((ok, format!("intertwiner of rank {} checked on generators", rank(&k, &x))))
    });

    out.check("sym-models", "§3", || {
        let mut ok = true;
        for r in 1..q - 1 {
            let img = theta_image(&k, r, false)?;
            ok &= find_iso(&img.rep, &sym_model(&k, &digits_of(&k, r))?).is_some();
        }
        Ok((ok, format!("Theta(Ind chi_r) matches Sym model for r=1..{}", q - 2)))
    });

    out.check("tw0-eigenvalues", "§3", || {
        let mut ok = true;
        let mut seen = Vec::new();
        for c in classify_all(&k)? {
            let ev = t_w0_eigenvalue(&k, &c.image);
            let want = if c.label.r == 0 && !c.label.j { k.neg(GfElem::ONE) } else { GfElem::ZERO };
            ok &= ev == Some(want);
            seen.push(format!("{}:{}", c.label, ev.map_or("-".into(), |e| k.format_elem(e))));
        }
        Ok((ok, seen.join(" ")))
    });
}
