//! Even supersymmetric invariant bilinear forms and orthogonal geometry.

use crate::algebra::SuperAlgebra;
use crate::matrix::{svec_is_zero, svec_zero, Matrix, SVec};
use crate::report::{Check, Report};
use crate::scalar::Scalar;
use crate::space::{sign_pp, LinearMap, Subspace, SuperSpace};
use crate::{Error, Result};

/// Gram matrix of a bilinear form on a super space: `G[i][j] = B(e_i, e_j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GramForm {
    space: SuperSpace,
    m: Matrix,
}

impl GramForm {
    pub fn new(space: SuperSpace, m: Matrix) -> Result<GramForm> {
        if m.rows() != space.dim() || m.cols() != space.dim() {
            return Err(Error::DimensionMismatch(format!(
                "Gram matrix {}x{} on space of dimension {}",
                m.rows(),
                m.cols(),
                space.dim()
            )));
        }
        Ok(GramForm { space, m })
    }

    pub fn zero(space: SuperSpace) -> GramForm {
        let n = space.dim();
        GramForm { space, m: Matrix::zeros(n, n) }
    }

    pub fn space(&self) -> &SuperSpace {
        &self.space
    }

    pub fn matrix(&self) -> &Matrix {
        &self.m
    }

    pub fn entry(&self, i: usize, j: usize) -> &Scalar {
        self.m.at(i, j)
    }

    pub fn eval(&self, x: &[Scalar], y: &[Scalar]) -> Scalar {
        let mut out = Scalar::zero();
        for i in 0..self.space.dim() {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..self.space.dim() {
                if y[j].is_zero() || self.m.at(i, j).is_zero() {
                    continue;
                }
                out = &out + &(&(&x[i] * &y[j]) * self.m.at(i, j));
            }
        }
        out
    }

    /// Vanishes between the even and the odd part.
    pub fn is_even(&self) -> Option<(usize, usize)> {
        let n = self.space.dim();
        for i in 0..n {
            for j in 0..n {
                if self.space.parity(i) != self.space.parity(j) && !self.m.at(i, j).is_zero() {
                    return Some((i, j));
                }
            }
        }
        None
    }

    /// Symmetric on the even block, antisymmetric on the odd block.
    pub fn is_supersymmetric(&self) -> Option<(usize, usize)> {
        let n = self.space.dim();
        for i in 0..n {
            for j in 0..n {
                let neg = sign_pp(self.space.parity(i), self.space.parity(j));
                if *self.m.at(i, j) != self.m.at(j, i).clone().times_sign(neg) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    pub fn is_nondegenerate(&self) -> bool {
        !self.m.det().is_zero()
    }

    /// `{x : B(x, s) = 0 for all s in S}`.
    pub fn orthogonal_complement(&self, s: &Subspace) -> Result<Subspace> {
        let rows: Vec<SVec> = s
            .basis_rows()
            .iter()
            .map(|g| {
                (0..self.space.dim())
                    .map(|i| self.eval(&self.space.unit(i), g))
                    .collect()
            })
            .collect();
        if rows.is_empty() {
            return Ok(Subspace::full(&self.space));
        }
        let kernel = Matrix::from_rows(rows).kernel_basis();
        Subspace::from_generators(&self.space, &kernel)
    }

    pub fn is_isotropic(&self, s: &Subspace) -> bool {
        let rows = s.basis_rows();
        for (i, x) in rows.iter().enumerate() {
            for y in rows.iter().skip(i) {
                if !self.eval(x, y).is_zero() {
                    return false;
                }
            }
        }
        true
    }

    /// Radical of the form: vectors orthogonal to everything.
    pub fn radical(&self) -> Result<Subspace> {
        self.orthogonal_complement(&Subspace::full(&self.space))
    }

    /// Restriction to a graded subspace, in its echelon basis.
    pub fn restrict(&self, s: &Subspace) -> Result<GramForm> {
        let rows = s.basis_rows();
        let p = (0..s.dim()).filter(|&r| !s.row_parity(r).is_odd()).count();
        let labels = s.pivots().iter().map(|&i| self.space.label(i).to_string()).collect();
        let sub_space = SuperSpace::with_labels(p, s.dim() - p, labels)?;
        let m = Matrix::from_fn(s.dim(), s.dim(), |i, j| self.eval(&rows[i], &rows[j]));
        GramForm::new(sub_space, m)
    }
}

/// A superalgebra paired with a candidate invariant scalar product.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticSuperAlgebra {
    pub alg: SuperAlgebra,
    pub b: GramForm,
}

impl QuadraticSuperAlgebra {
    pub fn new(alg: SuperAlgebra, b: GramForm) -> Result<Self> {
        if alg.space() != b.space() {
            return Err(Error::DimensionMismatch(
                "form and algebra live on different spaces".into(),
            ));
        }
        Ok(QuadraticSuperAlgebra { alg, b })
    }

    pub fn dim(&self) -> usize {
        self.alg.dim()
    }

    pub fn space(&self) -> &SuperSpace {
        self.alg.space()
    }
}

/// Per-axiom validation of an invariant scalar product: evenness,
/// supersymmetry, the even-dimensional odd part precondition,
/// non-degeneracy, and invariance `B([x,y],z) = B(x,[y,z])`.
pub fn validate_quadratic(alg: &SuperAlgebra, b: &GramForm) -> Report {
    let mut report = Report::new();
    let n = alg.dim();

    report.push(match b.is_even() {
        None => Check::pass("even"),
        Some((i, j)) => Check::fail("even", vec![i, j]),
    });
    report.push(match b.is_supersymmetric() {
        None => Check::pass("supersymmetric"),
        Some((i, j)) => Check::fail("supersymmetric", vec![i, j]),
    });
    // an odd part of odd dimension makes the (antisymmetric) odd block singular
    report.push(if alg.space().odd_dim() % 2 == 0 {
        Check::pass("odd_part_even_dimensional")
    } else {
        Check::fail_msg(
            "odd_part_even_dimensional",
            format!(
                "odd dimension {} is odd, so the odd block is degenerate",
                alg.space().odd_dim()
            ),
        )
    });
    report.push(if b.is_nondegenerate() {
        Check::pass("non_degenerate")
    } else {
        Check::fail_msg("non_degenerate", "Gram determinant vanishes")
    });

    let mut inv = Check::pass("invariant");
    'outer: for i in 0..n {
        for j in 0..n {
            let cij = alg.structure(i, j);
            for k in 0..n {
                // B([e_i,e_j], e_k) = sum_m c[i][j][m] G[m][k]
                let mut lhs = Scalar::zero();
                for (m, coeff) in cij.iter().enumerate() {
                    if !coeff.is_zero() && !b.m.at(m, k).is_zero() {
                        lhs = &lhs + &(coeff * b.m.at(m, k));
                    }
                }
                // B(e_i, [e_j,e_k]) = sum_m c[j][k][m] G[i][m]
                let mut rhs = Scalar::zero();
                for (m, coeff) in alg.structure(j, k).iter().enumerate() {
                    if !coeff.is_zero() && !b.m.at(i, m).is_zero() {
                        rhs = &rhs + &(coeff * b.m.at(i, m));
                    }
                }
                if lhs != rhs {
                    inv = Check::fail("invariant", vec![i, j, k]);
                    break 'outer;
                }
            }
        }
    }
    report.push(inv);
    report
}

/// Non-degenerate form induced on the quotient `Iperp/I` by an isotropic
/// ideal inside its orthogonal. Returns the form on the deterministic
/// quotient basis together with the ambient lifts of that basis.
pub fn induced_quotient_form(
    b: &GramForm,
    iperp: &Subspace,
    i: &Subspace,
) -> Result<(GramForm, Vec<SVec>)> {
    if !b.is_isotropic(i) {
        return Err(Error::Validation("ideal is not isotropic".into()));
    }
    if !iperp.contains_subspace(i) {
        return Err(Error::Validation("I is not contained in I^perp".into()));
    }
    let sub_rows = iperp.basis_rows();
    let p = (0..iperp.dim()).filter(|&r| !iperp.row_parity(r).is_odd()).count();
    let labels = iperp.pivots().iter().map(|&c| b.space().label(c).to_string()).collect();
    let sub_space = SuperSpace::with_labels(p, iperp.dim() - p, labels)?;
    let i_in_sub: Vec<SVec> = i
        .basis_rows()
        .iter()
        .map(|v| {
            iperp
                .coords_of(v)
                .ok_or_else(|| Error::Validation("I not inside I^perp".into()))
        })
        .collect::<Result<_>>()?;
    let i_sub = Subspace::from_generators(&sub_space, &i_in_sub)?;
    let comp = i_sub.complement_coords();
    let lifts: Vec<SVec> = comp.iter().map(|&c| sub_rows[c].clone()).collect();
    let qp = comp.iter().filter(|&&c| !sub_space.parity(c).is_odd()).count();
    let qlabels = comp.iter().map(|&c| sub_space.label(c).to_string()).collect();
    let qspace = SuperSpace::with_labels(qp, comp.len() - qp, qlabels)?;
    let m = Matrix::from_fn(comp.len(), comp.len(), |x, y| b.eval(&lifts[x], &lifts[y]));
    Ok((GramForm::new(qspace, m)?, lifts))
}

/// Signed antisymmetry B(Dx, y) = -(-1)^{|D||x|} B(x, Dy) on basis pairs.
pub fn is_antisymmetric_derivation(alg: &SuperAlgebra, b: &GramForm, d: &LinearMap) -> bool {
    let n = alg.dim();
    let sp = alg.space();
    for i in 0..n {
        let di = d.apply(&sp.unit(i));
        let neg = !sign_pp(d.parity(), sp.parity(i));
        for j in 0..n {
            let lhs = b.eval(&di, &sp.unit(j));
            let rhs = b.eval(&sp.unit(i), &d.apply(&sp.unit(j))).times_sign(neg);
            if lhs != rhs {
                return false;
            }
        }
    }
    true
}

/// Index pairs carrying the independent components of an even supersymmetric
/// form: (i, j) with i <= j on the even block, i < j on the odd block.
fn symmetric_unknowns(space: &SuperSpace) -> Vec<(usize, usize)> {
    let n = space.dim();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i..n {
            if space.parity(i) != space.parity(j) {
                continue;
            }
            if i == j && space.parity(i).is_odd() {
                continue;
            }
            out.push((i, j));
        }
    }
    out
}

fn form_from_unknowns(
    space: &SuperSpace,
    unknowns: &[(usize, usize)],
    values: &[Scalar],
) -> GramForm {
    let n = space.dim();
    let mut m = Matrix::zeros(n, n);
    for (idx, &(i, j)) in unknowns.iter().enumerate() {
        m.set(i, j, values[idx].clone());
        if i != j {
            let neg = sign_pp(space.parity(i), space.parity(j));
            m.set(j, i, values[idx].clone().times_sign(neg));
        }
    }
    GramForm::new(space.clone(), m).unwrap()
}

/// Basis of the linear space of even supersymmetric invariant bilinear forms.
pub fn invariant_form_space(alg: &SuperAlgebra) -> Result<Vec<GramForm>> {
    let n = alg.dim();
    let sp = alg.space();
    let unknowns = symmetric_unknowns(sp);
    let mut unknown_index = std::collections::HashMap::new();
    for (idx, &(i, j)) in unknowns.iter().enumerate() {
        unknown_index.insert((i, j), idx);
    }
    let col_of = |a: usize, bb: usize| -> Option<(usize, bool)> {
        if sp.parity(a) != sp.parity(bb) {
            return None; // structurally zero
        }
        if a == bb && sp.parity(a).is_odd() {
            return None;
        }
        let (i, j, swapped) = if a <= bb { (a, bb, false) } else { (bb, a, true) };
        let idx = unknown_index[&(i, j)];
        let neg = swapped && sign_pp(sp.parity(a), sp.parity(bb));
        Some((idx, neg))
    };

    let mut rows: Vec<SVec> = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                // sum_m c[i][j][m] G[m][k] - sum_m c[j][k][m] G[i][m] = 0
                let mut row = svec_zero(unknowns.len());
                let mut touched = false;
                for m in 0..n {
                    let cij = &alg.structure(i, j)[m];
                    if !cij.is_zero() {
                        if let Some((idx, neg)) = col_of(m, k) {
                            row[idx] = &row[idx] + &cij.clone().times_sign(neg);
                            touched = true;
                        }
                    }
                    let cjk = &alg.structure(j, k)[m];
                    if !cjk.is_zero() {
                        if let Some((idx, neg)) = col_of(i, m) {
                            row[idx] = &row[idx] - &cjk.clone().times_sign(neg);
                            touched = true;
                        }
                    }
                }
                if touched && !svec_is_zero(&row) {
                    rows.push(row);
                }
            }
        }
    }
    let solutions = if rows.is_empty() {
        (0..unknowns.len())
            .map(|k| {
                let mut v = svec_zero(unknowns.len());
                v[k] = Scalar::one();
                v
            })
            .collect()
    } else {
        Matrix::from_rows(rows).kernel_basis()
    };
    Ok(solutions
        .into_iter()
        .map(|vals| form_from_unknowns(sp, &unknowns, &vals))
        .collect())
}

/// Why no invariant scalar product exists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NoFormCertificate {
    /// The odd part has odd dimension, so every even supersymmetric form is
    /// degenerate on the odd block.
    OddPartOddDimension,
    /// The space of invariant even supersymmetric forms is zero.
    EmptyFormSpace,
    /// A nonzero vector orthogonal to the whole algebra under every
    /// invariant form.
    CommonRadical(SVec),
    /// The Gram determinant vanished on a full grid with more values per
    /// axis than its degree, so it is identically zero.
    DeterminantVanishesOnGrid { per_axis: usize, axes: usize },
}

#[derive(Clone, Debug)]
pub enum FormSearch {
    Yes(GramForm),
    No(NoFormCertificate),
}

/// Decides whether the algebra admits an invariant scalar product.
///
/// "No" answers are certificates: either a structural obstruction, or the
/// determinant polynomial of the generic invariant form vanishing on a full
/// integer grid exceeding its degree on every line.
pub fn has_invariant_scalar_product(alg: &SuperAlgebra) -> Result<FormSearch> {
    let n = alg.dim();
    if n == 0 {
        return Ok(FormSearch::Yes(GramForm::zero(alg.space().clone())));
    }
    if alg.space().odd_dim() % 2 == 1 {
        return Ok(FormSearch::No(NoFormCertificate::OddPartOddDimension));
    }
    let basis = invariant_form_space(alg)?;
    if basis.is_empty() {
        return Ok(FormSearch::No(NoFormCertificate::EmptyFormSpace));
    }
    // common radical: a vector killed by every basis form kills every
    // combination, so the determinant vanishes identically
    let mut stacked = basis[0].matrix().clone();
    for g in &basis[1..] {
        stacked = stacked.vstack(g.matrix());
    }
    if let Some(v) = stacked.kernel_basis().into_iter().next() {
        return Ok(FormSearch::No(NoFormCertificate::CommonRadical(v)));
    }
    // deterministic grid: n+1 values per axis beats the degree-n determinant
    // polynomial on every line, so vanishing everywhere proves det == 0
    let m = basis.len();
    let per_axis = n + 1;
    let mut point = vec![0usize; m];
    loop {
        if point.iter().any(|&t| t != 0) {
            let mut g = Matrix::zeros(n, n);
            for (idx, &t) in point.iter().enumerate() {
                if t != 0 {
                    g = g.add(&basis[idx].matrix().scale(&Scalar::from_int(t as i64)));
                }
            }
            if !g.det().is_zero() {
                return Ok(FormSearch::Yes(GramForm::new(alg.space().clone(), g)?));
            }
        }
        let mut idx = 0;
        loop {
            if idx == m {
                return Ok(FormSearch::No(NoFormCertificate::DeterminantVanishesOnGrid {
                    per_axis,
                    axes: m,
                }));
            }
            point[idx] += 1;
            if point[idx] < per_axis {
                break;
            }
            point[idx] = 0;
            idx += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::validate_superalgebra;

    fn sv(v: Vec<i64>) -> SVec {
        v.into_iter().map(Scalar::from_int).collect()
    }

    fn heisenberg3() -> SuperAlgebra {
        let sp = SuperSpace::with_labels(3, 0, vec!["x".into(), "y".into(), "z".into()]).unwrap();
        SuperAlgebra::from_brackets(sp, &[(0, 1, sv(vec![0, 0, 1]))]).unwrap()
    }

    #[test]
    fn identity_form_on_trivial_algebra() {
        let alg = SuperAlgebra::abelian(SuperSpace::new(1, 0));
        let g = GramForm::new(alg.space().clone(), Matrix::identity(1)).unwrap();
        assert!(validate_quadratic(&alg, &g).all_passed());
    }

    #[test]
    fn heisenberg_identity_form_fails_invariance_with_witness() {
        let h = heisenberg3();
        let g = GramForm::new(h.space().clone(), Matrix::identity(3)).unwrap();
        let rep = validate_quadratic(&h, &g);
        assert!(!rep.all_passed());
        let inv = rep.check("invariant").unwrap();
        assert!(!inv.passed);
        // B([x,y],z) = B(z,z) = 1 but B(x,[y,z]) = 0
        assert_eq!(inv.witness, Some(vec![0, 1, 2]));
    }

    #[test]
    fn orthogonal_complement_dims_and_involution() {
        let sp = SuperSpace::new(2, 2);
        // hyperbolic even block, symplectic odd block
        let mut m = Matrix::zeros(4, 4);
        m.set(0, 1, Scalar::one());
        m.set(1, 0, Scalar::one());
        m.set(2, 3, Scalar::one());
        m.set(3, 2, -Scalar::one());
        let g = GramForm::new(sp.clone(), m).unwrap();
        assert!(g.is_even().is_none());
        assert!(g.is_supersymmetric().is_none());
        assert!(g.is_nondegenerate());
        let s = Subspace::from_generators(&sp, &[sv(vec![1, 0, 0, 0]), sv(vec![0, 0, 1, 0])])
            .unwrap();
        let perp = g.orthogonal_complement(&s).unwrap();
        assert_eq!(perp.dim(), 2);
        assert!(g.is_isotropic(&s));
        let back = g.orthogonal_complement(&perp).unwrap();
        assert_eq!(back, s);
        assert_eq!(g.orthogonal_complement(&Subspace::zero(&sp)).unwrap().dim(), 4);
    }

    #[test]
    fn invariant_form_space_of_heisenberg_has_z_in_radical() {
        let h = heisenberg3();
        let basis = invariant_form_space(&h).unwrap();
        assert_eq!(basis.len(), 3);
        for g in &basis {
            let rep = validate_quadratic(&h, g);
            assert!(rep.check("invariant").unwrap().passed);
            assert!(rep.check("even").unwrap().passed);
            assert!(rep.check("supersymmetric").unwrap().passed);
            for k in 0..3 {
                assert!(g.eval(&sv(vec![0, 0, 1]), &h.space().unit(k)).is_zero());
            }
        }
        match has_invariant_scalar_product(&h).unwrap() {
            FormSearch::No(NoFormCertificate::CommonRadical(v)) => {
                assert!(!svec_is_zero(&v));
            }
            other => panic!("expected radical certificate, got {other:?}"),
        }
    }

    #[test]
    fn abelian_always_has_a_scalar_product() {
        for (p, q) in [(1usize, 0usize), (2, 0), (2, 2), (0, 2)] {
            let alg = SuperAlgebra::abelian(SuperSpace::new(p, q));
            assert!(validate_superalgebra(&alg).all_passed());
            match has_invariant_scalar_product(&alg).unwrap() {
                FormSearch::Yes(g) => {
                    assert!(validate_quadratic(&alg, &g).all_passed());
                }
                FormSearch::No(c) => panic!("abelian ({p}|{q}) reported no: {c:?}"),
            }
        }
        // odd part of odd dimension: structural no
        let alg = SuperAlgebra::abelian(SuperSpace::new(1, 1));
        match has_invariant_scalar_product(&alg).unwrap() {
            FormSearch::No(NoFormCertificate::OddPartOddDimension) => {}
            other => panic!("expected parity obstruction, got {other:?}"),
        }
    }

    #[test]
    fn antisymmetric_derivation_checks() {
        let sp = SuperSpace::new(1, 0);
        let alg = SuperAlgebra::abelian(sp.clone());
        let g = GramForm::new(sp.clone(), Matrix::identity(1)).unwrap();
        let id = LinearMap::identity(sp);
        assert!(!is_antisymmetric_derivation(&alg, &g, &id));
        let zero = id.scale(&Scalar::zero());
        assert!(is_antisymmetric_derivation(&alg, &g, &zero));
    }
}
