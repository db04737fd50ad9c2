//! Lie superalgebras from structure constants: validation, ideals, series,
//! centers, quotients, superderivations and representations.

use crate::matrix::{svec_is_zero, svec_zero, Matrix, SVec};
use crate::report::{Check, Report};
use crate::scalar::Scalar;
use crate::space::{sign_pp, LinearMap, Parity, Subspace, SuperSpace};
use crate::{Error, Result};

/// A finite-dimensional superalgebra given by its structure-constant tensor:
/// `[e_i, e_j] = sum_k c[i][j][k] e_k`.
///
/// Construction does not validate the Lie axioms; run [`validate_superalgebra`]
/// to obtain a per-axiom report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuperAlgebra {
    space: SuperSpace,
    c: Vec<Vec<SVec>>,
}

impl SuperAlgebra {
    pub fn new(space: SuperSpace, c: Vec<Vec<SVec>>) -> Result<SuperAlgebra> {
        let n = space.dim();
        if c.len() != n || c.iter().any(|ci| ci.len() != n || ci.iter().any(|v| v.len() != n)) {
            return Err(Error::DimensionMismatch(format!(
                "structure tensor must be {n}x{n}x{n}"
            )));
        }
        Ok(SuperAlgebra { space, c })
    }

    pub fn abelian(space: SuperSpace) -> SuperAlgebra {
        let n = space.dim();
        SuperAlgebra { space, c: vec![vec![svec_zero(n); n]; n] }
    }

    /// Builds the tensor from a sparse list of brackets `[e_i, e_j] = v`
    /// with `i <= j`, filling the super-antisymmetric counterpart.
    pub fn from_brackets(
        space: SuperSpace,
        entries: &[(usize, usize, SVec)],
    ) -> Result<SuperAlgebra> {
        let n = space.dim();
        let mut c = vec![vec![svec_zero(n); n]; n];
        for (i, j, v) in entries {
            let (i, j) = (*i, *j);
            if i >= n || j >= n || v.len() != n {
                return Err(Error::DimensionMismatch(format!("bracket entry ({i},{j})")));
            }
            if i > j {
                return Err(Error::Other(format!("bracket entry ({i},{j}) must have i <= j")));
            }
            c[i][j] = v.clone();
            if i != j {
                let neg = sign_pp(space.parity(i), space.parity(j));
                c[j][i] = v.iter().map(|s| (-s).times_sign(neg)).collect();
            }
        }
        SuperAlgebra::new(space, c)
    }

    pub fn space(&self) -> &SuperSpace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn structure(&self, i: usize, j: usize) -> &SVec {
        &self.c[i][j]
    }

    pub fn tensor(&self) -> &Vec<Vec<SVec>> {
        &self.c
    }

    /// Bilinear evaluation of the bracket on coordinate vectors.
    pub fn bracket_eval(&self, x: &[Scalar], y: &[Scalar]) -> Result<SVec> {
        let n = self.dim();
        if x.len() != n || y.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "bracket arguments of length {}/{} in dimension {n}",
                x.len(),
                y.len()
            )));
        }
        let mut out = svec_zero(n);
        for i in 0..n {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if y[j].is_zero() {
                    continue;
                }
                let coeff = &x[i] * &y[j];
                for k in 0..n {
                    let s = &self.c[i][j][k];
                    if !s.is_zero() {
                        out[k] = &out[k] + &(&coeff * s);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Matrix of `y -> [x, y]` for homogeneous `x`.
    pub fn adjoint(&self, x: &[Scalar]) -> Result<LinearMap> {
        let parity = self.space.vector_parity(x)?;
        let n = self.dim();
        let mut m = Matrix::zeros(n, n);
        for j in 0..n {
            let col = self.bracket_eval(x, &self.space.unit(j))?;
            for k in 0..n {
                m.set(k, j, col[k].clone());
            }
        }
        LinearMap::new(self.space.clone(), self.space.clone(), parity, m)
    }

    /// Span of all brackets [a, b], a in A, b in B.
    pub fn bracket_span(&self, a: &Subspace, b: &Subspace) -> Result<Subspace> {
        let mut gens = Vec::new();
        for x in a.basis_rows() {
            for y in b.basis_rows() {
                gens.push(self.bracket_eval(&x, &y)?);
            }
        }
        Subspace::from_generators(&self.space, &gens)
    }

    pub fn derived_subalgebra(&self) -> Result<Subspace> {
        let full = Subspace::full(&self.space);
        self.bracket_span(&full, &full)
    }
}

/// Checks parity homogeneity, super antisymmetry and the super Jacobi
/// identity on all basis triples. Failures carry the lexicographically
/// smallest violating index tuple.
pub fn validate_superalgebra(alg: &SuperAlgebra) -> Report {
    let n = alg.dim();
    let sp = alg.space();
    let mut report = Report::new();

    let mut parity_check = Check::pass("parity_homogeneity");
    'parity: for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if !alg.c[i][j][k].is_zero()
                    && sp.parity(k) != sp.parity(i).plus(sp.parity(j))
                {
                    parity_check = Check::fail("parity_homogeneity", vec![i, j, k]);
                    break 'parity;
                }
            }
        }
    }
    report.push(parity_check);

    let mut antisym = Check::pass("super_antisymmetry");
    'anti: for i in 0..n {
        for j in i..n {
            let neg = sign_pp(sp.parity(i), sp.parity(j));
            for k in 0..n {
                let expected = (-&alg.c[j][i][k]).times_sign(neg);
                if alg.c[i][j][k] != expected {
                    antisym = Check::fail("super_antisymmetry", vec![i, j, k]);
                    break 'anti;
                }
            }
        }
    }
    report.push(antisym);

    // sum_cyclic (-1)^{|i||k|} [[e_i, e_j], e_k] = 0
    let mut jacobi = Check::pass("super_jacobi");
    'jac: for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let mut total = svec_zero(n);
                for (a, b, c) in [(i, j, k), (j, k, i), (k, i, j)] {
                    let neg = sign_pp(sp.parity(a), sp.parity(c));
                    let inner = alg.structure(a, b);
                    for m in 0..n {
                        if inner[m].is_zero() {
                            continue;
                        }
                        let outer = alg.structure(m, c);
                        for t in 0..n {
                            if outer[t].is_zero() {
                                continue;
                            }
                            let term = (&inner[m] * &outer[t]).times_sign(neg);
                            total[t] = &total[t] + &term;
                        }
                    }
                }
                if !svec_is_zero(&total) {
                    jacobi = Check::fail("super_jacobi", vec![i, j, k]);
                    break 'jac;
                }
            }
        }
    }
    report.push(jacobi);
    report
}

/// Derived and lower central series, with solvability/nilpotency flags.
#[derive(Clone, Debug)]
pub struct SeriesResult {
    pub derived: Vec<Subspace>,
    pub lower_central: Vec<Subspace>,
    pub is_solvable: bool,
    pub is_nilpotent: bool,
}

/// Both series start at the first bracket term `[g, g]` and run until
/// stabilization; an abelian algebra therefore has series `[{0}]` of length 1.
pub fn derived_and_central_series(alg: &SuperAlgebra) -> Result<SeriesResult> {
    let full = Subspace::full(alg.space());
    let first = alg.bracket_span(&full, &full)?;
    let mut derived = vec![first.clone()];
    loop {
        let last = derived.last().unwrap();
        let next = alg.bracket_span(last, last)?;
        if next.dim() == last.dim() {
            break;
        }
        derived.push(next);
    }
    let mut lower = vec![first];
    loop {
        let last = lower.last().unwrap();
        let next = alg.bracket_span(&full, last)?;
        if next.dim() == last.dim() {
            break;
        }
        lower.push(next);
    }
    let is_solvable = derived.last().unwrap().is_zero();
    let is_nilpotent = lower.last().unwrap().is_zero();
    Ok(SeriesResult { derived, lower_central: lower, is_solvable, is_nilpotent })
}

/// Kernel of the joint adjoint action.
pub fn center(alg: &SuperAlgebra) -> Result<Subspace> {
    centralizer(alg, &Subspace::full(alg.space()))
}

/// {x : [x, s] = 0 for all s in I}.
pub fn centralizer(alg: &SuperAlgebra, ideal: &Subspace) -> Result<Subspace> {
    let n = alg.dim();
    // Stack the constraint rows: for each basis vector s of I and output
    // coordinate k, the map x -> [x, s]_k is linear in x.
    let mut rows = Vec::new();
    for s in ideal.basis_rows() {
        for k in 0..n {
            let mut row = svec_zero(n);
            for i in 0..n {
                // coefficient of x_i in [x, s]_k
                let mut coeff = Scalar::zero();
                for j in 0..n {
                    if !s[j].is_zero() && !alg.c[i][j][k].is_zero() {
                        coeff = &coeff + &(&s[j] * &alg.c[i][j][k]);
                    }
                }
                row[i] = coeff;
            }
            rows.push(row);
        }
    }
    if rows.is_empty() {
        return Ok(Subspace::full(alg.space()));
    }
    let kernel = Matrix::from_rows(rows).kernel_basis();
    Subspace::from_generators(alg.space(), &kernel)
}

pub fn is_graded_ideal(alg: &SuperAlgebra, sub: &Subspace) -> Result<bool> {
    let full = Subspace::full(alg.space());
    let span = alg.bracket_span(&full, sub)?;
    Ok(sub.contains_subspace(&span))
}

/// Restricts the algebra to a bracket-closed graded subspace.
///
/// Returns the algebra on the echelon basis of `sub` together with the
/// inclusion map into the ambient algebra.
pub fn subalgebra_on(alg: &SuperAlgebra, sub: &Subspace) -> Result<(SuperAlgebra, LinearMap)> {
    let rows = sub.basis_rows();
    let p = rows.iter().enumerate().filter(|(r, _)| !sub.row_parity(*r).is_odd()).count();
    let q = rows.len() - p;
    let labels = sub
        .pivots()
        .iter()
        .map(|&piv| alg.space().label(piv).to_string())
        .collect();
    let space = SuperSpace::with_labels(p, q, labels)?;
    let dim = rows.len();
    let mut c = vec![vec![svec_zero(dim); dim]; dim];
    for i in 0..dim {
        for j in 0..dim {
            let br = alg.bracket_eval(&rows[i], &rows[j])?;
            let coords = sub.coords_of(&br).ok_or_else(|| {
                Error::Validation("subspace is not closed under the bracket".into())
            })?;
            c[i][j] = coords;
        }
    }
    let inclusion = LinearMap::new(
        space.clone(),
        alg.space().clone(),
        Parity::Even,
        sub.basis_matrix().transpose(),
    )?;
    Ok((SuperAlgebra::new(space, c)?, inclusion))
}

/// Quotient by a graded ideal, on the deterministic complement basis
/// (standard basis vectors at the non-pivot coordinates of the ideal).
pub fn quotient_algebra(
    alg: &SuperAlgebra,
    ideal: &Subspace,
) -> Result<(SuperAlgebra, LinearMap)> {
    if !is_graded_ideal(alg, ideal)? {
        return Err(Error::NotAnIdeal("quotient divisor".into()));
    }
    let comp = ideal.complement_coords();
    let p = comp.iter().filter(|&&i| !alg.space().parity(i).is_odd()).count();
    let q = comp.len() - p;
    let labels = comp.iter().map(|&i| alg.space().label(i).to_string()).collect();
    let qspace = SuperSpace::with_labels(p, q, labels)?;
    let dim = comp.len();

    // projection: reduce mod ideal, then read complement coordinates
    let project = |v: &[Scalar]| -> SVec {
        let red = ideal.reduce(v);
        comp.iter().map(|&i| red[i].clone()).collect()
    };

    let mut c = vec![vec![svec_zero(dim); dim]; dim];
    for (a, &i) in comp.iter().enumerate() {
        for (b, &j) in comp.iter().enumerate() {
            c[a][b] = project(alg.structure(i, j));
        }
    }
    let n = alg.dim();
    let mut proj_matrix = Matrix::zeros(dim, n);
    for j in 0..n {
        let col = project(&alg.space().unit(j));
        for (r, val) in col.into_iter().enumerate() {
            proj_matrix.set(r, j, val);
        }
    }
    let projection = LinearMap::new(alg.space().clone(), qspace.clone(), Parity::Even, proj_matrix)?;
    Ok((SuperAlgebra::new(qspace, c)?, projection))
}

/// Signed Leibniz rule D[x,y] = [Dx,y] + (-1)^{|D||x|}[x,Dy] on basis pairs.
pub fn is_superderivation(alg: &SuperAlgebra, d: &LinearMap) -> Result<bool> {
    let n = alg.dim();
    let sp = alg.space();
    if d.domain().dim() != n || d.codomain().dim() != n {
        return Err(Error::DimensionMismatch("derivation on wrong space".into()));
    }
    for i in 0..n {
        for j in 0..n {
            let lhs = d.apply(alg.structure(i, j));
            let dx_y = alg.bracket_eval(&d.apply(&sp.unit(i)), &sp.unit(j))?;
            let x_dy = alg.bracket_eval(&sp.unit(i), &d.apply(&sp.unit(j)))?;
            let neg = sign_pp(d.parity(), sp.parity(i));
            for k in 0..n {
                let rhs = &dx_y[k] + &x_dy[k].clone().times_sign(neg);
                if lhs[k] != rhs {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// A representation: for each basis element a map of matching parity on the
/// module space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Representation {
    pub algebra: SuperAlgebra,
    pub module: SuperSpace,
    pub rho: Vec<LinearMap>,
}

impl Representation {
    pub fn new(algebra: SuperAlgebra, module: SuperSpace, rho: Vec<LinearMap>) -> Result<Self> {
        if rho.len() != algebra.dim() {
            return Err(Error::DimensionMismatch("one action map per basis element".into()));
        }
        for (i, r) in rho.iter().enumerate() {
            if r.parity() != algebra.space().parity(i) {
                return Err(Error::Validation(format!(
                    "rho(e_{i}) must have parity of e_{i}"
                )));
            }
            if r.domain().dim() != module.dim() || r.codomain().dim() != module.dim() {
                return Err(Error::DimensionMismatch(format!("rho(e_{i}) shape")));
            }
        }
        Ok(Representation { algebra, module, rho })
    }

    /// Action of an arbitrary algebra vector.
    pub fn act(&self, x: &[Scalar]) -> LinearMap {
        let mut m = Matrix::zeros(self.module.dim(), self.module.dim());
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            m = m.add(&self.rho[i].matrix().scale(xi));
        }
        // parity bookkeeping only valid for homogeneous x; callers ensure it
        let parity = self.algebra.space().vector_parity(x).unwrap_or(Parity::Even);
        LinearMap::new(self.module.clone(), self.module.clone(), parity, m)
            .unwrap_or_else(|_| panic!("action of non-homogeneous vector"))
    }

    pub fn trivial(algebra: SuperAlgebra, module: SuperSpace) -> Representation {
        let rho = (0..algebra.dim())
            .map(|i| {
                LinearMap::zero(module.clone(), module.clone(), algebra.space().parity(i))
            })
            .collect();
        Representation { algebra, module, rho }
    }
}

/// The adjoint representation of an algebra on itself.
pub fn adjoint_representation(alg: &SuperAlgebra) -> Result<Representation> {
    let rho = (0..alg.dim())
        .map(|i| alg.adjoint(&alg.space().unit(i)))
        .collect::<Result<Vec<_>>>()?;
    Representation::new(alg.clone(), alg.space().clone(), rho)
}

/// rho([x,y]) = rho(x)rho(y) - (-1)^{|x||y|} rho(y)rho(x) on basis pairs.
pub fn validate_representation(rep: &Representation) -> Report {
    let mut report = Report::new();
    let alg = &rep.algebra;
    let n = alg.dim();
    let mut check = Check::pass("representation_bracket");
    'outer: for i in 0..n {
        for j in 0..n {
            let lhs = rep.act(alg.structure(i, j));
            let rhs = rep.rho[i].supercommutator(&rep.rho[j]);
            if lhs.matrix() != rhs.matrix() {
                check = Check::fail("representation_bracket", vec![i, j]);
                break 'outer;
            }
        }
    }
    report.push(check);
    report
}

/// The contragredient module: rho*(x) f = -(-1)^{|x||f|} f o rho(x),
/// realized on the dual basis as a signed supertranspose.
pub fn dual_representation(rep: &Representation) -> Result<Representation> {
    let md = rep.module.dim();
    let dual_space = SuperSpace::with_labels(
        rep.module.even_dim(),
        rep.module.odd_dim(),
        rep.module.labels().iter().map(|l| format!("{l}*")).collect(),
    )?;
    let mut dual_rho = Vec::with_capacity(rep.rho.len());
    for (i, r) in rep.rho.iter().enumerate() {
        let mut m = Matrix::zeros(md, md);
        for a in 0..md {
            for b in 0..md {
                // rho*(e_i) v_b* = sum_a -(-1)^{|i||b|} R[b][a] v_a*
                let neg = !sign_pp(rep.algebra.space().parity(i), rep.module.parity(b));
                let val = r.matrix().at(b, a).clone().times_sign(neg);
                m.set(a, b, val);
            }
        }
        dual_rho.push(LinearMap::new(
            dual_space.clone(),
            dual_space.clone(),
            rep.algebra.space().parity(i),
            m,
        )?);
    }
    Representation::new(rep.algebra.clone(), dual_space, dual_rho)
}

/// The canonical even identification V -> V**: +1 on the even part,
/// -1 on the odd part. Conjugating the double dual by it gives back the
/// original matrices.
pub fn double_dual_identification(module: &SuperSpace) -> LinearMap {
    let n = module.dim();
    let mut m = Matrix::zeros(n, n);
    for i in 0..n {
        let v = Scalar::one().times_sign(module.parity(i).is_odd());
        m.set(i, i, v);
    }
    LinearMap::new(module.clone(), module.clone(), Parity::Even, m).unwrap()
}
