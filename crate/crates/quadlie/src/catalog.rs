//! Named example algebras: the block-triangular family g(n) inside gl(n,n),
//! its T*-extensions E_n, the 7-dimensional double extension communicated by
//! Duflo, the Cartan superalgebra W(n) = Der(Lambda K^n), and small standard
//! fixtures.

use crate::algebra::SuperAlgebra;
use crate::cochain::DualValued2Cochain;
use crate::extend::{classical_double_extension, tstar_extension};
use crate::form::{GramForm, QuadraticSuperAlgebra};
use crate::matrix::{svec_zero, Matrix};
use crate::scalar::Scalar;
use crate::space::{LinearMap, Parity, SuperSpace};
use crate::{Error, Result};

/// A catalog member: some entries carry their invariant scalar product.
#[derive(Clone, Debug)]
pub enum CatalogItem {
    Plain(SuperAlgebra),
    Quadratic(QuadraticSuperAlgebra),
}

impl CatalogItem {
    pub fn algebra(&self) -> &SuperAlgebra {
        match self {
            CatalogItem::Plain(a) => a,
            CatalogItem::Quadratic(q) => &q.alg,
        }
    }

    pub fn quadratic(&self) -> Option<&QuadraticSuperAlgebra> {
        match self {
            CatalogItem::Plain(_) => None,
            CatalogItem::Quadratic(q) => Some(q),
        }
    }
}

// --------------------------------------------------------------------------
// g(n) inside gl(n, n)
// --------------------------------------------------------------------------

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
struct GnBasis {
    /// row and column in the 2n x 2n realization
    row: usize,
    col: usize,
    parity: Parity,
}

fn gn_basis(n: usize) -> Vec<(String, GnBasis)> {
    let mut out = Vec::new();
    // even: A block (strict upper of top-left), then D block (strict upper
    // of bottom-right)
    for i in 0..n {
        for j in i + 1..n {
            out.push((
                format!("a{}{}", i + 1, j + 1),
                GnBasis { row: i, col: j, parity: Parity::Even },
            ));
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            out.push((
                format!("d{}{}", i + 1, j + 1),
                GnBasis { row: n + i, col: n + j, parity: Parity::Even },
            ));
        }
    }
    // odd: B block (upper triangular incl. diagonal of top-right), then C
    // block (strict upper of bottom-left)
    for i in 0..n {
        for j in i..n {
            out.push((
                format!("b{}{}", i + 1, j + 1),
                GnBasis { row: i, col: n + j, parity: Parity::Odd },
            ));
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            out.push((
                format!("c{}{}", i + 1, j + 1),
                GnBasis { row: n + i, col: j, parity: Parity::Odd },
            ));
        }
    }
    out
}

/// The nilpotent Lie superalgebra g(n) of block matrices [[A, B], [C, D]]
/// with A, C, D strictly upper triangular and B upper triangular, under the
/// supercommutator of gl(n, n).
pub fn make_gn(n: usize) -> Result<SuperAlgebra> {
    if n == 0 {
        return Err(Error::Other("g(n) needs n >= 1".into()));
    }
    let basis = gn_basis(n);
    let dim = basis.len();
    let p = basis.iter().filter(|(_, b)| b.parity == Parity::Even).count();
    let labels: Vec<String> = basis.iter().map(|(l, _)| l.clone()).collect();
    let space = SuperSpace::with_labels(p, dim - p, labels)?;
    let mut lookup = std::collections::HashMap::new();
    for (idx, (_, b)) in basis.iter().enumerate() {
        lookup.insert((b.row, b.col), idx);
    }
    let mut c = vec![vec![svec_zero(dim); dim]; dim];
    for (i, (_, x)) in basis.iter().enumerate() {
        for (j, (_, y)) in basis.iter().enumerate() {
            // supercommutator of elementary matrices:
            // E_{r1 c1} E_{r2 c2} = delta_{c1 r2} E_{r1 c2}
            let mut result = svec_zero(dim);
            let add = |result: &mut Vec<Scalar>, row: usize, col: usize, s: Scalar| -> Result<()> {
                if s.is_zero() {
                    return Ok(());
                }
                match lookup.get(&(row, col)) {
                    Some(&k) => {
                        result[k] = &result[k] + &s;
                        Ok(())
                    }
                    None => Err(Error::Validation(format!(
                        "g({n}) product left the span at ({row},{col})"
                    ))),
                }
            };
            let xy = (x.col == y.row).then_some((x.row, y.col));
            let yx = (y.col == x.row).then_some((y.row, x.col));
            let neg = crate::space::sign_pp(x.parity, y.parity);
            match (xy, yx) {
                (Some(a), Some(b)) if a == b => {
                    // both products hit the same entry: coefficient 1 -+ 1
                    if neg {
                        add(&mut result, a.0, a.1, Scalar::from_int(2))?;
                    }
                }
                (xy, yx) => {
                    if let Some((r, cc)) = xy {
                        add(&mut result, r, cc, Scalar::one())?;
                    }
                    if let Some((r, cc)) = yx {
                        add(&mut result, r, cc, (-Scalar::one()).times_sign(neg))?;
                    }
                }
            }
            c[i][j] = result;
        }
    }
    SuperAlgebra::new(space, c)
}

/// E_n = T*_0(g(n)), the T*-extension by the zero cocycle.
pub fn make_en(n: usize) -> Result<QuadraticSuperAlgebra> {
    let g = make_gn(n)?;
    let w = DualValued2Cochain::zero(g.space().clone());
    tstar_extension(&g, &w)
}

// --------------------------------------------------------------------------
// the 7-dimensional double extension (Duflo's example)
// --------------------------------------------------------------------------

/// The quadratic superspace V(1|2): abelian, B(u,u) = 1, B(p,q) = 1 = -B(q,p).
pub fn make_v12() -> Result<QuadraticSuperAlgebra> {
    let space = SuperSpace::with_labels(1, 2, vec!["u".into(), "p".into(), "q".into()])?;
    let alg = SuperAlgebra::abelian(space.clone());
    let mut m = Matrix::zeros(3, 3);
    m.set(0, 0, Scalar::one());
    m.set(1, 2, Scalar::one());
    m.set(2, 1, -Scalar::one());
    QuadraticSuperAlgebra::new(alg, GramForm::new(space, m)?)
}

/// The standard nilpotent sub-superalgebra of osp(1,2): one even e and one
/// odd x with [x, x] = 2e.
pub fn make_osp12_nilpotent() -> Result<SuperAlgebra> {
    let space = SuperSpace::with_labels(1, 1, vec!["e".into(), "x".into()])?;
    let two = vec![Scalar::from_int(2), Scalar::zero()];
    SuperAlgebra::from_brackets(space, &[(1, 1, two)])
}

/// The action of the nilpotent part of osp(1,2) on its defining module
/// V(1|2): x maps u -> p, q -> -u; e = x^2 maps q -> -p.
fn osp12_action(v: &QuadraticSuperAlgebra) -> Result<Vec<LinearMap>> {
    let vs = v.space().clone();
    let mut mx = Matrix::zeros(3, 3);
    mx.set(1, 0, Scalar::one()); // u -> p
    mx.set(0, 2, -Scalar::one()); // q -> -u
    let phi_x = LinearMap::new(vs.clone(), vs.clone(), Parity::Odd, mx)?;
    let mut me = Matrix::zeros(3, 3);
    me.set(1, 2, -Scalar::one()); // q -> -p
    let phi_e = LinearMap::new(vs.clone(), vs, Parity::Even, me)?;
    Ok(vec![phi_e, phi_x])
}

/// The 7-dimensional nilpotent quadratic superalgebra obtained as the
/// double extension of V(1|2) by the nilpotent part of osp(1,2). Its center
/// is contained in the odd part.
pub fn make_duflo7() -> Result<QuadraticSuperAlgebra> {
    let v = make_v12()?;
    let n = make_osp12_nilpotent()?;
    let phi = osp12_action(&v)?;
    classical_double_extension(&v, &n, &phi, None)
}

// --------------------------------------------------------------------------
// W(n) = Der(Lambda K^n)
// --------------------------------------------------------------------------

fn wedge_mul(s: u32, t: u32, n: usize) -> Option<(u32, bool)> {
    if s & t != 0 {
        return None;
    }
    // sign: number of inversions between members of s and t
    let mut neg = false;
    for i in 0..n {
        if s & (1 << i) != 0 {
            for j in 0..i {
                if t & (1 << j) != 0 {
                    neg = !neg;
                }
            }
        }
    }
    Some((s | t, neg))
}

fn partial(i: usize, t: u32) -> Option<(u32, bool)> {
    if t & (1 << i) == 0 {
        return None;
    }
    // sign: (-1)^{position of i in the sorted subset}
    let mut neg = false;
    for j in 0..i {
        if t & (1 << j) != 0 {
            neg = !neg;
        }
    }
    Some((t & !(1 << i), neg))
}

/// The Cartan superalgebra W(n) of superderivations of the Grassmann algebra
/// on n odd generators; dim = n 2^n, graded by |e_S d_i| = |S| + 1.
pub fn make_cartan_w(n: usize) -> Result<SuperAlgebra> {
    if n == 0 || n > 4 {
        return Err(Error::Other("W(n) realized for 1 <= n <= 4".into()));
    }
    let masks: Vec<u32> = (0..(1u32 << n)).collect();
    // derivation basis (i, S), even derivations (|S| odd) first
    let mut basis: Vec<(usize, u32)> = Vec::new();
    for &want_even in &[true, false] {
        for i in 0..n {
            for &s in &masks {
                let is_even = (s.count_ones() + 1) % 2 == 0;
                if is_even == want_even {
                    basis.push((i, s));
                }
            }
        }
    }
    let p = basis.iter().filter(|(_, s)| (s.count_ones() + 1) % 2 == 0).count();
    let dim = basis.len();
    let labels: Vec<String> = basis.iter().map(|(i, s)| format!("d{i}m{s}")).collect();
    let space = SuperSpace::with_labels(p, dim - p, labels)?;

    let dim_l = 1usize << n;
    let op_matrix = |i: usize, s: u32| -> Matrix {
        let mut m = Matrix::zeros(dim_l, dim_l);
        for &t in &masks {
            if let Some((t2, neg1)) = partial(i, t) {
                if let Some((u, neg2)) = wedge_mul(s, t2, n) {
                    m.set(u as usize, t as usize, Scalar::one().times_sign(neg1 ^ neg2));
                }
            }
        }
        m
    };
    let ops: Vec<Matrix> = basis.iter().map(|&(i, s)| op_matrix(i, s)).collect();
    let parities: Vec<Parity> = basis
        .iter()
        .map(|(_, s)| if (s.count_ones() + 1) % 2 == 1 { Parity::Odd } else { Parity::Even })
        .collect();
    let mut lookup = std::collections::HashMap::new();
    for (idx, &(i, s)) in basis.iter().enumerate() {
        lookup.insert((i, s), idx);
    }
    let mut c = vec![vec![svec_zero(dim); dim]; dim];
    for a in 0..dim {
        for b in 0..dim {
            let ab = ops[a].mul(&ops[b]);
            let ba = ops[b].mul(&ops[a]);
            let neg = parities[a].is_odd() && parities[b].is_odd();
            let comm = if neg { ab.add(&ba) } else { ab.sub(&ba) };
            // a derivation is determined by the images of the generators v_i
            let mut val = svec_zero(dim);
            for i in 0..n {
                let col = 1u32 << i;
                for &s in &masks {
                    let coeff = comm.at(s as usize, col as usize);
                    if !coeff.is_zero() {
                        let idx = lookup.get(&(i, s)).ok_or_else(|| {
                            Error::Validation("W(n) bracket left the derivation span".into())
                        })?;
                        val[*idx] = coeff.clone();
                    }
                }
            }
            // the commutator must equal the derivation rebuilt from those
            // generator images
            let mut rebuilt = Matrix::zeros(dim_l, dim_l);
            for (idx, coeff) in val.iter().enumerate() {
                if !coeff.is_zero() {
                    let (i, s) = basis[idx];
                    rebuilt = rebuilt.add(&op_matrix(i, s).scale(coeff));
                }
            }
            if rebuilt != comm {
                return Err(Error::Validation("W(n) bracket is not a derivation".into()));
            }
            c[a][b] = val;
        }
    }
    SuperAlgebra::new(space, c)
}

// --------------------------------------------------------------------------
// small standard fixtures
// --------------------------------------------------------------------------

pub fn make_heisenberg3() -> Result<SuperAlgebra> {
    let space = SuperSpace::with_labels(3, 0, vec!["x".into(), "y".into(), "z".into()])?;
    let z = vec![Scalar::zero(), Scalar::zero(), Scalar::one()];
    SuperAlgebra::from_brackets(space, &[(0, 1, z)])
}

fn abelian_quadratic(p: usize, q: usize, gram: Matrix) -> Result<QuadraticSuperAlgebra> {
    let space = SuperSpace::new(p, q);
    let alg = SuperAlgebra::abelian(space.clone());
    QuadraticSuperAlgebra::new(alg, GramForm::new(space, gram)?)
}

/// The 4-dimensional oscillator-type algebra: classical double extension of
/// the hyperbolic plane by a one-dimensional even algebra acting by
/// diag(1, -1). Solvable, not nilpotent, quadratic.
pub fn make_oscillator4() -> Result<QuadraticSuperAlgebra> {
    let plane_space = SuperSpace::with_labels(2, 0, vec!["x".into(), "y".into()])?;
    let mut hyper = Matrix::zeros(2, 2);
    hyper.set(0, 1, Scalar::one());
    hyper.set(1, 0, Scalar::one());
    let plane = QuadraticSuperAlgebra::new(
        SuperAlgebra::abelian(plane_space.clone()),
        GramForm::new(plane_space.clone(), hyper)?,
    )?;
    let line = SuperAlgebra::abelian(SuperSpace::with_labels(1, 0, vec!["t".into()])?);
    let mut d = Matrix::zeros(2, 2);
    d.set(0, 0, Scalar::one());
    d.set(1, 1, -Scalar::one());
    let phi = vec![LinearMap::new(plane_space.clone(), plane_space, Parity::Even, d)?];
    classical_double_extension(&plane, &line, &phi, None)
}

/// sl(2) with its Killing form, computed from traces of adjoint products.
pub fn make_sl2_killing() -> Result<QuadraticSuperAlgebra> {
    let space = SuperSpace::with_labels(3, 0, vec!["h".into(), "e".into(), "f".into()])?;
    let alg = SuperAlgebra::from_brackets(
        space.clone(),
        &[
            (0, 1, vec![Scalar::zero(), Scalar::from_int(2), Scalar::zero()]),
            (0, 2, vec![Scalar::zero(), Scalar::zero(), Scalar::from_int(-2)]),
            (1, 2, vec![Scalar::one(), Scalar::zero(), Scalar::zero()]),
        ],
    )?;
    let ads: Vec<Matrix> = (0..3)
        .map(|i| Ok(alg.adjoint(&space.unit(i))?.matrix().clone()))
        .collect::<Result<_>>()?;
    let killing = Matrix::from_fn(3, 3, |i, j| ads[i].mul(&ads[j]).trace());
    QuadraticSuperAlgebra::new(alg, GramForm::new(space, killing)?)
}

/// Named standard fixtures; forms chosen per name.
pub fn make_standard(name: &str) -> Result<CatalogItem> {
    match name {
        "abelian_1_0" => Ok(CatalogItem::Quadratic(abelian_quadratic(1, 0, Matrix::identity(1))?)),
        "abelian_2_0_hyperbolic" => {
            let mut m = Matrix::zeros(2, 2);
            m.set(0, 1, Scalar::one());
            m.set(1, 0, Scalar::one());
            Ok(CatalogItem::Quadratic(abelian_quadratic(2, 0, m)?))
        }
        "abelian_2_0_diag" => {
            Ok(CatalogItem::Quadratic(abelian_quadratic(2, 0, Matrix::identity(2))?))
        }
        "abelian_0_2_symplectic" => {
            let mut m = Matrix::zeros(2, 2);
            m.set(0, 1, Scalar::one());
            m.set(1, 0, -Scalar::one());
            Ok(CatalogItem::Quadratic(abelian_quadratic(0, 2, m)?))
        }
        "abelian_2_2" => {
            let mut m = Matrix::zeros(4, 4);
            m.set(0, 1, Scalar::one());
            m.set(1, 0, Scalar::one());
            m.set(2, 3, Scalar::one());
            m.set(3, 2, -Scalar::one());
            Ok(CatalogItem::Quadratic(abelian_quadratic(2, 2, m)?))
        }
        "heisenberg3" => Ok(CatalogItem::Plain(make_heisenberg3()?)),
        "oscillator4" => Ok(CatalogItem::Quadratic(make_oscillator4()?)),
        "sl2_killing" => Ok(CatalogItem::Quadratic(make_sl2_killing()?)),
        "osp12_nilpotent" => Ok(CatalogItem::Plain(make_osp12_nilpotent()?)),
        "v12" => Ok(CatalogItem::Quadratic(make_v12()?)),
        "duflo7" => Ok(CatalogItem::Quadratic(make_duflo7()?)),
        "gn1" => Ok(CatalogItem::Plain(make_gn(1)?)),
        "gn2" => Ok(CatalogItem::Plain(make_gn(2)?)),
        "gn3" => Ok(CatalogItem::Plain(make_gn(3)?)),
        "e2" => Ok(CatalogItem::Quadratic(make_en(2)?)),
        "cartan_w1" => Ok(CatalogItem::Plain(make_cartan_w(1)?)),
        "cartan_w2" => Ok(CatalogItem::Plain(make_cartan_w(2)?)),
        "cartan_w3" => Ok(CatalogItem::Plain(make_cartan_w(3)?)),
        other => Err(Error::Other(format!("unknown catalog name `{other}`"))),
    }
}

/// All catalog names, for CLI listing and sweep tests.
pub fn catalog_names() -> Vec<&'static str> {
    vec![
        "abelian_1_0",
        "abelian_2_0_hyperbolic",
        "abelian_2_0_diag",
        "abelian_0_2_symplectic",
        "abelian_2_2",
        "heisenberg3",
        "oscillator4",
        "sl2_killing",
        "osp12_nilpotent",
        "v12",
        "duflo7",
        "gn1",
        "gn2",
        "gn3",
        "e2",
        "cartan_w1",
        "cartan_w2",
        "cartan_w3",
    ]
}

/// The quadratic catalog members, each with its invariant scalar product.
pub fn quadratic_catalog() -> Result<Vec<(String, QuadraticSuperAlgebra)>> {
    let mut out = Vec::new();
    for name in catalog_names() {
        if let CatalogItem::Quadratic(q) = make_standard(name)? {
            out.push((name.to_string(), q));
        }
    }
    Ok(out)
}
