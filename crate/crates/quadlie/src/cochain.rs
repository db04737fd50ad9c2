//! Scalar Chevalley–Eilenberg cochains in degree <= 4 with trivial
//! coefficients, dual-valued 2-cochains with the coadjoint twist, the
//! hat correspondence between supercyclic 2-cocycles and scalar 3-cocycles,
//! and the S_phi isometry criterion for T*-extensions.

use crate::algebra::SuperAlgebra;
use crate::extend;
use crate::matrix::{svec_is_zero, svec_zero, Matrix, SVec};
use crate::report::{Check, Report};
use crate::scalar::Scalar;
use crate::space::{sign_pp, LinearMap, Parity, SuperSpace};
use crate::{Error, Result};

/// Normalizes an index tuple to weakly increasing order by adjacent
/// transpositions, tracking the super sign. Returns `None` when the tuple
/// repeats an even index (the component is forced to zero).
pub fn normalize_tuple(space: &SuperSpace, idx: &[usize]) -> Option<(Vec<usize>, bool)> {
    let mut t = idx.to_vec();
    let mut neg = false;
    loop {
        let mut swapped = false;
        for i in 0..t.len().saturating_sub(1) {
            if t[i] > t[i + 1] {
                // c(..., u, v, ...) = -(-1)^{|u||v|} c(..., v, u, ...)
                neg = !neg;
                if sign_pp(space.parity(t[i]), space.parity(t[i + 1])) {
                    neg = !neg;
                }
                t.swap(i, i + 1);
                swapped = true;
            }
        }
        if !swapped {
            break;
        }
    }
    for i in 0..t.len().saturating_sub(1) {
        if t[i] == t[i + 1] && !space.parity(t[i]).is_odd() {
            return None;
        }
    }
    Some((t, neg))
}

/// Independent components of an even superalternating k-cochain: weakly
/// increasing tuples, repeats only at odd indices, total parity even.
pub fn canonical_tuples(space: &SuperSpace, k: usize) -> Vec<Vec<usize>> {
    let n = space.dim();
    if k == 0 {
        return vec![vec![]];
    }
    fn rec(
        space: &SuperSpace,
        n: usize,
        k: usize,
        pos: usize,
        start: usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if pos == k {
            let odd = cur.iter().filter(|&&i| space.parity(i).is_odd()).count();
            if odd % 2 == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for i in start..n {
            let repeat = pos > 0 && cur[pos - 1] == i;
            if repeat && !space.parity(i).is_odd() {
                continue;
            }
            cur[pos] = i;
            rec(space, n, k, pos + 1, i, cur, out);
        }
    }
    let mut out = Vec::new();
    let mut cur = vec![0usize; k];
    rec(space, n, k, 0, 0, &mut cur, &mut out);
    out
}

/// An even superalternating scalar cochain of degree <= 4, stored densely.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScalarCochain {
    space: SuperSpace,
    degree: usize,
    tensor: Vec<Scalar>,
}

impl ScalarCochain {
    fn size(n: usize, k: usize) -> usize {
        n.pow(k as u32).max(1)
    }

    fn offset(&self, idx: &[usize]) -> usize {
        let n = self.space.dim();
        idx.iter().fold(0, |acc, &i| acc * n + i)
    }

    pub fn zero(space: SuperSpace, degree: usize) -> ScalarCochain {
        assert!(degree <= 4);
        let size = Self::size(space.dim(), degree);
        ScalarCochain { space, degree, tensor: vec![Scalar::zero(); size] }
    }

    /// Validates evenness and superalternation of a dense tensor.
    pub fn from_dense(space: SuperSpace, degree: usize, tensor: Vec<Scalar>) -> Result<Self> {
        assert!(degree <= 4);
        if tensor.len() != Self::size(space.dim(), degree) {
            return Err(Error::DimensionMismatch("cochain tensor size".into()));
        }
        let c = ScalarCochain { space, degree, tensor };
        if degree == 0 {
            return Ok(c);
        }
        let n = c.space.dim();
        if n == 0 {
            return Ok(c);
        }
        let mut idx = vec![0usize; degree];
        loop {
            let v = c.value(&idx);
            if !v.is_zero() {
                let odd = idx.iter().filter(|&&i| c.space.parity(i).is_odd()).count();
                if odd % 2 == 1 {
                    return Err(Error::Validation(format!("cochain not even at {idx:?}")));
                }
            }
            match normalize_tuple(&c.space, &idx) {
                None => {
                    if !v.is_zero() {
                        return Err(Error::Validation(format!(
                            "cochain nonzero at repeated even index {idx:?}"
                        )));
                    }
                }
                Some((canon, neg)) => {
                    let expected = c.value(&canon).clone().times_sign(neg);
                    if *v != expected {
                        return Err(Error::Validation(format!(
                            "cochain not superalternating at {idx:?}"
                        )));
                    }
                }
            }
            if !next_tuple(&mut idx, n) {
                break;
            }
        }
        Ok(c)
    }

    /// Builds a cochain from values on canonical tuples.
    pub fn from_components(
        space: SuperSpace,
        degree: usize,
        components: &[(Vec<usize>, Scalar)],
    ) -> Result<Self> {
        let mut c = ScalarCochain::zero(space, degree);
        for (tuple, value) in components {
            let (canon, neg) = normalize_tuple(&c.space, tuple)
                .ok_or_else(|| Error::Validation(format!("component {tuple:?} is forced zero")))?;
            let off = c.offset(&canon);
            c.tensor[off] = value.clone().times_sign(neg);
        }
        c.superalternate_fill();
        ScalarCochain::from_dense(c.space.clone(), degree, c.tensor)
    }

    fn superalternate_fill(&mut self) {
        let n = self.space.dim();
        if self.degree == 0 || n == 0 {
            return;
        }
        let mut idx = vec![0usize; self.degree];
        loop {
            let off = self.offset(&idx);
            match normalize_tuple(&self.space, &idx) {
                None => self.tensor[off] = Scalar::zero(),
                Some((canon, neg)) => {
                    if canon != idx {
                        let v = self.tensor[self.offset(&canon)].clone().times_sign(neg);
                        self.tensor[off] = v;
                    }
                }
            }
            if !next_tuple(&mut idx, n) {
                break;
            }
        }
    }

    pub fn space(&self) -> &SuperSpace {
        &self.space
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn value(&self, idx: &[usize]) -> &Scalar {
        assert_eq!(idx.len(), self.degree);
        &self.tensor[self.offset(idx)]
    }

    pub fn is_zero(&self) -> bool {
        self.tensor.iter().all(Scalar::is_zero)
    }

    pub fn add(&self, other: &ScalarCochain) -> ScalarCochain {
        assert_eq!(self.degree, other.degree);
        let tensor = self.tensor.iter().zip(&other.tensor).map(|(a, b)| a + b).collect();
        ScalarCochain { space: self.space.clone(), degree: self.degree, tensor }
    }

    pub fn sub(&self, other: &ScalarCochain) -> ScalarCochain {
        assert_eq!(self.degree, other.degree);
        let tensor = self.tensor.iter().zip(&other.tensor).map(|(a, b)| a - b).collect();
        ScalarCochain { space: self.space.clone(), degree: self.degree, tensor }
    }

    pub fn scale(&self, c: &Scalar) -> ScalarCochain {
        let tensor = self.tensor.iter().map(|a| a * c).collect();
        ScalarCochain { space: self.space.clone(), degree: self.degree, tensor }
    }

    /// Components on the given canonical tuples, for linear-system assembly.
    pub fn component_vector(&self, tuples: &[Vec<usize>]) -> SVec {
        tuples.iter().map(|t| self.value(t).clone()).collect()
    }
}

fn next_tuple(idx: &mut [usize], n: usize) -> bool {
    for slot in (0..idx.len()).rev() {
        idx[slot] += 1;
        if idx[slot] < n {
            return true;
        }
        idx[slot] = 0;
    }
    false
}

/// The signed Chevalley–Eilenberg differential with trivial coefficients:
///
/// (dc)(x_0..x_k) = sum_{r<s} (-1)^{r+s} (-1)^{|x_r| P(<r) + |x_s| P(<s) + |x_r||x_s|}
///                  c([x_r, x_s], x_0 .. ^x_r .. ^x_s .. x_k)
///
/// where P(<t) is the parity sum of the arguments before slot t.
pub fn ce_differential(alg: &SuperAlgebra, c: &ScalarCochain) -> ScalarCochain {
    assert!(c.degree() <= 3, "differential implemented for degree <= 3");
    assert_eq!(alg.space(), c.space());
    let n = alg.dim();
    let k = c.degree();
    let mut out = ScalarCochain::zero(c.space().clone(), k + 1);
    if n == 0 {
        return out;
    }
    let sp = alg.space();
    let mut idx = vec![0usize; k + 1];
    loop {
        let mut total = Scalar::zero();
        for r in 0..k + 1 {
            for s in r + 1..k + 1 {
                let mut neg = (r + s) % 2 == 1;
                let p_before_r = idx[..r].iter().filter(|&&t| sp.parity(t).is_odd()).count();
                let p_before_s = idx[..s].iter().filter(|&&t| sp.parity(t).is_odd()).count();
                if sp.parity(idx[r]).is_odd() && p_before_r % 2 == 1 {
                    neg = !neg;
                }
                if sp.parity(idx[s]).is_odd() && p_before_s % 2 == 1 {
                    neg = !neg;
                }
                if sign_pp(sp.parity(idx[r]), sp.parity(idx[s])) {
                    neg = !neg;
                }
                let bracket = alg.structure(idx[r], idx[s]);
                let rest: Vec<usize> =
                    (0..k + 1).filter(|&t| t != r && t != s).map(|t| idx[t]).collect();
                for (m, coeff) in bracket.iter().enumerate() {
                    if coeff.is_zero() {
                        continue;
                    }
                    let mut inner = Vec::with_capacity(k);
                    inner.push(m);
                    inner.extend_from_slice(&rest);
                    let v = c.value(&inner);
                    if !v.is_zero() {
                        total = &total + &(coeff * v).times_sign(neg);
                    }
                }
            }
        }
        let off = out.offset(&idx);
        out.tensor[off] = total;
        if !next_tuple(&mut idx, n) {
            break;
        }
    }
    out
}

pub fn is_cocycle(alg: &SuperAlgebra, c: &ScalarCochain) -> bool {
    ce_differential(alg, c).is_zero()
}

/// Solves `d(phi) = hat_w` for an even superalternating scalar 2-cochain.
pub fn is_coboundary_3(alg: &SuperAlgebra, what: &ScalarCochain) -> Result<Option<ScalarCochain>> {
    assert_eq!(what.degree(), 3);
    let sp = alg.space().clone();
    let unknowns = canonical_tuples(&sp, 2);
    let targets = canonical_tuples(&sp, 3);
    if unknowns.is_empty() {
        return Ok(if what.is_zero() {
            Some(ScalarCochain::zero(sp, 2))
        } else {
            None
        });
    }
    let mut cols: Vec<SVec> = Vec::with_capacity(unknowns.len());
    for u in &unknowns {
        let unit = ScalarCochain::from_components(sp.clone(), 2, &[(u.clone(), Scalar::one())])?;
        let d = ce_differential(alg, &unit);
        cols.push(d.component_vector(&targets));
    }
    let m = Matrix::from_fn(targets.len(), unknowns.len(), |r, c| cols[c][r].clone());
    let rhs: SVec = targets.iter().map(|t| what.value(t).clone()).collect();
    match m.solve(&rhs) {
        None => Ok(None),
        Some(sol) => {
            let comps: Vec<(Vec<usize>, Scalar)> =
                unknowns.iter().cloned().zip(sol).filter(|(_, v)| !v.is_zero()).collect();
            let phi = ScalarCochain::from_components(sp, 2, &comps)?;
            // component system covers all canonical tuples, but double-check
            // on the full dense tensor
            if ce_differential(alg, &phi) == *what {
                Ok(Some(phi))
            } else {
                Ok(None)
            }
        }
    }
}

/// An even superantisymmetric bilinear map `w: g x g -> g*`, stored as the
/// tensor `w[i][j][k] = w(e_i, e_j)(e_k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualValued2Cochain {
    space: SuperSpace,
    w: Vec<Vec<SVec>>,
}

impl DualValued2Cochain {
    pub fn zero(space: SuperSpace) -> Self {
        let n = space.dim();
        DualValued2Cochain { space, w: vec![vec![svec_zero(n); n]; n] }
    }

    pub fn new(space: SuperSpace, w: Vec<Vec<SVec>>) -> Result<Self> {
        let n = space.dim();
        if w.len() != n || w.iter().any(|a| a.len() != n || a.iter().any(|v| v.len() != n)) {
            return Err(Error::DimensionMismatch("w tensor must be n^3".into()));
        }
        let out = DualValued2Cochain { space, w };
        out.validate_structure()?;
        Ok(out)
    }

    fn validate_structure(&self) -> Result<()> {
        let n = self.space.dim();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let v = &self.w[i][j][k];
                    if v.is_zero() {
                        continue;
                    }
                    let odd =
                        [i, j, k].iter().filter(|&&t| self.space.parity(t).is_odd()).count();
                    if odd % 2 == 1 {
                        return Err(Error::Validation(format!("w not even at ({i},{j},{k})")));
                    }
                }
                let neg = sign_pp(self.space.parity(i), self.space.parity(j));
                for k in 0..n {
                    let expected = (-&self.w[j][i][k]).times_sign(neg);
                    if self.w[i][j][k] != expected {
                        return Err(Error::Validation(format!(
                            "w not superantisymmetric at ({i},{j},{k})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn space(&self) -> &SuperSpace {
        &self.space
    }

    pub fn value(&self, i: usize, j: usize, k: usize) -> &Scalar {
        &self.w[i][j][k]
    }

    /// w(x, y) as a dual vector (coordinates in the dual basis).
    pub fn eval(&self, x: &[Scalar], y: &[Scalar]) -> SVec {
        let n = self.space.dim();
        let mut out = svec_zero(n);
        for i in 0..n {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if y[j].is_zero() {
                    continue;
                }
                let c = &x[i] * &y[j];
                for k in 0..n {
                    if !self.w[i][j][k].is_zero() {
                        out[k] = &out[k] + &(&c * &self.w[i][j][k]);
                    }
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.w.iter().flatten().all(|v| svec_is_zero(v))
    }

    pub fn sub(&self, other: &DualValued2Cochain) -> DualValued2Cochain {
        let n = self.space.dim();
        let mut w = self.w.clone();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    w[i][j][k] = &w[i][j][k] - &other.w[i][j][k];
                }
            }
        }
        DualValued2Cochain { space: self.space.clone(), w }
    }

    pub fn set_component(&mut self, i: usize, j: usize, k: usize, v: Scalar) {
        self.w[i][j][k] = v;
    }
}

/// Supercyclicity: w(A,B)(C) = (-1)^{(|B|+|C|)|A|} w(B,C)(A) on basis triples.
pub fn is_supercyclic(w: &DualValued2Cochain) -> bool {
    let sp = w.space();
    let n = sp.dim();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let neg =
                    sp.parity(a).is_odd() && (sp.parity(b).is_odd() ^ sp.parity(c).is_odd());
                let rhs = w.value(b, c, a).clone().times_sign(neg);
                if *w.value(a, b, c) != rhs {
                    return false;
                }
            }
        }
    }
    true
}

/// The 2-cocycle condition for w valued in the coadjoint module:
/// sum_cyc (-1)^{|C||A|} ( A.w(B,C) + w(A,[B,C]) ) = 0.
pub fn is_dual_cocycle(alg: &SuperAlgebra, w: &DualValued2Cochain) -> bool {
    dual_cocycle_witness(alg, w).is_none()
}

/// First basis tuple (a,b,c,d) violating the twisted cocycle condition.
pub fn dual_cocycle_witness(alg: &SuperAlgebra, w: &DualValued2Cochain) -> Option<Vec<usize>> {
    let sp = alg.space();
    let n = sp.dim();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for dd in 0..n {
                    let mut total = Scalar::zero();
                    for (x, y, z) in [(a, b, c), (b, c, a), (c, a, b)] {
                        let cyc_neg = sign_pp(sp.parity(z), sp.parity(x));
                        // (X.w(Y,Z))(D) = -(-1)^{|X|(|Y|+|Z|)} w(Y,Z)([X,D])
                        let coad_neg = !(sp.parity(x).is_odd()
                            && (sp.parity(y).is_odd() ^ sp.parity(z).is_odd()));
                        let bracket_xd = alg.structure(x, dd);
                        for (m, coeff) in bracket_xd.iter().enumerate() {
                            if !coeff.is_zero() && !w.value(y, z, m).is_zero() {
                                let t = (coeff * w.value(y, z, m))
                                    .times_sign(coad_neg)
                                    .times_sign(cyc_neg);
                                total = &total + &t;
                            }
                        }
                        // w(X, [Y,Z])(D)
                        let bracket_yz = alg.structure(y, z);
                        for (m, coeff) in bracket_yz.iter().enumerate() {
                            if !coeff.is_zero() && !w.value(x, m, dd).is_zero() {
                                let t = (coeff * w.value(x, m, dd)).times_sign(cyc_neg);
                                total = &total + &t;
                            }
                        }
                    }
                    if !total.is_zero() {
                        return Some(vec![a, b, c, dd]);
                    }
                }
            }
        }
    }
    None
}

/// `hat(w)(X,Y,Z) = w(X,Y)(Z)`: requires w to be a supercyclic 2-cocycle,
/// and produces a totally superalternating even scalar 3-cocycle.
pub fn hat_correspondence(alg: &SuperAlgebra, w: &DualValued2Cochain) -> Result<ScalarCochain> {
    if !is_supercyclic(w) {
        return Err(Error::Validation("w is not supercyclic".into()));
    }
    if let Some(witness) = dual_cocycle_witness(alg, w) {
        return Err(Error::Validation(format!("w is not a 2-cocycle, witness {witness:?}")));
    }
    let n = alg.dim();
    let mut tensor = vec![Scalar::zero(); (n * n * n).max(1)];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                tensor[(i * n + j) * n + k] = w.value(i, j, k).clone();
            }
        }
    }
    ScalarCochain::from_dense(alg.space().clone(), 3, tensor)
}

/// Inverse of the hat correspondence: requires an even 3-cocycle.
pub fn unhat(alg: &SuperAlgebra, what: &ScalarCochain) -> Result<DualValued2Cochain> {
    assert_eq!(what.degree(), 3);
    if !is_cocycle(alg, what) {
        return Err(Error::Validation("hat-w is not a 3-cocycle".into()));
    }
    let n = alg.dim();
    let mut w = vec![vec![svec_zero(n); n]; n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                w[i][j][k] = what.value(&[i, j, k]).clone();
            }
        }
    }
    DualValued2Cochain::new(alg.space().clone(), w)
}

/// Basis of the space of supercyclic even 2-cocycles.
///
/// Supercyclic w carry exactly the data of superalternating 3-cochains and
/// the two cocycle conditions transport into each other, so the space is
/// solved as the kernel of the degree-3 differential and pulled back.
pub fn supercyclic_cocycle_space(alg: &SuperAlgebra) -> Result<Vec<DualValued2Cochain>> {
    let cocycles = three_cocycle_space(alg)?;
    cocycles.iter().map(|c| unhat(alg, c)).collect()
}

/// Basis of the kernel of the differential on even superalternating 3-cochains.
pub fn three_cocycle_space(alg: &SuperAlgebra) -> Result<Vec<ScalarCochain>> {
    let sp = alg.space().clone();
    let unknowns = canonical_tuples(&sp, 3);
    if unknowns.is_empty() {
        return Ok(vec![]);
    }
    let targets = canonical_tuples(&sp, 4);
    let mut cols: Vec<SVec> = Vec::with_capacity(unknowns.len());
    for u in &unknowns {
        let unit = ScalarCochain::from_components(sp.clone(), 3, &[(u.clone(), Scalar::one())])?;
        let d = ce_differential(alg, &unit);
        cols.push(d.component_vector(&targets));
    }
    let kernel = if targets.is_empty() {
        (0..unknowns.len())
            .map(|k| {
                let mut v = svec_zero(unknowns.len());
                v[k] = Scalar::one();
                v
            })
            .collect()
    } else {
        Matrix::from_fn(targets.len(), unknowns.len(), |r, c| cols[c][r].clone()).kernel_basis()
    };
    kernel
        .into_iter()
        .map(|coeffs| {
            let comps: Vec<(Vec<usize>, Scalar)> =
                unknowns.iter().cloned().zip(coeffs).filter(|(_, v)| !v.is_zero()).collect();
            ScalarCochain::from_components(sp.clone(), 3, &comps)
        })
        .collect()
}

/// Outcome of the S_phi isometry construction.
#[derive(Clone, Debug)]
pub enum SPhiOutcome {
    Isometry(LinearMap),
    Mismatch(Report),
}

/// Builds `S_phi(X + F) = X + phi(X, .) + F : T*_{w1} g -> T*_{w2} g` and
/// verifies bracket and form preservation exactly.
pub fn s_phi_isometry(
    g2: &SuperAlgebra,
    w1: &DualValued2Cochain,
    w2: &DualValued2Cochain,
    phi: &ScalarCochain,
) -> Result<SPhiOutcome> {
    assert_eq!(phi.degree(), 2);
    let t1 = extend::tstar_extension(g2, w1)?;
    let t2 = extend::tstar_extension(g2, w2)?;
    let layout = extend::tstar_layout(g2);
    let n2 = g2.dim();
    let total = 2 * n2;
    let mut m = Matrix::zeros(total, total);
    for i in 0..n2 {
        // S(e_i) = e_i + sum_j phi(i, j) e_j*
        m.set(layout.primal(i), layout.primal(i), Scalar::one());
        for j in 0..n2 {
            let v = phi.value(&[i, j]);
            if !v.is_zero() {
                m.set(layout.dual(j), layout.primal(i), v.clone());
            }
        }
        // S(e_i*) = e_i*
        m.set(layout.dual(i), layout.dual(i), Scalar::one());
    }
    let map = LinearMap::new(t1.space().clone(), t2.space().clone(), Parity::Even, m)?;
    let report = crate::decompose::verify_isometry(&map, &t1, &t2)?;
    if report.all_passed() {
        Ok(SPhiOutcome::Isometry(map))
    } else {
        Ok(SPhiOutcome::Mismatch(report))
    }
}

/// Supercyclicity and cocycle checks bundled together, for CLI use.
pub fn cocycle_report(alg: &SuperAlgebra, w: &DualValued2Cochain) -> Report {
    let mut r = Report::new();
    r.push(if is_supercyclic(w) {
        Check::pass("supercyclic")
    } else {
        Check::fail_msg("supercyclic", "cyclic identity fails")
    });
    r.push(match dual_cocycle_witness(alg, w) {
        None => Check::pass("cocycle"),
        Some(wit) => Check::fail("cocycle", wit),
    });
    r
}
