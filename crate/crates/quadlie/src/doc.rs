//! Canonical text documents for algebras, cocycles, contexts, modules and
//! scalar 2-cochains.
//!
//! The format is line oriented with explicit reduced rationals, so documents
//! double as diffable regression fixtures: serialization is canonical and
//! byte-stable, parsing rejects non-canonical coefficients with positioned
//! diagnostics, and `parse . serialize` is the identity on canonical
//! documents.

use crate::algebra::{Representation, SuperAlgebra};
use crate::cochain::{DualValued2Cochain, ScalarCochain};
use crate::extend::ExtensionContext;
use crate::form::{GramForm, QuadraticSuperAlgebra};
use crate::matrix::{svec_zero, Matrix, SVec};
use crate::scalar::Scalar;
use crate::space::{sign_pp, LinearMap, Parity, SuperSpace};

/// A parse failure with a 1-based line and column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.col, self.message)
    }
}

impl std::error::Error for ParseError {}

pub type PResult<T> = std::result::Result<T, ParseError>;

/// The scalar field a document declares.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum FieldSpec {
    Q,
    QSqrt(i64),
}

impl FieldSpec {
    pub fn d(&self) -> Option<i64> {
        match self {
            FieldSpec::Q => None,
            FieldSpec::QSqrt(d) => Some(*d),
        }
    }

    /// The field needed to hold every scalar in the iterator.
    pub fn covering<'a>(scalars: impl Iterator<Item = &'a Scalar>) -> FieldSpec {
        for s in scalars {
            if let Some(d) = s.extension() {
                return FieldSpec::QSqrt(d);
            }
        }
        FieldSpec::Q
    }
}

#[derive(Clone, Debug)]
struct Token {
    text: String,
    line: usize,
    col: usize,
}

struct Lines {
    rows: Vec<Vec<Token>>,
    cursor: usize,
}

impl Lines {
    fn new(text: &str) -> Lines {
        let mut rows = Vec::new();
        for (ln, raw) in text.lines().enumerate() {
            let mut tokens = Vec::new();
            let mut col = 0;
            for piece in raw.split(' ') {
                if !piece.is_empty() {
                    tokens.push(Token { text: piece.to_string(), line: ln + 1, col: col + 1 });
                }
                col += piece.len() + 1;
            }
            rows.push(tokens);
        }
        Lines { rows, cursor: 0 }
    }

    fn err<T>(&self, line: usize, col: usize, message: impl Into<String>) -> PResult<T> {
        Err(ParseError { line, col, message: message.into() })
    }

    fn peek(&self) -> Option<&Vec<Token>> {
        self.rows.get(self.cursor)
    }

    fn next_line(&mut self) -> PResult<Vec<Token>> {
        loop {
            match self.rows.get(self.cursor) {
                None => {
                    return Err(ParseError {
                        line: self.rows.len() + 1,
                        col: 1,
                        message: "unexpected end of document".into(),
                    })
                }
                Some(row) if row.is_empty() => {
                    self.cursor += 1;
                }
                Some(row) => {
                    let out = row.clone();
                    self.cursor += 1;
                    return Ok(out);
                }
            }
        }
    }

    fn expect_exact(&mut self, words: &[&str]) -> PResult<()> {
        let row = self.next_line()?;
        if row.len() != words.len() || row.iter().zip(words).any(|(t, w)| t.text != *w) {
            let (line, col) = row.first().map(|t| (t.line, t.col)).unwrap_or((1, 1));
            return self.err(line, col, format!("expected `{}`", words.join(" ")));
        }
        Ok(())
    }
}

fn parse_usize(t: &Token) -> PResult<usize> {
    t.text.parse().map_err(|_| ParseError {
        line: t.line,
        col: t.col,
        message: format!("expected a non-negative integer, got `{}`", t.text),
    })
}

fn parse_coeff(t: &Token, field: &FieldSpec) -> PResult<Scalar> {
    match Scalar::parse_canonical(&t.text, field.d()) {
        Ok(s) => {
            if s.is_zero() {
                Err(ParseError {
                    line: t.line,
                    col: t.col,
                    message: "zero coefficient must be omitted".into(),
                })
            } else {
                Ok(s)
            }
        }
        Err(message) => Err(ParseError { line: t.line, col: t.col, message }),
    }
}

fn parse_coeff_allow_zero(t: &Token, field: &FieldSpec) -> PResult<Scalar> {
    Scalar::parse_canonical(&t.text, field.d())
        .map_err(|message| ParseError { line: t.line, col: t.col, message })
}

fn parse_field_line(lines: &mut Lines) -> PResult<FieldSpec> {
    let row = lines.next_line()?;
    if row.is_empty() || row[0].text != "field" {
        let (line, col) = row.first().map(|t| (t.line, t.col)).unwrap_or((1, 1));
        return lines.err(line, col, "expected `field`");
    }
    match row.get(1).map(|t| t.text.as_str()) {
        Some("Q") if row.len() == 2 => Ok(FieldSpec::Q),
        Some("Q_sqrt") if row.len() == 3 => {
            let d: i64 = row[2].text.parse().map_err(|_| ParseError {
                line: row[2].line,
                col: row[2].col,
                message: format!("bad field extension `{}`", row[2].text),
            })?;
            Ok(FieldSpec::QSqrt(d))
        }
        _ => lines.err(row[0].line, row[0].col, "expected `field Q` or `field Q_sqrt <d>`"),
    }
}

fn parse_keyed_usize(lines: &mut Lines, key: &str) -> PResult<usize> {
    let row = lines.next_line()?;
    if row.len() != 2 || row[0].text != key {
        let (line, col) = row.first().map(|t| (t.line, t.col)).unwrap_or((1, 1));
        return lines.err(line, col, format!("expected `{key} <n>`"));
    }
    parse_usize(&row[1])
}

/// Parses `<k> <coeff> [; <k> <coeff>]*` starting at `pos`, with k < bound
/// and strictly increasing.
fn parse_term_list(
    row: &[Token],
    mut pos: usize,
    bound: usize,
    field: &FieldSpec,
) -> PResult<Vec<(usize, Scalar, usize, usize)>> {
    let mut out = Vec::new();
    let mut last_k: Option<usize> = None;
    loop {
        let Some(k_tok) = row.get(pos) else {
            let t = &row[pos - 1];
            return Err(ParseError {
                line: t.line,
                col: t.col,
                message: "expected another term after `;`".into(),
            });
        };
        let k = parse_usize(k_tok)?;
        if k >= bound {
            return Err(ParseError {
                line: k_tok.line,
                col: k_tok.col,
                message: format!("index out of range 0..{bound}"),
            });
        }
        if let Some(prev) = last_k {
            if k <= prev {
                return Err(ParseError {
                    line: k_tok.line,
                    col: k_tok.col,
                    message: "terms must be sorted by strictly increasing k".into(),
                });
            }
        }
        last_k = Some(k);
        let coeff_tok = row.get(pos + 1).ok_or(ParseError {
            line: k_tok.line,
            col: k_tok.col,
            message: "missing coefficient".into(),
        })?;
        let coeff = parse_coeff(coeff_tok, field)?;
        out.push((k, coeff, coeff_tok.line, coeff_tok.col));
        pos += 2;
        match row.get(pos) {
            None => return Ok(out),
            Some(t) if t.text == ";" => pos += 1,
            Some(t) => {
                return Err(ParseError {
                    line: t.line,
                    col: t.col,
                    message: "expected `;` between terms".into(),
                })
            }
        }
    }
}

/// Parses dims + basis + bracket lines into a superalgebra; stops before the
/// first line whose head is none of `bracket` and leaves it for the caller.
fn parse_algebra_body(
    lines: &mut Lines,
    field: &FieldSpec,
) -> PResult<SuperAlgebra> {
    let p = parse_keyed_usize(lines, "even_dim")?;
    let q = parse_keyed_usize(lines, "odd_dim")?;
    let n = p + q;
    let row = lines.next_line()?;
    if row.is_empty() || row[0].text != "basis" {
        let (line, col) = row.first().map(|t| (t.line, t.col)).unwrap_or((1, 1));
        return lines.err(line, col, "expected `basis <labels...>`");
    }
    if row.len() != n + 1 {
        return lines.err(
            row[0].line,
            row[0].col,
            format!("expected {n} basis labels, got {}", row.len() - 1),
        );
    }
    let labels: Vec<String> = row[1..].iter().map(|t| t.text.clone()).collect();
    let space = SuperSpace::with_labels(p, q, labels).map_err(|e| ParseError {
        line: row[0].line,
        col: row[0].col,
        message: e.to_string(),
    })?;

    let mut entries: Vec<(usize, usize, SVec)> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    while let Some(next) = lines.peek() {
        if next.is_empty() {
            lines.cursor += 1;
            continue;
        }
        if next[0].text != "bracket" {
            break;
        }
        let row = lines.next_line()?;
        if row.len() < 6 || row[3].text != ":" {
            return lines.err(
                row[0].line,
                row[0].col,
                "expected `bracket <i> <j> : <k> <coeff> [; <k> <coeff>]...`",
            );
        }
        let i = parse_usize(&row[1])?;
        let j = parse_usize(&row[2])?;
        if i >= n || j >= n {
            return lines.err(row[1].line, row[1].col, format!("index out of range 0..{n}"));
        }
        if i > j {
            return lines.err(row[1].line, row[1].col, "bracket entries must have i <= j");
        }
        if i == j && space.parity(i) == Parity::Even {
            return lines.err(
                row[1].line,
                row[1].col,
                "parity-inconsistent bracket entry: [e_i, e_i] = 0 for even e_i",
            );
        }
        if !seen.insert((i, j)) {
            return lines.err(row[1].line, row[1].col, format!("duplicate bracket ({i},{j})"));
        }
        let mut value = svec_zero(n);
        for (k, coeff, line, col) in parse_term_list(&row, 4, n, field)? {
            if space.parity(k) != space.parity(i).plus(space.parity(j)) {
                return lines.err(line, col, "parity-inconsistent bracket entry");
            }
            value[k] = coeff;
        }
        entries.push((i, j, value));
    }
    SuperAlgebra::from_brackets(space, &entries).map_err(|e| ParseError {
        line: 1,
        col: 1,
        message: e.to_string(),
    })
}

fn parse_matrix_rows(
    lines: &mut Lines,
    rows: usize,
    cols: usize,
    field: &FieldSpec,
) -> PResult<Matrix> {
    let mut m = Matrix::zeros(rows, cols);
    for r in 0..rows {
        let row = lines.next_line()?;
        if row.len() != cols {
            let (line, col) = row.first().map(|t| (t.line, t.col)).unwrap_or((1, 1));
            return lines.err(line, col, format!("expected {cols} coefficients"));
        }
        for (c, tok) in row.iter().enumerate() {
            m.set(r, c, parse_coeff_allow_zero(tok, field)?);
        }
    }
    Ok(m)
}

/// A parsed algebra document.
#[derive(Clone, Debug)]
pub struct AlgebraDocument {
    pub name: String,
    pub field: FieldSpec,
    pub algebra: SuperAlgebra,
    pub form: Option<GramForm>,
}

impl AlgebraDocument {
    pub fn quadratic(&self) -> Option<QuadraticSuperAlgebra> {
        self.form
            .clone()
            .and_then(|b| QuadraticSuperAlgebra::new(self.algebra.clone(), b).ok())
    }
}

pub fn parse_algebra(text: &str) -> PResult<AlgebraDocument> {
    let mut lines = Lines::new(text);
    lines.expect_exact(&["superalgebra-document", "v1"])?;
    let row = lines.next_line()?;
    if row.len() != 2 || row[0].text != "name" {
        let (line, col) = row.first().map(|t| (t.line, t.col)).unwrap_or((1, 1));
        return lines.err(line, col, "expected `name <token>`");
    }
    let name = row[1].text.clone();
    let field = parse_field_line(&mut lines)?;
    let algebra = parse_algebra_body(&mut lines, &field)?;
    let n = algebra.dim();
    let next = lines.next_line()?;
    let form = match next[0].text.as_str() {
        "form" => {
            let m = parse_matrix_rows(&mut lines, n, n, &field)?;
            lines.expect_exact(&["end"])?;
            Some(GramForm::new(algebra.space().clone(), m).map_err(|e| ParseError {
                line: next[0].line,
                col: next[0].col,
                message: e.to_string(),
            })?)
        }
        "end" => None,
        _ => {
            return lines.err(next[0].line, next[0].col, "expected `form` or `end`");
        }
    };
    Ok(AlgebraDocument { name, field, algebra, form })
}

fn write_algebra_body(out: &mut String, alg: &SuperAlgebra) {
    use std::fmt::Write;
    let n = alg.dim();
    let sp = alg.space();
    writeln!(out, "even_dim {}", sp.even_dim()).unwrap();
    writeln!(out, "odd_dim {}", sp.odd_dim()).unwrap();
    let mut basis = String::from("basis");
    for l in sp.labels() {
        basis.push(' ');
        basis.push_str(l);
    }
    writeln!(out, "{basis}").unwrap();
    for i in 0..n {
        for j in i..n {
            if i == j && sp.parity(i) == Parity::Even {
                continue;
            }
            let v = alg.structure(i, j);
            let terms: Vec<String> = (0..n)
                .filter(|&k| !v[k].is_zero())
                .map(|k| format!("{k} {}", v[k].canonical_string()))
                .collect();
            if terms.is_empty() {
                continue;
            }
            writeln!(out, "bracket {i} {j} : {}", terms.join(" ; ")).unwrap();
        }
    }
}

fn write_matrix_rows(out: &mut String, m: &Matrix) {
    use std::fmt::Write;
    for r in 0..m.rows() {
        let row: Vec<String> = (0..m.cols()).map(|c| m.at(r, c).canonical_string()).collect();
        writeln!(out, "{}", row.join(" ")).unwrap();
    }
}

pub fn serialize_algebra(
    name: &str,
    alg: &SuperAlgebra,
    form: Option<&GramForm>,
) -> String {
    use std::fmt::Write;
    let mut scalars: Vec<&Scalar> = alg.tensor().iter().flatten().flatten().collect();
    if let Some(f) = form {
        for i in 0..f.space().dim() {
            for j in 0..f.space().dim() {
                scalars.push(f.entry(i, j));
            }
        }
    }
    let field = FieldSpec::covering(scalars.into_iter());
    let mut out = String::new();
    writeln!(out, "superalgebra-document v1").unwrap();
    writeln!(out, "name {name}").unwrap();
    match field {
        FieldSpec::Q => writeln!(out, "field Q").unwrap(),
        FieldSpec::QSqrt(d) => writeln!(out, "field Q_sqrt {d}").unwrap(),
    }
    write_algebra_body(&mut out, alg);
    if let Some(f) = form {
        writeln!(out, "form").unwrap();
        write_matrix_rows(&mut out, f.matrix());
    }
    writeln!(out, "end").unwrap();
    out
}

/// A parsed cocycle document: a dual-valued 2-cochain plus the dimensions it
/// expects of its algebra.
#[derive(Clone, Debug)]
pub struct CocycleDocument {
    pub field: FieldSpec,
    pub even_dim: usize,
    pub odd_dim: usize,
    pub entries: Vec<(usize, usize, usize, Scalar)>,
}

impl CocycleDocument {
    /// Realizes the cochain on the space of a concrete algebra.
    pub fn to_cochain(&self, space: &SuperSpace) -> std::result::Result<DualValued2Cochain, String> {
        if space.even_dim() != self.even_dim || space.odd_dim() != self.odd_dim {
            return Err(format!(
                "cocycle document is for dimension ({}|{}), algebra has ({}|{})",
                self.even_dim,
                self.odd_dim,
                space.even_dim(),
                space.odd_dim()
            ));
        }
        let n = space.dim();
        let mut w = vec![vec![svec_zero(n); n]; n];
        for (i, j, k, coeff) in &self.entries {
            w[*i][*j][*k] = coeff.clone();
            if i != j {
                let neg = sign_pp(space.parity(*i), space.parity(*j));
                w[*j][*i][*k] = (-coeff).times_sign(neg);
            }
        }
        DualValued2Cochain::new(space.clone(), w).map_err(|e| e.to_string())
    }
}

pub fn parse_cocycle(text: &str) -> PResult<CocycleDocument> {
    let mut lines = Lines::new(text);
    lines.expect_exact(&["cocycle-document", "v1"])?;
    let field = parse_field_line(&mut lines)?;
    let p = parse_keyed_usize(&mut lines, "even_dim")?;
    let q = parse_keyed_usize(&mut lines, "odd_dim")?;
    let n = p + q;
    let parity = |i: usize| if i < p { Parity::Even } else { Parity::Odd };
    let mut entries = Vec::new();
    let mut seen = std::collections::HashSet::new();
    loop {
        let row = lines.next_line()?;
        match row[0].text.as_str() {
            "end" => break,
            "w" => {
                if row.len() < 6 || row[3].text != ":" {
                    return lines.err(
                        row[0].line,
                        row[0].col,
                        "expected `w <i> <j> : <k> <coeff> [; <k> <coeff>]...`",
                    );
                }
                let i = parse_usize(&row[1])?;
                let j = parse_usize(&row[2])?;
                if i >= n || j >= n {
                    return lines.err(row[1].line, row[1].col, format!("index out of range 0..{n}"));
                }
                if i > j {
                    return lines.err(row[1].line, row[1].col, "w entries must have i <= j");
                }
                if i == j && parity(i) == Parity::Even {
                    return lines.err(
                        row[1].line,
                        row[1].col,
                        "parity-inconsistent entry: w(e_i, e_i) = 0 for even e_i",
                    );
                }
                if !seen.insert((i, j)) {
                    return lines.err(row[1].line, row[1].col, format!("duplicate w ({i},{j})"));
                }
                for (k, coeff, line, col) in parse_term_list(&row, 4, n, &field)? {
                    let total_odd =
                        [i, j, k].iter().filter(|&&t| parity(t) == Parity::Odd).count();
                    if total_odd % 2 == 1 {
                        return lines.err(line, col, "parity-inconsistent entry: w must be even");
                    }
                    entries.push((i, j, k, coeff));
                }
            }
            other => {
                return lines.err(row[0].line, row[0].col, format!("unexpected `{other}`"));
            }
        }
    }
    Ok(CocycleDocument { field, even_dim: p, odd_dim: q, entries })
}

pub fn serialize_cocycle(space: &SuperSpace, w: &DualValued2Cochain) -> String {
    use std::fmt::Write;
    let n = space.dim();
    let mut scalars = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                scalars.push(w.value(i, j, k));
            }
        }
    }
    let field = FieldSpec::covering(scalars.into_iter());
    let mut out = String::new();
    writeln!(out, "cocycle-document v1").unwrap();
    match field {
        FieldSpec::Q => writeln!(out, "field Q").unwrap(),
        FieldSpec::QSqrt(d) => writeln!(out, "field Q_sqrt {d}").unwrap(),
    }
    writeln!(out, "even_dim {}", space.even_dim()).unwrap();
    writeln!(out, "odd_dim {}", space.odd_dim()).unwrap();
    for i in 0..n {
        for j in i..n {
            if i == j && space.parity(i) == Parity::Even {
                continue;
            }
            let terms: Vec<String> = (0..n)
                .filter(|&k| !w.value(i, j, k).is_zero())
                .map(|k| format!("{k} {}", w.value(i, j, k).canonical_string()))
                .collect();
            if terms.is_empty() {
                continue;
            }
            writeln!(out, "w {i} {j} : {}", terms.join(" ; ")).unwrap();
        }
    }
    writeln!(out, "end").unwrap();
    out
}

/// Parses a full extension-context document.
pub fn parse_context(text: &str) -> PResult<ExtensionContext> {
    let mut lines = Lines::new(text);
    lines.expect_exact(&["context-document", "v1"])?;
    let field = parse_field_line(&mut lines)?;
    lines.expect_exact(&["g1", "begin"])?;
    let g1_alg = parse_algebra_body(&mut lines, &field)?;
    let n1 = g1_alg.dim();
    lines.expect_exact(&["form"])?;
    let g1_form = parse_matrix_rows(&mut lines, n1, n1, &field)?;
    lines.expect_exact(&["g1", "end"])?;
    lines.expect_exact(&["g2", "begin"])?;
    let g2_alg = parse_algebra_body(&mut lines, &field)?;
    let n2 = g2_alg.dim();
    lines.expect_exact(&["g2", "end"])?;

    let g1 = QuadraticSuperAlgebra::new(
        g1_alg.clone(),
        GramForm::new(g1_alg.space().clone(), g1_form).map_err(|e| ParseError {
            line: 1,
            col: 1,
            message: e.to_string(),
        })?,
    )
    .map_err(|e| ParseError { line: 1, col: 1, message: e.to_string() })?;

    let mut phi = Vec::with_capacity(n2);
    for a in 0..n2 {
        lines.expect_exact(&["phi", &a.to_string(), "begin"])?;
        let m = parse_matrix_rows(&mut lines, n1, n1, &field)?;
        lines.expect_exact(&["phi", &a.to_string(), "end"])?;
        phi.push(
            LinearMap::new(
                g1.space().clone(),
                g1.space().clone(),
                g2_alg.space().parity(a),
                m,
            )
            .map_err(|e| ParseError { line: 1, col: 1, message: format!("phi {a}: {e}") })?,
        );
    }

    let mut psi = vec![vec![svec_zero(n1); n2]; n2];
    let mut wt = vec![vec![svec_zero(n2); n2]; n2];
    loop {
        let row = lines.next_line()?;
        match row[0].text.as_str() {
            "end" => {
                let w = DualValued2Cochain::new(g2_alg.space().clone(), wt)
                    .map_err(|e| ParseError { line: 1, col: 1, message: e.to_string() })?;
                return ExtensionContext::new(g1, g2_alg, phi, psi, w, None)
                    .map_err(|e| ParseError { line: 1, col: 1, message: e.to_string() });
            }
            "gamma" => {
                if row.len() != 2 || row[1].text != "begin" {
                    return lines.err(row[0].line, row[0].col, "expected `gamma begin`");
                }
                let m = parse_matrix_rows(&mut lines, n2, n2, &field)?;
                lines.expect_exact(&["gamma", "end"])?;
                lines.expect_exact(&["end"])?;
                let gamma = GramForm::new(g2_alg.space().clone(), m)
                    .map_err(|e| ParseError { line: 1, col: 1, message: e.to_string() })?;
                let w = DualValued2Cochain::new(g2_alg.space().clone(), wt)
                    .map_err(|e| ParseError { line: 1, col: 1, message: e.to_string() })?;
                return ExtensionContext::new(g1, g2_alg, phi, psi, w, Some(gamma))
                    .map_err(|e| ParseError { line: 1, col: 1, message: e.to_string() });
            }
            "psi" => {
                if row.len() < 6 || row[3].text != ":" {
                    return lines.err(
                        row[0].line,
                        row[0].col,
                        "expected `psi <a> <b> : <x> <coeff> [; ...]`",
                    );
                }
                let a = parse_usize(&row[1])?;
                let b = parse_usize(&row[2])?;
                if a >= n2 || b >= n2 || a > b {
                    return lines.err(row[1].line, row[1].col, "psi indices must have a <= b < n2");
                }
                for (x, coeff, _, _) in parse_term_list(&row, 4, n1, &field)? {
                    psi[a][b][x] = coeff.clone();
                    if a != b {
                        let neg = sign_pp(g2_alg.space().parity(a), g2_alg.space().parity(b));
                        psi[b][a][x] = (-coeff).times_sign(neg);
                    }
                }
            }
            "w" => {
                if row.len() < 6 || row[3].text != ":" {
                    return lines.err(
                        row[0].line,
                        row[0].col,
                        "expected `w <i> <j> : <k> <coeff> [; ...]`",
                    );
                }
                let i = parse_usize(&row[1])?;
                let j = parse_usize(&row[2])?;
                if i >= n2 || j >= n2 || i > j {
                    return lines.err(row[1].line, row[1].col, "w indices must have i <= j < n2");
                }
                for (k, coeff, _, _) in parse_term_list(&row, 4, n2, &field)? {
                    wt[i][j][k] = coeff.clone();
                    if i != j {
                        let neg = sign_pp(g2_alg.space().parity(i), g2_alg.space().parity(j));
                        wt[j][i][k] = (-coeff).times_sign(neg);
                    }
                }
            }
            other => {
                return lines.err(row[0].line, row[0].col, format!("unexpected `{other}`"));
            }
        }
    }
}

pub fn serialize_context(ctx: &ExtensionContext) -> String {
    use std::fmt::Write;
    let n1 = ctx.g1.dim();
    let n2 = ctx.g2.dim();
    let mut scalars: Vec<&Scalar> = Vec::new();
    for t in ctx.g1.alg.tensor().iter().flatten().flatten() {
        scalars.push(t);
    }
    for t in ctx.g2.tensor().iter().flatten().flatten() {
        scalars.push(t);
    }
    let field = FieldSpec::covering(scalars.into_iter());
    let mut out = String::new();
    writeln!(out, "context-document v1").unwrap();
    match field {
        FieldSpec::Q => writeln!(out, "field Q").unwrap(),
        FieldSpec::QSqrt(d) => writeln!(out, "field Q_sqrt {d}").unwrap(),
    }
    writeln!(out, "g1 begin").unwrap();
    write_algebra_body(&mut out, &ctx.g1.alg);
    writeln!(out, "form").unwrap();
    write_matrix_rows(&mut out, ctx.g1.b.matrix());
    writeln!(out, "g1 end").unwrap();
    writeln!(out, "g2 begin").unwrap();
    write_algebra_body(&mut out, &ctx.g2);
    writeln!(out, "g2 end").unwrap();
    for (a, p) in ctx.phi.iter().enumerate() {
        writeln!(out, "phi {a} begin").unwrap();
        write_matrix_rows(&mut out, p.matrix());
        writeln!(out, "phi {a} end").unwrap();
    }
    for a in 0..n2 {
        for b in a..n2 {
            if a == b && ctx.g2.space().parity(a) == Parity::Even {
                continue;
            }
            let v = &ctx.psi[a][b];
            let terms: Vec<String> = (0..n1)
                .filter(|&x| !v[x].is_zero())
                .map(|x| format!("{x} {}", v[x].canonical_string()))
                .collect();
            if !terms.is_empty() {
                writeln!(out, "psi {a} {b} : {}", terms.join(" ; ")).unwrap();
            }
        }
    }
    for i in 0..n2 {
        for j in i..n2 {
            if i == j && ctx.g2.space().parity(i) == Parity::Even {
                continue;
            }
            let terms: Vec<String> = (0..n2)
                .filter(|&k| !ctx.w.value(i, j, k).is_zero())
                .map(|k| format!("{k} {}", ctx.w.value(i, j, k).canonical_string()))
                .collect();
            if !terms.is_empty() {
                writeln!(out, "w {i} {j} : {}", terms.join(" ; ")).unwrap();
            }
        }
    }
    if let Some(gamma) = &ctx.gamma {
        writeln!(out, "gamma begin").unwrap();
        write_matrix_rows(&mut out, gamma.matrix());
        writeln!(out, "gamma end").unwrap();
    }
    writeln!(out, "end").unwrap();
    out
}

/// A parsed module document: acting algebra, module dims, action matrices,
/// and an invariant form on the module.
#[derive(Clone, Debug)]
pub struct ModuleDocument {
    pub field: FieldSpec,
    pub rep: Representation,
    pub form: GramForm,
}

pub fn parse_module(text: &str) -> PResult<ModuleDocument> {
    let mut lines = Lines::new(text);
    lines.expect_exact(&["module-document", "v1"])?;
    let field = parse_field_line(&mut lines)?;
    lines.expect_exact(&["algebra", "begin"])?;
    let alg = parse_algebra_body(&mut lines, &field)?;
    lines.expect_exact(&["algebra", "end"])?;
    let p = parse_keyed_usize(&mut lines, "module_even_dim")?;
    let q = parse_keyed_usize(&mut lines, "module_odd_dim")?;
    let module = SuperSpace::new(p, q);
    let md = p + q;
    let mut rho = Vec::with_capacity(alg.dim());
    for i in 0..alg.dim() {
        lines.expect_exact(&["rho", &i.to_string(), "begin"])?;
        let m = parse_matrix_rows(&mut lines, md, md, &field)?;
        lines.expect_exact(&["rho", &i.to_string(), "end"])?;
        rho.push(
            LinearMap::new(module.clone(), module.clone(), alg.space().parity(i), m)
                .map_err(|e| ParseError { line: 1, col: 1, message: format!("rho {i}: {e}") })?,
        );
    }
    lines.expect_exact(&["form"])?;
    let fm = parse_matrix_rows(&mut lines, md, md, &field)?;
    lines.expect_exact(&["end"])?;
    let rep = Representation::new(alg, module.clone(), rho)
        .map_err(|e| ParseError { line: 1, col: 1, message: e.to_string() })?;
    let form = GramForm::new(module, fm)
        .map_err(|e| ParseError { line: 1, col: 1, message: e.to_string() })?;
    Ok(ModuleDocument { field, rep, form })
}

pub fn serialize_module(rep: &Representation, form: &GramForm) -> String {
    use std::fmt::Write;
    let mut out = String::new();
    writeln!(out, "module-document v1").unwrap();
    let mut scalars: Vec<&Scalar> = Vec::new();
    for t in rep.algebra.tensor().iter().flatten().flatten() {
        scalars.push(t);
    }
    let field = FieldSpec::covering(scalars.into_iter());
    match field {
        FieldSpec::Q => writeln!(out, "field Q").unwrap(),
        FieldSpec::QSqrt(d) => writeln!(out, "field Q_sqrt {d}").unwrap(),
    }
    writeln!(out, "algebra begin").unwrap();
    write_algebra_body(&mut out, &rep.algebra);
    writeln!(out, "algebra end").unwrap();
    writeln!(out, "module_even_dim {}", rep.module.even_dim()).unwrap();
    writeln!(out, "module_odd_dim {}", rep.module.odd_dim()).unwrap();
    for (i, r) in rep.rho.iter().enumerate() {
        writeln!(out, "rho {i} begin").unwrap();
        write_matrix_rows(&mut out, r.matrix());
        writeln!(out, "rho {i} end").unwrap();
    }
    writeln!(out, "form").unwrap();
    write_matrix_rows(&mut out, form.matrix());
    writeln!(out, "end").unwrap();
    out
}

/// A scalar 2-cochain document (used for S_phi checks).
pub fn parse_cochain2(text: &str, space: &SuperSpace) -> PResult<ScalarCochain> {
    let mut lines = Lines::new(text);
    lines.expect_exact(&["cochain2-document", "v1"])?;
    let field = parse_field_line(&mut lines)?;
    let p = parse_keyed_usize(&mut lines, "even_dim")?;
    let q = parse_keyed_usize(&mut lines, "odd_dim")?;
    if p != space.even_dim() || q != space.odd_dim() {
        return lines.err(1, 1, "cochain dimensions do not match the algebra");
    }
    let mut comps: Vec<(Vec<usize>, Scalar)> = Vec::new();
    loop {
        let row = lines.next_line()?;
        match row[0].text.as_str() {
            "end" => break,
            "phi" => {
                if row.len() != 4 {
                    return lines.err(row[0].line, row[0].col, "expected `phi <i> <j> <coeff>`");
                }
                let i = parse_usize(&row[1])?;
                let j = parse_usize(&row[2])?;
                let coeff = parse_coeff(&row[3], &field)?;
                comps.push((vec![i, j], coeff));
            }
            other => return lines.err(row[0].line, row[0].col, format!("unexpected `{other}`")),
        }
    }
    ScalarCochain::from_components(space.clone(), 2, &comps)
        .map_err(|e| ParseError { line: 1, col: 1, message: e.to_string() })
}

pub fn serialize_cochain2(phi: &ScalarCochain) -> String {
    use std::fmt::Write;
    assert_eq!(phi.degree(), 2);
    let sp = phi.space();
    let mut out = String::new();
    writeln!(out, "cochain2-document v1").unwrap();
    writeln!(out, "field Q").unwrap();
    writeln!(out, "even_dim {}", sp.even_dim()).unwrap();
    writeln!(out, "odd_dim {}", sp.odd_dim()).unwrap();
    for t in crate::cochain::canonical_tuples(sp, 2) {
        let v = phi.value(&t);
        if !v.is_zero() {
            writeln!(out, "phi {} {} {}", t[0], t[1], v.canonical_string()).unwrap();
        }
    }
    writeln!(out, "end").unwrap();
    out
}
