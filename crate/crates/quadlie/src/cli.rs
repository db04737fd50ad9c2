//! Command-line driver.
//!
//! Exit codes: 0 success, 1 validation failure (report printed),
//! 2 usage or parse error, 3 field extension required.

use crate::algebra::{validate_representation, validate_superalgebra};
use crate::catalog;
use crate::cochain::{self, DualValued2Cochain};
use crate::decompose::{self, CentralDescent, SolvableTstar};
use crate::doc;
use crate::extend;
use crate::form::validate_quadratic;
use crate::matrix::{Matrix, SVec};
use crate::report::Report;
use crate::scalar::{FieldCtx, Scalar};
use crate::space::Subspace;
use crate::Error;
use clap::{Parser, Subcommand};
use std::path::PathBuf;

#[derive(Parser)]
#[command(name = "quadlie", version, about = "Exact constructions and decompositions of quadratic Lie superalgebras")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Validate an algebra document (and its scalar product when present)
    Verify {
        /// Document path, or `-` for stdin
        input: Option<String>,
        #[arg(long)]
        algebra: Option<String>,
    },
    /// Build a generalized double extension from a context document
    Dext {
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a T*-extension of an algebra by a cocycle (`zero` for w = 0)
    Tstar {
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        cocycle: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a one-dimensional odd extension from a context document
    Oddext {
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Extract an extension context from an isotropic graded ideal
    Decompose {
        #[arg(long)]
        algebra: String,
        /// Semicolon-separated coordinate vectors, e.g. "1,0,0;0,1,0"
        #[arg(long)]
        ideal: Option<String>,
        /// Search for a central isotropic line instead
        #[arg(long)]
        auto: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, allow_negative_numbers = true)]
        field_ext: Option<i64>,
    },
    /// Present a solvable quadratic algebra as (an ideal of) a T*-extension
    SolvableToTstar {
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, allow_negative_numbers = true)]
        field_ext: Option<i64>,
    },
    /// Write a named catalog fixture (`gn` and `en` take --n)
    Catalog {
        name: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Isotropic-submodule and filtration diagnostics on a module document
    DufloCheck {
        #[arg(long)]
        algebra: String,
        #[arg(long, allow_negative_numbers = true)]
        field_ext: Option<i64>,
    },
    /// Cocycle checks: supercyclicity, closedness, coboundary, S_phi
    Cocycle {
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        cocycle: String,
        /// Second cocycle: triggers the coboundary and S_phi checks
        #[arg(long)]
        cocycle2: Option<String>,
        /// Scalar 2-cochain for S_phi (defaults to the solved coboundary)
        #[arg(long)]
        phi: Option<String>,
    },
}

pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // clap uses exit code 2 for usage errors, 0 for --help/--version
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(CliError::Parse(e)) => {
            eprintln!("parse error at {e}");
            2
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            2
        }
        Err(CliError::FieldExtension(msg)) => {
            eprintln!("{msg}");
            3
        }
        Err(CliError::Failed(msg)) => {
            eprintln!("{msg}");
            1
        }
        Err(CliError::Io(e)) => {
            eprintln!("io error: {e}");
            2
        }
    }
}

enum CliError {
    Parse(doc::ParseError),
    Usage(String),
    Failed(String),
    FieldExtension(String),
    Io(std::io::Error),
}

impl From<doc::ParseError> for CliError {
    fn from(e: doc::ParseError) -> Self {
        CliError::Parse(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match &e {
            Error::FieldExtensionRequired { .. } | Error::IncompatibleExtension { .. } => {
                CliError::FieldExtension(e.to_string())
            }
            _ => CliError::Failed(e.to_string()),
        }
    }
}

type CliResult = std::result::Result<i32, CliError>;

fn read_input(path: &str) -> std::result::Result<String, CliError> {
    if path == "-" {
        use std::io::Read;
        let mut buf = String::new();
        std::io::stdin().read_to_string(&mut buf)?;
        Ok(buf)
    } else {
        Ok(std::fs::read_to_string(path)?)
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> std::result::Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn print_report(title: &str, report: &Report) {
    println!("== {title}");
    print!("{report}");
}

/// Validates a constructed quadratic algebra before anything is written.
fn revalidate(
    q: &crate::form::QuadraticSuperAlgebra,
) -> std::result::Result<(Report, Report), CliError> {
    let ra = validate_superalgebra(&q.alg);
    let rb = validate_quadratic(&q.alg, &q.b);
    if !ra.all_passed() || !rb.all_passed() {
        return Err(CliError::Failed(format!(
            "constructed algebra failed re-validation:\n{ra}{rb}"
        )));
    }
    Ok((ra, rb))
}

fn parse_ideal_vectors(
    spec: &str,
    dim: usize,
    d: Option<i64>,
) -> std::result::Result<Vec<SVec>, CliError> {
    let mut out = Vec::new();
    for (vi, vtext) in spec.split(';').enumerate() {
        let coords: Vec<&str> = vtext.split(',').collect();
        if coords.len() != dim {
            return Err(CliError::Usage(format!(
                "ideal vector {vi} has {} coordinates, expected {dim}",
                coords.len()
            )));
        }
        let mut v = Vec::with_capacity(dim);
        for c in coords {
            let c = c.trim();
            let s = if let Ok(i) = c.parse::<i64>() {
                Scalar::from_int(i)
            } else {
                Scalar::parse_canonical(c, d)
                    .map_err(|m| CliError::Usage(format!("bad coordinate `{c}`: {m}")))?
            };
            v.push(s);
        }
        out.push(v);
    }
    Ok(out)
}

fn load_quadratic(
    path: &str,
) -> std::result::Result<(doc::AlgebraDocument, crate::form::QuadraticSuperAlgebra), CliError> {
    let text = read_input(path)?;
    let parsed = doc::parse_algebra(&text)?;
    let q = parsed
        .quadratic()
        .ok_or_else(|| CliError::Usage("this command needs a document with a form".into()))?;
    Ok((parsed, q))
}

fn dispatch(cli: Cli) -> CliResult {
    match cli.cmd {
        Cmd::Verify { input, algebra } => {
            let path = algebra.or(input).unwrap_or_else(|| "-".into());
            let text = read_input(&path)?;
            let parsed = doc::parse_algebra(&text)?;
            let ra = validate_superalgebra(&parsed.algebra);
            print_report(&format!("superalgebra axioms ({})", parsed.name), &ra);
            let mut ok = ra.all_passed();
            if let Some(form) = &parsed.form {
                let rb = validate_quadratic(&parsed.algebra, form);
                print_report("invariant scalar product", &rb);
                ok &= rb.all_passed();
            }
            Ok(if ok { 0 } else { 1 })
        }
        Cmd::Dext { algebra, out } => {
            let text = read_input(&algebra)?;
            let ctx = doc::parse_context(&text)?;
            let report = extend::validate_context(&ctx)?;
            // stdout carries the constructed document; diagnostics go to stderr
            eprint!("{report}");
            if !report.all_passed() {
                return Ok(1);
            }
            let built = extend::generalized_double_extension(&ctx)?;
            revalidate(&built)?;
            emit(&out, &doc::serialize_algebra("dext", &built.alg, Some(&built.b)))?;
            Ok(0)
        }
        Cmd::Tstar { algebra, cocycle, out } => {
            let text = read_input(&algebra)?;
            let parsed = doc::parse_algebra(&text)?;
            let w = load_cocycle(&cocycle, parsed.algebra.space())?;
            let built = extend::tstar_extension(&parsed.algebra, &w)?;
            revalidate(&built)?;
            let name = format!("{}_tstar", parsed.name);
            emit(&out, &doc::serialize_algebra(&name, &built.alg, Some(&built.b)))?;
            Ok(0)
        }
        Cmd::Oddext { algebra, out } => {
            let text = read_input(&algebra)?;
            let ctx = doc::parse_context(&text)?;
            if ctx.g2.dim() != 1 || !ctx.g2.space().parity(0).is_odd() {
                return Err(CliError::Usage(
                    "oddext needs a context with one-dimensional odd g2".into(),
                ));
            }
            let built =
                extend::odd_line_extension(&ctx.g1, &ctx.phi[0], &ctx.psi[0][0])?;
            revalidate(&built)?;
            emit(&out, &doc::serialize_algebra("oddext", &built.alg, Some(&built.b)))?;
            Ok(0)
        }
        Cmd::Decompose { algebra, ideal, auto, out, field_ext } => {
            let (parsed, q) = load_quadratic(&algebra)?;
            let _field = initial_field(field_ext, &parsed)?;
            let result = if auto {
                match decompose::central_isotropic_descent(&q)? {
                    CentralDescent::OddLine { result, .. } => *result,
                    CentralDescent::EvenLine { result, .. } => *result,
                    CentralDescent::None { note } => {
                        return Err(CliError::Failed(format!(
                            "no central isotropic line: {note}"
                        )))
                    }
                }
            } else {
                let spec = ideal.ok_or_else(|| {
                    CliError::Usage("decompose needs --ideal or --auto".into())
                })?;
                let vectors = parse_ideal_vectors(&spec, q.dim(), parsed.field.d())?;
                let sub = Subspace::from_generators(q.space(), &vectors)?;
                decompose::extension_context_from_isotropic_ideal(&q, &sub)?
            };
            emit(&out, &doc::serialize_context(&result.context))?;
            println!("isometry begin");
            print_matrix(result.pi.matrix());
            println!("isometry end");
            print_report("verification", &result.report);
            Ok(if result.report.all_passed() { 0 } else { 1 })
        }
        Cmd::SolvableToTstar { algebra, out, field_ext } => {
            let (parsed, q) = load_quadratic(&algebra)?;
            let field = initial_field(field_ext, &parsed)?;
            match decompose::solvable_to_tstar(&q, field, true)? {
                SolvableTstar::Even { ideal, quotient, w, pi, tstar, field, report } => {
                    println!("case even");
                    println!("ideal dimension {}", ideal.dim());
                    if let Some(d) = field.d() {
                        println!("field extension sqrt({d})");
                    }
                    revalidate(&tstar)?;
                    emit(&out, &doc::serialize_algebra("tstar_presentation", &tstar.alg, Some(&tstar.b)))?;
                    print!("{}", doc::serialize_algebra("quotient", &quotient, None));
                    print!("{}", doc::serialize_cocycle(quotient.space(), &w));
                    println!("isometry begin");
                    print_matrix(pi.matrix());
                    println!("isometry end");
                    print_report("verification", &report);
                    Ok(if report.all_passed() { 0 } else { 1 })
                }
                SolvableTstar::Odd {
                    ideal,
                    ambient,
                    embedding,
                    alpha,
                    quotient,
                    w,
                    pi_ambient,
                    tstar,
                    field,
                    report,
                } => {
                    println!("case odd");
                    println!("ideal dimension {}", ideal.dim());
                    println!("alpha {}", alpha.canonical_string());
                    if let Some(d) = field.d() {
                        println!("field extension sqrt({d})");
                    }
                    revalidate(&ambient)?;
                    revalidate(&tstar)?;
                    emit(&out, &doc::serialize_algebra("ambient", &ambient.alg, Some(&ambient.b)))?;
                    print!("{}", doc::serialize_algebra("tstar_presentation", &tstar.alg, Some(&tstar.b)));
                    print!("{}", doc::serialize_algebra("quotient", &quotient, None));
                    print!("{}", doc::serialize_cocycle(quotient.space(), &w));
                    println!("embedding begin");
                    print_matrix(embedding.matrix());
                    println!("embedding end");
                    println!("isometry begin");
                    print_matrix(pi_ambient.matrix());
                    println!("isometry end");
                    print_report("verification", &report);
                    Ok(if report.all_passed() { 0 } else { 1 })
                }
            }
        }
        Cmd::Catalog { name, n, out } => {
            let item = match (name.as_str(), n) {
                ("gn", Some(n)) => catalog::CatalogItem::Plain(catalog::make_gn(n)?),
                ("en", Some(n)) => catalog::CatalogItem::Quadratic(catalog::make_en(n)?),
                ("gn" | "en", None) => {
                    return Err(CliError::Usage(format!("catalog {name} needs --n")))
                }
                ("cartan_w", Some(n)) => {
                    catalog::CatalogItem::Plain(catalog::make_cartan_w(n)?)
                }
                (other, _) => catalog::make_standard(other).map_err(|e| {
                    CliError::Usage(format!(
                        "{e}; known names: gn, en, cartan_w (with --n) or {}",
                        catalog::catalog_names().join(", ")
                    ))
                })?,
            };
            let full_name = match n {
                Some(n) => format!("{name}{n}"),
                None => name,
            };
            let text = match &item {
                catalog::CatalogItem::Plain(a) => {
                    let r = validate_superalgebra(a);
                    if !r.all_passed() {
                        return Err(CliError::Failed(format!("fixture failed validation:\n{r}")));
                    }
                    doc::serialize_algebra(&full_name, a, None)
                }
                catalog::CatalogItem::Quadratic(q) => {
                    revalidate(q)?;
                    doc::serialize_algebra(&full_name, &q.alg, Some(&q.b))
                }
            };
            emit(&out, &text)?;
            Ok(0)
        }
        Cmd::DufloCheck { algebra, field_ext } => {
            let text = read_input(&algebra)?;
            let module = doc::parse_module(&text)?;
            let field = match field_ext {
                Some(d) => FieldCtx::with_sqrt(d)?,
                None => FieldCtx::rational(),
            };
            let mut ok = true;
            let rrep = validate_representation(&module.rep);
            print_report("representation", &rrep);
            ok &= rrep.all_passed();
            let invariant = decompose::form_is_invariant(&module.rep, &module.form);
            println!("{}  form_invariant", if invariant { "PASS" } else { "FAIL" });
            ok &= invariant;
            if module.rep.module.dim() >= 2 {
                match decompose::isotropic_submodule(&module.rep, &module.form, field, false) {
                    Ok((sub, f2)) => {
                        println!("PASS  isotropic_submodule  dim={}", sub.dim());
                        if let Some(d) = f2.d() {
                            println!("note: field extension sqrt({d}) active");
                        }
                    }
                    Err(Error::FieldExtensionRequired { d }) => {
                        return Err(CliError::FieldExtension(format!(
                            "field extension required: {d}"
                        )))
                    }
                    Err(e) => {
                        println!("FAIL  isotropic_submodule  [{e}]");
                        ok = false;
                    }
                }
            } else {
                // one-dimensional module: the base case requires triviality
                let trivial = module
                    .rep
                    .rho
                    .iter()
                    .all(|r| r.matrix().is_zero());
                println!("{}  one_dimensional_trivial", if trivial { "PASS" } else { "FAIL" });
                ok &= trivial;
            }
            // filtration diagnostics with a deterministic complement vector
            let l = &module.rep.algebra;
            let derived = l.derived_subalgebra()?;
            if derived.dim() < l.dim() && l.dim() > 0 {
                let t_coord = *derived.complement_coords().last().unwrap();
                let t_vec = l.space().unit(t_coord);
                // W: a simple submodule under the codimension-one ideal
                match auto_filtration(&module, &t_vec, &field) {
                    Ok(filt) => {
                        println!(
                            "filtration M={} dims={:?}",
                            filt.m,
                            filt.chain.iter().map(Subspace::dim).collect::<Vec<_>>()
                        );
                        print_report("filtration", &filt.report);
                        ok &= filt.report.all_passed();
                    }
                    Err(e) => {
                        println!("note: filtration skipped ({e})");
                    }
                }
            }
            Ok(if ok { 0 } else { 1 })
        }
        Cmd::Cocycle { algebra, cocycle, cocycle2, phi } => {
            let text = read_input(&algebra)?;
            let parsed = doc::parse_algebra(&text)?;
            let g2 = &parsed.algebra;
            let w1 = load_cocycle(&cocycle, g2.space())?;
            let r1 = cochain::cocycle_report(g2, &w1);
            print_report("cocycle w1", &r1);
            let mut ok = r1.all_passed();
            if let Some(c2) = cocycle2 {
                let w2 = load_cocycle(&c2, g2.space())?;
                let r2 = cochain::cocycle_report(g2, &w2);
                print_report("cocycle w2", &r2);
                ok &= r2.all_passed();
                if ok {
                    let h1 = cochain::hat_correspondence(g2, &w1)?;
                    let h2 = cochain::hat_correspondence(g2, &w2)?;
                    let diff = h1.sub(&h2);
                    let solved = cochain::is_coboundary_3(g2, &diff)?;
                    match &solved {
                        Some(p) => {
                            println!("coboundary yes");
                            print!("{}", doc::serialize_cochain2(p));
                        }
                        None => println!("coboundary no"),
                    }
                    let phi_cochain = match phi {
                        Some(path) => {
                            let text = read_input(&path)?;
                            Some(doc::parse_cochain2(&text, g2.space())?)
                        }
                        None => solved.clone(),
                    };
                    if let Some(p) = phi_cochain {
                        match cochain::s_phi_isometry(g2, &w1, &w2, &p)? {
                            cochain::SPhiOutcome::Isometry(map) => {
                                println!("s_phi isometry");
                                print_matrix(map.matrix());
                            }
                            cochain::SPhiOutcome::Mismatch(rep) => {
                                println!("s_phi mismatch");
                                print_report("s_phi", &rep);
                                ok = false;
                            }
                        }
                    } else {
                        println!("s_phi skipped: no phi available (difference is not a coboundary)");
                        ok = false;
                    }
                }
            }
            Ok(if ok { 0 } else { 1 })
        }
    }
}

fn auto_filtration(
    module: &doc::ModuleDocument,
    t_vec: &SVec,
    field: &FieldCtx,
) -> crate::Result<decompose::DufloFiltration> {
    // h-stable simple W: compute h as in the filtration, restrict, search
    let l = &module.rep.algebra;
    let derived = l.derived_subalgebra()?;
    let red = derived.reduce(t_vec);
    let t_star = red
        .iter()
        .position(|s| !s.is_zero())
        .ok_or_else(|| Error::Validation("T lies in [L, L]".into()))?;
    let n_l = l.dim();
    let mut row = crate::matrix::svec_zero(n_l);
    for i in 0..n_l {
        row[i] = derived.reduce(&l.space().unit(i))[t_star].clone();
    }
    let h_gens = Matrix::from_rows(vec![row]).kernel_basis();
    let h_sub = Subspace::from_generators(l.space(), &h_gens)?;
    let (h_alg, _) = crate::algebra::subalgebra_on(l, &h_sub)?;
    let h_rho: Vec<crate::space::LinearMap> = h_sub
        .basis_rows()
        .iter()
        .enumerate()
        .map(|(r, hrow)| {
            let m = module.rep.act(hrow);
            crate::space::LinearMap::new(
                module.rep.module.clone(),
                module.rep.module.clone(),
                h_alg.space().parity(r),
                m.matrix().clone(),
            )
        })
        .collect::<crate::Result<_>>()?;
    let h_rep =
        crate::algebra::Representation::new(h_alg, module.rep.module.clone(), h_rho)?;
    let w = decompose::simple_submodule(&h_rep, field)?;
    decompose::duflo_filtration(&module.rep, t_vec, &w)
}

fn load_cocycle(
    spec: &str,
    space: &crate::space::SuperSpace,
) -> std::result::Result<DualValued2Cochain, CliError> {
    if spec == "zero" {
        return Ok(DualValued2Cochain::zero(space.clone()));
    }
    let text = read_input(spec)?;
    let parsed = doc::parse_cocycle(&text)?;
    parsed.to_cochain(space).map_err(CliError::Usage)
}

fn initial_field(
    flag: Option<i64>,
    parsed: &doc::AlgebraDocument,
) -> std::result::Result<FieldCtx, CliError> {
    let mut field = match parsed.field {
        doc::FieldSpec::Q => FieldCtx::rational(),
        doc::FieldSpec::QSqrt(d) => FieldCtx::with_sqrt(d)?,
    };
    if let Some(d) = flag {
        let requested = FieldCtx::with_sqrt(d)?;
        if let Some(active) = field.d() {
            if active != d {
                return Err(CliError::FieldExtension(format!(
                    "incompatible field extensions: document uses sqrt({active}), flag requests sqrt({d})"
                )));
            }
        }
        field = requested;
    }
    Ok(field)
}

fn print_matrix(m: &Matrix) {
    for r in 0..m.rows() {
        let row: Vec<String> = (0..m.cols()).map(|c| m.at(r, c).canonical_string()).collect();
        println!("{}", row.join(" "));
    }
}
