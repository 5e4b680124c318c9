//! JSON, CSV and LaTeX renderings of the command outputs.

use anyhow::Result;
use num_traits::{One, Signed, Zero};
use serde_json::Value;
use wallcross::exact::{Coordinates, Exp, Laurent};
use wallcross::keyed::KeyedMatrix;
use wallcross::symfunc::SymFunc;
use wallcross::verify::Report;
use wallcross::{Partition, Rational, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Latex,
}

pub fn json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

fn csv_rows(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(&r)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

pub fn matrix_csv(m: &KeyedMatrix<Rational>) -> Result<String> {
    let rows = m.entries().map(|(l, mu, v)| vec![l.to_string(), mu.to_string(), v.to_string()]);
    csv_rows(&["lambda", "mu", "value"], rows)
}

pub fn symfuncs_csv(fs: &[(Partition, SymFunc<Rational>)]) -> Result<String> {
    let rows = fs.iter().flat_map(|(l, f)| {
        let basis = f.basis().label();
        f.coeffs().map(move |(mu, v)| vec![l.to_string(), format!("{basis}{mu}"), v.to_string()]).collect::<Vec<_>>()
    });
    csv_rows(&["lambda", "basis_element", "value"], rows)
}

pub fn reports_csv(rs: &[Report]) -> Result<String> {
    let rows = rs.iter().map(|r| {
        vec![
            r.check.clone(),
            r.params.to_string(),
            r.status.label().to_string(),
            r.witness.clone().unwrap_or_default(),
            r.millis.to_string(),
        ]
    });
    csv_rows(&["check", "params", "status", "witness", "millis"], rows)
}

fn exponent(e: Exp) -> String {
    if e.is_integer() {
        e.to_string()
    } else {
        format!("{}/{}", e.numer(), e.denom())
    }
}

fn power(var: &str, e: Exp) -> String {
    if e.is_one() {
        var.to_string()
    } else {
        format!("{var}^{{{}}}", exponent(e))
    }
}

/// `x^a y^b` with negative powers moved under a fraction bar.
fn monomial_tex(vars: [&str; 2], exps: [Exp; 2], coeff: &Rational) -> String {
    let mut num = Vec::new();
    let mut den = Vec::new();
    if !coeff.numer().is_one() || exps.iter().all(Zero::is_zero) && coeff.denom().is_one() {
        num.push(coeff.numer().to_string());
    }
    if !coeff.denom().is_one() {
        den.push(coeff.denom().to_string());
    }
    for (v, &e) in vars.iter().zip(&exps) {
        if e > Exp::zero() {
            num.push(power(v, e));
        } else if e < Exp::zero() {
            den.push(power(v, -e));
        }
    }
    let num = if num.is_empty() { "1".to_string() } else { num.join(" ") };
    if den.is_empty() {
        num
    } else {
        format!("\\frac{{{num}}}{{{}}}", den.join(" "))
    }
}

fn laurent_tex(p: &Laurent<Rational>, vars: [&str; 2]) -> String {
    if p.is_zero() {
        return "0".into();
    }
    // Highest power of the second variable first, then of the first.
    let mut terms: Vec<_> = p.terms().collect();
    terms.sort_by(|(a, _), (b, _)| (b.t, b.q).cmp(&(a.t, a.q)));
    let mut out = String::new();
    for (i, (m, c)) in terms.into_iter().enumerate() {
        let body = monomial_tex(vars, [m.q, m.t], &c.abs());
        match (i, c.is_negative()) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        out.push_str(&body);
    }
    out
}

/// A scalar in the variables it actually uses: `q` when it is free of `t`
/// (Fock space quantities), `q_1, q_2` otherwise.
pub fn scalar_tex(x: &Scalar) -> String {
    let t_free = x.numer().terms().chain(x.denom().terms()).all(|(m, _)| m.t.is_zero());
    let (x, vars) =
        if t_free { (x.clone(), ["q", "t"]) } else { (x.change_coordinates(Coordinates::QTToQ1Q2), ["q_1", "q_2"]) };
    let num = laurent_tex(x.numer(), vars);
    if x.denom().is_one() {
        num
    } else {
        format!("\\frac{{{num}}}{{{}}}", laurent_tex(x.denom(), vars))
    }
}

fn pmatrix(rows: Vec<Vec<String>>) -> String {
    let body: Vec<String> = rows.into_iter().map(|r| r.join(" & ")).collect();
    format!("\\begin{{pmatrix}}\n{}\n\\end{{pmatrix}}\n", body.join(" \\\\\n"))
}

/// Column `lambda` holds the entries `(lambda, mu)`, the usual layout of
/// transition matrices.
pub fn matrix_latex(m: &KeyedMatrix<Rational>) -> String {
    let order = m.order();
    pmatrix(order.iter().map(|mu| order.iter().map(|l| scalar_tex(&m.get(l, mu))).collect()).collect())
}

/// One row per function, one column per basis element of the common order.
pub fn symfuncs_latex(fs: &[(Partition, SymFunc<Rational>)], order: &[Partition]) -> String {
    pmatrix(fs.iter().map(|(_, f)| order.iter().map(|mu| scalar_tex(&f.coeff(mu))).collect()).collect())
}

pub fn reports_latex(rs: &[Report]) -> String {
    let mut s = String::from("\\begin{tabular}{llll}\ncheck & parameters & status & witness \\\\\n\\hline\n");
    for r in rs {
        let witness = r.witness.clone().unwrap_or_default().replace('^', "\\^{}").replace('|', "\\textbar{}");
        s.push_str(&format!("{} & \\verb!{}! & {} & {witness} \\\\\n", r.check, r.params, r.status.label()));
    }
    s.push_str("\\end{tabular}\n");
    s
}
