use std::collections::BTreeMap;

use rayon::prelude::*;

use super::{degree_window, diagonal_t_range, Rows, SlopePoint, StableBasisTable, StableError, WallCrossMatrix};
use crate::combin::dominance_leq;
use crate::exact::{Coeff, Exp, Laurent, Monomial, RatFunc};
use crate::keyed::KeyedMatrix;
use crate::linalg::{Matrix, SparseSolution, SparseSystem};

const RETRIES: i64 = 3;

fn int(e: Exp) -> Result<i64, StableError> {
    if e.is_integer() {
        Ok(e.to_integer())
    } else {
        Err(StableError::NotLaurent(format!("fractional exponent {e}")))
    }
}

fn t_range<C: Coeff>(p: &Laurent<C>) -> Result<(i64, i64), StableError> {
    let (a, b) = p.t_degree_range()?;
    Ok((int(a)?, int(b)?))
}

fn q_range<C: Coeff>(rows: &Rows<C>) -> Result<(i64, i64), StableError> {
    let mut out: Option<(i64, i64)> = None;
    for x in rows.iter().flatten().filter(|x| !x.is_zero()) {
        let (a, b) = x.q_degree_range()?;
        let (a, b) = (int(a)?, int(b)?);
        out = Some(out.map_or((a, b), |(lo, hi)| (lo.min(a), hi.max(b))));
    }
    Ok(out.unwrap_or((0, 0)))
}

enum Solved<C: Coeff> {
    Value(Laurent<C>),
    Inconsistent,
    Free(Monomial),
}

/// One off-diagonal coefficient of a crossing: the `x` for which the
/// `t`-degrees of `e + x g` fit in `window`.
struct Entry<'a, C: Coeff> {
    e: &'a Laurent<C>,
    g: &'a Laurent<C>,
    d: (i64, i64),
    window: (i64, i64),
}

impl<C: Coeff> Entry<'_, C> {
    /// Unknowns are the coefficients of `t^j q^k` in `x`, with `j` bounded by
    /// the window arithmetic and `k` in `qs`; one equation per monomial of
    /// out-of-window `t`-degree.
    fn solve_linear(&self, qs: (i64, i64)) -> Result<Solved<C>, StableError> {
        let (lo, hi) = self.window;
        let (d0, d1) = self.d;
        let (bot, top) = t_range(self.e)?;
        let (jmin, jmax) = (lo.min(bot) - d0, hi.max(top) - d1);
        let nq = (qs.1 - qs.0 + 1) as usize;
        let nj = (jmax - jmin + 1).max(0) as usize;
        let outside = |s: i64| s < lo || s > hi;
        let mut g = Vec::new();
        for (m, c) in self.g.terms() {
            g.push((int(m.q)?, int(m.t)?, c.clone()));
        }
        let mut eqs: BTreeMap<(i64, i64), (BTreeMap<usize, C>, C)> = BTreeMap::new();
        for (m, c) in self.e.terms() {
            let (q, t) = (int(m.q)?, int(m.t)?);
            if outside(t) {
                eqs.entry((q, t)).or_insert_with(|| (BTreeMap::new(), C::zero())).1 = -c.clone();
            }
        }
        for jj in 0..nj {
            let j = jmin + jj as i64;
            for kk in 0..nq {
                let k = qs.0 + kk as i64;
                let var = jj * nq + kk;
                for (a, s, c) in &g {
                    if outside(j + s) {
                        let row = &mut eqs.entry((k + a, j + s)).or_insert_with(|| (BTreeMap::new(), C::zero())).0;
                        let v = row.remove(&var).unwrap_or_else(C::zero) + c.clone();
                        row.insert(var, v);
                    }
                }
            }
        }
        let mut sys = SparseSystem::new(nj * nq);
        for (_, (row, rhs)) in eqs {
            sys.add_equation(row, rhs);
        }
        let at = |var: usize| Monomial::int(qs.0 + (var % nq) as i64, jmin + (var / nq) as i64);
        Ok(match sys.solve() {
            SparseSolution::Unique(x) => Solved::Value(Laurent::from_terms(
                x.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(var, c)| (at(var), c)),
            )),
            SparseSolution::Inconsistent => Solved::Inconsistent,
            SparseSolution::Free(var) => Solved::Free(at(var)),
        })
    }

    /// Euclidean division in `t`: clear the top degrees with the leading
    /// coefficient of `g`, then the bottom ones with its trailing one.
    fn divide(&self) -> Result<Laurent<C>, StableError> {
        let (lo, hi) = self.window;
        let (d0, d1) = self.d;
        let gc = self.g.t_coefficients();
        let lead = &gc[&Exp::from_integer(d1)];
        let trail = &gc[&Exp::from_integer(d0)];
        let mut e = self.e.clone();
        let mut x = Laurent::zero();
        while !e.is_zero() {
            let (bot, top) = t_range(&e)?;
            let (k, base, d) = if top > hi {
                (top, lead, d1)
            } else if bot < lo {
                (bot, trail, d0)
            } else {
                break;
            };
            let c = e.t_coefficients()[&Exp::from_integer(k)]
                .div_exact(base)
                .ok_or_else(|| StableError::NotLaurent(format!("{base} does not divide")))?;
            let c = (-c).mul_monomial(Monomial::int(0, k - d));
            e += &(&c * self.g);
            x += &c;
        }
        Ok(x)
    }
}

/// Crosses the wall `w` from the side the table sits on.
///
/// For each `lambda` the new row is `old_lambda + sum B_lambda^nu old_nu`,
/// solved for `nu` in decreasing order so that each step is a linear system
/// in the coefficients of one `B_lambda^nu`. The Euclidean division in `t`
/// gives the same answer and is checked against it.
pub fn cross_wall<C: Coeff>(
    table: &StableBasisTable<C>,
    w: Exp,
) -> Result<(StableBasisTable<C>, WallCrossMatrix<C>), StableError> {
    if table.slope.m != w || table.renormalized {
        return Err(StableError::NotAdjacent(w));
    }
    let target = SlopePoint::new(w, table.slope.side.flip());
    let order = table.order().to_vec();
    let p = order.len();
    let old = table.rows()?;
    let (qlo, qhi) = q_range(&old)?;
    let margin = 2 * *w.denom();
    let diag: Vec<(i64, i64)> = order.iter().map(diagonal_t_range).collect();

    let solved: Vec<(Vec<Laurent<C>>, Vec<Laurent<C>>)> = (0..p)
        .into_par_iter()
        .map(|l| {
            let lambda = &order[l];
            let mut row = old[l].clone();
            let mut b = vec![Laurent::zero(); p];
            b[l] = Laurent::one();
            for nu in l + 1..p {
                if row[nu].is_zero() || !dominance_leq(&order[nu], lambda) {
                    continue;
                }
                let window = degree_window(lambda, &order[nu], target);
                debug_assert_eq!(window.1 - window.0, diag[nu].1 - diag[nu].0 - 1);
                let (bot, top) = t_range(&row[nu])?;
                if bot >= window.0 && top <= window.1 {
                    continue;
                }
                let entry = Entry { e: &row[nu], g: &old[nu][nu], d: diag[nu], window };
                let mut x = None;
                for retry in 0..=RETRIES {
                    let wide = margin * (retry + 1);
                    match entry.solve_linear((qlo - wide, qhi + wide))? {
                        Solved::Value(v) => {
                            x = Some(v);
                            break;
                        }
                        Solved::Inconsistent => continue,
                        Solved::Free(witness) => {
                            return Err(StableError::Uniqueness {
                                wall: w,
                                lambda: lambda.clone(),
                                mu: order[nu].clone(),
                                witness,
                            })
                        }
                    }
                }
                let x = x.ok_or_else(|| StableError::AxiomsUnsatisfiable {
                    wall: w,
                    lambda: lambda.clone(),
                    mu: order[nu].clone(),
                })?;
                if entry.divide()? != x {
                    return Err(StableError::SolverMismatch { wall: w, lambda: lambda.clone(), mu: order[nu].clone() });
                }
                for mu in nu..p {
                    if !old[nu][mu].is_zero() {
                        row[mu] += &(&x * &old[nu][mu]);
                    }
                }
                b[nu] = x;
            }
            Ok((row, b))
        })
        .collect::<Result<_, StableError>>()?;
    let (rows, b): (Rows<C>, Rows<C>) = solved.into_iter().unzip();

    for (l, lambda) in order.iter().enumerate() {
        for (nu, mu) in order.iter().enumerate() {
            let dc = Exp::from_integer(lambda.content() - mu.content());
            if !b[l][nu].is_zero() && !(w * dc).is_integer() {
                return Err(StableError::BlockSupport { wall: w, lambda: lambda.clone(), mu: mu.clone() });
            }
        }
    }

    let next = StableBasisTable::from_rows(table.n, target, order.clone(), &rows);
    next.check()?;

    // b expresses the new basis in the old one; the stored matrix always
    // expresses the w-ε basis in the w+ε basis.
    let plus_in_old = target.side == super::Side::Plus;
    let wmat = if plus_in_old { unitriangular_inverse(&b) } else { b };
    let m = Matrix::from_fn(p, p, |i, j| RatFunc::from_poly(wmat[j][i].clone()));
    let matrix = WallCrossMatrix { n: table.n, wall: w, matrix: KeyedMatrix::from_matrix(order, m) };
    Ok((next, matrix))
}

/// Inverse of a unitriangular matrix given by rows with support at and
/// after the diagonal.
fn unitriangular_inverse<C: Coeff>(b: &Rows<C>) -> Rows<C> {
    let p = b.len();
    let mut x: Rows<C> = vec![Vec::new(); p];
    for l in (0..p).rev() {
        let mut row = vec![Laurent::zero(); p];
        row[l] = Laurent::one();
        for nu in l + 1..p {
            if b[l][nu].is_zero() {
                continue;
            }
            for mu in nu..p {
                if !x[nu][mu].is_zero() {
                    row[mu] -= &(&b[l][nu] * &x[nu][mu]);
                }
            }
        }
        x[l] = row;
    }
    x
}
