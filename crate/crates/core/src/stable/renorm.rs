use std::collections::{BTreeSet, HashMap};

use num_traits::Zero;

use super::StableError;
use crate::combin::{Cell, Partition};
use crate::exact::{Exp, Monomial};

/// `r_lambda^m = chi_lambda^m · prod over ribbons of prod_j q^(#_j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RenormFactor {
    pub lambda: Partition,
    pub m: Exp,
    pub value: Monomial,
}

/// `q`-exponent contributed by one ribbon: walking from its north-west end,
/// a step right at position `j` gives `mj - floor(mj)`, a step down
/// `ceil(mj) - mj`.
fn ribbon_exponent(cells: &[Cell], m: Exp) -> Exp {
    let mut cells = cells.to_vec();
    cells.sort_by_key(|c| c.content());
    let mut e = Exp::zero();
    for (j, w) in cells.windows(2).enumerate() {
        let mj = m * Exp::from_integer(j as i64 + 1);
        let (a, b) = (w[0], w[1]);
        if b.x == a.x + 1 && b.y == a.y {
            e += mj - mj.floor();
        } else if b.x == a.x && b.y + 1 == a.y {
            e += mj.ceil() - mj;
        } else {
            panic!("cells {a:?} and {b:?} are not consecutive in a ribbon");
        }
    }
    e
}

/// Every total exponent reachable by peeling `b`-ribbons down to the core.
fn ribbon_totals(lambda: &Partition, b: usize, m: Exp, memo: &mut HashMap<Partition, BTreeSet<Exp>>) -> BTreeSet<Exp> {
    if let Some(s) = memo.get(lambda) {
        return s.clone();
    }
    let removals = lambda.removable_ribbons(b);
    let out = if removals.is_empty() {
        BTreeSet::from([Exp::zero()])
    } else {
        let mut out = BTreeSet::new();
        for (small, cells) in removals {
            let e = ribbon_exponent(&cells, m);
            for rest in ribbon_totals(&small, b, m, memo) {
                out.insert(rest + e);
            }
        }
        out
    };
    memo.insert(lambda.clone(), out.clone());
    out
}

pub fn renorm_factor(lambda: &Partition, m: Exp) -> Result<RenormFactor, StableError> {
    let b = *m.denom() as usize;
    let chi = lambda.weight().pow(m);
    let totals = if b == 1 { BTreeSet::from([Exp::zero()]) } else { ribbon_totals(lambda, b, m, &mut HashMap::new()) };
    if totals.len() != 1 {
        return Err(StableError::RibbonDependence { lambda: lambda.clone(), m });
    }
    let e = *totals.first().expect("one total");
    Ok(RenormFactor { lambda: lambda.clone(), m, value: chi * Monomial::new(e, Exp::zero()) })
}
