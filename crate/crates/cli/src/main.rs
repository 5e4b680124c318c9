mod cache;
mod emit;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::{One, Zero};
use serde_json::{json, Value};
use wallcross::combin::enumerate_partitions;
use wallcross::exact::Exp;
use wallcross::fock::{bar_matrix, canonical_basis, lt_property_check, BarMatrix, Sign};
use wallcross::keyed::KeyedMatrix;
use wallcross::stable::{candidate_walls, cross_wall, renormalize, Side, SlopePoint, Stable, StableBasisTable};
use wallcross::symfunc::{Basis, SymFunc};
use wallcross::verify::{self, Report, Status};
use wallcross::{Partition, Rational};

use cache::Cache;
use emit::Format;

#[derive(Parser)]
#[command(name = "wallcross", version, about = "Stable bases, wall-crossing matrices and Leclerc-Thibon involutions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Cache directory; defaults to $WALLCROSS_CACHE, no caching when unset.
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    #[arg(long, global = true)]
    no_cache: bool,
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Report wall-clock times in check reports (otherwise 0, so output is reproducible).
    #[arg(long, global = true)]
    timings: bool,
}

#[derive(Args, Clone, Copy)]
struct SlopeArgs {
    /// Slope `a/b` (or an integer).
    #[arg(long, value_parser = parse_slope, allow_hyphen_values = true)]
    slope: Exp,
    /// Side of the slope point, `+` or `-`.
    #[arg(long, value_parser = parse_side, default_value = "+", allow_hyphen_values = true)]
    side: Side,
}

impl SlopeArgs {
    fn point(self) -> SlopePoint {
        SlopePoint::new(self.slope, self.side)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    /// Modified Macdonald polynomials.
    Htilde,
    /// Macdonald polynomials `P`.
    P,
    /// Integral forms.
    J,
}

#[derive(Subcommand)]
enum Command {
    /// Macdonald polynomials of degree n.
    Macdonald {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "htilde")]
        kind: Kind,
        /// Output basis: m, e, p, s, P or Htilde.
        #[arg(long, default_value = "s", value_parser = parse_basis)]
        basis: Basis,
    },
    /// Matrix of the bar involution on the degree-n part of the level-b Fock space.
    FockBar {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        b: usize,
    },
    /// Canonical basis coefficients d_lambda^mu.
    Canonical {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        b: usize,
        /// `+` or `-`.
        #[arg(long, value_parser = parse_sign, default_value = "+", allow_hyphen_values = true)]
        sign: Sign,
    },
    /// Restriction table of the stable basis at a slope point.
    Stable {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        slope: SlopeArgs,
        /// Multiply rows by the renormalization factors.
        #[arg(long)]
        renormalized: bool,
    },
    /// Wall-crossing matrix at the wall given by --slope.
    Wallcross {
        #[arg(long)]
        n: usize,
        /// The wall.
        #[arg(long, value_parser = parse_slope, allow_hyphen_values = true)]
        slope: Exp,
        /// Emit the transition from slope 0 to slope+ε instead.
        #[arg(long)]
        from_zero: bool,
        /// Conjugate by the renormalization factors at the wall.
        #[arg(long)]
        renormalized: bool,
    },
    /// Compares renormalized wall crossings with the bar involution.
    ConjectureCheck {
        #[arg(long)]
        n: usize,
        /// A single wall; all candidate walls in (0, 1) by default.
        #[arg(long, value_parser = parse_slope, allow_hyphen_values = true)]
        slope: Option<Exp>,
    },
    /// Recomputes the golden tables for two and three points.
    AppendixCheck,
    /// Schur positivity of the renormalized stable basis.
    Positivity {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        slope: SlopeArgs,
        /// Truncation order of the series expansion.
        #[arg(long, default_value_t = 8)]
        order: i64,
    },
    /// Characters of finite-dimensional and Verma modules.
    Characters {
        #[arg(long, value_parser = parse_slope, allow_hyphen_values = true)]
        slope: Exp,
        /// Verma module of this partition, e.g. `2,1`, instead of the finite-dimensional class.
        #[arg(long, value_parser = parse_partition)]
        verma: Option<Partition>,
    },
}

fn parse_slope(s: &str) -> Result<Exp, String> {
    let (a, b) = s.split_once('/').unwrap_or((s, "1"));
    let a: i64 = a.trim().parse().map_err(|_| format!("bad numerator in {s:?}"))?;
    let b: i64 = b.trim().parse().map_err(|_| format!("bad denominator in {s:?}"))?;
    if b <= 0 {
        return Err(format!("denominator must be positive in {s:?}"));
    }
    Ok(Exp::new(a, b))
}

fn parse_side(s: &str) -> Result<Side, String> {
    match s {
        "+" | "+1" | "plus" => Ok(Side::Plus),
        "-" | "-1" | "minus" => Ok(Side::Minus),
        _ => Err(format!("side must be + or -, got {s:?}")),
    }
}

fn parse_sign(s: &str) -> Result<Sign, String> {
    match parse_side(s)? {
        Side::Plus => Ok(Sign::Plus),
        Side::Minus => Ok(Sign::Minus),
    }
}

fn parse_basis(s: &str) -> Result<Basis, String> {
    Basis::from_label(s).ok_or_else(|| format!("unknown basis {s:?}"))
}

fn parse_partition(s: &str) -> Result<Partition, String> {
    let parts: Result<Vec<usize>, _> =
        s.trim_matches(|c| c == '[' || c == ']').split(',').map(|x| x.trim().parse::<usize>()).collect();
    let parts = parts.map_err(|_| format!("bad partition {s:?}"))?;
    Partition::new(parts).map_err(|e| e.to_string())
}

/// Errors in the arguments rather than in the computation.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    Usage(msg.into()).into()
}

/// A command's result: text for stdout and whether a non-conjectural
/// check failed.
struct Output {
    text: String,
    failed: bool,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, failed: false }
    }
}

struct Ctx {
    stable: Stable<Rational>,
    cache: Option<Cache>,
    format: Format,
    timings: bool,
}

fn slope_key(s: SlopePoint) -> String {
    let side = if s.side == Side::Plus { '+' } else { '-' };
    format!("{}/{}{side}", s.m.numer(), s.m.denom())
}

impl Ctx {
    fn stored<T>(
        &self,
        key: &str,
        load: impl Fn(&Value) -> Option<T>,
        compute: impl FnOnce() -> Result<T>,
        save: impl Fn(&T) -> Value,
    ) -> Result<T> {
        if let Some(cache) = &self.cache {
            if let Some(v) = cache.load(key) {
                match load(&v) {
                    Some(t) => return Ok(t),
                    None => eprintln!("warning: cache entry for {key} fails validation, recomputing"),
                }
            }
        }
        let t = compute()?;
        if let Some(cache) = &self.cache {
            cache.store(key, &save(&t))?;
        }
        Ok(t)
    }

    fn table(&self, n: usize, slope: SlopePoint) -> Result<StableBasisTable<Rational>> {
        let key = format!("stable n={n} slope={}", slope_key(slope));
        self.stored(
            &key,
            |v| {
                let t = StableBasisTable::from_json(v).ok()?;
                (t.n == n && t.slope == slope && !t.renormalized).then_some(())?;
                self.stable.insert_chamber(t.clone()).ok()?;
                Some(t)
            },
            || Ok(self.stable.stable_basis(n, slope)?),
            |t| t.to_json(),
        )
    }

    fn bar(&self, n: usize, b: usize) -> Result<BarMatrix<Rational>> {
        let key = format!("fock-bar n={n} b={b}");
        self.stored(
            &key,
            |v| {
                let a = BarMatrix::from_json(v).ok()?;
                (a.n == n && a.b == b && lt_property_check(&a).passes()).then_some(a)
            },
            || Ok(bar_matrix(n, b)?),
            |a| a.to_json(),
        )
    }

    fn matrix(&self, json: Value, m: &KeyedMatrix<Rational>) -> Result<String> {
        Ok(match self.format {
            Format::Json => emit::json(&json),
            Format::Csv => emit::matrix_csv(m)?,
            Format::Latex => emit::matrix_latex(m),
        })
    }

    fn reports(&self, mut rs: Vec<Report>) -> Result<String> {
        if !self.timings {
            rs.iter_mut().for_each(|r| r.millis = 0);
        }
        Ok(match self.format {
            Format::Json => emit::json(&Value::Array(rs.iter().map(Report::to_json).collect())),
            Format::Csv => emit::reports_csv(&rs)?,
            Format::Latex => emit::reports_latex(&rs),
        })
    }

    fn symfuncs(&self, json: Value, fs: &[(Partition, SymFunc<Rational>)], n: usize) -> Result<String> {
        Ok(match self.format {
            Format::Json => emit::json(&json),
            Format::Csv => emit::symfuncs_csv(fs)?,
            Format::Latex => emit::symfuncs_latex(fs, &enumerate_partitions(n)),
        })
    }

    fn run(&self, command: Command) -> Result<Output> {
        match command {
            Command::Macdonald { n, kind, basis } => {
                let sym = self.stable.symmetric();
                let fs: Vec<(Partition, SymFunc<Rational>)> = enumerate_partitions(n)
                    .into_iter()
                    .map(|l| {
                        let f = match kind {
                            Kind::Htilde => sym.integral_forms(&l).1,
                            Kind::J => sym.integral_forms(&l).0,
                            Kind::P => sym.macdonald_p(&l),
                        };
                        let f = sym.convert(&f, basis);
                        (l, f)
                    })
                    .collect();
                let kind = match kind {
                    Kind::Htilde => "Htilde",
                    Kind::J => "J",
                    Kind::P => "P",
                };
                let items: Vec<Value> = fs.iter().map(|(l, f)| json!({"lambda": l, "function": f.to_json()})).collect();
                let v = json!({"n": n, "kind": kind, "basis": basis.label(), "functions": items});
                Ok(Output::ok(self.symfuncs(v, &fs, n)?))
            }
            Command::FockBar { n, b } => {
                if b == 0 {
                    return Err(usage("--b must be positive"));
                }
                let a = self.bar(n, b)?;
                Ok(Output::ok(self.matrix(a.to_json(), &a.matrix)?))
            }
            Command::Canonical { n, b, sign } => {
                if b == 0 {
                    return Err(usage("--b must be positive"));
                }
                let d = canonical_basis(&self.bar(n, b)?, sign)?;
                Ok(Output::ok(self.matrix(d.to_json(), &d.matrix)?))
            }
            Command::Stable { n, slope, renormalized } => {
                let mut t = self.table(n, slope.point())?;
                if renormalized {
                    t = renormalize(&t)?;
                }
                Ok(Output::ok(self.matrix(t.to_json(), t.gamma())?))
            }
            Command::Wallcross { n, slope: w, from_zero, renormalized } => {
                if w.is_integer() {
                    return Err(usage("integers are never walls; pass a non-integer --slope"));
                }
                if from_zero {
                    if renormalized {
                        return Err(usage("--renormalized needs both slopes at the same wall"));
                    }
                    self.table(n, SlopePoint::plus(Exp::zero()))?;
                    self.table(n, SlopePoint::plus(w))?;
                    let m =
                        self.stable.transition_matrix(n, SlopePoint::plus(Exp::zero()), SlopePoint::plus(w), false)?;
                    let v = json!({
                        "n": n,
                        "from": SlopePoint::plus(Exp::zero()).to_json(),
                        "to": SlopePoint::plus(w).to_json(),
                        "order": m.order(),
                        "entries": m.entries_json(),
                    });
                    return Ok(Output::ok(self.matrix(v, &m)?));
                }
                let below = self.table(n, SlopePoint::minus(w))?;
                if renormalized {
                    self.table(n, SlopePoint::plus(w))?;
                    let m = self.stable.transition_matrix(n, SlopePoint::minus(w), SlopePoint::plus(w), true)?;
                    let v = json!({
                        "n": n,
                        "wall": {"num": w.numer(), "den": w.denom()},
                        "orientation": "minus-in-plus",
                        "renormalized": true,
                        "order": m.order(),
                        "entries": m.entries_json(),
                    });
                    return Ok(Output::ok(self.matrix(v, &m)?));
                }
                let (_, m) = cross_wall(&below, w)?;
                Ok(Output::ok(self.matrix(m.to_json(), m.matrix())?))
            }
            Command::ConjectureCheck { n, slope } => {
                let walls = match slope {
                    Some(w) if w.is_integer() => return Err(usage("integers are never walls")),
                    Some(w) => vec![w],
                    None => candidate_walls(n, Exp::zero(), Exp::one()),
                };
                let mut rs = Vec::new();
                for w in walls {
                    self.table(n, SlopePoint::minus(w))?;
                    self.table(n, SlopePoint::plus(w))?;
                    rs.push(verify::conjecture_check(&self.stable, n, w)?);
                }
                // Mismatches for n >= 4 are findings about the conjecture,
                // not failures of the program.
                let failed = n <= 3 && rs.iter().any(|r| r.status == Status::Mismatch);
                Ok(Output { text: self.reports(rs)?, failed })
            }
            Command::AppendixCheck => {
                let rs = verify::appendix_check(&self.stable)?;
                let failed = rs.iter().any(|r| r.status == Status::Mismatch);
                Ok(Output { text: self.reports(rs)?, failed })
            }
            Command::Positivity { n, slope, order } => {
                if slope.slope <= Exp::zero() {
                    return Err(usage("positivity needs a positive slope"));
                }
                self.table(n, slope.point())?;
                let r = verify::positivity_report(&self.stable, n, slope.point(), order)?;
                Ok(Output::ok(self.reports(vec![r])?))
            }
            Command::Characters { slope, verma } => {
                if slope <= Exp::zero() {
                    return Err(usage("characters need a positive slope"));
                }
                if let Some(l) = verma {
                    let f = verify::verma_character(&self.stable, &l, slope);
                    let v = json!({"lambda": l, "m": slope.to_string(), "character": f.to_json()});
                    let n = l.size();
                    return Ok(Output::ok(self.symfuncs(v, &[(l, f)], n)?));
                }
                let c = verify::cherednik_character(&self.stable, slope)?;
                let b = *slope.denom() as usize;
                let v = json!({
                    "m": slope.to_string(),
                    "raw": c.raw.to_json(),
                    "normalized": c.normalized.as_ref().map(SymFunc::to_json),
                });
                let mut fs = vec![(Partition::new(vec![b]).expect("a row"), c.raw.clone())];
                if let Some(f) = c.normalized {
                    fs.push((Partition::new(vec![b]).expect("a row"), f));
                }
                Ok(Output::ok(self.symfuncs(v, &fs, b)?))
            }
        }
    }
}

fn run(cli: Cli) -> Result<Output> {
    if let Some(j) = cli.jobs {
        if j == 0 {
            return Err(usage("--jobs must be positive"));
        }
        rayon::ThreadPoolBuilder::new().num_threads(j).build_global().map_err(|e| anyhow!(e))?;
    }
    let dir = if cli.no_cache {
        None
    } else {
        cli.cache_dir.or_else(|| std::env::var_os("WALLCROSS_CACHE").map(PathBuf::from))
    };
    let cache = dir.map(|d| Cache::open(&d)).transpose()?;
    let ctx = Ctx { stable: Stable::new(), cache, format: cli.format, timings: cli.timings };
    ctx.run(cli.command)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{}", out.text);
            if out.failed {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<Usage>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slopes_parse() {
        assert_eq!(parse_slope("3/2").unwrap(), Exp::new(3, 2));
        assert_eq!(parse_slope("-1/3").unwrap(), Exp::new(-1, 3));
        assert_eq!(parse_slope("4/6").unwrap(), Exp::new(2, 3));
        assert_eq!(parse_slope("2").unwrap(), Exp::new(2, 1));
        assert!(parse_slope("1/0").is_err());
        assert!(parse_slope("x").is_err());
        assert_eq!(parse_side("-").unwrap(), Side::Minus);
        assert!(parse_side("0").is_err());
    }

    #[test]
    fn partitions_parse() {
        assert_eq!(parse_partition("2,1").unwrap(), Partition::new(vec![2, 1]).unwrap());
        assert_eq!(parse_partition("[3]").unwrap(), Partition::new(vec![3]).unwrap());
        assert!(parse_partition("1,2").is_err());
    }

    #[test]
    fn scalars_render_in_their_variables() {
        use wallcross::exact::Monomial;
        use wallcross::Scalar;
        let m = |a: i64, b: i64| Scalar::mono(Monomial::from_q1q2(a.into(), b.into()));
        assert_eq!(emit::scalar_tex(&(&m(0, 1) - &m(-1, 0))), "q_2 - \\frac{1}{q_1}");
        let q = |a: i64| Scalar::mono(Monomial::int(a, 0));
        assert_eq!(emit::scalar_tex(&(&q(1) - &q(-1))), "q - \\frac{1}{q}");
        assert_eq!(emit::scalar_tex(&Scalar::one()), "1");
        assert_eq!(emit::scalar_tex(&Scalar::zero()), "0");
    }
}
