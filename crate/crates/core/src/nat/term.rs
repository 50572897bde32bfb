use std::fmt;
use std::sync::Arc;

use thiserror::Error;

type DetImpl = dyn Fn(&[u64]) -> Option<u64> + Send + Sync;

/// A classical (possibly partial) function `ℕᵏ → ℕ` embedded as a Dirac-valued
/// probabilistic function. `None` means undefined; it contributes no mass.
#[derive(Clone)]
pub struct DetFn {
    name: Arc<str>,
    arity: usize,
    f: Arc<DetImpl>,
}

impl DetFn {
    pub fn new(
        name: impl Into<Arc<str>>,
        arity: usize,
        f: impl Fn(&[u64]) -> Option<u64> + Send + Sync + 'static,
    ) -> Self {
        DetFn {
            name: name.into(),
            arity,
            f: Arc::new(f),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn apply(&self, args: &[u64]) -> Option<u64> {
        (self.f)(args)
    }
}

impl fmt::Debug for DetFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "det {}/{}", self.name, self.arity)
    }
}

impl PartialEq for DetFn {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.arity == other.arity
    }
}

impl Eq for DetFn {}

/// Probabilistic recursive function over ℕ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NatTerm {
    Zero,
    Succ,
    /// `Πⁿ_m`, 1-based.
    Proj(usize, usize),
    /// The fair coin `r(x) = {x ↦ ½, x+1 ↦ ½}`.
    Coin,
    Comp(Box<NatTerm>, Vec<NatTerm>),
    PrimRec(Box<NatTerm>, Box<NatTerm>),
    Mu(Box<NatTerm>),
    Det(DetFn),
    /// Rational-to-coin: on the Cantor code of `(num, den)` returns
    /// `{1 ↦ num/den, 0 ↦ 1 − num/den}`; empty when the code is not a
    /// probability.
    I2p,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArityError {
    #[error("arity mismatch at {path}: {detail}")]
    Mismatch { path: String, detail: String },
}

impl NatTerm {
    pub fn proj(n: usize, m: usize) -> NatTerm {
        NatTerm::Proj(n, m)
    }

    pub fn comp(f: NatTerm, gs: Vec<NatTerm>) -> NatTerm {
        NatTerm::Comp(Box::new(f), gs)
    }

    pub fn primrec(base: NatTerm, step: NatTerm) -> NatTerm {
        NatTerm::PrimRec(Box::new(base), Box::new(step))
    }

    pub fn mu(body: NatTerm) -> NatTerm {
        NatTerm::Mu(Box::new(body))
    }

    /// The unique arity of a well-formed term.
    pub fn arity(&self) -> Result<usize, ArityError> {
        self.arity_at(&mut vec!["root".to_string()])
    }

    fn arity_at(&self, path: &mut Vec<String>) -> Result<usize, ArityError> {
        let fail = |path: &Vec<String>, detail: String| ArityError::Mismatch {
            path: path.join("/"),
            detail,
        };
        match self {
            NatTerm::Zero | NatTerm::Succ | NatTerm::Coin | NatTerm::I2p => Ok(1),
            NatTerm::Proj(n, m) => {
                if *n == 0 || *m == 0 || m > n {
                    Err(fail(path, format!("projection proj {n} {m} needs 1 ≤ m ≤ n")))
                } else {
                    Ok(*n)
                }
            }
            NatTerm::Det(d) => Ok(d.arity()),
            NatTerm::Comp(f, gs) => {
                if gs.is_empty() {
                    return Err(fail(path, "composition with no inner functions".into()));
                }
                path.push("comp.f".into());
                let fa = f.arity_at(path)?;
                path.pop();
                if fa != gs.len() {
                    return Err(fail(
                        path,
                        format!("outer function has arity {fa} but {} inner functions", gs.len()),
                    ));
                }
                let mut k = None;
                for (i, g) in gs.iter().enumerate() {
                    path.push(format!("comp.g{}", i + 1));
                    let ga = g.arity_at(path)?;
                    path.pop();
                    match k {
                        None => k = Some(ga),
                        Some(k0) if k0 != ga => {
                            return Err(fail(
                                path,
                                format!("inner function {} has arity {ga}, expected {k0}", i + 1),
                            ))
                        }
                        _ => {}
                    }
                }
                Ok(k.unwrap_or(0))
            }
            NatTerm::PrimRec(f, g) => {
                path.push("primrec.base".into());
                let k = f.arity_at(path)?;
                path.pop();
                path.push("primrec.step".into());
                let ga = g.arity_at(path)?;
                path.pop();
                if ga != k + 2 {
                    return Err(fail(path, format!("step has arity {ga}, expected {}", k + 2)));
                }
                Ok(k + 1)
            }
            NatTerm::Mu(body) => {
                path.push("mu".into());
                let a = body.arity_at(path)?;
                path.pop();
                if a == 0 {
                    return Err(fail(path, "minimized body must take at least one argument".into()));
                }
                Ok(a - 1)
            }
        }
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        1 + match self {
            NatTerm::Comp(f, gs) => f.size() + gs.iter().map(NatTerm::size).sum::<usize>(),
            NatTerm::PrimRec(f, g) => f.size() + g.size(),
            NatTerm::Mu(b) => b.size(),
            _ => 0,
        }
    }

    /// True when no `Mu` node occurs.
    pub fn is_mu_free(&self) -> bool {
        match self {
            NatTerm::Mu(_) => false,
            NatTerm::Comp(f, gs) => f.is_mu_free() && gs.iter().all(NatTerm::is_mu_free),
            NatTerm::PrimRec(f, g) => f.is_mu_free() && g.is_mu_free(),
            _ => true,
        }
    }
}
