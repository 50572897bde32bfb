//! Step counts of compiled terms against input size, and power-law fits
//! `steps ≈ c·nᵏ` by least squares on the log-log points. This is a
//! measurement, not a bound.

use serde::Serialize;

use super::compile::CompiledTerm;
use super::machine::PrmError;
use super::run::{max_steps, StepBound};
use crate::word::is_tag;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerFit {
    pub c: f64,
    pub k: f64,
}

/// Least-squares line through `(ln n, ln steps)`. Steps below 1 count as 1.
pub fn fit_power(points: &[(usize, usize)]) -> Option<PowerFit> {
    let xy: Vec<(f64, f64)> = points
        .iter()
        .filter(|(n, _)| *n > 0)
        .map(|&(n, s)| ((n as f64).ln(), (s.max(1) as f64).ln()))
        .collect();
    if xy.len() < 2 {
        return None;
    }
    let m = xy.len() as f64;
    let (sx, sy) = xy.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let (mx, my) = (sx / m, sy / m);
    let sxx: f64 = xy.iter().map(|(x, _)| (x - mx).powi(2)).sum();
    let sxy: f64 = xy.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        return None;
    }
    let k = sxy / sxx;
    Some(PowerFit { c: (my - k * mx).exp(), k })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthReport {
    /// `(n, worst step count over the inputs of size n)`.
    pub points: Vec<(usize, usize)>,
    pub fit: PowerFit,
    /// Fits on all points but the last, and all but the first.
    pub head: PowerFit,
    pub tail: PowerFit,
    pub monotone: bool,
    /// Both partial fits within 1 of the full exponent.
    pub stable: bool,
}

/// Inputs of size `n`: for each argument, every word of length `n` when
/// there are at most 16 of them, else the constant and alternating words.
pub fn size_inputs(sigma: &[char], arity: usize, n: usize) -> Vec<Vec<String>> {
    let plain: Vec<char> = sigma.iter().copied().filter(|c| !is_tag(*c)).collect();
    if plain.is_empty() {
        return vec![vec![String::new(); arity]];
    }
    let family: Vec<String> = if (plain.len() as f64).powi(n as i32) <= 16.0 {
        let mut ws = vec![String::new()];
        for _ in 0..n {
            ws = ws.iter().flat_map(|w| plain.iter().map(move |c| format!("{w}{c}"))).collect();
        }
        ws
    } else {
        let mut ws: Vec<String> = plain.iter().map(|c| c.to_string().repeat(n)).collect();
        for s in 0..plain.len() {
            ws.push((0..n).map(|i| plain[(s + i) % plain.len()]).collect());
        }
        ws.dedup();
        ws
    };
    let mut out = vec![Vec::new()];
    for _ in 0..arity {
        out = out
            .iter()
            .flat_map(|prefix: &Vec<String>| {
                family.iter().map(move |w| {
                    let mut p = prefix.clone();
                    p.push(w.clone());
                    p
                })
            })
            .collect();
    }
    out
}

/// Worst-case steps for each size in `sizes`, fitted. Fails if some run
/// exceeds `depth` steps.
pub fn growth_report(
    term: &CompiledTerm,
    sizes: std::ops::RangeInclusive<usize>,
    depth: usize,
) -> Result<GrowthReport, PrmError> {
    let mut points = Vec::new();
    for n in sizes {
        let mut worst = 0;
        for inputs in size_inputs(&term.program.alphabet, term.arity, n) {
            match max_steps(&term.program, &inputs, depth)? {
                StepBound::Halts(s) => worst = worst.max(s),
                StepBound::Unbounded(d) => {
                    return Err(PrmError::Spec(format!("a run on {inputs:?} exceeds {d} steps")));
                }
            }
        }
        points.push((n, worst));
    }
    let too_few = || PrmError::Spec("at least three sizes are needed for a fit".into());
    if points.len() < 3 {
        return Err(too_few());
    }
    let fit = fit_power(&points).ok_or_else(too_few)?;
    let head = fit_power(&points[..points.len() - 1]).ok_or_else(too_few)?;
    let tail = fit_power(&points[1..]).ok_or_else(too_few)?;
    Ok(GrowthReport {
        monotone: points.windows(2).all(|w| w[0].1 <= w[1].1),
        stable: (head.k - fit.k).abs() <= 1.0 && (tail.k - fit.k).abs() <= 1.0,
        points,
        fit,
        head,
        tail,
    })
}
