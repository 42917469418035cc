//! Randomised complete block ANOVA and Tukey HSD comparisons.
//!
//! Algorithms are the treatments (rows) and instances are the blocks
//! (columns). Upper-tail F probabilities come from the regularised incomplete
//! beta function; studentized range probabilities are integrated numerically
//! so any confidence level can be used.

use std::f64::consts::{LN_2, PI};
use std::fmt::{self, Write as _};

use statrs::function::beta::beta_reg;
use statrs::function::erf::erfc;
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};

/// Complete `a × b` table of responses.
#[derive(Debug, Clone, PartialEq)]
pub struct ResponseMatrix {
    treatments: Vec<String>,
    blocks: Vec<String>,
    values: Vec<Vec<f64>>,
}

impl ResponseMatrix {
    pub fn new(
        treatments: Vec<String>,
        blocks: Vec<String>,
        values: Vec<Vec<f64>>,
    ) -> Result<Self> {
        let bad = |m: String| Err(Error::InvalidMatrix(m));
        if treatments.len() < 2 || blocks.len() < 2 {
            return bad(format!(
                "need at least 2 treatments and 2 blocks, got {}x{}",
                treatments.len(),
                blocks.len()
            ));
        }
        if values.len() != treatments.len() {
            return bad(format!(
                "{} rows for {} treatments",
                values.len(),
                treatments.len()
            ));
        }
        for (name, row) in treatments.iter().zip(&values) {
            if row.len() != blocks.len() {
                return bad(format!(
                    "row `{name}` has {} cells, expected {}",
                    row.len(),
                    blocks.len()
                ));
            }
            if row.iter().any(|v| !v.is_finite()) {
                return bad(format!("row `{name}` has a missing or non-finite cell"));
            }
        }
        Ok(Self {
            treatments,
            blocks,
            values,
        })
    }

    pub fn treatments(&self) -> &[String] {
        &self.treatments
    }

    pub fn blocks(&self) -> &[String] {
        &self.blocks
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.values
    }

    pub fn get(&self, treatment: usize, block: usize) -> f64 {
        self.values[treatment][block]
    }

    pub fn treatment_means(&self) -> Vec<f64> {
        let b = self.blocks.len() as f64;
        self.values
            .iter()
            .map(|r| r.iter().sum::<f64>() / b)
            .collect()
    }

    /// Reads comma-separated text: a header `label,block1,block2,...` then one
    /// row per treatment. Blank lines and `#` comments are skipped.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines
            .next()
            .ok_or_else(|| Error::InvalidMatrix("empty input".into()))?;
        let blocks: Vec<String> = header
            .split(',')
            .skip(1)
            .map(|s| s.trim().to_string())
            .collect();
        let mut treatments = Vec::new();
        let mut values = Vec::new();
        for line in lines {
            let mut cells = line.split(',').map(str::trim);
            let name = cells.next().unwrap_or_default().to_string();
            let row = cells
                .map(|c| {
                    c.parse::<f64>()
                        .map_err(|_| Error::InvalidMatrix(format!("row `{name}`: bad cell `{c}`")))
                })
                .collect::<Result<Vec<_>>>()?;
            treatments.push(name);
            values.push(row);
        }
        Self::new(treatments, blocks, values)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("algorithm");
        for b in &self.blocks {
            out.push(',');
            out.push_str(b);
        }
        out.push('\n');
        for (name, row) in self.treatments.iter().zip(&self.values) {
            out.push_str(name);
            for v in row {
                let _ = write!(out, ",{v}");
            }
            out.push('\n');
        }
        out
    }
}

/// Distance of each cell from its block's known optimum.
pub fn error_matrix(best: &ResponseMatrix, optima: &[(String, f64)]) -> Result<ResponseMatrix> {
    let opt: Vec<f64> = best
        .blocks
        .iter()
        .map(|b| {
            optima
                .iter()
                .find(|(name, _)| name.eq_ignore_ascii_case(b))
                .map(|(_, v)| *v)
                .ok_or_else(|| Error::InvalidMatrix(format!("no optimum for block `{b}`")))
        })
        .collect::<Result<_>>()?;
    let mut values = best.values.clone();
    for (t, row) in values.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell -= opt[j];
            if *cell < 0.0 {
                return Err(Error::InvalidMatrix(format!(
                    "`{}` on `{}` is below the stated optimum",
                    best.treatments[t], best.blocks[j]
                )));
            }
        }
    }
    ResponseMatrix::new(best.treatments.clone(), best.blocks.clone(), values)
}

/// Reads `instance,optimum` lines (whitespace also separates; an optional header is skipped).
pub fn parse_optima(text: &str) -> Result<Vec<(String, f64)>> {
    let mut out = Vec::new();
    for line in text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
    {
        let (name, v) = line
            .split_once(',')
            .or_else(|| line.split_once(char::is_whitespace))
            .ok_or_else(|| Error::InvalidMatrix(format!("bad optimum line `{line}`")))?;
        match v.trim().parse::<f64>() {
            Ok(v) => out.push((name.trim().to_string(), v)),
            Err(_) if out.is_empty() => continue,
            Err(_) => {
                return Err(Error::InvalidMatrix(format!(
                    "bad optimum value in `{line}`"
                )))
            }
        }
    }
    Ok(out)
}

/// One line of the ANOVA table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnovaRow {
    pub df: usize,
    pub ss: f64,
    pub ms: f64,
    pub f: Option<f64>,
    pub p: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnovaTable {
    pub treatment: AnovaRow,
    pub block: AnovaRow,
    pub error: AnovaRow,
    pub total: AnovaRow,
    /// Residual standard deviation `sqrt(MSE)`.
    pub s: f64,
    pub r_squared: f64,
    pub r_squared_adj: f64,
    /// Set when the error mean square is zero; F values are then reported as 0.
    pub degenerate: bool,
}

/// Upper tail `P(F > f)` of the F distribution.
pub fn f_upper_tail(f: f64, df1: f64, df2: f64) -> f64 {
    if f <= 0.0 {
        return 1.0;
    }
    if f.is_infinite() {
        return 0.0;
    }
    beta_reg(df2 / 2.0, df1 / 2.0, df2 / (df2 + df1 * f))
}

/// Two-factor ANOVA without replication: treatments in rows, blocks in columns.
pub fn rcbd_anova(m: &ResponseMatrix) -> AnovaTable {
    let a = m.treatments.len();
    let b = m.blocks.len();
    let n = (a * b) as f64;
    // centring first keeps the computational formulas well conditioned
    let grand = m.values.iter().flatten().sum::<f64>() / n;
    let centred: Vec<Vec<f64>> = m
        .values
        .iter()
        .map(|r| r.iter().map(|v| v - grand).collect())
        .collect();
    let g: f64 = centred.iter().flatten().sum();
    let cf = g * g / n;
    let ss_total = centred.iter().flatten().map(|v| v * v).sum::<f64>() - cf;
    let ss_treat = centred
        .iter()
        .map(|r| r.iter().sum::<f64>().powi(2))
        .sum::<f64>()
        / b as f64
        - cf;
    let ss_block = (0..b)
        .map(|j| centred.iter().map(|r| r[j]).sum::<f64>().powi(2))
        .sum::<f64>()
        / a as f64
        - cf;
    let ss_error = (ss_total - ss_treat - ss_block).max(0.0);

    let df_treat = a - 1;
    let df_block = b - 1;
    let df_error = df_treat * df_block;
    let ms_treat = ss_treat / df_treat as f64;
    let ms_block = ss_block / df_block as f64;
    let ms_error = ss_error / df_error as f64;
    let scale = ss_total.abs().max(f64::MIN_POSITIVE);
    let degenerate = ms_error <= 1e-12 * scale || ss_total <= 0.0;

    let test = |ms: f64, df: usize| -> (f64, f64) {
        if degenerate {
            (0.0, 1.0)
        } else {
            let f = ms / ms_error;
            (f, f_upper_tail(f, df as f64, df_error as f64))
        }
    };
    let (f_t, p_t) = test(ms_treat, df_treat);
    let (f_b, p_b) = test(ms_block, df_block);
    let r_squared = if ss_total > 0.0 {
        1.0 - ss_error / ss_total
    } else {
        0.0
    };
    let r_squared_adj = if ss_total > 0.0 {
        1.0 - ms_error / (ss_total / (n - 1.0))
    } else {
        0.0
    };

    AnovaTable {
        treatment: AnovaRow {
            df: df_treat,
            ss: ss_treat,
            ms: ms_treat,
            f: Some(f_t),
            p: Some(p_t),
        },
        block: AnovaRow {
            df: df_block,
            ss: ss_block,
            ms: ms_block,
            f: Some(f_b),
            p: Some(p_b),
        },
        error: AnovaRow {
            df: df_error,
            ss: ss_error,
            ms: ms_error,
            f: None,
            p: None,
        },
        total: AnovaRow {
            df: a * b - 1,
            ss: ss_total,
            ms: ss_total / (n - 1.0),
            f: None,
            p: None,
        },
        s: ms_error.sqrt(),
        r_squared,
        r_squared_adj,
        degenerate,
    }
}

impl fmt::Display for AnovaTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:<10}{:>5}{:>16}{:>16}{:>10}{:>10}",
            "Source", "DF", "Adj SS", "Adj MS", "F-Value", "P-Value"
        )?;
        for (name, row) in [
            ("Treatment", &self.treatment),
            ("Block", &self.block),
            ("Error", &self.error),
        ] {
            write!(
                f,
                "{:<10}{:>5}{:>16.2}{:>16.2}",
                name, row.df, row.ss, row.ms
            )?;
            if let (Some(fv), Some(p)) = (row.f, row.p) {
                write!(f, "{fv:>10.2}{p:>10.3}")?;
            }
            writeln!(f)?;
        }
        writeln!(
            f,
            "{:<10}{:>5}{:>16.2}",
            "Total", self.total.df, self.total.ss
        )?;
        write!(
            f,
            "S = {:.3}  R-sq = {:.2}%  R-sq(adj) = {:.2}%",
            self.s,
            100.0 * self.r_squared,
            100.0 * self.r_squared_adj
        )?;
        if self.degenerate {
            write!(f, "  [zero error variance: F reported as 0]")?;
        }
        Ok(())
    }
}

fn phi(x: f64) -> f64 {
    0.5 * erfc(-x / std::f64::consts::SQRT_2)
}

#[allow(clippy::excessive_precision)]
// Probability that the range of `cc` standard normals is below `w`, raised to `rr`.
fn range_prob(w: f64, rr: f64, cc: f64) -> f64 {
    const XLEG: [f64; 6] = [
        0.981560634246719250690549090149,
        0.904117256370474856678465866119,
        0.769902674194304687036893833213,
        0.587317954286617447296702418941,
        0.367831498998180193752691536644,
        0.125233408511468915472441369464,
    ];
    const ALEG: [f64; 6] = [
        0.047175336386511827194615961485,
        0.106939325995318430960254718194,
        0.160078328543346226334652529543,
        0.203167426723065921749064455810,
        0.233492536538354808760849898925,
        0.249147045813402785000562436043,
    ];
    const NLEG: usize = 12;
    const IHALF: usize = 6;
    const C1: f64 = -30.0;
    const C3: f64 = 60.0;
    const BB: f64 = 8.0;
    const WLAR: f64 = 3.0;

    let qsqz = w * 0.5;
    if qsqz >= BB {
        return 1.0;
    }
    let mut pr_w = 2.0 * phi(qsqz) - 1.0;
    pr_w = if pr_w >= 1.0 { 1.0 } else { pr_w.powf(cc) };
    let wincr = if w > WLAR { 2 } else { 3 };
    let mut blb = qsqz;
    let binc = (BB - qsqz) / wincr as f64;
    let mut bub = blb + binc;
    let mut einsum = 0.0;
    let cc1 = cc - 1.0;
    for _ in 0..wincr {
        let mut elsum = 0.0;
        let a = 0.5 * (bub + blb);
        let b = 0.5 * (bub - blb);
        for jj in 1..=NLEG {
            let (j, xx) = if IHALF < jj {
                let j = NLEG - jj + 1;
                (j, XLEG[j - 1])
            } else {
                (jj, -XLEG[jj - 1])
            };
            let ac = a + b * xx;
            let qexpo = ac * ac;
            if qexpo > C3 {
                break;
            }
            let pplus = 2.0 * phi(ac);
            let pminus = 2.0 * phi(ac - w);
            let mut rinsum = pplus * 0.5 - pminus * 0.5;
            if rinsum >= (C1 / cc1).exp() {
                rinsum = ALEG[j - 1] * (-(0.5 * qexpo)).exp() * rinsum.powf(cc1);
                elsum += rinsum;
            }
        }
        elsum *= 2.0 * b * cc / (2.0 * PI).sqrt();
        einsum += elsum;
        blb = bub;
        bub += binc;
    }
    pr_w += einsum;
    if pr_w <= (C1 / rr).exp() {
        return 0.0;
    }
    pr_w = pr_w.powf(rr);
    pr_w.min(1.0)
}

/// CDF of the studentized range for `k` means and `df` error degrees of freedom.
#[allow(clippy::excessive_precision)]
pub fn ptukey(q: f64, k: usize, df: f64) -> f64 {
    const XLEGQ: [f64; 8] = [
        0.989400934991649932596154173450,
        0.944575023073232576077988415535,
        0.865631202387831743880467897712,
        0.755404408355003033895101194847,
        0.617876244402643748446671764049,
        0.458016777657227386342419442984,
        0.281603550779258913230460501460,
        0.950125098376374401853193354250e-1,
    ];
    const ALEGQ: [f64; 8] = [
        0.271524594117540948517805724560e-1,
        0.622535239386478928628438369944e-1,
        0.951585116824927848099251076022e-1,
        0.124628971255533872052476282192,
        0.149595988816576732081501730547,
        0.169156519395002538189312079030,
        0.182603415044923588866763667969,
        0.189450610455068496285396723208,
    ];
    const NLEGQ: usize = 16;
    const IHALFQ: usize = 8;
    const EPS1: f64 = -30.0;
    const EPS2: f64 = 1.0e-14;

    let cc = k as f64;
    let rr = 1.0;
    if q <= 0.0 {
        return 0.0;
    }
    if df < 2.0 || k < 2 || q.is_nan() {
        return f64::NAN;
    }
    if q.is_infinite() {
        return 1.0;
    }
    if df > 25000.0 {
        return range_prob(q, rr, cc);
    }
    let f2 = df * 0.5;
    let mut f2lf = f2 * df.ln() - df * LN_2 - ln_gamma(f2);
    let f21 = f2 - 1.0;
    let ff4 = df * 0.25;
    let ulen: f64 = if df <= 100.0 {
        1.0
    } else if df <= 800.0 {
        0.5
    } else if df <= 5000.0 {
        0.25
    } else {
        0.125
    };
    f2lf += ulen.ln();

    let mut ans = 0.0;
    for i in 1..=50 {
        let mut otsum = 0.0;
        let twa1 = (2 * i - 1) as f64 * ulen;
        for jj in 1..=NLEGQ {
            let (j, upper) = if IHALFQ < jj {
                (jj - IHALFQ - 1, true)
            } else {
                (jj - 1, false)
            };
            let x = XLEGQ[j] * ulen;
            let t1 = if upper {
                f2lf + f21 * (twa1 + x).ln() - (x + twa1) * ff4
            } else {
                f2lf + f21 * (twa1 - x).ln() + (x - twa1) * ff4
            };
            if t1 >= EPS1 {
                let qsqz = if upper {
                    q * ((x + twa1) * 0.5).sqrt()
                } else {
                    q * ((twa1 - x) * 0.5).sqrt()
                };
                otsum += range_prob(qsqz, rr, cc) * ALEGQ[j] * t1.exp();
            }
        }
        if i as f64 * ulen >= 1.0 && otsum <= EPS2 {
            break;
        }
        ans += otsum;
    }
    ans.min(1.0)
}

/// Quantile of the studentized range distribution.
pub fn qtukey(p: f64, k: usize, df: f64) -> f64 {
    if !(0.0..1.0).contains(&p) {
        return f64::NAN;
    }
    if p == 0.0 {
        return 0.0;
    }
    let mut lo = 0.0;
    let mut hi = 4.0;
    while ptukey(hi, k, df) < p {
        lo = hi;
        hi *= 2.0;
        if hi > 1e6 {
            return f64::INFINITY;
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if ptukey(mid, k, df) < p {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-10 * hi {
            break;
        }
    }
    0.5 * (lo + hi)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TukeyTreatment {
    pub name: String,
    pub n: usize,
    pub mean: f64,
    pub letters: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TukeyPair {
    pub first: String,
    pub second: String,
    /// `mean(first) − mean(second)`.
    pub diff: f64,
    pub q: f64,
    pub p_adjusted: f64,
    pub significant: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TukeyGrouping {
    pub confidence: f64,
    pub critical_q: f64,
    /// Minimum significant difference between two means.
    pub hsd: f64,
    /// Sorted by descending mean.
    pub treatments: Vec<TukeyTreatment>,
    pub pairs: Vec<TukeyPair>,
}

impl TukeyGrouping {
    pub fn letters_of(&self, name: &str) -> Option<&str> {
        self.treatments
            .iter()
            .find(|t| t.name == name)
            .map(|t| t.letters.as_str())
    }

    pub fn pair(&self, a: &str, b: &str) -> Option<&TukeyPair> {
        self.pairs
            .iter()
            .find(|p| (p.first == a && p.second == b) || (p.first == b && p.second == a))
    }
}

impl fmt::Display for TukeyGrouping {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "Grouping (Tukey, {:.0}% confidence)",
            100.0 * self.confidence
        )?;
        writeln!(f, "{:<12}{:>4}{:>14}  Grouping", "Treatment", "N", "Mean")?;
        for t in &self.treatments {
            let spaced: Vec<String> = t.letters.chars().map(String::from).collect();
            writeln!(
                f,
                "{:<12}{:>4}{:>14.2}  {}",
                t.name,
                t.n,
                t.mean,
                spaced.join(" ")
            )?;
        }
        write!(
            f,
            "Means that do not share a letter are significantly different."
        )
    }
}

fn group_label(k: usize) -> char {
    char::from(b'A' + (k % 26) as u8)
}

/// Pairwise Tukey HSD comparison of treatment means at `confidence`.
pub fn tukey_hsd(m: &ResponseMatrix, confidence: f64) -> Result<TukeyGrouping> {
    if !(confidence > 0.0 && confidence < 1.0) {
        return Err(Error::InvalidMatrix(format!(
            "confidence must lie in (0, 1), got {confidence}"
        )));
    }
    let anova = rcbd_anova(m);
    let a = m.treatments.len();
    let b = m.blocks.len();
    let df_error = anova.error.df as f64;
    let se = (anova.error.ms / b as f64).sqrt();
    let critical_q = qtukey(confidence, a, df_error);
    let hsd = critical_q * se;
    let means = m.treatment_means();
    let scale = means
        .iter()
        .fold(0.0f64, |acc, v| acc.max(v.abs()))
        .max(1.0);

    let significant = |i: usize, j: usize| -> bool {
        let d = (means[i] - means[j]).abs();
        if anova.degenerate {
            d > 1e-12 * scale
        } else {
            d > hsd
        }
    };

    let mut pairs = Vec::with_capacity(a * (a - 1) / 2);
    for i in 0..a {
        for j in (i + 1)..a {
            let diff = means[i] - means[j];
            let (q, p) = if anova.degenerate {
                let sig = significant(i, j);
                (
                    if sig { f64::INFINITY } else { 0.0 },
                    if sig { 0.0 } else { 1.0 },
                )
            } else {
                let q = diff.abs() / se;
                (q, 1.0 - ptukey(q, a, df_error))
            };
            pairs.push(TukeyPair {
                first: m.treatments[i].clone(),
                second: m.treatments[j].clone(),
                diff,
                q,
                p_adjusted: p.clamp(0.0, 1.0),
                significant: significant(i, j),
            });
        }
    }

    // descending means; with a balanced design every group is a contiguous run
    let mut order: Vec<usize> = (0..a).collect();
    order.sort_by(|&x, &y| means[y].total_cmp(&means[x]).then(x.cmp(&y)));
    let mut groups: Vec<(usize, usize)> = Vec::new();
    for start in 0..a {
        let mut end = start;
        while end + 1 < a && !significant(order[start], order[end + 1]) {
            end += 1;
        }
        if !groups.iter().any(|&(s, e)| s <= start && end <= e) {
            groups.push((start, end));
        }
    }
    let mut letters = vec![String::new(); a];
    for (g, &(s, e)) in groups.iter().enumerate() {
        for l in &mut letters[s..=e] {
            l.push(group_label(g));
        }
    }

    let treatments = order
        .iter()
        .zip(letters)
        .map(|(&t, letters)| TukeyTreatment {
            name: m.treatments[t].clone(),
            n: b,
            mean: means[t],
            letters,
        })
        .collect();

    Ok(TukeyGrouping {
        confidence,
        critical_q,
        hsd,
        treatments,
        pairs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn labels(prefix: &str, k: usize) -> Vec<String> {
        (0..k).map(|i| format!("{prefix}{i}")).collect()
    }

    #[test]
    fn studentized_range_reference_values() {
        // reference values from an independent implementation (SciPy)
        assert_relative_eq!(ptukey(3.0, 3, 22.0), 0.8914989550633277, epsilon = 1e-7);
        assert_relative_eq!(ptukey(1.5, 4, 10.0), 0.28040142949174135, epsilon = 1e-7);
        assert_relative_eq!(ptukey(5.0, 10, 100.0), 0.9791372183251348, epsilon = 1e-7);
        assert_relative_eq!(qtukey(0.90, 3, 22.0), 3.0608569130328953, epsilon = 1e-6);
        assert_relative_eq!(qtukey(0.95, 3, 22.0), 3.5525939921591023, epsilon = 1e-6);
        assert_relative_eq!(qtukey(0.95, 4, 10.0), 4.32658211573119, epsilon = 1e-6);
        assert_relative_eq!(qtukey(0.99, 5, 30.0), 5.047605131904664, epsilon = 1e-6);
        assert_eq!(ptukey(0.0, 3, 10.0), 0.0);
    }

    #[test]
    fn f_tail_is_monotone() {
        let mut prev = 1.0;
        for k in 1..100 {
            let p = f_upper_tail(k as f64 * 0.1, 2.0, 22.0);
            assert!(p < prev);
            prev = p;
        }
        // P(F(2, d) > f) = (1 + 2f/d)^(-d/2)
        assert_relative_eq!(
            f_upper_tail(3.0, 2.0, 22.0),
            (1.0 + 6.0 / 22.0f64).powf(-11.0),
            max_relative = 1e-10
        );
    }

    #[test]
    fn identical_rows() {
        let m = ResponseMatrix::new(
            labels("t", 3),
            labels("b", 4),
            vec![vec![1.0, 5.0, 2.0, 9.0]; 3],
        )
        .unwrap();
        let t = rcbd_anova(&m);
        assert!(t.treatment.ss.abs() < 1e-9);
        assert!(t.degenerate);
        let g = tukey_hsd(&m, 0.9).unwrap();
        assert!(g.treatments.iter().all(|t| t.letters == "A"));
    }

    #[test]
    fn constant_matrix_is_flagged() {
        let m = ResponseMatrix::new(labels("t", 2), labels("b", 2), vec![vec![3.0; 2]; 2]).unwrap();
        let t = rcbd_anova(&m);
        assert!(t.degenerate);
        assert_eq!(t.treatment.f, Some(0.0));
        assert_eq!(t.treatment.p, Some(1.0));
    }

    #[test]
    fn matrix_validation() {
        assert!(ResponseMatrix::new(labels("t", 1), labels("b", 3), vec![vec![1.0; 3]]).is_err());
        assert!(ResponseMatrix::new(
            labels("t", 2),
            labels("b", 3),
            vec![vec![1.0; 3], vec![1.0; 2]]
        )
        .is_err());
        assert!(ResponseMatrix::new(
            labels("t", 2),
            labels("b", 2),
            vec![vec![1.0, f64::NAN], vec![1.0; 2]]
        )
        .is_err());
    }

    #[test]
    fn csv_round_trip() {
        let text = "algorithm,x,y,z\nA,1,2,3\nB,4,5,6.5\n";
        let m = ResponseMatrix::from_csv(text).unwrap();
        assert_eq!(m.get(1, 2), 6.5);
        assert_eq!(ResponseMatrix::from_csv(&m.to_csv()).unwrap(), m);
        assert!(ResponseMatrix::from_csv("algorithm,x,y\nA,1,zz\nB,1,2\n").is_err());
    }

    #[test]
    fn error_matrix_alignment() {
        let m = ResponseMatrix::from_csv("algorithm,p,q\nA,10,20\nB,11,25\n").unwrap();
        let e = error_matrix(&m, &[("q".into(), 20.0), ("P".into(), 10.0)]).unwrap();
        assert_eq!(e.rows(), &[vec![0.0, 0.0], vec![1.0, 5.0]]);
        assert!(error_matrix(&m, &[("p".into(), 10.0)]).is_err());
        assert!(error_matrix(&m, &[("p".into(), 10.0), ("q".into(), 21.0)]).is_err());
    }

    #[test]
    fn optima_file() {
        let o = parse_optima("instance,optimum\neil51,426\nulysses16, 6859\n").unwrap();
        assert_eq!(
            o,
            vec![
                ("eil51".to_string(), 426.0),
                ("ulysses16".to_string(), 6859.0)
            ]
        );
        assert!(parse_optima("a,1\nb,x\n").is_err());
    }

    #[test]
    fn rejects_bad_confidence() {
        let m = ResponseMatrix::from_csv("algorithm,p,q\nA,10,20\nB,11,25\n").unwrap();
        assert!(tukey_hsd(&m, 1.0).is_err());
        assert!(tukey_hsd(&m, 0.0).is_err());
    }
}
