//! Analysis and synthesis between sampled disk fields and mode-coefficient
//! tables, plus the Parseval gap, a coefficient-decay smoothness norm, and
//! tolerance-driven truncation.

use std::io::{BufRead, Write};

use num_complex::Complex64;

use crate::quadrature::{inner_product, norm_squared, QuadratureGrid, SampledField};
use crate::zernike::{ModeIndex, RadialPolynomial};
use crate::{Error, Result};

/// Dense table of mode coefficients `f_{k,l}`, `0 ≤ k ≤ max_k`,
/// `0 ≤ l ≤ max_l`. A real-valued function has `f_{l,k} = conj(f_{k,l})`;
/// see [`CoefficientTable::hermitian_defect`].
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientTable {
    max_k: usize,
    max_l: usize,
    entries: Vec<Complex64>,
}

impl CoefficientTable {
    pub fn new(max_k: usize, max_l: usize) -> Self {
        Self {
            max_k,
            max_l,
            entries: vec![Complex64::new(0.0, 0.0); (max_k + 1) * (max_l + 1)],
        }
    }

    /// Convenience constructor from sparse entries; the table is sized by
    /// the largest indices present.
    pub fn from_entries(entries: &[(u32, u32, Complex64)]) -> Self {
        let max_k = entries.iter().map(|e| e.0).max().unwrap_or(0) as usize;
        let max_l = entries.iter().map(|e| e.1).max().unwrap_or(0) as usize;
        let mut table = Self::new(max_k, max_l);
        for &(k, l, v) in entries {
            table.set(k as usize, l as usize, v);
        }
        table
    }

    fn idx(&self, k: usize, l: usize) -> usize {
        k * (self.max_l + 1) + l
    }

    pub fn max_k(&self) -> usize {
        self.max_k
    }

    pub fn max_l(&self) -> usize {
        self.max_l
    }

    /// Coefficient at (k, l); zero outside the stored rectangle.
    pub fn get(&self, k: usize, l: usize) -> Complex64 {
        if k <= self.max_k && l <= self.max_l {
            self.entries[self.idx(k, l)]
        } else {
            Complex64::new(0.0, 0.0)
        }
    }

    pub fn set(&mut self, k: usize, l: usize, value: Complex64) {
        assert!(k <= self.max_k && l <= self.max_l, "index outside the table");
        let i = self.idx(k, l);
        self.entries[i] = value;
    }

    /// Row-major iteration over (k, l, value).
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        let cols = self.max_l + 1;
        self.entries
            .iter()
            .enumerate()
            .map(move |(i, &v)| (i / cols, i % cols, v))
    }

    /// Total energy `Σ |f_{k,l}|²`.
    pub fn energy(&self) -> f64 {
        self.entries.iter().map(|v| v.norm_sqr()).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self {
            max_k: self.max_k,
            max_l: self.max_l,
            entries: self.entries.iter().map(|v| v * factor).collect(),
        }
    }

    /// Entrywise sum; the result covers the union rectangle.
    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a + b)
    }

    /// Entrywise difference; the result covers the union rectangle.
    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a - b)
    }

    fn combine(&self, other: &Self, op: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        let max_k = self.max_k.max(other.max_k);
        let max_l = self.max_l.max(other.max_l);
        let mut out = Self::new(max_k, max_l);
        for k in 0..=max_k {
            for l in 0..=max_l {
                out.set(k, l, op(self.get(k, l), other.get(k, l)));
            }
        }
        out
    }

    /// Largest `|f_{l,k} − conj(f_{k,l})|` over the square hull of the
    /// table; zero (to rounding) for tables analyzed from real fields.
    pub fn hermitian_defect(&self) -> f64 {
        let side = self.max_k.max(self.max_l);
        let mut worst = 0.0f64;
        for k in 0..=side {
            for l in 0..=side {
                worst = worst.max((self.get(l, k) - self.get(k, l).conj()).norm());
            }
        }
        worst
    }

    /// Restriction to the rectangle `k ≤ max_k`, `l ≤ max_l`.
    pub fn truncated(&self, max_k: usize, max_l: usize) -> Self {
        let mut out = Self::new(max_k, max_l);
        for k in 0..=max_k {
            for l in 0..=max_l {
                out.set(k, l, self.get(k, l));
            }
        }
        out
    }

    /// Writes the `k,l,re,im` CSV form: one row per entry, row-major in
    /// (k, l), 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "k,l,re,im")?;
        for (k, l, v) in self.iter() {
            writeln!(w, "{k},{l},{:.16e},{:.16e}", v.re, v.im)?;
        }
        Ok(())
    }

    /// Reads the CSV form written by [`CoefficientTable::write_csv`]. The
    /// table is sized by the largest indices present; missing entries stay
    /// zero.
    pub fn read_csv<R: BufRead>(r: R) -> Result<Self> {
        let mut rows: Vec<(usize, usize, Complex64)> = Vec::new();
        for (lineno, line) in r.lines().enumerate() {
            let line = line?;
            let trimmed = line.trim();
            if lineno == 0 {
                let header: Vec<&str> = trimmed.split(',').map(str::trim).collect();
                if header != ["k", "l", "re", "im"] {
                    return Err(Error::CoefficientCsv {
                        line: 1,
                        message: format!("expected header k,l,re,im, got {trimmed:?}"),
                    });
                }
                continue;
            }
            if trimmed.is_empty() {
                continue;
            }
            let fields: Vec<&str> = trimmed.split(',').map(str::trim).collect();
            if fields.len() != 4 {
                return Err(Error::CoefficientCsv {
                    line: lineno + 1,
                    message: format!("expected 4 fields, got {}", fields.len()),
                });
            }
            let parse_err = |what: &str| Error::CoefficientCsv {
                line: lineno + 1,
                message: format!("cannot parse {what}"),
            };
            let k: usize = fields[0].parse().map_err(|_| parse_err("k"))?;
            let l: usize = fields[1].parse().map_err(|_| parse_err("l"))?;
            let re: f64 = fields[2].parse().map_err(|_| parse_err("re"))?;
            let im: f64 = fields[3].parse().map_err(|_| parse_err("im"))?;
            rows.push((k, l, Complex64::new(re, im)));
        }
        let max_k = rows.iter().map(|r| r.0).max().unwrap_or(0);
        let max_l = rows.iter().map(|r| r.1).max().unwrap_or(0);
        let mut table = Self::new(max_k, max_l);
        for (k, l, v) in rows {
            table.set(k, l, v);
        }
        Ok(table)
    }
}

/// Projects a sampled field onto every mode in the rectangle:
/// `f_{k,l} = ⟨f, V_{k,l}⟩`. The grid must be exact up to total degree
/// `max_k + max_l` so in-band projections are trustworthy.
pub fn analyze(f: &SampledField<'_>, max_k: usize, max_l: usize) -> Result<CoefficientTable> {
    let needed = max_k + max_l;
    let available = f.grid().max_exact_degree();
    if available < needed {
        return Err(Error::InsufficientGridDegree { needed, available });
    }
    let mut table = CoefficientTable::new(max_k, max_l);
    for k in 0..=max_k {
        for l in 0..=max_l {
            let mode = SampledField::sample_mode(f.grid(), ModeIndex::new(k as u32, l as u32));
            let coeff = inner_product(f, &mode)?;
            table.set(k, l, coeff);
        }
    }
    Ok(table)
}

/// Pointwise finite sum `Σ_{k,l} f_{k,l} V_{k,l}(r_i, θ_j)` over the grid.
pub fn synthesize<'g>(c: &CoefficientTable, grid: &'g QuadratureGrid) -> SampledField<'g> {
    let mut values = vec![Complex64::new(0.0, 0.0); grid.len()];
    let n_theta = grid.n_theta();
    for k in 0..=c.max_k() {
        for l in 0..=c.max_l() {
            let coeff = c.get(k, l);
            if coeff.norm_sqr() == 0.0 {
                continue;
            }
            let idx = ModeIndex::new(k as u32, l as u32);
            let radial = RadialPolynomial::new(idx.radial_index());
            let scale = ((idx.n() + 1) as f64).sqrt();
            let m = idx.m() as f64;
            for (i, &r) in grid.radial_nodes().iter().enumerate() {
                let amplitude = coeff * scale * radial.eval(r).expect("grid nodes are interior");
                for j in 0..n_theta {
                    values[i * n_theta + j] += amplitude * Complex64::cis(m * grid.theta(j));
                }
            }
        }
    }
    SampledField::from_values(grid, values)
}

/// `| (1/π)∫∫ |f|² r dr dθ − Σ |f_{k,l}|² |`: zero (to quadrature accuracy)
/// when the table captures all of the field's energy.
pub fn parseval_gap(c: &CoefficientTable, f: &SampledField<'_>) -> f64 {
    (norm_squared(f) - c.energy()).abs()
}

/// `Σ (k+1)² (l+1)² |f_{k,l}|²`. Growth of this sum under band enlargement
/// diagnoses how far the coefficients are from Schwartz-class decay.
pub fn schwartz_norm(c: &CoefficientTable) -> f64 {
    c.iter()
        .map(|(k, l, v)| {
            let wk = (k + 1) as f64;
            let wl = (l + 1) as f64;
            wk * wk * wl * wl * v.norm_sqr()
        })
        .sum()
}

/// Smallest rectangle `(k_M, l_M)` whose complement holds at most
/// `eps² · Σ|f|²` of the energy. "Smallest" means fewest retained entries;
/// ties prefer smaller `k_M + l_M`, then smaller `k_M`. The all-zero table
/// yields (0, 0).
pub fn truncate_to_tolerance(c: &CoefficientTable, eps: f64) -> (usize, usize) {
    assert!(eps > 0.0, "tolerance must be positive");
    let total = c.energy();
    if total == 0.0 {
        return (0, 0);
    }
    let threshold = eps * eps * total;
    // prefix[k][l] = energy inside the rectangle (0..=k, 0..=l)
    let (kk, ll) = (c.max_k() + 1, c.max_l() + 1);
    let mut prefix = vec![0.0f64; kk * ll];
    for k in 0..kk {
        for l in 0..ll {
            let e = c.get(k, l).norm_sqr();
            let up = if k > 0 { prefix[(k - 1) * ll + l] } else { 0.0 };
            let left = if l > 0 { prefix[k * ll + l - 1] } else { 0.0 };
            let diag = if k > 0 && l > 0 { prefix[(k - 1) * ll + l - 1] } else { 0.0 };
            prefix[k * ll + l] = e + up + left - diag;
        }
    }
    let mut best: Option<(usize, usize, usize)> = None; // (area, sum, k)
    let mut best_pair = (c.max_k(), c.max_l());
    for k in 0..kk {
        for l in 0..ll {
            let tail = total - prefix[k * ll + l];
            if tail <= threshold {
                let key = ((k + 1) * (l + 1), k + l, k);
                if best.is_none_or(|b| key < b) {
                    best = Some(key);
                    best_pair = (k, l);
                }
            }
        }
    }
    best_pair
}
