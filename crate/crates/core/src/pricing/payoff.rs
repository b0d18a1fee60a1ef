use std::io::Read;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// European payoff `f(S_T)` with its maturity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Payoff {
    pub kind: PayoffKind,
    pub maturity: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "type")]
pub enum PayoffKind {
    Call { strike: f64 },
    Put { strike: f64 },
    Identity,
    Power { exponent: f64 },
    Tabulated(TabulatedPayoff),
}

impl Payoff {
    pub fn new(kind: PayoffKind, maturity: f64) -> Result<Self> {
        if !(maturity > 0.0 && maturity.is_finite()) {
            return Err(Error::invalid(format!("maturity must be positive, got {maturity}")));
        }
        match &kind {
            PayoffKind::Call { strike } | PayoffKind::Put { strike } if !(*strike > 0.0) => {
                return Err(Error::invalid(format!("strike must be positive, got {strike}")));
            }
            PayoffKind::Power { exponent } if !exponent.is_finite() => {
                return Err(Error::invalid("power exponent must be finite"));
            }
            _ => {}
        }
        Ok(Self { kind, maturity })
    }

    pub fn call(strike: f64, maturity: f64) -> Result<Self> {
        Self::new(PayoffKind::Call { strike }, maturity)
    }

    pub fn put(strike: f64, maturity: f64) -> Result<Self> {
        Self::new(PayoffKind::Put { strike }, maturity)
    }

    pub fn identity(maturity: f64) -> Result<Self> {
        Self::new(PayoffKind::Identity, maturity)
    }

    pub fn power(exponent: f64, maturity: f64) -> Result<Self> {
        Self::new(PayoffKind::Power { exponent }, maturity)
    }

    pub fn eval(&self, s: f64) -> f64 {
        self.kind.eval(s)
    }

    /// Prices where the payoff fails to be smooth; quadrature splits there.
    pub fn breakpoints(&self) -> Vec<f64> {
        match &self.kind {
            PayoffKind::Call { strike } | PayoffKind::Put { strike } => vec![*strike],
            PayoffKind::Tabulated(t) => t.x.clone(),
            PayoffKind::Identity | PayoffKind::Power { .. } => Vec::new(),
        }
    }
}

impl PayoffKind {
    pub fn eval(&self, s: f64) -> f64 {
        match self {
            PayoffKind::Call { strike } => (s - strike).max(0.0),
            PayoffKind::Put { strike } => (strike - s).max(0.0),
            PayoffKind::Identity => s,
            PayoffKind::Power { exponent } => s.powf(*exponent),
            PayoffKind::Tabulated(t) => t.eval(s),
        }
    }
}

/// Payoff given by samples `(x, f, f', f'')`, interpolated by quintic Hermite
/// pieces (so the interpolant is C^2) and extended flat beyond the table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TabulatedPayoff {
    x: Vec<f64>,
    f: Vec<f64>,
    df: Vec<f64>,
    d2f: Vec<f64>,
}

impl TabulatedPayoff {
    pub fn new(x: Vec<f64>, f: Vec<f64>, df: Vec<f64>, d2f: Vec<f64>) -> Result<Self> {
        let n = x.len();
        if n < 2 || f.len() != n || df.len() != n || d2f.len() != n {
            return Err(Error::invalid("tabulated payoff needs >= 2 rows of (x, f, f', f'')"));
        }
        if x[0] <= 0.0 || x.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::invalid("tabulated x must be positive and strictly increasing"));
        }
        if ![&x, &f, &df, &d2f].iter().all(|c| c.iter().all(|v| v.is_finite())) {
            return Err(Error::invalid("tabulated payoff has non-finite entries"));
        }
        // Corrected trapezoid on f' reproduces the increment of f up to O(h^5).
        for i in 0..n - 1 {
            let h = x[i + 1] - x[i];
            let predicted = 0.5 * h * (df[i] + df[i + 1]) + h * h * (d2f[i] - d2f[i + 1]) / 12.0;
            let actual = f[i + 1] - f[i];
            let scale = actual.abs() + h * df[i].abs().max(df[i + 1].abs()) + 1e-12;
            if (predicted - actual).abs() > 1e-2 * scale {
                return Err(Error::invalid(format!(
                    "tabulated derivatives inconsistent with values on [{}, {}]",
                    x[i],
                    x[i + 1]
                )));
            }
        }
        Ok(Self { x, f, df, d2f })
    }

    /// Sample a C^2 function and its derivatives at `x`.
    pub fn from_fn(x: Vec<f64>, f: impl Fn(f64) -> (f64, f64, f64)) -> Result<Self> {
        let (mut v, mut d, mut dd) = (Vec::new(), Vec::new(), Vec::new());
        for &xi in &x {
            let (a, b, c) = f(xi);
            v.push(a);
            d.push(b);
            dd.push(c);
        }
        Self::new(x, v, d, dd)
    }

    /// Read `x,f,df,d2f` rows with a header line.
    pub fn from_csv<R: Read>(input: R) -> Result<Self> {
        let mut r = csv::Reader::from_reader(input);
        let mut cols: [Vec<f64>; 4] = Default::default();
        for rec in r.records() {
            let rec = rec?;
            if rec.len() != 4 {
                return Err(Error::invalid(format!("expected 4 columns, got {}", rec.len())));
            }
            for (c, field) in cols.iter_mut().zip(rec.iter()) {
                c.push(
                    field
                        .trim()
                        .parse()
                        .map_err(|e| Error::invalid(format!("bad number `{field}`: {e}")))?,
                );
            }
        }
        let [x, f, df, d2f] = cols;
        Self::new(x, f, df, d2f)
    }

    pub fn knots(&self) -> &[f64] {
        &self.x
    }

    pub fn eval(&self, s: f64) -> f64 {
        let n = self.x.len();
        if s <= self.x[0] {
            return self.f[0];
        }
        if s >= self.x[n - 1] {
            return self.f[n - 1];
        }
        let i = self.x.partition_point(|&k| k <= s) - 1;
        let h = self.x[i + 1] - self.x[i];
        let u = (s - self.x[i]) / h;
        let (u2, u3) = (u * u, u * u * u);
        let (u4, u5) = (u3 * u, u3 * u2);
        let h0 = 1.0 - 10.0 * u3 + 15.0 * u4 - 6.0 * u5;
        let h1 = u - 6.0 * u3 + 8.0 * u4 - 3.0 * u5;
        let h2 = 0.5 * u2 - 1.5 * u3 + 1.5 * u4 - 0.5 * u5;
        let h3 = 0.5 * u3 - u4 + 0.5 * u5;
        let h4 = -4.0 * u3 + 7.0 * u4 - 3.0 * u5;
        let h5 = 10.0 * u3 - 15.0 * u4 + 6.0 * u5;
        self.f[i] * h0
            + h * self.df[i] * h1
            + h * h * self.d2f[i] * h2
            + h * h * self.d2f[i + 1] * h3
            + h * self.df[i + 1] * h4
            + self.f[i + 1] * h5
    }
}
