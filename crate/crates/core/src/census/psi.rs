//! Slowly growing window functions ψ and ψ̄.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mode::Mode;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum PsiKind {
    /// ln ln ln t
    LnLnLn,
    /// c·(ln t)^a
    PowLog { a: f64, c: f64 },
    Const(f64),
    /// ψ(t)^e for an inner function
    PowOf { inner: Box<PsiKind>, e: f64 },
    /// s·ψ(t)
    Scaled { inner: Box<PsiKind>, s: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PsiRole {
    Psi,
    PsiBar,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PsiFunction {
    pub kind: PsiKind,
    pub role: PsiRole,
}

impl PsiKind {
    pub fn eval(&self, t: f64) -> f64 {
        match self {
            PsiKind::LnLnLn => t.ln().ln().ln(),
            PsiKind::PowLog { a, c } => c * t.ln().powf(*a),
            PsiKind::Const(c) => *c,
            PsiKind::PowOf { inner, e } => inner.eval(t).powf(*e),
            PsiKind::Scaled { inner, s } => s * inner.eval(t),
        }
    }

    /// Whether the function tends to infinity with t.
    pub fn diverges(&self) -> bool {
        match self {
            PsiKind::LnLnLn => true,
            PsiKind::PowLog { a, c } => *a > 0.0 && *c > 0.0,
            PsiKind::Const(_) => false,
            PsiKind::PowOf { inner, e } => *e > 0.0 && inner.diverges(),
            PsiKind::Scaled { inner, s } => *s > 0.0 && inner.diverges(),
        }
    }

    /// Nondecreasing wherever the function is positive.
    pub fn nondecreasing(&self) -> bool {
        match self {
            PsiKind::LnLnLn | PsiKind::Const(_) => true,
            PsiKind::PowLog { a, c } => a * c >= 0.0,
            PsiKind::PowOf { inner, e } => *e >= 0.0 && inner.nondecreasing(),
            PsiKind::Scaled { inner, s } => *s >= 0.0 && inner.nondecreasing(),
        }
    }

    fn parse_with(s: &str, psi: Option<&PsiKind>) -> Result<PsiKind> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        let num = |x: &str| -> Result<f64> {
            x.parse::<f64>()
                .map_err(|_| Error::validation(format!("bad number {x:?} in psi spec {s:?}")))
        };
        match parts.as_slice() {
            ["lnlnln"] => Ok(PsiKind::LnLnLn),
            ["sqrtlog"] => Ok(PsiKind::PowLog { a: 0.5, c: 1.0 }),
            ["const", c] => Ok(PsiKind::Const(num(c)?)),
            ["powlog", a, c] => Ok(PsiKind::PowLog {
                a: num(a)?,
                c: num(c)?,
            }),
            ["pow", "psi", e] => Ok(PsiKind::PowOf {
                inner: Box::new(psi.cloned().unwrap_or(PsiKind::LnLnLn)),
                e: num(e)?,
            }),
            ["pow", inner @ .., e] if !inner.is_empty() => Ok(PsiKind::PowOf {
                inner: Box::new(PsiKind::parse_with(&inner.join(":"), psi)?),
                e: num(e)?,
            }),
            ["scale", f, inner @ ..] if !inner.is_empty() => Ok(PsiKind::Scaled {
                inner: Box::new(PsiKind::parse_with(&inner.join(":"), psi)?),
                s: num(f)?,
            }),
            _ => Err(Error::validation(format!(
                "unknown psi spec {s:?}; expected lnlnln, sqrtlog, const:c, powlog:a:c, pow:psi:e or scale:s:<psi>"
            ))),
        }
    }
}

impl fmt::Display for PsiKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PsiKind::LnLnLn => write!(f, "lnlnln"),
            PsiKind::PowLog { a, c } => write!(f, "powlog:{a}:{c}"),
            PsiKind::Const(c) => write!(f, "const:{c}"),
            PsiKind::PowOf { inner, e } => write!(f, "pow:{inner}:{e}"),
            PsiKind::Scaled { inner, s } => write!(f, "scale:{s}:{inner}"),
        }
    }
}

impl FromStr for PsiKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<PsiKind> {
        PsiKind::parse_with(s, None)
    }
}

impl PsiFunction {
    pub fn psi(kind: PsiKind) -> Self {
        PsiFunction {
            kind,
            role: PsiRole::Psi,
        }
    }

    pub fn psi_bar(kind: PsiKind) -> Self {
        PsiFunction {
            kind,
            role: PsiRole::PsiBar,
        }
    }

    /// Default ψ = ln ln ln t.
    pub fn default_psi() -> Self {
        PsiFunction::psi(PsiKind::LnLnLn)
    }

    /// Default ψ̄ = ψ^{1/4}.
    pub fn default_psi_bar(psi: &PsiFunction) -> Self {
        PsiFunction::psi_bar(PsiKind::PowOf {
            inner: Box::new(psi.kind.clone()),
            e: 0.25,
        })
    }

    /// Parse a spec string; `pow:psi:e` refers to `psi` when given.
    pub fn parse(s: &str, role: PsiRole, psi: Option<&PsiFunction>) -> Result<Self> {
        Ok(PsiFunction {
            kind: PsiKind::parse_with(s, psi.map(|p| &p.kind))?,
            role,
        })
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.kind.eval(t)
    }

    /// Pointwise multiple s·ψ for s > 0.
    pub fn scaled(&self, s: f64) -> Result<Self> {
        if !(s.is_finite() && s > 0.0) {
            return Err(Error::validation(format!("psi scale must be positive, got {s}")));
        }
        Ok(PsiFunction {
            kind: self.kind.scaled(s)?,
            role: self.role,
        })
    }

    /// Check positivity, monotonicity, the √ln t ceiling and divergence on
    /// [lo, hi]. Violations are errors in paper mode and warnings otherwise.
    pub fn validate(&self, lo: f64, hi: f64, mode: Mode, warnings: &mut Vec<String>) -> Result<()> {
        let name = match self.role {
            PsiRole::Psi => "psi",
            PsiRole::PsiBar => "psi_bar",
        };
        let (a, b) = (self.eval(lo), self.eval(hi));
        if !(a.is_finite() && b.is_finite()) {
            return Err(Error::validation(format!("{name} = {} is undefined on [{lo}, {hi}]", self.kind)));
        }
        mode.check(a > 0.0 && b > 0.0, || format!("{name} = {} is not positive on [{lo}, {hi}]", self.kind), warnings)?;
        mode.check(
            self.kind.nondecreasing() && b >= a,
            || format!("{name} = {} is not nondecreasing", self.kind),
            warnings,
        )?;
        let ceiling = |t: f64| t.ln().sqrt() * (1.0 + 1e-12);
        mode.check(
            a <= ceiling(lo) && b <= ceiling(hi),
            || format!("{name} = {} exceeds sqrt(ln t) on the window", self.kind),
            warnings,
        )?;
        if self.role == PsiRole::Psi {
            mode.check(
                self.kind.diverges(),
                || format!("psi = {} does not increase to infinity", self.kind),
                warnings,
            )?;
        }
        Ok(())
    }
}

impl PsiKind {
    fn scaled(&self, s: f64) -> Result<PsiKind> {
        Ok(match self {
            PsiKind::Const(c) => PsiKind::Const(c * s),
            PsiKind::PowLog { a, c } => PsiKind::PowLog { a: *a, c: c * s },
            PsiKind::Scaled { inner, s: s0 } => PsiKind::Scaled {
                inner: inner.clone(),
                s: s0 * s,
            },
            other => PsiKind::Scaled {
                inner: Box::new(other.clone()),
                s,
            },
        })
    }
}
