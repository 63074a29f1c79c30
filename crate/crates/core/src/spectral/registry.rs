//! Spectral data for the modular surface and its text format.
//!
//! ```text
//! maass v1
//! # comment
//! form t=9.5336952613535575543 parity=odd norm=l2
//! 1 1.0
//! 2 -1.0683335512235708
//! ...
//!
//! form t=13.779751351890738951 parity=even
//! 1 1.0
//! ...
//! ```
//!
//! Coefficient indices must run `1, 2, 3, …` without gaps. A blank line (or
//! the next `form` line) closes a form. The optional `norm=` token is kept as
//! a provenance note; coefficients are used exactly as supplied.

use std::fmt::{self, Write as _};
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hypgeom::Point;
use crate::lattice::GroupModel;

pub const FORMAT_HEADER: &str = "maass v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

/// A Maass cusp form given by its spectral parameter and Fourier coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct MaassForm {
    t: f64,
    parity: Parity,
    coeffs: Vec<f64>,
    norm_note: String,
}

impl MaassForm {
    /// `coeffs[k]` is `a_{k+1}`.
    pub fn new(t: f64, parity: Parity, coeffs: Vec<f64>, norm_note: impl Into<String>) -> Result<Self> {
        if !(t > 0.0) || !t.is_finite() {
            return Err(Error::Validation(format!("spectral parameter must be positive, got t = {t}")));
        }
        match coeffs.first() {
            None => return Err(Error::Validation(format!("form t = {t} has no coefficients"))),
            Some(0.0) => return Err(Error::Validation(format!("form t = {t} has a_1 = 0"))),
            _ => {}
        }
        if let Some(bad) = coeffs.iter().position(|a| !a.is_finite()) {
            return Err(Error::Validation(format!("form t = {t}: a_{} is not finite", bad + 1)));
        }
        let norm_note = norm_note.into();
        if norm_note.chars().any(char::is_whitespace) {
            return Err(Error::Validation(format!("norm note {norm_note:?} contains whitespace")));
        }
        Ok(MaassForm { t, parity, coeffs, norm_note })
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    /// Laplace eigenvalue `1/4 + t²`.
    pub fn eigenvalue(&self) -> f64 {
        0.25 + self.t * self.t
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    /// `a_1, a_2, …, a_{n_max}`.
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn n_max(&self) -> usize {
        self.coeffs.len()
    }

    pub fn norm_note(&self) -> &str {
        &self.norm_note
    }
}

/// Values of an eigenfunction at the points where it is needed.
#[derive(Debug, Clone, PartialEq)]
pub enum PointValues {
    Constant(Complex64),
    Table(Vec<(Point, Complex64)>),
}

impl PointValues {
    pub fn at(&self, z: Point) -> Result<Complex64> {
        match self {
            PointValues::Constant(v) => Ok(*v),
            PointValues::Table(rows) => rows
                .iter()
                .find(|(p, _)| *p == z)
                .map(|(_, v)| *v)
                .ok_or_else(|| Error::domain(format!("no tabulated value at {z}"))),
        }
    }
}

/// Eigenvalue `s(1 − s)` with `s ∈ (1/2, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SmallEigenvalue {
    pub s: f64,
    pub values: PointValues,
}

/// Eigenfunction with eigenvalue exactly `1/4` (`t = 0`).
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroForm {
    pub values: PointValues,
}

/// Everything the spectral side needs for the modular group.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralRegistry {
    group: GroupModel,
    small_eigs: Vec<SmallEigenvalue>,
    zero_forms: Vec<ZeroForm>,
    cusp_forms: Vec<MaassForm>,
    sigma_gap: f64,
}

impl Default for SpectralRegistry {
    fn default() -> Self {
        Self::modular()
    }
}

impl SpectralRegistry {
    /// The modular group with only the constant eigenfunction `u₀ = (π/3)^{−1/2}`.
    pub fn modular() -> Self {
        Self::for_group(GroupModel::FullModular)
    }

    /// Only `s₀ = 1` with `u₀ = vol^{−1/2}`; enough for main terms of any group.
    pub fn for_group(group: GroupModel) -> Self {
        let vol = group.covolume();
        SpectralRegistry {
            group,
            small_eigs: vec![SmallEigenvalue {
                s: 1.0,
                values: PointValues::Constant(Complex64::new(1.0 / vol.sqrt(), 0.0)),
            }],
            zero_forms: Vec::new(),
            cusp_forms: Vec::new(),
            sigma_gap: 0.5,
        }
    }

    /// Modular-group registry holding the given cusp forms, sorted by `t`.
    pub fn with_forms(forms: Vec<MaassForm>) -> Result<Self> {
        let mut reg = Self::modular();
        for f in forms {
            reg.add_form(f)?;
        }
        Ok(reg)
    }

    pub fn add_form(&mut self, form: MaassForm) -> Result<()> {
        if self.cusp_forms.iter().any(|f| f.t == form.t) {
            return Err(Error::Validation(format!("duplicate spectral parameter t = {}", form.t)));
        }
        let pos = self.cusp_forms.partition_point(|f| f.t < form.t);
        self.cusp_forms.insert(pos, form);
        Ok(())
    }

    /// Adds an exceptional eigenvalue `s ∈ (1/2, 1)` and updates the gap `σ`.
    pub fn add_small_eigenvalue(&mut self, s: f64, values: PointValues) -> Result<()> {
        if !(s > 0.5 && s < 1.0) {
            return Err(Error::Validation(format!("small eigenvalue needs s in (1/2, 1), got {s}")));
        }
        self.small_eigs.push(SmallEigenvalue { s, values });
        self.small_eigs.sort_by(|a, b| b.s.total_cmp(&a.s));
        self.sigma_gap = self
            .small_eigs
            .iter()
            .map(|e| e.s - 0.5)
            .fold(0.5, f64::min)
            .clamp(f64::MIN_POSITIVE, 0.5);
        Ok(())
    }

    pub fn add_zero_form(&mut self, values: PointValues) {
        self.zero_forms.push(ZeroForm { values });
    }

    pub fn group(&self) -> GroupModel {
        self.group
    }

    /// Sorted by decreasing `s`; the first entry is always `s₀ = 1`.
    pub fn small_eigs(&self) -> &[SmallEigenvalue] {
        &self.small_eigs
    }

    pub fn zero_forms(&self) -> &[ZeroForm] {
        &self.zero_forms
    }

    /// Sorted by increasing `t`.
    pub fn cusp_forms(&self) -> &[MaassForm] {
        &self.cusp_forms
    }

    /// Forms with `0 < t < a`.
    pub fn forms_below(&self, a: f64) -> &[MaassForm] {
        let k = self.cusp_forms.partition_point(|f| f.t < a);
        &self.cusp_forms[..k]
    }

    /// `σ = min (s_j − 1/2)`, clamped to `(0, 1/2]`.
    pub fn sigma_gap(&self) -> f64 {
        self.sigma_gap
    }

    /// Serializes the cusp forms in the registry file format.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(FORMAT_HEADER);
        out.push('\n');
        for (k, f) in self.cusp_forms.iter().enumerate() {
            if k > 0 {
                out.push('\n');
            }
            let _ = write!(out, "form t={} parity={}", f.t, f.parity);
            if !f.norm_note.is_empty() {
                let _ = write!(out, " norm={}", f.norm_note);
            }
            out.push('\n');
            for (n, a) in f.coeffs.iter().enumerate() {
                let _ = writeln!(out, "{} {}", n + 1, a);
            }
        }
        out
    }
}

struct Pending {
    line: usize,
    t: f64,
    parity: Parity,
    norm: String,
    coeffs: Vec<f64>,
}

/// Parses the registry text format.
pub fn parse_registry(text: &str) -> Result<SpectralRegistry> {
    let mut reg = SpectralRegistry::modular();
    let mut header_seen = false;
    let mut pending: Option<Pending> = None;

    let finish = |reg: &mut SpectralRegistry, p: Pending| -> Result<()> {
        if p.coeffs.is_empty() {
            return Err(Error::Parse { line: p.line, msg: "form has no coefficient lines".into() });
        }
        reg.add_form(MaassForm::new(p.t, p.parity, p.coeffs, p.norm)?)
    };

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.starts_with('#') {
            continue;
        }
        if line.is_empty() {
            if let Some(p) = pending.take() {
                finish(&mut reg, p)?;
            }
            continue;
        }
        if !header_seen {
            if line != FORMAT_HEADER {
                return Err(Error::Parse { line: line_no, msg: format!("expected header {FORMAT_HEADER:?}") });
            }
            header_seen = true;
            continue;
        }
        if let Some(rest) = line.strip_prefix("form") {
            if let Some(p) = pending.take() {
                finish(&mut reg, p)?;
            }
            pending = Some(parse_form_line(rest, line_no)?);
            continue;
        }
        let Some(p) = pending.as_mut() else {
            return Err(Error::Parse { line: line_no, msg: "coefficient line outside a form".into() });
        };
        let mut parts = line.split_whitespace();
        let (Some(ns), Some(vs), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(Error::Parse { line: line_no, msg: "expected \"<n> <a_n>\"".into() });
        };
        let n: usize = ns
            .parse()
            .map_err(|_| Error::Parse { line: line_no, msg: format!("bad index {ns:?}") })?;
        let a: f64 = vs
            .parse()
            .map_err(|_| Error::Parse { line: line_no, msg: format!("bad coefficient {vs:?}") })?;
        let expected = p.coeffs.len() + 1;
        if n != expected {
            return Err(Error::Parse {
                line: line_no,
                msg: format!("coefficient index {n} out of sequence, expected {expected}"),
            });
        }
        p.coeffs.push(a);
    }
    if !header_seen {
        return Err(Error::Parse { line: 1, msg: format!("missing header {FORMAT_HEADER:?}") });
    }
    if let Some(p) = pending.take() {
        finish(&mut reg, p)?;
    }
    Ok(reg)
}

fn parse_form_line(rest: &str, line: usize) -> Result<Pending> {
    let err = |msg: String| Error::Parse { line, msg };
    if !rest.starts_with(char::is_whitespace) {
        return Err(err("expected \"form t=<value> parity=<even|odd>\"".into()));
    }
    let (mut t, mut parity, mut norm) = (None, None, String::new());
    for tok in rest.split_whitespace() {
        let (key, value) = tok.split_once('=').ok_or_else(|| err(format!("bad token {tok:?}")))?;
        match key {
            "t" => t = Some(value.parse::<f64>().map_err(|_| err(format!("bad t value {value:?}")))?),
            "parity" => {
                parity = Some(match value {
                    "even" => Parity::Even,
                    "odd" => Parity::Odd,
                    _ => return Err(err(format!("bad parity {value:?}"))),
                })
            }
            "norm" => norm = value.to_string(),
            _ => return Err(err(format!("unknown key {key:?}"))),
        }
    }
    Ok(Pending {
        line,
        t: t.ok_or_else(|| err("missing t=".into()))?,
        parity: parity.ok_or_else(|| err("missing parity=".into()))?,
        norm,
        coeffs: Vec::new(),
    })
}

/// Reads and parses a registry file.
pub fn load_registry(path: impl AsRef<Path>) -> Result<SpectralRegistry> {
    parse_registry(&std::fs::read_to_string(path)?)
}
