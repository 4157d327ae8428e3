use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

/// Wall trace entering the stability quadratic forms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StabilityTrace {
    pub n: f64,
    pub u3: f64,
    pub ti: f64,
    /// `e^{-phi_a}(1 + h(phi))`.
    pub electron_factor: f64,
}

impl StabilityTrace {
    /// Trace of a neutral state, `e^{-phi_a} = n`, with `h = 0`.
    pub fn neutral(n: f64, u3: f64, ti: f64) -> Self {
        Self { n, u3, ti, electron_factor: n }
    }
}

/// The symmetric matrices of the energy estimates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum FormKind {
    /// `L2` estimate including the potential, 5 x 5.
    MA,
    /// Transport part `Q0`, 4 x 4.
    Q0,
    /// Normal-derivative estimate, 4 x 4.
    M1B,
    /// Companion of `M1B` weighted by `1 / electron_factor`, 4 x 4.
    M2B,
    /// Conormal estimate on `(eps grad n, eps grad u3)`, 6 x 6.
    MC,
}

impl FormKind {
    pub const ALL: [FormKind; 5] = [FormKind::MA, FormKind::Q0, FormKind::M1B, FormKind::M2B, FormKind::MC];

    pub fn name(self) -> &'static str {
        match self {
            FormKind::MA => "M_A",
            FormKind::Q0 => "Q0",
            FormKind::M1B => "M1_B",
            FormKind::M2B => "M2_B",
            FormKind::MC => "M_C",
        }
    }

    /// Matrix at the trace, before the `mu C Id` shift. Unknowns are ordered
    /// `(n, u1, u2, u3, phi)`; `M_C` takes the three components of
    /// `eps grad n` then those of `eps grad u3`.
    pub fn matrix(self, tr: &StabilityTrace) -> DMatrix<f64> {
        let StabilityTrace { n, ti, electron_factor: f, .. } = *tr;
        let u = tr.u3.abs();
        match self {
            FormKind::MA => {
                let mut m = transport_block(5, ti * u / n, n * u, -ti);
                m[(3, 4)] = n;
                m[(4, 3)] = n;
                m[(4, 4)] = f * u;
                m
            }
            FormKind::Q0 => transport_block(4, ti * u / n, n * u, -ti),
            FormKind::M1B => {
                let mut m = transport_block(4, ti * u / n, n * u, -ti);
                m[(3, 3)] = n * (u - 1.0 / u);
                m
            }
            FormKind::M2B => {
                let s = 1.0 / f;
                transport_block(4, s * n * u, s * ti * u / n, -s * ti)
            }
            FormKind::MC => {
                let mut m = DMatrix::zeros(6, 6);
                for k in 0..3 {
                    m[(k, k)] = ti * u / (n * n);
                    m[(k + 3, k + 3)] = u;
                    m[(k, k + 3)] = -ti / n;
                    m[(k + 3, k)] = -ti / n;
                }
                m
            }
        }
    }
}

/// `[[a, c e^T], [c e, b Id3]]` padded with zeros to `size`.
fn transport_block(size: usize, a: f64, b: f64, c: f64) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(size, size);
    m[(0, 0)] = a;
    for k in 1..4 {
        m[(k, k)] = b;
    }
    m[(0, 3)] = c;
    m[(3, 0)] = c;
    m
}

/// Leading principal minors by fraction-free (Bareiss) elimination without
/// pivoting, so that the `k`-th pivot is the `k`-th minor. A zero pivot
/// switches to direct determinants for the remaining minors.
pub fn leading_minors(m: &DMatrix<f64>) -> Vec<f64> {
    let size = m.nrows();
    let mut a = m.clone();
    let mut prev = 1.0;
    let mut minors = Vec::with_capacity(size);
    for k in 0..size {
        let pivot = a[(k, k)];
        if pivot == 0.0 {
            minors.extend((k + 1..=size).map(|j| m.view((0, 0), (j, j)).determinant()));
            break;
        }
        minors.push(pivot);
        for i in k + 1..size {
            for j in k + 1..size {
                a[(i, j)] = (a[(i, j)] * pivot - a[(i, k)] * a[(k, j)]) / prev;
            }
        }
        prev = pivot;
    }
    minors
}

pub fn smallest_eigenvalue(m: &DMatrix<f64>) -> f64 {
    SymmetricEigen::new(m.clone()).eigenvalues.min()
}

/// Closed-form minors of `M_A` at `mu = 0`:
/// `Ti u/n`, `Ti u^2`, `Ti n u^3`, `Ti n^2 u^2 (u^2 - Ti)` and
/// `Ti n^2 u^3 (f (u^2 - Ti) - n)` with `u = |u3|` and `f` the electron factor.
pub fn minors_ma_closed_form(tr: &StabilityTrace) -> [f64; 5] {
    let StabilityTrace { n, ti, electron_factor: f, .. } = *tr;
    let u = tr.u3.abs();
    let u2 = u * u;
    [ti * u / n, ti * u2, ti * n * u2 * u, ti * n * n * u2 * (u2 - ti), ti * n * n * u2 * u * (f * (u2 - ti) - n)]
}

/// Where a report was evaluated.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct Location {
    pub t: f64,
    pub x3: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuadraticFormReport {
    pub matrix: &'static str,
    pub minors: Vec<f64>,
    /// All leading minors of `M - mu C Id` are positive.
    pub positive: bool,
    /// Largest `mu` keeping `M - mu C Id` positive: `lambda_min / C`, or 0.
    pub mu_critical: f64,
    pub worst_location: Location,
}

/// Sylvester certificate of `kind` at one trace, with shift `mu * c_shift`.
pub fn form_report(kind: FormKind, tr: &StabilityTrace, mu: f64, c_shift: f64) -> QuadraticFormReport {
    let m = kind.matrix(tr);
    let size = m.nrows();
    let shifted = &m - DMatrix::identity(size, size) * (mu * c_shift);
    let minors = leading_minors(&shifted);
    let positive = minors.iter().all(|d| *d > 0.0);
    let mu_critical = (smallest_eigenvalue(&m) / c_shift).max(0.0);
    QuadraticFormReport { matrix: kind.name(), minors, positive, mu_critical, worst_location: Location::default() }
}

/// Sylvester certificate of `M_A`.
pub fn minors_ma(tr: &StabilityTrace, mu: f64, c_shift: f64) -> QuadraticFormReport {
    form_report(FormKind::MA, tr, mu, c_shift)
}

/// Certificates of `Q0`, `M1_B`, `M2_B` and `M_C`.
pub fn minors_other(tr: &StabilityTrace, mu: f64, c_shift: f64) -> Vec<QuadraticFormReport> {
    [FormKind::Q0, FormKind::M1B, FormKind::M2B, FormKind::MC].into_iter().map(|k| form_report(k, tr, mu, c_shift)).collect()
}

/// Certificate of `kind` over sampled traces: positive only if positive
/// everywhere, minors and location taken where `mu_critical` is smallest.
pub fn worst_over(kind: FormKind, samples: &[(Location, StabilityTrace)], mu: f64, c_shift: f64) -> Option<QuadraticFormReport> {
    let mut all_positive = true;
    let mut worst: Option<QuadraticFormReport> = None;
    for (loc, tr) in samples {
        let mut r = form_report(kind, tr, mu, c_shift);
        r.worst_location = *loc;
        all_positive &= r.positive;
        let replace = match &worst {
            None => true,
            Some(w) => (!r.positive && w.positive) || (r.positive == w.positive && r.mu_critical < w.mu_critical),
        };
        if replace {
            worst = Some(r);
        }
    }
    worst.map(|mut w| {
        w.positive = all_positive;
        w
    })
}
