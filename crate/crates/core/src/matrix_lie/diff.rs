use std::cell::Cell;

use super::{commutator, expm, Coords, LieError, Mat, SmoothMap, TangentVector};

/// Central-difference step.
pub const FD_STEP: f64 = 1e-5;
/// Relative tolerance of the step-halving consistency check.
pub const RICHARDSON_TOL: f64 = 1e-5;

/// Running totals of the step-halving checks performed on this thread.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RichardsonStats {
    pub evaluations: u64,
    pub failures: u64,
    /// Largest `|D(h) - D(h/2)| / max(|D(h/2)|, 1)` seen.
    pub max_relative_discrepancy: f64,
}

thread_local! {
    static STATS: Cell<RichardsonStats> = Cell::new(RichardsonStats::default());
}

pub fn richardson_stats() -> RichardsonStats {
    STATS.with(Cell::get)
}

pub fn reset_richardson_stats() {
    STATS.with(|s| s.set(RichardsonStats::default()));
}

/// Given the central differences at `h` and `h/2`, records the consistency
/// check and returns the extrapolated value `(4 D(h/2) - D(h)) / 3`.
fn richardson(d_h: Mat, d_half: Mat) -> Result<Mat, LieError> {
    let discrepancy = (&d_h - &d_half).norm();
    let scale = d_half.norm().max(1.0);
    let failed = discrepancy > RICHARDSON_TOL * scale;
    STATS.with(|s| {
        let mut st = s.get();
        st.evaluations += 1;
        st.failures += u64::from(failed);
        st.max_relative_discrepancy = st.max_relative_discrepancy.max(discrepancy / scale);
        s.set(st);
    });
    if failed {
        return Err(LieError::NumericalInstability { discrepancy, scale });
    }
    Ok((d_half * 4.0 - d_h) / 3.0)
}

/// Derivative at `0` of a matrix-valued function of one real variable, with
/// step `h` and the same consistency check as [`differential`].
pub fn derivative_at_zero(f: impl Fn(f64) -> Mat, h: f64) -> Result<Mat, LieError> {
    let central = |h: f64| (f(h) - f(-h)) / (2.0 * h);
    richardson(central(h), central(h / 2.0))
}

/// The curve `base exp(tau base^-1 dir)`.
fn curve(v: &TangentVector) -> Result<impl Fn(f64) -> Mat + '_, LieError> {
    let inv = v.base.clone().try_inverse().ok_or(LieError::NotInvertible)?;
    let xi = inv * &v.dir;
    Ok(move |tau: f64| &v.base * expm(&(&xi * tau)).expect("small argument"))
}

/// `Tf(v)` for a map given as a closure, by central differences along the
/// left-translation curve through `v`.
pub fn differential_fn(f: impl Fn(&Mat) -> Mat, v: &TangentVector) -> Result<TangentVector, LieError> {
    let c = curve(v)?;
    let dir = derivative_at_zero(|tau| f(&c(tau)), FD_STEP)?;
    Ok(TangentVector::new(f(&v.base), dir))
}

/// `Tf(v)` for a [`SmoothMap`].
pub fn differential(f: &SmoothMap, v: &TangentVector) -> Result<TangentVector, LieError> {
    differential_fn(|x| f.eval(x), v)
}

/// `Tf(v, w)` for a map of two variables, moving along both curves at once.
pub fn differential_binary(
    f: impl Fn(&Mat, &Mat) -> Mat,
    v: &TangentVector,
    w: &TangentVector,
) -> Result<TangentVector, LieError> {
    let (cv, cw) = (curve(v)?, curve(w)?);
    let dir = derivative_at_zero(|tau| f(&cv(tau), &cw(tau)), FD_STEP)?;
    Ok(TangentVector::new(f(&v.base, &w.base), dir))
}

/// The matrix of `T_e f` in the algebra bases of domain and codomain, for a
/// homomorphism `f`. Checks `f(e) = e` and that brackets are preserved.
pub fn lie_functor(f: &SmoothMap) -> Result<Mat, LieError> {
    let (dom, cod) = (&f.dom, &f.cod);
    let at_e = f.eval(&dom.identity());
    let residual = (&at_e - cod.identity()).norm();
    if residual > 1e-8 {
        return Err(LieError::NotHomomorphism {
            reason: "f(e) != e",
            residual,
        });
    }
    let mut m = Mat::zeros(cod.dim(), dom.dim());
    for (i, b) in dom.basis().iter().enumerate() {
        let image = differential(f, &TangentVector::new(dom.identity(), b.clone()))?;
        let (c, residual) = cod.coordinates(&image.dir);
        if residual > 1e-6 {
            return Err(LieError::NotHomomorphism {
                reason: "differential leaves the codomain algebra",
                residual,
            });
        }
        m.set_column(i, &c);
    }
    let mut worst: f64 = 0.0;
    for i in 0..dom.dim() {
        for j in 0..dom.dim() {
            let (bij, _) = dom.coordinates(&commutator(&dom.basis()[i], &dom.basis()[j]));
            let lhs = &m * bij;
            let rhs = cod.bracket_coords(&Coords::from(m.column(i)), &Coords::from(m.column(j)));
            worst = worst.max((lhs - rhs).norm());
        }
    }
    if worst > 1e-5 {
        return Err(LieError::NotHomomorphism {
            reason: "brackets are not preserved",
            residual: worst,
        });
    }
    Ok(m)
}
