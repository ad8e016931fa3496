//! Exact and sampled simulation of delayed-choice quantum erasers.
//!
//! The building block is a Mach-Zehnder interferometer whose two arms carry
//! orthogonal polarizations and whose output beam splitter is nonsymmetric.
//! Parameterized by the mixing angle `theta` and the arm phase `phi`, such an
//! interferometer acts on an incoming polarization exactly like a
//! Stern-Gerlach apparatus pointing along the Bloch direction
//! `(sin θ cos φ, sin θ sin φ, cos θ)`.
//!
//! Two of them fed with an orthogonally polarized photon pair give the
//! entanglement eraser ([`epr`]); two spatially separated emitters with a
//! which-way record give the Scully-Drühl eraser ([`scully_druhl`]). The
//! [`mwi`] module replays the same experiment as a unitary evolution of a
//! universal wavefunction, and [`shots`] turns every exact distribution into
//! reproducible click records.
//!
//! All exact checks use the single tolerance [`TOL`].

pub mod epr;
pub mod error;
pub mod interferometer;
pub mod mwi;
pub mod qstate;
pub mod scully_druhl;
pub mod shots;

#[cfg(feature = "cli")]
pub mod cli;

pub use error::{Error, Result};

/// Absolute tolerance for every exact-arithmetic check in the crate.
pub const TOL: f64 = 1e-12;

/// Complex amplitude type used throughout.
pub type Amplitude = num_complex::Complex64;

/// Map `f` over `items`, in parallel when the `parallel` feature is on.
/// Output order always matches input order.
pub(crate) fn ordered_map<T, R, F>(items: Vec<T>, f: F) -> Vec<R>
where
    T: Send,
    R: Send,
    F: Fn(T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        items.into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.into_iter().map(f).collect()
    }
}
