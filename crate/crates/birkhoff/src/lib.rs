//! Birkhoff spectra of locally constant potentials on the two-symbol full
//! shift.
//!
//! A depth-k potential assigns a value to each length-k binary word. For a
//! point of the shift, the Birkhoff average is the limit of sliding-window
//! means of those values; the level set of a given average value has a
//! Hausdorff dimension, and the resulting function of the average is the
//! Birkhoff spectrum. Everything here is finite and combinatorial:
//!
//! * [`shift`] — words, periodic points, and piecewise-constant potentials;
//! * [`debruijn`] — the weighted de Bruijn graph whose extreme cycle means
//!   are the spectrum's support endpoints, with maximizing subgraphs and
//!   their entropy;
//! * [`thermo`] — pressure, Gibbs transition measures, the Legendre
//!   transform giving the spectrum curve, endpoint dimensions and slopes;
//! * [`constructions`] — generators for potentials with prescribed
//!   spectral behaviour (spectra positive beyond the support, entropy
//!   collapse at endpoints, prescribed staircases, de-revealing bumps);
//! * [`dimension`] — Moran-type dimension equations and the binary entropy
//!   dimension formula;
//! * [`oracle`] — slow, independent recomputations used to cross-check the
//!   fast paths.

pub mod constructions;
pub mod debruijn;
pub mod dimension;
pub mod error;
pub mod oracle;
pub mod shift;
pub mod thermo;

pub use error::{Error, Result};
