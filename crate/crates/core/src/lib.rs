//! Exact cohomology bookkeeping for rank-2 bundles on P³.
//!
//! * [`chern`]: Chern characters and Riemann–Roch.
//! * [`tables`]: closed-form cohomology of line bundles, quadrics, curves and points.
//! * [`engine`]: interval propagation over long exact sequences, driven by proof scripts.
//! * [`oracle`]: brute-force cohomology of explicit line and conic configurations.
//! * [`monad`]: Chern data, `h¹` profiles and spectra of the monad bundles.
//! * [`atlas`]: enumeration of the component series and the small-`c₂` tables.
//! * [`acceptance`]: the acceptance suite.

pub mod acceptance;
pub mod atlas;
pub mod chern;
pub mod engine;
pub mod monad;
pub mod oracle;
pub mod scripts;
mod ratstr;
pub mod tables;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/chern.md")]
    mod chern {}
    #[doc = include_str!("../../../book/src/tables.md")]
    mod tables {}
    #[doc = include_str!("../../../book/src/scripts.md")]
    mod scripts {}
    #[doc = include_str!("../../../book/src/oracle.md")]
    mod oracle {}
    #[doc = include_str!("../../../book/src/monad.md")]
    mod monad {}
    #[doc = include_str!("../../../book/src/atlas.md")]
    mod atlas {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
    #[doc = include_str!("../../../book/src/acceptance.md")]
    mod acceptance {}
}
