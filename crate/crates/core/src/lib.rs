pub mod energy;
pub mod error;
pub mod green;
pub mod heights;
pub mod poly;
pub mod preper;
pub mod projmap;
pub mod qfield;
pub mod roots;

pub use error::{Error, Result};

#[cfg(doctest)]
pub mod book {
    #[doc = include_str!("../../../README.md")]
    pub mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub mod introduction {}
    #[doc = include_str!("../../../book/src/places.md")]
    pub mod places {}
    #[doc = include_str!("../../../book/src/maps.md")]
    pub mod maps {}
    #[doc = include_str!("../../../book/src/green.md")]
    pub mod green {}
    #[doc = include_str!("../../../book/src/heights.md")]
    pub mod heights {}
    #[doc = include_str!("../../../book/src/energy.md")]
    pub mod energy {}
    #[doc = include_str!("../../../book/src/preperiodic.md")]
    pub mod preperiodic {}
    #[doc = include_str!("../../../book/src/cli.md")]
    pub mod cli {}
}
