//! Local L-, epsilon- and gamma-factors of Asai representations of `GL_2`
//! over quadratic extensions `E/F`, for `F = Q_p` (odd `p`) and `C / R`,
//! together with the independent oracles used to check them.
//!
//! Non-archimedean factors are rational functions of `q^{-s}`
//! ([`NonArchFactor`]); archimedean ones are Gamma products ([`ArchFactor`]).

pub mod angle;
pub mod arch;
pub mod asai;
pub mod characters;
pub mod config;
pub mod cyclo;
pub mod descriptor;
pub mod error;
pub mod factor;
pub mod field;
pub mod gamma_fn;
pub mod oracle;
pub mod padic;
pub mod quadrature;
pub mod snf;
pub mod tate;
pub mod units;
pub mod verify;

pub use angle::Angle;
pub use arch::{CChar, CaseDatum, RealChar, WhittakerIndex};
pub use asai::{AsaiInput, Tau};
pub use characters::{AddChar, MultChar, UnifValue};
pub use config::{default_grid, Config};
pub use descriptor::{AsaiBundle, CharDesc, FieldDesc};
pub use error::{AsaiError, Result};
pub use factor::{ArchFactor, Factor, NonArchFactor};
pub use field::{EElement, ExtKind, FieldTag, LocalField, QuadExtension};
pub use padic::Qp;
