//! Exact matrix algebra and finitely presented modules over ℤ, ℚ and 𝔽_p.

pub mod local;
pub mod mat;
pub mod module;
pub mod ring;
pub mod snf;
pub mod subquotient;

pub use local::{localize_at_prime, tensor_residue, LocalizedModule, PrimeIdeal};
pub use mat::Mat;
pub use module::{ModHom, Module};
pub use ring::{Elem, Ring};
pub use snf::{snf, Snf};
pub use subquotient::Subquotient;
