pub(crate) use alloc::borrow::ToOwned;
pub(crate) use alloc::boxed::Box;
pub(crate) use alloc::string::{String, ToString};
pub(crate) use alloc::vec;
pub(crate) use alloc::vec::Vec;
pub(crate) use alloc::format;
pub(crate) use num_complex::Complex64;

#[cfg(not(feature = "std"))]
pub(crate) use num_traits::Float;

pub(crate) const I: Complex64 = Complex64::new(0.0, 1.0);
