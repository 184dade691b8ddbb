//! The chapters of the book under `book/src`, compiled here so that every
//! code block in them runs as a doc-test.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/divided-powers.md")]
pub mod chapter1 {}
#[doc = include_str!("../../../book/src/formal-groups.md")]
pub mod chapter2 {}
#[doc = include_str!("../../../book/src/complex.md")]
pub mod chapter3 {}
#[doc = include_str!("../../../book/src/invariant-forms.md")]
pub mod chapter4 {}
#[doc = include_str!("../../../book/src/legendre.md")]
pub mod chapter5 {}
#[doc = include_str!("../../../book/src/poincare.md")]
pub mod chapter6 {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod chapter7 {}
