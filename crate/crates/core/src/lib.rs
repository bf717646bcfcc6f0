//! Buchholz-style ordinal terms, monotone double forests, and the map that
//! reduces the well-ordering of ordinal terms to coverings of double trees.
//!
//! ```
//! use double_kruskal::{collapse::translate, forest::covering_exists, order::leq, term::parse};
//!
//! let a = parse("D0(D0(0))").unwrap();
//! let b = parse("D0(D1(0))").unwrap();
//! let (ta, tb) = (translate(&a).unwrap(), translate(&b).unwrap());
//! assert!(covering_exists(&ta, &tb).is_some());
//! assert!(leq(&a, &b));
//! ```

pub mod collapse;
pub mod forest;
pub mod order;
pub mod ot;
pub mod term;
pub mod verify;
