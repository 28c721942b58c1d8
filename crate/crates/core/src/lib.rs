//! Exact analysis of group presentations whose relators carry declared
//! element orders: coset enumeration, order certificates, and integer
//! homology of the orbihedral cover.
//!
//! Presentations have the shape `< x1, ..., xd | u1^m1, ..., ur^mr >` where
//! each base word u_i is asserted to have order exactly m_i in the group.
//! Once that hypothesis is verified, exact rational arithmetic on
//! chi_orb = 1 - d + sum 1/m_i certifies order lower bounds for finite
//! groups and infiniteness (with its consequences) otherwise. For finite
//! groups the library also builds the orbihedral cover and verifies the
//! Euler-characteristic identity on exact Betti numbers.
//!
//! ```
//! use orbicert::certify::{apply_theorems, verify_orders, GroupSize};
//! use orbicert::complex::euler_identity_check;
//! use orbicert::coset::{enumerate, EnumerationLimits};
//! use orbicert::presentation::parse_presentation;
//!
//! let p = parse_presentation("< x, y | x^2, y^3, (x*y)^5 >").unwrap();
//! let e = enumerate(&p, &EnumerationLimits::default()).unwrap();
//! assert_eq!(e.table.size(), 60);
//!
//! let verdicts = verify_orders(&p, Some(&e.table), None).unwrap();
//! let cert = apply_theorems(&p, verdicts, GroupSize::Finite(e.table.size()));
//! assert!(cert.conclusions.iter().any(|c| c.kind() == "FINITE_BOUND_OK"));
//!
//! let euler = euler_identity_check(&p, &e.table, 200_000).unwrap();
//! assert!(euler.identity_holds && euler.betti == (1, 0, 1));
//! ```
//!
//! The linear algebra kernels in [`linalg`] are generic over a num-traits
//! integer scalar; the aliases below pin the arbitrary-precision instances
//! used everywhere else.

pub mod certify;
pub mod complex;
pub mod coset;
pub mod linalg;
pub mod perm;
pub mod presentation;

/// Arbitrary-precision integer used by the exact kernels.
pub type Int = num_bigint::BigInt;
/// Arbitrary-precision rational.
pub type Rational = num_rational::Ratio<Int>;
/// Sparse integer matrix over [`Int`].
pub type IntMatrix = linalg::SparseMatrix<Int>;
