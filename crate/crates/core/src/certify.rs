//! Order verification and exact certificates.
//!
//! The certified hypothesis is that each relator base u_i has order exactly
//! m_i in the presented group. Three routes can support it:
//!
//! * `CosetTable` — the order read off a closed table is exact, so this route
//!   verifies or refutes;
//! * `Witness` — a finite permutation quotient: the image order divides the
//!   order in the group, which divides m_i, so an image of order m_i proves
//!   equality, while anything smaller is inconclusive;
//! * `Abelianization` — the order of the image in the abelianized group,
//!   computed from the relator lattice; again sufficient, never refuting.
//!
//! When the hypothesis stands, exact rational arithmetic on
//! chi = 1 - d + sum 1/m_i yields the certificate: a finite group must have
//! chi > 0 and order at least 1/chi; chi <= 0 forces the group infinite; and
//! chi < 0 additionally rules out Kazhdan's property (T) and infinite
//! amenable normal subgroups, with 1/|G| - chi a lower bound for the first
//! L2 Betti number.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::complex::{chi_orb, EulerReport};
use crate::coset::CosetTable;
use crate::linalg::QuotientOrder;
use crate::perm::{Perm, PermError};
use crate::presentation::Presentation;
use crate::{Int, IntMatrix, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Method {
    CosetTable,
    Witness,
    Abelianization,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::CosetTable => "COSET_TABLE",
            Method::Witness => "WITNESS",
            Method::Abelianization => "ABELIANIZATION",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrderStatus {
    Verified,
    /// The actual order, always a proper divisor of the declared exponent.
    Refuted { actual: usize },
    Inconclusive,
}

/// Per-relator outcome, with every attempted route kept for audit.
#[derive(Clone, Debug)]
pub struct OrderVerdict {
    pub relator: usize,
    pub claimed: u32,
    pub status: OrderStatus,
    /// The route that settled the verdict; none if inconclusive.
    pub method: Option<Method>,
    pub attempts: Vec<RouteAttempt>,
}

#[derive(Clone, Debug)]
pub struct RouteAttempt {
    pub method: Method,
    /// Order observed along this route (in the group for the coset route,
    /// in the quotient otherwise).
    pub observed: usize,
    pub conclusive: bool,
}

impl OrderVerdict {
    pub fn is_verified(&self) -> bool {
        self.status == OrderStatus::Verified
    }
}

/// A finite permutation quotient: one image per generator. Valid only if
/// every full relator word u_i^{m_i} acts trivially.
#[derive(Clone, Debug)]
pub struct WitnessQuotient {
    pub degree: usize,
    pub images: Vec<Perm>,
}

#[derive(Clone, Debug, Error)]
pub enum WitnessError {
    #[error("witness file: {0}")]
    Format(String),
    #[error("witness file: {0}")]
    BadPermutation(#[from] PermError),
    #[error("witness is missing generator `{0}`")]
    MissingGenerator(String),
    #[error("witness names unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("invalid witness: relator {relator} does not act trivially")]
    InvalidWitness { relator: usize },
    #[error("witness must cover {expected} generators, found {got}")]
    WrongGeneratorCount { expected: usize, got: usize },
}

impl WitnessQuotient {
    pub fn new(degree: usize, images: Vec<Perm>) -> Self {
        WitnessQuotient { degree, images }
    }

    /// Every relator word u^m must evaluate to the identity permutation.
    pub fn validate(&self, p: &Presentation) -> Result<(), WitnessError> {
        if self.images.len() != p.generator_count() {
            return Err(WitnessError::WrongGeneratorCount {
                expected: p.generator_count(),
                got: self.images.len(),
            });
        }
        for (i, rel) in p.relators().iter().enumerate() {
            let img = Perm::word_image(&rel.full_word(), &self.images);
            if !img.is_identity() {
                return Err(WitnessError::InvalidWitness { relator: i });
            }
        }
        Ok(())
    }

    /// Parse the witness text format:
    ///
    /// ```text
    /// degree 8
    /// x: (1 8)(2 7)(3 4)(5 6)
    /// y: (1 8 2)(3 5 7)
    /// ```
    ///
    /// Blank lines and `#` comments are skipped; the identity is `()`.
    pub fn parse(text: &str, p: &Presentation) -> Result<Self, WitnessError> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| WitnessError::Format("empty file".into()))?;
        let degree: usize = header
            .strip_prefix("degree")
            .map(str::trim)
            .and_then(|s| s.parse().ok())
            .filter(|&n| n >= 1)
            .ok_or_else(|| WitnessError::Format(format!("expected `degree N`, found `{header}`")))?;
        let mut by_name: BTreeMap<String, Perm> = BTreeMap::new();
        for line in lines {
            let Some((name, cycles)) = line.split_once(':') else {
                return Err(WitnessError::Format(format!("expected `name: cycles`, found `{line}`")));
            };
            let name = name.trim().to_string();
            if !p.generator_names().contains(&name) {
                return Err(WitnessError::UnknownGenerator(name));
            }
            if by_name.contains_key(&name) {
                return Err(WitnessError::Format(format!("generator `{name}` listed twice")));
            }
            by_name.insert(name, Perm::parse_cycles(cycles, degree)?);
        }
        let images = p
            .generator_names()
            .iter()
            .map(|n| {
                by_name
                    .remove(n)
                    .ok_or_else(|| WitnessError::MissingGenerator(n.clone()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(WitnessQuotient { degree, images })
    }
}

/// Known size of the presented group.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GroupSize {
    Finite(usize),
    Unknown,
}

/// Certified conclusions, in their canonical report order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Conclusion {
    /// chi > 0 and |G| >= ceil(1/chi) held exactly.
    FiniteBoundOk { bound: Int },
    Infinite,
    NotKazhdanT,
    NoInfiniteAmenableNormal,
    Betti1LowerBound(Rational),
    HypothesisUnverified,
    Violation(String),
}

impl Conclusion {
    pub fn kind(&self) -> &'static str {
        match self {
            Conclusion::FiniteBoundOk { .. } => "FINITE_BOUND_OK",
            Conclusion::Infinite => "INFINITE",
            Conclusion::NotKazhdanT => "NOT_KAZHDAN_T",
            Conclusion::NoInfiniteAmenableNormal => "NO_INFINITE_AMENABLE_NORMAL",
            Conclusion::Betti1LowerBound(_) => "BETTI1_LOWER_BOUND",
            Conclusion::HypothesisUnverified => "HYPOTHESIS_UNVERIFIED",
            Conclusion::Violation(_) => "VIOLATION",
        }
    }
}

/// The full certificate for one presentation.
#[derive(Clone, Debug)]
pub struct Certificate {
    pub presentation: String,
    pub generator_count: usize,
    pub relator_count: usize,
    pub sum_inv_m: Rational,
    pub chi_orb: Rational,
    pub order_verdicts: Vec<OrderVerdict>,
    pub group_size: GroupSize,
    pub conclusions: Vec<Conclusion>,
    pub euler: Option<EulerReport>,
    /// Independent cross-check, not part of the certified conclusions: the
    /// abelianization has rank d - rank(relator lattice); a positive value
    /// already forces the group infinite.
    pub abelian_rank: usize,
}

/// The lattice in Z^d spanned by m_j * abelianize(u_j).
pub fn relator_lattice(p: &Presentation) -> IntMatrix {
    let d = p.generator_count();
    let mut m = IntMatrix::new(p.relator_count(), d);
    for (i, rel) in p.relators().iter().enumerate() {
        for (j, &count) in rel.base.abelianize(d).iter().enumerate() {
            m.set(i, j, Int::from(count) * Int::from(rel.exponent));
        }
    }
    m
}

/// Sum of 1/m_i over the relators.
pub fn sum_inverse_exponents(p: &Presentation) -> Rational {
    let mut sum = Rational::zero();
    for rel in p.relators() {
        sum += Rational::new(Int::one(), Int::from(rel.exponent));
    }
    sum
}

/// Try the routes COSET_TABLE, WITNESS, ABELIANIZATION on each relator; the
/// first conclusive route decides, and all attempted routes are recorded.
/// A supplied witness is validated first.
pub fn verify_orders(
    p: &Presentation,
    table: Option<&CosetTable>,
    witness: Option<&WitnessQuotient>,
) -> Result<Vec<OrderVerdict>, WitnessError> {
    if let Some(w) = witness {
        w.validate(p)?;
    }
    let lattice = relator_lattice(p);
    let verdicts = p
        .relators()
        .iter()
        .enumerate()
        .map(|(i, rel)| {
            let m = rel.exponent as usize;
            let mut attempts = Vec::new();
            if let Some(t) = table {
                let k = t.element_order(&rel.base);
                attempts.push(RouteAttempt { method: Method::CosetTable, observed: k, conclusive: true });
            }
            if let Some(w) = witness {
                let k = Perm::word_image(&rel.base, &w.images).order() as usize;
                attempts.push(RouteAttempt { method: Method::Witness, observed: k, conclusive: k == m });
            }
            let v = rel.base.abelianize(p.generator_count());
            let v: Vec<Int> = v.into_iter().map(Int::from).collect();
            let k = match lattice.order_in_quotient(&v).expect("lattice has d columns") {
                QuotientOrder::Finite(k) => k,
                // unreachable: m * v is a lattice row, so the order divides m
                QuotientOrder::Infinite => Int::from(m),
            };
            let k = usize::try_from(u64::try_from(k.magnitude().clone()).unwrap_or(u64::MAX)).unwrap_or(usize::MAX);
            attempts.push(RouteAttempt { method: Method::Abelianization, observed: k, conclusive: k == m });

            let decided = attempts.iter().find(|a| a.conclusive);
            let (status, method) = match decided {
                Some(a) if a.observed == m => (OrderStatus::Verified, Some(a.method)),
                Some(a) => (OrderStatus::Refuted { actual: a.observed }, Some(a.method)),
                None => (OrderStatus::Inconclusive, None),
            };
            OrderVerdict { relator: i, claimed: rel.exponent, status, method, attempts }
        })
        .collect();
    Ok(verdicts)
}

/// Lower bound for the first L2 Betti number: max(0, 1/n - chi), where 1/n
/// is zero when the size is unknown or infinite.
pub fn l2_betti1_lower_bound(p: &Presentation, size: GroupSize) -> Rational {
    let inv_n = match size {
        GroupSize::Finite(n) => Rational::new(Int::one(), Int::from(n)),
        GroupSize::Unknown => Rational::zero(),
    };
    let bound = inv_n - chi_orb(p);
    if bound.is_negative() {
        Rational::zero()
    } else {
        bound
    }
}

/// Combine verified orders, chi and the known size into a certificate.
pub fn apply_theorems(p: &Presentation, verdicts: Vec<OrderVerdict>, size: GroupSize) -> Certificate {
    let chi = chi_orb(p);
    let all_verified = verdicts.iter().all(OrderVerdict::is_verified);
    let mut conclusions = Vec::new();
    if !all_verified {
        conclusions.push(Conclusion::HypothesisUnverified);
    } else {
        if chi <= Rational::zero() {
            conclusions.push(Conclusion::Infinite);
            if chi < Rational::zero() {
                conclusions.push(Conclusion::NotKazhdanT);
                conclusions.push(Conclusion::NoInfiniteAmenableNormal);
                conclusions.push(Conclusion::Betti1LowerBound(-chi.clone()));
            }
        }
        if let GroupSize::Finite(n) = size {
            if chi > Rational::zero()
                && Rational::from_integer(Int::from(n)) >= chi.recip()
            {
                let bound = chi.recip().numer().div_ceil(chi.recip().denom());
                conclusions.push(Conclusion::FiniteBoundOk { bound });
                conclusions.push(Conclusion::Betti1LowerBound(l2_betti1_lower_bound(p, size)));
            } else if chi > Rational::zero() {
                conclusions.push(Conclusion::Violation(format!(
                    "group of order {n} is below the bound 1/chi_orb = {}",
                    chi.recip()
                )));
            } else {
                conclusions.push(Conclusion::Violation(format!(
                    "finite group of order {n} but chi_orb = {chi} is not positive"
                )));
            }
        }
    }
    conclusions.sort();
    conclusions.dedup();
    let snf = relator_lattice(p).smith_normal_form();
    let lattice_rank = snf.iter().filter(|d| !d.is_zero()).count();
    Certificate {
        presentation: p.to_string(),
        generator_count: p.generator_count(),
        relator_count: p.relator_count(),
        sum_inv_m: sum_inverse_exponents(p),
        chi_orb: chi,
        order_verdicts: verdicts,
        group_size: size,
        conclusions,
        euler: None,
        abelian_rank: p.generator_count() - lattice_rank,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coset::{enumerate, EnumerationLimits};
    use crate::presentation::parse_presentation;

    fn closed_table(text: &str) -> (Presentation, CosetTable) {
        let p = parse_presentation(text).unwrap();
        let e = enumerate(&p, &EnumerationLimits::default()).unwrap();
        (p, e.table)
    }

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(Int::from(n), Int::from(d))
    }

    // degree-8 permutations acting on the projective line over F7, with
    // x of order 2, y of order 3 and x*y acting as z -> z + 1 of order 7
    const W237: &str = "degree 8\nx: (1 8)(2 7)(3 4)(5 6)\ny: (1 8 2)(3 5 7)\n";

    #[test]
    fn chi_orb_special_cases() {
        let p = parse_presentation("< x, y | x^2, y^3, (x*y)^5 >").unwrap();
        assert_eq!(chi_orb(&p), rat(1, 30));
        let free2 = parse_presentation("< x, y | >").unwrap();
        assert_eq!(chi_orb(&free2), rat(-1, 1));
        // all exponents 1: chi = 1 - d + r (deficiency arithmetic)
        let p = parse_presentation("< x, y | (x*y)^1, (x*y^-1)^1, (x^2*y)^1 >").unwrap();
        assert_eq!(chi_orb(&p), rat(2, 1));
    }

    #[test]
    fn coset_route_verifies_triangle_orders() {
        let (p, t) = closed_table("< x, y | x^2, y^3, (x*y)^5 >");
        let verdicts = verify_orders(&p, Some(&t), None).unwrap();
        assert!(verdicts.iter().all(OrderVerdict::is_verified));
        let observed: Vec<usize> = verdicts
            .iter()
            .map(|v| v.attempts.iter().find(|a| a.method == Method::CosetTable).unwrap().observed)
            .collect();
        assert_eq!(observed, vec![2, 3, 5]);
        assert!(verdicts.iter().all(|v| v.method == Some(Method::CosetTable)));
    }

    #[test]
    fn abelianization_route_alone() {
        let p = parse_presentation("< x, y | x^2, y^2, (x*y)^3 >").unwrap();
        let verdicts = verify_orders(&p, None, None).unwrap();
        assert_eq!(verdicts[0].status, OrderStatus::Verified);
        assert_eq!(verdicts[0].method, Some(Method::Abelianization));
        assert_eq!(verdicts[1].status, OrderStatus::Verified);
        // x*y abelianizes to (1,1) of order 1 in the quotient: inconclusive
        assert_eq!(verdicts[2].status, OrderStatus::Inconclusive);
        assert_eq!(verdicts[2].attempts.last().unwrap().observed, 1);

        // with the table, the same relator resolves to order 3
        let e = enumerate(&p, &EnumerationLimits::default()).unwrap();
        let verdicts = verify_orders(&p, Some(&e.table), None).unwrap();
        assert_eq!(verdicts[2].status, OrderStatus::Verified);
        assert_eq!(verdicts[2].attempts[0].observed, 3);
    }

    #[test]
    fn witness_route_verifies_hyperbolic_triangle() {
        let p = parse_presentation("< x, y | x^2, y^3, (x*y)^7 >").unwrap();
        let w = WitnessQuotient::parse(W237, &p).unwrap();
        assert_eq!(w.degree, 8);
        w.validate(&p).unwrap();
        let verdicts = verify_orders(&p, None, Some(&w)).unwrap();
        assert!(verdicts.iter().all(OrderVerdict::is_verified));
        assert!(verdicts.iter().all(|v| v.method == Some(Method::Witness)));
    }

    #[test]
    fn invalid_witness_rejected() {
        let p = parse_presentation("< x, y | x^2, y^3, (x*y)^7 >").unwrap();
        // y of order 2 cannot satisfy y^3 = 1 unless trivial
        let bad = "degree 2\nx: (1 2)\ny: (1 2)\n";
        let w = WitnessQuotient::parse(bad, &p).unwrap();
        let err = verify_orders(&p, None, Some(&w)).unwrap_err();
        assert!(matches!(err, WitnessError::InvalidWitness { relator: 1 }));
    }

    #[test]
    fn witness_parse_errors() {
        let p = parse_presentation("< x, y | >").unwrap();
        assert!(matches!(
            WitnessQuotient::parse("degree 3\nx: (1 2)\n", &p),
            Err(WitnessError::MissingGenerator(_))
        ));
        assert!(matches!(
            WitnessQuotient::parse("degree 3\nx: ()\ny: ()\nz: ()\n", &p),
            Err(WitnessError::UnknownGenerator(_))
        ));
        assert!(matches!(
            WitnessQuotient::parse("deg 3\n", &p),
            Err(WitnessError::Format(_))
        ));
    }

    #[test]
    fn exponent_one_relators_auto_verify() {
        // the surface-type relator has exponent 1; its order divides 1,
        // so even the abelianization route settles it
        let p = parse_presentation("< a, b, c, d | (a*b*a^-1*b^-1*c*d*c^-1*d^-1)^1 >").unwrap();
        let verdicts = verify_orders(&p, None, None).unwrap();
        assert!(verdicts[0].is_verified());
        assert_eq!(verdicts[0].method, Some(Method::Abelianization));
    }

    #[test]
    fn refutation_on_collapsed_group() {
        let (p, t) = closed_table("< x, y | x^2, y^2, (x*y)^4, (x*y)^5 >");
        assert_eq!(t.size(), 2);
        let verdicts = verify_orders(&p, Some(&t), None).unwrap();
        assert_eq!(verdicts[0].status, OrderStatus::Verified);
        assert_eq!(verdicts[1].status, OrderStatus::Verified);
        assert_eq!(verdicts[2].status, OrderStatus::Refuted { actual: 1 });
        assert_eq!(verdicts[3].status, OrderStatus::Refuted { actual: 1 });
        // refuted orders divide the declared exponents
        let cert = apply_theorems(&p, verdicts, GroupSize::Finite(2));
        assert_eq!(cert.conclusions, vec![Conclusion::HypothesisUnverified]);
    }

    #[test]
    fn hyperbolic_triangle_certificate() {
        let p = parse_presentation("< x, y | x^2, y^3, (x*y)^7 >").unwrap();
        let w = WitnessQuotient::parse(W237, &p).unwrap();
        let verdicts = verify_orders(&p, None, Some(&w)).unwrap();
        let cert = apply_theorems(&p, verdicts, GroupSize::Unknown);
        assert_eq!(cert.chi_orb, rat(-1, 42));
        assert_eq!(
            cert.conclusions,
            vec![
                Conclusion::Infinite,
                Conclusion::NotKazhdanT,
                Conclusion::NoInfiniteAmenableNormal,
                Conclusion::Betti1LowerBound(rat(1, 42)),
            ]
        );
    }

    #[test]
    fn icosahedral_certificate_is_finite_bound_ok() {
        let (p, t) = closed_table("< x, y | x^2, y^3, (x*y)^5 >");
        let verdicts = verify_orders(&p, Some(&t), None).unwrap();
        let cert = apply_theorems(&p, verdicts, GroupSize::Finite(t.size()));
        assert_eq!(cert.chi_orb, rat(1, 30));
        assert!(cert
            .conclusions
            .contains(&Conclusion::FiniteBoundOk { bound: Int::from(30) }));
        assert!(cert
            .conclusions
            .contains(&Conclusion::Betti1LowerBound(rat(0, 1))));
        assert!(!cert.conclusions.iter().any(|c| c.kind() == "VIOLATION"));
    }

    #[test]
    fn euclidean_triangle_gives_infinite_only() {
        let p = parse_presentation("< x, y | x^2, y^3, (x*y)^6 >").unwrap();
        // verified orders supplied programmatically: chi = 0 exactly
        let verdicts: Vec<OrderVerdict> = (0..3)
            .map(|i| OrderVerdict {
                relator: i,
                claimed: p.relators()[i].exponent,
                status: OrderStatus::Verified,
                method: Some(Method::CosetTable),
                attempts: vec![],
            })
            .collect();
        let cert = apply_theorems(&p, verdicts, GroupSize::Unknown);
        assert_eq!(cert.chi_orb, rat(0, 1));
        assert_eq!(cert.conclusions, vec![Conclusion::Infinite]);
    }

    #[test]
    fn surface_group_certificate() {
        let p = parse_presentation("< a, b, c, d | (a*b*a^-1*b^-1*c*d*c^-1*d^-1)^1 >").unwrap();
        let verdicts = verify_orders(&p, None, None).unwrap();
        let cert = apply_theorems(&p, verdicts, GroupSize::Unknown);
        assert_eq!(cert.chi_orb, rat(-2, 1));
        assert!(cert.conclusions.contains(&Conclusion::Infinite));
        assert!(cert.conclusions.contains(&Conclusion::Betti1LowerBound(rat(2, 1))));
    }

    #[test]
    fn betti_lower_bounds() {
        let free2 = parse_presentation("< x, y | >").unwrap();
        assert_eq!(l2_betti1_lower_bound(&free2, GroupSize::Unknown), rat(1, 1));
        let p237 = parse_presentation("< x, y | x^2, y^3, (x*y)^7 >").unwrap();
        assert_eq!(l2_betti1_lower_bound(&p237, GroupSize::Unknown), rat(1, 42));
        let p235 = parse_presentation("< x, y | x^2, y^3, (x*y)^5 >").unwrap();
        assert_eq!(l2_betti1_lower_bound(&p235, GroupSize::Finite(60)), rat(0, 1));
    }

    #[test]
    fn conclusions_monotone_under_added_table() {
        // chi < 0 conclusions derived without a table persist when a table
        // is added (only finite-size conclusions can join them)
        let p = parse_presentation("< x, y | x^2, y^3, (x*y)^7 >").unwrap();
        let w = WitnessQuotient::parse(W237, &p).unwrap();
        let without = apply_theorems(
            &p,
            verify_orders(&p, None, Some(&w)).unwrap(),
            GroupSize::Unknown,
        );
        for c in &without.conclusions {
            assert_ne!(c.kind(), "VIOLATION");
        }
        // the (2,3,5) group: unknown size gives no conclusions, adding the
        // table gives the finite bound
        let (p, t) = closed_table("< x, y | x^2, y^3, (x*y)^5 >");
        let unknown = apply_theorems(
            &p,
            verify_orders(&p, Some(&t), None).unwrap(),
            GroupSize::Unknown,
        );
        assert!(unknown.conclusions.is_empty());
        let finite = apply_theorems(
            &p,
            verify_orders(&p, Some(&t), None).unwrap(),
            GroupSize::Finite(t.size()),
        );
        for c in &unknown.conclusions {
            assert!(finite.conclusions.contains(c));
        }
    }

    #[test]
    fn witness_and_coset_routes_agree() {
        let (p, t) = closed_table("< x, y | x^2, y^3, (x*y)^5 >");
        // degree-5 witness: x = (1 2)(3 4), y = (1 3 5)
        let w = WitnessQuotient::parse("degree 5\nx: (1 2)(3 4)\ny: (1 3 5)\n", &p).unwrap();
        let verdicts = verify_orders(&p, Some(&t), Some(&w)).unwrap();
        for v in &verdicts {
            assert!(v.is_verified());
            let coset = v.attempts.iter().find(|a| a.method == Method::CosetTable).unwrap();
            let witness = v.attempts.iter().find(|a| a.method == Method::Witness).unwrap();
            assert_eq!(coset.observed, witness.observed, "relator {}", v.relator);
        }
    }

    #[test]
    fn fabricated_size_below_bound_is_a_violation() {
        // the theorem cannot fail on coherent inputs; a caller-supplied size
        // below 1/chi trips the VIOLATION tripwire instead of passing
        let (p, t) = closed_table("< x, y | x^2, y^3, (x*y)^5 >");
        let verdicts = verify_orders(&p, Some(&t), None).unwrap();
        let cert = apply_theorems(&p, verdicts, GroupSize::Finite(5));
        assert!(matches!(cert.conclusions.as_slice(), [Conclusion::Violation(_)]));
    }

    #[test]
    fn abelian_rank_cross_check() {
        let free2 = parse_presentation("< x, y | >").unwrap();
        let cert = apply_theorems(&free2, vec![], GroupSize::Unknown);
        assert_eq!(cert.abelian_rank, 2);
        let (p, t) = closed_table("< x, y | x^2, y^2, (x*y)^3 >");
        let cert = apply_theorems(&p, verify_orders(&p, Some(&t), None).unwrap(), GroupSize::Finite(6));
        assert_eq!(cert.abelian_rank, 0);
    }
}
