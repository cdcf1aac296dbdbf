pub mod branches;
pub mod closure;
pub mod coeff;
pub mod error;
pub mod hn;
pub mod lojex;
pub(crate) mod linalg;
pub mod poly;
pub mod series;
pub mod valuation;

pub use coeff::{nonlinear_factors, roots_in_field, sqrt_in_field, CoeffField, FieldElement, UniPoly};
pub use error::{Error, ErrorKind, Result};
pub use poly::{vars, PolyN, Vars};
pub use series::{ord_ideal_pullback, ord_pullback, pullback_lead, substitute, OrderValue, Param, Precision, Series1};
pub use branches::{expand_branches, implicitize, is_branch_of, Branch, BranchSet};
pub use valuation::{nu_eval, residue, LexValue, Valuation, ValuationKind};
pub use hn::{hn_start, hn_step, hn_trace, order_at_stage, refuting_param, separate, separate_principal, HNState, HNStep, Stage, Termination};
pub use closure::{find_integral_equation, ideal_membership, is_integral, monomial_closure, parametric_test, primary_bound, verify_integral_equation, Budget, Evidence, Ideal, IntegralEquation, IntegralityVerdict};
pub use lojex::{check_main_theorem, exponent_via_closure, farey_form, is_farey, lojasiewicz_exponent, lojasiewicz_exponent_with, BranchRow, Discrepancy, ExponentResult, ExponentValue, MainTheoremReport};
