//! Boij-Söderberg decomposition of Betti diagrams: pure diagrams, the poset
//! of degree sequences and its maximal chains, the dual functionals of a chain
//! basis, boundary facets of the fan, greedy decomposition and Hilbert series
//! bounds.

pub mod cli;
pub mod decompose;
pub mod diagram;
pub mod functionals;
pub mod hilbert;
pub mod io;
pub mod poly;
pub mod poset;

pub use decompose::{greedy_decompose, verify_decomposition, Decomposition};
pub use diagram::{
    codimension, hk_residuals, normalize, numerator_polynomial, pure_diagram, window_of,
    BettiDiagram, DegreeSequence, NormalizedPureDiagram, PureDiagram, Rational,
};
pub use functionals::{
    boundary_facets, classify_facet, coefficient_functional, evaluate, expand_in_chain,
    membership_by_inequalities, verify_fan_convexity, Anchor, FacetKind, Functional,
};
pub use hilbert::{
    check_monotonicity, expand_series, hilbert_series, multiplicity, multiplicity_bounds,
    shift_bounds, HilbertSeries,
};
pub use io::{emit_diagram, parse_diagram, Format};
pub use poset::{
    chain_from_tableau, chain_length, complete_chain, covers, leq, maximal_chains,
    tableau_from_chain, Chain, Tableau, Window,
};
