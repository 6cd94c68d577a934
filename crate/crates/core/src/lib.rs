//! A consequence-relation workbench: logical structures, finitary
//! Hilbert-type proof systems, relational companions, and brute-force
//! oracles that verify their algebraic laws on finite instances.

pub mod companions;
pub mod hilbert;
pub mod oracle;
pub mod props;
pub mod structures;
pub mod syntax;
pub mod universe;

pub use companions::{
    classify, nontriviality, rel_l, rel_pr, rel_r, AntitheoremOracle, ClassifyReport,
    CompanionError, CompanionLimits, CompanionStructure, Relation, RelationFlags,
};
pub use hilbert::{
    instances, Derivation, HilbertBackend, HilbertStructure, Justification, ReplayError,
    RuleInstance, RuleSchema,
};
pub use oracle::{
    brute_companion, dump, equal_tables, read_table, subset_of, write_table, OracleError, Side,
    TableComparison, TableDump,
};
pub use props::{
    list_properties, run_property, HypothesisMode, PropertyConfig, PropertyReport,
    PropertyResult, PropsError,
};
pub use structures::{
    check_tarski, Budget, BudgetReport, Certificate, ExtensionalStructure, LogicalStructure,
    Matrix, MatrixError, Refutation, RefutationScope, StructureError, TarskiReport, Trilean,
    Valuation, Verdict,
};
pub use syntax::{
    parse, parse_pattern, vars_set, Formula, FormulaSet, ParseError, Signature, SignatureError,
    Substitution, Token, VarSet,
};
pub use universe::{Universe, UniverseError};
