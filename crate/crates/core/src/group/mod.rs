//! Group backends behind one object-safe model trait.

pub mod amalgam;
pub mod dehn;
pub mod finite;
pub mod model;
pub mod presentation;
pub mod product;
pub mod spec;
pub mod todd_coxeter;
pub mod word;

pub use amalgam::{Amalgam, AmalgamError};
pub use dehn::{dehn_reduce, DehnError, DehnModel, DehnReducer};
pub use finite::{FiniteTable, TableError};
pub use model::{check_group_axioms, Element, FreeAbelian, FreeGroup, GroupModel, SharedModel, Subgroup};
pub use presentation::{Presentation, PresentationError};
pub use product::{DirectProduct, FreeProduct};
pub use spec::{finite_from_presentation, peripheral_subgroup, GroupFile, GroupSpec, SpecError, DEFAULT_PRESENTATION_COSETS};
pub use todd_coxeter::{model_from_table, todd_coxeter, CosetStatus, CosetTable, TcError};
pub use word::{free_reduce, Word, WordError};
