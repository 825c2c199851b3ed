//! Elementary deformations: turn folds and their unfolding projection,
//! forest collapses and unfoldings, and folding paths directed by a map.

mod fold;
mod forest;
mod path;

pub use fold::{fold_amount_bound, fold_metric, fold_turn, unfold_metric, unfold_turn, FoldRecord};
pub use forest::{collapse_forest, svol, unfold_forest, CollapseRecord, UnfoldForest};
pub use path::{directed_folding_path, first_choice, FoldChoice, FoldStep, FoldingPath};
