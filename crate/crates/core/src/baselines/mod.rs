//! Small reference classifiers used as comparison points in benchmarks.

mod knn;
mod perceptron;
mod tree;

pub use knn::{knn_predict, KnnModel};
pub use perceptron::{perceptron_fit, PerceptronModel};
pub use tree::{dtree_fit, DecisionTree, Node};
