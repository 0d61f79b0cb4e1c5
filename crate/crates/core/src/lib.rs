pub mod alphabet;
pub mod automata;
pub mod certificates;
pub mod cli;
pub mod embeddings;
pub mod error;
pub mod formats;
pub mod groups;
pub mod solvers;
pub mod tilesets;
pub mod wang;
