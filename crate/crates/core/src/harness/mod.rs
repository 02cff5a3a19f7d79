//! Update streams, workload generators and the replay driver.

pub mod gen;
pub mod replay;
pub mod stream;

pub use gen::{
    gen_conclusion_adversary, gen_deletion_heavy, gen_random_stream, gen_star_teardown, gen_stream,
};
pub use replay::{compare, replay, replay_with, CompareReport, ReplayConfig, RunReport};
pub use stream::{Op, Update, UpdateStream};
