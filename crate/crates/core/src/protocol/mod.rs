//! The repeated learner-agent interaction under the four information
//! settings, the learner contract, and transcripts.

mod learner;
mod run;
mod setting;
mod transcript;

pub use learner::{ensure_supported, Learner, LearnerView};
pub use run::{
    run_online, run_pac, run_round, stream, Adversary, AgentDistribution, FixedSequence, IidStream, PacOutcome,
    RunOptions, SourceRngs, Stream,
};
pub use setting::{Context, Feedback, FeedbackExtra, FeedbackSetting};
pub use transcript::{RoundLine, RoundRecord, Transcript};
