use serde::{Deserialize, Serialize};

use super::setting::{Context, FeedbackSetting};
use crate::error::{Error, Result};
use crate::model::{Label, Point, UnionPredictor};

/// One executed round. `x` and `delta` are always recorded; serialization
/// hides what the setting does not reveal.
#[derive(Clone, Debug, PartialEq)]
pub struct RoundRecord {
    pub t: usize,
    pub context: Context,
    pub predictor: UnionPredictor,
    pub x: Point,
    pub delta: Point,
    pub y_hat: Label,
    pub y: Label,
    pub mistake: bool,
}

/// Wire form of a round.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RoundLine {
    pub t: usize,
    pub setting: FeedbackSetting,
    pub predictor: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<Point>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<Point>,
    pub y: Label,
    pub y_hat: Label,
    pub mistake: bool,
}

impl RoundRecord {
    pub fn line(&self, setting: FeedbackSetting) -> RoundLine {
        RoundLine {
            t: self.t,
            setting,
            predictor: self.predictor.canonical(),
            x: setting.reveals_x().then(|| self.x.clone()),
            delta: setting.reveals_delta().then(|| self.delta.clone()),
            y: self.y,
            y_hat: self.y_hat,
            mistake: self.mistake,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Transcript {
    pub setting: FeedbackSetting,
    pub seed: u64,
    /// Rounds played.
    pub len: usize,
    pub mistakes: usize,
    /// Per-round records; empty unless the run kept them.
    pub rounds: Vec<RoundRecord>,
}

impl Transcript {
    pub fn new(setting: FeedbackSetting, seed: u64) -> Self {
        Transcript { setting, seed, len: 0, mistakes: 0, rounds: Vec::new() }
    }

    pub fn push(&mut self, record: RoundRecord, keep: bool) {
        self.len += 1;
        self.mistakes += usize::from(record.mistake);
        if keep {
            self.rounds.push(record);
        }
    }

    /// Newline-delimited JSON, one object per kept round.
    pub fn to_jsonl(&self) -> Result<String> {
        let mut out = String::new();
        for r in &self.rounds {
            out.push_str(
                &serde_json::to_string(&r.line(self.setting)).map_err(|e| Error::Serialization(e.to_string()))?,
            );
            out.push('\n');
        }
        Ok(out)
    }

    pub fn parse_jsonl(text: &str) -> Result<Vec<RoundLine>> {
        text.lines()
            .filter(|l| !l.trim().is_empty())
            .map(|l| serde_json::from_str(l).map_err(|e| Error::Serialization(e.to_string())))
            .collect()
    }

    pub fn predictors(&self) -> impl Iterator<Item = &UnionPredictor> {
        self.rounds.iter().map(|r| &r.predictor)
    }
}
