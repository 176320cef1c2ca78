use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Label, Point};

/// The four information regimes `(C, F)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FeedbackSetting {
    /// `(x, Δ)`: x before the round, Δ after.
    #[serde(rename = "x-delta")]
    XBeforeDeltaAfter,
    /// `(⊥, (x, Δ))`: both after.
    #[serde(rename = "x-delta-after")]
    NothingXDeltaAfter,
    /// `(⊥, Δ)`.
    #[serde(rename = "delta-only")]
    NothingDeltaAfter,
    /// `(⊥, ⊥)`.
    #[serde(rename = "none")]
    NothingNothing,
}

impl FeedbackSetting {
    pub const ALL: [FeedbackSetting; 4] = [
        FeedbackSetting::XBeforeDeltaAfter,
        FeedbackSetting::NothingXDeltaAfter,
        FeedbackSetting::NothingDeltaAfter,
        FeedbackSetting::NothingNothing,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FeedbackSetting::XBeforeDeltaAfter => "x-delta",
            FeedbackSetting::NothingXDeltaAfter => "x-delta-after",
            FeedbackSetting::NothingDeltaAfter => "delta-only",
            FeedbackSetting::NothingNothing => "none",
        }
    }

    pub fn reveals_x_before(self) -> bool {
        self == FeedbackSetting::XBeforeDeltaAfter
    }

    /// Whether x is known to the learner once the round ends.
    pub fn reveals_x(self) -> bool {
        matches!(self, FeedbackSetting::XBeforeDeltaAfter | FeedbackSetting::NothingXDeltaAfter)
    }

    pub fn reveals_delta(self) -> bool {
        self != FeedbackSetting::NothingNothing
    }

    /// Information order: `x-delta >= x-delta-after >= delta-only >= none`.
    pub fn rank(self) -> u8 {
        match self {
            FeedbackSetting::XBeforeDeltaAfter => 3,
            FeedbackSetting::NothingXDeltaAfter => 2,
            FeedbackSetting::NothingDeltaAfter => 1,
            FeedbackSetting::NothingNothing => 0,
        }
    }

    pub fn context(self, x: &Point) -> Context {
        if self.reveals_x_before() {
            Context::RevealedX(x.clone())
        } else {
            Context::None
        }
    }
}

impl fmt::Display for FeedbackSetting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FeedbackSetting {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FeedbackSetting::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| Error::Unknown { kind: "setting", name: s.to_string() })
    }
}

/// What the learner sees before choosing.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Context {
    RevealedX(Point),
    None,
}

impl Context {
    pub fn x(&self) -> Option<&Point> {
        match self {
            Context::RevealedX(x) => Some(x),
            Context::None => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeedbackExtra {
    None,
    DeltaOnly(Point),
    XAndDelta(Point, Point),
}

/// End-of-round feedback. Fields absent in the active setting are not
/// stored, and asking for them is a contract violation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Feedback {
    pub y: Label,
    pub y_hat: Label,
    pub extra: FeedbackExtra,
}

impl Feedback {
    /// Feedback as delivered under `setting`.
    pub fn new(setting: FeedbackSetting, x: &Point, delta: &Point, y: Label, y_hat: Label) -> Self {
        let extra = if setting.reveals_x() {
            FeedbackExtra::XAndDelta(x.clone(), delta.clone())
        } else if setting.reveals_delta() {
            FeedbackExtra::DeltaOnly(delta.clone())
        } else {
            FeedbackExtra::None
        };
        Feedback { y, y_hat, extra }
    }

    pub fn mistake(&self) -> bool {
        self.y != self.y_hat
    }

    pub fn x(&self) -> Result<&Point> {
        match &self.extra {
            FeedbackExtra::XAndDelta(x, _) => Ok(x),
            _ => Err(Error::contract("x is not revealed in this setting")),
        }
    }

    pub fn delta(&self) -> Result<&Point> {
        match &self.extra {
            FeedbackExtra::XAndDelta(_, d) | FeedbackExtra::DeltaOnly(d) => Ok(d),
            FeedbackExtra::None => Err(Error::contract("delta is not revealed in this setting")),
        }
    }

    /// Drop the fields a weaker setting does not reveal.
    pub fn project(&self, weaker: FeedbackSetting) -> Result<Feedback> {
        let extra = match (&self.extra, weaker) {
            (_, FeedbackSetting::NothingNothing) => FeedbackExtra::None,
            (FeedbackExtra::XAndDelta(_, d) | FeedbackExtra::DeltaOnly(d), FeedbackSetting::NothingDeltaAfter) => {
                FeedbackExtra::DeltaOnly(d.clone())
            }
            (FeedbackExtra::XAndDelta(x, d), _) => FeedbackExtra::XAndDelta(x.clone(), d.clone()),
            _ => return Err(Error::contract(format!("cannot project to the stronger setting {weaker}"))),
        };
        Ok(Feedback { y: self.y, y_hat: self.y_hat, extra })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for s in FeedbackSetting::ALL {
            assert_eq!(s.name().parse::<FeedbackSetting>().unwrap(), s);
            assert_eq!(serde_json::to_string(&s).unwrap(), format!("\"{}\"", s.name()));
        }
        assert!("x".parse::<FeedbackSetting>().is_err());
    }

    #[test]
    fn absent_fields_are_contract_errors() {
        let p = Point::Index(0);
        let fb = Feedback::new(FeedbackSetting::NothingNothing, &p, &p, Label::Positive, Label::Negative);
        assert!(matches!(fb.x(), Err(Error::Contract(_))));
        assert!(matches!(fb.delta(), Err(Error::Contract(_))));
        assert!(fb.mistake());
        let fb =
            Feedback::new(FeedbackSetting::NothingDeltaAfter, &p, &Point::Index(1), Label::Positive, Label::Positive);
        assert_eq!(fb.delta().unwrap(), &Point::Index(1));
        assert!(fb.x().is_err());
    }

    #[test]
    fn projection_is_monotone() {
        let (x, d) = (Point::Index(0), Point::Index(2));
        for strong in FeedbackSetting::ALL {
            let full = Feedback::new(strong, &x, &d, Label::Negative, Label::Positive);
            for weak in FeedbackSetting::ALL {
                let proj = full.project(weak);
                if weak.rank() <= strong.rank() {
                    let direct = Feedback::new(weak, &x, &d, Label::Negative, Label::Positive);
                    // x-delta and x-delta-after deliver the same end-of-round fields
                    assert_eq!(proj.unwrap(), direct);
                } else if strong.reveals_x() == weak.reveals_x() && strong.reveals_delta() == weak.reveals_delta() {
                    assert!(proj.is_ok());
                } else {
                    assert!(proj.is_err());
                }
            }
        }
    }
}
