use serde::{Deserialize, Serialize};

/// Whether parameter admissibility is enforced or only reported.
///
/// Paper mode rejects parameters outside the admissible ranges of the
/// asymptotic statements; exploration mode accepts them, logs a warning and
/// records it in the produced report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Paper,
    #[default]
    Exploration,
}

impl Mode {
    pub fn is_paper(self) -> bool {
        self == Mode::Paper
    }

    /// Turn a failed admissibility check into an error (paper mode) or a
    /// logged warning pushed onto `warnings` (exploration mode).
    pub fn check(
        self,
        ok: bool,
        message: impl FnOnce() -> String,
        warnings: &mut Vec<String>,
    ) -> crate::Result<()> {
        if ok {
            return Ok(());
        }
        let msg = message();
        match self {
            Mode::Paper => Err(crate::Error::Validation(msg)),
            Mode::Exploration => {
                log::warn!("{msg}");
                warnings.push(msg);
                Ok(())
            }
        }
    }
}
