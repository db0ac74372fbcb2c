use serde::{Deserialize, Serialize};

use super::PromptError;
use crate::corpus::{PosTag, Sentence};

/// Layout of the iterative baseline prompt.
///
/// Few-shot prompts render every sentence as a `Context:` line followed by a
/// `Tagged:` line of `word_TAG` items. Without demonstrations the target is
/// introduced by a `Sentence:` line and the tagged items follow on their own
/// line with no label.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct IterativeTemplate {
    pub context_prefix: String,
    pub tagged_prefix: String,
    pub zero_shot_prefix: String,
    pub joiner: String,
    pub separator: String,
}

impl Default for IterativeTemplate {
    fn default() -> Self {
        IterativeTemplate {
            context_prefix: "Context: ".to_string(),
            tagged_prefix: "Tagged: ".to_string(),
            zero_shot_prefix: "Sentence: ".to_string(),
            joiner: "_".to_string(),
            separator: "\n".to_string(),
        }
    }
}

impl IterativeTemplate {
    fn tagged_items<'a>(&self, pairs: impl Iterator<Item = (&'a str, PosTag)>) -> Vec<String> {
        pairs
            .map(|(w, t)| format!("{w}{}{t}", self.joiner))
            .collect()
    }

    /// `Context: ...` / `Tagged: w_T ...` block for a fully tagged sentence.
    pub fn render_demo(&self, demo: &Sentence) -> Result<String, PromptError> {
        let tags = demo
            .gold_tags()
            .ok_or_else(|| PromptError::UntaggedDemo(demo.text()))?;
        let items = self.tagged_items(demo.surfaces().zip(tags));
        Ok(format!(
            "{}{}{}{}{}",
            self.context_prefix,
            demo.text(),
            self.separator,
            self.tagged_prefix,
            items.join(" ")
        ))
    }

    /// Prompt asking for the label of token `predicted.len()` of `sentence`.
    pub fn render(
        &self,
        sentence: &Sentence,
        predicted: &[PosTag],
        demos: &[Sentence],
        instruction: Option<&str>,
    ) -> Result<String, PromptError> {
        let t = predicted.len();
        if t >= sentence.len() {
            return Err(PromptError::PrefixTooLong {
                prefix: t,
                len: sentence.len(),
            });
        }
        let mut out = String::new();
        if let Some(instruction) = instruction {
            out.push_str(instruction);
            out.push_str(&self.separator);
        }
        for demo in demos {
            out.push_str(&self.render_demo(demo)?);
            out.push_str(&self.separator);
        }
        if demos.is_empty() {
            out.push_str(&self.zero_shot_prefix);
            out.push_str(&sentence.text());
            out.push_str(&self.separator);
        } else {
            out.push_str(&self.context_prefix);
            out.push_str(&sentence.text());
            out.push_str(&self.separator);
            out.push_str(&self.tagged_prefix);
        }
        let mut items = self.tagged_items(sentence.surfaces().zip(predicted.iter().copied()));
        items.push(format!("{}{}", sentence.tokens()[t].surface, self.joiner));
        out.push_str(&items.join(" "));
        Ok(out)
    }
}

/// Renders the iterative prompt with the default layout.
pub fn render_iterative(
    sentence: &Sentence,
    predicted: &[PosTag],
    demos: &[Sentence],
    instruction: Option<&str>,
) -> Result<String, PromptError> {
    IterativeTemplate::default().render(sentence, predicted, demos, instruction)
}
