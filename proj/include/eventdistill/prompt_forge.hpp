#pragma once
// Few-shot prompt templates for next-event generation and for pairwise
// YES/NO judging. The exemplar blocks are frozen; caller input only lands in
// the vocabulary slot and the final question.

#include <string>
#include <string_view>
#include <vector>

#include "eventdistill/error.hpp"
#include "eventdistill/text.hpp"

namespace eventdistill {

enum class PromptKind { trigger, iterative, precision_eval };

inline std::string_view to_string(PromptKind k) {
  switch (k) {
    case PromptKind::trigger: return "trigger";
    case PromptKind::iterative: return "iterative";
    case PromptKind::precision_eval: return "precision_eval";
  }
  return "trigger";
}

struct PromptText {
  std::string text;
  PromptKind kind;
  std::string inputs_digest;
};

namespace prompts {

inline constexpr std::string_view kVocabularyLead = "Use the following vocabulary to respond to the questions: ";

inline constexpr std::string_view kTriggerExemplars =
    "Question: what usually happens after earthquake?\n"
    "Answer: tsunami\n"
    "Question: what usually happens after economic crises?\n"
    "Answer: unemployment\n"
    "Question: what usually happens after bomb attack?\n"
    "Answer: injury\n";

inline constexpr std::string_view kIterativeExemplars =
    "Question: what usually happens after earthquake?\n"
    "Answer: tsunami\n"
    "Question: what usually happens after earthquake and tsunami?\n"
    "Answer: nuclear disaster\n"
    "Question: what usually happens after economic crises and wage decline and unemployment?\n"
    "Answer: legislation\n"
    "Question: what usually happens after military conflict?\n"
    "Answer: war\n"
    "Question: what usually happens after military conflict and war?\n"
    "Answer: peace treaty\n";

// The header runs straight into the first question with no newline.
inline constexpr std::string_view kPrecisionExemplars =
    "Respond to the questions below with a (YES/NO) with a historical example:"
    "Question: Can economic crises cause a landslide?\n"
    "Answer: NO. There is no historical example of an economic crisis causing a landslide, which is natural "
    "disaster.\n"
    "Question: Can earthquake cause a tsunami?\n"
    "Answer: YES. In 2011, Japan experienced an earthquake in tohoku that caused a tsunami. \n"
    "Question: Can mass shooting cause a condensation cloud?\n"
    "Answer: NO. A condensation cloud is a weather phenomenon, not a mass shooting.\n"
    "Question: Can accident cause a stock market crash?\n"
    "Answer: NO. The stock market crash of 1929 was caused by a series of events, not an accident.\n"
    "Question: Can disease outbreak cause a inventory shrinkage?\n"
    "Answer: YES. The bubonic plague outbreak in Europe in 1348 caused a massive inventory shrinkage.\n"
    "Question: Can fraud cause a travel ban?\n"
    "Answer: YES. Travel bans are a form of punishment for immigration fraud.\n";

inline std::string digest_inputs(PromptKind kind, const std::vector<std::string>& vocab,
                                 const std::vector<std::string>& targets) {
  Fnv1a h;
  h.field(to_string(kind));
  for (const auto& v : vocab) h.field(v);
  h.field("|");
  for (const auto& t : targets) h.field(t);
  return h.hex();
}

inline std::string next_event_prompt(std::string_view exemplars, const std::vector<std::string>& vocab,
                                     const std::string& question_subject) {
  std::string out;
  out.append(kVocabularyLead);
  out.append(join(vocab, " "));
  out.push_back('\n');
  out.append(exemplars);
  out.append("Question: what usually happens after ");
  out.append(question_subject);
  out.append("?\nAnswer:");
  return out;
}

}  // namespace prompts

inline PromptText build_trigger_prompt(const std::vector<std::string>& vocab, const std::string& target) {
  if (vocab.empty()) throw UsageError("trigger prompt needs a non-empty vocabulary");
  if (target.empty()) throw UsageError("trigger prompt needs a non-empty target label");
  return {prompts::next_event_prompt(prompts::kTriggerExemplars, vocab, target), PromptKind::trigger,
          prompts::digest_inputs(PromptKind::trigger, vocab, {target})};
}

/// Conjunctive follow-up prompt: "what usually happens after A and B and C?"
inline PromptText build_iterative_prompt(const std::vector<std::string>& vocab,
                                         const std::vector<std::string>& history) {
  if (history.empty()) throw UsageError("iterative prompt needs a non-empty history");
  if (vocab.empty()) throw UsageError("iterative prompt needs a non-empty vocabulary");
  return {prompts::next_event_prompt(prompts::kIterativeExemplars, vocab, join(history, " and ")),
          PromptKind::iterative, prompts::digest_inputs(PromptKind::iterative, vocab, history)};
}

inline PromptText build_precision_prompt(const std::string& trigger, const std::string& consequence) {
  if (trigger.empty() || consequence.empty()) throw UsageError("precision prompt needs two non-empty labels");
  std::string out(prompts::kPrecisionExemplars);
  out.append("Question: Can ");
  out.append(trigger);
  out.append(" cause a ");
  out.append(consequence);
  out.append("?\nAnswer: ");
  return {std::move(out), PromptKind::precision_eval,
          prompts::digest_inputs(PromptKind::precision_eval, {}, {trigger, consequence})};
}

/// Text of the last "Question: ...?" in a prompt, without the "Question: "
/// prefix or the trailing '?'. Scripted backends key their responses on it.
inline std::string final_question(std::string_view prompt) {
  auto pos = prompt.rfind("Question: ");
  if (pos == std::string_view::npos) return {};
  auto body = prompt.substr(pos + 10);
  auto end = body.rfind("?\nAnswer:");
  if (end == std::string_view::npos) end = body.find('\n');
  if (end == std::string_view::npos) end = body.size();
  return std::string(body.substr(0, end));
}

}  // namespace eventdistill
