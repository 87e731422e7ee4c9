#include "paremia/prompting.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

namespace paremia {

namespace {

constexpr std::string_view kZ0Template =
    "Classify the sentiment of the given proverb as Negative, Positive, or Ambiguous.\n"
    "Proverb: {proverb}";

constexpr std::string_view kZbTemplate =
    "You are given {batch_number} proverbs.\n"
    "Classify each proverb strictly as one of: Positive, Negative, Ambiguous.\n"
    "Return the results ONLY in this exact format (no explanations, no extra text):\n"
    "Positive, Negative, Ambiguous\n"
    "{proverbs}";

constexpr std::string_view kZpTemplate =
    "Estimate the percentage of how you would classify the given proverb as Positive, Negative, "
    "or Ambiguous. Percentages must sum to 100. Return strictly in this format: "
    "Positive: XX% Negative: XX% Ambiguous: XX%\n"
    "Proverb: {proverb}";

constexpr std::string_view kFewShotTemplate =
    "Considering the example(s), classify the sentiment of the given proverb as Negative, "
    "Positive, or Ambiguous.\n"
    "{examples}\n"
    "Proverb: {proverb}";

std::string replace_all(std::string text, std::string_view key, std::string_view value) {
  size_t pos = 0;
  while ((pos = text.find(key, pos)) != std::string::npos) {
    text.replace(pos, key.size(), value);
    pos += value.size();
  }
  return text;
}

std::string render_examples(const ShotSet& shots, bool grouped) {
  std::vector<const ShotCandidate*> order;
  if (grouped) {
    for (Sentiment s : kSentimentOrder)
      for (const auto& c : shots.of(s)) order.push_back(&c);
  } else {
    // interleave classes: P,N,A,P,N,A,... skipping exhausted classes
    size_t round = 0;
    bool any = true;
    while (any) {
      any = false;
      for (Sentiment s : kSentimentOrder) {
        if (round < shots.of(s).size()) {
          order.push_back(&shots.of(s)[round]);
          any = true;
        }
      }
      ++round;
    }
  }
  std::string out;
  for (size_t i = 0; i < order.size(); ++i) {
    if (i > 0) out += "\n\n";
    out += "Proverb: " + order[i]->text + "\nSentiment: " + std::string(to_string(order[i]->label));
  }
  return out;
}

std::string trim(std::string_view s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::string ascii_lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::optional<Sentiment> label_word(std::string_view lower) {
  if (lower == "positive") return Sentiment::Positive;
  if (lower == "negative") return Sentiment::Negative;
  if (lower == "ambiguous") return Sentiment::Ambiguous;
  return std::nullopt;
}

}  // namespace

std::string_view to_string(ShotStrategy s) {
  switch (s) {
    case ShotStrategy::RP: return "rp";
    case ShotStrategy::LVS: return "lvs";
    default: return "dyn";
  }
}

std::optional<ShotStrategy> strategy_from_string(std::string_view s) {
  if (s == "rp" || s == "RP") return ShotStrategy::RP;
  if (s == "lvs" || s == "LVS") return ShotStrategy::LVS;
  if (s == "dyn" || s == "DYN") return ShotStrategy::DYN;
  return std::nullopt;
}

void PromptSpec::validate() const {
  if (kind == TechniqueKind::Zb) {
    if (batch_size != 10 && batch_size != 20 && batch_size != 30)
      throw ConfigError("batch prompting: batch_size must be 10, 20 or 30");
  } else if (batch_size != 0) {
    throw ConfigError("batch_size is only valid for batch prompting");
  }
  if (kind == TechniqueKind::FewShot) {
    if (k < 1 || k > 3) throw ConfigError("few-shot: k must be 1, 2 or 3");
  } else if (k != 0) {
    throw ConfigError("k is only valid for few-shot prompting");
  }
}

std::string PromptSpec::technique_tag() const {
  std::string tag;
  switch (kind) {
    case TechniqueKind::Z0: tag = "z0"; break;
    case TechniqueKind::Zb: tag = "zb" + std::to_string(batch_size); break;
    case TechniqueKind::Zp: tag = "zp"; break;
    case TechniqueKind::FewShot:
      tag = "fs" + std::to_string(k) + "-" + std::string(to_string(strategy));
      break;
  }
  if (language == PromptLanguage::English) tag += "-en";
  return tag;
}

const PromptTemplates& PromptTemplates::builtin() {
  static const PromptTemplates t{std::string(kZ0Template), std::string(kZbTemplate),
                                 std::string(kZpTemplate), std::string(kFewShotTemplate)};
  return t;
}

PromptTemplates PromptTemplates::from_directory(const std::string& dir) {
  PromptTemplates t = builtin();
  const auto load = [&](const char* name, std::string& slot) {
    const std::filesystem::path p = std::filesystem::path(dir) / name;
    std::ifstream in(p, std::ios::binary);
    if (!in) return;
    slot.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  };
  load("z0.txt", t.z0);
  load("zb.txt", t.zb);
  load("zp.txt", t.zp);
  load("fewshot.txt", t.fewshot);
  return t;
}

std::string build_prompt(const PromptSpec& spec, std::span<const std::string> proverbs,
                         const ShotSet* shots, const PromptTemplates& templates) {
  spec.validate();
  if ((shots != nullptr) != (spec.kind == TechniqueKind::FewShot))
    throw ConfigError(spec.kind == TechniqueKind::FewShot
                          ? "few-shot prompt needs a shot set"
                          : "shots passed to a non-few-shot technique");
  if (spec.kind == TechniqueKind::Zb) {
    if (proverbs.empty() || proverbs.size() > static_cast<size_t>(spec.batch_size))
      throw ConfigError("batch prompt: expected 1.." + std::to_string(spec.batch_size) +
                        " proverbs, got " + std::to_string(proverbs.size()));
  } else if (proverbs.size() != 1) {
    throw ConfigError("prompt: expected exactly 1 proverb, got " + std::to_string(proverbs.size()));
  }

  switch (spec.kind) {
    case TechniqueKind::Z0:
      return replace_all(templates.z0, "{proverb}", proverbs[0]);
    case TechniqueKind::Zp:
      return replace_all(templates.zp, "{proverb}", proverbs[0]);
    case TechniqueKind::Zb: {
      std::string numbered;
      for (size_t i = 0; i < proverbs.size(); ++i) {
        if (i > 0) numbered += "\n";
        numbered += std::to_string(i + 1) + ". " + proverbs[i];
      }
      std::string out = replace_all(templates.zb, "{batch_number}", std::to_string(proverbs.size()));
      return replace_all(std::move(out), "{proverbs}", numbered);
    }
    case TechniqueKind::FewShot: {
      std::string out =
          replace_all(templates.fewshot, "{examples}", render_examples(*shots, spec.grouped_shots));
      return replace_all(std::move(out), "{proverb}", proverbs[0]);
    }
  }
  throw ConfigError("unreachable technique kind");
}

Sentiment parse_label(std::string_view response, ParseMode mode) {
  const std::string trimmed = trim(response);
  if (mode == ParseMode::Strict) {
    const auto s = sentiment_from_string(trimmed);
    if (!s) throw ParseFailure(ParseFailure::Kind::NoLabel,
                               "no sentiment label in response: '" + trimmed + "'");
    return *s;
  }

  std::string folded = ascii_lower(trimmed);
  if (folded.ends_with('.')) folded.pop_back();
  if (const auto s = label_word(folded)) return *s;

  // fall back to scanning standalone words
  std::optional<Sentiment> found;
  size_t i = 0;
  while (i < folded.size()) {
    while (i < folded.size() && !std::isalpha(static_cast<unsigned char>(folded[i]))) ++i;
    size_t j = i;
    while (j < folded.size() && std::isalpha(static_cast<unsigned char>(folded[j]))) ++j;
    if (j > i) {
      if (const auto s = label_word(std::string_view(folded).substr(i, j - i))) {
        if (found && *found != *s)
          throw ParseFailure(ParseFailure::Kind::AmbiguousResponse,
                             "more than one distinct label word in response");
        found = *s;
      }
    }
    i = j;
  }
  if (!found)
    throw ParseFailure(ParseFailure::Kind::NoLabel, "no sentiment label in response");
  return *found;
}

std::vector<Sentiment> parse_batch_labels(std::string_view response, size_t expected_n) {
  std::vector<std::string> tokens;
  std::string current;
  for (char c : response) {
    if (c == ',' || c == '\n') {
      if (!trim(current).empty()) tokens.push_back(trim(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  if (!trim(current).empty()) tokens.push_back(trim(current));

  if (tokens.size() != expected_n)
    throw ParseFailure(ParseFailure::Kind::CountMismatch,
                       "CountMismatch(" + std::to_string(tokens.size()) + ", " +
                           std::to_string(expected_n) + ")");
  std::vector<Sentiment> out;
  out.reserve(tokens.size());
  for (size_t i = 0; i < tokens.size(); ++i) {
    try {
      out.push_back(parse_label(tokens[i], ParseMode::Tolerant));
    } catch (const ParseFailure&) {
      throw ParseFailure(ParseFailure::Kind::BadToken,
                         "unparseable label at index " + std::to_string(i) + ": '" + tokens[i] + "'");
    }
  }
  return out;
}

Distribution parse_percentages(std::string_view response) {
  static const std::regex pattern(
      R"((positive|negative|ambiguous)\s*:?\s*(-?\d+(?:\.\d+)?)\s*%?)",
      std::regex::icase);
  std::optional<double> pos, neg, amb;
  const std::string text(response);
  for (auto it = std::sregex_iterator(text.begin(), text.end(), pattern);
       it != std::sregex_iterator(); ++it) {
    const std::string cls = ascii_lower((*it)[1].str());
    const double value = std::stod((*it)[2].str());
    if (value < 0.0)
      throw ParseFailure(ParseFailure::Kind::NegativeValue,
                         "negative percentage for " + cls + ": " + (*it)[2].str());
    auto& slot = cls == "positive" ? pos : cls == "negative" ? neg : amb;
    if (!slot) slot = value;
  }
  for (const auto& [slot, name] :
       {std::pair{&pos, "Positive"}, std::pair{&neg, "Negative"}, std::pair{&amb, "Ambiguous"}}) {
    if (!slot->has_value())
      throw ParseFailure(ParseFailure::Kind::MissingClass,
                         std::string("missing percentage for class ") + name);
  }
  const double sum = *pos + *neg + *amb;
  if (std::abs(sum - 100.0) > 5.0)
    throw ParseFailure(ParseFailure::Kind::SumOutOfRange,
                       "SumOutOfRange(" + std::to_string(sum) + ")");
  return Distribution{*pos / sum, *neg / sum, *amb / sum};
}

}  // namespace paremia
