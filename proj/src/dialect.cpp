#include "paremia/dialect.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <thread>

#include "paremia/csv.hpp"
#include "paremia/errors.hpp"
#include "paremia/kernels/kernels.hpp"
#include "paremia/text.hpp"

namespace paremia {

uint32_t levenshtein_codepoints(std::span<const uint32_t> a, std::span<const uint32_t> b) {
  return kernels::levenshtein_u32(a, b);
}

uint32_t levenshtein(std::string_view a, std::string_view b) {
  return levenshtein_codepoints(to_codepoints(a), to_codepoints(b));
}

size_t EditScript::edit_count() const {
  size_t n = 0;
  for (const auto& op : ops)
    if (op.type != EditOp::Type::Keep) ++n;
  return n;
}

std::string EditScript::apply_to_source() const { return target(); }

std::string EditScript::source() const {
  std::string out;
  for (const auto& op : ops)
    if (op.type != EditOp::Type::Insert) out += from_codepoint(op.from);
  return out;
}

std::string EditScript::target() const {
  std::string out;
  for (const auto& op : ops)
    if (op.type != EditOp::Type::Delete) out += from_codepoint(op.to);
  return out;
}

EditScript edit_alignment(std::string_view a_text, std::string_view b_text) {
  const std::vector<uint32_t> a = to_codepoints(a_text);
  const std::vector<uint32_t> b = to_codepoints(b_text);
  const size_t m = a.size();
  const size_t n = b.size();

  // Full table; alignment inputs are single proverbs, not corpora.
  std::vector<uint32_t> d((m + 1) * (n + 1));
  const auto idx = [n](size_t i, size_t j) { return i * (n + 1) + j; };
  for (size_t i = 0; i <= m; ++i) d[idx(i, 0)] = static_cast<uint32_t>(i);
  for (size_t j = 0; j <= n; ++j) d[idx(0, j)] = static_cast<uint32_t>(j);
  for (size_t i = 1; i <= m; ++i) {
    for (size_t j = 1; j <= n; ++j) {
      const uint32_t cost = a[i - 1] == b[j - 1] ? 0u : 1u;
      d[idx(i, j)] = std::min(d[idx(i - 1, j - 1)] + cost,
                              std::min(d[idx(i - 1, j)], d[idx(i, j - 1)]) + 1u);
    }
  }

  EditScript script;
  size_t i = m, j = n;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0) {
      const uint32_t cost = a[i - 1] == b[j - 1] ? 0u : 1u;
      if (d[idx(i, j)] == d[idx(i - 1, j - 1)] + cost) {
        script.ops.push_back({cost == 0 ? EditOp::Type::Keep : EditOp::Type::Substitute, a[i - 1],
                              b[j - 1]});
        --i;
        --j;
        continue;
      }
    }
    if (i > 0 && d[idx(i, j)] == d[idx(i - 1, j)] + 1) {
      script.ops.push_back({EditOp::Type::Delete, a[i - 1], 0});
      --i;
      continue;
    }
    script.ops.push_back({EditOp::Type::Insert, 0, b[j - 1]});
    --j;
  }
  std::reverse(script.ops.begin(), script.ops.end());
  return script;
}

std::vector<MatchResult> match_corpora(const Corpus& standards, const Corpus& localized,
                                       const MatchOptions& options) {
  if (standards.proverbs.empty()) throw DataError("match_corpora: standards corpus is empty");
  if (!options.absolute_threshold &&
      (options.max_norm_dist < 0.0 || options.max_norm_dist > 1.0))
    throw ConfigError("match_corpora: max_norm_dist must be in [0, 1]");

  const NormalizeOptions match_norm{.fold_case = true, .strip_diacritics = true};
  const auto key_of = [&](const Proverb& p) { return to_codepoints(normalize_text(p.text, match_norm)); };

  std::vector<std::vector<uint32_t>> std_keys(standards.proverbs.size());
  for (size_t s = 0; s < standards.proverbs.size(); ++s)
    std_keys[s] = key_of(standards.proverbs[s]);

  std::vector<std::optional<MatchResult>> slots(localized.proverbs.size());

  const auto match_one = [&](size_t li) {
    const Proverb& loc = localized.proverbs[li];
    const std::vector<uint32_t> key = key_of(loc);
    uint32_t best_dist = 0;
    double best_norm = 0.0;
    const Proverb* best = nullptr;
    for (size_t s = 0; s < standards.proverbs.size(); ++s) {
      const auto& skey = std_keys[s];
      const size_t longer = std::max(key.size(), skey.size());
      if (longer == 0) continue;
      // |len(a) - len(b)| lower-bounds the distance: skip hopeless pairs.
      const size_t len_gap = key.size() > skey.size() ? key.size() - skey.size()
                                                      : skey.size() - key.size();
      if (options.absolute_threshold) {
        if (static_cast<double>(len_gap) > options.max_norm_dist) continue;
      } else if (static_cast<double>(len_gap) / static_cast<double>(longer) >
                 options.max_norm_dist) {
        continue;
      }
      const uint32_t dist = kernels::levenshtein_u32(key, skey);
      const double norm = static_cast<double>(dist) / static_cast<double>(longer);
      const double measure = options.absolute_threshold ? static_cast<double>(dist) : norm;
      if (measure > options.max_norm_dist) continue;
      const bool better =
          best == nullptr || dist < best_dist ||
          (dist == best_dist && standards.proverbs[s].id < best->id);
      if (better) {
        best = &standards.proverbs[s];
        best_dist = dist;
        best_norm = norm;
      }
    }
    if (best != nullptr) {
      MatchResult r;
      r.standard_id = best->id;
      r.localized_id = loc.id;
      r.distance = best_dist;
      r.normalized_distance = best_norm;
      r.place = loc.place;
      slots[li] = std::move(r);
    }
  };

  size_t threads = options.threads > 0 ? static_cast<size_t>(options.threads)
                                       : std::max<size_t>(1, std::thread::hardware_concurrency());
  threads = std::min(threads, std::max<size_t>(1, localized.proverbs.size()));
  if (threads <= 1 || localized.proverbs.size() < 2) {
    for (size_t li = 0; li < localized.proverbs.size(); ++li) match_one(li);
  } else {
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    for (size_t t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        while (true) {
          const size_t li = next.fetch_add(1);
          if (li >= slots.size()) return;
          match_one(li);
        }
      });
    }
    for (auto& t : pool) t.join();
  }

  std::vector<MatchResult> out;
  for (auto& slot : slots)
    if (slot) out.push_back(std::move(*slot));
  std::sort(out.begin(), out.end(), [](const MatchResult& a, const MatchResult& b) {
    if (a.localized_id != b.localized_id) return a.localized_id < b.localized_id;
    return a.standard_id < b.standard_id;
  });
  return out;
}

void save_match_csv(std::span<const MatchResult> matches, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write file: " + path);
  out << "standard_id,localized_id,place,distance,normalized_distance\n";
  char norm[32];
  for (const auto& m : matches) {
    std::snprintf(norm, sizeof norm, "%.6f", m.normalized_distance);
    out << csv::join({m.standard_id, m.localized_id, m.place.value_or(""),
                      std::to_string(m.distance), norm})
        << "\n";
  }
}

std::string render_diff_ansi(const EditScript& script) {
  constexpr std::string_view kReset = "\x1b[0m";
  std::string out;
  for (const auto& op : script.ops) {
    switch (op.type) {
      case EditOp::Type::Keep:
        out += from_codepoint(op.to);
        break;
      case EditOp::Type::Substitute:
        out += "\x1b[31m";  // red text
        out += from_codepoint(op.to);
        out += kReset;
        break;
      case EditOp::Type::Insert:
        out += "\x1b[42m";  // green background
        out += from_codepoint(op.to);
        out += kReset;
        break;
      case EditOp::Type::Delete:
        out += "\x1b[41m";  // red background
        out += from_codepoint(op.from);
        out += kReset;
        break;
    }
  }
  return out;
}

namespace {

std::string html_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

}  // namespace

std::string render_diff_html(const EditScript& script) {
  std::string out;
  for (const auto& op : script.ops) {
    switch (op.type) {
      case EditOp::Type::Keep:
        out += html_escape(from_codepoint(op.to));
        break;
      case EditOp::Type::Substitute:
        out += "<span class=\"sub\">" + html_escape(from_codepoint(op.to)) + "</span>";
        break;
      case EditOp::Type::Insert:
        out += "<span class=\"ins\">" + html_escape(from_codepoint(op.to)) + "</span>";
        break;
      case EditOp::Type::Delete:
        out += "<span class=\"del\">" + html_escape(from_codepoint(op.from)) + "</span>";
        break;
    }
  }
  return out;
}

}  // namespace paremia
