#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "normnet/time.hpp"

namespace normnet {

using PageId = std::int32_t;

// Editor-assigned page type, with decreasing expectation of adherence.
enum class PageCategory { policy, guideline, essay, proposal, humor, other };

// Which interactions a norm governs.
enum class NormClass { user_content, user_user, user_admin, mixed };

std::string_view to_string(PageCategory c);
std::string_view to_string(NormClass c);
PageCategory parse_page_category(std::string_view s);
// Empty input means "not classified".
std::optional<NormClass> parse_norm_class(std::string_view s);

struct Page {
  PageId id = -1;
  std::string title;
  PageCategory category = PageCategory::other;
  Timestamp created_at = 0;
  std::int64_t page_size_bytes = 0;
  std::int64_t n_edits = 0;
  std::int64_t n_talk_edits = 0;
  std::int64_t n_editors = 0;
  std::int64_t page_views = 0;  // 31-day window
  std::map<std::string, std::int64_t> token_counts;
  std::optional<NormClass> norm_class;

  bool operator==(const Page&) const = default;
};

// One directed, unweighted edge: the first qualifying hyperlink src -> dst.
struct LinkEvent {
  PageId src = -1;
  PageId dst = -1;
  Timestamp first_seen_at = 0;

  bool operator==(const LinkEvent&) const = default;
};

struct MonthlyActiveUsers {
  int year = 0;
  int month = 0;
  std::int64_t active_users = 0;  // editors with >= 5 edits that month

  bool operator==(const MonthlyActiveUsers&) const = default;
};

// Strictly increasing months.
using PopulationSeries = std::vector<MonthlyActiveUsers>;

// Immutable after construction; validate() is called by every producer.
struct Corpus {
  std::vector<Page> pages;       // ascending id, ids unique
  std::vector<LinkEvent> links;  // ascending (src, dst), unique, src != dst
  PopulationSeries population;   // optional

  bool operator==(const Corpus&) const = default;

  const Page* find(PageId id) const;  // nullptr when absent
  std::unordered_map<std::string, PageId> title_index() const;

  // Throws ValidationError describing the first violated invariant.
  void validate() const;

  Timestamp earliest_event() const;  // min created_at; 0 for empty corpus
  Timestamp latest_event() const;    // max of created_at / first_seen_at
};

}  // namespace normnet
