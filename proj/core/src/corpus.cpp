#include "normnet/corpus.hpp"

#include <algorithm>

#include "normnet/error.hpp"

namespace normnet {

std::string_view to_string(PageCategory c) {
  switch (c) {
    case PageCategory::policy: return "policy";
    case PageCategory::guideline: return "guideline";
    case PageCategory::essay: return "essay";
    case PageCategory::proposal: return "proposal";
    case PageCategory::humor: return "humor";
    case PageCategory::other: return "other";
  }
  return "other";
}

std::string_view to_string(NormClass c) {
  switch (c) {
    case NormClass::user_content: return "user_content";
    case NormClass::user_user: return "user_user";
    case NormClass::user_admin: return "user_admin";
    case NormClass::mixed: return "mixed";
  }
  return "mixed";
}

PageCategory parse_page_category(std::string_view s) {
  if (s == "policy") return PageCategory::policy;
  if (s == "guideline") return PageCategory::guideline;
  if (s == "essay") return PageCategory::essay;
  if (s == "proposal") return PageCategory::proposal;
  if (s == "humor") return PageCategory::humor;
  if (s == "other") return PageCategory::other;
  throw ValidationError("unknown page category '" + std::string(s) + "'");
}

std::optional<NormClass> parse_norm_class(std::string_view s) {
  if (s.empty()) return std::nullopt;
  if (s == "user_content") return NormClass::user_content;
  if (s == "user_user") return NormClass::user_user;
  if (s == "user_admin") return NormClass::user_admin;
  if (s == "mixed") return NormClass::mixed;
  throw ValidationError("unknown norm class '" + std::string(s) + "'");
}

const Page* Corpus::find(PageId id) const {
  auto it = std::lower_bound(pages.begin(), pages.end(), id,
                             [](const Page& p, PageId v) { return p.id < v; });
  if (it == pages.end() || it->id != id) return nullptr;
  return &*it;
}

std::unordered_map<std::string, PageId> Corpus::title_index() const {
  std::unordered_map<std::string, PageId> index;
  index.reserve(pages.size());
  for (const Page& p : pages) index.emplace(p.title, p.id);
  return index;
}

void Corpus::validate() const {
  std::unordered_map<std::string, PageId> titles;
  titles.reserve(pages.size());
  for (std::size_t i = 0; i < pages.size(); ++i) {
    const Page& p = pages[i];
    if (i > 0 && pages[i - 1].id >= p.id) {
      throw ValidationError("page ids not strictly ascending at id " + std::to_string(p.id));
    }
    if (p.title.empty()) {
      throw ValidationError("page " + std::to_string(p.id) + " has an empty title");
    }
    if (!titles.emplace(p.title, p.id).second) {
      throw ValidationError("duplicate page title '" + p.title + "'");
    }
    if (p.page_size_bytes < 0 || p.n_edits < 0 || p.n_talk_edits < 0 || p.n_editors < 0 ||
        p.page_views < 0) {
      throw ValidationError("page '" + p.title + "' has a negative counter");
    }
    for (const auto& [word, count] : p.token_counts) {
      if (word.empty() || count <= 0) {
        throw ValidationError("page '" + p.title + "' has an invalid token count entry");
      }
    }
  }
  for (std::size_t i = 0; i < links.size(); ++i) {
    const LinkEvent& e = links[i];
    if (e.src == e.dst) {
      throw ValidationError("self-edge on page id " + std::to_string(e.src));
    }
    if (i > 0) {
      const LinkEvent& prev = links[i - 1];
      if (std::pair{prev.src, prev.dst} >= std::pair{e.src, e.dst}) {
        throw ValidationError("links not strictly ascending at (" + std::to_string(e.src) + "," +
                              std::to_string(e.dst) + ")");
      }
    }
    const Page* src = find(e.src);
    const Page* dst = find(e.dst);
    if (src == nullptr || dst == nullptr) {
      throw ValidationError("link (" + std::to_string(e.src) + "," + std::to_string(e.dst) +
                            ") references an unknown page");
    }
    if (e.first_seen_at < src->created_at) {
      throw ValidationError("link from '" + src->title + "' predates the page's creation");
    }
  }
  for (std::size_t i = 0; i < population.size(); ++i) {
    const MonthlyActiveUsers& m = population[i];
    if (m.active_users < 0) {
      throw ValidationError("negative active-user count in population series");
    }
    if (m.month < 1 || m.month > 12) {
      throw ValidationError("population series month out of range");
    }
    if (i > 0) {
      const MonthlyActiveUsers& prev = population[i - 1];
      if (std::pair{prev.year, prev.month} >= std::pair{m.year, m.month}) {
        throw ValidationError("population series months not strictly increasing");
      }
    }
  }
}

Timestamp Corpus::earliest_event() const {
  Timestamp t = kNoCutoff;
  for (const Page& p : pages) t = std::min(t, p.created_at);
  return pages.empty() ? 0 : t;
}

Timestamp Corpus::latest_event() const {
  Timestamp t = 0;
  for (const Page& p : pages) t = std::max(t, p.created_at);
  for (const LinkEvent& e : links) t = std::max(t, e.first_seen_at);
  return t;
}

}  // namespace normnet
