#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "normnet/corpus.hpp"

namespace normnet {

// Spidering filters: which pages to drop and which links not to count.
struct FilterConfig {
  // Case-insensitive substring matches on canonicalized titles.
  std::vector<std::string> title_exclude_patterns;
  // Case-insensitive substring matches on editor-assigned category names.
  std::vector<std::string> category_exclude_patterns;
  // Case-insensitive substring matches on class/id attributes marking
  // template and navigation boxes; links inside them are not counted.
  std::vector<std::string> navbox_markers;
  // Links are kept only when the target carries one of these prefixes.
  std::vector<std::string> namespace_prefixes;

  static FilterConfig defaults();
};

// alias -> canonical title, resolved to a fixed point on lookup.
struct RedirectTable {
  std::map<std::string, std::string> aliases;

  // Follows aliases until a non-alias is reached. Throws ValidationError
  // naming the members when the chain cycles.
  std::string resolve(const std::string& title) const;
};

// "WP:Assume good faith#Section" -> "Assume_good_faith": percent-decoding,
// fragment/query stripping, whitespace to underscores, leading capital.
std::string canonicalize_title(std::string_view raw);

// In-namespace link targets of a stored page, document order, duplicates
// preserved, links inside navbox containers removed. Lenient about tag
// soup; structurally broken input (unterminated tag/comment/attribute)
// raises ValidationError with a byte offset.
std::vector<std::string> extract_links(std::string_view page_html, const FilterConfig& cfg);

// Visible text: markup, script/style bodies and navbox contents removed,
// entities decoded.
std::string extract_text(std::string_view page_html, const FilterConfig& cfg);

// Editor-assigned categories, read from Category: links.
std::vector<std::string> extract_categories(std::string_view page_html);

// Page record before id assignment and redirect merging.
struct RawPage {
  Page meta;  // id is ignored; title may be an alias
  std::vector<std::string> categories;
};

struct RawLink {
  std::string src_title;
  std::string dst_title;
  // When absent, the link is dated to the instant both endpoints exist.
  std::optional<Timestamp> first_seen_at;
};

// Applies the full post-processing pass: redirect resolution to a fixed
// point, title/category exclusion filters, self-edge dropping, parallel
// edges collapsed to the earliest first_seen_at, ids assigned in
// canonical-title sort order. Returns a validated corpus.
Corpus canonicalize(std::vector<RawPage> pages, std::vector<RawLink> links,
                    const RedirectTable& redirects, const FilterConfig& cfg);

// Canonical corpus directory: pages.tsv, links.tsv, tokens.tsv and an
// optional population.tsv. read(write(c)) == c, byte-identically.
Corpus read_corpus(const std::filesystem::path& dir);
void write_corpus(const Corpus& corpus, const std::filesystem::path& dir);

// Offline HTML ingestion: a directory with pages.tsv (title, html_file and
// page metadata), redirects.tsv (alias, canonical), the referenced HTML
// files and an optional population.tsv.
Corpus ingest_html_directory(const std::filesystem::path& dir, const FilterConfig& cfg);

struct RaterLabels {
  std::vector<std::string> items;
  std::vector<std::string> rater_a;
  std::vector<std::string> rater_b;
};

// labels.tsv with columns item, rater_a, rater_b.
RaterLabels read_rater_labels(const std::filesystem::path& path);

PopulationSeries read_population(const std::filesystem::path& path);

}  // namespace normnet
