#include "normnet/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>

#include "normnet/error.hpp"
#include "normnet/semantics.hpp"

namespace normnet {

namespace {

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool contains_ci(std::string_view haystack, std::string_view needle) {
  if (needle.empty()) return false;
  const std::string h = ascii_lower(haystack);
  const std::string n = ascii_lower(needle);
  return h.find(n) != std::string::npos;
}

bool starts_with_ci(std::string_view s, std::string_view prefix) {
  if (s.size() < prefix.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(s[i])) !=
        std::tolower(static_cast<unsigned char>(prefix[i]))) {
      return false;
    }
  }
  return true;
}

std::string percent_decode(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '%' && i + 2 < s.size() && std::isxdigit(static_cast<unsigned char>(s[i + 1])) &&
        std::isxdigit(static_cast<unsigned char>(s[i + 2]))) {
      int value = 0;
      std::from_chars(s.data() + i + 1, s.data() + i + 3, value, 16);
      out.push_back(static_cast<char>(value));
      i += 2;
    } else {
      out.push_back(s[i]);
    }
  }
  return out;
}

void append_utf8(std::string& out, unsigned long cp) {
  if (cp <= 0x7F) {
    out.push_back(static_cast<char>(cp));
  } else if (cp <= 0x7FF) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp <= 0xFFFF) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp <= 0x10FFFF) {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

std::string decode_entities(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size();) {
    if (s[i] != '&') {
      out.push_back(s[i++]);
      continue;
    }
    const std::size_t semi = s.find(';', i + 1);
    if (semi == std::string_view::npos || semi - i > 12) {
      out.push_back(s[i++]);
      continue;
    }
    const std::string_view body = s.substr(i + 1, semi - i - 1);
    if (body == "amp") {
      out.push_back('&');
    } else if (body == "lt") {
      out.push_back('<');
    } else if (body == "gt") {
      out.push_back('>');
    } else if (body == "quot") {
      out.push_back('"');
    } else if (body == "apos") {
      out.push_back('\'');
    } else if (body == "nbsp") {
      out.push_back(' ');
    } else if (!body.empty() && body[0] == '#') {
      unsigned long cp = 0;
      const bool hex = body.size() > 1 && (body[1] == 'x' || body[1] == 'X');
      const std::string digits(body.substr(hex ? 2 : 1));
      char* end = nullptr;
      cp = std::strtoul(digits.c_str(), &end, hex ? 16 : 10);
      if (end == nullptr || *end != '\0' || digits.empty()) {
        out.push_back(s[i++]);
        continue;
      }
      append_utf8(out, cp);
    } else {
      out.push_back(s[i++]);
      continue;
    }
    i = semi + 1;
  }
  return out;
}

const std::set<std::string>& void_elements() {
  static const std::set<std::string> kVoid = {"area", "base",  "br",   "col",  "embed",
                                              "hr",   "img",   "input", "link", "meta",
                                              "param", "source", "track", "wbr"};
  return kVoid;
}

struct Tag {
  std::string name;  // lowercase
  bool closing = false;
  bool self_closing = false;
  std::vector<std::pair<std::string, std::string>> attrs;  // names lowercase
  std::size_t end = 0;  // offset just past '>'
};

Tag parse_tag(std::string_view html, std::size_t lt) {
  Tag tag;
  std::size_t pos = lt + 1;
  const auto fail = [&](std::size_t at, const std::string& what) -> void {
    throw ValidationError("html parse error: " + what + " at byte " + std::to_string(at));
  };
  if (pos < html.size() && html[pos] == '/') {
    tag.closing = true;
    ++pos;
  }
  while (pos < html.size() &&
         (std::isalnum(static_cast<unsigned char>(html[pos])) || html[pos] == '-' ||
          html[pos] == ':')) {
    tag.name.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(html[pos]))));
    ++pos;
  }
  while (true) {
    while (pos < html.size() && std::isspace(static_cast<unsigned char>(html[pos]))) ++pos;
    if (pos >= html.size()) fail(lt, "unterminated tag");
    if (html[pos] == '>') {
      tag.end = pos + 1;
      return tag;
    }
    if (html[pos] == '/') {
      if (pos + 1 < html.size() && html[pos + 1] == '>') {
        tag.self_closing = true;
        tag.end = pos + 2;
        return tag;
      }
      ++pos;
      continue;
    }
    std::string attr_name;
    while (pos < html.size() && !std::isspace(static_cast<unsigned char>(html[pos])) &&
           html[pos] != '=' && html[pos] != '>' && html[pos] != '/') {
      attr_name.push_back(
          static_cast<char>(std::tolower(static_cast<unsigned char>(html[pos]))));
      ++pos;
    }
    if (attr_name.empty()) {
      ++pos;
      continue;
    }
    while (pos < html.size() && std::isspace(static_cast<unsigned char>(html[pos]))) ++pos;
    std::string value;
    if (pos < html.size() && html[pos] == '=') {
      ++pos;
      while (pos < html.size() && std::isspace(static_cast<unsigned char>(html[pos]))) ++pos;
      if (pos >= html.size()) fail(lt, "unterminated tag");
      if (html[pos] == '"' || html[pos] == '\'') {
        const char quote = html[pos];
        const std::size_t open = pos;
        const std::size_t close = html.find(quote, pos + 1);
        if (close == std::string_view::npos) fail(open, "unterminated attribute value");
        value.assign(html.substr(pos + 1, close - pos - 1));
        pos = close + 1;
      } else {
        while (pos < html.size() && !std::isspace(static_cast<unsigned char>(html[pos])) &&
               html[pos] != '>') {
          value.push_back(html[pos]);
          ++pos;
        }
      }
    }
    tag.attrs.emplace_back(std::move(attr_name), std::move(value));
  }
}

const std::string* find_attr(const Tag& tag, std::string_view name) {
  for (const auto& [attr, value] : tag.attrs) {
    if (attr == name) return &value;
  }
  return nullptr;
}

bool has_navbox_marker(const Tag& tag, const FilterConfig& cfg) {
  for (std::string_view attr : {"class", "id"}) {
    const std::string* value = find_attr(tag, attr);
    if (value == nullptr) continue;
    for (const std::string& marker : cfg.navbox_markers) {
      if (contains_ci(*value, marker)) return true;
    }
  }
  return false;
}

struct ScanResult {
  std::vector<std::string> scoped_hrefs;  // outside navbox containers
  std::vector<std::string> all_hrefs;
  std::string text;
};

ScanResult scan_html(std::string_view html, const FilterConfig& cfg, bool want_text) {
  ScanResult result;
  std::size_t pos = 0;
  std::string skip_tag;
  int skip_depth = 0;
  while (pos < html.size()) {
    const std::size_t lt = html.find('<', pos);
    if (want_text && skip_depth == 0) {
      const std::size_t len = (lt == std::string_view::npos ? html.size() : lt) - pos;
      if (len > 0) {
        result.text += decode_entities(html.substr(pos, len));
        result.text.push_back(' ');
      }
    }
    if (lt == std::string_view::npos) break;
    if (html.substr(lt).starts_with("<!--")) {
      const std::size_t end = html.find("-->", lt + 4);
      if (end == std::string_view::npos) {
        throw ValidationError("html parse error: unterminated comment at byte " +
                              std::to_string(lt));
      }
      pos = end + 3;
      continue;
    }
    if (lt + 1 < html.size() && (html[lt + 1] == '!' || html[lt + 1] == '?')) {
      const std::size_t gt = html.find('>', lt + 1);
      if (gt == std::string_view::npos) {
        throw ValidationError("html parse error: unterminated declaration at byte " +
                              std::to_string(lt));
      }
      pos = gt + 1;
      continue;
    }
    if (lt + 1 >= html.size() ||
        (!std::isalpha(static_cast<unsigned char>(html[lt + 1])) && html[lt + 1] != '/')) {
      // A literal '<' in text.
      if (want_text && skip_depth == 0) result.text.push_back('<');
      pos = lt + 1;
      continue;
    }

    const Tag tag = parse_tag(html, lt);
    pos = tag.end;

    if (!tag.closing && !tag.self_closing && (tag.name == "script" || tag.name == "style")) {
      const std::string close = "</" + tag.name;
      const std::string lowered = ascii_lower(html.substr(pos));
      const std::size_t at = lowered.find(close);
      if (at == std::string::npos) {
        pos = html.size();
      } else {
        const std::size_t gt = html.find('>', pos + at);
        pos = gt == std::string_view::npos ? html.size() : gt + 1;
      }
      continue;
    }

    if (tag.name == "a" && !tag.closing) {
      const std::string* href = find_attr(tag, "href");
      if (href != nullptr && !href->empty()) {
        result.all_hrefs.push_back(*href);
        if (skip_depth == 0) result.scoped_hrefs.push_back(*href);
      }
    }

    const bool countable = !tag.self_closing && !void_elements().count(tag.name);
    if (skip_depth > 0) {
      if (tag.name == skip_tag && countable) {
        skip_depth += tag.closing ? -1 : 1;
      }
    } else if (!tag.closing && countable && has_navbox_marker(tag, cfg)) {
      skip_tag = tag.name;
      skip_depth = 1;
    }
  }
  return result;
}

// Path-to-title extraction for one href; nullopt when the link cannot
// reference a page (off-site without a path, empty).
std::optional<std::string> href_to_title(std::string_view raw) {
  std::string href = decode_entities(raw);
  std::string_view view = href;
  for (std::string_view scheme : {"http://", "https://", "//"}) {
    if (starts_with_ci(view, scheme)) {
      view.remove_prefix(scheme.size());
      const std::size_t slash = view.find('/');
      if (slash == std::string_view::npos) return std::nullopt;
      view.remove_prefix(slash);
      break;
    }
  }
  if (view.starts_with("./")) view.remove_prefix(2);
  const std::size_t frag = view.find('#');
  if (frag != std::string_view::npos) view = view.substr(0, frag);
  if (view.starts_with("/")) {
    const std::size_t query = view.find('?');
    if (query != std::string_view::npos) view = view.substr(0, query);
    if (!starts_with_ci(view, "/wiki/")) return std::nullopt;
    view.remove_prefix(6);
  }
  if (view.empty()) return std::nullopt;
  return percent_decode(view);
}

std::int64_t parse_count(std::string_view field, const std::string& context) {
  std::int64_t value = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    throw ValidationError(context + ": not an integer: '" + std::string(field) + "'");
  }
  if (value < 0) throw ValidationError(context + ": negative value");
  return value;
}

// Line-oriented TSV with a mandatory header.
class TsvReader {
 public:
  TsvReader(const std::filesystem::path& path, const std::vector<std::string>& columns)
      : path_(path.string()), in_(path, std::ios::binary) {
    if (!in_) throw ValidationError("cannot open '" + path_ + "'");
    std::string header;
    if (!std::getline(in_, header)) throw ValidationError(path_ + ": empty file");
    ++line_no_;
    if (!header.empty() && header.back() == '\r') header.pop_back();
    const std::vector<std::string> found = split(header);
    for (const std::string& want : columns) {
      if (std::find(found.begin(), found.end(), want) == found.end()) {
        throw ValidationError(path_ + ": missing required column '" + want + "'");
      }
    }
    if (found.size() != columns.size()) {
      throw ValidationError(path_ + ": unexpected extra columns in header");
    }
    for (std::size_t i = 0; i < columns.size(); ++i) {
      if (found[i] != columns[i]) {
        throw ValidationError(path_ + ": column '" + found[i] + "' out of order (expected '" +
                              columns[i] + "')");
      }
    }
    n_columns_ = columns.size();
  }

  bool next(std::vector<std::string>& fields) {
    std::string line;
    if (!std::getline(in_, line)) return false;
    ++line_no_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    fields = split(line);
    if (fields.size() != n_columns_) {
      throw ValidationError(context() + ": expected " + std::to_string(n_columns_) +
                            " fields, found " + std::to_string(fields.size()));
    }
    return true;
  }

  std::string context() const { return path_ + " line " + std::to_string(line_no_); }

 private:
  static std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      const std::size_t tab = line.find('\t', start);
      if (tab == std::string::npos) {
        fields.push_back(line.substr(start));
        return fields;
      }
      fields.push_back(line.substr(start, tab - start));
      start = tab + 1;
    }
  }

  std::string path_;
  std::ifstream in_;
  std::size_t line_no_ = 0;
  std::size_t n_columns_ = 0;
};

const std::vector<std::string> kPageColumns = {"id",     "title", "category",   "created_at",
                                               "size",   "edits", "talk_edits", "editors",
                                               "views",  "norm_class"};
const std::vector<std::string> kLinkColumns = {"src_id", "dst_id", "first_seen_at"};
const std::vector<std::string> kTokenColumns = {"page_id", "word", "count"};
const std::vector<std::string> kPopulationColumns = {"month", "active_users"};
const std::vector<std::string> kHtmlMetaColumns = {
    "title", "html_file", "category", "created_at", "size",
    "edits", "talk_edits", "editors",  "views",      "norm_class"};
const std::vector<std::string> kRedirectColumns = {"alias", "canonical"};
const std::vector<std::string> kLabelColumns = {"item", "rater_a", "rater_b"};

}  // namespace

FilterConfig FilterConfig::defaults() {
  FilterConfig cfg;
  cfg.title_exclude_patterns = {"list_of",      "lists_of",  "wikiproject",
                                "village_pump", "noticeboard", "media_copyright_questions"};
  cfg.category_exclude_patterns = {"wikiproject", "noticeboard", "outreach", "lists"};
  cfg.navbox_markers = {"navbox", "vertical-navbox", "navigation-box", "nav-box", "sidebar"};
  cfg.namespace_prefixes = {"Wikipedia:", "WP:"};
  return cfg;
}

std::string RedirectTable::resolve(const std::string& title) const {
  std::string current = title;
  std::vector<std::string> chain = {current};
  while (true) {
    auto it = aliases.find(current);
    if (it == aliases.end()) return current;
    current = it->second;
    for (const std::string& seen : chain) {
      if (seen == current) {
        std::string cycle;
        for (const std::string& member : chain) cycle += member + " -> ";
        throw ValidationError("redirect cycle: " + cycle + current);
      }
    }
    chain.push_back(current);
    if (chain.size() > aliases.size() + 1) {
      throw ValidationError("redirect chain longer than table while resolving '" + title + "'");
    }
  }
}

std::string canonicalize_title(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  bool pending_separator = false;
  for (char c : raw) {
    if (c == '_' || std::isspace(static_cast<unsigned char>(c))) {
      pending_separator = !out.empty();
      continue;
    }
    if (pending_separator) {
      out.push_back('_');
      pending_separator = false;
    }
    out.push_back(c);
  }
  if (!out.empty()) {
    out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
  }
  return out;
}

std::vector<std::string> extract_links(std::string_view page_html, const FilterConfig& cfg) {
  const ScanResult scan = scan_html(page_html, cfg, /*want_text=*/false);
  std::vector<std::string> targets;
  for (const std::string& href : scan.scoped_hrefs) {
    const auto title = href_to_title(href);
    if (!title) continue;
    const std::string canonical = canonicalize_title(*title);
    for (const std::string& prefix : cfg.namespace_prefixes) {
      if (starts_with_ci(canonical, prefix)) {
        std::string stripped = canonicalize_title(canonical.substr(prefix.size()));
        if (!stripped.empty()) targets.push_back(std::move(stripped));
        break;
      }
    }
  }
  return targets;
}

std::string extract_text(std::string_view page_html, const FilterConfig& cfg) {
  return scan_html(page_html, cfg, /*want_text=*/true).text;
}

std::vector<std::string> extract_categories(std::string_view page_html) {
  const ScanResult scan = scan_html(page_html, FilterConfig::defaults(), /*want_text=*/false);
  std::vector<std::string> categories;
  for (const std::string& href : scan.all_hrefs) {
    const auto title = href_to_title(href);
    if (!title) continue;
    const std::string canonical = canonicalize_title(*title);
    if (starts_with_ci(canonical, "Category:")) {
      std::string name = canonicalize_title(canonical.substr(9));
      if (!name.empty()) categories.push_back(std::move(name));
    }
  }
  return categories;
}

namespace {

bool title_excluded(const std::string& canonical, const FilterConfig& cfg) {
  for (const std::string& pattern : cfg.title_exclude_patterns) {
    if (contains_ci(canonical, canonicalize_title(pattern))) return true;
  }
  return false;
}

bool categories_excluded(const std::vector<std::string>& categories, const FilterConfig& cfg) {
  for (const std::string& category : categories) {
    const std::string canonical = canonicalize_title(category);
    for (const std::string& pattern : cfg.category_exclude_patterns) {
      if (contains_ci(canonical, canonicalize_title(pattern))) return true;
    }
  }
  return false;
}

}  // namespace

Corpus canonicalize(std::vector<RawPage> pages, std::vector<RawLink> links,
                    const RedirectTable& redirects, const FilterConfig& cfg) {
  RedirectTable canonical_redirects;
  for (const auto& [alias, target] : redirects.aliases) {
    canonical_redirects.aliases.emplace(canonicalize_title(alias), canonicalize_title(target));
  }

  struct Entry {
    std::string canonical;
    RawPage raw;
  };
  std::vector<Entry> entries;
  entries.reserve(pages.size());
  std::unordered_map<std::string, std::size_t> by_title;
  for (RawPage& raw : pages) {
    const std::string canonical =
        canonical_redirects.resolve(canonicalize_title(raw.meta.title));
    if (canonical.empty()) throw ValidationError("page with an empty title");
    if (title_excluded(canonical, cfg) || categories_excluded(raw.categories, cfg)) continue;
    if (by_title.count(canonical)) {
      throw ValidationError("duplicate page title '" + canonical +
                            "' after redirect merging");
    }
    by_title.emplace(canonical, entries.size());
    entries.push_back({canonical, std::move(raw)});
  }

  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return a.canonical < b.canonical; });
  Corpus corpus;
  corpus.pages.reserve(entries.size());
  by_title.clear();
  for (std::size_t i = 0; i < entries.size(); ++i) {
    Page page = std::move(entries[i].raw.meta);
    page.id = static_cast<PageId>(i);
    page.title = entries[i].canonical;
    by_title.emplace(page.title, i);
    corpus.pages.push_back(std::move(page));
  }

  std::map<std::pair<PageId, PageId>, Timestamp> edges;
  for (const RawLink& link : links) {
    const std::string src_title =
        canonical_redirects.resolve(canonicalize_title(link.src_title));
    const std::string dst_title =
        canonical_redirects.resolve(canonicalize_title(link.dst_title));
    const auto src_it = by_title.find(src_title);
    const auto dst_it = by_title.find(dst_title);
    if (src_it == by_title.end() || dst_it == by_title.end()) continue;
    if (src_it->second == dst_it->second) continue;  // self-edge
    const Page& src = corpus.pages[src_it->second];
    const Page& dst = corpus.pages[dst_it->second];
    const Timestamp seen =
        link.first_seen_at.value_or(std::max(src.created_at, dst.created_at));
    const auto key = std::pair{src.id, dst.id};
    auto it = edges.find(key);
    if (it == edges.end()) {
      edges.emplace(key, seen);
    } else {
      it->second = std::min(it->second, seen);
    }
  }
  corpus.links.reserve(edges.size());
  for (const auto& [key, seen] : edges) {
    corpus.links.push_back({key.first, key.second, seen});
  }

  corpus.validate();
  return corpus;
}

Corpus read_corpus(const std::filesystem::path& dir) {
  Corpus corpus;
  {
    TsvReader reader(dir / "pages.tsv", kPageColumns);
    std::vector<std::string> f;
    while (reader.next(f)) {
      Page page;
      try {
        page.id = static_cast<PageId>(parse_count(f[0], "id"));
        page.title = f[1];
        page.category = parse_page_category(f[2]);
        page.created_at = parse_timestamp(f[3]);
        page.page_size_bytes = parse_count(f[4], "size");
        page.n_edits = parse_count(f[5], "edits");
        page.n_talk_edits = parse_count(f[6], "talk_edits");
        page.n_editors = parse_count(f[7], "editors");
        page.page_views = parse_count(f[8], "views");
        page.norm_class = parse_norm_class(f[9]);
      } catch (const ValidationError& e) {
        throw ValidationError(reader.context() + ": " + e.what());
      }
      if (!corpus.pages.empty() && corpus.pages.back().id >= page.id) {
        throw ValidationError(reader.context() + ": page ids must be strictly ascending");
      }
      corpus.pages.push_back(std::move(page));
    }
  }
  {
    TsvReader reader(dir / "links.tsv", kLinkColumns);
    std::vector<std::string> f;
    while (reader.next(f)) {
      LinkEvent link;
      try {
        link.src = static_cast<PageId>(parse_count(f[0], "src_id"));
        link.dst = static_cast<PageId>(parse_count(f[1], "dst_id"));
        link.first_seen_at = parse_timestamp(f[2]);
      } catch (const ValidationError& e) {
        throw ValidationError(reader.context() + ": " + e.what());
      }
      if (!corpus.links.empty()) {
        const LinkEvent& prev = corpus.links.back();
        if (std::pair{prev.src, prev.dst} >= std::pair{link.src, link.dst}) {
          throw ValidationError(reader.context() + ": links must be sorted by (src_id, dst_id)");
        }
      }
      corpus.links.push_back(link);
    }
  }
  {
    TsvReader reader(dir / "tokens.tsv", kTokenColumns);
    std::vector<std::string> f;
    Page* current = nullptr;
    PageId current_id = -1;
    std::string last_word;
    while (reader.next(f)) {
      PageId id;
      std::int64_t count;
      try {
        id = static_cast<PageId>(parse_count(f[0], "page_id"));
        count = parse_count(f[2], "count");
      } catch (const ValidationError& e) {
        throw ValidationError(reader.context() + ": " + e.what());
      }
      const std::string& word = f[1];
      if (word.empty() || word.find_first_of(" \t") != std::string::npos) {
        throw ValidationError(reader.context() + ": invalid word");
      }
      if (count == 0) throw ValidationError(reader.context() + ": zero count");
      if (current == nullptr || id != current_id) {
        if (current != nullptr && id < current_id) {
          throw ValidationError(reader.context() + ": rows must be sorted by page_id");
        }
        auto it = std::lower_bound(corpus.pages.begin(), corpus.pages.end(), id,
                                   [](const Page& p, PageId v) { return p.id < v; });
        if (it == corpus.pages.end() || it->id != id) {
          throw ValidationError(reader.context() + ": unknown page_id " + std::to_string(id));
        }
        current = &*it;
        current_id = id;
        last_word.clear();
      }
      if (!last_word.empty() && word <= last_word) {
        throw ValidationError(reader.context() + ": words must be sorted within a page");
      }
      last_word = word;
      current->token_counts.emplace(word, count);
    }
  }
  if (std::filesystem::exists(dir / "population.tsv")) {
    corpus.population = read_population(dir / "population.tsv");
  }
  corpus.validate();
  return corpus;
}

void write_corpus(const Corpus& corpus, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / "pages.tsv", std::ios::binary);
    out << "id\ttitle\tcategory\tcreated_at\tsize\tedits\ttalk_edits\teditors\tviews\t"
           "norm_class\n";
    for (const Page& p : corpus.pages) {
      out << p.id << '\t' << p.title << '\t' << to_string(p.category) << '\t'
          << format_timestamp(p.created_at) << '\t' << p.page_size_bytes << '\t' << p.n_edits
          << '\t' << p.n_talk_edits << '\t' << p.n_editors << '\t' << p.page_views << '\t'
          << (p.norm_class ? std::string(to_string(*p.norm_class)) : std::string()) << '\n';
    }
  }
  {
    std::ofstream out(dir / "links.tsv", std::ios::binary);
    out << "src_id\tdst_id\tfirst_seen_at\n";
    for (const LinkEvent& e : corpus.links) {
      out << e.src << '\t' << e.dst << '\t' << format_timestamp(e.first_seen_at) << '\n';
    }
  }
  {
    std::ofstream out(dir / "tokens.tsv", std::ios::binary);
    out << "page_id\tword\tcount\n";
    for (const Page& p : corpus.pages) {
      for (const auto& [word, count] : p.token_counts) {
        out << p.id << '\t' << word << '\t' << count << '\n';
      }
    }
  }
  if (!corpus.population.empty()) {
    std::ofstream out(dir / "population.tsv", std::ios::binary);
    out << "month\tactive_users\n";
    for (const MonthlyActiveUsers& m : corpus.population) {
      out << format_month(m.year, m.month) << '\t' << m.active_users << '\n';
    }
  }
}

Corpus ingest_html_directory(const std::filesystem::path& dir, const FilterConfig& cfg) {
  RedirectTable redirects;
  {
    TsvReader reader(dir / "redirects.tsv", kRedirectColumns);
    std::vector<std::string> f;
    while (reader.next(f)) {
      if (f[0].empty() || f[1].empty()) {
        throw ValidationError(reader.context() + ": empty alias or canonical title");
      }
      redirects.aliases.emplace(f[0], f[1]);
    }
  }

  std::vector<RawPage> pages;
  std::vector<RawLink> links;
  {
    TsvReader reader(dir / "pages.tsv", kHtmlMetaColumns);
    std::vector<std::string> f;
    while (reader.next(f)) {
      RawPage raw;
      try {
        raw.meta.title = f[0];
        raw.meta.category = parse_page_category(f[2]);
        raw.meta.created_at = parse_timestamp(f[3]);
        raw.meta.page_size_bytes = parse_count(f[4], "size");
        raw.meta.n_edits = parse_count(f[5], "edits");
        raw.meta.n_talk_edits = parse_count(f[6], "talk_edits");
        raw.meta.n_editors = parse_count(f[7], "editors");
        raw.meta.page_views = parse_count(f[8], "views");
        raw.meta.norm_class = parse_norm_class(f[9]);
      } catch (const ValidationError& e) {
        throw ValidationError(reader.context() + ": " + e.what());
      }
      const std::filesystem::path html_path = dir / f[1];
      std::ifstream html_in(html_path, std::ios::binary);
      if (!html_in) {
        throw ValidationError(reader.context() + ": cannot open html file '" +
                              html_path.string() + "'");
      }
      std::ostringstream buffer;
      buffer << html_in.rdbuf();
      const std::string html = buffer.str();

      raw.categories = extract_categories(html);
      raw.meta.token_counts = tokenize(extract_text(html, cfg)).counts;
      for (std::string& target : extract_links(html, cfg)) {
        links.push_back({raw.meta.title, std::move(target), std::nullopt});
      }
      pages.push_back(std::move(raw));
    }
  }

  Corpus corpus = canonicalize(std::move(pages), std::move(links), redirects, cfg);
  if (std::filesystem::exists(dir / "population.tsv")) {
    corpus.population = read_population(dir / "population.tsv");
    corpus.validate();
  }
  return corpus;
}

RaterLabels read_rater_labels(const std::filesystem::path& path) {
  TsvReader reader(path, kLabelColumns);
  RaterLabels labels;
  std::vector<std::string> f;
  while (reader.next(f)) {
    if (f[1].empty() || f[2].empty()) {
      throw ValidationError(reader.context() + ": empty label");
    }
    labels.items.push_back(f[0]);
    labels.rater_a.push_back(f[1]);
    labels.rater_b.push_back(f[2]);
  }
  return labels;
}

PopulationSeries read_population(const std::filesystem::path& path) {
  TsvReader reader(path, kPopulationColumns);
  PopulationSeries series;
  std::vector<std::string> f;
  while (reader.next(f)) {
    MonthlyActiveUsers m;
    try {
      parse_month(f[0], m.year, m.month);
      m.active_users = parse_count(f[1], "active_users");
    } catch (const ValidationError& e) {
      throw ValidationError(reader.context() + ": " + e.what());
    }
    if (!series.empty() &&
        std::pair{series.back().year, series.back().month} >= std::pair{m.year, m.month}) {
      throw ValidationError(reader.context() + ": months must be strictly increasing");
    }
    series.push_back(m);
  }
  return series;
}

}  // namespace normnet
