#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "normnet/error.hpp"
#include "normnet/ingest.hpp"
#include "normnet/semantics.hpp"
#include "support/generators.hpp"

using namespace normnet;
using namespace normnet::testing;

namespace {

const FilterConfig kDefaults = FilterConfig::defaults();

std::filesystem::path test_data() { return NORMNET_TEST_DATA_DIR; }

std::filesystem::path fresh_temp_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("extract_links keeps namespace links outside navboxes, in order") {
  const std::string html = R"(
    <p>See <a href="/wiki/WP:Consensus">consensus</a> and again
    <a href="/wiki/Wikipedia:Consensus">consensus</a>.</p>
    <div class="navbox"><a href="/wiki/WP:Civility">hidden</a></div>
    <p>Plain <a href="/wiki/Main_page">mainspace</a> is ignored.</p>)";
  CHECK(extract_links(html, kDefaults) == std::vector<std::string>{"Consensus", "Consensus"});
}

TEST_CASE("extract_links handles nesting, case and self-closing markers") {
  const std::string html = R"(
    <div CLASS="Vertical-NavBox for-layout">
      <div><a href="/wiki/WP:Hidden_one">x</a></div>
    </div>
    <div class="navbox"/> <a href="/wiki/WP:Kept_after_void">y</a>
    <nav class="sidebar"><a href="/wiki/WP:Hidden_two">z</a></nav>
    <a href="/wiki/WP:Kept_last">w</a>)";
  CHECK(extract_links(html, kDefaults) ==
        std::vector<std::string>{"Kept_after_void", "Kept_last"});
}

TEST_CASE("extract_links decodes hrefs and strips fragments and queries") {
  const std::string html = R"(
    <a href="https://en.wikipedia.org/wiki/Wikipedia:Assume_good_faith#History">a</a>
    <a href="/wiki/Wikipedia:Don%27t_panic">b</a>
    <a href="/wiki/WP:Consensus?action=history">c</a>
    <a href="WP:Direct_title">d</a>
    <a href="/wiki/wp:lowercase_prefix">e</a>
    <a href="https://example.org">no path</a>)";
  CHECK(extract_links(html, kDefaults) ==
        std::vector<std::string>{"Assume_good_faith", "Don't_panic", "Consensus",
                                 "Direct_title", "Lowercase_prefix"});
}

TEST_CASE("extract_links ignores links inside scripts and comments") {
  const std::string html = R"(
    <script>document.write('<a href="/wiki/WP:Scripted">x</a>');</script>
    <!-- <a href="/wiki/WP:Commented">y</a> -->
    <a href="/wiki/WP:Real">z</a>)";
  CHECK(extract_links(html, kDefaults) == std::vector<std::string>{"Real"});
}

TEST_CASE("extract_links is insensitive to attribute order") {
  const std::string a = R"(<a href="/wiki/WP:Page" title="t" class="x">l</a>)";
  const std::string b = R"(<a class="x" title="t" href="/wiki/WP:Page">l</a>)";
  CHECK(extract_links(a, kDefaults) == extract_links(b, kDefaults));
}

TEST_CASE("extract_links reports parse errors with byte offsets") {
  CHECK_THROWS_WITH_AS(extract_links("ok <!-- never closed", kDefaults),
                       doctest::Contains("byte 3"), ValidationError);
  CHECK_THROWS_WITH_AS(extract_links("<a href=\"/wiki/WP:X>y</a>", kDefaults),
                       doctest::Contains("unterminated attribute value"), ValidationError);
  CHECK_THROWS_WITH_AS(extract_links("text <a href", kDefaults),
                       doctest::Contains("unterminated tag"), ValidationError);
}

TEST_CASE("extract_text drops markup, navbox content and decodes entities") {
  const std::string html = R"(
    <p>Editors &amp; admins should assume good&nbsp;faith.</p>
    <div class="navbox">template text never counted</div>
    <script>ignored()</script>
    <b>bold</b>)";
  const TokenDistribution d = tokenize(extract_text(html, kDefaults));
  CHECK(d.counts.count("editors") == 1);
  CHECK(d.counts.count("admins") == 1);
  CHECK(d.counts.count("bold") == 1);
  CHECK(d.counts.count("template") == 0);
  CHECK(d.counts.count("ignored") == 0);
}

TEST_CASE("extract_categories reads Category links anywhere in the page") {
  const std::string html = R"(
    <div class="navbox"><a href="/wiki/Category:Hidden_boxes">h</a></div>
    <div id="catlinks"><a href="/wiki/Category:Wikipedia_essays">e</a></div>)";
  CHECK(extract_categories(html) ==
        std::vector<std::string>{"Hidden_boxes", "Wikipedia_essays"});
}

TEST_CASE("canonicalize_title normalizes separators and leading case") {
  CHECK(canonicalize_title("assume good faith") == "Assume_good_faith");
  CHECK(canonicalize_title("  Edit__war ") == "Edit_war");
  CHECK(canonicalize_title("consensus") == "Consensus");
  CHECK(canonicalize_title("") == "");
}

TEST_CASE("redirect resolution reaches fixed points and rejects cycles") {
  RedirectTable table;
  table.aliases = {{"A", "B"}, {"B", "C"}};
  CHECK(table.resolve("A") == "C");
  CHECK(table.resolve("C") == "C");
  CHECK(table.resolve("unknown") == "unknown");

  table.aliases = {{"A", "B"}, {"B", "A"}};
  CHECK_THROWS_WITH_AS(table.resolve("A"), doctest::Contains("A -> B -> A"),
                       ValidationError);
}

namespace {

RawPage raw_page(const std::string& title, Timestamp created) {
  RawPage p;
  p.meta.title = title;
  p.meta.created_at = created;
  return p;
}

}  // namespace

TEST_CASE("canonicalize drops self-edges, merges parallels, filters and assigns ids") {
  const Timestamp t1 = to_timestamp({2004, 1, 1, 0, 0, 0});
  const Timestamp t2 = to_timestamp({2004, 6, 1, 0, 0, 0});
  std::vector<RawPage> pages = {raw_page("Beta", t1), raw_page("Alpha", t2),
                                raw_page("List of guidelines", t1)};
  std::vector<RawLink> links = {
      {"Alpha", "Alpha", std::nullopt},             // self-edge
      {"Alpha", "Beta", Timestamp{t2 + 500}},       // parallel, later
      {"Alpha", "Beta", Timestamp{t2 + 100}},       // parallel, earliest wins
      {"Beta", "AGF_alias", std::nullopt},          // redirect onto Alpha
      {"Beta", "List of guidelines", std::nullopt}, // endpoint filtered away
      {"Beta", "Missing", std::nullopt},            // unknown target
  };
  RedirectTable redirects;
  redirects.aliases = {{"AGF_alias", "Alpha"}};

  const Corpus c = canonicalize(pages, links, redirects, kDefaults);
  REQUIRE(c.pages.size() == 2);
  CHECK(c.pages[0].title == "Alpha");  // ids follow canonical-title order
  CHECK(c.pages[0].id == 0);
  CHECK(c.pages[1].title == "Beta");
  REQUIRE(c.links.size() == 2);
  CHECK(c.links[0].src == 0);
  CHECK(c.links[0].dst == 1);
  CHECK(c.links[0].first_seen_at == t2 + 100);
  CHECK(c.links[1].src == 1);
  CHECK(c.links[1].dst == 0);
  CHECK(c.links[1].first_seen_at == t2);  // max of endpoint creations
}

TEST_CASE("canonicalize rejects pages that merge onto the same title") {
  const Timestamp t = to_timestamp({2004, 1, 1, 0, 0, 0});
  std::vector<RawPage> pages = {raw_page("AGF", t), raw_page("Assume good faith", t)};
  RedirectTable redirects;
  redirects.aliases = {{"AGF", "Assume_good_faith"}};
  CHECK_THROWS_WITH_AS(canonicalize(pages, {}, redirects, kDefaults),
                       doctest::Contains("Assume_good_faith"), ValidationError);
}

TEST_CASE("canonicalize filters by editor-assigned category") {
  const Timestamp t = to_timestamp({2004, 1, 1, 0, 0, 0});
  RawPage keep = raw_page("Keep_me", t);
  RawPage drop = raw_page("Drop_me", t);
  drop.categories = {"WikiProject_libertarianism"};
  const Corpus c = canonicalize({keep, drop}, {}, {}, kDefaults);
  REQUIRE(c.pages.size() == 1);
  CHECK(c.pages[0].title == "Keep_me");
}

TEST_CASE("corpus files round-trip byte-identically") {
  const Corpus corpus = fixture_corpus();
  const auto dir_a = fresh_temp_dir("normnet_corpus_a");
  const auto dir_b = fresh_temp_dir("normnet_corpus_b");
  write_corpus(corpus, dir_a);
  const Corpus back = read_corpus(dir_a);
  CHECK(back == corpus);
  write_corpus(back, dir_b);
  for (const char* name : {"pages.tsv", "links.tsv", "tokens.tsv", "population.tsv"}) {
    std::ifstream a(dir_a / name, std::ios::binary);
    std::ifstream b(dir_b / name, std::ios::binary);
    const std::string bytes_a((std::istreambuf_iterator<char>(a)), {});
    const std::string bytes_b((std::istreambuf_iterator<char>(b)), {});
    CHECK(bytes_a == bytes_b);
    CHECK(!bytes_a.empty());
  }
  std::filesystem::remove_all(dir_a);
  std::filesystem::remove_all(dir_b);
}

TEST_CASE("read_corpus diagnoses schema violations precisely") {
  const auto dir = fresh_temp_dir("normnet_bad_corpus");
  const auto write_file = [&](const char* name, const std::string& content) {
    std::ofstream out(dir / name, std::ios::binary);
    out << content;
  };
  write_file("links.tsv", "src_id\tdst_id\tfirst_seen_at\n");
  write_file("tokens.tsv", "page_id\tword\tcount\n");

  SUBCASE("missing required column") {
    write_file("pages.tsv", "id\ttitle\tcreated_at\tsize\tedits\ttalk_edits\teditors\tviews\t"
                            "norm_class\n");
    CHECK_THROWS_WITH_AS(read_corpus(dir), doctest::Contains("missing required column "
                                                             "'category'"),
                         ValidationError);
  }
  SUBCASE("duplicate page title") {
    write_file("pages.tsv",
               "id\ttitle\tcategory\tcreated_at\tsize\tedits\ttalk_edits\teditors\tviews\t"
               "norm_class\n"
               "0\tSame\tessay\t2004-01-01\t1\t1\t1\t1\t1\t\n"
               "1\tSame\tessay\t2004-01-01\t1\t1\t1\t1\t1\t\n");
    CHECK_THROWS_WITH_AS(read_corpus(dir), doctest::Contains("duplicate page title 'Same'"),
                         ValidationError);
  }
  SUBCASE("malformed timestamp names the line") {
    write_file("pages.tsv",
               "id\ttitle\tcategory\tcreated_at\tsize\tedits\ttalk_edits\teditors\tviews\t"
               "norm_class\n"
               "0\tPage\tessay\tnot-a-date\t1\t1\t1\t1\t1\t\n");
    CHECK_THROWS_WITH_AS(read_corpus(dir), doctest::Contains("pages.tsv line 2"),
                         ValidationError);
  }
  SUBCASE("unsorted links are rejected") {
    write_file("pages.tsv",
               "id\ttitle\tcategory\tcreated_at\tsize\tedits\ttalk_edits\teditors\tviews\t"
               "norm_class\n"
               "0\tA\tessay\t2004-01-01\t1\t1\t1\t1\t1\t\n"
               "1\tB\tessay\t2004-01-01\t1\t1\t1\t1\t1\t\n");
    write_file("links.tsv", "src_id\tdst_id\tfirst_seen_at\n"
                            "1\t0\t2004-02-01\n"
                            "0\t1\t2004-02-01\n");
    CHECK_THROWS_WITH_AS(read_corpus(dir), doctest::Contains("sorted"), ValidationError);
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("html directory ingestion applies the full post-processing pass") {
  const Corpus c = ingest_html_directory(test_data() / "html_site", kDefaults);

  // List_of_guidelines is filtered; four pages remain in title order.
  REQUIRE(c.pages.size() == 4);
  CHECK(c.pages[0].title == "Assume_good_faith");
  CHECK(c.pages[1].title == "Civility");
  CHECK(c.pages[2].title == "Consensus");
  CHECK(c.pages[3].title == "Propaganda");

  const std::vector<LinkEvent> expected = {
      {0, 1, 0}, {0, 2, 0}, {1, 0, 0}, {1, 2, 0}, {2, 0, 0}, {2, 1, 0}, {3, 0, 0}, {3, 2, 0}};
  REQUIRE(c.links.size() == expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) {
    CHECK(c.links[i].src == expected[i].src);
    CHECK(c.links[i].dst == expected[i].dst);
    // Links are dated to the instant both endpoints exist.
    const Timestamp src_created = c.pages[c.links[i].src].created_at;
    const Timestamp dst_created = c.pages[c.links[i].dst].created_at;
    CHECK(c.links[i].first_seen_at == std::max(src_created, dst_created));
  }

  // Navbox text is excluded from the token distributions.
  const Page& agf = c.pages[0];
  CHECK(agf.token_counts.count("consensus") == 1);
  CHECK(agf.token_counts.count("dont") == 1);  // "Don't" from the body text
  CHECK(agf.token_counts.count("tracking") == 0);  // script content

  // Metadata passes through.
  CHECK(agf.category == PageCategory::policy);
  CHECK(agf.norm_class == NormClass::user_user);
  CHECK(agf.page_views == 900);
}

TEST_CASE("population and rater label files") {
  const auto dir = fresh_temp_dir("normnet_aux_files");
  {
    std::ofstream out(dir / "population.tsv", std::ios::binary);
    out << "month\tactive_users\n2004-01\t120\n2004-02\t150\n";
  }
  const PopulationSeries series = read_population(dir / "population.tsv");
  REQUIRE(series.size() == 2);
  CHECK(series[1].active_users == 150);

  {
    std::ofstream out(dir / "population.tsv", std::ios::binary);
    out << "month\tactive_users\n2004-02\t150\n2004-01\t120\n";
  }
  CHECK_THROWS_WITH_AS(read_population(dir / "population.tsv"),
                       doctest::Contains("strictly increasing"), ValidationError);

  {
    std::ofstream out(dir / "labels.tsv", std::ios::binary);
    out << "item\trater_a\trater_b\nitem1\tx\tx\nitem2\tx\ty\n";
  }
  const RaterLabels labels = read_rater_labels(dir / "labels.tsv");
  REQUIRE(labels.items.size() == 2);
  CHECK(labels.rater_a[1] == "x");
  CHECK(labels.rater_b[1] == "y");
  std::filesystem::remove_all(dir);
}
