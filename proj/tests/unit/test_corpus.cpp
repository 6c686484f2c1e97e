#include <doctest.h>

#include <cctype>
#include <regex>

#include "epix/corpus.hpp"
#include "epix/error.hpp"
#include "epix/io.hpp"
#include "epix/text.hpp"
#include "generators.hpp"
#include "support.hpp"

using namespace epix;

namespace {

// Reference stripper built from regular expressions, sharing no code with
// strip_markup: block-level tags become a space, other tags vanish. Output is compared after collapsing all whitespace.
std::string append_utf8(std::string out, unsigned cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
  return out;
}

std::string reference_strip(std::string html) {
  const auto icase = std::regex::icase;
  html = std::regex_replace(html, std::regex("<!--[\\s\\S]*?-->"), " ");
  html = std::regex_replace(html, std::regex("<script\\b[\\s\\S]*?</script\\s*>", icase), " ");
  html = std::regex_replace(html, std::regex("<style\\b[\\s\\S]*?</style\\s*>", icase), " ");
  html = std::regex_replace(
      html,
      std::regex("</?(p|div|br|li|ul|ol|tr|td|th|table|tbody|thead|tfoot|h[1-6]|section|article|header|footer|"
                 "blockquote|pre|hr|dl|dt|dd|nav|aside|main|figure|figcaption|form|title|caption)\\b[^>]*>",
                 icase),
      " ");
  html = std::regex_replace(html, std::regex("<[^>]*>"), "");

  std::string out;
  std::regex entity("&(#[0-9]+|#x[0-9a-fA-F]+|[a-zA-Z]+);");
  auto begin = std::sregex_iterator(html.begin(), html.end(), entity);
  std::size_t last = 0;
  for (auto it = begin; it != std::sregex_iterator(); ++it) {
    out += html.substr(last, it->position() - last);
    std::string name = (*it)[1];
    unsigned cp = 0;
    if (name[0] == '#') {
      cp = name[1] == 'x' ? std::stoul(name.substr(2), nullptr, 16) : std::stoul(name.substr(1));
    } else if (name == "amp") {
      cp = '&';
    } else if (name == "lt") {
      cp = '<';
    } else if (name == "gt") {
      cp = '>';
    } else if (name == "quot") {
      cp = '"';
    } else if (name == "nbsp") {
      cp = ' ';
    } else if (name == "ndash") {
      cp = 0x2013;
    } else if (name == "copy") {
      cp = 0xA9;
    }
    out = cp ? append_utf8(out, cp) : out + it->str();
    last = it->position() + it->length();
  }
  out += html.substr(last);
  // A decoded '<' before a letter is separated from it so no tag-like text
  // survives.
  out = std::regex_replace(out, std::regex("<([A-Za-z/!?])"), "< $1");
  return out;
}

std::string collapse(const std::string& s) {
  auto out = std::regex_replace(s, std::regex("\\s+"), " ");
  auto b = out.find_first_not_of(' ');
  if (b == std::string::npos) return "";
  return out.substr(b, out.find_last_not_of(' ') - b + 1);
}

std::string article_region(const std::string& html) {
  std::smatch m;
  if (std::regex_search(html, m, std::regex("<article[^>]*>([\\s\\S]*)</article>", std::regex::icase))) return m[1];
  return html;
}

bool has_tag_remnant(std::string_view body) {
  for (std::size_t i = 0; i + 1 < body.size(); ++i)
    if (body[i] == '<' && std::isalpha(static_cast<unsigned char>(body[i + 1]))) return true;
  return false;
}

Document random_document(testing::Gen& g, int i) {
  Document d;
  d.id = "doc-" + std::to_string(i) + "-" + g.word();
  d.source = static_cast<Source>(g.range(0, 2));
  if (g.coin()) d.url = "https://example.org/" + g.word();
  if (g.coin()) d.published = g.date();
  d.title = g.text(0, 30);
  d.body = g.text(0, 200);
  return d;
}

}  // namespace

TEST_SUITE("corpus") {
  TEST_CASE("strip_markup basics") {
    CHECK(strip_markup("<p>Outbreak <b>update</b></p>").text == "Outbreak update");
    CHECK(strip_markup("a &amp; b &#8211; c &#x41;").text == "a & b – c A");
    CHECK(strip_markup("double &amp;lt;p&amp;gt;").text == "double < p>");
    CHECK(strip_markup("<ul><li>one</li><li>two</li></ul>").text == "one\ntwo");
    CHECK(strip_markup("<p>a</p><p>b</p>").text == "a\n\nb");
    CHECK(strip_markup("x<script>if (a<b) {}</script>y").text == "xy");
  }

  TEST_CASE("unterminated tag keeps the text and flags it") {
    auto r = strip_markup("text <b unterminated");
    CHECK(r.malformed);
    CHECK_FALSE(has_tag_remnant(r.text));
    CHECK(r.text.find("unterminated") != std::string::npos);
  }

  TEST_CASE("ProMED post: subject becomes the title") {
    auto doc = parse_promed_post("Subject: Nipah virus - India\n\nFifteen cases reported in Kerala.");
    CHECK(doc.source == Source::Promed);
    CHECK(doc.title == "Nipah virus - India");
    CHECK(doc.body == "Fifteen cases reported in Kerala.");
  }

  TEST_CASE("ProMED post: markup and empty input") {
    CHECK(parse_promed_post("<p>Outbreak <b>update</b></p>").body == "Outbreak update");
    CHECK_THROWS_AS(parse_promed_post(""), EmptyInput);
    CHECK_THROWS_AS(parse_promed_post(" \n\t "), EmptyInput);
  }

  TEST_CASE("ProMED fixture headers") {
    auto doc = parse_promed_post(io::read_file(testing::fixture("promed/20180531.5831234.txt")));
    CHECK(doc.id == "promed-20180531.5831234");
    CHECK(doc.published == IsoDate::make(2018, 5, 31));
    CHECK(doc.title == "PRO/AH/EDR> Nipah virus - India (03): (KL) fatal cases");
    CHECK(doc.body.find("Archive Number") == std::string::npos);
    CHECK(doc.body.rfind("NIPAH VIRUS - INDIA", 0) == 0);

    auto bare = parse_promed_post(io::read_file(testing::fixture("promed/no-header.txt")));
    CHECK_FALSE(bare.title.empty());
    CHECK_FALSE(bare.published);
    CHECK(bare.id.rfind("promed-", 0) == 0);
  }

  TEST_CASE("title fallback is the first 120 characters on one line") {
    std::string body(200, 'x');
    body[50] = '\n';
    auto doc = parse_promed_post(body);
    CHECK(doc.title.size() == 120);
    CHECK(doc.title.find('\n') == std::string::npos);
  }

  TEST_CASE("DON article: header date and url") {
    auto doc = parse_don_article(
        "<html><head><title>Nipah - India</title></head><body><article><h1>Nipah - India</h1>"
        "<p class=date>31 May 2018</p><p>Fifteen cases.</p></article></body></html>",
        "https://www.who.int/emergencies/disease-outbreak-news/item/31-may-2018-nipah-india-en");
    CHECK(doc.source == Source::WhoDon);
    CHECK(doc.published == IsoDate::make(2018, 5, 31));
    CHECK(doc.id == "31-may-2018-nipah-india-en");
    CHECK(doc.url == "https://www.who.int/emergencies/disease-outbreak-news/item/31-may-2018-nipah-india-en");
    CHECK(doc.title == "Nipah - India");
  }

  TEST_CASE("DON article without a date header") {
    auto doc = parse_don_article(io::read_file(testing::fixture("don/don-no-date.html")), "");
    CHECK_FALSE(doc.published);
    CHECK_THROWS_AS(parse_don_article("   ", "x"), EmptyInput);
  }

  TEST_CASE("DON bodies agree with the reference stripper") {
    const char* files[] = {"don-nested-lists.html", "don-nested-table.html", "don-no-date.html",
                           "don-scripts-comments.html", "don-malformed.html"};
    for (auto f : files) {
      INFO(f);
      auto raw = io::read_file(testing::fixture(std::string("don/") + f));
      auto doc = parse_don_article(raw, "");
      CHECK(collapse(doc.body) == collapse(reference_strip(article_region(raw))));
      CHECK_FALSE(has_tag_remnant(doc.body));
    }
  }

  TEST_CASE("DON nested lists become separate lines") {
    auto doc = parse_don_article(io::read_file(testing::fixture("don/don-nested-lists.html")), "");
    CHECK(doc.body.find("onset 16 February 2023\ndied on 22 February") != std::string::npos);
    CHECK(doc.published == IsoDate::make(2023, 2, 28));
  }

  TEST_CASE("property: stripping is idempotent and leaves no tags") {
    testing::Gen g(4242);
    const std::vector<std::string> pieces = {"<p>", "</p>", "<b>", "</b>", "<br>", "<li>", "<ul>", "</ul>",
                                             "&amp;", "&lt;", "&gt;", "&lt;b&gt;", "&#60;i&#62;", "<", ">",
                                             "<!-- c -->", "<td>", "<a href='x'>", "</a>", "text", " ", "\n",
                                             "é", "<<", "a<b", "&bogus;", "&"};
    for (int i = 0; i < 1000; ++i) {
      std::string raw;
      int n = g.range(1, 25);
      for (int k = 0; k < n; ++k) raw += g.pick(pieces);
      if (text::trim(raw).empty()) continue;
      INFO(raw);
      Document once;
      try {
        once = parse_promed_post(raw, {std::string("x"), std::nullopt, std::nullopt});
      } catch (const EmptyInput&) {
        continue;
      }
      REQUIRE_FALSE(has_tag_remnant(once.body));
      REQUIRE(strip_markup(once.body).text == once.body);
    }
  }

  TEST_CASE("corpus round trip and order") {
    testing::TempDir dir;
    testing::Gen g(5);
    std::vector<Document> docs;
    for (int i = 0; i < 200; ++i) docs.push_back(random_document(g, i));
    save_corpus(docs, dir / "corpus.jsonl");
    auto back = load_corpus(dir / "corpus.jsonl");
    REQUIRE(back.size() == docs.size());
    for (std::size_t i = 0; i < docs.size(); ++i) CHECK(back[i] == docs[i]);
  }

  TEST_CASE("corpus loading errors") {
    testing::TempDir dir;
    std::vector<Document> three(3);
    for (int i = 0; i < 3; ++i) {
      three[i].id = "d" + std::to_string(i);
      three[i].body = "body";
    }
    save_corpus(three, dir / "ok.jsonl");
    auto content = io::read_file(dir / "ok.jsonl");
    auto first_nl = content.find('\n');
    testing::spit(dir / "bad.jsonl", content.substr(0, first_nl + 1) + "{not json\n" + content.substr(first_nl + 1));
    try {
      load_corpus(dir / "bad.jsonl");
      FAIL("expected SchemaError");
    } catch (const SchemaError& e) {
      CHECK(e.line() == 2);
      CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
    testing::spit(dir / "empty.jsonl", "");
    CHECK(load_corpus(dir / "empty.jsonl").empty());
    testing::spit(dir / "dup.jsonl", content + content.substr(0, first_nl + 1));
    CHECK_THROWS_AS(load_corpus(dir / "dup.jsonl"), SchemaError);
    testing::spit(dir / "noid.jsonl", "{\"id\":\"\",\"source\":\"OTHER\",\"title\":\"\",\"body\":\"x\"}\n");
    CHECK_THROWS_AS(load_corpus(dir / "noid.jsonl"), SchemaError);
    CHECK_THROWS_AS(load_corpus(dir / "missing.jsonl"), IoError);
  }

  TEST_CASE("gold loading") {
    testing::TempDir dir;
    testing::spit(dir / "gold.jsonl",
                  "{\"document_id\":\"d1\",\"disease\":\"Nipah virus\",\"country\":\"India\",\"date\":\"2018-05-31\","
                  "\"count\":15}\n"
                  "{\"document_id\":\"d2\",\"disease\":null,\"country\":null,\"date\":null,\"count\":null}\n");
    auto gold = load_gold(dir / "gold.jsonl");
    REQUIRE(gold.size() == 2);
    CHECK(gold[0] == GoldAnnotation{"d1", "Nipah virus", "India", IsoDate::make(2018, 5, 31), 15});
    CHECK(gold[1] == GoldAnnotation{"d2", std::nullopt, std::nullopt, std::nullopt, std::nullopt});

    testing::spit(dir / "noid.jsonl", "{\"disease\":\"Nipah virus\"}\n");
    CHECK_THROWS_AS(load_gold(dir / "noid.jsonl"), SchemaError);
    testing::spit(dir / "emptystr.jsonl", "{\"document_id\":\"d1\",\"country\":\"\"}\n");
    CHECK_THROWS_AS(load_gold(dir / "emptystr.jsonl"), SchemaError);
    testing::spit(dir / "negative.jsonl", "{\"document_id\":\"d1\",\"count\":-3}\n");
    CHECK_THROWS_AS(load_gold(dir / "negative.jsonl"), SchemaError);

    save_gold(gold, dir / "again.jsonl");
    CHECK(load_gold(dir / "again.jsonl") == gold);
  }
}
