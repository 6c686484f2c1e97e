#include <doctest.h>

#include "epix/digest.hpp"
#include "epix/error.hpp"
#include "epix/io.hpp"
#include "epix/text.hpp"
#include "support.hpp"

using namespace epix;

TEST_SUITE("text") {
  TEST_CASE("fold_key lowercases and collapses punctuation") {
    CHECK(text::fold_key("Ebola  Virus-Disease!") == "ebola virus disease");
    CHECK(text::fold_key("  U.S.A. ") == "u s a");
    CHECK(text::fold_key("") == "");
    CHECK(text::fold_key("--") == "");
  }

  TEST_CASE("word_tokens splits on non-word bytes and keeps offsets") {
    std::string s = "COVID-19 in Côte d'Ivoire";
    auto toks = text::word_tokens(s);
    REQUIRE(toks.size() == 6);
    CHECK(toks[0].text == "COVID");
    CHECK(toks[1].text == "19");
    CHECK(toks[3].text == "Côte");
    for (const auto& t : toks) CHECK(s.substr(t.begin, t.end - t.begin) == t.text);
  }

  TEST_CASE("utf8 helpers never split a code point") {
    std::string s = "aé日b";
    CHECK(text::utf8_length(s) == 4);
    CHECK(text::utf8_prefix(s, 2) == "aé");
    CHECK(text::utf8_prefix(s, 3) == "aé日");
    CHECK(text::utf8_prefix(s, 99) == s);
    CHECK(text::utf8_floor(s, 2) == 1);
    CHECK(text::utf8_floor(s, 3) == 3);
  }

  TEST_CASE("iequals and trim") {
    CHECK(text::iequals("NiPaH", "nipah"));
    CHECK_FALSE(text::iequals("nipah", "nipa"));
    CHECK(text::trim("\t x y \n") == "x y");
  }
}

TEST_SUITE("io") {
  TEST_CASE("sha256 of known vectors") {
    CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  }

  TEST_CASE("atomic write creates parents and read_file round-trips") {
    testing::TempDir dir;
    auto p = dir / "a/b/c.txt";
    io::write_file_atomic(p, "hello\nworld");
    CHECK(io::read_file(p) == "hello\nworld");
    io::write_file_atomic(p, "x");
    CHECK(io::read_file(p) == "x");
  }

  TEST_CASE("read_file errors") {
    testing::TempDir dir;
    CHECK_THROWS_AS(io::read_file(dir / "missing"), IoError);
    CHECK_THROWS_AS(io::read_file(dir.path()), IoError);
  }

  TEST_CASE("for_each_line numbers lines and strips CR") {
    std::vector<std::pair<std::string, std::size_t>> lines;
    io::for_each_line("a\r\n\nb", [&](std::string_view l, std::size_t n) { lines.emplace_back(l, n); });
    REQUIRE(lines.size() == 3);
    CHECK(lines[0] == std::pair<std::string, std::size_t>{"a", 1});
    CHECK(lines[1].first.empty());
    CHECK(lines[2] == std::pair<std::string, std::size_t>{"b", 3});
  }
}
