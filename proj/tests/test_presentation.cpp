#include <catch2/catch_amalgamated.hpp>

#include "orrforge/group.hpp"
#include "orrforge/morphisms.hpp"
#include "orrforge/presentation.hpp"

using namespace orrforge;

namespace {

Elt eval_word(const FiniteGroup& g, const std::vector<Elt>& images, const Word& w) {
  Elt x = 0;
  for (int letter : w.letters()) {
    Elt im = images[letter / 2];
    x = g.mul(x, letter % 2 ? g.inv(im) : im);
  }
  return x;
}

}  // namespace

TEST_CASE("parsing basics") {
  auto p = parse_presentation("gens: a\nrels: a^4");
  REQUIRE(p.generators.size() == 1);
  REQUIRE(p.relators.size() == 1);
  CHECK(p.relators[0].length() == 4);
}

TEST_CASE("equality chains split into one relator each") {
  auto p = parse_presentation("gens: a b\nrels: a^4=b^4=(ab)^2=(ab^-1)^2=1");
  CHECK(p.generators.size() == 2);
  CHECK(p.relators.size() == 4);

  auto q = parse_presentation("gens: a b\nrels: a^2=b^2");
  REQUIRE(q.relators.size() == 1);  // a^2 b^-2
  CHECK(q.relators[0].length() == 4);
}

TEST_CASE("parse errors carry positions and name the offender") {
  CHECK_THROWS_AS(parse_presentation("gens: a b\nrels: (a b c)^2"), parse_error);
  try {
    parse_presentation("gens: a b\nrels: (a b c)^2");
    FAIL("expected parse_error");
  } catch (const parse_error& e) {
    CHECK(std::string(e.what()).find("'c'") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_presentation("gens: a\nrels: (a^2"), parse_error);
  CHECK_THROWS_AS(parse_presentation("gens: a\nrels: a^0"), parse_error);
  CHECK_THROWS_AS(parse_presentation("rels: a^2"), parse_error);
  CHECK_THROWS_AS(parse_presentation("gens: a a\nrels: a^2"), parse_error);
}

TEST_CASE("negative exponents and nesting") {
  auto p = parse_presentation("gens: a b\nrels: (ab^-1)^2 a^-3");
  REQUIRE(p.relators.size() == 2);
  CHECK(p.relators[0].length() == 4);
  CHECK(p.relators[1].length() == 3);
}

TEST_CASE("longest-match tokenization for multi-letter names") {
  auto p = parse_presentation("gens: x xy\nrels: (x xy)^2 xy^2");
  REQUIRE(p.relators.size() == 2);
  CHECK(p.relators[0].length() == 4);
  CHECK(p.relators[1].length() == 2);  // the generator named "xy", squared
}

TEST_CASE("coset enumeration of small cyclic presentations") {
  auto g = coset_enumerate(parse_presentation("gens: a\nrels: a^4"));
  CHECK(g.order() == 4);
  CHECK(is_isomorphic(g, cyclic(4)).has_value());
}

TEST_CASE("the presented order-16 group") {
  auto c = compile_presentation(parse_presentation("gens: a b\nrels: a^4=b^4=(ab)^2=(ab^-1)^2=1"));
  CHECK(c.group.order() == 16);
}

TEST_CASE("the presented order-32 group") {
  auto text =
      "gens: a b c\n"
      "rels: a^4=b^4=c^4=(ab)^2=(ab^-1)^2=1 (ac)^2=(ac^-1)^2=(bc)^2=(bc^-1)^2=a^2b^2c^2=1";
  auto c = compile_presentation(parse_presentation(text));
  CHECK(c.group.order() == 32);
}

TEST_CASE("the second presented order-16 group") {
  // the conjugation relation a^c = a^-1 is spelled as the relator c^-1aca
  auto text =
      "gens: a b c\n"
      "rels: a^4=b^4=c^4=(ba)^2=(ba^-1)^2=(bc)^2=(bc^-1)^2=1 a^2=c^2 c^-1aca a^2=b^2";
  auto c = compile_presentation(parse_presentation(text));
  CHECK(c.group.order() == 16);
}

TEST_CASE("compiled groups satisfy their relators") {
  for (const char* text : {
           "gens: a\nrels: a^7",
           "gens: a b\nrels: a^4 b^2 (ab)^2",
           "gens: a b\nrels: a^4 b^2a^-2 b^-1aba",
           "gens: a b\nrels: a^4=b^4=(ab)^2=(ab^-1)^2=1",
       }) {
    auto pres = parse_presentation(text);
    auto c = compile_presentation(pres);
    for (const Word& w : pres.relators) CHECK(eval_word(c.group, c.generator_images, w) == 0);
    // generator images generate
    CHECK(closure(c.group, c.generator_images).size() == c.group.order());
  }
}

TEST_CASE("quaternion presentation round-trips to the table constructor") {
  auto g = coset_enumerate(parse_presentation("gens: a b\nrels: a^4 b^2a^-2 b^-1aba"));
  CHECK(g.order() == 8);
  CHECK(is_isomorphic(g, quaternion8()).has_value());
}

TEST_CASE("dihedral and symmetric-style presentations") {
  auto d6 = coset_enumerate(parse_presentation("gens: a b\nrels: a^6 b^2 (ab)^2"));
  CHECK(d6.order() == 12);
  CHECK(is_isomorphic(d6, generalized_dihedral(cyclic(6))).has_value());

  auto a4 = coset_enumerate(parse_presentation("gens: a b\nrels: a^3 b^3 (ab)^2"));
  CHECK(a4.order() == 12);
  CHECK_FALSE(is_isomorphic(a4, d6).has_value());
}

TEST_CASE("coset limit is reported as a resource error") {
  // free product C2 * C2 is infinite
  CHECK_THROWS_AS(coset_enumerate(parse_presentation("gens: a b\nrels: a^2 b^2"), 256),
                  resource_error);
}

TEST_CASE("a presentation of the trivial group") {
  auto g = coset_enumerate(parse_presentation("gens: a\nrels: a"));
  CHECK(g.order() == 1);
}
