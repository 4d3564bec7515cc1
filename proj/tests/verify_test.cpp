#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <stdexcept>
#include <string>

#include "finsler/verify.hpp"

using namespace finsler;

namespace {

int count_status(const VerifyReport& rep, const std::string& status) {
  int k = 0;
  for (const auto& c : rep.checks)
    if (c.status == status) ++k;
  return k;
}

}  // namespace

TEST_CASE("spray suite passes on every pair for both scaling functions") {
  auto rep = run_spray_suite(SampleOptions{8, 5, 0.3, 0.05});
  REQUIRE(rep.checks.size() == 6);
  for (const auto& c : rep.checks) {
    INFO(c.name, " max_error=", c.max_error);
    CHECK(c.status == "pass");
    CHECK(c.max_error <= 1e-8);
  }
  CHECK(!rep.failed());
  CHECK(!rep.has_erratum());
}

TEST_CASE("weyl suite validates space forms, identities, and projective invariance") {
  auto rep = run_weyl_suite(SampleOptions{6, 7, 0.3, 0.05});
  // 3 space forms + 1 perturbed + (annihilation + homogeneity) x 3 pairs + invariance
  REQUIRE(rep.checks.size() == 11);
  for (const auto& c : rep.checks) {
    INFO(c.name, " max_error=", c.max_error);
    CHECK(c.status == "pass");
  }
  CHECK(!rep.failed());
}

TEST_CASE("contraction suite passes with the vertical display recorded as erratum") {
  auto rep = run_contraction_suite(SampleOptions{5, 11, 0.3, 0.05});
  CHECK(!rep.failed());
  CHECK(rep.has_erratum());
  int errata = 0;
  for (const auto& c : rep.checks) {
    INFO(c.name, " status=", c.status, " max_error=", c.max_error);
    CHECK(c.status != "fail");
    if (c.status == "erratum") {
      ++errata;
      CHECK(c.max_error > 0.0);
      CHECK(!c.details.empty());
      CHECK(c.name.find("matsumoto") != std::string::npos);
    }
  }
  CHECK(errata == 3);  // one vertical-display erratum per matsumoto pair
}

TEST_CASE("killing suite validates the specialization and its preconditions") {
  auto rep = run_killing_suite(SampleOptions{8, 13, 0.3, 0.05});
  REQUIRE(rep.checks.size() == 4);
  for (const auto& c : rep.checks) {
    INFO(c.name, " max_error=", c.max_error);
    CHECK(c.status == "pass");
  }
}

TEST_CASE("symbolic suite passes with exactly the three transcription errata") {
  auto rep = run_symbolic_suite();
  CHECK(!rep.failed());
  CHECK(count_status(rep, "erratum") == 3);
  int named = 0;
  for (const auto& c : rep.checks) {
    INFO(c.name, " status=", c.status, " details=", c.details);
    CHECK(c.status != "fail");
    if (c.status == "erratum") {
      CHECK(!c.details.empty());
      if (c.name.find("mod-reduction") != std::string::npos) ++named;
      if (c.name.find("leading vertical factor") != std::string::npos) ++named;
      if (c.name.find("clearing factor") != std::string::npos) ++named;
    }
  }
  CHECK(named == 3);
}

TEST_CASE("theorem suite proves the forward direction and both contrapositives") {
  auto rep = run_theorem_suite(SampleOptions{10, 17, 0.3, 0.05});
  REQUIRE(rep.checks.size() == 6);
  for (const auto& c : rep.checks) {
    INFO(c.name, " max_error=", c.max_error);
    CHECK(c.status == "pass");
  }
}

TEST_CASE("aggregated run is deterministic and rejects unknown suites") {
  const SampleOptions opt{4, 42, 0.3, 0.05};
  auto a = run_suite("all", opt);
  auto b = run_suite("all", opt);
  REQUIRE(a.checks.size() == b.checks.size());
  CHECK(a.checks.size() >= 30);
  for (std::size_t i = 0; i < a.checks.size(); ++i) {
    CHECK(a.checks[i].name == b.checks[i].name);
    CHECK(a.checks[i].status == b.checks[i].status);
    CHECK(a.checks[i].max_error == b.checks[i].max_error);  // bitwise reproducible
    CHECK(a.checks[i].samples == b.checks[i].samples);
    CHECK(a.checks[i].details == b.checks[i].details);
  }
  CHECK_THROWS_AS(run_suite("nope", opt), std::invalid_argument);
}
