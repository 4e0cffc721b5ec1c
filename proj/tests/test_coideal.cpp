#include "coendo/coideal.hpp"
#include "coendo/fixtures.hpp"
#include "doctest.h"

using namespace coendo;

template <class F>
static CoidealSuite<F> run(const RRingExt<F>& ext, int d, bool commutative) {
  auto q = std::make_shared<const QComplex<F>>(ext, d);
  auto DB = std::make_shared<const Comatrix<F>>(q, d, RingKind::B);
  auto DC = std::make_shared<const Comatrix<F>>(q, d, RingKind::C);
  auto W = std::make_shared<const WordModel<F>>(q, d);
  CanonicalMaps<F> cm(DB, W);
  auto s = coideal_suite(cm, DC);
  if (commutative) s.checks.push_back(check_two_sided(cm));
  for (const auto& c : s.checks) {
    CAPTURE(c.name);
    CAPTURE(c.detail);
    CHECK(c.pass);
  }
  return s;
}

TEST_CASE("R = k: the coideal vanishes") {
  Qf f;
  auto s = run(fixtures::trivial_extension_ground(f), 3, true);
  for (int n : s.dim_J) CHECK(n == 0);
}

TEST_CASE("upper triangular R: Ker theta matches J in every degree") {
  Fp f(5);
  auto s = run(fixtures::trivial_extension_upper(f), 3, false);
  CHECK(s.dim_J.back() > 0);
  for (size_t n = 0; n < s.dim_J.size(); ++n) CHECK(s.dim_J[n] == s.dim_ker_theta[n]);
}

TEST_CASE("commutative R: g_r is central on generators") {
  Fp f(5);
  auto s = run(fixtures::trivial_extension_dual_numbers(f), 3, true);
  CHECK(s.dim_J.back() > 0);
}
