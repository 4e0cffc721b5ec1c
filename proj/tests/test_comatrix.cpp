#include "coendo/comatrix.hpp"
#include "coendo/coring_checks.hpp"
#include "coendo/fixtures.hpp"
#include "doctest.h"

using namespace coendo;

template <class F>
static ComatrixPtr<F> comatrix(const RRingExt<F>& ext, int d, RingKind k) {
  auto q = std::make_shared<const QComplex<F>>(ext, d);
  return std::make_shared<const Comatrix<F>>(q, d, k);
}

static void require_all(const std::vector<Check>& cs) {
  for (const auto& c : cs) {
    CAPTURE(c.name);
    CAPTURE(c.detail);
    CHECK(c.pass);
    CHECK(c.count > 0);
  }
}

TEST_CASE("trivial extension: filtration dimensions 1, 3, 5, ...") {
  Fp f(5);
  for (int d = 0; d <= 4; ++d) {
    auto D = comatrix(fixtures::trivial_extension_ground(f), d, RingKind::B);
    CHECK(D->dim() == 2 * d + 1);
    for (int n = 0; n <= d; ++n) CHECK(D->dim_upto(n) == 2 * n + 1);
  }
}

TEST_CASE("ground-field R: the B and C quotients agree") {
  Qf f;
  auto ext = fixtures::trivial_extension_ground(f);
  CHECK(comatrix(ext, 3, RingKind::B)->dim() == comatrix(ext, 3, RingKind::C)->dim());
}

TEST_CASE("coring and bialgebroid axioms") {
  Fp f(5);
  std::vector<std::pair<std::string, RRingExt<Fp>>> fx{
      {"trivial extension", fixtures::trivial_extension_ground(f)},
      {"k[t]/t^3", fixtures::over_ground(f, fixtures::truncated_poly(f, 3))},
      {"T2 trivial extension", fixtures::trivial_extension_upper(f)},
      {"dual numbers trivial extension", fixtures::trivial_extension_dual_numbers(f)}};
  for (const auto& [name, ext] : fx) {
    CAPTURE(name);
    auto D = comatrix(ext, 3, RingKind::B);
    auto C = make_coring(D);
    require_all(check_coring(*C));
    require_all({check_takeuchi(*C)});
    require_all(check_bialgebroid(*C));
    auto Dc = comatrix(ext, 3, RingKind::C);
    require_all(check_coring(*make_coring(Dc)));
  }
}

TEST_CASE("vanishing sums") {
  Fp f(5);
  for (const auto& ext : {fixtures::trivial_extension_ground(f), fixtures::over_ground(f, fixtures::truncated_poly(f, 3)),
                          fixtures::trivial_extension_upper(f)}) {
    auto D = comatrix(ext, 3, RingKind::B);
    require_all(check_suma0(*D, *make_coring(D)));
  }
}
