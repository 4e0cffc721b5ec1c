#include "coendo/fixtures.hpp"
#include "coendo/splitting.hpp"
#include "doctest.h"

using namespace coendo;

TEST_CASE("unit splitting iff split exactness, with omega comparison") {
  Fp f(5);
  std::vector<std::pair<std::string, RRingExt<Fp>>> fx{
      {"trivial extension", fixtures::trivial_extension_ground(f)},
      {"k[t]/t^3", fixtures::over_ground(f, fixtures::truncated_poly(f, 3))},
      {"k x k", fixtures::over_ground(f, fixtures::split_product(f))},
      {"T2 trivial extension", fixtures::trivial_extension_upper(f)},
      {"T2 in M2", fixtures::upper_in_full(f)}};
  for (const auto& [name, ext] : fx) {
    CAPTURE(name);
    QComplex<Fp> q(ext, 5);
    bool splits = unit_splits_right(ext).has_value();
    auto cert = check_split_exact(q, 4);
    CHECK(splits == cert.ok);
    if (splits) {
      auto om = omega_comparison(q, 4);
      CHECK(om.ok);
      for (int n = 0; n <= 4; ++n) CHECK(om.omega_dims[n] == q.dim(n));
      for (int m = 1; m <= 4; ++m)
        CHECK(cert.kernels[m].dim() + cert.complements[m].dim() == q.dim(m));
    } else {
      CHECK(cert.failing_degree == 1);
      CHECK_THROWS(omega_comparison(q, 4));
    }
  }
}

TEST_CASE("trivial extension: complement is spanned by t q_m") {
  Qf f;
  auto ext = fixtures::trivial_extension_ground(f);
  QComplex<Qf> q(ext, 5);
  auto cert = check_split_exact(q, 4);
  REQUIRE(cert.ok);
  auto H = homotopy_trivial_extension(q);
  REQUIRE(H.ok);
  Vec<Qf> t = ext.A->basis(1);
  for (int m = 1; m <= 4; ++m) {
    CHECK(cert.kernels[m].contains(H.q_gen[m]));
    CHECK(cert.complements[m].dim() == 1);
    CHECK(!cert.kernels[m].contains(q.act_A(m, t, true) * H.q_gen[m]));
  }
}

TEST_CASE("homotopy on the trivial extensions") {
  Fp f(5);
  for (const auto& ext : {fixtures::trivial_extension_ground(f), fixtures::trivial_extension_upper(f)}) {
    QComplex<Fp> q(ext, 5);
    auto H = homotopy_trivial_extension(q);
    CHECK(H.ok);
    CHECK(H.reason.empty());
    // h(q_{m+1}) = t q_m and h(t q_{m+1}) = q_m
    Vec<Fp> t = *trivial_extension_generator(ext);
    for (int m = 1; m + 1 <= 4; ++m) {
      Vec<Fp> tq = q.act_A(m, t, true) * H.q_gen[m];
      CHECK(vec_eq(f, H.h[m] * H.q_gen[m + 1], tq));
      CHECK(vec_eq(f, H.h[m] * (q.act_A(m + 1, t, true) * H.q_gen[m + 1]), H.q_gen[m]));
    }
  }
  CHECK_THROWS(homotopy_trivial_extension(QComplex<Fp>(fixtures::over_ground(f, fixtures::truncated_poly(f, 3)), 3)));
}
