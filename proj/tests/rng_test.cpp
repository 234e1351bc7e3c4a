#include <doctest.h>

#include <cmath>
#include <vector>

#include "ulam/errors.hpp"
#include "ulam/rng.hpp"

using namespace ulam::rng;

// Known-answer vectors generated with numpy.random.Philox (Random123 layout).
TEST_CASE("philox4x64-10 known answers") {
  CHECK(philox4x64({1, 0, 0, 0}, {0, 0}) ==
        Counter{0x02f4ba6408e4d89bULL, 0x3dd62b0b9ca8c5b2ULL, 0x1c8667a55d902e79ULL, 0x907d7a052fd5b4dcULL});
  CHECK(philox4x64({2, 0, 0, 0}, {0, 0}) ==
        Counter{0x809bf322883987c3ULL, 0x471128b9e807f7ddULL, 0xf250ba0dbec065b7ULL, 0xfc6ed66767a457bcULL});
  CHECK(philox4x64({6, 0, 0, 0}, {123, 7}) ==
        Counter{0x8984cd260f9a84cbULL, 0x028b8ef5b82a9003ULL, 0x0b759905926a3e35ULL, 0xbe19afab9da60f30ULL});
  CHECK(philox4x64({7, 0, 0, 0}, {123, 7}) ==
        Counter{0x558cff0b4133d998ULL, 0xacb852d75edae7ccULL, 0x48bff0b4d309b906ULL, 0xed17168a2d652fd3ULL});
  CHECK(philox4x64({1, 1, 0, 0}, {0xdeadbeefULL, 1}) ==
        Counter{0xe001c1dae9ae37e5ULL, 0x93ba1dc67521c2c2ULL, 0xf2cbf1f6f7ce666dULL, 0x38f31fdcb2ea338aULL});
  CHECK(philox4x64({2, 1, 0, 0}, {0xdeadbeefULL, 1}) ==
        Counter{0xfe2b777f916bcb6cULL, 0x3e044aafc5667993ULL, 0x86862cb0814fdc69ULL, 0x7542028bde1cc23aULL});
}

TEST_CASE("sample engines are reproducible and independent of each other") {
  SampleEngine a({5, 2}, 10), b({5, 2}, 10), c({5, 2}, 11), d({5, 3}, 10);
  std::vector<std::uint64_t> va, vb, vc, vd;
  for (int i = 0; i < 9; ++i) {
    va.push_back(a());
    vb.push_back(b());
    vc.push_back(c());
    vd.push_back(d());
  }
  CHECK(va == vb);
  CHECK(va != vc);
  CHECK(va != vd);
  // The first block is the Philox output at counter (0, sample_index).
  const auto block = philox4x64({0, 10, 0, 0}, {5, 2});
  CHECK(va[0] == block[0]);
  CHECK(va[3] == block[3]);
}

TEST_CASE("uniform and bounded draws") {
  SampleEngine e({1, 0}, 0);
  std::vector<int> counts(7, 0);
  const int n = 70000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = e.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
    ++counts[static_cast<std::size_t>(e.bounded(7))];
  }
  CHECK(std::abs(sum / n - 0.5) < 4.0 * std::sqrt(1.0 / 12.0 / n));
  double chi2 = 0.0;
  for (int c : counts) chi2 += (c - n / 7.0) * (c - n / 7.0) / (n / 7.0);
  CHECK(chi2 < 22.5);  // 6 degrees of freedom, p ~ 1e-3
  CHECK(e.bounded(1) == 0);
  CHECK_THROWS_AS(e.bounded(0), ulam::DomainError);
}

TEST_CASE("poisson draws have the right mean and variance") {
  for (double mean : {0.7, 12.0, 45.0, 3000.0}) {
    SampleEngine e({9, 1}, 0);
    const int n = 40000;
    double s = 0.0, s2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double k = static_cast<double>(e.poisson(mean));
      s += k;
      s2 += k * k;
    }
    const double m = s / n, v = s2 / n - m * m;
    INFO("mean = " << mean);
    CHECK(std::abs(m - mean) < 5.0 * std::sqrt(mean / n));
    CHECK(std::abs(v / mean - 1.0) < 0.05);
  }
  SampleEngine e({9, 1}, 0);
  CHECK(e.poisson(0.0) == 0);
  CHECK_THROWS_AS(e.poisson(-1.0), ulam::DomainError);
}
