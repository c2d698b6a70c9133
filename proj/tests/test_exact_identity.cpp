#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <mapm/waiting.hpp>

using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;

namespace {

cpp_rational harmonic(int n) {
  cpp_rational h = 0;
  for (int j = 1; j <= n; ++j) h += cpp_rational(1, j);
  return h;
}

cpp_rational alternating_binomial_sum(int n) {
  cpp_rational sum = 0;
  cpp_int binom = 1;
  for (int j = 1; j <= n; ++j) {
    binom = binom * (n - j + 1) / j;
    const cpp_rational term(binom, j);
    sum += (j % 2 == 1) ? term : -term;
  }
  return sum;
}

}  // namespace

TEST_CASE("alternating binomial sum equals the harmonic number exactly") {
  // This identity is what collapses the inclusion-exclusion form of the
  // expected maximum waiting time in the rare-success limit.
  for (int n = 1; n <= 64; ++n) {
    CHECK(alternating_binomial_sum(n) == harmonic(n));
  }
}

TEST_CASE("expected maximum approaches the harmonic asymptote") {
  const double p = 1e-9;
  for (int n : {2, 5, 17, 30}) {
    const double hn = static_cast<double>(harmonic(n));
    const double scaled = mapm::expected_max_geometric(n, p) * p;
    CHECK(scaled == doctest::Approx(hn).epsilon(1e-6));
  }
}
