// SPDX-License-Identifier: Apache-2.0
//
// Special functions, jets, combinatorics, sampling and quadrature checks.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <vector>

#include "hcn/math/bessel.hpp"
#include "hcn/math/combinatorics.hpp"
#include "hcn/math/jets.hpp"
#include "hcn/math/quadrature.hpp"
#include "hcn/math/sampling.hpp"
#include "hcn/math/special.hpp"

#include "oracles.hpp"

using namespace hcn::math;

TEST_CASE("bessel_j0 basics")
{
    CHECK(bessel_j0(0.0) == 1.0);

    // first positive root, located independently by series + bisection
    const double root = oracle::bisect(
        [](double x) { return static_cast<double>(oracle::bessel_j0_series(x)); }, 2.0,
        3.0);
    CHECK(std::fabs(root - 2.404825557695773) < 1e-12);
    CHECK(std::fabs(bessel_j0(2.404825557695773)) <= 1e-10);

    CHECK(bessel_j0(std::numbers::pi) == Catch::Approx(-0.3042421776440938642).margin(1e-9));

    CHECK_THROWS_AS(bessel_j0(std::numeric_limits<double>::quiet_NaN()),
                    std::domain_error);
    CHECK_THROWS_AS(bessel_j0(std::numeric_limits<double>::infinity()),
                    std::domain_error);
}

TEST_CASE("bessel_j0 tracks the series oracle through the regime switch")
{
    for (double x = 0.0; x <= 20.0; x += 0.037) {
        const double ref = static_cast<double>(oracle::bessel_j0_series(x));
        CHECK(std::fabs(bessel_j0(x) - ref) < 1e-12);
        CHECK(std::fabs(bessel_j0(-x) - ref) < 1e-12);
    }
}

TEST_CASE("bessel_j0 absolute error stays under 1e-12 up to |x| = 100")
{
    // references computed with 30-digit arithmetic
    const std::vector<std::pair<double, double>> table = {
        {1.0, 0.76519768655796655145},   {5.0, -0.17759677131433830435},
        {7.5, 0.26633965788037839687},   {10.0, -0.2459357644513483352},
        {13.9, 0.18357985545786967362},  {14.0, 0.17107347611045865906},
        {14.1, 0.15695287703260117905},  {20.0, 0.16702466434058315473},
        {29.5, -0.133147858298398214},   {50.0, 0.055812327669251815005},
        {86.3, -0.066232250735620000232},{100.0, 0.019985850304223122424}};
    for (const auto& [x, ref] : table)
        CHECK(std::fabs(bessel_j0(x) - ref) < 1e-12);
}

TEST_CASE("ln_beta values and symmetry")
{
    CHECK(ln_beta(1.0, 1.0) == Catch::Approx(0.0).margin(1e-15));
    CHECK(ln_beta(0.5, 0.5) == Catch::Approx(1.1447298858494001741).epsilon(1e-13));
    CHECK(ln_beta(2.0, 3.0) == Catch::Approx(std::log(1.0 / 12.0)).epsilon(1e-13));

    // exp(ln B(x,y)) == G(x)G(y)/G(x+y) against direct tgamma where safe
    CHECK(std::exp(ln_beta(3.5, 2.25)) ==
          Catch::Approx(std::tgamma(3.5) * std::tgamma(2.25) / std::tgamma(5.75))
              .epsilon(1e-12));

    RandomStream rng(2024);
    for (int i = 0; i < 100; ++i) {
        const double x = 0.05 + 10.0 * rng.uniform();
        const double y = 0.05 + 10.0 * rng.uniform();
        CHECK(std::fabs(ln_beta(x, y) - ln_beta(y, x)) < 1e-14);
    }

    CHECK_THROWS_AS(ln_beta(0.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(ln_beta(1.0, -0.5), std::domain_error);
}

TEST_CASE("binomial coefficients")
{
    CHECK(binomial(5, 0) == 1);
    CHECK(binomial(6, 3) == 20);
    CHECK(binomial(30, 15) == 155117520ULL);
    CHECK(binomial(3, 7) == 0);

    const auto pascal = oracle::pascal_triangle(64);
    for (int n = 0; n <= 64; ++n)
        for (int k = 0; k <= n; ++k)
            REQUIRE(binomial(n, k) == pascal[n][k]);

    CHECK_THROWS_AS(binomial(65, 1), std::invalid_argument);
}

TEST_CASE("composition enumeration")
{
    {
        const auto c0 = enumerate_compositions(0);
        REQUIRE(c0.size() == 1);
        CHECK(c0[0].weight == 1);
    }
    {
        const auto c1 = enumerate_compositions(1);
        REQUIRE(c1.size() == 3);
        std::uint64_t total = 0;
        for (const auto& idx : c1) {
            CHECK(idx.weight == 1);
            total += idx.weight;
        }
        CHECK(total == 3);
    }
    {
        const auto c4 = enumerate_compositions(4);
        CHECK(c4.size() == 15);
        std::uint64_t total = 0;
        for (const auto& idx : c4)
            total += idx.weight;
        CHECK(total == 81);
    }

    // brute-force cross-check: triple loop + factorial weights
    const auto pascal = oracle::pascal_triangle(32);
    for (int n = 0; n <= 8; ++n) {
        const auto comp = enumerate_compositions(n);
        CHECK(comp.size() == static_cast<std::size_t>((n + 1) * (n + 2) / 2));
        std::size_t found = 0;
        std::uint64_t total = 0;
        for (int u1 = 0; u1 <= n; ++u1)
            for (int u2 = 0; u2 <= n; ++u2)
                for (int u3 = 0; u3 <= n; ++u3) {
                    if (u1 + u2 + u3 != n)
                        continue;
                    const std::uint64_t w = pascal[n][u1] * pascal[n - u1][u2];
                    const auto it = std::find_if(
                        comp.begin(), comp.end(), [&](const MultinomialIndex& m) {
                            return m.u1 == u1 && m.u2 == u2 && m.u3 == u3;
                        });
                    REQUIRE(it != comp.end());
                    CHECK(it->weight == w);
                    ++found;
                    total += w;
                }
        CHECK(found == comp.size());
        std::uint64_t pow3 = 1;
        for (int i = 0; i < n; ++i)
            pow3 *= 3;
        CHECK(total == pow3);
    }
}

TEST_CASE("gamma-laplace jets")
{
    {
        const TaylorJet j = jet_of_gamma_laplace(0.0, 4, 1.0, 3);
        CHECK(j.coeff(0) == 1.0);
        CHECK(j.coeff(1) == 0.0);
        CHECK(j.coeff(2) == 0.0);
        CHECK(j.coeff(3) == 0.0);
    }
    {
        // 1/(1+s) at 0: derivatives [1, -1, 2], coeffs [1, -1, 1]
        const TaylorJet j = jet_of_gamma_laplace(1.0, 1, 0.0, 2);
        CHECK(j.derivative(0) == Catch::Approx(1.0));
        CHECK(j.derivative(1) == Catch::Approx(-1.0));
        CHECK(j.derivative(2) == Catch::Approx(2.0));
        CHECK(j.coeff(2) == Catch::Approx(1.0));
    }
    {
        const double c = 0.0064;
        const TaylorJet j = jet_of_gamma_laplace(c, 3, 2.0, 4);
        const auto f = [&](double s) { return std::pow(1.0 + c * s, -3.0); };
        for (int u = 0; u <= 4; ++u) {
            const double fd = oracle::fd_derivative(f, 2.0, u, 0.25);
            CHECK(j.derivative(u) == Catch::Approx(fd).epsilon(1e-7));
        }
    }
    CHECK_THROWS_AS(jet_of_gamma_laplace(-2.0, 1, 1.0, 2), std::domain_error);
    CHECK_THROWS_AS(jet_of_gamma_laplace(1.0, 1, 1.0, 40), std::invalid_argument);
}

TEST_CASE("stretched-exponential jets")
{
    {
        const TaylorJet j = jet_of_stretched_exp(0.0, 0.5, 5.0, 3);
        CHECK(j.coeff(0) == 1.0);
        CHECK(j.coeff(1) == 0.0);
        CHECK(j.coeff(2) == 0.0);
        CHECK(j.coeff(3) == 0.0);
    }
    {
        // exponent 1 degenerates to the plain exponential e^(-2s)
        const TaylorJet j = jet_of_stretched_exp(2.0, 1.0, 1.0, 2);
        const double e2 = std::exp(-2.0);
        CHECK(j.coeff(0) == Catch::Approx(e2).epsilon(1e-14));
        CHECK(j.coeff(1) == Catch::Approx(-2.0 * e2).epsilon(1e-14));
        CHECK(j.coeff(2) == Catch::Approx(2.0 * e2).epsilon(1e-14));
    }
    {
        const TaylorJet j = jet_of_stretched_exp(1.5, 2.0 / 3.0, 2.0, 4);
        const auto f = [](double s) { return std::exp(-1.5 * std::pow(s, 2.0 / 3.0)); };
        for (int u = 0; u <= 4; ++u) {
            const double fd = oracle::fd_derivative(f, 2.0, u, 0.12);
            CHECK(j.derivative(u) == Catch::Approx(fd).epsilon(1e-6));
        }
    }
    CHECK_THROWS_AS(jet_of_stretched_exp(1.0, 0.5, 0.0, 3), std::domain_error);
    CHECK_THROWS_AS(jet_of_stretched_exp(-1.0, 0.5, 1.0, 3), std::domain_error);

    // regression invariant: the public op is exactly exp(power jet)
    RandomStream rng(99);
    for (int i = 0; i < 50; ++i) {
        const double coef = 2.0 * rng.uniform();
        const double expo = 0.2 + 0.75 * rng.uniform();
        const double s0 = 0.5 + 4.0 * rng.uniform();
        const TaylorJet a = jet_of_stretched_exp(coef, expo, s0, 6);
        const TaylorJet b = jet_exp(jet_of_power(-coef, expo, s0, 6));
        for (int u = 0; u <= 6; ++u)
            CHECK(a.coeff(u) ==
                  Catch::Approx(b.coeff(u)).epsilon(1e-14).margin(1e-300));
    }
}

TEST_CASE("jet multiplication")
{
    {
        const TaylorJet one = TaylorJet::constant(1.0, 4);
        const TaylorJet b = jet_of_gamma_laplace(0.3, 2, 1.5, 4);
        const TaylorJet prod = jet_multiply(one, b);
        for (int u = 0; u <= 4; ++u)
            CHECK(prod.coeff(u) == b.coeff(u));
    }
    {
        // (1+s)^-1 squared at 0 has the series of (1+s)^-2: [1, -2, 3]
        const TaylorJet a = jet_of_gamma_laplace(1.0, 1, 0.0, 2);
        const TaylorJet p = jet_multiply(a, a);
        CHECK(p.coeff(0) == Catch::Approx(1.0));
        CHECK(p.coeff(1) == Catch::Approx(-2.0));
        CHECK(p.coeff(2) == Catch::Approx(3.0));
    }
    {
        // random order-6 jets against finite differences of the product
        const double c1 = 0.7;
        const double c2 = 0.23;
        const TaylorJet a = jet_of_gamma_laplace(c1, 2, 0.8, 6);
        const TaylorJet b = jet_of_stretched_exp(0.9, 0.61, 0.8, 6);
        const TaylorJet p = jet_multiply(a, b);
        const auto f = [&](double s) {
            return std::pow(1.0 + c1 * s, -2.0) * std::exp(-0.9 * std::pow(s, 0.61));
        };
        for (int u = 0; u <= 6; ++u) {
            const double fd = oracle::fd_derivative(f, 0.8, u, 0.05);
            CHECK(p.derivative(u) == Catch::Approx(fd).epsilon(1e-8).margin(1e-10));
        }
    }
    CHECK_THROWS_AS(jet_multiply(TaylorJet::constant(1.0, 2), TaylorJet::constant(1.0, 3)),
                    std::invalid_argument);
}

TEST_CASE("jet derivative reconstruction matches Richardson differences")
{
    RandomStream rng(7);
    for (int draw = 0; draw < 100; ++draw) {
        const double c = 0.02 + rng.uniform();
        const int n = 1 + static_cast<int>(rng.uniform() * 6);
        const double s0 = 0.3 + 3.0 * rng.uniform();
        const TaylorJet jg = jet_of_gamma_laplace(c, n, s0, 6);
        const auto fg = [&](double s) {
            return std::pow(1.0 + c * s, -static_cast<double>(n));
        };
        const double coef = 0.1 + rng.uniform();
        const double expo = 0.25 + 0.7 * rng.uniform();
        const TaylorJet js = jet_of_stretched_exp(coef, expo, s0, 6);
        const auto fs = [&](double s) { return std::exp(-coef * std::pow(s, expo)); };
        for (int u = 0; u <= 6; ++u) {
            const double ref_g = oracle::fd_derivative(fg, s0, u, 0.08 * s0);
            const double ref_s = oracle::fd_derivative(fs, s0, u, 0.08 * s0);
            CHECK(jg.derivative(u) == Catch::Approx(ref_g).epsilon(1e-6).margin(1e-12));
            CHECK(js.derivative(u) == Catch::Approx(ref_s).epsilon(1e-6).margin(1e-12));
        }
    }
}

TEST_CASE("identity jet shape")
{
    const TaylorJet v = TaylorJet::variable(3.25, 5);
    CHECK(v.coeff(0) == 3.25);
    CHECK(v.coeff(1) == 1.0);
    for (int u = 2; u <= 5; ++u)
        CHECK(v.coeff(u) == 0.0);
}

TEST_CASE("gamma sampling moments")
{
    RandomStream rng(1234);
    const int n = 1'000'000;
    {
        double sum = 0.0;
        for (int i = 0; i < n; ++i)
            sum += sample_gamma(1.0, 1.0, rng);
        CHECK(sum / n == Catch::Approx(1.0).margin(0.01));
    }
    {
        double sum = 0.0;
        double sumsq = 0.0;
        for (int i = 0; i < n; ++i) {
            const double x = sample_gamma(5.0, 2.0, rng);
            sum += x;
            sumsq += x * x;
        }
        const double mean = sum / n;
        const double var = sumsq / n - mean * mean;
        CHECK(mean == Catch::Approx(10.0).margin(0.1));
        CHECK(var == Catch::Approx(20.0).epsilon(0.03));
    }
    CHECK_THROWS_AS(sample_gamma(0.0, 1.0, rng), std::domain_error);
    CHECK_THROWS_AS(sample_gamma(1.0, -1.0, rng), std::domain_error);
}

TEST_CASE("gamma sampling distribution: Erlang-3 CDF")
{
    RandomStream rng(777);
    const int n = 1'000'000;
    std::vector<double> xs(n);
    for (int i = 0; i < n; ++i)
        xs[i] = sample_gamma(3.0, 1.0, rng);
    // closed-form CDF of the sum of three unit exponentials
    const auto cdf = [](double x) {
        return 1.0 - std::exp(-x) * (1.0 + x + 0.5 * x * x);
    };
    CHECK(oracle::ks_statistic(std::move(xs), cdf) < 0.002);
}

TEST_CASE("gamma sampling: integer shape equals sum of unit-shape draws")
{
    RandomStream rng_a(31);
    RandomStream rng_b(32);
    const int n = 100'000;
    std::vector<double> direct(n);
    std::vector<double> summed(n);
    const int shape = 4;
    const double scale = 0.7;
    for (int i = 0; i < n; ++i) {
        direct[i] = sample_gamma(shape, scale, rng_a);
        double s = 0.0;
        for (int j = 0; j < shape; ++j)
            s += sample_gamma(1.0, scale, rng_b);
        summed[i] = s;
    }
    CHECK(oracle::ks_two_sample_pvalue(std::move(direct), std::move(summed)) > 0.001);
}

TEST_CASE("gamma sampling: fractional shape against the incomplete-gamma CDF")
{
    RandomStream rng(55);
    const int n = 200'000;
    const double shape = 0.6;
    std::vector<double> xs(n);
    for (int i = 0; i < n; ++i)
        xs[i] = sample_gamma(shape, 1.5, rng);
    const auto cdf = [&](double x) { return oracle::gamma_p(shape, x / 1.5); };
    CHECK(oracle::ks_test_pvalue(std::move(xs), cdf) > 0.001);
}

TEST_CASE("poisson sampling mean and small-mean exactness")
{
    RandomStream rng(4242);
    {
        const double mean = 78.5;  // PTRS branch
        const int n = 200'000;
        double sum = 0.0;
        for (int i = 0; i < n; ++i)
            sum += static_cast<double>(sample_poisson(mean, rng));
        CHECK(sum / n == Catch::Approx(mean).epsilon(0.005));
    }
    {
        const double mean = 3.2;  // product branch
        const int n = 200'000;
        double sum = 0.0;
        double sumsq = 0.0;
        for (int i = 0; i < n; ++i) {
            const double k = static_cast<double>(sample_poisson(mean, rng));
            sum += k;
            sumsq += k * k;
        }
        const double m = sum / n;
        CHECK(m == Catch::Approx(mean).epsilon(0.01));
        CHECK(sumsq / n - m * m == Catch::Approx(mean).epsilon(0.03));
    }
    CHECK(sample_poisson(0.0, rng) == 0);
}

TEST_CASE("random substreams are deterministic and scheduling-independent")
{
    RandomStream a = RandomStream::substream(9001, 17);
    RandomStream b = RandomStream::substream(9001, 17);
    for (int i = 0; i < 100; ++i)
        REQUIRE(a.next_u64() == b.next_u64());

    RandomStream c = RandomStream::substream(9001, 18);
    bool all_equal = true;
    RandomStream a2 = RandomStream::substream(9001, 17);
    for (int i = 0; i < 100; ++i)
        all_equal = all_equal && (a2.next_u64() == c.next_u64());
    CHECK_FALSE(all_equal);
}

TEST_CASE("adaptive quadrature")
{
    {
        const auto f = [](double x) { return x * x; };
        const QuadResult r = integrate_adaptive(f, 0.0, 1.0, 1e-12);
        CHECK(r.converged);
        CHECK(r.value == Catch::Approx(1.0 / 3.0).epsilon(1e-13));
    }
    {
        // oscillatory + peaked integrand against the Simpson oracle
        const auto f = [](double x) {
            return std::exp(-3.0 * x) * std::cos(7.0 * x) + 1.0 / (1.0 + 50.0 * x * x);
        };
        const QuadResult r = integrate_adaptive(f, 0.0, 4.0, 1e-10);
        const double ref = oracle::integrate_simpson(f, 0.0, 4.0, 1e-12);
        CHECK(r.converged);
        CHECK(r.value == Catch::Approx(ref).epsilon(1e-9));
    }
    {
        const auto f = [](double x) { return std::exp(-x * x); };
        const QuadResult r = integrate_to_infinity(f, 0.0, 1e-10);
        CHECK(r.value ==
              Catch::Approx(0.5 * std::sqrt(std::numbers::pi)).epsilon(1e-9));
    }
}
