#include <catch2/catch_amalgamated.hpp>

#include <icpp/kernels.hpp>
#include <icpp/rng.hpp>

#include "oracles.hpp"

using icpp::ExpKernel;
using icpp::Kernel;
using icpp::PowerLawKernel;

TEST_CASE("kernel evaluation at reference points") {
    const Kernel exp_k(ExpKernel{0.6, 0.8});

    // limit kappa*theta as t -> 0+
    CHECK(exp_k.eval(1e-12) == Catch::Approx(0.48).epsilon(1e-9));
    // causality
    CHECK(exp_k.eval(-1.0) == 0.0);
    CHECK(exp_k.eval(0.0) == 0.0);

    // 0.48 * exp(-0.8); cross-checked against a central difference of Phi
    const double expected = 0.2156779027762664;
    CHECK(exp_k.eval(1.0) == Catch::Approx(expected).epsilon(1e-12));
    const double h = 1e-6;
    const double fd = (exp_k.integral(1.0 + h) - exp_k.integral(1.0 - h)) / (2.0 * h);
    CHECK(fd == Catch::Approx(expected).epsilon(1e-8));
}

TEST_CASE("kernel antiderivative matches quadrature") {
    const Kernel exp_k(ExpKernel{0.6, 0.8});
    const Kernel pl_k(PowerLawKernel{1.0, 1.0, 1.0});

    CHECK(exp_k.integral(0.0) == 0.0);
    CHECK(exp_k.integral(-2.0) == 0.0);
    // total mass of the exponential kernel
    CHECK(exp_k.integral(1e4) == Catch::Approx(0.6).epsilon(1e-12));
    // kappa/theta * (c^-theta - (t+c)^-theta) at kappa=c=theta=1, t=1
    CHECK(pl_k.integral(1.0) == Catch::Approx(0.5).epsilon(1e-12));
    CHECK(pl_k.integral(1.0) ==
          Catch::Approx(oracle::integrate([&](double u) { return pl_k.eval(u); }, 0.0, 1.0))
              .epsilon(1e-10));

    icpp::SplitMix64 rng(7);
    for (const Kernel* k : {&exp_k, &pl_k}) {
        for (int rep = 0; rep < 20; ++rep) {
            const double t1 = 5.0 * rng.uniform();
            const double t2 = t1 + 5.0 * rng.uniform();
            const double diff = k->integral(t2) - k->integral(t1);
            REQUIRE(diff >= 0.0);
            const double quad =
                oracle::integrate([&](double u) { return k->eval(u); }, t1, t2, 1e-12);
            REQUIRE(diff == Catch::Approx(quad).epsilon(1e-8));
        }
    }
}

TEST_CASE("branching factor") {
    CHECK(Kernel(ExpKernel{0.6, 0.8}).branching_factor() == Catch::Approx(0.6));
    CHECK(Kernel(ExpKernel{0.95, 1.15}).branching_factor() == Catch::Approx(0.95));
    CHECK(Kernel(PowerLawKernel{0.5, 1.0, 1.0}).branching_factor() == Catch::Approx(0.5));

    // n* = lim_{t -> inf} Phi(t)
    CHECK(std::abs(Kernel(ExpKernel{0.6, 0.8}).branching_factor() -
                   Kernel(ExpKernel{0.6, 0.8}).integral(1e3)) < 1e-6);
    CHECK(std::abs(Kernel(PowerLawKernel{0.5, 1.0, 1.0}).branching_factor() -
                   Kernel(PowerLawKernel{0.5, 1.0, 1.0}).integral(1e7)) < 1e-6);

    CHECK(Kernel(ExpKernel{0.6, 0.8}).subcritical());
    CHECK_FALSE(Kernel(ExpKernel{1.2, 0.8}).subcritical());
}

TEST_CASE("invalid kernel parameters are rejected") {
    CHECK_THROWS_AS(Kernel(ExpKernel{-0.1, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(Kernel(ExpKernel{0.5, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(Kernel(PowerLawKernel{0.5, 0.0, 1.0}), std::invalid_argument);
    // near-zero exponents degenerate the antiderivative
    CHECK_THROWS_AS(Kernel(PowerLawKernel{0.5, 1.0, 1e-9}), std::invalid_argument);
    CHECK_NOTHROW(Kernel(ExpKernel{0.0, 1.0})); // kappa = 0 switches excitation off
}

TEST_CASE("n-fold self-convolution of the exponential kernel") {
    const double kappa = 0.6, theta = 0.8;
    const Kernel k(ExpKernel{kappa, theta});

    const double h = 0.001, tmax = 3.5;
    const std::size_t n_pts = std::size_t(tmax / h) + 1;
    std::vector<double> phi(n_pts);
    for (std::size_t i = 0; i < n_pts; ++i)
        phi[i] = k.eval(double(i) * h + 1e-300); // eval(0) is 0 by causality; use the limit
    phi[0] = kappa * theta;

    for (int n = 1; n <= 5; ++n) {
        const std::vector<double> conv = oracle::self_convolve(phi, h, n);
        for (double t : {0.5, 1.0, 2.0, 3.0}) {
            const std::size_t i = std::size_t(t / h);
            double fact = 1.0;
            for (int j = 2; j < n; ++j)
                fact *= double(j);
            const double analytic = std::pow(kappa * theta, double(n)) *
                                    std::exp(-theta * t) * std::pow(t, double(n - 1)) / fact;
            REQUIRE(conv[i] == Catch::Approx(analytic).epsilon(1e-4));
        }
    }
}

TEST_CASE("offspring quantile inverts the normalized antiderivative") {
    icpp::SplitMix64 rng(3);
    for (const Kernel& k :
         {Kernel(ExpKernel{0.6, 0.8}), Kernel(PowerLawKernel{0.5, 1.3, 0.7})}) {
        for (int rep = 0; rep < 30; ++rep) {
            const double u = rng.uniform();
            const double t = k.offspring_quantile(u);
            REQUIRE(k.integral(t) / k.branching_factor() == Catch::Approx(u).margin(1e-10));
        }
    }
}
