#include <doctest.h>

#include <cmath>

#include "mbrlab/special_functions.hpp"

using namespace mbrlab;

namespace {

// Adaptive Simpson quadrature of the beta integrand, used as the
// independent oracle for the continued-fraction implementation.
double beta_integrand(double t, double a, double b) {
    return std::pow(t, a - 1.0) * std::pow(1.0 - t, b - 1.0);
}

double simpson(double (*f)(double, double, double), double lo, double hi, double a, double b) {
    const int steps = 20000;
    double acc = 0.0;
    const double h = (hi - lo) / steps;
    for (int i = 0; i < steps; ++i) {
        double x0 = lo + i * h, x2 = x0 + h, x1 = 0.5 * (x0 + x2);
        acc += (h / 6.0) * (f(x0, a, b) + 4.0 * f(x1, a, b) + f(x2, a, b));
    }
    return acc;
}

double reg_beta_quadrature(double x, double a, double b) {
    // tiny inset sidesteps the integrable endpoint singularities
    const double eps = 1e-9;
    double num = simpson(beta_integrand, eps, x, a, b);
    double den = simpson(beta_integrand, eps, 1.0 - eps, a, b);
    return num / den;
}

} // namespace

TEST_CASE("uniform case I(x;1,1) = x") {
    for (double x : {0.0, 0.25, 1.0})
        CHECK(reg_inc_beta(x, 1, 1) == doctest::Approx(x).epsilon(1e-13));
}

TEST_CASE("symmetry I(1/2; a, a) = 1/2") {
    for (double a : {2.0, 7.5})
        CHECK(reg_inc_beta(0.5, a, a) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("continued fraction matches quadrature") {
    CHECK(reg_inc_beta(0.3, 2, 5) ==
          doctest::Approx(reg_beta_quadrature(0.3, 2, 5)).epsilon(1e-10));
    CHECK(reg_inc_beta(0.7, 3.5, 1.25) ==
          doctest::Approx(reg_beta_quadrature(0.7, 3.5, 1.25)).epsilon(1e-9));
}

TEST_CASE("complement identity") {
    for (double x : {0.1, 0.4, 0.9})
        for (double a : {1.5, 12.0})
            for (double b : {0.8, 30.0})
                CHECK(reg_inc_beta(x, a, b) + reg_inc_beta(1.0 - x, b, a) ==
                      doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("monotone nondecreasing in x") {
    double prev = 0.0;
    for (int i = 0; i <= 100; ++i) {
        double v = reg_inc_beta(i / 100.0, 1000.0, 8.0);
        CHECK(v >= prev - 1e-15);
        prev = v;
    }
}

TEST_CASE("domain violations raise") {
    CHECK_THROWS(reg_inc_beta(-0.1, 1, 1));
    CHECK_THROWS(reg_inc_beta(1.1, 1, 1));
    CHECK_THROWS(reg_inc_beta(0.5, 0.0, 1));
    CHECK_THROWS(reg_inc_beta(0.5, 1, -2.0));
}

TEST_CASE("normal quantile inverts the CDF") {
    for (double p : {0.025, 0.2, 0.5, 0.8, 0.975, 0.999}) {
        double z = normal_quantile(p);
        CHECK(normal_cdf(z) == doctest::Approx(p).epsilon(1e-12));
    }
    CHECK(normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-10));
}

TEST_CASE("log binomial against exact values") {
    CHECK(log_binomial(5, 2) == doctest::Approx(std::log(10.0)).epsilon(1e-12));
    CHECK(log_binomial(16, 8) == doctest::Approx(std::log(12870.0)).epsilon(1e-12));
}
