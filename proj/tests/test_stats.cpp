#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "rcindex/matrix.hpp"
#include "rcindex/prob.hpp"
#include "rcindex/rng.hpp"
#include "rcindex/stats.hpp"

using namespace rcindex;

namespace {

Matrix random_symmetric(std::size_t p, Rng& rng) {
    Matrix m(p, p);
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = i; j < p; ++j) {
            const double x = rng.normal();
            m(i, j) = x;
            m(j, i) = x;
        }
    return m;
}

Matrix random_spd(std::size_t p, Rng& rng) {
    // A^T A + p*I is comfortably positive definite
    Matrix a(p, p);
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j < p; ++j) a(i, j) = rng.normal();
    Matrix m = multiply(transpose(a), a);
    for (std::size_t i = 0; i < p; ++i) m(i, i) += static_cast<double>(p);
    return m;
}

}  // namespace

TEST_CASE("zscore symmetric 3-point column", "[stats]") {
    Matrix m = {{1.0}, {2.0}, {3.0}};
    Matrix z = zscore(m);
    CHECK(z(0, 0) == Catch::Approx(-1.0).margin(1e-12));
    CHECK(z(1, 0) == Catch::Approx(0.0).margin(1e-12));
    CHECK(z(2, 0) == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("zscore is idempotent", "[stats]") {
    Matrix m = {{1.0, 4.0}, {2.0, -1.0}, {5.0, 0.5}, {-3.0, 2.0}};
    Matrix z1 = zscore(m);
    Matrix z2 = zscore(z1);
    CHECK(max_abs_diff(z1, z2) < 1e-12);
}

TEST_CASE("zscore two-level column, hand-computed", "[stats]") {
    // {0,0,10,10}: mean 5, sample sd sqrt(100/3) = 5.7735..., z = +-0.866025...
    Matrix m = {{0.0}, {0.0}, {10.0}, {10.0}};
    Matrix z = zscore(m);
    const double expect = 0.86602540378443865;
    CHECK(z(0, 0) == Catch::Approx(-expect).epsilon(1e-12));
    CHECK(z(3, 0) == Catch::Approx(expect).epsilon(1e-12));
}

TEST_CASE("zscore rejects constant column by name", "[stats]") {
    Matrix m = {{1.0, 2.0}, {1.0, 3.0}, {1.0, 4.0}};
    try {
        zscore(m, {"flat", "ok"});
        FAIL("expected numeric_error");
    } catch (const numeric_error& e) {
        CHECK(std::string(e.what()).find("flat") != std::string::npos);
    }
}

TEST_CASE("zscored columns have mean 0 and sd 1", "[stats]") {
    Rng rng(11);
    Matrix m(40, 5);
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = 3.0 * rng.normal() + 1.5;
    Matrix z = zscore(m);
    for (std::size_t j = 0; j < z.cols(); ++j) {
        auto col = z.column(j);
        CHECK(std::fabs(mean_of(col)) < 1e-12);
        CHECK(sample_sd(col) == Catch::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("pearson_corr perfect correlation and anticorrelation", "[stats]") {
    Matrix m = {{1.0, 1.0, -1.0}, {2.0, 2.0, -2.0}, {4.0, 4.0, -4.0}};
    CorrelationMatrix r = pearson_corr(m);
    CHECK(r.values(0, 1) == Catch::Approx(1.0).margin(1e-14));
    CHECK(r.values(0, 2) == Catch::Approx(-1.0).margin(1e-14));
    CHECK(r.values(0, 0) == 1.0);
}

TEST_CASE("pearson_corr 4-point fixture equals 0.8", "[stats]") {
    // hand computation: centered dot 4, column ss 5 and 5 -> 4/5
    Matrix m = {{1.0, 1.0}, {2.0, 3.0}, {3.0, 2.0}, {4.0, 4.0}};
    CorrelationMatrix r = pearson_corr(m);
    CHECK(r.values(0, 1) == Catch::Approx(0.8).epsilon(1e-14));
}

TEST_CASE("pearson_corr invariant under positive affine column transforms", "[stats]") {
    Rng rng(23);
    Matrix m(30, 4);
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = rng.normal();
    Matrix t = m;
    const double scales[4] = {2.0, 0.01, 17.5, 3.0};
    const double shifts[4] = {-4.0, 5.0, 0.25, -0.5};
    for (std::size_t i = 0; i < t.rows(); ++i)
        for (std::size_t j = 0; j < t.cols(); ++j) t(i, j) = scales[j] * t(i, j) + shifts[j];
    CorrelationMatrix r1 = pearson_corr(m);
    CorrelationMatrix r2 = pearson_corr(t);
    CHECK(max_abs_diff(r1.values, r2.values) < 1e-12);
}

TEST_CASE("pearson_corr invariants: symmetry, unit diagonal, PSD", "[stats]") {
    Rng rng(5);
    Matrix m(25, 6);
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = rng.normal();
    CorrelationMatrix r = pearson_corr(m);
    CHECK(max_abs_diff(r.values, transpose(r.values)) < 1e-12);
    EigenSystem es = sym_eigen(r.values);
    CHECK(es.eigenvalues.back() > -1e-10);
    for (double v : r.values.data()) CHECK(std::fabs(v) <= 1.0);
}

TEST_CASE("sym_eigen identity", "[stats]") {
    EigenSystem es = sym_eigen(Matrix::identity(3));
    for (double l : es.eigenvalues) CHECK(l == Catch::Approx(1.0).margin(1e-14));
}

TEST_CASE("sym_eigen analytic 2x2", "[stats]") {
    Matrix m = {{2.0, 1.0}, {1.0, 2.0}};
    EigenSystem es = sym_eigen(m);
    CHECK(es.eigenvalues[0] == Catch::Approx(3.0).epsilon(1e-12));
    CHECK(es.eigenvalues[1] == Catch::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("sym_eigen reconstruction, orthonormality, trace", "[stats]") {
    Rng rng(42);
    Matrix m = random_symmetric(8, rng);
    EigenSystem es = sym_eigen(m);

    // V diag(l) V^T == m
    Matrix vl(8, 8);
    for (std::size_t i = 0; i < 8; ++i)
        for (std::size_t j = 0; j < 8; ++j) vl(i, j) = es.eigenvectors(i, j) * es.eigenvalues[j];
    Matrix rec = multiply(vl, transpose(es.eigenvectors));
    CHECK(max_abs_diff(rec, m) < 1e-8);

    Matrix vtv = multiply(transpose(es.eigenvectors), es.eigenvectors);
    CHECK(max_abs_diff(vtv, Matrix::identity(8)) < 1e-10);

    double trace = 0.0, sum = 0.0;
    for (std::size_t i = 0; i < 8; ++i) trace += m(i, i);
    for (double l : es.eigenvalues) sum += l;
    CHECK(sum == Catch::Approx(trace).margin(1e-10));

    for (std::size_t i = 1; i < es.eigenvalues.size(); ++i)
        CHECK(es.eigenvalues[i - 1] >= es.eigenvalues[i]);
}

TEST_CASE("sym_eigen deterministic across repeated runs", "[stats]") {
    Rng rng(7);
    Matrix m = random_symmetric(6, rng);
    EigenSystem a = sym_eigen(m);
    EigenSystem b = sym_eigen(m);
    CHECK(a.eigenvalues == b.eigenvalues);
    CHECK(a.eigenvectors.data() == b.eigenvectors.data());
    // sign convention: largest-magnitude component of each column positive
    for (std::size_t c = 0; c < 6; ++c) {
        double vmax = 0.0, signed_val = 0.0;
        for (std::size_t i = 0; i < 6; ++i) {
            if (std::fabs(a.eigenvectors(i, c)) > vmax) {
                vmax = std::fabs(a.eigenvectors(i, c));
                signed_val = a.eigenvectors(i, c);
            }
        }
        CHECK(signed_val > 0.0);
    }
}

TEST_CASE("sym_eigen rejects asymmetric input", "[stats]") {
    Matrix m = {{1.0, 0.5}, {0.2, 1.0}};
    CHECK_THROWS_AS(sym_eigen(m), validation_error);
}

TEST_CASE("invert_spd identity and diagonal", "[stats]") {
    Matrix inv = invert_spd(Matrix::identity(3));
    CHECK(max_abs_diff(inv, Matrix::identity(3)) < 1e-12);

    Matrix d = {{2.0, 0.0}, {0.0, 4.0}};
    Matrix di = invert_spd(d);
    CHECK(di(0, 0) == Catch::Approx(0.5).epsilon(1e-12));
    CHECK(di(1, 1) == Catch::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("invert_spd: A * inv(A) = I and double inverse round-trips", "[stats]") {
    Rng rng(99);
    Matrix m = random_spd(7, rng);
    Matrix inv = invert_spd(m);
    CHECK(max_abs_diff(multiply(m, inv), Matrix::identity(7)) < 1e-8);
    Matrix back = invert_spd(inv);
    CHECK(max_abs_diff(back, m) < 1e-7);
}

TEST_CASE("invert_spd rejects rank-deficient correlation", "[stats]") {
    // duplicated variable -> singular correlation matrix
    Matrix m = {{1.0, 1.0, 2.0}, {2.0, 2.0, 1.0}, {3.0, 3.0, 5.0}, {5.0, 5.0, 4.0}};
    CorrelationMatrix r = pearson_corr(m);
    try {
        invert_spd(r.values);
        FAIL("expected numeric_error");
    } catch (const numeric_error& e) {
        CHECK(std::string(e.what()).find("eigenvalue") != std::string::npos);
    }
}

TEST_CASE("smc closed forms", "[stats]") {
    // identity: no shared variance
    for (double v : smc(Matrix::identity(4))) CHECK(v == Catch::Approx(0.0).margin(1e-12));

    // p=2: smc = r^2
    Matrix r2 = {{1.0, 0.6}, {0.6, 1.0}};
    for (double v : smc(r2)) CHECK(v == Catch::Approx(0.36).epsilon(1e-12));

    // 3x3 equicorrelation r=0.5: smc = 1/3 (analytic inverse)
    Matrix r3 = {{1.0, 0.5, 0.5}, {0.5, 1.0, 0.5}, {0.5, 0.5, 1.0}};
    for (double v : smc(r3)) CHECK(v == Catch::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("smc never decreases when a correlated variable joins", "[stats]") {
    Rng rng(17);
    const std::size_t n = 200;
    // x3 = x1 + noise correlates with the existing block
    Matrix base(n, 3);
    for (std::size_t i = 0; i < n; ++i) {
        const double f = rng.normal();
        base(i, 0) = f + 0.5 * rng.normal();
        base(i, 1) = f + 0.5 * rng.normal();
        base(i, 2) = f + 0.5 * rng.normal();
    }
    Matrix wide(n, 4);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < 3; ++j) wide(i, j) = base(i, j);
        wide(i, 3) = base(i, 0) + 0.3 * rng.normal();
    }
    auto s3 = smc(pearson_corr(base).values);
    auto s4 = smc(pearson_corr(wide).values);
    for (std::size_t j = 0; j < 3; ++j) CHECK(s4[j] >= s3[j] - 1e-10);
}

TEST_CASE("chi-square upper tail matches independent references", "[stats]") {
    // values frozen from an external statistics library
    CHECK(chi_square_upper_tail(3.841458820694124, 1) == Catch::Approx(0.05).epsilon(1e-9));
    CHECK(chi_square_upper_tail(18.307038053275146, 10) == Catch::Approx(0.05).epsilon(1e-9));
    CHECK(chi_square_upper_tail(120.0, 91) == Catch::Approx(0.022514559586598516).epsilon(1e-9));
    CHECK(chi_square_upper_tail(0.5, 3) == Catch::Approx(0.9188914116546758).epsilon(1e-9));
    CHECK(chi_square_upper_tail(0.0, 5) == 1.0);
}

TEST_CASE("chi-square tail agrees with trapezoid quadrature of the density", "[stats]") {
    // independent oracle: integrate the chi2 pdf numerically on [x, x+60]
    const double df = 6.0, x = 9.5;
    auto pdf = [df](double t) {
        return std::exp((0.5 * df - 1.0) * std::log(t) - 0.5 * t -
                        std::lgamma(0.5 * df) - 0.5 * df * std::log(2.0));
    };
    const int steps = 200000;
    const double hi = x + 60.0, h = (hi - x) / steps;
    double integral = 0.5 * (pdf(x) + pdf(hi));
    for (int i = 1; i < steps; ++i) integral += pdf(x + h * i);
    integral *= h;
    CHECK(chi_square_upper_tail(x, df) == Catch::Approx(integral).epsilon(1e-6));
}

TEST_CASE("quantile uses linear interpolation between order statistics", "[stats]") {
    std::vector<double> v(100);
    for (int i = 0; i < 100; ++i) v[i] = i + 1.0;
    CHECK(quantile_sorted(v, 0.025) == Catch::Approx(3.475).epsilon(1e-12));
    CHECK(quantile_sorted(v, 0.975) == Catch::Approx(97.525).epsilon(1e-12));
    CHECK(quantile_sorted(v, 0.5) == Catch::Approx(50.5).epsilon(1e-12));
}
