#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "rcindex/errors.hpp"
#include "rcindex/matrix.hpp"

namespace rcindex {

inline std::string column_label(const std::vector<std::string>& names, std::size_t j) {
    return j < names.size() ? names[j] : "column " + std::to_string(j);
}

// Column-standardize to mean 0, sample sd 1 (n-1 denominator).
inline Matrix zscore(const Matrix& m, const std::vector<std::string>& names = {}) {
    if (m.rows() < 2) throw validation_error("zscore needs at least 2 rows");
    Matrix z(m.rows(), m.cols());
    const double n = static_cast<double>(m.rows());
    for (std::size_t j = 0; j < m.cols(); ++j) {
        double mean = 0.0;
        for (std::size_t i = 0; i < m.rows(); ++i) mean += m(i, j);
        mean /= n;
        double ss = 0.0;
        for (std::size_t i = 0; i < m.rows(); ++i) {
            const double d = m(i, j) - mean;
            ss += d * d;
        }
        const double sd = std::sqrt(ss / (n - 1.0));
        if (sd <= 0.0)
            throw numeric_error("constant column: " + column_label(names, j));
        for (std::size_t i = 0; i < m.rows(); ++i) z(i, j) = (m(i, j) - mean) / sd;
    }
    return z;
}

struct CorrelationMatrix {
    std::vector<std::string> variables;
    Matrix values;  // p x p, symmetric, unit diagonal

    std::size_t size() const { return values.rows(); }
};

inline CorrelationMatrix pearson_corr(const Matrix& m,
                                      const std::vector<std::string>& names = {}) {
    if (m.rows() < 2) throw validation_error("pearson_corr needs at least 2 rows");
    const std::size_t n = m.rows(), p = m.cols();
    // center columns, keep column sum of squares
    Matrix c(n, p);
    std::vector<double> ss(p, 0.0);
    for (std::size_t j = 0; j < p; ++j) {
        double mean = 0.0;
        for (std::size_t i = 0; i < n; ++i) mean += m(i, j);
        mean /= static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double d = m(i, j) - mean;
            c(i, j) = d;
            ss[j] += d * d;
        }
        if (ss[j] <= 0.0)
            throw numeric_error("constant column: " + column_label(names, j));
    }
    CorrelationMatrix r;
    r.variables = names;
    if (r.variables.empty())
        for (std::size_t j = 0; j < p; ++j) r.variables.push_back("v" + std::to_string(j + 1));
    r.values = Matrix(p, p);
    for (std::size_t j = 0; j < p; ++j) {
        r.values(j, j) = 1.0;
        for (std::size_t k = j + 1; k < p; ++k) {
            double dot = 0.0;
            for (std::size_t i = 0; i < n; ++i) dot += c(i, j) * c(i, k);
            double rho = dot / std::sqrt(ss[j] * ss[k]);
            rho = std::clamp(rho, -1.0, 1.0);
            r.values(j, k) = rho;
            r.values(k, j) = rho;
        }
    }
    return r;
}

struct EigenSystem {
    std::vector<double> eigenvalues;  // descending
    Matrix eigenvectors;              // columns, orthonormal
};

// Cyclic Jacobi eigendecomposition for symmetric matrices. p stays tiny
// (14 in the pipeline), so O(p^3) sweeps are irrelevant; what matters is
// the deterministic sweep order and sign convention so golden files are
// stable across runs and platforms.
inline EigenSystem sym_eigen(const Matrix& input) {
    const std::size_t p = input.rows();
    if (p == 0 || input.cols() != p)
        throw validation_error("sym_eigen needs a square matrix");
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = i + 1; j < p; ++j)
            if (std::fabs(input(i, j) - input(j, i)) > 1e-10)
                throw validation_error("sym_eigen: input not symmetric at (" +
                                       std::to_string(i) + "," + std::to_string(j) + ")");

    Matrix a = input;
    Matrix v = Matrix::identity(p);
    double norm = 0.0;
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j < p; ++j) norm += a(i, j) * a(i, j);
    norm = std::sqrt(norm);
    const double stop = std::max(1e-300, 1e-15 * std::max(1.0, norm));

    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < p; ++i)
            for (std::size_t j = i + 1; j < p; ++j) off += a(i, j) * a(i, j);
        if (std::sqrt(2.0 * off) <= stop) break;

        for (std::size_t q = 1; q < p; ++q) {
            for (std::size_t pp = 0; pp < q; ++pp) {
                const double apq = a(pp, q);
                if (std::fabs(apq) <= 1e-300) continue;
                const double tau = (a(q, q) - a(pp, pp)) / (2.0 * apq);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                                 (std::fabs(tau) + std::sqrt(1.0 + tau * tau));
                const double cos_t = 1.0 / std::sqrt(1.0 + t * t);
                const double sin_t = t * cos_t;
                for (std::size_t k = 0; k < p; ++k) {
                    const double akp = a(k, pp), akq = a(k, q);
                    a(k, pp) = cos_t * akp - sin_t * akq;
                    a(k, q) = sin_t * akp + cos_t * akq;
                }
                for (std::size_t k = 0; k < p; ++k) {
                    const double apk = a(pp, k), aqk = a(q, k);
                    a(pp, k) = cos_t * apk - sin_t * aqk;
                    a(q, k) = sin_t * apk + cos_t * aqk;
                }
                for (std::size_t k = 0; k < p; ++k) {
                    const double vkp = v(k, pp), vkq = v(k, q);
                    v(k, pp) = cos_t * vkp - sin_t * vkq;
                    v(k, q) = sin_t * vkp + cos_t * vkq;
                }
            }
        }
    }

    // sort descending by eigenvalue; stable so exact ties keep index order
    std::vector<std::size_t> order(p);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<double> diag(p);
    for (std::size_t i = 0; i < p; ++i) diag[i] = a(i, i);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return diag[x] > diag[y]; });

    EigenSystem es;
    es.eigenvalues.resize(p);
    es.eigenvectors = Matrix(p, p);
    for (std::size_t c = 0; c < p; ++c) {
        const std::size_t src = order[c];
        es.eigenvalues[c] = diag[src];
        // sign convention: largest-magnitude component positive
        std::size_t imax = 0;
        double vmax = 0.0;
        for (std::size_t i = 0; i < p; ++i) {
            const double m = std::fabs(v(i, src));
            if (m > vmax) {
                vmax = m;
                imax = i;
            }
        }
        const double sign = v(imax, src) < 0.0 ? -1.0 : 1.0;
        for (std::size_t i = 0; i < p; ++i) es.eigenvectors(i, c) = sign * v(i, src);
    }
    return es;
}

// Inverse of a symmetric positive definite matrix via eigendecomposition.
inline Matrix invert_spd(const Matrix& m) {
    const EigenSystem es = sym_eigen(m);
    const std::size_t p = m.rows();
    const double lambda_min = es.eigenvalues.back();
    if (lambda_min <= 1e-10)
        throw numeric_error("matrix not positive definite: smallest eigenvalue " +
                            std::to_string(lambda_min));
    Matrix inv(p, p);
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = i; j < p; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < p; ++k)
                s += es.eigenvectors(i, k) * es.eigenvectors(j, k) / es.eigenvalues[k];
            inv(i, j) = s;
            inv(j, i) = s;
        }
    return inv;
}

// Squared multiple correlations: smc_j = 1 - 1/(R^-1)_jj.
inline std::vector<double> smc(const Matrix& correlation) {
    const Matrix inv = invert_spd(correlation);
    std::vector<double> out(correlation.rows());
    for (std::size_t j = 0; j < correlation.rows(); ++j) out[j] = 1.0 - 1.0 / inv(j, j);
    return out;
}

inline std::vector<double> smc(const CorrelationMatrix& r) { return smc(r.values); }

}  // namespace rcindex
