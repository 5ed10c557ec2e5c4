#include "sparse.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

namespace ifrac {

namespace {

std::string scientific(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

} // namespace

SparseMatrix SparseMatrix::from_triplets(std::size_t n, std::span<const Triplet> triplets)
{
    SparseMatrix m;
    m.n_ = n;
    std::vector<std::size_t> counts(n + 1, 0);
    for (const auto& t : triplets) {
        if (t.row >= n || t.col >= n) throw ArgumentError("triplet index out of range");
        ++counts[t.row + 1];
    }
    std::partial_sum(counts.begin(), counts.end(), counts.begin());
    std::vector<std::size_t> order(triplets.size());
    {
        std::vector<std::size_t> cursor(counts.begin(), counts.end() - 1);
        for (std::size_t k = 0; k < triplets.size(); ++k) order[cursor[triplets[k].row]++] = k;
    }

    m.row_offsets_.assign(n + 1, 0);
    m.column_indices_.reserve(triplets.size());
    m.values_.reserve(triplets.size());
    std::vector<long double> sums;
    sums.reserve(triplets.size());
    std::vector<std::pair<std::size_t, double>> row;
    for (std::size_t i = 0; i < n; ++i) {
        row.clear();
        for (std::size_t k = counts[i]; k < counts[i + 1]; ++k) {
            const auto& t = triplets[order[k]];
            row.emplace_back(t.col, t.value);
        }
        std::stable_sort(row.begin(), row.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        for (const auto& [col, value] : row) {
            if (!m.column_indices_.empty() && m.column_indices_.size() > m.row_offsets_[i] &&
                m.column_indices_.back() == col) {
                sums.back() += value;
            } else {
                m.column_indices_.push_back(col);
                sums.push_back(value);
            }
        }
        m.row_offsets_[i + 1] = m.column_indices_.size();
    }
    m.values_.resize(sums.size());
    m.low_.resize(sums.size());
    for (std::size_t k = 0; k < sums.size(); ++k) {
        m.values_[k] = static_cast<double>(sums[k]);
        m.low_[k] = static_cast<double>(sums[k] - m.values_[k]);
    }
    return m;
}

double SparseMatrix::at(std::size_t i, std::size_t j) const
{
    const auto begin = column_indices_.begin() + static_cast<std::ptrdiff_t>(row_offsets_[i]);
    const auto end = column_indices_.begin() + static_cast<std::ptrdiff_t>(row_offsets_[i + 1]);
    const auto it = std::lower_bound(begin, end, j);
    if (it == end || *it != j) return 0.0;
    return values_[static_cast<std::size_t>(it - column_indices_.begin())];
}

std::vector<double> SparseMatrix::diagonal() const
{
    std::vector<double> d(n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) d[i] = at(i, i);
    return d;
}

double SparseMatrix::max_abs() const
{
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

void SparseMatrix::multiply(std::span<const double> x, std::span<double> y) const
{
    for (std::size_t i = 0; i < n_; ++i) {
        double sum = 0.0;
        for (std::size_t k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) sum += values_[k] * x[column_indices_[k]];
        y[i] = sum;
    }
}

std::vector<double> SparseMatrix::multiply(std::span<const double> x) const
{
    std::vector<double> y(n_);
    multiply(x, y);
    return y;
}

double symmetry_defect(const SparseMatrix& a)
{
    double defect = 0.0;
    const auto offsets = a.row_offsets();
    const auto cols = a.column_indices();
    const auto vals = a.values();
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t k = offsets[i]; k < offsets[i + 1]; ++k)
            defect = std::max(defect, std::abs(vals[k] - a.at(cols[k], i)));
    }
    return defect;
}

double norm2(std::span<const double> v)
{
    long double sum = 0.0L;
    for (double x : v) sum += static_cast<long double>(x) * x;
    return static_cast<double>(std::sqrt(sum));
}

double relative_residual(const SparseMatrix& a, std::span<const double> x, std::span<const double> b)
{
    long double res = 0.0L;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const long double r = b[i] - a.row_product(i, x);
        res += r * r;
    }
    const double bn = norm2(b);
    const double rn = static_cast<double>(std::sqrt(res));
    return bn > 0.0 ? rn / bn : rn;
}

namespace {

double dot(std::span<const double> a, std::span<const double> b)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

void check_finite(std::span<const double> v, const char* what)
{
    for (double x : v) {
        if (!std::isfinite(x)) throw NumericalError(std::string("non-finite value in ") + what);
    }
}

} // namespace

Solution cg_solve(const SparseMatrix& a, std::span<const double> b, double tol, std::size_t max_iter)
{
    const std::size_t n = a.size();
    if (b.size() != n) throw ArgumentError("right-hand side size does not match the matrix");
    if (!(tol > 0.0 && tol < 1.0)) throw ArgumentError("CG tolerance must lie in (0, 1)");
    check_finite(a.values(), "matrix");
    check_finite(b, "right-hand side");
    if (max_iter == 0) max_iter = 10 * n;

    Solution sol;
    sol.report.method = "cg";
    sol.x.assign(n, 0.0);
    const double bnorm = norm2(b);
    if (bnorm == 0.0) {
        sol.report.converged = true;
        return sol;
    }

    std::vector<double> inv_diag = a.diagonal();
    for (double& d : inv_diag) {
        if (!(d > 0.0)) throw NumericalError("CG requires a positive diagonal");
        d = 1.0 / d;
    }

    // The iterate is accumulated in extended precision: with Robin penalties
    // near 1e8 the residual of a double iterate sits just below 1e-10.
    std::vector<long double> xl(n, 0.0L);
    std::vector<double> r(n), d(n), z(n), p(n), q(n);
    const auto true_residual = [&] {
        for (std::size_t i = 0; i < n; ++i) r[i] = static_cast<double>(b[i] - a.row_product<long double>(i, xl));
    };
    const auto round_iterate = [&] {
        for (std::size_t i = 0; i < n; ++i) sol.x[i] = static_cast<double>(xl[i]);
    };

    std::size_t it = 0;
    // The recurrence residual drifts from b - A x; each restart solves for a
    // correction against the recomputed residual.
    // Iterating past tol removes smooth error components that a residual
    // dominated by the penalty rows would hide; the boundary fluxes need them.
    double previous = bnorm;
    for (int restart = 0; restart < 30 && it < max_iter; ++restart) {
        true_residual();
        const double rnorm = norm2(r);
        if (rnorm <= 1e-3 * tol * bnorm || (restart > 0 && rnorm > 0.5 * previous)) break;
        previous = rnorm;
        const double target = std::max(1e-4 * tol * bnorm, 1e-8 * rnorm);
        std::fill(d.begin(), d.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
        p = z;
        double rz = dot(r, z);
        while (it < max_iter) {
            a.multiply(p, q);
            const double pq = dot(p, q);
            if (!(pq > 0.0)) throw NumericalError("CG breakdown: matrix is not positive definite");
            const double alpha = rz / pq;
            for (std::size_t i = 0; i < n; ++i) {
                d[i] += alpha * p[i];
                r[i] -= alpha * q[i];
            }
            ++it;
            for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
            const double rz_next = dot(r, z);
            sol.report.preconditioned_residuals.push_back(std::sqrt(std::max(rz_next, 0.0)));
            if (norm2(r) <= target) break;
            const double beta = rz_next / rz;
            rz = rz_next;
            for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
        }
        for (std::size_t i = 0; i < n; ++i) xl[i] += d[i];
    }
    round_iterate();
    check_finite(sol.x, "CG iterate");
    sol.report.iterations = it;
    sol.report.relative_residual = relative_residual(a, sol.x, b);
    sol.report.converged = sol.report.relative_residual <= tol;
    if (!sol.report.converged) {
        throw SolverError("CG did not converge: relative residual " + scientific(sol.report.relative_residual) +
                              " after " + std::to_string(it) + " iterations",
                          sol.report, sol.x);
    }
    return sol;
}

std::vector<double> dense_cholesky_solve(const SparseMatrix& a, std::span<const double> b)
{
    const std::size_t n = a.size();
    if (b.size() != n) throw ArgumentError("right-hand side size does not match the matrix");
    std::vector<double> l(n * n, 0.0);
    const auto offsets = a.row_offsets();
    const auto cols = a.column_indices();
    const auto vals = a.values();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = offsets[i]; k < offsets[i + 1]; ++k) l[i * n + cols[k]] = vals[k];
    }
    for (std::size_t j = 0; j < n; ++j) {
        double d = l[j * n + j];
        for (std::size_t k = 0; k < j; ++k) d -= l[j * n + k] * l[j * n + k];
        if (!(d > 0.0)) throw NumericalError("matrix is not positive definite");
        const double djj = std::sqrt(d);
        l[j * n + j] = djj;
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = l[i * n + j];
            for (std::size_t k = 0; k < j; ++k) s -= l[i * n + k] * l[j * n + k];
            l[i * n + j] = s / djj;
        }
    }
    std::vector<double> x(b.begin(), b.end());
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < i; ++k) x[i] -= l[i * n + k] * x[k];
        x[i] /= l[i * n + i];
    }
    for (std::size_t i = n; i-- > 0;) {
        for (std::size_t k = i + 1; k < n; ++k) x[i] -= l[k * n + i] * x[k];
        x[i] /= l[i * n + i];
    }
    return x;
}

Solution solve_spd(const SparseMatrix& a, std::span<const double> b, const SolverOptions& options)
{
    const bool dense = options.method == SolverMethod::dense ||
                       (options.method == SolverMethod::automatic && a.size() <= options.dense_threshold);
    if (!dense) return cg_solve(a, b, options.tol, options.max_iter);
    check_finite(a.values(), "matrix");
    check_finite(b, "right-hand side");
    Solution sol;
    sol.report.method = "dense-cholesky";
    sol.x = dense_cholesky_solve(a, b);
    // A few steps of iterative refinement against the extended residual.
    std::vector<long double> xl(sol.x.begin(), sol.x.end());
    std::vector<double> r(a.size());
    for (int step = 0; step < 3; ++step) {
        for (std::size_t i = 0; i < a.size(); ++i) r[i] = static_cast<double>(b[i] - a.row_product<long double>(i, xl));
        const auto d = dense_cholesky_solve(a, r);
        for (std::size_t i = 0; i < a.size(); ++i) xl[i] += d[i];
    }
    for (std::size_t i = 0; i < a.size(); ++i) sol.x[i] = static_cast<double>(xl[i]);
    sol.report.relative_residual = relative_residual(a, sol.x, b);
    sol.report.converged = sol.report.relative_residual <= options.tol;
    if (!sol.report.converged)
        throw SolverError("dense solve residual " + scientific(sol.report.relative_residual) +
                              " exceeds the tolerance",
                          sol.report);
    return sol;
}

} // namespace ifrac
