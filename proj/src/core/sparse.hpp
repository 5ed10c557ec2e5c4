#pragma once

#include "errors.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace ifrac {

struct Triplet {
    std::size_t row = 0;
    std::size_t col = 0;
    double value = 0.0;
};

/// Square compressed-row matrix with sorted, unique column indices per row.
class SparseMatrix {
public:
    SparseMatrix() = default;

    /// Duplicate (row, col) entries are summed.
    static SparseMatrix from_triplets(std::size_t n, std::span<const Triplet> triplets);

    [[nodiscard]] std::size_t size() const { return n_; }
    [[nodiscard]] std::size_t nonzeros() const { return values_.size(); }
    [[nodiscard]] std::span<const std::size_t> row_offsets() const { return row_offsets_; }
    [[nodiscard]] std::span<const std::size_t> column_indices() const { return column_indices_; }
    [[nodiscard]] std::span<const double> values() const { return values_; }
    [[nodiscard]] std::span<double> values() { return values_; }
    /// Rounding remainders of the summed entries: value + low is the entry to
    /// extended precision. Used for residuals and fluxes, not inside CG.
    [[nodiscard]] std::span<const double> low_values() const { return low_; }
    [[nodiscard]] std::span<double> low_values() { return low_; }

    /// Row i times x, accumulated in extended precision with the remainders.
    template <class T>
    [[nodiscard]] long double row_product(std::size_t i, std::span<const T> x) const
    {
        long double sum = 0.0L;
        for (std::size_t k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k)
            sum += (static_cast<long double>(values_[k]) + low_[k]) * x[column_indices_[k]];
        return sum;
    }

    /// Entry (i, j), zero when outside the pattern.
    [[nodiscard]] double at(std::size_t i, std::size_t j) const;
    [[nodiscard]] std::vector<double> diagonal() const;
    [[nodiscard]] double max_abs() const;

    void multiply(std::span<const double> x, std::span<double> y) const;
    [[nodiscard]] std::vector<double> multiply(std::span<const double> x) const;

private:
    std::size_t n_ = 0;
    std::vector<std::size_t> row_offsets_{0};
    std::vector<std::size_t> column_indices_;
    std::vector<double> values_;
    std::vector<double> low_;
};

/// max |A_ij - A_ji| over the pattern.
double symmetry_defect(const SparseMatrix& a);

struct SolveReport {
    std::size_t iterations = 0;
    double relative_residual = 0.0; // ||b - A x|| / ||b||, recomputed from x
    bool converged = false;
    std::string method;
    std::vector<double> preconditioned_residuals; // sqrt(r.z) per CG iteration, not monotone in general
};

class SolverError : public Error {
public:
    SolverError(const std::string& what, SolveReport report, std::vector<double> iterate = {})
        : Error(what), report_(std::move(report)), iterate_(std::move(iterate))
    {
    }
    [[nodiscard]] const SolveReport& report() const { return report_; }
    /// Last iterate when the failure came from an iterative solve.
    [[nodiscard]] const std::vector<double>& iterate() const { return iterate_; }

private:
    SolveReport report_;
    std::vector<double> iterate_;
};

struct Solution {
    std::vector<double> x;
    SolveReport report;
};

enum class SolverMethod { automatic, cg, dense };

struct SolverOptions {
    double tol = 1e-10;
    std::size_t max_iter = 0; // 0 selects 10 n
    SolverMethod method = SolverMethod::automatic;
    std::size_t dense_threshold = 500;
};

/// Jacobi-preconditioned conjugate gradients. Throws SolverError carrying the
/// report when the true relative residual does not reach tol in max_iter.
Solution cg_solve(const SparseMatrix& a, std::span<const double> b, double tol, std::size_t max_iter);

/// Dense Cholesky factorization of a; throws NumericalError when a is not SPD.
std::vector<double> dense_cholesky_solve(const SparseMatrix& a, std::span<const double> b);

/// Dense Cholesky up to dense_threshold unknowns, CG beyond (or as requested).
Solution solve_spd(const SparseMatrix& a, std::span<const double> b, const SolverOptions& options = {});

double norm2(std::span<const double> v);
double relative_residual(const SparseMatrix& a, std::span<const double> x, std::span<const double> b);

} // namespace ifrac
