#pragma once

#include <cstddef>
#include <vector>

#include "wontfix/classifiers.hpp"
#include "wontfix/features.hpp"

namespace wontfix {

struct LinearSvmModel {
    double c = 1.0;
    double tol = 1e-3;
    std::vector<double> alpha;  // one per training document
    std::vector<double> w;      // dense, one per vocabulary term
    double b = 0.0;
    bool converged = true;
    std::size_t passes = 0;

    // score = <w, v> - b; wontfix iff score > 0.
    Prediction predict(const SparseVector& v) const;
};

struct SmoOptions {
    double c = 1.0;
    double tol = 1e-3;
    double step_epsilon = 1e-12;
    std::size_t max_passes = 10000;
    std::uint64_t seed = kDefaultSeed;
    // Records the dual objective after every accepted step. Off by default
    // because it costs one entry per step.
    bool trace_objective = false;
};

struct SmoTrace {
    std::vector<double> objective;  // W(alpha) after each accepted step, starting with W(0) = 0
};

// Platt's SMO for the linear soft-margin dual. Throws SingleClassError.
// When max_passes runs out the current feasible iterate is returned with
// converged = false.
LinearSvmModel train_smo(const TermDocumentMatrix& matrix, const SmoOptions& options = {}, SmoTrace* trace = nullptr);

// Dual objective sum(alpha) - 0.5 * |w|^2 for the model's duals on `matrix`.
double dual_objective(const LinearSvmModel& model, const TermDocumentMatrix& matrix);

// w recomputed from the duals: sum_i alpha_i y_i x_i.
std::vector<double> weights_from_duals(const std::vector<double>& alpha, const TermDocumentMatrix& matrix);

// Training examples with 0 < alpha < C whose |y_i E_i| exceeds tol.
std::vector<std::size_t> nonbound_kkt_violators(const LinearSvmModel& model, const TermDocumentMatrix& matrix);

}  // namespace wontfix
