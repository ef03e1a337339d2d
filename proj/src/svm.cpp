#include "wontfix/svm.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <list>
#include <stdexcept>
#include <unordered_map>

namespace wontfix {

Prediction LinearSvmModel::predict(const SparseVector& v) const {
    Prediction p;
    p.score = dot(v, w) - b;
    p.label = p.score > 0.0 ? IssueClass::wontfix : IssueClass::non_wontfix;
    return p;
}

namespace {

double label_sign(IssueClass c) { return c == IssueClass::wontfix ? 1.0 : -1.0; }

// Kernel rows K(i, .) for the linear kernel. The full Gram matrix is
// precomputed for small problems; larger ones keep an LRU of recent rows.
class KernelRows {
public:
    explicit KernelRows(const std::vector<SparseVector>& x, std::size_t n_terms) : x_(x), scatter_(n_terms, 0.0) {
        const std::size_t n = x.size();
        if (n <= kGramLimit) {
            gram_.assign(n * n, 0.0);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = i; j < n; ++j) gram_[i * n + j] = gram_[j * n + i] = dot(x[i], x[j]);
        }
        capacity_ = std::max<std::size_t>(2, kCacheDoubles / std::max<std::size_t>(1, n));
    }

    const double* row(std::size_t i) {
        const std::size_t n = x_.size();
        if (!gram_.empty()) return gram_.data() + i * n;
        if (const auto it = index_.find(i); it != index_.end()) {
            lru_.splice(lru_.begin(), lru_, it->second);
            return it->second->second.data();
        }
        if (lru_.size() >= capacity_) {
            index_.erase(lru_.back().first);
            lru_.pop_back();
        }
        std::vector<double> r(n);
        for (const auto& e : x_[i]) scatter_[e.index] = e.weight;
        for (std::size_t j = 0; j < n; ++j) r[j] = dot(x_[j], scatter_);
        for (const auto& e : x_[i]) scatter_[e.index] = 0.0;
        lru_.emplace_front(i, std::move(r));
        index_[i] = lru_.begin();
        return lru_.front().second.data();
    }

private:
    static constexpr std::size_t kGramLimit = 2000;
    static constexpr std::size_t kCacheDoubles = 16u << 20;

    const std::vector<SparseVector>& x_;
    std::vector<double> gram_;
    std::vector<double> scatter_;
    std::size_t capacity_ = 2;
    std::list<std::pair<std::size_t, std::vector<double>>> lru_;
    std::unordered_map<std::size_t, std::list<std::pair<std::size_t, std::vector<double>>>::iterator> index_;
};

class Solver {
public:
    Solver(const TermDocumentMatrix& m, const SmoOptions& opt, SmoTrace* trace)
        : x_(m.rows), n_(m.n_docs()), opt_(opt), trace_(trace), kernel_(m.rows, m.n_terms()), rng_(opt.seed) {
        y_.reserve(n_);
        for (const IssueClass c : m.labels) y_.push_back(label_sign(c));
        alpha_.assign(n_, 0.0);
        error_.resize(n_);
        for (std::size_t i = 0; i < n_; ++i) error_[i] = -y_[i];
        diag_.resize(n_);
        for (std::size_t i = 0; i < n_; ++i) diag_[i] = squared_norm(x_[i]);
        if (trace_) trace_->objective.assign(1, 0.0);
    }

    // Platt's outer loop. Returns the number of passes and whether the last
    // full pass made no progress.
    std::pair<std::size_t, bool> optimize(std::size_t max_passes) {
        std::size_t passes = 0;
        bool examine_all = true;
        std::size_t changed = 0;
        while ((changed > 0 || examine_all) && passes < max_passes) {
            changed = 0;
            if (examine_all) {
                for (std::size_t i = 0; i < n_; ++i) changed += examine(i);
            } else {
                for (std::size_t i = 0; i < n_; ++i)
                    if (is_nonbound(i)) changed += examine(i);
            }
            ++passes;
            if (examine_all)
                examine_all = false;
            else if (changed == 0)
                examine_all = true;
        }
        return {passes, changed == 0 && !examine_all};
    }

    const std::vector<double>& alpha() const { return alpha_; }
    double b() const { return b_; }

    // Restarts the error cache from an explicit bias so optimization can
    // resume against it.
    void reset_bias(double b, const std::vector<double>& w) {
        b_ = b;
        for (std::size_t i = 0; i < n_; ++i) error_[i] = dot(x_[i], w) - b_ - y_[i];
    }

private:
    bool is_nonbound(std::size_t i) const { return alpha_[i] > 0.0 && alpha_[i] < opt_.c; }

    std::size_t examine(std::size_t i2) {
        const double y2 = y_[i2];
        const double a2 = alpha_[i2];
        const double e2 = error_[i2];
        const double r2 = e2 * y2;
        if (!((r2 < -opt_.tol && a2 < opt_.c) || (r2 > opt_.tol && a2 > 0.0))) return 0;

        std::size_t nonbound = 0;
        std::size_t best = n_;
        double best_gap = -1.0;
        for (std::size_t i = 0; i < n_; ++i) {
            if (!is_nonbound(i)) continue;
            ++nonbound;
            const double gap = std::abs(error_[i] - e2);
            if (gap > best_gap) {
                best_gap = gap;
                best = i;
            }
        }
        if (nonbound > 1 && best < n_ && take_step(best, i2)) return 1;

        const std::size_t start_nb = uniform_index(rng_, n_);
        for (std::size_t k = 0; k < n_; ++k) {
            const std::size_t i1 = (start_nb + k) % n_;
            if (is_nonbound(i1) && take_step(i1, i2)) return 1;
        }
        const std::size_t start_all = uniform_index(rng_, n_);
        for (std::size_t k = 0; k < n_; ++k) {
            const std::size_t i1 = (start_all + k) % n_;
            if (take_step(i1, i2)) return 1;
        }
        return 0;
    }

    bool take_step(std::size_t i1, std::size_t i2) {
        if (i1 == i2) return false;
        const double c = opt_.c;
        const double alph1 = alpha_[i1], alph2 = alpha_[i2];
        const double y1 = y_[i1], y2 = y_[i2];
        const double e1 = error_[i1], e2 = error_[i2];
        const double s = y1 * y2;

        double lo, hi;
        if (y1 != y2) {
            lo = std::max(0.0, alph2 - alph1);
            hi = std::min(c, c + alph2 - alph1);
        } else {
            lo = std::max(0.0, alph2 + alph1 - c);
            hi = std::min(c, alph2 + alph1);
        }
        if (lo >= hi) return false;

        const double* k1 = kernel_.row(i1);
        const double k11 = diag_[i1], k22 = diag_[i2], k12 = k1[i2];
        const double eta = k11 + k22 - 2.0 * k12;

        double a2;
        if (eta > 0.0) {
            a2 = std::clamp(alph2 + y2 * (e1 - e2) / eta, lo, hi);
        } else {
            // Objective (to be minimized) at both ends of the feasible segment.
            const double f1 = y1 * (e1 + b_) - alph1 * k11 - s * alph2 * k12;
            const double f2 = y2 * (e2 + b_) - s * alph1 * k12 - alph2 * k22;
            const double l1 = alph1 + s * (alph2 - lo);
            const double h1 = alph1 + s * (alph2 - hi);
            const double lobj = l1 * f1 + lo * f2 + 0.5 * l1 * l1 * k11 + 0.5 * lo * lo * k22 + s * lo * l1 * k12;
            const double hobj = h1 * f1 + hi * f2 + 0.5 * h1 * h1 * k11 + 0.5 * hi * hi * k22 + s * hi * h1 * k12;
            if (lobj < hobj - opt_.step_epsilon)
                a2 = lo;
            else if (lobj > hobj + opt_.step_epsilon)
                a2 = hi;
            else
                a2 = alph2;
        }
        if (std::abs(a2 - alph2) <= opt_.step_epsilon) return false;

        double a1 = alph1 + s * (alph2 - a2);
        if (a1 < 0.0) {
            a2 += s * a1;
            a1 = 0.0;
        } else if (a1 > c) {
            a2 += s * (a1 - c);
            a1 = c;
        }
        a2 = std::clamp(a2, 0.0, c);
        // Rounding residue next to a bound would otherwise count as non-bound.
        const double snap = 1e-12 * c;
        if (a1 < snap) a1 = 0.0;
        if (a1 > c - snap) a1 = c;
        if (a2 < snap) a2 = 0.0;
        if (a2 > c - snap) a2 = c;
        if (a1 == alph1 && a2 == alph2) return false;

        const double d1 = y1 * (a1 - alph1);
        const double d2 = y2 * (a2 - alph2);
        const double b1 = e1 + d1 * k11 + d2 * k12 + b_;
        const double b2 = e2 + d1 * k12 + d2 * k22 + b_;
        double b_new;
        if (a1 > 0.0 && a1 < c)
            b_new = b1;
        else if (a2 > 0.0 && a2 < c)
            b_new = b2;
        else
            b_new = 0.5 * (b1 + b2);

        if (trace_) {
            // W changes by da1 + da2 - (<w, d> + |d|^2 / 2) where d = d1 x1 + d2 x2
            // and <w, x_i> = E_i + y_i + b.
            const double wx1 = e1 + y1 + b_, wx2 = e2 + y2 + b_;
            const double w_dot_d = d1 * wx1 + d2 * wx2;
            const double d_sq = d1 * d1 * k11 + 2.0 * d1 * d2 * k12 + d2 * d2 * k22;
            const double delta = (a1 - alph1) + (a2 - alph2) - w_dot_d - 0.5 * d_sq;
            trace_->objective.push_back(trace_->objective.back() + delta);
        }

        const double* k2 = kernel_.row(i2);
        k1 = kernel_.row(i1);
        const double db = b_new - b_;
        for (std::size_t i = 0; i < n_; ++i) error_[i] += d1 * k1[i] + d2 * k2[i] - db;
        b_ = b_new;
        alpha_[i1] = a1;
        alpha_[i2] = a2;
        return true;
    }

    const std::vector<SparseVector>& x_;
    std::size_t n_;
    SmoOptions opt_;
    SmoTrace* trace_;
    KernelRows kernel_;
    Rng rng_;
    std::vector<double> y_;
    std::vector<double> alpha_;
    std::vector<double> error_;
    std::vector<double> diag_;
    double b_ = 0.0;
};

std::vector<std::size_t> violators_for_bias(const std::vector<double>& alpha, const std::vector<double>& w, double b,
                                            const TermDocumentMatrix& m, double c, double tol) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < m.n_docs(); ++i) {
        if (!(alpha[i] > 0.0 && alpha[i] < c)) continue;
        const double y = label_sign(m.labels[i]);
        const double e = dot(m.rows[i], w) - b - y;
        if (std::abs(y * e) > tol) out.push_back(i);
    }
    return out;
}

}  // namespace

std::vector<double> weights_from_duals(const std::vector<double>& alpha, const TermDocumentMatrix& m) {
    std::vector<double> w(m.n_terms(), 0.0);
    for (std::size_t i = 0; i < m.n_docs(); ++i) {
        if (alpha[i] == 0.0) continue;
        const double coef = alpha[i] * label_sign(m.labels[i]);
        for (const auto& e : m.rows[i]) w[e.index] += coef * e.weight;
    }
    return w;
}

double dual_objective(const LinearSvmModel& model, const TermDocumentMatrix& m) {
    double sum = 0.0;
    for (const double a : model.alpha) sum += a;
    const auto w = weights_from_duals(model.alpha, m);
    double norm = 0.0;
    for (const double v : w) norm += v * v;
    return sum - 0.5 * norm;
}

std::vector<std::size_t> nonbound_kkt_violators(const LinearSvmModel& model, const TermDocumentMatrix& m) {
    return violators_for_bias(model.alpha, model.w, model.b, m, model.c, model.tol);
}

LinearSvmModel train_smo(const TermDocumentMatrix& matrix, const SmoOptions& opt, SmoTrace* trace) {
    if (!(opt.c > 0.0) || !(opt.tol > 0.0)) throw std::invalid_argument("SMO needs C > 0 and tol > 0");
    require_both_classes(matrix.labels);

    Solver solver(matrix, opt, trace);
    auto [passes, converged] = solver.optimize(opt.max_passes);

    LinearSvmModel model;
    model.c = opt.c;
    model.tol = opt.tol;
    model.alpha = solver.alpha();
    model.w = weights_from_duals(model.alpha, matrix);
    model.b = solver.b();

    // Replace the incrementally tracked bias by the average over non-bound
    // support vectors when that average keeps every non-bound example within
    // tolerance. Otherwise resume optimization from the averaged bias a few
    // times before settling for the solver's own bias.
    constexpr int kBiasRounds = 5;
    for (int round = 0; converged && round < kBiasRounds; ++round) {
        double sum = 0.0;
        std::size_t count = 0;
        for (std::size_t i = 0; i < matrix.n_docs(); ++i) {
            if (model.alpha[i] > 0.0 && model.alpha[i] < opt.c) {
                sum += dot(matrix.rows[i], model.w) - label_sign(matrix.labels[i]);
                ++count;
            }
        }
        if (count == 0) break;
        const double averaged = sum / static_cast<double>(count);
        if (violators_for_bias(model.alpha, model.w, averaged, matrix, opt.c, opt.tol).empty()) {
            model.b = averaged;
            break;
        }
        if (passes >= opt.max_passes) break;
        solver.reset_bias(averaged, model.w);
        auto [more, again] = solver.optimize(opt.max_passes - passes);
        passes += more;
        converged = again;
        model.alpha = solver.alpha();
        model.w = weights_from_duals(model.alpha, matrix);
        model.b = solver.b();
    }
    model.converged = converged;
    model.passes = passes;
    return model;
}

}  // namespace wontfix
