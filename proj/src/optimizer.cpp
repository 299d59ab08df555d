#include "vqt/optimizer.hpp"

#include "vqt/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <numeric>
#include <optional>
#include <sstream>

namespace vqt::opt {

std::string_view method_name(Method method) {
    return method == Method::linear_approx ? "linear_approx" : "simplex";
}

Method parse_method(std::string_view name) {
    if (name == "linear_approx" || name == "cobyla") return Method::linear_approx;
    if (name == "simplex" || name == "nelder_mead") return Method::simplex;
    throw ConfigError("unknown optimizer method '" + std::string(name) + "'");
}

void OptimizerConfig::validate() const {
    if (max_iterations < 1) {
        throw ConfigError("OptimizerConfig: max_iterations must be at least 1");
    }
    if (!(final_step > 0.0) || !(final_step < initial_step)) {
        throw ConfigError("OptimizerConfig: require 0 < final_step < initial_step");
    }
}

std::uint64_t hash_params(const std::vector<double>& x) {
    std::uint64_t h = 1469598103934665603ULL;
    for (double v : x) {
        std::uint64_t bits = 0;
        std::memcpy(&bits, &v, sizeof bits);
        for (int byte = 0; byte < 8; ++byte) {
            h ^= (bits >> (8 * byte)) & 0xffU;
            h *= 1099511628211ULL;
        }
    }
    return h;
}

namespace {

using Vec = std::vector<double>;

double dot(const Vec& a, const Vec& b) { return std::inner_product(a.begin(), a.end(), b.begin(), 0.0); }
double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

Vec axpy(const Vec& x, double alpha, const Vec& d) {
    Vec out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        out[i] = x[i] + alpha * d[i];
    }
    return out;
}

// Budgeted, recording evaluation of the objective.
class Evaluator {
public:
    Evaluator(const Objective& f, std::size_t budget) : f_(f), budget_(budget) {}

    bool exhausted() const { return count_ >= budget_; }
    std::size_t count() const { return count_; }

    double operator()(const Vec& x, double radius) {
        const double value = f_(x);
        if (!std::isfinite(value)) {
            std::ostringstream msg;
            msg << "objective returned " << value << " at evaluation " << count_ + 1 << " for parameters [";
            for (std::size_t i = 0; i < x.size(); ++i) {
                msg << (i ? ", " : "") << x[i];
            }
            msg << "]";
            throw ObjectiveError(msg.str(), x);
        }
        ++count_;
        if (trace_.records.empty() || value < trace_.best_cost) {
            trace_.best_cost = value;
            trace_.best_params = x;
        }
        trace_.records.push_back({count_, value, trace_.best_cost, hash_params(x), radius});
        return value;
    }

    OptimizationTrace finish(bool converged) {
        trace_.evaluations = count_;
        trace_.converged = converged;
        return std::move(trace_);
    }

private:
    const Objective& f_;
    std::size_t budget_;
    std::size_t count_ = 0;
    OptimizationTrace trace_;
};

// Inverse of the n x n matrix whose rows are `rows`, by Gauss-Jordan with
// partial pivoting. Returned as columns: result[j] satisfies rows[i].result[j] = delta_ij.
std::optional<std::vector<Vec>> inverse_columns(const std::vector<Vec>& rows) {
    const std::size_t n = rows.size();
    std::vector<Vec> a(n, Vec(2 * n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        std::copy(rows[i].begin(), rows[i].end(), a[i].begin());
        a[i][n + i] = 1.0;
    }
    double scale = 0.0;
    for (const auto& r : rows) {
        for (double v : r) scale = std::max(scale, std::abs(v));
    }
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        }
        if (std::abs(a[pivot][col]) <= 1e-13 * scale) {
            return std::nullopt;
        }
        std::swap(a[pivot], a[col]);
        const double inv = 1.0 / a[col][col];
        for (double& v : a[col]) v *= inv;
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || a[r][col] == 0.0) continue;
            const double factor = a[r][col];
            for (std::size_t k = 0; k < 2 * n; ++k) a[r][k] -= factor * a[col][k];
        }
    }
    // a[:, n:] is D^{-1}; its column j is the dual vector of vertex j.
    std::vector<Vec> cols(n, Vec(n));
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) cols[j][i] = a[i][n + j];
    }
    return cols;
}

// Linear-approximation trust-region method: n+1 interpolation points define
// a linear model; steps of length rho go downhill on it; rho halves when a
// step fails on a well-conditioned simplex.
OptimizationTrace minimize_linear(const Objective& objective, const Vec& initial, const OptimizerConfig& cfg) {
    constexpr double kAlpha = 0.25;   // min vertex distance from opposite face, in rho
    constexpr double kBeta = 2.1;     // max vertex distance from best point, in rho
    constexpr double kGamma = 0.5;    // geometry step length, in rho
    constexpr double kPoorRatio = 0.1;

    const std::size_t n = initial.size();
    const double rho_end = cfg.final_step;
    double rho = cfg.initial_step;
    Evaluator eval(objective, cfg.max_iterations);

    std::vector<Vec> pts;
    Vec vals;
    pts.push_back(initial);
    vals.push_back(eval(initial, rho));
    if (n == 0) {
        return eval.finish(true);
    }

    auto rebuild_simplex = [&]() {
        const Vec base = pts[0];
        const double base_val = vals[0];
        pts.assign(1, base);
        vals.assign(1, base_val);
        for (std::size_t i = 0; i < n && !eval.exhausted(); ++i) {
            Vec x = base;
            x[i] += rho;
            vals.push_back(eval(x, rho));
            pts.push_back(std::move(x));
        }
    };

    rebuild_simplex();
    bool converged = false;
    bool step_failed = false;

    while (!eval.exhausted()) {
        if (pts.size() != n + 1) break;

        const auto best = static_cast<std::size_t>(std::min_element(vals.begin(), vals.end()) - vals.begin());
        std::swap(pts[0], pts[best]);
        std::swap(vals[0], vals[best]);

        std::vector<Vec> d(n);
        Vec df(n);
        for (std::size_t i = 0; i < n; ++i) {
            d[i] = axpy(pts[i + 1], -1.0, pts[0]);
            df[i] = vals[i + 1] - vals[0];
        }
        const auto cols = inverse_columns(d);
        if (!cols) {
            rebuild_simplex();
            continue;
        }

        Vec g(n, 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t i = 0; i < n; ++i) g[i] += (*cols)[j][i] * df[j];
        }

        Vec sigma(n), eta(n);
        bool acceptable = true;
        for (std::size_t j = 0; j < n; ++j) {
            sigma[j] = 1.0 / norm((*cols)[j]);
            eta[j] = norm(d[j]);
            if (sigma[j] < kAlpha * rho || eta[j] > kBeta * rho) acceptable = false;
        }

        if (step_failed) {
            step_failed = false;
            if (acceptable) {
                if (rho <= rho_end) {
                    converged = true;
                    break;
                }
                rho *= 0.5;
                if (rho <= 1.5 * rho_end) rho = rho_end;
                continue;
            }
            // Improve the worst vertex before trusting the model again.
            std::size_t j = 0;
            const auto far = std::max_element(eta.begin(), eta.end());
            if (*far > kBeta * rho) {
                j = static_cast<std::size_t>(far - eta.begin());
            } else {
                j = static_cast<std::size_t>(std::min_element(sigma.begin(), sigma.end()) - sigma.begin());
            }
            Vec dir = (*cols)[j];
            const double scale = kGamma * rho / norm(dir);
            if (dot(g, dir) > 0.0) {
                for (double& v : dir) v = -v;
            }
            Vec x = axpy(pts[0], scale, dir);
            vals[j + 1] = eval(x, rho);
            pts[j + 1] = std::move(x);
            continue;
        }

        const double gnorm = norm(g);
        if (gnorm == 0.0) {
            step_failed = true;
            continue;
        }
        const Vec s = axpy(Vec(n, 0.0), -rho / gnorm, g);
        const Vec x_new = axpy(pts[0], 1.0, s);
        const double f_new = eval(x_new, rho);
        const double ratio = (vals[0] - f_new) / (rho * gnorm);

        // Replace the vertex whose swap keeps the simplex volume largest,
        // favouring vertices far from the best point.
        std::size_t replace = 0;
        double best_score = -1.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double far_factor = std::max(1.0, eta[j] / rho);
            const double score = std::abs(dot(s, (*cols)[j])) * far_factor * far_factor;
            if (score > best_score) {
                best_score = score;
                replace = j;
            }
        }
        if (f_new < vals[0] || best_score > 1e-3) {
            pts[replace + 1] = x_new;
            vals[replace + 1] = f_new;
        }
        if (ratio < kPoorRatio) {
            step_failed = true;
        }
    }
    return eval.finish(converged);
}

OptimizationTrace minimize_simplex(const Objective& objective, const Vec& initial, const OptimizerConfig& cfg) {
    const std::size_t n = initial.size();
    Evaluator eval(objective, cfg.max_iterations);
    std::vector<Vec> pts{initial};
    Vec vals{eval(initial, cfg.initial_step)};
    for (std::size_t i = 0; i < n && !eval.exhausted(); ++i) {
        Vec x = initial;
        x[i] += cfg.initial_step;
        vals.push_back(eval(x, cfg.initial_step));
        pts.push_back(std::move(x));
    }

    bool converged = false;
    while (!eval.exhausted() && pts.size() == n + 1) {
        std::vector<std::size_t> order(n + 1);
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
        std::vector<Vec> sp;
        Vec sv;
        for (std::size_t k : order) {
            sp.push_back(pts[k]);
            sv.push_back(vals[k]);
        }
        pts = std::move(sp);
        vals = std::move(sv);

        double size = 0.0;
        for (std::size_t i = 1; i <= n; ++i) size = std::max(size, norm(axpy(pts[i], -1.0, pts[0])));
        if (size < cfg.final_step) {
            converged = true;
            break;
        }

        Vec centroid(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t k = 0; k < n; ++k) centroid[k] += pts[i][k] / static_cast<double>(n);
        }
        const Vec& worst = pts[n];
        const Vec dir = axpy(centroid, -1.0, worst);
        const Vec xr = axpy(centroid, 1.0, dir);
        const double fr = eval(xr, size);
        if (fr < vals[0]) {
            if (eval.exhausted()) {
                pts[n] = xr;
                vals[n] = fr;
                break;
            }
            const Vec xe = axpy(centroid, 2.0, dir);
            const double fe = eval(xe, size);
            if (fe < fr) {
                pts[n] = xe;
                vals[n] = fe;
            } else {
                pts[n] = xr;
                vals[n] = fr;
            }
            continue;
        }
        if (fr < vals[n - 1]) {
            pts[n] = xr;
            vals[n] = fr;
            continue;
        }
        if (eval.exhausted()) break;
        const bool outside = fr < vals[n];
        const Vec xc = outside ? axpy(centroid, 0.5, dir) : axpy(centroid, -0.5, dir);
        const double fc = eval(xc, size);
        if (fc < std::min(fr, vals[n])) {
            pts[n] = xc;
            vals[n] = fc;
            continue;
        }
        for (std::size_t i = 1; i <= n && !eval.exhausted(); ++i) {
            pts[i] = axpy(pts[0], 0.5, axpy(pts[i], -1.0, pts[0]));
            vals[i] = eval(pts[i], size);
        }
    }
    return eval.finish(converged);
}

}  // namespace

OptimizationTrace minimize(const Objective& objective, const std::vector<double>& initial,
                           const OptimizerConfig& cfg) {
    cfg.validate();
    if (initial.empty()) {
        throw ContractViolation("minimize: need at least one parameter");
    }
    for (double v : initial) {
        if (!std::isfinite(v)) {
            throw ContractViolation("minimize: initial point must be finite");
        }
    }
    return cfg.method == Method::linear_approx ? minimize_linear(objective, initial, cfg)
                                               : minimize_simplex(objective, initial, cfg);
}

OptimizationTrace multistart(const Objective& objective, const OptimizerConfig& cfg, const Sampler& sampler,
                             const std::vector<double>& first_initial) {
    cfg.validate();
    const std::size_t restarts = std::max<std::size_t>(1, cfg.restarts);
    std::optional<OptimizationTrace> best;
    std::vector<std::string> failures;
    for (std::size_t r = 0; r < restarts; ++r) {
        std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                          static_cast<std::uint32_t>(r)};
        std::mt19937_64 rng(seq);
        std::vector<double> x0 = sampler(rng);
        if (r == 0 && !first_initial.empty()) {
            x0 = first_initial;
        }
        try {
            OptimizationTrace trace = minimize(objective, x0, cfg);
            trace.best_restart = r;
            if (!best || trace.best_cost < best->best_cost) {
                best = std::move(trace);
            }
        } catch (const ObjectiveError& e) {
            failures.push_back("restart " + std::to_string(r) + ": " + e.what());
        }
    }
    if (!best) {
        throw ObjectiveError("all " + std::to_string(restarts) + " restarts failed; first: " + failures.front(),
                             {});
    }
    best->restart_failures = std::move(failures);
    best->primary_evaluations = best->evaluations;

    OptimizerConfig polish = cfg;
    polish.method = Method::simplex;
    for (std::size_t pass = 0; pass < cfg.polish_passes; ++pass) {
        OptimizationTrace extra;
        try {
            extra = minimize(objective, best->best_params, polish);
        } catch (const ObjectiveError& e) {
            best->restart_failures.push_back("polish " + std::to_string(pass) + ": " + e.what());
            break;
        }
        for (auto rec : extra.records) {
            rec.iteration += best->evaluations;
            rec.best_cost = std::min(rec.best_cost, best->best_cost);
            best->records.push_back(rec);
        }
        best->evaluations += extra.evaluations;
        if (extra.best_cost < best->best_cost) {
            best->best_cost = extra.best_cost;
            best->best_params = std::move(extra.best_params);
        }
    }
    return std::move(*best);
}

}  // namespace vqt::opt
