#include "vqt/thermo.hpp"

#include "vqt/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

namespace vqt::thermo {

namespace {

template <typename E, std::size_t N>
E parse_enum(std::string_view name, const std::pair<std::string_view, E> (&table)[N], const char* what) {
    for (const auto& [label, value] : table) {
        if (label == name) {
            return value;
        }
    }
    throw ConfigError(std::string("unknown ") + what + ": '" + std::string(name) + "'");
}

constexpr std::pair<std::string_view, Quantity> kQuantities[] = {
    {"chi_reduced_times_T", Quantity::chi_reduced_times_T},
    {"entropy", Quantity::entropy},
    {"specific_heat", Quantity::specific_heat},
    {"internal_energy", Quantity::internal_energy},
};

constexpr std::pair<std::string_view, Provenance> kProvenances[] = {
    {"vqt_exact", Provenance::vqt_exact},
    {"vqt_shots", Provenance::vqt_shots},
    {"vqt_noisy", Provenance::vqt_noisy},
    {"analytic", Provenance::analytic},
};

constexpr std::pair<std::string_view, FitEngine> kEngines[] = {
    {"analytic", FitEngine::analytic},
    {"vqt", FitEngine::vqt},
};

double analytic_value(const model::DimerModel& m, Quantity q, double t) {
    switch (q) {
        case Quantity::chi_reduced_times_T:
            return model::chi_reduced(m, t).value;
        case Quantity::entropy:
            return model::magnetic_entropy(m, t);
        case Quantity::specific_heat:
            return model::specific_heat(m, t);
        case Quantity::internal_energy:
            return model::internal_energy(m, t);
    }
    return 0.0;
}

}  // namespace

std::string_view quantity_name(Quantity q) {
    for (const auto& [label, value] : kQuantities) {
        if (value == q) return label;
    }
    return "?";
}

Quantity parse_quantity(std::string_view name) { return parse_enum(name, kQuantities, "quantity"); }

std::string_view provenance_name(Provenance p) {
    for (const auto& [label, value] : kProvenances) {
        if (value == p) return label;
    }
    return "?";
}

Provenance parse_provenance(std::string_view name) { return parse_enum(name, kProvenances, "provenance"); }

Provenance provenance_for(estimator::Mode mode) {
    switch (mode) {
        case estimator::Mode::exact:
            return Provenance::vqt_exact;
        case estimator::Mode::shots:
            return Provenance::vqt_shots;
        case estimator::Mode::noisy:
            return Provenance::vqt_noisy;
    }
    return Provenance::vqt_exact;
}

FitEngine parse_engine(std::string_view name) { return parse_enum(name, kEngines, "fit engine"); }

std::string_view engine_name(FitEngine e) { return e == FitEngine::analytic ? "analytic" : "vqt"; }

void PropertyCurve::validate() const {
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto& p = points[i];
        if (!(p.temperature > 0.0) || !std::isfinite(p.temperature)) {
            throw InputError("curve point " + std::to_string(i) + ": temperature must be positive");
        }
        if (!std::isfinite(p.value) || (p.uncertainty && !std::isfinite(*p.uncertainty))) {
            throw InputError("curve point " + std::to_string(i) + ": non-finite value");
        }
        if (i > 0 && !(p.temperature > points[i - 1].temperature)) {
            throw InputError("curve point " + std::to_string(i) + ": temperatures must strictly increase");
        }
    }
}

void ExperimentalDataset::validate(std::size_t min_records) const {
    if (records.size() < min_records) {
        throw InputError("dataset needs at least " + std::to_string(min_records) + " records, got " +
                         std::to_string(records.size()));
    }
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        if (!(r.temperature > 0.0) || !std::isfinite(r.temperature) || !std::isfinite(r.value)) {
            throw InputError("dataset record " + std::to_string(i) + ": invalid temperature or value");
        }
        if (r.sigma && !(*r.sigma > 0.0)) {
            throw InputError("dataset record " + std::to_string(i) + ": sigma must be positive");
        }
    }
}

double susceptibility_from_state(const qcore::DensityMatrix& state) {
    if (state.dim() != 4) {
        throw ContractViolation("susceptibility_from_state: expected a two-qubit state");
    }
    const qcore::StateVector s = model::singlet_state();
    qcore::Complex overlap{0.0, 0.0};
    for (std::size_t r = 0; r < 4; ++r) {
        for (std::size_t c = 0; c < 4; ++c) {
            overlap += std::conj(s[r]) * state(r, c) * s[c];
        }
    }
    return (1.0 - overlap.real()) / 3.0;
}

double population_00(const qcore::DensityMatrix& state) { return state(0, 0).real(); }

std::vector<double> log_grid(double lo, double hi, std::size_t n) {
    if (!(lo > 0.0) || !(hi > lo) || n < 2) {
        throw ConfigError("log_grid: need 0 < lo < hi and n >= 2");
    }
    std::vector<double> out(n);
    const double a = std::log(lo);
    const double b = std::log(hi);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
    }
    out.front() = lo;
    out.back() = hi;
    return out;
}

PropertyCurve analytic_curve(const model::DimerModel& m, Quantity q, const std::vector<double>& temps) {
    PropertyCurve c{q, Provenance::analytic, {}};
    c.points.reserve(temps.size());
    for (double t : temps) {
        c.points.push_back({t, analytic_value(m, q, t), std::nullopt});
    }
    c.validate();
    return c;
}

PropertyCurve curve_from_sweep(const std::vector<SweepPoint>& sweep, const model::DimerModel& m, Quantity q,
                               Provenance provenance) {
    if (q == Quantity::specific_heat) {
        PropertyCurve c = specific_heat_from_entropy(curve_from_sweep(sweep, m, Quantity::entropy, provenance));
        c.provenance = provenance;
        return c;
    }
    const qcore::HermitianOperator h = model::build_hamiltonian(m);
    PropertyCurve c{q, provenance, {}};
    for (const auto& p : sweep) {
        if (!p.result) {
            continue;
        }
        const auto& rho = p.result->state;
        double v = 0.0;
        switch (q) {
            case Quantity::chi_reduced_times_T:
                v = susceptibility_from_state(rho);
                break;
            case Quantity::entropy:
                v = qcore::von_neumann_entropy(rho);
                break;
            case Quantity::internal_energy:
                v = qcore::expectation(h, rho);
                break;
            case Quantity::specific_heat:
                break;
        }
        c.points.push_back({p.temperature, v, std::nullopt});
    }
    c.validate();
    return c;
}

PropertyCurve specific_heat_from_entropy(const PropertyCurve& entropy) {
    entropy.validate();
    const auto& pts = entropy.points;
    const std::size_t n = pts.size();
    if (n < 2) {
        throw InputError("specific_heat_from_entropy: need at least two points");
    }
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = std::log(pts[i].temperature);
    }
    // dS/dlnT = T dS/dT = c
    auto derivative = [&](std::size_t i) {
        if (n == 2) {
            return (pts[1].value - pts[0].value) / (x[1] - x[0]);
        }
        std::size_t k = i == 0 ? 1 : (i == n - 1 ? n - 2 : i);
        const double h0 = x[k] - x[k - 1];
        const double h1 = x[k + 1] - x[k];
        const double s0 = pts[k - 1].value, s1 = pts[k].value, s2 = pts[k + 1].value;
        // Derivative of the quadratic through the three points, evaluated at x[i].
        const double d01 = (s1 - s0) / h0;
        const double d12 = (s2 - s1) / h1;
        const double curv = (d12 - d01) / (h0 + h1);
        const double xm = 0.5 * (x[k - 1] + x[k]);
        return d01 + 2.0 * curv * (x[i] - xm);
    };
    PropertyCurve c{Quantity::specific_heat, entropy.provenance, {}};
    c.points.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        c.points.push_back({pts[i].temperature, derivative(i), std::nullopt});
    }
    return c;
}

std::optional<double> interpolate(const PropertyCurve& c, double t) {
    const auto& pts = c.points;
    if (pts.empty() || !(t > 0.0) || t < pts.front().temperature || t > pts.back().temperature) {
        return std::nullopt;
    }
    auto it = std::lower_bound(pts.begin(), pts.end(), t,
                               [](const CurvePoint& p, double v) { return p.temperature < v; });
    if (it->temperature == t) {
        return it->value;
    }
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    const double w = (std::log(t) - std::log(lo.temperature)) / (std::log(hi.temperature) - std::log(lo.temperature));
    return lo.value + w * (hi.value - lo.value);
}

double curve_residual(const PropertyCurve& a, const PropertyCurve& b) {
    double worst = 0.0;
    std::size_t compared = 0;
    for (const auto& p : a.points) {
        if (auto v = interpolate(b, p.temperature)) {
            worst = std::max(worst, std::abs(p.value - *v));
            ++compared;
        }
    }
    if (compared == 0) {
        throw InputError("curve_residual: curves do not overlap in temperature");
    }
    return worst;
}

double peak_temperature(const PropertyCurve& c) {
    if (c.points.empty()) {
        throw InputError("peak_temperature: empty curve");
    }
    const auto& pts = c.points;
    const auto it = std::max_element(pts.begin(), pts.end(),
                                     [](const CurvePoint& a, const CurvePoint& b) { return a.value < b.value; });
    const std::size_t i = static_cast<std::size_t>(it - pts.begin());
    if (i == 0 || i + 1 == pts.size()) {
        return it->temperature;
    }
    const double x0 = std::log(pts[i - 1].temperature), x1 = std::log(pts[i].temperature),
                 x2 = std::log(pts[i + 1].temperature);
    const double y0 = pts[i - 1].value, y1 = pts[i].value, y2 = pts[i + 1].value;
    const double num = (x1 - x0) * (x1 - x0) * (y1 - y2) - (x1 - x2) * (x1 - x2) * (y1 - y0);
    const double den = (x1 - x0) * (y1 - y2) - (x1 - x2) * (y1 - y0);
    if (den == 0.0) {
        return pts[i].temperature;
    }
    const double xv = x1 - 0.5 * num / den;
    return std::exp(std::clamp(xv, x0, x2));
}

FitResult fit_coupling(const ExperimentalDataset& data, FitEngine engine, const FitConfig& cfg) {
    data.validate(3);
    if (!(cfg.j_min > 0.0) || !(cfg.j_max > cfg.j_min) || cfg.scan_points < 3 || !(cfg.j_tolerance > 0.0)) {
        throw ConfigError("fit_coupling: invalid scan configuration");
    }

    std::vector<double> temps;
    temps.reserve(data.records.size());
    for (const auto& r : data.records) {
        temps.push_back(r.temperature);
    }
    if (!std::is_sorted(temps.begin(), temps.end()) ||
        std::adjacent_find(temps.begin(), temps.end()) != temps.end()) {
        throw InputError("fit_coupling: dataset temperatures must strictly increase");
    }

    std::map<double, PropertyCurve> cache;
    auto model_curve = [&](double j) -> const PropertyCurve& {
        auto found = cache.find(j);
        if (found != cache.end()) {
            return found->second;
        }
        const model::DimerModel m{j, cfg.g_factor};
        PropertyCurve c;
        if (engine == FitEngine::analytic) {
            c = analytic_curve(m, data.quantity, temps);
        } else {
            const auto sweep = temperature_sweep(m, temps, cfg.vqt);
            for (const auto& p : sweep) {
                if (!p.result) {
                    throw VqtError("fit_coupling: VQT failed at T = " + std::to_string(p.temperature) + ": " + p.error,
                                   {});
                }
            }
            c = curve_from_sweep(sweep, m, data.quantity, provenance_for(cfg.vqt.mode));
        }
        return cache.emplace(j, std::move(c)).first->second;
    };

    auto residual = [&](double j) {
        const PropertyCurve& c = model_curve(j);
        double sum = 0.0;
        for (std::size_t i = 0; i < data.records.size(); ++i) {
            const auto& r = data.records[i];
            const double sigma = r.sigma.value_or(1.0);
            const double d = (c.points[i].value - r.value) / sigma;
            sum += d * d;
        }
        return sum;
    };

    FitResult out;
    out.engine = engine;
    const std::vector<double> grid = log_grid(cfg.j_min, cfg.j_max, cfg.scan_points);
    std::size_t best = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        out.scan.emplace_back(grid[i], residual(grid[i]));
        if (out.scan[i].second < out.scan[best].second) {
            best = i;
        }
    }
    if (best == 0 || best + 1 == grid.size()) {
        throw InputError("fit_coupling: best J lies on the edge of the scan range [" + std::to_string(cfg.j_min) +
                         ", " + std::to_string(cfg.j_max) + "] K; widen the fit range");
    }

    // Golden-section search on the bracket around the scan minimum.
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = grid[best - 1];
    double b = grid[best + 1];
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = residual(c);
    double fd = residual(d);
    while (b - a > cfg.j_tolerance) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = residual(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = residual(d);
        }
    }
    double j = 0.5 * (a + b);
    double fj = residual(j);
    if (out.scan[best].second < fj) {
        j = grid[best];
        fj = out.scan[best].second;
    }
    out.j_over_kb = j;
    out.residual = fj;
    out.curve = model_curve(j);
    return out;
}

ExperimentalDataset synthetic_dataset(const model::DimerModel& m, Quantity q, const std::vector<double>& temps,
                                      double noise_fraction, std::uint64_t seed, std::string source) {
    if (!(noise_fraction >= 0.0)) {
        throw ConfigError("synthetic_dataset: noise fraction must be non-negative");
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    ExperimentalDataset ds{q, std::move(source), {}};
    for (double t : temps) {
        const double v = analytic_value(m, q, t);
        const double noisy = v * (1.0 + noise_fraction * gauss(rng));
        std::optional<double> sigma;
        if (noise_fraction > 0.0 && v != 0.0) {
            sigma = noise_fraction * std::abs(v);
        }
        ds.records.push_back({t, noisy, sigma});
    }
    return ds;
}

}  // namespace vqt::thermo
