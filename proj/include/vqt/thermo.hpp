#pragma once

// Property curves from thermal states, numerical heat capacity from entropy,
// experimental datasets and one-parameter fits of the coupling J.

#include "vqt/model.hpp"
#include "vqt/qcore.hpp"
#include "vqt/vqt.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace vqt::thermo {

/// chi_reduced_times_T is the dimensionless k_B T chi / (2 N_A g^2 mu_B^2).
enum class Quantity { chi_reduced_times_T, entropy, specific_heat, internal_energy };
enum class Provenance { vqt_exact, vqt_shots, vqt_noisy, analytic };

std::string_view quantity_name(Quantity q);
Quantity parse_quantity(std::string_view name);
std::string_view provenance_name(Provenance p);
Provenance parse_provenance(std::string_view name);
Provenance provenance_for(estimator::Mode mode);

struct CurvePoint {
    double temperature = 0.0;  // K
    double value = 0.0;
    std::optional<double> uncertainty;
};

struct PropertyCurve {
    Quantity quantity = Quantity::chi_reduced_times_T;
    Provenance provenance = Provenance::analytic;
    std::vector<CurvePoint> points;

    /// Throws InputError unless temperatures strictly increase and values are finite.
    void validate() const;
};

struct DatasetRecord {
    double temperature = 0.0;
    double value = 0.0;
    std::optional<double> sigma;
};

struct ExperimentalDataset {
    Quantity quantity = Quantity::chi_reduced_times_T;
    std::string source;
    std::vector<DatasetRecord> records;

    void validate(std::size_t min_records = 3) const;
};

enum class FitEngine { analytic, vqt };

FitEngine parse_engine(std::string_view name);
std::string_view engine_name(FitEngine e);

struct FitConfig {
    double j_min = 0.5;  // K, scan range
    double j_max = 20.0;
    std::size_t scan_points = 25;
    double j_tolerance = 1e-4;  // absolute, K
    double g_factor = 2.0;
    VqtProblem vqt;             // template for engine = vqt (model and temperature are overwritten)
};

struct FitResult {
    double j_over_kb = 0.0;
    double residual = 0.0;  // sum of squared normalized deviations
    FitEngine engine = FitEngine::analytic;
    PropertyCurve curve;    // model at the fitted J on the dataset temperatures
    std::vector<std::pair<double, double>> scan;  // (J, residual) of the bracketing scan
};

/// Mean triplet population (1 - <singlet|rho|singlet>) / 3, the inversion of
/// rho_4 = 1 - 3 rho_1. Equals <00|rho|00> on X-shaped thermal states.
double susceptibility_from_state(const qcore::DensityMatrix& state);

/// <00|rho|00>.
double population_00(const qcore::DensityMatrix& state);

std::vector<double> log_grid(double lo, double hi, std::size_t n);

PropertyCurve analytic_curve(const model::DimerModel& m, Quantity q, const std::vector<double>& temps);

/// Property curve from the reconstructed states of a sweep; failed points are
/// skipped. Specific heat is derived from the entropy curve.
PropertyCurve curve_from_sweep(const std::vector<SweepPoint>& sweep, const model::DimerModel& m, Quantity q,
                               Provenance provenance);

/// c(T_i) = T_i (dS/dT)_i, differentiated in ln T with three-point stencils;
/// one-sided at the ends.
PropertyCurve specific_heat_from_entropy(const PropertyCurve& entropy);

/// Max |a - b| with b interpolated linearly in ln T onto a's temperatures
/// (points of a outside b's range are skipped).
double curve_residual(const PropertyCurve& a, const PropertyCurve& b);

/// Linear interpolation in ln T; nullopt outside the curve's range.
std::optional<double> interpolate(const PropertyCurve& c, double t);

/// Temperature of the largest value (three-point parabolic refinement in ln T).
double peak_temperature(const PropertyCurve& c);

FitResult fit_coupling(const ExperimentalDataset& data, FitEngine engine, const FitConfig& cfg = {});

/// Curve generated from the closed forms with multiplicative Gaussian noise;
/// sigma is set to noise_fraction * |value|.
ExperimentalDataset synthetic_dataset(const model::DimerModel& m, Quantity q, const std::vector<double>& temps,
                                      double noise_fraction, std::uint64_t seed, std::string source);

}  // namespace vqt::thermo
