#pragma once

#include <chrono>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ringpair/biphoton.hpp"
#include "ringpair/units.hpp"

namespace ringpair {

/// Inclusive, uniformly sampled parameter axis.
struct AxisRange {
    double min = 0.0;
    double max = 1.0;
    std::size_t n = 2;

    double at(std::size_t i) const;
    std::vector<double> values() const;
    void validate(const char* name) const;
};

std::vector<double> log_spaced(double min, double max, std::size_t n);

/// Numerical settings shared by every scan. Frequencies in pump linewidths.
struct EvaluationSettings {
    std::size_t jsa_points = 128;
    double jsa_window = 6.0;
    /// Points with R/R_0 below this report an undefined purity.
    double undefined_rate_floor = 1e-6;
    JsaOptions jsa;
    /// Worker threads for sweeps and grid scans; 0 uses hardware concurrency.
    unsigned threads = 0;
};

struct PointEvaluation {
    std::optional<double> purity;
    double relative_rate = 0.0;
    std::optional<std::string> error;

    bool defined() const { return purity.has_value(); }
};

/// Evaluates purity and R/R_0 for pump variations of one ring source. The
/// single-pulse reference is built once, on the same grids.
class PumpEvaluator {
public:
    explicit PumpEvaluator(RingSource source, EvaluationSettings settings = {});

    PointEvaluation evaluate(const PumpSpec& pump) const;
    /// Dual pulse with the template's tau_p and phi.
    PointEvaluation evaluate_dual(double eta, double delta_tau) const;

    const RingSource& source() const { return source_; }
    const EvaluationSettings& settings() const { return settings_; }
    double reference_norm_sq() const { return reference_norm_sq_; }
    double reference_purity() const { return reference_purity_; }

private:
    RingSource source_;
    EvaluationSettings settings_;
    FrequencyGrid idler_grid_;
    FrequencyGrid signal_grid_;
    double reference_norm_sq_ = 0.0;
    double reference_purity_ = 0.0;
};

struct SweepPlan {
    AxisRange eta{0.0, 1.0, 21};
    AxisRange delta_tau{-2.0, 2.0, 41};
    double tau_p = 0.2;
    double phi = 3.141592653589793;
    EvaluationSettings settings;

    void validate() const;
};

struct SweepResult {
    SweepPlan plan;
    /// Row-major over (eta, delta_tau).
    std::vector<PointEvaluation> points;
    double reference_norm_sq = 0.0;
    double reference_purity = 0.0;
    std::chrono::system_clock::time_point started;
    std::chrono::system_clock::time_point finished;

    const PointEvaluation& at(std::size_t i_eta, std::size_t i_dt) const;
    std::optional<double> purity(std::size_t i_eta, std::size_t i_dt) const { return at(i_eta, i_dt).purity; }
    double relative_rate(std::size_t i_eta, std::size_t i_dt) const { return at(i_eta, i_dt).relative_rate; }
    std::optional<double> max_purity() const;
};

/// Purity and R/R_0 over an (eta, delta_tau) grid. `source_template` supplies
/// the resonances; its pump is replaced by dual pulses of the plan's tau_p
/// and phi. Failed points are recorded and the sweep continues.
SweepResult sweep(const SweepPlan& plan, const RingSource& source_template);
SweepResult sweep(const SweepPlan& plan);

struct OptimizeOptions {
    AxisRange eta{0.0, 1.0, 41};
    AxisRange delta_tau{-2.0, 2.0, 41};
    EvaluationSettings settings;
    std::size_t max_simplex_iterations = 200;
    double purity_tolerance = 1e-10;
    double step_tolerance = 1e-7;
};

struct TraceEntry {
    enum class Stage { Grid, Simplex, WarmStart };
    Stage stage = Stage::Grid;
    double eta = 0.0;
    double delta_tau = 0.0;
    std::optional<double> purity;
    double relative_rate = 0.0;
};

const char* to_string(TraceEntry::Stage stage);

struct OptimumReport {
    bool feasible = false;
    double tau_p = 0.0;
    double phi = 0.0;
    double rate_floor = 0.0;
    double best_eta = 0.0;
    double best_delta_tau = 0.0;
    double best_purity = 0.0;
    double achieved_rate_ratio = 0.0;
    std::size_t evaluations = 0;
    std::vector<TraceEntry> trace;
};

struct Candidate {
    double eta = 0.0;
    double delta_tau = 0.0;
};

/// Maximize purity subject to R/R_0 >= rate_floor: grid scan, then a
/// Nelder-Mead simplex from the best feasible seed. Infeasible points are
/// rejected outright. `warm_starts` join the seed candidates.
OptimumReport optimize_constrained(double tau_p, double rate_floor, double phi,
                                   const OptimizeOptions& options = {},
                                   std::span<const Candidate> warm_starts = {});

/// One grid scan shared by several rate floors. Floors are refined from the
/// strictest to the loosest, each seeded with the stricter optima, so the
/// best purities are nested. Reports are returned in input order.
std::vector<OptimumReport> optimize_rate_floors(double tau_p, std::span<const double> rate_floors, double phi,
                                                const OptimizeOptions& options = {});

/// Parameters in normalized units: tau_p and delta_tau in 1/Omega.
struct SensitivityBase {
    double eta = 0.6;
    double delta_tau = 0.3;
    double tau_p = 0.2;
    double phi = 3.141592653589793;

    PumpSpec pump() const { return PumpSpec::dual(tau_p, eta, delta_tau, phi); }
};

struct SensitivityPoint {
    double parameter = 0.0; // detuning, wavelength shift or phase, per scan
    double detuning = 0.0;  // resonance shift in pump linewidths
    double phi = 0.0;
    PointEvaluation result;
};

struct SensitivityCurve {
    SensitivityBase base;
    std::vector<SensitivityPoint> points;
};

/// Purity with every resonance shifted by each normalized detuning.
SensitivityCurve detuning_scan(const SensitivityBase& base, std::span<const double> detunings,
                               const EvaluationSettings& settings = {});

/// Purity versus resonance wavelength shift (meters) for a physical ring.
SensitivityCurve wavelength_shift_scan(const SensitivityBase& base, const units::Normalizer& normalizer,
                                       std::span<const double> delta_lambdas,
                                       const EvaluationSettings& settings = {});

/// Purity versus relative pulse phase phi.
SensitivityCurve phase_scan(const SensitivityBase& base, std::span<const double> phis,
                            const EvaluationSettings& settings = {});

/// Smallest |parameter| at which purity is below threshold (or undefined).
std::optional<double> first_drop_below(const SensitivityCurve& curve, double threshold);

/// Purity of the single-pulse reference and the constrained optima for each
/// (tau_p Omega)^-1, as in a bandwidth study.
struct BandwidthPoint {
    double inverse_tau_p = 0.0;
    double single_pulse_purity = 0.0;
    std::vector<OptimumReport> optima; // one per rate floor
};

std::vector<BandwidthPoint> bandwidth_study(std::span<const double> inverse_tau_p, std::span<const double> rate_floors,
                                            double phi, const OptimizeOptions& options = {});

} // namespace ringpair
