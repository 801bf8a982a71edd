#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "dfe/timebase.hpp"

namespace dfe {

/// x(t) = intercept + slope*t + amplitude*sin(2*pi*frequency*t + phase),
/// canonicalized so amplitude >= 0, frequency > 0, phase in [-pi, pi).
struct SinusoidTrendModel {
    double intercept = 0.0;
    double slope_per_s = 0.0;
    double amplitude = 0.0;
    double frequency_hz = 0.0;
    double phase_rad = 0.0;

    double eval(double t) const;
};

struct FitResult {
    SinusoidTrendModel model;
    double sse = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
    std::size_t restarts_used = 0;
};

struct SimplexResult {
    std::vector<double> x_min;
    double f_min = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
};

/// Downhill simplex minimization with the standard reflection/expansion/
/// contraction/shrink coefficients (1, 2, 0.5, 0.5). The initial simplex is
/// x0 plus one per-axis offset from `scale`. Terminates when the relative
/// spread of objective values across the simplex AND the simplex extent both
/// drop to `tol` (the spread alone stalls on exact ties). Returns the best
/// point ever evaluated. Throws std::domain_error if the objective goes
/// non-finite.
SimplexResult nelder_mead(const std::function<double(const std::vector<double>&)>& objective,
                          const std::vector<double>& x0, const std::vector<double>& scale,
                          double tol = 1e-9, std::size_t max_iter = 5000);

/// Least-squares fit of the trend-plus-sinusoid model. For any candidate
/// frequency the four linear parameters are profiled out in closed form, so
/// the simplex searches over frequency alone; candidates start from a coarse
/// log-spaced grid over [0.1/T_s, max(3/T_s, 2*d_hint)]. Non-convergence
/// after restarts is reported in the result, never thrown.
FitResult fit_trend_sinusoid(const TimeSeries& x, std::optional<double> d_hint = {});

/// Closed-form single-tone frequency estimate from the lag-1/lag-2 biased
/// autocorrelations of the detrended series. A tone at exactly rate/4 has a
/// vanishing lag-1 autocorrelation and is rejected (std::domain_error).
double pisarenko_single_tone(const TimeSeries& x);

} // namespace dfe
