#include "dfe/parametric.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "angle_util.hpp"
#include "dfe/fft.hpp"
#include "dfe/preprocess.hpp"

namespace dfe {

double SinusoidTrendModel::eval(double t) const {
    return intercept + slope_per_s * t + amplitude * std::sin(kTwoPi * frequency_hz * t + phase_rad);
}

SimplexResult nelder_mead(const std::function<double(const std::vector<double>&)>& objective,
                          const std::vector<double>& x0, const std::vector<double>& scale,
                          double tol, std::size_t max_iter) {
    const std::size_t dim = x0.size();
    if (dim < 1) throw std::invalid_argument("nelder_mead: dimension must be >= 1");
    if (scale.size() != dim) throw std::invalid_argument("nelder_mead: scale size must match x0");
    for (double s : scale)
        if (!(s > 0.0)) throw std::invalid_argument("nelder_mead: scale entries must be positive");

    auto eval = [&](const std::vector<double>& p) {
        const double f = objective(p);
        if (!std::isfinite(f)) throw std::domain_error("nelder_mead: objective not finite");
        return f;
    };

    std::vector<std::vector<double>> v(dim + 1, x0);
    for (std::size_t i = 0; i < dim; ++i) v[i + 1][i] += scale[i];
    std::vector<double> f(dim + 1);
    for (std::size_t i = 0; i <= dim; ++i) f[i] = eval(v[i]);

    SimplexResult res;
    res.x_min = v[0];
    res.f_min = f[0];
    auto note_best = [&](const std::vector<double>& p, double fp) {
        if (fp < res.f_min) {
            res.f_min = fp;
            res.x_min = p;
        }
    };
    for (std::size_t i = 0; i <= dim; ++i) note_best(v[i], f[i]);

    std::vector<std::size_t> order(dim + 1);
    for (std::size_t it = 0; it < max_iter; ++it) {
        for (std::size_t i = 0; i <= dim; ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return f[a] < f[b]; });
        const std::size_t best = order[0], second_worst = order[dim - 1], worst = order[dim];

        // objective spread alone stalls on exact ties (symmetric objectives),
        // so the simplex extent must have collapsed as well; the 1e-12
        // denominator floor keeps zero-minimum objectives terminable
        const double spread =
            2.0 * std::fabs(f[worst] - f[best]) / (std::fabs(f[worst]) + std::fabs(f[best]) + 1e-12);
        bool collapsed = true;
        for (std::size_t i = 0; i <= dim && collapsed; ++i)
            for (std::size_t d = 0; d < dim; ++d)
                if (std::fabs(v[i][d] - v[best][d]) > tol * (1.0 + std::fabs(v[best][d]))) {
                    collapsed = false;
                    break;
                }
        if (spread <= tol && collapsed) {
            res.converged = true;
            res.iterations = it;
            return res;
        }

        std::vector<double> centroid(dim, 0.0);
        for (std::size_t i = 0; i <= dim; ++i) {
            if (i == worst) continue;
            for (std::size_t d = 0; d < dim; ++d) centroid[d] += v[i][d];
        }
        for (double& c : centroid) c /= static_cast<double>(dim);

        auto point = [&](double coeff) {
            std::vector<double> p(dim);
            for (std::size_t d = 0; d < dim; ++d)
                p[d] = centroid[d] + coeff * (centroid[d] - v[worst][d]);
            return p;
        };

        const auto reflected = point(1.0);
        const double f_reflected = eval(reflected);
        note_best(reflected, f_reflected);

        if (f_reflected < f[best]) {
            const auto expanded = point(2.0);
            const double f_expanded = eval(expanded);
            note_best(expanded, f_expanded);
            if (f_expanded < f_reflected) {
                v[worst] = expanded;
                f[worst] = f_expanded;
            } else {
                v[worst] = reflected;
                f[worst] = f_reflected;
            }
        } else if (f_reflected < f[second_worst]) {
            v[worst] = reflected;
            f[worst] = f_reflected;
        } else {
            const bool outside = f_reflected < f[worst];
            const auto contracted = point(outside ? 0.5 : -0.5);
            const double f_contracted = eval(contracted);
            note_best(contracted, f_contracted);
            if (f_contracted < (outside ? f_reflected : f[worst])) {
                v[worst] = contracted;
                f[worst] = f_contracted;
            } else {
                for (std::size_t i = 0; i <= dim; ++i) {
                    if (i == best) continue;
                    for (std::size_t d = 0; d < dim; ++d)
                        v[i][d] = v[best][d] + 0.5 * (v[i][d] - v[best][d]);
                    f[i] = eval(v[i]);
                    note_best(v[i], f[i]);
                }
            }
        }
        res.iterations = it + 1;
    }
    return res;
}

namespace {

struct InnerFit {
    double sse = 0.0;
    double intercept = 0.0;
    double slope = 0.0;
    double sin_coef = 0.0;
    double cos_coef = 0.0;
};

// Solve the 4x4 normal equations for the basis {1, t, sin(2*pi*f*t),
// cos(2*pi*f*t)}; falls back to the plain line when the system degenerates.
InnerFit profile_fit(const TimeSeries& x, double freq_hz) {
    const std::size_t n = x.size();
    std::array<std::array<double, 4>, 4> m{};
    std::array<double, 4> rhs{};

    for (std::size_t k = 0; k < n; ++k) {
        const double t = x.time_at(k);
        const double arg = kTwoPi * freq_hz * t;
        const std::array<double, 4> basis{1.0, t, std::sin(arg), std::cos(arg)};
        for (std::size_t i = 0; i < 4; ++i) {
            rhs[i] += basis[i] * x.samples[k];
            for (std::size_t j = i; j < 4; ++j) m[i][j] += basis[i] * basis[j];
        }
    }
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < i; ++j) m[i][j] = m[j][i];

    double scale = 0.0;
    for (const auto& row : m)
        for (double v : row) scale = std::max(scale, std::fabs(v));

    // Gaussian elimination with partial pivoting
    std::array<std::array<double, 5>, 4> a{};
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) a[i][j] = m[i][j];
        a[i][4] = rhs[i];
    }
    bool singular = false;
    for (std::size_t col = 0; col < 4 && !singular; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < 4; ++r)
            if (std::fabs(a[r][col]) > std::fabs(a[pivot][col])) pivot = r;
        if (std::fabs(a[pivot][col]) <= 1e-13 * scale) {
            singular = true;
            break;
        }
        std::swap(a[col], a[pivot]);
        for (std::size_t r = col + 1; r < 4; ++r) {
            const double factor = a[r][col] / a[col][col];
            for (std::size_t j = col; j < 5; ++j) a[r][j] -= factor * a[col][j];
        }
    }

    InnerFit fit;
    if (!singular) {
        std::array<double, 4> sol{};
        for (std::size_t i = 4; i-- > 0;) {
            double v = a[i][4];
            for (std::size_t j = i + 1; j < 4; ++j) v -= a[i][j] * sol[j];
            sol[i] = v / a[i][i];
        }
        fit.intercept = sol[0];
        fit.slope = sol[1];
        fit.sin_coef = sol[2];
        fit.cos_coef = sol[3];
    } else {
        const auto line = detrend_linear(x);
        fit.intercept = line.intercept;
        fit.slope = line.slope_per_s;
    }

    for (std::size_t k = 0; k < n; ++k) {
        const double t = x.time_at(k);
        const double arg = kTwoPi * freq_hz * t;
        const double r = x.samples[k] - (fit.intercept + fit.slope * t + fit.sin_coef * std::sin(arg) +
                                         fit.cos_coef * std::cos(arg));
        fit.sse += r * r;
    }
    return fit;
}

} // namespace

FitResult fit_trend_sinusoid(const TimeSeries& x, std::optional<double> d_hint) {
    if (x.size() < 8) throw std::invalid_argument("fit_trend_sinusoid: need at least 8 samples");
    if (d_hint && !(*d_hint > 0.0))
        throw std::invalid_argument("fit_trend_sinusoid: d_hint must be positive");

    const double T = x.duration_s();
    const double d_lo = 0.1 / T;
    const double d_hi = std::max(3.0 / T, d_hint ? 2.0 * *d_hint : 0.0);

    // coarse log-spaced grid seeds the one-dimensional simplex
    constexpr std::size_t kGridSize = 50;
    const double log_lo = std::log(d_lo);
    const double log_step = (std::log(d_hi) - log_lo) / static_cast<double>(kGridSize - 1);
    double best_u = log_lo;
    double best_sse = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < kGridSize; ++i) {
        const double u = log_lo + log_step * static_cast<double>(i);
        const double sse = profile_fit(x, std::exp(u)).sse;
        if (sse < best_sse) {
            best_sse = sse;
            best_u = u;
        }
    }

    const double line_sse = [&] {
        const auto line = detrend_linear(x);
        double s = 0.0;
        for (double v : line.detrended.samples) s += v * v;
        return s;
    }();
    auto objective = [&](const std::vector<double>& u) {
        const double d = std::exp(u[0]);
        if (!std::isfinite(d) || d <= 0.0) return line_sse;  // saturate far outside the band
        return profile_fit(x, d).sse;
    };

    FitResult result;
    std::size_t attempts = 0;
    for (; attempts < 3; ++attempts) {
        const double nudge = attempts == 0 ? 0.0 : (attempts == 1 ? 0.5 : -0.5) * log_step;
        const auto simplex =
            nelder_mead(objective, {best_u + nudge}, {std::max(log_step, 1e-6)});
        result.iterations += simplex.iterations;
        if (simplex.f_min <= best_sse) {
            best_sse = simplex.f_min;
            best_u = simplex.x_min[0];
        }
        if (simplex.converged) {
            result.converged = true;
            break;
        }
    }
    result.restarts_used = attempts == 0 ? 0 : (result.converged ? attempts : attempts - 1);

    const double d_star = std::exp(best_u);
    const InnerFit fit = profile_fit(x, d_star);
    result.model.intercept = fit.intercept;
    result.model.slope_per_s = fit.slope;
    result.model.amplitude = std::hypot(fit.sin_coef, fit.cos_coef);
    result.model.frequency_hz = d_star;
    result.model.phase_rad =
        result.model.amplitude > 0.0 ? detail::wrap_to_pi(std::atan2(fit.cos_coef, fit.sin_coef)) : 0.0;
    result.sse = fit.sse;
    return result;
}

double pisarenko_single_tone(const TimeSeries& x) {
    if (x.size() < 16) throw std::invalid_argument("pisarenko_single_tone: need at least 16 samples");

    const auto det = detrend_linear(x);
    const auto& d = det.detrended.samples;
    const double n = static_cast<double>(d.size());

    double r0 = 0.0, r1 = 0.0, r2 = 0.0;
    for (std::size_t k = 0; k < d.size(); ++k) {
        r0 += d[k] * d[k];
        if (k + 1 < d.size()) r1 += d[k] * d[k + 1];
        if (k + 2 < d.size()) r2 += d[k] * d[k + 2];
    }
    r0 /= n;
    r1 /= n;
    r2 /= n;

    // the detrend step leaves ~1e-8 * r0 of correlated residue on an exact
    // quarter-rate tone at n_s = 1024, so the vanishing test sits well above
    // that floor
    if (std::fabs(r1) <= 1e-6 * r0)
        throw std::domain_error(
            "pisarenko_single_tone: quarter-rate ambiguity: lag-1 autocorrelation vanishes");

    double arg = (r2 + std::sqrt(r2 * r2 + 8.0 * r1 * r1)) / (4.0 * r1);
    arg = std::clamp(arg, -1.0, 1.0);
    return std::acos(arg) * x.rate_hz / kTwoPi;
}

} // namespace dfe
