#include "biharm/problem_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace biharm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(6);
    os << x;
    return os.str();
}

// Least-squares slope of y against x.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    return sxy / sxx;
}

std::vector<double> logspace(double lo, double hi, int count) {
    std::vector<double> out(static_cast<std::size_t>(count));
    const double a = std::log(lo);
    const double b = std::log(hi);
    for (int k = 0; k < count; ++k) out[static_cast<std::size_t>(k)] = std::exp(a + (b - a) * k / (count - 1));
    return out;
}

}  // namespace

// ---------------------------------------------------------------- profiles

RadialProfile RadialProfile::zero() { return RadialProfile{}; }

RadialProfile RadialProfile::constant(double value) {
    if (!(value >= 0.0) || !std::isfinite(value)) throw std::invalid_argument("constant profile must be finite and >= 0");
    RadialProfile p;
    p.kind_ = Kind::Constant;
    p.value_ = value;
    return p;
}

RadialProfile RadialProfile::inverse_power(double alpha, double exponent) {
    if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw std::invalid_argument("inverse_power: alpha must be finite and >= 0");
    if (!(exponent > 0.0) || !std::isfinite(exponent)) throw std::invalid_argument("inverse_power: exponent must be > 0");
    RadialProfile p;
    p.kind_ = Kind::InversePower;
    p.value_ = alpha;
    p.exponent_ = exponent;
    return p;
}

RadialProfile RadialProfile::indicator(double value, double radius) {
    if (!(value >= 0.0) || !std::isfinite(value)) throw std::invalid_argument("indicator: value must be finite and >= 0");
    if (!(radius > 0.0)) throw std::invalid_argument("indicator: radius must be > 0");
    RadialProfile p;
    p.kind_ = Kind::Indicator;
    p.value_ = value;
    p.radius_ = radius;
    return p;
}

RadialProfile RadialProfile::custom(FieldVector samples) {
    if (!samples.grid()) throw std::invalid_argument("custom profile needs samples attached to a grid");
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (!(samples[i] >= 0.0) || !std::isfinite(samples[i])) {
            throw std::invalid_argument("custom profile: samples must be finite and >= 0 (index " + std::to_string(i) + ")");
        }
    }
    RadialProfile p;
    p.kind_ = Kind::Custom;
    p.samples_ = std::move(samples);
    return p;
}

RadialProfile RadialProfile::truncated(double n) const {
    if (!(n > 0.0)) throw std::invalid_argument("truncation level must be > 0");
    RadialProfile p = *this;
    p.cap_ = cap_ ? std::min(*cap_, n) : n;
    return p;
}

FieldVector RadialProfile::sample(const GridPtr& grid) const {
    FieldVector out(grid);
    switch (kind_) {
        case Kind::Zero:
            break;
        case Kind::Constant:
            out = FieldVector::constant(grid, value_);
            break;
        case Kind::InversePower:
            for (std::size_t i = 0; i < out.size(); ++i) out[i] = value_ * std::pow(grid->node(i), -exponent_);
            break;
        case Kind::Indicator:
            for (std::size_t i = 0; i < out.size(); ++i) out[i] = grid->node(i) <= radius_ ? value_ : 0.0;
            break;
        case Kind::Custom:
            require_on_grid(*grid, *samples_);
            out = *samples_;
            break;
    }
    if (cap_) {
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::min(out[i], *cap_);
    }
    return out;
}

bool RadialProfile::is_zero() const {
    switch (kind_) {
        case Kind::Zero:
            return true;
        case Kind::Constant:
        case Kind::InversePower:
        case Kind::Indicator:
            return value_ == 0.0;
        case Kind::Custom:
            return samples_->max_abs() == 0.0;
    }
    return false;
}

std::string RadialProfile::describe() const {
    std::string s;
    switch (kind_) {
        case Kind::Zero: s = "zero"; break;
        case Kind::Constant: s = "constant(" + fmt(value_) + ")"; break;
        case Kind::InversePower: s = "inverse_power(" + fmt(value_) + ", " + fmt(exponent_) + ")"; break;
        case Kind::Indicator: s = "indicator(" + fmt(value_) + ", " + fmt(radius_) + ")"; break;
        case Kind::Custom: s = "custom(" + std::to_string(samples_->size()) + " samples)"; break;
    }
    if (cap_) s = "min(" + s + ", " + fmt(*cap_) + ")";
    return s;
}

void validate_potential(const Potential& a) {
    if (a.kind() == RadialProfile::Kind::InversePower && a.exponent() != 2.0 && a.exponent() != 4.0) {
        throw std::invalid_argument("potential inverse_power exponent must be 2 or 4, got " + fmt(a.exponent()));
    }
}

void validate_source(const SourceTerm& b, const GridPtr& grid) {
    if (b.kind() == RadialProfile::Kind::InversePower && !b.cap() && !(2.0 * b.exponent() < grid->dimension())) {
        throw std::invalid_argument("source |x|^{-s} is not square integrable unless 2 s < N");
    }
    const FieldVector v = b.sample(grid);
    if (v.max() <= 0.0) throw std::invalid_argument("source vanishes identically on the grid");
    const double l2 = weighted_l2_norm(v);
    if (!std::isfinite(l2)) throw std::invalid_argument("source has no finite weighted L^2 norm on the grid");
}

// ------------------------------------------------------------ nonlinearity

Nonlinearity Nonlinearity::zero() { return Nonlinearity{}; }

Nonlinearity Nonlinearity::power(double p) {
    if (!(p > 1.0) || !std::isfinite(p)) {
        throw std::invalid_argument("power nonlinearity needs p > 1 (f'(0) = 0 and convexity), got p = " + fmt(p));
    }
    Nonlinearity f;
    f.kind_ = Kind::Power;
    f.p_ = p;
    return f;
}

Nonlinearity Nonlinearity::exp_reduced() {
    Nonlinearity f;
    f.kind_ = Kind::ExpReduced;
    return f;
}

Nonlinearity Nonlinearity::truncated(double n) const {
    if (!(n > 0.0)) throw std::invalid_argument("truncation level must be > 0");
    Nonlinearity f = *this;
    f.cap_ = cap_ ? std::min(*cap_, n) : n;
    return f;
}

namespace {

// e^t - 1 - t without cancellation for small t.
double exp_reduced_value(double t) {
    if (std::abs(t) < 1e-3) return t * t * (0.5 + t * (1.0 / 6.0 + t * (1.0 / 24.0 + t / 120.0)));
    return std::expm1(t) - t;
}

double exp_reduced_log(double t) {
    if (t <= 0.0) return t == 0.0 ? -kInf : std::log(exp_reduced_value(t));
    if (t < 1e-3) return 2.0 * std::log(t) + std::log(0.5 + t * (1.0 / 6.0 + t * (1.0 / 24.0 + t / 120.0)));
    if (t < 30.0) return std::log(std::expm1(t) - t);
    return t + std::log1p(-(1.0 + t) * std::exp(-t));
}

}  // namespace

double Nonlinearity::value(double t) const {
    double v = 0.0;
    switch (kind_) {
        case Kind::Zero: v = 0.0; break;
        case Kind::Power: v = t <= 0.0 ? 0.0 : std::pow(t, p_); break;
        case Kind::ExpReduced: v = t <= 0.0 ? 0.0 : exp_reduced_value(t); break;
    }
    return cap_ ? std::min(v, *cap_) : v;
}

double Nonlinearity::derivative(double t) const {
    if (t <= 0.0 || kind_ == Kind::Zero) return 0.0;
    if (cap_) {
        const Nonlinearity raw = [&] {
            Nonlinearity r = *this;
            r.cap_.reset();
            return r;
        }();
        if (raw.value(t) >= *cap_) return 0.0;
    }
    switch (kind_) {
        case Kind::Power: return p_ * std::pow(t, p_ - 1.0);
        case Kind::ExpReduced: return std::expm1(t);
        case Kind::Zero: break;
    }
    return 0.0;
}

double Nonlinearity::log_value(double t) const {
    double v = -kInf;
    switch (kind_) {
        case Kind::Zero: v = -kInf; break;
        case Kind::Power: v = t <= 0.0 ? -kInf : p_ * std::log(t); break;
        case Kind::ExpReduced: v = t <= 0.0 ? -kInf : exp_reduced_log(t); break;
    }
    return cap_ ? std::min(v, std::log(*cap_)) : v;
}

double Nonlinearity::elasticity(double t) const {
    switch (kind_) {
        case Kind::Zero: return 0.0;
        case Kind::Power: return p_;
        case Kind::ExpReduced:
            if (t < 1e-3) {
                // t (t + t^2/2 + t^3/6) / (t^2/2 + t^3/6 + t^4/24)
                return (1.0 + t / 2.0 + t * t / 6.0) / (0.5 + t / 6.0 + t * t / 24.0);
            }
            // t / (1 - t / (e^t - 1)); e^t - 1 overflows to inf harmlessly.
            return t / (1.0 - t / std::expm1(t));
    }
    return 0.0;
}

std::string Nonlinearity::describe() const {
    std::string s;
    switch (kind_) {
        case Kind::Zero: s = "zero"; break;
        case Kind::Power: s = "power(" + fmt(p_) + ")"; break;
        case Kind::ExpReduced: s = "exp_reduced"; break;
    }
    if (cap_) s = "min(" + s + ", " + fmt(*cap_) + ")";
    return s;
}

// --------------------------------------------------------------- g(s)

double g_of_s(const Nonlinearity& f, double s) {
    if (f.is_zero()) throw std::invalid_argument("g(s) is undefined for f = 0");
    if (!(s >= 1.0) || !std::isfinite(s)) throw std::invalid_argument("g(s) needs s >= 1");
    const double log_s = std::log(s);
    auto log_ratio = [&](double log_t) {
        const double t = std::exp(log_t);
        const double num = f.log_value(t);
        const double den = f.log_value(std::exp(log_t + log_s));
        if (num == -kInf) return -kInf;
        return num - den;
    };

    constexpr int kSamples = 2000;
    double lo = std::log(1e-6);
    double hi = std::log(1e6);
    const double step = (hi - lo) / (kSamples - 1);
    int best = 0;
    double best_val = -kInf;
    for (int k = 0; k < kSamples; ++k) {
        const double v = log_ratio(lo + step * k);
        if (v > best_val) {
            best_val = v;
            best = k;
        }
    }

    // A sup on the edge of the window is approached as t -> 0 or t -> inf;
    // extend the window one span at a time until the value settles.
    const double log_floor = std::log(1e-280);
    const double log_ceiling = std::log(1e280);
    for (int edge : {0, kSamples - 1}) {
        if (best != edge) continue;
        const double dir = edge == 0 ? -1.0 : 1.0;
        double origin = edge == 0 ? lo : hi;
        while (true) {
            double chunk_best = -kInf;
            double chunk_arg = origin;
            for (int k = 1; k < kSamples; ++k) {
                const double x = origin + dir * step * k;
                if (x < log_floor || x > log_ceiling) break;
                const double v = log_ratio(x);
                if (v > chunk_best) {
                    chunk_best = v;
                    chunk_arg = x;
                }
            }
            if (!(chunk_best > best_val + 1e-12)) break;
            best_val = chunk_best;
            origin = chunk_arg;
            if (origin - step < log_floor || origin + step > log_ceiling) break;
        }
        if (origin != (edge == 0 ? lo : hi)) {
            lo = origin - step;
            hi = origin + step;
            best = -1;
        }
        break;
    }

    // Golden-section refinement on the neighbouring interval.
    double a = best < 0 ? lo : lo + step * std::max(best - 1, 0);
    double b = best < 0 ? hi : lo + step * std::min(best + 1, kSamples - 1);
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - phi * (b - a);
    double d = a + phi * (b - a);
    double fc = log_ratio(c);
    double fd = log_ratio(d);
    for (int it = 0; it < 60 && b - a > 1e-12; ++it) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = log_ratio(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = log_ratio(d);
        }
    }
    best_val = std::max({best_val, fc, fd});
    return std::min(std::exp(best_val), 1.0);
}

// ------------------------------------------------------ hypothesis check

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "pass";
        case Verdict::Fail: return "fail";
        case Verdict::Inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

bool FAssumptionReport::all_pass() const {
    return structural && superlinear.verdict == Verdict::Pass && g_integrable.verdict == Verdict::Pass &&
           kg_vanishes.verdict == Verdict::Pass && growth_ratio.verdict == Verdict::Pass;
}

FAssumptionReport check_f_assumptions(const Nonlinearity& f) {
    FAssumptionReport rep;

    // Structural: f(0) = 0 = f'(0), nondecreasing, convex on [0, 10].
    {
        bool ok = f.value(0.0) == 0.0 && f.derivative(0.0) == 0.0;
        std::string note = ok ? "" : "f(0) or f'(0) nonzero; ";
        constexpr int kPts = 201;
        std::vector<double> v(kPts);
        for (int k = 0; k < kPts; ++k) v[static_cast<std::size_t>(k)] = f.value(10.0 * k / (kPts - 1));
        const double scale = std::max(1.0, std::abs(v.back()));
        for (int k = 1; k < kPts; ++k) {
            if (v[k] < v[k - 1] - 1e-10 * scale) {
                ok = false;
                note += "decreasing near t = " + fmt(10.0 * k / (kPts - 1)) + "; ";
                break;
            }
        }
        for (int k = 1; k + 1 < kPts; ++k) {
            if (v[k + 1] - 2.0 * v[k] + v[k - 1] < -1e-10 * scale) {
                ok = false;
                note += "second difference negative near t = " + fmt(10.0 * k / (kPts - 1)) + "; ";
                break;
            }
        }
        if (f.is_zero()) note += "f vanishes identically; ";
        rep.structural = ok;
        rep.structural_note = note.empty() ? "f(0) = 0 = f'(0), nondecreasing, convex on [0, 10]" : note;
    }

    if (f.is_zero()) {
        for (VerdictEvidence* e : {&rep.superlinear, &rep.g_integrable, &rep.kg_vanishes, &rep.growth_ratio}) {
            e->verdict = Verdict::Fail;
            e->note = "f vanishes identically";
        }
        return rep;
    }

    // f(t)/t -> infinity: sampled at t = 10^k, slope of log(f/t) over the tail.
    {
        std::vector<double> lx, ly;
        for (int k = 0; k <= 6; ++k) {
            const double t = std::pow(10.0, k);
            const double log_ratio = f.log_value(t) - std::log(t);
            rep.superlinear.samples.emplace_back(t, std::exp(std::min(log_ratio, 700.0)));
            if (k >= 3) {
                lx.push_back(std::log(t));
                ly.push_back(log_ratio);
            }
        }
        const double slope = fit_slope(lx, ly);
        rep.superlinear.fitted = slope;
        if (slope > 1e-3) {
            rep.superlinear.verdict = Verdict::Pass;
            rep.superlinear.note = "log(f(t)/t) grows with slope " + fmt(slope) + " in log t";
        } else if (slope < -1e-3) {
            rep.superlinear.verdict = Verdict::Fail;
            rep.superlinear.note = "f(t)/t decays with slope " + fmt(slope);
        } else {
            rep.superlinear.verdict = Verdict::Inconclusive;
            rep.superlinear.note = "f(t)/t nearly flat on the sampled range (slope " + fmt(slope) + ")";
        }
    }

    // g on s in [1, 1e6], 100 points per decade.
    const std::vector<double> s = logspace(1.0, 1e6, 601);
    std::vector<double> g(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) g[i] = g_of_s(f, s[i]);

    auto tail_slope = [&](double from, double to) {
        std::vector<double> lx, ly;
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (s[i] >= from * (1 - 1e-12) && s[i] <= to * (1 + 1e-12) && g[i] > 0.0) {
                lx.push_back(std::log(s[i]));
                ly.push_back(std::log(g[i]));
            }
        }
        if (lx.size() < 2) return std::numeric_limits<double>::quiet_NaN();
        return fit_slope(lx, ly);
    };
    const double q_last = tail_slope(1e5, 1e6);
    const double q_prev = tail_slope(1e4, 1e5);
    const bool stable = std::isfinite(q_last) && std::isfinite(q_prev) && std::abs(q_last - q_prev) <= 0.05;

    // int_1^S g ds by the trapezoid rule, plus the fitted power-law tail.
    {
        double integral = 0.0;
        for (std::size_t i = 1; i < s.size(); ++i) integral += 0.5 * (g[i] + g[i - 1]) * (s[i] - s[i - 1]);
        double max_sg = 0.0;
        double argmax = 1.0;
        for (std::size_t i = 1; i < s.size(); ++i) {
            if (s[i] * g[i] > max_sg) {
                max_sg = s[i] * g[i];
                argmax = s[i];
            }
        }
        for (std::size_t i = 0; i < s.size(); i += 100) rep.g_integrable.samples.emplace_back(s[i], g[i]);
        rep.g_integrable.fitted = q_last;

        if (!(max_sg < 1.0)) {
            rep.g_integrable.verdict = Verdict::Fail;
            rep.g_integrable.note = "s g(s) reaches " + fmt(max_sg) + " at s = " + fmt(argmax);
            rep.g_integral = kInf;
        } else if (!stable) {
            rep.g_integrable.verdict = Verdict::Inconclusive;
            rep.g_integrable.note = "tail fit unstable: exponents " + fmt(q_prev) + " and " + fmt(q_last);
            rep.g_integral = integral;
        } else if (q_last < -1.0 - 1e-3) {
            const double tail = -g.back() * s.back() / (q_last + 1.0);
            rep.g_integral = integral + tail;
            rep.g_integrable.verdict = Verdict::Pass;
            rep.g_integrable.note = "tail exponent " + fmt(q_last) + ", integral " + fmt(rep.g_integral) +
                                    ", max s g(s) = " + fmt(max_sg);
        } else if (q_last > -1.0 + 1e-3) {
            rep.g_integral = kInf;
            rep.g_integrable.verdict = Verdict::Fail;
            rep.g_integrable.note = "tail exponent " + fmt(q_last) + " >= -1: integral diverges";
        } else {
            rep.g_integral = integral;
            rep.g_integrable.verdict = Verdict::Inconclusive;
            rep.g_integrable.note = "tail exponent " + fmt(q_last) + " within 1e-3 of -1";
        }
    }

    // K g(K) -> 0: exponent of K g(K) is q + 1.
    {
        for (std::size_t i = 0; i < s.size(); i += 100) rep.kg_vanishes.samples.emplace_back(s[i], s[i] * g[i]);
        const double e = q_last + 1.0;
        rep.kg_vanishes.fitted = e;
        bool decreasing = true;
        for (std::size_t k = 1; k < rep.kg_vanishes.samples.size(); ++k) {
            if (rep.kg_vanishes.samples[k].second > rep.kg_vanishes.samples[k - 1].second * (1 + 1e-9)) decreasing = false;
        }
        if (!stable) {
            rep.kg_vanishes.verdict = Verdict::Inconclusive;
            rep.kg_vanishes.note = "tail fit unstable";
        } else if (e < -1e-3 && decreasing) {
            rep.kg_vanishes.verdict = Verdict::Pass;
            rep.kg_vanishes.note = "K g(K) decays like K^" + fmt(e);
        } else if (e > 1e-3) {
            rep.kg_vanishes.verdict = Verdict::Fail;
            rep.kg_vanishes.note = "K g(K) grows like K^" + fmt(e);
        } else {
            rep.kg_vanishes.verdict = Verdict::Inconclusive;
            rep.kg_vanishes.note = "K g(K) exponent " + fmt(e) + " indistinguishable from 0";
        }
    }

    // lim s f'(s)/f(s) > 1.
    {
        for (int k = 0; k <= 6; ++k) {
            const double t = std::pow(10.0, k);
            rep.growth_ratio.samples.emplace_back(t, f.elasticity(t));
        }
        const double lim = rep.growth_ratio.samples.back().second;
        rep.growth_ratio.fitted = lim;
        if (lim > 1.0 + 1e-3) {
            rep.growth_ratio.verdict = Verdict::Pass;
            rep.growth_ratio.note = "s f'(s)/f(s) = " + fmt(lim) + " at s = 1e6";
        } else if (lim < 1.0 - 1e-3) {
            rep.growth_ratio.verdict = Verdict::Fail;
            rep.growth_ratio.note = "s f'(s)/f(s) = " + fmt(lim) + " < 1";
        } else {
            rep.growth_ratio.verdict = Verdict::Inconclusive;
            rep.growth_ratio.note = "s f'(s)/f(s) = " + fmt(lim) + " within 1e-3 of 1";
        }
    }
    return rep;
}

// ------------------------------------------------------------------ spec

SampledProblem sample(const ProblemSpec& spec) {
    return SampledProblem{spec.potential.sample(spec.grid), spec.source.sample(spec.grid),
                          spec.coefficient ? spec.coefficient->sample(spec.grid)
                                           : FieldVector::constant(spec.grid, 1.0)};
}

GammaEstimate estimate_gamma(const GridPtr& grid, const Potential& a) {
    validate_potential(a);
    const NavierBiharmonicOperator op(grid);
    FieldVector p = a.sample(grid);
    double pmax = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        p[i] *= p[i];
        pmax = std::max(pmax, p[i]);
    }
    const WeightedPencil pencil(op, std::move(p));
    EigenOptions opt;
    opt.initial_shift = -pmax;
    GammaEstimate est;
    est.spectral = smallest_eigenpair(pencil, opt);
    est.hypothesis_holds = est.spectral.eigenvalue > 0.0;
    est.message = est.hypothesis_holds ? "coercivity hypothesis holds (gamma_hat = " + fmt(est.spectral.eigenvalue) + ")"
                                       : "coercivity hypothesis fails (gamma_hat <= 0)";
    return est;
}

SpectralEstimate estimate_gamma_tilde(const GridPtr& grid, const Potential& a, double mu,
                                      std::optional<double> gamma_hat) {
    if (!(mu >= 0.0)) throw std::invalid_argument("mu must be >= 0");
    if (!gamma_hat) gamma_hat = estimate_gamma(grid, a).value();
    if (!(*gamma_hat > 0.0)) throw HypothesisError("coercivity hypothesis fails (gamma_hat <= 0)");
    if (!a.is_zero() && mu >= std::sqrt(*gamma_hat)) {
        throw HypothesisError("mu = " + fmt(mu) + " violates mu < sqrt(gamma_hat) = " + fmt(std::sqrt(*gamma_hat)));
    }
    const NavierBiharmonicOperator op(grid);
    FieldVector p = a.sample(grid);
    p *= mu;
    EigenOptions opt;
    opt.initial_shift = -p.max();
    const WeightedPencil pencil(op, std::move(p));
    SpectralEstimate est = smallest_eigenpair(pencil, opt);
    if (!(est.eigenvalue > 0.0)) {
        throw HypothesisError("first eigenvalue of Delta^2 - mu a is not positive (" + fmt(est.eigenvalue) + ")");
    }
    return est;
}

double rellich_constant(int dimension) {
    const double abar = dimension * (dimension - 4) / 4.0;
    return abar * abar;
}

RellichEstimate estimate_rellich(const GridPtr& grid) {
    const NavierBiharmonicOperator op(grid);
    FieldVector mass = FieldVector::from_radial(grid, [](double r) { return std::pow(r, -4.0); });
    const WeightedPencil pencil(op, FieldVector(grid), std::move(mass));
    EigenOptions opt;
    opt.initial_shift = 0.0;
    RellichEstimate est;
    est.spectral = smallest_eigenpair(pencil, opt);
    est.value = est.spectral.eigenvalue;
    est.target = rellich_constant(grid->dimension());
    return est;
}

ProblemSpec truncate(const ProblemSpec& spec, double n) {
    if (!(n >= 1.0)) throw std::invalid_argument("truncation level must be >= 1");
    ProblemSpec out = spec;
    out.potential = spec.potential.truncated(n);
    out.source = spec.source.truncated(n);
    out.nonlinearity = spec.nonlinearity.truncated(n);
    out.gamma_hat.reset();
    return out;
}

namespace {
bool mu_a_vanishes(const ProblemSpec& spec) { return spec.mu == 0.0 || spec.potential.is_zero(); }
}  // namespace

ProblemSpec with_gamma(ProblemSpec spec) {
    if (!mu_a_vanishes(spec) && !spec.gamma_hat) spec.gamma_hat = estimate_gamma(spec.grid, spec.potential).value();
    return spec;
}

double require_admissible(const ProblemSpec& spec) {
    if (!spec.grid) throw std::invalid_argument("problem has no grid");
    if (!(spec.mu >= 0.0) || !std::isfinite(spec.mu)) throw std::invalid_argument("mu must be finite and >= 0");
    if (!(spec.lambda >= 0.0) || !std::isfinite(spec.lambda)) throw std::invalid_argument("lambda must be finite and >= 0");
    validate_potential(spec.potential);
    if (mu_a_vanishes(spec)) return kInf;
    const double gamma = spec.gamma_hat ? *spec.gamma_hat : estimate_gamma(spec.grid, spec.potential).value();
    if (!(gamma > 0.0)) throw HypothesisError("coercivity hypothesis fails (gamma_hat <= 0)");
    if (spec.mu >= std::sqrt(gamma)) {
        throw HypothesisError("mu = " + fmt(spec.mu) + " violates mu < sqrt(gamma_hat) = " + fmt(std::sqrt(gamma)));
    }
    return gamma;
}

}  // namespace biharm
