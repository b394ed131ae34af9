#include "biharm/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <numeric>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "biharm/extremal.hpp"
#include "biharm/kernels.hpp"
#include "biharm/operators.hpp"
#include "biharm/stability.hpp"

namespace biharm::cli {

namespace {

/// A module error tagged with the operation that raised it.
class OperationError : public std::runtime_error {
public:
    OperationError(std::string op, const std::string& what)
        : std::runtime_error(what), operation(std::move(op)) {}
    std::string operation;
};

using Clock = std::chrono::steady_clock;

template <class F>
auto timed(Report& report, const std::string& name, F&& fn) {
    const auto t0 = Clock::now();
    auto stop = [&] {
        report.timing(name, std::chrono::duration<double, std::milli>(Clock::now() - t0).count());
    };
    try {
        if constexpr (std::is_void_v<decltype(fn())>) {
            fn();
            stop();
        } else {
            auto out = fn();
            stop();
            return out;
        }
    } catch (const OperationError&) {
        throw;
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw OperationError(name, e.what());
    }
}

Json real(double x) {
    if (std::isfinite(x)) return x;
    if (std::isnan(x)) return "nan";
    return x > 0 ? "inf" : "-inf";
}

Json reals(const std::vector<double>& xs) {
    Json a = Json::array();
    for (double x : xs) a.push_back(real(x));
    return a;
}

Json iteration_json(const IterationReport& r, bool with_ratios = false) {
    Json j;
    j["outcome"] = to_string(r.outcome);
    j["iterations"] = r.iterations;
    j["monotone"] = r.monotone;
    j["min_increment"] = real(r.min_increment);
    j["max_ratio"] = real(r.max_ratio());
    j["residual"] = real(r.residual);
    j["sup_norm"] = real(r.sup_norms.empty() ? 0.0 : r.sup_norms.back());
    j["h2_seminorm"] = real(r.h2_seminorms.empty() ? 0.0 : r.h2_seminorms.back());
    if (with_ratios) j["ratios"] = reals(r.ratios);
    if (!r.note.empty()) j["note"] = r.note;
    return j;
}

Json spectral_json(const SpectralEstimate& s) {
    Json j;
    j["eigenvalue"] = real(s.eigenvalue);
    j["residual"] = real(s.residual);
    j["iterations"] = s.iterations;
    j["certified"] = s.certified;
    if (s.second_eigenvalue) j["second_eigenvalue"] = real(*s.second_eigenvalue);
    return j;
}

Json verdict_json(const VerdictEvidence& v) {
    Json j;
    j["verdict"] = to_string(v.verdict);
    j["fitted"] = real(v.fitted);
    j["note"] = v.note;
    return j;
}

bool mu_a_vanishes(const ProblemSpec& s) { return s.mu == 0.0 || s.potential.is_zero(); }

void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << text;
}

struct Options {
    std::string config;
    std::string report;
    std::string profile;
    std::string table;
    std::optional<double> lambda;
    std::string lambda_grid;
    std::string meshes = "250,500,1000,2000";
    std::string n_ladder = "10,100,1000,10000";
    double lambda_lo = 1.0;
    double lambda_hi = 10.0;
    double rel_width = 1e-3;
    int ladder_steps = 10;
    int ladder_count = 10;
    bool parallel = false;
};

/// Spec with gamma_hat cached; raises the hypothesis gate.
ProblemSpec gated(Report& report, const ProblemSpec& spec) {
    ProblemSpec s = timed(report, "estimate_gamma", [&] { return with_gamma(spec); });
    const double g = timed(report, "hypothesis_gate", [&] { return require_admissible(s); });
    Json& h = report.body()["hypotheses"];
    h["gamma_hat"] = real(g);
    h["sqrt_gamma_hat"] = real(std::sqrt(g));
    h["mu"] = s.mu;
    h["mu_admissible"] = true;
    return s;
}

// ---------------------------------------------------------------- check

void cmd_check(Report& report, const ProblemConfig& cfg, const Options&) {
    const ProblemSpec& spec = cfg.spec;
    Json& h = report.body()["hypotheses"];

    const FAssumptionReport fa = timed(report, "check_f_assumptions", [&] { return check_f_assumptions(spec.nonlinearity); });
    Json fj;
    fj["nonlinearity"] = spec.nonlinearity.describe();
    fj["structural"] = fa.structural;
    fj["structural_note"] = fa.structural_note;
    fj["superlinear"] = verdict_json(fa.superlinear);
    fj["g_integrable"] = verdict_json(fa.g_integrable);
    fj["kg_vanishes"] = verdict_json(fa.kg_vanishes);
    fj["growth_ratio"] = verdict_json(fa.growth_ratio);
    fj["g_integral"] = real(fa.g_integral);
    fj["all_pass"] = fa.all_pass();
    h["f_assumptions"] = fj;

    const GammaEstimate gamma = timed(report, "estimate_gamma", [&] { return estimate_gamma(spec.grid, spec.potential); });
    Json gj = spectral_json(gamma.spectral);
    gj["holds"] = gamma.hypothesis_holds;
    if (!gamma.message.empty()) gj["message"] = gamma.message;
    h["gamma_hat"] = gj;
    h["sqrt_gamma_hat"] = gamma.hypothesis_holds ? real(std::sqrt(gamma.value())) : Json(nullptr);
    h["mu"] = spec.mu;
    report.check("coercivity", gamma.hypothesis_holds,
                 gamma.hypothesis_holds ? "" : "coercivity hypothesis fails (gamma_hat <= 0)");

    const bool vanishes = mu_a_vanishes(spec);
    const bool admissible = vanishes || (gamma.hypothesis_holds && spec.mu < std::sqrt(gamma.value()));
    h["mu_admissible"] = admissible;
    report.check("mu_admissible", admissible, admissible ? "" : "mu >= sqrt(gamma_hat)");

    if (admissible && !vanishes) {
        const SpectralEstimate gt = timed(report, "estimate_gamma_tilde", [&] {
            return estimate_gamma_tilde(spec.grid, spec.potential, spec.mu, gamma.value());
        });
        h["gamma_tilde"] = spectral_json(gt);
        report.check("gamma_tilde_positive", gt.eigenvalue > 0.0);
    } else {
        h["gamma_tilde"] = nullptr;
    }
}

// ---------------------------------------------------------------- rellich

void cmd_rellich(Report& report, const ProblemConfig& cfg, const Options& opt) {
    const std::vector<double> meshes = parse_real_list(opt.meshes, "--meshes");
    const int n = cfg.spec.grid->dimension();
    const double radius = cfg.spec.grid->radius();
    Json rows = Json::array();
    bool lower = true;
    bool monotone = true;
    double previous = INFINITY;
    double last = 0.0;
    const double target = rellich_constant(n);
    for (double m : meshes) {
        if (m != std::floor(m) || m < 8) throw ConfigError("--meshes: entries must be integers >= 8");
        const GridPtr grid = build_grid(n, radius, static_cast<int>(m));
        const RellichEstimate est = timed(report, "estimate_rellich M=" + std::to_string(static_cast<int>(m)),
                                          [&] { return estimate_rellich(grid); });
        Json row = spectral_json(est.spectral);
        row["M"] = static_cast<int>(m);
        row["value"] = real(est.value);
        row["relative_gap"] = real((est.value - target) / target);
        rows.push_back(row);
        if (est.value < target * (1.0 - 1e-9)) lower = false;
        if (est.value > previous * (1.0 + 1e-9)) monotone = false;
        previous = est.value;
        last = est.value;
    }
    Json& b = report.body()["rellich"];
    b["target"] = target;
    b["rows"] = rows;
    b["finest_relative_gap"] = real((last - target) / target);
    report.check("rellich_lower_bound", lower, "every estimate >= N^2 (N - 4)^2 / 16");
    report.check("rellich_monotone", monotone, "estimates nonincreasing under refinement");
}

// ---------------------------------------------------------------- zeta1

void cmd_zeta1(Report& report, const ProblemConfig& cfg, const Options& opt) {
    const ProblemSpec spec = gated(report, cfg.spec);
    const IterationReport z = timed(report, "solve_zeta1", [&] { return solve_zeta1(spec, cfg.controls); });
    Json& b = report.body()["zeta1"];
    b = iteration_json(z, true);
    const bool vanishes = mu_a_vanishes(spec);
    const double bound = vanishes ? 0.0 : spec.mu / std::sqrt(*spec.gamma_hat);
    b["contraction_bound"] = bound;
    report.check("zeta1_converged", z.converged(), to_string(z.outcome));
    report.check("iterates_monotone", z.monotone);
    if (z.converged()) {
        b["peak"] = real(z.u.max());
        report.check("zeta1_positive", z.u.min() > 0.0);
        report.check("contraction_ratio", z.max_ratio() <= bound + 0.05,
                     "max ratio " + format_real(z.max_ratio()) + " vs bound " + format_real(bound + 0.05));
        if (!opt.profile.empty()) {
            std::ostringstream csv;
            write_profile_csv(csv, z.u, z.w, 1.0);
            write_text(opt.profile, csv.str());
        }
    }
}

// ---------------------------------------------------------------- solve

void cmd_solve(Report& report, const ProblemConfig& cfg, const Options& opt) {
    const ProblemSpec spec = gated(report, cfg.spec);
    const IterationControls& ctl = cfg.controls;
    const IterationReport z = timed(report, "solve_zeta1", [&] { return solve_zeta1(spec, ctl); });
    report.check("zeta1_converged", z.converged(), to_string(z.outcome));
    if (!z.converged()) return;

    const IterationReport r = timed(report, "solve_minimal", [&] { return solve_minimal(spec, ctl); });
    Json& b = report.body();
    b["lambda"] = spec.lambda;
    b["solve"] = iteration_json(r);
    report.check("iterates_monotone", r.monotone);

    const ExistenceVerdict ex = timed(report, "check_existence_condition",
                                      [&] { return check_existence_condition(spec, z.u, ctl); });
    Json ej;
    ej["l2_finite"] = ex.l2_finite;
    ej["holds"] = ex.holds;
    ej["margin"] = real(ex.margin);
    ej["witness"] = ex.witness ? Json(*ex.witness) : Json(nullptr);
    Json eps = Json::array();
    for (const EpsilonBound& e : ex.epsilon_bounds) {
        eps.push_back({{"epsilon", real(e.epsilon)}, {"l2_finite", e.l2_finite}, {"constant", real(e.constant)}});
    }
    ej["epsilon_bounds"] = eps;
    b["existence_condition"] = ej;
    report.check("existence_implies_convergence", !ex.holds || r.converged());

    if (!r.converged()) {
        b["profile"] = "not written: " + to_string(r.outcome);
        return;
    }
    report.check("fixed_point_residual", r.residual <= 10.0 * ctl.rel_tol,
                 "residual " + format_real(r.residual) + " vs " + format_real(10.0 * ctl.rel_tol));

    const SandwichCheck sw = check_sandwich(r.u, z.u, spec.lambda);
    b["sandwich"] = {{"lower", sw.lower}, {"upper", sw.upper}, {"lower_gap", real(sw.lower_gap)},
                     {"upper_gap", real(sw.upper_gap)}};
    report.check("lower_barrier", sw.lower, "u >= lambda zeta_1");

    const EnergyReport en = timed(report, "energy_identity_check", [&] { return energy_identity_check(spec, r.u); });
    Json pj = Json::array();
    for (const EpsilonPair& p : en.pairs) pj.push_back({{"epsilon", p.epsilon}, {"constant", real(p.constant)}});
    b["energy"] = {{"stiffness", real(en.stiffness)},
                   {"potential_term", real(en.potential_term)},
                   {"nonlinear_term", real(en.nonlinear_term)},
                   {"source_term", real(en.source_term)},
                   {"linearized_term", real(en.linearized_term)},
                   {"identity_defect", real(en.identity_defect)},
                   {"pairs", pj}};
    report.check("energy_identity", en.identity_holds, "relative defect " + format_real(en.identity_defect));
    report.check("stability_inequality", en.stability_inequality);
    b["weak_form_defect"] = real(timed(report, "weak_form_defect", [&] { return weak_form_defect(spec, r.u); }));

    if (spec.nonlinearity.is_zero()) {
        FieldVector scaled = z.u;
        scaled *= spec.lambda;
        const double diff = kernels::parallel::max_abs_diff(r.u.values(), scaled.values());
        const double tol = std::max(1e-9, 100.0 * ctl.rel_tol) * std::max(scaled.max_abs(), 1e-300);
        report.check("linear_scaling", diff <= tol, "max |u - lambda zeta_1| = " + format_real(diff));
    }
    if (!opt.profile.empty()) {
        std::ostringstream csv;
        write_profile_csv(csv, r.u, r.w, spec.lambda);
        write_text(opt.profile, csv.str());
    }
}

// ---------------------------------------------------------------- sweep

void cmd_sweep(Report& report, const ProblemConfig& cfg, const Options& opt) {
    if (opt.lambda_grid.empty()) throw ConfigError("sweep: --lambda-grid is required");
    const std::vector<double> grid = parse_real_list(opt.lambda_grid, "--lambda-grid");
    for (double l : grid) {
        if (l < 0.0) throw ConfigError("--lambda-grid: entries must be >= 0");
    }
    const ProblemSpec base = gated(report, cfg.spec);
    const auto n = static_cast<long>(grid.size());
    std::vector<IterationReport> reps(grid.size());
    std::vector<std::exception_ptr> errors(grid.size());
    timed(report, "solve_minimal batch", [&] {
#pragma omp parallel for schedule(dynamic) if (opt.parallel)
        for (long i = 0; i < n; ++i) {
            try {
                ProblemSpec s = base;
                s.lambda = grid[static_cast<std::size_t>(i)];
                reps[static_cast<std::size_t>(i)] = solve_minimal(s, cfg.controls);
            } catch (...) {
                errors[static_cast<std::size_t>(i)] = std::current_exception();
            }
        }
        for (const auto& e : errors) {
            if (e) std::rethrow_exception(e);
        }
    });

    Json rows = Json::array();
    std::ostringstream csv;
    csv << "# format_version=" << kCsvFormatVersion << "\n";
    csv << "lambda,outcome,iterations,sup_u,h2_seminorm,residual\n";
    bool monotone = true;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        Json row = iteration_json(reps[i]);
        row["lambda"] = grid[i];
        rows.push_back(row);
        monotone = monotone && reps[i].monotone;
        csv << format_real(grid[i]) << ',' << to_string(reps[i].outcome) << ',' << reps[i].iterations << ','
            << format_real(reps[i].sup_norms.empty() ? 0.0 : reps[i].sup_norms.back()) << ','
            << format_real(reps[i].h2_seminorms.empty() ? 0.0 : reps[i].h2_seminorms.back()) << ','
            << format_real(reps[i].residual) << "\n";
    }
    report.body()["sweep"] = rows;

    std::vector<std::size_t> order(grid.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return grid[a] < grid[b]; });
    bool down = true;
    std::string down_detail;
    double min_diverged = INFINITY;
    for (std::size_t k : order) {
        if (reps[k].outcome == Outcome::Diverged) min_diverged = std::min(min_diverged, grid[k]);
        if (reps[k].converged() && grid[k] > min_diverged) {
            down = false;
            down_detail = "lambda " + format_real(grid[k]) + " converged above diverged " + format_real(min_diverged);
        }
    }
    bool ordered = true;
    std::string order_detail;
    const IterationReport* prev = nullptr;
    double prev_lambda = 0.0;
    for (std::size_t k : order) {
        if (!reps[k].converged()) continue;
        if (prev) {
            const double slack = 1e-10 * reps[k].u.max_abs();
            for (std::size_t i = 0; i < reps[k].u.size(); ++i) {
                if (prev->u[i] > reps[k].u[i] + slack) {
                    ordered = false;
                    order_detail = "u at lambda " + format_real(prev_lambda) + " exceeds u at " + format_real(grid[k]);
                    break;
                }
            }
        }
        prev = &reps[k];
        prev_lambda = grid[k];
    }
    report.check("iterates_monotone", monotone);
    report.check("existence_down_monotone", down, down_detail);
    report.check("solutions_ordered_in_lambda", ordered, order_detail);
    if (!opt.table.empty()) write_text(opt.table, csv.str());
}

// ---------------------------------------------------------------- lambda-star

void cmd_lambda_star(Report& report, const ProblemConfig& cfg, const Options& opt) {
    if (!(opt.lambda_lo > 0.0) || !(opt.lambda_hi > opt.lambda_lo)) {
        throw ConfigError("--lambda-lo / --lambda-hi: need 0 < lo < hi");
    }
    if (!(opt.rel_width > 0.0)) throw ConfigError("--rel-width must be > 0");
    if (opt.ladder_steps < 2) throw ConfigError("--ladder-steps must be >= 2");
    const ProblemSpec spec = gated(report, cfg.spec);
    BisectionControls bis;
    bis.rel_width = opt.rel_width;
    const LambdaBracket br = timed(report, "bracket_lambda_star", [&] {
        return bracket_lambda_star(spec, opt.lambda_lo, opt.lambda_hi, bis, cfg.controls);
    });
    Json& b = report.body();
    Json hist = Json::array();
    for (const BracketEntry& e : br.history) {
        hist.push_back({{"lambda", e.lambda}, {"outcome", to_string(e.outcome)}, {"iterations", e.iterations}});
    }
    b["bracket"] = {{"lambda_minus", br.lambda_minus},
                    {"lambda_plus", br.lambda_plus},
                    {"plus_diverged", br.plus_diverged},
                    {"relative_width", br.relative_width()},
                    {"inconclusive_count", br.inconclusive_count()},
                    {"history", hist}};
    report.check("bracket_consistent", br.consistent());
    report.check("bracket_width", br.relative_width() <= opt.rel_width, format_real(br.relative_width()));

    auto fresh = [&](double lambda) {
        ProblemSpec s = spec;
        s.lambda = lambda;
        return solve_minimal(s, cfg.controls);
    };
    const IterationReport lo = timed(report, "soundness solve below", [&] { return fresh(0.9 * br.lambda_minus); });
    const IterationReport hi = timed(report, "soundness solve above", [&] { return fresh(1.1 * br.lambda_plus); });
    b["soundness"] = {{"below", {{"lambda", 0.9 * br.lambda_minus}, {"outcome", to_string(lo.outcome)}}},
                      {"above", {{"lambda", 1.1 * br.lambda_plus}, {"outcome", to_string(hi.outcome)}}}};
    report.check("bracket_sound_below", lo.converged(), to_string(lo.outcome));
    report.check("bracket_sound_above", hi.outcome == Outcome::Diverged, to_string(hi.outcome));

    const LambdaTildeReport lt = timed(report, "lambda_tilde_diagnostic", [&] { return lambda_tilde_diagnostic(spec); });
    Json rows = Json::array();
    for (const TildeRow& r : lt.rows) {
        rows.push_back({{"test", r.test}, {"k", real(r.k)}, {"epsilon", real(r.epsilon)},
                        {"c_epsilon", real(r.c_epsilon)}, {"bound", real(r.bound)}});
    }
    b["lambda_tilde"] = {{"applicable", lt.applicable}, {"note", lt.note}, {"rows", rows},
                         {"lambda_tilde_plus", lt.applicable ? real(lt.lambda_tilde_plus) : Json(nullptr)}};
    if (lt.applicable) {
        report.check("threshold_order", lt.lambda_tilde_plus >= br.lambda_plus,
                     format_real(lt.lambda_tilde_plus) + " vs " + format_real(br.lambda_plus));
    }

    const ExtremalTrace tr = timed(report, "continue_to_extremal", [&] {
        return continue_to_extremal(spec, br, opt.ladder_steps, cfg.controls);
    });
    b["continuation"] = {{"outcome", to_string(tr.outcome)},
                         {"growth_condition", to_string(tr.growth_condition)},
                         {"lambdas", reals(tr.lambdas)},
                         {"seminorms", reals(tr.seminorms)},
                         {"l2_differences", reals(tr.l2_differences)},
                         {"seminorm_spread", real(tr.seminorm_spread())},
                         {"note", tr.note}};
    if (tr.outcome == Outcome::Converged) {
        report.check("seminorm_bounded", tr.seminorm_spread() <= 1e2, format_real(tr.seminorm_spread()));
        if (tr.growth_condition == Verdict::Pass) {
            const std::size_t steps = std::min<std::size_t>(5, tr.l2_differences.size());
            report.check("continuation_cauchy", tr.cauchy_tail(steps));
        }
    }
}

// ---------------------------------------------------------------- stability

void cmd_stability(Report& report, const ProblemConfig& cfg, const Options& opt) {
    if (opt.ladder_count < 1) throw ConfigError("--ladder-count must be >= 1");
    const ProblemSpec spec = gated(report, cfg.spec);
    Json& b = report.body();
    b["lambda"] = spec.lambda;
    const IterationReport r = timed(report, "solve_minimal", [&] { return solve_minimal(spec, cfg.controls); });
    b["solve"] = iteration_json(r);
    report.check("minimal_solution_converged", r.converged(), to_string(r.outcome));
    if (!r.converged()) return;

    const SpectralEstimate est = timed(report, "linearized_first_eigen",
                                       [&] { return linearized_first_eigen(spec, r.u, true); });
    b["linearized"] = spectral_json(est);
    report.check("stable", est.eigenvalue >= -1e-6, format_real(est.eigenvalue));
    const bool positive = est.eigenvector.min() >= -1e-10 * est.eigenvector.max_abs();
    report.check("ground_state_positive", positive);

    if (spec.lambda > 0.0) {
        const std::vector<double> ladder = stability_ladder(spec.lambda, opt.ladder_count, 1.0);
        const StabilitySweep sw = timed(report, "stability_sweep", [&] { return stability_sweep(spec, ladder, cfg.controls); });
        Json rows = Json::array();
        for (const StabilityRow& row : sw.rows) {
            rows.push_back({{"lambda", row.lambda}, {"outcome", to_string(row.solve_outcome)},
                            {"eigenvalue", real(row.eigenvalue)}, {"residual", real(row.residual)}});
        }
        b["sweep"] = {{"rows", rows}, {"unsolved", reals(sw.unsolved)}};
        report.check("sweep_stable", sw.all_stable);
        report.check("sweep_nonincreasing", sw.nonincreasing);
        report.check("sweep_solved", sw.unsolved.empty());
    }

    const MultistartCheck mc = timed(report, "multistart_consistency",
                                     [&] { return multistart_consistency(spec, cfg.controls); });
    Json outcomes = Json::array();
    for (Outcome o : mc.outcomes) outcomes.push_back(to_string(o));
    b["multistart"] = {{"factors", reals(mc.factors)}, {"outcomes", outcomes},
                       {"differences", reals(mc.differences)}, {"consistent", mc.consistent}};
}

// ---------------------------------------------------------------- blowup

void cmd_blowup(Report& report, const ProblemConfig& cfg, const Options& opt) {
    const std::vector<double> levels = parse_real_list(opt.n_ladder, "--n-ladder");
    for (double n : levels) {
        if (!(n > 0.0)) throw ConfigError("--n-ladder: levels must be > 0");
    }
    const ProblemSpec spec = gated(report, cfg.spec);
    const BlowUpTrace tr = timed(report, "blow_up_probe", [&] {
        return blow_up_probe(spec, spec.lambda, levels, cfg.controls, opt.parallel);
    });
    std::vector<double> its(tr.iterations.begin(), tr.iterations.end());
    report.body()["blowup"] = {{"lambda", tr.lambda},
                               {"levels", reals(tr.levels)},
                               {"interior_min", reals(tr.interior_min)},
                               {"sup_norms", reals(tr.sup_norms)},
                               {"iterations", reals(its)},
                               {"monotone_in_n", tr.monotone_in_n},
                               {"distance_to_untruncated", reals(tr.distance_to_untruncated)},
                               {"verdict", to_string(tr.verdict)},
                               {"note", tr.note}};
    report.check("monotone_in_n", tr.monotone_in_n);
}

}  // namespace

// ---------------------------------------------------------------- Report

Report::Report(std::string command, const ProblemConfig& cfg) : command_(std::move(command)), digest_(cfg.digest) {
    config_ = Json::object();
    for (const auto& [k, v] : cfg.entries) config_[k] = v;
}

void Report::check(const std::string& name, bool passed, const std::string& detail) {
    assertions_.push_back({name, passed, detail});
}

void Report::timing(const std::string& phase, double milliseconds) { timings_[phase] = milliseconds; }

bool Report::passed() const {
    return std::all_of(assertions_.begin(), assertions_.end(), [](const Assertion& a) { return a.passed; });
}

Json Report::stable_document() const {
    Json doc;
    doc["format_version"] = kReportFormatVersion;
    doc["artifact_version"] = kArtifactVersion;
    doc["command"] = command_;
    doc["config"] = config_;
    doc["config_digest"] = digest_;
    doc["body"] = body_;
    Json as = Json::array();
    for (const Assertion& a : assertions_) as.push_back({{"name", a.name}, {"passed", a.passed}, {"detail", a.detail}});
    doc["assertions"] = as;
    doc["status"] = passed() ? "ok" : "assertion_failed";
    return doc;
}

Json Report::document() const {
    Json doc = stable_document();
    doc["footer"] = {{"timings_ms", timings_}, {"threads", kernels::max_threads()}};
    return doc;
}

// ---------------------------------------------------------------- CSV

std::string format_real(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_profile_csv(std::ostream& out, const FieldVector& u, const FieldVector& w, double lambda) {
    require_same_grid(u, w);
    out << "# format_version=" << kCsvFormatVersion << "\n";
    out << "r,u,w,lambda\n";
    const auto r = u.grid()->nodes();
    for (std::size_t i = 0; i < u.size(); ++i) {
        out << format_real(r[i]) << ',' << format_real(u[i]) << ',' << format_real(w[i]) << ',' << format_real(lambda)
            << "\n";
    }
}

std::vector<double> parse_real_list(const std::string& text, const std::string& flag) {
    try {
        std::vector<double> out;
        std::stringstream ss(text);
        std::string item;
        while (std::getline(ss, item, ',')) {
            std::size_t pos = 0;
            const double x = std::stod(item, &pos);
            while (pos < item.size() && std::isspace(static_cast<unsigned char>(item[pos]))) ++pos;
            if (pos != item.size() || !std::isfinite(x)) throw std::invalid_argument(item);
            out.push_back(x);
        }
        if (out.empty()) throw std::invalid_argument("empty");
        return out;
    } catch (const std::exception&) {
        throw ConfigError(flag + ": expected a comma-separated list of finite reals, got '" + text + "'");
    }
}

// ---------------------------------------------------------------- run

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Radial semilinear biharmonic problems: hypotheses, minimal solutions, extremal parameter"};
    app.require_subcommand(1);
    Options opt;
    double lambda_override = 0.0;

    using Handler = void (*)(Report&, const ProblemConfig&, const Options&);
    std::vector<std::pair<CLI::App*, Handler>> commands;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--config", opt.config, "problem file")->required();
        sub->add_option("--report", opt.report, "write the JSON report here instead of stdout");
    };
    std::vector<CLI::Option*> lambda_flags;
    auto with_lambda = [&](CLI::App* sub) {
        lambda_flags.push_back(sub->add_option("--lambda", lambda_override, "override the config lambda"));
    };

    auto* check = app.add_subcommand("check", "hypothesis verdicts, gamma_hat and the mu gate");
    common(check);
    commands.push_back({check, cmd_check});

    auto* rellich = app.add_subcommand("rellich", "Rellich constant refinement study");
    common(rellich);
    rellich->add_option("--meshes", opt.meshes, "comma-separated cell counts");
    commands.push_back({rellich, cmd_rellich});

    auto* zeta = app.add_subcommand("zeta1", "zeta_1 = G(b) by contraction iteration");
    common(zeta);
    zeta->add_option("--profile", opt.profile, "profile CSV path");
    commands.push_back({zeta, cmd_zeta1});

    auto* solve = app.add_subcommand("solve", "minimal solution at lambda with its checks");
    common(solve);
    with_lambda(solve);
    solve->add_option("--profile", opt.profile, "profile CSV path");
    commands.push_back({solve, cmd_solve});

    auto* sweep = app.add_subcommand("sweep", "minimal solutions over a lambda grid");
    common(sweep);
    sweep->add_option("--lambda-grid", opt.lambda_grid, "comma-separated lambdas")->required();
    sweep->add_option("--table", opt.table, "table CSV path");
    sweep->add_flag("--parallel", opt.parallel, "solve the grid points concurrently");
    commands.push_back({sweep, cmd_sweep});

    auto* star = app.add_subcommand("lambda-star", "bracket the extremal parameter");
    common(star);
    star->add_option("--lambda-lo", opt.lambda_lo, "initial lower end");
    star->add_option("--lambda-hi", opt.lambda_hi, "initial upper end");
    star->add_option("--rel-width", opt.rel_width, "target relative bracket width");
    star->add_option("--ladder-steps", opt.ladder_steps, "continuation rungs");
    commands.push_back({star, cmd_lambda_star});

    auto* stab = app.add_subcommand("stability", "linearised first eigenvalue at the minimal solution");
    common(stab);
    with_lambda(stab);
    stab->add_option("--ladder-count", opt.ladder_count, "rungs of the sweep up to lambda");
    commands.push_back({stab, cmd_stability});

    auto* blow = app.add_subcommand("blowup", "truncated problems along an n ladder");
    common(blow);
    with_lambda(blow);
    blow->add_option("--n-ladder", opt.n_ladder, "comma-separated truncation levels");
    blow->add_flag("--parallel", opt.parallel, "solve the levels concurrently");
    commands.push_back({blow, cmd_blowup});

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e, out, err);
        return rc == 0 ? kOk : kConfigError;
    }

    CLI::App* chosen = app.get_subcommands().front();
    Handler handler = nullptr;
    for (const auto& [sub, h] : commands) {
        if (sub == chosen) handler = h;
    }
    for (const CLI::Option* o : lambda_flags) {
        if (o->count() > 0) opt.lambda = lambda_override;
    }

    std::string digest = "none";
    try {
        ProblemConfig cfg = load_config(opt.config);
        digest = cfg.digest;
        if (opt.lambda) {
            if (!(*opt.lambda >= 0.0) || !std::isfinite(*opt.lambda)) throw ConfigError("--lambda must be finite and >= 0");
            cfg.spec.lambda = *opt.lambda;
        }
        Report report(chosen->get_name(), cfg);
        Json args = Json::object();
        if (opt.lambda) args["lambda"] = *opt.lambda;
        for (const auto* o : chosen->get_options()) {
            const std::string name = o->get_name();
            if (name.find("help") != std::string::npos || name == "--config" || name == "--report" || name == "--lambda") continue;
            if (o->count() > 0) args[name.substr(2)] = o->as<std::string>();
        }
        report.body()["arguments"] = args;

        handler(report, cfg, opt);

        const std::string text = report.document().dump(2) + "\n";
        if (opt.report.empty()) {
            out << text;
        } else {
            write_text(opt.report, text);
        }
        if (!report.passed()) {
            for (const Assertion& a : report.assertions()) {
                if (!a.passed) err << "assertion failed: " << a.name << (a.detail.empty() ? "" : ": " + a.detail) << "\n";
            }
            return kAssertionFailed;
        }
        return kOk;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const OperationError& e) {
        err << "error in " << e.operation << ": " << e.what() << " [config " << digest << "]\n";
        return kAssertionFailed;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << " [config " << digest << "]\n";
        return kAssertionFailed;
    }
}

}  // namespace biharm::cli
